use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

use stallings_core::bounds::{compare, family_pair, CSV_HEADER};
use stallings_core::core::{core_from_words, BasedCore, Trace};
use stallings_core::covering::{
    complete_to_finite_cover, escape_witness, index, is_galois, spine_invariants, Index,
};
use stallings_core::doc::{from_json, to_json, CoreDoc, ExciseDoc, IntersectDoc, InvariantsDoc, SubgroupSpec};
use stallings_core::excision::lattice_excision;
use stallings_core::pullback::{fiber_product, join};
use stallings_core::sample::{sample_complete, sample_words, RunConfig};
use stallings_core::word::{parse_word, parse_words, Word};
use stallings_core::Error;

use crate::{verify, Cli, Command, Opts};

#[derive(Debug)]
pub enum CliError {
    /// Bad input or unmet precondition: exit code 2.
    Usage(String),
    Core(Error),
    /// A check reported failures: exit code 1.
    Failed(String),
    Io(std::io::Error),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Core(_) => 2,
            CliError::Failed(_) | CliError::Io(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Failed(m) => f.write_str(m),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

pub type CliResult<T> = Result<T, CliError>;

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

/// Generator list, or `@FILE` holding a subgroup spec or a core dump.
pub fn subgroup(arg: &str, rank: usize) -> CliResult<BasedCore> {
    if let Some(path) = arg.strip_prefix('@') {
        let text = read(Path::new(path))?;
        if let Ok(spec) = from_json::<SubgroupSpec>(&text) {
            return Ok(spec.core()?);
        }
        return Ok(from_json::<CoreDoc>(&text)?.load()?);
    }
    Ok(core_from_words(&parse_words(arg, rank)?, rank)?)
}

fn word(arg: &str, rank: usize) -> CliResult<Word> {
    Ok(parse_word(arg, rank)?)
}

pub fn emit(opts: &Opts, doc: &impl Serialize) -> CliResult<()> {
    let text = to_json(doc);
    match &opts.out {
        Some(path) => fs::write(path, text + "\n")?,
        None => {
            let mut stdout = std::io::stdout().lock();
            match writeln!(stdout, "{text}") {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => return Err(e.into()),
                _ => {}
            }
        }
    }
    Ok(())
}

fn core_doc(c: &BasedCore) -> CoreDoc {
    CoreDoc::dump(c)
}

pub fn config(opts: &Opts) -> CliResult<RunConfig> {
    let mut config = RunConfig {
        seed: opts.seed()?,
        rank: opts.rank,
        ..RunConfig::default()
    };
    if let Some(n) = opts.count {
        config.count = n;
    }
    if let Some(l) = opts.maxlen {
        config.max_len = l;
    }
    if config.max_len == 0 || config.rank == 0 {
        return Err(CliError::Usage("--maxlen and --rank must be positive".into()));
    }
    Ok(config)
}

fn invariants_doc(c: &BasedCore) -> CliResult<InvariantsDoc> {
    let invariants = spine_invariants(c)?;
    let idx = index(c);
    let galois = match idx {
        Index::Finite(_) => Some(is_galois(c)?.galois),
        Index::Infinite => None,
    };
    Ok(InvariantsDoc {
        invariants,
        index: idx,
        galois,
    })
}

fn trace_doc(t: Trace) -> Value {
    match t {
        Trace::Closed => json!({"kind": "closed"}),
        Trace::NonClosed(v) => json!({"kind": "nonclosed", "end": v}),
        Trace::Escapes(p) => json!({"kind": "escapes", "position": p}),
    }
}

pub fn run(cli: &Cli) -> CliResult<()> {
    let opts = &cli.opts;
    let r = opts.rank;
    match &cli.command {
        Command::Core { gens } => emit(opts, &core_doc(&subgroup(gens, r)?)),
        Command::Invariants { gens } => emit(opts, &invariants_doc(&subgroup(gens, r)?)?),
        Command::Index { gens } => emit(opts, &json!({"index": index(&subgroup(gens, r)?)})),
        Command::Member { gens, word: w } => {
            let c = subgroup(gens, r)?;
            let w = word(w, c.rank())?;
            let t = c.trace(&w);
            emit(
                opts,
                &json!({"word": w, "member": t.is_closed(), "trace": trace_doc(t)}),
            )
        }
        Command::Galois { gens } => {
            let g = is_galois(&subgroup(gens, r)?)?;
            let witness = g.witness.map(|w| json!({"word": w.word, "vertex": w.vertex}));
            emit(opts, &json!({"galois": g.galois, "witness": witness}))
        }
        Command::Intersect { left, right } => {
            let report = fiber_product(&subgroup(left, r)?, &subgroup(right, r)?)?;
            emit(opts, &IntersectDoc::from_report(&report))
        }
        Command::Bound { left, right } => {
            let report = compare(&subgroup(left, r)?, &subgroup(right, r)?)?;
            if let Some(path) = &opts.csv {
                fs::write(path, format!("{CSV_HEADER}\n{}\n", report.csv_row()))?;
            }
            emit(opts, &report)
        }
        Command::Join { left, right } => {
            emit(opts, &core_doc(&join(&subgroup(left, r)?, &subgroup(right, r)?)?))
        }
        Command::Complete { gens, avoid } => {
            let c = subgroup(gens, r)?;
            let avoid = parse_words(avoid, c.rank())?;
            let done = complete_to_finite_cover(&c, &avoid)?;
            emit(
                opts,
                &json!({
                    "index": index(&done.cover),
                    "embedding": done.embedding,
                    "cover": core_doc(&done.cover),
                }),
            )
        }
        Command::Witness { gens, word: w } => {
            let c = subgroup(gens, r)?;
            let w = word(w, c.rank())?;
            let g = escape_witness(&c, &w)?;
            emit(opts, &json!({"g": g, "conjugate": w.conjugate_by(&g)}))
        }
        Command::Family { k } => {
            let (c1, c2) = family_pair(*k)?;
            let report = compare(&c1, &c2)?;
            if let Some(path) = &opts.csv {
                fs::write(path, format!("{CSV_HEADER}\n{}\n", report.csv_row()))?;
            }
            emit(
                opts,
                &json!({
                    "k": k,
                    "invariants": report.inv1,
                    "core": core_doc(&c1),
                    "bound": report,
                }),
            )
        }
        Command::Excise { file } => {
            let doc: ExciseDoc = from_json(&read(file)?)?;
            let (g, tree, root, loops) = doc.load()?;
            let (_, words) = lattice_excision(&g, &tree, root, &loops)?;
            let c = core_from_words(&words, 2)?;
            emit(
                opts,
                &json!({"words": words, "rank": c.subgroup_rank(), "core": core_doc(&c)}),
            )
        }
        Command::Verify { mutant } => {
            let summary = verify::run(opts, *mutant)?;
            emit(opts, &summary)?;
            if summary.passed {
                Ok(())
            } else {
                Err(CliError::Failed(format!("{} check(s) failed", summary.failures())))
            }
        }
        Command::Sample { complete } => {
            let mut config = config(opts)?;
            match complete {
                Some(n) => {
                    config.index = *n;
                    let cores = sample_complete(&config)?;
                    emit(opts, &cores.iter().map(core_doc).collect::<Vec<_>>())
                }
                None => {
                    let specs: Vec<SubgroupSpec> = sample_words(&config)
                        .into_iter()
                        .map(|generators| SubgroupSpec {
                            rank: config.rank,
                            generators,
                        })
                        .collect();
                    emit(opts, &specs)
                }
            }
        }
    }
}
