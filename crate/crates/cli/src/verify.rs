//! Property suite over seeded random instances.

use std::fs;

use rayon::prelude::*;
use serde::Serialize;

use stallings_core::bounds::{compare, BoundReport, CSV_HEADER};
use stallings_core::core::{core_from_words, BasedCore};
use stallings_core::covering::{
    checker_count, complete_to_finite_cover, escape_witness, extended_spine, index, schreier_basis, Index,
};
use stallings_core::doc::{from_json, to_json, CoreDoc};
use stallings_core::graph;
use stallings_core::pullback::fiber_product;
use stallings_core::sample::{sample_complete, sample_words, RunConfig};
use stallings_core::word::Word;

use crate::commands::{config, CliError, CliResult};
use crate::svg;
use crate::Opts;

/// Deliberate defects for checking that the suite notices them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Mutant {
    /// Leave `n2` out of the rank identity.
    SkipN2,
}

const CHECKS: [&str; 12] = [
    "generators_closed",
    "core_round_trip",
    "rank_identity",
    "interior_at_least_pairs",
    "checkers_rank_minus_one",
    "bound_i1",
    "bound_i2",
    "pullback_symmetry",
    "nielsen_schreier",
    "schreier_refold",
    "completion",
    "escape_witness",
];

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub checked: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub seed: u64,
    pub count: usize,
    pub max_len: usize,
    pub checks: Vec<Check>,
    pub passed: bool,
}

impl Summary {
    pub fn failures(&self) -> usize {
        self.checks.iter().map(|c| c.failed).sum()
    }
}

struct Outcome {
    /// One entry per check: `None` when it does not apply to the instance.
    results: [Option<bool>; CHECKS.len()],
    bound: Option<BoundReport>,
}

fn ranks(a: &BasedCore, b: &BasedCore) -> Option<Vec<usize>> {
    let mut v: Vec<usize> = fiber_product(a, b).ok()?.components.iter().map(|c| c.rank).collect();
    v.sort();
    Some(v)
}

fn instance(k: usize, gens: &[Word], other: &[Word], config: &RunConfig, mutant: Option<Mutant>) -> Outcome {
    let mut results = [None; CHECKS.len()];
    let mut bound = None;
    let rank = config.rank;
    let c = core_from_words(gens, rank).expect("sampled words are in range");
    results[0] = Some(gens.iter().all(|w| c.contains(w)));
    let text = to_json(&CoreDoc::dump(&c));
    let back = from_json::<CoreDoc>(&text).and_then(|d| d.load());
    results[1] = Some(matches!(&back, Ok(b) if *b == c && to_json(&CoreDoc::dump(b)) == text));

    let sub_rank = graph::graph_rank(c.graph()).expect("cores are connected");
    if rank == 2 {
        let es = extended_spine(&c).expect("non-trivial rank-2 core");
        let (h, n1, n2) = (c.vertex_count(), es.pair_count(1), es.pair_count(2));
        let n2_term = if mutant == Some(Mutant::SkipN2) { 0 } else { n2 };
        results[2] = Some(h + 1 == sub_rank + n1 + n2_term);
        results[3] = Some(es.interior_count >= n1 + n2);
        results[4] = Some(checker_count(&es) + 1 == sub_rank);
        let d = core_from_words(other, rank).expect("sampled words are in range");
        if let Ok(report) = compare(&c, &d) {
            results[5] = Some(report.satisfied.paper_i1);
            results[6] = Some(report.satisfied.paper_i2);
            bound = Some(report);
        }
        results[7] = Some(ranks(&c, &d).is_some() && ranks(&c, &d) == ranks(&d, &c));
    }

    let n = 1 + k % 12;
    let local = RunConfig {
        seed: config.seed ^ (k as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15),
        count: 1,
        index: n,
        max_gens: 1,
        ..config.clone()
    };
    if let Ok(complete) = sample_complete(&local) {
        let cover = &complete[0];
        let expected = n * (rank - 1) + 1;
        results[8] = Some(index(cover) == Index::Finite(n) && cover.subgroup_rank() == expected);
        let basis = graph::spanning_tree(cover.graph(), 0)
            .map_err(CliError::from)
            .and_then(|t| Ok(schreier_basis(cover, &t)?));
        results[9] = Some(matches!(basis, Ok(b) if b.len() == expected
            && core_from_words(&b, rank).ok().as_ref() == Some(cover)));
    }

    if let Ok(done) = complete_to_finite_cover(&c, &[]) {
        results[10] = Some(
            done.cover.is_complete() && gens.iter().all(|w| done.cover.contains(w)) && done.extends_schreier_basis(&c),
        );
    } else {
        results[10] = Some(false);
    }
    if !c.is_complete() {
        let w = &sample_words(&local)[0][0];
        if !w.is_empty() {
            results[11] = Some(matches!(escape_witness(&c, w), Ok(g) if !c.contains(&w.conjugate_by(&g))));
        }
    }
    Outcome { results, bound }
}

pub fn run(opts: &Opts, mutant: Option<Mutant>) -> CliResult<Summary> {
    let config = RunConfig {
        count: opts.count.unwrap_or(200),
        ..config(opts)?
    };
    if config.count < 2 {
        return Err(CliError::Usage("verify needs --count of at least 2".into()));
    }
    let specs = sample_words(&config);
    let outcomes: Vec<Outcome> = (0..config.count)
        .into_par_iter()
        .map(|k| instance(k, &specs[k], &specs[(k + 1) % config.count], &config, mutant))
        .collect();

    let checks: Vec<Check> = CHECKS
        .iter()
        .enumerate()
        .map(|(i, &name)| Check {
            name,
            checked: outcomes.iter().filter(|o| o.results[i].is_some()).count(),
            failed: outcomes.iter().filter(|o| o.results[i] == Some(false)).count(),
        })
        .collect();
    let reports: Vec<&BoundReport> = outcomes.iter().filter_map(|o| o.bound.as_ref()).collect();
    if let Some(path) = &opts.csv {
        let mut text = format!("{CSV_HEADER}\n");
        for r in &reports {
            text.push_str(&r.csv_row());
            text.push('\n');
        }
        fs::write(path, text)?;
    }
    if let Some(path) = &opts.svg {
        fs::write(path, svg::scatter(&reports))?;
    }
    let passed = checks.iter().all(|c| c.failed == 0);
    Ok(Summary {
        seed: config.seed,
        count: config.count,
        max_len: config.max_len,
        checks,
        passed,
    })
}
