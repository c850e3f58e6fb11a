//! Per-subgroup analysis of a core as the spine of its covering of the
//! bouquet: index, the vertex/pair invariants, extended spines with checker
//! placement, the Galois test, finite completion and escape witnesses.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::core::{BasedCore, LabeledGraph};
use crate::error::{Error, Result};
use crate::graph::{self, Dart, DartId, Graph, Subgraph, VertexId};
use crate::word::{alphabet, letter_index, Letter, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Index {
    Finite(usize),
    Infinite,
}

impl Index {
    pub fn is_finite(self) -> bool {
        matches!(self, Index::Finite(_))
    }
}

/// Finite exactly when the core is the whole cover, in which case the index
/// is its number of vertices.
pub fn index(core: &BasedCore) -> Index {
    if core.is_complete() {
        Index::Finite(core.vertex_count())
    } else {
        Index::Infinite
    }
}

/// `H` (spine vertices), `n1`, `n2` (x_i-pair counts) and the subgroup rank,
/// for a non-trivial subgroup of the rank-2 free group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpineInvariants {
    #[serde(rename = "H")]
    pub h: usize,
    pub n1: usize,
    pub n2: usize,
    pub rank: usize,
}

impl SpineInvariants {
    pub fn n(&self, i: usize) -> usize {
        match i {
            1 => self.n1,
            2 => self.n2,
            _ => panic!("pair label must be 1 or 2, got {i}"),
        }
    }

    /// `rank = H - (n1 + n2) + 1`.
    pub fn rank_identity_holds(&self) -> bool {
        self.h + 1 == self.rank + self.n1 + self.n2
    }
}

fn require_rank2_nontrivial(core: &BasedCore) -> Result<()> {
    if core.rank() != 2 {
        return Err(Error::UnsupportedRank {
            expected: 2,
            found: core.rank(),
        });
    }
    if core.is_trivial() {
        return Err(Error::TrivialSubgroup);
    }
    Ok(())
}

fn arcs_with_label(core: &BasedCore, x: Letter) -> usize {
    core.table().iter().filter(|row| row[letter_index(x)].is_some()).count()
}

/// Label-`i` arcs form disjoint cycles and paths on the core vertices; each
/// path (possibly a single vertex) carries exactly one x_i-pair, so
/// `n_i = H - #(label-i arcs)`.
pub fn spine_invariants(core: &BasedCore) -> Result<SpineInvariants> {
    require_rank2_nontrivial(core)?;
    let h = core.vertex_count();
    let inv = SpineInvariants {
        h,
        n1: h - arcs_with_label(core, 1),
        n2: h - arcs_with_label(core, 2),
        rank: core.subgroup_rank(),
    };
    assert!(inv.rank_identity_holds(), "rank identity broken: {inv:?}");
    Ok(inv)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VertexKind {
    Interior,
    Boundary,
}

/// Two tips joined by a maximal path of label-`i` darts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XPair {
    pub label: Letter,
    /// `(v1, v2)`: `v1` is the tip whose dart into the core reads `x_i`.
    pub tips: (VertexId, VertexId),
    /// Darts of the path from `v1` to `v2`.
    pub path: Vec<DartId>,
}

/// The core plus one tip arc for every missing direction at every vertex.
/// Core vertices keep their identifiers; tips follow.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtendedSpine {
    pub graph: LabeledGraph,
    pub kinds: Vec<VertexKind>,
    pub pairs: Vec<XPair>,
    pub black: BTreeSet<VertexId>,
    pub interior_count: usize,
}

impl ExtendedSpine {
    pub fn pair_count(&self, label: Letter) -> usize {
        self.pairs.iter().filter(|p| p.label == label).count()
    }

    /// Darts leaving `v` in the ambient cover but not in the extended spine.
    pub fn ambient_coboundary(&self, v: VertexId) -> usize {
        2 * self.graph.rank() - self.graph.graph().star(v).len()
    }

    /// The interior part (the original core) as a subgraph.
    pub fn interior(&self) -> Subgraph {
        let g = self.graph.graph();
        let vertices: BTreeSet<_> = (0..self.interior_count).collect();
        let darts = (0..g.dart_count())
            .filter(|&d| g.src(d) < self.interior_count && g.target(d) < self.interior_count)
            .collect();
        Subgraph { vertices, darts }
    }

    /// Checks the structural invariants; returns a description of the first
    /// failure.
    pub fn check(&self) -> std::result::Result<(), String> {
        let g = self.graph.graph();
        for v in g.vertices() {
            let c = self.ambient_coboundary(v);
            let expect = match self.kinds[v] {
                VertexKind::Interior => 0,
                VertexKind::Boundary => 3,
            };
            if c != expect {
                return Err(format!("vertex {v}: {c} coboundary darts, expected {expect}"));
            }
        }
        let mut owner = vec![0usize; g.vertex_count()];
        for p in &self.pairs {
            owner[p.tips.0] += 1;
            owner[p.tips.1] += 1;
            if p.path.first().map(|&d| g.src(d)) != Some(p.tips.0)
                || p.path.last().map(|&d| g.target(d)) != Some(p.tips.1)
            {
                return Err(format!("pair {:?} path does not join its tips", p.tips));
            }
            if p.path.iter().any(|&d| self.graph.label(d) != p.label) {
                return Err(format!("pair {:?} path leaves label {}", p.tips, p.label));
            }
        }
        for v in g.vertices() {
            let want = usize::from(self.kinds[v] == VertexKind::Boundary);
            if owner[v] != want {
                return Err(format!("vertex {v} lies in {} pairs", owner[v]));
            }
        }
        for label in [1, 2] {
            let mut used = BTreeSet::new();
            for p in self.pairs.iter().filter(|p| p.label == label) {
                for &d in &p.path {
                    if !used.insert(g.src(d)) {
                        return Err(format!("label-{label} pair paths share vertex {}", g.src(d)));
                    }
                }
            }
        }
        if self.black.iter().any(|&v| self.kinds[v] != VertexKind::Interior) {
            return Err("checker on a boundary vertex".into());
        }
        Ok(())
    }
}

pub fn extended_spine(core: &BasedCore) -> Result<ExtendedSpine> {
    require_rank2_nontrivial(core)?;
    let h = core.vertex_count();
    let base = core.graph();
    let mut darts: Vec<Dart> = base.darts().to_vec();
    let mut labels: Vec<Letter> = core.labeled().labels().to_vec();
    let mut tip_dart = vec![vec![None; 4]; h];
    let mut vertex_count = h;
    for (v, tips) in tip_dart.iter_mut().enumerate() {
        for l in core.missing(v).collect::<Vec<_>>() {
            let d = darts.len();
            darts.push(Dart { inv: d + 1, src: v });
            darts.push(Dart { inv: d, src: vertex_count });
            labels.push(l);
            labels.push(-l);
            tips[letter_index(l)] = Some(d);
            vertex_count += 1;
        }
    }
    let g = Graph::new(vertex_count, darts)?;
    let graph = LabeledGraph::new(g, labels, 2)?;
    let gr = graph.graph();

    let mut pairs = Vec::new();
    for x in [1, 2] {
        for start in 0..h {
            if core.next(start, -x).is_some() {
                continue;
            }
            let into = tip_dart[start][letter_index(-x)].expect("missing direction has a tip");
            let mut path = vec![gr.inv(into)];
            let mut at = start;
            while let Some(next) = core.next(at, x) {
                path.push(core.out_dart(at, x).expect("dart"));
                at = next;
            }
            let out = tip_dart[at][letter_index(x)].expect("missing direction has a tip");
            path.push(out);
            pairs.push(XPair {
                label: x,
                tips: (gr.target(into), gr.target(out)),
                path,
            });
        }
    }

    // Checkers: one per interior vertex; each x1-pair frees the vertex next
    // to v1, each x2-pair the lowest vertex still holding one.
    let mut black: BTreeSet<VertexId> = (0..h).collect();
    for p in pairs.iter().filter(|p| p.label == 1) {
        black.remove(&gr.target(p.path[0]));
    }
    for _ in pairs.iter().filter(|p| p.label == 2) {
        black.pop_first();
    }

    let kinds = (0..vertex_count)
        .map(|v| if v < h { VertexKind::Interior } else { VertexKind::Boundary })
        .collect();
    Ok(ExtendedSpine {
        graph,
        kinds,
        pairs,
        black,
        interior_count: h,
    })
}

pub fn checker_count(es: &ExtendedSpine) -> usize {
    es.black.len()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaloisWitness {
    /// Closed at the basepoint.
    pub word: Word,
    /// A vertex where `word` does not close.
    pub vertex: VertexId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Galois {
    pub galois: bool,
    pub witness: Option<GaloisWitness>,
}

/// Label-preserving automorphism sending the basepoint to `p`, if any.
pub fn automorphism_to(core: &BasedCore, p: VertexId) -> Option<Vec<VertexId>> {
    let n = core.vertex_count();
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    map[0] = p;
    used[p] = true;
    let mut queue = VecDeque::from([0]);
    while let Some(v) = queue.pop_front() {
        for l in alphabet(core.rank()) {
            match (core.next(v, l), core.next(map[v], l)) {
                (None, None) => {}
                (Some(t), Some(image)) => {
                    if map[t] == usize::MAX {
                        if std::mem::replace(&mut used[image], true) {
                            return None;
                        }
                        map[t] = image;
                        queue.push_back(t);
                    } else if map[t] != image {
                        return None;
                    }
                }
                _ => return None,
            }
        }
    }
    Some(map)
}

/// Galois test for a finite cover: the automorphism group acts transitively
/// on the vertices. A negative answer carries a word closed at the basepoint
/// that lifts to a non-closed path at some other vertex.
pub fn is_galois(core: &BasedCore) -> Result<Galois> {
    if !core.is_complete() {
        return Err(Error::InfiniteIndex);
    }
    let gens = core.generators();
    for p in 1..core.vertex_count() {
        if automorphism_to(core, p).is_some() {
            continue;
        }
        let word = gens
            .iter()
            .find(|w| core.trace_from(p, w) != Ok(p))
            .cloned()
            .expect("a generator fails to close where no automorphism exists");
        return Ok(Galois {
            galois: false,
            witness: Some(GaloisWitness { word, vertex: p }),
        });
    }
    Ok(Galois {
        galois: true,
        witness: None,
    })
}

/// Tree-path words for an arbitrary spanning tree of a core.
fn tree_words(core: &BasedCore, tree: &Subgraph) -> Result<Vec<Word>> {
    let g = core.graph();
    if !tree.is_tree(g) || tree.vertices.len() != core.vertex_count() {
        return Err(Error::NotSpanningTree);
    }
    let mut words: Vec<Option<Word>> = vec![None; core.vertex_count()];
    words[0] = Some(Word::identity());
    let mut queue = VecDeque::from([0]);
    while let Some(v) = queue.pop_front() {
        for &d in g.star(v) {
            let t = g.target(d);
            if tree.darts.contains(&d) && words[t].is_none() {
                let w = words[v].as_ref().expect("visited").concat(&Word::letter(core.labeled().label(d)));
                words[t] = Some(w);
                queue.push_back(t);
            }
        }
    }
    Ok(words.into_iter().map(|w| w.expect("spanning")).collect())
}

/// One word per arc outside `tree`: tree path in, the arc, tree path back.
/// Defined for any core; [`schreier_basis`] is the finite-index form.
pub fn tree_basis(core: &BasedCore, tree: &Subgraph) -> Result<Vec<Word>> {
    let words = tree_words(core, tree)?;
    let g = core.graph();
    Ok(g.arcs()
        .filter(|d| !tree.darts.contains(d))
        .map(|d| {
            words[g.src(d)]
                .concat(&Word::letter(core.labeled().label(d)))
                .concat(&words[g.target(d)].inverse())
        })
        .collect())
}

pub fn schreier_basis(core: &BasedCore, tree: &Subgraph) -> Result<Vec<Word>> {
    if !core.is_complete() {
        return Err(Error::InfiniteIndex);
    }
    tree_basis(core, tree)
}

/// A finite cover containing a given core, as built by
/// [`complete_to_finite_cover`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Completion {
    pub cover: BasedCore,
    /// Image in `cover` of each vertex of the original core.
    pub embedding: Vec<VertexId>,
    /// Spanning tree of `cover` extending the breadth-first tree of the core.
    pub tree: Subgraph,
}

impl Completion {
    /// The core's tree basis appears among the cover's tree basis, so the
    /// original subgroup is a free factor of the completed one.
    pub fn extends_schreier_basis(&self, core: &BasedCore) -> bool {
        let Ok(core_tree) = graph::spanning_tree(core.graph(), 0) else {
            return false;
        };
        let (Ok(small), Ok(big)) = (tree_basis(core, &core_tree), tree_basis(&self.cover, &self.tree))
        else {
            return false;
        };
        let big: BTreeSet<_> = big.into_iter().collect();
        small.iter().all(|w| big.contains(w))
    }
}

/// Embeds the core, together with the non-closed lifts of every word of `avoid`,
/// in a finite cover: each word's lift is attached as a hanging path where it
/// leaves the core, then every maximal label-`x` path is closed up by a single
/// `x`-arc from its end back to its start. Existing lifts are untouched, so
/// the words of `avoid` stay non-closed.
pub fn complete_to_finite_cover(core: &BasedCore, avoid: &[Word]) -> Result<Completion> {
    for x in avoid {
        if x.is_empty() {
            return Err(Error::TrivialWord);
        }
        if x.max_generator() > core.rank() {
            return Err(Error::InvalidArgument(format!("{x} is outside rank {}", core.rank())));
        }
        if core.contains(x) {
            return Err(Error::AlreadyMember(x.clone()));
        }
    }
    let rank = core.rank();
    let mut table: Vec<Vec<Option<usize>>> = core.table().to_vec();
    let mut hanging: Vec<(usize, Letter)> = Vec::new();
    for x in avoid {
        let mut at = 0;
        for &l in x.letters() {
            at = match table[at][letter_index(l)] {
                Some(t) => t,
                None => {
                    let fresh = table.len();
                    table.push(vec![None; 2 * rank]);
                    table[at][letter_index(l)] = Some(fresh);
                    table[fresh][letter_index(-l)] = Some(at);
                    hanging.push((at, l));
                    fresh
                }
            };
        }
    }
    for x in 1..=rank as Letter {
        for start in 0..table.len() {
            if table[start][letter_index(-x)].is_some() {
                continue;
            }
            let mut end = start;
            while let Some(t) = table[end][letter_index(x)] {
                end = t;
            }
            table[end][letter_index(x)] = Some(start);
            table[start][letter_index(-x)] = Some(end);
        }
    }

    let (cover, order) = BasedCore::from_table_with_order(rank, table, 0);
    let embedding: Vec<VertexId> = (0..core.vertex_count())
        .map(|v| order[v].expect("core vertices survive"))
        .collect();
    let core_tree = graph::spanning_tree(core.graph(), 0)?;
    let cg = cover.graph();
    let mut tree = Subgraph {
        vertices: cover.graph().vertices().collect(),
        darts: BTreeSet::new(),
    };
    let mut add = |src: VertexId, l: Letter| {
        let d = cover.out_dart(src, l).expect("complete");
        tree.darts.insert(d);
        tree.darts.insert(cg.inv(d));
    };
    for &d in &core_tree.darts {
        add(embedding[core.graph().src(d)], core.labeled().label(d));
    }
    for (src, l) in hanging {
        add(order[src].expect("survives"), l);
    }
    debug_assert!(tree.is_tree(cg));
    Ok(Completion {
        cover,
        embedding,
        tree,
    })
}

/// Finds `g` with `g w g^-1` outside the subgroup, verified by tracing.
///
/// Tries `g = 1`, then `g = α l` and `g = α l c` where `α` labels the tree
/// path to a vertex missing direction `l` and `c` is any letter keeping the
/// conjugate reduced; such a conjugate leaves the core at `l` and never comes
/// back.
pub fn escape_witness(core: &BasedCore, w: &Word) -> Result<Word> {
    if core.is_complete() {
        return Err(Error::FiniteIndex);
    }
    if w.is_empty() {
        return Err(Error::TrivialWord);
    }
    let escapes = |g: &Word| !core.contains(&w.conjugate_by(g));
    if escapes(&Word::identity()) {
        return Ok(Word::identity());
    }
    let paths = core.tree_words();
    for (v, alpha) in paths.iter().enumerate() {
        for l in core.missing(v) {
            let base = alpha.concat(&Word::letter(l));
            let tails = std::iter::once(None).chain(alphabet(core.rank()).map(Some));
            for c in tails {
                let g = match c {
                    None => base.clone(),
                    Some(c) => base.concat(&Word::letter(c)),
                };
                if g.len() < base.len() {
                    continue;
                }
                if escapes(&g) {
                    return Ok(g);
                }
            }
        }
    }
    Err(Error::NoWitness)
}
