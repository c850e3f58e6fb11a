//! Fiber products of cores over the bouquet.
//!
//! The product of two cores is the part of the pullback of the full covers
//! that carries all of its topology: every non-simply-connected component of
//! the full pullback meets it in exactly one component, of the same rank, and
//! the remaining components there are trees. Components correspond to double
//! cosets `A1 g A2`, and a component through `(p, q)` realizes the
//! intersection `A1 ∩ g A2 g^-1` for `g = α_p β_q^-1`, where `α_p`, `β_q` label
//! paths from the basepoints.

use std::collections::BTreeSet;

use crate::core::{BasedCore, LabeledGraph};
use crate::covering::{spine_invariants, SpineInvariants};
use crate::error::{Error, Result};
use crate::graph::{self, Dart, DartId, Graph, VertexId};
use crate::word::{all_reduced_words, alphabet, letter_index, Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub vertices: BTreeSet<VertexId>,
    pub darts: BTreeSet<DartId>,
    pub rank: usize,
    pub simply_connected: bool,
    /// Lowest product vertex of the component, as a vertex pair.
    pub rep_vertex: (VertexId, VertexId),
    /// `g` with this component realizing `A1 ∩ g A2 g^-1`.
    pub rep: Word,
    /// Core of `A1 ∩ g A2 g^-1`; only for non-simply-connected components.
    pub core: Option<BasedCore>,
    pub invariants: Option<SpineInvariants>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PullbackReport {
    pub product: LabeledGraph,
    /// Product vertex `k` is the pair `pairs[k]`.
    pub pairs: Vec<(VertexId, VertexId)>,
    pub components: Vec<Component>,
    /// Projections of product darts to the factors.
    pub t1: Vec<DartId>,
    pub t2: Vec<DartId>,
}

impl PullbackReport {
    pub fn nontrivial(&self) -> impl Iterator<Item = &Component> {
        self.components.iter().filter(|c| !c.simply_connected)
    }
}

fn same_rank(c1: &BasedCore, c2: &BasedCore) -> Result<()> {
    if c1.rank() != c2.rank() {
        return Err(Error::RankMismatch {
            left: c1.rank(),
            right: c2.rank(),
        });
    }
    Ok(())
}

fn product_table(c1: &BasedCore, c2: &BasedCore) -> Vec<Vec<Option<usize>>> {
    let n2 = c2.vertex_count();
    let mut table = Vec::with_capacity(c1.vertex_count() * n2);
    for p in 0..c1.vertex_count() {
        for q in 0..n2 {
            table.push(
                alphabet(c1.rank())
                    .map(|l| match (c1.next(p, l), c2.next(q, l)) {
                        (Some(s), Some(t)) => Some(s * n2 + t),
                        _ => None,
                    })
                    .collect(),
            );
        }
    }
    table
}

pub fn fiber_product(c1: &BasedCore, c2: &BasedCore) -> Result<PullbackReport> {
    same_rank(c1, c2)?;
    let (g1, g2) = (c1.graph(), c2.graph());
    let (l1, l2) = (c1.labeled(), c2.labeled());
    let n2 = c2.vertex_count();

    // darts of c2 grouped by label, and each dart's position in its group
    let mut by_label: Vec<Vec<DartId>> = vec![Vec::new(); 2 * c1.rank()];
    let mut pos2 = vec![0; g2.dart_count()];
    for d in 0..g2.dart_count() {
        let group = &mut by_label[letter_index(l2.label(d))];
        pos2[d] = group.len();
        group.push(d);
    }
    let mut offset = vec![0; g1.dart_count() + 1];
    for d in 0..g1.dart_count() {
        offset[d + 1] = offset[d] + by_label[letter_index(l1.label(d))].len();
    }

    let total = offset[g1.dart_count()];
    let mut darts = Vec::with_capacity(total);
    let mut labels = Vec::with_capacity(total);
    let (mut t1, mut t2) = (Vec::with_capacity(total), Vec::with_capacity(total));
    for d1 in 0..g1.dart_count() {
        let l = l1.label(d1);
        for &d2 in &by_label[letter_index(l)] {
            let (e1, e2) = (g1.inv(d1), g2.inv(d2));
            darts.push(Dart {
                inv: offset[e1] + pos2[e2],
                src: g1.src(d1) * n2 + g2.src(d2),
            });
            labels.push(l);
            t1.push(d1);
            t2.push(d2);
        }
    }
    let vertex_count = c1.vertex_count() * n2;
    let product = LabeledGraph::new(Graph::new(vertex_count, darts)?, labels, c1.rank())?;
    let pairs: Vec<_> = (0..vertex_count).map(|v| (v / n2, v % n2)).collect();

    let table = product_table(c1, c2);
    let (w1, w2) = (c1.tree_words(), c2.tree_words());
    let components = graph::connected_components(product.graph())
        .into_iter()
        .map(|sub| {
            let low = *sub.vertices.first().expect("non-empty");
            let rank = sub.arc_count() + 1 - sub.vertices.len();
            let (p, q) = pairs[low];
            let rep = w1[p].concat(&w2[q].inverse());
            let (core, invariants) = if rank == 0 {
                (None, None)
            } else {
                let at_low = BasedCore::from_table(c1.rank(), table.clone(), low);
                let core = at_low.conjugate(&w1[p]);
                let invariants = spine_invariants(&core).ok();
                (Some(core), invariants)
            };
            Component {
                vertices: sub.vertices,
                darts: sub.darts,
                rank,
                simply_connected: rank == 0,
                rep_vertex: (p, q),
                rep,
                core,
                invariants,
            }
        })
        .collect();

    Ok(PullbackReport {
        product,
        pairs,
        components,
        t1,
        t2,
    })
}

/// Core of `A1 ∩ A2`: the component of the basepoint pair, trimmed.
pub fn pointed_intersection(c1: &BasedCore, c2: &BasedCore) -> Result<BasedCore> {
    same_rank(c1, c2)?;
    Ok(BasedCore::from_table(c1.rank(), product_table(c1, c2), 0))
}

/// One `(g, component index)` per non-simply-connected component.
pub fn double_coset_reps(report: &PullbackReport) -> Vec<(Word, usize)> {
    report
        .components
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.simply_connected)
        .map(|(k, c)| (c.rep.clone(), k))
        .collect()
}

/// `Σ (rank - 1)` over the non-simply-connected components.
pub fn intersection_rank_sum(report: &PullbackReport) -> usize {
    report.nontrivial().map(|c| c.rank - 1).sum()
}

/// Core of `<A1, A2>`: the wedge of the two cores at their basepoints, folded.
pub fn join(c1: &BasedCore, c2: &BasedCore) -> Result<BasedCore> {
    same_rank(c1, c2)?;
    let mut f = c1.folder();
    let shift = c1.vertex_count();
    for _ in 0..c2.vertex_count() {
        f.add_vertex();
    }
    let g2 = c2.graph();
    for d in g2.arcs() {
        f.add_edge(g2.src(d) + shift, c2.labeled().label(d), g2.target(d) + shift);
    }
    f.merge(0, shift);
    let (table, index) = f.table();
    Ok(BasedCore::from_table(c1.rank(), table, index[0].expect("vertex")))
}

/// Transition table of a core with reduced words hung from its basepoint:
/// each word is followed as far as it reads, then continued by fresh
/// vertices. The result is a finite folded piece of the full cover.
struct Hanging {
    width: usize,
    table: Vec<Vec<Option<usize>>>,
}

impl Hanging {
    fn new(core: &BasedCore) -> Self {
        Hanging {
            width: 2 * core.rank(),
            table: core.table().to_vec(),
        }
    }

    fn hang(&mut self, w: &Word) -> usize {
        let mut at = 0;
        for &l in w.letters() {
            at = match self.table[at][letter_index(l)] {
                Some(t) => t,
                None => {
                    let t = self.table.len();
                    self.table.push(vec![None; self.width]);
                    self.table[at][letter_index(l)] = Some(t);
                    self.table[t][letter_index(-l)] = Some(at);
                    t
                }
            };
        }
        at
    }

    /// Component of `(0, s)` in the product with `c1`: visited flags indexed
    /// `p * rows + q`, vertex count and arc count.
    fn reach(&self, c1: &BasedCore, s: usize) -> (Vec<bool>, usize, usize) {
        let rows = self.table.len();
        let mut seen = vec![false; c1.vertex_count() * rows];
        let (mut vertices, mut arcs) = (1, 0);
        let mut stack = vec![(0, s)];
        seen[s] = true;
        while let Some((p, q)) = stack.pop() {
            for (k, l) in alphabet(c1.rank()).enumerate() {
                let (Some(p2), Some(q2)) = (c1.next(p, l), self.table[q][k]) else {
                    continue;
                };
                if l > 0 {
                    arcs += 1;
                }
                if !std::mem::replace(&mut seen[p2 * rows + q2], true) {
                    vertices += 1;
                    stack.push((p2, q2));
                }
            }
        }
        (seen, vertices, arcs)
    }
}

/// Whether `A1 ∩ g A2 g^-1` is non-trivial: it is the fundamental group of
/// the component of `(u1, u2·g^-1)` in the product of `c1` with the cover of
/// `A2`, and that component lies in the core of `A2` plus the path of `g^-1`.
pub fn conjugate_meets(c1: &BasedCore, c2: &BasedCore, g: &Word) -> Result<bool> {
    same_rank(c1, c2)?;
    let mut delta = Hanging::new(c2);
    let s = delta.hang(&g.inverse());
    let (_, vertices, arcs) = delta.reach(c1, s);
    Ok(arcs >= vertices)
}

/// Decides `h ∈ A1 g A2`.
///
/// `h = a g b` with `a ∈ A1`, `b ∈ A2` exactly when some `a ∈ A1` reads from
/// `s = u2·g^-1` to `t = u2·h^-1` in the cover of `A2`. Reduced paths between
/// `s` and `t` stay inside the core of `A2` with the two hanging paths added,
/// so this is connectivity of `(u1, s)` and `(u1, t)` in a finite product.
#[derive(Debug, Clone)]
pub struct DoubleCoset {
    rep: Word,
    c1: BasedCore,
    c2: BasedCore,
}

impl DoubleCoset {
    pub fn new(c1: &BasedCore, c2: &BasedCore, g: &Word) -> Result<Self> {
        same_rank(c1, c2)?;
        Ok(DoubleCoset {
            rep: g.clone(),
            c1: c1.clone(),
            c2: c2.clone(),
        })
    }

    pub fn rep(&self) -> &Word {
        &self.rep
    }

    pub fn contains(&self, h: &Word) -> bool {
        let mut delta = Hanging::new(&self.c2);
        let s = delta.hang(&self.rep.inverse());
        let t = delta.hang(&h.inverse());
        let (seen, _, _) = delta.reach(&self.c1, s);
        seen[t]
    }
}

/// Exhaustive search over reduced words of length at most `max_len`: keeps
/// the first word of every double coset `A1 g A2` whose intersection
/// `A1 ∩ g A2 g^-1` is non-trivial. Intended as a test oracle.
pub fn brute_force_double_cosets(
    c1: &BasedCore,
    c2: &BasedCore,
    max_len: usize,
) -> Result<Vec<Word>> {
    same_rank(c1, c2)?;
    let mut classes: Vec<DoubleCoset> = Vec::new();
    for g in all_reduced_words(c1.rank(), max_len) {
        if !conjugate_meets(c1, c2, &g)? || classes.iter().any(|class| class.contains(&g)) {
            continue;
        }
        classes.push(DoubleCoset::new(c1, c2, &g)?);
    }
    Ok(classes.into_iter().map(|c| c.rep).collect())
}

/// Label sequence of a product path, for reading words off components.
pub fn read_product_path(report: &PullbackReport, darts: &[DartId]) -> Word {
    Word::new(darts.iter().map(|&d| -> Letter { report.product.label(d) }))
}
