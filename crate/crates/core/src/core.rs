//! Labeled graphs over a bouquet and based cores: the folded, trimmed graphs
//! that represent finitely generated subgroups of a free group.

use std::collections::VecDeque;

use crate::error::{Error, Result, Violation};
use crate::fold::Folder;
use crate::graph::{self, Dart, DartId, Graph, VertexId};
use crate::word::{alphabet, letter_at, letter_index, Letter, Substitution, Word};

/// A graph together with an immersion-candidate labeling onto the rank-`r`
/// bouquet: `label(inv(d)) = -label(d)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledGraph {
    graph: Graph,
    labels: Vec<Letter>,
    rank: usize,
}

impl LabeledGraph {
    pub fn new(graph: Graph, labels: Vec<Letter>, rank: usize) -> Result<Self> {
        let lg = LabeledGraph {
            graph,
            labels,
            rank,
        };
        lg.validate()?;
        Ok(lg)
    }

    pub fn validate(&self) -> std::result::Result<(), Violation> {
        self.graph.validate()?;
        for (d, &label) in self.labels.iter().enumerate() {
            if label == 0 || label.unsigned_abs() as usize > self.rank {
                return Err(Violation::LabelOutOfRange {
                    dart: d,
                    label,
                    rank: self.rank,
                });
            }
            let partner = self.labels[self.graph.inv(d)];
            if partner != -label {
                return Err(Violation::LabelAsymmetry {
                    dart: d,
                    label,
                    partner,
                });
            }
        }
        if self.labels.len() != self.graph.dart_count() {
            return Err(Violation::DanglingInvolution {
                dart: self.labels.len(),
                inv: self.graph.dart_count(),
            });
        }
        Ok(())
    }

    /// The rank-`r` bouquet: one vertex, arc `k` labeled `x_{k+1}`.
    pub fn bouquet(rank: usize) -> Self {
        let arcs = vec![(0, 0); rank];
        let graph = Graph::from_arcs(1, &arcs).expect("bouquet is valid");
        let labels = (1..=rank as Letter).flat_map(|x| [x, -x]).collect();
        LabeledGraph {
            graph,
            labels,
            rank,
        }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn labels(&self) -> &[Letter] {
        &self.labels
    }

    pub fn label(&self, d: DartId) -> Letter {
        self.labels[d]
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// No vertex has two outgoing darts with the same label.
    pub fn check_folded(&self) -> std::result::Result<(), Violation> {
        for v in self.graph.vertices() {
            let mut seen = vec![false; 2 * self.rank];
            for &d in self.graph.star(v) {
                let i = letter_index(self.labels[d]);
                if std::mem::replace(&mut seen[i], true) {
                    return Err(Violation::NotFolded {
                        vertex: v,
                        label: self.labels[d],
                    });
                }
            }
        }
        Ok(())
    }

    /// Word read along a dart sequence.
    pub fn read(&self, darts: &[DartId]) -> Word {
        Word::new(darts.iter().map(|&d| self.labels[d]))
    }
}

/// Result of following a word from the basepoint of a core.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Trace {
    Closed,
    NonClosed(VertexId),
    /// The letter at this position has no continuing dart.
    Escapes(usize),
}

impl Trace {
    pub fn is_closed(self) -> bool {
        self == Trace::Closed
    }
}

/// A folded, connected labeled graph equal to its own spine at the basepoint.
///
/// Cores are kept in canonical form: vertices are numbered breadth-first from
/// the basepoint (which is vertex 0) taking letters in the order
/// `x1, X1, x2, X2, ...`; arc `k` is the `k`-th positively labeled dart in
/// (source, label) order, with darts `2k` (positive) and `2k + 1`. Equal
/// subgroups therefore have identical cores.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasedCore {
    labeled: LabeledGraph,
    table: Vec<Vec<Option<VertexId>>>,
    out_dart: Vec<Vec<Option<DartId>>>,
}

impl BasedCore {
    pub fn trivial(rank: usize) -> Self {
        Self::from_table(rank, vec![vec![None; 2 * rank]], 0)
    }

    pub fn bouquet(rank: usize) -> Self {
        let row: Vec<_> = (0..2 * rank).map(|_| Some(0)).collect();
        Self::from_table(rank, vec![row], 0)
    }

    /// Builds the core at `base` of a folded transition table: restricts to
    /// the component of `base`, trims to the spine and renumbers canonically.
    pub(crate) fn from_table(rank: usize, table: Vec<Vec<Option<usize>>>, base: usize) -> Self {
        Self::from_table_with_order(rank, table, base).0
    }

    /// As [`BasedCore::from_table`], also returning the new identifier of
    /// every surviving row.
    pub(crate) fn from_table_with_order(
        rank: usize,
        table: Vec<Vec<Option<usize>>>,
        base: usize,
    ) -> (Self, Vec<Option<VertexId>>) {
        let n = table.len();
        let mut alive = vec![false; n];
        let mut queue = VecDeque::from([base]);
        alive[base] = true;
        while let Some(v) = queue.pop_front() {
            for t in table[v].iter().flatten() {
                if !std::mem::replace(&mut alive[*t], true) {
                    queue.push_back(*t);
                }
            }
        }
        let mut degree: Vec<usize> = table.iter().map(|row| row.iter().flatten().count()).collect();
        let mut stack: Vec<usize> = (0..n)
            .filter(|&v| alive[v] && v != base && degree[v] <= 1)
            .collect();
        while let Some(v) = stack.pop() {
            if !std::mem::replace(&mut alive[v], false) {
                continue;
            }
            for t in table[v].iter().flatten() {
                if alive[*t] {
                    degree[*t] -= 1;
                    if *t != base && degree[*t] <= 1 {
                        stack.push(*t);
                    }
                }
            }
        }

        let mut order = vec![usize::MAX; n];
        let mut visit = vec![base];
        order[base] = 0;
        let mut head = 0;
        while head < visit.len() {
            let v = visit[head];
            head += 1;
            for t in table[v].iter().flatten() {
                if alive[*t] && order[*t] == usize::MAX {
                    order[*t] = visit.len();
                    visit.push(*t);
                }
            }
        }

        let canonical: Vec<Vec<Option<VertexId>>> = visit
            .iter()
            .map(|&v| {
                table[v]
                    .iter()
                    .map(|t| t.filter(|&t| alive[t]).map(|t| order[t]))
                    .collect()
            })
            .collect();
        let order = order
            .into_iter()
            .map(|o| (o != usize::MAX).then_some(o))
            .collect();
        (Self::from_canonical_table(rank, canonical), order)
    }

    fn from_canonical_table(rank: usize, table: Vec<Vec<Option<VertexId>>>) -> Self {
        let n = table.len();
        let mut darts = Vec::new();
        let mut labels = Vec::new();
        let mut out_dart = vec![vec![None; 2 * rank]; n];
        for (v, row) in table.iter().enumerate() {
            for x in 1..=rank as Letter {
                if let Some(w) = row[letter_index(x)] {
                    let d = darts.len();
                    darts.push(Dart { inv: d + 1, src: v });
                    darts.push(Dart { inv: d, src: w });
                    labels.push(x);
                    labels.push(-x);
                    out_dart[v][letter_index(x)] = Some(d);
                    out_dart[w][letter_index(-x)] = Some(d + 1);
                }
            }
        }
        let graph = Graph::new_unchecked(n, darts);
        BasedCore {
            labeled: LabeledGraph {
                graph,
                labels,
                rank,
            },
            table,
            out_dart,
        }
    }

    /// Accepts an arbitrary labeled graph that is folded, connected and equal
    /// to its spine at `basepoint`, and brings it to canonical form.
    pub fn from_labeled(lg: &LabeledGraph, basepoint: VertexId) -> Result<Self> {
        lg.validate()?;
        lg.check_folded()?;
        let g = lg.graph();
        if !g.contains_vertex(basepoint) {
            return Err(Error::UnknownVertex(basepoint));
        }
        if graph::connected_components(g).len() != 1 {
            return Err(Violation::Disconnected.into());
        }
        let spine = graph::spine(g, basepoint)?;
        if let Some(v) = g.vertices().find(|v| !spine.vertices.contains(v)) {
            return Err(Violation::NotSpine { vertex: v }.into());
        }
        let mut table = vec![vec![None; 2 * lg.rank()]; g.vertex_count()];
        for d in 0..g.dart_count() {
            table[g.src(d)][letter_index(lg.label(d))] = Some(g.target(d));
        }
        Ok(Self::from_table(lg.rank(), table, basepoint))
    }

    pub(crate) fn folder(&self) -> Folder {
        let mut f = Folder::new(self.rank());
        for _ in 0..self.vertex_count() {
            f.add_vertex();
        }
        for d in self.graph().arcs() {
            let g = self.graph();
            f.add_edge(g.src(d), self.labeled.label(d), g.target(d));
        }
        f
    }

    pub fn labeled(&self) -> &LabeledGraph {
        &self.labeled
    }

    pub fn graph(&self) -> &Graph {
        &self.labeled.graph
    }

    pub fn rank(&self) -> usize {
        self.labeled.rank
    }

    pub fn basepoint(&self) -> VertexId {
        0
    }

    pub fn vertex_count(&self) -> usize {
        self.table.len()
    }

    pub fn arc_count(&self) -> usize {
        self.graph().arc_count()
    }

    /// Rank of the represented subgroup.
    pub fn subgroup_rank(&self) -> usize {
        self.arc_count() + 1 - self.vertex_count()
    }

    pub fn is_trivial(&self) -> bool {
        self.arc_count() == 0
    }

    /// Every vertex carries all `2r` directions (the core is a finite cover).
    pub fn is_complete(&self) -> bool {
        self.table.iter().all(|row| row.iter().all(Option::is_some))
    }

    pub fn next(&self, v: VertexId, l: Letter) -> Option<VertexId> {
        self.table[v][letter_index(l)]
    }

    pub fn out_dart(&self, v: VertexId, l: Letter) -> Option<DartId> {
        self.out_dart[v][letter_index(l)]
    }

    pub fn table(&self) -> &[Vec<Option<VertexId>>] {
        &self.table
    }

    /// Letters with no outgoing dart at `v`, in letter order.
    pub fn missing(&self, v: VertexId) -> impl Iterator<Item = Letter> + '_ {
        (0..2 * self.rank())
            .filter(move |&i| self.table[v][i].is_none())
            .map(letter_at)
    }

    /// Follows `w` from `start`.
    pub fn trace_from(&self, start: VertexId, w: &Word) -> std::result::Result<VertexId, usize> {
        let mut at = start;
        for (k, &l) in w.letters().iter().enumerate() {
            if l.unsigned_abs() as usize > self.rank() {
                return Err(k);
            }
            at = self.next(at, l).ok_or(k)?;
        }
        Ok(at)
    }

    pub fn trace(&self, w: &Word) -> Trace {
        match self.trace_from(0, w) {
            Ok(0) => Trace::Closed,
            Ok(v) => Trace::NonClosed(v),
            Err(k) => Trace::Escapes(k),
        }
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.trace(w).is_closed()
    }

    /// Breadth-first search in letter order: the tree words and the tree.
    fn bfs(&self) -> (Vec<Word>, graph::Subgraph) {
        let mut words: Vec<Option<Word>> = vec![None; self.vertex_count()];
        words[0] = Some(Word::identity());
        let mut tree = graph::Subgraph::vertex(0);
        let mut queue = VecDeque::from([0]);
        while let Some(v) = queue.pop_front() {
            for l in alphabet(self.rank()) {
                if let Some(t) = self.next(v, l) {
                    if words[t].is_none() {
                        let w = words[v].as_ref().expect("visited").concat(&Word::letter(l));
                        words[t] = Some(w);
                        let d = self.out_dart(v, l).expect("dart");
                        tree.vertices.insert(t);
                        tree.darts.insert(d);
                        tree.darts.insert(self.graph().inv(d));
                        queue.push_back(t);
                    }
                }
            }
        }
        let words = words.into_iter().map(|w| w.expect("connected")).collect();
        (words, tree)
    }

    /// Breadth-first tree words: entry `v` labels the canonical tree path
    /// from the basepoint to `v`.
    pub fn tree_words(&self) -> Vec<Word> {
        self.bfs().0
    }

    /// The spanning tree traced by [`BasedCore::tree_words`].
    pub fn bfs_tree(&self) -> graph::Subgraph {
        self.bfs().1
    }

    /// A free basis of the subgroup: one word per arc outside the
    /// breadth-first spanning tree.
    pub fn generators(&self) -> Vec<Word> {
        let (words, tree) = self.bfs();
        let g = self.graph();
        g.arcs()
            .filter(|d| !tree.darts.contains(d))
            .map(|d| {
                words[g.src(d)]
                    .concat(&Word::letter(self.labeled.label(d)))
                    .concat(&words[g.target(d)].inverse())
            })
            .collect()
    }

    /// Core of the conjugate `g A g^-1`: the basepoint moves to the end of
    /// `g^-1`, extending by a hanging path where the word leaves the core.
    pub fn conjugate(&self, g: &Word) -> BasedCore {
        let mut f = self.folder();
        let end = f.add_path(0, &g.inverse());
        let (table, index) = f.table();
        Self::from_table(self.rank(), table, index[end].expect("vertex"))
    }
}

/// Wedge of one petal per generator at a basepoint, folded to a core.
pub fn core_from_words(gens: &[Word], rank: usize) -> Result<BasedCore> {
    if let Some(w) = gens.iter().find(|w| w.max_generator() > rank) {
        let l = *w
            .letters()
            .iter()
            .find(|l| l.unsigned_abs() as usize > rank)
            .expect("exists");
        return Err(Error::LetterOutOfRange {
            letter: crate::word::letter_char(l),
            rank,
        });
    }
    let mut f = Folder::new(rank);
    let u = f.add_vertex();
    for w in gens {
        let end = f.add_path(u, w);
        f.merge(end, u);
    }
    let (table, index) = f.table();
    Ok(BasedCore::from_table(rank, table, index[u].expect("vertex")))
}

/// Whether the images of the `r` generators form a basis of `F_r`, i.e.
/// generate it: their folded core is the bouquet.
pub fn is_basis(s: &Substitution) -> bool {
    let r = s.domain_rank();
    r > 0
        && core_from_words(s.images(), r)
            .map(|c| c == BasedCore::bouquet(r))
            .unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::{parse_word, parse_words};

    fn core(gens: &str) -> BasedCore {
        core_from_words(&parse_words(gens, 2).unwrap(), 2).unwrap()
    }

    #[test]
    fn core_of_ab_is_two_cycle() {
        let c = core("ab");
        assert_eq!((c.vertex_count(), c.arc_count()), (2, 2));
        assert_eq!(c.next(0, 1), Some(1));
        assert_eq!(c.next(1, 2), Some(0));
        assert_eq!(c.labeled().labels(), &[1, -1, 2, -2]);
    }

    #[test]
    fn core_of_b_is_loop() {
        let c = core("b");
        assert_eq!((c.vertex_count(), c.arc_count()), (1, 1));
        assert_eq!(c.next(0, 2), Some(0));
        assert_eq!(c.next(0, 1), None);
    }

    #[test]
    fn core_of_a_and_conjugate_of_a() {
        let c = core("a,baB");
        assert_eq!((c.vertex_count(), c.arc_count()), (2, 3));
        assert_eq!(c.subgroup_rank(), 2);
    }

    #[test]
    fn trivial_generators() {
        let c = core("aA,");
        assert!(c.is_trivial());
        assert_eq!(c, BasedCore::trivial(2));
        assert_eq!(core_from_words(&[], 2).unwrap(), BasedCore::trivial(2));
    }

    #[test]
    fn out_of_range_generators() {
        let w = parse_word("c", 3).unwrap();
        assert_eq!(
            core_from_words(&[w], 2),
            Err(Error::LetterOutOfRange { letter: 'c', rank: 2 })
        );
    }

    #[test]
    fn trace_examples() {
        let c = core("ab");
        assert_eq!(c.trace(&parse_word("ab", 2).unwrap()), Trace::Closed);
        assert!(!c.contains(&parse_word("ba", 2).unwrap()));
        assert_eq!(c.trace(&parse_word("ba", 2).unwrap()), Trace::Escapes(0));
        assert_eq!(c.trace(&parse_word("a", 2).unwrap()), Trace::NonClosed(1));
        assert_eq!(c.trace(&Word::identity()), Trace::Closed);
    }

    #[test]
    fn from_labeled_rejects_non_cores() {
        // two a-darts leaving vertex 0
        let g = Graph::from_arcs(2, &[(0, 1), (0, 1)]).unwrap();
        let lg = LabeledGraph::new(g, vec![1, -1, 1, -1], 2).unwrap();
        assert!(matches!(
            BasedCore::from_labeled(&lg, 0),
            Err(Error::InvalidGraph(Violation::NotFolded { .. }))
        ));
        // pendant vertex
        let g = Graph::from_arcs(2, &[(0, 0), (0, 1)]).unwrap();
        let lg = LabeledGraph::new(g, vec![1, -1, 2, -2], 2).unwrap();
        assert!(matches!(
            BasedCore::from_labeled(&lg, 0),
            Err(Error::InvalidGraph(Violation::NotSpine { vertex: 1 }))
        ));
        let bad = Graph::from_arcs(1, &[(0, 0)]).unwrap();
        assert!(matches!(
            LabeledGraph::new(bad, vec![1, 1], 2),
            Err(Error::InvalidGraph(Violation::LabelAsymmetry { .. }))
        ));
    }

    #[test]
    fn from_labeled_canonicalizes() {
        let c = core("a,baB");
        let relabeled = BasedCore::from_labeled(c.labeled(), 0).unwrap();
        assert_eq!(relabeled, c);
        // same graph seen from the other vertex is the conjugate by b
        let moved = BasedCore::from_labeled(c.labeled(), 1).unwrap();
        assert_eq!(moved, c.conjugate(&parse_word("B", 2).unwrap()));
    }

    #[test]
    fn conjugate_matches_folded_conjugates() {
        let c = core("ab,aaB");
        for g in ["b", "Ab", "aab", "BBa"] {
            let g = parse_word(g, 2).unwrap();
            let gens: Vec<Word> = c.generators().iter().map(|w| w.conjugate_by(&g)).collect();
            assert_eq!(c.conjugate(&g), core_from_words(&gens, 2).unwrap());
        }
    }

    #[test]
    fn generators_refold() {
        let c = core("aBA,bb,abab");
        assert_eq!(core_from_words(&c.generators(), 2).unwrap(), c);
        assert_eq!(c.generators().len(), c.subgroup_rank());
    }

    #[test]
    fn basis_examples() {
        let w = |t: &str| parse_word(t, 2).unwrap();
        assert!(is_basis(&Substitution::new(vec![w("a"), w("b")])));
        assert!(is_basis(&Substitution::new(vec![w("a"), w("Ab")])));
        assert!(!is_basis(&Substitution::new(vec![w("a"), w("a")])));
        assert!(!is_basis(&Substitution::new(vec![w("aa"), w("b")])));
    }
}
