//! Dart-based graphs: every edge is an arc `{d, inv(d)}` of two darts, each
//! dart has a source vertex, and `target(d) = src(inv(d))`.
//!
//! Vertex and dart identifiers are dense indices. Iteration everywhere follows
//! ascending identifier order, so every derived object (trees, quotients,
//! spines) is reproducible.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, Violation};

pub type VertexId = usize;
pub type DartId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Dart {
    pub inv: DartId,
    pub src: VertexId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    vertex_count: usize,
    darts: Vec<Dart>,
    stars: Vec<Vec<DartId>>,
}

impl Graph {
    /// Builds a graph and checks every structural invariant.
    pub fn new(vertex_count: usize, darts: Vec<Dart>) -> Result<Self> {
        let g = Self::new_unchecked(vertex_count, darts);
        g.validate()?;
        Ok(g)
    }

    /// Builds a graph without validation; see [`Graph::validate`].
    pub fn new_unchecked(vertex_count: usize, darts: Vec<Dart>) -> Self {
        let mut stars = vec![Vec::new(); vertex_count];
        for (d, dart) in darts.iter().enumerate() {
            if let Some(star) = stars.get_mut(dart.src) {
                star.push(d);
            }
        }
        Graph {
            vertex_count,
            darts,
            stars,
        }
    }

    /// Builds a graph from `(source, target)` arc endpoints. Arc `k` becomes
    /// darts `2k` (forward) and `2k + 1` (backward).
    pub fn from_arcs(vertex_count: usize, arcs: &[(VertexId, VertexId)]) -> Result<Self> {
        let mut darts = Vec::with_capacity(2 * arcs.len());
        for (k, &(s, t)) in arcs.iter().enumerate() {
            darts.push(Dart { inv: 2 * k + 1, src: s });
            darts.push(Dart { inv: 2 * k, src: t });
        }
        Self::new(vertex_count, darts)
    }

    /// The single-vertex graph.
    pub fn point() -> Self {
        Self::new_unchecked(1, Vec::new())
    }

    /// Checks the graph axioms, returning the first violation found.
    pub fn validate(&self) -> std::result::Result<(), Violation> {
        if self.vertex_count == 0 {
            return Err(Violation::Empty);
        }
        let n = self.darts.len();
        for (d, dart) in self.darts.iter().enumerate() {
            if dart.inv >= n {
                return Err(Violation::DanglingInvolution { dart: d, inv: dart.inv });
            }
            if dart.inv == d {
                return Err(Violation::FixedPoint { dart: d });
            }
            let back = self.darts[dart.inv].inv;
            if back != d {
                return Err(Violation::NotInvolution { dart: d, back });
            }
            if dart.src >= self.vertex_count {
                return Err(Violation::UnknownSource { dart: d, src: dart.src });
            }
        }
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn dart_count(&self) -> usize {
        self.darts.len()
    }

    pub fn arc_count(&self) -> usize {
        self.darts.len() / 2
    }

    pub fn vertices(&self) -> std::ops::Range<VertexId> {
        0..self.vertex_count
    }

    pub fn darts(&self) -> &[Dart] {
        &self.darts
    }

    pub fn inv(&self, d: DartId) -> DartId {
        self.darts[d].inv
    }

    pub fn src(&self, d: DartId) -> VertexId {
        self.darts[d].src
    }

    pub fn target(&self, d: DartId) -> VertexId {
        self.darts[self.darts[d].inv].src
    }

    /// Outgoing darts of `v`, ascending.
    pub fn star(&self, v: VertexId) -> &[DartId] {
        &self.stars[v]
    }

    /// Representative dart of each arc: the lower identifier of the pair.
    pub fn arcs(&self) -> impl Iterator<Item = DartId> + '_ {
        self.darts
            .iter()
            .enumerate()
            .filter(|(d, dart)| *d < dart.inv)
            .map(|(d, _)| d)
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        v < self.vertex_count
    }
}

/// A vertex set plus a dart set of some parent graph.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Subgraph {
    pub vertices: BTreeSet<VertexId>,
    pub darts: BTreeSet<DartId>,
}

impl Subgraph {
    pub fn whole(g: &Graph) -> Self {
        Subgraph {
            vertices: g.vertices().collect(),
            darts: (0..g.dart_count()).collect(),
        }
    }

    pub fn vertex(v: VertexId) -> Self {
        Subgraph {
            vertices: BTreeSet::from([v]),
            darts: BTreeSet::new(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn arc_count(&self) -> usize {
        self.darts.len() / 2
    }

    /// Closed under the involution, and every dart's source is included.
    pub fn is_valid_in(&self, g: &Graph) -> bool {
        self.vertices.iter().all(|&v| g.contains_vertex(v))
            && self.darts.iter().all(|&d| {
                d < g.dart_count()
                    && self.darts.contains(&g.inv(d))
                    && self.vertices.contains(&g.src(d))
            })
    }

    fn check(&self, g: &Graph) -> Result<()> {
        if !self.is_valid_in(g) {
            return Err(Error::InvalidSubgraph);
        }
        Ok(())
    }

    /// Breadth-first reach from `root` using only darts of the subgraph.
    fn reach(&self, g: &Graph, root: VertexId) -> BTreeSet<VertexId> {
        let mut seen = BTreeSet::from([root]);
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &d in g.star(v) {
                if self.darts.contains(&d) {
                    let t = g.target(d);
                    if seen.insert(t) {
                        queue.push_back(t);
                    }
                }
            }
        }
        seen
    }

    pub fn is_connected(&self, g: &Graph) -> bool {
        match self.vertices.first() {
            None => false,
            Some(&root) => self.reach(g, root).len() == self.vertices.len(),
        }
    }

    pub fn is_tree(&self, g: &Graph) -> bool {
        self.is_valid_in(g)
            && self.is_connected(g)
            && self.arc_count() + 1 == self.vertices.len()
    }
}

/// A walk `start, darts[0], darts[1], ...` with consecutive darts incident.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Path {
    pub start: VertexId,
    pub darts: Vec<DartId>,
}

impl Path {
    pub fn trivial(start: VertexId) -> Self {
        Path {
            start,
            darts: Vec::new(),
        }
    }

    pub fn is_valid_in(&self, g: &Graph) -> bool {
        if !g.contains_vertex(self.start) {
            return false;
        }
        let mut at = self.start;
        for &d in &self.darts {
            if d >= g.dart_count() || g.src(d) != at {
                return false;
            }
            at = g.target(d);
        }
        true
    }

    pub fn end(&self, g: &Graph) -> VertexId {
        self.darts.last().map_or(self.start, |&d| g.target(d))
    }

    pub fn is_closed(&self, g: &Graph) -> bool {
        self.end(g) == self.start
    }

    pub fn is_reduced(&self, g: &Graph) -> bool {
        self.darts.windows(2).all(|w| w[1] != g.inv(w[0]))
    }
}

pub fn validate(g: &Graph) -> std::result::Result<(), Violation> {
    g.validate()
}

/// Maximal connected subgraphs, ordered by their lowest vertex.
pub fn connected_components(g: &Graph) -> Vec<Subgraph> {
    let whole = Subgraph::whole(g);
    let mut assigned = vec![false; g.vertex_count()];
    let mut out = Vec::new();
    for v in g.vertices() {
        if assigned[v] {
            continue;
        }
        let vertices = whole.reach(g, v);
        let mut darts = BTreeSet::new();
        for &w in &vertices {
            assigned[w] = true;
            darts.extend(g.star(w).iter().copied());
        }
        out.push(Subgraph { vertices, darts });
    }
    out
}

/// `#arcs - #vertices + 1` of a finite connected subgraph.
pub fn rank(g: &Graph, component: &Subgraph) -> Result<usize> {
    if component.is_empty() {
        return Err(Error::EmptySubgraph);
    }
    component.check(g)?;
    if !component.is_connected(g) {
        return Err(Error::Disconnected);
    }
    Ok(component.arc_count() + 1 - component.vertices.len())
}

/// Rank of a connected graph.
pub fn graph_rank(g: &Graph) -> Result<usize> {
    rank(g, &Subgraph::whole(g))
}

/// Breadth-first spanning tree from `root`, visiting each star in ascending
/// dart order.
pub fn spanning_tree(g: &Graph, root: VertexId) -> Result<Subgraph> {
    if !g.contains_vertex(root) {
        return Err(Error::UnknownVertex(root));
    }
    let mut tree = Subgraph::vertex(root);
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        for &d in g.star(v) {
            let t = g.target(d);
            if tree.vertices.insert(t) {
                tree.darts.insert(d);
                tree.darts.insert(g.inv(d));
                queue.push_back(t);
            }
        }
    }
    if tree.vertices.len() != g.vertex_count() {
        return Err(Error::Disconnected);
    }
    Ok(tree)
}

/// Image of the quotient map `g -> g / trees`. Collapsed darts have no image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientMap {
    pub vertex: Vec<VertexId>,
    pub dart: Vec<Option<DartId>>,
}

/// Collapses each of a family of disjoint trees to a single vertex.
pub fn quotient_by_trees(g: &Graph, trees: &[Subgraph]) -> Result<(Graph, QuotientMap)> {
    let mut owner: Vec<Option<usize>> = vec![None; g.vertex_count()];
    for (k, t) in trees.iter().enumerate() {
        if !t.is_tree(g) {
            return Err(Error::NotATree);
        }
        for &v in &t.vertices {
            if owner[v].replace(k).is_some() {
                return Err(Error::OverlappingSubgraphs);
            }
        }
    }

    // New vertices are numbered by the lowest old vertex of each class.
    let mut vertex = vec![usize::MAX; g.vertex_count()];
    let mut tree_image = vec![usize::MAX; trees.len()];
    let mut next = 0;
    for v in g.vertices() {
        match owner[v] {
            Some(k) if tree_image[k] != usize::MAX => vertex[v] = tree_image[k],
            Some(k) => {
                tree_image[k] = next;
                vertex[v] = next;
                next += 1;
            }
            None => {
                vertex[v] = next;
                next += 1;
            }
        }
    }

    let collapsed = |d: DartId| trees.iter().any(|t| t.darts.contains(&d));
    let mut dart = vec![None; g.dart_count()];
    let mut kept = 0;
    for (d, image) in dart.iter_mut().enumerate() {
        if !collapsed(d) {
            *image = Some(kept);
            kept += 1;
        }
    }
    let darts = (0..g.dart_count())
        .filter_map(|d| {
            dart[d].map(|_| Dart {
                inv: dart[g.inv(d)].expect("tree darts come in arcs"),
                src: vertex[g.src(d)],
            })
        })
        .collect();
    let quotient = Graph::new(next, darts)?;
    Ok((quotient, QuotientMap { vertex, dart }))
}

/// Darts outside `sub` whose source lies in `sub`.
pub fn coboundary(g: &Graph, sub: &Subgraph) -> BTreeSet<DartId> {
    sub.vertices
        .iter()
        .flat_map(|&v| g.star(v).iter().copied())
        .filter(|d| !sub.darts.contains(d))
        .collect()
}

/// Cancels adjacent `d, inv(d)` pairs until none remain.
pub fn reduce(g: &Graph, p: &Path) -> Path {
    let mut out: Vec<DartId> = Vec::with_capacity(p.darts.len());
    for &d in &p.darts {
        match out.last() {
            Some(&last) if g.inv(last) == d => {
                out.pop();
            }
            _ => out.push(d),
        }
    }
    Path {
        start: p.start,
        darts: out,
    }
}

/// Union of all closed reduced paths at `v`, computed by repeatedly trimming
/// vertices of degree at most one other than `v`. Only the component of `v`
/// is considered.
pub fn spine(g: &Graph, v: VertexId) -> Result<Subgraph> {
    if !g.contains_vertex(v) {
        return Err(Error::UnknownVertex(v));
    }
    let whole = Subgraph::whole(g);
    let alive_vertices = whole.reach(g, v);
    let mut alive = vec![false; g.vertex_count()];
    for &w in &alive_vertices {
        alive[w] = true;
    }
    let mut degree: Vec<usize> = g.vertices().map(|w| g.star(w).len()).collect();
    let mut stack: Vec<VertexId> = alive_vertices
        .iter()
        .copied()
        .filter(|&w| w != v && degree[w] <= 1)
        .collect();
    while let Some(w) = stack.pop() {
        if !alive[w] {
            continue;
        }
        alive[w] = false;
        for &d in g.star(w) {
            let t = g.target(d);
            if alive[t] {
                degree[t] -= 1;
                if t != v && degree[t] <= 1 {
                    stack.push(t);
                }
            }
        }
    }
    let vertices: BTreeSet<_> = g.vertices().filter(|&w| alive[w]).collect();
    let darts = vertices
        .iter()
        .flat_map(|&w| g.star(w).iter().copied())
        .filter(|&d| alive[g.target(d)])
        .collect();
    Ok(Subgraph { vertices, darts })
}

/// Restricts `g` to `sub`, renumbering vertices and darts in ascending order.
/// Returns the induced graph and the old identifiers of its vertices and darts.
pub fn induced(g: &Graph, sub: &Subgraph) -> Result<(Graph, Vec<VertexId>, Vec<DartId>)> {
    sub.check(g)?;
    let vertex_ids: Vec<VertexId> = sub.vertices.iter().copied().collect();
    let dart_ids: Vec<DartId> = sub.darts.iter().copied().collect();
    let vpos = |v: VertexId| vertex_ids.binary_search(&v).expect("valid subgraph");
    let dpos = |d: DartId| dart_ids.binary_search(&d).expect("valid subgraph");
    let darts = dart_ids
        .iter()
        .map(|&d| Dart {
            inv: dpos(g.inv(d)),
            src: vpos(g.src(d)),
        })
        .collect();
    Ok((Graph::new(vertex_ids.len(), darts)?, vertex_ids, dart_ids))
}
