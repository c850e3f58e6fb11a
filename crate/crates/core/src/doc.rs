//! JSON documents for graphs, cores, subgroup specs and reports.

use std::collections::{BTreeMap, BTreeSet};

use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::core::{BasedCore, LabeledGraph};
use crate::covering::{Index, SpineInvariants};
use crate::error::{Error, Result, Violation};
use crate::graph::{Dart, DartId, Graph, Path, Subgraph, VertexId};
use crate::pullback::{intersection_rank_sum, PullbackReport};
use crate::word::{Letter, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DartDoc {
    pub id: usize,
    pub inv: usize,
    pub src: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDoc {
    pub vertices: Vec<usize>,
    pub darts: Vec<DartDoc>,
}

fn dense(ids: impl Iterator<Item = usize>) -> Result<BTreeMap<usize, usize>> {
    let mut seen = BTreeSet::new();
    for id in ids {
        if !seen.insert(id) {
            return Err(Violation::DuplicateId(id).into());
        }
    }
    Ok(seen.into_iter().enumerate().map(|(k, id)| (id, k)).collect())
}

impl GraphDoc {
    pub fn dump(g: &Graph) -> Self {
        GraphDoc {
            vertices: g.vertices().collect(),
            darts: g
                .darts()
                .iter()
                .enumerate()
                .map(|(id, d)| DartDoc { id, inv: d.inv, src: d.src })
                .collect(),
        }
    }

    /// Builds the graph, renumbering vertex and dart identifiers densely in
    /// ascending order. Returns the graph and the dart renumbering.
    pub fn load_with_ids(&self) -> Result<(Graph, BTreeMap<usize, DartId>)> {
        let vmap = dense(self.vertices.iter().copied())?;
        let dmap = dense(self.darts.iter().map(|d| d.id))?;
        let mut darts = vec![Dart { inv: 0, src: 0 }; dmap.len()];
        for d in &self.darts {
            let k = dmap[&d.id];
            let inv = *dmap.get(&d.inv).ok_or(Violation::DanglingInvolution { dart: d.id, inv: d.inv })?;
            let src = *vmap.get(&d.src).ok_or(Violation::UnknownSource { dart: d.id, src: d.src })?;
            darts[k] = Dart { inv, src };
        }
        Ok((Graph::new(vmap.len(), darts)?, dmap))
    }

    pub fn load(&self) -> Result<Graph> {
        Ok(self.load_with_ids()?.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoreDoc {
    pub rank: usize,
    pub basepoint: usize,
    pub vertices: Vec<usize>,
    pub darts: Vec<DartDoc>,
    pub labels: BTreeMap<usize, Letter>,
}

impl CoreDoc {
    pub fn dump(c: &BasedCore) -> Self {
        let g = GraphDoc::dump(c.graph());
        CoreDoc {
            rank: c.rank(),
            basepoint: c.basepoint(),
            vertices: g.vertices,
            darts: g.darts,
            labels: c.labeled().labels().iter().copied().enumerate().collect(),
        }
    }

    /// Validates the document as a folded graph equal to its spine at the
    /// basepoint and returns the canonical core.
    pub fn load(&self) -> Result<BasedCore> {
        let gdoc = GraphDoc {
            vertices: self.vertices.clone(),
            darts: self.darts.clone(),
        };
        let (g, dmap) = gdoc.load_with_ids()?;
        let vmap = dense(self.vertices.iter().copied())?;
        let base = *vmap
            .get(&self.basepoint)
            .ok_or(Error::UnknownVertex(self.basepoint))?;
        let mut labels = vec![0; g.dart_count()];
        for (&id, &k) in &dmap {
            labels[k] = *self
                .labels
                .get(&id)
                .ok_or_else(|| Error::Document(format!("dart {id} has no label")))?;
        }
        if self.labels.len() != dmap.len() {
            return Err(Error::Document("labels name unknown darts".into()));
        }
        let lg = LabeledGraph::new(g, labels, self.rank)?;
        BasedCore::from_labeled(&lg, base)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgroupSpec {
    pub rank: usize,
    pub generators: Vec<Word>,
}

impl SubgroupSpec {
    pub fn core(&self) -> Result<BasedCore> {
        crate::core::core_from_words(&self.generators, self.rank)
    }
}

impl Serialize for Index {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Index::Finite(n) => s.serialize_u64(*n as u64),
            Index::Infinite => s.serialize_str("infinite"),
        }
    }
}

impl<'de> Deserialize<'de> for Index {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Finite(usize),
            Text(String),
        }
        match Repr::deserialize(d)? {
            Repr::Finite(n) => Ok(Index::Finite(n)),
            Repr::Text(t) if t == "infinite" => Ok(Index::Infinite),
            Repr::Text(t) => Err(de::Error::custom(format!("bad index {t:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantsDoc {
    #[serde(flatten)]
    pub invariants: SpineInvariants,
    pub index: Index,
    pub galois: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentDoc {
    pub rank: usize,
    pub simply_connected: bool,
    pub rep: Word,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectDoc {
    pub components: Vec<ComponentDoc>,
    pub sum_rk_minus_1: usize,
}

impl IntersectDoc {
    pub fn from_report(report: &PullbackReport) -> Self {
        IntersectDoc {
            components: report
                .components
                .iter()
                .map(|c| ComponentDoc {
                    rank: c.rank,
                    simply_connected: c.simply_connected,
                    rep: c.rep.clone(),
                })
                .collect(),
            sum_rk_minus_1: intersection_rank_sum(report),
        }
    }
}

/// Input of the excision command: a base graph, the darts of a spanning
/// tree (either dart of an arc suffices), a root and loops as dart lists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExciseDoc {
    pub graph: GraphDoc,
    pub tree: Vec<usize>,
    pub root: usize,
    pub loops: Vec<Vec<usize>>,
}

impl ExciseDoc {
    pub fn load(&self) -> Result<(Graph, Subgraph, VertexId, Vec<Path>)> {
        let (g, dmap) = self.graph.load_with_ids()?;
        let vmap = dense(self.graph.vertices.iter().copied())?;
        let dart = |id: &usize| dmap.get(id).copied().ok_or(Error::InvalidPath);
        let mut tree = Subgraph {
            vertices: g.vertices().collect(),
            darts: BTreeSet::new(),
        };
        for id in &self.tree {
            let d = dart(id).map_err(|_| Error::NotSpanningTree)?;
            tree.darts.insert(d);
            tree.darts.insert(g.inv(d));
        }
        let root = *vmap.get(&self.root).ok_or(Error::UnknownVertex(self.root))?;
        let loops = self
            .loops
            .iter()
            .map(|ids| {
                Ok(Path {
                    start: root,
                    darts: ids.iter().map(dart).collect::<Result<_>>()?,
                })
            })
            .collect::<Result<_>>()?;
        Ok((g, tree, root, loops))
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("documents serialize")
}

pub fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Document(e.to_string()))
}
