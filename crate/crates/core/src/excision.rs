//! Lattice excision: collapsing a spanning tree of a rank-2 base graph turns
//! it into the two-loop bouquet, and closed paths at the root into words.

use crate::core::LabeledGraph;
use crate::error::{Error, Result};
use crate::graph::{self, DartId, Graph, Path, Subgraph, VertexId};
use crate::word::{Letter, Word};

/// Letter of each dart after collapsing `tree`: the `k`-th non-tree arc (by
/// lowest dart identifier) becomes generator `k + 1`, oriented along its lower
/// dart. Tree darts map to `None`.
pub fn excision_letters(base: &Graph, tree: &Subgraph) -> Vec<Option<Letter>> {
    let mut letters = vec![None; base.dart_count()];
    let mut next: Letter = 1;
    for d in base.arcs() {
        if !tree.darts.contains(&d) {
            letters[d] = Some(next);
            letters[base.inv(d)] = Some(-next);
            next += 1;
        }
    }
    letters
}

pub fn lattice_excision(
    base: &Graph,
    tree: &Subgraph,
    root: VertexId,
    loops: &[Path],
) -> Result<(LabeledGraph, Vec<Word>)> {
    base.validate()?;
    let r = graph::graph_rank(base)?;
    if r != 2 {
        return Err(Error::UnsupportedRank { expected: 2, found: r });
    }
    if !tree.is_tree(base) || tree.vertices.len() != base.vertex_count() {
        return Err(Error::NotSpanningTree);
    }
    let letters = excision_letters(base, tree);
    let mut words = Vec::with_capacity(loops.len());
    for p in loops {
        if !p.is_valid_in(base) {
            return Err(Error::InvalidPath);
        }
        if p.start != root || !p.is_closed(base) {
            return Err(Error::PathNotClosed(root));
        }
        words.push(Word::new(p.darts.iter().filter_map(|&d: &DartId| letters[d])));
    }
    Ok((LabeledGraph::bouquet(2), words))
}
