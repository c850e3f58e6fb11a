//! Stallings folding on a growable labeled graph.
//!
//! Vertices are merged with a union-find; each representative keeps at most
//! one outgoing entry per letter. Whenever an insertion or merge would give a
//! vertex two outgoing darts with the same label, their targets are queued
//! for identification, so the graph is folded after every public call.

use crate::word::{letter_index, Letter, Word};

#[derive(Debug, Clone)]
pub(crate) struct Folder {
    rank: usize,
    parent: Vec<usize>,
    out: Vec<Vec<Option<usize>>>,
}

impl Folder {
    pub(crate) fn new(rank: usize) -> Self {
        Folder {
            rank,
            parent: Vec::new(),
            out: Vec::new(),
        }
    }

    pub(crate) fn add_vertex(&mut self) -> usize {
        let v = self.parent.len();
        self.parent.push(v);
        self.out.push(vec![None; 2 * self.rank]);
        v
    }

    pub(crate) fn find(&mut self, v: usize) -> usize {
        let mut root = v;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut at = v;
        while self.parent[at] != root {
            let next = self.parent[at];
            self.parent[at] = root;
            at = next;
        }
        root
    }

    /// Adds the arc `u --l--> v` and folds.
    pub(crate) fn add_edge(&mut self, u: usize, l: Letter, v: usize) {
        let mut pending = Vec::new();
        self.link(u, l, v, &mut pending);
        self.drain(pending);
    }

    /// Adds a fresh path reading `w` from `start`; returns its end (folded).
    pub(crate) fn add_path(&mut self, start: usize, w: &Word) -> usize {
        let mut at = start;
        for &l in w.letters() {
            let next = self.add_vertex();
            self.add_edge(at, l, next);
            at = next;
        }
        self.find(at)
    }

    /// Identifies two vertices and folds.
    pub(crate) fn merge(&mut self, a: usize, b: usize) {
        self.drain(vec![(a, b)]);
    }

    fn link(&mut self, u: usize, l: Letter, v: usize, pending: &mut Vec<(usize, usize)>) {
        let (u, v) = (self.find(u), self.find(v));
        let (i, j) = (letter_index(l), letter_index(-l));
        if let Some(w) = self.out[u][i] {
            pending.push((w, v));
        } else if let Some(z) = self.out[v][j] {
            pending.push((z, u));
        } else {
            self.out[u][i] = Some(v);
            self.out[v][j] = Some(u);
        }
    }

    fn drain(&mut self, mut pending: Vec<(usize, usize)>) {
        while let Some((a, b)) = pending.pop() {
            let (a, b) = (self.find(a), self.find(b));
            if a == b {
                continue;
            }
            let (keep, gone) = (a.min(b), a.max(b));
            self.parent[gone] = keep;
            let moved = std::mem::take(&mut self.out[gone]);
            for (i, entry) in moved.into_iter().enumerate() {
                let Some(t) = entry else { continue };
                let t = self.find(t);
                match self.out[keep][i] {
                    Some(existing) => pending.push((existing, t)),
                    None => self.out[keep][i] = Some(t),
                }
            }
        }
    }

    /// Follows `w` from `start`; `None` when some letter has no dart.
    #[cfg(test)]
    pub(crate) fn trace(&mut self, start: usize, w: &Word) -> Option<usize> {
        let mut at = self.find(start);
        for &l in w.letters() {
            let next = self.out[at][letter_index(l)]?;
            at = self.find(next);
        }
        Some(at)
    }

    /// Transition table over representatives: `(table, index of each
    /// representative)`. Row `k` lists targets as row indices.
    pub(crate) fn table(&mut self) -> (Vec<Vec<Option<usize>>>, Vec<Option<usize>>) {
        let n = self.parent.len();
        let mut row = vec![None; n];
        let mut count = 0;
        for (v, slot) in row.iter_mut().enumerate() {
            if self.parent[v] == v {
                *slot = Some(count);
                count += 1;
            }
        }
        let mut table = Vec::with_capacity(count);
        for v in 0..n {
            if self.parent[v] != v {
                continue;
            }
            let entries = self.out[v].clone();
            table.push(
                entries
                    .into_iter()
                    .map(|t| t.map(|t| row[self.find(t)].expect("root")))
                    .collect(),
            );
        }
        let index = (0..n).map(|v| row[self.find(v)]).collect();
        (table, index)
    }
}
