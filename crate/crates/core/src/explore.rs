//! Bounded transition graphs shared by the tile-level and block-level explorers.

use std::collections::{HashMap, HashSet};
use std::hash::Hash;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Edge<L> {
    pub from: usize,
    pub to: usize,
    pub label: L,
}

/// States discovered breadth-first from a root (state 0), with labeled
/// one-step transitions between them.
#[derive(Debug, Clone)]
pub struct Exploration<S, L> {
    states: Vec<S>,
    index: HashMap<S, usize>,
    edges: Vec<Edge<L>>,
    seen_edges: HashSet<(usize, usize, L)>,
    // edge through which each state was first discovered
    parent: Vec<Option<usize>>,
    truncated: bool,
    bound: usize,
}

impl<S, L> Exploration<S, L>
where
    S: Clone + Eq + Hash,
    L: Clone + Eq + Hash,
{
    pub fn new(root: S, bound: usize) -> Self {
        let mut index = HashMap::new();
        index.insert(root.clone(), 0);
        Exploration {
            states: vec![root],
            index,
            edges: Vec::new(),
            seen_edges: HashSet::new(),
            parent: vec![None],
            truncated: false,
            bound,
        }
    }

    /// Records `from -> next`, interning `next`. Returns the target index.
    pub fn add_transition(&mut self, from: usize, next: S, label: L) -> usize {
        let to = match self.index.get(&next) {
            Some(&i) => i,
            None => {
                let i = self.states.len();
                self.index.insert(next.clone(), i);
                self.states.push(next);
                self.parent.push(Some(self.edges.len()));
                i
            }
        };
        if self.seen_edges.insert((from, to, label.clone())) {
            self.edges.push(Edge { from, to, label });
        }
        to
    }

    pub fn mark_truncated(&mut self) {
        self.truncated = true;
    }

    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn state(&self, i: usize) -> &S {
        &self.states[i]
    }

    pub fn states(&self) -> &[S] {
        &self.states
    }

    pub fn edges(&self) -> &[Edge<L>] {
        &self.edges
    }

    pub fn index_of(&self, s: &S) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn contains(&self, s: &S) -> bool {
        self.index.contains_key(s)
    }

    /// Edges of the discovery path from the root to state `i`.
    pub fn path_to(&self, mut i: usize) -> Vec<&Edge<L>> {
        let mut path = Vec::new();
        while let Some(e) = self.parent[i] {
            path.push(&self.edges[e]);
            i = self.edges[e].from;
        }
        path.reverse();
        path
    }

    /// Indices of states with no outgoing edge.
    pub fn sinks(&self) -> Vec<usize> {
        let mut has_out = vec![false; self.states.len()];
        for e in &self.edges {
            if e.from != e.to {
                has_out[e.from] = true;
            }
        }
        (0..self.states.len()).filter(|&i| !has_out[i]).collect()
    }
}
