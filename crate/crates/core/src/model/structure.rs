//! Structure functions: the map from component states to the system state.
//!
//! Three encodings are supported. A [`Formula`] nests series/parallel
//! blocks over component leaves, an [`StGraph`] treats components as nodes
//! between an always-working source and sink, and a [`TruthTable`] lists the
//! system state for every component mask. All three are monotone; the first
//! two by construction, the truth table by an explicit check at load.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::model::state::StateVector;

/// Nested series/parallel composition over component indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    Component(usize),
    Series(Vec<Formula>),
    Parallel(Vec<Formula>),
}

impl Formula {
    pub fn series(children: impl IntoIterator<Item = Formula>) -> Self {
        Formula::Series(children.into_iter().collect())
    }

    pub fn parallel(children: impl IntoIterator<Item = Formula>) -> Self {
        Formula::Parallel(children.into_iter().collect())
    }

    /// Series block over plain component leaves.
    pub fn series_of(components: impl IntoIterator<Item = usize>) -> Self {
        Formula::series(components.into_iter().map(Formula::Component))
    }

    /// Parallel block over plain component leaves.
    pub fn parallel_of(components: impl IntoIterator<Item = usize>) -> Self {
        Formula::parallel(components.into_iter().map(Formula::Component))
    }

    pub fn works(&self, mask: u32) -> bool {
        match self {
            Formula::Component(i) => mask >> i & 1 == 1,
            Formula::Series(children) => children.iter().all(|c| c.works(mask)),
            Formula::Parallel(children) => children.iter().any(|c| c.works(mask)),
        }
    }

    fn collect_leaves(&self, out: &mut Vec<usize>) {
        match self {
            Formula::Component(i) => out.push(*i),
            Formula::Series(children) | Formula::Parallel(children) => {
                for c in children {
                    c.collect_leaves(out);
                }
            }
        }
    }

    pub(crate) fn validate(&self, n: usize) -> Result<()> {
        fn no_empty_blocks(f: &Formula) -> Result<()> {
            match f {
                Formula::Component(_) => Ok(()),
                Formula::Series(c) | Formula::Parallel(c) => {
                    if c.is_empty() {
                        return Err(Error::InvalidStructure(
                            "series/parallel block without children".into(),
                        ));
                    }
                    c.iter().try_for_each(no_empty_blocks)
                }
            }
        }
        no_empty_blocks(self)?;
        let mut leaves = Vec::new();
        self.collect_leaves(&mut leaves);
        let mut seen = vec![0usize; n];
        for &leaf in &leaves {
            if leaf >= n {
                return Err(Error::ComponentIndex { index: leaf, n });
            }
            seen[leaf] += 1;
        }
        if let Some(i) = seen.iter().position(|&c| c != 1) {
            return Err(Error::InvalidStructure(format!(
                "component {} is referenced {} times in the formula (expected exactly once)",
                i, seen[i]
            )));
        }
        Ok(())
    }
}

/// Endpoint of an edge in an [`StGraph`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Node {
    Source,
    Sink,
    Component(usize),
}

/// Two-terminal graph whose nodes are components. The system works iff the
/// sink is reachable from the source through working component nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StGraph {
    n: usize,
    directed: bool,
    edges: Vec<(Node, Node)>,
    from_source: Vec<usize>,
    to_sink: Vec<bool>,
    adjacency: Vec<Vec<usize>>,
    source_to_sink: bool,
}

impl StGraph {
    pub fn new(n: usize, edges: Vec<(Node, Node)>, directed: bool) -> Result<Self> {
        let mut from_source = Vec::new();
        let mut to_sink = vec![false; n];
        let mut adjacency = vec![Vec::new(); n];
        let mut source_to_sink = false;
        let mut touched = vec![false; n];

        let check = |node: Node| -> Result<()> {
            match node {
                Node::Component(i) if i >= n => Err(Error::ComponentIndex { index: i, n }),
                _ => Ok(()),
            }
        };

        let mut add = |a: Node, b: Node| match (a, b) {
            (Node::Source, Node::Sink) => source_to_sink = true,
            (Node::Source, Node::Component(j)) => from_source.push(j),
            (Node::Component(i), Node::Sink) => to_sink[i] = true,
            (Node::Component(i), Node::Component(j)) if i != j => adjacency[i].push(j),
            _ => {}
        };

        for &(a, b) in &edges {
            check(a)?;
            check(b)?;
            for node in [a, b] {
                if let Node::Component(i) = node {
                    touched[i] = true;
                }
            }
            add(a, b);
            if !directed {
                add(b, a);
            }
        }
        if let Some(i) = touched.iter().position(|t| !t) {
            return Err(Error::InvalidStructure(format!(
                "component {i} does not appear in any edge of the graph"
            )));
        }
        from_source.sort_unstable();
        from_source.dedup();
        for adj in &mut adjacency {
            adj.sort_unstable();
            adj.dedup();
        }
        Ok(Self {
            n,
            directed,
            edges,
            from_source,
            to_sink,
            adjacency,
            source_to_sink,
        })
    }

    pub fn edges(&self) -> &[(Node, Node)] {
        &self.edges
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn works(&self, mask: u32) -> bool {
        if self.source_to_sink {
            return true;
        }
        let up = |i: usize| mask >> i & 1 == 1;
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::new();
        for &i in &self.from_source {
            if up(i) && !seen[i] {
                seen[i] = true;
                queue.push_back(i);
            }
        }
        while let Some(u) = queue.pop_front() {
            if self.to_sink[u] {
                return true;
            }
            for &v in &self.adjacency[u] {
                if up(v) && !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        false
    }
}

/// Explicit system state for each of the `2^n` component masks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruthTable {
    n: usize,
    works: Vec<bool>,
}

impl TruthTable {
    /// Builds a table and rejects it unless it is monotone.
    pub fn new(n: usize, works: Vec<bool>) -> Result<Self> {
        if works.len() != 1usize << n {
            return Err(Error::InvalidStructure(format!(
                "truth table has {} entries, expected 2^{} = {}",
                works.len(),
                n,
                1usize << n
            )));
        }
        for (mask, &w) in works.iter().enumerate() {
            if !w {
                continue;
            }
            for i in 0..n {
                let up = mask | 1 << i;
                if !works[up] {
                    return Err(Error::InvalidStructure(format!(
                        "truth table is not monotone: state {mask:#b} works but {up:#b} fails"
                    )));
                }
            }
        }
        Ok(Self { n, works })
    }

    /// Parses a string of `0`/`1` characters, character `k` being the system
    /// state for mask `k`.
    pub fn from_bitstring(n: usize, bits: &str) -> Result<Self> {
        let works = bits
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::InvalidStructure(format!(
                    "unexpected character {other:?} in truth table"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, works)
    }

    pub fn to_bitstring(&self) -> String {
        self.works.iter().map(|&w| if w { '1' } else { '0' }).collect()
    }

    pub fn works(&self, mask: u32) -> bool {
        self.works[mask as usize]
    }
}

/// Monotone component-to-system function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StructureFunction {
    Formula(Formula),
    Graph(StGraph),
    TruthTable(TruthTable),
}

impl StructureFunction {
    pub(crate) fn validate(&self, n: usize) -> Result<()> {
        match self {
            StructureFunction::Formula(f) => f.validate(n),
            StructureFunction::Graph(g) if g.n != n => Err(Error::DimensionMismatch {
                expected: n,
                found: g.n,
            }),
            StructureFunction::TruthTable(t) if t.n != n => Err(Error::DimensionMismatch {
                expected: n,
                found: t.n,
            }),
            _ => Ok(()),
        }
    }

    /// System state (true = working) for a component state vector that is
    /// already known to be valid.
    pub fn works(&self, s: StateVector) -> bool {
        match self {
            StructureFunction::Formula(f) => f.works(s.mask()),
            StructureFunction::Graph(g) => g.works(s.mask()),
            StructureFunction::TruthTable(t) => t.works(s.mask()),
        }
    }
}
