//! Simply-laced Dynkin diagrams and their ADE / affine-ADE classification.

use std::collections::BTreeSet;

use super::types::{AffineType, Family, RootSystemType, SimpleType};
use super::LatticeError;

/// Shape of one connected component of a diagram.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    Finite(SimpleType),
    Affine(AffineType),
}

/// Undirected simple graph on nodes `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DynkinDiagram {
    adjacency: Vec<BTreeSet<usize>>,
}

impl DynkinDiagram {
    pub fn with_nodes(n: usize) -> Self {
        DynkinDiagram { adjacency: vec![BTreeSet::new(); n] }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, LatticeError> {
        let mut d = Self::with_nodes(n);
        for &(a, b) in edges {
            d.add_edge(a, b)?;
        }
        Ok(d)
    }

    pub fn add_edge(&mut self, a: usize, b: usize) -> Result<(), LatticeError> {
        let n = self.adjacency.len();
        if a == b || a >= n || b >= n {
            return Err(LatticeError::InvalidDiagram(format!("edge ({a}, {b})")));
        }
        if !self.adjacency[a].insert(b) {
            return Err(LatticeError::InvalidDiagram(format!("duplicate edge ({a}, {b})")));
        }
        self.adjacency[b].insert(a);
        Ok(())
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adjacency[v].iter().copied()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(|s| s.len()).sum::<usize>() / 2
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adjacency[a].contains(&b)
    }

    /// Path `0 - 1 - ... - (n-1)`.
    pub fn path(n: usize) -> Self {
        let mut d = Self::with_nodes(n);
        for i in 1..n {
            d.add_edge(i - 1, i).expect("path edge");
        }
        d
    }

    /// Star with a central node 0 and arms of the given lengths.
    pub fn star(arms: &[usize]) -> Self {
        let n = 1 + arms.iter().sum::<usize>();
        let mut d = Self::with_nodes(n);
        let mut next = 1;
        for &len in arms {
            let mut prev = 0;
            for _ in 0..len {
                d.add_edge(prev, next).expect("star edge");
                prev = next;
                next += 1;
            }
        }
        d
    }

    /// Cycle on `n >= 3` nodes.
    pub fn cycle(n: usize) -> Self {
        let mut d = Self::path(n);
        d.add_edge(n - 1, 0).expect("cycle edge");
        d
    }

    /// Standard finite diagram of a simple type.
    pub fn of_simple(t: SimpleType) -> Self {
        let n = t.rank() as usize;
        match t.family() {
            Family::A => Self::path(n),
            Family::D => Self::star(&[1, 1, n - 3]),
            Family::E => Self::star(&[1, 2, n - 4]),
        }
    }

    /// Disjoint union of the diagrams of each component, in canonical order.
    pub fn of_type(t: &RootSystemType) -> Self {
        let mut d = Self::with_nodes(0);
        for c in t.components() {
            d = d.disjoint_union(&Self::of_simple(*c));
        }
        d
    }

    /// Extended (affine) diagram of a simple type. `A1~` has a double edge
    /// and is not representable, so `None` is returned for it.
    pub fn affine_extension(t: SimpleType) -> Option<Self> {
        let n = t.rank() as usize;
        Some(match (t.family(), n) {
            (Family::A, 1) => return None,
            (Family::A, _) => Self::cycle(n + 1),
            (Family::D, 4) => Self::star(&[1, 1, 1, 1]),
            (Family::D, _) => {
                // Path of n-3 nodes with two leaves hanging off each end.
                let spine = n - 3;
                let mut d = Self::path(spine);
                d = d.disjoint_union(&Self::with_nodes(4));
                d.add_edge(0, spine).unwrap();
                d.add_edge(0, spine + 1).unwrap();
                d.add_edge(spine - 1, spine + 2).unwrap();
                d.add_edge(spine - 1, spine + 3).unwrap();
                d
            }
            (Family::E, 6) => Self::star(&[2, 2, 2]),
            (Family::E, 7) => Self::star(&[1, 3, 3]),
            (Family::E, _) => Self::star(&[1, 2, 5]),
        })
    }

    pub fn disjoint_union(&self, other: &Self) -> Self {
        let offset = self.adjacency.len();
        let mut adjacency = self.adjacency.clone();
        adjacency.extend(
            other
                .adjacency
                .iter()
                .map(|s| s.iter().map(|v| v + offset).collect::<BTreeSet<_>>()),
        );
        DynkinDiagram { adjacency }
    }

    /// Induced subdiagram on all nodes except `v`, relabelled in order.
    pub fn remove_node(&self, v: usize) -> Self {
        let relabel = |u: usize| if u > v { u - 1 } else { u };
        let adjacency = self
            .adjacency
            .iter()
            .enumerate()
            .filter(|(u, _)| *u != v)
            .map(|(_, s)| s.iter().filter(|&&w| w != v).map(|&w| relabel(w)).collect())
            .collect();
        DynkinDiagram { adjacency }
    }

    /// Connected components as sorted node lists, ordered by smallest node.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.adjacency.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut comp = vec![start];
            seen[start] = true;
            let mut i = 0;
            while i < comp.len() {
                let v = comp[i];
                for w in self.neighbors(v) {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
                i += 1;
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Classifies each connected component.
    pub fn classify(&self) -> Result<Vec<Shape>, LatticeError> {
        self.components().iter().map(|c| self.classify_component(c)).collect()
    }

    /// Classifies a diagram that must be a union of finite ADE shapes.
    pub fn classify_finite(&self) -> Result<RootSystemType, LatticeError> {
        let mut parts = Vec::new();
        for shape in self.classify()? {
            match shape {
                Shape::Finite(t) => parts.push(t),
                Shape::Affine(a) => {
                    return Err(LatticeError::NotADE(format!("affine component {a}")))
                }
            }
        }
        Ok(RootSystemType::from_components(parts))
    }

    fn classify_component(&self, nodes: &[usize]) -> Result<Shape, LatticeError> {
        let n = nodes.len();
        let edges: usize = nodes.iter().map(|&v| self.degree(v)).sum::<usize>() / 2;
        let not_ade = || LatticeError::NotADE(format!("component with {n} nodes and {edges} edges"));
        let rank = n as u32;

        if edges == n {
            // Unicyclic: only the plain cycle is allowed.
            if nodes.iter().all(|&v| self.degree(v) == 2) {
                return Ok(Shape::Affine(AffineType::new(SimpleType::a(rank - 1))));
            }
            return Err(not_ade());
        }
        if edges + 1 != n {
            return Err(not_ade());
        }

        let branch: Vec<usize> = nodes.iter().copied().filter(|&v| self.degree(v) >= 3).collect();
        match branch.as_slice() {
            [] => Ok(Shape::Finite(SimpleType::a(rank))),
            [c] if self.degree(*c) == 4 => {
                if n == 5 {
                    Ok(Shape::Affine(AffineType::new(SimpleType::d(4))))
                } else {
                    Err(not_ade())
                }
            }
            [c] if self.degree(*c) == 3 => {
                let mut arms: Vec<usize> = self.neighbors(*c).map(|w| self.arm_length(*c, w)).collect();
                arms.sort_unstable();
                match (arms[0], arms[1], arms[2]) {
                    (1, 1, r) => Ok(Shape::Finite(SimpleType::d(r as u32 + 3))),
                    (1, 2, 2) => Ok(Shape::Finite(SimpleType::e(6))),
                    (1, 2, 3) => Ok(Shape::Finite(SimpleType::e(7))),
                    (1, 2, 4) => Ok(Shape::Finite(SimpleType::e(8))),
                    (2, 2, 2) => Ok(Shape::Affine(AffineType::new(SimpleType::e(6)))),
                    (1, 3, 3) => Ok(Shape::Affine(AffineType::new(SimpleType::e(7)))),
                    (1, 2, 5) => Ok(Shape::Affine(AffineType::new(SimpleType::e(8)))),
                    _ => Err(not_ade()),
                }
            }
            [a, b] if self.degree(*a) == 3 && self.degree(*b) == 3 => {
                let leaf_arms = |c: usize| {
                    self.neighbors(c).filter(|&w| self.degree(w) == 1).count()
                };
                if leaf_arms(*a) >= 2 && leaf_arms(*b) >= 2 {
                    Ok(Shape::Affine(AffineType::new(SimpleType::d(rank - 1))))
                } else {
                    Err(not_ade())
                }
            }
            _ => Err(not_ade()),
        }
    }

    /// Length of the arm leaving `center` through `first` (tree assumed).
    fn arm_length(&self, center: usize, first: usize) -> usize {
        let mut prev = center;
        let mut cur = first;
        let mut len = 1;
        loop {
            let next: Vec<usize> = self.neighbors(cur).filter(|&w| w != prev).collect();
            match next.as_slice() {
                [w] => {
                    prev = cur;
                    cur = *w;
                    len += 1;
                }
                _ => return len,
            }
        }
    }

    /// Breadth-first node order inside each component, components in order.
    pub fn bfs_order(&self) -> Vec<usize> {
        let mut order = Vec::with_capacity(self.node_count());
        for comp in self.components() {
            let mut seen = BTreeSet::new();
            let mut queue = std::collections::VecDeque::from([comp[0]]);
            seen.insert(comp[0]);
            while let Some(v) = queue.pop_front() {
                order.push(v);
                for w in self.neighbors(v) {
                    if seen.insert(w) {
                        queue.push_back(w);
                    }
                }
            }
        }
        order
    }
}
