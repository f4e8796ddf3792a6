//! Enumeration of root-subsystem types of E8 by diagram moves.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use super::diagram::DynkinDiagram;
use super::types::{RootSystemType, SimpleType};

/// Types reachable from `t` by one move on one component: delete a node
/// of the finite diagram, or delete a node of the affine extension.
fn one_step(t: &RootSystemType) -> BTreeSet<RootSystemType> {
    let mut out = BTreeSet::new();
    let comps = t.components();
    for (i, &c) in comps.iter().enumerate() {
        let rest = t.delete_component(i);
        let mut diagrams = vec![DynkinDiagram::of_simple(c)];
        diagrams.extend(DynkinDiagram::affine_extension(c));
        for d in diagrams {
            for v in 0..d.node_count() {
                let piece = d
                    .remove_node(v)
                    .classify_finite()
                    .expect("node deletion from an (affine) ADE diagram is finite ADE");
                out.insert(rest.plus(&piece));
            }
        }
    }
    out
}

/// Every nonzero proper root subsystem type of E8, in canonical order.
pub fn subsystem_closure() -> &'static BTreeSet<RootSystemType> {
    static CLOSURE: OnceLock<BTreeSet<RootSystemType>> = OnceLock::new();
    CLOSURE.get_or_init(|| {
        let e8 = RootSystemType::simple(SimpleType::E8);
        let mut seen: BTreeSet<RootSystemType> = BTreeSet::from([e8.clone()]);
        let mut frontier = vec![e8.clone()];
        while let Some(t) = frontier.pop() {
            for next in one_step(&t) {
                if seen.insert(next.clone()) {
                    frontier.push(next);
                }
            }
        }
        seen.remove(&e8);
        seen.remove(&RootSystemType::empty());
        seen
    })
}

/// Closure members of a given rank.
pub fn closure_of_rank(rank: u32) -> Vec<RootSystemType> {
    subsystem_closure().iter().filter(|t| t.rank() == rank).cloned().collect()
}

pub fn in_closure(t: &RootSystemType) -> bool {
    subsystem_closure().contains(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_per_rank() {
        let counts: Vec<usize> = (1..=8).map(|r| closure_of_rank(r).len()).collect();
        assert_eq!(counts, vec![1, 2, 3, 6, 9, 16, 19, 14]);
        assert_eq!(subsystem_closure().len(), 70);
    }

    #[test]
    fn low_ranks() {
        let names = |r| closure_of_rank(r).iter().map(|t| t.exponent_form()).collect::<Vec<_>>();
        assert_eq!(names(1), vec!["A1"]);
        assert_eq!(names(2), vec!["A2", "A1^2"]);
    }

    #[test]
    fn excludes_trivial_and_e8() {
        assert!(!in_closure(&RootSystemType::empty()));
        assert!(!in_closure(&"E8".parse().unwrap()));
        assert!(in_closure(&"E7+A1".parse().unwrap()));
        assert!(in_closure(&"D4+A1^4".parse().unwrap()));
    }
}
