//! The E8 root system in doubled coordinates and embedding certificates.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::diagram::DynkinDiagram;
use super::gram::{classify_gram, GramMatrix};
use super::types::RootSystemType;
use super::LatticeError;

/// A vector of the E8 lattice in doubled coordinates (`2v` is integral).
pub type Root = [i32; 8];

/// Inner product of two doubled vectors, in undoubled units.
pub fn inner(a: &Root, b: &Root) -> i32 {
    let s: i32 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    debug_assert!(s % 4 == 0 || s % 2 == 0);
    s / 4
}

/// First nonzero coordinate positive.
pub fn is_positive(r: &Root) -> bool {
    r.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0)
}

/// All 240 roots, sorted lexicographically in doubled coordinates.
pub fn e8_roots() -> &'static [Root] {
    static ROOTS: OnceLock<Vec<Root>> = OnceLock::new();
    ROOTS.get_or_init(|| {
        let mut roots = Vec::with_capacity(240);
        for i in 0..8 {
            for j in i + 1..8 {
                for si in [-2, 2] {
                    for sj in [-2, 2] {
                        let mut r = [0; 8];
                        r[i] = si;
                        r[j] = sj;
                        roots.push(r);
                    }
                }
            }
        }
        for mask in 0u32..256 {
            if mask.count_ones() % 2 == 0 {
                let mut r = [1; 8];
                for (k, x) in r.iter_mut().enumerate() {
                    if mask & (1 << k) != 0 {
                        *x = -1;
                    }
                }
                roots.push(r);
            }
        }
        roots.sort();
        roots
    })
}

/// Simple roots of a root system given as a full list of its roots, with
/// respect to a generic linear functional.
pub fn simple_roots_of<V: Clone + PartialEq>(
    roots: &[V],
    functional: impl Fn(&V) -> f64,
    add: impl Fn(&V, &V) -> V,
) -> Vec<V> {
    let positive: Vec<V> = roots.iter().filter(|r| functional(r) > 0.0).cloned().collect();
    positive
        .iter()
        .filter(|r| {
            !positive.iter().any(|a| {
                positive.iter().any(|b| {
                    add(a, b) == **r
                })
            })
        })
        .cloned()
        .collect()
}

/// Explicit simple-root vectors for a root-system type.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootEmbedding {
    #[serde(rename = "type")]
    pub root_type: RootSystemType,
    pub vectors: Vec<Root>,
}

impl RootEmbedding {
    pub fn gram(&self) -> GramMatrix {
        let entries = self
            .vectors
            .iter()
            .map(|a| self.vectors.iter().map(|b| inner(a, b) as i64).collect())
            .collect();
        GramMatrix::positive(entries).expect("inner product is symmetric")
    }

    /// Checks norms, inner products, independence and the decoded type.
    pub fn verify(&self) -> Result<(), LatticeError> {
        for v in &self.vectors {
            if inner(v, v) != 2 {
                return Err(LatticeError::InvalidEmbedding(format!("{v:?} is not a root")));
            }
        }
        let g = self.gram();
        for i in 0..g.dim() {
            for j in 0..g.dim() {
                if i != j && !matches!(g.get(i, j), 0 | -1) {
                    return Err(LatticeError::InvalidEmbedding(format!(
                        "inner product {} at ({i}, {j})",
                        g.get(i, j)
                    )));
                }
            }
        }
        if g.determinant() == 0 {
            return Err(LatticeError::InvalidEmbedding("vectors are dependent".into()));
        }
        let t = classify_gram(&g)?;
        if t != self.root_type {
            return Err(LatticeError::InvalidEmbedding(format!(
                "vectors span {t}, expected {}",
                self.root_type
            )));
        }
        Ok(())
    }
}

/// Backtracking search for simple roots of type `t` inside E8.
pub fn find_embedding(t: &RootSystemType) -> Result<RootEmbedding, LatticeError> {
    if t.rank() > 8 {
        return Err(LatticeError::NotEmbeddable(t.to_string()));
    }
    let diagram = DynkinDiagram::of_type(t);
    let order = diagram.bfs_order();
    let n = order.len();
    // Cartan entries in search order.
    let target: Vec<Vec<i32>> = order
        .iter()
        .map(|&a| {
            order
                .iter()
                .map(|&b| if a == b { 2 } else if diagram.has_edge(a, b) { -1 } else { 0 })
                .collect()
        })
        .collect();

    // Component bookkeeping for symmetry breaking.
    let mut comp_of = vec![0usize; diagram.node_count()];
    for (ci, comp) in diagram.components().iter().enumerate() {
        for &v in comp {
            comp_of[v] = ci;
        }
    }
    let comps = t.components();
    let mut first_of_comp = vec![None; n];
    let mut prev_same: Vec<Option<usize>> = vec![None; n];
    let mut last_first_pos: Vec<Option<usize>> = vec![None; comps.len()];
    for (pos, &v) in order.iter().enumerate() {
        let ci = comp_of[v];
        if pos == 0 || comp_of[order[pos - 1]] != ci {
            first_of_comp[pos] = Some(ci);
            if ci > 0 && comps[ci] == comps[ci - 1] {
                prev_same[pos] = last_first_pos[ci - 1];
            }
            last_first_pos[ci] = Some(pos);
        }
    }

    // Roots needed by the components that start at each component boundary.
    let mut roots_needed = vec![0u32; n];
    for pos in 0..n {
        if first_of_comp[pos].is_some() {
            let ci = comp_of[order[pos]];
            roots_needed[pos] = comps[ci..].iter().map(|c| 2 * c.positive_roots()).sum();
        }
    }

    let roots = e8_roots();
    let table = InnerTable::get();
    let mut ctx = Search {
        target: &target,
        first_of_comp: &first_of_comp,
        prev_same: &prev_same,
        roots_needed: &roots_needed,
        table,
        chosen: Vec::with_capacity(n),
    };
    if ctx.run(RootSet::full()) {
        let mut vectors = vec![[0; 8]; n];
        for (pos, &v) in order.iter().enumerate() {
            vectors[v] = roots[ctx.chosen[pos]];
        }
        Ok(RootEmbedding { root_type: t.clone(), vectors })
    } else {
        Err(LatticeError::NotEmbeddable(t.to_string()))
    }
}

/// Subset of the 240 roots as a bitset.
#[derive(Clone, Copy, PartialEq, Eq)]
struct RootSet([u64; 4]);

impl RootSet {
    fn empty() -> Self {
        RootSet([0; 4])
    }

    fn full() -> Self {
        let mut s = Self::empty();
        for k in 0..240 {
            s.insert(k);
        }
        s
    }

    fn insert(&mut self, k: usize) {
        self.0[k / 64] |= 1 << (k % 64);
    }

    fn and(self, o: RootSet) -> RootSet {
        RootSet(std::array::from_fn(|i| self.0[i] & o.0[i]))
    }

    fn len(self) -> u32 {
        self.0.iter().map(|w| w.count_ones()).sum()
    }

    fn iter(self) -> impl Iterator<Item = usize> {
        (0..4).flat_map(move |w| {
            let mut bits = self.0[w];
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let b = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(64 * w + b)
            })
        })
    }
}

/// For each root and each value in {-1, 0}, the roots with that inner
/// product; plus the positive roots.
struct InnerTable {
    with: Vec<[RootSet; 2]>,
    positive: RootSet,
}

impl InnerTable {
    fn get() -> &'static InnerTable {
        static TABLE: OnceLock<InnerTable> = OnceLock::new();
        TABLE.get_or_init(|| {
            let roots = e8_roots();
            let mut with = vec![[RootSet::empty(); 2]; roots.len()];
            let mut positive = RootSet::empty();
            for (i, a) in roots.iter().enumerate() {
                if is_positive(a) {
                    positive.insert(i);
                }
                for (j, b) in roots.iter().enumerate() {
                    match inner(a, b) {
                        -1 => with[i][0].insert(j),
                        0 => with[i][1].insert(j),
                        _ => {}
                    }
                }
            }
            InnerTable { with, positive }
        })
    }
}

struct Search<'a> {
    target: &'a [Vec<i32>],
    first_of_comp: &'a [Option<usize>],
    prev_same: &'a [Option<usize>],
    roots_needed: &'a [u32],
    table: &'a InnerTable,
    chosen: Vec<usize>,
}

impl Search<'_> {
    /// `orth` holds the roots orthogonal to every chosen root.
    fn run(&mut self, orth: RootSet) -> bool {
        let pos = self.chosen.len();
        if pos == self.target.len() {
            return true;
        }
        let mut candidates = RootSet::full();
        for (j, &c) in self.chosen.iter().enumerate() {
            let slot = match self.target[pos][j] {
                -1 => 0,
                _ => 1,
            };
            candidates = candidates.and(self.table.with[c][slot]);
        }
        if self.first_of_comp[pos].is_some() {
            // Remaining components live in the orthogonal complement of the
            // chosen ones and need at least this many roots there.
            if orth.len() < self.roots_needed[pos] {
                return false;
            }
            candidates = candidates.and(self.table.positive);
        }
        let lower = self.prev_same[pos].map(|p| self.chosen[p]);
        let mut iter: Box<dyn Iterator<Item = usize>> = Box::new(candidates.iter());
        if pos == 0 {
            // The Weyl group acts transitively on roots: fix the first one.
            iter = Box::new(candidates.iter().take(1));
        }
        for k in iter {
            if lower.is_some_and(|l| k <= l) {
                continue;
            }
            self.chosen.push(k);
            let next_orth = orth.and(self.table.with[k][1]);
            if self.run(next_orth) {
                return true;
            }
            self.chosen.pop();
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn root_counts_by_shape() {
        let roots = e8_roots();
        assert_eq!(roots.len(), 240);
        let integral = roots.iter().filter(|r| r.iter().all(|x| x % 2 == 0)).count();
        assert_eq!(integral, 112);
        assert_eq!(roots.len() - integral, 128);
        for r in roots {
            assert_eq!(inner(r, r), 2);
            let neg: Root = r.map(|x| -x);
            assert!(roots.contains(&neg));
        }
        assert!(roots.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn generated_lattice_is_even_unimodular() {
        let weights = [1.0, 2.0f64.sqrt(), 3.0f64.sqrt(), 5.0f64.sqrt(), 7.0f64.sqrt(), 11.0f64.sqrt(), 13.0f64.sqrt(), 17.0f64.sqrt()];
        let simple = simple_roots_of(
            e8_roots(),
            |v| v.iter().zip(weights).map(|(&x, w)| x as f64 * w).sum(),
            |a, b| std::array::from_fn(|k| a[k] + b[k]),
        );
        assert_eq!(simple.len(), 8);
        let emb = RootEmbedding {
            root_type: "E8".parse().unwrap(),
            vectors: simple,
        };
        let g = emb.gram();
        assert_eq!(g.determinant(), 1);
        assert!(g.is_even());
        emb.verify().unwrap();
    }

    #[test]
    fn embeds_small_and_exceptional_cases() {
        let a1 = find_embedding(&"A1".parse().unwrap()).unwrap();
        assert_eq!(a1.vectors.len(), 1);
        assert_eq!(a1.gram().entries(), &[vec![2]]);
        for t in ["D4+A1^4", "E8", "A8", "A1^8", "E7+A1"] {
            let e = find_embedding(&t.parse().unwrap()).unwrap();
            e.verify().unwrap();
        }
    }

    #[test]
    fn rejects_non_embeddable() {
        assert!(matches!(
            find_embedding(&"A1^9".parse().unwrap()),
            Err(LatticeError::NotEmbeddable(_))
        ));
        for t in ["A2^3+A1^2", "D6+A2", "A6+A2", "E6+A1^2"] {
            assert!(find_embedding(&t.parse().unwrap()).is_err(), "{t}");
        }
    }
}
