//! Integer Gram matrices and their decoding into root-system types.

use serde::{Deserialize, Serialize};

use super::diagram::DynkinDiagram;
use super::types::RootSystemType;
use super::LatticeError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    /// Roots have self-intersection +2.
    Positive,
    /// Roots have self-intersection -2 (the geometric convention).
    Negative,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GramMatrix {
    entries: Vec<Vec<i64>>,
    convention: Convention,
}

impl GramMatrix {
    pub fn new(entries: Vec<Vec<i64>>, convention: Convention) -> Result<Self, LatticeError> {
        let n = entries.len();
        if entries.iter().any(|row| row.len() != n) {
            return Err(LatticeError::InvalidGram("matrix is not square".into()));
        }
        for i in 0..n {
            for j in 0..i {
                if entries[i][j] != entries[j][i] {
                    return Err(LatticeError::InvalidGram(format!("asymmetric at ({i}, {j})")));
                }
            }
        }
        Ok(GramMatrix { entries, convention })
    }

    pub fn positive(entries: Vec<Vec<i64>>) -> Result<Self, LatticeError> {
        Self::new(entries, Convention::Positive)
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Vec<i64>] {
        &self.entries
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i][j]
    }

    /// Entries in the positive convention.
    pub fn to_positive(&self) -> Vec<Vec<i64>> {
        match self.convention {
            Convention::Positive => self.entries.clone(),
            Convention::Negative => self
                .entries
                .iter()
                .map(|r| r.iter().map(|x| -x).collect())
                .collect(),
        }
    }

    pub fn determinant(&self) -> i128 {
        determinant(&self.entries)
    }

    /// All diagonal entries even.
    pub fn is_even(&self) -> bool {
        (0..self.dim()).all(|i| self.entries[i][i] % 2 == 0)
    }

    /// Cartan matrix of a root-system type, in canonical component order.
    pub fn cartan(t: &RootSystemType) -> Self {
        let d = DynkinDiagram::of_type(t);
        let n = d.node_count();
        let mut entries = vec![vec![0i64; n]; n];
        for (i, row) in entries.iter_mut().enumerate() {
            row[i] = 2;
            for j in d.neighbors(i) {
                row[j] = -1;
            }
        }
        GramMatrix { entries, convention: Convention::Positive }
    }
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn determinant(m: &[Vec<i64>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

/// Decodes a Gram matrix of simple roots into its ADE type.
pub fn classify_gram(g: &GramMatrix) -> Result<RootSystemType, LatticeError> {
    let p = g.to_positive();
    let n = p.len();
    let mut d = DynkinDiagram::with_nodes(n);
    for i in 0..n {
        if p[i][i] != 2 {
            return Err(LatticeError::NotSimplyLaced(format!(
                "diagonal entry {} at {i}",
                g.get(i, i)
            )));
        }
        for j in i + 1..n {
            match p[i][j] {
                0 => {}
                -1 | 1 => d.add_edge(i, j)?,
                other => {
                    return Err(LatticeError::NotSimplyLaced(format!(
                        "off-diagonal entry {other} at ({i}, {j})"
                    )))
                }
            }
        }
    }
    d.classify_finite()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_examples() {
        let g = GramMatrix::positive(vec![vec![2]]).unwrap();
        assert_eq!(classify_gram(&g).unwrap().to_string(), "A1");
        let g = GramMatrix::positive(vec![vec![2, -1], vec![-1, 2]]).unwrap();
        assert_eq!(classify_gram(&g).unwrap().to_string(), "A2");
        let g = GramMatrix::new(vec![vec![-2, 1], vec![1, -2]], Convention::Negative).unwrap();
        assert_eq!(classify_gram(&g).unwrap().to_string(), "A2");
    }

    #[test]
    fn e8_cartan() {
        let t: RootSystemType = "E8".parse().unwrap();
        let g = GramMatrix::cartan(&t);
        assert_eq!(classify_gram(&g).unwrap(), t);
        assert_eq!(g.determinant(), 1);
        assert!(g.is_even());
    }

    #[test]
    fn cartan_determinants() {
        // det A_n = n + 1, det D_n = 4, det E_n = 9 - n.
        for (t, det) in [("A1", 2), ("A5", 6), ("D4", 4), ("D7", 4), ("E6", 3), ("E7", 2), ("A1^3", 8)] {
            let g = GramMatrix::cartan(&t.parse().unwrap());
            assert_eq!(g.determinant(), det, "{t}");
        }
    }

    #[test]
    fn errors() {
        let g = GramMatrix::positive(vec![vec![2, -2], vec![-2, 2]]).unwrap();
        assert!(matches!(classify_gram(&g), Err(LatticeError::NotSimplyLaced(_))));
        let g = GramMatrix::positive(vec![vec![4]]).unwrap();
        assert!(matches!(classify_gram(&g), Err(LatticeError::NotSimplyLaced(_))));
        let cyc = vec![vec![2, -1, -1], vec![-1, 2, -1], vec![-1, -1, 2]];
        let g = GramMatrix::positive(cyc).unwrap();
        assert!(matches!(classify_gram(&g), Err(LatticeError::NotADE(_))));
        assert!(GramMatrix::positive(vec![vec![2, 1], vec![0, 2]]).is_err());
    }
}
