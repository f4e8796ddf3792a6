//! Lattice conditions for an anti-canonical curve in the Picard lattice of
//! a rational surface blown up nine times.

use serde::{Deserialize, Serialize};

use super::e8::simple_roots_of;
use super::gram::{classify_gram, Convention, GramMatrix};
use super::types::RootSystemType;
use super::LatticeError;

/// Rank of `Pic` for `P^2` blown up in nine points.
pub const PIC_RANK: usize = 10;

/// The intersection form `diag(1, -1, ..., -1)` in the basis `(h, e_1..e_9)`.
pub fn intersect(a: &[i64], b: &[i64]) -> i64 {
    a[0] * b[0] - a[1..].iter().zip(&b[1..]).map(|(x, y)| x * y).sum::<i64>()
}

/// Divisor classes of `Y = sum m_i Y_i` and an optional section `O`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PicardConfig {
    pub components: Vec<Vec<i64>>,
    pub multiplicities: Vec<i64>,
    pub anticanonical: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub section: Option<Vec<i64>>,
}

impl PicardConfig {
    fn validate(&self) -> Result<(), LatticeError> {
        let bad = |m: String| Err(LatticeError::MalformedConfig(m));
        if self.components.is_empty() {
            return bad("no components".into());
        }
        if self.components.len() != self.multiplicities.len() {
            return bad("one multiplicity per component is required".into());
        }
        let all = self.components.iter().chain(std::iter::once(&self.anticanonical)).chain(self.section.iter());
        for v in all {
            if v.len() != PIC_RANK {
                return bad(format!("class {v:?} does not have {PIC_RANK} coordinates"));
            }
        }
        let mut sum = vec![0i64; PIC_RANK];
        for (c, m) in self.components.iter().zip(&self.multiplicities) {
            for (s, x) in sum.iter_mut().zip(c) {
                *s += m * x;
            }
        }
        if sum != self.anticanonical {
            return bad(format!("sum of m_i Y_i is {sum:?}, not Y"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SectionReport {
    /// Basis of the orthogonal complement of `<Y, O>` in `(h, e_i)` coordinates.
    pub basis: Vec<Vec<i64>>,
    /// Gram matrix of the basis in the geometric (negative) convention.
    pub gram: Vec<Vec<i64>>,
    pub determinant: i128,
    pub even: bool,
    pub root_type: Option<RootSystemType>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OpPairReport {
    pub y_dot_components: Vec<i64>,
    pub y_squared: i64,
    pub is_op_pair: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub y_dot_section: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub complement: Option<SectionReport>,
}

pub fn op_pair_lattice_check(p: &PicardConfig) -> Result<OpPairReport, LatticeError> {
    p.validate()?;
    let y = &p.anticanonical;
    let y_dot_components: Vec<i64> = p.components.iter().map(|c| intersect(y, c)).collect();
    let y_squared = intersect(y, y);
    let is_op_pair = y_squared == 0 && y_dot_components.iter().all(|&v| v == 0);
    let y_dot_section = p.section.as_ref().map(|o| intersect(y, o));
    let complement = match (&p.section, y_dot_section) {
        (Some(o), Some(1)) => Some(section_report(y, o)),
        _ => None,
    };
    Ok(OpPairReport { y_dot_components, y_squared, is_op_pair, y_dot_section, complement })
}

fn section_report(y: &[i64], o: &[i64]) -> SectionReport {
    // Linear functionals v -> v.Y and v -> v.O as integer row vectors.
    let row = |c: &[i64]| -> Vec<i64> {
        let mut r = c.to_vec();
        for x in r.iter_mut().skip(1) {
            *x = -*x;
        }
        r
    };
    let basis = lll(integer_kernel(&[row(y), row(o)]));
    let gram: Vec<Vec<i64>> = basis
        .iter()
        .map(|a| basis.iter().map(|b| intersect(a, b)).collect())
        .collect();
    let g = GramMatrix::new(gram.clone(), Convention::Negative).expect("symmetric form");
    let determinant = g.determinant();
    let even = g.is_even();
    let root_type = if determinant.abs() == 1 { root_type_of(&g.to_positive()) } else { None };
    SectionReport { basis, gram, determinant, even, root_type }
}

/// Basis of `{v in Z^n : A v = 0}` via unimodular column operations.
pub fn integer_kernel(a: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a[0].len();
    let mut m: Vec<Vec<i64>> = a.to_vec();
    let mut u: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    let col_op = |m: &mut Vec<Vec<i64>>, u: &mut Vec<Vec<i64>>, dst: usize, src: usize, k: i64| {
        for r in m.iter_mut() {
            r[dst] -= k * r[src];
        }
        for r in u.iter_mut() {
            r[dst] -= k * r[src];
        }
    };
    let swap = |m: &mut Vec<Vec<i64>>, u: &mut Vec<Vec<i64>>, i: usize, j: usize| {
        for r in m.iter_mut().chain(u.iter_mut()) {
            r.swap(i, j);
        }
    };
    let mut pivot = 0;
    for r in 0..m.len() {
        loop {
            let nonzero: Vec<usize> = (pivot..n).filter(|&c| m[r][c] != 0).collect();
            if nonzero.len() <= 1 {
                if let Some(&c) = nonzero.first() {
                    swap(&mut m, &mut u, pivot, c);
                    pivot += 1;
                }
                break;
            }
            let &best = nonzero.iter().min_by_key(|&&c| m[r][c].abs()).expect("nonempty");
            for &c in &nonzero {
                if c != best {
                    let k = m[r][c].div_euclid(m[r][best]);
                    col_op(&mut m, &mut u, c, best, k);
                }
            }
        }
    }
    (pivot..n).map(|c| u.iter().map(|row| row[c]).collect()).collect()
}

/// LLL reduction (delta = 3/4) for the positive-definite form `-intersect`.
fn lll(mut b: Vec<Vec<i64>>) -> Vec<Vec<i64>> {
    let form = |x: &[i64], y: &[i64]| -(intersect(x, y)) as f64;
    let n = b.len();
    let gso = |b: &[Vec<i64>]| {
        let mut mu = vec![vec![0.0; n]; n];
        let mut bstar_norm = vec![0.0; n];
        // Gram-Schmidt computed through the Gram matrix only.
        for i in 0..n {
            for j in 0..i {
                let mut s = form(&b[i], &b[j]);
                for k in 0..j {
                    s -= mu[j][k] * mu[i][k] * bstar_norm[k];
                }
                mu[i][j] = s / bstar_norm[j];
            }
            let mut s = form(&b[i], &b[i]);
            for k in 0..i {
                s -= mu[i][k] * mu[i][k] * bstar_norm[k];
            }
            bstar_norm[i] = s;
        }
        (mu, bstar_norm)
    };
    let mut k = 1;
    while k < n {
        for j in (0..k).rev() {
            let (mu, _) = gso(&b);
            let q = mu[k][j].round() as i64;
            if q != 0 {
                let bj = b[j].clone();
                for (x, y) in b[k].iter_mut().zip(&bj) {
                    *x -= q * y;
                }
            }
        }
        let (mu, bn) = gso(&b);
        if bn[k] >= (0.75 - mu[k][k - 1] * mu[k][k - 1]) * bn[k - 1] {
            k += 1;
        } else {
            b.swap(k, k - 1);
            k = (k - 1).max(1);
        }
    }
    b
}

/// All `x` with `x^T m x == target` for a positive-definite integer `m`.
pub fn short_vectors(m: &[Vec<i64>], target: i64) -> Vec<Vec<i64>> {
    let n = m.len();
    let mut q: Vec<Vec<f64>> = m.iter().map(|r| r.iter().map(|&x| x as f64).collect()).collect();
    for i in 0..n {
        for j in i + 1..n {
            q[j][i] = q[i][j];
            q[i][j] /= q[i][i];
        }
        for k in i + 1..n {
            for l in k..n {
                q[k][l] -= q[k][i] * q[i][l];
            }
        }
    }
    let mut out = Vec::new();
    let mut x = vec![0i64; n];
    enumerate(&q, m, target, n, target as f64 + 1e-6, &mut x, &mut out);
    out
}

fn enumerate(
    q: &[Vec<f64>],
    m: &[Vec<i64>],
    target: i64,
    level: usize,
    remaining: f64,
    x: &mut Vec<i64>,
    out: &mut Vec<Vec<i64>>,
) {
    if level == 0 {
        let norm: i64 = (0..x.len())
            .map(|i| (0..x.len()).map(|j| x[i] * m[i][j] * x[j]).sum::<i64>())
            .sum();
        if norm == target {
            out.push(x.clone());
        }
        return;
    }
    let i = level - 1;
    let n = x.len();
    let center: f64 = -(i + 1..n).map(|j| q[i][j] * x[j] as f64).sum::<f64>();
    let radius = (remaining.max(0.0) / q[i][i]).sqrt();
    let lo = (center - radius - 1e-9).ceil() as i64;
    let hi = (center + radius + 1e-9).floor() as i64;
    for v in lo..=hi {
        x[i] = v;
        let d = v as f64 - center;
        let rest = remaining - q[i][i] * d * d;
        if rest >= -1e-9 {
            enumerate(q, m, target, i, rest, x, out);
        }
    }
    x[i] = 0;
}

/// Root type of an even positive-definite lattice given by its Gram matrix.
fn root_type_of(g: &[Vec<i64>]) -> Option<RootSystemType> {
    let roots = short_vectors(g, 2);
    if roots.is_empty() {
        return Some(RootSystemType::empty());
    }
    let weights: Vec<f64> = [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29]
        .iter()
        .cycle()
        .take(g.len())
        .enumerate()
        .map(|(i, &p)| f64::from(p).sqrt() + i as f64 * 1e-3)
        .collect();
    let simple = simple_roots_of(
        &roots,
        |v| v.iter().zip(&weights).map(|(&x, w)| x as f64 * w).sum(),
        |a, b| a.iter().zip(b).map(|(x, y)| x + y).collect(),
    );
    let ip = |a: &[i64], b: &[i64]| -> i64 {
        (0..a.len()).map(|i| (0..b.len()).map(|j| a[i] * g[i][j] * b[j]).sum::<i64>()).sum()
    };
    let gram: Vec<Vec<i64>> = simple.iter().map(|a| simple.iter().map(|b| ip(a, b)).collect()).collect();
    classify_gram(&GramMatrix::positive(gram).ok()?).ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn class(h: i64, es: &[i64]) -> Vec<i64> {
        let mut v = vec![h];
        v.extend_from_slice(es);
        v.resize(PIC_RANK, 0);
        v
    }

    fn rational_elliptic() -> PicardConfig {
        let y = class(3, &[-1; 9]);
        PicardConfig {
            components: vec![y.clone()],
            multiplicities: vec![1],
            anticanonical: y,
            section: Some(class(0, &[0, 0, 0, 0, 0, 0, 0, 0, 1])),
        }
    }

    #[test]
    fn section_complement_is_e8() {
        let r = op_pair_lattice_check(&rational_elliptic()).unwrap();
        assert_eq!(r.y_squared, 0);
        assert!(r.is_op_pair);
        assert_eq!(r.y_dot_section, Some(1));
        let c = r.complement.unwrap();
        assert_eq!(c.basis.len(), 8);
        assert_eq!(c.determinant.abs(), 1);
        assert!(c.even);
        assert!(c.gram.iter().enumerate().all(|(i, row)| row[i] < 0));
        assert_eq!(c.root_type.unwrap().to_string(), "E8");
    }

    #[test]
    fn two_component_pair() {
        let y1 = class(1, &[-1, -1, -1]);
        let y2 = class(2, &[0, 0, 0, -1, -1, -1, -1, -1, -1]);
        let p = PicardConfig {
            components: vec![y1, y2],
            multiplicities: vec![1, 1],
            anticanonical: class(3, &[-1; 9]),
            section: None,
        };
        let r = op_pair_lattice_check(&p).unwrap();
        assert_eq!(r.y_dot_components, vec![0, 0]);
        assert!(r.is_op_pair);
        assert!(r.complement.is_none());
    }

    #[test]
    fn violation_is_flagged() {
        let y1 = class(1, &[-1, -1]);
        let y2 = class(2, &[0, 0, -1, -1, -1, -1, -1, -1, -1]);
        let p = PicardConfig {
            components: vec![y1, y2],
            multiplicities: vec![1, 1],
            anticanonical: class(3, &[-1; 9]),
            section: None,
        };
        let r = op_pair_lattice_check(&p).unwrap();
        assert!(!r.is_op_pair);
        assert_eq!(r.y_dot_components, vec![1, -1]);
    }

    #[test]
    fn malformed() {
        let mut p = rational_elliptic();
        p.multiplicities = vec![2];
        assert!(matches!(op_pair_lattice_check(&p), Err(LatticeError::MalformedConfig(_))));
        let mut p = rational_elliptic();
        p.components[0].pop();
        assert!(op_pair_lattice_check(&p).is_err());
    }

    #[test]
    fn kernel_is_orthogonal() {
        let a = vec![vec![3, 1, 1, 1, 1, 1, 1, 1, 1, 1], vec![0, 0, 0, 0, 0, 0, 0, 0, 0, -1]];
        let k = integer_kernel(&a);
        assert_eq!(k.len(), 8);
        for v in &k {
            for row in &a {
                assert_eq!(row.iter().zip(v).map(|(x, y)| x * y).sum::<i64>(), 0);
            }
        }
    }

    #[test]
    fn short_vectors_of_a2() {
        let v = short_vectors(&[vec![2, -1], vec![-1, 2]], 2);
        assert_eq!(v.len(), 6);
    }
}
