//! Chart-0 vector fields and adjacent transition maps, written once over
//! any [`Scalar`] so that they can be evaluated numerically, with dual
//! numbers, or symbolically.

use crate::symbolic::Scalar;

use super::PainleveType;

/// Parent of each chart in the adjacency tree rooted at chart 0.
pub fn parent(pt: PainleveType, chart: usize) -> Option<usize> {
    use PainleveType::*;
    match (pt, chart) {
        (_, 0) => None,
        (E7t, 1 | 2) => Some(0),
        (E6t, 1 | 2) => Some(0),
        (E6t, 3) => Some(2),
        (D4t, 1..=4) => Some(0),
        (D4t, 5) => Some(4),
        _ => None,
    }
}

pub fn chart_count(pt: PainleveType) -> usize {
    use PainleveType::*;
    match pt {
        E7t => 3,
        E6t => 4,
        D4t => 6,
        _ => 0,
    }
}

/// Whether `a` and `b` are joined by a listed transformation.
pub fn adjacent(pt: PainleveType, a: usize, b: usize) -> bool {
    a != b && (parent(pt, a) == Some(b) || parent(pt, b) == Some(a))
}

/// Denominator `d(t)` of the chart-0 field.
pub fn denominator<S: Scalar>(pt: PainleveType, t: &S) -> S {
    match pt {
        PainleveType::D4t => t.clone() * (t.clone() - S::one()),
        _ => S::one(),
    }
}

/// Numerators of the chart-0 field; the field is `numerator / d(t)`.
pub fn field0_numerator<S: Scalar>(pt: PainleveType, p: &[S], t: &S, x: &S, y: &S) -> (S, S) {
    let (x, y, t) = (x.clone(), y.clone(), t.clone());
    let half = S::from_ratio(1, 2);
    match pt {
        PainleveType::E7t => {
            let alpha = p[0].clone();
            let dx = y.clone() - x.square() - t * half.clone();
            let dy = S::int(2) * x * y + alpha + half;
            (dx, dy)
        }
        PainleveType::E6t => {
            let (k0, kinf) = (p[0].clone(), p[1].clone());
            let dx = S::int(4) * x.clone() * y.clone() - x.square() - S::int(2) * t.clone() * x.clone()
                - S::int(2) * k0;
            let dy = -(S::int(2) * y.square()) + S::int(2) * (x + t) * y - kinf;
            (dx, dy)
        }
        PainleveType::D4t => {
            let (k0, k1, kt, kinf) = (p[0].clone(), p[1].clone(), p[2].clone(), p[3].clone());
            let one = S::one();
            let xm1 = x.clone() - one.clone();
            let xmt = x.clone() - t.clone();
            let dx = S::int(2) * y.clone() * x.clone() * xm1.clone() * xmt.clone()
                - k0.clone() * xm1.clone() * xmt.clone()
                - k1.clone() * x.clone() * xmt
                - (kt.clone() - one.clone()) * x.clone() * xm1;
            let s = k0.clone() + k1.clone() + kt.clone() - one.clone();
            let quad = S::int(3) * x.square() - S::int(2) * (t.clone() + one.clone()) * x.clone() + t.clone();
            let lin = S::int(2) * s.clone() * x - (k0.clone() + k1) * t - k0 - kt + one;
            let cst = (s.square() - kinf.square()) * S::from_ratio(1, 4);
            let dy = -(quad * y.square() - lin * y + cst);
            (dx, dy)
        }
        _ => unreachable!("no chart data for {pt:?}"),
    }
}

/// Transition `from -> to` for an adjacent pair, `None` otherwise.
pub fn transition<S: Scalar>(
    pt: PainleveType,
    from: usize,
    to: usize,
    p: &[S],
    t: &S,
    x: &S,
    y: &S,
) -> Option<(S, S)> {
    use PainleveType::*;
    let (x, y, t) = (x.clone(), y.clone(), t.clone());
    let half = S::from_ratio(1, 2);
    // Shared shape `(y (k - x y), 1/y)` and its variants.
    let swap = |k: S, x: S, y: S| (y.clone() * (k - x * y.clone()), y.recip());
    let invert = |k: S, x: S, y: S| (x.recip(), x.clone() * (k - x * y));
    Some(match (pt, from, to) {
        (E7t, 1, 0) | (E7t, 0, 1) => {
            let c = -p[0].clone() - half;
            invert(c, x, y)
        }
        (E7t, 2, 0) => {
            let beta = p[0].clone() - half;
            let xi = x.recip();
            let y0 = S::int(2) * xi.square() + t + beta * x.clone() - y * x.square();
            (xi, y0)
        }
        (E7t, 0, 2) => {
            let beta = p[0].clone() - half;
            let y2 = S::int(2) * x.powi(4) + t * x.square() + beta * x.clone() - y * x.square();
            (x.recip(), y2)
        }
        (E6t | D4t, 1, 0) | (E6t | D4t, 0, 1) => swap(p[0].clone(), x, y),
        (E6t, 2, 0) | (E6t, 0, 2) => invert(p[1].clone(), x, y),
        (E6t, 3, 2) | (E6t, 2, 3) => {
            let xi = x.recip();
            let k = S::int(2) * p[1].clone() - p[0].clone() + S::one();
            let shift = -(half * xi.powi(3)) - t * xi.square() + k * xi;
            let y_new = if from == 3 { shift + y } else { y - shift };
            (x, y_new)
        }
        (D4t, 2, 0) => {
            let (a, b) = swap(p[1].clone(), x, y);
            (a + S::one(), b)
        }
        (D4t, 0, 2) => {
            // x2 = y0 (k1 + y0 - x0 y0), y2 = 1/y0
            (y.clone() * (p[1].clone() + y.clone() - x * y.clone()), y.recip())
        }
        (D4t, 3, 0) => {
            let (a, b) = swap(p[2].clone(), x, y);
            (a + t, b)
        }
        (D4t, 0, 3) => (y.clone() * (p[2].clone() + t * y.clone() - x * y.clone()), y.recip()),
        (D4t, 4, 0) | (D4t, 0, 4) => {
            let h = (p[0].clone() + p[1].clone() + p[2].clone() - S::one() + p[3].clone()) * half;
            invert(h, x, y)
        }
        (D4t, 5, 4) | (D4t, 4, 5) => swap(p[3].clone(), x, y),
        _ => return None,
    })
}
