//! Scalar Riccati equations with polynomial-over-polynomial coefficients,
//! their second-order linearization and the solver built on it.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::flow::{self, FlowError, IntegratorConfig, PathSpec, Sample, Status, SwitchEvent, Trajectory};
use crate::symbolic::{Poly, Var};

use super::RiccatiError;

type C = Complex64;

const ZERO: C = C::new(0.0, 0.0);

/// Univariate polynomial in `t` with complex coefficients, lowest degree
/// first.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct UPoly {
    coeffs: Vec<C>,
}

impl UPoly {
    pub fn new(mut coeffs: Vec<C>) -> Self {
        while coeffs.last() == Some(&ZERO) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn constant(c: C) -> Self {
        Self::new(vec![c])
    }

    /// Fixes the parameters of a polynomial in `t` and the parameters.
    pub fn from_poly(p: &Poly, params: &[C]) -> Result<Self, RiccatiError> {
        let compiled = p.instantiate(params);
        let mut coeffs = Vec::new();
        for (e, c) in compiled.terms() {
            if e[0] != 0 || e[1] != 0 || e[2] < 0 {
                return Err(RiccatiError::NotPolynomialInT(p.to_string()));
            }
            let k = e[2] as usize;
            if coeffs.len() <= k {
                coeffs.resize(k + 1, ZERO);
            }
            coeffs[k] += c;
        }
        Ok(Self::new(coeffs))
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial at `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, t: C) -> C {
        self.coeffs.iter().rev().fold(ZERO, |acc, &c| acc * t + c)
    }

    pub fn deriv(&self) -> UPoly {
        UPoly::new(self.coeffs.iter().enumerate().skip(1).map(|(k, &c)| c * k as f64).collect())
    }

    pub fn mul(&self, other: &UPoly) -> UPoly {
        if self.is_zero() || other.is_zero() {
            return UPoly::default();
        }
        let mut out = vec![ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UPoly::new(out)
    }

    pub fn add(&self, other: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let get = |v: &[C], k: usize| v.get(k).copied().unwrap_or(ZERO);
        UPoly::new((0..n).map(|k| get(&self.coeffs, k) + get(&other.coeffs, k)).collect())
    }

    pub fn scale(&self, s: C) -> UPoly {
        UPoly::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Complex roots with multiplicity: closed forms up to degree two,
    /// Durand-Kerner iteration beyond.
    pub fn roots(&self) -> Vec<C> {
        let c = &self.coeffs;
        match self.degree() {
            None | Some(0) => Vec::new(),
            Some(1) => vec![-c[0] / c[1]],
            Some(2) => {
                let disc = (c[1] * c[1] - c[2] * c[0] * 4.0).sqrt();
                let q = if (c[1].conj() * disc).re >= 0.0 { -(c[1] + disc) / 2.0 } else { -(c[1] - disc) / 2.0 };
                if q == ZERO {
                    vec![ZERO, ZERO]
                } else {
                    vec![q / c[2], c[0] / q]
                }
            }
            Some(n) => {
                let lead = c[n];
                let monic: Vec<C> = c.iter().map(|v| v / lead).collect();
                let eval = |z: C| monic.iter().rev().fold(ZERO, |acc, &k| acc * z + k);
                let radius = 1.0 + monic[..n].iter().map(|v| v.norm()).fold(0.0, f64::max);
                let mut z: Vec<C> =
                    (0..n).map(|k| C::from_polar(radius, 2.0 * PI * k as f64 / n as f64 + 0.4)).collect();
                for _ in 0..500 {
                    let mut delta = 0.0f64;
                    for i in 0..n {
                        let mut den = C::new(1.0, 0.0);
                        for j in 0..n {
                            if i != j {
                                den *= z[i] - z[j];
                            }
                        }
                        let step = eval(z[i]) / den;
                        z[i] -= step;
                        delta = delta.max(step.norm());
                    }
                    if delta < 1e-15 {
                        break;
                    }
                }
                z
            }
        }
    }
}

fn ratio(num: &UPoly, den: &UPoly, t: C) -> C {
    num.eval(t) / den.eval(t)
}

/// `x' = a(t) x^2 + b(t) x + c(t)` with `a, b, c` sharing the polynomial
/// denominator `den`.
#[derive(Clone, Debug, PartialEq)]
pub struct RiccatiOde {
    pub a: UPoly,
    pub b: UPoly,
    pub c: UPoly,
    pub den: UPoly,
}

impl RiccatiOde {
    pub fn new(a: UPoly, b: UPoly, c: UPoly, den: UPoly) -> Self {
        RiccatiOde { a, b, c, den }
    }

    /// Builds the equation from symbolic numerators in `t` and the
    /// parameters.
    pub fn from_polys(a: &Poly, b: &Poly, c: &Poly, den: &Poly, params: &[C]) -> Result<Self, RiccatiError> {
        if den.is_zero() {
            return Err(RiccatiError::NotPolynomialInT(den.to_string()));
        }
        for p in [a, b, c, den] {
            if p.depends_on(Var::X) || p.depends_on(Var::Y) {
                return Err(RiccatiError::NotPolynomialInT(p.to_string()));
            }
        }
        Ok(RiccatiOde {
            a: UPoly::from_poly(a, params)?,
            b: UPoly::from_poly(b, params)?,
            c: UPoly::from_poly(c, params)?,
            den: UPoly::from_poly(den, params)?,
        })
    }

    pub fn coefficients(&self, t: C) -> (C, C, C) {
        let d = self.den.eval(t);
        (self.a.eval(t) / d, self.b.eval(t) / d, self.c.eval(t) / d)
    }

    pub fn rhs(&self, t: C, x: C) -> C {
        let (a, b, c) = self.coefficients(t);
        a * x * x + b * x + c
    }

    /// Times where a coefficient can blow up.
    pub fn pole_set(&self) -> Vec<C> {
        dedup(self.den.roots())
    }

    pub fn is_degenerate(&self) -> bool {
        self.a.is_zero()
    }
}

fn dedup(mut v: Vec<C>) -> Vec<C> {
    let mut out: Vec<C> = Vec::new();
    v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    for z in v {
        if out.last().is_none_or(|w: &C| (w - z).norm() > 1e-12) {
            out.push(z);
        }
    }
    out
}

/// `u'' + p(t) u' + q(t) u = 0` obtained from a Riccati equation by
/// `x = -u' / (a u)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Linear2Ode {
    source: RiccatiOde,
    /// `p = p_num / p_den`.
    pub p_num: UPoly,
    pub p_den: UPoly,
    /// `q = q_num / q_den`.
    pub q_num: UPoly,
    pub q_den: UPoly,
}

/// Linearizes `ode`: with `a = A/d`, `p = -(A' d - A d' + B A) / (A d)`
/// and `q = A C / d^2`.
pub fn linearize(ode: &RiccatiOde) -> Result<Linear2Ode, RiccatiError> {
    if ode.is_degenerate() {
        return Err(RiccatiError::DegenerateQuadratic);
    }
    let (a, b, c, d) = (&ode.a, &ode.b, &ode.c, &ode.den);
    let minus = C::new(-1.0, 0.0);
    let p_num = a
        .deriv()
        .mul(d)
        .add(&a.mul(&d.deriv()).scale(minus))
        .add(&b.mul(a))
        .scale(minus);
    Ok(Linear2Ode { source: ode.clone(), p_num, p_den: a.mul(d), q_num: a.mul(c), q_den: d.mul(d) })
}

impl Linear2Ode {
    pub fn source(&self) -> &RiccatiOde {
        &self.source
    }

    pub fn p(&self, t: C) -> C {
        ratio(&self.p_num, &self.p_den, t)
    }

    pub fn q(&self, t: C) -> C {
        ratio(&self.q_num, &self.q_den, t)
    }

    /// Zeros of the denominators of `p` and `q`, that is of `d` and `A`.
    pub fn pole_set(&self) -> Vec<C> {
        let mut v = self.source.den.roots();
        v.extend(self.source.a.roots());
        dedup(v)
    }
}

struct LinearSystem<'a> {
    lin: &'a Linear2Ode,
    prev: Option<(C, C, C)>,
    traj: Trajectory,
}

/// Relative size of `|u|` below which a crossing is reported as a pole.
const POLE_FLAG: f64 = 1e-6;

impl LinearSystem<'_> {
    /// Locates a near-zero of `u` on the last step from the cubic Hermite
    /// interpolant of `(u, u')`.
    fn detect_crossing(&mut self, t1: C, u1: C, w1: C) {
        let Some((t0, u0, w0)) = self.prev else { return };
        let h = (t1 - t0).norm();
        let dir = (t1 - t0) / h;
        let (m0, m1) = (w0 * dir * h, w1 * dir * h);
        let herm = |s: f64| {
            let s2 = s * s;
            let s3 = s2 * s;
            u0 * (2.0 * s3 - 3.0 * s2 + 1.0) + m0 * (s3 - 2.0 * s2 + s) + u1 * (-2.0 * s3 + 3.0 * s2) + m1 * (s3 - s2)
        };
        let grid = 64;
        let (mut best_s, mut best) = (0.0, f64::INFINITY);
        for k in 0..=grid {
            let s = k as f64 / grid as f64;
            let v = herm(s).norm();
            if v < best {
                best = v;
                best_s = s;
            }
        }
        let (mut lo, mut hi) = ((best_s - 1.0 / grid as f64).max(0.0), (best_s + 1.0 / grid as f64).min(1.0));
        let g = 0.5 * (5f64.sqrt() - 1.0);
        for _ in 0..60 {
            let a = hi - g * (hi - lo);
            let b = lo + g * (hi - lo);
            if herm(a).norm() < herm(b).norm() {
                hi = b;
            } else {
                lo = a;
            }
        }
        let s = 0.5 * (lo + hi);
        let interior = s > 1e-9 && s < 1.0 - 1e-9;
        if interior && herm(s).norm() <= POLE_FLAG * u0.norm().max(u1.norm()) {
            self.traj.pole_crossings.push(t0 + dir * (s * h));
        }
    }
}

impl flow::System<2> for LinearSystem<'_> {
    fn rhs(&self, t: C, y: &[C; 2]) -> [C; 2] {
        [y[1], -(self.lin.p(t) * y[1] + self.lin.q(t) * y[0])]
    }

    fn accept(&mut self, t: C, y: &mut [C; 2], _waypoint: bool) -> Result<(), Status> {
        let (u, w) = (y[0], y[1]);
        self.detect_crossing(t, u, w);
        self.prev = Some((t, u, w));
        // Keep (u, u') of order one; the map to x is projective.
        let scale = u.norm().max(w.norm());
        if scale > 1e100 || (scale < 1e-100 && scale > 0.0) {
            y[0] /= scale;
            y[1] /= scale;
            self.prev = Some((t, y[0], y[1]));
        }
        if u.norm() <= 1e-12 * w.norm().max(1e-300) {
            self.traj.pole_crossings.push(t);
            return Ok(());
        }
        let (a, _, _) = self.lin.source.coefficients(t);
        let x = -w / (a * u);
        self.traj.samples.push(Sample { t, chart: 0, x, y: ZERO });
        Ok(())
    }
}

/// Solves a Riccati equation through its linearization, starting from
/// `u = 1, u' = -a x_init`.
pub fn solve_via_linear(
    ode: &RiccatiOde,
    x_init: C,
    path: &PathSpec,
    cfg: &IntegratorConfig,
) -> Result<Trajectory, FlowError> {
    cfg.validate()?;
    if !x_init.is_finite() {
        return Err(FlowError::NonFiniteInit);
    }
    let lin = linearize(ode).map_err(|e| FlowError::InvalidConfig(e.to_string()))?;
    path.check_punctures(&lin.pole_set(), cfg.min_puncture_distance)?;
    let t0 = path.start();
    let (a0, _, _) = ode.coefficients(t0);
    let mut sys = LinearSystem {
        lin: &lin,
        prev: None,
        traj: Trajectory { samples: Vec::new(), events: Vec::<SwitchEvent>::new(), pole_crossings: Vec::new(), status: Status::Completed },
    };
    let status = flow::drive(&mut sys, path, [C::new(1.0, 0.0), -a0 * x_init], cfg);
    let mut traj = sys.traj;
    traj.status = status;
    Ok(traj)
}
