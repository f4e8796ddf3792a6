//! Exact Laurent polynomials in the phase coordinates, time and parameters,
//! and the scalar abstraction shared by numeric, dual and symbolic
//! evaluation of the chart formulas.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::dual::Dual;

pub type Rational = Ratio<i128>;

/// Arithmetic needed to evaluate the chart formulas.
pub trait Scalar:
    Clone + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    fn from_ratio(num: i64, den: i64) -> Self;
    fn recip(&self) -> Self;

    fn int(n: i64) -> Self {
        Self::from_ratio(n, 1)
    }
    fn zero() -> Self {
        Self::int(0)
    }
    fn one() -> Self {
        Self::int(1)
    }
    fn square(&self) -> Self {
        self.clone() * self.clone()
    }
    fn powi(&self, k: u32) -> Self {
        let mut r = Self::one();
        for _ in 0..k {
            r = r * self.clone();
        }
        r
    }
    fn scale(&self, num: i64, den: i64) -> Self {
        self.clone() * Self::from_ratio(num, den)
    }
}

impl Scalar for Complex64 {
    fn from_ratio(num: i64, den: i64) -> Self {
        Complex64::new(num as f64 / den as f64, 0.0)
    }
    fn recip(&self) -> Self {
        Complex64::new(1.0, 0.0) / *self
    }
}

impl Scalar for Dual<Complex64> {
    fn from_ratio(num: i64, den: i64) -> Self {
        Dual::constant(Complex64::from_ratio(num, den))
    }
    fn recip(&self) -> Self {
        Dual::recip(self)
    }
}

/// Variables of [`Poly`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    X = 0,
    Y = 1,
    T = 2,
    P0 = 3,
    P1 = 4,
    P2 = 5,
    P3 = 6,
}

pub const NVARS: usize = 7;

impl Var {
    pub fn param(i: usize) -> Var {
        [Var::P0, Var::P1, Var::P2, Var::P3][i]
    }

    fn name(self) -> &'static str {
        ["x", "y", "t", "p0", "p1", "p2", "p3"][self as usize]
    }
}

type Exponents = [i32; NVARS];

/// Sparse Laurent polynomial with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<Exponents, Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, [0; NVARS])
    }

    pub fn int(n: i64) -> Self {
        Self::constant(Rational::from_integer(n as i128))
    }

    pub fn var(v: Var) -> Self {
        let mut e = [0; NVARS];
        e[v as usize] = 1;
        Self::monomial(Rational::one(), e)
    }

    pub fn x() -> Self {
        Self::var(Var::X)
    }
    pub fn y() -> Self {
        Self::var(Var::Y)
    }
    pub fn t() -> Self {
        Self::var(Var::T)
    }
    pub fn p(i: usize) -> Self {
        Self::var(Var::param(i))
    }

    pub fn monomial(c: Rational, e: Exponents) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        Poly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Rational)> {
        self.terms.iter()
    }

    fn add_term(&mut self, e: Exponents, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    /// Smallest exponent of `v` over all terms (0 for the zero polynomial).
    pub fn min_degree(&self, v: Var) -> i32 {
        self.terms.keys().map(|e| e[v as usize]).min().unwrap_or(0)
    }

    pub fn max_degree(&self, v: Var) -> i32 {
        self.terms.keys().map(|e| e[v as usize]).max().unwrap_or(0)
    }

    /// True if no variable has a negative exponent.
    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&k| k >= 0))
    }

    pub fn depends_on(&self, v: Var) -> bool {
        self.terms.keys().any(|e| e[v as usize] != 0)
    }

    pub fn deriv(&self, v: Var) -> Poly {
        let i = v as usize;
        let mut out = Poly::zero();
        for (e, c) in &self.terms {
            if e[i] != 0 {
                let mut f = *e;
                f[i] -= 1;
                out.add_term(f, c * Rational::from_integer(e[i] as i128));
            }
        }
        out
    }

    /// Coefficient of `v^k`, as a polynomial in the other variables.
    pub fn coeff(&self, v: Var, k: i32) -> Poly {
        let i = v as usize;
        let mut out = Poly::zero();
        for (e, c) in &self.terms {
            if e[i] == k {
                let mut f = *e;
                f[i] = 0;
                out.add_term(f, *c);
            }
        }
        out
    }

    /// Substitutes polynomials for variables. Negative powers of a
    /// substituted variable require the replacement to be invertible as a
    /// [`Scalar`] (a single monomial).
    pub fn subs(&self, map: &[(Var, Poly)]) -> Poly {
        let mut out = Poly::zero();
        for (e, c) in &self.terms {
            let mut term = Poly::monomial(*c, {
                let mut f = *e;
                for (v, _) in map {
                    f[*v as usize] = 0;
                }
                f
            });
            for (v, p) in map {
                let k = e[*v as usize];
                let factor = if k >= 0 { p.powi(k as u32) } else { p.recip().powi((-k) as u32) };
                term = term * factor;
            }
            out = out + term;
        }
        out
    }

    /// Generic evaluation at scalar values of all seven variables.
    pub fn eval_with<S: Scalar>(&self, values: &[S; NVARS]) -> S {
        let mut acc = S::zero();
        for (e, c) in &self.terms {
            let mut term = S::from_ratio(
                c.numer().to_i64().expect("coefficient fits i64"),
                c.denom().to_i64().expect("coefficient fits i64"),
            );
            for (k, &p) in e.iter().enumerate() {
                if p > 0 {
                    term = term * values[k].powi(p as u32);
                } else if p < 0 {
                    term = term * values[k].recip().powi((-p) as u32);
                }
            }
            acc = acc + term;
        }
        acc
    }

    pub fn eval(&self, values: &[Complex64; NVARS]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let mut term = Complex64::new(rational_to_f64(c), 0.0);
            for (k, &p) in e.iter().enumerate() {
                if p != 0 {
                    term *= values[k].powi(p);
                }
            }
            acc += term;
        }
        acc
    }

    /// Fixes the parameter variables and returns a compiled polynomial in
    /// `x`, `y`, `t` with complex coefficients.
    pub fn instantiate(&self, params: &[Complex64]) -> CPoly {
        let mut terms: BTreeMap<[i32; 3], Complex64> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut coeff = Complex64::new(rational_to_f64(c), 0.0);
            for (i, &p) in params.iter().enumerate() {
                let k = e[Var::param(i) as usize];
                if k != 0 {
                    coeff *= p.powi(k);
                }
            }
            *terms.entry([e[0], e[1], e[2]]).or_insert(Complex64::new(0.0, 0.0)) += coeff;
        }
        CPoly { terms: terms.into_iter().filter(|(_, c)| *c != Complex64::new(0.0, 0.0)).collect() }
    }
}

pub fn rational_to_f64(c: &Rational) -> f64 {
    c.numer().to_f64().expect("finite") / c.denom().to_f64().expect("finite")
}

impl Add for Poly {
    type Output = Poly;
    fn add(mut self, o: Poly) -> Poly {
        for (e, c) in o.terms {
            self.add_term(e, c);
        }
        self
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, o: Poly) -> Poly {
        self + (-o)
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(mut self) -> Poly {
        for c in self.terms.values_mut() {
            *c = -*c;
        }
        self
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, o: Poly) -> Poly {
        let mut out = Poly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let mut e = *e1;
                for (a, b) in e.iter_mut().zip(e2) {
                    *a += b;
                }
                out.add_term(e, c1 * c2);
            }
        }
        out
    }
}

impl Scalar for Poly {
    fn from_ratio(num: i64, den: i64) -> Self {
        Poly::constant(Rational::new(num as i128, den as i128))
    }

    /// Only monomials are invertible.
    fn recip(&self) -> Self {
        assert!(self.terms.len() == 1, "cannot invert non-monomial {self}");
        let (e, c) = self.terms.iter().next().expect("one term");
        Poly::monomial(c.recip(), e.map(|k| -k))
    }
}

impl Poly {
    /// Renders the polynomial with custom names for `x, y, t, p0..p3`.
    pub fn render(&self, names: &[&str; NVARS]) -> String {
        let mut out = String::new();
        self.write_with(&mut out, names).expect("writing to a string");
        out
    }

    fn write_with(&self, f: &mut impl fmt::Write, names: &[&str; NVARS]) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let mut factors: Vec<String> = Vec::new();
            for (k, &p) in e.iter().enumerate() {
                let name = names[k];
                match p {
                    0 => {}
                    1 => factors.push(name.to_string()),
                    _ => factors.push(format!("{name}^{p}")),
                }
            }
            let coeff = if a.is_integer() { a.numer().to_string() } else { format!("{}/{}", a.numer(), a.denom()) };
            if factors.is_empty() {
                f.write_str(&coeff)?;
            } else if a.is_one() {
                f.write_str(&factors.join("*"))?;
            } else {
                write!(f, "{coeff}*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = [Var::X, Var::Y, Var::T, Var::P0, Var::P1, Var::P2, Var::P3].map(Var::name);
        self.write_with(f, &names)
    }
}

/// Polynomial in `x`, `y`, `t` with complex coefficients.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct CPoly {
    terms: Vec<([i32; 3], Complex64)>,
}

impl CPoly {
    pub fn eval(&self, x: Complex64, y: Complex64, t: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            acc += c * pow(x, e[0]) * pow(y, e[1]) * pow(t, e[2]);
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Exponents of `(x, y, t)` with their coefficients.
    pub fn terms(&self) -> &[([i32; 3], Complex64)] {
        &self.terms
    }
}

fn pow(z: Complex64, k: i32) -> Complex64 {
    match k {
        0 => Complex64::new(1.0, 0.0),
        1 => z,
        2 => z * z,
        _ => z.powi(k),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_derivatives() {
        let x = Poly::x();
        let y = Poly::y();
        let p = x.clone() * x.clone() * y.clone() - Poly::int(3) * y.clone() + Poly::from_ratio(1, 2);
        assert_eq!(p.deriv(Var::X), Poly::int(2) * x.clone() * y.clone());
        assert_eq!(p.deriv(Var::Y), x.clone() * x.clone() - Poly::int(3));
        assert_eq!(p.coeff(Var::X, 2), y.clone());
        assert_eq!((p.clone() - p.clone()), Poly::zero());
        let r = x.recip();
        assert_eq!(r.clone() * x.clone(), Poly::int(1));
        assert_eq!(r.min_degree(Var::X), -1);
        assert!(!r.is_polynomial());
    }

    #[test]
    fn substitution_and_evaluation() {
        let p = Poly::x() * Poly::x() + Poly::y();
        let q = p.subs(&[(Var::X, Poly::y() + Poly::int(1)), (Var::Y, Poly::t())]);
        let expected = Poly::y() * Poly::y() + Poly::int(2) * Poly::y() + Poly::int(1) + Poly::t();
        assert_eq!(q, expected);
        let z = Complex64::new(0.5, -1.0);
        let vals = [z, z * 2.0, z * 3.0, z, z, z, z];
        let direct = z * z + z * 2.0;
        assert!((p.eval(&vals) - direct).norm() < 1e-15);
        assert!((p.eval_with(&vals) - direct).norm() < 1e-15);
        let c = p.instantiate(&[]);
        assert!((c.eval(z, z * 2.0, z) - direct).norm() < 1e-15);
    }

    #[test]
    fn display() {
        let p = Poly::int(2) * Poly::x() * Poly::y() - Poly::from_ratio(1, 2) * Poly::t();
        assert_eq!(p.to_string(), "2*x*y - 1/2*t");
    }
}
