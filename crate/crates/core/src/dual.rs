//! Forward-mode dual numbers `a + b eps` with `eps^2 = 0`.

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dual<T> {
    pub re: T,
    pub eps: T,
}

impl Dual<Complex64> {
    pub fn constant(re: Complex64) -> Self {
        Dual { re, eps: Complex64::new(0.0, 0.0) }
    }

    pub fn new(re: Complex64, eps: Complex64) -> Self {
        Dual { re, eps }
    }

    pub fn recip(&self) -> Self {
        let inv = Complex64::new(1.0, 0.0) / self.re;
        Dual { re: inv, eps: -self.eps * inv * inv }
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.eps.is_finite()
    }
}

impl Add for Dual<Complex64> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Dual { re: self.re + o.re, eps: self.eps + o.eps }
    }
}

impl Sub for Dual<Complex64> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Dual { re: self.re - o.re, eps: self.eps - o.eps }
    }
}

impl Mul for Dual<Complex64> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Dual { re: self.re * o.re, eps: self.re * o.eps + self.eps * o.re }
    }
}

impl Div for Dual<Complex64> {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Self) -> Self {
        self * o.recip()
    }
}

impl Neg for Dual<Complex64> {
    type Output = Self;
    fn neg(self) -> Self {
        Dual { re: -self.re, eps: -self.eps }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_and_quotient_rules() {
        let c = |r: f64| Complex64::new(r, 0.0);
        let x = Dual::new(Complex64::new(2.0, 1.0), c(1.0));
        let f = x * x * x;
        assert!((f.eps - x.re * x.re * 3.0).norm() < 1e-14);
        let g = Dual::constant(c(1.0)) / x;
        assert!((g.eps + c(1.0) / (x.re * x.re)).norm() < 1e-14);
    }
}
