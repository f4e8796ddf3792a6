//! Riccati loci of the Painleve equations: the catalog, reduced scalar
//! equations and their linearization, configurations of loci at special
//! parameters, rational solutions, and the types without any locus.

mod catalog;
mod config;
mod ode;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::atlas::{symbolic_atlas, AtlasError, PainleveType};
use crate::rootlat::{complement_types, LatticeError, RootSystemType};
use crate::symbolic::{Poly, Scalar, Var};

pub use catalog::{
    catalog, catalog_json, find_locus, reduce, ChartEquation, Constraint, Coord, LocusSpec, SymbolicRiccati,
};
pub use config::{
    active_loci, config_at_params, intersect, invariance_residual, is_active, rational_points, sample_on_locus,
    sample_params, sample_time, ConfigReport, RationalPoint,
};
pub use ode::{linearize, solve_via_linear, Linear2Ode, RiccatiOde, UPoly};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RiccatiError {
    #[error("the quadratic coefficient vanishes identically")]
    DegenerateQuadratic,
    #[error("{0} is not a polynomial in t")]
    NotPolynomialInT(String),
    #[error("{0} has no locus named {1}")]
    UnknownLocus(PainleveType, String),
    #[error("locus of {0} used with parameters of {1}")]
    TypeMismatch(PainleveType, PainleveType),
    #[error("parameters violate the constraint {0}")]
    ConstraintViolated(String),
    #[error("locus {0} has no equation in chart {1}")]
    NotInChart(&'static str, usize),
    #[error("point is not on locus {0}")]
    NotOnLocus(&'static str),
    #[error("{0} has Riccati loci; the non-existence report does not apply")]
    NotApplicable(PainleveType),
    #[error(transparent)]
    Atlas(#[from] AtlasError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// Degeneration of the E6~ product locus `x0 y0 = k0` at a given `k0`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConfluenceReport {
    pub k0: (f64, f64),
    /// Factors of `x0 y0 - k0` when it splits into coordinate equations.
    pub factors: Option<[String; 2]>,
    /// At `k0 = 0`: the x-equation on the product locus equals the one on
    /// `Cinf`, the y-equation the one on `C0`.
    pub x_equation_matches: bool,
    pub y_equation_matches: bool,
}

/// Checks how the product locus of E6~ splits as `k0 -> 0`.
pub fn confluence_check(k0: Complex64) -> ConfluenceReport {
    let pt = PainleveType::E6t;
    let prod = find_locus(pt, "Ck0=kinf").expect("listed");
    let c0 = find_locus(pt, "C0").expect("listed");
    let cinf = find_locus(pt, "Cinf").expect("listed");
    let at = |p: &Poly, k: Poly| p.subs(&[(Var::P0, k.clone()), (Var::P1, k)]);
    let names = ["x0", "y0", "t", "k0", "kinf", "_", "_"];
    let factors = if k0.norm() == 0.0 {
        let (fx, fy) = (c0.charts[0].1.poly(), cinf.charts[0].1.poly());
        let product = at(&prod.charts[0].1.poly(), Poly::zero());
        (fx.clone() * fy.clone() == product).then(|| [fx.render(&names), fy.render(&names)])
    } else {
        None
    };
    // The y-equation on the product locus is the restriction of the field
    // with x = k0 / y; the x-equation is the catalog entry.
    let sym = symbolic_atlas(pt).expect("E6~ has an atlas");
    let y_form = sym.numerators[0].1.subs(&[(Var::X, Poly::p(0) * Scalar::recip(&Poly::y()))]);
    let at_zero = |p: &Poly| at(p, Poly::zero());
    let on_constraint = |p: &Poly| prod.constraint.apply(p);
    let x_equation_matches = at_zero(&on_constraint(&prod.rhs)) == at_zero(&cinf.rhs);
    let y_equation_matches = at_zero(&on_constraint(&y_form)) == at_zero(&c0.rhs);
    ConfluenceReport {
        k0: (k0.re, k0.im),
        factors,
        x_equation_matches,
        y_equation_matches,
    }
}

/// Why a Painleve type carries no Riccati locus.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NonexistenceReport {
    #[serde(rename = "type")]
    pub pt: String,
    pub catalog_size: usize,
    pub complement_types: Vec<RootSystemType>,
    pub reason: String,
}

pub fn nonexistence(pt: PainleveType) -> Result<NonexistenceReport, RiccatiError> {
    if !catalog(pt).is_empty() {
        return Err(RiccatiError::NotApplicable(pt));
    }
    let complement: Vec<RootSystemType> = complement_types(pt.affine_type())?.into_iter().collect();
    let reason = if complement.is_empty() {
        format!(
            "no root sublattice of E8 is orthogonal to a primitive embedding of {}, so the pair \
             contains no (-2)-curve and the equation has no Riccati locus",
            pt.affine_type().classical_part()
        )
    } else {
        format!("complement types exist ({}) but no locus is recorded", complement.len())
    };
    Ok(NonexistenceReport { pt: pt.short_name().to_string(), catalog_size: 0, complement_types: complement, reason })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atlas::Params;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn catalog_sizes() {
        use PainleveType::*;
        let sizes: Vec<usize> = [E7t, E6t, D4t, D5t, D6t, E8t, D7t, D8t].iter().map(|&p| catalog(p).len()).collect();
        assert_eq!(sizes, [1, 3, 5, 3, 4, 0, 0, 0]);
        let e7 = &catalog(E7t)[0];
        assert_eq!(e7.constraint.render(E7t), "alpha = -1/2");
        assert_eq!(e7.charts.iter().map(|(c, _)| *c).collect::<Vec<_>>(), [0, 1]);
    }

    #[test]
    fn reduced_equations() {
        let t = Complex64::new(0.4, 0.3);
        let e7 = Params::real(PainleveType::E7t, &[-0.5]).unwrap();
        let ode = reduce(&catalog(PainleveType::E7t)[0]).instantiate(&e7).unwrap();
        let (a, b, cc) = ode.coefficients(t);
        assert_eq!((a, b, cc), (c(-1.0), c(0.0), -t / 2.0));

        let e6 = Params::real(PainleveType::E6t, &[0.0, 0.8]).unwrap();
        let ode = reduce(find_locus(PainleveType::E6t, "C0").unwrap()).instantiate(&e6).unwrap();
        let (a, b, cc) = ode.coefficients(t);
        assert_eq!((a, b, cc), (c(-2.0), t * 2.0, c(-0.8)));

        let (k0, kt) = (0.3, -0.7);
        let d5 = Params::real(PainleveType::D5t, &[k0, kt, 0.0]).unwrap();
        let ode = reduce(find_locus(PainleveType::D5t, "Cinf").unwrap()).instantiate(&d5).unwrap();
        let (a, b, cc) = ode.coefficients(t);
        assert!((a + 1.0 / t).norm() < 1e-15);
        assert!((b + (kt + t) / t).norm() < 1e-15);
        assert!((cc + (kt * kt - k0 * k0) / (4.0 * t)).norm() < 1e-15);
    }

    #[test]
    fn catalog_poles_are_punctures() {
        for pt in PainleveType::ALL {
            for l in catalog(pt) {
                let p = Params::real(pt, &vec![0.3; pt.param_names().len()]).unwrap();
                let ode = reduce(l).instantiate(&p).unwrap();
                assert!(!ode.is_degenerate());
                for z in ode.pole_set() {
                    assert!(pt.punctures().iter().any(|&w| (z - w).norm() < 1e-12), "{pt:?} {}: {z}", l.name);
                }
            }
        }
    }

    #[test]
    fn json_dump() {
        let v = catalog_json(PainleveType::E6t);
        assert_eq!(v["type"], "E6");
        assert_eq!(v["loci"].as_array().unwrap().len(), 3);
        assert_eq!(v["loci"][0]["charts"]["0"], "x0 = 0");
        assert_eq!(v["loci"][2]["charts"]["0"], "x0*y0 = k0");
        assert_eq!(v["loci"][0]["riccati"]["a"], "-2");
    }

    #[test]
    fn confluence() {
        let r = confluence_check(c(0.0));
        assert_eq!(r.factors, Some(["x0".to_string(), "y0".to_string()]));
        assert!(r.x_equation_matches && r.y_equation_matches);
        assert_eq!(confluence_check(c(1.0)).factors, None);
    }

    #[test]
    fn nonexistence_reports() {
        for pt in [PainleveType::E8t, PainleveType::D7t, PainleveType::D8t] {
            let r = nonexistence(pt).unwrap();
            assert_eq!(r.catalog_size, 0);
            assert!(r.complement_types.is_empty());
        }
        assert_eq!(nonexistence(PainleveType::E7t), Err(RiccatiError::NotApplicable(PainleveType::E7t)));
    }
}
