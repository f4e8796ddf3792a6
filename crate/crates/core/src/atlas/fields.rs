//! Exact polynomial vector fields in every chart, obtained by pushing the
//! chart-0 field down the adjacency tree symbolically.

use std::sync::OnceLock;

use num_complex::Complex64;

use crate::symbolic::{CPoly, Poly, Rational, Var};

use super::formulas::{chart_count, denominator, field0_numerator, parent, transition};
use super::{AtlasError, Params, PainleveType};

/// Field numerators per chart over the common time denominator `d(t)`.
#[derive(Clone, Debug)]
pub struct SymbolicAtlas {
    pub denominator: Poly,
    pub numerators: Vec<(Poly, Poly)>,
}

fn param_polys(pt: PainleveType) -> Vec<Poly> {
    (0..pt.param_names().len()).map(Poly::p).collect()
}

fn derive(pt: PainleveType) -> SymbolicAtlas {
    let p = param_polys(pt);
    let (x, y, t) = (Poly::x(), Poly::y(), Poly::t());
    let den = denominator(pt, &t);
    let n = chart_count(pt);
    let mut numerators: Vec<Option<(Poly, Poly)>> = vec![None; n];
    numerators[0] = Some(field0_numerator(pt, &p, &t, &x, &y));
    // Charts are numbered so that every parent precedes its children.
    for c in 1..n {
        let par = parent(pt, c).expect("tree");
        let (np_x, np_y) = numerators[par].clone().expect("parent derived first");
        let (tx, ty) = transition(pt, c, par, &p, &t, &x, &y).expect("adjacent");
        let composed = |f: &Poly| f.subs(&[(Var::X, tx.clone()), (Var::Y, ty.clone())]);
        let rx = composed(&np_x) - den.clone() * tx.deriv(Var::T);
        let ry = composed(&np_y) - den.clone() * ty.deriv(Var::T);
        let (a, b) = (tx.deriv(Var::X), tx.deriv(Var::Y));
        let (cc, d) = (ty.deriv(Var::X), ty.deriv(Var::Y));
        let det = a.clone() * d.clone() - b.clone() * cc.clone();
        let det_inv = constant_inverse(&det).unwrap_or_else(|| {
            panic!("{pt:?} transition {c}->{par} has non-constant Jacobian {det}")
        });
        let nx = (d * rx.clone() - b * ry.clone()) * det_inv.clone();
        let ny = (a * ry - cc * rx) * det_inv;
        numerators[c] = Some((nx, ny));
    }
    SymbolicAtlas {
        denominator: den,
        numerators: numerators.into_iter().map(|f| f.expect("all derived")).collect(),
    }
}

fn constant_inverse(p: &Poly) -> Option<Poly> {
    let mut terms = p.terms();
    let (e, c) = terms.next()?;
    if terms.next().is_some() || e.iter().any(|&k| k != 0) {
        return None;
    }
    Some(Poly::constant(Rational::from_integer(1) / *c))
}

/// The symbolic atlas of a type with full chart data.
pub fn symbolic_atlas(pt: PainleveType) -> Result<&'static SymbolicAtlas, AtlasError> {
    static E7: OnceLock<SymbolicAtlas> = OnceLock::new();
    static E6: OnceLock<SymbolicAtlas> = OnceLock::new();
    static D4: OnceLock<SymbolicAtlas> = OnceLock::new();
    let cell = match pt {
        PainleveType::E7t => &E7,
        PainleveType::E6t => &E6,
        PainleveType::D4t => &D4,
        other => return Err(AtlasError::NoAtlas(other)),
    };
    Ok(cell.get_or_init(|| derive(pt)))
}

/// Chart fields with the parameters fixed.
#[derive(Clone, Debug)]
pub struct CompiledAtlas {
    pub pt: PainleveType,
    denominator: CPoly,
    fields: Vec<(CPoly, CPoly)>,
}

impl CompiledAtlas {
    pub fn new(params: &Params) -> Result<Self, AtlasError> {
        let sym = symbolic_atlas(params.pt())?;
        let v = params.values();
        Ok(CompiledAtlas {
            pt: params.pt(),
            denominator: sym.denominator.instantiate(v),
            fields: sym.numerators.iter().map(|(a, b)| (a.instantiate(v), b.instantiate(v))).collect(),
        })
    }

    pub fn chart_count(&self) -> usize {
        self.fields.len()
    }

    /// Field value in `chart` at `(x, y)` and time `t`.
    pub fn field(&self, chart: usize, t: Complex64, x: Complex64, y: Complex64) -> (Complex64, Complex64) {
        let d = self.denominator.eval(x, y, t);
        let (fx, fy) = &self.fields[chart];
        (fx.eval(x, y, t) / d, fy.eval(x, y, t) / d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_chart_field_is_polynomial() {
        for pt in PainleveType::full_atlas() {
            let sym = symbolic_atlas(pt).unwrap();
            for (c, (fx, fy)) in sym.numerators.iter().enumerate() {
                assert!(fx.is_polynomial() && fy.is_polynomial(), "{pt:?} chart {c}: {fx} ; {fy}");
            }
        }
    }

    #[test]
    fn chart_one_of_e7() {
        // With c = -alpha - 1/2 the field in chart 1 is explicit.
        let sym = symbolic_atlas(PainleveType::E7t).unwrap();
        let (fx, fy) = &sym.numerators[1];
        let vals = |x: f64, y: f64, t: f64, a: f64| {
            [x, y, t, a, 0.0, 0.0, 0.0].map(|v| Complex64::new(v, 0.0))
        };
        let v = vals(0.3, -0.7, 0.4, 0.25);
        // y1 = 0 and c = 0 make the locus invariant: dy1 = 0 there.
        let on_locus = vals(0.3, 0.0, 0.4, -0.5);
        assert!(fy.eval(&on_locus).norm() < 1e-14);
        assert!(fx.eval(&v).is_finite());
    }
}
