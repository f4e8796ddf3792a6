//! Invariant loci carrying Riccati dynamics, per Painleve type.

use std::sync::OnceLock;

use num_complex::Complex64;
use serde_json::{json, Map, Value};

use crate::atlas::{Params, PainleveType};
use crate::symbolic::{Poly, Var, NVARS};

use super::ode::RiccatiOde;
use super::RiccatiError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Coord {
    X,
    Y,
}

impl Coord {
    pub fn var(self) -> Var {
        match self {
            Coord::X => Var::X,
            Coord::Y => Var::Y,
        }
    }

    pub fn other(self) -> Coord {
        match self {
            Coord::X => Coord::Y,
            Coord::Y => Coord::X,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Coord::X => "x",
            Coord::Y => "y",
        }
    }
}

/// Equation of a locus inside one chart.
#[derive(Clone, Debug, PartialEq)]
pub enum ChartEquation {
    /// `coord - value(t, params) = 0`.
    Fixed { coord: Coord, value: Poly },
    /// `x y - value(params) = 0`.
    Product { value: Poly },
}

impl ChartEquation {
    fn fixed(coord: Coord, value: Poly) -> Self {
        ChartEquation::Fixed { coord, value }
    }

    /// The defining polynomial in `x, y, t` and the parameters.
    pub fn poly(&self) -> Poly {
        match self {
            ChartEquation::Fixed { coord, value } => Poly::var(coord.var()) - value.clone(),
            ChartEquation::Product { value } => Poly::x() * Poly::y() - value.clone(),
        }
    }

    pub fn residual(&self, params: &[Complex64], t: Complex64, x: Complex64, y: Complex64) -> Complex64 {
        self.poly().eval(&point(params, t, x, y))
    }

    pub fn render(&self, chart: usize, pt: PainleveType) -> String {
        let names = var_names(pt, chart);
        let names: [&str; NVARS] = std::array::from_fn(|i| names[i].as_str());
        match self {
            ChartEquation::Fixed { coord, value } => {
                format!("{}{chart} = {}", coord.name(), value.render(&names))
            }
            ChartEquation::Product { value } => format!("x{chart}*y{chart} = {}", value.render(&names)),
        }
    }
}

pub(crate) fn point(params: &[Complex64], t: Complex64, x: Complex64, y: Complex64) -> [Complex64; NVARS] {
    let mut v = [Complex64::new(0.0, 0.0); NVARS];
    v[0] = x;
    v[1] = y;
    v[2] = t;
    for (i, p) in params.iter().enumerate() {
        v[Var::param(i) as usize] = *p;
    }
    v
}

fn var_names(pt: PainleveType, chart: usize) -> Vec<String> {
    let mut names = vec![format!("x{chart}"), format!("y{chart}"), "t".to_string()];
    names.extend(pt.param_names().iter().map(|s| s.to_string()));
    names.resize(NVARS, "_".to_string());
    names
}

/// The hyperplane `p[param] = value(other params)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Constraint {
    pub param: usize,
    pub value: Poly,
}

impl Constraint {
    pub fn residual(&self, params: &[Complex64]) -> Complex64 {
        let zero = Complex64::new(0.0, 0.0);
        params[self.param] - self.value.eval(&point(params, zero, zero, zero))
    }

    pub fn holds(&self, params: &[Complex64]) -> bool {
        self.residual(params).norm() <= 1e-12
    }

    /// Substitutes the constrained parameter.
    pub fn apply(&self, p: &Poly) -> Poly {
        p.subs(&[(Var::param(self.param), self.value.clone())])
    }

    /// Projects `params` onto the hyperplane by overwriting the constrained
    /// parameter.
    pub fn project(&self, params: &[Complex64]) -> Vec<Complex64> {
        let zero = Complex64::new(0.0, 0.0);
        let mut v = params.to_vec();
        v[self.param] = zero;
        v[self.param] = self.value.eval(&point(&v, zero, zero, zero));
        v
    }

    pub fn render(&self, pt: PainleveType) -> String {
        let names = var_names(pt, 0);
        let names: [&str; NVARS] = std::array::from_fn(|i| names[i].as_str());
        format!("{} = {}", pt.param_names()[self.param], self.value.render(&names))
    }
}

/// An invariant locus together with the Riccati equation it carries.
#[derive(Clone, Debug, PartialEq)]
pub struct LocusSpec {
    pub pt: PainleveType,
    pub name: &'static str,
    pub constraint: Constraint,
    pub charts: Vec<(usize, ChartEquation)>,
    /// Chart and coordinate carrying the reduced dynamics.
    pub reduced_chart: usize,
    pub reduced_coord: Coord,
    /// Right-hand side as a polynomial in the reduced coordinate, `t` and
    /// the parameters, over `den(t)`.
    pub rhs: Poly,
    pub den: Poly,
}

impl LocusSpec {
    pub fn equation_in(&self, chart: usize) -> Option<&ChartEquation> {
        self.charts.iter().find(|(c, _)| *c == chart).map(|(_, e)| e)
    }

    pub fn is_product(&self) -> bool {
        self.charts.iter().any(|(_, e)| matches!(e, ChartEquation::Product { .. }))
    }

    pub fn to_json(&self) -> Value {
        let mut charts = Map::new();
        for (c, e) in &self.charts {
            charts.insert(c.to_string(), Value::String(e.render(*c, self.pt)));
        }
        let r = reduce(self);
        let names = var_names(self.pt, self.reduced_chart);
        let names: [&str; NVARS] = std::array::from_fn(|i| names[i].as_str());
        json!({
            "name": self.name,
            "constraint": self.constraint.render(self.pt),
            "charts": charts,
            "reduced_on": format!("{}{}", self.reduced_coord.name(), self.reduced_chart),
            "riccati": {
                "a": r.render_coefficient(&r.a, &names),
                "b": r.render_coefficient(&r.b, &names),
                "c": r.render_coefficient(&r.c, &names),
            },
        })
    }
}

/// Riccati coefficients `a, b, c` over the common denominator `den`, as
/// polynomials in `t` and the parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct SymbolicRiccati {
    pub a: Poly,
    pub b: Poly,
    pub c: Poly,
    pub den: Poly,
}

impl SymbolicRiccati {
    pub fn instantiate(&self, params: &Params) -> Result<RiccatiOde, RiccatiError> {
        RiccatiOde::from_polys(&self.a, &self.b, &self.c, &self.den, params.values())
    }

    fn render_coefficient(&self, num: &Poly, names: &[&str; NVARS]) -> String {
        if self.den == Poly::int(1) {
            num.render(names)
        } else if num.is_zero() {
            "0".to_string()
        } else {
            format!("({})/({})", num.render(names), self.den.render(names))
        }
    }

    /// `a, b, c` as display strings.
    pub fn render(&self, pt: PainleveType) -> [String; 3] {
        let names = var_names(pt, 0);
        let names: [&str; NVARS] = std::array::from_fn(|i| names[i].as_str());
        [&self.a, &self.b, &self.c].map(|p| self.render_coefficient(p, &names))
    }

    /// Coefficients of `u'' + p u' + q u = 0` for `x = -u' / (a u)`, as
    /// `[p_num, p_den, q_num, q_den]`.
    pub fn linearized(&self) -> [Poly; 4] {
        let (a, b, c, d) = (&self.a, &self.b, &self.c, &self.den);
        let t = Var::T;
        let p_num = -(a.deriv(t) * d.clone() - a.clone() * d.deriv(t) + b.clone() * a.clone());
        [p_num, a.clone() * d.clone(), a.clone() * c.clone(), d.clone() * d.clone()]
    }

    /// `p` and `q` of [`Self::linearized`] as display strings.
    pub fn render_linear(&self, pt: PainleveType) -> [String; 2] {
        let names = var_names(pt, 0);
        let names: [&str; NVARS] = std::array::from_fn(|i| names[i].as_str());
        let [pn, pd, qn, qd] = self.linearized();
        let frac = |n: &Poly, d: &Poly| {
            if n.is_zero() {
                "0".to_string()
            } else if *d == Poly::int(1) {
                n.render(&names)
            } else {
                format!("({})/({})", n.render(&names), d.render(&names))
            }
        };
        [frac(&pn, &pd), frac(&qn, &qd)]
    }
}

/// The scalar equation carried by `l`.
pub fn reduce(l: &LocusSpec) -> SymbolicRiccati {
    let v = l.reduced_coord.var();
    debug_assert!(l.rhs.min_degree(v) >= 0 && l.rhs.max_degree(v) <= 2);
    SymbolicRiccati { a: l.rhs.coeff(v, 2), b: l.rhs.coeff(v, 1), c: l.rhs.coeff(v, 0), den: l.den.clone() }
}

fn q(n: i64, d: i64) -> Poly {
    Poly::constant(crate::symbolic::Rational::new(n as i128, d as i128))
}

fn build(pt: PainleveType) -> Vec<LocusSpec> {
    use ChartEquation::Product;
    use Coord::{X, Y};
    let (x, y, t) = (Poly::x(), Poly::y(), Poly::t());
    let p = Poly::p;
    let one = || Poly::int(1);
    let zero = Poly::zero;
    let fixed = ChartEquation::fixed;
    let cons = |param: usize, value: Poly| Constraint { param, value };
    let locus = |name, constraint, charts, (reduced_chart, reduced_coord), rhs, den| LocusSpec {
        pt,
        name,
        constraint,
        charts,
        reduced_chart,
        reduced_coord,
        rhs,
        den,
    };
    match pt {
        PainleveType::E7t => vec![locus(
            "C",
            cons(0, q(-1, 2)),
            vec![(0, fixed(Y, zero())), (1, fixed(Y, zero()))],
            (0, X),
            -(x.clone() * x.clone()) - q(1, 2) * t.clone(),
            one(),
        )],
        PainleveType::E6t => {
            let (k0, kinf) = (p(0), p(1));
            vec![
                locus(
                    "C0",
                    cons(0, zero()),
                    vec![(0, fixed(X, zero())), (1, fixed(X, zero()))],
                    (0, Y),
                    Poly::int(-2) * y.clone() * y.clone() + Poly::int(2) * t.clone() * y.clone() - kinf.clone(),
                    one(),
                ),
                locus(
                    "Cinf",
                    cons(1, zero()),
                    vec![(0, fixed(Y, zero())), (2, fixed(Y, zero()))],
                    (0, X),
                    -(x.clone() * x.clone()) - Poly::int(2) * t.clone() * x.clone() - Poly::int(2) * k0.clone(),
                    one(),
                ),
                locus(
                    "Ck0=kinf",
                    cons(1, k0.clone()),
                    vec![(0, Product { value: k0.clone() })],
                    (0, X),
                    -(x.clone() * x.clone()) - Poly::int(2) * t.clone() * x.clone() + Poly::int(2) * k0,
                    one(),
                ),
            ]
        }
        PainleveType::D4t => {
            let (k0, k1, kt, kinf) = (p(0), p(1), p(2), p(3));
            let den = t.clone() * (t.clone() - one());
            let quarter = q(1, 4);
            let sq = |a: Poly| a.clone() * a;
            // Each printed equation is -(1/(t(t-1))) (...).
            vec![
                locus(
                    "C0",
                    cons(0, zero()),
                    vec![(0, fixed(X, zero())), (1, fixed(X, zero()))],
                    (0, Y),
                    -(t.clone() * sq(y.clone())
                        + (k1.clone() * t.clone() + kt.clone() - one()) * y.clone()
                        + quarter.clone() * (sq(k1.clone() + kt.clone() - one()) - sq(kinf.clone()))),
                    den.clone(),
                ),
                locus(
                    "C1",
                    cons(1, zero()),
                    vec![(0, fixed(X, one())), (2, fixed(X, zero()))],
                    (0, Y),
                    -((one() - t.clone()) * sq(y.clone())
                        - ((k0.clone() + kt.clone() - one()) - k0.clone() * t.clone()) * y.clone()
                        + quarter.clone() * (sq(k0.clone() + kt.clone() - one()) - sq(kinf.clone()))),
                    den.clone(),
                ),
                locus(
                    "Ct",
                    cons(2, zero()),
                    vec![(0, fixed(X, t.clone())), (3, fixed(X, zero()))],
                    (0, Y),
                    -(t.clone() * (t.clone() - one()) * sq(y.clone())
                        - ((k0.clone() + k1.clone() - Poly::int(2)) * t.clone() - k0.clone() + one()) * y.clone()
                        + quarter.clone() * (sq(k0.clone() + k1.clone() - one()) - sq(kinf.clone()))),
                    den.clone(),
                ),
                locus(
                    "Ceps",
                    cons(3, one() - k0.clone() - k1.clone() - kt.clone()),
                    vec![(0, fixed(Y, zero())), (4, fixed(Y, zero()))],
                    (0, X),
                    -(k0.clone() * (x.clone() - one()) * (x.clone() - t.clone())
                        + k1.clone() * x.clone() * (x.clone() - t.clone())
                        + (kt.clone() - one()) * x.clone() * (x.clone() - one())),
                    den.clone(),
                ),
                locus(
                    "Cinf",
                    cons(3, zero()),
                    vec![(4, fixed(X, zero())), (5, fixed(X, zero()))],
                    (4, Y),
                    -(sq(y.clone())
                        + ((kt.clone() - one()) * t.clone() + k1.clone()) * y.clone()
                        + quarter * (sq(k1 + kt - one()) - sq(k0)) * t.clone()),
                    den,
                ),
            ]
        }
        PainleveType::D5t => {
            let (k0, kt, kinf) = (p(0), p(1), p(2));
            let quarter = q(1, 4);
            let sq = |a: Poly| a.clone() * a;
            vec![
                locus(
                    "C0",
                    cons(0, zero()),
                    vec![(0, fixed(X, zero())), (1, fixed(X, zero()))],
                    (0, Y),
                    -(sq(y.clone())
                        + (kt.clone() - t.clone()) * y.clone()
                        + quarter.clone() * (sq(kt.clone()) - sq(kinf))),
                    t.clone(),
                ),
                locus(
                    "Ceps",
                    cons(2, -k0.clone() - kt.clone()),
                    vec![(0, fixed(Y, zero())), (3, fixed(Y, zero()))],
                    (0, X),
                    -(k0.clone() * sq(x.clone() - one())
                        + kt.clone() * x.clone() * (x.clone() - one())
                        + t.clone() * x.clone()),
                    t.clone(),
                ),
                locus(
                    "Cinf",
                    cons(2, zero()),
                    vec![(3, fixed(X, zero())), (4, fixed(X, zero()))],
                    (3, Y),
                    -(sq(y.clone()) + (kt.clone() + t.clone()) * y.clone() + quarter * (sq(kt) - sq(k0))),
                    t.clone(),
                ),
            ]
        }
        PainleveType::D6t => {
            let k0 = p(0);
            let two = || Poly::int(2);
            let sq = |a: Poly| a.clone() * a;
            let lin1 = two() * k0.clone() + one();
            let lin3 = two() * k0.clone() + Poly::int(3);
            vec![
                locus(
                    "C1",
                    cons(1, -k0.clone()),
                    vec![(0, fixed(Y, zero())), (2, fixed(Y, zero()))],
                    (0, X),
                    -(two() * t.clone() * sq(x.clone())) - lin1.clone() * x.clone() + two() * t.clone(),
                    t.clone(),
                ),
                locus(
                    "C2",
                    cons(1, k0.clone()),
                    vec![(0, fixed(Y, t.clone())), (3, fixed(Y, zero()))],
                    (0, X),
                    two() * t.clone() * sq(x.clone()) - lin1 * x.clone() + two() * t.clone(),
                    t.clone(),
                ),
                locus(
                    "C3",
                    cons(1, k0.clone() + two()),
                    vec![(1, fixed(Y, zero())), (2, fixed(Y, t.clone()))],
                    (1, X),
                    -(two() * t.clone() * sq(x.clone())) + lin3.clone() * x.clone() - two() * t.clone(),
                    t.clone(),
                ),
                locus(
                    "C4",
                    cons(1, -k0 - two()),
                    vec![(1, fixed(Y, t.clone())), (3, fixed(Y, t.clone()))],
                    (1, X),
                    two() * t.clone() * sq(x.clone()) + lin3 * x - two() * t.clone(),
                    t,
                ),
            ]
        }
        PainleveType::E8t | PainleveType::D7t | PainleveType::D8t => Vec::new(),
    }
}

/// Loci of `pt`; empty for E8~, D7~ and D8~.
pub fn catalog(pt: PainleveType) -> &'static [LocusSpec] {
    static TABLE: OnceLock<Vec<Vec<LocusSpec>>> = OnceLock::new();
    let table = TABLE.get_or_init(|| PainleveType::ALL.iter().map(|&p| build(p)).collect());
    let idx = PainleveType::ALL.iter().position(|&p| p == pt).expect("listed");
    &table[idx]
}

/// Looks a locus up by name, ignoring ASCII case.
pub fn find_locus(pt: PainleveType, name: &str) -> Result<&'static LocusSpec, RiccatiError> {
    catalog(pt)
        .iter()
        .find(|l| l.name.eq_ignore_ascii_case(name))
        .ok_or_else(|| RiccatiError::UnknownLocus(pt, name.to_string()))
}

/// `{"type": .., "loci": [..]}`.
pub fn catalog_json(pt: PainleveType) -> Value {
    json!({
        "type": pt.short_name(),
        "loci": catalog(pt).iter().map(LocusSpec::to_json).collect::<Vec<_>>(),
    })
}
