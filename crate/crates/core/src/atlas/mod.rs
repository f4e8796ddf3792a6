//! Chart atlases of the Painleve equations of type E7~ (PII), E6~ (PIV)
//! and D4~ (PVI): coordinates, transition maps and vector fields.

mod fields;
pub mod formulas;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dual::Dual;

pub use fields::{symbolic_atlas, CompiledAtlas, SymbolicAtlas};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AtlasError {
    #[error("no chart atlas is available for {0}")]
    NoAtlas(PainleveType),
    #[error("time {0} is a puncture of the time domain")]
    PunctureHit(Complex64),
    #[error("charts {0} and {1} are not adjacent")]
    NotAdjacent(usize, usize),
    #[error("point lies outside the overlap of charts {0} and {1}")]
    OutsideOverlap(usize, usize),
    #[error("chart {0} does not exist")]
    InvalidChart(usize),
    #[error("invalid parameters: {0}")]
    BadParams(String),
    #[error("unknown Painleve type {0}")]
    UnknownType(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PainleveType {
    E7t,
    E6t,
    D4t,
    D5t,
    D6t,
    E8t,
    D7t,
    D8t,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Capability {
    FullAtlas,
    RiccatiCatalogOnly,
    NonExistenceOnly,
}

impl PainleveType {
    pub const ALL: [PainleveType; 8] = [
        PainleveType::E7t,
        PainleveType::E6t,
        PainleveType::D4t,
        PainleveType::D5t,
        PainleveType::D6t,
        PainleveType::E8t,
        PainleveType::D7t,
        PainleveType::D8t,
    ];

    pub fn full_atlas() -> [PainleveType; 3] {
        [PainleveType::E7t, PainleveType::E6t, PainleveType::D4t]
    }

    pub fn capability(self) -> Capability {
        use PainleveType::*;
        match self {
            E7t | E6t | D4t => Capability::FullAtlas,
            D5t | D6t => Capability::RiccatiCatalogOnly,
            E8t | D7t | D8t => Capability::NonExistenceOnly,
        }
    }

    /// Parameter names in storage order.
    pub fn param_names(self) -> &'static [&'static str] {
        use PainleveType::*;
        match self {
            E7t => &["alpha"],
            E6t => &["k0", "kinf"],
            D4t => &["k0", "k1", "kt", "kinf"],
            D5t => &["k0", "kt", "kinf"],
            D6t => &["k0", "kinf"],
            E8t | D7t | D8t => &[],
        }
    }

    /// Excluded times.
    pub fn punctures(self) -> &'static [f64] {
        use PainleveType::*;
        match self {
            D4t => &[0.0, 1.0],
            D5t | D6t => &[0.0],
            _ => &[],
        }
    }

    /// Short name as used on the command line (`E7`, `D4`, ...).
    pub fn short_name(self) -> &'static str {
        use PainleveType::*;
        match self {
            E7t => "E7",
            E6t => "E6",
            D4t => "D4",
            D5t => "D5",
            D6t => "D6",
            E8t => "E8",
            D7t => "D7",
            D8t => "D8",
        }
    }

    /// The affine root type labelling the pair.
    pub fn affine_type(self) -> crate::rootlat::AffineType {
        self.short_name().parse().expect("valid affine label")
    }
}

impl fmt::Display for PainleveType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}~", self.short_name())
    }
}

impl FromStr for PainleveType {
    type Err = AtlasError;

    /// Accepts `E7`, `E7t`, `E7~` and `~E7`, case-insensitively.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let core = s.trim().trim_start_matches('~').trim_end_matches('~');
        let core = core.strip_suffix('t').or_else(|| core.strip_suffix('T')).unwrap_or(core);
        PainleveType::ALL
            .into_iter()
            .find(|pt| pt.short_name().eq_ignore_ascii_case(core))
            .ok_or_else(|| AtlasError::UnknownType(s.to_string()))
    }
}

/// Complex parameters of a Painleve type, in [`PainleveType::param_names`] order.
#[derive(Clone, Debug, PartialEq)]
pub struct Params {
    pt: PainleveType,
    values: Vec<Complex64>,
}

impl Params {
    pub fn new(pt: PainleveType, values: Vec<Complex64>) -> Result<Self, AtlasError> {
        let n = pt.param_names().len();
        if values.len() != n {
            return Err(AtlasError::BadParams(format!(
                "{pt} takes {n} parameters, got {}",
                values.len()
            )));
        }
        Ok(Params { pt, values })
    }

    pub fn real(pt: PainleveType, values: &[f64]) -> Result<Self, AtlasError> {
        Self::new(pt, values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    /// Builds parameters from `name = value` pairs; every name of the type
    /// must appear exactly once and no other name is allowed.
    pub fn from_named(pt: PainleveType, pairs: &[(String, Complex64)]) -> Result<Self, AtlasError> {
        let names = pt.param_names();
        let mut values = vec![None; names.len()];
        for (name, v) in pairs {
            let idx = names
                .iter()
                .position(|n| n.eq_ignore_ascii_case(name))
                .ok_or_else(|| AtlasError::BadParams(format!("{pt} has no parameter {name}")))?;
            if values[idx].replace(*v).is_some() {
                return Err(AtlasError::BadParams(format!("parameter {name} given twice")));
            }
        }
        let values = values
            .into_iter()
            .zip(names)
            .map(|(v, n)| v.ok_or_else(|| AtlasError::BadParams(format!("missing parameter {n}"))))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Params { pt, values })
    }

    pub fn pt(&self) -> PainleveType {
        self.pt
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn get(&self, name: &str) -> Option<Complex64> {
        let idx = self.pt.param_names().iter().position(|n| *n == name)?;
        Some(self.values[idx])
    }
}

/// A phase-space point tagged with its chart.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChartPoint {
    pub chart: usize,
    pub x: Complex64,
    pub y: Complex64,
}

impl ChartPoint {
    pub fn new(chart: usize, x: Complex64, y: Complex64) -> Self {
        ChartPoint { chart, x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// `max(|x|, |y|)`.
    pub fn size(&self) -> f64 {
        self.x.norm().max(self.y.norm())
    }
}

fn require_atlas(pt: PainleveType) -> Result<(), AtlasError> {
    match pt.capability() {
        Capability::FullAtlas => Ok(()),
        _ => Err(AtlasError::NoAtlas(pt)),
    }
}

fn require_chart(pt: PainleveType, c: usize) -> Result<(), AtlasError> {
    if c < formulas::chart_count(pt) {
        Ok(())
    } else {
        Err(AtlasError::InvalidChart(c))
    }
}

pub fn check_time(pt: PainleveType, t: Complex64) -> Result<(), AtlasError> {
    if pt.punctures().iter().any(|&p| t == Complex64::new(p, 0.0)) {
        return Err(AtlasError::PunctureHit(t));
    }
    Ok(())
}

pub fn charts(pt: PainleveType) -> Result<Vec<usize>, AtlasError> {
    require_atlas(pt)?;
    Ok((0..formulas::chart_count(pt)).collect())
}

/// Charts sharing a transformation with `c`.
pub fn neighbors(pt: PainleveType, c: usize) -> Vec<usize> {
    (0..formulas::chart_count(pt)).filter(|&d| formulas::adjacent(pt, c, d)).collect()
}

/// The chart-0 vector field.
pub fn vf_chart0(
    p: &Params,
    t: Complex64,
    x: Complex64,
    y: Complex64,
) -> Result<(Complex64, Complex64), AtlasError> {
    require_atlas(p.pt)?;
    check_time(p.pt, t)?;
    let (nx, ny) = formulas::field0_numerator(p.pt, &p.values, &t, &x, &y);
    let d = formulas::denominator(p.pt, &t);
    Ok((nx / d, ny / d))
}

/// Transition between adjacent charts.
pub fn transition(
    p: &Params,
    from: usize,
    to: usize,
    t: Complex64,
    x: Complex64,
    y: Complex64,
) -> Result<(Complex64, Complex64), AtlasError> {
    require_atlas(p.pt)?;
    require_chart(p.pt, from)?;
    require_chart(p.pt, to)?;
    if from == to {
        return Ok((x, y));
    }
    let (a, b) = formulas::transition(p.pt, from, to, &p.values, &t, &x, &y)
        .ok_or(AtlasError::NotAdjacent(from, to))?;
    if a.is_finite() && b.is_finite() {
        Ok((a, b))
    } else {
        Err(AtlasError::OutsideOverlap(from, to))
    }
}

/// Charts visited going from `from` to `to` through the adjacency tree.
pub fn chart_path(pt: PainleveType, from: usize, to: usize) -> Vec<usize> {
    let up = |mut c: usize| {
        let mut v = vec![c];
        while let Some(p) = formulas::parent(pt, c) {
            v.push(p);
            c = p;
        }
        v
    };
    let a = up(from);
    let b = up(to);
    let common = *a.iter().find(|c| b.contains(c)).expect("tree rooted at 0");
    let mut path: Vec<usize> = a.iter().copied().take_while(|&c| c != common).collect();
    path.push(common);
    let tail: Vec<usize> = b.iter().copied().take_while(|&c| c != common).collect();
    path.extend(tail.into_iter().rev());
    path
}

/// Composite transition along the adjacency tree.
pub fn transition_chain(
    p: &Params,
    from: usize,
    to: usize,
    t: Complex64,
    x: Complex64,
    y: Complex64,
) -> Result<(Complex64, Complex64), AtlasError> {
    require_atlas(p.pt)?;
    require_chart(p.pt, from)?;
    require_chart(p.pt, to)?;
    let path = chart_path(p.pt, from, to);
    let (mut x, mut y) = (x, y);
    for w in path.windows(2) {
        (x, y) = transition(p, w[0], w[1], t, x, y)?;
    }
    Ok((x, y))
}

type Pair = (Complex64, Complex64);

/// Pushes a tangent vector `v` at `(x, y)` (with `dt = 1`) through the
/// chain of transitions `path` using dual numbers. Returns the image point
/// and image vector.
fn push_forward(
    p: &Params,
    path: &[usize],
    t: Complex64,
    q: Pair,
    v: Pair,
) -> Result<(Pair, Pair), AtlasError> {
    let params: Vec<Dual<Complex64>> = p.values.iter().map(|&c| Dual::constant(c)).collect();
    let td = Dual::new(t, Complex64::new(1.0, 0.0));
    let mut x = Dual::new(q.0, v.0);
    let mut y = Dual::new(q.1, v.1);
    for w in path.windows(2) {
        let (a, b) = formulas::transition(p.pt, w[0], w[1], &params, &td, &x, &y)
            .ok_or(AtlasError::NotAdjacent(w[0], w[1]))?;
        if !(a.is_finite() && b.is_finite()) {
            return Err(AtlasError::OutsideOverlap(w[0], w[1]));
        }
        x = a;
        y = b;
    }
    Ok(((x.re, y.re), (x.eps, y.eps)))
}

/// The global vector field in chart `c`, obtained by pushing the chart-0
/// field forward with dual-number Jacobians. Points with no image in
/// chart 0 (for example on the divisor `x4 = 0` of D4~) fall back to the
/// exact polynomial field of the chart.
pub fn vf_any_chart(
    p: &Params,
    c: usize,
    t: Complex64,
    x: Complex64,
    y: Complex64,
) -> Result<(Complex64, Complex64), AtlasError> {
    require_atlas(p.pt)?;
    require_chart(p.pt, c)?;
    check_time(p.pt, t)?;
    if c == 0 {
        return vf_chart0(p, t, x, y);
    }
    let pushed = transition_chain(p, c, 0, t, x, y).and_then(|q0| {
        let v0 = vf_chart0(p, t, q0.0, q0.1)?;
        let path = chart_path(p.pt, 0, c);
        let (_, v) = push_forward(p, &path, t, q0, v0)?;
        Ok(v)
    });
    match pushed {
        Ok(v) if v.0.is_finite() && v.1.is_finite() => Ok(v),
        _ => Ok(CompiledAtlas::new(p)?.field(c, t, x, y)),
    }
}

/// Mismatch between the field in chart `j` and the pushforward of the
/// field in chart `i` through `T_{i -> j}`.
pub fn consistency_residual(
    p: &Params,
    i: usize,
    j: usize,
    t: Complex64,
    x: Complex64,
    y: Complex64,
) -> Result<f64, AtlasError> {
    require_atlas(p.pt)?;
    require_chart(p.pt, i)?;
    require_chart(p.pt, j)?;
    if i == j {
        return Ok(0.0);
    }
    if !formulas::adjacent(p.pt, i, j) {
        return Err(AtlasError::NotAdjacent(i, j));
    }
    let vi = vf_any_chart(p, i, t, x, y)?;
    let (qj, pushed) = push_forward(p, &[i, j], t, (x, y), vi)?;
    let vj = vf_any_chart(p, j, t, qj.0, qj.1)?;
    Ok(((vj.0 - pushed.0).norm_sqr() + (vj.1 - pushed.1).norm_sqr()).sqrt())
}

/// Relative error of `T_{j -> i}(T_{i -> j}(q))` against `q`.
pub fn round_trip_error(
    p: &Params,
    i: usize,
    j: usize,
    t: Complex64,
    x: Complex64,
    y: Complex64,
) -> Result<f64, AtlasError> {
    let (a, b) = transition(p, i, j, t, x, y)?;
    let (x2, y2) = transition(p, j, i, t, a, b)?;
    let rel = |u: Complex64, v: Complex64| (u - v).norm() / v.norm().max(1.0);
    Ok(rel(x2, x).max(rel(y2, y)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn close(a: (Complex64, Complex64), b: (f64, f64), tol: f64) -> bool {
        (a.0 - c(b.0)).norm() < tol && (a.1 - c(b.1)).norm() < tol
    }

    #[test]
    fn chart_lists() {
        assert_eq!(charts(PainleveType::E7t).unwrap(), vec![0, 1, 2]);
        assert_eq!(charts(PainleveType::E6t).unwrap(), vec![0, 1, 2, 3]);
        assert_eq!(charts(PainleveType::D4t).unwrap(), vec![0, 1, 2, 3, 4, 5]);
        assert_eq!(charts(PainleveType::D5t), Err(AtlasError::NoAtlas(PainleveType::D5t)));
    }

    #[test]
    fn chart_zero_examples() {
        let e7 = Params::real(PainleveType::E7t, &[-0.5]).unwrap();
        assert!(close(vf_chart0(&e7, c(0.0), c(0.0), c(0.0)).unwrap(), (0.0, 0.0), 1e-15));
        let e7 = Params::real(PainleveType::E7t, &[0.0]).unwrap();
        for t in [0.0, 0.7, -2.5] {
            assert!(close(vf_chart0(&e7, c(t), c(0.0), c(t / 2.0)).unwrap(), (0.0, 0.5), 1e-15));
        }
        let e6 = Params::real(PainleveType::E6t, &[0.0, 0.0]).unwrap();
        assert!(close(vf_chart0(&e6, c(0.3), c(0.0), c(0.0)).unwrap(), (0.0, 0.0), 1e-15));
        let d4 = Params::real(PainleveType::D4t, &[0.0, 0.0, 1.0, 2.0]).unwrap();
        assert!(close(vf_chart0(&d4, c(2.0), c(3.0), c(0.0)).unwrap(), (0.0, 0.5), 1e-15));
        assert!(matches!(vf_chart0(&d4, c(1.0), c(3.0), c(0.0)), Err(AtlasError::PunctureHit(_))));
    }

    #[test]
    fn d4_field_against_bracketed_form() {
        // The bracketed form with explicit poles at x = 0, 1, t.
        let k = [0.3, -0.2, 0.7, 1.1];
        let d4 = Params::real(PainleveType::D4t, &k).unwrap();
        let (t, x, y) = (c(2.5), Complex64::new(0.4, 0.3), Complex64::new(-0.6, 0.2));
        let a = x * (x - 1.0) * (x - t) / (t * (t - 1.0))
            * (2.0 * y - k[0] / x - k[1] / (x - 1.0) - (k[2] - 1.0) / (x - t));
        let got = vf_chart0(&d4, t, x, y).unwrap();
        assert!((got.0 - a).norm() < 1e-13);
        // B from the Hamiltonian H = [x(x-1)(x-t) y^2 - ...]/(t(t-1)): dy = -dH/dx.
        let s = k[0] + k[1] + k[2] - 1.0;
        let h = |x: Complex64| {
            (x * (x - 1.0) * (x - t) * y * y
                - (k[0] * (x - 1.0) * (x - t) + k[1] * x * (x - t) + (k[2] - 1.0) * x * (x - 1.0)) * y
                + (s * s - k[3] * k[3]) / 4.0 * x)
                / (t * (t - 1.0))
        };
        let eps = 1e-6;
        let dh = (h(x + eps) - h(x - eps)) / (2.0 * eps);
        assert!((got.1 + dh).norm() < 1e-8);
    }

    #[test]
    fn transition_examples() {
        let e6 = Params::real(PainleveType::E6t, &[3.0, 0.0]).unwrap();
        assert!(close(transition(&e6, 1, 0, c(0.2), c(0.0), c(1.0)).unwrap(), (3.0, 1.0), 1e-15));
        let d4 = Params::real(PainleveType::D4t, &[0.0, 0.0, 0.0, 1.0]).unwrap();
        assert!(close(transition(&d4, 0, 4, c(2.0), c(1.0), c(0.0)).unwrap(), (1.0, 0.0), 1e-15));
        let e7 = Params::real(PainleveType::E7t, &[-0.5]).unwrap();
        assert!(close(transition(&e7, 0, 1, c(0.0), c(2.0), c(0.0)).unwrap(), (0.5, 0.0), 1e-15));
        assert_eq!(transition(&e7, 1, 2, c(0.0), c(1.0), c(1.0)), Err(AtlasError::NotAdjacent(1, 2)));
        assert_eq!(transition(&e7, 0, 1, c(0.0), c(0.0), c(1.0)), Err(AtlasError::OutsideOverlap(0, 1)));
    }

    #[test]
    fn pushforward_examples() {
        let e7 = Params::real(PainleveType::E7t, &[-0.5]).unwrap();
        let v = vf_any_chart(&e7, 1, c(0.4), Complex64::new(0.7, 0.2), c(0.0)).unwrap();
        assert!(v.1.norm() < 1e-14);
        let d4 = Params::real(PainleveType::D4t, &[0.3, 0.2, 0.4, 0.0]).unwrap();
        let v = vf_any_chart(&d4, 4, c(2.0), c(0.0), Complex64::new(0.5, -0.1)).unwrap();
        assert!(v.0.norm() < 1e-14);
        let v = vf_any_chart(&d4, 5, c(2.0), c(0.0), Complex64::new(0.3, 0.1)).unwrap();
        assert!(v.0.norm() < 1e-14);
        let e6 = Params::real(PainleveType::E6t, &[0.2, 0.5]).unwrap();
        let q = (Complex64::new(0.4, 0.1), Complex64::new(-0.3, 0.8));
        assert_eq!(vf_any_chart(&e6, 0, c(0.1), q.0, q.1), vf_chart0(&e6, c(0.1), q.0, q.1));
    }

    #[test]
    fn dual_and_symbolic_fields_agree() {
        let cases = [
            (PainleveType::E7t, vec![0.3]),
            (PainleveType::E6t, vec![0.4, -0.7]),
            (PainleveType::D4t, vec![0.3, -0.2, 0.6, 1.3]),
        ];
        for (pt, vals) in cases {
            let p = Params::real(pt, &vals).unwrap();
            let compiled = CompiledAtlas::new(&p).unwrap();
            let t = Complex64::new(2.3, 0.4);
            for ch in charts(pt).unwrap() {
                let (x, y) = (Complex64::new(0.8, -0.3), Complex64::new(1.1, 0.6));
                let dual = vf_any_chart(&p, ch, t, x, y).unwrap();
                let exact = compiled.field(ch, t, x, y);
                let err = (dual.0 - exact.0).norm() + (dual.1 - exact.1).norm();
                assert!(err < 1e-9 * (1.0 + exact.0.norm() + exact.1.norm()), "{pt:?} chart {ch}: {err}");
            }
        }
    }

    #[test]
    fn consistency_and_round_trip() {
        let p = Params::real(PainleveType::D4t, &[0.3, -0.2, 0.6, 1.3]).unwrap();
        let (t, x, y) = (c(2.5), Complex64::new(0.7, 0.2), Complex64::new(0.9, -0.4));
        for (i, j) in [(0, 1), (0, 2), (0, 3), (0, 4), (4, 5)] {
            assert!(consistency_residual(&p, i, j, t, x, y).unwrap() < 1e-9);
            assert!(round_trip_error(&p, i, j, t, x, y).unwrap() < 1e-12);
        }
        assert_eq!(consistency_residual(&p, 2, 2, t, x, y).unwrap(), 0.0);
    }

    #[test]
    fn paths_through_tree() {
        assert_eq!(chart_path(PainleveType::E6t, 3, 1), vec![3, 2, 0, 1]);
        assert_eq!(chart_path(PainleveType::D4t, 5, 0), vec![5, 4, 0]);
        assert_eq!(chart_path(PainleveType::E7t, 0, 0), vec![0]);
    }

    #[test]
    fn parse_types() {
        assert_eq!("E6".parse::<PainleveType>().unwrap(), PainleveType::E6t);
        assert_eq!("d4t".parse::<PainleveType>().unwrap(), PainleveType::D4t);
        assert_eq!("E8~".parse::<PainleveType>().unwrap(), PainleveType::E8t);
        assert!("A3".parse::<PainleveType>().is_err());
    }

    #[test]
    fn named_params() {
        let pairs = vec![("kinf".to_string(), c(1.0)), ("k0".to_string(), c(0.0))];
        let p = Params::from_named(PainleveType::E6t, &pairs).unwrap();
        assert_eq!(p.values(), &[c(0.0), c(1.0)]);
        assert!(Params::from_named(PainleveType::E6t, &pairs[..1]).is_err());
        let extra = vec![("alpha".to_string(), c(1.0))];
        assert!(Params::from_named(PainleveType::E6t, &extra).is_err());
    }
}
