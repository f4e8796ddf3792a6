//! Parameter-dependent data derived from the catalog: active loci, their
//! intersection graph, rational solutions and tangency residuals.

use num_complex::Complex64;
use rand::Rng;

use crate::atlas::{self, AtlasError, Capability, ChartPoint, CompiledAtlas, Params, PainleveType};
use crate::rootlat::{DynkinDiagram, RootSystemType};
use crate::symbolic::{Poly, Var};

use super::catalog::{catalog, point, ChartEquation, Coord, LocusSpec};
use super::ode::UPoly;
use super::RiccatiError;

type C = Complex64;

fn vanishes(p: &Poly, params: &[C]) -> bool {
    p.instantiate(params).terms().iter().all(|(_, c)| c.norm() <= 1e-12)
}

/// Whether `l` is present at `params`. The product locus degenerates into
/// two coordinate loci when its value vanishes and is not counted then.
pub fn is_active(l: &LocusSpec, params: &[C]) -> bool {
    if !l.constraint.holds(params) {
        return false;
    }
    l.charts.iter().all(|(_, e)| match e {
        ChartEquation::Product { value } => !vanishes(value, params),
        ChartEquation::Fixed { .. } => true,
    })
}

pub fn active_loci(p: &Params) -> Vec<&'static LocusSpec> {
    catalog(p.pt()).iter().filter(|l| is_active(l, p.values())).collect()
}

/// Whether two loci meet, judged from their equations in shared charts.
pub fn intersect(a: &LocusSpec, b: &LocusSpec, params: &[C]) -> bool {
    a.charts.iter().any(|(c, ea)| {
        let Some(eb) = b.equation_in(*c) else { return false };
        match (ea, eb) {
            (ChartEquation::Fixed { coord: ca, value: ga }, ChartEquation::Fixed { coord: cb, value: gb }) => {
                ca != cb || vanishes(&(ga.clone() - gb.clone()), params)
            }
            (ChartEquation::Product { .. }, ChartEquation::Fixed { value, .. })
            | (ChartEquation::Fixed { value, .. }, ChartEquation::Product { .. }) => !vanishes(value, params),
            (ChartEquation::Product { .. }, ChartEquation::Product { .. }) => true,
        }
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConfigReport {
    pub active: Vec<&'static str>,
    /// Index pairs into `active`.
    pub edges: Vec<(usize, usize)>,
    pub root_type: RootSystemType,
}

/// Active loci at `p` and the Dynkin type of their intersection graph.
pub fn config_at_params(p: &Params) -> Result<ConfigReport, RiccatiError> {
    let active = active_loci(p);
    let mut diagram = DynkinDiagram::with_nodes(active.len());
    let mut edges = Vec::new();
    for i in 0..active.len() {
        for j in i + 1..active.len() {
            if intersect(active[i], active[j], p.values()) {
                diagram.add_edge(i, j)?;
                edges.push((i, j));
            }
        }
    }
    let root_type = diagram.classify_finite()?;
    Ok(ConfigReport { active: active.iter().map(|l| l.name).collect(), edges, root_type })
}

/// A solution `(x(t), y(t))` polynomial in `t` in one chart.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalPoint {
    pub chart: usize,
    pub x: UPoly,
    pub y: UPoly,
    pub source: String,
}

impl RationalPoint {
    pub fn at(&self, t: C) -> ChartPoint {
        ChartPoint::new(self.chart, self.x.eval(t), self.y.eval(t))
    }

    /// `|v(t, q(t)) - q'(t)|` for the chart field `v`.
    pub fn residual(&self, compiled: &CompiledAtlas, t: C) -> f64 {
        let q = self.at(t);
        let (vx, vy) = compiled.field(self.chart, t, q.x, q.y);
        let (dx, dy) = (self.x.deriv().eval(t), self.y.deriv().eval(t));
        ((vx - dx).norm_sqr() + (vy - dy).norm_sqr()).sqrt()
    }
}

/// Solutions at intersections of active coordinate loci, plus the
/// solution `(0, t/2)` of E7~ at `alpha = 0`.
pub fn rational_points(p: &Params) -> Result<Vec<RationalPoint>, RiccatiError> {
    let params = p.values();
    let mut out: Vec<RationalPoint> = Vec::new();
    let active = active_loci(p);
    for (i, a) in active.iter().enumerate() {
        for b in &active[i + 1..] {
            for (c, ea) in &a.charts {
                let (
                    Some(ChartEquation::Fixed { coord: cb, value: gb }),
                    ChartEquation::Fixed { coord: ca, value: ga },
                ) = (b.equation_in(*c), ea)
                else {
                    continue;
                };
                if ca == cb {
                    continue;
                }
                let (gx, gy) = if *ca == Coord::X { (ga, gb) } else { (gb, ga) };
                let cand = RationalPoint {
                    chart: *c,
                    x: UPoly::from_poly(gx, params)?,
                    y: UPoly::from_poly(gy, params)?,
                    source: format!("{} & {}", a.name, b.name),
                };
                if !out.iter().any(|r| r.chart == cand.chart && r.x == cand.x && r.y == cand.y) {
                    out.push(cand);
                }
            }
        }
    }
    if p.pt() == PainleveType::E7t && params[0].norm() <= 1e-12 {
        out.push(RationalPoint {
            chart: 0,
            x: UPoly::default(),
            y: UPoly::new(vec![C::new(0.0, 0.0), C::new(0.5, 0.0)]),
            source: "alpha = 0".to_string(),
        });
    }
    Ok(out)
}

/// `|d/dt g|` along the flow for the defining polynomial `g` of `l` in the
/// chart of `q`.
pub fn invariance_residual(l: &LocusSpec, p: &Params, t: C, q: ChartPoint) -> Result<f64, RiccatiError> {
    if p.pt() != l.pt {
        return Err(RiccatiError::TypeMismatch(l.pt, p.pt()));
    }
    if l.pt.capability() != Capability::FullAtlas {
        return Err(AtlasError::NoAtlas(l.pt).into());
    }
    if !l.constraint.holds(p.values()) {
        return Err(RiccatiError::ConstraintViolated(l.constraint.render(l.pt)));
    }
    let eq = l.equation_in(q.chart).ok_or(RiccatiError::NotInChart(l.name, q.chart))?;
    let g = eq.poly();
    let at = point(p.values(), t, q.x, q.y);
    let scale = 1.0 + q.size();
    if g.eval(&at).norm() > 1e-8 * scale * scale {
        return Err(RiccatiError::NotOnLocus(l.name));
    }
    let (vx, vy) = atlas::vf_any_chart(p, q.chart, t, q.x, q.y)?;
    let d = |v: Var| g.deriv(v).eval(&at);
    Ok((d(Var::X) * vx + d(Var::Y) * vy + d(Var::T)).norm())
}

/// A random time at least `margin` away from the punctures of `pt`.
pub fn sample_time<R: Rng>(pt: PainleveType, rng: &mut R, margin: f64) -> C {
    loop {
        let t = C::new(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5));
        if pt.punctures().iter().all(|&z| (t - z).norm() >= margin) {
            return t;
        }
    }
}

/// A random point of `l` in `chart` at time `t`.
pub fn sample_on_locus<R: Rng>(l: &LocusSpec, params: &[C], chart: usize, t: C, rng: &mut R) -> Option<ChartPoint> {
    let eq = l.equation_in(chart)?;
    let free = C::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
    let at = point(params, t, C::new(0.0, 0.0), C::new(0.0, 0.0));
    Some(match eq {
        ChartEquation::Fixed { coord: Coord::X, value } => ChartPoint::new(chart, value.eval(&at), free),
        ChartEquation::Fixed { coord: Coord::Y, value } => ChartPoint::new(chart, free, value.eval(&at)),
        ChartEquation::Product { value } => {
            let x = if free.norm() < 0.3 { free + 0.5 } else { free };
            ChartPoint::new(chart, x, value.eval(&at) / x)
        }
    })
}

/// Random parameters on the hyperplane of `l`.
pub fn sample_params<R: Rng>(l: &LocusSpec, rng: &mut R) -> Params {
    let n = l.pt.param_names().len();
    let raw: Vec<C> = (0..n).map(|_| C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    Params::new(l.pt, l.constraint.project(&raw)).expect("parameter count")
}
