//! Adaptive complex-time integration of the atlas vector fields and of
//! scalar Riccati equations, continuing through movable poles by chart
//! switching.

mod rk;

use std::io::{self, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::atlas::{self, AtlasError, ChartPoint, CompiledAtlas, Params};
use crate::riccati::RiccatiOde;

use rk::OdeSystem;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FlowError {
    #[error("invalid integrator configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid path: {0}")]
    InvalidPath(String),
    #[error("path passes within the minimum distance of the puncture t = {0}")]
    PunctureHit(Complex64),
    #[error("initial point is not finite")]
    NonFiniteInit,
    #[error("no chart keeps the point below the switch threshold")]
    NoChartAvailable,
    #[error(transparent)]
    Atlas(#[from] AtlasError),
}

/// Tolerances and limits of the integrator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: f64,
    /// Switch threshold on `max(|x|, |y|)`.
    pub rho: f64,
    pub min_puncture_distance: f64,
    /// Limit on attempted steps, accepted or rejected.
    pub max_steps: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_step: 0.1,
            rho: 1e3,
            min_puncture_distance: 0.05,
            max_steps: 1_000_000,
        }
    }
}

impl IntegratorConfig {
    pub fn with_tolerances(rel_tol: f64, abs_tol: f64) -> Self {
        IntegratorConfig { rel_tol, abs_tol, ..Default::default() }
    }

    pub fn validate(&self) -> Result<(), FlowError> {
        let positive = [
            ("rel_tol", self.rel_tol),
            ("abs_tol", self.abs_tol),
            ("max_step", self.max_step),
            ("rho", self.rho),
            ("min_puncture_distance", self.min_puncture_distance),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(FlowError::InvalidConfig(format!("{name} must be positive, got {v}")));
            }
        }
        if self.rel_tol < 10.0 * f64::EPSILON {
            return Err(FlowError::InvalidConfig(format!(
                "rel_tol {} is below ten machine epsilons",
                self.rel_tol
            )));
        }
        if self.max_steps == 0 {
            return Err(FlowError::InvalidConfig("max_steps must be positive".into()));
        }
        Ok(())
    }
}

/// Polyline in the complex `t` plane.
#[derive(Clone, Debug, PartialEq)]
pub struct PathSpec {
    waypoints: Vec<Complex64>,
}

impl PathSpec {
    pub fn new(waypoints: Vec<Complex64>) -> Result<Self, FlowError> {
        if waypoints.is_empty() {
            return Err(FlowError::InvalidPath("no waypoints".into()));
        }
        if waypoints.iter().any(|t| !t.is_finite()) {
            return Err(FlowError::InvalidPath("non-finite waypoint".into()));
        }
        if let Some(w) = waypoints.windows(2).find(|w| w[0] == w[1]) {
            return Err(FlowError::InvalidPath(format!("repeated waypoint {}", w[0])));
        }
        Ok(PathSpec { waypoints })
    }

    /// A path along the real axis.
    pub fn real(points: &[f64]) -> Result<Self, FlowError> {
        Self::new(points.iter().map(|&t| Complex64::new(t, 0.0)).collect())
    }

    /// Builds a path and checks it against `punctures`.
    pub fn avoiding(
        waypoints: Vec<Complex64>,
        punctures: &[Complex64],
        min_distance: f64,
    ) -> Result<Self, FlowError> {
        let path = Self::new(waypoints)?;
        path.check_punctures(punctures, min_distance)?;
        Ok(path)
    }

    pub fn waypoints(&self) -> &[Complex64] {
        &self.waypoints
    }

    pub fn start(&self) -> Complex64 {
        self.waypoints[0]
    }

    pub fn end(&self) -> Complex64 {
        *self.waypoints.last().expect("nonempty")
    }

    /// Smallest distance from the path to `z`.
    pub fn distance_to(&self, z: Complex64) -> f64 {
        if self.waypoints.len() == 1 {
            return (self.waypoints[0] - z).norm();
        }
        self.waypoints
            .windows(2)
            .map(|w| {
                let d = w[1] - w[0];
                let s = ((z - w[0]) * d.conj()).re / d.norm_sqr();
                (w[0] + d * s.clamp(0.0, 1.0) - z).norm()
            })
            .fold(f64::INFINITY, f64::min)
    }

    pub fn check_punctures(&self, punctures: &[Complex64], min_distance: f64) -> Result<(), FlowError> {
        match punctures.iter().find(|&&p| self.distance_to(p) < min_distance) {
            Some(&p) => Err(FlowError::PunctureHit(p)),
            None => Ok(()),
        }
    }
}

/// A recorded state. Riccati trajectories store the value in `x` and
/// leave `y` zero; their chart 0 is `x` and chart 1 is `u = 1/x`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sample {
    pub t: Complex64,
    pub chart: usize,
    pub x: Complex64,
    pub y: Complex64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SwitchEvent {
    pub t: Complex64,
    pub from: usize,
    pub to: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    Completed,
    StepLimit,
    NoChartAvailable,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    pub events: Vec<SwitchEvent>,
    /// Approximate times where a linearized solution crossed `u = 0`.
    pub pole_crossings: Vec<Complex64>,
    pub status: Status,
}

pub const CSV_HEADER: &str = "t_re,t_im,chart,x_re,x_im,y_re,y_im";

impl Trajectory {
    fn empty() -> Self {
        Trajectory { samples: Vec::new(), events: Vec::new(), pole_crossings: Vec::new(), status: Status::Completed }
    }

    pub fn last(&self) -> Option<&Sample> {
        self.samples.last()
    }

    /// The last sample recorded exactly at `t` (waypoints are always hit
    /// exactly).
    pub fn sample_at(&self, t: Complex64) -> Option<&Sample> {
        self.samples.iter().rev().find(|s| s.t == t)
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "{CSV_HEADER}")?;
        for s in &self.samples {
            writeln!(
                w,
                "{:.16e},{:.16e},{},{:.16e},{:.16e},{:.16e},{:.16e}",
                s.t.re, s.t.im, s.chart, s.x.re, s.x.im, s.y.re, s.y.im
            )?;
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("ascii")
    }
}

/// Moves `q` to the adjacent chart minimizing `max(|x|, |y|)` when its size
/// exceeds `rho`.
pub fn switch_chart(p: &Params, t: Complex64, q: ChartPoint, rho: f64) -> Result<ChartPoint, FlowError> {
    if !q.is_finite() {
        return Err(FlowError::NonFiniteInit);
    }
    if q.size() <= rho {
        return Ok(q);
    }
    let mut best: Option<ChartPoint> = None;
    for c in atlas::neighbors(p.pt(), q.chart) {
        if let Ok((x, y)) = atlas::transition(p, q.chart, c, t, q.x, q.y) {
            let cand = ChartPoint::new(c, x, y);
            if best.is_none_or(|b| cand.size() < b.size()) {
                best = Some(cand);
            }
        }
    }
    match best {
        Some(b) if b.size() <= rho => Ok(b),
        _ => Err(FlowError::NoChartAvailable),
    }
}

struct AtlasSystem<'a> {
    params: &'a Params,
    compiled: CompiledAtlas,
    chart: usize,
    rho: f64,
    traj: Trajectory,
}

impl OdeSystem<2> for AtlasSystem<'_> {
    fn rhs(&self, t: Complex64, y: &[Complex64; 2]) -> [Complex64; 2] {
        let (a, b) = self.compiled.field(self.chart, t, y[0], y[1]);
        [a, b]
    }

    fn accept(&mut self, t: Complex64, y: &mut [Complex64; 2], _waypoint: bool) -> Result<(), Status> {
        self.traj.samples.push(Sample { t, chart: self.chart, x: y[0], y: y[1] });
        let q = ChartPoint::new(self.chart, y[0], y[1]);
        if q.size() <= self.rho {
            return Ok(());
        }
        let moved = switch_chart(self.params, t, q, self.rho).map_err(|_| Status::NoChartAvailable)?;
        self.traj.events.push(SwitchEvent { t, from: self.chart, to: moved.chart });
        self.chart = moved.chart;
        *y = [moved.x, moved.y];
        self.traj.samples.push(Sample { t, chart: moved.chart, x: moved.x, y: moved.y });
        Ok(())
    }
}

/// Integrates the Painleve system along `path` starting from `init`.
pub fn integrate_atlas(
    p: &Params,
    path: &PathSpec,
    init: ChartPoint,
    cfg: &IntegratorConfig,
) -> Result<Trajectory, FlowError> {
    cfg.validate()?;
    let compiled = CompiledAtlas::new(p)?;
    if init.chart >= compiled.chart_count() {
        return Err(AtlasError::InvalidChart(init.chart).into());
    }
    if !init.is_finite() {
        return Err(FlowError::NonFiniteInit);
    }
    let punctures: Vec<Complex64> = p.pt().punctures().iter().map(|&v| Complex64::new(v, 0.0)).collect();
    path.check_punctures(&punctures, cfg.min_puncture_distance)?;
    let mut sys = AtlasSystem { params: p, compiled, chart: init.chart, rho: cfg.rho, traj: Trajectory::empty() };
    let status = rk::drive(&mut sys, path, [init.x, init.y], cfg);
    let mut traj = sys.traj;
    traj.status = status;
    Ok(traj)
}

struct RiccatiSystem<'a> {
    ode: &'a RiccatiOde,
    chart: usize,
    rho: f64,
    traj: Trajectory,
}

impl OdeSystem<1> for RiccatiSystem<'_> {
    fn rhs(&self, t: Complex64, v: &[Complex64; 1]) -> [Complex64; 1] {
        let (a, b, c) = self.ode.coefficients(t);
        let v = v[0];
        if self.chart == 0 {
            [a * v * v + b * v + c]
        } else {
            [-(a + b * v + c * v * v)]
        }
    }

    fn accept(&mut self, t: Complex64, v: &mut [Complex64; 1], _waypoint: bool) -> Result<(), Status> {
        let zero = Complex64::new(0.0, 0.0);
        if v[0].norm() > self.rho {
            let to = 1 - self.chart;
            self.traj.events.push(SwitchEvent { t, from: self.chart, to });
            self.chart = to;
            v[0] = v[0].inv();
        }
        self.traj.samples.push(Sample { t, chart: self.chart, x: v[0], y: zero });
        Ok(())
    }
}

/// Integrates `x' = a x^2 + b x + c` on the two-chart model of the
/// projective line.
pub fn integrate_riccati(
    ode: &RiccatiOde,
    path: &PathSpec,
    x0: Complex64,
    cfg: &IntegratorConfig,
) -> Result<Trajectory, FlowError> {
    cfg.validate()?;
    if !x0.is_finite() {
        return Err(FlowError::NonFiniteInit);
    }
    path.check_punctures(&ode.pole_set(), cfg.min_puncture_distance)?;
    let mut sys = RiccatiSystem { ode, chart: 0, rho: cfg.rho, traj: Trajectory::empty() };
    let status = rk::drive(&mut sys, path, [x0], cfg);
    let mut traj = sys.traj;
    traj.status = status;
    Ok(traj)
}

/// The value of a Riccati sample on the `x` chart.
pub fn riccati_value(s: &Sample) -> Complex64 {
    if s.chart == 0 {
        s.x
    } else {
        s.x.inv()
    }
}

pub(crate) use rk::{drive, OdeSystem as System};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atlas::PainleveType;
    use crate::symbolic::Poly;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn square_ode() -> RiccatiOde {
        RiccatiOde::from_polys(&Poly::int(1), &Poly::zero(), &Poly::zero(), &Poly::int(1), &[]).unwrap()
    }

    #[test]
    fn config_validation() {
        assert!(IntegratorConfig::default().validate().is_ok());
        let bad = IntegratorConfig { rel_tol: 1e-17, ..Default::default() };
        assert!(bad.validate().is_err());
        let bad = IntegratorConfig { rho: -1.0, ..Default::default() };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn path_validation() {
        assert!(PathSpec::real(&[0.0, 0.0]).is_err());
        assert!(PathSpec::real(&[]).is_err());
        let p = PathSpec::real(&[0.5, 2.0]).unwrap();
        assert!((p.distance_to(c(1.0)) - 0.0).abs() < 1e-15);
        assert_eq!(p.check_punctures(&[c(1.0)], 0.05), Err(FlowError::PunctureHit(c(1.0))));
        let around = PathSpec::new(vec![c(0.5), Complex64::new(1.0, 0.5), c(1.5)]).unwrap();
        assert!(around.check_punctures(&[c(1.0)], 0.05).is_ok());
    }

    #[test]
    fn zero_path_has_single_sample() {
        let p = Params::real(PainleveType::E7t, &[0.3]).unwrap();
        let path = PathSpec::real(&[0.2]).unwrap();
        let traj = integrate_atlas(&p, &path, ChartPoint::new(0, c(1.0), c(2.0)), &Default::default()).unwrap();
        assert_eq!(traj.samples.len(), 1);
        assert_eq!(traj.status, Status::Completed);
    }

    #[test]
    fn e6_origin_is_stationary() {
        let p = Params::real(PainleveType::E6t, &[0.0, 0.0]).unwrap();
        let path = PathSpec::real(&[0.0, 1.0]).unwrap();
        let traj = integrate_atlas(&p, &path, ChartPoint::new(0, c(0.0), c(0.0)), &Default::default()).unwrap();
        assert!(traj.samples.iter().all(|s| s.x.norm() < 1e-12 && s.y.norm() < 1e-12));
    }

    #[test]
    fn square_before_and_through_pole() {
        let ode = square_ode();
        let cfg = IntegratorConfig::default();
        let path = PathSpec::real(&[0.0, 0.5]).unwrap();
        let traj = integrate_riccati(&ode, &path, c(1.0), &cfg).unwrap();
        assert!((riccati_value(traj.last().unwrap()) - c(2.0)).norm() < 1e-8);
        let path = PathSpec::real(&[0.0, 1.5]).unwrap();
        let traj = integrate_riccati(&ode, &path, c(1.0), &cfg).unwrap();
        assert_eq!(traj.status, Status::Completed);
        assert!(!traj.events.is_empty());
        assert!((riccati_value(traj.last().unwrap()) - c(-2.0)).norm() < 1e-6);
    }

    #[test]
    fn e7_large_point_moves_to_small_chart() {
        // At alpha = -1/2 the point (x0, 0) has y1 = 0 in chart 1.
        let p = Params::real(PainleveType::E7t, &[-0.5]).unwrap();
        let q = ChartPoint::new(0, c(1e6), c(0.0));
        let moved = switch_chart(&p, c(0.3), q, 1e3).unwrap();
        assert_eq!(moved.chart, 1);
        assert!((moved.x - c(1e-6)).norm() < 1e-18);
        let small = ChartPoint::new(0, c(0.5), c(0.5));
        assert_eq!(switch_chart(&p, c(0.3), small, 1e3).unwrap(), small);
        // Every neighbour of chart 0 is large as well.
        let hopeless = ChartPoint::new(0, c(1e-6), c(1e12));
        assert_eq!(switch_chart(&p, c(0.3), hopeless, 1e3), Err(FlowError::NoChartAvailable));
    }

    #[test]
    fn deterministic_csv() {
        let ode = square_ode();
        let path = PathSpec::real(&[0.0, 0.3]).unwrap();
        let a = integrate_riccati(&ode, &path, c(1.0), &Default::default()).unwrap();
        let b = integrate_riccati(&ode, &path, c(1.0), &Default::default()).unwrap();
        assert_eq!(a.to_csv(), b.to_csv());
        assert!(a.to_csv().starts_with(CSV_HEADER));
    }
}
