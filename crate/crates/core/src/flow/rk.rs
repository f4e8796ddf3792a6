//! Dormand-Prince 5(4) with PI step-size control along straight segments
//! of a complex time path.

use num_complex::Complex64;

use super::{IntegratorConfig, PathSpec, Status};

pub(crate) type C = Complex64;

/// A system integrated by [`drive`].
pub(crate) trait OdeSystem<const N: usize> {
    /// Right-hand side `dy/dt`. Non-finite output rejects the step.
    fn rhs(&self, t: C, y: &[C; N]) -> [C; N];

    /// Called at the start, after every accepted step and at every
    /// waypoint. May rewrite the state (chart switches); returning an error
    /// stops the integration with that status.
    fn accept(&mut self, t: C, y: &mut [C; N], waypoint: bool) -> Result<(), Status>;
}

const A2: [f64; 1] = [1.0 / 5.0];
const A3: [f64; 2] = [3.0 / 40.0, 9.0 / 40.0];
const A4: [f64; 3] = [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0];
const A5: [f64; 4] = [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0];
const A6: [f64; 5] = [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0];
const B: [f64; 6] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0];
const C_NODES: [f64; 6] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0];
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

fn combine<const N: usize>(y: &[C; N], h: f64, ks: &[[C; N]], coeffs: &[f64]) -> [C; N] {
    let mut out = *y;
    for (k, &a) in ks.iter().zip(coeffs) {
        if a != 0.0 {
            for i in 0..N {
                out[i] += k[i] * (h * a);
            }
        }
    }
    out
}

fn finite<const N: usize>(v: &[C; N]) -> bool {
    v.iter().all(|z| z.is_finite())
}

struct StepResult<const N: usize> {
    y: [C; N],
    err: f64,
}

/// One Dormand-Prince step of size `h` in the real arclength `s`, where
/// `t = t0 + s * dir`.
fn dp_step<const N: usize, S: OdeSystem<N>>(
    sys: &S,
    t: C,
    dir: C,
    y: &[C; N],
    h: f64,
    cfg: &IntegratorConfig,
) -> Option<StepResult<N>> {
    let f = |s_off: f64, state: &[C; N]| -> [C; N] {
        let mut d = sys.rhs(t + dir * s_off, state);
        for v in d.iter_mut() {
            *v *= dir;
        }
        d
    };
    let mut ks: Vec<[C; N]> = Vec::with_capacity(7);
    ks.push(f(0.0, y));
    let rows: [&[f64]; 5] = [&A2, &A3, &A4, &A5, &A6];
    for (i, row) in rows.iter().enumerate() {
        let yi = combine(y, h, &ks, row);
        if !finite(&yi) {
            return None;
        }
        ks.push(f(C_NODES[i + 1] * h, &yi));
    }
    let y_new = combine(y, h, &ks, &B);
    if !finite(&y_new) {
        return None;
    }
    ks.push(f(h, &y_new));
    let mut err_sq = 0.0;
    for i in 0..N {
        let mut e = C::new(0.0, 0.0);
        for (k, &c) in ks.iter().zip(&E) {
            e += k[i] * c;
        }
        let e = (e * h).norm();
        let scale = cfg.abs_tol + cfg.rel_tol * y[i].norm().max(y_new[i].norm());
        err_sq += (e / scale).powi(2);
    }
    let err = (err_sq / N as f64).sqrt();
    if !err.is_finite() || !ks.iter().all(finite) {
        return None;
    }
    Some(StepResult { y: y_new, err })
}

fn initial_step<const N: usize, S: OdeSystem<N>>(
    sys: &S,
    t: C,
    dir: C,
    y: &[C; N],
    cfg: &IntegratorConfig,
    remaining: f64,
) -> f64 {
    let scale: Vec<f64> = y.iter().map(|v| cfg.abs_tol + cfg.rel_tol * v.norm()).collect();
    let f0 = sys.rhs(t, y);
    let norm = |v: &[C; N]| {
        (v.iter().zip(&scale).map(|(z, s)| (z.norm() / s).powi(2)).sum::<f64>() / N as f64).sqrt()
    };
    let d0 = norm(y);
    let d1 = norm(&f0);
    let _ = dir;
    let h = if d0 < 1e-5 || d1 < 1e-5 || !d1.is_finite() { 1e-6 } else { 0.01 * d0 / d1 };
    h.min(cfg.max_step).min(remaining).max(1e-12 * remaining)
}

/// Integrates `sys` along `path` from `y0`.
pub(crate) fn drive<const N: usize, S: OdeSystem<N>>(
    sys: &mut S,
    path: &PathSpec,
    y0: [C; N],
    cfg: &IntegratorConfig,
) -> Status {
    let mut y = y0;
    let pts = path.waypoints();
    if let Err(status) = sys.accept(pts[0], &mut y, true) {
        return status;
    }
    let mut attempts = 0usize;
    let mut h_prev: Option<f64> = None;
    for seg in pts.windows(2) {
        let (t0, t1) = (seg[0], seg[1]);
        let len = (t1 - t0).norm();
        let dir = (t1 - t0) / len;
        let mut s = 0.0;
        let mut h = h_prev.unwrap_or_else(|| initial_step(sys, t0, dir, &y, cfg, len));
        let mut err_old: f64 = 1e-4;
        loop {
            if attempts >= cfg.max_steps {
                return Status::StepLimit;
            }
            attempts += 1;
            let remaining = len - s;
            h = h.min(cfg.max_step).min(remaining);
            if remaining - h < 1e-12 * len {
                h = remaining;
            }
            if h <= 1e-14 * len.max(1.0) {
                return Status::StepLimit;
            }
            let t = t0 + dir * s;
            match dp_step(sys, t, dir, &y, h, cfg) {
                Some(step) if step.err <= 1.0 => {
                    let end = remaining - h <= 1e-12 * len;
                    s = if end { len } else { s + h };
                    y = step.y;
                    let t_new = if end { t1 } else { t0 + dir * s };
                    if let Err(status) = sys.accept(t_new, &mut y, end) {
                        return status;
                    }
                    let err = step.err.max(1e-10);
                    let fac = 0.9 * err.powf(-0.17) * err_old.powf(0.04);
                    h *= fac.clamp(0.2, 5.0);
                    err_old = err;
                    if end {
                        break;
                    }
                }
                Some(step) => {
                    h *= (0.9 * step.err.powf(-0.2)).clamp(0.1, 0.9);
                }
                None => h *= 0.2,
            }
        }
        h_prev = Some(h);
    }
    Status::Completed
}
