#![allow(dead_code)]

use anyon_thermo::{capacities, h_of, internal_energy, SystemParams, ThermoPoint};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// Central difference (first or second order) extrapolated through
/// `levels` Richardson steps, halving the step each time.
pub fn richardson(f: &dyn Fn(f64) -> f64, x: f64, step: f64, second: bool, levels: usize) -> f64 {
    let fx = f(x);
    let d = |h: f64| {
        if second {
            (f(x + h) - 2.0 * fx + f(x - h)) / (h * h)
        } else {
            (f(x + h) - f(x - h)) / (2.0 * h)
        }
    };
    let mut t: Vec<f64> = (0..=levels).map(|i| d(step / 2f64.powi(i as i32))).collect();
    for k in 1..=levels {
        let m = 4f64.powi(k as i32);
        for i in (k..=levels).rev() {
            t[i] = (m * t[i] - t[i - 1]) / (m - 1.0);
        }
    }
    t[levels]
}

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn log_uniform(rng: &mut StdRng, lo: f64, hi: f64) -> f64 {
    rng.random_range(lo.ln()..hi.ln()).exp()
}

/// Random point with `d ≥ N`, `βħω` log-uniform in `[0.05, 5]` and `ν`
/// chosen so that `φ` is uniform in `[−phi_span, phi_span]`.
pub fn random_point(rng: &mut StdRng, max_n: u32, phi_span: f64) -> (ThermoPoint, f64) {
    let n = rng.random_range(1..=max_n);
    let d = rng.random_range(n..=2 * n + 4);
    let x = log_uniform(rng, 0.05, 5.0);
    let omega = log_uniform(rng, 0.5, 2.0);
    let beta = x / omega;
    let target = rng.random_range(-phi_span..=phi_span);
    let h = h_of(d, n).unwrap();
    let pairs = 0.5 * n as f64 * (n as f64 - 1.0);
    let nu = pairs * omega - (target + h) / beta;
    let params = SystemParams::new(n, d, omega, nu).unwrap();
    (ThermoPoint::new(params, beta).unwrap(), target)
}

pub const DERIVATIVE_NAMES: [&str; 6] = ["dU/dT", "dU/dnu", "dU/domega", "d2U/dT2", "d2U/dnu2", "d2U/domega2"];

/// One analytic derivative next to its finite-difference estimate.
#[derive(Debug, Clone, Copy)]
pub struct DerivativeCheck {
    pub analytic: f64,
    pub numeric: f64,
    /// Natural magnitude of the derivative; relative error is measured
    /// against `max(|analytic|, scale)` so zero crossings stay meaningful.
    pub scale: f64,
}

impl DerivativeCheck {
    pub fn relative_error(&self) -> f64 {
        (self.analytic - self.numeric).abs() / self.analytic.abs().max(self.scale).max(f64::MIN_POSITIVE)
    }
}

/// Compare every [`capacities`] entry with finite differences of [`internal_energy`].
///
/// Steps follow the fastest local feature: the `φ` slope along each axis
/// and the largest mode energy that still carries Boltzmann weight.
pub fn derivative_checks(point: &ThermoPoint) -> [DerivativeCheck; 6] {
    let c = capacities(point);
    let p = *point.params();
    let beta = point.beta();
    let t = point.temperature();
    let u_t = |tt: f64| internal_energy(&ThermoPoint::from_temperature(p, tt).unwrap());
    let u_nu = |v: f64| internal_energy(&point.with_nu(v).unwrap());
    let u_w = |w: f64| internal_energy(&point.with_omega(w).unwrap());

    let modes = (point.reduced_quantum() * p.n_particles() as f64).min(36.0);
    let gap = (p.pauli_energy() - p.nu()).abs();
    let s_t = t / 1f64.max(beta * gap).max(modes);
    let s_nu = 1.0 / beta;
    let s_w = p.omega() / 1f64.max(beta * p.pauli_energy()).max(modes);

    let check = |analytic, numeric, scale| DerivativeCheck { analytic, numeric, scale };
    [
        check(c.c_temp, richardson(&u_t, t, 0.1 * s_t, false, 2), 0.0),
        check(c.c_nu, richardson(&u_nu, p.nu(), 0.1 * s_nu, false, 2), 0.0),
        check(c.c_omega, richardson(&u_w, p.omega(), 0.1 * s_w, false, 2), 0.5 * p.hbar() * p.n_particles() as f64),
        check(c.d2_temp, richardson(&u_t, t, 0.2 * s_t, true, 2), c.c_temp.abs() / t),
        check(c.d2_nu, richardson(&u_nu, p.nu(), 0.2 * s_nu, true, 2), c.c_nu.abs() * beta),
        check(c.d2_omega, richardson(&u_w, p.omega(), 0.2 * s_w, true, 2), c.c_omega.abs() / p.omega()),
    ]
}
