mod common;

use anyon_thermo::statmech::fermionic_weight_slopes;
use anyon_thermo::transitions::{solve_transition, FreeParameter};
use anyon_thermo::{fermionic_weight, SystemParams, ThermoPoint};
use common::{derivative_checks, random_point, richardson, rng, DERIVATIVE_NAMES};

#[test]
fn capacities_match_finite_differences() {
    let mut r = rng(11);
    for _ in 0..300 {
        let (point, target) = random_point(&mut r, 60, 8.0);
        let tol = if target.abs() < 0.5 { 1e-4 } else { 1e-6 };
        for (check, name) in derivative_checks(&point).iter().zip(DERIVATIVE_NAMES) {
            assert!(check.relative_error() < tol, "{name} at {point:?}: {check:?}");
        }
    }
}

#[test]
fn weight_slopes_match_finite_differences() {
    let mut r = rng(12);
    for _ in 0..200 {
        let (point, _) = random_point(&mut r, 30, 6.0);
        let p = *point.params();
        if p.n_particles() == 1 {
            continue;
        }
        let s = fermionic_weight_slopes(&point);
        let by_nu = |v: f64| fermionic_weight(&point.with_nu(v).unwrap());
        let by_omega = |w: f64| fermionic_weight(&point.with_omega(w).unwrap());
        let by_beta = |b: f64| fermionic_weight(&point.with_beta(b).unwrap());
        let phi_w = point.beta() * p.pauli_energy() / p.omega();
        let gap = (p.pauli_energy() - p.nu()).abs().max(1e-3);
        let fd_nu = richardson(&by_nu, p.nu(), 0.1 / point.beta(), false, 2);
        let fd_w = richardson(&by_omega, p.omega(), 0.1 * (1.0 / phi_w).min(p.omega()), false, 2);
        let fd_b = richardson(&by_beta, point.beta(), 0.1 * (1.0 / gap).min(point.beta()), false, 2);
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-7 * a.abs().max(1e-6);
        assert!(close(s.d_nu, fd_nu), "{} vs {fd_nu}", s.d_nu);
        assert!(close(s.d_omega, fd_w), "{} vs {fd_w}", s.d_omega);
        assert!(close(s.d_beta, fd_b), "{} vs {fd_b}", s.d_beta);
    }
}

#[test]
fn midpoint_slopes_are_exact() {
    for n in [2u32, 3, 5, 10, 30, 60] {
        for d in [n, n + 3, 2 * n] {
            let params = SystemParams::new(n, d, 1.3, 0.0).unwrap();
            let point = ThermoPoint::new(params, 0.7).unwrap();
            let nu = solve_transition(&point, FreeParameter::Nu).unwrap();
            let at = point.with_nu(nu).unwrap();
            let s = fermionic_weight_slopes(&at);
            let beta = at.beta();
            assert!((s.d_nu - beta / 4.0).abs() < 1e-8);
            let expected = beta * (n * (n - 1)) as f64 / 8.0;
            assert!((s.d_omega.abs() - expected).abs() < 1e-8);
        }
    }
}
