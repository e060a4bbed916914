//! Closed-form equilibrium thermodynamics.
//!
//! Everything involving partition functions stays in log space:
//! `e^{−βħωN²/2}` underflows around `N ≈ 40` at `βħω = 1`. The fermionic
//! weight is evaluated as a logistic of `φ`, never as a ratio of `Z`s.
//!
//! Internally the total energy is written as
//! `U = U_B + ν + p_F·D` with `D = U_F − U_B − ν = ½ħωN(N−1) − ν`,
//! which makes the derivatives below short:
//! `∂p_F/∂X = −g·∂φ/∂X` and `∂²p_F/∂X² = tanh(φ/2)·g·(∂φ/∂X)²` for `X`
//! in which `φ` is linear, where `g = p_F(1 − p_F)`.

use libm::tanh;

use crate::error::{Error, Result};
use crate::numeric::{bose_occupation, ln_one_minus_exp_neg, log_add_exp, sigmoid};
use crate::system::{h_of, ThermoPoint};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermoProps {
    pub ln_z_fermi: f64,
    pub ln_z_bose: f64,
    pub ln_z_total: f64,
    pub p_fermi: f64,
    pub u_fermi: f64,
    pub u_bose: f64,
    pub u_total: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchEnergies {
    pub fermi: f64,
    pub bose: f64,
}

/// First and second derivatives of the total internal energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacityReport {
    /// `∂U/∂T`
    pub c_temp: f64,
    /// `∂U/∂ν` (dimensionless)
    pub c_nu: f64,
    /// `∂U/∂ω` (action units)
    pub c_omega: f64,
    pub d2_temp: f64,
    pub d2_nu: f64,
    pub d2_omega: f64,
}

/// Derivatives of the fermionic weight `p_F`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightSlopes {
    pub d_beta: f64,
    pub d_nu: f64,
    pub d_omega: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StatisticalAnyon {
    pub ln_z: f64,
    pub u: f64,
    /// `∂U_SA/∂T`; equal to the common heat capacity of both pure branches.
    pub c_temp: f64,
}

/// Thermal (excitation) part of the harmonic-trap branches. Fermions and
/// bosons share it; they differ only by their ground-state energy.
#[derive(Debug, Clone, Copy)]
struct ModeSums {
    /// `Σ_k kħω / (e^{kβħω} − 1)`
    thermal: f64,
    /// `−Σ_k ln(1 − e^{−kβħω})`
    ln_z_excitations: f64,
    /// `∂U_B/∂β`
    du_dbeta: f64,
    /// `∂²U_B/∂β²`
    d2u_dbeta2: f64,
    /// thermal part of `∂U_B/∂ω`
    du_domega: f64,
    /// `∂²U_B/∂ω²`
    d2u_domega2: f64,
}

impl ModeSums {
    fn at(point: &ThermoPoint) -> Self {
        let p = point.params();
        let beta = point.beta();
        let hbar = p.hbar();
        let quantum = p.quantum();
        let mut sums = ModeSums {
            thermal: 0.0,
            ln_z_excitations: 0.0,
            du_dbeta: 0.0,
            d2u_dbeta2: 0.0,
            du_domega: 0.0,
            d2u_domega2: 0.0,
        };
        for k in 1..=p.n_particles() {
            let kf = k as f64;
            let a = kf * quantum;
            let s = beta * a;
            let n = bose_occupation(s);
            // q = e^s/(e^s−1)², r = e^s(e^s+1)/(e^s−1)³ = −dq/ds
            let q = n * (1.0 + n);
            let r = q * (1.0 + 2.0 * n);
            let (occ_minus_sq, sr_minus_2q) = if s < 1e-2 {
                let s2 = s * s;
                (-0.5 + s / 6.0 - s * s2 / 180.0, 1.0 / 6.0 - s2 / 60.0 + s2 * s2 / 1008.0)
            } else {
                (n - s * q, s * r - 2.0 * q)
            };
            sums.thermal += a * n;
            sums.ln_z_excitations -= ln_one_minus_exp_neg(s);
            sums.du_dbeta -= a * a * q;
            sums.d2u_dbeta2 += a * a * a * r;
            sums.du_domega += kf * hbar * occ_minus_sq;
            sums.d2u_domega2 += kf * kf * hbar * hbar * beta * sr_minus_2q;
        }
        sums
    }
}

/// Shared intermediate values at one thermodynamic point.
struct Evaluation {
    beta: f64,
    nu: f64,
    hbar: f64,
    n: f64,
    quantum: f64,
    /// `½ħωN(N−1)`
    pauli: f64,
    sym_log_dim: f64,
    alt_log_dim: Option<f64>,
    /// `None` iff the antisymmetric spin subspace is empty.
    phi: Option<f64>,
    modes: ModeSums,
}

impl Evaluation {
    fn new(point: &ThermoPoint) -> Self {
        let p = point.params();
        let dims = p.subspace_dims();
        let phi = h_of(p.spin_dim(), p.n_particles())
            .ok()
            .map(|h| point.beta() * (p.pauli_energy() - p.nu()) - h);
        Evaluation {
            beta: point.beta(),
            nu: p.nu(),
            hbar: p.hbar(),
            n: p.n_particles() as f64,
            quantum: p.quantum(),
            pauli: p.pauli_energy(),
            sym_log_dim: dims.sym_log_dim,
            alt_log_dim: dims.alt_log_dim,
            phi,
            modes: ModeSums::at(point),
        }
    }

    fn ln_z_fermi(&self) -> f64 {
        -self.beta * self.quantum * self.n * self.n / 2.0 + self.modes.ln_z_excitations
    }

    fn ln_z_bose(&self) -> f64 {
        -self.beta * self.quantum * self.n / 2.0 + self.modes.ln_z_excitations
    }

    fn ln_z_total(&self) -> f64 {
        let fermi_term = self.sym_log_dim + self.ln_z_fermi();
        match self.alt_log_dim {
            Some(alt) => log_add_exp(fermi_term, alt - self.beta * self.nu + self.ln_z_bose()),
            None => fermi_term,
        }
    }

    /// `(p_F, 1 − p_F)`, each evaluated without cancellation.
    fn weights(&self) -> (f64, f64) {
        match self.phi {
            Some(phi) => (sigmoid(-phi), sigmoid(phi)),
            None => (1.0, 0.0),
        }
    }

    /// `g = p_F(1 − p_F) = p_F² e^φ`
    fn curvature(&self) -> f64 {
        let (pf, pb) = self.weights();
        pf * pb
    }

    /// `1 − 2p_F = tanh(φ/2)`
    fn skew(&self) -> f64 {
        match self.phi {
            Some(phi) => tanh(phi / 2.0),
            None => -1.0,
        }
    }

    fn u_bose(&self) -> f64 {
        self.quantum * self.n / 2.0 + self.modes.thermal
    }

    fn u_fermi(&self) -> f64 {
        self.quantum * self.n * self.n / 2.0 + self.modes.thermal
    }

    fn u_total(&self) -> f64 {
        let (pf, pb) = self.weights();
        pf * self.u_fermi() + pb * (self.nu + self.u_bose())
    }

    /// `∂φ/∂ω = βħN(N−1)/2`
    fn dphi_domega(&self) -> f64 {
        self.beta * self.pair_action()
    }

    /// `ħN(N−1)/2 = ∂(½ħωN(N−1))/∂ω`
    fn pair_action(&self) -> f64 {
        0.5 * self.hbar * self.n * (self.n - 1.0)
    }

    fn slopes(&self) -> WeightSlopes {
        let g = self.curvature();
        let gap = self.pauli - self.nu;
        WeightSlopes {
            d_beta: -g * gap,
            d_nu: g * self.beta,
            d_omega: -g * self.dphi_domega(),
        }
    }

    fn capacities(&self, k_boltzmann: f64) -> CapacityReport {
        let (pf, pb) = self.weights();
        let g = self.curvature();
        let skew = self.skew();
        let beta = self.beta;
        let gap = self.pauli - self.nu;
        let m = &self.modes;

        // β derivatives at fixed ν, ω; φ_β = gap.
        let du_dbeta = m.du_dbeta - g * gap * gap;
        let d2u_dbeta2 = m.d2u_dbeta2 + skew * g * gap * gap * gap;
        let c_temp = -k_boltzmann * beta * beta * du_dbeta;
        let d2_temp = k_boltzmann * k_boltzmann * beta * beta * beta * (2.0 * du_dbeta + beta * d2u_dbeta2);

        // ν: φ_ν = −β, D_ν = −1.
        let c_nu = pb + g * beta * gap;
        let d2_nu = skew * g * beta * beta * gap - 2.0 * g * beta;

        // ω: φ_ω = βE', D_ω = E' with E' = ħN(N−1)/2.
        let e_prime = self.pair_action();
        let phi_w = self.dphi_domega();
        let du_bose_domega = self.hbar * self.n / 2.0 + m.du_domega;
        let c_omega = du_bose_domega + pf * e_prime - g * phi_w * gap;
        let d2_omega = m.d2u_domega2 + skew * g * phi_w * phi_w * gap - 2.0 * g * phi_w * e_prime;

        CapacityReport { c_temp, c_nu, c_omega, d2_temp, d2_nu, d2_omega }
    }
}

/// `ln Z_F = −βħωN²/2 − Σ_{k=1..N} ln(1 − e^{−kβħω})`
pub fn ln_partition_fermi(point: &ThermoPoint) -> f64 {
    Evaluation::new(point).ln_z_fermi()
}

/// `ln Z_B = −βħωN/2 − Σ_{k=1..N} ln(1 − e^{−kβħω})`
pub fn ln_partition_bose(point: &ThermoPoint) -> f64 {
    Evaluation::new(point).ln_z_bose()
}

/// `ln Z` for `Z = C(d+N−1,N) Z_F + C(d,N) e^{−βν} Z_B`.
pub fn ln_partition_total(point: &ThermoPoint) -> f64 {
    Evaluation::new(point).ln_z_total()
}

/// Helmholtz free energy `F = −ln Z / β`.
pub fn free_energy(point: &ThermoPoint) -> f64 {
    -ln_partition_total(point) / point.beta()
}

/// Fermionic weight `p_F = 1/(1 + e^φ)`; exactly 1 when `d < N`.
pub fn fermionic_weight(point: &ThermoPoint) -> f64 {
    Evaluation::new(point).weights().0
}

/// `∂p_F/∂β`, `∂p_F/∂ν` and `∂p_F/∂ω`.
pub fn fermionic_weight_slopes(point: &ThermoPoint) -> WeightSlopes {
    Evaluation::new(point).slopes()
}

pub fn internal_energy_branches(point: &ThermoPoint) -> BranchEnergies {
    let e = Evaluation::new(point);
    BranchEnergies { fermi: e.u_fermi(), bose: e.u_bose() }
}

/// `U = p_F U_F + (1 − p_F)(ν + U_B)`
pub fn internal_energy(point: &ThermoPoint) -> f64 {
    Evaluation::new(point).u_total()
}

pub fn thermo_props(point: &ThermoPoint) -> ThermoProps {
    let e = Evaluation::new(point);
    ThermoProps {
        ln_z_fermi: e.ln_z_fermi(),
        ln_z_bose: e.ln_z_bose(),
        ln_z_total: e.ln_z_total(),
        p_fermi: e.weights().0,
        u_fermi: e.u_fermi(),
        u_bose: e.u_bose(),
        u_total: e.u_total(),
    }
}

/// Heat capacity `∂U_F/∂T = ∂U_B/∂T` of either pure branch.
pub fn branch_heat_capacity(point: &ThermoPoint) -> f64 {
    let m = ModeSums::at(point);
    let beta = point.beta();
    -point.params().k_boltzmann() * beta * beta * m.du_dbeta
}

/// Fixed-ratio mixture of fermion and boson ensembles with fermionic fraction `k_F`.
pub fn statistical_anyon_props(point: &ThermoPoint, k_fermi: f64) -> Result<StatisticalAnyon> {
    if !(0.0..=1.0).contains(&k_fermi) {
        return Err(Error::invalid("k_fermi", "must lie in [0, 1]"));
    }
    let e = Evaluation::new(point);
    Ok(StatisticalAnyon {
        ln_z: k_fermi * e.ln_z_fermi() + (1.0 - k_fermi) * e.ln_z_bose(),
        u: k_fermi * e.u_fermi() + (1.0 - k_fermi) * e.u_bose(),
        c_temp: branch_heat_capacity(point),
    })
}

/// Analytic `∂U/∂X` and `∂²U/∂X²` for `X ∈ {T, ν, ω}`.
///
/// When `d < N` these reduce to the pure fermionic branch.
pub fn capacities(point: &ThermoPoint) -> CapacityReport {
    Evaluation::new(point).capacities(point.params().k_boltzmann())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::SystemParams;
    use libm::{exp, log};

    fn point(n: u32, d: u32, omega: f64, nu: f64, beta: f64) -> ThermoPoint {
        ThermoPoint::new(SystemParams::new(n, d, omega, nu).unwrap(), beta).unwrap()
    }

    #[test]
    fn one_particle_has_no_statistics() {
        for beta in [0.1, 1.0, 7.0] {
            let p = point(1, 3, 1.0, 0.2, beta);
            assert_eq!(ln_partition_fermi(&p), ln_partition_bose(&p));
            let e = internal_energy_branches(&p);
            assert_eq!(e.fermi, e.bose);
        }
        let p = point(1, 1, 1.0, 0.0, 1.0);
        assert!((ln_partition_fermi(&p) - (-0.0413249)).abs() < 1e-7);
    }

    #[test]
    fn pair_ground_offset() {
        for beta in [0.3, 1.0, 4.0] {
            let p = point(2, 2, 1.0, 0.0, beta);
            let diff = ln_partition_bose(&p) - ln_partition_fermi(&p);
            assert!((diff - beta).abs() < 1e-13);
        }
    }

    #[test]
    fn thermo_props_invariants() {
        let p = point(6, 9, 1.7, 2.5, 0.6);
        let t = thermo_props(&p);
        let pauli = 0.5 * 6.0 * 5.0 * 1.7;
        assert!((t.ln_z_bose - t.ln_z_fermi - 0.6 * pauli).abs() < 1e-12);
        assert!((t.u_fermi - t.u_bose - pauli).abs() < 1e-12);
        let mixed = t.p_fermi * t.u_fermi + (1.0 - t.p_fermi) * (2.5 + t.u_bose);
        assert!((mixed - t.u_total).abs() < 1e-12);
    }

    #[test]
    fn weight_matches_partition_ratio() {
        let p = point(2, 2, 1.0, 0.0, 1.0);
        let dims = p.params().subspace_dims();
        let ratio = exp(dims.sym_log_dim + ln_partition_fermi(&p) - ln_partition_total(&p));
        let pf = fermionic_weight(&p);
        assert!((pf - ratio).abs() < 1e-12);
        assert!((pf - 1.0 / (1.0 + exp(1.0 - log(3.0)))).abs() < 1e-15);
        assert!((pf - 0.5246331).abs() < 1e-7);
        assert!((fermionic_weight(&point(2, 2, 1.0, 0.0, log(3.0))) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn weight_limits() {
        assert!(fermionic_weight(&point(2, 2, 1.0, -1e6, 1.0)) < 1e-300);
        assert_eq!(fermionic_weight(&point(2, 2, 1.0, 1e6, 1.0)), 1.0);
        assert_eq!(fermionic_weight(&point(3, 2, 1.0, -50.0, 1.0)), 1.0);
    }

    #[test]
    fn empty_alt_collapses_to_fermions() {
        let p = point(3, 2, 1.0, -5.0, 0.7);
        let t = thermo_props(&p);
        let dims = p.params().subspace_dims();
        assert_eq!(t.ln_z_total, dims.sym_log_dim + t.ln_z_fermi);
        assert_eq!(t.u_total, t.u_fermi);
    }

    #[test]
    fn total_partition_large_nu_limit() {
        let p = point(4, 4, 1.0, 1e4, 1.0);
        let dims = p.params().subspace_dims();
        assert_eq!(ln_partition_total(&p), dims.sym_log_dim + ln_partition_fermi(&p));
        assert_eq!(internal_energy(&p), internal_energy_branches(&p).fermi);
    }

    #[test]
    fn energies_at_low_temperature() {
        let p = point(3, 3, 1.0, 0.0, 200.0);
        let e = internal_energy_branches(&p);
        assert!((e.fermi - 4.5).abs() < 1e-12);
        assert!((e.bose - 1.5).abs() < 1e-12);
    }

    #[test]
    fn single_particle_energy() {
        let beta = 0.8;
        let nu = 0.3;
        let p = point(1, 2, 1.0, nu, beta);
        let pf = fermionic_weight(&p);
        let expected = 0.5 + 1.0 / (exp(beta) - 1.0) + (1.0 - pf) * nu;
        assert!((internal_energy(&p) - expected).abs() < 1e-14);
    }

    #[test]
    fn statistical_anyons() {
        let p = point(2, 2, 1.0, 0.0, 1.0);
        let sa = statistical_anyon_props(&p, 1.0).unwrap();
        assert_eq!(sa.ln_z, ln_partition_fermi(&p));
        assert_eq!(sa.u, internal_energy_branches(&p).fermi);
        let half = statistical_anyon_props(&p, 0.5).unwrap();
        assert!((half.u - 2.3950120).abs() < 1e-7);
        assert!(statistical_anyon_props(&p, 1.5).is_err());
    }

    #[test]
    fn midpoint_slopes() {
        let p = point(2, 2, 1.0, 0.0, log(3.0));
        let s = fermionic_weight_slopes(&p);
        assert!((s.d_nu - log(3.0) / 4.0).abs() < 1e-15);
        assert!((s.d_omega + log(3.0) / 4.0).abs() < 1e-15);
    }

    #[test]
    fn capacity_freezes_out() {
        let c = capacities(&point(3, 3, 1.0, 0.0, 60.0));
        assert!(c.c_temp.abs() < 1e-20);
    }

    #[test]
    fn small_mode_series_is_continuous() {
        // straddle the s = 1e-2 series switch
        let below = ModeSums::at(&point(1, 1, 1.0, 0.0, 0.0099999));
        let above = ModeSums::at(&point(1, 1, 1.0, 0.0, 0.0100001));
        assert!((below.du_domega - above.du_domega).abs() < 1e-6);
        assert!((below.d2u_domega2 - above.d2u_domega2).abs() < 1e-6);
    }
}
