//! Stirling cycle driven by the symmetry bias `ν` and Otto cycle driven by
//! the trap frequency `ω`.
//!
//! Sign conventions: work is positive when done *by* the medium, heat is
//! positive when absorbed *by* the medium. Over a closed cycle
//! `W_cyc = Q_H + Q_C`; `Q_C` is obtained from that closure.

use libm::{exp, log1p};

use crate::error::{Error, Result};
use crate::numeric::softplus;
use crate::statmech::{internal_energy, internal_energy_branches, ln_partition_total, statistical_anyon_props};
use crate::system::{h_of, phi, SystemParams, ThermoPoint};

/// `|W_cyc|` at or below this classifies the cycle as [`Regime::Neither`].
pub const WORK_ZERO_TOLERANCE: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Engine,
    Refrigerator,
    Neither,
}

impl Regime {
    pub fn name(self) -> &'static str {
        match self {
            Regime::Engine => "engine",
            Regime::Refrigerator => "refrigerator",
            Regime::Neither => "neither",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CycleResult {
    pub work_cycle: f64,
    pub heat_hot: f64,
    pub heat_cold: f64,
    /// `W_cyc / Q_H`, engines only.
    pub efficiency: Option<f64>,
    /// `Q_C / |W_cyc|`, refrigerators only.
    pub cop: Option<f64>,
    pub regime: Regime,
}

impl CycleResult {
    fn classify(work_cycle: f64, heat_hot: f64) -> Self {
        let heat_cold = work_cycle - heat_hot;
        let regime = if work_cycle > WORK_ZERO_TOLERANCE && heat_hot > 0.0 {
            Regime::Engine
        } else if work_cycle < -WORK_ZERO_TOLERANCE && heat_cold > 0.0 {
            Regime::Refrigerator
        } else {
            Regime::Neither
        };
        CycleResult {
            work_cycle,
            heat_hot,
            heat_cold,
            efficiency: (regime == Regime::Engine).then(|| work_cycle / heat_hot),
            cop: (regime == Regime::Refrigerator).then(|| heat_cold / work_cycle.abs()),
            regime,
        }
    }
}

fn check_baths(beta_hot: f64, beta_cold: f64) -> Result<()> {
    if !(beta_hot > 0.0 && beta_hot.is_finite() && beta_cold.is_finite()) {
        return Err(Error::invalid("beta_hot", "must be positive and finite"));
    }
    if !(beta_hot < beta_cold) {
        return Err(Error::invalid("beta_cold", "the cold bath needs beta_cold > beta_hot"));
    }
    Ok(())
}

/// `ln p_F`, evaluated as `−ln(1 + e^φ)`.
fn ln_fermionic_weight(point: &ThermoPoint) -> f64 {
    match phi(point) {
        Ok(f) => -softplus(f),
        Err(_) => 0.0,
    }
}

/// Work of a quasistatic isothermal `ν` stroke.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NuStroke {
    pub work: f64,
    /// `d < N`: `p_F ≡ 1`, so the stroke does no work.
    pub empty_alt: bool,
}

/// `W = (1/β) ln[p_F(β, ν_i) / p_F(β, ν_f)]`, the free-energy drop `F(ν_i) − F(ν_f)`.
pub fn isothermal_nu_work(beta: f64, nu_initial: f64, nu_final: f64, params: &SystemParams) -> Result<NuStroke> {
    let start = ThermoPoint::new(params.with_nu(nu_initial)?, beta)?;
    let end = start.with_nu(nu_final)?;
    if !params.has_antisymmetric_spin() {
        return Ok(NuStroke { work: 0.0, empty_alt: true });
    }
    Ok(NuStroke {
        work: (ln_fermionic_weight(&start) - ln_fermionic_weight(&end)) / beta,
        empty_alt: false,
    })
}

/// `∂F/∂ν = p_F e^φ`, which equals `1 − p_F`.
pub fn free_energy_nu_slope(point: &ThermoPoint) -> Result<f64> {
    let f = phi(point)?;
    // p_F e^φ = e^φ / (1 + e^φ)
    Ok(crate::numeric::sigmoid(f))
}

/// Which end of the `ν` range the hot isotherm starts from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StrokeOrder {
    /// Hot isotherm drives `ν₂ → ν₁`, cold isotherm drives `ν₁ → ν₂`.
    /// With `ν₁ ≫ ½N(N−1)ħω ≫ ν₂` the medium fermionizes on the hot bath and
    /// bosonizes on the cold one, which is the Carnot-limit arrangement.
    #[default]
    HotDrivesNu2ToNu1,
    /// Hot isotherm drives `ν₁ → ν₂`, cold isotherm drives `ν₂ → ν₁`.
    HotDrivesNu1ToNu2,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StirlingSpec {
    params: SystemParams,
    beta_hot: f64,
    beta_cold: f64,
    nu_1: f64,
    nu_2: f64,
    order: StrokeOrder,
}

impl StirlingSpec {
    /// `params.nu()` is ignored; the cycle sets `ν` itself.
    pub fn new(params: SystemParams, beta_hot: f64, beta_cold: f64, nu_1: f64, nu_2: f64) -> Result<Self> {
        check_baths(beta_hot, beta_cold)?;
        if !(nu_1.is_finite() && nu_2.is_finite()) {
            return Err(Error::invalid("nu", "stroke endpoints must be finite"));
        }
        Ok(Self { params, beta_hot, beta_cold, nu_1, nu_2, order: StrokeOrder::default() })
    }

    pub fn with_order(self, order: StrokeOrder) -> Self {
        Self { order, ..self }
    }

    pub fn params(&self) -> &SystemParams {
        &self.params
    }

    pub fn beta_hot(&self) -> f64 {
        self.beta_hot
    }

    pub fn beta_cold(&self) -> f64 {
        self.beta_cold
    }

    pub fn nu_1(&self) -> f64 {
        self.nu_1
    }

    pub fn nu_2(&self) -> f64 {
        self.nu_2
    }

    pub fn order(&self) -> StrokeOrder {
        self.order
    }

    /// `(ν at which the hot isotherm starts, ν at which it ends)`.
    pub fn hot_stroke(&self) -> (f64, f64) {
        match self.order {
            StrokeOrder::HotDrivesNu2ToNu1 => (self.nu_2, self.nu_1),
            StrokeOrder::HotDrivesNu1ToNu2 => (self.nu_1, self.nu_2),
        }
    }

    pub(crate) fn point(&self, beta: f64, nu: f64) -> Result<ThermoPoint> {
        ThermoPoint::new(self.params.with_nu(nu)?, beta)
    }
}

/// Two quasistatic isotherms joined by two thermalizations at fixed `ν`.
///
/// Starting on the hot bath at `ν_a`: drive to `ν_b`, hand over to the cold
/// bath, drive back to `ν_a`, hand over to the hot bath. Then
/// `W_cyc = W_hot(ν_a→ν_b) + W_cold(ν_b→ν_a)` and
/// `Q_H = U(β_H, ν_b) − U(β_C, ν_a) + W_hot`.
pub fn stirling_cycle(spec: &StirlingSpec) -> Result<CycleResult> {
    let (nu_a, nu_b) = spec.hot_stroke();
    let w_hot = isothermal_nu_work(spec.beta_hot, nu_a, nu_b, &spec.params)?.work;
    let u_hot_end = internal_energy(&spec.point(spec.beta_hot, nu_b)?);
    let u_cold_end = internal_energy(&spec.point(spec.beta_cold, nu_a)?);
    let heat_hot = u_hot_end - u_cold_end + w_hot;
    Ok(CycleResult::classify(stirling_work(spec)?, heat_hot))
}

/// `W_cyc = Σ c_i ln(1 + e^{φ_i})` over the four stroke endpoints, with
/// `c = (1/β_H, −1/β_H, 1/β_C, −1/β_C)`. Since `Σ c_i φ_i = 0`, splitting
/// `ln(1 + e^φ) = max(φ, 0) + ln(1 + e^{−|φ|})` lets the linear parts cancel
/// exactly whenever all endpoints sit on one side of the transition, so tiny
/// cycles far from it keep their sign.
fn stirling_work(spec: &StirlingSpec) -> Result<f64> {
    if !spec.params.has_antisymmetric_spin() {
        return Ok(0.0);
    }
    let (nu_a, nu_b) = spec.hot_stroke();
    let terms = [
        (1.0 / spec.beta_hot, phi(&spec.point(spec.beta_hot, nu_b)?)?),
        (-1.0 / spec.beta_hot, phi(&spec.point(spec.beta_hot, nu_a)?)?),
        (1.0 / spec.beta_cold, phi(&spec.point(spec.beta_cold, nu_a)?)?),
        (-1.0 / spec.beta_cold, phi(&spec.point(spec.beta_cold, nu_b)?)?),
    ];
    let one_sided = terms.iter().all(|t| t.1 >= 0.0) || terms.iter().all(|t| t.1 <= 0.0);
    let linear: f64 = if one_sided { 0.0 } else { terms.iter().map(|&(c, f)| c * f.max(0.0)).sum() };
    let curved: f64 = terms.iter().map(|&(c, f)| c * log1p(exp(-f.abs()))).sum();
    Ok(linear + curved)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StirlingLimits {
    pub work: f64,
    pub heat_hot: f64,
    pub efficiency: f64,
}

/// Limits of work, hot heat and efficiency for complete fermionization on the
/// hot isotherm and complete bosonization on the cold one.
pub fn stirling_limits(spec: &StirlingSpec) -> Result<StirlingLimits> {
    complete_switch_limits(&spec.params, spec.beta_hot, spec.beta_cold)
}

/// [`stirling_limits`] without the `β_H < β_C` requirement of a [`StirlingSpec`].
pub fn complete_switch_limits(params: &SystemParams, beta_hot: f64, beta_cold: f64) -> Result<StirlingLimits> {
    let h = h_of(params.spin_dim(), params.n_particles())?;
    let work = (1.0 / beta_hot - 1.0 / beta_cold) * h;
    // thermal parts of U_F(β_H) − U_F(β_C); ground terms cancel
    let hot = internal_energy_branches(&ThermoPoint::new(*params, beta_hot)?).bose;
    let cold = internal_energy_branches(&ThermoPoint::new(*params, beta_cold)?).bose;
    let heat_hot = h / beta_hot + (hot - cold);
    Ok(StirlingLimits { work, heat_hot, efficiency: work / heat_hot })
}

/// Working medium of the Otto cycle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Medium {
    HamiltonianAnyon,
    Fermion,
    Boson,
    /// Fixed fermionic fraction `k_F`.
    Statistical(f64),
}

/// Internal energy the hot-bath heat is measured against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OttoHeatConvention {
    /// `Q_H = U(β_H, ω₁) − (ω₁/ω₂) U(β_C, ω₂)`: the state handed to the hot
    /// bath is the cold Gibbs state after the compression switch.
    #[default]
    PostCompression,
    /// `Q_H = U(β_H, ω₁) − (ω₁/ω₂) U(β_C, ω₁)`, kept for comparison only.
    ColdAtCompressedFrequency,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OttoSpec {
    params: SystemParams,
    beta_hot: f64,
    beta_cold: f64,
    omega_1: f64,
    omega_2: f64,
    medium: Medium,
    heat: OttoHeatConvention,
}

impl OttoSpec {
    /// `params.omega()` is ignored; `params.nu()` must be zero.
    pub fn new(params: SystemParams, beta_hot: f64, beta_cold: f64, omega_1: f64, omega_2: f64, medium: Medium) -> Result<Self> {
        check_baths(beta_hot, beta_cold)?;
        if params.nu() != 0.0 {
            return Err(Error::invalid("nu", "the Otto cycle runs at nu = 0"));
        }
        if !(omega_2 > 0.0 && omega_2.is_finite() && omega_1.is_finite()) {
            return Err(Error::invalid("omega_2", "must be positive and finite"));
        }
        if !(omega_2 < omega_1) {
            return Err(Error::invalid("omega_2", "expansion requires omega_2 < omega_1"));
        }
        if let Medium::Statistical(k) = medium {
            if !(0.0..=1.0).contains(&k) {
                return Err(Error::invalid("k_fermi", "must lie in [0, 1]"));
            }
        }
        Ok(Self { params, beta_hot, beta_cold, omega_1, omega_2, medium, heat: OttoHeatConvention::default() })
    }

    pub fn with_heat_convention(self, heat: OttoHeatConvention) -> Self {
        Self { heat, ..self }
    }

    pub fn with_medium(self, medium: Medium) -> Self {
        Self { medium, ..self }
    }

    pub fn params(&self) -> &SystemParams {
        &self.params
    }

    pub fn beta_hot(&self) -> f64 {
        self.beta_hot
    }

    pub fn beta_cold(&self) -> f64 {
        self.beta_cold
    }

    pub fn omega_1(&self) -> f64 {
        self.omega_1
    }

    pub fn omega_2(&self) -> f64 {
        self.omega_2
    }

    pub fn medium(&self) -> Medium {
        self.medium
    }

    /// Gibbs-state internal energy of the medium at `(β, ω)`.
    pub fn energy(&self, beta: f64, omega: f64) -> Result<f64> {
        let point = ThermoPoint::new(self.params.with_omega(omega)?, beta)?;
        Ok(match self.medium {
            Medium::HamiltonianAnyon => internal_energy(&point),
            Medium::Fermion => internal_energy_branches(&point).fermi,
            Medium::Boson => internal_energy_branches(&point).bose,
            Medium::Statistical(k) => statistical_anyon_props(&point, k)?.u,
        })
    }
}

/// Fast-switching Otto cycle: adiabatic expansion `ω₁ → ω₂`, cold
/// thermalization, adiabatic compression `ω₂ → ω₁`, hot thermalization.
/// At `ν = 0` the spectrum scales with `ω`, so a frozen state's energy
/// scales by the frequency ratio during each switch.
pub fn otto_cycle(spec: &OttoSpec) -> Result<CycleResult> {
    let ratio = spec.omega_2 / spec.omega_1;
    let u_hot = spec.energy(spec.beta_hot, spec.omega_1)?;
    let u_cold = spec.energy(spec.beta_cold, spec.omega_2)?;
    let work = (1.0 - ratio) * u_hot - (1.0 / ratio - 1.0) * u_cold;
    let heat_hot = match spec.heat {
        OttoHeatConvention::PostCompression => u_hot - u_cold / ratio,
        OttoHeatConvention::ColdAtCompressedFrequency => u_hot - spec.energy(spec.beta_cold, spec.omega_1)? / ratio,
    };
    Ok(CycleResult::classify(work, heat_hot))
}

/// Frequency at which `φ(β, ω) = φ_target`:
/// `ω = (φ_target + βν + h) / (½N(N−1)βħ)`.
pub fn omega_from_phi_target(beta: f64, phi_target: f64, params: &SystemParams) -> Result<f64> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::invalid("beta", "must be positive and finite"));
    }
    let h = h_of(params.spin_dim(), params.n_particles())?;
    let slope = params.pair_count() * beta * params.hbar();
    if slope == 0.0 {
        return Err(Error::Infeasible("phi does not depend on omega for a single particle"));
    }
    let omega = (phi_target + beta * params.nu() + h) / slope;
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::Infeasible("phi target requires a non-positive frequency"));
    }
    Ok(omega)
}

/// `F = −ln Z / β` at `(β, ν)`; exposed for stroke-level checks.
pub fn free_energy_at(beta: f64, nu: f64, params: &SystemParams) -> Result<f64> {
    let point = ThermoPoint::new(params.with_nu(nu)?, beta)?;
    Ok(-ln_partition_total(&point) / beta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use libm::log;

    fn pair() -> SystemParams {
        SystemParams::new(2, 2, 1.0, 0.0).unwrap()
    }

    #[test]
    fn engines_need_positive_hot_heat() {
        let c = CycleResult::classify(0.1, -0.5);
        assert_eq!(c.regime, Regime::Neither);
        assert!(c.efficiency.is_none());
        assert_eq!(CycleResult::classify(0.1, 0.4).regime, Regime::Engine);
    }

    #[test]
    fn identity_stroke_is_workless() {
        let s = isothermal_nu_work(2.0, 0.7, 0.7, &pair()).unwrap();
        assert_eq!(s.work, 0.0);
        let empty = isothermal_nu_work(2.0, 3.0, -3.0, &SystemParams::new(3, 2, 1.0, 0.0).unwrap()).unwrap();
        assert!(empty.empty_alt);
        assert_eq!(empty.work, 0.0);
    }

    #[test]
    fn bosonizing_extracts_work() {
        for (a, b) in [(1.0, 0.0), (50.0, -50.0), (-3.0, -4.0), (10.0, 9.0)] {
            assert!(isothermal_nu_work(1.3, a, b, &pair()).unwrap().work > 0.0);
            assert!(isothermal_nu_work(1.3, b, a, &pair()).unwrap().work < 0.0);
        }
    }

    #[test]
    fn stroke_work_is_free_energy_drop() {
        let p = SystemParams::new(3, 4, 0.8, 0.0).unwrap();
        let w = isothermal_nu_work(10.0, 50.0, -50.0, &p).unwrap().work;
        let df = free_energy_at(10.0, 50.0, &p).unwrap() - free_energy_at(10.0, -50.0, &p).unwrap();
        assert!((w - df).abs() < 1e-10 * df.abs());
    }

    #[test]
    fn equal_biases_give_no_work() {
        let spec = StirlingSpec::new(pair(), 1.0, 2.0, 0.3, 0.3).unwrap();
        let r = stirling_cycle(&spec).unwrap();
        assert_eq!(r.work_cycle, 0.0);
        assert_ne!(r.regime, Regime::Engine);
    }

    #[test]
    fn carnot_setup() {
        let spec = StirlingSpec::new(pair(), 10.0, 20.0, 50.0, -50.0).unwrap();
        let r = stirling_cycle(&spec).unwrap();
        let lim = stirling_limits(&spec).unwrap();
        assert!((lim.work - 0.05 * log(3.0)).abs() < 1e-15);
        assert!((r.work_cycle - 0.0549306).abs() < 1e-4);
        assert!((r.efficiency.unwrap() - 0.5).abs() < 1e-3);
        assert!((r.work_cycle - lim.work).abs() < 1e-3 * lim.work);
        // the other stroke order runs the same loop backwards in ν
        let rev = stirling_cycle(&spec.with_order(StrokeOrder::HotDrivesNu1ToNu2)).unwrap();
        assert!((rev.work_cycle + r.work_cycle).abs() < 1e-12);
    }

    #[test]
    fn equal_baths_have_no_limit_work() {
        assert_eq!(complete_switch_limits(&pair(), 2.0, 2.0).unwrap().work, 0.0);
        assert!(StirlingSpec::new(pair(), 2.0, 2.0, 1.0, -1.0).is_err());
    }

    #[test]
    fn nu_slope_identity() {
        let p = ThermoPoint::new(pair(), log(3.0)).unwrap();
        assert!((free_energy_nu_slope(&p).unwrap() - 0.5).abs() < 1e-15);
        let far = ThermoPoint::new(pair().with_nu(1e3).unwrap(), 1.0).unwrap();
        assert!(free_energy_nu_slope(&far).unwrap() < 1e-300);
    }

    #[test]
    fn otto_spec_validation() {
        assert!(OttoSpec::new(pair(), 1.0, 2.0, 1.0, 2.0, Medium::Fermion).is_err());
        assert!(OttoSpec::new(pair().with_nu(0.1).unwrap(), 1.0, 2.0, 2.0, 1.0, Medium::Fermion).is_err());
        assert!(OttoSpec::new(pair(), 1.0, 2.0, 2.0, 1.0, Medium::Statistical(1.2)).is_err());
        assert!(OttoSpec::new(pair(), 2.0, 1.0, 2.0, 1.0, Medium::Boson).is_err());
    }

    #[test]
    fn omega_target_round_trip() {
        let w = omega_from_phi_target(1.0, 0.0, &pair()).unwrap();
        assert!((w - log(3.0)).abs() < 1e-15);
        assert!(omega_from_phi_target(1.0, -5.0, &pair()).is_err());
        assert!(omega_from_phi_target(1.0, 0.0, &SystemParams::new(1, 2, 1.0, 0.0).unwrap()).is_err());
    }
}
