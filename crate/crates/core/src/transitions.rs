//! Locating the fermion/boson transition (`φ = 0`) and dense parameter scans.

use alloc::vec::Vec;

use libm::{exp, log, round};

use crate::error::{Error, Result};
use crate::statmech::{capacities, fermionic_weight, internal_energy, CapacityReport};
use crate::system::{h_of, phi, SystemParams, ThermoPoint};

/// Target accuracy of the root finder on `|φ|`.
pub const PHI_TOLERANCE: f64 = 1e-12;

/// Parameter held free while solving `φ = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FreeParameter {
    Beta,
    Omega,
    Nu,
}

impl FreeParameter {
    fn name(self) -> &'static str {
        match self {
            FreeParameter::Beta => "beta",
            FreeParameter::Omega => "omega",
            FreeParameter::Nu => "nu",
        }
    }
}

/// Value of the free parameter at which `p_F = 1/2`.
///
/// The root is bracketed by geometric expansion over the admissible range
/// (`(0, ∞)` for `β` and `ω`, the real line for `ν`) and refined by bisection
/// until `|φ| < 1e-12` or the bracket collapses to adjacent floats.
pub fn solve_transition(point: &ThermoPoint, free: FreeParameter) -> Result<f64> {
    // fail early on an empty antisymmetric subspace
    phi(point)?;
    let at = phi_along(point, free);
    let (lo, hi) = match free {
        FreeParameter::Beta | FreeParameter::Omega => bracket_positive(&at, free)?,
        FreeParameter::Nu => bracket_real(&at, free)?,
    };
    bisect(&at, lo, hi)
}

/// Bisection inside a caller-supplied bracket; `φ(lo)` and `φ(hi)` must
/// not share a sign.
pub fn solve_transition_in(point: &ThermoPoint, free: FreeParameter, lo: f64, hi: f64) -> Result<f64> {
    let at = phi_along(point, free);
    let (f_lo, f_hi) = (at(lo)?, at(hi)?);
    if (f_lo > 0.0 && f_hi > 0.0) || (f_lo < 0.0 && f_hi < 0.0) {
        return Err(Error::NoBracket { parameter: free.name() });
    }
    bisect(&at, lo, hi)
}

fn phi_along(point: &ThermoPoint, free: FreeParameter) -> impl Fn(f64) -> Result<f64> + '_ {
    move |x| {
        let moved = match free {
            FreeParameter::Beta => point.with_beta(x)?,
            FreeParameter::Omega => point.with_omega(x)?,
            FreeParameter::Nu => point.with_nu(x)?,
        };
        phi(&moved)
    }
}

/// `φ` is increasing in `β` when `½ħωN(N−1) > ν` and increasing in `ω` for
/// `N ≥ 2`; both start at `φ(0⁺) ≤ 0`.
fn bracket_positive<F>(at: &F, free: FreeParameter) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    let no_bracket = Error::NoBracket { parameter: free.name() };
    let mut lo = 1.0;
    let mut f_lo = at(lo)?;
    let mut hi = 1.0;
    let mut f_hi = f_lo;
    if f_lo < 0.0 {
        while f_hi < 0.0 {
            hi *= 2.0;
            if hi > 1e300 {
                return Err(no_bracket);
            }
            f_hi = at(hi)?;
        }
        lo = hi / 2.0;
    } else if f_lo > 0.0 {
        while f_lo > 0.0 {
            lo /= 2.0;
            if lo < 1e-300 {
                return Err(no_bracket);
            }
            f_lo = at(lo)?;
        }
        hi = lo * 2.0;
    } else {
        return Ok((lo, lo));
    }
    // φ must increase across the bracket
    if at(lo)? > 0.0 || at(hi)? < 0.0 {
        return Err(no_bracket);
    }
    Ok((lo, hi))
}

/// `φ` is strictly decreasing in `ν`; returns `(lo, hi)` with `φ(lo) ≥ 0 ≥ φ(hi)`.
fn bracket_real<F>(at: &F, free: FreeParameter) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut step = 1.0;
    let mut lo = -1.0;
    let mut hi = 1.0;
    while at(lo)? < 0.0 || at(hi)? > 0.0 {
        step *= 2.0;
        if step > 1e300 {
            return Err(Error::NoBracket { parameter: free.name() });
        }
        lo = -step;
        hi = step;
    }
    Ok((lo, hi))
}

fn bisect<F>(at: &F, a: f64, b: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let (mut a, mut b) = (a, b);
    let mut fa = at(a)?;
    let fb = at(b)?;
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    let mut best = if fa.abs() < fb.abs() { (a, fa) } else { (b, fb) };
    loop {
        let mid = a + (b - a) / 2.0;
        if mid <= a.min(b) || mid >= a.max(b) {
            return Ok(best.0);
        }
        let fm = at(mid)?;
        if fm.abs() < best.1.abs() {
            best = (mid, fm);
        }
        if fm.abs() < PHI_TOLERANCE {
            return Ok(mid);
        }
        if (fm < 0.0) == (fa < 0.0) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
}

/// Scannable parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parameter {
    Temperature,
    Beta,
    Omega,
    Nu,
    NParticles,
}

impl Parameter {
    pub fn name(self) -> &'static str {
        match self {
            Parameter::Temperature => "temperature",
            Parameter::Beta => "beta",
            Parameter::Omega => "omega",
            Parameter::Nu => "nu",
            Parameter::NParticles => "n_particles",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "temperature" | "temp" | "t" => Parameter::Temperature,
            "beta" => Parameter::Beta,
            "omega" => Parameter::Omega,
            "nu" => Parameter::Nu,
            "n_particles" | "n" => Parameter::NParticles,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisSpec {
    parameter: Parameter,
    start: f64,
    stop: f64,
    count: usize,
    spacing: Spacing,
}

impl AxisSpec {
    pub fn new(parameter: Parameter, start: f64, stop: f64, count: usize, spacing: Spacing) -> Result<Self> {
        if !(start.is_finite() && stop.is_finite()) || start >= stop {
            return Err(Error::invalid("axis", "requires finite start < stop"));
        }
        if count < 2 {
            return Err(Error::invalid("axis", "requires at least two nodes"));
        }
        if spacing == Spacing::Log && start <= 0.0 {
            return Err(Error::invalid("axis", "log spacing requires start > 0"));
        }
        Ok(Self { parameter, start, stop, count, spacing })
    }

    pub fn parameter(&self) -> Parameter {
        self.parameter
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn stop(&self) -> f64 {
        self.stop
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn spacing(&self) -> Spacing {
        self.spacing
    }

    /// Coordinate of node `i`. Particle-number axes round to the nearest integer.
    pub fn node(&self, i: usize) -> f64 {
        let t = i as f64 / (self.count - 1) as f64;
        let raw = if i == 0 {
            self.start
        } else if i == self.count - 1 {
            self.stop
        } else {
            match self.spacing {
                Spacing::Linear => self.start + t * (self.stop - self.start),
                Spacing::Log => exp(log(self.start) + t * (log(self.stop) - log(self.start))),
            }
        };
        match self.parameter {
            Parameter::NParticles => round(raw),
            _ => raw,
        }
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.count).map(|i| self.node(i)).collect()
    }
}

/// Quantity evaluated at each grid node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    PFermi,
    InternalEnergy,
    CTemp,
    COmega,
    CNu,
    Phi,
}

impl Quantity {
    pub fn name(self) -> &'static str {
        match self {
            Quantity::PFermi => "p_fermi",
            Quantity::InternalEnergy => "internal_energy",
            Quantity::CTemp => "c_temp",
            Quantity::COmega => "c_omega",
            Quantity::CNu => "c_nu",
            Quantity::Phi => "phi",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "p_fermi" => Quantity::PFermi,
            "internal_energy" | "u" => Quantity::InternalEnergy,
            "c_temp" => Quantity::CTemp,
            "c_omega" => Quantity::COmega,
            "c_nu" => Quantity::CNu,
            "phi" => Quantity::Phi,
            _ => return None,
        })
    }

    pub fn at(self, point: &ThermoPoint) -> Cell {
        let empty_alt = !point.params().has_antisymmetric_spin();
        let value = match self {
            Quantity::PFermi => fermionic_weight(point),
            Quantity::InternalEnergy => internal_energy(point),
            Quantity::CTemp => capacities(point).c_temp,
            Quantity::COmega => capacities(point).c_omega,
            Quantity::CNu => capacities(point).c_nu,
            // undefined without the antisymmetric branch; the flag carries it
            Quantity::Phi => phi(point).unwrap_or(0.0),
        };
        Cell { value, empty_alt }
    }
}

/// One grid node. `empty_alt` marks `d < N`, where only the fermionic branch exists.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub value: f64,
    pub empty_alt: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridRequest {
    pub x_axis: AxisSpec,
    pub y_axis: AxisSpec,
    pub quantity: Quantity,
    pub base: ThermoPoint,
}

impl GridRequest {
    pub fn len(&self) -> usize {
        self.x_axis.count * self.y_axis.count
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Evaluation point for row-major cell index `idx = iy·nx + ix`.
    pub fn point_at(&self, idx: usize) -> Result<ThermoPoint> {
        let ix = idx % self.x_axis.count;
        let iy = idx / self.x_axis.count;
        let p = apply(self.base, self.x_axis.parameter, self.x_axis.node(ix))?;
        apply(p, self.y_axis.parameter, self.y_axis.node(iy))
    }

    pub fn cell(&self, idx: usize) -> Result<Cell> {
        Ok(self.quantity.at(&self.point_at(idx)?))
    }
}

fn apply(point: ThermoPoint, parameter: Parameter, value: f64) -> Result<ThermoPoint> {
    match parameter {
        Parameter::Temperature => ThermoPoint::from_temperature(*point.params(), value),
        Parameter::Beta => point.with_beta(value),
        Parameter::Omega => point.with_omega(value),
        Parameter::Nu => point.with_nu(value),
        Parameter::NParticles => {
            if !(value >= 1.0 && value <= u32::MAX as f64) {
                return Err(Error::invalid("n_particles", "axis node must be a positive integer"));
            }
            Ok(point.with_params(point.params().with_n_particles(value as u32)?))
        }
    }
}

/// Dense scan result; `cells` is row-major with `y` as the row index.
#[derive(Debug, Clone, PartialEq)]
pub struct GridScan {
    pub request: GridRequest,
    pub cells: Vec<Cell>,
}

impl GridScan {
    pub fn from_cells(request: GridRequest, cells: Vec<Cell>) -> Result<Self> {
        if cells.len() != request.len() {
            return Err(Error::invalid("cells", "length does not match the grid"));
        }
        if cells.iter().any(|c| !c.value.is_finite()) {
            return Err(Error::Infeasible("grid produced a non-finite value"));
        }
        Ok(Self { request, cells })
    }

    pub fn get(&self, ix: usize, iy: usize) -> Cell {
        self.cells[iy * self.request.x_axis.count + ix]
    }
}

/// Sequential scan. Each cell depends only on its own index, so chunked
/// parallel evaluation through [`GridRequest::cell`] gives identical bits.
pub fn grid_scan(request: GridRequest) -> Result<GridScan> {
    let cells = (0..request.len()).map(|i| request.cell(i)).collect::<Result<Vec<_>>>()?;
    GridScan::from_cells(request, cells)
}

/// How the spin dimension follows the particle number in a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpinRule {
    EqualsN,
    Fixed(u32),
}

/// Capacities per `N²` at the transition point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacityDensities {
    pub n_particles: u32,
    pub nu: f64,
    pub h: f64,
    pub c_temp_density: f64,
    pub c_nu_density: f64,
    pub c_omega_density: f64,
    pub report: CapacityReport,
}

/// Evaluate `C_X/N²` at `φ = 0`, with `ν` solved at the given `β` and `ω`.
pub fn transition_capacities(point: &ThermoPoint) -> Result<CapacityDensities> {
    let nu = solve_transition(point, FreeParameter::Nu)?;
    let at = point.with_nu(nu)?;
    let p = at.params();
    let n = p.n_particles();
    let n2 = (n as f64) * (n as f64);
    let report = capacities(&at);
    Ok(CapacityDensities {
        n_particles: n,
        nu,
        h: h_of(p.spin_dim(), n)?,
        c_temp_density: report.c_temp / n2,
        c_nu_density: report.c_nu / n2,
        c_omega_density: report.c_omega / n2,
        report,
    })
}

/// Natural-unit sweep helper: `ħ = k_B = ω = 1`, `β = beta_hbar_omega`.
pub fn asymptotic_capacities(rule: SpinRule, n_particles: u32, beta_hbar_omega: f64) -> Result<CapacityDensities> {
    let d = match rule {
        SpinRule::EqualsN => n_particles,
        SpinRule::Fixed(d) => d,
    };
    let params = SystemParams::new(n_particles, d, 1.0, 0.0)?;
    transition_capacities(&ThermoPoint::new(params, beta_hbar_omega)?)
}
