//! Problem definition and the combinatorial scalars every other module uses:
//! spin-subspace log-dimensions, `h(d, N)` and the order parameter `φ`.

use crate::error::{Error, Result};
use crate::numeric::ln_binomial;

/// Static definition of the trapped system.
///
/// Energies (`ν`, `ħω`) share one unit; `β` is its inverse. The default
/// constants are natural units, `ħ = k_B = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    n_particles: u32,
    spin_dim: u32,
    omega: f64,
    nu: f64,
    hbar: f64,
    k_boltzmann: f64,
}

impl SystemParams {
    /// Natural units (`ħ = k_B = 1`).
    pub fn new(n_particles: u32, spin_dim: u32, omega: f64, nu: f64) -> Result<Self> {
        Self::with_constants(n_particles, spin_dim, omega, nu, 1.0, 1.0)
    }

    pub fn with_constants(
        n_particles: u32,
        spin_dim: u32,
        omega: f64,
        nu: f64,
        hbar: f64,
        k_boltzmann: f64,
    ) -> Result<Self> {
        if n_particles == 0 {
            return Err(Error::invalid("n_particles", "must be at least 1"));
        }
        if spin_dim == 0 {
            return Err(Error::invalid("spin_dim", "must be at least 1"));
        }
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(Error::invalid("omega", "must be positive and finite"));
        }
        if !nu.is_finite() {
            return Err(Error::invalid("nu", "must be finite"));
        }
        if !(hbar > 0.0 && hbar.is_finite()) {
            return Err(Error::invalid("hbar", "must be positive and finite"));
        }
        if !(k_boltzmann > 0.0 && k_boltzmann.is_finite()) {
            return Err(Error::invalid("k_boltzmann", "must be positive and finite"));
        }
        Ok(Self { n_particles, spin_dim, omega, nu, hbar, k_boltzmann })
    }

    pub fn n_particles(&self) -> u32 {
        self.n_particles
    }

    pub fn spin_dim(&self) -> u32 {
        self.spin_dim
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn k_boltzmann(&self) -> f64 {
        self.k_boltzmann
    }

    /// Level spacing `ħω`.
    pub fn quantum(&self) -> f64 {
        self.hbar * self.omega
    }

    /// `N(N-1)/2`, the number of particle pairs.
    pub fn pair_count(&self) -> f64 {
        let n = self.n_particles as f64;
        0.5 * n * (n - 1.0)
    }

    /// Ground-state energy excess of fermions over bosons, `½ħωN(N−1)`.
    pub fn pauli_energy(&self) -> f64 {
        self.pair_count() * self.quantum()
    }

    pub fn has_antisymmetric_spin(&self) -> bool {
        self.spin_dim >= self.n_particles
    }

    pub fn with_omega(self, omega: f64) -> Result<Self> {
        Self::with_constants(self.n_particles, self.spin_dim, omega, self.nu, self.hbar, self.k_boltzmann)
    }

    pub fn with_nu(self, nu: f64) -> Result<Self> {
        Self::with_constants(self.n_particles, self.spin_dim, self.omega, nu, self.hbar, self.k_boltzmann)
    }

    pub fn with_n_particles(self, n_particles: u32) -> Result<Self> {
        Self::with_constants(n_particles, self.spin_dim, self.omega, self.nu, self.hbar, self.k_boltzmann)
    }

    pub fn with_spin_dim(self, spin_dim: u32) -> Result<Self> {
        Self::with_constants(self.n_particles, spin_dim, self.omega, self.nu, self.hbar, self.k_boltzmann)
    }

    pub fn subspace_dims(&self) -> SubspaceDims {
        subspace_dims(self.spin_dim, self.n_particles)
    }
}

/// [`SystemParams`] at inverse temperature `β`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermoPoint {
    params: SystemParams,
    beta: f64,
}

impl ThermoPoint {
    pub fn new(params: SystemParams, beta: f64) -> Result<Self> {
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::invalid("beta", "must be positive and finite"));
        }
        Ok(Self { params, beta })
    }

    /// `β = 1 / (k_B T)`.
    pub fn from_temperature(params: SystemParams, temperature: f64) -> Result<Self> {
        if !(temperature > 0.0 && temperature.is_finite()) {
            return Err(Error::invalid("temperature", "must be positive and finite"));
        }
        Self::new(params, 1.0 / (params.k_boltzmann * temperature))
    }

    pub fn params(&self) -> &SystemParams {
        &self.params
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn temperature(&self) -> f64 {
        1.0 / (self.params.k_boltzmann * self.beta)
    }

    /// Dimensionless `βħω`.
    pub fn reduced_quantum(&self) -> f64 {
        self.beta * self.params.quantum()
    }

    pub fn with_params(self, params: SystemParams) -> Self {
        Self { params, beta: self.beta }
    }

    pub fn with_beta(self, beta: f64) -> Result<Self> {
        Self::new(self.params, beta)
    }

    pub fn with_nu(self, nu: f64) -> Result<Self> {
        Ok(Self { params: self.params.with_nu(nu)?, beta: self.beta })
    }

    pub fn with_omega(self, omega: f64) -> Result<Self> {
        Ok(Self { params: self.params.with_omega(omega)?, beta: self.beta })
    }
}

/// Log-dimensions of the symmetric and antisymmetric subspaces of `(C^d)^{⊗N}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubspaceDims {
    /// `ln C(d+N−1, N)`.
    pub sym_log_dim: f64,
    /// `ln C(d, N)`, or `None` when `d < N` and the subspace is empty.
    pub alt_log_dim: Option<f64>,
}

impl SubspaceDims {
    pub fn alt_is_empty(&self) -> bool {
        self.alt_log_dim.is_none()
    }
}

pub fn subspace_dims(spin_dim: u32, n_particles: u32) -> SubspaceDims {
    let d = spin_dim as u64;
    let n = n_particles as u64;
    SubspaceDims {
        sym_log_dim: ln_binomial(d + n - 1, n).unwrap_or(0.0),
        alt_log_dim: ln_binomial(d, n),
    }
}

/// `h(d, N) = ln C(d+N−1, N) − ln C(d, N)`.
pub fn h_of(spin_dim: u32, n_particles: u32) -> Result<f64> {
    let dims = subspace_dims(spin_dim, n_particles);
    match dims.alt_log_dim {
        Some(alt) => Ok(dims.sym_log_dim - alt),
        None => Err(Error::EmptyAntisymmetric { spin_dim, n_particles }),
    }
}

/// Order parameter `φ = ½N(N−1)βħω − βν − h(d, N)`; `p_F = 1/(1 + e^φ)`.
pub fn phi(point: &ThermoPoint) -> Result<f64> {
    let p = point.params();
    let h = h_of(p.spin_dim, p.n_particles)?;
    Ok(point.beta * (p.pauli_energy() - p.nu) - h)
}
