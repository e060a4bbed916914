//! Brute-force cross-checks that share no code path with the closed forms:
//! explicit spectrum enumeration for a few particles, permutation-character
//! sums for spin-subspace dimensions, exact big-integer binomials, and the
//! qubit count needed to hold most of the thermal population.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use libm::{ceil, exp, log, log2};
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::statmech::{ln_partition_bose, ln_partition_fermi};
use crate::system::{SystemParams, ThermoPoint};
use crate::transitions::{solve_transition, FreeParameter};

/// Largest particle number the enumerator accepts.
pub const MAX_ENUMERATED_PARTICLES: u32 = 6;
/// Upper bound on enumerated configurations.
pub const MAX_CONFIGURATIONS: u64 = 20_000_000;
/// Largest `N` (and `d`) for permutation-character sums.
pub const MAX_CHARACTER_ORDER: u32 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Symmetry {
    Fermionic,
    Bosonic,
}

/// Every `N`-particle occupation configuration with all levels `≤ level_cutoff`.
#[derive(Debug, Clone, PartialEq)]
pub struct EnumeratedSpectrum {
    pub symmetry: Symmetry,
    pub n_particles: u32,
    pub level_cutoff: u32,
    /// Flattened level tuples, `n_particles` entries each, in lexicographic order.
    levels: Vec<u32>,
    /// Total energies in units of `ħω`: `Σ n_i + N/2`.
    pub energies: Vec<f64>,
}

impl EnumeratedSpectrum {
    pub fn configurations(&self) -> impl Iterator<Item = &[u32]> {
        self.levels.chunks(self.n_particles as usize)
    }

    pub fn len(&self) -> usize {
        self.energies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.energies.is_empty()
    }

    /// `ln Σ e^{−βE}` with `βħω` given; log-sum-exp over the explicit list.
    pub fn ln_partition(&self, beta_hbar_omega: f64) -> f64 {
        let m = self.energies.iter().fold(f64::INFINITY, |a, &e| a.min(e));
        let s: f64 = self.energies.iter().map(|&e| exp(-beta_hbar_omega * (e - m))).sum();
        -beta_hbar_omega * m + log(s)
    }

    /// `Σ E e^{−βE} / Σ e^{−βE}` in units of `ħω`.
    pub fn mean_energy(&self, beta_hbar_omega: f64) -> f64 {
        let m = self.energies.iter().fold(f64::INFINITY, |a, &e| a.min(e));
        let (mut num, mut den) = (0.0, 0.0);
        for &e in &self.energies {
            let w = exp(-beta_hbar_omega * (e - m));
            num += e * w;
            den += w;
        }
        num / den
    }
}

/// Number of configurations below the cutoff: `C(L+1, N)` for fermions,
/// `C(L+N, N)` for bosons. Saturates at `u64::MAX`.
fn configuration_count(symmetry: Symmetry, n: u32, cutoff: u32) -> u64 {
    let levels = cutoff as u64 + 1;
    let top = match symmetry {
        Symmetry::Fermionic => levels,
        Symmetry::Bosonic => levels + n as u64 - 1,
    };
    exact_binomial(top, n as u64).to_u64().unwrap_or(u64::MAX)
}

/// Exhaustive listing with an explicit level cutoff.
pub fn enumerate_with_cutoff(symmetry: Symmetry, n_particles: u32, level_cutoff: u32) -> Result<EnumeratedSpectrum> {
    if n_particles == 0 {
        return Err(Error::invalid("n_particles", "must be at least 1"));
    }
    if n_particles > MAX_ENUMERATED_PARTICLES {
        return Err(Error::TooLarge { what: "enumerated particle number", limit: MAX_ENUMERATED_PARTICLES as u64 });
    }
    let count = configuration_count(symmetry, n_particles, level_cutoff);
    if count > MAX_CONFIGURATIONS {
        return Err(Error::TooLarge { what: "configuration count", limit: MAX_CONFIGURATIONS });
    }
    let n = n_particles as usize;
    let mut levels = Vec::with_capacity(count as usize * n);
    let mut energies = Vec::with_capacity(count as usize);
    let strict = symmetry == Symmetry::Fermionic;
    // lowest admissible tuple
    let mut tuple: Vec<u32> = (0..n as u32).map(|i| if strict { i } else { 0 }).collect();
    if strict && tuple[n - 1] > level_cutoff {
        return Ok(EnumeratedSpectrum { symmetry, n_particles, level_cutoff, levels, energies });
    }
    loop {
        levels.extend_from_slice(&tuple);
        let total: u64 = tuple.iter().map(|&l| l as u64).sum();
        energies.push(total as f64 + 0.5 * n as f64);
        // advance the rightmost position that still has room
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(EnumeratedSpectrum { symmetry, n_particles, level_cutoff, levels, energies });
            }
            i -= 1;
            // room left for the positions to the right of i
            let ceiling = if strict { level_cutoff - (n - 1 - i) as u32 } else { level_cutoff };
            if tuple[i] < ceiling {
                tuple[i] += 1;
                for j in i + 1..n {
                    tuple[j] = if strict { tuple[j - 1] + 1 } else { tuple[j - 1] };
                }
                break;
            }
        }
    }
}

/// Smallest cutoff `L` with `N e^{−βħω(L+1)} / (1 − e^{−βħω}) < tail_tolerance`.
pub fn tail_cutoff(n_particles: u32, beta_hbar_omega: f64, tail_tolerance: f64) -> Result<u32> {
    if !(tail_tolerance > 0.0) {
        return Err(Error::invalid("tail_tolerance", "must be positive"));
    }
    if !(beta_hbar_omega > 0.0 && beta_hbar_omega.is_finite()) {
        return Err(Error::invalid("beta_hbar_omega", "must be positive and finite"));
    }
    let x = beta_hbar_omega;
    // solve N e^{−x(L+1)} / (1 − e^{−x}) < tol for L
    let needed = (log(n_particles as f64) - log(-libm::expm1(-x)) - log(tail_tolerance)) / x - 1.0;
    let mut l = if needed <= 0.0 { 0.0 } else { ceil(needed) };
    if l > u32::MAX as f64 / 2.0 {
        return Err(Error::TooLarge { what: "level cutoff", limit: u32::MAX as u64 / 2 });
    }
    let bound = |l: f64| n_particles as f64 * exp(-x * (l + 1.0)) / -libm::expm1(-x);
    while bound(l) >= tail_tolerance {
        l += 1.0;
    }
    Ok(l as u32)
}

/// Enumerate enough levels that the neglected Boltzmann tail stays below
/// `tail_tolerance` (union bound over particles). For fermions the bound is
/// measured from the top of the filled Fermi sea.
pub fn enumerate_spectrum(symmetry: Symmetry, n_particles: u32, beta_hbar_omega: f64, tail_tolerance: f64) -> Result<EnumeratedSpectrum> {
    if n_particles > MAX_ENUMERATED_PARTICLES {
        return Err(Error::TooLarge { what: "enumerated particle number", limit: MAX_ENUMERATED_PARTICLES as u64 });
    }
    let mut cutoff = tail_cutoff(n_particles, beta_hbar_omega, tail_tolerance)?;
    if symmetry == Symmetry::Fermionic {
        cutoff += n_particles.saturating_sub(1);
    }
    enumerate_with_cutoff(symmetry, n_particles, cutoff)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpinSector {
    Sym,
    Alt,
}

/// `dim = (1/N!) Σ_{σ∈S_N} χ(σ) d^{cycles(σ)}` with `χ = 1` (symmetric) or
/// `sign(σ)` (antisymmetric), summed over every permutation.
pub fn character_dimension(spin_dim: u32, n_particles: u32, sector: SpinSector) -> Result<u64> {
    if n_particles == 0 || spin_dim == 0 {
        return Err(Error::invalid("character_dimension", "d and N must be at least 1"));
    }
    if n_particles > MAX_CHARACTER_ORDER || spin_dim > MAX_CHARACTER_ORDER {
        return Err(Error::TooLarge { what: "character sum order", limit: MAX_CHARACTER_ORDER as u64 });
    }
    let n = n_particles as usize;
    let d = spin_dim as i128;
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total: i128 = 0;
    let mut order: i128 = 0;
    loop {
        let cycles = cycle_count(&perm);
        let sign = if (n - cycles).is_multiple_of(2) { 1 } else { -1 };
        let chi = match sector {
            SpinSector::Sym => 1,
            SpinSector::Alt => sign,
        };
        total += chi * d.pow(cycles as u32);
        order += 1;
        if !next_permutation(&mut perm) {
            break;
        }
    }
    debug_assert_eq!(total % order, 0);
    Ok((total / order) as u64)
}

fn cycle_count(perm: &[usize]) -> usize {
    let mut seen = vec![false; perm.len()];
    let mut cycles = 0;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        cycles += 1;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
        }
    }
    cycles
}

/// Lexicographic successor; `false` once the last permutation is reached.
fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Exact `C(n, k)`.
pub fn exact_binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::ZERO;
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `ln C(n, k)` from the exact integer.
pub fn exact_ln_binomial(n: u64, k: u64) -> Option<f64> {
    let c = exact_binomial(n, k);
    if c == BigUint::ZERO {
        return None;
    }
    // BigUint -> f64 rounds correctly; C(n,k) for the sizes used here fits f64 range
    c.to_f64().map(log)
}

#[derive(Debug, Clone, PartialEq)]
pub struct QubitReport {
    pub temperature: f64,
    /// Bias that puts `p_F` at 1/2.
    pub nu_used: f64,
    /// Smallest number of eigenstates whose populations reach `coverage`.
    pub num_states: usize,
    /// `⌈log₂ num_states⌉`.
    pub num_qubits: u32,
    /// Population held by the top `num_states` states.
    pub captured: f64,
    /// Population of enumerated states plus the tail bound; 1 up to rounding.
    pub total_population: f64,
}

/// Qubits needed to encode the eigenstates that hold `coverage` of the
/// spatial thermal state `p_F τ_F + (1 − p_F) τ_B` at `p_F = 1/2`.
///
/// Degenerate eigenstates are counted separately. Ties in population are
/// broken by symmetry branch, then by configuration.
pub fn qubit_requirement(params: &SystemParams, temperature: f64, coverage: f64) -> Result<QubitReport> {
    if !(coverage > 0.0 && coverage < 1.0) {
        return Err(Error::invalid("coverage", "must lie in (0, 1)"));
    }
    if params.n_particles() > 4 {
        return Err(Error::TooLarge { what: "particle number for qubit estimate", limit: 4 });
    }
    let point = ThermoPoint::from_temperature(*params, temperature)?;
    let nu = solve_transition(&point, FreeParameter::Nu)?;
    let point = point.with_nu(nu)?;
    let x = point.reduced_quantum();
    let tail = 1e-12;
    let weights = [
        (Symmetry::Fermionic, 0.5, ln_partition_fermi(&point)),
        (Symmetry::Bosonic, 0.5, ln_partition_bose(&point)),
    ];
    let mut states: Vec<(f64, Symmetry, usize)> = Vec::new();
    let mut spectra = Vec::with_capacity(2);
    for &(sym, weight, ln_z) in &weights {
        let spectrum = enumerate_spectrum(sym, params.n_particles(), x, tail)?;
        for (i, &e) in spectrum.energies.iter().enumerate() {
            states.push((weight * exp(-x * e - ln_z), sym, i));
        }
        spectra.push(spectrum);
    }
    // the enumerated order is lexicographic, so the index breaks ties by configuration
    states.sort_by(|a, b| {
        b.0.partial_cmp(&a.0)
            .unwrap_or(Ordering::Equal)
            .then(a.1.cmp(&b.1))
            .then(a.2.cmp(&b.2))
    });
    let enumerated: f64 = states.iter().map(|s| s.0).sum();
    let mut captured = 0.0;
    let mut num_states = 0;
    for s in &states {
        captured += s.0;
        num_states += 1;
        if captured >= coverage {
            break;
        }
    }
    if captured < coverage {
        return Err(Error::Infeasible("coverage not reached within the enumerated spectrum"));
    }
    let num_qubits = if num_states <= 1 { 0 } else { ceil(log2(num_states as f64)) as u32 };
    Ok(QubitReport {
        temperature,
        nu_used: nu,
        num_states,
        num_qubits,
        captured,
        total_population: enumerated + 2.0 * tail,
    })
}
