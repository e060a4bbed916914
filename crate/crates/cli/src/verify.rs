//! Brute-force cross-checks of the closed forms, reported as a pass/fail table.

use anyhow::Result;
use serde_json::{Map, Value};

use anyon_thermo::oracle::{
    character_dimension, enumerate_spectrum, exact_binomial, exact_ln_binomial, qubit_requirement, SpinSector,
    Symmetry,
};
use anyon_thermo::{
    internal_energy, internal_energy_branches, ln_partition_bose, ln_partition_fermi, ln_partition_total,
    subspace_dims, SystemParams, ThermoPoint,
};

use crate::emit::{Field, Output, Style};

#[derive(Debug, Clone)]
pub struct Check {
    pub name: &'static str,
    pub cases: usize,
    pub worst: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.worst <= self.tolerance
    }
}

struct Tally {
    check: Check,
}

impl Tally {
    fn new(name: &'static str, tolerance: f64) -> Self {
        Tally { check: Check { name, cases: 0, worst: 0.0, tolerance } }
    }

    fn record(&mut self, err: f64) {
        self.check.cases += 1;
        // NaN counts as a failure
        if !(err <= self.check.worst) {
            self.check.worst = if err.is_nan() { f64::INFINITY } else { err };
        }
    }
}

fn pair_point(n: u32, d: u32, nu: f64, x: f64) -> anyon_thermo::Result<ThermoPoint> {
    ThermoPoint::new(SystemParams::new(n, d, 1.0, nu)?, x)
}

pub fn run_checks(thorough: bool) -> Result<Vec<Check>> {
    let mut grid: Vec<(u32, f64)> = (1..=4).flat_map(|n| [0.5, 1.0, 2.0, 5.0].map(|x| (n, x))).collect();
    if thorough {
        grid.extend((5..=6).flat_map(|n| [1.0, 2.0, 5.0].map(|x| (n, x))));
    }

    let mut ln_z = Tally::new("ln Z: closed form vs enumeration (abs)", 1e-10);
    let mut energy = Tally::new("U: closed form vs enumeration (rel)", 1e-8);
    for &(n, x) in &grid {
        let p = pair_point(n, n, 0.0, x)?;
        let b = internal_energy_branches(&p);
        for (sym, closed_ln_z, closed_u) in [
            (Symmetry::Fermionic, ln_partition_fermi(&p), b.fermi),
            (Symmetry::Bosonic, ln_partition_bose(&p), b.bose),
        ] {
            let s = enumerate_spectrum(sym, n, x, 1e-14)?;
            ln_z.record((closed_ln_z - s.ln_partition(x)).abs());
            energy.record((closed_u - s.mean_energy(x)).abs() / closed_u.abs());
        }
    }

    let mut mixture = Tally::new("mixture ln Z and U at nonzero bias (rel)", 1e-10);
    for (n, d, nu, x) in [(2u32, 2u32, 0.0, 1.0), (2, 3, -0.4, 0.7), (3, 4, 0.37, 0.8), (3, 5, 2.0, 1.5)] {
        let p = pair_point(n, d, nu, x)?;
        let f = enumerate_spectrum(Symmetry::Fermionic, n, x, 1e-15)?;
        let b = enumerate_spectrum(Symmetry::Bosonic, n, x, 1e-15)?;
        let dims = subspace_dims(d, n);
        let w_f = (dims.sym_log_dim + f.ln_partition(x)).exp();
        let w_b = (dims.alt_log_dim.unwrap_or(f64::NEG_INFINITY) - x * nu + b.ln_partition(x)).exp();
        let z = ln_partition_total(&p);
        mixture.record((z - (w_f + w_b).ln()).abs() / z.abs().max(1.0));
        let u = (w_f * f.mean_energy(x) + w_b * (b.mean_energy(x) + nu)) / (w_f + w_b);
        mixture.record((internal_energy(&p) - u).abs() / u.abs());
    }

    let mut dims = Tally::new("subspace dimensions: character sums vs binomials", 0.0);
    for d in 1..=6u32 {
        for n in 1..=6u32 {
            let sym = character_dimension(d, n, SpinSector::Sym)?;
            let alt = character_dimension(d, n, SpinSector::Alt)?;
            let ok = exact_binomial((d + n - 1) as u64, n as u64) == sym.into()
                && exact_binomial(d as u64, n as u64) == alt.into();
            dims.record(if ok { 0.0 } else { 1.0 });
        }
    }

    let mut logs = Tally::new("log-gamma binomials vs exact integers (rel)", 1e-12);
    for (d, n) in [(2u32, 2u32), (7, 3), (50, 50), (120, 60), (200, 200), (300, 17)] {
        let approx = subspace_dims(d, n);
        let sym = exact_ln_binomial((d + n - 1) as u64, n as u64).unwrap_or(f64::NAN);
        let alt = exact_ln_binomial(d as u64, n as u64).unwrap_or(f64::NAN);
        logs.record((approx.sym_log_dim - sym).abs() / sym.abs().max(1.0));
        logs.record((approx.alt_log_dim.unwrap_or(f64::NAN) - alt).abs() / alt.abs().max(1.0));
    }

    let mut qubits = Tally::new("qubit estimate: population normalization", 1e-9);
    let params = SystemParams::new(2, 2, 1.0, 0.0)?;
    for t in [0.1, 0.5, 1.0, 3.0] {
        let q = qubit_requirement(&params, t, 0.999)?;
        qubits.record((q.total_population - 1.0).abs());
    }

    Ok(vec![ln_z.check, energy.check, mixture.check, dims.check, logs.check, qubits.check])
}

pub fn output(checks: &[Check], style: Style) -> Result<Output> {
    let mut json_rows = Vec::with_capacity(checks.len());
    let mut rows = Vec::with_capacity(checks.len());
    for c in checks {
        let status = if c.passed() { "pass" } else { "fail" };
        let row = vec![
            Field::Text(c.name.into()),
            Field::Text(status.into()),
            c.cases.into(),
            worst_field(c.worst),
            c.tolerance.into(),
        ];
        let mut m = Map::new();
        for (k, v) in ["check", "status", "cases", "worst", "tolerance"].iter().zip(&row) {
            m.insert((*k).into(), style.field(v)?);
        }
        json_rows.push(Value::Object(m));
        rows.push(row);
    }
    let mut doc = Map::new();
    doc.insert("command".into(), Value::String("verify".into()));
    doc.insert("passed".into(), Value::Bool(checks.iter().all(Check::passed)));
    doc.insert("checks".into(), Value::Array(json_rows));
    let header = ["check", "status", "cases", "worst", "tolerance"].map(String::from).to_vec();
    Ok(Output { json: Value::Object(doc), header, rows })
}

/// Infinite errors (NaN inputs) print as text rather than breaking the document.
fn worst_field(x: f64) -> Field {
    if x.is_finite() {
        Field::Float(x)
    } else {
        Field::Text("inf".into())
    }
}
