use anyhow::Result;
use serde_json::{Map, Value};

use anyon_thermo::engines::{
    omega_from_phi_target, otto_cycle, stirling_cycle, stirling_limits, CycleResult, Medium, OttoHeatConvention,
    OttoSpec, StirlingSpec, StrokeOrder,
};
use anyon_thermo::oracle::qubit_requirement;
use anyon_thermo::statmech::free_energy;
use anyon_thermo::transitions::{AxisSpec, GridRequest, Parameter, Spacing};
use anyon_thermo::{capacities, h_of, phi, thermo_props, SystemParams, ThermoPoint};

use crate::args::{
    HeatArg, MediumArg, OrderArg, OttoArgs, PropsArgs, QubitArgs, ScanArgs, StirlingArgs, SystemArgs, ThermalArgs,
};
use crate::emit::{record, Field, Output, Record, Style};
use crate::scan::parallel_scan;

/// Bad combination of flags that clap cannot express.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

/// Physical constants in force for a run.
#[derive(Debug, Clone, Copy)]
pub struct Units {
    pub hbar: f64,
    pub k_boltzmann: f64,
    pub name: &'static str,
}

impl Units {
    pub const NATURAL: Units = Units { hbar: 1.0, k_boltzmann: 1.0, name: "natural" };
    pub const SI: Units = Units { hbar: 1.054_571_817e-34, k_boltzmann: 1.380_649e-23, name: "si" };

    pub fn select(si: bool) -> Self {
        if si {
            Self::SI
        } else {
            Self::NATURAL
        }
    }

    fn system(&self, n: u32, d: u32, omega: f64, nu: f64) -> Result<SystemParams> {
        Ok(SystemParams::with_constants(n, d, omega, nu, self.hbar, self.k_boltzmann)?)
    }

    fn params_for(&self, s: &SystemArgs, nu: f64) -> Result<SystemParams> {
        self.system(s.n_particles, s.spin_dim, s.omega, nu)
    }

    fn constants(&self) -> Record {
        record([("hbar", self.hbar.into()), ("k_boltzmann", self.k_boltzmann.into())])
    }
}

fn thermal_point(params: SystemParams, t: &ThermalArgs) -> Result<ThermoPoint> {
    match (t.beta, t.temperature) {
        (Some(beta), None) => Ok(ThermoPoint::new(params, beta)?),
        (None, Some(temp)) => Ok(ThermoPoint::from_temperature(params, temp)?),
        (None, None) => Err(usage("one of --beta or --temp is required")),
        (Some(_), Some(_)) => Err(usage("--beta and --temp are mutually exclusive")),
    }
}

fn system_inputs(p: &SystemParams) -> Record {
    record([
        ("n", p.n_particles().into()),
        ("d", p.spin_dim().into()),
        ("omega", p.omega().into()),
    ])
}

pub fn props(args: &PropsArgs, units: Units, style: Style) -> Result<Output> {
    let params = units.params_for(&args.system, args.nu)?;
    let point = thermal_point(params, &args.thermal)?;
    let t = thermo_props(&point);
    let c = capacities(&point);
    let empty = !params.has_antisymmetric_spin();

    let mut inputs = system_inputs(&params);
    inputs.extend(record([
        ("nu", params.nu().into()),
        ("beta", point.beta().into()),
        ("temperature", point.temperature().into()),
    ]));
    inputs.extend(units.constants());
    let results = record([
        ("antisymmetric_subspace", if empty { "empty" } else { "present" }.into()),
        ("h", h_of(params.spin_dim(), params.n_particles()).ok().into()),
        ("phi", phi(&point).ok().into()),
        ("p_fermi", t.p_fermi.into()),
        ("ln_z_fermi", t.ln_z_fermi.into()),
        ("ln_z_bose", t.ln_z_bose.into()),
        ("ln_z_total", t.ln_z_total.into()),
        ("free_energy", free_energy(&point).into()),
        ("u_fermi", t.u_fermi.into()),
        ("u_bose", t.u_bose.into()),
        ("internal_energy", t.u_total.into()),
        ("c_temp", c.c_temp.into()),
        ("c_nu", c.c_nu.into()),
        ("c_omega", c.c_omega.into()),
        ("d2_temp", c.d2_temp.into()),
        ("d2_nu", c.d2_nu.into()),
        ("d2_omega", c.d2_omega.into()),
    ]);
    Output::single(style, "props", units.name, inputs, results)
}

fn axis_json(axis: &AxisSpec, style: Style) -> Result<Value> {
    let mut m = Map::new();
    m.insert("parameter".into(), Value::String(axis.parameter().name().into()));
    m.insert("start".into(), style.float(axis.start())?);
    m.insert("stop".into(), style.float(axis.stop())?);
    m.insert("count".into(), Value::from(axis.count()));
    let spacing = match axis.spacing() {
        Spacing::Linear => "lin",
        Spacing::Log => "log",
    };
    m.insert("spacing".into(), Value::String(spacing.into()));
    let nodes = axis.nodes().into_iter().map(|x| style.float(x)).collect::<Result<Vec<_>>>()?;
    m.insert("nodes".into(), Value::Array(nodes));
    Ok(Value::Object(m))
}

fn sets_temperature(p: Parameter) -> bool {
    matches!(p, Parameter::Temperature | Parameter::Beta)
}

pub fn scan(args: &ScanArgs, units: Units, style: Style) -> Result<Output> {
    let (xp, yp) = (args.x.parameter(), args.y.parameter());
    if xp == yp || (sets_temperature(xp) && sets_temperature(yp)) {
        return Err(usage("--x and --y must scan different parameters"));
    }
    let params = units.params_for(&args.system, args.nu)?;
    let base = if sets_temperature(xp) || sets_temperature(yp) {
        match (args.thermal.beta, args.thermal.temperature) {
            (None, None) => ThermoPoint::new(params, 1.0 / units.k_boltzmann)?,
            _ => thermal_point(params, &args.thermal)?,
        }
    } else {
        thermal_point(params, &args.thermal)?
    };
    let request = GridRequest { x_axis: args.x, y_axis: args.y, quantity: args.quantity, base };
    let jobs = args
        .jobs
        .map(|j| j as usize)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let grid = parallel_scan(request, jobs)?;

    let (nx, ny) = (args.x.count(), args.y.count());
    let xs = args.x.nodes();
    let ys = args.y.nodes();
    let mut values = Vec::with_capacity(ny);
    let mut flags = Vec::with_capacity(ny);
    let mut rows = Vec::with_capacity(nx * ny);
    for (iy, &y) in ys.iter().enumerate() {
        let mut vrow = Vec::with_capacity(nx);
        let mut frow = Vec::with_capacity(nx);
        for (ix, &x) in xs.iter().enumerate() {
            let cell = grid.get(ix, iy);
            vrow.push(style.float(cell.value)?);
            frow.push(Value::Bool(cell.empty_alt));
            rows.push(vec![
                ix.into(),
                iy.into(),
                x.into(),
                y.into(),
                cell.value.into(),
                if cell.empty_alt { "empty_alt" } else { "ok" }.into(),
            ]);
        }
        values.push(Value::Array(vrow));
        flags.push(Value::Array(frow));
    }

    let mut base_rec = system_inputs(&params);
    base_rec.extend(record([("nu", params.nu().into()), ("beta", base.beta().into())]));
    base_rec.extend(units.constants());
    let mut doc = Map::new();
    doc.insert("command".into(), Value::String("scan".into()));
    doc.insert("units".into(), Value::String(units.name.into()));
    doc.insert("quantity".into(), Value::String(args.quantity.name().into()));
    doc.insert("base".into(), style.object(&base_rec)?);
    doc.insert("x_axis".into(), axis_json(&args.x, style)?);
    doc.insert("y_axis".into(), axis_json(&args.y, style)?);
    doc.insert("layout".into(), Value::String("values[iy][ix]".into()));
    doc.insert("values".into(), Value::Array(values));
    doc.insert("empty_alt".into(), Value::Array(flags));

    let header = ["ix", "iy", xp.name(), yp.name(), args.quantity.name(), "status"]
        .map(String::from)
        .to_vec();
    Ok(Output { json: Value::Object(doc), header, rows })
}

fn cycle_results(r: &CycleResult, carnot: f64) -> Record {
    record([
        ("w_cyc", r.work_cycle.into()),
        ("q_hot", r.heat_hot.into()),
        ("q_cold", r.heat_cold.into()),
        ("regime", r.regime.name().into()),
        ("eta", r.efficiency.into()),
        ("cop", r.cop.into()),
        ("carnot_efficiency", carnot.into()),
    ])
}

pub fn stirling(args: &StirlingArgs, units: Units, style: Style) -> Result<Output> {
    let params = units.params_for(&args.system, 0.0)?;
    let order = match args.order {
        OrderArg::HotNu2ToNu1 => StrokeOrder::HotDrivesNu2ToNu1,
        OrderArg::HotNu1ToNu2 => StrokeOrder::HotDrivesNu1ToNu2,
    };
    let spec = StirlingSpec::new(params, args.beta_hot, args.beta_cold, args.nu1, args.nu2)?.with_order(order);
    let r = stirling_cycle(&spec)?;
    let limits = stirling_limits(&spec).ok();

    let mut inputs = system_inputs(&params);
    inputs.extend(record([
        ("beta_hot", args.beta_hot.into()),
        ("beta_cold", args.beta_cold.into()),
        ("nu1", args.nu1.into()),
        ("nu2", args.nu2.into()),
        ("order", order_name(order).into()),
    ]));
    inputs.extend(units.constants());
    let mut results = cycle_results(&r, 1.0 - args.beta_hot / args.beta_cold);
    results.extend(record([
        ("w_limit", limits.map(|l| l.work).into()),
        ("q_hot_limit", limits.map(|l| l.heat_hot).into()),
        ("eta_limit", limits.map(|l| l.efficiency).into()),
    ]));
    Output::single(style, "stirling", units.name, inputs, results)
}

fn order_name(order: StrokeOrder) -> &'static str {
    match order {
        StrokeOrder::HotDrivesNu2ToNu1 => "hot-nu2-to-nu1",
        StrokeOrder::HotDrivesNu1ToNu2 => "hot-nu1-to-nu2",
    }
}

pub fn otto(args: &OttoArgs, units: Units, style: Style) -> Result<Output> {
    // frequencies from φ targets are solved on a unit-frequency template
    let template = units.system(args.n_particles, args.spin_dim, 1.0, 0.0)?;
    let omega_1 = match (args.omega1, args.phi_hot) {
        (Some(w), None) => w,
        (None, Some(f)) => omega_from_phi_target(args.beta_hot, f, &template)?,
        _ => return Err(usage("give exactly one of --omega1 or --phi-hot")),
    };
    let omega_2 = match (args.omega2, args.phi_cold) {
        (Some(w), None) => w,
        (None, Some(f)) => omega_from_phi_target(args.beta_cold, f, &template)?,
        _ => return Err(usage("give exactly one of --omega2 or --phi-cold")),
    };
    let medium = match args.medium {
        MediumArg::Anyon => Medium::HamiltonianAnyon,
        MediumArg::Fermion => Medium::Fermion,
        MediumArg::Boson => Medium::Boson,
        MediumArg::Statistical => Medium::Statistical(args.k_fermi.ok_or_else(|| usage("--k-fermi is required"))?),
    };
    let heat = match args.heat {
        HeatArg::PostCompression => OttoHeatConvention::PostCompression,
        HeatArg::ColdAtOmega1 => OttoHeatConvention::ColdAtCompressedFrequency,
    };
    let params = template.with_omega(omega_1)?;
    let spec = OttoSpec::new(params, args.beta_hot, args.beta_cold, omega_1, omega_2, medium)?.with_heat_convention(heat);
    let r = otto_cycle(&spec)?;

    let medium_name = match medium {
        Medium::HamiltonianAnyon => "anyon",
        Medium::Fermion => "fermion",
        Medium::Boson => "boson",
        Medium::Statistical(_) => "statistical",
    };
    let k_fermi = match medium {
        Medium::Statistical(k) => Some(k),
        _ => None,
    };
    let inputs = record([
        ("n", args.n_particles.into()),
        ("d", args.spin_dim.into()),
        ("beta_hot", args.beta_hot.into()),
        ("beta_cold", args.beta_cold.into()),
        ("omega1", omega_1.into()),
        ("omega2", omega_2.into()),
        ("medium", medium_name.into()),
        ("k_fermi", k_fermi.into()),
        ("heat", heat_name(heat).into()),
        ("hbar", units.hbar.into()),
        ("k_boltzmann", units.k_boltzmann.into()),
    ]);
    let mut results = cycle_results(&r, 1.0 - args.beta_hot / args.beta_cold);
    // W / (N k_B T_H)
    results.push(("w_per_n_kt_hot".into(), Field::Float(r.work_cycle * args.beta_hot / args.n_particles as f64)));
    Output::single(style, "otto", units.name, inputs, results)
}

fn heat_name(h: OttoHeatConvention) -> &'static str {
    match h {
        OttoHeatConvention::PostCompression => "post-compression",
        OttoHeatConvention::ColdAtCompressedFrequency => "cold-at-omega1",
    }
}

pub fn qubits(args: &QubitArgs, units: Units, style: Style) -> Result<Output> {
    let params = units.params_for(&args.system, 0.0)?;
    let temperatures = match (args.temperature, &args.sweep) {
        (Some(t), None) => vec![t],
        (None, Some(axis)) => axis.nodes(),
        _ => return Err(usage("give exactly one of --temp or --sweep")),
    };
    let mut json_rows = Vec::with_capacity(temperatures.len());
    let mut rows = Vec::with_capacity(temperatures.len());
    for t in temperatures {
        let q = qubit_requirement(&params, t, args.coverage)?;
        let row = record([
            ("temperature", q.temperature.into()),
            ("nu_used", q.nu_used.into()),
            ("num_states", q.num_states.into()),
            ("num_qubits", q.num_qubits.into()),
            ("captured_population", q.captured.into()),
        ]);
        json_rows.push(style.object(&row)?);
        rows.push(row.into_iter().map(|(_, v)| v).collect());
    }
    let mut inputs = system_inputs(&params);
    inputs.push(("coverage".into(), args.coverage.into()));
    inputs.extend(units.constants());
    let mut doc = Map::new();
    doc.insert("command".into(), Value::String("qubits".into()));
    doc.insert("units".into(), Value::String(units.name.into()));
    doc.insert("inputs".into(), style.object(&inputs)?);
    doc.insert("rows".into(), Value::Array(json_rows));
    let header = ["temperature", "nu_used", "num_states", "num_qubits", "captured_population"]
        .map(String::from)
        .to_vec();
    Ok(Output { json: Value::Object(doc), header, rows })
}
