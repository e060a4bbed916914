use std::path::PathBuf;

use anyon_thermo::transitions::{AxisSpec, Parameter, Quantity, Spacing};
use clap::{Args, Parser, Subcommand, ValueEnum};

/// Environment variable naming the directory relative `--output` paths resolve against.
pub const OUTPUT_DIR_ENV: &str = "ANYON_THERMO_OUTPUT_DIR";

#[derive(Debug, Parser)]
#[command(name = "anyon-thermo", version, about = "Thermodynamics, transitions and heat engines of Hamiltonian anyons")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Document format [default: json, or table for `verify`].
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,

    /// Write to this file instead of stdout. Relative paths resolve against
    /// $ANYON_THERMO_OUTPUT_DIR when it is set.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Significant digits for floating-point values.
    #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u8).range(1..=17), global = true)]
    pub precision: u8,

    /// Use SI constants (J, K, rad/s) instead of natural units where ħ = k_B = 1.
    #[arg(long, global = true)]
    pub si: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    /// Aligned plain text.
    Table,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Equilibrium properties at a single point.
    Props(PropsArgs),
    /// Evaluate one quantity on a two-axis grid.
    Scan(ScanArgs),
    /// ν-driven Stirling cycle.
    Stirling(StirlingArgs),
    /// ω-switched Otto cycle.
    Otto(OttoArgs),
    /// Qubits needed to hold a fraction of the thermal population at p_F = 1/2.
    Qubits(QubitArgs),
    /// Run the brute-force oracle suite and print a pass/fail table.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Args)]
pub struct SystemArgs {
    /// Particle number N.
    #[arg(long = "n")]
    pub n_particles: u32,
    /// Spin (auxiliary) dimension d.
    #[arg(long = "d")]
    pub spin_dim: u32,
    /// Trap frequency ω.
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub omega: f64,
}

#[derive(Debug, Clone, Args)]
#[group(required = false, multiple = false)]
pub struct ThermalArgs {
    /// Inverse temperature β.
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<f64>,
    /// Temperature T.
    #[arg(long = "temp", alias = "temperature", allow_hyphen_values = true)]
    pub temperature: Option<f64>,
}

#[derive(Debug, Args)]
pub struct PropsArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    /// Symmetry bias ν.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub nu: f64,
    #[command(flatten)]
    pub thermal: ThermalArgs,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub nu: f64,
    #[command(flatten)]
    pub thermal: ThermalArgs,
    /// Quantity per cell: p_fermi, internal_energy, c_temp, c_omega, c_nu, phi.
    #[arg(long, value_parser = parse_quantity)]
    pub quantity: Quantity,
    /// Column axis, `param:start:stop:count[:log]`.
    #[arg(long, value_parser = parse_axis, allow_hyphen_values = true)]
    pub x: AxisSpec,
    /// Row axis, `param:start:stop:count[:log]`.
    #[arg(long, value_parser = parse_axis, allow_hyphen_values = true)]
    pub y: AxisSpec,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub jobs: Option<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OrderArg {
    /// Hot isotherm drives ν₂ → ν₁.
    HotNu2ToNu1,
    /// Hot isotherm drives ν₁ → ν₂.
    HotNu1ToNu2,
}

#[derive(Debug, Args)]
pub struct StirlingArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub beta_hot: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub beta_cold: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub nu1: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub nu2: f64,
    #[arg(long, value_enum, default_value_t = OrderArg::HotNu2ToNu1)]
    pub order: OrderArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MediumArg {
    Anyon,
    Fermion,
    Boson,
    Statistical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum HeatArg {
    /// Hot-bath heat measured from the compressed cold state.
    PostCompression,
    /// Hot-bath heat measured from the cold Gibbs energy at ω₁.
    ColdAtOmega1,
}

#[derive(Debug, Args)]
pub struct OttoArgs {
    #[arg(long = "n")]
    pub n_particles: u32,
    #[arg(long = "d")]
    pub spin_dim: u32,
    #[arg(long, allow_hyphen_values = true)]
    pub beta_hot: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub beta_cold: f64,
    /// Compressed frequency ω₁.
    #[arg(long, required_unless_present = "phi_hot", conflicts_with = "phi_hot", allow_hyphen_values = true)]
    pub omega1: Option<f64>,
    /// Expanded frequency ω₂ < ω₁.
    #[arg(long, required_unless_present = "phi_cold", conflicts_with = "phi_cold", allow_hyphen_values = true)]
    pub omega2: Option<f64>,
    /// Choose ω₁ so that φ(β_H, ω₁) equals this value.
    #[arg(long, allow_hyphen_values = true)]
    pub phi_hot: Option<f64>,
    /// Choose ω₂ so that φ(β_C, ω₂) equals this value.
    #[arg(long, allow_hyphen_values = true)]
    pub phi_cold: Option<f64>,
    #[arg(long, value_enum, default_value_t = MediumArg::Anyon)]
    pub medium: MediumArg,
    /// Fermionic fraction for the statistical medium.
    #[arg(long, required_if_eq("medium", "statistical"), allow_hyphen_values = true)]
    pub k_fermi: Option<f64>,
    #[arg(long, value_enum, default_value_t = HeatArg::PostCompression)]
    pub heat: HeatArg,
}

#[derive(Debug, Args)]
pub struct QubitArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    /// Single temperature.
    #[arg(long = "temp", alias = "temperature", conflicts_with = "sweep", required_unless_present = "sweep")]
    pub temperature: Option<f64>,
    /// Temperature sweep, `start:stop:count[:log]`.
    #[arg(long, value_parser = parse_temperature_sweep)]
    pub sweep: Option<AxisSpec>,
    /// Fraction of the thermal population to capture.
    #[arg(long, default_value_t = 0.999)]
    pub coverage: f64,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Include the slower large-cutoff enumeration checks.
    #[arg(long)]
    pub thorough: bool,
}

pub fn parse_quantity(s: &str) -> Result<Quantity, String> {
    Quantity::from_name(s)
        .ok_or_else(|| format!("unknown quantity `{s}`; expected p_fermi, internal_energy, c_temp, c_omega, c_nu or phi"))
}

/// `param:start:stop:count[:log|:lin]`
pub fn parse_axis(s: &str) -> Result<AxisSpec, String> {
    let (name, rest) = s.split_once(':').ok_or_else(|| format!("axis `{s}` must look like param:start:stop:count[:log]"))?;
    let parameter = Parameter::from_name(name)
        .ok_or_else(|| format!("unknown axis parameter `{name}`; expected temperature, beta, omega, nu or n"))?;
    parse_range(parameter, rest)
}

fn parse_temperature_sweep(s: &str) -> Result<AxisSpec, String> {
    parse_range(Parameter::Temperature, s)
}

fn parse_range(parameter: Parameter, s: &str) -> Result<AxisSpec, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if !(3..=4).contains(&parts.len()) {
        return Err(format!("range `{s}` must look like start:stop:count[:log]"));
    }
    let number = |p: &str| p.parse::<f64>().map_err(|_| format!("`{p}` is not a number"));
    let start = number(parts[0])?;
    let stop = number(parts[1])?;
    let count = parts[2].parse::<usize>().map_err(|_| format!("`{}` is not a node count", parts[2]))?;
    let spacing = match parts.get(3).copied() {
        None | Some("lin") => Spacing::Linear,
        Some("log") => Spacing::Log,
        Some(other) => return Err(format!("unknown spacing `{other}`; expected lin or log")),
    };
    AxisSpec::new(parameter, start, stop, count, spacing).map_err(|e| e.to_string())
}
