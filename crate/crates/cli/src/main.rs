//! `mpskit` command-line front end. Every command prints one JSON report on
//! stdout (optionally also written to `--report`); per-length Ising tables
//! can additionally go to CSV.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mpskit::clifford::laughlin_report;
use mpskit::image::{compress, GrayImage, PgmFormat};
use mpskit::ising::{chi_profile, entropy_scan, Boundary, IsingChain, LanczosOptions};
use mpskit::mps::{from_mps, to_mps, Mps};
use mpskit::state::{schmidt_spectrum, DenseState, EntropyUnit, DISCARD_TOL};
use mpskit::{Error, VERSION};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Parser, Debug, Serialize)]
#[command(name = "mpskit", version, about = "Matrix product state workbench")]
struct Cli {
    /// Unit for every reported entropy.
    #[arg(long, value_enum, global = true, default_value_t = Units::Nats)]
    units: Units,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Units {
    Nats,
    Bits,
}

impl Units {
    fn unit(self) -> EntropyUnit {
        match self {
            Units::Nats => EntropyUnit::Nats,
            Units::Bits => EntropyUnit::Bits,
        }
    }
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
enum Command {
    /// Dense states: create and inspect QSTATE files.
    #[command(subcommand)]
    State(StateCmd),
    /// Open-boundary MPS: decompose, truncate, entropies.
    #[command(subcommand)]
    Mps(MpsCmd),
    /// Transverse-field Ising chain: entropy scans and central charge.
    #[command(subcommand)]
    Ising(IsingCmd),
    /// Laughlin m = 1 state from gamma-matrix traces.
    #[command(subcommand)]
    Laughlin(LaughlinCmd),
    /// Quadtree image codec on PGM files.
    #[command(subcommand)]
    Image(ImageCmd),
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
enum StateCmd {
    /// Seeded random state with complex Gaussian amplitudes.
    Random(StateRandom),
    /// Named state (product, ghz, w, maxent).
    Preset(StatePreset),
    /// Norm, Schmidt ranks and entropies of a QSTATE file.
    Show(InputArgs),
}

#[derive(Args, Debug, Serialize)]
struct StateRandom {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    d: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Preset {
    /// |0…0⟩.
    Product,
    Ghz,
    W,
    /// Bell pairs across the middle of `n` qubits (`n` even).
    Maxent,
}

#[derive(Args, Debug, Serialize)]
struct StatePreset {
    #[arg(long, value_enum)]
    kind: Preset,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug, Serialize)]
struct InputArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
enum MpsCmd {
    /// QSTATE → QMPS, exact or capped at `--chi`.
    Decompose(MpsDecompose),
    /// Cap the bonds of a QMPS file.
    Truncate(MpsTruncate),
    /// Per-bond entropies of a QSTATE or QMPS file.
    Entropy(InputArgs),
}

#[derive(Args, Debug, Serialize)]
struct MpsDecompose {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    chi: Option<usize>,
    /// Schmidt weights at or below this are discarded in the exact sweep.
    #[arg(long, default_value_t = DISCARD_TOL)]
    tol: f64,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct MpsTruncate {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    chi: usize,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
enum IsingCmd {
    /// Ground state, S_l table, χ(l) table and fit.
    Scan(IsingArgs),
    /// Central charge summary only.
    Fit(IsingArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum BoundaryArg {
    Open,
    Periodic,
}

#[derive(Args, Debug, Serialize)]
struct IsingArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1.0)]
    h: f64,
    #[arg(long, value_enum, default_value_t = BoundaryArg::Periodic)]
    boundary: BoundaryArg,
    #[arg(long, default_value_t = LanczosOptions::default().tol)]
    tol: f64,
    #[arg(long, default_value_t = LanczosOptions::default().max_iter)]
    max_iter: usize,
    /// Seed of the Lanczos start vector.
    #[arg(long, default_value_t = LanczosOptions::default().seed)]
    seed: u64,
    /// Squared-mass target for χ(l).
    #[arg(long, default_value_t = 1.0 - 1e-6)]
    target: f64,
    /// Write the per-l table as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
enum LaughlinCmd {
    /// Check the trace construction and the half-cut entropy.
    Verify(LaughlinArgs),
}

#[derive(Args, Debug, Serialize)]
struct LaughlinArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
enum ImageCmd {
    /// Truncate the image's MPS to `--chi`.
    Compress(ImageCompress),
    /// Full-χ encode/decode; reports whether pixels survive exactly.
    Roundtrip(ImageRoundtrip),
    /// Seeded random grey image.
    Random(ImageRandom),
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum FormatArg {
    P2,
    P5,
}

impl FormatArg {
    fn pgm(self) -> PgmFormat {
        match self {
            FormatArg::P2 => PgmFormat::P2,
            FormatArg::P5 => PgmFormat::P5,
        }
    }
}

#[derive(Args, Debug, Serialize)]
struct ImageCompress {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    chi: usize,
    #[arg(long, value_enum, default_value_t = FormatArg::P5)]
    format: FormatArg,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct ImageRoundtrip {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = FormatArg::P5)]
    format: FormatArg,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct ImageRandom {
    #[arg(long, default_value_t = 32)]
    width: usize,
    #[arg(long, default_value_t = 32)]
    height: usize,
    #[arg(long, default_value_t = 255)]
    max_value: u16,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = FormatArg::P5)]
    format: FormatArg,
}

/// Either library error or a plain usage complaint.
#[derive(Debug)]
enum Failure {
    Lib(Error),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Lib(Error::NumericalFailure(_) | Error::TooLarge(_)) => 3,
            Failure::Lib(_) => 2,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Lib(e) => write!(f, "{e}"),
            Failure::Usage(m) => write!(f, "{m}"),
        }
    }
}

type Outcome = std::result::Result<Value, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: &Cli) -> std::result::Result<(), Failure> {
    let units = cli.units.unit();
    let (name, seed, report_path, result) = match &cli.command {
        Command::State(StateCmd::Random(a)) => ("state random", Some(a.seed), None, state_random(a)),
        Command::State(StateCmd::Preset(a)) => ("state preset", None, None, state_preset(a)),
        Command::State(StateCmd::Show(a)) => ("state show", None, a.report.as_deref(), state_show(a, units)),
        Command::Mps(MpsCmd::Decompose(a)) => ("mps decompose", None, a.report.as_deref(), mps_decompose(a, units)),
        Command::Mps(MpsCmd::Truncate(a)) => ("mps truncate", None, a.report.as_deref(), mps_truncate(a, units)),
        Command::Mps(MpsCmd::Entropy(a)) => ("mps entropy", None, a.report.as_deref(), mps_entropy(a, units)),
        Command::Ising(IsingCmd::Scan(a)) => ("ising scan", Some(a.seed), a.report.as_deref(), ising(a, units, true)),
        Command::Ising(IsingCmd::Fit(a)) => ("ising fit", Some(a.seed), a.report.as_deref(), ising(a, units, false)),
        Command::Laughlin(LaughlinCmd::Verify(a)) => ("laughlin verify", None, a.report.as_deref(), laughlin(a, units)),
        Command::Image(ImageCmd::Compress(a)) => ("image compress", None, a.report.as_deref(), image_compress(a)),
        Command::Image(ImageCmd::Roundtrip(a)) => ("image roundtrip", None, a.report.as_deref(), image_roundtrip(a)),
        Command::Image(ImageCmd::Random(a)) => ("image random", Some(a.seed), None, image_random(a)),
    };
    let report = json!({
        "command": name,
        "version": VERSION,
        "seed": seed,
        "units": cli.units,
        "config": config_echo(&cli.command),
        "result": result?,
    });
    let text = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
    if let Some(path) = report_path {
        std::fs::write(path, &text).map_err(Error::from)?;
    }
    print!("{text}");
    Ok(())
}

/// The parsed arguments of the leaf command.
fn config_echo(command: &Command) -> Value {
    let full = serde_json::to_value(command).expect("arguments serialize");
    let mut v = &full;
    // unwrap the `{group: {leaf: args}}` nesting
    while let Value::Object(map) = v {
        match map.values().next() {
            Some(inner @ Value::Object(_)) if map.len() == 1 => v = inner,
            _ => break,
        }
    }
    v.clone()
}

fn bonds_json(spectra: impl Iterator<Item = (usize, f64)>, units: EntropyUnit) -> Value {
    spectra
        .enumerate()
        .map(|(k, (chi, s))| json!({ "bond": k + 1, "chi": chi, "entropy": units.from_nats(s) }))
        .collect()
}

fn state_random(a: &StateRandom) -> Outcome {
    let s = DenseState::random(a.n, a.d, a.seed)?;
    s.save(&a.out)?;
    Ok(json!({ "n": s.n(), "d": s.d(), "out": a.out }))
}

fn state_preset(a: &StatePreset) -> Outcome {
    let s = match a.kind {
        Preset::Product => DenseState::basis(2, &vec![0; a.n])?,
        Preset::Ghz => DenseState::ghz(a.n)?,
        Preset::W => DenseState::w(a.n)?,
        Preset::Maxent => {
            if a.n % 2 == 1 {
                return Err(Failure::Usage(format!("maxent needs an even qubit count, got {}", a.n)));
            }
            DenseState::max_entangled(a.n / 2)?
        }
    };
    s.save(&a.out)?;
    Ok(json!({ "n": s.n(), "d": s.d(), "out": a.out }))
}

fn state_show(a: &InputArgs, units: EntropyUnit) -> Outcome {
    let s = DenseState::load(&a.input)?;
    let norm: f64 = s.amplitudes().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let spectra = (1..s.n())
        .map(|cut| schmidt_spectrum(&s, cut).map(|sp| (sp.chi(), sp.entropy())))
        .collect::<mpskit::Result<Vec<_>>>()?;
    Ok(json!({ "n": s.n(), "d": s.d(), "norm": norm, "bonds": bonds_json(spectra.into_iter(), units) }))
}

fn mps_summary(mps: &Mps, units: EntropyUnit) -> Value {
    json!({
        "n": mps.n(),
        "d": mps.d(),
        "bond_dims": mps.bond_dims(),
        "bonds": bonds_json(mps.lambdas().iter().map(|l| (l.len(), l.entropy())), units),
        "parameter_count": mps.parameter_count(),
        "dense_count": dense_count(mps.n(), mps.d()),
    })
}

fn dense_count(n: usize, d: usize) -> Option<u64> {
    (d as u64).checked_pow(n as u32)
}

fn mps_decompose(a: &MpsDecompose, units: EntropyUnit) -> Outcome {
    let s = DenseState::load(&a.input)?;
    let exact = Mps::from_dense(&s, a.tol)?;
    let (mps, truncation_error) = match a.chi {
        Some(chi) => exact.truncate(chi)?,
        None => (exact, 0.0),
    };
    let fidelity = s.fidelity(&from_mps(&mps)?)?;
    mps.save(&a.out)?;
    let mut v = mps_summary(&mps, units);
    v["truncation_error"] = json!(truncation_error);
    v["fidelity"] = json!(fidelity);
    v["out"] = json!(a.out);
    Ok(v)
}

fn mps_truncate(a: &MpsTruncate, units: EntropyUnit) -> Outcome {
    let mps = Mps::load(&a.input)?;
    let before = mps.bond_dims();
    let (t, truncation_error) = mps.truncate(a.chi)?;
    t.save(&a.out)?;
    let mut v = mps_summary(&t, units);
    v["bond_dims_before"] = json!(before);
    v["truncation_error"] = json!(truncation_error);
    v["out"] = json!(a.out);
    Ok(v)
}

fn load_any(path: &Path) -> std::result::Result<Mps, Failure> {
    let text = std::fs::read_to_string(path).map_err(Error::from)?;
    if text.trim_start().starts_with("QMPS") {
        Ok(Mps::parse_qmps(&text)?)
    } else {
        Ok(to_mps(&DenseState::parse_qstate(&text)?, None, DISCARD_TOL)?)
    }
}

fn mps_entropy(a: &InputArgs, units: EntropyUnit) -> Outcome {
    Ok(mps_summary(&load_any(&a.input)?, units))
}

fn ising(a: &IsingArgs, units: EntropyUnit, full: bool) -> Outcome {
    let boundary = match a.boundary {
        BoundaryArg::Open => Boundary::Open,
        BoundaryArg::Periodic => Boundary::Periodic,
    };
    let chain = IsingChain::new(a.n, a.h, boundary)?;
    let opts = LanczosOptions { tol: a.tol, max_iter: a.max_iter, seed: a.seed, ..LanczosOptions::default() };
    let scan = entropy_scan(&chain, &opts)?;
    let profile = chi_profile(&scan, a.target)?;
    let fit = scan.fit;
    let mut v = json!({
        "n": scan.n,
        "h": scan.h,
        "boundary": scan.boundary,
        "energy": scan.energy,
        "fitted_c": fit.map(|f| f.c),
        "residual": fit.map(|f| units.from_nats(f.residual)),
        "r_squared": fit.map(|f| f.r_squared),
        "poor_fit": fit.map(|f| f.is_poor()),
        "chi_exponent": profile.exponent,
    });
    let rows: Vec<Value> = scan
        .entries
        .iter()
        .zip(&profile.entries)
        .map(|(e, c)| {
            json!({
                "l": e.l,
                "S_l": units.from_nats(e.entropy),
                "chi_required": c.chi_required,
                "chi_predicted": c.chi_predicted,
                "chord": e.chord,
            })
        })
        .collect();
    if let Some(path) = &a.csv {
        let csv_failure = |e: csv::Error| Failure::Lib(Error::Io(e.into()));
        let mut w = csv::Writer::from_path(path).map_err(csv_failure)?;
        for (e, c) in scan.entries.iter().zip(&profile.entries) {
            w.serialize(CsvRow {
                l: e.l,
                s_l: units.from_nats(e.entropy),
                chi_required: c.chi_required,
                chord: e.chord,
            })
            .map_err(csv_failure)?;
        }
        w.flush().map_err(Error::from)?;
    }
    if full {
        v["entries"] = Value::Array(rows);
    }
    Ok(v)
}

#[derive(Serialize)]
struct CsvRow {
    l: usize,
    #[serde(rename = "S_l")]
    s_l: f64,
    chi_required: usize,
    chord: f64,
}

fn laughlin(a: &LaughlinArgs, units: EntropyUnit) -> Outcome {
    let r = laughlin_report(a.n)?;
    Ok(json!({
        "n": r.n,
        "dim_gamma": r.dim_gamma,
        "entropy_measured": r.entropy_measured.map(|s| units.from_nats(s)),
        "entropy_formula": units.from_nats(r.entropy_formula),
        "capacity": units.from_nats(r.capacity),
        "ratio": r.ratio,
        "apparent_dof": r.apparent_dof,
        "mps_params": r.mps_params,
        "anticommutator_error": r.anticommutator_error,
    }))
}

fn image_compress(a: &ImageCompress) -> Outcome {
    let img = GrayImage::load(&a.input)?;
    let (out, report) = compress(&img, a.chi)?;
    out.save(&a.out, a.format.pgm())?;
    Ok(serde_json::to_value(report).expect("report serializes"))
}

fn image_roundtrip(a: &ImageRoundtrip) -> Outcome {
    let img = GrayImage::load(&a.input)?;
    let side = img.padded().width();
    // no bond of a d = 4 chain exceeds the pixel count
    let (out, report) = compress(&img, side * side)?;
    out.save(&a.out, a.format.pgm())?;
    let mut v = serde_json::to_value(report).expect("report serializes");
    v["pixels_match"] = json!(out == img);
    Ok(v)
}

fn image_random(a: &ImageRandom) -> Outcome {
    let img = GrayImage::random(a.width, a.height, a.max_value, a.seed)?;
    img.save(&a.out, a.format.pgm())?;
    Ok(json!({ "width": a.width, "height": a.height, "max_value": a.max_value, "out": a.out }))
}
