//! scatter1d: transfer-matrix analysis of one-dimensional scattering from
//! the command line.
//!
//! Every command writes one result record per line to stdout — JSON objects
//! by default, CSV rows with `--format csv` — and each record carries the
//! determinant and/or flux residuals of the matrices behind it. Output is
//! byte-identical across repeated runs and across `--threads` settings.
//!
//! Exit codes: 0 on success, 2 for invalid input, 3 for numerical
//! degeneracies (perfect reflection in a composition, a grid too coarse to
//! integrate, and the like). Errors are written to stderr as structured
//! records in the selected format.

mod input;
mod record;

use clap::{Args, Parser, Subcommand, ValueEnum};
use input::{parse_cell, parse_complex, read_potential_file, MatrixSpec};
use num_complex::Complex64;
use record::{Emitter, OutputFormat, Record};
use scatter1d::{
    amplitudes_from_transfer, band_edges, band_scan, barrier_amplitudes, classify,
    closed_form_zn, compose, compose_turns, elliptic_zn, iterate_disk, numerical_transfer,
    orbit, stack_transfer, transfer_from_amplitudes, transmittance_n, turn_from_transfer,
    ActionClassification, DiskPoint, Error, FixedPoints, PotentialSegment, SampledPotential,
    ScatteringAmplitudes, TransferMatrix, TurnComposition, UnitConvention,
};
use std::io::Write;
use std::path::PathBuf;

/// Worker-thread setting for scanning commands.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Parallelism {
    Auto,
    Fixed(usize),
}

fn parse_parallelism(s: &str) -> Result<Parallelism, String> {
    if s.eq_ignore_ascii_case("auto") {
        return Ok(Parallelism::Auto);
    }
    match s.parse::<usize>() {
        Ok(n) if n >= 1 => Ok(Parallelism::Fixed(n)),
        _ => Err(format!(
            "threads must be \"auto\" or a positive integer, got {s:?}"
        )),
    }
}

fn parse_precision(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(p) if (6..=17).contains(&p) => Ok(p),
        _ => Err(format!("precision must be an integer in 6..=17, got {s:?}")),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    /// One JSON object per line.
    Json,
    /// CSV rows; a header line precedes each change of column set.
    Csv,
}

impl From<FormatArg> for OutputFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Json => OutputFormat::Json,
            FormatArg::Csv => OutputFormat::Csv,
        }
    }
}

/// Options shared by every command.
#[derive(Args, Debug)]
struct RunOptions {
    /// Output format for records on stdout.
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,

    /// Significant digits for numeric output (6-17).
    #[arg(long, global = true, default_value = "12", value_parser = parse_precision)]
    precision: usize,

    /// Worker threads for scans: "auto" or a positive count. The output
    /// bytes do not depend on this setting.
    #[arg(long, global = true, default_value = "auto", value_parser = parse_parallelism)]
    threads: Parallelism,

    /// Reduced Planck constant of the unit system.
    #[arg(long, global = true, default_value_t = 1.0)]
    hbar: f64,

    /// Particle mass (the default pair hbar = 1, mass = 1/2 makes the
    /// wavenumber at energy E equal sqrt(E)).
    #[arg(long, global = true, default_value_t = 0.5)]
    mass: f64,

    /// Accepted deviation from the flux/determinant condition for amplitudes
    /// or matrix entries typed on the command line; forgiving by default so
    /// values quoted to a few significant figures pass. Inputs are used
    /// exactly as given, never renormalized.
    #[arg(long, global = true, default_value_t = 1e-3)]
    flux_tolerance: f64,
}

#[derive(Parser, Debug)]
#[command(
    name = "scatter1d",
    version,
    about = "Transfer-matrix analysis of one-dimensional scattering",
    long_about = "Transfer-matrix analysis of one-dimensional scattering: single barriers, \
                  compositions, disk-action classification, hyperbolic turns, periodic \
                  systems, band structure, and cross-checks against direct integration \
                  of the wave equation."
)]
struct Cli {
    #[command(flatten)]
    run: RunOptions,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify a matrix's action on the unit disk (elliptic, hyperbolic,
    /// or parabolic) with its fixed points and canonical parameter.
    Classify(ClassifyArgs),
    /// Scattering amplitudes and transfer matrix of one rectangular barrier.
    Barrier(BarrierArgs),
    /// Compose scatterers given as (r, t) amplitude pairs, left to right.
    Compose(AmplitudeListArgs),
    /// Reflectance buildup of N identical cells in a row.
    Periodic(PeriodicArgs),
    /// Sweep the one-parameter flow through a matrix from a start point.
    Orbit(OrbitArgs),
    /// Successive images of a point under repeated application of a cell.
    Iterates(IteratesArgs),
    /// Hyperbolic-turn descriptions of two systems and of their composite.
    Turns(AmplitudeListArgs),
    /// Scan a cell's half-trace over an energy range and refine band edges.
    BandScan(BandScanArgs),
    /// Cross-check a transfer matrix against direct integration of the
    /// wave equation.
    OracleCompare(OracleCompareArgs),
}

#[derive(Args, Debug)]
struct ClassifyArgs {
    #[command(flatten)]
    matrix: MatrixSpec,
}

#[derive(Args, Debug)]
struct BarrierArgs {
    /// Energy of the incident wave.
    #[arg(long = "E", value_name = "ENERGY")]
    energy: f64,

    /// Barrier height (negative values describe wells).
    #[arg(long = "V0", value_name = "HEIGHT", allow_hyphen_values = true)]
    height: f64,

    /// Barrier width.
    #[arg(long = "L", value_name = "WIDTH")]
    length: f64,
}

#[derive(Args, Debug)]
struct AmplitudeListArgs {
    /// Reflection amplitude of each system, one --r per system, in order.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, required = true)]
    r: Vec<Complex64>,

    /// Transmission amplitude of each system, one --t per system, in order.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, required = true)]
    t: Vec<Complex64>,
}

#[derive(Args, Debug)]
struct PeriodicArgs {
    /// Unit cell as height:length segments, e.g. "1.0:0.4;0:0.6".
    #[arg(long, value_name = "SPEC")]
    cell: String,

    /// Energy of the incident wave.
    #[arg(long = "E", value_name = "ENERGY")]
    energy: f64,

    /// Number of cells.
    #[arg(long = "N", value_name = "CELLS")]
    cells: u32,

    /// Evaluate N-cell reflectances in closed form (the default).
    #[arg(long, conflicts_with = "iterate")]
    closed_form: bool,

    /// Evaluate by repeated application of the cell map instead.
    #[arg(long)]
    iterate: bool,
}

#[derive(Args, Debug)]
struct OrbitArgs {
    #[command(flatten)]
    matrix: MatrixSpec,

    /// Start point in the unit disk.
    #[arg(long, value_parser = parse_complex, default_value = "0", allow_hyphen_values = true)]
    z0: Complex64,

    /// Number of points along the sweep (the first is z0, the last its
    /// image under the full map).
    #[arg(long, default_value_t = 64)]
    samples: usize,
}

#[derive(Args, Debug)]
struct IteratesArgs {
    /// Unit cell as height:length segments, e.g. "1.0:0.4;0:0.6".
    #[arg(long, value_name = "SPEC")]
    cell: String,

    /// Energy of the incident wave.
    #[arg(long = "E", value_name = "ENERGY")]
    energy: f64,

    /// Number of iterations.
    #[arg(long = "N", value_name = "STEPS")]
    cells: u32,

    /// Start point in the unit disk.
    #[arg(long, value_parser = parse_complex, default_value = "0", allow_hyphen_values = true)]
    z0: Complex64,
}

#[derive(Args, Debug)]
struct BandScanArgs {
    /// Unit cell as height:length segments, e.g. "1.0:0.4;0:0.6".
    #[arg(long, value_name = "SPEC")]
    cell: String,

    /// Lower end of the energy range.
    #[arg(long, value_name = "ENERGY")]
    e_min: f64,

    /// Upper end of the energy range.
    #[arg(long, value_name = "ENERGY")]
    e_max: f64,

    /// Number of uniformly spaced energy samples.
    #[arg(long, default_value_t = 512)]
    samples: usize,
}

#[derive(Args, Debug)]
struct OracleCompareArgs {
    /// Unit cell as height:length segments; compared against the exact
    /// piecewise-constant matrix.
    #[arg(
        long,
        value_name = "SPEC",
        conflicts_with = "potential_file",
        required_unless_present = "potential_file"
    )]
    cell: Option<String>,

    /// Two-column text file (position, potential) on a uniform grid;
    /// compared against integration on the half-resolution grid.
    #[arg(long, value_name = "FILE")]
    potential_file: Option<PathBuf>,

    /// Energy of the incident wave.
    #[arg(long = "E", value_name = "ENERGY")]
    energy: f64,

    /// Number of integration intervals for rasterizing --cell (ignored
    /// with --potential-file, where the file fixes the grid).
    #[arg(long, default_value_t = 10000)]
    samples: usize,
}

/// A command failure: either a library error (mapped to exit code 2 or 3)
/// or an output I/O error (exit code 1; stdout is gone, so the error value
/// itself has nowhere to go and is dropped).
enum Failure {
    Lib(Error),
    Io,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(_: std::io::Error) -> Self {
        Failure::Io
    }
}

fn invalid(what: impl Into<String>) -> Failure {
    Failure::Lib(Error::InvalidParameter { what: what.into() })
}

fn error_kind(err: &Error) -> &'static str {
    match err {
        Error::NoTransmission => "no-transmission",
        Error::FluxViolation { .. } => "flux-violation",
        Error::DetViolation { .. } => "det-violation",
        Error::NonPositiveEnergy { .. } => "non-positive-energy",
        Error::NonPositiveWavenumber { .. } => "non-positive-wavenumber",
        Error::InvalidParameter { .. } => "invalid-parameter",
        Error::BoundaryPoint => "boundary-point",
        Error::NotHyperbolic { .. } => "not-hyperbolic",
        Error::PerfectlyReflecting => "perfectly-reflecting",
        Error::DegenerateDenominator => "degenerate-denominator",
        Error::GridTooCoarse { .. } => "grid-too-coarse",
        Error::EllipticClosedForm => "elliptic-closed-form",
    }
}

fn error_record(err: &Error) -> Record {
    Record::new("error")
        .push("kind", error_kind(err))
        .push("message", err.to_string())
}

/// Appends kind, canonical parameter, and fixed-point fields of a
/// classification to a record.
fn classification_fields(record: Record, cls: &ActionClassification) -> Record {
    let record = record
        .push("kind", cls.kind.as_str())
        .push("canonical_parameter", cls.canonical_parameter);
    match cls.fixed_points {
        FixedPoints::Interior { point } => record
            .push("fixed_points", "interior")
            .push("fixed_point", point.z()),
        FixedPoints::Boundary {
            repelling,
            attracting,
        } => record
            .push("fixed_points", "boundary")
            .push("repelling", repelling.z())
            .push("attracting", attracting.z()),
        FixedPoints::Double { point } => record
            .push("fixed_points", "double")
            .push("fixed_point", point.z()),
        FixedPoints::Unspecified => record.push("fixed_points", "unspecified"),
    }
}

/// Lead record shared by the periodic-system commands: the cell matrix and
/// its classification at the requested energy.
fn cell_record(energy: f64, m: &TransferMatrix) -> Record {
    let cls = classify(m);
    Record::new("cell")
        .push("energy", energy)
        .push("alpha", m.alpha())
        .push("beta", m.beta())
        .push("half_trace", m.half_trace())
        .push("kind", cls.kind.as_str())
        .push("det_residual", m.det_residual())
}

fn cmd_classify<W: Write>(
    args: &ClassifyArgs,
    units: &UnitConvention,
    tolerance: f64,
    out: &mut Emitter<W>,
) -> Result<(), Failure> {
    let m = args.matrix.resolve(units, tolerance)?;
    let cls = classify(&m);
    let amps = amplitudes_from_transfer(&m);
    let record = classification_fields(Record::new("classification"), &cls)
        .push("trace", m.trace())
        .push("half_trace", m.half_trace())
        .push("det_residual", m.det_residual())
        .push("flux_residual", amps.flux_residual());
    out.emit(&record)?;
    Ok(())
}

fn cmd_barrier<W: Write>(
    args: &BarrierArgs,
    units: &UnitConvention,
    out: &mut Emitter<W>,
) -> Result<(), Failure> {
    let segment = PotentialSegment::new(args.height, args.length)?;
    let amps = barrier_amplitudes(args.energy, &segment, units)?;
    let m = transfer_from_amplitudes(&amps);
    let record = Record::new("barrier")
        .push("energy", args.energy)
        .push("height", args.height)
        .push("length", args.length)
        .push("r", amps.r())
        .push("t", amps.t())
        .push("r_prime", amps.r_prime())
        .push("t_prime", amps.t_prime())
        .push("alpha", m.alpha())
        .push("beta", m.beta())
        .push("reflectance", amps.r().norm_sqr())
        .push("transmittance", amps.t().norm_sqr())
        .push("flux_check", amps.r().norm_sqr() + amps.t().norm_sqr())
        .push("flux_residual", amps.flux_residual())
        .push("det_residual", m.det_residual());
    out.emit(&record)?;
    Ok(())
}

/// Validates and converts the (r, t) lists of `compose` and `turns` into
/// amplitude pairs.
fn amplitude_list(
    args: &AmplitudeListArgs,
    tolerance: f64,
) -> Result<Vec<ScatteringAmplitudes>, Failure> {
    if args.r.len() != args.t.len() {
        return Err(invalid(format!(
            "got {} --r values but {} --t values; give one pair per system",
            args.r.len(),
            args.t.len()
        )));
    }
    args.r
        .iter()
        .zip(&args.t)
        .map(|(&r, &t)| ScatteringAmplitudes::with_tolerance(r, t, tolerance).map_err(Failure::Lib))
        .collect()
}

fn cmd_compose<W: Write>(
    args: &AmplitudeListArgs,
    tolerance: f64,
    out: &mut Emitter<W>,
) -> Result<(), Failure> {
    let systems = amplitude_list(args, tolerance)?;
    let mut acc = systems[0];
    for next in &systems[1..] {
        acc = scatter1d::composed_amplitudes(&acc, next)?;
    }
    let m = transfer_from_amplitudes(&acc);
    let record = Record::new("composite")
        .push("count", systems.len())
        .push("r", acc.r())
        .push("t", acc.t())
        .push("alpha", m.alpha())
        .push("beta", m.beta())
        .push("reflectance", acc.r().norm_sqr())
        .push("transmittance", acc.t().norm_sqr())
        .push("flux_residual", acc.flux_residual())
        .push("det_residual", m.det_residual());
    out.emit(&record)?;
    Ok(())
}

fn cmd_periodic<W: Write>(
    args: &PeriodicArgs,
    units: &UnitConvention,
    out: &mut Emitter<W>,
) -> Result<(), Failure> {
    if args.cells == 0 {
        return Err(invalid("--N must be at least 1"));
    }
    let cell = parse_cell(&args.cell)?;
    let m = stack_transfer(args.energy, &cell, units)?;
    let cls = classify(&m);
    out.emit(&cell_record(args.energy, &m))?;

    if args.iterate {
        let points = iterate_disk(&m, args.cells, DiskPoint::origin())?;
        for (i, point) in points.iter().enumerate() {
            let reflectance = point.z().norm_sqr();
            let record = Record::new("periodic")
                .push("method", "iterate")
                .push("n", i as u32 + 1)
                .push("z", point.z())
                .push("reflectance", reflectance)
                .push("transmittance", 1.0 - reflectance)
                .push("kind", cls.kind.as_str())
                .push("det_residual", m.det_residual());
            out.emit(&record)?;
        }
    } else {
        let elliptic = matches!(cls.fixed_points, FixedPoints::Interior { .. });
        for n in 1..=args.cells {
            let z_n = if elliptic {
                elliptic_zn(&m, n)?
            } else {
                closed_form_zn(&m, n)?
            };
            let transmittance = transmittance_n(&m, n)?;
            let record = Record::new("periodic")
                .push("method", "closed-form")
                .push("n", n)
                .push("z", z_n.z())
                .push("reflectance", 1.0 - transmittance)
                .push("transmittance", transmittance)
                .push("kind", cls.kind.as_str())
                .push("det_residual", m.det_residual());
            out.emit(&record)?;
        }
    }
    Ok(())
}

fn cmd_orbit<W: Write>(
    args: &OrbitArgs,
    units: &UnitConvention,
    tolerance: f64,
    out: &mut Emitter<W>,
) -> Result<(), Failure> {
    let m = args.matrix.resolve(units, tolerance)?;
    let cls = classify(&m);
    let amps = amplitudes_from_transfer(&m);
    let lead = classification_fields(Record::new("classification"), &cls)
        .push("trace", m.trace())
        .push("half_trace", m.half_trace())
        .push("det_residual", m.det_residual())
        .push("flux_residual", amps.flux_residual());
    out.emit(&lead)?;

    let z0 = DiskPoint::new(args.z0)?;
    let points = orbit(&m, z0, args.samples)?;
    let denominator = (points.len() - 1) as f64;
    for (i, point) in points.iter().enumerate() {
        let record = Record::new("orbit-point")
            .push("index", i)
            .push("fraction", i as f64 / denominator)
            .push("z", point.z())
            .push("modulus", point.z().norm())
            .push("det_residual", m.det_residual());
        out.emit(&record)?;
    }
    Ok(())
}

fn cmd_iterates<W: Write>(
    args: &IteratesArgs,
    units: &UnitConvention,
    out: &mut Emitter<W>,
) -> Result<(), Failure> {
    let cell = parse_cell(&args.cell)?;
    let m = stack_transfer(args.energy, &cell, units)?;
    out.emit(&cell_record(args.energy, &m))?;

    let z0 = DiskPoint::new(args.z0)?;
    let emit_point = |n: u32, z: Complex64, out: &mut Emitter<W>| {
        let record = Record::new("iterate")
            .push("n", n)
            .push("z", z)
            .push("modulus", z.norm())
            .push("det_residual", m.det_residual());
        out.emit(&record)
    };
    emit_point(0, z0.z(), out)?;
    let points = iterate_disk(&m, args.cells, z0)?;
    for (i, point) in points.iter().enumerate() {
        emit_point(i as u32 + 1, point.z(), out)?;
    }
    Ok(())
}

fn cmd_turns<W: Write>(
    args: &AmplitudeListArgs,
    tolerance: f64,
    out: &mut Emitter<W>,
) -> Result<(), Failure> {
    let systems = amplitude_list(args, tolerance)?;
    if systems.len() != 2 {
        return Err(invalid(format!(
            "turns needs exactly two systems (--r and --t twice), got {}",
            systems.len()
        )));
    }
    let mut turns = Vec::with_capacity(2);
    let mut matrices = Vec::with_capacity(2);
    for (i, amps) in systems.iter().enumerate() {
        let m = transfer_from_amplitudes(amps);
        let turn = turn_from_transfer(&m)?;
        let record = Record::new("turn")
            .push("system", i + 1)
            .push("start_angle", turn.axis().start().z().arg())
            .push("end_angle", turn.axis().end().z().arg())
            .push("half_length", turn.half_length())
            .push("det_residual", m.det_residual())
            .push("flux_residual", amps.flux_residual());
        out.emit(&record)?;
        turns.push(turn);
        matrices.push(m);
    }

    // The composite of systems 1 and 2 in scattering order is the matrix
    // product M1 * M2, whose map applies M2 first; hence system 2's turn is
    // the `first` argument here.
    let composite_m = compose(&matrices[0], &matrices[1]);
    let record = match compose_turns(&turns[1], &turns[0])? {
        TurnComposition::Turn(turn) => Record::new("composite-turn")
            .push("start_angle", turn.axis().start().z().arg())
            .push("end_angle", turn.axis().end().z().arg())
            .push("half_length", turn.half_length())
            .push("trace", composite_m.trace())
            .push("det_residual", composite_m.det_residual()),
        TurnComposition::NonHyperbolic(cls) => {
            classification_fields(Record::new("composite-classification"), &cls)
                .push("trace", composite_m.trace())
                .push("det_residual", composite_m.det_residual())
        }
    };
    out.emit(&record)?;
    Ok(())
}

fn cmd_band_scan<W: Write>(
    args: &BandScanArgs,
    units: &UnitConvention,
    pool: Option<&rayon::ThreadPool>,
    out: &mut Emitter<W>,
) -> Result<(), Failure> {
    if args.samples < 2 {
        return Err(invalid("--samples must be at least 2"));
    }
    let cell = parse_cell(&args.cell)?;
    let step = (args.e_max - args.e_min) / (args.samples - 1) as f64;
    let energies: Vec<f64> = (0..args.samples)
        .map(|i| args.e_min + step * i as f64)
        .collect();

    let scan = || -> Result<_, Error> {
        let points = band_scan(&cell, &energies, units)?;
        let edges = band_edges(&cell, args.e_min, args.e_max, args.samples, units)?;
        Ok((points, edges))
    };
    let (points, edges) = match pool {
        Some(pool) => pool.install(scan)?,
        None => scan()?,
    };

    for point in &points {
        let record = Record::new("band-point")
            .push("energy", point.energy)
            .push("half_trace", point.half_trace)
            .push("status", point.status.as_str())
            .push("det_residual", point.det_residual);
        out.emit(&record)?;
    }
    for &edge in &edges {
        let m = stack_transfer(edge, &cell, units)?;
        let record = Record::new("band-edge")
            .push("energy", edge)
            .push("half_trace", m.half_trace())
            .push("det_residual", m.det_residual());
        out.emit(&record)?;
    }
    Ok(())
}

fn cmd_oracle_compare<W: Write>(
    args: &OracleCompareArgs,
    units: &UnitConvention,
    out: &mut Emitter<W>,
) -> Result<(), Failure> {
    let (reference, reference_m, sampled) = match (&args.cell, &args.potential_file) {
        (Some(spec), None) => {
            let cell = parse_cell(spec)?;
            let sampled = SampledPotential::from_stack(&cell, args.samples)?;
            let analytic = stack_transfer(args.energy, &cell, units)?;
            ("analytic", analytic, sampled)
        }
        (None, Some(path)) => {
            let full = read_potential_file(path)?;
            let intervals = full.values().len() - 1;
            if intervals < 2 || intervals % 2 != 0 {
                return Err(invalid(
                    "half-grid comparison needs an even number of grid intervals \
                     (an odd number of samples, at least 3)",
                ));
            }
            let coarse_values: Vec<f64> = full.values().iter().copied().step_by(2).collect();
            let coarse = SampledPotential::new(full.x_start(), full.dx() * 2.0, coarse_values)?;
            let coarse_m = numerical_transfer(args.energy, &coarse, units)?;
            ("half-grid", coarse_m, full)
        }
        // clap rules out the other combinations.
        _ => unreachable!("clap enforces exactly one of --cell and --potential-file"),
    };

    let numeric = numerical_transfer(args.energy, &sampled, units)?;
    let alpha_deviation = (reference_m.alpha() - numeric.alpha()).norm();
    let beta_deviation = (reference_m.beta() - numeric.beta()).norm();
    let record = Record::new("oracle-compare")
        .push("reference", reference)
        .push("energy", args.energy)
        .push("grid_points", sampled.values().len())
        .push("dx", sampled.dx())
        .push("max_deviation", alpha_deviation.max(beta_deviation))
        .push("alpha_deviation", alpha_deviation)
        .push("beta_deviation", beta_deviation)
        .push("det_residual_reference", reference_m.det_residual())
        .push("det_residual_numeric", numeric.det_residual());
    out.emit(&record)?;
    Ok(())
}

fn run<W: Write>(cli: &Cli, out: &mut Emitter<W>) -> Result<(), Failure> {
    let units = UnitConvention::new(cli.run.hbar, cli.run.mass)?;
    let tolerance = cli.run.flux_tolerance;
    if !(tolerance >= 0.0 && tolerance.is_finite()) {
        return Err(invalid(format!(
            "--flux-tolerance must be non-negative and finite, got {tolerance}"
        )));
    }
    let pool = match cli.run.threads {
        Parallelism::Auto => None,
        Parallelism::Fixed(n) => Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::InvalidParameter {
                    what: format!("cannot build a {n}-thread pool: {e}"),
                })?,
        ),
    };

    match &cli.command {
        Command::Classify(args) => cmd_classify(args, &units, tolerance, out),
        Command::Barrier(args) => cmd_barrier(args, &units, out),
        Command::Compose(args) => cmd_compose(args, tolerance, out),
        Command::Periodic(args) => cmd_periodic(args, &units, out),
        Command::Orbit(args) => cmd_orbit(args, &units, tolerance, out),
        Command::Iterates(args) => cmd_iterates(args, &units, out),
        Command::Turns(args) => cmd_turns(args, tolerance, out),
        Command::BandScan(args) => cmd_band_scan(args, &units, pool.as_ref(), out),
        Command::OracleCompare(args) => cmd_oracle_compare(args, &units, out),
    }
}

fn main() {
    let cli = Cli::parse();
    let format = OutputFormat::from(cli.run.format);
    let stdout = std::io::stdout();
    let mut out = Emitter::new(stdout.lock(), format, cli.run.precision);

    let code = match run(&cli, &mut out) {
        Ok(()) => 0,
        Err(Failure::Lib(err)) => {
            let stderr = std::io::stderr();
            let mut err_out = Emitter::new(stderr.lock(), format, cli.run.precision);
            let _ = err_out.emit(&error_record(&err));
            let _ = err_out.flush();
            if err.is_validation() {
                2
            } else {
                3
            }
        }
        // stdout is gone (e.g. a closed pipe); there is nowhere to report.
        Err(Failure::Io) => 1,
    };
    if out.flush().is_err() && code == 0 {
        std::process::exit(1);
    }
    std::process::exit(code);
}
