//! The `pdcor` command-line interface.
//!
//! Exit status: 0 on success, 1 for usage and input errors, 2 when the
//! computation itself fails or the data are degenerate.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{Map, Value};

use crate::distgeom::{pairwise_distances, u_center, DissimilarityMatrix};
use crate::embed::{classical_mds, cailliez_constant, euclidean_representation, euclidean_representation_with_dim};
use crate::error::{Error, Result};
use crate::estimators::{dcor_sq_biased, dcor_star, dcov_sq_biased, dcov_sq_unbiased};
use crate::inference::{
    dcov_ip_test, dcov_test, mantel_partial_test, mantel_test, pcor_test, pdcov_test, Alternative,
    PcorReference, PermutationConfig,
};
use crate::io::{read_table_path, write_data, Table};
use crate::partial::pdcor_sample;
use crate::rng::DEFAULT_SEED;
use crate::select::{forward_select, SelectOptions};
use crate::simbench::{run_power, write_csv, Generator, SimConfig};

#[derive(Debug, Parser)]
#[command(name = "pdcor", version, about = "Distance correlation, partial distance correlation and their tests")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Distance covariance and correlation of two samples.
    Dcor {
        x: PathBuf,
        y: PathBuf,
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        output: Format,
    },
    /// Partial distance correlation of x and y given z.
    Pdcor {
        x: PathBuf,
        y: PathBuf,
        z: PathBuf,
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        output: Format,
    },
    /// Permutation and t tests of independence or conditional independence.
    Test(TestArgs),
    /// Euclidean configuration of a dissimilarity matrix.
    Embed(EmbedArgs),
    /// Forward variable selection by partial distance correlation.
    Select(SelectArgs),
    /// Simulated rejection rates of the four conditional tests.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
struct InputArgs {
    /// Inputs are square dissimilarity matrices rather than observations.
    #[arg(long)]
    dissimilarity: bool,
    /// The first CSV row holds column names.
    #[arg(long)]
    header: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TestMethod {
    Dcov,
    DcovIp,
    Pdcov,
    Pcor,
    Mantel,
    MantelPartial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Reference {
    Normal,
    StudentT,
}

#[derive(Debug, Args)]
struct TestArgs {
    #[arg(long, value_enum)]
    method: TestMethod,
    /// Two inputs, or three for pdcov, pcor and mantel-partial.
    #[arg(required = true, num_args = 2..=3)]
    inputs: Vec<PathBuf>,
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, default_value_t = 999)]
    replicates: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Worker threads for the replicate loop; results do not depend on it.
    #[arg(long)]
    workers: Option<usize>,
    /// Compare |T| instead of T for the permutation tests.
    #[arg(long)]
    two_sided: bool,
    /// Reference distribution of the pcor t statistic.
    #[arg(long, value_enum, default_value_t = Reference::Normal)]
    reference: Reference,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    output: Format,
}

#[derive(Debug, Args)]
struct EmbedArgs {
    /// Dissimilarity matrix; it is U-centered before embedding unless
    /// `--classical` is given.
    input: PathBuf,
    #[arg(long)]
    header: bool,
    /// `auto` for the exact representation, or a dimension count.
    #[arg(long, default_value = "auto")]
    dim: String,
    /// Classical MDS of the dissimilarities themselves, with the additive
    /// constant when they are not Euclidean.
    #[arg(long)]
    classical: bool,
    /// Where to write the points; standard output by default.
    #[arg(long)]
    points: Option<PathBuf>,
    /// Where to write the JSON sidecar; defaults to the points path with a
    /// `.json` extension, or standard error when points go to standard output.
    #[arg(long)]
    sidecar: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SelectArgs {
    /// Observations with the response and the candidate predictors.
    data: PathBuf,
    #[arg(long)]
    header: bool,
    /// Response column, by name or 1-based number.
    #[arg(long)]
    response: String,
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    #[arg(long)]
    max_steps: Option<usize>,
    #[arg(long, default_value_t = 999)]
    replicates: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long)]
    workers: Option<usize>,
    /// Use the columns as given instead of centering and scaling them.
    #[arg(long)]
    no_standardize: bool,
    /// Test every candidate at every step.
    #[arg(long)]
    test_all: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GeneratorArg {
    NormalIndep,
    LognormalIndep,
    NormalCorr,
    LognormalCorr,
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[arg(long, value_enum, default_value_t = GeneratorArg::NormalIndep)]
    generator: GeneratorArg,
    /// Sample sizes.
    #[arg(long, value_delimiter = ',', default_values_t = [10usize, 20, 30])]
    n: Vec<usize>,
    #[arg(long, default_value_t = 1000)]
    sims: usize,
    #[arg(long, default_value_t = 199)]
    replicates: usize,
    #[arg(long, value_delimiter = ',', default_values_t = [0.05, 0.10])]
    alpha: Vec<f64>,
    /// Latent correlations (x,y), (x,z), (y,z) for the correlated generators.
    #[arg(long, value_delimiter = ',', num_args = 3, default_values_t = [0.5, 0.5, 0.5])]
    rho: Vec<f64>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Reference::Normal)]
    reference: Reference,
    /// CSV destination; standard output by default.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Runs the command line `argv` (including the program name) against the
/// process's standard streams.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_numeric() {
                2
            } else {
                1
            }
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    match command {
        Command::Dcor { x, y, input, output } => {
            let (dx, dy) = (load(&x, &input)?, load(&y, &input)?);
            let summary = DcorSummary {
                n: dx.order(),
                dcor: dcor_sq_biased(&dx, &dy)?.sqrt(),
                dcov_sq_biased: dcov_sq_biased(&dx, &dy)?,
                dcov_sq_unbiased: dcov_sq_unbiased(&dx, &dy)?,
                dcor_star: dcor_star(&dx, &dy)?,
            };
            emit(out, &summary, output)
        }
        Command::Pdcor { x, y, z, input, output } => {
            let (dx, dy, dz) = (load(&x, &input)?, load(&y, &input)?, load(&z, &input)?);
            emit(out, &pdcor_sample(&dx, &dy, &dz)?, output)
        }
        Command::Test(args) => test(args, out),
        Command::Embed(args) => embed(args, out, err),
        Command::Select(args) => select(args, out),
        Command::Bench(args) => bench(args, out),
    }
}

#[derive(Debug, Serialize)]
struct DcorSummary {
    n: usize,
    dcor: f64,
    dcov_sq_biased: f64,
    dcov_sq_unbiased: f64,
    dcor_star: f64,
}

/// Reads an input as a dissimilarity matrix, computing Euclidean distances
/// between rows unless it already is one.
fn load(path: &Path, input: &InputArgs) -> Result<DissimilarityMatrix> {
    let table = read_table_path(path, input.header)?;
    if input.dissimilarity {
        table.into_dissimilarity()
    } else {
        Ok(pairwise_distances(&table.into_data()?))
    }
}

fn single_column(path: &Path, header: bool) -> Result<Vec<f64>> {
    let table: Table = read_table_path(path, header)?;
    if table.ncols() != 1 {
        return Err(Error::InvalidInput(format!(
            "{}: expected one column, found {}",
            path.display(),
            table.ncols()
        )));
    }
    Ok(table.rows.into_iter().map(|r| r[0]).collect())
}

fn test(args: TestArgs, out: &mut dyn Write) -> Result<()> {
    let needs_three = matches!(
        args.method,
        TestMethod::Pdcov | TestMethod::Pcor | TestMethod::MantelPartial
    );
    let expected = if needs_three { 3 } else { 2 };
    if args.inputs.len() != expected {
        return Err(Error::InvalidInput(format!(
            "this method takes {expected} inputs, {} given",
            args.inputs.len()
        )));
    }
    let mut cfg = PermutationConfig::new(args.replicates, args.seed);
    cfg.workers = args.workers;
    if args.two_sided {
        cfg.alternative = Some(Alternative::TwoSided);
    }
    let input = &args.input;
    let result = match args.method {
        TestMethod::Pcor => {
            if input.dissimilarity {
                return Err(Error::InvalidInput("pcor needs univariate observations".into()));
            }
            let x = single_column(&args.inputs[0], input.header)?;
            let y = single_column(&args.inputs[1], input.header)?;
            let z = single_column(&args.inputs[2], input.header)?;
            let reference = match args.reference {
                Reference::Normal => PcorReference::Normal,
                Reference::StudentT => PcorReference::StudentT,
            };
            pcor_test(&x, &y, &z, reference)?
        }
        method => {
            let d: Vec<DissimilarityMatrix> = args.inputs.iter().map(|p| load(p, input)).collect::<Result<_>>()?;
            match method {
                TestMethod::Dcov => dcov_test(&d[0], &d[1], &cfg)?,
                TestMethod::DcovIp => dcov_ip_test(&d[0], &d[1], &cfg)?,
                TestMethod::Pdcov => pdcov_test(&d[0], &d[1], &d[2], &cfg)?,
                TestMethod::Mantel => mantel_test(&d[0], &d[1], &cfg)?,
                TestMethod::MantelPartial => mantel_partial_test(&d[0], &d[1], &d[2], &cfg)?,
                TestMethod::Pcor => unreachable!("handled above"),
            }
        }
    };
    emit(out, &result, args.output)
}

fn embed(args: EmbedArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let d = read_table_path(&args.input, args.header)?.into_dissimilarity()?;
    let n = d.order();
    let dim = match args.dim.as_str() {
        "auto" => None,
        s => Some(
            s.parse::<usize>()
                .map_err(|_| Error::InvalidInput(format!("--dim must be 'auto' or a count, got '{s}'")))?,
        ),
    };
    let result = if args.classical {
        let c = cailliez_constant(&d)?.max(0.0);
        let mut e = classical_mds(&d.add_constant(c), dim.unwrap_or(n.saturating_sub(1).max(1)))?;
        e.constant = c;
        e
    } else {
        let h = u_center(&d)?;
        match dim {
            None => euclidean_representation(&h)?,
            Some(k) => euclidean_representation_with_dim(&h, k)?,
        }
    };
    let header: Vec<String> = (1..=result.dimension()).map(|k| format!("v{k}")).collect();
    let sidecar = serde_json::to_string_pretty(&result.sidecar())?;
    match &args.points {
        Some(path) => {
            write_data(std::fs::File::create(path)?, &result.points, Some(&header))?;
            let sidecar_path = args.sidecar.clone().unwrap_or_else(|| path.with_extension("json"));
            std::fs::write(sidecar_path, sidecar + "\n")?;
        }
        None => {
            write_data(&mut *out, &result.points, Some(&header))?;
            match &args.sidecar {
                Some(path) => std::fs::write(path, sidecar + "\n")?,
                None => writeln!(err, "{sidecar}")?,
            }
        }
    }
    Ok(())
}

#[derive(Debug, Serialize)]
struct NamedStep {
    #[serde(skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    #[serde(flatten)]
    step: crate::select::SelectionStep,
}

#[derive(Debug, Serialize)]
struct NamedTrace {
    response: String,
    candidates: Vec<String>,
    steps: Vec<NamedStep>,
    stopped_reason: crate::select::StopReason,
}

fn select(args: SelectArgs, out: &mut dyn Write) -> Result<()> {
    let table = read_table_path(&args.data, args.header)?;
    let response = table.column_index(&args.response)?;
    let names: Vec<String> = match &table.header {
        Some(h) => h.clone(),
        None => (1..=table.ncols()).map(|k| k.to_string()).collect(),
    };
    let data = table.into_data()?;
    let predictors: Vec<usize> = (0..data.ncols()).filter(|&j| j != response).collect();
    let y = data.select_columns(&[response])?;
    let x = data.select_columns(&predictors)?;
    let options = SelectOptions {
        alpha: args.alpha,
        replicates: args.replicates,
        seed: args.seed,
        max_steps: args.max_steps,
        standardize: !args.no_standardize,
        test_all_candidates: args.test_all,
        workers: args.workers,
    };
    let trace = forward_select(&y, &x, &options)?;
    let named = NamedTrace {
        response: names[response].clone(),
        candidates: predictors.iter().map(|&j| names[j].clone()).collect(),
        steps: trace
            .steps
            .into_iter()
            .map(|step| NamedStep {
                name: Some(names[predictors[step.variable]].clone()),
                step,
            })
            .collect(),
        stopped_reason: trace.stopped_reason,
    };
    serde_json::to_writer_pretty(&mut *out, &named)?;
    writeln!(out)?;
    Ok(())
}

fn bench(args: BenchArgs, out: &mut dyn Write) -> Result<()> {
    let generator = match args.generator {
        GeneratorArg::NormalIndep => Generator::NormalIndep,
        GeneratorArg::LognormalIndep => Generator::LognormalIndep,
        GeneratorArg::NormalCorr => Generator::NormalCorr,
        GeneratorArg::LognormalCorr => Generator::LognormalCorr,
    };
    let config = SimConfig {
        n: args.n.first().copied().unwrap_or(30),
        sims: args.sims,
        replicates: args.replicates,
        alphas: args.alpha,
        generator,
        correlations: [args.rho[0], args.rho[1], args.rho[2]],
        seed: args.seed,
        pcor_reference: match args.reference {
            Reference::Normal => PcorReference::Normal,
            Reference::StudentT => PcorReference::StudentT,
        },
    };
    let rows = run_power(&config, &args.n)?;
    match &args.out {
        Some(path) => write_csv(&rows, std::fs::File::create(path)?),
        None => write_csv(&rows, out),
    }
}

/// Writes `value` as pretty JSON, or as a two-line CSV of its scalar fields.
fn emit<T: Serialize>(out: &mut dyn Write, value: &T, format: Format) -> Result<()> {
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, value)?;
            writeln!(out)?;
        }
        Format::Csv => {
            let Value::Object(map) = serde_json::to_value(value)? else {
                return Err(Error::InvalidInput("value has no fields".into()));
            };
            let (keys, values) = flatten(&map);
            writeln!(out, "{}", keys.join(","))?;
            writeln!(out, "{}", values.join(","))?;
        }
    }
    Ok(())
}

fn flatten(map: &Map<String, Value>) -> (Vec<String>, Vec<String>) {
    let mut keys = Vec::new();
    let mut values = Vec::new();
    for (k, v) in map {
        keys.push(k.clone());
        values.push(match v {
            Value::String(s) => s.clone(),
            other => other.to_string(),
        });
    }
    (keys, values)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run_with(args.iter().copied(), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn unknown_subcommand_is_usage_error() {
        let (code, _, err) = run_capture(&["pdcor", "frobnicate"]);
        assert_eq!(code, 1);
        assert!(err.contains("frobnicate"));
    }

    #[test]
    fn missing_file_is_input_error() {
        let (code, _, err) = run_capture(&["pdcor", "dcor", "/nonexistent/a.csv", "/nonexistent/b.csv"]);
        assert_eq!(code, 1);
        assert!(err.contains("a.csv"));
    }

    #[test]
    fn help_exits_zero() {
        let (code, out, _) = run_capture(&["pdcor", "--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("pdcor"));
    }
}
