//! Command-line front end for the mvlorenz inequality toolkit.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::Rng;

use mvlorenz::numeric::{fmt_full, fmt_sig};
use mvlorenz::{
    apply_transfer, dominance_graph, export_dot, export_surface, gini, independence_megc,
    load_config, load_table, megc, megc_decomposition, meilc_surface, parametric_megc_mc,
    parametric_megc_quadrature, parametric_surface, parse_transfer_specs, preprocess,
    pseudo_observations, report, spearman_to_param, write_dataset_csv, CopulaFamily,
    CopulaModel, Dataset, GiniConvention, GridSpec, Margin, RawTable, SurfaceFormat,
};

#[derive(Parser)]
#[command(
    name = "mvlorenz",
    about = "Multivariate inequality measurement: Lorenz surfaces, multivariate Gini coefficients, transfers, and dominance comparisons",
    version
)]
struct Cli {
    /// Worker threads for surfaces and Monte Carlo (default: all cores;
    /// results do not depend on this). Env fallback: MVLORENZ_THREADS.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Print 17 significant digits instead of 6.
    #[arg(long, global = true)]
    full_precision: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Univariate Gini coefficient per column.
    Gini {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum, default_value_t = Convention::Trapezoid)]
        convention: Convention,
    },
    /// Multivariate Gini coefficient, with the bivariate decomposition when d = 2.
    Megc {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Cumulative-share rank matrix as CSV.
    Pseudo {
        #[command(flatten)]
        input: InputArgs,
        /// Output path (stdout when omitted).
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Inverse Lorenz surface on a grid, empirical or parametric.
    Surface {
        #[command(flatten)]
        input: OptionalInputArgs,
        #[command(flatten)]
        model: ModelArgs,
        /// Grid knots per axis (equally spaced, endpoints included).
        #[arg(long, default_value_t = mvlorenz::DEFAULT_GRID_POINTS)]
        grid_points: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Parametric multivariate Gini via Monte Carlo and/or quadrature.
    Simulate {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_enum, default_value_t = Method::Both)]
        method: Method,
        #[arg(long, default_value_t = 1_000_000)]
        count: usize,
        /// Seed for all randomness; drawn and printed when omitted.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Apply JSON-lines transfer specs, printing one record per step.
    Transfer {
        #[command(flatten)]
        input: InputArgs,
        /// Spec file: one {"kind":"cit",...} or {"kind":"pdbt",...} per line.
        #[arg(long)]
        specs: PathBuf,
        /// Write the final dataset as CSV.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Inequality reports plus the dominance Hasse diagram for several files.
    Compare {
        /// Input CSV files.
        #[arg(long, num_args = 1.., required = true)]
        inputs: Vec<PathBuf>,
        /// Comma-separated labels matching --inputs (default: file stems).
        #[arg(long)]
        labels: Option<String>,
        #[arg(long)]
        columns: Option<String>,
        #[arg(long)]
        weight_col: Option<String>,
        #[arg(long, default_value_t = b',', value_parser = parse_delimiter)]
        delimiter: u8,
        /// Keep transitively implied edges.
        #[arg(long)]
        no_reduce: bool,
        /// Write the DOT graph here instead of stdout.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Run the survey preprocessing pipeline, emitting clean CSV + drop report.
    Ingest {
        #[arg(long)]
        input: PathBuf,
        /// Pipeline config as JSON or TOML.
        #[arg(long)]
        config: PathBuf,
        /// Clean dataset CSV (schema: value columns, then weight).
        #[arg(long)]
        output: PathBuf,
        /// Drop report JSON path (stdout when omitted).
        #[arg(long)]
        drop_report: Option<PathBuf>,
        #[arg(long, default_value_t = b',', value_parser = parse_delimiter)]
        delimiter: u8,
    },
}

#[derive(Args)]
struct InputArgs {
    /// Input CSV with a header row.
    #[arg(long)]
    input: PathBuf,
    /// Comma-separated value columns (default: all except the weight column).
    #[arg(long)]
    columns: Option<String>,
    /// Weight column name.
    #[arg(long)]
    weight_col: Option<String>,
    #[arg(long, default_value_t = b',', value_parser = parse_delimiter)]
    delimiter: u8,
}

#[derive(Args)]
struct OptionalInputArgs {
    /// Input CSV for the empirical surface (omit for parametric).
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    columns: Option<String>,
    #[arg(long)]
    weight_col: Option<String>,
    #[arg(long, default_value_t = b',', value_parser = parse_delimiter)]
    delimiter: u8,
}

#[derive(Args)]
struct ModelArgs {
    /// Copula family for parametric evaluation.
    #[arg(long, value_enum)]
    family: Option<Family>,
    /// Target Spearman's rho (calibrated to the family parameter).
    #[arg(long)]
    rho: Option<f64>,
    /// Raw family parameter (alternative to --rho).
    #[arg(long)]
    theta: Option<f64>,
    /// Margin exponents a: inverse Lorenz margins u^a, one per dimension.
    #[arg(long, num_args = 1..)]
    margin_a: Vec<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Convention {
    Trapezoid,
    Plugin,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Mc,
    Quadrature,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Independence,
    Comonotone,
    Countermonotone,
    Gaussian,
    Clayton,
    Gumbel,
}

impl Family {
    fn to_lib(self) -> CopulaFamily {
        match self {
            Family::Independence => CopulaFamily::Independence,
            Family::Comonotone => CopulaFamily::Comonotone,
            Family::Countermonotone => CopulaFamily::Countermonotone,
            Family::Gaussian => CopulaFamily::Gaussian,
            Family::Clayton => CopulaFamily::Clayton,
            Family::Gumbel => CopulaFamily::Gumbel,
        }
    }
}

fn parse_delimiter(s: &str) -> Result<u8, String> {
    let bytes = s.as_bytes();
    if bytes.len() != 1 {
        return Err("delimiter must be a single byte".into());
    }
    Ok(bytes[0])
}

enum CliError {
    Validation(String),
    Io(String),
}

impl From<mvlorenz::Error> for CliError {
    fn from(e: mvlorenz::Error) -> Self {
        match e {
            mvlorenz::Error::Io(io) => CliError::Io(io.to_string()),
            other => CliError::Validation(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

type CliResult<T> = Result<T, CliError>;

struct Printer {
    full: bool,
}

impl Printer {
    fn num(&self, x: f64) -> String {
        if self.full {
            fmt_full(x)
        } else {
            fmt_sig(x, 6)
        }
    }

    fn err(&self, x: f64) -> String {
        fmt_sig(x, 3)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    let threads = cli.threads.or_else(|| {
        std::env::var("MVLORENZ_THREADS").ok().and_then(|v| v.parse().ok())
    });
    if let Some(n) = threads {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    let printer = Printer { full: cli.full_precision };
    match run(cli.command, &printer) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Io(msg)) => {
            eprintln!("io error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn split_list(s: &str) -> Vec<String> {
    s.split(',').map(|p| p.trim().to_string()).filter(|p| !p.is_empty()).collect()
}

/// Loads a strict numeric dataset: every used cell must parse. Rows with
/// missing cells are a hard error here; the ingest pipeline handles them.
fn load_dataset(
    path: &Path,
    columns: &Option<String>,
    weight_col: &Option<String>,
    delimiter: u8,
) -> CliResult<Dataset> {
    let table = load_table(path, delimiter, true)?;
    let value_names: Vec<String> = match columns {
        Some(s) => split_list(s),
        None => table
            .headers()
            .iter()
            .filter(|h| Some(h.as_str()) != weight_col.as_deref())
            .cloned()
            .collect(),
    };
    if value_names.is_empty() {
        return Err(CliError::Validation("no value columns selected".into()));
    }
    let value_idx: Vec<usize> = value_names
        .iter()
        .map(|n| table.column_index(n))
        .collect::<mvlorenz::Result<_>>()?;
    let weight_idx = match weight_col {
        Some(n) => Some(table.column_index(n)?),
        None => None,
    };
    let mut rows = Vec::with_capacity(table.n_rows());
    let mut weights = Vec::with_capacity(table.n_rows());
    for r in 0..table.n_rows() {
        let mut row = Vec::with_capacity(value_idx.len());
        for (&c, name) in value_idx.iter().zip(&value_names) {
            match table.cell(r, c) {
                Some(v) => row.push(v),
                None => {
                    return Err(CliError::Validation(format!(
                        "row {} column {name:?} is not numeric; run `mvlorenz ingest` first",
                        r + 1
                    )))
                }
            }
        }
        rows.push(row);
        if let Some(c) = weight_idx {
            match table.cell(r, c) {
                Some(w) => weights.push(w),
                None => {
                    return Err(CliError::Validation(format!(
                        "row {} has a non-numeric weight",
                        r + 1
                    )))
                }
            }
        }
    }
    Ok(Dataset::from_rows(
        &rows,
        weight_idx.map(|_| weights),
        Some(value_names),
    )?)
}

fn build_model(args: &ModelArgs) -> CliResult<(CopulaModel, Vec<Margin>)> {
    let family = args
        .family
        .ok_or_else(|| CliError::Validation("--family is required for parametric runs".into()))?
        .to_lib();
    if args.margin_a.is_empty() {
        return Err(CliError::Validation("--margin-a needs one exponent per dimension".into()));
    }
    let margins: Vec<Margin> = args
        .margin_a
        .iter()
        .map(|&a| Margin::power(a))
        .collect::<mvlorenz::Result<_>>()?;
    let dim = margins.len();
    let parameter = match (args.rho, args.theta) {
        (Some(_), Some(_)) => {
            return Err(CliError::Validation("--rho and --theta are mutually exclusive".into()))
        }
        (Some(rho), None) => spearman_to_param(family, rho)?,
        (None, Some(theta)) => theta,
        (None, None) => match family {
            CopulaFamily::Independence
            | CopulaFamily::Comonotone
            | CopulaFamily::Countermonotone => 0.0,
            _ => {
                return Err(CliError::Validation(
                    "parametric families need --rho or --theta".into(),
                ))
            }
        },
    };
    Ok((CopulaModel::new(family, parameter, dim)?, margins))
}

fn write_or_print(path: &Option<PathBuf>, content: &str) -> CliResult<()> {
    match path {
        Some(p) => {
            std::fs::write(p, content)?;
            Ok(())
        }
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn run(command: Command, p: &Printer) -> CliResult<()> {
    match command {
        Command::Gini { input, convention } => {
            let ds = load_dataset(&input.input, &input.columns, &input.weight_col, input.delimiter)?;
            let conv = match convention {
                Convention::Trapezoid => GiniConvention::Trapezoid,
                Convention::Plugin => GiniConvention::Plugin,
            };
            for c in 0..ds.dim() {
                let g = gini(&ds.column(c), Some(ds.weights()), conv)?;
                println!("{}={}", ds.var_names()[c], p.num(g));
            }
            Ok(())
        }
        Command::Megc { input } => {
            let ds = load_dataset(&input.input, &input.columns, &input.weight_col, input.delimiter)?;
            let pseudo = pseudo_observations(&ds);
            println!("n={} d={} weight_total={}", ds.n(), ds.dim(), p.num(ds.total_weight()));
            println!("megc={}", p.num(megc(&pseudo)));
            if ds.dim() == 2 {
                let dec = megc_decomposition(&pseudo)?;
                println!(
                    "cross_moment={} g1_plugin={} g2_plugin={}",
                    p.num(dec.cross_moment),
                    p.num(dec.g1),
                    p.num(dec.g2)
                );
            }
            Ok(())
        }
        Command::Pseudo { input, output } => {
            let ds = load_dataset(&input.input, &input.columns, &input.weight_col, input.delimiter)?;
            let pseudo = pseudo_observations(&ds);
            let mut out = String::new();
            out.push_str(&ds.var_names().join(","));
            out.push_str(",weight\n");
            for r in 0..pseudo.n() {
                for c in 0..pseudo.dim() {
                    out.push_str(&fmt_full(pseudo.star(r, c)));
                    out.push(',');
                }
                out.push_str(&fmt_full(pseudo.weights()[r]));
                out.push('\n');
            }
            write_or_print(&output, &out)
        }
        Command::Surface { input, model, grid_points, format, output } => {
            let fmt = match format {
                Format::Csv => SurfaceFormat::Csv,
                Format::Json => SurfaceFormat::Json,
            };
            let surface = match &input.input {
                Some(path) => {
                    let ds =
                        load_dataset(path, &input.columns, &input.weight_col, input.delimiter)?;
                    let grid = GridSpec::uniform(ds.dim(), grid_points)?;
                    meilc_surface(&pseudo_observations(&ds), &grid)?
                }
                None => {
                    let (copula, margins) = build_model(&model)?;
                    let grid = GridSpec::uniform(copula.dim(), grid_points)?;
                    parametric_surface(&copula, &margins, &grid)?
                }
            };
            write_or_print(&output, &export_surface(&surface, fmt))
        }
        Command::Simulate { model, method, count, seed } => {
            let (copula, margins) = build_model(&model)?;
            let margin_list: Vec<String> =
                model.margin_a.iter().map(|a| p.num(*a)).collect();
            println!(
                "family={} param={} d={} margins={}",
                copula.family().name(),
                p.num(copula.parameter()),
                copula.dim(),
                margin_list.join(",")
            );
            if matches!(method, Method::Quadrature | Method::Both) {
                let (est, err) = parametric_megc_quadrature(&copula, &margins)?;
                println!("megc_quadrature={} est_error={}", p.num(est), p.err(err));
            }
            if matches!(method, Method::Mc | Method::Both) {
                let seed = seed.unwrap_or_else(|| rand::rng().random());
                let (est, se) = parametric_megc_mc(&copula, &margins, count, seed)?;
                println!(
                    "megc_mc={} std_error={} count={count} seed={seed}",
                    p.num(est),
                    p.err(se)
                );
            }
            if copula.family() == CopulaFamily::Independence {
                let ginis: Vec<f64> = margins.iter().map(Margin::gini).collect();
                println!("megc_closed_form={}", p.num(independence_megc(&ginis)?));
            }
            Ok(())
        }
        Command::Transfer { input, specs, output } => {
            let mut ds =
                load_dataset(&input.input, &input.columns, &input.weight_col, input.delimiter)?;
            let text = std::fs::read_to_string(&specs)?;
            let specs = parse_transfer_specs(&text)?;
            for spec in &specs {
                let (next, record) = apply_transfer(&ds, spec)?;
                println!(
                    "{}",
                    serde_json::to_string(&record)
                        .map_err(|e| CliError::Validation(e.to_string()))?
                );
                ds = next;
            }
            if let Some(path) = output {
                std::fs::write(path, write_dataset_csv(&ds, true))?;
            }
            Ok(())
        }
        Command::Compare { inputs, labels, columns, weight_col, delimiter, no_reduce, dot } => {
            let labels: Vec<String> = match labels {
                Some(s) => {
                    let l = split_list(&s);
                    if l.len() != inputs.len() {
                        return Err(CliError::Validation(format!(
                            "{} labels for {} inputs",
                            l.len(),
                            inputs.len()
                        )));
                    }
                    l
                }
                None => inputs
                    .iter()
                    .map(|p| {
                        p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
                    })
                    .collect(),
            };
            let mut reports = Vec::with_capacity(inputs.len());
            for (path, label) in inputs.iter().zip(&labels) {
                let ds = load_dataset(path, &columns, &weight_col, delimiter)?;
                reports.push(report(&ds, label)?);
            }
            for r in &reports {
                println!(
                    "{}",
                    serde_json::to_string(r).map_err(|e| CliError::Validation(e.to_string()))?
                );
            }
            let graph = dominance_graph(&reports, !no_reduce)?;
            let rendered = export_dot(&graph);
            match dot {
                Some(path) => std::fs::write(path, rendered)?,
                None => print!("{rendered}"),
            }
            Ok(())
        }
        Command::Ingest { input, config, output, drop_report, delimiter } => {
            let table: RawTable = load_table(&input, delimiter, true)?;
            let config = load_config(&config)?;
            let (ds, report) = preprocess(&table, &config)?;
            std::fs::write(&output, write_dataset_csv(&ds, true))?;
            let json = serde_json::to_string_pretty(&report)
                .map_err(|e| CliError::Validation(e.to_string()))?;
            match drop_report {
                Some(path) => std::fs::write(path, json)?,
                None => println!("{json}"),
            }
            Ok(())
        }
    }
}
