//! Command-line front end: dimension and Euler characteristic tables, graph
//! listings, cohomology of small complexes, and verification against the
//! published tables.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gcdims::coeff::PrimeBasis;
use gcdims::complex::{self, ComplexError};
use gcdims::euler::{self, euler_from_dims, DimTable, EulerError, EulerTable};
use gcdims::flavor::Flavor;
use gcdims::genfun::{evaluate_dims_cached, Backend, DimCache, GenFunError};
use gcdims::graphs::{self, GraphError};
use gcdims::series::Truncation;
use gcdims::tables;
use serde::Serialize;

/// Largest loop order covered by the published tables.
const PUBLISHED_MAX_B: usize = 30;

#[derive(Parser, Debug)]
#[command(name = "gcdims", version, about = "Dimensions and Euler characteristics of graph complexes")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Dimensions of the graph spaces, all graphs.
    Dims(TableArgs),
    /// Euler characteristics, all graphs.
    Euler(TableArgs),
    /// Connected Euler characteristics, or connected dimensions with --dims.
    Connected {
        #[command(flatten)]
        table: TableArgs,
        #[arg(long)]
        dims: bool,
    },
    /// List the graph classes with `v` vertices and `e` edges.
    Enumerate {
        #[arg(long, default_value = "odd")]
        flavor: FlavorArg,
        #[arg(long)]
        v: usize,
        #[arg(long)]
        e: usize,
        /// Connected graphs only.
        #[arg(long)]
        connected: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Cohomology of the connected complex for loop orders 1..=max-b.
    Cohomology {
        #[arg(long, default_value = "odd")]
        flavor: FlavorArg,
        #[arg(long, default_value_t = 3)]
        max_b: usize,
        /// Use all graphs instead of connected ones.
        #[arg(long, conflicts_with = "one_vertex_irreducible")]
        all_graphs: bool,
        #[arg(long)]
        one_vertex_irreducible: bool,
        /// Write every differential as a triplet file into this directory.
        #[arg(long)]
        export_dir: Option<PathBuf>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Compare computed values with the published tables.
    Verify {
        /// Loop orders to check (default 10, or 16 with --deep).
        #[arg(long)]
        max_b: Option<usize>,
        #[arg(long)]
        deep: bool,
        #[command(flatten)]
        backend: BackendArgs,
        #[arg(long)]
        cache_dir: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct TableArgs {
    #[arg(long, default_value = "all")]
    flavor: FlavorArg,
    #[arg(long, default_value_t = 6)]
    max_b: usize,
    #[command(flatten)]
    backend: BackendArgs,
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct BackendArgs {
    #[arg(long, value_enum, default_value_t = BackendKind::Modular)]
    backend: BackendKind,
    /// Comma-separated primes for the modular backend.
    #[arg(long)]
    primes: Option<String>,
}

#[derive(Args, Debug)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Output file (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum BackendKind {
    Exact,
    Modular,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Debug)]
struct FlavorArg(Vec<Flavor>);

impl FromStr for FlavorArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "all" {
            Ok(FlavorArg(Flavor::ALL.to_vec()))
        } else {
            s.parse::<Flavor>().map(|f| FlavorArg(vec![f])).map_err(|e| e.to_string())
        }
    }
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Verification(String),
    Resource(String),
    Runtime(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Runtime(_) => 1,
            CliError::Verification(_) => 2,
            CliError::Resource(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Verification(m) | CliError::Resource(m) | CliError::Runtime(m) => f.write_str(m),
        }
    }
}

impl From<GenFunError> for CliError {
    fn from(e: GenFunError) -> Self {
        match e {
            GenFunError::PrimeBasisTooSmall { .. } => CliError::Resource(format!("{e}; pass more primes with --primes")),
            e => CliError::Runtime(e.to_string()),
        }
    }
}

impl From<EulerError> for CliError {
    fn from(e: EulerError) -> Self {
        match e {
            EulerError::Overflow(_) => CliError::Resource(e.to_string()),
            e => CliError::Runtime(e.to_string()),
        }
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::TooManyVertices(..) | GraphError::TooLarge { .. } => CliError::Resource(e.to_string()),
            e => CliError::Runtime(e.to_string()),
        }
    }
}

impl From<ComplexError> for CliError {
    fn from(e: ComplexError) -> Self {
        match e {
            ComplexError::TooLarge(_) => CliError::Resource(e.to_string()),
            ComplexError::Graph(g) => g.into(),
            ComplexError::UnsupportedFlavor(_) => CliError::Usage(e.to_string()),
            e => CliError::Runtime(e.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

impl BackendArgs {
    fn backend(&self) -> Result<Backend, CliError> {
        match (self.backend, &self.primes) {
            (BackendKind::Exact, Some(_)) => Err(CliError::Usage("--primes needs --backend modular".into())),
            (BackendKind::Exact, None) => Ok(Backend::Exact),
            (BackendKind::Modular, None) => Ok(Backend::Modular(PrimeBasis::default())),
            (BackendKind::Modular, Some(list)) => PrimeBasis::parse(list).map(Backend::Modular).map_err(|e| CliError::Usage(e.to_string())),
        }
    }
}

/// Rows rendered as CSV (header from the field names) or a JSON array.
fn render<T: Serialize>(rows: &[T], format: Format) -> Result<String, CliError> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(rows).map_err(|e| CliError::Runtime(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => {
            let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
            for row in rows {
                w.serialize(row).map_err(|e| CliError::Runtime(e.to_string()))?;
            }
            let bytes = w.into_inner().map_err(|e| CliError::Runtime(e.to_string()))?;
            String::from_utf8(bytes).map_err(|e| CliError::Runtime(e.to_string()))
        }
    }
}

fn emit<T: Serialize>(rows: &[T], output: &OutputArgs) -> Result<(), CliError> {
    let text = render(rows, output.format)?;
    match &output.out {
        Some(path) => fs::write(path, text)?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn all_dims(flavor: Flavor, max_b: usize, backend: &Backend, cache: Option<&DimCache>) -> Result<DimTable, CliError> {
    Ok(evaluate_dims_cached(flavor, Truncation::for_loop_order(max_b), backend, cache)?)
}

fn run_table(args: &TableArgs, make: impl Fn(DimTable) -> Result<Table, CliError>) -> Result<(), CliError> {
    let backend = args.backend.backend()?;
    let cache = args.cache_dir.as_ref().map(DimCache::new);
    let mut dim_rows = Vec::new();
    let mut euler_rows = Vec::new();
    for &f in &args.flavor.0 {
        match make(all_dims(f, args.max_b, &backend, cache.as_ref())?)? {
            Table::Dims(t) => dim_rows.extend(t.rows()?),
            Table::Euler(t) => euler_rows.extend(t.rows()?),
        }
    }
    if dim_rows.is_empty() {
        emit(&euler_rows, &args.output)
    } else {
        emit(&dim_rows, &args.output)
    }
}

enum Table {
    Dims(DimTable),
    Euler(EulerTable),
}

#[derive(Serialize)]
struct GraphRow {
    flavor: String,
    v: usize,
    e: usize,
    index: usize,
    graph: String,
    automorphisms: u64,
}

#[derive(Serialize)]
struct CohomologyRow {
    flavor: String,
    b: usize,
    v: usize,
    e: usize,
    basis: usize,
    rank: usize,
    cohomology: usize,
}

#[derive(Serialize)]
struct ComparisonRow {
    table: String,
    flavor: String,
    key: String,
    computed: String,
    published: String,
}

fn enumerate(flavors: &[Flavor], v: usize, e: usize, connected: bool, output: &OutputArgs) -> Result<(), CliError> {
    let mut rows = Vec::new();
    for &f in flavors {
        let list = graphs::basis(v, e, f)?;
        for g in list.into_iter().filter(|g| !connected || graphs::is_connected(g)) {
            rows.push(GraphRow {
                flavor: f.to_string(),
                v,
                e,
                index: rows.len(),
                graph: g.dump(),
                automorphisms: graphs::automorphisms(&g)?.group_order,
            });
        }
    }
    emit(&rows, output)
}

fn cohomology(flavors: &[Flavor], max_b: usize, connected: bool, vi: bool, export: Option<&PathBuf>, output: &OutputArgs) -> Result<(), CliError> {
    let mut rows = Vec::new();
    for &f in flavors {
        for b in 1..=max_b {
            let slice = complex::differential(complex::build_basis(f, b, connected, vi)?)?;
            if !slice.d_squared_is_zero() {
                return Err(CliError::Verification(format!("{f} b={b}: the differential does not square to zero")));
            }
            let h = complex::cohomology_dims(&slice);
            for (v, &cohomology) in h.iter().enumerate() {
                rows.push(CohomologyRow {
                    flavor: f.to_string(),
                    b,
                    v,
                    e: b + v,
                    basis: slice.basis.piece(v).len(),
                    rank: complex::rank(&slice.matrix(v)),
                    cohomology,
                });
            }
            if let Some(dir) = export {
                fs::create_dir_all(dir)?;
                let name = f.to_string().replace('*', "_star");
                for (v, m) in slice.matrices.iter().enumerate() {
                    fs::write(dir.join(format!("d-{name}-b{b}-v{v}.txt")), m.to_triplets())?;
                }
            }
        }
    }
    emit(&rows, output)
}

fn verify(max_b: usize, backend: &Backend, cache: Option<&DimCache>) -> Result<(), CliError> {
    let mut mismatches = Vec::new();
    let mut checked = 0;
    for f in Flavor::ALL {
        let dims = all_dims(f, max_b, backend, cache)?;
        let chi = euler_from_dims(&dims, max_b)?;
        let conn = euler::connected_euler(&chi)?;
        for (connected, computed) in [(false, &chi), (true, &conn)] {
            let published = tables::euler(f, connected);
            for b in 1..=max_b {
                checked += 1;
                if computed.get(b) != published.get(b) {
                    mismatches.push(ComparisonRow {
                        table: "euler".into(),
                        flavor: format!("{f}{}", if connected { " connected" } else { "" }),
                        key: format!("b={b}"),
                        computed: computed.get(b).to_string(),
                        published: published.get(b).to_string(),
                    });
                }
            }
        }
        if f.is_starred() {
            // the printed grid holds the dimensions of all graphs
            let published = tables::connected_dims(f);
            for (v, e, d) in published.cells().filter(|&(v, e, _)| dims.truncation().contains(v, e)) {
                checked += 1;
                if dims.get(v, e) != d {
                    mismatches.push(ComparisonRow {
                        table: "dims".into(),
                        flavor: f.to_string(),
                        key: format!("v={v} e={e}"),
                        computed: dims.get(v, e).to_string(),
                        published: d.to_string(),
                    });
                }
            }
        }
    }
    if mismatches.is_empty() {
        println!("verify: {checked} published values match for b <= {max_b}");
        Ok(())
    } else {
        let mut diff = format!("verify: {} of {checked} published values differ for b <= {max_b}\n", mismatches.len());
        diff.push_str(&render(&mismatches, Format::Csv)?);
        Err(CliError::Verification(diff))
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Usage("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| CliError::Runtime(e.to_string()))?;
    }
    match cli.command {
        Command::Dims(args) => run_table(&args, |t| Ok(Table::Dims(t))),
        Command::Euler(args) => {
            let max_b = args.max_b;
            run_table(&args, |t| Ok(Table::Euler(euler_from_dims(&t, max_b)?)))
        }
        Command::Connected { table, dims } => {
            let max_b = table.max_b;
            run_table(&table, |t| {
                if dims {
                    Ok(Table::Dims(euler::connected_dims(&t)?))
                } else {
                    Ok(Table::Euler(euler::connected_euler(&euler_from_dims(&t, max_b)?)?))
                }
            })
        }
        Command::Enumerate { flavor, v, e, connected, output } => enumerate(&flavor.0, v, e, connected, &output),
        Command::Cohomology {
            flavor,
            max_b,
            all_graphs,
            one_vertex_irreducible,
            export_dir,
            output,
        } => cohomology(&flavor.0, max_b, !all_graphs, one_vertex_irreducible, export_dir.as_ref(), &output),
        Command::Verify { max_b, deep, backend, cache_dir } => {
            let max_b = max_b.unwrap_or(if deep { 16 } else { 10 });
            if max_b == 0 || max_b > PUBLISHED_MAX_B {
                return Err(CliError::Usage(format!("--max-b must lie in 1..={PUBLISHED_MAX_B}")));
            }
            let cache = cache_dir.as_ref().map(DimCache::new);
            verify(max_b, &backend.backend()?, cache.as_ref())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
