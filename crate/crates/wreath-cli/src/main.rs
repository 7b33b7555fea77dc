//! Command-line front end: build wreath products, compute spectra via the
//! circulant reduction or the dense oracle, construct graph wreath products
//! and lamplighter walks, solve Sylvester systems, and benchmark the
//! reduced against the dense spectral path.
//!
//! Every run writes its machine-readable artifacts to the requested files,
//! prints a small machine-readable summary to stdout, and a human summary
//! to stderr. Exit codes: 0 success, 2 usage or input error, 3 numerical
//! failure, 4 size cap exceeded.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use wreath::graphs::{
    complete_lamplighter_spectrum, graph_wreath, lamp_parts_to_multiset, lamplighter_transition,
    Graph,
};
use wreath::io;
use wreath::spectral::{
    circulant_defect, dense_spectrum, is_circulant, spectrum_reduced, CirculantSpec, EigenMultiset,
    CLUSTER_TOL, DENSE_EIG_CAP,
};
use wreath::sylvester::{
    expand_wreath_system, solve, wreath_unique_solvable, UniquenessCertificate,
};
use wreath::tensor::DenseMatrix;
use wreath::wreath::{wreath_order, wreath_product, wreath_trace};
use wreath::Error as WreathError;

#[derive(Parser)]
#[command(
    name = "wreath",
    version,
    about = "Wreath products of matrices and graphs"
)]
struct Cli {
    /// Worker threads for parallel sections (default: available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Seed for any randomized fixtures a command generates.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build A wr B and write it as sparse (default) or dense JSON.
    Build(BuildArgs),
    /// Spectrum of A wr B, by circulant reduction or the dense eigensolver.
    Spectrum(SpectrumArgs),
    /// Wreath product of two graphs, with optional DOT output.
    GraphWreath(GraphWreathArgs),
    /// Lamplighter random walk: transition matrix and spectrum.
    Lamplighter(LamplighterArgs),
    /// Generalized Sylvester systems.
    #[command(subcommand)]
    Sylvester(SylvesterCmd),
    /// Time the reduced vs dense spectral paths on one random instance.
    Bench(BenchArgs),
}

#[derive(Args)]
struct BuildArgs {
    /// First factor (dense or sparse matrix JSON).
    #[arg(long)]
    a: PathBuf,
    /// Second factor (dense or sparse matrix JSON).
    #[arg(long)]
    b: PathBuf,
    /// Output path for the product.
    #[arg(long)]
    out: PathBuf,
    /// Write the product densely instead of as triples.
    #[arg(long)]
    dense: bool,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum SpectrumMethod {
    Reduced,
    Dense,
}

#[derive(Args)]
struct SpectrumArgs {
    #[arg(long)]
    a: PathBuf,
    #[arg(long)]
    b: PathBuf,
    /// Reduced needs a circulant B; dense materializes the product.
    #[arg(long, value_enum, default_value_t = SpectrumMethod::Reduced)]
    method: SpectrumMethod,
    /// Clustering tolerance for eigenvalue multiplicities.
    #[arg(long, default_value_t = CLUSTER_TOL)]
    tol: f64,
    /// Output CSV path (columns re,im,multiplicity).
    #[arg(long)]
    out: PathBuf,
    /// Optional JSON mirror of the CSV.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct GraphWreathArgs {
    /// First graph: complete:N, cycle:N, segment, or a JSON file path.
    #[arg(long)]
    g1: String,
    /// Second graph, same forms.
    #[arg(long)]
    g2: String,
    /// Output path for the product graph JSON.
    #[arg(long)]
    out: PathBuf,
    /// Optional DOT rendering.
    #[arg(long)]
    dot: Option<PathBuf>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum LampGraph {
    Complete,
    Cycle,
    File,
}

#[derive(Args)]
struct LamplighterArgs {
    /// Walker graph family.
    #[arg(long, value_enum)]
    graph: LampGraph,
    /// Vertex count for complete/cycle walker graphs.
    #[arg(long)]
    n: Option<usize>,
    /// Walker graph JSON (with --graph file).
    #[arg(long)]
    file: Option<PathBuf>,
    /// Number of lamp colors; the color graph is the complete graph on them.
    #[arg(long, default_value_t = 2)]
    colors: usize,
    /// Use the closed-form spectrum (complete walker graph, 2 colors only).
    #[arg(long)]
    closed_form: bool,
    /// Output CSV path for the spectrum.
    #[arg(long)]
    out: PathBuf,
    /// Optional JSON mirror of the spectrum.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Optional output path for the transition matrix (sparse JSON).
    #[arg(long)]
    matrix_out: Option<PathBuf>,
    /// Clustering tolerance for eigenvalue multiplicities.
    #[arg(long, default_value_t = CLUSTER_TOL)]
    tol: f64,
}

#[derive(Subcommand)]
enum SylvesterCmd {
    /// Solve sum A_i X B_i = C for X.
    Solve {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        /// Output path for X (dense JSON).
        #[arg(long)]
        out: PathBuf,
    },
    /// Decide unique solvability of a wreath-structured system.
    Check {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        /// Optional output path for the certificate JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct BenchArgs {
    /// Order of the random first factor.
    #[arg(long)]
    n: usize,
    /// Order of the random circulant second factor.
    #[arg(long)]
    m: usize,
    /// Timed repeats per method (median reported, warm-up discarded).
    #[arg(long, default_value_t = 5)]
    repeat: usize,
    /// Output path for the report JSON.
    #[arg(long)]
    out: PathBuf,
}

enum CliError {
    Wreath(WreathError),
    Io(PathBuf, std::io::Error),
    Usage(String),
}

impl From<WreathError> for CliError {
    fn from(err: WreathError) -> Self {
        CliError::Wreath(err)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Wreath(err) => write!(f, "{err}"),
            CliError::Io(path, err) => write!(f, "{}: {err}", path.display()),
            CliError::Usage(msg) => write!(f, "{msg}"),
        }
    }
}

fn exit_code(err: &CliError) -> u8 {
    match err {
        CliError::Usage(_) | CliError::Io(..) => 2,
        CliError::Wreath(err) => match err {
            WreathError::CapExceeded(_) => 4,
            WreathError::NonConvergence { .. }
            | WreathError::BlockEig { .. }
            | WreathError::Singular(_)
            | WreathError::NonFinite(_) => 3,
            _ => 2,
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        // ignore the error if a pool already exists (tests, repeated init)
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Build(args) => cmd_build(args),
        Command::Spectrum(args) => cmd_spectrum(args),
        Command::GraphWreath(args) => cmd_graph_wreath(args),
        Command::Lamplighter(args) => cmd_lamplighter(args),
        Command::Sylvester(cmd) => match cmd {
            SylvesterCmd::Solve { input, out } => cmd_sylvester_solve(&input, &out),
            SylvesterCmd::Check { input, out } => cmd_sylvester_check(&input, out.as_deref()),
        },
        Command::Bench(args) => cmd_bench(args, cli.seed),
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(path.to_path_buf(), e))
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|e| CliError::Io(path.to_path_buf(), e))
}

fn load_dense(path: &Path) -> Result<DenseMatrix, CliError> {
    Ok(io::matrix_from_json(&read_file(path)?)?.into_dense()?)
}

fn cmd_build(args: BuildArgs) -> Result<(), CliError> {
    let a = load_dense(&args.a)?;
    let b = load_dense(&args.b)?;
    let product = wreath_product(&a, &b)?;
    let trace = wreath_trace(&a, &b)?;
    if args.dense {
        write_file(&args.out, &io::dense_to_json(&product.to_dense()?))?;
    } else {
        write_file(&args.out, &io::sparse_to_json(&product))?;
    }
    let summary = json!({
        "order": product.rows(),
        "nnz": product.nnz(),
        "trace": [trace.re, trace.im],
        "out": args.out.display().to_string(),
    });
    println!("{summary}");
    eprintln!(
        "built wreath product of order {} with {} stored entries, trace {}",
        product.rows(),
        product.nnz(),
        trace
    );
    Ok(())
}

fn write_spectrum(
    spectrum: &EigenMultiset,
    tol: f64,
    out: &Path,
    json_out: Option<&Path>,
) -> Result<(), CliError> {
    write_file(out, &io::spectrum_to_csv(spectrum))?;
    if let Some(json_path) = json_out {
        write_file(json_path, &io::spectrum_to_json(spectrum, tol))?;
    }
    Ok(())
}

fn cmd_spectrum(args: SpectrumArgs) -> Result<(), CliError> {
    let a = load_dense(&args.a)?;
    let b = load_dense(&args.b)?;
    let (spectrum, method) = match args.method {
        SpectrumMethod::Reduced => {
            let spec = is_circulant(&b, 0.0).or_else(|| is_circulant(&b, 1e-12));
            let Some(spec) = spec else {
                let (row, col) = circulant_defect(&b, 1e-12).unwrap_or((0, 0));
                return Err(CliError::Usage(format!(
                    "--method reduced needs a circulant B, but entry ({row}, {col}) \
                     deviates from the first-row pattern; use --method dense"
                )));
            };
            (spectrum_reduced(&a, &spec, args.tol)?, "reduced")
        }
        SpectrumMethod::Dense => {
            let w = wreath_product(&a, &b)?.to_dense()?;
            (dense_spectrum(&w, args.tol)?, "dense")
        }
    };
    write_spectrum(&spectrum, args.tol, &args.out, args.json.as_deref())?;
    let summary = json!({
        "method": method,
        "total": spectrum.total(),
        "distinct": spectrum.items().len(),
        "tol": args.tol,
        "out": args.out.display().to_string(),
    });
    println!("{summary}");
    eprintln!(
        "{} spectrum: {} eigenvalues ({} distinct at tol {:.1e})",
        method,
        spectrum.total(),
        spectrum.items().len(),
        args.tol
    );
    Ok(())
}

fn parse_graph_spec(spec: &str) -> Result<Graph, CliError> {
    if spec == "segment" {
        return Ok(Graph::segment());
    }
    if let Some(n) = spec.strip_prefix("complete:") {
        let n = n
            .parse()
            .map_err(|_| CliError::Usage(format!("bad vertex count in {spec:?}")))?;
        return Ok(Graph::complete(n)?);
    }
    if let Some(n) = spec.strip_prefix("cycle:") {
        let n = n
            .parse()
            .map_err(|_| CliError::Usage(format!("bad vertex count in {spec:?}")))?;
        return Ok(Graph::cycle(n)?);
    }
    let path = Path::new(spec);
    Ok(io::graph_from_json(&read_file(path)?)?)
}

fn cmd_graph_wreath(args: GraphWreathArgs) -> Result<(), CliError> {
    let g1 = parse_graph_spec(&args.g1)?;
    let g2 = parse_graph_spec(&args.g2)?;
    let product = graph_wreath(&g1, &g2)?;
    write_file(&args.out, &io::graph_to_json(&product))?;
    if let Some(dot) = &args.dot {
        write_file(dot, &product.to_dot())?;
    }
    let summary = json!({
        "vertices": product.n(),
        "edges": product.edge_count(),
        "degree": product.degree(),
        "out": args.out.display().to_string(),
    });
    println!("{summary}");
    eprintln!(
        "graph wreath product: {} vertices, {} edges, {}-regular",
        product.n(),
        product.edge_count(),
        product.degree()
    );
    Ok(())
}

fn cmd_lamplighter(args: LamplighterArgs) -> Result<(), CliError> {
    let walker = match args.graph {
        LampGraph::Complete => {
            let n = args
                .n
                .ok_or_else(|| CliError::Usage("--graph complete needs --n".into()))?;
            Graph::complete(n)?
        }
        LampGraph::Cycle => {
            let n = args
                .n
                .ok_or_else(|| CliError::Usage("--graph cycle needs --n".into()))?;
            Graph::cycle(n)?
        }
        LampGraph::File => {
            let path = args
                .file
                .as_ref()
                .ok_or_else(|| CliError::Usage("--graph file needs --file".into()))?;
            io::graph_from_json(&read_file(path)?)?
        }
    };
    if args.colors < 2 {
        return Err(CliError::Usage("--colors must be at least 2".into()));
    }
    let color_graph = Graph::complete(args.colors)?;
    let order = wreath_order(walker.n(), args.colors)?;

    if let Some(matrix_out) = &args.matrix_out {
        let transition = lamplighter_transition(&walker, &color_graph)?;
        for (row, sum) in transition.row_sums().iter().enumerate() {
            if (sum - Complex64::ONE).norm() > 1e-10 {
                return Err(CliError::Wreath(WreathError::NonFinite(format!(
                    "transition row {row} sums to {sum}, not 1"
                ))));
            }
        }
        write_file(matrix_out, &io::sparse_to_json(&transition))?;
    }

    let (spectrum, route) = if args.closed_form {
        if args.graph != LampGraph::Complete || args.colors != 2 {
            return Err(CliError::Usage(
                "--closed-form is only available for complete walker graphs with 2 colors".into(),
            ));
        }
        let parts = complete_lamplighter_spectrum(walker.n())?;
        (lamp_parts_to_multiset(&parts, args.tol)?, "closed-form")
    } else {
        // the color side of the product is circulant (complete graph),
        // so the reduction always applies
        let total_degree = (walker.degree() + color_graph.degree()) as f64;
        let weight = Complex64::new(1.0 / total_degree, 0.0);
        let a = walker.adjacency()?.scale(weight);
        let b = color_graph.adjacency()?.scale(weight);
        let spec = is_circulant(&b, 0.0).expect("scaled complete color graph is circulant");
        (spectrum_reduced(&a, &spec, args.tol)?, "reduced")
    };
    write_spectrum(&spectrum, args.tol, &args.out, args.json.as_deref())?;
    let summary = json!({
        "order": order,
        "route": route,
        "total": spectrum.total(),
        "distinct": spectrum.items().len(),
        "out": args.out.display().to_string(),
    });
    println!("{summary}");
    eprintln!(
        "lamplighter walk on {} vertices with {} colors: order {}, {} spectrum with {} distinct values",
        walker.n(),
        args.colors,
        order,
        route,
        spectrum.items().len()
    );
    Ok(())
}

fn cmd_sylvester_solve(input: &Path, out: &Path) -> Result<(), CliError> {
    let sys = match io::system_from_json(&read_file(input)?)? {
        io::SystemFile::Explicit(sys) => sys,
        io::SystemFile::Wreath(spec) => {
            let template = expand_wreath_system(&spec)?;
            wreath::sylvester::SylvesterSystem::new(template.pairs().to_vec(), spec.c.clone())?
        }
    };
    let outcome = solve(&sys)?;
    write_file(out, &io::dense_to_json(&outcome.x))?;
    let summary = json!({
        "residual": outcome.residual,
        "pivot_ratio": outcome.pivot_ratio,
        "rows": outcome.x.rows(),
        "cols": outcome.x.cols(),
        "out": out.display().to_string(),
    });
    println!("{summary}");
    eprintln!(
        "solved {}x{} unknown, residual {:.3e}, pivot ratio {:.3e}",
        outcome.x.rows(),
        outcome.x.cols(),
        outcome.residual,
        outcome.pivot_ratio
    );
    Ok(())
}

fn certificate_json(unique: bool, cert: &UniquenessCertificate) -> serde_json::Value {
    let cert = match cert {
        UniquenessCertificate::ClosedFormOk => json!({"kind": "closed_form_ok"}),
        UniquenessCertificate::ClosedFormViolation(w) => json!({
            "kind": "closed_form_violation",
            "index": w.index,
            "reason": match w.reason {
                wreath::spectral::SingularReason::ZeroEntry => "zero_entry",
                wreath::spectral::SingularReason::MinusMh => "minus_mh",
            },
            "value": [w.value.re, w.value.im],
        }),
        UniquenessCertificate::Spectral { min_abs, singular } => json!({
            "kind": "spectral",
            "min_abs": min_abs,
            "singular": singular,
        }),
    };
    json!({"unique": unique, "certificate": cert})
}

fn cmd_sylvester_check(input: &Path, out: Option<&Path>) -> Result<(), CliError> {
    let spec = match io::system_from_json(&read_file(input)?)? {
        io::SystemFile::Wreath(spec) => spec,
        io::SystemFile::Explicit(_) => return Err(CliError::Usage(
            "check needs the wreath shorthand form {\"wreath\": {\"A\": .., \"B\": ..}, \"C\": ..}"
                .into(),
        )),
    };
    let (unique, cert) = wreath_unique_solvable(&spec.a, &spec.b, 1e-10)?;
    let report = certificate_json(unique, &cert);
    if let Some(path) = out {
        write_file(
            path,
            &serde_json::to_string_pretty(&report).expect("serializable"),
        )?;
    }
    println!("{report}");
    eprintln!(
        "wreath system is {}",
        if unique {
            "uniquely solvable"
        } else {
            "not uniquely solvable"
        }
    );
    Ok(())
}

fn cmd_bench(args: BenchArgs, seed: u64) -> Result<(), CliError> {
    if args.repeat == 0 {
        return Err(CliError::Usage("--repeat must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = DenseMatrix::from_fn(args.n, args.n, |_, _| {
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    })?;
    let coeffs: Vec<Complex64> = (0..args.m)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let spec = CirculantSpec::new(coeffs)?;
    let order = wreath_order(args.n, args.m)?;
    let dense_feasible = order as usize <= DENSE_EIG_CAP;

    // verify both methods agree before any timing is reported
    let reduced_spectrum = spectrum_reduced(&a, &spec, CLUSTER_TOL)?;
    let verdict = if dense_feasible {
        let w = wreath_product(&a, &spec.matrix()?)?.to_dense()?;
        let dense = dense_spectrum(&w, CLUSTER_TOL)?;
        if !reduced_spectrum.approx_eq(&dense, 1e-8) {
            return Err(CliError::Wreath(WreathError::NonFinite(
                "reduced and dense spectra disagree; refusing to time wrong answers".into(),
            )));
        }
        "equal"
    } else {
        "dense-skipped"
    };

    let median = |times: &mut Vec<f64>| {
        times.sort_by(f64::total_cmp);
        times[times.len() / 2]
    };
    let mut reduced_times = Vec::with_capacity(args.repeat);
    for i in 0..=args.repeat {
        let t = Instant::now();
        let ms = spectrum_reduced(&a, &spec, CLUSTER_TOL)?;
        std::hint::black_box(ms.total());
        if i > 0 {
            // warm-up run discarded
            reduced_times.push(t.elapsed().as_secs_f64());
        }
    }
    let reduced_seconds = median(&mut reduced_times);

    let dense_seconds = if dense_feasible {
        let mut dense_times = Vec::with_capacity(args.repeat);
        for i in 0..=args.repeat {
            let t = Instant::now();
            let w = wreath_product(&a, &spec.matrix()?)?.to_dense()?;
            let ms = dense_spectrum(&w, CLUSTER_TOL)?;
            std::hint::black_box(ms.total());
            if i > 0 {
                dense_times.push(t.elapsed().as_secs_f64());
            }
        }
        Some(median(&mut dense_times))
    } else {
        None
    };

    let report = json!({
        "n": args.n,
        "m": args.m,
        "order": order,
        "repeat": args.repeat,
        "seed": seed,
        "verdict": verdict,
        "reduced_seconds": reduced_seconds,
        "dense_seconds": dense_seconds,
        "speedup": dense_seconds.map(|d| d / reduced_seconds),
    });
    write_file(
        &args.out,
        &serde_json::to_string_pretty(&report).expect("serializable"),
    )?;
    println!("{report}");
    match dense_seconds {
        Some(d) => eprintln!(
            "order {order}: reduced {reduced_seconds:.4}s vs dense {d:.4}s ({:.0}x), verdict {verdict}",
            d / reduced_seconds
        ),
        None => eprintln!(
            "order {order} exceeds the dense cap {DENSE_EIG_CAP}; reduced path {reduced_seconds:.4}s"
        ),
    }
    Ok(())
}
