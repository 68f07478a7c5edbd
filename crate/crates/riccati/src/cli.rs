//! Command-line frontend: `solve`, `verify`, `enumerate`, `rol`,
//! `spectrum` and `hermitian` over matrix files, with deterministic seeded
//! experiments and JSON reports.
//!
//! Exit codes are a stable contract: 0 success/pass, 1 identity failure,
//! 2 usage/validation, 3 I/O or parse failure.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::error::Error;
use crate::hermitian::hermitian_solutions;
use crate::io::{matrix_to_json_value, read_matrix, write_matrix, MatrixFormat};
use crate::mat::TolerancePolicy;
use crate::rng::SplitMix64;
use crate::rol::rol_report;
use crate::schur::eigenstructure_report;
use crate::solver::{
    cluster_singular_values, construct_solution, enumerate_sign_solutions, family_dimension,
    family_parameter_kernel_dimension, sign_patterns, similarity_involution, SolutionParams,
};
use crate::verify::{idempotency_gaps, verify_solution, VerificationReport};
use crate::{DEFAULT_GAP_TOL, DEFAULT_TOL};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

/// Environment variable overriding the default tolerance (the `--tol` flag
/// still wins).
pub const TOL_ENV_VAR: &str = "RICCATI_PINV_TOL";

#[derive(Parser, Debug)]
#[command(
    name = "riccati",
    version,
    about = "Solution families of X W W* W X = W* and pseudoinverse diagnostics"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Relative tolerance for every identity check.
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// Relative gap below which singular values are clustered together.
    #[arg(long = "gap-tol", global = true)]
    gap_tol: Option<f64>,

    /// Seed for randomized modes.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Matrix file format; inferred from the extension when omitted.
    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,

    /// Report style.
    #[arg(long, global = true, value_enum, default_value_t = OutputArg::Human)]
    output: OutputArg,

    /// Output path (file for `solve`, directory for `enumerate`).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    #[value(name = "matrix-market")]
    MatrixMarket,
    #[value(name = "csv-real")]
    CsvReal,
    #[value(name = "json-complex")]
    JsonComplex,
}

impl From<FormatArg> for MatrixFormat {
    fn from(arg: FormatArg) -> Self {
        match arg {
            FormatArg::MatrixMarket => MatrixFormat::MatrixMarket,
            FormatArg::CsvReal => MatrixFormat::CsvReal,
            FormatArg::JsonComplex => MatrixFormat::JsonComplex,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OutputArg {
    Human,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SolveMode {
    /// The pseudoinverse: identity blocks, no free part.
    Pinv,
    /// One `+`/`-` per singular-value cluster (pass the pattern after the
    /// mode).
    Signs,
    /// Seeded random involutory blocks and random free matrix.
    Random,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Construct a solution for the matrix in the given file.
    Solve {
        w_file: PathBuf,
        #[arg(long, value_enum)]
        mode: SolveMode,
        /// Sign pattern such as "+-+" (mode `signs` only).
        #[arg(allow_hyphen_values = true)]
        pattern: Option<String>,
        /// Free matrix Y (defaults to zero; ignored by mode `pinv`).
        #[arg(long = "y-file")]
        y_file: Option<PathBuf>,
    },
    /// Check every identity for a candidate solution.
    Verify { w_file: PathBuf, x_file: PathBuf },
    /// Write all 2^t sign solutions plus a manifest.
    Enumerate { w_file: PathBuf },
    /// Reverse-order-law battery for a pair of factors.
    Rol { a_file: PathBuf, b_file: PathBuf },
    /// Eigenstructure of the block embedding [[0, W W* W], [W*, 0]].
    Spectrum { w_file: PathBuf },
    /// Hermitian solution family, maximal element, stabilizing member.
    Hermitian { w_file: PathBuf },
}

/// Run configuration shared by all commands.
#[derive(Clone, Copy, Debug)]
pub struct RunConfig {
    pub tol: f64,
    pub gap_tol: f64,
    pub seed: u64,
    pub json: bool,
}

impl RunConfig {
    fn from_cli(cli: &Cli) -> Result<Self, Error> {
        let env_tol = match std::env::var(TOL_ENV_VAR) {
            Ok(raw) => Some(raw.parse::<f64>().map_err(|_| {
                Error::Format(format!("{TOL_ENV_VAR} must be a number, got {raw:?}"))
            })?),
            Err(_) => None,
        };
        let tol = cli.tol.or(env_tol).unwrap_or(DEFAULT_TOL);
        let gap_tol = cli.gap_tol.unwrap_or(DEFAULT_GAP_TOL);
        if tol <= 0.0 || gap_tol < 0.0 {
            return Err(Error::Format(
                "tolerances must be positive (gap-tol may be zero)".into(),
            ));
        }
        Ok(RunConfig {
            tol,
            gap_tol,
            seed: cli.seed,
            json: cli.output == OutputArg::Json,
        })
    }
}

/// Entry point used by the binary; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            // clap renders its own message; usage problems exit with 2.
            let _ = err.print();
            return if err.exit_code() == 0 { EXIT_PASS } else { EXIT_USAGE };
        }
    };
    let config = match RunConfig::from_cli(&cli) {
        Ok(config) => config,
        Err(err) => {
            eprintln!("error: {err}");
            return EXIT_USAGE;
        }
    };
    match dispatch(&cli, config) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            exit_code_for(&err)
        }
    }
}

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::Parse(_) | Error::Io(_) | Error::NonFinite { .. } => EXIT_IO,
        _ => EXIT_USAGE,
    }
}

fn dispatch(cli: &Cli, config: RunConfig) -> Result<i32, Error> {
    let format = cli.format.map(MatrixFormat::from);
    match &cli.command {
        Command::Solve {
            w_file,
            mode,
            pattern,
            y_file,
        } => cmd_solve(
            w_file,
            *mode,
            pattern.as_deref(),
            y_file.as_deref(),
            cli.out.as_deref(),
            format,
            config,
        ),
        Command::Verify { w_file, x_file } => cmd_verify(w_file, x_file, format, config),
        Command::Enumerate { w_file } => {
            cmd_enumerate(w_file, cli.out.as_deref(), format, config)
        }
        Command::Rol { a_file, b_file } => cmd_rol(a_file, b_file, format, config),
        Command::Spectrum { w_file } => cmd_spectrum(w_file, format, config),
        Command::Hermitian { w_file } => cmd_hermitian(w_file, format, config),
    }
}

fn identities_json(report: &VerificationReport, tol: f64) -> Value {
    let mut map = Map::new();
    for entry in &report.entries {
        map.insert(
            entry.name.to_string(),
            json!({
                "residual": entry.residual,
                "scale": entry.scale,
                "tol": tol,
                "pass": entry.pass,
            }),
        );
    }
    Value::Object(map)
}

fn print_report(value: &Value, human: &str, config: RunConfig) {
    if config.json {
        println!("{}", serde_json::to_string_pretty(value).expect("report"));
    } else {
        print!("{human}");
    }
}

fn pattern_string(signs: &[i8]) -> String {
    signs
        .iter()
        .map(|&s| if s >= 0 { '+' } else { '-' })
        .collect()
}

fn parse_pattern(pattern: &str) -> Result<Vec<i8>, Error> {
    pattern
        .chars()
        .map(|c| match c {
            '+' => Ok(1),
            '-' => Ok(-1),
            other => Err(Error::Format(format!(
                "sign pattern may only contain + and -, found {other:?}"
            ))),
        })
        .collect()
}

fn cmd_solve(
    w_file: &Path,
    mode: SolveMode,
    pattern: Option<&str>,
    y_file: Option<&Path>,
    out: Option<&Path>,
    format: Option<MatrixFormat>,
    config: RunConfig,
) -> Result<i32, Error> {
    let w = read_matrix(w_file, format)?;
    let f = crate::mat::svd(&w, TolerancePolicy::Default);
    let clusters = cluster_singular_values(&f, config.gap_tol);
    let (m, n) = (f.rows(), f.cols());

    let y = match y_file {
        Some(path) => {
            let y = read_matrix(path, format)?;
            if y.rows() != n || y.cols() != m {
                return Err(crate::error::shape_mismatch(format!(
                    "free matrix must be {n}x{m}, got {}x{}",
                    y.rows(),
                    y.cols()
                )));
            }
            Some(y)
        }
        None => None,
    };

    let mut rng = SplitMix64::new(config.seed);
    let (params, mode_name, signs_used) = match mode {
        SolveMode::Pinv => (
            SolutionParams::canonical(&clusters, m, n),
            "pinv",
            None,
        ),
        SolveMode::Signs => {
            let pattern = pattern.ok_or_else(|| {
                Error::Format("mode `signs` needs a +/- pattern argument".into())
            })?;
            let signs = parse_pattern(pattern)?;
            let mut params = SolutionParams::from_signs(&clusters, &signs, m, n)?;
            if let Some(y) = &y {
                params.y_free = y.clone();
            }
            (params, "signs", Some(signs))
        }
        SolveMode::Random => {
            let signs: Vec<Vec<i8>> = clusters
                .multiplicities()
                .iter()
                .map(|&s| (0..s).map(|_| rng.next_sign()).collect())
                .collect();
            let blocks = signs
                .iter()
                .map(|block_signs| similarity_involution(block_signs, &mut rng, 100.0))
                .collect::<Result<Vec<_>, _>>()?;
            let y_free = match &y {
                Some(y) => y.clone(),
                None => rng.uniform_matrix(n, m),
            };
            (
                SolutionParams { blocks, y_free },
                "random",
                None,
            )
        }
    };

    let x = construct_solution(&f, &clusters, &params)?;
    let report = verify_solution(&w, &x, config.tol)?;

    let x_path = match out {
        Some(path) => path.to_path_buf(),
        None => {
            let stem = w_file
                .file_stem()
                .and_then(|s| s.to_str())
                .unwrap_or("matrix");
            let ext = format.unwrap_or(MatrixFormat::JsonComplex).extension();
            w_file.with_file_name(format!("{stem}_x.{ext}"))
        }
    };
    write_matrix(&x_path, &x, format.or(Some(MatrixFormat::JsonComplex)))?;

    let value = json!({
        "schema": 1,
        "command": "solve",
        "mode": mode_name,
        "signs": signs_used.as_deref().map(pattern_string),
        "seed": config.seed,
        "x_file": x_path.display().to_string(),
        "identities": identities_json(&report, config.tol),
        "overall": report.overall,
    });
    let mut human = format!(
        "solve {} mode={} -> {}\n",
        w_file.display(),
        mode_name,
        x_path.display()
    );
    for entry in &report.entries {
        human.push_str(&format!(
            "  {:<24} residual {:>12.3e}  {}\n",
            entry.name,
            entry.residual,
            if entry.pass { "pass" } else { "FAIL" }
        ));
    }
    human.push_str(&format!(
        "overall: {}\n",
        if report.overall { "pass" } else { "FAIL" }
    ));
    print_report(&value, &human, config);
    Ok(if report.overall { EXIT_PASS } else { EXIT_CHECK_FAILED })
}

fn cmd_verify(
    w_file: &Path,
    x_file: &Path,
    format: Option<MatrixFormat>,
    config: RunConfig,
) -> Result<i32, Error> {
    let w = read_matrix(w_file, format)?;
    let x = read_matrix(x_file, format)?;
    let report = verify_solution(&w, &x, config.tol)?;
    let (gap_wx, gap_xw) = idempotency_gaps(&w, &x)?;

    let value = json!({
        "schema": 1,
        "command": "verify",
        "identities": identities_json(&report, config.tol),
        "idempotency_gaps": { "wx": gap_wx, "xw": gap_xw },
        "overall": report.overall,
    });
    let mut human = format!("verify {} against {}\n", x_file.display(), w_file.display());
    for entry in &report.entries {
        human.push_str(&format!(
            "  {:<24} residual {:>12.3e}  {}\n",
            entry.name,
            entry.residual,
            if entry.pass { "pass" } else { "FAIL" }
        ));
    }
    human.push_str(&format!(
        "  ||(WX)^2-WX|| = {gap_wx:.6e}   ||(XW)^2-XW|| = {gap_xw:.6e}   (informational)\n"
    ));
    human.push_str(&format!(
        "overall: {}\n",
        if report.overall { "pass" } else { "FAIL" }
    ));
    print_report(&value, &human, config);
    Ok(if report.overall { EXIT_PASS } else { EXIT_CHECK_FAILED })
}

fn cmd_enumerate(
    w_file: &Path,
    out: Option<&Path>,
    format: Option<MatrixFormat>,
    config: RunConfig,
) -> Result<i32, Error> {
    let w = read_matrix(w_file, format)?;
    let f = crate::mat::svd(&w, TolerancePolicy::Default);
    let clusters = cluster_singular_values(&f, config.gap_tol);
    let solutions = enumerate_sign_solutions(&f, &clusters)?;
    let patterns = sign_patterns(clusters.count())?;

    let dir = out
        .map(Path::to_path_buf)
        .unwrap_or_else(|| PathBuf::from("solutions"));
    std::fs::create_dir_all(&dir)?;
    let ext = format.unwrap_or(MatrixFormat::JsonComplex).extension();

    let mut files = Vec::new();
    for (index, (signs, x)) in patterns.iter().zip(&solutions).enumerate() {
        let name = format!("x_{index:03}_{}.{ext}", pattern_string(signs));
        let path = dir.join(&name);
        write_matrix(&path, x, format.or(Some(MatrixFormat::JsonComplex)))?;
        files.push(json!({
            "signs": pattern_string(signs),
            "file": name,
        }));
    }

    let mut min_distance: Option<f64> = None;
    for i in 0..solutions.len() {
        for j in (i + 1)..solutions.len() {
            let d = solutions[i].sub(&solutions[j]).norm_fro();
            min_distance = Some(min_distance.map_or(d, |m| m.min(d)));
        }
    }

    let image_dim = family_dimension(&f);
    let kernel_dim = family_parameter_kernel_dimension(&f);
    let manifest = json!({
        "schema": 1,
        "command": "enumerate",
        "count": solutions.len(),
        "solutions": files,
        "pairwise_min_distance": min_distance,
        "family_dimension": image_dim,
        "parameter_kernel_dimension": kernel_dim,
        "note": "family_dimension is the rank of Y -> P_N(W) Y P_N(W*); the \
                 kernel dimension r(m+n-r) = mn - (m-r)(n-r) of the same map \
                 is sometimes quoted as the family dimension instead",
    });
    std::fs::write(
        dir.join("manifest.json"),
        serde_json::to_string_pretty(&manifest).expect("manifest") + "\n",
    )?;

    let human = format!(
        "enumerate {}: {} sign solutions in {}\n  pairwise min distance: {:?}\n  family dimension (free-part rank): {}\n  parameter kernel dimension r(m+n-r): {}\n",
        w_file.display(),
        solutions.len(),
        dir.display(),
        min_distance,
        image_dim,
        kernel_dim
    );
    print_report(&manifest, &human, config);
    Ok(EXIT_PASS)
}

fn cmd_rol(
    a_file: &Path,
    b_file: &Path,
    format: Option<MatrixFormat>,
    config: RunConfig,
) -> Result<i32, Error> {
    let a = read_matrix(a_file, format)?;
    let b = read_matrix(b_file, format)?;
    let report = rol_report(&a, &b, config.tol)?;

    let value = json!({
        "schema": 1,
        "command": "rol",
        "report": serde_json::to_value(&report).expect("report"),
    });
    let verdict = |v: crate::rol::Verdict| format!("{v:?}").to_lowercase();
    let human = format!(
        "rol battery for {} x {}\n  reverse order law : {} (residual {:.3e})\n  product condition : {} (residual {:.3e})\n  lowest-rank ident : {} (residual {:.3e})\n  matrix equation   : {} (residual {:.3e})\n  fixed point ident : {} (residual {:.3e})\n  range equality    : {}\n  rank chain        : {:?} {}\n  consistent        : {}\n",
        a_file.display(),
        b_file.display(),
        verdict(report.rol.verdict),
        report.rol.residual,
        verdict(report.greville.verdict),
        report.greville.residual,
        verdict(report.tian37.verdict),
        report.tian37.residual,
        verdict(report.riccati_product.outcome.verdict),
        report.riccati_product.outcome.residual,
        verdict(report.riccati_product.identity_fixed_point.verdict),
        report.riccati_product.identity_fixed_point.residual,
        report.range_equal,
        (
            report.rank_chain.rank_pinv_product,
            report.rank_chain.rank_product,
            report.rank_chain.rank_product_adjoint,
            report.rank_chain.rank_product_pinv,
        ),
        if report.rank_chain.pass { "ok" } else { "MISMATCH" },
        report.consistent
    );
    print_report(&value, &human, config);
    Ok(if report.consistent { EXIT_PASS } else { EXIT_CHECK_FAILED })
}

fn cmd_spectrum(
    w_file: &Path,
    format: Option<MatrixFormat>,
    config: RunConfig,
) -> Result<i32, Error> {
    let w = read_matrix(w_file, format)?;
    let report = eigenstructure_report(&w, config.tol);

    let value = json!({
        "schema": 1,
        "command": "spectrum",
        "eigenvalues": report.eigenvalues,
        "entries": serde_json::to_value(&report.entries).expect("entries"),
        "kernel_dim_expected": report.kernel_dim_expected,
        "kernel_dim_verified": report.kernel_dim_verified,
        "verified_count": report.verified_count,
        "cluster_residuals": report.cluster_residuals,
        "diagonalizable": report.diagonalizable,
    });
    let human = format!(
        "spectrum of the embedding for {}\n  eigenvalues: {:?}\n  kernel dimension: {} (verified {})\n  verified eigenvectors: {} of {}\n  diagonalizable: {}\n",
        w_file.display(),
        report.eigenvalues,
        report.kernel_dim_expected,
        report.kernel_dim_verified,
        report.verified_count,
        w.rows() + w.cols(),
        report.diagonalizable
    );
    print_report(&value, &human, config);
    Ok(if report.diagonalizable { EXIT_PASS } else { EXIT_CHECK_FAILED })
}

fn cmd_hermitian(
    w_file: &Path,
    format: Option<MatrixFormat>,
    config: RunConfig,
) -> Result<i32, Error> {
    let w = read_matrix(w_file, format)?;
    let set = hermitian_solutions(&w, config.tol, config.gap_tol)?;

    let solutions: Vec<Value> = set
        .sign_solutions
        .iter()
        .map(|sol| {
            json!({
                "signs": pattern_string(&sol.signs),
                "matrix": matrix_to_json_value(&sol.matrix),
                "hermitian_defect": sol.hermitian_defect,
                "riccati_residual": sol.riccati_residual,
                "spectrum": sol.spectrum,
                "stabilizing": sol.stabilizing,
            })
        })
        .collect();
    let all_verified = set.sign_solutions.iter().all(|sol| {
        sol.hermitian_defect <= config.tol * (1.0 + sol.matrix.norm_fro())
            && sol.riccati_residual
                <= config.tol * crate::verify::riccati_scale(&w, &sol.matrix)
    });
    let certificates_ok = set.loewner_certificates.iter().all(|&c| {
        c >= -config.tol * (1.0 + set.eig.max_abs_lambda())
    });

    let value = json!({
        "schema": 1,
        "command": "hermitian",
        "eigenvalues": set.eig.lambda(),
        "cluster_multiplicities": set.clusters.multiplicities,
        "mixed_sign_clusters": set.clusters.mixed_signs,
        "solutions": solutions,
        "maximal": set.maximal.as_ref().map(matrix_to_json_value),
        "w_inverse": matrix_to_json_value(&set.w_inverse),
        "w_inverse_is_maximal": set.w_inverse_is_maximal,
        "convention_discrepancy": set.convention_discrepancy,
        "loewner_certificates": set.loewner_certificates,
    });
    let stabilizing: Vec<String> = set
        .sign_solutions
        .iter()
        .filter(|s| s.stabilizing)
        .map(|s| pattern_string(&s.signs))
        .collect();
    let human = format!(
        "hermitian family for {}\n  eigenvalues: {:?}\n  sign solutions: {}\n  stabilizing: {:?}\n  maximal equals W^-1: {}\n  convention discrepancy: {}\n",
        w_file.display(),
        set.eig.lambda(),
        set.sign_solutions.len(),
        stabilizing,
        set.w_inverse_is_maximal,
        set.convention_discrepancy
    );
    print_report(&value, &human, config);
    Ok(if all_verified && certificates_ok { EXIT_PASS } else { EXIT_CHECK_FAILED })
}
