//! Implementations of the four subcommands.

use std::path::PathBuf;
use std::time::Instant;

use spcart::bounds::{self, CosBoundCheck};
use spcart::datasets;
use spcart::io;
use spcart::linalg::{center_columns, pca_loadings, MatrixInput};
use spcart::metrics;
use spcart::power::{rsvd_gp_fit, rsvd_gpb_fit, PowerConfig, PowerInit};
use spcart::report::FitReport;
use spcart::solver::{spcart_fit, SpcartConfig};
use spcart::truncation::Truncation;
use spcart::{Error, Result};

use crate::args::{parse_truncation, CommonArgs, CompareArgs, FileConfig, FitArgs, SynthArgs};
use crate::output::{write_records, BoundRecord, MetricsRecord, OutputFormat};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Method {
    Pca,
    RsvdGp,
    RsvdGpb,
    Spcart,
    St,
}

impl Method {
    fn parse(token: &str) -> Result<Self> {
        match token {
            "spcart" => Ok(Method::Spcart),
            "rsvd-gp" => Ok(Method::RsvdGp),
            "rsvd-gpb" => Ok(Method::RsvdGpb),
            "st" => Ok(Method::St),
            "pca" => Ok(Method::Pca),
            other => Err(Error::InvalidArgument(format!(
                "--method: expected spcart|rsvd-gp|rsvd-gpb|st|pca, got {other:?}"
            ))),
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Method::Spcart => "spcart",
            Method::RsvdGp => "rsvd-gp",
            Method::RsvdGpb => "rsvd-gpb",
            Method::St => "st",
            Method::Pca => "pca",
        }
    }

    fn needs_truncation(&self) -> bool {
        !matches!(self, Method::Pca)
    }
}

/// Fully resolved shared options.
pub struct Resolved {
    pub input: MatrixInput,
    pub input_name: String,
    pub output_stem: PathBuf,
    pub format: OutputFormat,
    pub seed: u64,
}

fn resolve_common(common: &CommonArgs, command_name: &str) -> Result<(Resolved, FileConfig)> {
    let file = FileConfig::load(common.config.as_ref())?;

    let input_name = common
        .input
        .clone()
        .or_else(|| file.get("input").map(String::from))
        .ok_or_else(|| {
            Error::InvalidArgument(
                "--input is required: a CSV path or one of pitprops|synthetic".to_string(),
            )
        })?;
    let input_kind = common
        .input_kind
        .clone()
        .or_else(|| file.get("input-kind").map(String::from))
        .unwrap_or_else(|| "covariance".to_string());
    let no_center = common.no_center || file.get_flag("no-center")?;
    let remove_dc = common.remove_dc || file.get_flag("remove-dc")?;

    let input = load_input(&input_name, &input_kind, no_center, remove_dc)?;

    let output_stem = common
        .output
        .clone()
        .or_else(|| file.get("output").map(PathBuf::from))
        .unwrap_or_else(|| {
            let dir = std::env::var("SPCART_OUT_DIR").unwrap_or_else(|_| ".".to_string());
            PathBuf::from(dir).join(command_name)
        });
    let format = OutputFormat::parse(
        common
            .format
            .as_deref()
            .or_else(|| file.get("format"))
            .unwrap_or("csv"),
    )?;
    let seed = match common.seed {
        Some(s) => s,
        None => file.get_parsed::<u64>("seed")?.unwrap_or(0),
    };

    Ok((
        Resolved {
            input,
            input_name,
            output_stem,
            format,
            seed,
        },
        file,
    ))
}

fn load_input(name: &str, kind: &str, no_center: bool, remove_dc: bool) -> Result<MatrixInput> {
    match name {
        "pitprops" => MatrixInput::covariance(datasets::load_pitprops()?),
        "synthetic" => MatrixInput::covariance(datasets::synthetic_covariance()),
        path => {
            let matrix = io::read_matrix_csv(path)?;
            match kind {
                "covariance" => MatrixInput::covariance(matrix),
                "data" => {
                    let matrix = if remove_dc {
                        datasets::remove_dc(&matrix)?
                    } else {
                        matrix
                    };
                    let matrix = if no_center {
                        matrix
                    } else {
                        center_columns(&matrix)?.matrix
                    };
                    MatrixInput::data(matrix)
                }
                other => Err(Error::InvalidArgument(format!(
                    "--input-kind: expected data or covariance, got {other:?}"
                ))),
            }
        }
    }
}

struct FitSpec {
    method: Method,
    truncation: Option<Truncation>,
    r: usize,
    adaptive: bool,
    init: PowerInit,
    max_iterations: usize,
    tol: f64,
    seed: u64,
}

fn resolve_fit_spec(args: &FitArgs, file: &FileConfig, p: usize, seed: u64) -> Result<FitSpec> {
    let method = Method::parse(
        args.method
            .as_deref()
            .or_else(|| file.get("method"))
            .ok_or_else(|| Error::InvalidArgument("--method is required".to_string()))?,
    )?;
    let r = match args.r {
        Some(r) => r,
        None => file
            .get_parsed::<usize>("r")?
            .ok_or_else(|| Error::InvalidArgument("--r is required".to_string()))?,
    };
    let truncation = resolve_truncation(
        method,
        args.trunc.as_deref().or_else(|| file.get("trunc")),
        args.lambda.as_deref().or_else(|| file.get("lambda")),
        p,
    )?;
    let adaptive = match args.adaptive {
        Some(a) => a,
        None => file.get_parsed::<bool>("adaptive")?.unwrap_or(true),
    };
    let init = parse_power_init(args.power_init.as_deref().or_else(|| file.get("power-init")))?;
    let max_iterations = match args.max_iterations {
        Some(m) => m,
        None => file.get_parsed::<usize>("max-iterations")?.unwrap_or(200),
    };
    let tol = match args.tol {
        Some(t) => t,
        None => file.get_parsed::<f64>("tol")?.unwrap_or(0.01),
    };
    Ok(FitSpec {
        method,
        truncation,
        r,
        adaptive,
        init,
        max_iterations,
        tol,
        seed,
    })
}

fn resolve_truncation(
    method: Method,
    trunc: Option<&str>,
    lambda: Option<&str>,
    p: usize,
) -> Result<Option<Truncation>> {
    if !method.needs_truncation() {
        return Ok(None);
    }
    let trunc = match (method, trunc) {
        // plain thresholding is hard thresholding of the PCA basis
        (Method::St, None) => "l0",
        (Method::St, Some(t)) if t != "l0" => {
            return Err(Error::InvalidArgument(format!(
                "--trunc: method st only supports l0, got {t:?}"
            )))
        }
        (_, Some(t)) => t,
        (_, None) => {
            return Err(Error::InvalidArgument(
                "--trunc is required for this method (l0|l1|sp|en)".to_string(),
            ))
        }
    };
    let lambda = lambda.ok_or_else(|| {
        Error::InvalidArgument("--lambda is required for this method".to_string())
    })?;
    Ok(Some(parse_truncation(trunc, lambda, p)?))
}

fn parse_power_init(token: Option<&str>) -> Result<PowerInit> {
    match token {
        None | Some("eigenvector") => Ok(PowerInit::LeadingEigenvector),
        Some("column") => Ok(PowerInit::DominantColumn),
        Some(other) => Err(Error::InvalidArgument(format!(
            "--power-init: expected eigenvector or column, got {other:?}"
        ))),
    }
}

/// Runs one method and returns its report plus the wall time.
fn run_method(input: &MatrixInput, spec: &FitSpec) -> Result<(FitReport, f64)> {
    let start = Instant::now();
    let report = match spec.method {
        Method::Spcart | Method::St => {
            let mut config = SpcartConfig::new(
                spec.r,
                if spec.method == Method::St {
                    spec.truncation.expect("st carries a truncation")
                } else {
                    spec.truncation.expect("spcart carries a truncation")
                },
            );
            config.max_iterations = if spec.method == Method::St {
                1
            } else {
                spec.max_iterations
            };
            config.rel_change_tol = spec.tol;
            config.restart_seed = spec.seed;
            spcart_fit(input, &config)?
        }
        Method::RsvdGp | Method::RsvdGpb => {
            let mut config =
                PowerConfig::new(spec.r, spec.truncation.expect("power carries a truncation"));
            config.adaptive = spec.adaptive;
            config.init = spec.init;
            config.max_iterations = spec.max_iterations;
            config.rel_change_tol = spec.tol;
            if spec.method == Method::RsvdGp {
                rsvd_gp_fit(input, &config)?
            } else {
                let data = match input {
                    MatrixInput::Data(a) => a.clone(),
                    MatrixInput::Covariance(c) => datasets::artificial_data_from_covariance(c)?,
                };
                rsvd_gpb_fit(&data, &config)?
            }
        }
        Method::Pca => pca_report(input, spec.r)?,
    };
    Ok((report, start.elapsed().as_secs_f64()))
}

/// Wraps plain PCA loadings in a fit report.
fn pca_report(input: &MatrixInput, r: usize) -> Result<FitReport> {
    let basis = pca_loadings(input, r)?;
    let final_metrics = metrics::snapshot(input, &basis.loadings)?;
    let pca_cpev = metrics::cpev(input, &basis.loadings)?;
    Ok(FitReport {
        loadings: basis.loadings.clone(),
        rotation: None,
        iterations: 0,
        converged: true,
        per_loading_iterations: None,
        trace: Vec::new(),
        deflation_iterates: None,
        final_metrics,
        pca_loadings: basis.loadings,
        pca_values: basis.values,
        pca_explained_variance: basis.explained_variance,
        pca_cpev,
        final_deviations: vec![0.0; r],
        final_truncated_energy: vec![0.0; r],
        warnings: Vec::new(),
    })
}

fn metrics_record(spec: &FitSpec, report: &FitReport, wall_time_s: f64) -> MetricsRecord {
    let m = &report.final_metrics;
    MetricsRecord {
        method: spec.method.name().to_string(),
        trunc: spec
            .truncation
            .map(|t| t.tag().to_string())
            .unwrap_or_else(|| "-".to_string()),
        lambda: spec.truncation.map(|t| t.parameter()),
        r: spec.r,
        sp: m.sp_mean,
        std: m.sp_std,
        sp_worst: m.sp_worst,
        nor: m.nor,
        ev: m.ev,
        cpev: m.cpev,
        nz: m.nz(),
        cardinalities: m.per_column_cardinality.clone(),
        cpev_pca: report.pca_cpev,
        iterations: if spec.method == Method::St {
            1
        } else {
            report.iterations
        },
        converged: matches!(spec.method, Method::St | Method::Pca) || report.converged,
        warnings: report.warnings.len(),
        wall_time_s,
    }
}

fn with_extension(stem: &std::path::Path, suffix: &str) -> PathBuf {
    let mut name = stem
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| "out".to_string());
    name.push('.');
    name.push_str(suffix);
    stem.with_file_name(name)
}

pub fn cmd_fit(args: &FitArgs) -> Result<Vec<PathBuf>> {
    let (resolved, file) = resolve_common(&args.common, "fit")?;
    let spec = resolve_fit_spec(args, &file, resolved.input.nvars(), resolved.seed)?;
    let (report, wall) = run_method(&resolved.input, &spec)?;

    let loadings_path = with_extension(&resolved.output_stem, "loadings.csv");
    io::write_matrix_csv_with_comments(
        &report.loadings,
        &loadings_path,
        &[format!(
            "input={} method={} trunc={} lambda={} r={}",
            resolved.input_name,
            spec.method.name(),
            spec.truncation.map(|t| t.tag()).unwrap_or("-"),
            spec.truncation
                .map(|t| t.parameter().to_string())
                .unwrap_or_else(|| "-".to_string()),
            spec.r
        )],
    )?;

    let record = metrics_record(&spec, &report, wall);
    let metrics_path = with_extension(
        &resolved.output_stem,
        &format!("metrics.{}", resolved.format.extension()),
    );
    write_records(
        &metrics_path,
        resolved.format,
        MetricsRecord::CSV_HEADER,
        std::slice::from_ref(&record),
        MetricsRecord::csv_row,
        MetricsRecord::json_line,
    )?;
    Ok(vec![loadings_path, metrics_path])
}

pub fn cmd_compare(args: &CompareArgs) -> Result<Vec<PathBuf>> {
    let (resolved, file) = resolve_common(&args.common, "compare")?;
    let p = resolved.input.nvars();

    let methods_raw = args
        .methods
        .clone()
        .or_else(|| file.get("methods").map(String::from))
        .ok_or_else(|| {
            Error::InvalidArgument("--methods is required (comma-separated list)".to_string())
        })?;
    let lambdas_raw = args
        .lambdas
        .clone()
        .or_else(|| file.get("lambdas").map(String::from))
        .ok_or_else(|| {
            Error::InvalidArgument("--lambdas is required (comma-separated sweep)".to_string())
        })?;
    let trunc = args
        .trunc
        .clone()
        .or_else(|| file.get("trunc").map(String::from))
        .ok_or_else(|| Error::InvalidArgument("--trunc is required (l0|l1|sp|en)".to_string()))?;
    let r = match args.r {
        Some(r) => r,
        None => file
            .get_parsed::<usize>("r")?
            .ok_or_else(|| Error::InvalidArgument("--r is required".to_string()))?,
    };

    let mut methods = Vec::new();
    for token in methods_raw.split(',') {
        let method = Method::parse(token.trim())?;
        if !method.needs_truncation() {
            return Err(Error::InvalidArgument(format!(
                "--methods: {} takes no lambda sweep",
                method.name()
            )));
        }
        if method == Method::St && trunc != "l0" {
            return Err(Error::InvalidArgument(format!(
                "--methods: st only supports --trunc l0, got {trunc:?}"
            )));
        }
        methods.push(method);
    }
    let mut lambdas = Vec::new();
    for token in lambdas_raw.split(',') {
        lambdas.push(parse_truncation(&trunc, token.trim(), p)?);
    }

    // deterministic order: by method name, then by parameter value
    methods.sort();
    methods.dedup();
    lambdas.sort_by(|a, b| {
        a.parameter()
            .partial_cmp(&b.parameter())
            .expect("finite parameters")
    });

    let mut records = Vec::new();
    for &method in &methods {
        for &truncation in &lambdas {
            let spec = FitSpec {
                method,
                truncation: Some(truncation),
                r,
                adaptive: match args.adaptive {
                    Some(a) => a,
                    None => file.get_parsed::<bool>("adaptive")?.unwrap_or(true),
                },
                init: parse_power_init(
                    args.power_init.as_deref().or_else(|| file.get("power-init")),
                )?,
                max_iterations: match args.max_iterations {
                    Some(m) => m,
                    None => file.get_parsed::<usize>("max-iterations")?.unwrap_or(200),
                },
                tol: match args.tol {
                    Some(t) => t,
                    None => file.get_parsed::<f64>("tol")?.unwrap_or(0.01),
                },
                seed: resolved.seed,
            };
            let (report, wall) = run_method(&resolved.input, &spec)?;
            records.push(metrics_record(&spec, &report, wall));
        }
    }

    let path = with_extension(
        &resolved.output_stem,
        &format!("compare.{}", resolved.format.extension()),
    );
    write_records(
        &path,
        resolved.format,
        MetricsRecord::CSV_HEADER,
        &records,
        MetricsRecord::csv_row,
        MetricsRecord::json_line,
    )?;
    Ok(vec![path])
}

pub fn cmd_bounds(args: &FitArgs) -> Result<Vec<PathBuf>> {
    let (resolved, file) = resolve_common(&args.common, "bounds")?;
    let p = resolved.input.nvars();
    let spec = resolve_fit_spec(args, &file, p, resolved.seed)?;
    let (report, _) = run_method(&resolved.input, &spec)?;

    let mut records = Vec::new();

    // per-column operator guarantees apply when the loadings came from
    // truncating unit vectors; raw thresholds void them
    let raw_entrywise = matches!(spec.method, Method::RsvdGp | Method::RsvdGpb)
        && !spec.adaptive
        && spec
            .truncation
            .map(|t| !t.is_scale_free())
            .unwrap_or(false);
    match spec.truncation {
        Some(truncation) if !raw_entrywise => {
            let sparsity = bounds::sparsity_bound_report(
                truncation,
                p,
                &report.final_metrics.per_column_sparsity,
            )?;
            records.push(BoundRecord::from_report(&sparsity, true));
            let deviation = bounds::deviation_bound_report(
                truncation,
                p,
                &report.final_deviations,
                &report.final_truncated_energy,
                &report.final_metrics.per_column_cardinality,
            )?;
            records.push(BoundRecord::from_report(&deviation, true));
        }
        Some(_) => {
            records.push(BoundRecord::inapplicable(
                "sparsity",
                spec.truncation.map(|t| t.tag()).unwrap_or("-"),
                "raw thresholds carry no per-vector guarantee".to_string(),
            ));
            records.push(BoundRecord::inapplicable(
                "deviation",
                spec.truncation.map(|t| t.tag()).unwrap_or("-"),
                "raw thresholds carry no per-vector guarantee".to_string(),
            ));
        }
        None => {}
    }

    // the conical pairwise bound needs deviations from an orthonormal
    // source basis, which only the rotation solver provides
    if matches!(spec.method, Method::Spcart | Method::St) && spec.r >= 2 {
        let pairwise =
            bounds::nonortho_pairwise_report(&report.loadings, &report.final_deviations)?;
        records.push(BoundRecord::from_report(&pairwise, true));
    } else if spec.r >= 2 {
        records.push(BoundRecord::inapplicable(
            "nonortho_pairwise",
            "-",
            "deviations are not measured from an orthonormal basis here".to_string(),
        ));
    }

    let dmin = bounds::ev_dmin_bound(&resolved.input, &report.loadings, &report.pca_loadings)?;
    records.push(BoundRecord::from_report(&dmin, true));

    match bounds::ev_cos_check(&resolved.input, &report)? {
        CosBoundCheck::Checked(cos) => records.push(BoundRecord::from_report(&cos, true)),
        CosBoundCheck::Skipped(reason) => {
            records.push(BoundRecord::inapplicable("ev_cos", "-", reason))
        }
    }

    if let Some(Truncation::ByEnergy { share }) = spec.truncation {
        let coarse = bounds::by_energy_coarse_ev_report(
            share,
            report.pca_explained_variance,
            report.final_metrics.ev,
            p,
            spec.r,
        );
        records.push(BoundRecord::from_report(&coarse, true));
    }

    let path = with_extension(
        &resolved.output_stem,
        &format!("bounds.{}", resolved.format.extension()),
    );
    write_records(
        &path,
        resolved.format,
        BoundRecord::CSV_HEADER,
        &records,
        BoundRecord::csv_row,
        BoundRecord::json_line,
    )?;
    Ok(vec![path])
}

pub fn cmd_synth(args: &SynthArgs) -> Result<Vec<PathBuf>> {
    let file = FileConfig::load(args.common.config.as_ref())?;
    let output_stem = args
        .common
        .output
        .clone()
        .or_else(|| file.get("output").map(PathBuf::from))
        .unwrap_or_else(|| {
            let dir = std::env::var("SPCART_OUT_DIR").unwrap_or_else(|_| ".".to_string());
            PathBuf::from(dir).join("synth")
        });
    let seed = match args.common.seed {
        Some(s) => s,
        None => file.get_parsed::<u64>("seed")?.unwrap_or(0),
    };
    let samples = match args.samples {
        Some(n) => Some(n),
        None => file.get_parsed::<usize>("samples")?,
    };
    let want_cov = args.cov || file.get_flag("cov")? || samples.is_none();

    let mut written = Vec::new();
    if want_cov {
        let path = with_extension(&output_stem, "cov.csv");
        io::write_matrix_csv_with_comments(
            &datasets::synthetic_covariance(),
            &path,
            &["analytic covariance of the three-factor synthetic model".to_string()],
        )?;
        written.push(path);
    }
    if let Some(n) = samples {
        if n == 0 {
            return Err(Error::InvalidArgument(
                "--samples: sample count must be positive".to_string(),
            ));
        }
        let path = with_extension(&output_stem, "samples.csv");
        io::write_matrix_csv_with_comments(
            &datasets::synthetic_samples(n, seed),
            &path,
            &[format!("three-factor synthetic samples seed={seed} n={n}")],
        )?;
        written.push(path);
    }
    Ok(written)
}
