//! `verify-mirror`, `sweep` and `riemann-roch`.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use serde_json::{json, Value};
use spencer_core::char_class::{
    euler_srr, k3_spencer_ch, qi, srr_decomposition, CYManifoldData, CohomologyClass, LambdaTag, RiemannRochInput,
    SRRReport,
};
use spencer_core::spectral_verify::{self, MirrorConfig, SweepTable};
use spencer_core::spencer_assembly::LaplacianMode;

use crate::config::{load, parse_json, read_file, RunConfig, SweepFile};
use crate::report::{num, to_value, write_csv, write_json, ReportEnvelope};
use crate::{dump, resolve_out, Cli, CliError};

fn load_run_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let cfg = match &cli.config {
        Some(path) => load::<RunConfig>(path)?,
        None => RunConfig::default(),
    };
    cfg.validate()?;
    Ok(cfg)
}

fn elapsed_ms(start: Instant) -> u128 {
    start.elapsed().as_millis()
}

pub fn verify_mirror(cli: &Cli) -> Result<(), CliError> {
    let cfg = load_run_config(cli)?;
    let out = resolve_out(cli.out.as_ref(), cfg.output_dir.as_ref());
    let start = Instant::now();
    let report = spectral_verify::verify_mirror(&cfg.mirror_config())?;
    let mut timings = BTreeMap::from([("verify".to_string(), elapsed_ms(start))]);
    if cli.dump_matrices {
        let t = Instant::now();
        dump::dump_run(&cfg.mirror_config(), &out.join("matrices"))?;
        timings.insert("dump".into(), elapsed_ms(t));
    }
    let envelope = ReportEnvelope::new("verify-mirror", to_value(&cfg), to_value(&report), timings);
    let path = write_json(&out, "verify_mirror.json", &envelope)?;
    println!(
        "{}: dims {} -> {}",
        report.config_id,
        report
            .degrees
            .iter()
            .map(|d| format!("H{}: {}/{}", d.degree, d.dim_plus, d.dim_minus))
            .collect::<Vec<_>>()
            .join(", "),
        path.display()
    );
    if report.passed {
        Ok(())
    } else {
        Err(CliError::Verification(format!(
            "harmonic dimensions differ between λ and −λ for {}",
            report.config_id
        )))
    }
}

/// Exit status for a finished sweep: mismatches beat numeric failures.
pub fn sweep_status(table: &SweepTable) -> Result<(), CliError> {
    let mismatched: Vec<&str> = table
        .reports()
        .filter(|r| !r.passed)
        .map(|r| r.config_id.as_str())
        .collect();
    if !mismatched.is_empty() {
        return Err(CliError::Verification(format!("mirror mismatch in {}", mismatched.join(", "))));
    }
    let errors: Vec<_> = table.rows.iter().filter(|r| r.error.is_some()).collect();
    if errors.is_empty() {
        return Ok(());
    }
    let detail = errors
        .iter()
        .map(|r| r.error.clone().unwrap_or_default())
        .collect::<Vec<_>>()
        .join("; ");
    if errors.iter().all(|r| matches!(r.error_kind.as_deref(), Some("numeric" | "assembly"))) {
        Err(CliError::Numeric(detail))
    } else {
        Err(CliError::Verification(detail))
    }
}

pub fn write_sweep_csv(dir: &Path, name: &str, table: &SweepTable) -> Result<(), CliError> {
    let header = [
        "config_id",
        "lambda_1",
        "lambda_2",
        "lambda_3",
        "lambda_norm",
        "mode",
        "metric",
        "degree",
        "dim_plus",
        "dim_minus",
        "eig_min_plus",
        "eig_min_minus",
        "residual_max",
        "cochain_defect",
        "passed",
        "error",
    ];
    let mut rows: Vec<Vec<String>> = Vec::new();
    for row in &table.rows {
        match &row.report {
            Some(r) => {
                let mode = to_value(&r.mode).as_str().unwrap_or_default().to_string();
                let metric = to_value(&r.metric).as_str().unwrap_or_default().to_string();
                for d in &r.degrees {
                    rows.push(vec![
                        r.config_id.clone(),
                        num(r.lambda[0]),
                        num(r.lambda[1]),
                        num(r.lambda[2]),
                        num(r.lambda_norm),
                        mode.clone(),
                        metric.clone(),
                        d.degree.to_string(),
                        d.dim_plus.to_string(),
                        d.dim_minus.to_string(),
                        num(d.eig_min_plus),
                        num(d.eig_min_minus),
                        num(d.residual_max),
                        num(r.cochain_defect),
                        (d.dim_plus == d.dim_minus).to_string(),
                        String::new(),
                    ]);
                }
            }
            None => {
                let mut blank = vec![String::new(); header.len()];
                blank[0] = row.config_id.clone();
                blank[14] = "false".into();
                blank[15] = row.error.clone().unwrap_or_default();
                rows.push(blank);
            }
        }
    }
    write_csv(dir, name, &header, rows)?;
    Ok(())
}

pub fn sweep(cli: &Cli) -> Result<(), CliError> {
    let file = match (&cli.config, cli.preset.as_deref()) {
        (Some(path), _) => load::<SweepFile>(path)?,
        (None, preset) => {
            let mode = match preset.unwrap_or("simplified") {
                "simplified" => LaplacianMode::Simplified,
                "faithful" => LaplacianMode::Faithful,
                other => {
                    return Err(CliError::Config(format!(
                        "--preset: unknown sweep preset {other:?} (expected \"simplified\" or \"faithful\")"
                    )))
                }
            };
            SweepFile {
                schema_version: crate::config::CONFIG_SCHEMA_VERSION,
                configs: RunConfig::default().reference_sweep(mode),
                output_dir: None,
            }
        }
    };
    file.validate()?;
    let out = resolve_out(cli.out.as_ref(), file.output_dir.as_ref());
    let configs: Vec<MirrorConfig> = file.configs.iter().map(RunConfig::mirror_config).collect();
    let start = Instant::now();
    let table = spectral_verify::sweep(&configs);
    let timings = BTreeMap::from([("sweep".to_string(), elapsed_ms(start))]);
    let envelope = ReportEnvelope::new("sweep", to_value(&file), to_value(&table), timings);
    let path = write_json(&out, "sweep.json", &envelope)?;
    write_sweep_csv(&out, "sweep.csv", &table)?;
    println!(
        "{}/{} comparisons passed, monotone = {} -> {}",
        table.summary.comparisons_passed,
        table.summary.comparisons,
        table.summary.monotone,
        path.display()
    );
    sweep_status(&table)
}

/// Term split, cross-path value and the relations a report is checked for.
#[derive(Debug, Clone, serde::Serialize)]
pub struct RiemannRochResults {
    pub report: SRRReport,
    pub euler_srr: String,
    pub cross_path_agrees: bool,
    pub lambda_tag_invariant: bool,
    pub a2_equals_2a0: bool,
    pub chi_equals_3a0: bool,
}

pub fn riemann_roch_results(manifold: &CYManifoldData, chs: &[CohomologyClass]) -> Result<RiemannRochResults, CliError> {
    let plus = srr_decomposition(manifold, chs, LambdaTag::Plus)?;
    let minus = srr_decomposition(manifold, chs, LambdaTag::Minus)?;
    let euler = euler_srr(manifold, chs)?;
    let invariant = serde_json::to_vec(&plus).ok() == serde_json::to_vec(&minus).ok();
    Ok(RiemannRochResults {
        euler_srr: euler.to_string(),
        cross_path_agrees: euler == plus.chi,
        lambda_tag_invariant: invariant,
        a2_equals_2a0: plus.a2 == qi(2) * &plus.a0,
        chi_equals_3a0: plus.chi == qi(3) * &plus.a0,
        report: plus,
    })
}

pub fn riemann_roch(cli: &Cli) -> Result<(), CliError> {
    let (echo, manifold, chs): (Value, _, _) = match (&cli.config, cli.preset.as_deref()) {
        (Some(path), _) => {
            let input: RiemannRochInput = parse_json(&read_file(path)?, &path.display().to_string())?;
            if input.schema_version != spencer_core::char_class::srr::SRR_SCHEMA_VERSION {
                return Err(CliError::Config(format!(
                    "schema_version: unsupported value {}",
                    input.schema_version
                )));
            }
            let (m, chs) = input.build()?;
            (to_value(&input), m, chs)
        }
        (None, Some("k3")) => {
            let m = CYManifoldData::k3();
            let chs = k3_spencer_ch(&m)?;
            (json!({ "preset": "k3" }), m, chs)
        }
        (None, Some(other)) => {
            return Err(CliError::Config(format!("--preset: unknown preset {other:?} (expected \"k3\")")))
        }
        (None, None) => return Err(CliError::Config("riemann-roch needs --config PATH or --preset k3".into())),
    };
    let out = resolve_out(cli.out.as_ref(), None);
    let start = Instant::now();
    let results = riemann_roch_results(&manifold, &chs)?;
    let timings = BTreeMap::from([("riemann_roch".to_string(), elapsed_ms(start))]);
    let envelope = ReportEnvelope::new("riemann-roch", echo, to_value(&results), timings);
    let path = write_json(&out, "riemann_roch.json", &envelope)?;
    let r = &results.report;
    println!(
        "A0 = {}, A2 = {}, A3 = {}, A4 = {}, chi = {}; chi = 3·A0: {} -> {}",
        r.a0,
        r.a2,
        r.a3,
        r.a4,
        r.chi,
        results.chi_equals_3a0,
        path.display()
    );
    if results.cross_path_agrees && results.lambda_tag_invariant {
        Ok(())
    } else {
        Err(CliError::Verification(format!(
            "term sum {} disagrees with the direct Euler characteristic {}",
            r.chi, results.euler_srr
        )))
    }
}
