use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;
use sha2::{Digest, Sha256};

use super::{
    BenchArgs, CertArgs, CertMethodArg, CheckArgs, CliError, ComputeArgs, EnsembleArgs, ExitCode,
    GenArgs, GridArgs, ImageFormat, Outcome, PlotArgs,
};
use crate::certify::{cert_corollary1, cert_corollary2};
use crate::ensemble::{EnsembleConfig, MAX_ORDER};
use crate::linalg::{modulus, parse_matrix, serialize_matrix, ComplexMatrix, ComplexScalar};
use crate::raster::{
    area, auto_box, difference_count, emit_pbm, emit_ppm, emit_svg, grid_subset, rasterize,
    set_color, Canvas, Layer, RasterGrid,
};
use crate::regions::{contains_clustered_eigenvalue, oval_count, RegionKind};
use crate::spectra::{clusters, determinant, spectrum, SpectrumResult};

fn read_matrix(path: &Path) -> Result<ComplexMatrix, CliError> {
    let bytes = fs::read(path).map_err(|e| CliError::io(format!("{}: {e}", path.display())))?;
    parse_matrix(&bytes).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|e| CliError::io(format!("{}: {e}", path.display())))
}

fn canvas_for(a: &ComplexMatrix, grid: &GridArgs) -> Result<Canvas, CliError> {
    let bbox = grid.bbox.unwrap_or_else(|| auto_box(a));
    Ok(Canvas::new(bbox, grid.grid, grid.grid)?)
}

fn oracle(a: &ComplexMatrix) -> Result<SpectrumResult, CliError> {
    let s = spectrum(a).map_err(|e| CliError::oracle(e.to_string()))?;
    if !s.converged {
        return Err(CliError::oracle(format!(
            "max residual {:e} above tolerance",
            s.max_residual()
        )));
    }
    Ok(s)
}

/// SHA-256 of the serialized matrix, hex encoded.
pub fn digest(a: &ComplexMatrix) -> String {
    Sha256::digest(serialize_matrix(a).as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

fn raster(a: &ComplexMatrix, kind: RegionKind, canvas: &Canvas) -> Result<RasterGrid, CliError> {
    Ok(rasterize(
        a,
        kind,
        canvas.bbox,
        canvas.width,
        canvas.height,
    )?)
}

pub fn compute(args: &ComputeArgs) -> Result<Outcome, CliError> {
    let a = read_matrix(&args.matrix)?;
    let canvas = canvas_for(&a, &args.grid)?;
    let grid = raster(&a, args.set, &canvas)?;
    if let Some(out) = &args.out {
        write_file(out, &emit_pbm(&grid))?;
    }
    Ok(Outcome {
        json: json!({
            "set": args.set.name(),
            "area": area(&grid),
            "cells": grid.count(),
            "box": canvas.bbox,
            "width": canvas.width,
            "height": canvas.height,
            "n": a.n(),
            "digest": digest(&a),
        }),
        code: ExitCode::Success,
    })
}

/// Grids for the requested layers on one canvas.
pub fn plot_grids(
    a: &ComplexMatrix,
    layers: &[RegionKind],
    canvas: &Canvas,
) -> Result<Vec<RasterGrid>, CliError> {
    layers.iter().map(|&k| raster(a, k, canvas)).collect()
}

pub fn plot(args: &PlotArgs) -> Result<Outcome, CliError> {
    let a = read_matrix(&args.matrix)?;
    if args.layers.is_empty() {
        return Err(CliError::usage("at least one layer is required"));
    }
    let canvas = canvas_for(&a, &args.grid)?;
    let grids = plot_grids(&a, &args.layers, &canvas)?;
    let markers = oracle(&a)?.eigenvalues;
    let names: Vec<String> = args.layers.iter().map(|k| k.name()).collect();
    let layers: Vec<Layer<'_>> = grids
        .iter()
        .zip(&args.layers)
        .zip(&names)
        .map(|((grid, &kind), name)| Layer {
            name,
            grid,
            color: set_color(kind),
        })
        .collect();
    let bytes = match args.format {
        ImageFormat::Svg => emit_svg(&canvas, &layers, &markers)?,
        ImageFormat::Ppm => emit_ppm(&canvas, &layers, &markers)?,
    };
    write_file(&args.out, &bytes)?;
    let layer_info: Vec<_> = grids
        .iter()
        .zip(&names)
        .map(|(g, name)| json!({ "set": name, "cells": g.count(), "area": area(g) }))
        .collect();
    Ok(Outcome {
        json: json!({
            "out": args.out.display().to_string(),
            "format": match args.format { ImageFormat::Svg => "svg", ImageFormat::Ppm => "ppm" },
            "bytes": bytes.len(),
            "layers": layer_info,
            "markers": markers,
            "box": canvas.bbox,
            "width": canvas.width,
            "height": canvas.height,
        }),
        code: ExitCode::Success,
    })
}

/// The five inclusion-set grids on a shared canvas, with the grid-level
/// containment chain and the Φ \ Θ cell count.
struct GridAnalysis {
    areas: BTreeMap<String, f64>,
    chain: BTreeMap<String, bool>,
    conjecture_violations: usize,
}

impl GridAnalysis {
    fn run(a: &ComplexMatrix, canvas: &Canvas) -> Result<Self, CliError> {
        let [gersh, brauer, omega, phi, theta] = [
            RegionKind::Gersh,
            RegionKind::Brauer,
            RegionKind::Omega,
            RegionKind::Phi,
            RegionKind::Theta,
        ]
        .map(|k| raster(a, k, canvas));
        let (gersh, brauer, omega, phi, theta) = (gersh?, brauer?, omega?, phi?, theta?);
        let areas = [
            ("gersh", &gersh),
            ("brauer", &brauer),
            ("omega", &omega),
            ("phi", &phi),
            ("theta", &theta),
        ]
        .into_iter()
        .map(|(name, g)| (name.to_owned(), area(g)))
        .collect();
        let chain = [
            ("phi_subset_brauer", grid_subset(&phi, &brauer)?),
            ("theta_subset_brauer", grid_subset(&theta, &brauer)?),
            ("brauer_subset_gersh", grid_subset(&brauer, &gersh)?),
            ("omega_subset_gersh", grid_subset(&omega, &gersh)?),
        ]
        .into_iter()
        .map(|(name, ok)| (name.to_owned(), ok))
        .collect();
        Ok(Self {
            areas,
            chain,
            conjecture_violations: difference_count(&phi, &theta)?,
        })
    }

    fn chain_ok(&self) -> bool {
        self.chain.values().all(|&ok| ok)
    }

    fn ratio(&self, num: &str, den: &str) -> Option<f64> {
        let d = self.areas[den];
        (d > 0.0).then(|| self.areas[num] / d)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EigenRow {
    pub value: ComplexScalar,
    pub residual: f64,
    pub cluster_size: usize,
    pub sets: BTreeMap<String, bool>,
}

fn membership_table(a: &ComplexMatrix, s: &SpectrumResult) -> Result<Vec<EigenRow>, CliError> {
    let clusters = clusters(&s.eigenvalues);
    s.eigenvalues
        .iter()
        .zip(&s.residuals)
        .zip(&clusters)
        .map(|((&value, &residual), cluster)| {
            let sets = RegionKind::INCLUSION_SETS
                .iter()
                .map(|&k| {
                    Ok((
                        k.name(),
                        contains_clustered_eigenvalue(a, k, value, cluster)?,
                    ))
                })
                .collect::<Result<_, crate::Error>>()?;
            Ok(EigenRow {
                value,
                residual,
                cluster_size: cluster.size,
                sets,
            })
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub digest: String,
    pub n: usize,
    pub eigenvalues: Vec<EigenRow>,
    pub membership_ok: bool,
    pub chain: BTreeMap<String, bool>,
    pub chain_ok: bool,
    pub areas: BTreeMap<String, f64>,
    pub conjecture_violations: usize,
    pub findings: Vec<String>,
    pub oval_counts: BTreeMap<String, usize>,
    #[serde(rename = "box")]
    pub bbox: crate::raster::BoundingBox,
    pub width: usize,
    pub height: usize,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<String, f64>>,
}

fn conjecture_finding(cells: usize) -> String {
    format!("{cells} grid cells lie in phi but not in theta")
}

pub fn check(args: &CheckArgs) -> Result<Outcome, CliError> {
    let a = read_matrix(&args.matrix)?;
    if a.n() > MAX_ORDER {
        return Err(CliError::usage(format!(
            "check supports order at most {MAX_ORDER}, got {}",
            a.n()
        )));
    }
    let report = check_matrix(&a, &args.grid, args.timings)?;
    let code = if report.passed {
        ExitCode::Success
    } else {
        ExitCode::CheckFailed
    };
    Ok(Outcome {
        json: serde_json::to_value(&report).expect("report serializes"),
        code,
    })
}

pub fn check_matrix(
    a: &ComplexMatrix,
    grid: &GridArgs,
    timings: bool,
) -> Result<CheckReport, CliError> {
    let canvas = canvas_for(a, grid)?;
    let t0 = Instant::now();
    let s = oracle(a)?;
    let t_oracle = t0.elapsed();
    let eigenvalues = membership_table(a, &s)?;
    let membership_ok = eigenvalues.iter().all(|row| row.sets.values().all(|&b| b));
    let t1 = Instant::now();
    let grids = GridAnalysis::run(a, &canvas)?;
    let t_grids = t1.elapsed();
    let oval_counts = [RegionKind::Brauer, RegionKind::Phi, RegionKind::Theta]
        .iter()
        .map(|&k| (k.name(), oval_count(a.n(), k).unwrap_or(0)))
        .collect();
    let findings = if grids.conjecture_violations > 0 {
        vec![conjecture_finding(grids.conjecture_violations)]
    } else {
        Vec::new()
    };
    let chain_ok = grids.chain_ok();
    Ok(CheckReport {
        digest: digest(a),
        n: a.n(),
        eigenvalues,
        membership_ok,
        chain_ok,
        chain: grids.chain,
        areas: grids.areas,
        conjecture_violations: grids.conjecture_violations,
        findings,
        oval_counts,
        bbox: canvas.bbox,
        width: canvas.width,
        height: canvas.height,
        passed: membership_ok && chain_ok,
        timings_ms: timings.then(|| {
            BTreeMap::from([
                ("oracle".to_owned(), t_oracle.as_secs_f64() * 1e3),
                ("grids".to_owned(), t_grids.as_secs_f64() * 1e3),
            ])
        }),
    })
}

fn ensemble_config(args: &EnsembleArgs) -> Result<EnsembleConfig, CliError> {
    let kind = args
        .ensemble
        .ok_or_else(|| CliError::usage("--ensemble is required"))?;
    Ok(EnsembleConfig::new(kind, args.n, args.trials, args.seed)?)
}

/// Certified matrices must be nonsingular: nonzero determinant and no oracle
/// eigenvalue within `1e-8 (1 + max |a_ij|)` of the origin.
#[derive(Clone, Debug, Serialize)]
struct SoundnessEvidence {
    determinant: ComplexScalar,
    smallest_eigenvalue_modulus: Option<f64>,
    zero_threshold: f64,
}

impl SoundnessEvidence {
    fn gather(a: &ComplexMatrix) -> Self {
        let smallest = spectrum(a).ok().filter(|s| s.converged).map(|s| {
            s.eigenvalues
                .iter()
                .map(|&l| modulus(l))
                .fold(f64::INFINITY, f64::min)
        });
        Self {
            determinant: determinant(a),
            smallest_eigenvalue_modulus: smallest,
            zero_threshold: 1e-8 * (1.0 + a.max_abs()),
        }
    }

    fn nonsingular(&self) -> bool {
        modulus(self.determinant) > 0.0
            && self
                .smallest_eigenvalue_modulus
                .is_none_or(|m| m > self.zero_threshold)
    }
}

pub fn cert(args: &CertArgs) -> Result<Outcome, CliError> {
    let (want_c1, want_c2) = match args.method {
        CertMethodArg::C1 => (true, false),
        CertMethodArg::C2 => (false, true),
        CertMethodArg::Both => (true, true),
    };
    if let Some(path) = &args.matrix {
        let a = read_matrix(path)?;
        let c1 = want_c1.then(|| cert_corollary1(&a));
        let c2 = want_c2.then(|| cert_corollary2(&a));
        let certified = c1.iter().any(|r| r.certified) || c2.iter().any(|r| r.certified);
        let evidence = SoundnessEvidence::gather(&a);
        let sound = !certified || evidence.nonsingular();
        return Ok(Outcome {
            json: json!({
                "digest": digest(&a),
                "c1": c1,
                "c2": c2,
                "evidence": evidence,
                "sound": sound,
            }),
            code: if sound {
                ExitCode::Success
            } else {
                ExitCode::CheckFailed
            },
        });
    }
    let cfg = ensemble_config(&args.ensemble)?;
    let trials: Vec<_> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| -> Result<_, CliError> {
            let a = cfg.trial_matrix(t)?;
            let c1 = want_c1.then(|| cert_corollary1(&a).certified);
            let c2 = want_c2.then(|| cert_corollary2(&a).certified);
            let evidence = SoundnessEvidence::gather(&a);
            let certified = c1 == Some(true) || c2 == Some(true);
            let sound = !certified || evidence.nonsingular();
            Ok(json!({ "trial": t, "c1": c1, "c2": c2, "evidence": evidence, "sound": sound }))
        })
        .collect::<Result<_, _>>()?;
    let count = |key: &str| trials.iter().filter(|t| t[key] == json!(true)).count();
    let violations = trials.iter().filter(|t| t["sound"] == json!(false)).count();
    Ok(Outcome {
        json: json!({
            "config": cfg,
            "certified_c1": want_c1.then(|| count("c1")),
            "certified_c2": want_c2.then(|| count("c2")),
            "soundness_violations": violations,
            "trials": trials,
        }),
        code: if violations == 0 {
            ExitCode::Success
        } else {
            ExitCode::CheckFailed
        },
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct AreaRatios {
    pub phi_over_brauer: Option<f64>,
    pub theta_over_brauer: Option<f64>,
    pub brauer_over_gersh: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub seed: u64,
    pub skipped: Option<String>,
    pub areas: BTreeMap<String, f64>,
    pub ratios: Option<AreaRatios>,
    pub chain_ok: bool,
    pub membership_ok: bool,
    pub conjecture_violations: usize,
    pub cert_c1: bool,
    pub cert_c2: bool,
    pub cert_sound: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct BenchAggregate {
    pub completed: usize,
    pub oracle_failures: usize,
    pub mean_phi_over_brauer: Option<f64>,
    pub mean_theta_over_brauer: Option<f64>,
    pub mean_brauer_over_gersh: Option<f64>,
    pub chain_failures: usize,
    pub membership_failures: usize,
    pub conjecture_violations_total: usize,
    pub conjecture_trials_with_violations: usize,
    pub c1_hit_rate: f64,
    pub c2_hit_rate: f64,
    pub soundness_violations: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct BenchSummary {
    pub config: EnsembleConfig,
    pub grid: usize,
    pub trials: Vec<TrialRecord>,
    pub aggregate: BenchAggregate,
    pub findings: Vec<String>,
    pub passed: bool,
}

fn bench_trial(cfg: &EnsembleConfig, t: usize, grid: &GridArgs) -> Result<TrialRecord, CliError> {
    let a = cfg.trial_matrix(t)?;
    let c1 = cert_corollary1(&a).certified;
    let c2 = cert_corollary2(&a).certified;
    let cert_sound = !(c1 || c2) || SoundnessEvidence::gather(&a).nonsingular();
    let mut record = TrialRecord {
        trial: t,
        seed: cfg.trial_seed(t),
        skipped: None,
        areas: BTreeMap::new(),
        ratios: None,
        chain_ok: true,
        membership_ok: true,
        conjecture_violations: 0,
        cert_c1: c1,
        cert_c2: c2,
        cert_sound,
    };
    let s = match oracle(&a) {
        Ok(s) => s,
        Err(e) => {
            record.skipped = Some(e.message);
            return Ok(record);
        }
    };
    record.membership_ok = membership_table(&a, &s)?
        .iter()
        .all(|row| row.sets.values().all(|&b| b));
    let g = GridAnalysis::run(&a, &canvas_for(&a, grid)?)?;
    record.chain_ok = g.chain_ok();
    record.conjecture_violations = g.conjecture_violations;
    record.ratios = Some(AreaRatios {
        phi_over_brauer: g.ratio("phi", "brauer"),
        theta_over_brauer: g.ratio("theta", "brauer"),
        brauer_over_gersh: g.ratio("brauer", "gersh"),
    });
    record.areas = g.areas;
    Ok(record)
}

fn mean(values: impl Iterator<Item = Option<f64>>) -> Option<f64> {
    let v: Vec<f64> = values.flatten().collect();
    (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64)
}

pub fn run_bench(cfg: &EnsembleConfig, grid_size: usize) -> Result<BenchSummary, CliError> {
    let grid = GridArgs {
        grid: grid_size,
        bbox: None,
    };
    // Trials run in parallel; collect() keeps trial order.
    let trials: Vec<TrialRecord> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| bench_trial(cfg, t, &grid))
        .collect::<Result<_, _>>()?;
    let done: Vec<&TrialRecord> = trials.iter().filter(|t| t.skipped.is_none()).collect();
    let ratio = |f: fn(&AreaRatios) -> Option<f64>| {
        mean(done.iter().map(|t| t.ratios.as_ref().and_then(f)))
    };
    let total = trials.len() as f64;
    let aggregate = BenchAggregate {
        completed: done.len(),
        oracle_failures: trials.len() - done.len(),
        mean_phi_over_brauer: ratio(|r| r.phi_over_brauer),
        mean_theta_over_brauer: ratio(|r| r.theta_over_brauer),
        mean_brauer_over_gersh: ratio(|r| r.brauer_over_gersh),
        chain_failures: done.iter().filter(|t| !t.chain_ok).count(),
        membership_failures: done.iter().filter(|t| !t.membership_ok).count(),
        conjecture_violations_total: done.iter().map(|t| t.conjecture_violations).sum(),
        conjecture_trials_with_violations: done
            .iter()
            .filter(|t| t.conjecture_violations > 0)
            .count(),
        c1_hit_rate: trials.iter().filter(|t| t.cert_c1).count() as f64 / total,
        c2_hit_rate: trials.iter().filter(|t| t.cert_c2).count() as f64 / total,
        soundness_violations: trials.iter().filter(|t| !t.cert_sound).count(),
    };
    let mut findings = Vec::new();
    if aggregate.conjecture_violations_total > 0 {
        findings.push(format!(
            "{} in {} of {} trials",
            conjecture_finding(aggregate.conjecture_violations_total),
            aggregate.conjecture_trials_with_violations,
            aggregate.completed
        ));
    }
    if aggregate.oracle_failures > 0 {
        findings.push(format!(
            "{} trials skipped after oracle failure",
            aggregate.oracle_failures
        ));
    }
    let passed = aggregate.chain_failures == 0
        && aggregate.membership_failures == 0
        && aggregate.soundness_violations == 0;
    Ok(BenchSummary {
        config: *cfg,
        grid: grid_size,
        trials,
        aggregate,
        findings,
        passed,
    })
}

pub fn bench(args: &BenchArgs) -> Result<Outcome, CliError> {
    let cfg = ensemble_config(&args.ensemble)?;
    if args.grid < 2 {
        return Err(CliError::usage("--grid must be at least 2"));
    }
    let summary = run_bench(&cfg, args.grid)?;
    let code = if summary.passed {
        ExitCode::Success
    } else {
        ExitCode::CheckFailed
    };
    Ok(Outcome {
        json: serde_json::to_value(&summary).expect("summary serializes"),
        code,
    })
}

pub fn generate(args: &GenArgs) -> Result<Outcome, CliError> {
    let cfg = EnsembleConfig::new(args.ensemble, args.n, args.trial + 1, args.seed)?;
    let a = cfg.trial_matrix(args.trial)?;
    Ok(Outcome {
        json: serde_json::from_str(&serialize_matrix(&a)).expect("serializer emits JSON"),
        code: ExitCode::Success,
    })
}
