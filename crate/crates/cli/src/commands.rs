//! The five front-door commands and the files they write.
//!
//! Every command funnels its outputs under one directory: hypergraphs
//! as `*.hgt`, tabular data under `report/`, figures under `plots/`
//! (each one a view of a sibling CSV), and a `summary.txt` of key=value
//! lines. Oracle-backed runs write byte-identical files for equal
//! invocations, so nothing here may depend on time, environment, or
//! iteration order of unordered containers.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use anyhow::anyhow;
use rayon::prelude::*;

use hyperllm_core::agents::chat::TranscriptWriter;
use hyperllm_core::engine::{
    construct, evolve, load_config, load_profiles, oracle_backend, synthesize_profiles,
    BackendKind, ConstructOutcome, EngineError, EvolutionOutcome, GenerationConfig,
};
use hyperllm_core::hypergraph::format::{load_path, save_path};
use hyperllm_core::hypergraph::TemporalHypergraph;
use hyperllm_core::microdynamics::{
    render_trace_csv, simulate, verify_zipf_mandelbrot, MicroParams, RankedPopulation,
    SizeSampler,
};
use hyperllm_core::patterns::report::{
    pattern_report, render_summary, write_report_csv, PatternComparison, PatternId,
    PatternReport, PatternStat, ReportConfig,
};
use hyperllm_core::{AgentBackend, RemoteBackend};
use hyperllm_core::agents::RemoteConfig;

use crate::plot::{emit_plot, FittedLine, PlotKind, PlotSpec};
use crate::{
    runtime, usage, CliError, CommonArgs, CompareArgs, GenerateArgs, MeasureArgs, SimulateArgs,
    SweepArgs,
};

fn file_err(verb: &str, path: &Path, e: io::Error) -> CliError {
    runtime(anyhow!("{verb} {}: {e}", path.display()))
}

fn write_file(path: &Path, content: &str) -> Result<(), CliError> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|e| file_err("creating", parent, e))?;
    }
    fs::write(path, content).map_err(|e| file_err("writing", path, e))
}

fn save_hypergraph(h: &TemporalHypergraph, path: &Path) -> Result<(), CliError> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|e| file_err("creating", parent, e))?;
    }
    save_path(h, path).map_err(|e| file_err("writing", path, e))
}

fn load_hypergraph(path: &Path) -> Result<TemporalHypergraph, CliError> {
    if !path.is_file() {
        return Err(usage(format!("input file {} not found", path.display())));
    }
    load_path(path).map_err(|e| runtime(anyhow!("reading {}: {e}", path.display())))
}

/// Configuration and parameter mistakes are the caller's; everything
/// else is the run failing.
fn engine_err(e: EngineError) -> CliError {
    match e {
        EngineError::Config(_) | EngineError::Population(_) => usage(e.to_string()),
        other => runtime(anyhow::Error::new(other)),
    }
}

pub(crate) fn resolve_config(common: &CommonArgs) -> Result<GenerationConfig, CliError> {
    let mut config = match &common.config {
        Some(path) => {
            if !path.is_file() {
                return Err(usage(format!("config file {} not found", path.display())));
            }
            load_config(path)
                .map_err(|e| usage(format!("config {}: {e}", path.display())))?
        }
        None => GenerationConfig::default(),
    };
    if let Some(seed) = common.seed {
        config.seed = seed;
    }
    if let Some(backend) = common.backend {
        config.backend = backend;
    }
    Ok(config)
}

/// Backend for a single run; remote runs log their traffic to
/// `transcript.jsonl` under the output directory.
fn build_backend(
    config: &GenerationConfig,
    common: &CommonArgs,
    out: &Path,
) -> Result<Box<dyn AgentBackend>, CliError> {
    match config.backend {
        BackendKind::Oracle => Ok(Box::new(oracle_backend(config).map_err(engine_err)?)),
        BackendKind::Remote => {
            let remote = RemoteConfig::from_env(common.base_url.clone(), common.model.clone());
            let path = out.join("transcript.jsonl");
            let writer =
                TranscriptWriter::create(&path).map_err(|e| file_err("creating", &path, e))?;
            Ok(Box::new(
                RemoteBackend::new(remote, config.seed).with_transcript(writer),
            ))
        }
    }
}

/// Like [`build_backend`] but without a transcript, for grid cells that
/// run concurrently and would otherwise race on one file.
fn cell_backend(
    config: &GenerationConfig,
    common: &CommonArgs,
) -> Result<Box<dyn AgentBackend>, CliError> {
    match config.backend {
        BackendKind::Oracle => Ok(Box::new(oracle_backend(config).map_err(engine_err)?)),
        BackendKind::Remote => {
            let remote = RemoteConfig::from_env(common.base_url.clone(), common.model.clone());
            Ok(Box::new(RemoteBackend::new(remote, config.seed)))
        }
    }
}

fn histogram_axes(id: PatternId) -> (&'static str, &'static str) {
    let x = match id {
        PatternId::Degree => "degree",
        PatternId::EdgeSize => "hyperedge size",
        PatternId::Intersection => "intersection size",
        PatternId::GroupDegree => "group degree",
        PatternId::InterEvent => "gap",
        _ => "value",
    };
    (x, "count")
}

/// One figure per measured pattern, named after its sibling CSV. Count
/// distributions and the spectrum go on log-log axes; the temporal
/// series stay linear. Patterns whose data has no positive support are
/// skipped rather than forced onto log axes.
fn emit_report_plots(report: &PatternReport, dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let mut written = Vec::new();
    for entry in &report.entries {
        let Some(stat) = &entry.stat else { continue };
        let spec = match stat {
            PatternStat::Histogram(hist) => {
                let points: Vec<(f64, f64)> = hist
                    .entries()
                    .iter()
                    .filter(|&&(v, c)| v > 0 && c > 0)
                    .map(|&(v, c)| (v as f64, c as f64))
                    .collect();
                if points.is_empty() {
                    continue;
                }
                let (x_label, y_label) = histogram_axes(entry.id);
                PlotSpec {
                    kind: PlotKind::LogLogScatter,
                    title: entry.id.label().to_string(),
                    x_label: x_label.to_string(),
                    y_label: y_label.to_string(),
                    points,
                    fitted: None,
                }
            }
            PatternStat::Spectrum(sigma) => {
                let points: Vec<(f64, f64)> = sigma
                    .iter()
                    .enumerate()
                    .filter(|(_, s)| **s > 0.0)
                    .map(|(i, s)| ((i + 1) as f64, *s))
                    .collect();
                if points.is_empty() {
                    continue;
                }
                PlotSpec {
                    kind: PlotKind::LogLogScatter,
                    title: entry.id.label().to_string(),
                    x_label: "rank".to_string(),
                    y_label: "singular value".to_string(),
                    points,
                    fitted: None,
                }
            }
            PatternStat::Locality(tl) => PlotSpec {
                kind: PlotKind::LineSeries,
                title: entry.id.label().to_string(),
                x_label: "t".to_string(),
                y_label: "window overlap fraction".to_string(),
                points: tl.per_edge.iter().map(|&(t, f)| (t as f64, f)).collect(),
                fitted: None,
            },
            PatternStat::Series(series) => PlotSpec {
                kind: PlotKind::LineSeries,
                title: entry.id.label().to_string(),
                x_label: "t".to_string(),
                y_label: "density of interactions".to_string(),
                points: series.points.iter().map(|&(t, v)| (t as f64, v)).collect(),
                fitted: None,
            },
        };
        let path = dir.join(format!("{}.svg", entry.id.file_stem()));
        emit_plot(&spec, &path).map_err(|e| runtime(anyhow!("plot {}: {e}", path.display())))?;
        written.push(path);
    }
    Ok(written)
}

pub(crate) fn generate(args: &GenerateArgs) -> Result<(), CliError> {
    let mut config = resolve_config(&args.common)?;
    let out = &args.common.output;
    fs::create_dir_all(out).map_err(|e| file_err("creating", out, e))?;

    let profiles = match &args.input {
        Some(path) => {
            if !path.is_file() {
                return Err(usage(format!("profiles file {} not found", path.display())));
            }
            let profiles = load_profiles(path)
                .map_err(|e| runtime(anyhow!("reading {}: {e}", path.display())))?;
            config.num_nodes = profiles.len();
            profiles
        }
        None => synthesize_profiles(config.num_nodes, &config.domain_label, config.seed),
    };

    let mut backend = build_backend(&config, &args.common, out)?;
    let outcome = construct(&profiles, &config, backend.as_mut()).map_err(engine_err)?;
    if let Some(e) = &outcome.error {
        return Err(runtime(anyhow!(
            "construction stopped after {} of {} attempts: {e}",
            outcome.attempts,
            config.target_edges
        )));
    }
    let evo = evolve(
        outcome.hypergraph.clone(),
        &profiles,
        &config,
        backend.as_mut(),
    )
    .map_err(engine_err)?;
    drop(backend);

    save_hypergraph(&evo.state.hypergraph, &out.join("generated.hgt"))?;
    let report_dir = out.join("report");
    write_report_csv(&evo.report, &report_dir)
        .map_err(|e| file_err("writing", &report_dir, e))?;
    write_file(&report_dir.join("counters.csv"), &counters_csv(&outcome, &evo))?;
    emit_report_plots(&evo.report, &out.join("plots"))?;
    write_file(
        &out.join("summary.txt"),
        &generate_summary(&config, &outcome, &evo),
    )?;
    Ok(())
}

fn counters_csv(outcome: &ConstructOutcome, evo: &EvolutionOutcome) -> String {
    let mut out = String::from("counter,value\n");
    let rows = [
        ("construct.attempts", outcome.attempts as u64),
        ("construct.accepted", outcome.accepted),
        ("construct.rejected", outcome.rejected),
        ("evolution.steps", evo.state.step as u64),
        ("evolution.accepted", evo.state.accepted),
        ("evolution.rejected", evo.state.rejected),
        ("evolution.removed", evo.state.removed),
        ("final.nodes", evo.state.hypergraph.node_count() as u64),
        ("final.edges", evo.state.hypergraph.edge_count() as u64),
    ];
    for (key, value) in rows {
        let _ = writeln!(out, "{key},{value}");
    }
    out
}

fn generate_summary(
    config: &GenerationConfig,
    outcome: &ConstructOutcome,
    evo: &EvolutionOutcome,
) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "command=generate");
    let _ = writeln!(out, "backend={}", config.backend);
    let _ = writeln!(out, "seed={}", config.seed);
    let _ = writeln!(out, "domain={}", config.domain_label);
    let _ = writeln!(out, "construct.attempts={}", outcome.attempts);
    let _ = writeln!(out, "construct.accepted={}", outcome.accepted);
    let _ = writeln!(out, "construct.rejected={}", outcome.rejected);
    let _ = writeln!(out, "evolution.steps={}", evo.state.step);
    let _ = writeln!(out, "evolution.accepted={}", evo.state.accepted);
    let _ = writeln!(out, "evolution.rejected={}", evo.state.rejected);
    let _ = writeln!(out, "evolution.removed={}", evo.state.removed);
    let _ = writeln!(out, "final.nodes={}", evo.state.hypergraph.node_count());
    let _ = writeln!(out, "final.edges={}", evo.state.hypergraph.edge_count());
    out.push_str(&render_summary(&evo.report));
    out
}

pub(crate) fn simulate_cmd(args: &SimulateArgs) -> Result<(), CliError> {
    let config = resolve_config(&args.common)?;
    let nodes = args.nodes.unwrap_or(config.num_nodes);
    let edges = args.edges.unwrap_or(config.target_edges);
    let alpha = args.alpha.unwrap_or(config.alpha);
    let gamma = args.gamma.unwrap_or(config.exponent_gamma);
    let size = args.size.unwrap_or(config.min_size);
    let q_threshold = args.q_threshold.unwrap_or(config.q_threshold);
    let seed = config.seed;

    let pop = RankedPopulation::identity(nodes).map_err(|e| usage(e.to_string()))?;
    let params = MicroParams::new(
        alpha,
        gamma,
        1.0,
        q_threshold,
        1.0,
        SizeSampler::Fixed(size),
    )
    .map_err(|e| usage(e.to_string()))?;
    let trace =
        simulate(&pop, &params, edges, seed).map_err(|e| runtime(anyhow::Error::new(e)))?;

    let out = &args.common.output;
    fs::create_dir_all(out).map_err(|e| file_err("creating", out, e))?;
    save_hypergraph(&trace.hypergraph, &out.join("simulated.hgt"))?;
    write_file(&out.join("trace.csv"), &render_trace_csv(&trace))?;

    let mut selections = String::from("node,rank_plus_alpha,selections\n");
    let mut points = Vec::new();
    for i in 0..pop.len() {
        let x = pop.rank(i) as f64 + alpha;
        let count = trace.selection_counts[i];
        let _ = writeln!(selections, "{i},{x},{count}");
        if count > 0 {
            points.push((x, count as f64));
        }
    }
    write_file(&out.join("report").join("selections.csv"), &selections)?;

    let verification = verify_zipf_mandelbrot(&trace, &params);
    let fitted = verification
        .as_ref()
        .ok()
        .and_then(|v| v.fit.as_ref())
        .map(|fit| FittedLine {
            slope: fit.slope,
            intercept: fit.intercept,
        });
    if !points.is_empty() {
        let spec = PlotSpec {
            kind: PlotKind::LogLogScatter,
            title: "selection counts by rank".to_string(),
            x_label: "rank + alpha".to_string(),
            y_label: "selections".to_string(),
            points,
            fitted,
        };
        let path = out.join("plots").join("selections.svg");
        emit_plot(&spec, &path).map_err(|e| runtime(anyhow!("plot {}: {e}", path.display())))?;
    }

    let mut summary = String::new();
    let _ = writeln!(summary, "command=simulate");
    let _ = writeln!(summary, "nodes={nodes}");
    let _ = writeln!(summary, "edges={edges}");
    let _ = writeln!(summary, "alpha={alpha}");
    let _ = writeln!(summary, "exponent_gamma={gamma}");
    let _ = writeln!(summary, "size={size}");
    let _ = writeln!(summary, "q_threshold={q_threshold}");
    let _ = writeln!(summary, "seed={seed}");
    let _ = writeln!(summary, "eligible={}", trace.eligible_set.len());
    let _ = writeln!(summary, "total_selections={}", trace.total_selections());
    let _ = writeln!(summary, "expected_slope={}", -gamma);
    match &verification {
        Ok(v) => {
            match &v.fit {
                Some(fit) => {
                    let _ = writeln!(summary, "fit.slope={}", fit.slope);
                    let _ = writeln!(summary, "fit.intercept={}", fit.intercept);
                    let _ = writeln!(summary, "fit.r2={}", fit.r_squared);
                    let _ = writeln!(summary, "fit.nodes={}", fit.num_bins_used);
                }
                None => {
                    let _ = writeln!(summary, "fit.skipped=too few regressable nodes");
                }
            }
            let _ = writeln!(
                summary,
                "max_relative_deviation={}",
                v.max_relative_deviation
            );
        }
        Err(e) => {
            let _ = writeln!(summary, "verification.skipped={e}");
        }
    }
    write_file(&out.join("summary.txt"), &summary)?;
    Ok(())
}

pub(crate) fn measure(args: &MeasureArgs) -> Result<(), CliError> {
    let h = load_hypergraph(&args.input)?;
    let report = pattern_report(None, &h, &ReportConfig::default());

    let out = &args.common.output;
    let report_dir = out.join("report");
    write_report_csv(&report, &report_dir).map_err(|e| file_err("writing", &report_dir, e))?;
    emit_report_plots(&report, &out.join("plots"))?;

    let mut summary = String::new();
    let _ = writeln!(summary, "command=measure");
    let _ = writeln!(summary, "input={}", file_name(&args.input));
    let _ = writeln!(summary, "nodes={}", h.node_count());
    let _ = writeln!(summary, "edges={}", h.edge_count());
    summary.push_str(&render_summary(&report));
    write_file(&out.join("summary.txt"), &summary)?;
    Ok(())
}

fn file_name(path: &Path) -> String {
    path.file_name()
        .map_or_else(|| path.display().to_string(), |n| n.to_string_lossy().into_owned())
}

pub(crate) fn compare(args: &CompareArgs) -> Result<(), CliError> {
    let reference = load_hypergraph(&args.reference)?;
    let generated = load_hypergraph(&args.generated)?;
    let report = pattern_report(Some(&reference), &generated, &ReportConfig::default());

    let mut table = String::from("pattern,comparison,slope_real,slope_gen,value\n");
    for entry in &report.entries {
        let code = entry.id.code();
        match entry.comparison {
            Some(PatternComparison::FitGamma {
                slope_real,
                slope_gen,
                gamma,
            }) => {
                let _ = writeln!(table, "{code},fit_gamma,{slope_real},{slope_gen},{gamma}");
            }
            Some(PatternComparison::MeanAbsDifference { value }) => {
                let _ = writeln!(table, "{code},abs_difference,,,{value}");
            }
            None => {
                let _ = writeln!(table, "{code},unavailable,,,");
            }
        }
    }
    if let Some(avg) = report.average_gamma {
        let _ = writeln!(table, "average,fit_gamma,,,{avg}");
    }

    let out = &args.common.output;
    write_file(&out.join("report").join("compare.csv"), &table)?;

    let mut summary = String::new();
    let _ = writeln!(summary, "command=compare");
    let _ = writeln!(summary, "reference={}", file_name(&args.reference));
    let _ = writeln!(summary, "generated={}", file_name(&args.generated));
    let _ = writeln!(summary, "reference.nodes={}", reference.node_count());
    let _ = writeln!(summary, "reference.edges={}", reference.edge_count());
    let _ = writeln!(summary, "generated.nodes={}", generated.node_count());
    let _ = writeln!(summary, "generated.edges={}", generated.edge_count());
    summary.push_str(&render_summary(&report));
    write_file(&out.join("summary.txt"), &summary)?;
    Ok(())
}

/// Size distribution for the reference stream, mirroring the size draw
/// the generation pipeline uses.
fn reference_sampler(config: &GenerationConfig) -> SizeSampler {
    if let Some(spec) = &config.size_spec {
        return spec.clone();
    }
    if config.min_size == config.max_size {
        return SizeSampler::Fixed(config.min_size);
    }
    SizeSampler::Discrete(
        (config.min_size..=config.max_size)
            .map(|k| (k, (k as f64).powf(-config.size_exponent)))
            .collect(),
    )
}

pub(crate) fn sweep(args: &SweepArgs) -> Result<(), CliError> {
    if args.p_values.is_empty() || args.k_values.is_empty() {
        return Err(usage("sweep needs at least one value per axis".to_string()));
    }
    for &p in &args.p_values {
        if !(0.0..=1.0).contains(&p) {
            return Err(usage(format!("attach probability {p} lies outside [0, 1]")));
        }
    }
    let config = resolve_config(&args.common)?;
    config.validate().map_err(engine_err)?;

    let out = &args.common.output;
    fs::create_dir_all(out).map_err(|e| file_err("creating", out, e))?;

    let pop = RankedPopulation::identity(config.num_nodes).map_err(|e| usage(e.to_string()))?;
    let params = MicroParams::new(
        config.alpha,
        config.exponent_gamma,
        1.0,
        config.q_threshold,
        1.0,
        reference_sampler(&config),
    )
    .map_err(|e| usage(e.to_string()))?;
    let reference = simulate(&pop, &params, config.target_edges, config.seed)
        .map_err(|e| runtime(anyhow::Error::new(e)))?;
    save_hypergraph(&reference.hypergraph, &out.join("reference.hgt"))?;

    let grid: Vec<(usize, f64, usize)> = args
        .p_values
        .iter()
        .flat_map(|&p| args.k_values.iter().map(move |&k| (p, k)))
        .enumerate()
        .map(|(idx, (p, k))| (idx, p, k))
        .collect();

    let mut rows: Vec<(usize, f64, usize, u64, f64)> = grid
        .par_iter()
        .map(|&(idx, p, k)| sweep_cell(idx, p, k, &config, args, &reference.hypergraph))
        .collect::<Result<_, CliError>>()?;
    rows.sort_unstable_by_key(|&(idx, ..)| idx);

    let mut table = String::from("attach_probability,suggestion_count,seed,average_gamma\n");
    for &(_, p, k, seed, gamma) in &rows {
        let _ = writeln!(table, "{p},{k},{seed},{gamma}");
    }
    write_file(&out.join("report").join("sweep.csv"), &table)?;

    let best = rows
        .iter()
        .max_by(|a, b| a.4.total_cmp(&b.4))
        .expect("grid holds at least one cell");
    let joined = |it: &mut dyn Iterator<Item = String>| it.collect::<Vec<_>>().join(",");
    let mut summary = String::new();
    let _ = writeln!(summary, "command=sweep");
    let _ = writeln!(summary, "cells={}", rows.len());
    let _ = writeln!(
        summary,
        "p_values={}",
        joined(&mut args.p_values.iter().map(|p| p.to_string()))
    );
    let _ = writeln!(
        summary,
        "k_values={}",
        joined(&mut args.k_values.iter().map(|k| k.to_string()))
    );
    let _ = writeln!(summary, "reference.nodes={}", reference.hypergraph.node_count());
    let _ = writeln!(summary, "reference.edges={}", reference.hypergraph.edge_count());
    let _ = writeln!(summary, "best.attach_probability={}", best.1);
    let _ = writeln!(summary, "best.suggestion_count={}", best.2);
    let _ = writeln!(summary, "best.average_gamma={}", best.4);
    write_file(&out.join("summary.txt"), &summary)?;
    Ok(())
}

/// One grid cell: its own config, seed, and backend; scored against the
/// shared reference.
fn sweep_cell(
    idx: usize,
    p: f64,
    k: usize,
    base: &GenerationConfig,
    args: &SweepArgs,
    reference: &TemporalHypergraph,
) -> Result<(usize, f64, usize, u64, f64), CliError> {
    let mut config = base.clone();
    config.attach_probability = p;
    config.optimizer_suggestion_count = k;
    config.seed = base.seed.wrapping_add(idx as u64);

    let cell = |msg: String| runtime(anyhow!("cell p={p} k={k}: {msg}"));
    let profiles = synthesize_profiles(config.num_nodes, &config.domain_label, config.seed);
    let mut backend = cell_backend(&config, &args.common)?;
    let outcome = construct(&profiles, &config, backend.as_mut()).map_err(engine_err)?;
    if let Some(e) = &outcome.error {
        return Err(cell(format!("construction stopped: {e}")));
    }
    let evo = evolve(outcome.hypergraph, &profiles, &config, backend.as_mut())
        .map_err(engine_err)?;
    let report = pattern_report(Some(reference), &evo.state.hypergraph, &ReportConfig::default());
    let gamma = report
        .average_gamma
        .ok_or_else(|| cell("no pattern supported a slope comparison".to_string()))?;
    Ok((idx, p, k, config.seed, gamma))
}
