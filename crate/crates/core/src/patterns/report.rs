//! Bundled pattern report over a generated hypergraph, optionally
//! scored against a reference.
//!
//! The report always carries all eight patterns in order. A pattern a
//! given input cannot support (no timestamps, too few hyperedges) is
//! kept as an entry with a skip reason instead of being dropped, so
//! consumers can render a complete table. When a reference hypergraph
//! is supplied, count distributions are compared by fit-gamma on their
//! fitted slopes, the spectrum by fit-gamma on log-log rank decay, and
//! the temporal patterns by absolute differences.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use super::fit::{fit_gamma_from_slopes, fit_power_law, ols, PowerLawFit};
use super::{
    degree_distribution, density_of_interactions_series, group_degree_distribution,
    hyperedge_size_distribution, intersection_size_distribution,
    persistence_interevent_distribution, relative_checkpoints, singular_value_spectrum,
    temporal_locality, DistributionHistogram, DoiSeries, GapBasis, TemporalLocality,
};
use crate::hypergraph::TemporalHypergraph;

/// Knobs for the measured patterns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportConfig {
    /// Sliding window length for temporal locality.
    pub window: usize,
    /// Group cardinality for the group degree distribution.
    pub group_size: usize,
    /// Singular values to extract; None picks min(n, m, 64).
    pub spectrum_k: Option<usize>,
    /// Number of evenly spaced growth checkpoints for interaction
    /// density.
    pub doi_checkpoints: usize,
}

impl Default for ReportConfig {
    fn default() -> Self {
        Self {
            window: 10,
            group_size: 2,
            spectrum_k: None,
            doi_checkpoints: 10,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PatternId {
    Degree,
    EdgeSize,
    Intersection,
    Spectrum,
    GroupDegree,
    TemporalLocality,
    InterEvent,
    InteractionDensity,
}

impl PatternId {
    pub const ALL: [PatternId; 8] = [
        PatternId::Degree,
        PatternId::EdgeSize,
        PatternId::Intersection,
        PatternId::Spectrum,
        PatternId::GroupDegree,
        PatternId::TemporalLocality,
        PatternId::InterEvent,
        PatternId::InteractionDensity,
    ];

    pub fn code(self) -> &'static str {
        match self {
            PatternId::Degree => "p1",
            PatternId::EdgeSize => "p2",
            PatternId::Intersection => "p3",
            PatternId::Spectrum => "p4",
            PatternId::GroupDegree => "p5",
            PatternId::TemporalLocality => "p6",
            PatternId::InterEvent => "p7",
            PatternId::InteractionDensity => "p8",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            PatternId::Degree => "node degree distribution",
            PatternId::EdgeSize => "hyperedge size distribution",
            PatternId::Intersection => "hyperedge intersection sizes",
            PatternId::Spectrum => "incidence singular value spectrum",
            PatternId::GroupDegree => "group degree distribution",
            PatternId::TemporalLocality => "temporal locality",
            PatternId::InterEvent => "inter-event gap distribution",
            PatternId::InteractionDensity => "density of interactions",
        }
    }

    pub fn file_stem(self) -> &'static str {
        match self {
            PatternId::Degree => "p1_degree",
            PatternId::EdgeSize => "p2_edge_size",
            PatternId::Intersection => "p3_intersection",
            PatternId::Spectrum => "p4_spectrum",
            PatternId::GroupDegree => "p5_group_degree",
            PatternId::TemporalLocality => "p6_locality",
            PatternId::InterEvent => "p7_interevent",
            PatternId::InteractionDensity => "p8_doi",
        }
    }
}

/// The measured shape of one pattern on the generated hypergraph.
#[derive(Debug, Clone, PartialEq)]
pub enum PatternStat {
    Histogram(DistributionHistogram),
    Spectrum(Vec<f64>),
    Locality(TemporalLocality),
    Series(DoiSeries),
}

/// Agreement score between the generated pattern and the reference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PatternComparison {
    /// 1 - |slope_real - slope_gen| / |slope_real| on fitted log-log
    /// slopes; 1 is a perfect match.
    FitGamma {
        slope_real: f64,
        slope_gen: f64,
        gamma: f64,
    },
    /// Plain absolute difference of scalar summaries; 0 is a perfect
    /// match.
    MeanAbsDifference { value: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct PatternEntry {
    pub id: PatternId,
    /// None exactly when the pattern was skipped.
    pub stat: Option<PatternStat>,
    pub fit: Option<PowerLawFit>,
    pub skip_reason: Option<String>,
    pub comparison: Option<PatternComparison>,
    /// Extra key=value facts surfaced in the summary.
    pub notes: Vec<(String, String)>,
}

/// All eight pattern entries in order, plus the mean fit-gamma over the
/// patterns where both sides supported a slope fit.
#[derive(Debug, Clone, PartialEq)]
pub struct PatternReport {
    pub entries: Vec<PatternEntry>,
    pub average_gamma: Option<f64>,
}

impl PatternReport {
    pub fn entry(&self, id: PatternId) -> &PatternEntry {
        self.entries
            .iter()
            .find(|e| e.id == id)
            .expect("report always carries all eight patterns")
    }
}

/// Everything measured on one hypergraph, before comparison.
struct SideStats {
    degree_hist: DistributionHistogram,
    zero_degree_nodes: u64,
    degree_fit: Option<PowerLawFit>,
    sizes: DistributionHistogram,
    sizes_fit: Option<PowerLawFit>,
    intersections: DistributionHistogram,
    intersections_fit: Option<PowerLawFit>,
    spectrum: Result<Vec<f64>, String>,
    spectrum_slope: Option<f64>,
    group: DistributionHistogram,
    group_fit: Option<PowerLawFit>,
    locality: Result<TemporalLocality, String>,
    gaps_hist: Option<DistributionHistogram>,
    gaps_fit: Option<PowerLawFit>,
    gaps_basis: Option<GapBasis>,
    doi: Result<DoiSeries, String>,
    /// Interaction density at each of the `doi_checkpoints` relative
    /// positions, comparable across hypergraphs of different sizes.
    fraction_doi: Option<Vec<f64>>,
}

const NO_TIMESTAMPS: &str = "input carries no timestamps";

fn compute_side(h: &TemporalHypergraph, cfg: &ReportConfig) -> SideStats {
    let degree = degree_distribution(h);
    let degree_fit = fit_power_law(&degree.histogram).ok();
    let sizes = hyperedge_size_distribution(h);
    let sizes_fit = fit_power_law(&sizes).ok();
    let intersections = intersection_size_distribution(h);
    let intersections_fit = fit_power_law(&intersections).ok();
    let group = group_degree_distribution(h, cfg.group_size);
    let group_fit = fit_power_law(&group).ok();

    let k = cfg
        .spectrum_k
        .unwrap_or_else(|| h.node_count().min(h.edge_count()).min(64))
        .max(1);
    let spectrum = singular_value_spectrum(h, k).map_err(|e| e.to_string());
    let spectrum_slope = spectrum.as_ref().ok().and_then(|sigma| rank_decay_slope(sigma));

    let temporal_supported = h.has_timestamps();
    let locality = if temporal_supported {
        temporal_locality(h, cfg.window).map_err(|e| e.to_string())
    } else {
        Err(NO_TIMESTAMPS.to_string())
    };
    let (gaps_hist, gaps_fit, gaps_basis) = if temporal_supported {
        let gaps = persistence_interevent_distribution(h);
        (Some(gaps.histogram), gaps.fit, Some(gaps.basis))
    } else {
        (None, None, None)
    };
    let (doi, fraction_doi) = if !temporal_supported {
        (Err(NO_TIMESTAMPS.to_string()), None)
    } else if h.edge_count() < 2 {
        (
            Err(format!("needs at least 2 hyperedges, got {}", h.edge_count())),
            None,
        )
    } else {
        let m = h.edge_count();
        let checkpoints = relative_checkpoints(m, cfg.doi_checkpoints);
        match density_of_interactions_series(h, &checkpoints) {
            Ok(series) => {
                let fractions = (1..=cfg.doi_checkpoints)
                    .map(|i| {
                        let t = ((i as f64 / cfg.doi_checkpoints as f64) * m as f64).round()
                            as usize;
                        let t = t.clamp(2, m);
                        series
                            .points
                            .iter()
                            .find(|(pt, _)| *pt == t)
                            .map(|&(_, v)| v)
                            .expect("every clamped fraction is a checkpoint")
                    })
                    .collect();
                (Ok(series), Some(fractions))
            }
            Err(e) => (Err(e.to_string()), None),
        }
    };

    SideStats {
        degree_hist: degree.histogram,
        zero_degree_nodes: degree.zero_degree_nodes,
        degree_fit,
        sizes,
        sizes_fit,
        intersections,
        intersections_fit,
        spectrum,
        spectrum_slope,
        group,
        group_fit,
        locality,
        gaps_hist,
        gaps_fit,
        gaps_basis,
        doi,
        fraction_doi,
    }
}

/// Slope of log10(sigma) against log10(rank), over the singular values
/// above a floor scaled to the largest. None when fewer than two
/// usable values remain.
fn rank_decay_slope(sigma: &[f64]) -> Option<f64> {
    let floor = sigma.first()? * 1e-12;
    let points: Vec<(f64, f64)> = sigma
        .iter()
        .enumerate()
        .take_while(|(_, s)| **s > floor)
        .map(|(i, s)| ((i as f64 + 1.0).log10(), s.log10()))
        .collect();
    ols(&points).map(|fit| fit.slope)
}

fn slope_gamma(real: Option<&PowerLawFit>, gen: Option<&PowerLawFit>) -> Option<PatternComparison> {
    slope_gamma_raw(real.map(|f| f.slope), gen.map(|f| f.slope))
}

fn slope_gamma_raw(real: Option<f64>, gen: Option<f64>) -> Option<PatternComparison> {
    let (slope_real, slope_gen) = (real?, gen?);
    let gamma = fit_gamma_from_slopes(slope_real, slope_gen).ok()?;
    Some(PatternComparison::FitGamma {
        slope_real,
        slope_gen,
        gamma,
    })
}

/// Measures all eight patterns on `generated` and, when a reference is
/// given, scores each pattern both sides support.
pub fn pattern_report(
    reference: Option<&TemporalHypergraph>,
    generated: &TemporalHypergraph,
    cfg: &ReportConfig,
) -> PatternReport {
    let side = compute_side(generated, cfg);
    let ref_side = reference.map(|h| compute_side(h, cfg));

    let mut entries = Vec::with_capacity(8);
    for id in PatternId::ALL {
        let mut entry = PatternEntry {
            id,
            stat: None,
            fit: None,
            skip_reason: None,
            comparison: None,
            notes: Vec::new(),
        };
        match id {
            PatternId::Degree => {
                entry.stat = Some(PatternStat::Histogram(side.degree_hist.clone()));
                entry.fit = side.degree_fit;
                entry.notes.push((
                    "zero_degree_nodes".into(),
                    side.zero_degree_nodes.to_string(),
                ));
                entry.comparison = ref_side
                    .as_ref()
                    .and_then(|r| slope_gamma(r.degree_fit.as_ref(), side.degree_fit.as_ref()));
            }
            PatternId::EdgeSize => {
                entry.stat = Some(PatternStat::Histogram(side.sizes.clone()));
                entry.fit = side.sizes_fit;
                entry.comparison = ref_side
                    .as_ref()
                    .and_then(|r| slope_gamma(r.sizes_fit.as_ref(), side.sizes_fit.as_ref()));
            }
            PatternId::Intersection => {
                entry.stat = Some(PatternStat::Histogram(side.intersections.clone()));
                entry.fit = side.intersections_fit;
                entry.comparison = ref_side.as_ref().and_then(|r| {
                    slope_gamma(
                        r.intersections_fit.as_ref(),
                        side.intersections_fit.as_ref(),
                    )
                });
            }
            PatternId::Spectrum => match &side.spectrum {
                Ok(sigma) => {
                    entry.stat = Some(PatternStat::Spectrum(sigma.clone()));
                    if let Some(slope) = side.spectrum_slope {
                        entry.notes.push(("rank_slope".into(), slope.to_string()));
                    }
                    entry.comparison = ref_side.as_ref().and_then(|r| {
                        slope_gamma_raw(r.spectrum_slope, side.spectrum_slope)
                    });
                }
                Err(reason) => entry.skip_reason = Some(reason.clone()),
            },
            PatternId::GroupDegree => {
                entry.stat = Some(PatternStat::Histogram(side.group.clone()));
                entry.fit = side.group_fit;
                entry.comparison = ref_side
                    .as_ref()
                    .and_then(|r| slope_gamma(r.group_fit.as_ref(), side.group_fit.as_ref()));
            }
            PatternId::TemporalLocality => match &side.locality {
                Ok(tl) => {
                    entry.stat = Some(PatternStat::Locality(tl.clone()));
                    entry.comparison = ref_side
                        .as_ref()
                        .and_then(|r| r.locality.as_ref().ok())
                        .map(|r| PatternComparison::MeanAbsDifference {
                            value: (r.mean - tl.mean).abs(),
                        });
                }
                Err(reason) => entry.skip_reason = Some(reason.clone()),
            },
            PatternId::InterEvent => match &side.gaps_hist {
                Some(hist) => {
                    entry.stat = Some(PatternStat::Histogram(hist.clone()));
                    entry.fit = side.gaps_fit;
                    if let Some(basis) = side.gaps_basis {
                        let basis = match basis {
                            GapBasis::EdgeIndex => "edge_index",
                            GapBasis::Timestamp => "timestamp",
                        };
                        entry.notes.push(("basis".into(), basis.into()));
                    }
                    entry.comparison = ref_side
                        .as_ref()
                        .and_then(|r| slope_gamma(r.gaps_fit.as_ref(), side.gaps_fit.as_ref()));
                }
                None => entry.skip_reason = Some(NO_TIMESTAMPS.to_string()),
            },
            PatternId::InteractionDensity => match &side.doi {
                Ok(series) => {
                    entry.stat = Some(PatternStat::Series(series.clone()));
                    entry.comparison = ref_side
                        .as_ref()
                        .and_then(|r| r.fraction_doi.as_ref())
                        .zip(side.fraction_doi.as_ref())
                        .map(|(r, g)| {
                            let sum: f64 =
                                r.iter().zip(g).map(|(a, b)| (a - b).abs()).sum();
                            PatternComparison::MeanAbsDifference {
                                value: sum / r.len() as f64,
                            }
                        });
                }
                Err(reason) => entry.skip_reason = Some(reason.clone()),
            },
        }
        entries.push(entry);
    }

    let gammas: Vec<f64> = entries
        .iter()
        .filter_map(|e| match e.comparison {
            Some(PatternComparison::FitGamma { gamma, .. }) => Some(gamma),
            _ => None,
        })
        .collect();
    let average_gamma = if gammas.is_empty() {
        None
    } else {
        Some(gammas.iter().sum::<f64>() / gammas.len() as f64)
    };

    PatternReport {
        entries,
        average_gamma,
    }
}

/// Writes one CSV per measured pattern into `dir` and returns the paths.
///
/// Histograms become value,count; the spectrum rank,singular_value;
/// locality t,fraction; interaction density t,doi. Floats use the
/// shortest round-trip decimal form.
pub fn write_report_csv(report: &PatternReport, dir: &Path) -> io::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut paths = Vec::new();
    for entry in &report.entries {
        let Some(stat) = &entry.stat else { continue };
        let mut out = String::new();
        match stat {
            PatternStat::Histogram(hist) => {
                out.push_str("value,count\n");
                for &(v, c) in hist.entries() {
                    let _ = writeln!(out, "{v},{c}");
                }
            }
            PatternStat::Spectrum(sigma) => {
                out.push_str("rank,singular_value\n");
                for (i, s) in sigma.iter().enumerate() {
                    let _ = writeln!(out, "{},{}", i + 1, s);
                }
            }
            PatternStat::Locality(tl) => {
                out.push_str("t,fraction\n");
                for &(t, f) in &tl.per_edge {
                    let _ = writeln!(out, "{t},{f}");
                }
            }
            PatternStat::Series(series) => {
                out.push_str("t,doi\n");
                for &(t, v) in &series.points {
                    let _ = writeln!(out, "{t},{v}");
                }
            }
        }
        let path = dir.join(format!("{}.csv", entry.id.file_stem()));
        fs::write(&path, out)?;
        paths.push(path);
    }
    Ok(paths)
}

/// Renders the report as sorted key=value lines, one fact per line.
pub fn render_summary(report: &PatternReport) -> String {
    let mut out = String::new();
    for entry in &report.entries {
        let code = entry.id.code();
        let _ = writeln!(out, "{code}.label={}", entry.id.label());
        if let Some(reason) = &entry.skip_reason {
            let _ = writeln!(out, "{code}.skipped={reason}");
            continue;
        }
        match &entry.stat {
            Some(PatternStat::Histogram(hist)) => {
                let _ = writeln!(out, "{code}.distinct_values={}", hist.entries().len());
                let _ = writeln!(out, "{code}.total={}", hist.total());
            }
            Some(PatternStat::Spectrum(sigma)) => {
                let _ = writeln!(out, "{code}.values={}", sigma.len());
                if let Some(top) = sigma.first() {
                    let _ = writeln!(out, "{code}.sigma_max={top}");
                }
            }
            Some(PatternStat::Locality(tl)) => {
                let _ = writeln!(out, "{code}.mean={}", tl.mean);
            }
            Some(PatternStat::Series(series)) => {
                if let Some(&(t, v)) = series.points.last() {
                    let _ = writeln!(out, "{code}.final_t={t}");
                    let _ = writeln!(out, "{code}.final_doi={v}");
                }
            }
            None => {}
        }
        if let Some(fit) = &entry.fit {
            let _ = writeln!(out, "{code}.fit.slope={}", fit.slope);
            let _ = writeln!(out, "{code}.fit.intercept={}", fit.intercept);
            let _ = writeln!(out, "{code}.fit.r2={}", fit.r_squared);
            let _ = writeln!(out, "{code}.fit.bins={}", fit.num_bins_used);
        }
        for (key, value) in &entry.notes {
            let _ = writeln!(out, "{code}.{key}={value}");
        }
        match entry.comparison {
            Some(PatternComparison::FitGamma {
                slope_real,
                slope_gen,
                gamma,
            }) => {
                let _ = writeln!(out, "{code}.slope_real={slope_real}");
                let _ = writeln!(out, "{code}.slope_gen={slope_gen}");
                let _ = writeln!(out, "{code}.gamma={gamma}");
            }
            Some(PatternComparison::MeanAbsDifference { value }) => {
                let _ = writeln!(out, "{code}.distance={value}");
            }
            None => {}
        }
    }
    if let Some(avg) = report.average_gamma {
        let _ = writeln!(out, "average_gamma={avg}");
    }
    out
}

pub fn write_summary(report: &PatternReport, path: &Path) -> io::Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    fs::write(path, render_summary(report))
}
