//! Two-track verification of the convergence statements: exact finite-n
//! CDFs through the incomplete gamma function for the gamma model, and
//! Monte Carlo goodness-of-fit for the Dirichlet model, where the max of
//! dependent coordinates has no tractable exact CDF.
//!
//! The tolerances here are artifact choices, not published numbers: the
//! theory is asymptotic and carries no finite-n rates, so the suite
//! checks monotone improvement over an n-grid (with slack for grid
//! effects) plus a final threshold consistent with sampling error.

use serde::{Deserialize, Serialize};

use crate::family::ShapeFamily;
use crate::limits::{default_grid, LimitLaw};
use crate::norming::{dirichlet_norming, gamma_norming, Transform};
use crate::sampling::{simulate_batch, BatchSpec, Model};
use crate::special::{log_gamma, log_reg_gamma_p, log_reg_gamma_p_ln, reg_gamma_q_eval};
use crate::{Error, Result};

/// The tail quantities at one (n, α_n, x_n): A_n = n·P(Y > x_n), the
/// saddle term B_n = n e^{-x_n} x_n^{α_n-1}/Γ(α_n), and the bound A_n/x_n
/// on the integration-by-parts remainder C_n.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TailQuantities {
    pub x_n: f64,
    pub a_n: f64,
    pub b_n: f64,
    pub c_n_bound: f64,
    /// log A_n and log B_n; authoritative when the linear fields overflow.
    pub log_a_n: f64,
    pub log_b_n: f64,
    /// Set when exponentiation overflowed and the log fields must be used.
    pub overflowed: bool,
}

/// A_n, B_n, and the C_n bound, assembled in log space then exponentiated.
pub fn tail_quantities(n: u64, alpha_n: f64, x_n: f64) -> Result<TailQuantities> {
    if !(x_n > 0.0) || !x_n.is_finite() {
        return Err(Error::Domain(format!(
            "tail_quantities requires x_n > 0, got {x_n}"
        )));
    }
    if n < 1 {
        return Err(Error::Usage("tail_quantities requires n >= 1".into()));
    }
    let log_n = (n as f64).ln();
    let q = reg_gamma_q_eval(alpha_n, x_n)?;
    let log_a_n = log_n + q.log_value;
    let log_b_n = log_n - log_gamma(alpha_n)? - x_n + (alpha_n - 1.0) * x_n.ln();
    let a_n = log_a_n.exp();
    let b_n = log_b_n.exp();
    let overflowed = a_n.is_infinite() || b_n.is_infinite();
    Ok(TailQuantities {
        x_n,
        a_n,
        b_n,
        c_n_bound: a_n / x_n,
        log_a_n,
        log_b_n,
        overflowed,
    })
}

/// Exact P[M_n ≤ x] = P(α_n, x)^n, evaluated as exp(n·log P).
pub fn exact_gamma_max_cdf(n: u64, alpha_n: f64, x: f64) -> Result<f64> {
    if n < 1 {
        return Err(Error::Usage("exact_gamma_max_cdf requires n >= 1".into()));
    }
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!(
            "exact_gamma_max_cdf requires x > 0, got {x}"
        )));
    }
    Ok((n as f64 * log_reg_gamma_p(alpha_n, x)?).exp())
}

/// Exact P[M_n^{n·α_n} ≤ x0] for x0 ∈ (0, 1), entirely in the log domain:
/// the evaluation point x0^{1/(n·α_n)} is far below the linear floor when
/// n·α_n is small.
pub fn exact_gamma_max_power_cdf(n: u64, alpha_n: f64, x0: f64) -> Result<f64> {
    if n < 1 {
        return Err(Error::Usage(
            "exact_gamma_max_power_cdf requires n >= 1".into(),
        ));
    }
    if !(x0 > 0.0 && x0 < 1.0) {
        return Err(Error::Domain(format!(
            "exact_gamma_max_power_cdf requires x0 in (0,1), got {x0}"
        )));
    }
    let exponent = n as f64 * alpha_n;
    let ln_x = x0.ln() / exponent;
    Ok((n as f64 * log_reg_gamma_p_ln(alpha_n, ln_x)?).exp())
}

/// Sup over the grid of |exact finite-n CDF − limit CDF| for the
/// normalized statistic of `shape` at row n. Power regimes interpret the
/// grid inside (0, 1). Grid points that map to a nonpositive evaluation
/// point are skipped (both CDFs vanish there).
pub fn sup_diff_exact(shape: &ShapeFamily, n: u64, grid: &[f64]) -> Result<f64> {
    Ok(sup_diff_exact_detail(shape, n, grid)?.0)
}

pub(crate) fn sup_diff_exact_detail(
    shape: &ShapeFamily,
    n: u64,
    grid: &[f64],
) -> Result<(f64, usize, Vec<[f64; 3]>)> {
    if grid.is_empty() {
        return Err(Error::Usage(
            "sup_diff_exact requires a nonempty grid".into(),
        ));
    }
    let nc = gamma_norming(n, shape)?;
    let alpha_n = shape.alpha_at(n)?;
    let mut sup = 0.0f64;
    let mut skipped = 0usize;
    let mut rows = Vec::with_capacity(grid.len());
    match nc.transform {
        Transform::Linear => {
            for &x in grid {
                let x_n = nc.c_n * x + nc.d_n;
                if x_n <= 0.0 {
                    skipped += 1;
                    continue;
                }
                let exact = exact_gamma_max_cdf(n, alpha_n, x_n)?;
                let lim = nc.limit.cdf(x)?;
                sup = sup.max((exact - lim).abs());
                rows.push([x, exact, lim]);
            }
        }
        Transform::Power { .. } => {
            for &x0 in grid {
                if !(x0 > 0.0 && x0 < 1.0) {
                    skipped += 1;
                    continue;
                }
                let exact = exact_gamma_max_power_cdf(n, alpha_n, x0)?;
                let lim = nc.limit.cdf(x0)?;
                sup = sup.max((exact - lim).abs());
                rows.push([x0, exact, lim]);
            }
        }
        Transform::PowerScaled { .. } => {
            return Err(Error::Usage(
                "sup_diff_exact applies to the gamma model only".into(),
            ));
        }
    }
    if rows.is_empty() {
        return Err(Error::Usage("every grid point was skipped".into()));
    }
    Ok((sup, skipped, rows))
}

/// One-sample Kolmogorov–Smirnov statistic sup_x |ECDF(x) − F(x)| of
/// sorted samples against a law with a CDF.
///
/// Where the law has an atom (U_λ at 1), the lower comparison uses the
/// CDF's left limit; with the plain textbook formula an atom matched
/// perfectly by the sample would still report a sup near the atom mass.
pub fn ks_statistic(samples: &[f64], law: &LimitLaw) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::Usage(
            "ks_statistic requires nonempty samples".into(),
        ));
    }
    if matches!(law, LimitLaw::HLaw { .. }) {
        return Err(Error::Unsupported(
            "the H law has no CDF for a KS test; use moment_check".into(),
        ));
    }
    for w in samples.windows(2) {
        if !(w[0] <= w[1]) {
            return Err(Error::Usage(
                "ks_statistic requires samples sorted ascending".into(),
            ));
        }
    }
    let r = samples.len() as f64;
    let mut sup = 0.0f64;
    for (i, &x) in samples.iter().enumerate() {
        let f = law.cdf(x)?;
        let f_left = law.cdf_left(x)?;
        let upper = (i as f64 + 1.0) / r - f;
        let lower = f_left - i as f64 / r;
        sup = sup.max(upper).max(lower);
    }
    Ok(sup.max(0.0))
}

/// z-score of one empirical moment against its theoretical value.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct MomentZ {
    pub k: u32,
    /// (mean of X^k − theory) / (sd of X^k / √R); NaN when flagged.
    pub z: f64,
    pub sample_moment: f64,
    pub theory_moment: f64,
    pub std_error: f64,
    /// Set when the sample variance of X^k is exactly zero.
    pub zero_variance: bool,
}

/// Moment z-scores of samples in [0, 1] against a moment-determined law
/// (H or U_λ), for k = 1..k_max.
pub fn moment_check(samples: &[f64], law: &LimitLaw, k_max: u32) -> Result<Vec<MomentZ>> {
    if samples.is_empty() || k_max < 1 {
        return Err(Error::Usage(
            "moment_check requires samples and k_max >= 1".into(),
        ));
    }
    if !matches!(law, LimitLaw::HLaw { .. } | LimitLaw::ULambda { .. }) {
        return Err(Error::Unsupported(format!(
            "moment_check applies to H and U_lambda, not {law:?}"
        )));
    }
    for &s in samples {
        if !(-1e-12..=1.0 + 1e-12).contains(&s) {
            return Err(Error::Domain(format!(
                "moment_check sample {s} outside [0, 1]"
            )));
        }
    }
    let r = samples.len() as f64;
    let mut out = Vec::with_capacity(k_max as usize);
    for k in 1..=k_max {
        let theory = law.moment(k)?;
        let mean = samples.iter().map(|&s| s.powi(k as i32)).sum::<f64>() / r;
        let varsum = samples
            .iter()
            .map(|&s| {
                let d = s.powi(k as i32) - mean;
                d * d
            })
            .sum::<f64>();
        let sd = if samples.len() > 1 {
            (varsum / (r - 1.0)).sqrt()
        } else {
            0.0
        };
        let zero_variance = sd == 0.0;
        let std_error = sd / r.sqrt();
        let z = if zero_variance {
            f64::NAN
        } else {
            (mean - theory) / std_error
        };
        out.push(MomentZ {
            k,
            z,
            sample_moment: mean,
            theory_moment: theory,
            std_error,
            zero_variance,
        });
    }
    Ok(out)
}

/// Pass thresholds of a convergence suite. Defaults: exact-track final
/// sup 0.02, KS 0.05 at R = 1e4, |z| < 4, 10% slack on monotone decrease.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub sup_diff: f64,
    pub ks: f64,
    pub z_max: f64,
    pub monotone_slack: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            sup_diff: 0.02,
            ks: 0.05,
            z_max: 4.0,
            monotone_slack: 0.10,
        }
    }
}

/// What to run: the model, families, the n-grid, and either an evaluation
/// grid (exact track) or a replicate budget (Monte Carlo track).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteSpec {
    pub model: Model,
    pub shape: ShapeFamily,
    pub beta: Option<ShapeFamily>,
    pub n_grid: Vec<u64>,
    /// Evaluation grid; defaults to the limit law's grid when absent.
    pub grid: Option<Vec<f64>>,
    /// Monte Carlo replicates per n (Dirichlet track).
    pub replicates: Option<u64>,
    pub seed: Option<u64>,
    pub workers: usize,
    pub budget: u64,
    pub tolerances: Tolerances,
    /// Collect per-n (x, ecdf, limit_cdf) rows for plotting.
    pub collect_plot: bool,
    /// Moment orders checked against moment-determined laws.
    pub k_max: u32,
}

/// Per-n outcome: exactly one of the metric fields is set on success.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MetricEntry {
    pub n: u64,
    pub sup_diff: Option<f64>,
    pub ks: Option<f64>,
    pub moment_z: Option<Vec<f64>>,
    pub skipped_points: usize,
    pub error: Option<String>,
}

impl MetricEntry {
    // scalar used for the monotone and final checks; moment entries use
    // max |z_k| / z_max so "under tolerance" reads < 1
    fn metric(&self, tol: &Tolerances) -> Option<f64> {
        if let Some(s) = self.sup_diff {
            return Some(s);
        }
        if let Some(k) = self.ks {
            return Some(k);
        }
        self.moment_z.as_ref().map(|zs| {
            zs.iter()
                .fold(0.0f64, |acc, &z| acc.max(z.abs() / tol.z_max))
        })
    }
}

/// Verdict over an n-grid: per-n metrics, monotone-decrease flag, and the
/// final-tolerance flag. Pass flags are recomputable from the metrics and
/// tolerances.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub model: Model,
    pub shape: ShapeFamily,
    pub beta: Option<ShapeFamily>,
    pub n_grid: Vec<u64>,
    pub metric_per_n: Vec<MetricEntry>,
    pub monotone_pass: bool,
    pub final_pass: bool,
    pub tolerances: Tolerances,
}

impl ConvergenceReport {
    /// Recompute the pass flags from the stored metrics; used by tests to
    /// confirm the flags carry no extra state.
    pub fn recompute_passes(&self) -> (bool, bool) {
        compute_passes(&self.metric_per_n, &self.tolerances)
    }
}

fn compute_passes(entries: &[MetricEntry], tol: &Tolerances) -> (bool, bool) {
    if entries.iter().any(|e| e.error.is_some()) {
        return (false, false);
    }
    let metrics: Vec<f64> = entries.iter().filter_map(|e| e.metric(tol)).collect();
    if metrics.len() != entries.len() || metrics.is_empty() {
        return (false, false);
    }
    let monotone = metrics
        .windows(2)
        .all(|w| w[1] <= w[0] * (1.0 + tol.monotone_slack));
    let last = *metrics.last().unwrap();
    let final_pass = if entries.last().unwrap().sup_diff.is_some() {
        last < tol.sup_diff
    } else if entries.last().unwrap().ks.is_some() {
        last < tol.ks
    } else {
        last < 1.0 // moment metric stored as max|z|/z_max
    };
    (monotone, final_pass)
}

/// Plot rows for one n: (x, finite-n CDF or ECDF, limit CDF).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PlotSeries {
    pub n: u64,
    pub rows: Vec<[f64; 3]>,
}

/// Report plus any collected plot series.
#[derive(Debug, Clone)]
pub struct SuiteOutput {
    pub report: ConvergenceReport,
    pub plots: Vec<PlotSeries>,
}

/// Run the per-regime convergence checks over the n-grid. Per-n failures
/// are embedded in the report rather than aborting the suite.
pub fn convergence_suite(spec: &SuiteSpec) -> Result<SuiteOutput> {
    if spec.n_grid.is_empty() {
        return Err(Error::Usage(
            "convergence suite requires a nonempty n_grid".into(),
        ));
    }
    if spec.model == Model::Dirichlet {
        if spec.beta.is_none() {
            return Err(Error::Usage(
                "dirichlet suite requires a beta family".into(),
            ));
        }
        if spec.replicates.is_none() || spec.seed.is_none() {
            return Err(Error::Usage(
                "dirichlet suite requires replicates and seed".into(),
            ));
        }
    }
    let mut entries = Vec::with_capacity(spec.n_grid.len());
    let mut plots = Vec::new();
    for &n in &spec.n_grid {
        match run_one_n(spec, n) {
            Ok((entry, plot)) => {
                if spec.collect_plot {
                    plots.push(PlotSeries { n, rows: plot });
                }
                entries.push(entry);
            }
            Err(e) => entries.push(MetricEntry {
                n,
                sup_diff: None,
                ks: None,
                moment_z: None,
                skipped_points: 0,
                error: Some(e.to_string()),
            }),
        }
    }
    let (monotone_pass, final_pass) = compute_passes(&entries, &spec.tolerances);
    Ok(SuiteOutput {
        report: ConvergenceReport {
            model: spec.model,
            shape: spec.shape,
            beta: spec.beta,
            n_grid: spec.n_grid.clone(),
            metric_per_n: entries,
            monotone_pass,
            final_pass,
            tolerances: spec.tolerances,
        },
        plots,
    })
}

fn run_one_n(spec: &SuiteSpec, n: u64) -> Result<(MetricEntry, Vec<[f64; 3]>)> {
    match spec.model {
        Model::Gamma => {
            let nc = gamma_norming(n, &spec.shape)?;
            let grid = spec.grid.clone().unwrap_or_else(|| default_grid(&nc.limit));
            let (sup, skipped, rows) = sup_diff_exact_detail(&spec.shape, n, &grid)?;
            Ok((
                MetricEntry {
                    n,
                    sup_diff: Some(sup),
                    ks: None,
                    moment_z: None,
                    skipped_points: skipped,
                    error: None,
                },
                rows,
            ))
        }
        Model::Dirichlet => {
            let beta = spec.beta.as_ref().expect("validated");
            let nc = dirichlet_norming(n, &spec.shape, beta)?;
            let batch = BatchSpec {
                model: Model::Dirichlet,
                shape: spec.shape,
                beta: Some(*beta),
                n,
                replicates: spec.replicates.expect("validated"),
                seed: spec.seed.expect("validated"),
                workers: spec.workers,
                budget: spec.budget,
            };
            let mut samples = simulate_batch(&batch)?;
            samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
            if matches!(nc.limit, LimitLaw::HLaw { .. }) {
                let zs = moment_check(&samples, &nc.limit, spec.k_max)?;
                // a zero-variance moment passes only through an exact hit
                let z_values: Vec<f64> = zs
                    .iter()
                    .map(|m| {
                        if m.zero_variance {
                            if (m.sample_moment - m.theory_moment).abs() <= 1e-12 {
                                0.0
                            } else {
                                f64::INFINITY
                            }
                        } else {
                            m.z
                        }
                    })
                    .collect();
                let rows =
                    plot_rows_mc(&samples, &nc.limit, spec.grid.as_deref()).unwrap_or_default();
                Ok((
                    MetricEntry {
                        n,
                        sup_diff: None,
                        ks: None,
                        moment_z: Some(z_values),
                        skipped_points: 0,
                        error: None,
                    },
                    rows,
                ))
            } else {
                let ks = ks_statistic(&samples, &nc.limit)?;
                let rows =
                    plot_rows_mc(&samples, &nc.limit, spec.grid.as_deref()).unwrap_or_default();
                Ok((
                    MetricEntry {
                        n,
                        sup_diff: None,
                        ks: Some(ks),
                        moment_z: None,
                        skipped_points: 0,
                        error: None,
                    },
                    rows,
                ))
            }
        }
    }
}

// ECDF/limit pairs on the evaluation grid; None when the law has no CDF.
fn plot_rows_mc(sorted: &[f64], law: &LimitLaw, grid: Option<&[f64]>) -> Option<Vec<[f64; 3]>> {
    if matches!(law, LimitLaw::HLaw { .. }) {
        return None;
    }
    let grid: Vec<f64> = grid
        .map(|g| g.to_vec())
        .unwrap_or_else(|| default_grid(law));
    let r = sorted.len() as f64;
    let mut rows = Vec::with_capacity(grid.len());
    for &x in &grid {
        let count = sorted.partition_point(|&s| s <= x);
        let lim = law.cdf(x).ok()?;
        rows.push([x, count as f64 / r, lim]);
    }
    Some(rows)
}
