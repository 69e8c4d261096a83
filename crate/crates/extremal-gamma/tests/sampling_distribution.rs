//! Distributional exactness of the samplers: the boosted small-shape
//! gamma sampler against an inverse-CDF oracle, the small-shape power law
//! against Uniform(0,1), row maxima against Gumbel, the Dirichlet maximum
//! against the H-law moments, and exchangeability of the argmax.

mod common;

use common::two_sample_ks;
use extremal_gamma::family::ShapeFamily;
use extremal_gamma::limits::{moment_h, LimitLaw};
use extremal_gamma::norming::gamma_norming;
use extremal_gamma::sampling::{
    sample_dirichlet_max, sample_gamma_log, sample_row_max_log, RngStream,
};
use extremal_gamma::special::{log_gamma, log_reg_gamma_p_ln};
use extremal_gamma::verify::ks_statistic;
use rand::Rng;

// Invert P(a, e^{ln_x}) = u by bisection in the log domain. The log scale
// is the only usable one: for a = 0.01 most quantiles underflow f64.
fn invert_log_quantile(a: f64, ln_u: f64, lo_hint: f64) -> f64 {
    let p = |ln_x: f64| log_reg_gamma_p_ln(a, ln_x).unwrap();
    let mut lo = lo_hint;
    while p(lo) >= ln_u {
        lo -= 8.0;
    }
    let mut step = 1.0;
    let mut hi = lo + step;
    while p(hi) < ln_u {
        lo = hi;
        step *= 2.0;
        hi = lo + step;
    }
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if p(mid) < ln_u {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

// Quantile table at u = j/2^16 for linear interpolation; bisection-built.
fn build_log_quantile_table(a: f64) -> Vec<f64> {
    let m = 1u32 << 16;
    let mut table = Vec::with_capacity(m as usize - 1);
    let mut hint = ((1.0 / m as f64).ln() + log_gamma(a + 1.0).unwrap()) / a - 8.0;
    for j in 1..m {
        let ln_u = (j as f64 / m as f64).ln();
        let root = invert_log_quantile(a, ln_u, hint);
        table.push(root);
        hint = root;
    }
    table
}

fn oracle_log_draw(a: f64, table: &[f64], u: f64) -> f64 {
    let m = (table.len() + 1) as f64;
    let pos = u * m;
    let idx = pos.floor() as usize;
    if idx == 0 || idx >= table.len() {
        // outside the table: exact bisection (a handful of draws per trial)
        let hint = table[if idx == 0 { 0 } else { table.len() - 1 }] - 8.0;
        return invert_log_quantile(a, u.max(1e-300).ln(), hint);
    }
    let frac = pos - idx as f64;
    table[idx - 1] + frac * (table[idx] - table[idx - 1])
}

// Boosted sampler vs the inverse-CDF oracle: 100 repeated two-sample KS
// trials at 1e5 + 1e5 draws; the 1% critical value 1.628*sqrt(2/1e5) may
// be exceeded in fewer than 5 trials.
fn boosting_trials(a: f64) {
    let table = build_log_quantile_table(a);
    let draws = 100_000usize;
    let critical = 1.6276 * (2.0 / draws as f64).sqrt();
    let mut exceedances = 0u32;
    for trial in 0..100u64 {
        let mut boosted = Vec::with_capacity(draws);
        let mut rng = RngStream::new(8_800, trial).rng();
        for _ in 0..draws {
            boosted.push(sample_gamma_log(a, &mut rng).unwrap().log_value);
        }
        let mut oracle = Vec::with_capacity(draws);
        let mut rng = RngStream::new(9_900, trial).rng();
        for _ in 0..draws {
            oracle.push(oracle_log_draw(a, &table, rng.random::<f64>()));
        }
        if two_sample_ks(&boosted, &oracle) > critical {
            exceedances += 1;
        }
    }
    assert!(
        exceedances < 5,
        "a={a}: {exceedances} of 100 trials exceeded the 1% critical value"
    );
}

#[test]
fn boosting_matches_inverse_cdf_oracle_half() {
    boosting_trials(0.5);
}

#[test]
fn boosting_matches_inverse_cdf_oracle_tenth() {
    boosting_trials(0.1);
}

#[test]
fn boosting_matches_inverse_cdf_oracle_hundredth() {
    boosting_trials(0.01);
}

#[test]
fn small_shape_power_is_nearly_uniform() {
    // V^delta -> U for delta -> 0: at delta = 1e-3 the KS distance of
    // exp(delta * log V) to Uniform(0,1) is already < 0.02
    let delta = 1e-3;
    let mut rng = RngStream::new(123, 0).rng();
    let mut samples: Vec<f64> = (0..100_000)
        .map(|_| (delta * sample_gamma_log(delta, &mut rng).unwrap().log_value).exp())
        .collect();
    samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let ks = ks_statistic(&samples, &LimitLaw::Uniform01).unwrap();
    assert!(ks < 0.02, "KS {ks}");
}

#[test]
fn unit_shape_row_max_matches_gumbel() {
    // alpha = 1, n = 1e4: M_n - log n is Gumbel up to O(1/n) corrections
    let n = 10_000u64;
    let fam = ShapeFamily::new(1.0, 0.0, 0.0).unwrap();
    let nc = gamma_norming(n, &fam).unwrap();
    let mut samples: Vec<f64> = (0..10_000u64)
        .map(|r| {
            let mut rng = RngStream::new(404, r).rng();
            sample_row_max_log(n, 1.0, &mut rng)
                .unwrap()
                .log_value
                .exp()
                - nc.d_n
        })
        .collect();
    samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let ks = ks_statistic(&samples, &LimitLaw::Gumbel).unwrap();
    assert!(ks < 0.05, "KS {ks}");
}

#[test]
fn dirichlet_mean_matches_h_law_moment() {
    // n alpha_n = 2, beta_n = 1: E[M̃] approaches the H(2,1) first moment
    let n = 500u64;
    let r = 20_000u64;
    let want = moment_h(2.0, 1.0, 1).unwrap();
    let mut sum = 0.0;
    let mut sq = 0.0;
    for rep in 0..r {
        let mut rng = RngStream::new(606, rep).rng();
        let s = sample_dirichlet_max(n, 2.0 / n as f64, 1.0, &mut rng).unwrap();
        let v = s.log_max.exp();
        sum += v;
        sq += v * v;
    }
    let mean = sum / r as f64;
    let sd = (sq / r as f64 - mean * mean).sqrt();
    let se = sd / (r as f64).sqrt();
    assert!(
        (mean - want).abs() < 4.0 * se,
        "mean {mean} vs H moment {want} (se {se})"
    );
}

#[test]
fn argmax_is_exchangeable() {
    // the index attaining the row max is uniform over 1..n: chi-square on
    // n = 10 cells over 1e5 draws, 1% critical value 21.666
    let n = 10usize;
    let draws = 100_000u32;
    let mut counts = [0u32; 10];
    let mut rng = RngStream::new(505, 0).rng();
    for _ in 0..draws {
        let mut best = f64::NEG_INFINITY;
        let mut arg = 0usize;
        for i in 0..n {
            let v = sample_gamma_log(0.7, &mut rng).unwrap().log_value;
            if v > best {
                best = v;
                arg = i;
            }
        }
        counts[arg] += 1;
    }
    let expected = draws as f64 / n as f64;
    let chi2: f64 = counts
        .iter()
        .map(|&c| (c as f64 - expected).powi(2) / expected)
        .sum();
    assert!(chi2 < 21.666, "chi-square {chi2}, counts {counts:?}");
}
