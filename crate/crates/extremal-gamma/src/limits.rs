//! The limit laws: Gumbel G, the exponential-integral law F_α, the
//! Dirichlet ratio law H(α, β), Uniform(0, 1), and the mixture U_λ.
//!
//! H has no closed-form CDF; the theory determines it by its moment
//! sequence μ_k/γ_k, so this module exposes H through moments only.
//! All λ-formulas are written in the 1/(1+λ) parameterization so that
//! λ = ∞ evaluates without special-casing the arithmetic.

use serde::{Deserialize, Serialize};

use crate::special::{exp_integral_e1, log_gamma, EULER_MASCHERONI};
use crate::{quad, Error, Result};

/// Tagged union over the limit distributions of the normalized maxima.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law")]
pub enum LimitLaw {
    /// G(x) = exp(-e^{-x}).
    #[serde(rename = "gumbel")]
    Gumbel,
    /// F_α(x) = exp(-α ∫_x^∞ e^{-u}/u du) for x > 0, else 0.
    #[serde(rename = "falpha")]
    FAlpha { alpha: f64 },
    /// Law of the Dirichlet maximum with bounded totals; moments μ_k/γ_k.
    #[serde(rename = "h")]
    HLaw { alpha: f64, beta: f64 },
    /// Uniform on (0, 1).
    #[serde(rename = "uniform01")]
    Uniform01,
    /// B_λ·U + (1 − B_λ) with P(B_λ = 1) = 1/(1+λ); λ = ∞ is the point
    /// mass at 1.
    #[serde(rename = "ulambda")]
    ULambda {
        #[serde(with = "inf_repr")]
        lambda: f64,
    },
}

/// Serialize a nonnegative extended real, writing infinity as `"inf"`.
/// serde_json cannot represent IEEE infinities as numbers.
pub mod inf_repr {
    use serde::de::Error as DeError;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
        if v.is_infinite() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(*v)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Str(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(v),
            Repr::Str(s) if s == "inf" => Ok(f64::INFINITY),
            Repr::Str(s) => Err(DeError::custom(format!(
                "expected a number or \"inf\", got {s:?}"
            ))),
        }
    }
}

impl LimitLaw {
    fn validate(&self) -> Result<()> {
        match *self {
            LimitLaw::FAlpha { alpha } if !(alpha > 0.0) => Err(Error::Domain(format!(
                "FAlpha requires alpha > 0, got {alpha}"
            ))),
            LimitLaw::HLaw { alpha, beta } if !(alpha > 0.0 && beta >= 0.0) => Err(Error::Domain(
                format!("HLaw requires alpha > 0 and beta >= 0, got ({alpha}, {beta})"),
            )),
            LimitLaw::ULambda { lambda } if lambda.is_nan() || lambda < 0.0 => Err(Error::Domain(
                format!("ULambda requires lambda in [0, inf], got {lambda}"),
            )),
            _ => Ok(()),
        }
    }

    /// CDF at x. The H law is unsupported by design: use [`moment_h`].
    pub fn cdf(&self, x: f64) -> Result<f64> {
        self.validate()?;
        match *self {
            LimitLaw::Gumbel => Ok((-(-x).exp()).exp()),
            LimitLaw::FAlpha { alpha } => {
                if x <= 0.0 {
                    Ok(0.0)
                } else {
                    Ok((-alpha * exp_integral_e1(x)?).exp())
                }
            }
            LimitLaw::HLaw { .. } => Err(Error::Unsupported(
                "the H law has no closed-form CDF; it is determined by its moments (see moment_h)"
                    .into(),
            )),
            LimitLaw::Uniform01 => Ok(x.clamp(0.0, 1.0)),
            LimitLaw::ULambda { lambda } => {
                if x < 0.0 {
                    Ok(0.0)
                } else if x >= 1.0 {
                    Ok(1.0)
                } else {
                    Ok(x / (1.0 + lambda)) // x/(1+inf) = 0: point mass at 1
                }
            }
        }
    }

    /// Left limit of the CDF at x. Differs from [`Self::cdf`] only at
    /// atoms; U_λ places mass (λ)/(1+λ) at exactly 1. Goodness-of-fit
    /// against a law with an atom must compare left limits there.
    pub fn cdf_left(&self, x: f64) -> Result<f64> {
        match *self {
            LimitLaw::ULambda { lambda } => {
                self.validate()?;
                if x <= 0.0 {
                    Ok(0.0)
                } else if x > 1.0 {
                    Ok(1.0)
                } else {
                    Ok(x / (1.0 + lambda))
                }
            }
            _ => self.cdf(x),
        }
    }

    /// Quantile at p ∈ (0, 1). Closed form for Gumbel, Uniform01, and
    /// U_λ; monotone bisection on the CDF for F_α. Unsupported for H and
    /// for the point mass U_∞.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        self.validate()?;
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::Domain(format!(
                "quantile requires p in (0,1), got {p}"
            )));
        }
        match *self {
            LimitLaw::Gumbel => Ok(-(-p.ln()).ln()),
            LimitLaw::Uniform01 => Ok(p),
            LimitLaw::ULambda { lambda } => {
                if lambda.is_infinite() {
                    return Err(Error::Unsupported(
                        "quantile of the point mass U_inf".into(),
                    ));
                }
                let v = p * (1.0 + lambda);
                Ok(if v < 1.0 { v } else { 1.0 })
            }
            LimitLaw::FAlpha { .. } => {
                let mut lo = 1e-300;
                if self.cdf(lo)? > p {
                    return Err(Error::Numerical(format!(
                        "FAlpha quantile underflows at p={p}"
                    )));
                }
                let mut hi = 1.0;
                while self.cdf(hi)? < p {
                    hi *= 2.0;
                    if hi > 1e6 {
                        return Err(Error::Numerical("FAlpha quantile bracket ran away".into()));
                    }
                }
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if mid <= lo || mid >= hi {
                        break;
                    }
                    if self.cdf(mid)? < p {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                Ok(0.5 * (lo + hi))
            }
            LimitLaw::HLaw { .. } => Err(Error::Unsupported("quantile of the H law".into())),
        }
    }

    /// k-th moment for the moment-determined laws (H, U_λ, and F_α for
    /// completeness). Unsupported otherwise.
    pub fn moment(&self, k: u32) -> Result<f64> {
        self.validate()?;
        match *self {
            LimitLaw::FAlpha { alpha } => moment_falpha(alpha, k),
            LimitLaw::HLaw { alpha, beta } => moment_h(alpha, beta, k),
            LimitLaw::ULambda { lambda } => {
                if k == 0 {
                    return Err(Error::Domain("moment requires k >= 1".into()));
                }
                Ok(moment_ulambda(lambda, k))
            }
            _ => Err(Error::Unsupported(format!(
                "moments not exposed for {self:?}"
            ))),
        }
    }
}

/// μ_k = α ∫_0^∞ x^{k-1} exp(-x − α E1(x)) dx, the k-th moment of F_α.
///
/// The interval is split at 1; on (0, 1) the substitution x = e^t turns
/// the x^{k−1+α} endpoint into a smooth exponential decay (near zero
/// E1(x) = −γ − ln x + O(x), so the integrand behaves like
/// e^{−αγ} x^{k−1+α}). Absolute quadrature error ≤ 1e-9.
pub fn moment_falpha(alpha: f64, k: u32) -> Result<f64> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::Domain(format!(
            "moment_falpha requires alpha > 0, got {alpha}"
        )));
    }
    if k == 0 {
        return Err(Error::Domain("moment_falpha requires k >= 1".into()));
    }
    let kf = k as f64;
    // x in (0, 1] as t = ln x in [t_min, 0]
    let g = |t: f64| {
        let x = t.exp();
        alpha * (kf * t - x - alpha * exp_integral_e1(x).unwrap_or(f64::INFINITY)).exp()
    };
    let t_min = (-(42.0 + alpha * EULER_MASCHERONI) / (kf + alpha)).min(-1.0);
    let inner = quad::adaptive_gk(&g, t_min, 0.0, 5e-13, 4000)?;
    // x in [1, x_max]
    let f = |x: f64| {
        alpha
            * ((kf - 1.0) * x.ln() - x - alpha * exp_integral_e1(x).unwrap_or(f64::INFINITY)).exp()
    };
    let x_max = 50.0 + 6.0 * kf;
    let outer = quad::adaptive_gk(&f, 1.0, x_max, 5e-13, 4000)?;
    let err = inner.abs_err + outer.abs_err;
    if err > 1e-9 {
        return Err(Error::Numerical(format!(
            "moment_falpha(alpha={alpha}, k={k}) achieved only {err:.3e} absolute error"
        )));
    }
    Ok(inner.value + outer.value)
}

/// k-th moment of H(α, β): μ_k / γ_k with γ_k = Γ(α+β+k)/Γ(α+β), the
/// k-th moment of Gamma(α+β, 1).
pub fn moment_h(alpha: f64, beta: f64, k: u32) -> Result<f64> {
    if !(alpha > 0.0) || !(beta >= 0.0) {
        return Err(Error::Domain(format!(
            "moment_h requires alpha > 0, beta >= 0, got ({alpha}, {beta})"
        )));
    }
    let mu = moment_falpha(alpha, k)?;
    let s = alpha + beta;
    let log_gamma_k = log_gamma(s + k as f64)? - log_gamma(s)?;
    Ok(mu * (-log_gamma_k).exp())
}

/// k-th moment of U_λ: λ/(1+λ) + 1/((1+λ)(1+k)), evaluated through
/// w = 1/(1+λ) so λ = ∞ gives exactly 1 and λ = 0 gives 1/(1+k).
pub fn moment_ulambda(lambda: f64, k: u32) -> f64 {
    let w = 1.0 / (1.0 + lambda);
    (1.0 - w) + w / (1.0 + k as f64)
}

/// Default evaluation grid for goodness-of-fit against a law: covers the
/// bulk and the informative tails.
pub fn default_grid(law: &LimitLaw) -> Vec<f64> {
    match law {
        LimitLaw::Gumbel => (0..61).map(|i| -3.0 + 12.0 * i as f64 / 60.0).collect(),
        LimitLaw::FAlpha { .. } => {
            let (lo, hi) = (0.05f64.ln(), 20f64.ln());
            (0..61)
                .map(|i| (lo + (hi - lo) * i as f64 / 60.0).exp())
                .collect()
        }
        _ => (1..=19).map(|i| 0.05 * i as f64).collect(),
    }
}
