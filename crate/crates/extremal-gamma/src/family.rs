//! Shape-parameter families α_n = c·n^p·(log n)^q and their convergence
//! regimes.
//!
//! Sequences are restricted to this closed form rather than arbitrary
//! callbacks: the convergence regimes hinge on asymptotic properties,
//! which are undecidable for a black-box sequence but read off exactly
//! from the exponents (c, p, q).

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::{Error, Result};

/// The parameter family α_n = c·n^p·(log n)^q, defined for integer n ≥ 2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawFamily")]
pub struct ShapeFamily {
    /// Prefactor, > 0.
    pub c: f64,
    /// Power of n.
    pub p: f64,
    /// Power of log n.
    pub q: f64,
}

#[derive(Deserialize)]
struct RawFamily {
    c: f64,
    p: f64,
    q: f64,
}

impl TryFrom<RawFamily> for ShapeFamily {
    type Error = Error;
    fn try_from(r: RawFamily) -> Result<Self> {
        ShapeFamily::new(r.c, r.p, r.q)
    }
}

impl ShapeFamily {
    pub fn new(c: f64, p: f64, q: f64) -> Result<Self> {
        if !c.is_finite() || c <= 0.0 {
            return Err(Error::Usage(format!(
                "family prefactor c must be finite and > 0, got {c}"
            )));
        }
        if !p.is_finite() || !q.is_finite() {
            return Err(Error::Usage(format!(
                "family exponents must be finite, got p={p}, q={q}"
            )));
        }
        Ok(ShapeFamily { c, p, q })
    }

    /// α_n = exp(ln c + p·ln n + q·ln ln n). Requires n ≥ 2 so that
    /// ln ln n is defined.
    pub fn alpha_at(&self, n: u64) -> Result<f64> {
        if n < 2 {
            return Err(Error::Domain(format!(
                "alpha_at requires n >= 2, got {n} (log log n undefined)"
            )));
        }
        let ln_n = (n as f64).ln();
        Ok((self.c.ln() + self.p * ln_n + self.q * ln_n.ln()).exp())
    }

    /// Which convergence regime governs this family. Total over all
    /// valid (c, p, q).
    pub fn classify(&self) -> Regime {
        let (c, p, q) = (self.c, self.p, self.q);
        if p > 0.0 || (p == 0.0 && q > 1.0) {
            Regime::RapidGrowth
        } else if p == 0.0 && q == 1.0 {
            Regime::LogComparable { ratio: c }
        } else if p == 0.0 && q > 0.0 {
            Regime::SlowGrowth
        } else if p == 0.0 {
            Regime::BoundedShape
        } else if p > -1.0 || (p == -1.0 && q > 0.0) {
            Regime::PolyDecay
        } else if p == -1.0 && q == 0.0 {
            Regime::StableProduct { alpha: c }
        } else {
            Regime::VanishingProduct
        }
    }

    // Limit of the sequence itself as n -> inf: +inf, a positive constant,
    // or 0, decided by (p, q) lexicographically.
    fn limit(&self) -> f64 {
        if self.p > 0.0 || (self.p == 0.0 && self.q > 0.0) {
            f64::INFINITY
        } else if self.p == 0.0 && self.q == 0.0 {
            self.c
        } else {
            0.0
        }
    }

    // n·α_n as a family of the same closed form.
    fn times_n(&self) -> ShapeFamily {
        ShapeFamily {
            c: self.c,
            p: self.p + 1.0,
            q: self.q,
        }
    }

    // Limit of self_n / other_n.
    fn ratio_limit(&self, other: &ShapeFamily) -> f64 {
        ShapeFamily {
            c: self.c / other.c,
            p: self.p - other.p,
            q: self.q - other.q,
        }
        .limit()
    }
}

impl fmt::Display for ShapeFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*n^{}*logn^{}", self.c, self.p, self.q)
    }
}

impl FromStr for ShapeFamily {
    type Err = Error;

    /// Accepts the compact CLI form `c,p,q` and the display form
    /// `c*n^p*logn^q`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<f64> = if s.contains('*') {
            let err = || {
                Error::Usage(format!(
                    "malformed family string {s:?}, expected c*n^p*logn^q"
                ))
            };
            let segs: Vec<&str> = s.split('*').collect();
            if segs.len() != 3 {
                return Err(err());
            }
            let c = segs[0].trim().parse().map_err(|_| err())?;
            let p = segs[1]
                .trim()
                .strip_prefix("n^")
                .ok_or_else(err)?
                .parse()
                .map_err(|_| err())?;
            let q = segs[2]
                .trim()
                .strip_prefix("logn^")
                .ok_or_else(err)?
                .parse()
                .map_err(|_| err())?;
            vec![c, p, q]
        } else {
            let vals: std::result::Result<Vec<f64>, _> =
                s.split(',').map(|t| t.trim().parse()).collect();
            vals.map_err(|_| {
                Error::Usage(format!("malformed family string {s:?}, expected c,p,q"))
            })?
        };
        if parts.len() != 3 {
            return Err(Error::Usage(format!(
                "malformed family string {s:?}, expected three fields c,p,q"
            )));
        }
        ShapeFamily::new(parts[0], parts[1], parts[2])
    }
}

/// Asymptotic class of α_n relative to log n and 1/n. Exactly one tag per
/// family; the tag selects the norming constants and the limit law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "tag")]
pub enum Regime {
    /// α_n / log n → ∞.
    RapidGrowth,
    /// α_n / log n → ratio ∈ (0, ∞).
    LogComparable { ratio: f64 },
    /// α_n → ∞ with α_n = o(log n).
    SlowGrowth,
    /// α_n bounded above with log α_n = o(log n) (includes constants).
    BoundedShape,
    /// n·α_n → ∞ while log α_n / log n stays bounded away from 0.
    PolyDecay,
    /// n·α_n → alpha ∈ (0, ∞).
    StableProduct { alpha: f64 },
    /// n·α_n → 0.
    VanishingProduct,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Regime::RapidGrowth => write!(f, "RapidGrowth"),
            Regime::LogComparable { ratio } => write!(f, "LogComparable(ratio={ratio})"),
            Regime::SlowGrowth => write!(f, "SlowGrowth"),
            Regime::BoundedShape => write!(f, "BoundedShape"),
            Regime::PolyDecay => write!(f, "PolyDecay"),
            Regime::StableProduct { alpha } => write!(f, "StableProduct(alpha={alpha})"),
            Regime::VanishingProduct => write!(f, "VanishingProduct"),
        }
    }
}

/// Whether n·α_n + β_n diverges, which decides between the Gumbel-type
/// and the bounded-total branches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TotalGrowth {
    Diverges,
    Bounded,
}

/// Joint regime of a Dirichlet(α_n, …, α_n; β_n) family pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DirichletRegime {
    /// Regime of the gamma row that represents the numerator coordinates.
    pub gamma_regime: Regime,
    /// Behaviour of the total shape n·α_n + β_n.
    pub total_growth: TotalGrowth,
    /// lim n·α_n / β_n ∈ [0, ∞]; drives the U_λ mixture branch.
    #[serde(with = "crate::limits::inf_repr")]
    pub lambda: f64,
    /// lim β_n ∈ [0, ∞].
    #[serde(with = "crate::limits::inf_repr")]
    pub beta_limit: f64,
}

/// Classify a Dirichlet family pair into the branch that governs its
/// maximum coordinate. Within the closed-form family class every
/// combination is covered; the error path is reserved for future family
/// classes whose limits may fail to exist.
pub fn classify_dirichlet(shape: &ShapeFamily, beta: &ShapeFamily) -> Result<DirichletRegime> {
    let gamma_regime = shape.classify();
    let n_alpha_limit = shape.times_n().limit();
    let beta_limit = beta.limit();
    let lambda = shape.times_n().ratio_limit(beta);
    let total_growth = if n_alpha_limit.is_infinite() || beta_limit.is_infinite() {
        TotalGrowth::Diverges
    } else {
        TotalGrowth::Bounded
    };
    // Internal consistency: regimes with n·α_n -> inf must diverge in total.
    if matches!(
        gamma_regime,
        Regime::RapidGrowth
            | Regime::LogComparable { .. }
            | Regime::SlowGrowth
            | Regime::BoundedShape
            | Regime::PolyDecay
    ) && total_growth == TotalGrowth::Bounded
    {
        return Err(Error::RegimeMismatch(format!(
            "family pair ({shape}, {beta}) not covered by any branch"
        )));
    }
    Ok(DirichletRegime {
        gamma_regime,
        total_growth,
        lambda,
        beta_limit,
    })
}

/// The (c, p, q) grid used by the regime-consistency tests and the
/// solver acceptance sweep.
pub fn regime_test_grid() -> Vec<ShapeFamily> {
    let mut out = Vec::new();
    for &c in &[0.5, 1.0, 2.0] {
        for &p in &[-3.0, -1.5, -1.0, -0.5, 0.0, 0.5, 1.0] {
            for &q in &[-1.0, 0.0, 0.5, 1.0, 2.0] {
                out.push(ShapeFamily { c, p, q });
            }
        }
    }
    out
}

/// Numerically find the first power-of-two n at which `pred(alpha_at(n))`
/// holds, doubling from n = 4 up to `limit`. Used by the consistency
/// checks that pin each regime tag to its defining limit.
pub fn doubling_search(
    family: &ShapeFamily,
    limit: u64,
    pred: impl Fn(f64, u64) -> bool,
) -> Option<u64> {
    let mut n = 4u64;
    while n <= limit {
        if let Ok(a) = family.alpha_at(n) {
            if pred(a, n) {
                return Some(n);
            }
        }
        n = n.saturating_mul(2);
    }
    None
}

/// Convenience: named limits of the pair used in reports.
pub fn dirichlet_limit_summary(shape: &ShapeFamily, beta: &ShapeFamily) -> BTreeMap<String, f64> {
    let mut m = BTreeMap::new();
    m.insert("n_alpha_limit".to_string(), shape.times_n().limit());
    m.insert("beta_limit".to_string(), beta.limit());
    m.insert("lambda".to_string(), shape.times_n().ratio_limit(beta));
    m
}
