//! Norming constants across every regime of the shape family
//! alpha_n = c·n^p·(log n)^q.
//!
//! For each representative family the example prints the classified
//! regime, the centering/scaling (or power transform), the limit law, and
//! the implicit-equation root with its residual when one is solved.
//!
//! Run with: cargo run --example norming_constants

use extremal_gamma::family::ShapeFamily;
use extremal_gamma::norming::{gamma_norming, RootName, Transform};

fn main() {
    let n = 1_000_000u64;
    let families = [
        ("alpha = n", ShapeFamily::new(1.0, 1.0, 0.0).unwrap()),
        (
            "alpha = (log n)^2",
            ShapeFamily::new(1.0, 0.0, 2.0).unwrap(),
        ),
        ("alpha = log n", ShapeFamily::new(1.0, 0.0, 1.0).unwrap()),
        (
            "alpha = sqrt(log n)",
            ShapeFamily::new(1.0, 0.0, 0.5).unwrap(),
        ),
        ("alpha = 2", ShapeFamily::new(2.0, 0.0, 0.0).unwrap()),
        (
            "alpha = 1/sqrt(n)",
            ShapeFamily::new(1.0, -0.5, 0.0).unwrap(),
        ),
        ("alpha = 2/n", ShapeFamily::new(2.0, -1.0, 0.0).unwrap()),
        ("alpha = 1/n^2", ShapeFamily::new(1.0, -2.0, 0.0).unwrap()),
    ];

    println!("n = {n}");
    println!(
        "{:<22} {:<18} {:<46} limit",
        "family", "regime", "normalization"
    );
    for (label, fam) in families {
        let regime = fam.classify();
        match gamma_norming(n, &fam) {
            Ok(nc) => {
                let norm = match nc.transform {
                    Transform::Linear => format!("(M - {:.6}) / {:.6}", nc.d_n, nc.c_n),
                    Transform::Power { exponent } => format!("M^{exponent:.3e}"),
                    Transform::PowerScaled { sigma, exponent } => {
                        format!("({sigma:.4}*M)^{exponent:.3e}")
                    }
                };
                println!(
                    "{label:<22} {:<18} {norm:<46} {}",
                    regime.to_string(),
                    serde_json::to_string(&nc.limit).unwrap()
                );
                if nc.diag.root_name != RootName::None {
                    println!(
                        "{:<22}   root {:?} = {:.12} (residual {:.1e}, {} bisections in [{:.4}, {:.4}])",
                        "",
                        nc.diag.root_name,
                        nc.diag.root,
                        nc.diag.residual,
                        nc.diag.iterations,
                        nc.diag.bracket.0,
                        nc.diag.bracket.1
                    );
                }
            }
            Err(e) => println!("{label:<22} {:<18} unavailable: {e}", regime.to_string()),
        }
    }
}
