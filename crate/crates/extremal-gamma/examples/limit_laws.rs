//! The limit laws themselves: CDF and quantile tables for Gumbel, F_alpha
//! and U_lambda, and the moment sequences that determine H and U_lambda.
//!
//! Run with: cargo run --example limit_laws

use extremal_gamma::limits::{moment_falpha, moment_h, moment_ulambda, LimitLaw};

fn main() {
    println!("CDFs at a few points");
    let laws = [
        LimitLaw::Gumbel,
        LimitLaw::FAlpha { alpha: 1.0 },
        LimitLaw::FAlpha { alpha: 2.0 },
        LimitLaw::Uniform01,
        LimitLaw::ULambda { lambda: 1.0 },
        LimitLaw::ULambda {
            lambda: f64::INFINITY,
        },
    ];
    let xs = [-1.0, 0.0, 0.5, 1.0, 2.0, 5.0];
    print!("{:<24}", "law \\ x");
    for x in xs {
        print!("{x:>10}");
    }
    println!();
    for law in laws {
        print!("{:<24}", serde_json::to_string(&law).unwrap());
        for x in xs {
            match law.cdf(x) {
                Ok(v) => print!("{v:>10.5}"),
                Err(_) => print!("{:>10}", "-"),
            }
        }
        println!();
    }

    println!("\nmedians (quantile at 1/2)");
    for law in [
        LimitLaw::Gumbel,
        LimitLaw::FAlpha { alpha: 2.0 },
        LimitLaw::ULambda { lambda: 1.0 },
    ] {
        println!(
            "  {:<26} {:.10}",
            serde_json::to_string(&law).unwrap(),
            law.quantile(0.5).unwrap()
        );
    }

    println!("\nmoment sequences (k = 1..5)");
    print!("{:<26}", "F_2 (mu_k)");
    for k in 1..=5 {
        print!("{:>12.6}", moment_falpha(2.0, k).unwrap());
    }
    println!();
    print!("{:<26}", "H(2, 1) (mu_k/gamma_k)");
    for k in 1..=5 {
        print!("{:>12.6}", moment_h(2.0, 1.0, k).unwrap());
    }
    println!();
    for lambda in [0.0, 1.0, f64::INFINITY] {
        print!("{:<26}", format!("U_lambda (lambda={lambda})"));
        for k in 1..=5 {
            print!("{:>12.6}", moment_ulambda(lambda, k));
        }
        println!();
    }
}
