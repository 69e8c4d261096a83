//! Monte Carlo verification of the Dirichlet maximum limits via the gamma
//! representation: the Gumbel branch for diverging totals, the H law for
//! bounded totals, and the U_lambda mixture under the power transform.
//!
//! Run with: cargo run --example dirichlet_limits

use extremal_gamma::family::{classify_dirichlet, ShapeFamily};
use extremal_gamma::limits::LimitLaw;
use extremal_gamma::norming::dirichlet_norming;
use extremal_gamma::sampling::{simulate_batch, BatchSpec, Model, DEFAULT_BUDGET};
use extremal_gamma::verify::{ks_statistic, moment_check};

fn fam(c: f64, p: f64, q: f64) -> ShapeFamily {
    ShapeFamily::new(c, p, q).unwrap()
}

fn batch(shape: ShapeFamily, beta: ShapeFamily, n: u64, replicates: u64, seed: u64) -> Vec<f64> {
    let mut v = simulate_batch(&BatchSpec {
        model: Model::Dirichlet,
        shape,
        beta: Some(beta),
        n,
        replicates,
        seed,
        workers: 1,
        budget: DEFAULT_BUDGET,
    })
    .unwrap();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v
}

fn main() {
    // Gumbel branch: alpha_n = 1, beta_n = n, total 2n diverges
    let (shape, beta) = (fam(1.0, 0.0, 0.0), fam(1.0, 1.0, 0.0));
    let nc = dirichlet_norming(2000, &shape, &beta).unwrap();
    let samples = batch(shape, beta, 2000, 4000, 1);
    println!(
        "gumbel branch: regime {:?}, KS = {:.4}",
        classify_dirichlet(&shape, &beta).unwrap().gamma_regime,
        ks_statistic(&samples, &nc.limit).unwrap()
    );

    // bounded totals: n alpha_n -> 2, beta_n -> 1, M~ converges to H(2,1)
    let (shape, beta) = (fam(2.0, -1.0, 0.0), fam(1.0, 0.0, 0.0));
    let samples = batch(shape, beta, 500, 8000, 2);
    let zs = moment_check(
        &samples,
        &LimitLaw::HLaw {
            alpha: 2.0,
            beta: 1.0,
        },
        3,
    )
    .unwrap();
    print!("H(2,1) branch: ");
    for m in &zs {
        print!(
            "k={}: sample {:.5} vs theory {:.5} (z = {:+.2})  ",
            m.k, m.sample_moment, m.theory_moment, m.z
        );
    }
    println!();

    // vanishing product: (sigma_n M~)^(n alpha_n) -> U_lambda
    for (label, beta, law) in [
        (
            "lambda = 1",
            fam(1.0, -1.0, 0.0),
            LimitLaw::ULambda { lambda: 1.0 },
        ),
        ("lambda = 0", fam(3.0, 0.0, 0.0), LimitLaw::Uniform01),
    ] {
        let shape = fam(1.0, -2.0, 0.0);
        let samples = batch(shape, beta, 2000, 4000, 3);
        let at_one = samples.iter().filter(|&&s| s == 1.0).count();
        println!(
            "U_lambda branch ({label}): KS = {:.4}, share at the atom = {:.3}",
            ks_statistic(&samples, &law).unwrap(),
            at_one as f64 / samples.len() as f64
        );
    }
}
