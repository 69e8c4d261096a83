//! The tail quantities behind every Gumbel regime: A_n = n·P[Y > x_n], its
//! saddle approximation B_n, and the integration-by-parts identity
//! A_n = B_n + (alpha_n - 1)·C_n with C_n ≤ A_n/x_n.
//!
//! As x_n grows with alpha_n fixed, A_n/B_n -> 1: that collapse is what
//! makes every c_n = 1 regime Gumbel with only the centering changing.
//!
//! Run with: cargo run --example tail_identities

use extremal_gamma::family::ShapeFamily;
use extremal_gamma::norming::gamma_norming;
use extremal_gamma::verify::tail_quantities;

fn main() {
    println!(
        "{:>6} {:>8} {:>10} {:>12} {:>12} {:>12} {:>10}",
        "alpha", "n", "x_n", "A_n", "B_n", "C_bound", "A/B"
    );
    for &(alpha, n, x) in &[
        (1.0, 1000u64, 6.0),
        (2.0, 1000, 8.0),
        (2.0, 100_000, 13.0),
        (5.0, 100_000, 18.0),
        (0.5, 1000, 6.0),
    ] {
        let t = tail_quantities(n, alpha, x).unwrap();
        println!(
            "{alpha:>6} {n:>8} {x:>10.2} {:>12.6} {:>12.6} {:>12.6} {:>10.5}",
            t.a_n,
            t.b_n,
            t.c_n_bound,
            t.a_n / t.b_n
        );
    }

    // the identity at the actual centerings: evaluate at x_n = d_n
    println!("\nA/B at the regime centering x_n = d_n (x = 0):");
    for (label, fam, n) in [
        (
            "alpha = 2, n = 1e4",
            ShapeFamily::new(2.0, 0.0, 0.0).unwrap(),
            10_000u64,
        ),
        (
            "alpha = 2, n = 1e8",
            ShapeFamily::new(2.0, 0.0, 0.0).unwrap(),
            100_000_000,
        ),
        (
            "alpha = sqrt(log n), n = 1e8",
            ShapeFamily::new(1.0, 0.0, 0.5).unwrap(),
            100_000_000,
        ),
    ] {
        let nc = gamma_norming(n, &fam).unwrap();
        let alpha_n = fam.alpha_at(n).unwrap();
        let t = tail_quantities(n, alpha_n, nc.d_n).unwrap();
        println!(
            "  {label:<30} x_n = {:>9.4}  A/B = {:.5}  (bound 1 + {:.5})",
            nc.d_n,
            t.a_n / t.b_n,
            (alpha_n - 1.0).abs() / nc.d_n
        );
    }
}
