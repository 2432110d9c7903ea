//! Forward and inverse spectral transform of a multi-peakon configuration.
//!
//! The forward map sends masses and positions to eigenvalues with norming and
//! coupling constants; the inverse runs through the Stieltjes moment problem
//! (moments, Hankel determinants, continued-fraction coefficients) and
//! reconstructs the configuration.
//!
//! Run with:
//!   cargo run --example spectral_roundtrip

use peakon::moment::{hankel_determinants, invert_spectral, moments, stieltjes_coefficients};
use peakon::spectral::{forward_transform, string_coefficients};
use peakon::PeakonConfig;

fn main() {
    let config = PeakonConfig::new([(0.8, -2.5), (-0.4, 0.0), (1.6, 1.8)]).unwrap();
    println!("configuration:");
    for pk in config.peaks() {
        println!("  p = {:+.4}, q = {:+.4}", pk.p, pk.q);
    }

    let data = forward_transform(&config).unwrap();
    println!("\nspectral data:");
    for ((lambda, gamma), c) in data
        .eigenvalues
        .iter()
        .zip(&data.gammas)
        .zip(&data.couplings)
    {
        println!("  lambda = {lambda:+.10}   gamma = {gamma:.6e}   c = {c:+.6e}");
    }
    let trace1: f64 = data.eigenvalues.iter().map(|l| 1.0 / l).sum();
    println!(
        "  trace check: sum 1/lambda = {trace1:.12} vs 2 sum p = {:.12}",
        2.0 * config.total_momentum()
    );

    let n = config.len();
    let s = moments(&data.eigenvalues, &data.gammas, 2 * n - 1).unwrap();
    println!("\nmoments s_0..s_{}: {:?}", 2 * n - 1, s.values());
    let table = hankel_determinants(&s, n).unwrap();
    print!("Hankel Delta_0: ");
    for k in 0..=n {
        print!("{:.6e}  ", table.delta0(k));
    }
    print!("\nHankel Delta_1: ");
    for k in 0..=n {
        print!("{:.6e}  ", table.delta1(k));
    }
    println!();

    let (m, l) = stieltjes_coefficients(&table, n).unwrap();
    let (m_direct, l_direct) = string_coefficients(&config);
    println!("\nrecovered string coefficients (vs direct evaluation):");
    for (a, b) in m.iter().zip(&m_direct) {
        println!("  m: {a:+.10e}   direct {b:+.10e}");
    }
    for (a, b) in l.iter().zip(&l_direct) {
        println!("  l: {a:.10e}   direct {b:.10e}");
    }

    let recovered = invert_spectral(&data.eigenvalues, &data.gammas).unwrap();
    println!("\nreconstruction:");
    let mut worst = 0.0f64;
    for (orig, rec) in config.peaks().iter().zip(recovered.peaks()) {
        worst = worst
            .max((orig.p - rec.p).abs())
            .max((orig.q - rec.q).abs());
        println!("  p = {:+.12}, q = {:+.12}", rec.p, rec.q);
    }
    println!("worst roundtrip deviation: {worst:.3e}");
}
