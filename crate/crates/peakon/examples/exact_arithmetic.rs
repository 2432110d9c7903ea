//! Exact-rational inverse pipeline.
//!
//! Hankel determinants of moment sequences are exponentially ill-conditioned,
//! so the moment/Hankel/Stieltjes steps run on exact rationals. With rational
//! spectral data the determinants and recovered string coefficients are exact
//! numbers, and a vanishing determinant (a collision) is an exact zero rather
//! than a tolerance call.
//!
//! Run with:
//!   cargo run --example exact_arithmetic

use num_bigint::BigInt;
use num_rational::BigRational;
use peakon::moment::{
    hankel_determinants, invert_coefficients_exact, moments, moments_exact, rational_to_f64,
    stieltjes_coefficients,
};

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn main() {
    let sigma = vec![rat(1, 4), rat(2, 3), rat(3, 2)];
    let gammas = vec![rat(5, 2), rat(1, 3), rat(7, 8)];
    println!("rational spectral data:");
    for (l, g) in sigma.iter().zip(&gammas) {
        println!("  lambda = {l}, gamma = {g}");
    }

    let s = moments_exact(&sigma, &gammas, 5);
    println!("\nexact moments:");
    for k in 0..s.len() {
        println!("  s_{k} = {}", s.exact(k));
    }

    let table = hankel_determinants(&s, 3).unwrap();
    println!("\nexact Hankel determinants:");
    for k in 0..=3 {
        println!(
            "  Delta_0[{k}] = {:<28}  Delta_1[{k}] = {}",
            table.delta0_exact(k).to_string(),
            table.delta1_exact(k)
        );
    }

    let exact = invert_coefficients_exact(&sigma, &gammas).unwrap();
    println!("\nexact string coefficients:");
    for m in &exact.masses {
        println!("  m = {m}");
    }
    for l in &exact.lengths {
        println!("  l = {l}");
    }
    let total: BigRational = exact.lengths.iter().cloned().sum();
    println!("  sum of lengths = {total} (exactly one)");

    // the float pipeline on the same data agrees to rounding
    let sf: Vec<f64> = sigma.iter().map(rational_to_f64).collect();
    let gf: Vec<f64> = gammas.iter().map(rational_to_f64).collect();
    let table_f = hankel_determinants(&moments(&sf, &gf, 5).unwrap(), 3).unwrap();
    let (mf, lf) = stieltjes_coefficients(&table_f, 3).unwrap();
    let worst = mf
        .iter()
        .zip(&exact.masses)
        .chain(lf.iter().zip(&exact.lengths))
        .map(|(a, b)| (a - rational_to_f64(b)).abs() / rational_to_f64(b).abs().max(1e-12))
        .fold(0.0f64, f64::max);
    println!("\nfloat pipeline agrees within {worst:.3e}");

    // an exactly antisymmetric data set: the first Stieltjes denominator is
    // an exact zero, reported as a collision
    let sym_sigma = vec![rat(-1, 1), rat(1, 1)];
    let sym_gammas = vec![rat(1, 2), rat(1, 2)];
    match invert_coefficients_exact(&sym_sigma, &sym_gammas) {
        Err(e) => println!("\nantisymmetric data: {e}"),
        Ok(_) => unreachable!("the collision must be detected"),
    }
}
