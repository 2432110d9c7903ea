//! The Weyl-Titchmarsh function in its two closed forms.
//!
//! The partial-fraction form runs over poles (the eigenvalues) with the
//! norming constants as residues; the finite continued fraction runs over the
//! string coefficients of the Liouville-transformed momentum. Both must agree
//! pointwise. At a peakon-antipeakon collision the limiting function is
//! explicit: z M(z) = 4 H0^2 z^2 / (1 - 4 H0^2 z^2).
//!
//! Run with:
//!   cargo run --example weyl_function

use num_complex::Complex64;
use peakon::flow::antipeakon_collision_state;
use peakon::spectral::forward_transform;
use peakon::{weyl_eval, PeakonConfig, WeylRepresentation};

fn main() {
    let config = PeakonConfig::new([(1.1, -1.0), (0.6, 0.9)]).unwrap();
    let data = forward_transform(&config).unwrap();
    let pf = WeylRepresentation::from_spectral_data(&data);
    let cf = WeylRepresentation::from_config(&config);

    println!("pole/residue form vs continued-fraction form:");
    for &(re, im) in &[(0.0, 1.0), (0.7, 0.3), (-1.2, 2.0)] {
        let z = Complex64::new(re, im);
        let a = weyl_eval(&pf, z).unwrap();
        let b = weyl_eval(&cf, z).unwrap();
        println!(
            "  M({re:+.1}{im:+.1}i) = {:+.12} {:+.12}i   deviation {:.2e}",
            a.re,
            a.im,
            (a - b).norm()
        );
    }

    let z = Complex64::new(0.4, 1.3);
    let m = weyl_eval(&pf, z).unwrap();
    let mc = weyl_eval(&pf, z.conj()).unwrap();
    println!(
        "\nHerglotz symmetry: M(z*) - M(z)* = {:.2e}",
        (mc - m.conj()).norm()
    );
    println!(
        "upper half plane: Im z = {:.1}, Im M = {:+.6} (nonnegative for positive masses)",
        z.im, m.im
    );

    println!("\ncollision-state Weyl function (H0 = 1/2): poles at +-1");
    let (_, weyl) = antipeakon_collision_state(0.5).unwrap();
    for &(re, im) in &[(0.3, 0.2), (0.0, 1.0), (2.0, 0.5)] {
        let z = Complex64::new(re, im);
        let zm = z * weyl_eval(&weyl, z).unwrap();
        let closed = z * z / (1.0 - z * z);
        println!(
            "  zM({re:+.1}{im:+.1}i) = {:+.12} {:+.12}i   vs z^2/(1-z^2): {:.2e}",
            zm.re,
            zm.im,
            (zm - closed).norm()
        );
    }
}
