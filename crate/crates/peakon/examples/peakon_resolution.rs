//! Long-time peakon resolution: the solution splits into a train of single
//! peakons along the rays x = t / (2 lambda), one per eigenvalue, with
//! explicitly computable phase shifts.
//!
//! Run with:
//!   cargo run --example peakon_resolution

use peakon::asymptotics::{phase_shifts, resolution_error};
use peakon::flow::solve_conservative;
use peakon::spectral::forward_transform;
use peakon::PeakonConfig;

fn main() {
    let init = PeakonConfig::new([(3.0, -10.0), (2.0, 0.0), (1.0, 10.0)]).unwrap();
    println!("three-peakon train: masses (3, 2, 1) at (-10, 0, 10)\n");

    let data = forward_transform(&init).unwrap();
    let shifts = phase_shifts(&data.eigenvalues, &data.couplings).unwrap();
    println!("rays and phase shifts:");
    for e in shifts.entries() {
        println!(
            "  lambda = {:+.8}   speed & height 1/(2 lambda) = {:.6}   xi = {:+.6}",
            e.lambda,
            1.0 / (2.0 * e.lambda),
            e.xi
        );
    }

    println!("\nsup-norm distance between the exact solution and the train:");
    for &t in &[10.0, 25.0, 50.0, 100.0] {
        let err = resolution_error(&init, t).unwrap();
        println!("  t = {t:>5}: sup error {err:.6e}");
    }

    let t = 100.0;
    let state = solve_conservative(&init, t).unwrap();
    println!("\npeak positions at t = {t} against the predicted rays:");
    let mut predicted: Vec<(f64, f64)> = shifts
        .entries()
        .iter()
        .map(|e| (t / (2.0 * e.lambda) - e.xi, 1.0 / (2.0 * e.lambda)))
        .collect();
    predicted.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    for (pk, (loc, height)) in state.peaks.peaks().iter().zip(&predicted) {
        println!(
            "  exact peak p = {:+.8} at q = {:>12.6}   predicted height {height:.8} at {loc:>12.6}",
            pk.p, pk.q
        );
    }
}
