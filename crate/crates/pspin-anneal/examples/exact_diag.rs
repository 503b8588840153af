//! Exact spectra of finite chains: the Hamiltonian commutes with nothing
//! obvious site-by-site once the field profile is inhomogeneous, but it
//! only couples symmetric functions of groups of spins that share a field
//! value, so the spectrum splits into small collective-spin blocks that
//! are cheap to diagonalize even when 2^N is not.
//!
//! Run with: `cargo run --release --example exact_diag`

use pspin_anneal::exactdiag::{gap_curve, spectrum};
use pspin_anneal::model::PathSpec;
use pspin_anneal::semiclassical::gap_components;
use pspin_anneal::{FieldSchedule, Result};

fn main() -> Result<()> {
    // One spot check: low edge of the spectrum at a generic point.
    let (p, n, s, tau) = (3, 16, 0.6, 0.3);
    let sp = spectrum(p, n, FieldSchedule::StepDiagonal { n }, s, tau)?;
    println!("p = {p}, N = {n}, diagonal step, s = {s}, tau = {tau}");
    println!("  E0 = {:+.12}", sp.e0);
    println!("  E1 = {:+.12}", sp.e1);
    println!("  gap = {:.12}  ({} inverse iterations)\n", sp.gap, sp.iterations);

    // Gap along the diagonal path for growing N, against the N -> infinity
    // semiclassical prediction at the same drive point.
    println!("minimum gap along tau = s:");
    println!("{:>6} {:>14} {:>10}", "N", "min gap", "at s");
    for n in [8, 16, 32, 64] {
        let curve = gap_curve(3, n, FieldSchedule::StepDiagonal { n }, &PathSpec::TauEqS, 201)?;
        let min = curve.minimum;
        println!("{n:>6} {:>14.8} {:>10.4}", min.gap, min.s);
    }

    let comps = gap_components(3, 0.5, 0.5)?;
    println!(
        "\nsemiclassical gap at s = tau = 0.5 (N -> infinity): {:.8}",
        comps.min_gap()
    );
    println!("finite-N minima converge toward the semiclassical soft mode");
    println!("polynomially in 1/N, as the scaling fits in `gap_scaling` show.");
    Ok(())
}
