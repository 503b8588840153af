//! Entanglement entropy of a macroscopic cut (fraction u of the spins)
//! in the semiclassical ground state, along three sweep paths: a safe
//! diagonal, the touching path that grazes the critical endpoint, and
//! the homogeneous axis with its first-order jump.
//!
//! Run with: `cargo run --release --example entropy`

use pspin_anneal::model::{Model, ModelSpec, PathSpec};
use pspin_anneal::sweep::{path_scan, Quantity};
use pspin_anneal::{Disorder, FieldSchedule, Result};

fn report(model: &Model, path: &PathSpec, label: &str) -> Result<()> {
    let samples = path_scan(model, path, Quantity::Entropy { u: 0.5 }, 2001)?;
    let mut max = f64::NEG_INFINITY;
    let mut at = 0.0;
    let mut flagged = 0usize;
    for smp in &samples {
        if let Some(v) = smp.value {
            if v > max {
                max = v;
                at = smp.s;
            }
        }
        if smp.flag.is_some() {
            flagged += 1;
        }
    }
    println!("{label}");
    println!("  max E = {max:.6} at s = {at:.6} ({flagged} flagged samples)");

    // Largest step between consecutive finite samples exposes discontinuities.
    let mut jump: f64 = 0.0;
    let mut jump_at = 0.0;
    for w in samples.windows(2) {
        if let (Some(a), Some(b)) = (w[0].value, w[1].value) {
            if (b - a).abs() > jump {
                jump = (b - a).abs();
                jump_at = w[1].s;
            }
        }
    }
    println!("  largest step between samples: {jump:.6} at s = {jump_at:.6}\n");
    Ok(())
}

fn main() -> Result<()> {
    let spec = ModelSpec { p: 3, s: 0.0, tau: 0.0, temperature: 0.0 };
    let model = Model::new(spec, FieldSchedule::StepIdeal, Disorder::None)?;
    println!("p = 3, step schedule, cut fraction u = 1/2\n");

    report(&model, &PathSpec::TauEqS, "diagonal tau = s (smooth, bounded):")?;
    report(&model, &PathSpec::TauPower { c: 2.366 }, "touching tau = s^2.366 (peak near the endpoint):")?;
    report(&model, &PathSpec::HomogeneousAxis, "homogeneous axis tau = 0 (finite jump at the transition):")?;

    println!("the entropy stays O(1) everywhere except at criticality, where");
    println!("the soft mode makes it grow like -ln(gap); crossing a first-order");
    println!("line shows up as a finite discontinuity instead.");
    Ok(())
}
