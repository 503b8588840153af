//! Semiclassical excitation gaps along two paths through the (s, tau)
//! plane: the diagonal tau = s, which stays safely gapped, and the
//! touching path tau = s^c, whose gap collapses at the critical endpoint
//! of the first-order line.
//!
//! Run with: `cargo run --release --example gap`

use pspin_anneal::meanfield::touching_exponent;
use pspin_anneal::model::PathSpec;
use pspin_anneal::semiclassical::gap_components;
use pspin_anneal::Result;

/// Coarse scan along the path, then zoom on the minimum: the dip at a
/// critical point is far narrower than any fixed grid.
fn min_gap_on(path: &PathSpec, label: &str) -> Result<f64> {
    let mut lo = 0.0f64;
    let mut hi = 1.0f64;
    let mut best = (f64::INFINITY, 0.0);
    for _round in 0..6 {
        for i in 0..=800 {
            let s = lo + (hi - lo) * i as f64 / 800.0;
            let comps = gap_components(3, s, path.tau_at(s))?;
            if !comps.breakdown && comps.delta_a1 < best.0 {
                best = (comps.delta_a1, s);
            }
        }
        let step = (hi - lo) / 800.0;
        lo = (best.1 - 2.0 * step).max(0.0);
        hi = (best.1 + 2.0 * step).min(1.0);
    }
    println!("{label:<26} min delta_a1 = {:.6e} at s = {:.6}", best.0, best.1);
    Ok(best.0)
}

fn main() -> Result<()> {
    println!("p = 3, step schedule, semiclassical gaps\n");

    min_gap_on(&PathSpec::TauEqS, "diagonal tau = s:")?;
    min_gap_on(&PathSpec::TauPower { c: 2.366 }, "touching tau = s^2.366:")?;

    let c_star = touching_exponent(3)?;
    println!();
    println!("the rounded exponent misses the critical endpoint by ~1e-5 in tau,");
    println!("which floors its gap near 6e-3; the exact exponent c = {c_star:.12}");
    println!("drives the soft mode all the way down:\n");
    min_gap_on(&PathSpec::TauPower { c: c_star }, "exact touching exponent:")?;

    println!("\nthe diagonal keeps an O(1) gap for the whole sweep, so inhomogeneous");
    println!("driving turns an exponentially slow anneal into a polynomial one —");
    println!("but only because the path slips around the first-order line.");
    Ok(())
}
