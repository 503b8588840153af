//! Trace the first-order transition line of the step schedule in the
//! (s, tau) plane at zero temperature and compare its interior endpoint
//! with the closed-form critical point.
//!
//! Run with: `cargo run --release --example phase_diagram`

use pspin_anneal::meanfield::{step_line_endpoint, touching_exponent};
use pspin_anneal::model::{Model, ModelSpec};
use pspin_anneal::sweep::{trace_line, Plane, TraceOptions};
use pspin_anneal::{Disorder, FieldSchedule, Result};

fn main() -> Result<()> {
    let p = 3;
    let spec = ModelSpec { p, s: 0.0, tau: 0.0, temperature: 0.0 };
    let model = Model::new(spec, FieldSchedule::StepIdeal, Disorder::None)?;
    let plane = Plane::Drive { temperature: 0.0, tau_range: (0.0, 1.0) };
    let trace = trace_line(&model, &plane, &TraceOptions::default())?;

    println!("step schedule, p = {p}, T = 0");
    println!("traced {} transition line(s)\n", trace.lines.len());

    for (i, line) in trace.lines.iter().enumerate() {
        println!("line {i}: {} points", line.points.len());
        let first = line.points.first().expect("traced line is nonempty");
        let last = line.points.last().expect("traced line is nonempty");
        println!("  starts at  s = {:.6}, tau = {:.6}, delta_m = {:.6}", first.s, first.tau, first.delta_m);
        println!("  ends near  s = {:.6}, tau = {:.6}, delta_m = {:.6}", last.s, last.tau, last.delta_m);
        match &line.endpoint {
            Some(e) => println!("  interior endpoint refined to s = {:.9}, tau = {:.9}", e.s, e.tau),
            None => println!("  no interior endpoint (line spans the whole range)"),
        }
    }

    let exact = step_line_endpoint(p)?;
    let c_star = touching_exponent(p)?;
    println!("\nclosed-form endpoint: s = {:.12}, tau = {:.12}, m = {:.12}", exact.s, exact.tau, exact.m);
    println!("touching exponent:    tau = s^c with c = {c_star:.12}");
    println!("(the line leaves the tau = 0 axis at s = 4*sqrt(3)/9 = {:.12})", 4.0 * 3f64.sqrt() / 9.0);

    Ok(())
}
