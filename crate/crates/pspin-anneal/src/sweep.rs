//! Parameter-plane sweeps: first-order transition-line tracing with
//! critical-endpoint location, order-parameter jumps along lines, quantity
//! scans along annealing paths, minimal-gap scaling fits, and monotone
//! clear-path search.
//!
//! Tracing walks a slow coordinate (τ in the drive plane, T in the
//! temperature plane), bisects the fast coordinate (s) for equilibrium
//! jumps at each slow value, and assembles the resulting points into
//! polylines by continuity matching in (s, Δm). A line that terminates in
//! the interior of the plane ends at a critical endpoint, located by
//! bisecting the slow coordinate on the predicate "a jump with
//! Δm > 10·jump-threshold still exists".

use crate::error::{Error, Result};
use crate::math;
use crate::meanfield::{
    self, detect_transitions_core, DetectOptions, TransitionPoint,
};
use crate::model::{defaults, Model, PathSpec};
use crate::semiclassical;
use rayon::prelude::*;
use serde::Serialize;

// ═══════════════════════════════════════════════════════════════════════════
// Transition-line tracing
// ═══════════════════════════════════════════════════════════════════════════

/// Which 2-D slice of parameter space a line lives in.
#[derive(Debug, Clone, Serialize)]
pub enum Plane {
    /// (s, τ) at fixed temperature; slow coordinate τ over `tau_range`,
    /// fast coordinate s over [0, 1].
    Drive { temperature: f64, tau_range: (f64, f64) },
    /// (s, T) with τ locked to a path τ(s); slow coordinate T over
    /// `temperature_range`, fast coordinate s along the path.
    Temperature { path: PathSpec, temperature_range: (f64, f64) },
}

/// Tracing knobs; defaults resolve figure-scale features.
#[derive(Debug, Clone, Copy)]
pub struct TraceOptions {
    /// Number of slow-coordinate rows.
    pub slow_grid: usize,
    /// Fast-axis detection settings per row.
    pub detect: DetectOptions,
    /// Maximum fast-coordinate step between consecutive rows of one
    /// polyline; larger jumps start a new line.
    pub link_tolerance: f64,
    /// Slow-coordinate resolution of endpoint bisection.
    pub endpoint_tolerance: f64,
}

impl Default for TraceOptions {
    fn default() -> Self {
        Self {
            slow_grid: defaults::TRACE_GRID,
            detect: DetectOptions::default(),
            link_tolerance: 0.05,
            endpoint_tolerance: 1e-6,
        }
    }
}

/// An ordered polyline of first-order transitions.
#[derive(Debug, Clone, Serialize)]
pub struct TransitionLine {
    pub plane: Plane,
    /// Interior points, ordered by the slow coordinate.
    pub points: Vec<TransitionPoint>,
    /// Critical endpoint where the jump shrinks through 10·jump-threshold,
    /// when the line terminates inside the plane rather than at its edge.
    pub endpoint: Option<TransitionPoint>,
}

impl TransitionLine {
    /// (s, Δm) along the line, ordered by s.
    pub fn delta_m_along(&self) -> Vec<(f64, f64)> {
        let mut out: Vec<(f64, f64)> =
            self.points.iter().map(|pt| (pt.s, pt.delta_m)).collect();
        out.sort_by(|a, b| a.0.total_cmp(&b.0));
        out
    }
}

/// Result of tracing one plane: every polyline found, flagged when the set
/// is fragmented into more than one.
#[derive(Debug, Clone, Serialize)]
pub struct TraceResult {
    pub lines: Vec<TransitionLine>,
    pub fragmented: bool,
}

/// (s, Δm) series along a line, ordered by s.
pub fn delta_m_along_line(line: &TransitionLine) -> Vec<(f64, f64)> {
    line.delta_m_along()
}

struct Row {
    slow: f64,
    points: Vec<TransitionPoint>,
}

/// Trace every first-order transition line in a plane.
pub fn trace_line(model: &Model, plane: &Plane, opts: &TraceOptions) -> Result<TraceResult> {
    if opts.slow_grid < 2 {
        return Err(Error::domain("trace needs at least 2 slow-grid rows"));
    }
    plane_validate(plane)?;
    let n = opts.slow_grid;
    let slows: Vec<f64> = {
        let (lo, hi) = slow_range(plane);
        (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
    };
    let rows: Vec<Row> = slows
        .par_iter()
        .map(|&slow| {
            detect_row(model, plane, slow, &opts.detect, None).map(|points| Row { slow, points })
        })
        .collect::<Result<_>>()?;
    assemble_lines(model, plane, rows, opts)
}

fn plane_validate(plane: &Plane) -> Result<()> {
    match plane {
        Plane::Drive { temperature, tau_range } => {
            if *temperature < 0.0 {
                return Err(Error::domain("temperature must be nonnegative"));
            }
            range_check("tau", *tau_range, 0.0, 1.0)
        }
        Plane::Temperature { path, temperature_range } => {
            path.validate()?;
            if temperature_range.0 < 0.0 || temperature_range.1 <= temperature_range.0 {
                return Err(Error::domain("temperature range must be ordered and nonnegative"));
            }
            Ok(())
        }
    }
}

fn range_check(name: &str, r: (f64, f64), lo: f64, hi: f64) -> Result<()> {
    if r.0 < lo || r.1 > hi || r.1 <= r.0 {
        return Err(Error::domain(format!(
            "{name} range must be ordered within [{lo}, {hi}], got ({}, {})",
            r.0, r.1
        )));
    }
    Ok(())
}

fn slow_range(plane: &Plane) -> (f64, f64) {
    match plane {
        Plane::Drive { tau_range, .. } => *tau_range,
        Plane::Temperature { temperature_range, .. } => *temperature_range,
    }
}

/// All fast-axis transitions at one slow value. `window` restricts the scan
/// to a fast-interval (used by endpoint bisection probes).
fn detect_row(
    model: &Model,
    plane: &Plane,
    slow: f64,
    detect: &DetectOptions,
    window: Option<(f64, f64)>,
) -> Result<Vec<TransitionPoint>> {
    let (lo, hi) = window
        .map(|(a, b)| (a.max(0.0), b.min(1.0)))
        .unwrap_or((0.0, 1.0));
    if hi <= lo {
        return Ok(Vec::new());
    }
    match plane {
        Plane::Drive { temperature, .. } => {
            let mut spec = model.spec;
            spec.temperature = *temperature;
            let base = Model { spec, ..*model };
            meanfield::detect_transitions(&base, (lo, slow), (hi, slow), *detect)
        }
        Plane::Temperature { path, .. } => {
            let mut spec = model.spec;
            spec.temperature = slow;
            let base = Model { spec, ..*model };
            let landscape_at = |lam: f64| {
                let s = lo + (hi - lo) * lam;
                let tau = path.tau_at(s);
                meanfield::landscape_with(&base.at(s, tau), detect.landscape_grid)
            };
            let core = detect_transitions_core(&landscape_at, detect)?;
            Ok(core
                .into_iter()
                .map(|c| {
                    let s = lo + (hi - lo) * c.lambda;
                    TransitionPoint {
                        lambda: c.lambda,
                        s,
                        tau: path.tau_at(s),
                        temperature: slow,
                        branch_before: c.branch_before,
                        branch_after: c.branch_after,
                        delta_m: c.delta_m,
                        multiple: c.multiple,
                    }
                })
                .collect())
        }
    }
}

struct OpenLine {
    points: Vec<TransitionPoint>,
    slows: Vec<f64>,
    last_row: usize,
}

fn assemble_lines(
    model: &Model,
    plane: &Plane,
    rows: Vec<Row>,
    opts: &TraceOptions,
) -> Result<TraceResult> {
    let mut open: Vec<OpenLine> = Vec::new();
    let mut closed: Vec<(OpenLine, Option<f64>)> = Vec::new(); // + slow beyond the end
    for (ri, row) in rows.iter().enumerate() {
        let mut taken = vec![false; row.points.len()];
        // Greedy nearest matching between open lines (last points) and this
        // row's points; cost mixes fast-coordinate and jump-size proximity.
        let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
        for (li, line) in open.iter().enumerate() {
            if line.last_row + 1 != ri {
                continue;
            }
            let last = line.points.last().expect("open line has points");
            for (pi, pt) in row.points.iter().enumerate() {
                let dfast = (pt.s - last.s).abs();
                if dfast <= opts.link_tolerance {
                    pairs.push((dfast + (pt.delta_m - last.delta_m).abs(), li, pi));
                }
            }
        }
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut line_used = vec![false; open.len()];
        for &(_, li, pi) in &pairs {
            if line_used[li] || taken[pi] {
                continue;
            }
            open[li].points.push(row.points[pi]);
            open[li].slows.push(row.slow);
            open[li].last_row = ri;
            line_used[li] = true;
            taken[pi] = true;
        }
        // Lines that found no continuation end just before this row.
        let mut still_open = Vec::new();
        for (li, line) in open.into_iter().enumerate() {
            if line.last_row + 1 == ri && !line_used[li] {
                closed.push((line, Some(row.slow)));
            } else {
                still_open.push(line);
            }
        }
        open = still_open;
        // Unmatched points start new lines.
        for (pi, pt) in row.points.iter().enumerate() {
            if !taken[pi] {
                open.push(OpenLine { points: vec![*pt], slows: vec![row.slow], last_row: ri });
            }
        }
    }
    for line in open {
        closed.push((line, None));
    }
    closed.sort_by(|a, b| {
        a.0.slows[0]
            .total_cmp(&b.0.slows[0])
            .then(a.0.points[0].s.total_cmp(&b.0.points[0].s))
    });

    let (slow_lo, slow_hi) = slow_range(plane);
    let mut lines = Vec::with_capacity(closed.len());
    for (line, after) in closed {
        // Candidate endpoints where the line stops inside the plane: refine
        // whichever terminal side dissolves, preferring the smaller jump.
        let mut endpoint: Option<TransitionPoint> = None;
        let first_slow = line.slows[0];
        let last_slow = *line.slows.last().expect("line has rows");
        let mut candidates: Vec<(f64, f64, f64, TransitionPoint)> = Vec::new();
        if let Some(next_slow) = after {
            let seed = *line.points.last().expect("nonempty");
            candidates.push((seed.delta_m, last_slow, next_slow, seed));
        }
        if first_slow > slow_lo {
            let row_step = (slow_hi - slow_lo) / (opts.slow_grid - 1).max(1) as f64;
            let seed = line.points[0];
            candidates.push((seed.delta_m, first_slow, first_slow - row_step, seed));
        }
        candidates.sort_by(|a, b| a.0.total_cmp(&b.0));
        if let Some(&(_, with, without, seed)) = candidates.first() {
            endpoint = refine_endpoint(model, plane, with, without, &seed, opts)?;
        }
        lines.push(TransitionLine { plane: plane.clone(), points: line.points, endpoint });
    }
    let fragmented = lines.len() > 1;
    Ok(TraceResult { lines, fragmented })
}

/// Bisect the slow coordinate between a row where the jump exists
/// (Δm > 10·jump-threshold) and one where it has dissolved. The probe scans
/// only a fast window around the last known transition.
fn refine_endpoint(
    model: &Model,
    plane: &Plane,
    mut slow_with: f64,
    mut slow_without: f64,
    seed: &TransitionPoint,
    opts: &TraceOptions,
) -> Result<Option<TransitionPoint>> {
    let mut fast_seed = seed.s;
    let mut last_found = *seed;
    let probe_opts = DetectOptions {
        scan_grid: 41,
        jump_threshold: defaults::ENDPOINT_DELTA_M,
        ..opts.detect
    };
    let window = 0.12f64.max(2.0 * opts.link_tolerance);
    for _ in 0..80 {
        if (slow_with - slow_without).abs() <= opts.endpoint_tolerance {
            break;
        }
        let mid = 0.5 * (slow_with + slow_without);
        let pts = detect_row(
            model,
            plane,
            mid,
            &probe_opts,
            Some((fast_seed - window, fast_seed + window)),
        )?;
        let near = pts
            .into_iter()
            .min_by(|a, b| (a.s - fast_seed).abs().total_cmp(&(b.s - fast_seed).abs()));
        match near {
            Some(pt) if pt.delta_m > defaults::ENDPOINT_DELTA_M => {
                slow_with = mid;
                fast_seed = pt.s;
                last_found = pt;
            }
            _ => {
                slow_without = mid;
            }
        }
    }
    Ok(Some(last_found))
}

// ═══════════════════════════════════════════════════════════════════════════
// Path scans
// ═══════════════════════════════════════════════════════════════════════════

/// What to evaluate along an annealing path.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Quantity {
    /// Minimal semiclassical excitation gap (sharp-step drive profile).
    Gap,
    /// Entanglement entropy of a fraction-u cut (sharp-step drive profile).
    Entropy { u: f64 },
    /// Equilibrium magnetization of the model's own schedule.
    Magnetization,
    /// Equilibrium free energy of the model's own schedule.
    FreeEnergy,
}

/// One sample of a path scan. `value` is None where the quadratic expansion
/// has broken down (|ε| ≥ 1); the flag names the reason.
#[derive(Debug, Clone, Serialize)]
pub struct PathSample {
    pub s: f64,
    pub tau: f64,
    pub value: Option<f64>,
    pub flag: Option<String>,
}

/// Evaluate a quantity along τ = path(s). Semiclassical quantities (gap,
/// entropy) always refer to the sharp-step profile; magnetization and free
/// energy use the model's schedule and temperature.
pub fn path_scan(
    model: &Model,
    path: &PathSpec,
    quantity: Quantity,
    resolution: usize,
) -> Result<Vec<PathSample>> {
    if resolution < 2 {
        return Err(Error::domain("path scan needs at least 2 samples"));
    }
    path.validate()?;
    if let Quantity::Entropy { u } = quantity {
        if !(0.0..=1.0).contains(&u) {
            return Err(Error::domain(format!("cut fraction must lie in [0, 1], got {u}")));
        }
    }
    let grid: Vec<f64> =
        (0..resolution).map(|i| i as f64 / (resolution - 1) as f64).collect();
    grid.par_iter()
        .map(|&s| {
            let tau = path.tau_at(s);
            let sample = |value: Option<f64>, flag: Option<String>| PathSample {
                s,
                tau,
                value,
                flag,
            };
            match quantity {
                Quantity::Gap => {
                    let g = semiclassical::gap_components(model.spec.p, s, tau)?;
                    if g.breakdown {
                        Ok(sample(None, Some("epsilon-breakdown".into())))
                    } else {
                        Ok(sample(
                            Some(g.min_gap()),
                            g.degenerate.then(|| "degenerate-angle".into()),
                        ))
                    }
                }
                Quantity::Entropy { u } => {
                    let e = semiclassical::entanglement_entropy(model.spec.p, s, tau, u)?;
                    if e.divergent {
                        Ok(sample(None, Some("entropy-divergent".into())))
                    } else {
                        Ok(sample(Some(e.entropy), None))
                    }
                }
                Quantity::Magnetization => {
                    let eq = meanfield::equilibrium(&model.at(s, tau))?;
                    Ok(sample(Some(eq.m), None))
                }
                Quantity::FreeEnergy => {
                    let eq = meanfield::equilibrium(&model.at(s, tau))?;
                    Ok(sample(Some(eq.free_energy), None))
                }
            }
        })
        .collect()
}

// ═══════════════════════════════════════════════════════════════════════════
// Minimal-gap scaling
// ═══════════════════════════════════════════════════════════════════════════

/// One fitted model ln(gap) = slope·x + intercept, with x = ln N (power law)
/// or x = N (exponential).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct FitLine {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
}

/// How the minimal gap closes with system size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ScalingVerdict {
    Polynomial,
    Exponential,
    /// |R²_poly − R²_exp| below the decision margin.
    Marginal,
}

/// Minimal-gap-vs-N data with both candidate fits and a verdict.
#[derive(Debug, Clone, Serialize)]
pub struct ScalingFit {
    /// (N, minimal gap) pairs actually computed.
    pub data: Vec<(usize, f64)>,
    pub power_law: FitLine,
    pub exponential: FitLine,
    pub verdict: ScalingVerdict,
    /// Set when some system sizes failed; `data` then holds the sizes that
    /// succeeded before the failure.
    pub truncated: Option<String>,
}

/// Per N: minimize the finite-N gap of the diagonal-step drive over the
/// ramp path τ(s) = max(0, (s−a)/(1−a)), then fit ln(gap) against ln N and
/// against N and compare.
pub fn min_gap_scaling(
    p: u32,
    a: f64,
    n_list: &[usize],
    resolution: usize,
) -> Result<ScalingFit> {
    if n_list.len() < 2 {
        return Err(Error::domain("scaling fit needs at least 2 system sizes"));
    }
    if n_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::domain("system sizes must be strictly increasing"));
    }
    let path =
        if a == 0.0 { PathSpec::TauEqS } else { PathSpec::Ramp { a } };
    path.validate()?;
    let mut data: Vec<(usize, f64)> = Vec::with_capacity(n_list.len());
    let mut truncated = None;
    let results: Vec<(usize, Result<f64>)> = n_list
        .par_iter()
        .map(|&n| {
            let curve = crate::exactdiag::gap_curve(
                p,
                n,
                crate::model::FieldSchedule::StepDiagonal { n },
                &path,
                resolution,
            );
            (n, curve.map(|c| c.minimum.gap))
        })
        .collect();
    for (n, res) in results {
        match res {
            Ok(gap) => data.push((n, gap)),
            Err(e) => {
                truncated = Some(format!("N={n}: {e}"));
                break;
            }
        }
    }
    if data.len() < 2 {
        return Err(Error::convergence(
            "fewer than 2 system sizes diagonalized; no fit possible",
        ));
    }
    let lng: Vec<f64> = data.iter().map(|&(_, g)| g.ln()).collect();
    let lnn: Vec<f64> = data.iter().map(|&(n, _)| (n as f64).ln()).collect();
    let ns: Vec<f64> = data.iter().map(|&(n, _)| n as f64).collect();
    let (ps, pi, pr2) = math::linear_fit(&lnn, &lng);
    let (es, ei, er2) = math::linear_fit(&ns, &lng);
    let power_law = FitLine { slope: ps, intercept: pi, r2: pr2 };
    let exponential = FitLine { slope: es, intercept: ei, r2: er2 };
    let verdict = if (pr2 - er2).abs() < defaults::R2_MARGIN {
        ScalingVerdict::Marginal
    } else if pr2 > er2 {
        ScalingVerdict::Polynomial
    } else {
        ScalingVerdict::Exponential
    };
    Ok(ScalingFit { data, power_law, exponential, verdict, truncated })
}

// ═══════════════════════════════════════════════════════════════════════════
// Monotone clear-path search
// ═══════════════════════════════════════════════════════════════════════════

/// Search for a monotone (s and τ both nondecreasing) staircase from (0, 0)
/// to (1, 1) that avoids every traced transition line. Returns the waypoint
/// list when one exists. Cells crossed by any line segment are blocked
/// conservatively (segments are super-sampled at sub-cell resolution).
pub fn find_clear_path(trace: &TraceResult, cells: usize) -> Option<Vec<(f64, f64)>> {
    let n = cells.max(8);
    let mut blocked = vec![false; n * n];
    let clamp_cell = |x: f64| -> usize {
        ((x * n as f64) as usize).min(n - 1)
    };
    let mut mark = |s: f64, tau: f64| {
        blocked[clamp_cell(tau) * n + clamp_cell(s)] = true;
    };
    for line in &trace.lines {
        let mut pts: Vec<(f64, f64)> =
            line.points.iter().map(|p| (p.s, p.tau)).collect();
        if let Some(e) = &line.endpoint {
            pts.push((e.s, e.tau));
        }
        for w in pts.windows(2) {
            let ((s0, t0), (s1, t1)) = (w[0], w[1]);
            let steps = (((s1 - s0).abs().max((t1 - t0).abs()) * n as f64 * 4.0).ceil()
                as usize)
                .max(1);
            for k in 0..=steps {
                let f = k as f64 / steps as f64;
                mark(s0 + (s1 - s0) * f, t0 + (t1 - t0) * f);
            }
        }
        if pts.len() == 1 {
            mark(pts[0].0, pts[0].1);
        }
    }
    // BFS over monotone moves (right, up) on the cell grid.
    if blocked[0] || blocked[n * n - 1] {
        return None;
    }
    let mut prev: Vec<Option<usize>> = vec![None; n * n];
    let mut seen = vec![false; n * n];
    let mut queue = std::collections::VecDeque::new();
    seen[0] = true;
    queue.push_back(0usize);
    while let Some(idx) = queue.pop_front() {
        if idx == n * n - 1 {
            let mut cell_path = vec![idx];
            let mut cur = idx;
            while let Some(p) = prev[cur] {
                cell_path.push(p);
                cur = p;
            }
            cell_path.reverse();
            return Some(
                cell_path
                    .into_iter()
                    .map(|i| {
                        let (row, col) = (i / n, i % n);
                        (
                            (col as f64 + 0.5) / n as f64,
                            (row as f64 + 0.5) / n as f64,
                        )
                    })
                    .collect(),
            );
        }
        let (row, col) = (idx / n, idx % n);
        let mut push = |next: usize| {
            if !seen[next] && !blocked[next] {
                seen[next] = true;
                prev[next] = Some(idx);
                queue.push_back(next);
            }
        };
        if col + 1 < n {
            push(idx + 1);
        }
        if row + 1 < n {
            push(idx + n);
        }
    }
    None
}

// ═══════════════════════════════════════════════════════════════════════════
// Tests
// ═══════════════════════════════════════════════════════════════════════════

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Disorder, FieldSchedule, ModelSpec};

    fn base_model(p: u32, temperature: f64, schedule: FieldSchedule, disorder: Disorder) -> Model {
        Model { spec: ModelSpec { p, s: 0.0, tau: 0.0, temperature }, schedule, disorder }
    }

    fn quick_opts(slow_grid: usize) -> TraceOptions {
        TraceOptions {
            slow_grid,
            detect: DetectOptions {
                scan_grid: 81,
                landscape_grid: 1201,
                ..DetectOptions::default()
            },
            ..TraceOptions::default()
        }
    }

    #[test]
    fn step_line_starts_on_axis_and_ends_inside() {
        let model = base_model(3, 0.0, FieldSchedule::StepIdeal, Disorder::None);
        let plane = Plane::Drive { temperature: 0.0, tau_range: (0.0, 1.0) };
        let trace = trace_line(&model, &plane, &quick_opts(61)).unwrap();
        assert_eq!(trace.lines.len(), 1, "one first-order line expected");
        assert!(!trace.fragmented);
        let line = &trace.lines[0];
        // Axis point equals the uniform-field anchor.
        let first = &line.points[0];
        assert_eq!(first.tau, 0.0);
        assert!((first.s - 4.0 * 3f64.sqrt() / 9.0).abs() <= 1e-6, "axis s = {}", first.s);
        // Jumps stay above threshold on interior points and the line ends
        // at an interior critical endpoint, not the τ = 1 edge.
        for pt in &line.points {
            assert!(pt.delta_m > defaults::JUMP_THRESHOLD);
        }
        let end = line.endpoint.as_ref().expect("interior endpoint");
        assert!(end.tau > 0.0 && end.tau < 0.9, "endpoint tau = {}", end.tau);
        assert!(
            end.delta_m <= 0.12,
            "endpoint jump should be nearly closed, got {}",
            end.delta_m
        );
        // Every point sits below the τ = s diagonal: the diagonal path
        // clears the line.
        for pt in &line.points {
            assert!(pt.tau < pt.s, "line crosses the diagonal at ({}, {})", pt.s, pt.tau);
        }
    }

    #[test]
    fn trace_is_resolution_stable() {
        let model = base_model(3, 0.0, FieldSchedule::StepIdeal, Disorder::None);
        let plane = Plane::Drive { temperature: 0.0, tau_range: (0.0, 0.2) };
        let coarse = trace_line(&model, &plane, &quick_opts(21)).unwrap();
        let fine = trace_line(&model, &plane, &quick_opts(41)).unwrap();
        let (cl, fl) = (&coarse.lines[0], &fine.lines[0]);
        // Every coarse row appears in the fine trace (fine grid is a
        // superset) with the same fast coordinate to bisection accuracy.
        for pt in &cl.points {
            let twin = fl
                .points
                .iter()
                .min_by(|a, b| (a.tau - pt.tau).abs().total_cmp(&(b.tau - pt.tau).abs()))
                .unwrap();
            assert!((twin.tau - pt.tau).abs() <= 1e-12, "row mismatch");
            assert!(
                (twin.s - pt.s).abs() <= 1e-6,
                "fast coordinate moved: {} vs {}",
                twin.s,
                pt.s
            );
        }
    }

    #[test]
    fn finite_temperature_splits_the_plane_into_two_lines() {
        // At T = 0.01 a second, small-jump line exists near the diagonal in
        // addition to the remnant of the T = 0 line.
        let model = base_model(3, 0.01, FieldSchedule::StepIdeal, Disorder::None);
        let plane = Plane::Drive { temperature: 0.01, tau_range: (0.0, 1.0) };
        let trace = trace_line(&model, &plane, &quick_opts(81)).unwrap();
        assert!(
            trace.lines.len() >= 2,
            "expected fragmentation at low T, got {} line(s)",
            trace.lines.len()
        );
        assert!(trace.fragmented);
    }

    #[test]
    fn diagonal_path_transition_appears_only_at_finite_temperature() {
        let cold = base_model(3, 0.0, FieldSchedule::StepIdeal, Disorder::None);
        let pts_cold = meanfield::detect_transitions(
            &cold,
            (0.0, 0.0),
            (1.0, 1.0),
            DetectOptions::default(),
        )
        .unwrap();
        assert!(pts_cold.is_empty(), "τ = s is transition-free at T = 0");
        let warm = base_model(3, 0.01, FieldSchedule::StepIdeal, Disorder::None);
        let pts_warm = meanfield::detect_transitions(
            &warm,
            (0.0, 0.0),
            (1.0, 1.0),
            DetectOptions::default(),
        )
        .unwrap();
        assert_eq!(pts_warm.len(), 1, "a new first-order line crosses τ = s at T = 0.01");
        assert!(pts_warm[0].delta_m > defaults::JUMP_THRESHOLD);
    }

    #[test]
    fn gap_scan_along_diagonal_stays_open() {
        let model = base_model(3, 0.0, FieldSchedule::StepIdeal, Disorder::None);
        let scan = path_scan(&model, &PathSpec::TauEqS, Quantity::Gap, 41).unwrap();
        let values: Vec<f64> = scan.iter().map(|pt| pt.value.unwrap()).collect();
        // Transverse-field gap 2 at the start, 2p at the fully quenched end.
        assert_eq!(values[0], 2.0);
        assert!((values[values.len() - 1] - 6.0).abs() <= 1e-12);
        // Strictly positive everywhere: the diagonal path never touches a
        // closing gap, though the frozen-spin branch scales like 2ps³ at
        // small s before growing again.
        for (pt, v) in scan.iter().zip(&values) {
            assert!(*v > 0.0, "gap closed at s = {}", pt.s);
        }
        assert!((values[2] - 6.0 * 0.05f64.powi(3)).abs() <= 1e-9, "got {}", values[2]);
        for w in values[4..].windows(2) {
            assert!(w[1] >= w[0] - 1e-9, "gap should grow beyond onset: {w:?}");
        }
    }

    #[test]
    fn entropy_scan_flags_breakdown_near_touching_point() {
        let model = base_model(3, 0.0, FieldSchedule::StepIdeal, Disorder::None);
        let path = PathSpec::TauPower { c: 2.366 };
        let scan = path_scan(&model, &path, Quantity::Entropy { u: 0.5 }, 201).unwrap();
        assert!(scan.iter().all(|p| p.value.is_some()), "finite along genuine minima");
        let peak = scan
            .iter()
            .max_by(|a, b| a.value.unwrap().total_cmp(&b.value.unwrap()))
            .unwrap();
        assert!(
            peak.value.unwrap() > 0.3,
            "entropy spikes near the critical touch, max {}",
            peak.value.unwrap()
        );
        assert!((peak.s - 0.52).abs() <= 0.01, "peak location s = {}", peak.s);
    }

    #[test]
    fn magnetization_scan_jumps_at_homogeneous_axis_point() {
        let model = base_model(3, 0.0, FieldSchedule::StepIdeal, Disorder::None);
        let scan =
            path_scan(&model, &PathSpec::HomogeneousAxis, Quantity::Magnetization, 201).unwrap();
        let mut max_jump = 0.0f64;
        for w in scan.windows(2) {
            max_jump = max_jump.max((w[1].value.unwrap() - w[0].value.unwrap()).abs());
        }
        assert!(max_jump > 0.8, "first-order jump visible, got {max_jump}");
    }

    #[test]
    fn scaling_fit_distinguishes_polynomial_from_exponential() {
        // Small-N smoke test of the fitting plumbing: τ = s (a = 0) closes
        // polynomially, a late ramp (a = 0.8) exponentially.
        let poly = min_gap_scaling(3, 0.0, &[8, 12, 16, 20, 24], 61).unwrap();
        assert_eq!(poly.verdict, ScalingVerdict::Polynomial, "{poly:?}");
        assert!(poly.truncated.is_none());
        // A late ramp needs somewhat larger sizes before the exponential
        // closing dominates the fit.
        let exp = min_gap_scaling(3, 0.8, &[16, 28, 40, 52, 64], 61).unwrap();
        assert_eq!(exp.verdict, ScalingVerdict::Exponential, "{exp:?}");
        assert!(exp.power_law.r2 <= exp.exponential.r2);
    }

    #[test]
    fn clear_path_exists_when_line_has_interior_endpoint() {
        let model = base_model(3, 0.0, FieldSchedule::StepIdeal, Disorder::None);
        let plane = Plane::Drive { temperature: 0.0, tau_range: (0.0, 1.0) };
        let trace = trace_line(&model, &plane, &quick_opts(61)).unwrap();
        let path = find_clear_path(&trace, 64).expect("diagonal region is open");
        // Monotone and tied to the corners.
        for w in path.windows(2) {
            assert!(w[1].0 >= w[0].0 - 1e-12 && w[1].1 >= w[0].1 - 1e-12);
        }
        assert!(path.first().unwrap().0 < 0.02 && path.last().unwrap().0 > 0.98);
    }

    #[test]
    fn clear_path_blocked_by_a_full_wall() {
        // Synthetic wall χ: s = 0.5 for all τ blocks every monotone path.
        let model = base_model(3, 0.0, FieldSchedule::StepIdeal, Disorder::None);
        let plane = Plane::Drive { temperature: 0.0, tau_range: (0.0, 1.0) };
        let mk = |s: f64, tau: f64| TransitionPoint {
            lambda: s,
            s,
            tau,
            temperature: 0.0,
            branch_before: meanfield::Minimum { m: 0.0, free_energy: 0.0 },
            branch_after: meanfield::Minimum { m: 0.9, free_energy: 0.0 },
            delta_m: 0.9,
            multiple: false,
        };
        let points: Vec<TransitionPoint> =
            (0..=100).map(|i| mk(0.5, i as f64 / 100.0)).collect();
        let wall = TraceResult {
            lines: vec![TransitionLine { plane: plane.clone(), points, endpoint: None }],
            fragmented: false,
        };
        assert!(find_clear_path(&wall, 64).is_none());
        let _ = model;
    }

    #[test]
    fn rejects_bad_arguments() {
        let model = base_model(3, 0.0, FieldSchedule::StepIdeal, Disorder::None);
        let plane = Plane::Drive { temperature: 0.0, tau_range: (0.0, 1.0) };
        assert!(trace_line(&model, &plane, &quick_opts(1)).is_err());
        assert!(path_scan(&model, &PathSpec::TauEqS, Quantity::Gap, 1).is_err());
        assert!(path_scan(&model, &PathSpec::TauEqS, Quantity::Entropy { u: 2.0 }, 11).is_err());
        assert!(min_gap_scaling(3, 0.0, &[8], 21).is_err());
        assert!(min_gap_scaling(3, 0.0, &[8, 8], 21).is_err());
    }
}
