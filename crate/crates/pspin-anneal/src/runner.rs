//! Orchestration: turn one [`RunConfig`] into one [`Artifact`].
//!
//! Each command builds its table in grid order and collects numerical flags
//! as warnings, so identical configs produce byte-identical artifacts no
//! matter how many worker threads execute the sweep. Errors are reserved for
//! invalid configurations and failed solves; flagged-but-finished points
//! travel as warnings and `flag` columns instead.

use crate::classical::{self, SASpec};
use crate::config::{Command, RunConfig};
use crate::error::{Error, Result};
use crate::exactdiag;
use crate::meanfield::{self, DetectOptions};
use crate::model::{defaults, FieldSchedule, PathSpec};
use crate::output::{sig12, sig12_opt, Artifact, Table};
use crate::semiclassical;
use crate::sweep::{self, Plane, Quantity, TraceOptions};

/// Default top of the swept temperature range for temperature-plane traces.
const DEFAULT_T_MAX: f64 = 0.05;

/// Execute a run, honoring `threads` by pinning a dedicated worker pool.
pub fn run(config: &RunConfig) -> Result<Artifact> {
    config.validate()?;
    if config.threads == 0 {
        return dispatch(config);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads)
        .build()
        .map_err(|e| Error::Config(format!("cannot build a {}-thread pool: {e}", config.threads)))?;
    pool.install(|| dispatch(config))
}

fn dispatch(config: &RunConfig) -> Result<Artifact> {
    match config.command {
        Command::PhaseDiagram => phase_diagram(config),
        Command::Gap => gap(config),
        Command::GapScaling => gap_scaling(config),
        Command::DeltaM => delta_m(config),
        Command::Entropy => entropy(config),
        Command::Sa => sa(config),
        Command::Svmc => svmc(config),
        Command::Landscape => landscape(config),
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

/// The plane a trace runs in: the drive plane (s, τ) at the configured
/// temperature, or — when a path is set — the temperature plane (s, T) with
/// τ locked to the path and T swept up to `temperature` (default 0.05).
fn plane_for(config: &RunConfig) -> Plane {
    match &config.path {
        Some(path) => {
            let t_max = if config.temperature > 0.0 { config.temperature } else { DEFAULT_T_MAX };
            Plane::Temperature { path: path.clone(), temperature_range: (0.0, t_max) }
        }
        None => Plane::Drive { temperature: config.temperature, tau_range: (0.0, 1.0) },
    }
}

fn trace_options(config: &RunConfig) -> TraceOptions {
    let mut opts = TraceOptions::default();
    if let Some(grid) = config.grid {
        opts.slow_grid = grid;
    }
    opts
}

fn describe_detect(art: &mut Artifact, detect: &DetectOptions) {
    art.meta("scan-grid", detect.scan_grid.to_string());
    art.meta("landscape-grid", detect.landscape_grid.to_string());
    art.meta("jump-threshold", sig12(detect.jump_threshold));
}

fn trace(config: &RunConfig) -> Result<(sweep::TraceResult, TraceOptions, Plane)> {
    let plane = plane_for(config);
    let opts = trace_options(config);
    let model = config.model()?;
    let result = sweep::trace_line(&model, &plane, &opts)?;
    Ok((result, opts, plane))
}

fn slow_label(plane: &Plane) -> &'static str {
    match plane {
        Plane::Drive { .. } => "tau",
        Plane::Temperature { .. } => "temperature",
    }
}

fn point_slow(plane: &Plane, pt: &meanfield::TransitionPoint) -> f64 {
    match plane {
        Plane::Drive { .. } => pt.tau,
        Plane::Temperature { .. } => pt.temperature,
    }
}

fn phase_diagram(config: &RunConfig) -> Result<Artifact> {
    let (result, opts, plane) = trace(config)?;
    let mut art = Artifact::new(config);
    art.meta("plane", match &plane {
        Plane::Drive { temperature, .. } => format!("drive (s, tau) at T = {}", sig12(*temperature)),
        Plane::Temperature { path, temperature_range } => format!(
            "temperature (s, T) along path {path}, T in [{}, {}]",
            sig12(temperature_range.0),
            sig12(temperature_range.1)
        ),
    });
    art.meta("slow-grid", opts.slow_grid.to_string());
    describe_detect(&mut art, &opts.detect);
    art.meta("link-tolerance", sig12(opts.link_tolerance));
    art.meta("endpoint-delta-m", sig12(defaults::ENDPOINT_DELTA_M));
    art.meta("lines", result.lines.len().to_string());
    art.meta("fragmented", result.fragmented.to_string());
    if result.fragmented {
        art.warn("trace fragmented into multiple polylines; check link-tolerance");
    }

    let mut table = Table::new([
        "line", "kind", slow_label(&plane), "s", "tau", "temperature", "delta_m", "m_before",
        "m_after", "free_energy",
    ]);
    for (i, line) in result.lines.iter().enumerate() {
        let rows = line
            .points
            .iter()
            .map(|p| (p, "point"))
            .chain(line.endpoint.iter().map(|p| (p, "endpoint")));
        for (p, kind) in rows {
            table.push(vec![
                i.to_string(),
                kind.to_string(),
                sig12(point_slow(&plane, p)),
                sig12(p.s),
                sig12(p.tau),
                sig12(p.temperature),
                sig12(p.delta_m),
                sig12(p.branch_before.m),
                sig12(p.branch_after.m),
                sig12(p.branch_after.free_energy),
            ]);
        }
        if let Some(e) = &line.endpoint {
            art.meta(
                &format!("line-{i}-endpoint"),
                format!("s = {}, {} = {}", sig12(e.s), slow_label(&plane), sig12(point_slow(&plane, e))),
            );
        }
    }
    art.table = table;
    art.attach(&result);
    Ok(art)
}

fn delta_m(config: &RunConfig) -> Result<Artifact> {
    let (result, opts, plane) = trace(config)?;
    let mut art = Artifact::new(config);
    art.meta("slow-grid", opts.slow_grid.to_string());
    describe_detect(&mut art, &opts.detect);
    art.meta("lines", result.lines.len().to_string());

    let mut table = Table::new(["line", slow_label(&plane), "s", "tau", "delta_m"]);
    for (i, line) in result.lines.iter().enumerate() {
        for p in &line.points {
            table.push(vec![
                i.to_string(),
                sig12(point_slow(&plane, p)),
                sig12(p.s),
                sig12(p.tau),
                sig12(p.delta_m),
            ]);
        }
        if let Some((lo, hi)) = line
            .points
            .iter()
            .map(|p| p.delta_m)
            .fold(None, |acc: Option<(f64, f64)>, d| {
                Some(acc.map_or((d, d), |(lo, hi)| (lo.min(d), hi.max(d))))
            })
        {
            art.meta(&format!("line-{i}-delta-m-range"), format!("{} .. {}", sig12(lo), sig12(hi)));
        }
    }
    art.table = table;
    art.attach(&result);
    Ok(art)
}

/// The diagonal-step realization of a schedule at finite N: the ideal sharp
/// step (and an explicitly sized diagonal step) bind their profile to the
/// chain being diagonalized.
fn finite_n_schedule(schedule: FieldSchedule, n: usize) -> FieldSchedule {
    match schedule {
        FieldSchedule::StepIdeal | FieldSchedule::StepDiagonal { .. } => {
            FieldSchedule::StepDiagonal { n }
        }
        other => other,
    }
}

fn gap(config: &RunConfig) -> Result<Artifact> {
    let path = config.path.clone().unwrap_or(PathSpec::TauEqS);
    let resolution = config.grid.unwrap_or(201);
    let model = config.model()?;
    let samples = sweep::path_scan(&model, &path, Quantity::Gap, resolution)?;

    let mut art = Artifact::new(config);
    art.meta("path", path.to_string());
    art.meta("resolution", resolution.to_string());

    let mut columns = vec![
        "s".to_string(),
        "tau".to_string(),
        "theta0".to_string(),
        "delta_a1".to_string(),
        "delta_a2".to_string(),
        "delta_b".to_string(),
        "min_gap".to_string(),
        "flag".to_string(),
    ];
    for &n in &config.n {
        columns.push(format!("gap_n{n}"));
    }
    let mut table = Table::new(columns);

    // Finite-N gaps, computed per size in parallel over the same s-grid.
    let finite: Vec<Vec<f64>> = config
        .n
        .iter()
        .map(|&n| -> Result<Vec<f64>> {
            let schedule = finite_n_schedule(config.schedule, n);
            samples
                .iter()
                .map(|smp| {
                    exactdiag::spectrum(config.p, n, schedule, smp.s, smp.tau).map(|sp| sp.gap)
                })
                .collect()
        })
        .collect::<Result<_>>()?;

    let mut best: Option<(f64, f64)> = None;
    let mut flagged = 0usize;
    for (i, smp) in samples.iter().enumerate() {
        let comps = semiclassical::gap_components(config.p, smp.s, smp.tau)?;
        let min_gap = if comps.breakdown { None } else { Some(comps.min_gap()) };
        if let Some(g) = min_gap {
            if best.map(|(b, _)| g < b).unwrap_or(true) {
                best = Some((g, smp.s));
            }
        }
        if smp.flag.is_some() {
            flagged += 1;
        }
        let mut row = vec![
            sig12(smp.s),
            sig12(smp.tau),
            sig12(comps.theta0),
            if comps.breakdown { String::new() } else { sig12(comps.delta_a1) },
            sig12(comps.delta_a2),
            sig12(comps.delta_b),
            sig12_opt(min_gap),
            smp.flag.clone().unwrap_or_default(),
        ];
        for col in &finite {
            row.push(sig12(col[i]));
        }
        table.push(row);
    }
    if let Some((g, s)) = best {
        art.meta("min-gap", format!("{} at s = {}", sig12(g), sig12(s)));
    }
    if flagged > 0 {
        art.warn(format!("{flagged} of {} samples flagged (quadratic expansion breakdown)", samples.len()));
    }
    for (&n, col) in config.n.iter().zip(&finite) {
        let (mut g, mut s) = (f64::INFINITY, 0.0);
        for (smp, &v) in samples.iter().zip(col) {
            if v < g {
                g = v;
                s = smp.s;
            }
        }
        art.meta(&format!("min-gap-n{n}"), format!("{} at s = {}", sig12(g), sig12(s)));
    }
    art.table = table;
    art.attach(&samples);
    Ok(art)
}

fn gap_scaling(config: &RunConfig) -> Result<Artifact> {
    let default_sizes: Vec<usize> = (1..=7).map(|k| 10 * k).collect();
    let sizes = if config.n.is_empty() { &default_sizes } else { &config.n };
    let resolution = config.grid.unwrap_or(201);
    let a = config.ramp_offset();
    let fit = sweep::min_gap_scaling(config.p, a, sizes, resolution)?;

    let mut art = Artifact::new(config);
    art.meta("ramp-offset", sig12(a));
    art.meta("resolution", resolution.to_string());
    art.meta(
        "power-law-fit",
        format!(
            "ln g = {}·ln N + {} (r2 = {})",
            sig12(fit.power_law.slope),
            sig12(fit.power_law.intercept),
            sig12(fit.power_law.r2)
        ),
    );
    art.meta(
        "exponential-fit",
        format!(
            "ln g = {}·N + {} (r2 = {})",
            sig12(fit.exponential.slope),
            sig12(fit.exponential.intercept),
            sig12(fit.exponential.r2)
        ),
    );
    art.meta("r2-margin", sig12(defaults::R2_MARGIN));
    art.meta("verdict", format!("{:?}", fit.verdict).to_lowercase());
    if let Some(t) = &fit.truncated {
        art.warn(format!("scaling truncated: {t}"));
    }

    let mut table = Table::new(["n", "min_gap", "ln_n", "ln_min_gap"]);
    for &(n, g) in &fit.data {
        table.push(vec![n.to_string(), sig12(g), sig12((n as f64).ln()), sig12(g.ln())]);
    }
    art.table = table;
    art.attach(&fit);
    Ok(art)
}

fn entropy(config: &RunConfig) -> Result<Artifact> {
    let path = config.path.clone().unwrap_or(PathSpec::TauEqS);
    let resolution = config.grid.unwrap_or(201);
    let model = config.model()?;
    let samples = sweep::path_scan(&model, &path, Quantity::Entropy { u: config.u }, resolution)?;

    let mut art = Artifact::new(config);
    art.meta("path", path.to_string());
    art.meta("resolution", resolution.to_string());
    art.meta("cut-fraction-u", sig12(config.u));

    let mut table = Table::new(["s", "tau", "entropy", "flag"]);
    let mut peak: Option<(f64, f64)> = None;
    let mut flagged = 0usize;
    for smp in &samples {
        if let Some(v) = smp.value {
            if peak.map(|(p, _)| v > p).unwrap_or(true) {
                peak = Some((v, smp.s));
            }
        }
        if smp.flag.is_some() {
            flagged += 1;
        }
        table.push(vec![
            sig12(smp.s),
            sig12(smp.tau),
            sig12_opt(smp.value),
            smp.flag.clone().unwrap_or_default(),
        ]);
    }
    if let Some((v, s)) = peak {
        art.meta("max-entropy", format!("{} at s = {}", sig12(v), sig12(s)));
    }
    if flagged > 0 {
        art.warn(format!("{flagged} of {} samples flagged (divergent or broken-down points)", samples.len()));
    }
    art.table = table;
    art.attach(&samples);
    Ok(art)
}

fn sa(config: &RunConfig) -> Result<Artifact> {
    let spec = SASpec { p: config.p, beta0: config.beta0, tau: 0.0, disorder: config.disorder };
    let grid = linspace(0.0, 1.0, config.grid.unwrap_or(defaults::TRACE_GRID));
    let curve = classical::sa_order_parameter_curve(&spec, &grid)?;

    let mut art = Artifact::new(config);
    art.meta("beta0", sig12(config.beta0));
    art.meta("tau-grid", grid.len().to_string());
    art.meta("transitions", curve.transitions.len().to_string());
    for (i, t) in curve.transitions.iter().enumerate() {
        art.meta(
            &format!("transition-{i}"),
            format!("tau = {}, delta_m = {}", sig12(t.tau), sig12(t.delta_m)),
        );
    }
    art.meta("note", "m_normalized rescales m by its reachable half-width tau*beta0");

    let mut table = Table::new(["tau", "m", "m_normalized", "free_energy"]);
    for p in &curve.points {
        table.push(vec![
            sig12(p.tau),
            sig12(p.m),
            sig12(p.m_normalized),
            sig12(p.free_energy),
        ]);
    }
    art.table = table;
    art.attach(&curve);
    Ok(art)
}

fn svmc(config: &RunConfig) -> Result<Artifact> {
    let rows = config.grid.unwrap_or(101);
    let model = config.model()?;
    let opts = DetectOptions::default();
    let taus = linspace(0.0, 1.0, rows);
    let per_row: Vec<Vec<meanfield::TransitionPoint>> = taus
        .iter()
        .map(|&tau| {
            classical::svmc_detect_transitions(
                &model.spec,
                model.schedule,
                (0.0, tau),
                (1.0, tau),
                opts,
            )
        })
        .collect::<Result<_>>()?;

    let mut art = Artifact::new(config);
    art.meta("temperature", sig12(config.temperature));
    art.meta("rows", rows.to_string());
    describe_detect(&mut art, &opts);

    let mut table = Table::new(["tau", "s", "delta_m", "m_before", "m_after"]);
    let mut found = 0usize;
    for (tau, pts) in taus.iter().zip(&per_row) {
        if pts.is_empty() {
            table.push(vec![sig12(*tau), String::new(), String::new(), String::new(), String::new()]);
        }
        for p in pts {
            found += 1;
            table.push(vec![
                sig12(*tau),
                sig12(p.s),
                sig12(p.delta_m),
                sig12(p.branch_before.m),
                sig12(p.branch_after.m),
            ]);
        }
    }
    art.meta("transition-rows", found.to_string());
    art.attach(&per_row);
    art.table = table;
    Ok(art)
}

fn landscape(config: &RunConfig) -> Result<Artifact> {
    let model = config.model()?;
    let grid = config.grid.unwrap_or(defaults::LANDSCAPE_GRID);
    let land = meanfield::landscape_with(&model, grid)?;

    let mut art = Artifact::new(config);
    art.meta("grid", grid.to_string());
    art.meta("stationarity-tolerance", sig12(defaults::STATIONARITY_TOL));
    art.meta("minima", land.minima.len().to_string());
    for (i, mn) in land.minima.iter().enumerate() {
        let mark = if i == land.global_index { " (equilibrium)" } else { "" };
        art.meta(
            &format!("minimum-{i}"),
            format!("m = {}, f = {}{mark}", sig12(mn.m), sig12(mn.free_energy)),
        );
    }
    if land.degenerate {
        art.warn("two branches are degenerate at this point (first-order coexistence)");
    }

    let ev = meanfield::Evaluator::new(&model)?;
    let mut table = Table::new(["m", "free_energy", "residual"]);
    for i in 0..grid {
        let m = -1.0 + 2.0 * i as f64 / (grid - 1) as f64;
        table.push(vec![sig12(m), sig12(ev.free_energy(m)), sig12(ev.residual(m))]);
    }
    art.table = table;
    art.attach(&land);
    Ok(art)
}
