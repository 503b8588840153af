//! Mean-field statics: the variational free energy f(m), its landscape of
//! self-consistent minima, and first-order transition detection.
//!
//! For the fully connected model the free energy per spin at magnetization m
//! is exact in the thermodynamic limit:
//!
//!   f(m) = s(p−1)mᵖ − ∫₀¹ dx E_h[ (1/β) ln 2cosh(β D(x, h)) ],
//!   D(x, h) = √((c + s·h)² + Γ(x)²),   c = s·p·m^(p−1),
//!
//! with the bracket replaced by D itself at zero temperature. The random
//! longitudinal field h is part of the target Hamiltonian, so its weight
//! anneals with s alongside the coupling; at the fully quenched edge the
//! overall factor s then cancels out of the minimization, which is what
//! lets an inhomogeneous drive steer around the transition line. Stationary
//! points obey the self-consistency condition m = R(m) with
//!
//!   R(m) = ∫₀¹ dx E_h[ ((c + s·h)/D) · tanh(β D) ]        (tanh → 1 at T=0).
//!
//! Because ∂f/∂m = s·p(p−1)·m^(p−2)·(m − R(m)), the landscape is scanned
//! through the residual r(m) = m − R(m): its upward sign crossings are the
//! physical (self-consistent, stable) magnetizations, including the m = 0
//! paramagnet of odd p, which for odd p sits on a rising inflection of the
//! raw f-surface and is invisible to a slope-sign scan. Candidates are always
//! verified against |r| before being reported.
//!
//! The x-integral is evaluated exactly on piecewise-constant parts of the
//! field profile and by Gauss–Legendre panels on sloped parts; panels are
//! split where Γ(x) crosses |c|, where the integrand's curvature peaks.
//! Closed forms for the step-like profiles (zero temperature, no disorder)
//! are provided separately so the two routes can validate each other.

use crate::error::{Error, Result};
use crate::math;
use crate::model::{defaults, Disorder, Model, Segment};
use serde::Serialize;
use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

// ═══════════════════════════════════════════════════════════════════════════
// Evaluator: one drive point, many m evaluations
// ═══════════════════════════════════════════════════════════════════════════

/// Precomputed evaluation plan for one drive point (schedule segments,
/// disorder rule, temperature branch). Construct once, evaluate f(m) and
/// r(m) many times.
pub struct Evaluator {
    p: i32,
    s: f64,
    beta: Option<f64>,
    segments: Vec<Segment>,
    disorder: Disorder,
    gl: Option<Arc<(Vec<f64>, Vec<f64>)>>,
}

impl Evaluator {
    pub fn new(model: &Model) -> Result<Self> {
        model.validate()?;
        let segments = model.schedule.segments(model.spec.s, model.spec.tau)?;
        let gl = if segments.iter().any(|seg| !seg.is_constant()) {
            Some(legendre_rule(defaults::GL_ORDER))
        } else {
            None
        };
        Ok(Self {
            p: model.spec.p as i32,
            s: model.spec.s,
            beta: model.spec.beta(),
            segments,
            disorder: model.disorder,
            gl,
        })
    }

    /// Effective coupling c = s·p·m^(p−1).
    pub fn coupling(&self, m: f64) -> f64 {
        self.s * self.p as f64 * m.powi(self.p - 1)
    }

    /// Variational free energy per spin at magnetization m.
    pub fn free_energy(&self, m: f64) -> f64 {
        let c = self.coupling(m);
        let field = match self.beta {
            None => self.x_average(
                c,
                |u: f64, g: f64| (u * u + g * g).sqrt(),
                Some(&math::gaussian_abs_mean),
            ),
            Some(b) => self.x_average(
                c,
                |u: f64, g: f64| math::ln_2cosh(b * (u * u + g * g).sqrt()) / b,
                None,
            ),
        };
        self.s * (self.p - 1) as f64 * m.powi(self.p) - field
    }

    /// Self-consistency residual r(m) = m − R(m); roots are stationary points
    /// of the free energy, upward crossings its stable branches.
    pub fn residual(&self, m: f64) -> f64 {
        let c = self.coupling(m);
        let rhs = match self.beta {
            None => self.x_average(
                c,
                |u: f64, g: f64| {
                    let d = (u * u + g * g).sqrt();
                    if d == 0.0 {
                        0.0
                    } else {
                        u / d
                    }
                },
                Some(&math::gaussian_sign_mean),
            ),
            Some(b) => self.x_average(
                c,
                |u: f64, g: f64| {
                    let d = (u * u + g * g).sqrt();
                    if d == 0.0 {
                        0.0
                    } else {
                        u / d * (b * d).tanh()
                    }
                },
                None,
            ),
        };
        m - rhs
    }

    /// ∫₀¹ dx E_h[ kernel(c + s·h, Γ(x)) ], exact on constant segments and
    /// Gauss–Legendre on sloped ones. On flat Γ = 0 stretches the zero-T
    /// kernels reduce to |c + s·h| or sign(c + s·h), whose Gaussian averages
    /// have kinked integrands that defeat Gauss–Hermite; `flat_exact(μ, σ)`
    /// supplies the folded-normal closed form used there instead.
    fn x_average(
        &self,
        c: f64,
        kernel: impl Fn(f64, f64) -> f64,
        flat_exact: Option<&dyn Fn(f64, f64) -> f64>,
    ) -> f64 {
        let mut total = 0.0;
        for seg in &self.segments {
            if seg.is_constant() {
                let g = seg.g_lo;
                if g == 0.0 {
                    if let (Some(exact), Disorder::Gaussian { sigma, .. }) =
                        (flat_exact, self.disorder)
                    {
                        total += seg.width() * exact(c, self.s * sigma);
                        continue;
                    }
                }
                total += seg.width() * self.disorder.average(|h| kernel(c + self.s * h, g));
            } else {
                // Split the panel where Γ crosses |c|: the integrand bends
                // sharpest there and Gauss–Legendre regains full accuracy on
                // the two smooth halves.
                let ac = c.abs();
                let (g_top, g_bot) = (seg.g_lo.max(seg.g_hi), seg.g_lo.min(seg.g_hi));
                if ac > g_bot && ac < g_top {
                    let t = (seg.g_lo - ac) / (seg.g_lo - seg.g_hi);
                    let x_split = seg.x_lo + t * seg.width();
                    total += self.gl_panel(seg.x_lo, x_split, seg.g_lo, ac, c, &kernel);
                    total += self.gl_panel(x_split, seg.x_hi, ac, seg.g_hi, c, &kernel);
                } else {
                    total += self.gl_panel(seg.x_lo, seg.x_hi, seg.g_lo, seg.g_hi, c, &kernel);
                }
            }
        }
        total
    }

    fn gl_panel(
        &self,
        x_lo: f64,
        x_hi: f64,
        g_lo: f64,
        g_hi: f64,
        c: f64,
        kernel: &impl Fn(f64, f64) -> f64,
    ) -> f64 {
        let rule = self.gl.as_ref().expect("sloped segment without a quadrature rule");
        let (nodes, weights) = rule.as_ref();
        let half = 0.5 * (x_hi - x_lo);
        let g_mid = 0.5 * (g_lo + g_hi);
        let g_half = 0.5 * (g_hi - g_lo);
        let mut acc = 0.0;
        for (&t, &w) in nodes.iter().zip(weights) {
            let g = g_mid + g_half * t;
            acc += w * self.disorder.average(|h| kernel(c + self.s * h, g));
        }
        acc * half
    }
}

/// Process-wide cache of Gauss–Legendre rules, keyed by order.
pub(crate) fn legendre_rule(order: usize) -> Arc<(Vec<f64>, Vec<f64>)> {
    static CACHE: OnceLock<RwLock<HashMap<usize, Arc<(Vec<f64>, Vec<f64>)>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(rule) = cache.read().expect("legendre cache poisoned").get(&order) {
        return rule.clone();
    }
    let rule = Arc::new(math::gauss_legendre(order));
    cache
        .write()
        .expect("legendre cache poisoned")
        .entry(order)
        .or_insert(rule)
        .clone()
}

/// Free energy at one magnetization (convenience wrapper; construct an
/// [`Evaluator`] for repeated evaluations at the same drive point).
pub fn free_energy(model: &Model, m: f64) -> Result<f64> {
    Ok(Evaluator::new(model)?.free_energy(m))
}

/// Self-consistency residual at one magnetization.
pub fn self_consistency_residual(model: &Model, m: f64) -> Result<f64> {
    Ok(Evaluator::new(model)?.residual(m))
}

// ═══════════════════════════════════════════════════════════════════════════
// Closed forms (zero temperature, no disorder)
// ═══════════════════════════════════════════════════════════════════════════

/// Sharp step profile: f = s(p−1)mᵖ − (1−τ)√(c²+1) − τ|c|.
pub fn free_energy_step_closed(p: u32, s: f64, tau: f64, m: f64) -> f64 {
    let c = s * p as f64 * m.powi(p as i32 - 1);
    s * (p - 1) as f64 * m.powi(p as i32) - (1.0 - tau) * (c * c + 1.0).sqrt() - tau * c.abs()
}

/// Step with residual floor field γ: f = s(p−1)mᵖ − (1−τ)√(c²+1) − τ√(c²+γ²).
pub fn free_energy_residual_closed(p: u32, s: f64, tau: f64, gamma: f64, m: f64) -> f64 {
    let c = s * p as f64 * m.powi(p as i32 - 1);
    s * (p - 1) as f64 * m.powi(p as i32)
        - (1.0 - tau) * (c * c + 1.0).sqrt()
        - tau * (c * c + gamma * gamma).sqrt()
}

/// Finite-slope profile Γ(x) = clamp(a(1−τ) − (a−1)x, 0, 1): the x-integral
/// of √(c²+Γ²) splits into a flat Γ=1 part on [0, x₁], an analytic
/// antiderivative over the ramp where Γ runs from Γ₁ down to Γ₀, and a flat
/// Γ=0 part on [x₀, 1]:
///
///   f = s(p−1)mᵖ − x₁√(c²+1) − [P(Γ₁) − P(Γ₀)] − (1−x₀)|c|,
///   P(Γ) = [Γ√(c²+Γ²) + c² ln(Γ + √(c²+Γ²))] / (2(a−1)),
///
/// with x₁ = clamp((a(1−τ)−1)/(a−1)), x₀ = clamp(a(1−τ)/(a−1)),
/// Γ₁ = min(1, a(1−τ)), Γ₀ = max(0, 1−aτ). At a = 1 the profile is uniform
/// and f = s(p−1)mᵖ − √(c² + (1−τ)²).
pub fn free_energy_slope_closed(p: u32, s: f64, tau: f64, a: f64, m: f64) -> f64 {
    let c = s * p as f64 * m.powi(p as i32 - 1);
    let bulk = s * (p - 1) as f64 * m.powi(p as i32);
    if a == 1.0 {
        let g = 1.0 - tau;
        return bulk - (c * c + g * g).sqrt();
    }
    let x1 = ((a * (1.0 - tau) - 1.0) / (a - 1.0)).clamp(0.0, 1.0);
    let x0 = (a * (1.0 - tau) / (a - 1.0)).clamp(0.0, 1.0);
    let g1 = (a * (1.0 - tau)).min(1.0);
    let g0 = (1.0 - a * tau).max(0.0);
    let c2 = c * c;
    let anti = |g: f64| {
        let d = (c2 + g * g).sqrt();
        // c² ln(g + D) → 0 as c → 0 even though ln(0) diverges at g = 0.
        let log_term = if c2 == 0.0 { 0.0 } else { c2 * (g + d).ln() };
        (g * d + log_term) / (2.0 * (a - 1.0))
    };
    bulk - x1 * (c2 + 1.0).sqrt() - (anti(g1) - anti(g0)) - (1.0 - x0) * c.abs()
}

// ═══════════════════════════════════════════════════════════════════════════
// Landscape
// ═══════════════════════════════════════════════════════════════════════════

/// One self-consistent stable magnetization and its free energy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Minimum {
    pub m: f64,
    pub free_energy: f64,
}

/// All stable branches at one drive point.
#[derive(Debug, Clone, Serialize)]
pub struct Landscape {
    /// Stable magnetizations, ascending in m.
    pub minima: Vec<Minimum>,
    /// Index into `minima` of the equilibrium state (lowest free energy;
    /// ties broken toward smaller |m|, then toward positive m).
    pub global_index: usize,
    /// More than one branch lies within the degeneracy tolerance of the
    /// lowest free energy (coexistence).
    pub degenerate: bool,
    /// Scan mesh the minima were bracketed on.
    pub grid_resolution: usize,
}

impl Landscape {
    pub fn global(&self) -> Minimum {
        self.minima[self.global_index]
    }
}

/// Scan the free-energy landscape over m ∈ [−1, 1] with the default grid.
pub fn landscape(model: &Model) -> Result<Landscape> {
    landscape_with(model, defaults::LANDSCAPE_GRID)
}

/// Scan the free-energy landscape on a `grid`-node mesh. Stable branches are
/// located as upward sign crossings of the residual r(m) = m − R(m), refined
/// by bisection, then verified to be stationary.
pub fn landscape_with(model: &Model, grid: usize) -> Result<Landscape> {
    let ev = Evaluator::new(model)?;
    landscape_scan(
        (-1.0, 1.0),
        grid,
        |m| ev.residual(m),
        |m| ev.free_energy(m),
        &format!("s={}, tau={}", model.spec.s, model.spec.tau),
    )
}

/// Generic landscape scan over a closed order-parameter domain. The residual
/// must vanish at stationary points and flow downhill like a gradient
/// (negative left of a stable branch, positive right of it); that holds for
/// every free-energy family in this crate because df/dm factors as a
/// positive-in-magnitude prefactor times the residual.
pub(crate) fn landscape_scan(
    domain: (f64, f64),
    grid: usize,
    residual: impl Fn(f64) -> f64,
    free_energy: impl Fn(f64) -> f64,
    context: &str,
) -> Result<Landscape> {
    if grid < 3 {
        return Err(Error::domain("landscape grid needs at least 3 nodes"));
    }
    let (lo, hi) = domain;
    if !(hi > lo) {
        return Err(Error::domain(format!("empty landscape domain [{lo}, {hi}]")));
    }
    let n = grid;
    let ms: Vec<f64> = (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect();
    let rs: Vec<f64> = ms.iter().map(|&m| residual(m)).collect();

    let mut roots: Vec<f64> = Vec::new();
    // Exact zeros on interior nodes: keep only genuine upward crossings
    // (negative left neighbour, positive right neighbour). A node where both
    // neighbours are negative is a cusp maximum touching zero from below.
    for i in 1..n - 1 {
        if rs[i] == 0.0 && rs[i - 1] < 0.0 && rs[i + 1] > 0.0 {
            roots.push(ms[i]);
        }
    }
    // Strict upward sign changes between nodes.
    for i in 0..n - 1 {
        if rs[i] < 0.0 && rs[i + 1] > 0.0 {
            roots.push(bisect_residual(&residual, ms[i], ms[i + 1]));
        }
    }
    // Saturated boundary states: a domain edge is a stable branch iff the
    // residual vanishes there (self-consistency) and the flow just inside
    // pushes toward the boundary (r ≤ 0 inside at the top, r ≥ 0 inside at
    // the bottom).
    let tol = defaults::STATIONARITY_TOL;
    if rs[n - 1].abs() <= tol && rs[n - 2] <= tol {
        roots.push(hi);
    }
    if rs[0].abs() <= tol && rs[1] >= -tol {
        roots.push(lo);
    }

    roots.sort_by(|a, b| a.total_cmp(b));
    roots.dedup_by(|a, b| (*a - *b).abs() < 1e-9);

    let minima: Vec<Minimum> = roots
        .into_iter()
        .filter(|&m| residual(m).abs() <= tol)
        .map(|m| Minimum { m, free_energy: free_energy(m) })
        .collect();
    if minima.is_empty() {
        return Err(Error::Convergence(format!(
            "no self-consistent stable order parameter found at {context}"
        )));
    }

    let f_min = minima.iter().map(|mn| mn.free_energy).fold(f64::INFINITY, f64::min);
    let near: Vec<usize> = (0..minima.len())
        .filter(|&i| minima[i].free_energy - f_min <= defaults::DEGENERACY_TOL)
        .collect();
    let global_index = *near
        .iter()
        .min_by(|&&i, &&j| {
            let (a, b) = (minima[i].m, minima[j].m);
            a.abs()
                .total_cmp(&b.abs())
                .then(b.total_cmp(&a)) // same |m|: prefer the positive one
        })
        .expect("at least one minimum");
    Ok(Landscape { degenerate: near.len() > 1, minima, global_index, grid_resolution: grid })
}

/// Equilibrium magnetization and free energy at one drive point.
pub fn equilibrium(model: &Model) -> Result<Minimum> {
    Ok(landscape(model)?.global())
}

fn bisect_residual(residual: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    while hi - lo > defaults::LANDSCAPE_REFINE_TOL {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let r = residual(mid);
        if r < 0.0 {
            lo = mid;
        } else if r > 0.0 {
            hi = mid;
        } else {
            return mid;
        }
    }
    0.5 * (lo + hi)
}

// ═══════════════════════════════════════════════════════════════════════════
// First-order transition detection
// ═══════════════════════════════════════════════════════════════════════════

/// A located first-order transition along a drive segment. Both coexisting
/// branches are stored rather than electing one.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TransitionPoint {
    /// Position along the segment, λ ∈ [0, 1].
    pub lambda: f64,
    pub s: f64,
    pub tau: f64,
    pub temperature: f64,
    /// The branch that is the equilibrium state on the low-λ side.
    pub branch_before: Minimum,
    /// The branch that takes over on the high-λ side.
    pub branch_after: Minimum,
    /// |m_after − m_before|: the order-parameter jump.
    pub delta_m: f64,
    /// Whether other first-order transitions were found on the same segment.
    pub multiple: bool,
}

impl TransitionPoint {
    pub fn m_before(&self) -> f64 {
        self.branch_before.m
    }

    pub fn m_after(&self) -> f64 {
        self.branch_after.m
    }

    /// Free energy common to the two branches at the crossing.
    pub fn free_energy(&self) -> f64 {
        0.5 * (self.branch_before.free_energy + self.branch_after.free_energy)
    }

    /// Residual branch free-energy splitting at the reported point (≤ the
    /// degeneracy tolerance when fully converged).
    pub fn delta_f(&self) -> f64 {
        (self.branch_before.free_energy - self.branch_after.free_energy).abs()
    }
}

/// Knobs for transition detection. The defaults locate a transition to 1e−8
/// in λ and polish branch degeneracy to 1e−9 in free energy.
#[derive(Debug, Clone, Copy)]
pub struct DetectOptions {
    /// Initial λ-grid resolution along the segment.
    pub scan_grid: usize,
    /// Landscape mesh used at every λ.
    pub landscape_grid: usize,
    /// Smallest equilibrium-magnetization jump that counts as first-order.
    pub jump_threshold: f64,
}

impl Default for DetectOptions {
    fn default() -> Self {
        Self {
            scan_grid: 201,
            landscape_grid: defaults::LANDSCAPE_GRID,
            jump_threshold: defaults::JUMP_THRESHOLD,
        }
    }
}

/// A first-order crossing located along an abstract λ ∈ [0, 1] segment, as
/// produced by the shared detection core. Wrappers map λ back to their own
/// coordinates (drive point, τ, temperature, …).
#[derive(Debug, Clone, Copy)]
pub(crate) struct CoreTransition {
    pub lambda: f64,
    pub branch_before: Minimum,
    pub branch_after: Minimum,
    pub delta_m: f64,
    pub multiple: bool,
}

/// Shared detection engine: scan the equilibrium order parameter of
/// `landscape_at(λ)` on a uniform λ-grid, bracket every jump, and refine each
/// by branch-degeneracy bisection.
pub(crate) fn detect_transitions_core(
    landscape_at: &dyn Fn(f64) -> Result<Landscape>,
    opts: &DetectOptions,
) -> Result<Vec<CoreTransition>> {
    if opts.scan_grid < 2 {
        return Err(Error::domain("transition scan needs at least 2 grid points"));
    }
    let n = opts.scan_grid;
    let mut globals: Vec<Minimum> = Vec::with_capacity(n);
    for i in 0..n {
        let lam = i as f64 / (n - 1) as f64;
        globals.push(landscape_at(lam)?.global());
    }
    let mut brackets: Vec<(f64, f64, f64, f64)> = Vec::new();
    for i in 0..n - 1 {
        if (globals[i + 1].m - globals[i].m).abs() > opts.jump_threshold {
            let lam_lo = i as f64 / (n - 1) as f64;
            let lam_hi = (i + 1) as f64 / (n - 1) as f64;
            brackets.push((lam_lo, lam_hi, globals[i].m, globals[i + 1].m));
        }
    }
    let mut points: Vec<CoreTransition> = Vec::new();
    for &(lam_lo, lam_hi, m_lo, m_hi) in &brackets {
        if let Some(pt) = refine_transition(landscape_at, lam_lo, lam_hi, m_lo, m_hi, opts)? {
            points.push(pt);
        }
    }
    let multiple = points.len() > 1;
    for pt in &mut points {
        pt.multiple = multiple;
    }
    Ok(points)
}

/// Find every first-order transition of the equilibrium state along the
/// straight drive segment from `from` = (s, τ) to `to`, ordered by λ.
pub fn detect_transitions(
    model: &Model,
    from: (f64, f64),
    to: (f64, f64),
    opts: DetectOptions,
) -> Result<Vec<TransitionPoint>> {
    let landscape_at = |lam: f64| {
        let (s, tau) = lerp_point(from, to, lam);
        landscape_with(&model.at(s, tau), opts.landscape_grid)
    };
    let core = detect_transitions_core(&landscape_at, &opts)?;
    Ok(core
        .into_iter()
        .map(|c| {
            let (s, tau) = lerp_point(from, to, c.lambda);
            TransitionPoint {
                lambda: c.lambda,
                s,
                tau,
                temperature: model.spec.temperature,
                branch_before: c.branch_before,
                branch_after: c.branch_after,
                delta_m: c.delta_m,
                multiple: c.multiple,
            }
        })
        .collect())
}

/// First first-order transition along the segment, if any.
pub fn detect_transition(
    model: &Model,
    from: (f64, f64),
    to: (f64, f64),
    opts: DetectOptions,
) -> Result<Option<TransitionPoint>> {
    Ok(detect_transitions(model, from, to, opts)?.into_iter().next())
}

/// Shrink a bracketing λ-interval around an equilibrium jump down to branch
/// degeneracy. While both competing branches are identifiable in the
/// landscape, bisection steps on the sign of their free-energy difference;
/// otherwise it falls back to tracking which branch the equilibrium state
/// belongs to. Returns None if the jump polishes away (continuous crossover).
fn refine_transition(
    landscape_at: &dyn Fn(f64) -> Result<Landscape>,
    mut lam_lo: f64,
    mut lam_hi: f64,
    mut m_lo: f64,
    mut m_hi: f64,
    opts: &DetectOptions,
) -> Result<Option<CoreTransition>> {
    let mut best: Option<(f64, Minimum, Minimum)> = None; // (λ, low branch, high branch)
    for _ in 0..220 {
        let lam_mid = 0.5 * (lam_lo + lam_hi);
        if lam_mid <= lam_lo || lam_mid >= lam_hi {
            break;
        }
        let land = landscape_at(lam_mid)?;
        let assoc = (0.25 * (m_hi - m_lo).abs()).max(2.0 * opts.jump_threshold);
        let a = closest_minimum(&land, m_lo, assoc);
        let b = closest_minimum(&land, m_hi, assoc);
        match (a, b) {
            (Some(a), Some(b)) if (a.m - b.m).abs() > opts.jump_threshold => {
                m_lo = a.m;
                m_hi = b.m;
                let g = a.free_energy - b.free_energy;
                if best
                    .map(|(_, ba, bb)| g.abs() < (ba.free_energy - bb.free_energy).abs())
                    .unwrap_or(true)
                {
                    best = Some((lam_mid, a, b));
                }
                if g.abs() <= defaults::DEGENERACY_TOL
                    && lam_hi - lam_lo <= defaults::FAST_BISECT_TOL
                {
                    break;
                }
                // Branch "low" is the equilibrium on the low-λ side, so the
                // crossing is ahead of us while it still has the lower f.
                if g < 0.0 {
                    lam_lo = lam_mid;
                } else {
                    lam_hi = lam_mid;
                }
            }
            _ => {
                let gm = land.global().m;
                if (gm - m_lo).abs() <= (gm - m_hi).abs() {
                    lam_lo = lam_mid;
                    m_lo = gm;
                } else {
                    lam_hi = lam_mid;
                    m_hi = gm;
                }
            }
        }
    }
    let Some((lam, a, b)) = best else {
        return Ok(None); // jump dissolved under refinement: not first-order
    };
    let delta_m = (b.m - a.m).abs();
    if delta_m <= opts.jump_threshold {
        return Ok(None);
    }
    Ok(Some(CoreTransition {
        lambda: lam,
        branch_before: a,
        branch_after: b,
        delta_m,
        multiple: false,
    }))
}

fn closest_minimum(land: &Landscape, target: f64, max_dist: f64) -> Option<Minimum> {
    land.minima
        .iter()
        .copied()
        .min_by(|a, b| (a.m - target).abs().total_cmp(&(b.m - target).abs()))
        .filter(|mn| (mn.m - target).abs() <= max_dist)
}

fn lerp_point(from: (f64, f64), to: (f64, f64), t: f64) -> (f64, f64) {
    (from.0 + (to.0 - from.0) * t, from.1 + (to.1 - from.1) * t)
}

// ═══════════════════════════════════════════════════════════════════════════
// Critical endpoint of the zero-temperature sharp-step line
// ═══════════════════════════════════════════════════════════════════════════

/// Where the zero-temperature, sharp-step, disorder-free first-order line
/// terminates inside the (s, τ) plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LineEndpoint {
    pub s: f64,
    pub tau: f64,
    /// Magnetization of the merged minimum.
    pub m: f64,
}

/// Closed form for the interior endpoint of the zero-T step-schedule line.
///
/// At the endpoint the two coexisting minima merge, so the self-consistency
/// residual r(m) = m − (1−τ)·c/√(c²+1) − τ (with c = s·p·m^(p−1)) has a
/// triple root: r = r′ = r″ = 0. Eliminating in closed form:
///   r″ = 0  ⟹  c² = (p−2)/(2p−1),
///   r  = 0  ⟹  m = τ + (1−τ)·k,  k = c/√(c²+1) = √((p−2)/(3(p−1))),
///   r′ = 0  ⟹  (1−τ)(p−1)c/m = (c²+1)^(3/2),
/// which combine to m = [1 + (1−k)(c²+1)^(3/2)/((p−1)c)]⁻¹ and s = c/(p·m^(p−1)).
/// For p = 3 this reduces to m = 5/(2+3√6), τ = 2/(2+3√6), s = (58+12√6)/(75√5).
pub fn step_line_endpoint(p: u32) -> Result<LineEndpoint> {
    if p < 3 {
        return Err(Error::domain(format!("p must be >= 3, got {p}")));
    }
    let pf = f64::from(p);
    let c2 = (pf - 2.0) / (2.0 * pf - 1.0);
    let c = c2.sqrt();
    let k = ((pf - 2.0) / (3.0 * (pf - 1.0))).sqrt();
    let m = 1.0 / (1.0 + (1.0 - k) * (c2 + 1.0).powf(1.5) / ((pf - 1.0) * c));
    let tau = 1.0 - (1.0 - m) / (1.0 - k);
    let s = c / (pf * m.powi(p as i32 - 1));
    Ok(LineEndpoint { s, tau, m })
}

/// Exponent c for which the power path τ = s^c passes exactly through the
/// zero-T step-line endpoint, where the excitation gap closes and the
/// entanglement entropy diverges. For p = 3 this is 2.365922640802150…
pub fn touching_exponent(p: u32) -> Result<f64> {
    let e = step_line_endpoint(p)?;
    Ok(e.tau.ln() / e.s.ln())
}

// ═══════════════════════════════════════════════════════════════════════════
// Tests
// ═══════════════════════════════════════════════════════════════════════════

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{FieldSchedule, ModelSpec};

    fn model(p: u32, s: f64, tau: f64, temperature: f64, schedule: FieldSchedule) -> Model {
        Model {
            spec: ModelSpec { p, s, tau, temperature },
            schedule,
            disorder: Disorder::None,
        }
    }

    /// Exact first-order anchor for p = 3, sharp step at τ = 0 (uniform
    /// Γ = 1), zero temperature: the m = 0 and ferromagnetic branches are
    /// degenerate at s* = 4√3/9 with m* = √3/2 and f* = −1.
    const S_STAR_P3: f64 = 0.769_800_358_919_501_1; // 4·√3/9
    const M_STAR_P3: f64 = 0.866_025_403_784_438_6; // √3/2

    #[test]
    fn quadrature_matches_step_closed_form() {
        for p in [3u32, 4, 5] {
            for &s in &[0.2, 0.77, 1.0] {
                for &tau in &[0.0, 0.3, 1.0] {
                    let md = model(p, s, tau, 0.0, FieldSchedule::StepIdeal);
                    let ev = Evaluator::new(&md).unwrap();
                    for k in 0..=20 {
                        let m = -1.0 + 0.1 * k as f64;
                        let want = free_energy_step_closed(p, s, tau, m);
                        let got = ev.free_energy(m);
                        assert!(
                            (got - want).abs() <= 1e-12,
                            "p={p} s={s} tau={tau} m={m}: {got} vs {want}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn quadrature_matches_residual_closed_form() {
        for &gamma in &[0.1, 0.5, 0.9] {
            for &tau in &[0.0, 0.4, 1.0] {
                let md = model(3, 0.8, tau, 0.0, FieldSchedule::ResidualStep { gamma });
                let ev = Evaluator::new(&md).unwrap();
                for k in 0..=10 {
                    let m = -1.0 + 0.2 * k as f64;
                    let want = free_energy_residual_closed(3, 0.8, tau, gamma, m);
                    assert!((ev.free_energy(m) - want).abs() <= 1e-12);
                }
            }
        }
    }

    #[test]
    fn quadrature_matches_slope_closed_form() {
        for &a in &[1.0, 1.5, 2.5, 10.0] {
            for &tau in &[0.1, 0.5, 0.9] {
                for &s in &[0.3, 0.9] {
                    let md = model(3, s, tau, 0.0, FieldSchedule::FiniteSlope { a });
                    let ev = Evaluator::new(&md).unwrap();
                    for k in 0..=20 {
                        let m = -1.0 + 0.1 * k as f64;
                        let want = free_energy_slope_closed(3, s, tau, a, m);
                        let got = ev.free_energy(m);
                        assert!(
                            (got - want).abs() <= 1e-8,
                            "a={a} tau={tau} s={s} m={m}: {got} vs {want} ({:e})",
                            (got - want).abs()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn residual_profile_limits_match_step_and_uniform() {
        for k in 0..=10 {
            let m = -1.0 + 0.2 * k as f64;
            // γ = 0 is the sharp step.
            let a = free_energy_residual_closed(4, 0.7, 0.35, 0.0, m);
            let b = free_energy_step_closed(4, 0.7, 0.35, m);
            assert!((a - b).abs() <= 1e-14);
            // γ = 1 restores the uniform full field regardless of τ.
            let c = free_energy_residual_closed(4, 0.7, 0.35, 1.0, m);
            let d = free_energy_step_closed(4, 0.7, 0.0, m);
            assert!((c - d).abs() <= 1e-14);
        }
    }

    #[test]
    fn slope_unit_steepness_is_uniform_reduced_field() {
        let (p, s, tau) = (3u32, 0.65, 0.4);
        for k in 0..=10 {
            let m = -1.0 + 0.2 * k as f64;
            let c = s * p as f64 * m.powi(2);
            let g = 1.0 - tau;
            let want = s * 2.0 * m.powi(3) - (c * c + g * g).sqrt();
            assert!((free_energy_slope_closed(p, s, tau, 1.0, m) - want).abs() <= 1e-14);
        }
    }

    #[test]
    fn slope_extremes_recover_uniform_and_step() {
        for k in 0..=10 {
            let m = -1.0 + 0.2 * k as f64;
            // a = 1, τ = 0 is the uniform full field.
            let a1 = free_energy_slope_closed(3, 0.8, 0.0, 1.0, m);
            assert!((a1 - free_energy_step_closed(3, 0.8, 0.0, m)).abs() <= 1e-14);
            // a → ∞ approaches the sharp step.
            let inf = free_energy_slope_closed(3, 0.8, 0.45, 1e9, m);
            assert!((inf - free_energy_step_closed(3, 0.8, 0.45, m)).abs() <= 1e-8);
        }
    }

    #[test]
    fn finite_temperature_approaches_zero_temperature() {
        // With every local field D bounded away from 0 the finite-T free
        // energy converges to the T = 0 one like e^(−2βD)/β.
        let cold = model(3, 0.8, 0.3, 1.0 / 50.0, FieldSchedule::StepIdeal);
        let zero = model(3, 0.8, 0.3, 0.0, FieldSchedule::StepIdeal);
        let (evc, evz) = (Evaluator::new(&cold).unwrap(), Evaluator::new(&zero).unwrap());
        for &m in &[0.5, 0.9, -0.7] {
            assert!((evc.free_energy(m) - evz.free_energy(m)).abs() <= 1e-13);
        }
    }

    #[test]
    fn landscape_classical_limit_saturates() {
        // s = 1, τ = 1: no transverse field at all; the aligned state m = 1
        // with energy −1 is the only stable branch (m = 0 is a cusp maximum).
        let land = landscape(&model(3, 1.0, 1.0, 0.0, FieldSchedule::StepIdeal)).unwrap();
        assert_eq!(land.minima.len(), 1, "{:?}", land.minima);
        assert_eq!(land.global().m, 1.0);
        assert!((land.global().free_energy + 1.0).abs() <= 1e-14);
    }

    #[test]
    fn landscape_paramagnet_at_small_s() {
        let land = landscape(&model(3, 0.2, 0.0, 0.0, FieldSchedule::StepIdeal)).unwrap();
        assert_eq!(land.minima.len(), 1);
        assert!(land.global().m.abs() <= 1e-12);
        assert!((land.global().free_energy + 1.0).abs() <= 1e-14);
    }

    #[test]
    fn landscape_ferromagnet_at_large_s() {
        // p = 3, s = 1, uniform full field: stationary magnetizations obey
        // 9m² = 9m⁴ + 1; the stable branch is m² = (9 + √45)/18.
        let land = landscape(&model(3, 1.0, 0.0, 0.0, FieldSchedule::StepIdeal)).unwrap();
        let m_exact = ((9.0 + 45f64.sqrt()) / 18.0).sqrt();
        let global = land.global();
        assert!((global.m - m_exact).abs() <= 1e-9, "m={} vs {m_exact}", global.m);
        let f_exact = 2.0 * m_exact.powi(3) - (9.0 * m_exact.powi(4) + 1.0).sqrt();
        assert!((global.free_energy - f_exact).abs() <= 1e-12);
        // The m = 0 branch is still locally stable (first-order coexistence).
        assert!(land.minima.iter().any(|mn| mn.m.abs() <= 1e-12));
    }

    #[test]
    fn landscape_exactly_at_coexistence_is_degenerate() {
        let land = landscape(&model(3, S_STAR_P3, 0.0, 0.0, FieldSchedule::StepIdeal)).unwrap();
        assert!(land.degenerate);
        // Tie-break selects the smaller |m| branch.
        assert!(land.global().m.abs() <= 1e-9);
        let ferro = land.minima.iter().find(|mn| mn.m > 0.5).expect("ferro branch");
        assert!((ferro.m - M_STAR_P3).abs() <= 1e-9);
        assert!((ferro.free_energy + 1.0).abs() <= 1e-12);
        assert!((land.global().free_energy + 1.0).abs() <= 1e-12);
    }

    #[test]
    fn landscape_even_p_is_symmetric() {
        let land = landscape(&model(4, 0.9, 0.0, 0.0, FieldSchedule::StepIdeal)).unwrap();
        for mn in &land.minima {
            let partner = land.minima.iter().find(|o| (o.m + mn.m).abs() <= 1e-9);
            let partner = partner.expect("mirror branch");
            assert!((partner.free_energy - mn.free_energy).abs() <= 1e-12);
        }
        // Tie-break prefers the positive branch.
        assert!(land.global().m >= 0.0);
    }

    #[test]
    fn landscape_even_p_classical_boundary_pair() {
        let land = landscape(&model(4, 1.0, 1.0, 0.0, FieldSchedule::StepIdeal)).unwrap();
        assert!(land.degenerate);
        assert_eq!(land.global().m, 1.0);
        assert!(land.minima.iter().any(|mn| mn.m == -1.0));
    }

    #[test]
    fn landscape_at_s_zero_is_flat() {
        let land = landscape(&model(3, 0.0, 0.3, 0.0, FieldSchedule::StepIdeal)).unwrap();
        assert_eq!(land.minima.len(), 1);
        assert_eq!(land.global().m, 0.0);
        assert!((land.global().free_energy + 0.7).abs() <= 1e-14);
    }

    #[test]
    fn landscape_finite_temperature_is_stationary() {
        let md = model(3, 0.77, 0.0, 0.2, FieldSchedule::StepIdeal);
        let land = landscape(&md).unwrap();
        let ev = Evaluator::new(&md).unwrap();
        for mn in &land.minima {
            assert!(ev.residual(mn.m).abs() <= defaults::STATIONARITY_TOL);
            assert!(mn.m.abs() < 1.0, "no saturation at T > 0");
        }
    }

    #[test]
    fn detect_transition_finds_exact_p3_anchor() {
        let md = model(3, 0.6, 0.0, 0.0, FieldSchedule::StepIdeal);
        let pts =
            detect_transitions(&md, (0.6, 0.0), (0.9, 0.0), DetectOptions::default()).unwrap();
        assert_eq!(pts.len(), 1);
        let pt = pts[0];
        assert!(!pt.multiple);
        assert!((pt.s - S_STAR_P3).abs() <= 1e-7, "s*={} vs {S_STAR_P3}", pt.s);
        assert!(pt.m_before().abs() <= 1e-6);
        assert!((pt.m_after() - M_STAR_P3).abs() <= 1e-6);
        assert!((pt.delta_m - M_STAR_P3).abs() <= 1e-6);
        assert!((pt.free_energy() + 1.0).abs() <= 1e-8);
        assert!(pt.delta_f() <= defaults::DEGENERACY_TOL);
        assert_eq!(pt.temperature, 0.0);
    }

    #[test]
    fn detect_transition_reports_none_when_smooth() {
        // Deep in the paramagnet nothing jumps.
        let md = model(3, 0.1, 0.0, 0.0, FieldSchedule::StepIdeal);
        let pts =
            detect_transitions(&md, (0.0, 0.0), (0.4, 0.0), DetectOptions::default()).unwrap();
        assert!(pts.is_empty());
    }

    #[test]
    fn detect_transition_finds_homogeneous_p3_anchor() {
        // Homogeneous drive Γ = 1−s: f = Γ·[2u m³ − √(9u²m⁴+1)] with
        // u = s/Γ, so the transition condition is the uniform-field one at
        // u* = 4√3/9, giving s* = 4√3/(9+4√3) exactly, with the same
        // magnetization jump √3/2 and f* = −(1−s*).
        let s_star = 4.0 * 3f64.sqrt() / (9.0 + 4.0 * 3f64.sqrt());
        let md = model(3, 0.3, 0.0, 0.0, FieldSchedule::Homogeneous);
        let pts =
            detect_transitions(&md, (0.2, 0.0), (0.7, 0.0), DetectOptions::default()).unwrap();
        assert_eq!(pts.len(), 1);
        let pt = pts[0];
        assert!((pt.s - s_star).abs() <= 1e-7, "s*={} vs {s_star}", pt.s);
        assert!((pt.delta_m - M_STAR_P3).abs() <= 1e-6);
        assert!((pt.free_energy() + (1.0 - s_star)).abs() <= 1e-8);
    }

    #[test]
    fn step_line_endpoint_p3_matches_explicit_radicals() {
        let e = step_line_endpoint(3).unwrap();
        let rt6 = 6f64.sqrt();
        let rt5 = 5f64.sqrt();
        assert!((e.m - 5.0 / (2.0 + 3.0 * rt6)).abs() <= 1e-15);
        assert!((e.tau - 2.0 / (2.0 + 3.0 * rt6)).abs() <= 1e-15);
        assert!((e.s - (58.0 + 12.0 * rt6) / (75.0 * rt5)).abs() <= 1e-15);
        let c = touching_exponent(3).unwrap();
        assert!((c - 2.365_922_640_802_150).abs() <= 1e-12, "c = {c}");
    }

    #[test]
    fn step_line_endpoint_is_a_triple_root_of_the_residual() {
        // r = r′ = r″ = 0 at the endpoint, checked through the evaluator so
        // the closed form and the quadrature path agree on the degeneracy.
        for p in [3u32, 4, 5, 7] {
            let e = step_line_endpoint(p).unwrap();
            assert!(e.s > 0.0 && e.s < 1.0 && e.tau > 0.0 && e.tau < 1.0);
            let md = model(p, e.s, e.tau, 0.0, FieldSchedule::StepIdeal);
            let ev = Evaluator::new(&md).unwrap();
            let h = 1e-4;
            let r0 = ev.residual(e.m);
            let rp = (ev.residual(e.m + h) - ev.residual(e.m - h)) / (2.0 * h);
            let rpp =
                (ev.residual(e.m + h) - 2.0 * r0 + ev.residual(e.m - h)) / (h * h);
            assert!(r0.abs() <= 1e-12, "p={p}: r = {r0:e}");
            assert!(rp.abs() <= 1e-6, "p={p}: r' = {rp:e}");
            assert!(rpp.abs() <= 1e-3, "p={p}: r'' = {rpp:e}");
        }
    }

    #[test]
    fn step_line_endpoint_separates_jump_from_no_jump_rows() {
        let e = step_line_endpoint(3).unwrap();
        let md = model(3, 0.5, 0.2, 0.0, FieldSchedule::StepIdeal);
        let opts = DetectOptions::default();
        let inside =
            detect_transitions(&md, (0.3, e.tau - 0.002), (0.8, e.tau - 0.002), opts).unwrap();
        assert_eq!(inside.len(), 1);
        assert!(inside[0].delta_m < 0.12, "jump shrinks near the endpoint");
        let outside =
            detect_transitions(&md, (0.3, e.tau + 0.002), (0.8, e.tau + 0.002), opts).unwrap();
        assert!(outside.is_empty());
    }
}
