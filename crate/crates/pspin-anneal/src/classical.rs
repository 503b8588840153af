//! Classical baselines sharing the mean-field landscape machinery:
//!
//! * **Inhomogeneous-temperature simulated annealing (SA).** A fraction τ of
//!   sites is held cold at inverse temperature β₀ while the rest stay hot.
//!   With the dimensionless (β-absorbed) Hamiltonian the free energy per
//!   site, up to the m-independent constant (1−τ)·ln 2 which is dropped, is
//!
//!     f_SA(m) = (p−1)·m^p − τ·E_h[ln 2cosh(β₀·(p·m^(p−1) + h))],
//!
//!   where the order parameter m = (1/N)Σ βᵢ⟨σᵢ⟩ inherits the scale of β₀:
//!   its reachable domain is |m| ≤ τ·β₀ and evaluation outside returns +∞.
//!
//! * **Spin-vector Monte Carlo (SVMC) thermodynamics.** Spins become planar
//!   rotors; the exact mean-field free energy replaces a Metropolis sampler:
//!
//!     f_SVMC(m) = s(p−1)·m^p − (1/β)·∫₀¹ dx ln{2π·I₀(β·√(c² + Γ(x)²))},
//!
//!   with c = s·p·m^(p−1) and I₀ evaluated in exponentially scaled form so
//!   β up to 10³ is stable. At T = 0 it coincides with the quantum zero-T
//!   free energy and is delegated there.

use crate::error::{Error, Result};
use crate::math;
use crate::meanfield::{
    self, detect_transitions_core, landscape_scan, DetectOptions, Landscape, Minimum,
};
use crate::model::{defaults, Disorder, FieldSchedule, Model, ModelSpec};
use serde::{Deserialize, Serialize};

// ═══════════════════════════════════════════════════════════════════════════
// Simulated annealing with a cold fraction of sites
// ═══════════════════════════════════════════════════════════════════════════

/// Parameters of the inhomogeneous-temperature SA free energy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SASpec {
    pub p: u32,
    /// Target (cold-site) inverse temperature β₀ > 0.
    pub beta0: f64,
    /// Fraction of cold sites.
    pub tau: f64,
    pub disorder: Disorder,
}

impl SASpec {
    pub fn validate(&self) -> Result<()> {
        if self.p < 3 {
            return Err(Error::domain(format!("p must be >= 3, got {}", self.p)));
        }
        if !(self.beta0 > 0.0) || !self.beta0.is_finite() {
            return Err(Error::domain(format!("beta0 must be positive, got {}", self.beta0)));
        }
        if !(0.0..=1.0).contains(&self.tau) {
            return Err(Error::domain(format!("tau must lie in [0, 1], got {}", self.tau)));
        }
        self.disorder.validate()
    }

    /// Reachable order-parameter half-width τ·β₀.
    pub fn m_max(&self) -> f64 {
        self.tau * self.beta0
    }

    pub fn at_tau(mut self, tau: f64) -> Self {
        self.tau = tau;
        self
    }
}

/// SA free energy per site (additive constant (1−τ)·ln 2 dropped). Returns
/// +∞ outside the reachable domain |m| ≤ τ·β₀.
pub fn sa_free_energy(m: f64, spec: &SASpec) -> f64 {
    if m.abs() > spec.m_max() + 1e-15 {
        return f64::INFINITY;
    }
    let pf = spec.p as f64;
    let field = pf * m.powi(spec.p as i32 - 1);
    let avg = spec.disorder.average(|h| math::ln_2cosh(spec.beta0 * (field + h)));
    (pf - 1.0) * m.powi(spec.p as i32) - spec.tau * avg
}

/// Fixed-point residual r(m) = m − τβ₀·E_h[tanh(β₀(p·m^(p−1) + h))]. Zero at
/// stationary points of the SA free energy; df/dm = p(p−1)m^(p−2)·r(m)·…
/// shares its sign structure with the quantum residual, so the same
/// landscape scan applies.
pub fn sa_residual(m: f64, spec: &SASpec) -> f64 {
    let pf = spec.p as f64;
    let field = pf * m.powi(spec.p as i32 - 1);
    let avg = spec.disorder.average(|h| (spec.beta0 * (field + h)).tanh());
    m - spec.tau * spec.beta0 * avg
}

/// All locally stable SA order parameters at one τ, over [−τβ₀, τβ₀].
pub fn sa_landscape(spec: &SASpec) -> Result<Landscape> {
    sa_landscape_with(spec, defaults::LANDSCAPE_GRID)
}

pub fn sa_landscape_with(spec: &SASpec, grid: usize) -> Result<Landscape> {
    spec.validate()?;
    if spec.m_max() == 0.0 {
        // All sites hot (or β₀ → 0 limit of the domain): m = 0 is the only
        // reachable state.
        return Ok(Landscape {
            minima: vec![Minimum { m: 0.0, free_energy: sa_free_energy(0.0, spec) }],
            global_index: 0,
            degenerate: false,
            grid_resolution: grid,
        });
    }
    landscape_scan(
        (-spec.m_max(), spec.m_max()),
        grid,
        |m| sa_residual(m, spec),
        |m| sa_free_energy(m, spec),
        &format!("SA tau={} beta0={}", spec.tau, spec.beta0),
    )
}

/// Equilibrium SA order parameter at one τ.
pub fn sa_equilibrium(spec: &SASpec) -> Result<Minimum> {
    Ok(sa_landscape(spec)?.global())
}

/// One sample of the SA order-parameter curve.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SAPoint {
    pub tau: f64,
    pub m: f64,
    /// m rescaled to [−1, 1] by its domain half-width (0 when τβ₀ = 0).
    pub m_normalized: f64,
    pub free_energy: f64,
}

/// A first-order jump of the SA equilibrium along τ.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SATransition {
    pub tau: f64,
    pub branch_before: Minimum,
    pub branch_after: Minimum,
    pub delta_m: f64,
    pub multiple: bool,
}

/// The SA order-parameter curve m*(τ) over a τ-grid, with every first-order
/// jump located by branch-degeneracy bisection.
#[derive(Debug, Clone, Serialize)]
pub struct SACurve {
    pub points: Vec<SAPoint>,
    pub transitions: Vec<SATransition>,
}

pub fn sa_order_parameter_curve(spec: &SASpec, tau_grid: &[f64]) -> Result<SACurve> {
    spec.validate()?;
    if tau_grid.iter().any(|t| !(0.0..=1.0).contains(t)) {
        return Err(Error::domain("tau grid must lie in [0, 1]"));
    }
    let mut points = Vec::with_capacity(tau_grid.len());
    for &tau in tau_grid {
        let eq = sa_equilibrium(&spec.at_tau(tau))?;
        let half = spec.at_tau(tau).m_max();
        points.push(SAPoint {
            tau,
            m: eq.m,
            m_normalized: if half > 0.0 { eq.m / half } else { 0.0 },
            free_energy: eq.free_energy,
        });
    }
    let landscape_at =
        |lam: f64| sa_landscape_with(&spec.at_tau(lam), defaults::LANDSCAPE_GRID);
    let core = detect_transitions_core(&landscape_at, &DetectOptions::default())?;
    let transitions = core
        .into_iter()
        .map(|c| SATransition {
            tau: c.lambda,
            branch_before: c.branch_before,
            branch_after: c.branch_after,
            delta_m: c.delta_m,
            multiple: c.multiple,
        })
        .collect();
    Ok(SACurve { points, transitions })
}

// ═══════════════════════════════════════════════════════════════════════════
// Spin-vector Monte Carlo thermodynamics
// ═══════════════════════════════════════════════════════════════════════════

/// SVMC (planar-rotor) free energy at one drive point. Zero temperature
/// delegates to the quantum zero-T formula, with which it coincides.
pub fn svmc_free_energy(m: f64, spec: &ModelSpec, schedule: FieldSchedule) -> Result<f64> {
    spec.validate()?;
    schedule.validate()?;
    if m.abs() > 1.0 {
        return Err(Error::domain(format!("m must lie in [-1, 1], got {m}")));
    }
    let model = Model { spec: *spec, schedule, disorder: Disorder::None };
    if spec.temperature == 0.0 {
        return meanfield::free_energy(&model, m);
    }
    let beta = 1.0 / spec.temperature;
    let pf = spec.p as f64;
    let c = spec.s * pf * m.powi(spec.p as i32 - 1);
    let ln2pi_i0 = |gamma: f64| {
        let d = (c * c + gamma * gamma).sqrt();
        let z = beta * d;
        (2.0 * std::f64::consts::PI).ln() + z + math::i0_scaled(z).ln()
    };
    let mut integral = 0.0;
    for seg in schedule.segments(spec.s, spec.tau)? {
        if seg.is_constant() {
            integral += seg.width() * ln2pi_i0(seg.g_lo);
        } else {
            integral += integrate_segment(&seg, c, &ln2pi_i0);
        }
    }
    Ok(spec.s * (pf - 1.0) * m.powi(spec.p as i32) - integral / beta)
}

/// Self-consistency residual for SVMC: r(m) = m − ∫ dx (c/D)·(I₁/I₀)(βD).
/// At β → ∞ the Bessel ratio → 1 and the quantum zero-T residual (without
/// disorder) is recovered.
pub fn svmc_residual(m: f64, spec: &ModelSpec, schedule: FieldSchedule) -> Result<f64> {
    spec.validate()?;
    schedule.validate()?;
    let model = Model { spec: *spec, schedule, disorder: Disorder::None };
    if spec.temperature == 0.0 {
        return meanfield::self_consistency_residual(&model, m);
    }
    let beta = 1.0 / spec.temperature;
    let pf = spec.p as f64;
    let c = spec.s * pf * m.powi(spec.p as i32 - 1);
    let kernel = |gamma: f64| {
        let d = (c * c + gamma * gamma).sqrt();
        if d == 0.0 {
            return 0.0;
        }
        (c / d) * math::bessel_ratio_i1_i0(beta * d)
    };
    let mut integral = 0.0;
    for seg in schedule.segments(spec.s, spec.tau)? {
        if seg.is_constant() {
            integral += seg.width() * kernel(seg.g_lo);
        } else {
            integral += integrate_segment(&seg, c, &kernel);
        }
    }
    Ok(m - integral)
}

/// Gauss–Legendre integration of `kernel(Γ(x))` over a sloped segment,
/// splitting panels at the curvature point Γ = |c| as in the quantum case.
fn integrate_segment(seg: &crate::model::Segment, c: f64, kernel: &impl Fn(f64) -> f64) -> f64 {
    let rule = meanfield::legendre_rule(defaults::GL_ORDER);
    let (nodes, weights) = rule.as_ref();
    let gamma_at = |x: f64| {
        seg.g_lo + (seg.g_hi - seg.g_lo) * (x - seg.x_lo) / (seg.x_hi - seg.x_lo).max(1e-300)
    };
    // Split where Γ crosses |c| (integrand curvature changes fastest there).
    let mut cuts = vec![seg.x_lo, seg.x_hi];
    let (g_min, g_max) = (seg.g_lo.min(seg.g_hi), seg.g_lo.max(seg.g_hi));
    let ca = c.abs();
    if ca > g_min && ca < g_max && (seg.g_hi - seg.g_lo).abs() > 1e-300 {
        cuts.push(seg.x_lo + (ca - seg.g_lo) / (seg.g_hi - seg.g_lo) * (seg.x_hi - seg.x_lo));
        cuts.sort_by(|a, b| a.total_cmp(b));
    }
    let mut total = 0.0;
    for w in cuts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        for (&node, &weight) in nodes.iter().zip(weights) {
            total += weight * half * kernel(gamma_at(mid + half * node));
        }
    }
    total
}

/// All locally stable SVMC magnetizations at one drive point.
pub fn svmc_landscape(spec: &ModelSpec, schedule: FieldSchedule) -> Result<Landscape> {
    svmc_landscape_with(spec, schedule, defaults::LANDSCAPE_GRID)
}

pub fn svmc_landscape_with(
    spec: &ModelSpec,
    schedule: FieldSchedule,
    grid: usize,
) -> Result<Landscape> {
    spec.validate()?;
    schedule.validate()?;
    if spec.temperature == 0.0 {
        let model = Model { spec: *spec, schedule, disorder: Disorder::None };
        return meanfield::landscape_with(&model, grid);
    }
    landscape_scan(
        (-1.0, 1.0),
        grid,
        |m| svmc_residual(m, spec, schedule).unwrap_or(f64::NAN),
        |m| svmc_free_energy(m, spec, schedule).unwrap_or(f64::NAN),
        &format!("SVMC s={} tau={} T={}", spec.s, spec.tau, spec.temperature),
    )
}

/// Equilibrium SVMC magnetization at one drive point.
pub fn svmc_equilibrium(spec: &ModelSpec, schedule: FieldSchedule) -> Result<Minimum> {
    Ok(svmc_landscape(spec, schedule)?.global())
}

/// First-order transitions of the SVMC equilibrium along the straight drive
/// segment from `from` = (s, τ) to `to`.
pub fn svmc_detect_transitions(
    spec: &ModelSpec,
    schedule: FieldSchedule,
    from: (f64, f64),
    to: (f64, f64),
    opts: DetectOptions,
) -> Result<Vec<meanfield::TransitionPoint>> {
    let landscape_at = |lam: f64| {
        let (s, tau) = (
            from.0 + (to.0 - from.0) * lam,
            from.1 + (to.1 - from.1) * lam,
        );
        let here = ModelSpec { s, tau, ..*spec };
        svmc_landscape_with(&here, schedule, opts.landscape_grid)
    };
    let core = detect_transitions_core(&landscape_at, &opts)?;
    Ok(core
        .into_iter()
        .map(|c| {
            let (s, tau) = (
                from.0 + (to.0 - from.0) * c.lambda,
                from.1 + (to.1 - from.1) * c.lambda,
            );
            meanfield::TransitionPoint {
                lambda: c.lambda,
                s,
                tau,
                temperature: spec.temperature,
                branch_before: c.branch_before,
                branch_after: c.branch_after,
                delta_m: c.delta_m,
                multiple: c.multiple,
            }
        })
        .collect())
}

// ═══════════════════════════════════════════════════════════════════════════
// Tests
// ═══════════════════════════════════════════════════════════════════════════
