//! Semiclassical (large-N) treatment of the sharp-step drive: the classical
//! tilt angle, the quadratic spin-wave excitation gaps on top of it, and the
//! bipartite entanglement entropy of the ground state.
//!
//! The driven fraction 1−τ of spins tilts by a common angle θ against the
//! aligned, undriven fraction τ. The classical energy per spin is
//!
//!   e(θ) = −s·[τ + (1−τ)cos θ]^p − (1−τ)·sin θ,     θ ∈ [0, π/2],
//!
//! whose global minimizer θ₀ fixes the magnetization q = τ + (1−τ)cos θ₀.
//! At stationary points e(θ₀) equals the zero-temperature mean-field free
//! energy minimum of the step profile — the two routes parameterize the same
//! variational manifold — which the test suite enforces.
//!
//! Quadratic (boson) fluctuations around θ₀ produce three excitation gaps:
//! Δ_b for the undriven block, and a pair Δ_a1 ≤ Δ_a2 for the driven block
//! whose softer member mixes through the anomalous coupling γ:
//!
//!   γ = −½·s·p(p−1)·(1−τ)·sin²θ₀·q^(p−2),     Δ_b = 2·s·p·q^(p−1),
//!   δ = Δ_b·cos θ₀ + 2·sin θ₀ + 2γ,            ε = −2γ/δ,
//!   Δ_a2 = δ,                                   Δ_a1 = Δ_a2·√(1−ε²).
//!
//! ε → 1 marks the spinodal: Δ_a1 → 0 and the ground state's two-mode
//! squeezing diverges. |ε| ≥ 1 is flagged as a breakdown of the quadratic
//! expansion, never clamped into a fake gap.

use crate::error::{Error, Result};
use crate::math;
use crate::model::defaults;
use serde::Serialize;
use std::f64::consts::FRAC_PI_2;

/// Classical tilt minimizing e(θ) on [0, π/2].
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ClassicalAngle {
    pub theta0: f64,
    /// e(θ₀), energy per spin of the classical state.
    pub e: f64,
    /// Another θ-minimum is degenerate with θ₀ within tolerance (first-order
    /// coexistence); θ₀ is then the smaller of the degenerate angles.
    pub degenerate: bool,
}

/// Spin-wave data at one drive point.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct GapComponents {
    pub p: u32,
    pub s: f64,
    pub tau: f64,
    pub theta0: f64,
    /// Classical energy per spin at θ₀.
    pub e: f64,
    /// Anomalous (pair-creation) coupling γ ≤ 0.
    pub gamma_coef: f64,
    /// Diagonal boson energy δ.
    pub delta_coef: f64,
    /// Mixing ratio ε = −2γ/δ (0/0 taken as 0).
    pub epsilon: f64,
    /// Softened driven-block gap δ√(1−ε²); 0 when flagged broken down.
    pub delta_a1: f64,
    /// Unmixed driven-block gap δ.
    pub delta_a2: f64,
    /// Undriven-block gap 2sp·q^(p−1).
    pub delta_b: f64,
    /// θ₀ came from a degenerate (coexisting) classical landscape.
    pub degenerate: bool,
    /// |ε| ≥ 1: the quadratic expansion is invalid here (at/beyond the
    /// spinodal); delta_a1 is reported as 0 and must not be trusted.
    pub breakdown: bool,
}

impl GapComponents {
    /// The physically relevant minimal excitation gap. At τ = 0 there is no
    /// undriven block, so Δ_b is excluded; at τ = 1 there is no driven block,
    /// so the a-modes are excluded.
    pub fn min_gap(&self) -> f64 {
        if self.tau == 0.0 {
            self.delta_a1
        } else if self.tau == 1.0 {
            self.delta_b
        } else {
            self.delta_a1.min(self.delta_b)
        }
    }
}

/// Entanglement entropy of a size-u fraction of the driven block's bosonic
/// ground state.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct EntropyResult {
    pub u: f64,
    /// Squeezing ratio α = √((1−ε)/(1+ε)).
    pub alpha: f64,
    /// Symplectic eigenvalue μ ≥ 1 of the reduced covariance.
    pub mu: f64,
    /// E = ((μ+1)/2)ln((μ+1)/2) − ((μ−1)/2)ln((μ−1)/2); +∞ when divergent.
    pub entropy: f64,
    /// |ε| ≥ 1: entropy diverges (reported as +∞, flagged).
    pub divergent: bool,
}

fn validate_point(p: u32, s: f64, tau: f64) -> Result<()> {
    if p < 3 {
        return Err(Error::domain(format!("p must be >= 3, got {p}")));
    }
    for (name, v) in [("s", s), ("tau", tau)] {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::domain(format!("{name} must lie in [0, 1], got {v}")));
        }
    }
    Ok(())
}

/// Classical energy per spin at tilt θ.
pub fn classical_energy(p: u32, s: f64, tau: f64, theta: f64) -> f64 {
    let q = tau + (1.0 - tau) * theta.cos();
    -s * q.powi(p as i32) - (1.0 - tau) * theta.sin()
}

/// de/dθ, used for sharp bracketed root refinement of θ₀.
fn classical_energy_slope(p: u32, s: f64, tau: f64, theta: f64) -> f64 {
    let q = tau + (1.0 - tau) * theta.cos();
    (1.0 - tau) * (s * p as f64 * theta.sin() * q.powi(p as i32 - 1) - theta.cos())
}

/// Global minimizer of e(θ) over [0, π/2]: dense scan plus bracketed
/// refinement. At a degeneracy within tolerance the smaller θ is returned
/// and the result is flagged.
pub fn classical_angle(p: u32, s: f64, tau: f64) -> Result<ClassicalAngle> {
    validate_point(p, s, tau)?;
    if tau == 1.0 {
        // e(θ) ≡ −s: every angle is degenerate; report the aligned state.
        return Ok(ClassicalAngle { theta0: 0.0, e: -s, degenerate: true });
    }
    let n = defaults::ANGLE_GRID;
    let thetas: Vec<f64> = (0..n).map(|i| FRAC_PI_2 * i as f64 / (n - 1) as f64).collect();
    let es: Vec<f64> = thetas.iter().map(|&t| classical_energy(p, s, tau, t)).collect();

    let mut candidates: Vec<(f64, f64)> = Vec::new();
    for i in 0..n {
        let left_ok = i == 0 || es[i] <= es[i - 1];
        let right_ok = i == n - 1 || es[i] <= es[i + 1];
        if !(left_ok && right_ok) {
            continue;
        }
        if i == 0 || i == n - 1 {
            candidates.push((thetas[i], es[i]));
            continue;
        }
        let (lo, hi) = (thetas[i - 1], thetas[i + 1]);
        let slope = |t: f64| classical_energy_slope(p, s, tau, t);
        let theta = if slope(lo) < 0.0 && slope(hi) > 0.0 {
            math::bisect_root(lo, hi, defaults::ANGLE_TOL, slope)
        } else {
            math::golden_section_min(lo, hi, defaults::ANGLE_TOL, |t| {
                classical_energy(p, s, tau, t)
            })
            .0
        };
        candidates.push((theta, classical_energy(p, s, tau, theta)));
    }
    let &(_, e_min) = candidates
        .iter()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("dense scan yields candidates");
    let degenerate_set: Vec<(f64, f64)> = candidates
        .iter()
        .copied()
        .filter(|(_, e)| e - e_min <= defaults::ANGLE_DEGENERACY_TOL)
        .collect();
    let mut best = *degenerate_set
        .iter()
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .expect("at least one candidate");
    // The degenerate set may hold near-duplicates of one physical minimum
    // (adjacent grid cells refining to the same θ): count distinct angles.
    let distinct = degenerate_set
        .iter()
        .filter(|(t, _)| (t - best.0).abs() > 1e-6)
        .count();
    if best.0 < defaults::ANGLE_TOL {
        best.0 = 0.0;
    }
    Ok(ClassicalAngle { theta0: best.0, e: best.1, degenerate: distinct > 0 })
}

/// Spin-wave gap components at the global classical angle.
pub fn gap_components(p: u32, s: f64, tau: f64) -> Result<GapComponents> {
    let angle = classical_angle(p, s, tau)?;
    Ok(components_at(p, s, tau, angle.theta0, angle.e, angle.degenerate))
}

/// Gap components on every degenerate classical branch (one entry when the
/// minimum is unique). At coexistence the library reports both rather than
/// silently electing a branch.
pub fn gap_components_branches(p: u32, s: f64, tau: f64) -> Result<Vec<GapComponents>> {
    let angle = classical_angle(p, s, tau)?;
    if !angle.degenerate || tau == 1.0 {
        return Ok(vec![components_at(p, s, tau, angle.theta0, angle.e, angle.degenerate)]);
    }
    // Rescan for every branch within the degeneracy window.
    let n = defaults::ANGLE_GRID;
    let mut branches: Vec<f64> = vec![angle.theta0];
    for i in 1..n - 1 {
        let t = FRAC_PI_2 * i as f64 / (n - 1) as f64;
        let (tl, tr) = (t - FRAC_PI_2 / (n - 1) as f64, t + FRAC_PI_2 / (n - 1) as f64);
        let sl = classical_energy_slope(p, s, tau, tl);
        let sr = classical_energy_slope(p, s, tau, tr);
        if sl < 0.0 && sr > 0.0 {
            let theta = math::bisect_root(tl, tr, defaults::ANGLE_TOL, |x| {
                classical_energy_slope(p, s, tau, x)
            });
            let e = classical_energy(p, s, tau, theta);
            if e - angle.e <= defaults::ANGLE_DEGENERACY_TOL
                && branches.iter().all(|&b| (b - theta).abs() > 1e-6)
            {
                branches.push(theta);
            }
        }
    }
    let e_end = classical_energy(p, s, tau, FRAC_PI_2);
    if e_end - angle.e <= defaults::ANGLE_DEGENERACY_TOL
        && branches.iter().all(|&b| (b - FRAC_PI_2).abs() > 1e-6)
    {
        branches.push(FRAC_PI_2);
    }
    branches.sort_by(|a, b| a.total_cmp(b));
    Ok(branches
        .into_iter()
        .map(|t| components_at(p, s, tau, t, classical_energy(p, s, tau, t), true))
        .collect())
}

fn components_at(p: u32, s: f64, tau: f64, theta0: f64, e: f64, degenerate: bool) -> GapComponents {
    let pf = p as f64;
    let q = tau + (1.0 - tau) * theta0.cos();
    let sin = theta0.sin();
    let cos = theta0.cos();
    let gamma = -0.5 * s * pf * (pf - 1.0) * (1.0 - tau) * sin * sin * q.powi(p as i32 - 2);
    let delta_b = 2.0 * s * pf * q.powi(p as i32 - 1);
    let delta = delta_b * cos + 2.0 * sin + 2.0 * gamma;
    let epsilon = if gamma == 0.0 && delta == 0.0 { 0.0 } else { -2.0 * gamma / delta };
    let breakdown = epsilon.abs() >= 1.0;
    let delta_a1 = if breakdown { 0.0 } else { delta * (1.0 - epsilon * epsilon).sqrt() };
    GapComponents {
        p,
        s,
        tau,
        theta0,
        e,
        gamma_coef: gamma,
        delta_coef: delta,
        epsilon,
        delta_a1,
        delta_a2: delta,
        delta_b,
        degenerate,
        breakdown,
    }
}

/// Entanglement entropy of a fraction-u cut of the soft driven-block mode.
pub fn entanglement_entropy(p: u32, s: f64, tau: f64, u: f64) -> Result<EntropyResult> {
    let comps = gap_components(p, s, tau)?;
    entanglement_entropy_from(&comps, u)
}

/// Entropy from precomputed gap components (e.g. per degenerate branch).
pub fn entanglement_entropy_from(comps: &GapComponents, u: f64) -> Result<EntropyResult> {
    if !(0.0..=1.0).contains(&u) {
        return Err(Error::domain(format!("cut fraction must lie in [0, 1], got {u}")));
    }
    let eps = comps.epsilon;
    if comps.breakdown {
        return Ok(EntropyResult {
            u,
            alpha: 0.0,
            mu: f64::INFINITY,
            entropy: f64::INFINITY,
            divergent: true,
        });
    }
    let alpha = ((1.0 - eps) / (1.0 + eps)).sqrt();
    let mu = if u == 0.0 || u == 1.0 || alpha == 1.0 {
        1.0
    } else {
        ((1.0 - u + u * alpha) * (1.0 - u + u / alpha)).sqrt().max(1.0)
    };
    Ok(EntropyResult { u, alpha, mu, entropy: entropy_of_mu(mu), divergent: false })
}

/// E(μ) = ((μ+1)/2)ln((μ+1)/2) − ((μ−1)/2)ln((μ−1)/2), exactly 0 at μ ≤ 1.
pub fn entropy_of_mu(mu: f64) -> f64 {
    if mu <= 1.0 {
        return 0.0;
    }
    let up = 0.5 * (mu + 1.0);
    let dn = 0.5 * (mu - 1.0);
    let dn_term = if dn == 0.0 { 0.0 } else { dn * dn.ln() };
    up * up.ln() - dn_term
}

// ═══════════════════════════════════════════════════════════════════════════
// Tests
// ═══════════════════════════════════════════════════════════════════════════

#[cfg(test)]
mod tests {
    use super::*;
    use crate::meanfield;
    use crate::model::{Disorder, FieldSchedule, Model, ModelSpec};

    #[test]
    fn pure_driver_tilts_fully() {
        let a = classical_angle(3, 0.0, 0.0).unwrap();
        assert_eq!(a.theta0, FRAC_PI_2);
        assert!((a.e + 1.0).abs() <= 1e-15);
        assert!(!a.degenerate);
        let g = gap_components(3, 0.0, 0.0).unwrap();
        assert_eq!(g.gamma_coef, 0.0);
        assert_eq!(g.delta_coef, 2.0);
        assert_eq!(g.epsilon, 0.0);
        assert_eq!(g.delta_a1, 2.0);
        assert_eq!(g.min_gap(), 2.0);
    }

    #[test]
    fn pure_target_is_flat_and_flagged() {
        let a = classical_angle(3, 1.0, 1.0).unwrap();
        assert_eq!(a.theta0, 0.0);
        assert!((a.e + 1.0).abs() <= 1e-15);
        assert!(a.degenerate);
        // min gap at τ=1 is the undriven-block gap 2sp.
        let g = gap_components(3, 1.0, 1.0).unwrap();
        assert!((g.min_gap() - 6.0).abs() <= 1e-12);
        assert_eq!(g.delta_b, 6.0);
    }

    #[test]
    fn ferromagnetic_angle_matches_analytic_sine() {
        // p=3, s=1, τ=0: stationarity reads 3 sinθ cos²θ = cosθ,
        // i.e. sin 2θ = 2/3 on the ordered branch.
        let a = classical_angle(3, 1.0, 0.0).unwrap();
        let theta_exact = 0.5 * (2.0f64 / 3.0).asin();
        assert!((a.theta0 - theta_exact).abs() <= 1e-11, "{} vs {theta_exact}", a.theta0);
    }

    #[test]
    fn classical_energy_equals_meanfield_minimum() {
        // e(θ₀) and the zero-T step-profile free-energy minimum parameterize
        // the same variational manifold; values must agree everywhere.
        for &s in &[0.1, 0.3, 0.52, 0.769, 0.9, 1.0] {
            for &tau in &[0.0, 0.2, 0.5, 0.8, 1.0] {
                let angle = classical_angle(3, s, tau).unwrap();
                let model = Model {
                    spec: ModelSpec { p: 3, s, tau, temperature: 0.0 },
                    schedule: FieldSchedule::StepIdeal,
                    disorder: Disorder::None,
                };
                let f = meanfield::landscape(&model).unwrap().global().free_energy;
                assert!(
                    (angle.e - f).abs() <= 1e-9,
                    "s={s} tau={tau}: e(θ₀)={} vs f*={f}",
                    angle.e
                );
            }
        }
    }

    #[test]
    fn magnetization_correspondence_off_coexistence() {
        // q = τ + (1−τ)cosθ₀ equals the landscape global minimizer away from
        // the transition line (where tie-breaking conventions may differ).
        for &(s, tau) in &[(0.3, 0.1), (0.6, 0.4), (0.9, 0.0), (0.5, 0.7), (1.0, 0.3)] {
            let angle = classical_angle(3, s, tau).unwrap();
            let q = tau + (1.0 - tau) * angle.theta0.cos();
            let model = Model {
                spec: ModelSpec { p: 3, s, tau, temperature: 0.0 },
                schedule: FieldSchedule::StepIdeal,
                disorder: Disorder::None,
            };
            let m = meanfield::landscape(&model).unwrap().global().m;
            assert!((q - m).abs() <= 1e-7, "s={s} tau={tau}: q={q} vs m*={m}");
        }
    }

    #[test]
    fn gap_identity_and_ordering_hold_on_a_grid() {
        for is in 0..=10 {
            for it in 0..=10 {
                let (s, tau) = (is as f64 / 10.0, it as f64 / 10.0);
                let g = gap_components(3, s, tau).unwrap();
                if g.breakdown {
                    continue;
                }
                assert!(g.delta_a2 >= g.delta_a1 - 1e-14, "s={s} tau={tau}");
                let reconstructed = g.delta_a2 * (1.0 - g.epsilon * g.epsilon).sqrt();
                assert_eq!(g.delta_a1, reconstructed, "identity is exact by construction");
                assert!(g.delta_a1 >= 0.0 && g.delta_b >= 0.0);
                assert!((0.0..=1.0).contains(&g.epsilon), "ε ∈ [0,1] at minima");
            }
        }
    }

    #[test]
    fn entropy_symmetry_and_edges() {
        let g = gap_components(3, 0.6, 0.4).unwrap();
        for iu in 0..=20 {
            let u = iu as f64 / 20.0;
            let a = entanglement_entropy_from(&g, u).unwrap();
            let b = entanglement_entropy_from(&g, 1.0 - u).unwrap();
            assert!((a.entropy - b.entropy).abs() <= 1e-12, "E(u) = E(1−u)");
            assert!(a.entropy >= 0.0);
            assert!(a.mu >= 1.0);
        }
        assert_eq!(entanglement_entropy_from(&g, 0.0).unwrap().entropy, 0.0);
        assert_eq!(entanglement_entropy_from(&g, 1.0).unwrap().entropy, 0.0);
    }

    #[test]
    fn zero_mixing_means_zero_entropy() {
        // At s=0 the ground state is a product state: ε=0, E=0 for any cut.
        let g = gap_components(4, 0.0, 0.3).unwrap();
        assert_eq!(g.epsilon, 0.0);
        let e = entanglement_entropy_from(&g, 0.5).unwrap();
        assert_eq!(e.entropy, 0.0);
        assert_eq!(e.mu, 1.0);
    }

    #[test]
    fn breakdown_is_flagged_and_divergent() {
        let broken = GapComponents {
            p: 3,
            s: 0.5,
            tau: 0.2,
            theta0: 0.5,
            e: -1.0,
            gamma_coef: -1.0,
            delta_coef: 1.5,
            epsilon: 4.0 / 3.0,
            delta_a1: 0.0,
            delta_a2: 1.5,
            delta_b: 1.0,
            degenerate: false,
            breakdown: true,
        };
        let e = entanglement_entropy_from(&broken, 0.5).unwrap();
        assert!(e.divergent);
        assert!(e.entropy.is_infinite());
    }

    #[test]
    fn entropy_jumps_at_the_homogeneous_transition() {
        // Along τ=0 the paramagnetic side has θ₀=π/2, q=0, hence ε=0 and
        // E=0; the ferromagnetic side has finite mixing and E > 0.
        let s_star = 4.0 * 3f64.sqrt() / 9.0;
        let pm = entanglement_entropy(3, s_star - 0.01, 0.0, 0.5).unwrap();
        let fm = entanglement_entropy(3, s_star + 0.01, 0.0, 0.5).unwrap();
        assert_eq!(pm.entropy, 0.0);
        assert!(fm.entropy > 0.01, "finite jump, got {}", fm.entropy);
        assert!(fm.entropy.is_finite());
    }

    #[test]
    fn entropy_of_mu_limits() {
        assert_eq!(entropy_of_mu(1.0), 0.0);
        assert_eq!(entropy_of_mu(0.5), 0.0);
        // Large-μ asymptote: E → ln μ + 1 − ln 2.
        let mu = 1e8f64;
        let want = mu.ln() + 1.0 - 2f64.ln();
        assert!((entropy_of_mu(mu) - want).abs() <= 1e-6);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(classical_angle(2, 0.5, 0.5).is_err());
        assert!(classical_angle(3, 1.5, 0.5).is_err());
        let g = gap_components(3, 0.5, 0.5).unwrap();
        assert!(entanglement_entropy_from(&g, 1.5).is_err());
    }

    #[test]
    fn gap_closes_at_the_line_endpoint() {
        // At the interior endpoint of the zero-T step line the two classical
        // minima merge into a quartic-flat direction: ε → 1 and Δ_a1 → 0,
        // while the unmixed gaps stay finite with closed forms √(6/5) and
        // 2/√5 for p = 3. The solver sits on a quartic minimum here, so the
        // tolerances reflect cube-root convergence, not formula error.
        let e = crate::meanfield::step_line_endpoint(3).unwrap();
        let g = gap_components(3, e.s, e.tau).unwrap();
        assert!(!g.breakdown);
        assert!(g.epsilon > 1.0 - 1e-8, "eps = {}", g.epsilon);
        assert!(g.delta_a1 <= 1e-3, "a1 = {:e}", g.delta_a1);
        assert!((g.delta_a2 - (6f64 / 5.0).sqrt()).abs() <= 1e-5);
        assert!((g.delta_b - 2.0 / 5f64.sqrt()).abs() <= 1e-5);
        // The merged angle is cos θ₀ = 1/√6 and the magnetization matches
        // the mean-field m_e.
        let q = e.tau + (1.0 - e.tau) * g.theta0.cos();
        assert!((q - e.m).abs() <= 1e-5);
    }
}
