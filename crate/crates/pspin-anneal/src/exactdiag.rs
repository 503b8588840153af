//! Finite-N exact spectra via collective-spin blocks.
//!
//! Sites sharing the same transverse field Γ are interchangeable, so the
//! Hamiltonian conserves the total spin of each equal-Γ block. The ground
//! state lives in the sector where every block carries its maximal spin
//! S_b = n_b/2 (a Lieb–Mattis-type ordering for this ferromagnetic,
//! transverse-field-coupled family, cross-validated against dense
//! diagonalization in the test suite). That reduces the 2^N problem to a
//! product basis of dimension Π_b (n_b + 1).
//!
//! In that basis, with k_b ∈ {0, …, n_b} counting raised spins in block b,
//!
//!   H |k⟩ = −s·N·(M/N)^p |k⟩ − Σ_b Γ_b·(c_b[k_b]·|…k_b+1…⟩ + c_b[k_b−1]·|…k_b−1…⟩),
//!
//! where M = Σ_b (2k_b − n_b) and c_b[k] = √((n_b − k)(k + 1)).
//!
//! The lowest two eigenvalues come from a matrix-free Lanczos iteration with
//! full reorthogonalization (memory is O(dim · iterations)): a deterministic
//! all-ones start supplies the ground pair, and a second run deflated against
//! the converged ground vector independently corroborates the first excited
//! level, which keeps degenerate gaps (e.g. even p at Γ = 0) honest.

use crate::error::{Error, Result};
use crate::math::{self, SplitMix64};
use crate::model::{defaults, FieldSchedule, PathSpec};
use serde::Serialize;

/// One maximal-spin collective block: `sites` spins that share field `gamma`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Block {
    pub sites: usize,
    pub gamma: f64,
}

/// The block-factorized Hamiltonian for one drive point, ready for
/// matrix-free application.
#[derive(Debug, Clone)]
pub struct BlockSystem {
    pub p: u32,
    pub s: f64,
    /// Total number of spins N.
    pub n: usize,
    /// Equal-field blocks, strongest field first.
    pub blocks: Vec<Block>,
    /// Product-basis dimension Π (n_b + 1).
    pub dim: usize,
    dims: Vec<usize>,
    strides: Vec<usize>,
    /// Raising coefficients per block: c_b[k] = √((n_b − k)(k + 1)).
    ladders: Vec<Vec<f64>>,
    /// Diagonal −s·N·(M/N)^p per basis state.
    diag: Vec<f64>,
}

/// Lowest part of the spectrum at one drive point.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SpectrumResult {
    /// Ground energy.
    pub e0: f64,
    /// First excited energy.
    pub e1: f64,
    /// e1 − e0, clamped at 0 against rounding.
    pub gap: f64,
    /// Total Lanczos iterations across both runs.
    pub iterations: usize,
    /// Largest converged Ritz-pair residual among the reported values.
    pub residual_norm: f64,
}

/// One sample of a gap curve along an annealing path.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct GapPoint {
    pub s: f64,
    pub tau: f64,
    pub e0: f64,
    pub e1: f64,
    pub gap: f64,
}

/// A swept gap curve plus its refined minimum.
#[derive(Debug, Clone, Serialize)]
pub struct GapCurve {
    pub points: Vec<GapPoint>,
    pub minimum: GapPoint,
}

impl BlockSystem {
    /// Group per-site fields into equal-Γ blocks. Fields that are exactly
    /// equal merge regardless of position, so site ordering cannot change
    /// the spectrum.
    pub fn new(p: u32, s: f64, site_gammas: &[f64]) -> Result<Self> {
        if p < 3 {
            return Err(Error::domain(format!("p must be >= 3, got {p}")));
        }
        if site_gammas.is_empty() {
            return Err(Error::domain("need at least one site"));
        }
        if site_gammas.iter().any(|g| !g.is_finite() || *g < 0.0) {
            return Err(Error::domain("site fields must be finite and nonnegative"));
        }
        let mut blocks: Vec<Block> = Vec::new();
        for &g in site_gammas {
            match blocks.iter_mut().find(|b| b.gamma == g) {
                Some(b) => b.sites += 1,
                None => blocks.push(Block { sites: 1, gamma: g }),
            }
        }
        blocks.sort_by(|a, b| b.gamma.total_cmp(&a.gamma));
        let n: usize = site_gammas.len();
        let dims: Vec<usize> = blocks.iter().map(|b| b.sites + 1).collect();
        let mut dim = 1usize;
        for &d in &dims {
            dim = dim
                .checked_mul(d)
                .filter(|&x| x as f64 <= defaults::BLOCK_DIM_CAP as f64)
                .ok_or_else(|| {
                    Error::capacity(format!(
                        "block basis dimension exceeds cap {}",
                        defaults::BLOCK_DIM_CAP
                    ))
                })?;
        }
        let mut strides = vec![1usize; blocks.len()];
        for b in 1..blocks.len() {
            strides[b] = strides[b - 1] * dims[b - 1];
        }
        let ladders: Vec<Vec<f64>> = blocks
            .iter()
            .map(|b| {
                (0..b.sites)
                    .map(|k| (((b.sites - k) * (k + 1)) as f64).sqrt())
                    .collect()
            })
            .collect();
        let nf = n as f64;
        let mut diag = vec![0.0; dim];
        // Mixed-radix odometer over (k_0, …, k_B) avoids div/mod per state.
        let mut ks = vec![0usize; blocks.len()];
        let mut m_int: i64 = -(n as i64);
        for slot in diag.iter_mut() {
            *slot = -s * nf * (m_int as f64 / nf).powi(p as i32);
            let mut b = 0;
            while b < blocks.len() {
                if ks[b] + 1 < dims[b] {
                    ks[b] += 1;
                    m_int += 2;
                    break;
                }
                m_int -= 2 * ks[b] as i64;
                ks[b] = 0;
                b += 1;
            }
        }
        Ok(Self { p, s, n, blocks, dim, dims, strides, ladders, diag })
    }

    /// Build directly from a field schedule at drive point (s, τ).
    pub fn for_schedule(
        p: u32,
        n: usize,
        schedule: FieldSchedule,
        s: f64,
        tau: f64,
    ) -> Result<Self> {
        let fields = schedule.site_fields(n, s, tau)?;
        Self::new(p, s, &fields)
    }

    /// out = H·v (matrix-free).
    pub fn apply(&self, v: &[f64], out: &mut [f64]) {
        debug_assert_eq!(v.len(), self.dim);
        debug_assert_eq!(out.len(), self.dim);
        for (o, (d, x)) in out.iter_mut().zip(self.diag.iter().zip(v)) {
            *o = d * x;
        }
        for (b, block) in self.blocks.iter().enumerate() {
            let g = block.gamma;
            if g == 0.0 {
                continue;
            }
            let stride = self.strides[b];
            let db = self.dims[b];
            let ladder = &self.ladders[b];
            // Index i decomposes as i = hi·(stride·db) + k·stride + lo.
            let period = stride * db;
            for hi in 0..self.dim / period {
                let base = hi * period;
                for k in 0..db - 1 {
                    let c = g * ladder[k];
                    let row = base + k * stride;
                    let up = row + stride;
                    for lo in 0..stride {
                        out[row + lo] -= c * v[up + lo];
                        out[up + lo] -= c * v[row + lo];
                    }
                }
            }
        }
    }

    /// Lowest two eigenvalues via deterministic deflated Lanczos.
    pub fn spectrum(&self) -> Result<SpectrumResult> {
        if self.dim == 1 {
            let e0 = self.diag[0];
            return Ok(SpectrumResult { e0, e1: e0, gap: 0.0, iterations: 0, residual_norm: 0.0 });
        }
        let ones = vec![1.0; self.dim];
        let run1 = self.lanczos_run(&ones, None)?;
        let (e0, ground) = (run1.theta0, run1.vec0);
        let mut e1_candidates = vec![run1.theta1];
        let mut residual = run1.resid0.max(run1.resid1);

        // Deflated restart from a seeded random start, orthogonal to the
        // converged ground vector: independently pins the first excited
        // level even when it is degenerate with the ground state.
        let mut rng = SplitMix64::new(0x9E37_79B9_7F4A_7C15);
        let start: Vec<f64> = (0..self.dim).map(|_| rng.next_f64() - 0.5).collect();
        let run2 = self.lanczos_run(&start, Some(&ground))?;
        e1_candidates.push(run2.theta0);
        residual = residual.max(run2.resid0);

        let e1 = e1_candidates
            .into_iter()
            .filter(|t| t.is_finite())
            .fold(f64::INFINITY, f64::min);
        if !e1.is_finite() {
            return Err(Error::convergence("no finite first-excited estimate"));
        }
        Ok(SpectrumResult {
            e0,
            e1,
            gap: (e1 - e0).max(0.0),
            iterations: run1.iterations + run2.iterations,
            residual_norm: residual,
        })
    }

    fn lanczos_run(&self, start: &[f64], deflate: Option<&[f64]>) -> Result<LanczosOutcome> {
        let dim = self.dim;
        let max_iter = dim.min(600);
        let scale = self
            .diag
            .iter()
            .fold(0.0f64, |a, d| a.max(d.abs()))
            .max(2.0 * self.n as f64)
            .max(1.0);

        let mut basis: Vec<Vec<f64>> = Vec::with_capacity(max_iter.min(256));
        let mut alphas: Vec<f64> = Vec::new();
        let mut betas: Vec<f64> = Vec::new();

        let mut v = start.to_vec();
        orthogonalize(&mut v, deflate);
        let norm = norm2(&v);
        if norm <= 1e-300 {
            return Err(Error::convergence("Lanczos start vector vanished"));
        }
        scale_vec(&mut v, 1.0 / norm);

        let mut w = vec![0.0; dim];
        let mut outcome: Option<LanczosOutcome> = None;
        for it in 0..max_iter {
            basis.push(v.clone());
            self.apply(&v, &mut w);
            let alpha = dot(&v, &w);
            alphas.push(alpha);
            // w ← w − α v − β v_prev, then full reorthogonalization (twice)
            // against every stored vector and the deflation target.
            for (wi, vi) in w.iter_mut().zip(&v) {
                *wi -= alpha * vi;
            }
            if let Some(prev) = basis.len().checked_sub(2).map(|i| &basis[i]) {
                let beta_prev = betas[betas.len() - 1];
                for (wi, vi) in w.iter_mut().zip(prev) {
                    *wi -= beta_prev * vi;
                }
            }
            for _ in 0..2 {
                orthogonalize(&mut w, deflate);
                for q in &basis {
                    let c = dot(q, &w);
                    for (wi, qi) in w.iter_mut().zip(q) {
                        *wi -= c * qi;
                    }
                }
            }
            let beta = norm2(&w);

            // Ritz convergence test on the current tridiagonal.
            let j = alphas.len();
            if j >= 2 || beta <= 1e-14 * scale {
                let theta0 = math::tridiag_eigenvalue(&alphas, &betas, 0);
                let u0 = math::tridiag_eigenvector(&alphas, &betas, theta0);
                let resid0 = beta * u0[j - 1].abs();
                let (theta1, resid1) = if j >= 2 {
                    let t1 = math::tridiag_eigenvalue(&alphas, &betas, 1);
                    let u1 = math::tridiag_eigenvector(&alphas, &betas, t1);
                    (t1, beta * u1[j - 1].abs())
                } else {
                    (f64::INFINITY, f64::INFINITY)
                };
                let tol = defaults::LANCZOS_TOL * scale.max(theta0.abs());
                let exhausted = beta <= 1e-14 * scale;
                let converged0 = resid0 <= tol;
                let converged1 = resid1 <= tol || (exhausted && j < dim);
                if (converged0 && converged1) || exhausted || it + 1 == max_iter {
                    let mut vec0 = vec![0.0; dim];
                    for (coef, q) in u0.iter().zip(&basis) {
                        for (oi, qi) in vec0.iter_mut().zip(q) {
                            *oi += coef * qi;
                        }
                    }
                    let n0 = norm2(&vec0);
                    if n0 > 0.0 {
                        scale_vec(&mut vec0, 1.0 / n0);
                    }
                    outcome = Some(LanczosOutcome {
                        theta0,
                        theta1,
                        resid0,
                        resid1: if theta1.is_finite() { resid1 } else { 0.0 },
                        vec0,
                        iterations: j,
                    });
                    if (converged0 && converged1) || exhausted {
                        break;
                    }
                }
            }
            if beta <= 1e-14 * scale {
                break;
            }
            betas.push(beta);
            scale_vec(&mut w, 1.0 / beta);
            std::mem::swap(&mut v, &mut w);
        }
        outcome.ok_or_else(|| Error::convergence("Lanczos failed to produce Ritz estimates"))
    }
}

struct LanczosOutcome {
    theta0: f64,
    theta1: f64,
    resid0: f64,
    resid1: f64,
    vec0: Vec<f64>,
    iterations: usize,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn scale_vec(a: &mut [f64], c: f64) {
    for x in a {
        *x *= c;
    }
}

fn orthogonalize(v: &mut [f64], against: Option<&[f64]>) {
    if let Some(u) = against {
        let c = dot(u, v) / dot(u, u).max(1e-300);
        for (vi, ui) in v.iter_mut().zip(u) {
            *vi -= c * ui;
        }
    }
}

/// Spectrum of the schedule at one drive point.
pub fn spectrum(p: u32, n: usize, schedule: FieldSchedule, s: f64, tau: f64) -> Result<SpectrumResult> {
    BlockSystem::for_schedule(p, n, schedule, s, tau)?.spectrum()
}

/// Gap along an annealing path τ = path(s), sampled on `resolution` points
/// united with every s at which a site field turns on/off (block structure
/// changes there, so the curve is only piecewise smooth). The minimum is
/// golden-section refined inside its bracketing cell.
pub fn gap_curve(
    p: u32,
    n: usize,
    schedule: FieldSchedule,
    path: &PathSpec,
    resolution: usize,
) -> Result<GapCurve> {
    if resolution < 2 {
        return Err(Error::domain("gap curve needs at least 2 sample points"));
    }
    path.validate()?;
    let mut grid: Vec<f64> = (0..resolution)
        .map(|i| i as f64 / (resolution - 1) as f64)
        .collect();
    grid.extend(breakpoints(n, schedule, path, 4 * resolution));
    grid.sort_by(|a, b| a.total_cmp(b));
    grid.dedup_by(|a, b| (*a - *b).abs() <= 1e-12);

    use rayon::prelude::*;
    let points: Vec<GapPoint> = grid
        .par_iter()
        .map(|&s| gap_point(p, n, schedule, path, s))
        .collect::<Result<_>>()?;

    let min_idx = points
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.gap.total_cmp(&b.1.gap))
        .map(|(i, _)| i)
        .ok_or_else(|| Error::convergence("empty gap curve"))?;
    let lo = if min_idx == 0 { grid[0] } else { grid[min_idx - 1] };
    let hi = if min_idx + 1 == grid.len() { grid[grid.len() - 1] } else { grid[min_idx + 1] };
    let minimum = if hi > lo {
        let (s_min, _) = math::golden_section_min(lo, hi, 1e-9, |s| {
            gap_point(p, n, schedule, path, s).map(|g| g.gap).unwrap_or(f64::INFINITY)
        });
        let refined = gap_point(p, n, schedule, path, s_min)?;
        if refined.gap <= points[min_idx].gap { refined } else { points[min_idx] }
    } else {
        points[min_idx]
    };
    Ok(GapCurve { points, minimum })
}

fn gap_point(p: u32, n: usize, schedule: FieldSchedule, path: &PathSpec, s: f64) -> Result<GapPoint> {
    let tau = path.tau_at(s);
    let spec = spectrum(p, n, schedule, s, tau)?;
    Ok(GapPoint { s, tau, e0: spec.e0, e1: spec.e1, gap: spec.gap })
}

/// The s values where any site's field reaches or leaves its 0/1 clamp
/// bounds (kinks of the gap curve). Clamped piecewise-linear fields only
/// kink where they touch a bound exactly, so each kink is a boundary of an
/// exact-equality plateau, located by predicate bisection. Plateaus
/// narrower than the scan step can be missed; the scan is 4× the caller's
/// resolution to make that unlikely.
fn breakpoints(n: usize, schedule: FieldSchedule, path: &PathSpec, scan: usize) -> Vec<f64> {
    let mut out = Vec::new();
    let probe = |s: f64, i: usize| -> f64 {
        let tau = path.tau_at(s);
        schedule
            .site_fields(n, s, tau)
            .map(|f| f[i])
            .unwrap_or(f64::NAN)
    };
    for i in 0..n {
        for target in [0.0, 1.0] {
            let pinned = |s: f64| probe(s, i) == target;
            let mut prev_s = 0.0;
            let mut prev = pinned(0.0);
            for j in 1..=scan {
                let s = j as f64 / scan as f64;
                let cur = pinned(s);
                if cur != prev {
                    let (mut lo, mut hi) = (prev_s, s);
                    while hi - lo > 1e-13 {
                        let mid = 0.5 * (lo + hi);
                        if pinned(mid) == prev {
                            lo = mid;
                        } else {
                            hi = mid;
                        }
                    }
                    out.push(0.5 * (lo + hi));
                }
                prev_s = s;
                prev = cur;
            }
        }
    }
    out
}

// ═══════════════════════════════════════════════════════════════════════════
// Tests
// ═══════════════════════════════════════════════════════════════════════════
