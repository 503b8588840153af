//! Scalar numerics toolbox: stable special functions, quadrature rules,
//! symmetric-tridiagonal eigenvalue machinery, bracketed 1-D searches, and a
//! tiny deterministic RNG.
//!
//! Everything here is deterministic and allocation-light; the hot loops of the
//! mean-field and eigensolver modules are built on these primitives.

/// ln(2·cosh z), numerically stable for |z| up to ~10³·10³.
///
/// Uses ln 2cosh z = |z| + ln(1 + e^(−2|z|)); the naive form overflows for
/// |z| ≳ 710.
#[inline(always)]
pub fn ln_2cosh(z: f64) -> f64 {
    let a = z.abs();
    a + (-2.0 * a).exp().ln_1p()
}

/// e^(−z)·I₀(z) for z ≥ 0: exponentially scaled modified Bessel function of
/// the first kind, order zero.
///
/// Power series below z = 20 (all terms positive, no cancellation), optimally
/// truncated large-argument expansion above. Relative accuracy ≲ 1e-13 across
/// the switch; validated against the integral definition in the test suite.
pub fn i0_scaled(z: f64) -> f64 {
    debug_assert!(z >= 0.0, "i0_scaled requires z >= 0, got {z}");
    if z <= 20.0 {
        bessel_series(0, z) * (-z).exp()
    } else {
        bessel_asymptotic(0, z)
    }
}

/// e^(−z)·I₁(z) for z ≥ 0 (scaled modified Bessel, order one).
pub fn i1_scaled(z: f64) -> f64 {
    debug_assert!(z >= 0.0, "i1_scaled requires z >= 0, got {z}");
    if z <= 20.0 {
        bessel_series(1, z) * (-z).exp()
    } else {
        bessel_asymptotic(1, z)
    }
}

/// I₁(z)/I₀(z), the rotor analogue of tanh. Monotone, 0 at z=0, → 1 as z → ∞.
pub fn bessel_ratio_i1_i0(z: f64) -> f64 {
    i1_scaled(z) / i0_scaled(z)
}

/// Error function (double-precision libm implementation).
pub fn erf(x: f64) -> f64 {
    libm::erf(x)
}

/// E[|X|] for X ~ Normal(mu, sigma²):
/// σ√(2/π)·exp(−μ²/2σ²) + μ·erf(μ/(σ√2)). Degenerates to |μ| at σ = 0.
pub fn gaussian_abs_mean(mu: f64, sigma: f64) -> f64 {
    if sigma == 0.0 {
        return mu.abs();
    }
    let z = mu / (sigma * std::f64::consts::SQRT_2);
    sigma * (2.0 / std::f64::consts::PI).sqrt() * (-z * z).exp() + mu * erf(z)
}

/// E[sign(X)] for X ~ Normal(mu, sigma²): erf(μ/(σ√2)). Degenerates to
/// sign(μ) at σ = 0 (0 at μ = 0).
pub fn gaussian_sign_mean(mu: f64, sigma: f64) -> f64 {
    if sigma == 0.0 {
        return if mu == 0.0 { 0.0 } else { mu.signum() };
    }
    erf(mu / (sigma * std::f64::consts::SQRT_2))
}

/// Ascending series for I_ν (ν = 0, 1): Σ_k (z/2)^(2k+ν) / (k!·(k+ν)!).
fn bessel_series(nu: u32, z: f64) -> f64 {
    let q = z * z / 4.0;
    let mut term = if nu == 0 { 1.0 } else { z / 2.0 };
    let mut sum = term;
    for k in 1..400 {
        let kf = k as f64;
        term *= q / (kf * (kf + nu as f64));
        sum += term;
        if term < sum * 1e-18 {
            break;
        }
    }
    sum
}

/// Large-argument expansion of e^(−z)·I_ν(z):
/// (2πz)^(−1/2) · Σ_k t_k with t_0 = 1, t_{k+1} = −t_k·(μ−(2k+1)²)/(8z(k+1)),
/// μ = 4ν². Truncated at the smallest term (error ~ e^(−2z)).
fn bessel_asymptotic(nu: u32, z: f64) -> f64 {
    let mu = 4.0 * (nu * nu) as f64;
    let mut term = 1.0_f64;
    let mut sum = term;
    for k in 0..60u32 {
        let kf = k as f64;
        let next = -term * (mu - (2.0 * kf + 1.0).powi(2)) / (8.0 * z * (kf + 1.0));
        if next.abs() >= term.abs() || next.abs() < 1e-18 {
            sum += next;
            break;
        }
        term = next;
        sum += term;
    }
    sum / (2.0 * std::f64::consts::PI * z).sqrt()
}

// ═══════════════════════════════════════════════════════════════════════════
// Deterministic RNG (SplitMix64)
// ═══════════════════════════════════════════════════════════════════════════

/// SplitMix64: tiny, fast, deterministic PRNG for reproducible start vectors
/// and test sampling. Not for cryptography.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1).
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in [lo, hi).
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Uniform integer in [0, n).
    pub fn below(&mut self, n: usize) -> usize {
        (self.next_f64() * n as f64) as usize % n.max(1)
    }
}

// ═══════════════════════════════════════════════════════════════════════════
// Quadrature rules
// ═══════════════════════════════════════════════════════════════════════════

/// Gauss–Legendre nodes and weights on [−1, 1].
///
/// Newton iteration on P_n from the three-term recurrence, seeded with the
/// Chebyshev-like estimate cos(π(i−1/4)/(n+1/2)). Exact (to rounding) for
/// polynomials of degree ≤ 2n−1.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "quadrature order must be at least 1");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Evaluate P_n(x) and P'_n(x) by recurrence.
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// Gauss–Hermite nodes and weights for ∫ e^(−t²) g(t) dt (physicists'
/// convention; weights sum to √π).
///
/// Golub–Welsch on the Jacobi matrix (zero diagonal, off-diagonal √(k/2)):
/// nodes are its eigenvalues, the weight of node i is √π·(first component of
/// the i-th normalized eigenvector)².
pub fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "quadrature order must be at least 1");
    let sqrt_pi = std::f64::consts::PI.sqrt();
    if n == 1 {
        return (vec![0.0], vec![sqrt_pi]);
    }
    let alpha = vec![0.0; n];
    let beta: Vec<f64> = (1..n).map(|k| (k as f64 / 2.0).sqrt()).collect();
    let nodes = tridiag_eigenvalues(&alpha, &beta);
    let mut weights = Vec::with_capacity(n);
    for &x in &nodes {
        let v = tridiag_eigenvector(&alpha, &beta, x);
        weights.push(sqrt_pi * v[0] * v[0]);
    }
    (nodes, weights)
}

// ═══════════════════════════════════════════════════════════════════════════
// Symmetric tridiagonal eigenproblems (Sturm bisection + inverse iteration)
// ═══════════════════════════════════════════════════════════════════════════

/// Number of eigenvalues of the symmetric tridiagonal (alpha, beta) strictly
/// below x, by the Sturm sequence of LDLᵀ pivots.
pub fn sturm_count_below(alpha: &[f64], beta: &[f64], x: f64) -> usize {
    let n = alpha.len();
    debug_assert_eq!(beta.len() + 1, n);
    let scale: f64 = alpha
        .iter()
        .chain(beta.iter())
        .fold(1.0f64, |acc, &v| acc.max(v.abs()));
    let tiny = f64::MIN_POSITIVE.max(scale * 1e-300);
    let mut count = 0;
    let mut d = alpha[0] - x;
    if d == 0.0 {
        d = -tiny;
    }
    if d < 0.0 {
        count += 1;
    }
    for i in 1..n {
        d = (alpha[i] - x) - beta[i - 1] * beta[i - 1] / d;
        if d == 0.0 {
            d = -tiny;
        }
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

/// Gershgorin bounds for the spectrum of (alpha, beta).
fn gershgorin_bounds(alpha: &[f64], beta: &[f64]) -> (f64, f64) {
    let n = alpha.len();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let r = if i > 0 { beta[i - 1].abs() } else { 0.0 }
            + if i < n - 1 { beta[i].abs() } else { 0.0 };
        lo = lo.min(alpha[i] - r);
        hi = hi.max(alpha[i] + r);
    }
    (lo, hi)
}

/// The k-th smallest eigenvalue (0-indexed) of the symmetric tridiagonal
/// (alpha, beta), by Sturm bisection to near machine precision.
pub fn tridiag_eigenvalue(alpha: &[f64], beta: &[f64], k: usize) -> f64 {
    let (mut lo, mut hi) = gershgorin_bounds(alpha, beta);
    let span = (hi - lo).max(1e-300);
    lo -= 1e-12 * span;
    hi += 1e-12 * span;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if sturm_count_below(alpha, beta, mid) > k {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= f64::EPSILON * (lo.abs().max(hi.abs()) + 1.0) {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// All eigenvalues of (alpha, beta), ascending.
pub fn tridiag_eigenvalues(alpha: &[f64], beta: &[f64]) -> Vec<f64> {
    (0..alpha.len())
        .map(|k| tridiag_eigenvalue(alpha, beta, k))
        .collect()
}

/// Normalized eigenvector of (alpha, beta) for an isolated eigenvalue theta,
/// by two rounds of inverse iteration with a pivoted tridiagonal solve.
pub fn tridiag_eigenvector(alpha: &[f64], beta: &[f64], theta: f64) -> Vec<f64> {
    let n = alpha.len();
    let mut v = vec![0.0; n];
    // Deterministic, non-degenerate start.
    let mut rng = SplitMix64::new(0x5DEE_CE66_D1CE_4E5B);
    for x in v.iter_mut() {
        *x = 0.5 + rng.next_f64();
    }
    normalize(&mut v);
    for _ in 0..3 {
        let mut w = solve_shifted_tridiag(alpha, beta, theta, &v);
        // A guarded near-singular pivot can push components toward the
        // overflow range; tame them before normalizing.
        for x in w.iter_mut() {
            if x.is_nan() {
                *x = 0.0;
            } else if x.is_infinite() {
                *x = 1e300f64.copysign(*x);
            }
        }
        normalize(&mut w);
        v = w;
    }
    // Fix sign convention: first nonzero component positive.
    if let Some(&lead) = v.iter().find(|c| c.abs() > 1e-300) {
        if lead < 0.0 {
            for x in v.iter_mut() {
                *x = -*x;
            }
        }
    }
    v
}

fn normalize(v: &mut [f64]) {
    // Rescale by the largest magnitude first so the sum of squares cannot
    // overflow even when components sit near the top of the f64 range.
    let peak = v.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    if peak == 0.0 || !peak.is_finite() {
        return;
    }
    for x in v.iter_mut() {
        *x /= peak;
    }
    let nrm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if nrm > 0.0 {
        for x in v.iter_mut() {
            *x /= nrm;
        }
    }
}

/// Solve (T − θI)w = rhs for tridiagonal T, Gaussian elimination with partial
/// pivoting (one extra superdiagonal of fill-in). Near-singular pivots are
/// nudged, which is exactly what inverse iteration wants.
fn solve_shifted_tridiag(alpha: &[f64], beta: &[f64], theta: f64, rhs: &[f64]) -> Vec<f64> {
    let n = alpha.len();
    let mut d: Vec<f64> = alpha.iter().map(|&a| a - theta).collect(); // diagonal
    let mut c = vec![0.0; n]; // superdiagonal c[i] = T[i][i+1]
    let mut e = vec![0.0; n]; // second superdiagonal fill-in
    for i in 0..n - 1 {
        c[i] = beta[i];
    }
    let mut x: Vec<f64> = rhs.to_vec();
    let scale: f64 = d
        .iter()
        .chain(c.iter())
        .fold(1.0f64, |acc, &v| acc.max(v.abs()));
    let tiny = scale * 1e-280 + f64::MIN_POSITIVE;
    let guard = |v: f64| {
        if v.abs() < tiny {
            tiny.copysign(if v == 0.0 { 1.0 } else { v })
        } else {
            v
        }
    };
    for i in 0..n - 1 {
        // The subdiagonal entry of row i+1 is still the original beta[i];
        // elimination only ever rewrites rows at or below the pivot row.
        let sub = beta[i];
        if sub.abs() > d[i].abs() {
            // Swap rows i and i+1, then eliminate.
            let (di, ci, ei) = (d[i], c[i], e[i]);
            let (dn, cn) = (d[i + 1], c[i + 1]);
            d[i] = sub;
            c[i] = dn;
            e[i] = cn;
            x.swap(i, i + 1);
            let m = di / sub;
            d[i + 1] = ci - m * dn;
            c[i + 1] = ei - m * cn;
            x[i + 1] -= m * x[i];
        } else {
            let piv = guard(d[i]);
            d[i] = piv;
            let m = sub / piv;
            d[i + 1] -= m * c[i];
            c[i + 1] -= m * e[i];
            x[i + 1] -= m * x[i];
        }
    }
    d[n - 1] = guard(d[n - 1]);
    // Back substitution with two superdiagonals.
    let mut w = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = x[i];
        if i + 1 < n {
            s -= c[i] * w[i + 1];
        }
        if i + 2 < n {
            s -= e[i] * w[i + 2];
        }
        w[i] = s / d[i];
    }
    w
}

// ═══════════════════════════════════════════════════════════════════════════
// Bracketed 1-D searches
// ═══════════════════════════════════════════════════════════════════════════

/// Golden-section minimization of f on [a, b] to an interval of width ≤ tol.
/// Returns (x_min, f(x_min)). Derivative-free; assumes a single minimum in the
/// bracket (tolerates flat regions by keeping the left candidate).
pub fn golden_section_min(mut a: f64, mut b: f64, tol: f64, mut f: impl FnMut(f64) -> f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while b - a > tol {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
    }
    let xm = 0.5 * (a + b);
    let fm = f(xm);
    if f1 < fm && f1 < f2 {
        (x1, f1)
    } else if f2 < fm {
        (x2, f2)
    } else {
        (xm, fm)
    }
}

/// Bisection for a sign change of f on [a, b] (f(a) and f(b) must have
/// opposite signs); refines to |b − a| ≤ tol and returns the midpoint.
pub fn bisect_root(mut a: f64, mut b: f64, tol: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
    let mut fa = f(a);
    let fb = f(b);
    debug_assert!(
        fa == 0.0 || fb == 0.0 || (fa < 0.0) != (fb < 0.0),
        "bisect_root needs a sign change: f({a})={fa}, f({b})={fb}"
    );
    if fa == 0.0 {
        return a;
    }
    if fb == 0.0 {
        return b;
    }
    while b - a > tol {
        let mid = 0.5 * (a + b);
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (fa < 0.0) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    0.5 * (a + b)
}

// ═══════════════════════════════════════════════════════════════════════════
// Least squares on a line
// ═══════════════════════════════════════════════════════════════════════════

/// Ordinary least squares fit y ≈ slope·x + intercept; returns
/// (slope, intercept, r²). r² = 1 − SS_res/SS_tot (1.0 when SS_tot = 0).
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    assert_eq!(x.len(), y.len());
    assert!(x.len() >= 2, "need at least two points to fit a line");
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|&v| (v - mx) * (v - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(&a, &b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_tot: f64 = y.iter().map(|&v| (v - my) * (v - my)).sum();
    let ss_res: f64 = x
        .iter()
        .zip(y)
        .map(|(&a, &b)| {
            let r = b - (slope * a + intercept);
            r * r
        })
        .sum();
    let r2 = if ss_tot == 0.0 { 1.0 } else { 1.0 - ss_res / ss_tot };
    (slope, intercept, r2)
}

// ═══════════════════════════════════════════════════════════════════════════
// Tests
// ═══════════════════════════════════════════════════════════════════════════

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln_2cosh_matches_naive_at_moderate_argument() {
        for &z in &[-3.0, -0.7, 0.0, 0.2, 1.0, 5.0, 20.0] {
            let naive = (2.0 * f64::cosh(z)).ln();
            assert!(
                (ln_2cosh(z) - naive).abs() < 1e-14,
                "z={z}: stable={} naive={naive}",
                ln_2cosh(z)
            );
        }
    }

    #[test]
    fn ln_2cosh_large_argument_is_linear() {
        let z = 1.0e6;
        assert_eq!(ln_2cosh(z), z);
        assert_eq!(ln_2cosh(-z), z);
        assert!((ln_2cosh(0.0) - std::f64::consts::LN_2).abs() < 1e-15);
    }

    #[test]
    fn erf_reference_values() {
        assert_eq!(erf(0.0), 0.0);
        assert!((erf(0.5) - 0.520_499_877_813_046_5).abs() < 1e-15);
        assert!((erf(1.0) - 0.842_700_792_949_714_9).abs() < 1e-15);
        assert!((erf(-1.0) + erf(1.0)).abs() < 1e-16, "odd symmetry");
        assert!((erf(6.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn gaussian_folded_moments_match_quadrature() {
        // Cross-check the closed forms against high-order Gauss–Hermite on
        // the same integrands (smoothness is irrelevant at order 400 for
        // the |x| kernel; the sign kernel is checked against erf directly).
        let (nodes, weights) = gauss_hermite(80);
        for &(mu, sigma) in &[(0.0, 1.0), (0.3, 0.2), (-1.2, 0.7), (2.0, 0.05)] {
            let quad: f64 = nodes
                .iter()
                .zip(&weights)
                .map(|(&t, &w)| w * (mu + std::f64::consts::SQRT_2 * sigma * t).abs())
                .sum::<f64>()
                / std::f64::consts::PI.sqrt();
            let exact = gaussian_abs_mean(mu, sigma);
            // GH converges slowly on the kink: generous tolerance, the point
            // is agreement of scale and sign conventions.
            assert!(
                (quad - exact).abs() < 6e-3 * (1.0 + exact.abs()),
                "mu={mu} sigma={sigma}: quad={quad} exact={exact}"
            );
        }
        // Exact half-normal mean and degenerate limits.
        assert!((gaussian_abs_mean(0.0, 1.0) - (2.0 / std::f64::consts::PI).sqrt()).abs() < 1e-16);
        assert_eq!(gaussian_abs_mean(-0.75, 0.0), 0.75);
        assert_eq!(gaussian_sign_mean(0.0, 1.0), 0.0);
        assert_eq!(gaussian_sign_mean(0.4, 0.0), 1.0);
        assert!((gaussian_sign_mean(0.3, 0.2) - erf(0.3 / (0.2 * std::f64::consts::SQRT_2))).abs() < 1e-16);
        // Far tail: sign average saturates.
        assert!((gaussian_sign_mean(3.0, 0.1) - 1.0).abs() < 1e-15);
    }

    /// Slowly-converging but uncancelled reference: Ī₀/Ī₁ from the integral
    /// definitions Ī_ν(z) = (1/π)∫₀^π e^(z(cosθ−1)) cos(νθ) dθ, composite
    /// Gauss–Legendre with panel count scaled to the peak width ~1/√z.
    fn bessel_scaled_by_integral(nu: u32, z: f64) -> f64 {
        let panels = 8 + 4 * (z.sqrt().ceil() as usize);
        let (gx, gw) = gauss_legendre(16);
        let h = std::f64::consts::PI / panels as f64;
        let mut total = 0.0;
        for p in 0..panels {
            let a = p as f64 * h;
            for (x, w) in gx.iter().zip(&gw) {
                let theta = a + 0.5 * h * (x + 1.0);
                total += 0.5 * h * w * (z * (theta.cos() - 1.0)).exp() * (nu as f64 * theta).cos();
            }
        }
        total / std::f64::consts::PI
    }

    #[test]
    fn scaled_bessel_matches_integral_definition() {
        for &z in &[0.0, 0.3, 1.0, 4.0, 8.0, 19.9, 20.1, 50.0, 120.0, 700.0] {
            let ref0 = bessel_scaled_by_integral(0, z);
            let ref1 = bessel_scaled_by_integral(1, z);
            let e0 = (i0_scaled(z) - ref0).abs() / ref0.abs().max(1e-30);
            assert!(e0 < 1e-12, "I0 z={z}: got {} want {ref0} rel {e0:.2e}", i0_scaled(z));
            if z > 0.0 {
                let e1 = (i1_scaled(z) - ref1).abs() / ref1.abs().max(1e-30);
                assert!(e1 < 1e-12, "I1 z={z}: got {} want {ref1} rel {e1:.2e}", i1_scaled(z));
            } else {
                assert_eq!(i1_scaled(0.0), 0.0);
            }
        }
    }

    #[test]
    fn bessel_ratio_limits() {
        assert!(bessel_ratio_i1_i0(1e-8) < 1e-7);
        assert!((bessel_ratio_i1_i0(1e-4) - 0.5e-4).abs() < 1e-10); // I1/I0 ~ z/2
        assert!(bessel_ratio_i1_i0(1e4) > 0.99);
        let mut prev = 0.0;
        for k in 0..200 {
            let r = bessel_ratio_i1_i0(k as f64 * 0.5);
            assert!(r >= prev - 1e-13, "ratio not monotone at z={}", k as f64 * 0.5);
            prev = r;
        }
    }

    #[test]
    fn splitmix_is_deterministic_and_in_range() {
        let mut a = SplitMix64::new(42);
        let mut b = SplitMix64::new(42);
        for _ in 0..100 {
            let x = a.next_f64();
            assert_eq!(x, b.next_f64());
            assert!((0.0..1.0).contains(&x));
        }
        let mut c = SplitMix64::new(43);
        assert_ne!(SplitMix64::new(42).next_u64(), c.next_u64());
    }

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        for n in [2usize, 5, 8, 16, 32] {
            let (x, w) = gauss_legendre(n);
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-13);
            // degree 2n−1 monomial: ∫_{-1}^{1} t^(2k) dt = 2/(2k+1)
            for k in 0..n {
                let approx: f64 = x.iter().zip(&w).map(|(&t, &wi)| wi * t.powi(2 * k as i32)).sum();
                let exact = 2.0 / (2.0 * k as f64 + 1.0);
                assert!(
                    (approx - exact).abs() < 1e-12,
                    "n={n} k={k}: {approx} vs {exact}"
                );
            }
        }
    }

    #[test]
    fn gauss_hermite_order_three_reference_values() {
        // Frozen classical values for the 3-point rule.
        let (x, w) = gauss_hermite(3);
        let xr = 1.224_744_871_391_589;
        assert!((x[0] + xr).abs() < 1e-13, "{x:?}");
        assert!(x[1].abs() < 1e-13);
        assert!((x[2] - xr).abs() < 1e-13);
        assert!((w[0] - 0.295_408_975_150_919_35).abs() < 1e-13, "{w:?}");
        assert!((w[1] - 1.181_635_900_603_677_4).abs() < 1e-13);
    }

    #[test]
    fn gauss_hermite_moments_and_normalization() {
        let sqrt_pi = std::f64::consts::PI.sqrt();
        for n in [1usize, 2, 8, 31, 64] {
            let (x, w) = gauss_hermite(n);
            let total: f64 = w.iter().sum();
            assert!(
                (total - sqrt_pi).abs() < 1e-12 * sqrt_pi,
                "n={n}: weights sum {total}"
            );
            // ∫ e^(−t²) t² dt = √π/2, exact for n ≥ 2.
            if n >= 2 {
                let m2: f64 = x.iter().zip(&w).map(|(&t, &wi)| wi * t * t).sum();
                assert!((m2 - sqrt_pi / 2.0).abs() < 1e-11, "n={n}: m2={m2}");
            }
            // Polynomial exactness at degree 2n−2 (even moment):
            // ∫ e^(−t²) t^(2k) dt = √π (2k−1)!!/2^k.
            let kmax = (n - 1).min(12);
            let mut dfact = 1.0;
            for k in 1..=kmax {
                dfact *= 2.0 * k as f64 - 1.0;
                let exact = sqrt_pi * dfact / 2f64.powi(k as i32);
                let approx: f64 = x.iter().zip(&w).map(|(&t, &wi)| wi * t.powi(2 * k as i32)).sum();
                assert!(
                    (approx - exact).abs() < 1e-10 * exact.abs().max(1.0),
                    "n={n} k={k}: {approx} vs {exact}"
                );
            }
        }
    }

    #[test]
    fn tridiag_eigenvalues_match_two_by_two_closed_form() {
        // [[2, 1], [1, 3]] has eigenvalues (5 ∓ √5)/2.
        let alpha = [2.0, 3.0];
        let beta = [1.0];
        let lo = tridiag_eigenvalue(&alpha, &beta, 0);
        let hi = tridiag_eigenvalue(&alpha, &beta, 1);
        let s5 = 5f64.sqrt();
        assert!((lo - (5.0 - s5) / 2.0).abs() < 1e-13);
        assert!((hi - (5.0 + s5) / 2.0).abs() < 1e-13);
    }

    #[test]
    fn tridiag_eigenvalues_match_laplacian_closed_form() {
        // Discrete Laplacian: diag 2, offdiag −1, eigenvalues 2−2cos(kπ/(n+1)).
        let n = 24;
        let alpha = vec![2.0; n];
        let beta = vec![-1.0; n - 1];
        let evs = tridiag_eigenvalues(&alpha, &beta);
        for (k, &ev) in evs.iter().enumerate() {
            let exact = 2.0 - 2.0 * ((k + 1) as f64 * std::f64::consts::PI / (n as f64 + 1.0)).cos();
            assert!((ev - exact).abs() < 1e-12, "k={k}: {ev} vs {exact}");
        }
    }

    #[test]
    fn tridiag_eigenvector_satisfies_eigen_equation() {
        let n = 40;
        let mut rng = SplitMix64::new(7);
        let alpha: Vec<f64> = (0..n).map(|_| rng.uniform(-1.0, 1.0)).collect();
        let beta: Vec<f64> = (0..n - 1).map(|_| rng.uniform(0.1, 1.0)).collect();
        for k in [0usize, 1, n / 2, n - 1] {
            let theta = tridiag_eigenvalue(&alpha, &beta, k);
            let v = tridiag_eigenvector(&alpha, &beta, theta);
            let mut resid: f64 = 0.0;
            for i in 0..n {
                let mut tv = alpha[i] * v[i];
                if i > 0 {
                    tv += beta[i - 1] * v[i - 1];
                }
                if i < n - 1 {
                    tv += beta[i] * v[i + 1];
                }
                resid = resid.max((tv - theta * v[i]).abs());
            }
            assert!(resid < 1e-10, "k={k}: residual {resid}");
        }
    }

    #[test]
    fn golden_section_finds_cos_minimum() {
        let (x, fx) = golden_section_min(2.0, 4.5, 1e-12, f64::cos);
        // x-resolution at a quadratic minimum is limited to ~sqrt(eps) because
        // the function is flat there; the value itself is fully converged.
        assert!((x - std::f64::consts::PI).abs() < 5e-8, "x={x}");
        assert!((fx + 1.0).abs() < 1e-14);
    }

    #[test]
    fn bisect_root_finds_sqrt_two() {
        let r = bisect_root(0.0, 2.0, 1e-12, |x| x * x - 2.0);
        assert!((r - std::f64::consts::SQRT_2).abs() < 1e-11);
    }

    #[test]
    fn linear_fit_recovers_exact_line() {
        let x: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let y: Vec<f64> = x.iter().map(|&v| 3.5 * v - 2.0).collect();
        let (a, b, r2) = linear_fit(&x, &y);
        assert!((a - 3.5).abs() < 1e-12);
        assert!((b + 2.0).abs() < 1e-12);
        assert!((r2 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn linear_fit_r2_degrades_with_noise() {
        let x: Vec<f64> = (0..50).map(|i| i as f64 / 5.0).collect();
        let mut rng = SplitMix64::new(99);
        let y: Vec<f64> = x.iter().map(|&v| v + rng.uniform(-2.0, 2.0)).collect();
        let (_, _, r2) = linear_fit(&x, &y);
        assert!(r2 < 0.999 && r2 > 0.5, "r2={r2}");
    }
}
