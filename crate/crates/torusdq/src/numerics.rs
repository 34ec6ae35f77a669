//! Small numerical utilities: error-free transformations for phase
//! accumulation, argument reduction modulo 2π, Gauss–Legendre nodes,
//! Poisson tail probabilities, and log-log slope fits.
//!
//! The phase helpers exist because the twisted-product cocycle must satisfy
//! its functional equation to ~1e-13 even for wave numbers up to ~50, where
//! naive `f64` products of the bilinear form already lose that many digits.
//! A double-double accumulator keeps the bilinear form exact for all inputs
//! that arise here (integer coordinates times fixed matrix entries), so the
//! cocycle identity holds to the accuracy of a single `sin`/`cos` pair.

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`: a double-double value.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct Dd {
    pub hi: f64,
    pub lo: f64,
}

/// Error-free sum: returns `(s, e)` with `s = fl(a+b)` and `a + b = s + e` exactly.
#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

/// Error-free product via fused multiply-add: `a * b = p + e` exactly.
#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let e = a.mul_add(b, -p);
    (p, e)
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    /// `self + a*b`, with the product expanded error-free first.
    #[inline]
    pub fn add_prod(self, a: f64, b: f64) -> Dd {
        let (p, pe) = two_prod(a, b);
        let (s, se) = two_sum(self.hi, p);
        let lo = self.lo + pe + se;
        let (hi, lo) = two_sum(s, lo);
        Dd { hi, lo }
    }

    /// `self * c` for a plain `f64` factor.
    #[inline]
    pub fn mul_f64(self, c: f64) -> Dd {
        let (p, pe) = two_prod(self.hi, c);
        let lo = self.lo.mul_add(c, pe);
        let (hi, lo) = two_sum(p, lo);
        Dd { hi, lo }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

/// High and low parts of 2π: `TWO_PI_HI + TWO_PI_LO` is 2π to ~32 digits.
const TWO_PI_HI: f64 = 2.0 * std::f64::consts::PI;
const TWO_PI_LO: f64 = 2.0 * 1.224_646_799_147_353_2e-16;

/// Reduces a double-double angle modulo 2π into roughly `[-π, π]`,
/// keeping the residue accurate to a few units in the last place even when
/// the unreduced angle is of order 1e8.
pub(crate) fn reduce_mod_two_pi(x: Dd) -> f64 {
    let q = (x.hi / TWO_PI_HI).round();
    if q == 0.0 {
        return x.to_f64();
    }
    // x - q*2π with the multiple expanded error-free: the leading
    // subtraction cancels exactly (both operands share the same scale).
    let (m_hi, m_lo) = two_prod(q, TWO_PI_HI);
    ((x.hi - m_hi) - m_lo - q * TWO_PI_LO) + x.lo
}

/// Bilinear form `k^T m l` for integer vectors, accumulated error-free.
///
/// Every product `k_r * m[(r,s)] * l_s` fits in a double-double exactly for
/// the wave numbers used here (|k| well below 2^26), so the result is the
/// exact real value of the form rounded once at the end.
pub(crate) fn lattice_bilinear(m: &nalgebra::DMatrix<f64>, k: &[i64], l: &[i64]) -> Dd {
    debug_assert_eq!(m.nrows(), k.len());
    debug_assert_eq!(m.ncols(), l.len());
    let mut acc = Dd::ZERO;
    for (r, &kr) in k.iter().enumerate() {
        if kr == 0 {
            continue;
        }
        for (s, &ls) in l.iter().enumerate() {
            if ls == 0 {
                continue;
            }
            // (kr * ls) is exact in f64 for the lattice ranges in play.
            acc = acc.add_prod((kr as f64) * (ls as f64), m[(r, s)]);
        }
    }
    acc
}

/// `ln(k!)` by direct summation; exact enough (relative ~1e-15) for the
/// factorial scales used by multiindex weights and tail bounds.
pub(crate) fn ln_factorial(k: usize) -> f64 {
    (2..=k).map(|j| (j as f64).ln()).sum()
}

/// Upper tail `P[X > cutoff]` of a Poisson variable with mean `t`,
/// evaluated by direct summation of the tail series (no cancellation).
pub(crate) fn poisson_tail(t: f64, cutoff: usize) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    let start = cutoff + 1;
    // First tail term e^{-t} t^{start}/start! in log space to dodge overflow.
    let log_term = -t + (start as f64) * t.ln() - ln_factorial(start);
    let mut term = log_term.exp();
    let mut sum = term;
    let mut j = start + 1;
    // Terms decay at ratio t/j; once j > t the series converges geometrically.
    let max_j = start + 64 + (10.0 * t) as usize;
    while j <= max_j {
        term *= t / j as f64;
        sum += term;
        if term <= sum * 1e-17 {
            break;
        }
        j += 1;
    }
    sum
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`, by Newton iteration on the
/// Legendre recurrence from the Chebyshev initial guesses.
pub(crate) fn gauss_legendre(points: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(points >= 1);
    let m = points;
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    for i in 0..m.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Evaluate P_m(x) and P_m'(x) by the three-term recurrence.
            let mut p0 = 1.0;
            let mut p1 = x;
            for j in 2..=m {
                let jf = j as f64;
                let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
                p0 = p1;
                p1 = p2;
            }
            dp = m as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[m - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[m - 1 - i] = w;
    }
    if m % 2 == 1 {
        nodes[m / 2] = 0.0;
    }
    (nodes, weights)
}

/// Geometric ladder of `count >= 2` points from `start` to `stop`
/// (both positive), endpoints exact.
pub fn geomspace(start: f64, stop: f64, count: usize) -> Vec<f64> {
    assert!(count >= 2 && start > 0.0 && stop > 0.0);
    let ratio = (stop / start).powf(1.0 / (count - 1) as f64);
    let mut out: Vec<f64> = (0..count)
        .map(|i| start * ratio.powi(i as i32))
        .collect();
    out[count - 1] = stop;
    out
}

/// Least-squares slope of `ln y` against `ln x`; pairs with `y <= 0` are
/// skipped (they sit at the rounding floor of a remainder that has hit zero).
pub fn fit_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .zip(ys)
        .filter(|(_, &y)| y > 0.0)
        .map(|(&x, &y)| (x.ln(), y.ln()))
        .collect();
    assert!(pts.len() >= 2, "not enough positive samples for a slope fit");
    let m = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    (m * sxy - sx * sy) / (m * sxx - sx * sx)
}
