//! Independent oscillatory-integral oracle for the twisted product.
//!
//! On characters the deformed product is, by definition, the ε → 0 limit of
//! the damped double Gaussian integral
//!
//! ```text
//! I(ε) = (πℏ)^{-2n} ∬ exp(i k·u + i l·v + (2i/ℏ) θ(u,v) − ε|u|² − ε|v|²) du dv,
//! ```
//!
//! with θ(u,v) = u·θv. Each damped integral is an *exact* complex Gaussian
//! formula — no quadrature anywhere — and the only approximation made is the
//! extrapolation ε → 0. This gives a route to the product bicharacter that is
//! computationally independent of the closed-form cocycle, and is used to
//! cross-validate it (including its sign convention).

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::deform::DeformationContext;
use crate::error::{Error, Result};
use crate::fourier::{FourierElement, LatticeVector};
use crate::numerics::geomspace;

/// Relative floor for the damping strength: ε below `1e-8·(2/ℏ)` is rejected
/// because the conditioning of the complex Gaussian form degrades as ε → 0.
pub const EPSILON_SAFEGUARD_FACTOR: f64 = 1e-8;

/// A strictly decreasing sequence of damping strengths together with the
/// polynomial degree used to extrapolate the damped values to ε = 0.
#[derive(Clone, Debug)]
pub struct DampingSchedule {
    epsilons: Vec<f64>,
    extrapolation_order: usize,
}

impl DampingSchedule {
    /// Validates a schedule: at least two entries, all positive and finite,
    /// strictly decreasing.
    pub fn new(epsilons: Vec<f64>, extrapolation_order: usize) -> Result<Self> {
        if epsilons.len() < 2 {
            return Err(Error::InvalidArgument(
                "a damping schedule needs at least 2 entries".into(),
            ));
        }
        for &e in &epsilons {
            if !(e > 0.0 && e.is_finite()) {
                return Err(Error::InvalidArgument(format!(
                    "damping strengths must be positive and finite, got {e}"
                )));
            }
        }
        if epsilons.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::InvalidArgument(
                "damping strengths must be strictly decreasing".into(),
            ));
        }
        Ok(DampingSchedule {
            epsilons,
            extrapolation_order,
        })
    }

    /// The default schedule for a given ℏ: ε_i = (2/ℏ)·η_i with
    /// η ∈ {1e-3, 3e-4, 1e-4, 3e-5, 1e-5}, extrapolated at order 3.
    ///
    /// The damped integrand sees ε only through ℏε/2 (the natural scale of
    /// the quadratic form is 2/ℏ), so the schedule must track ℏ; a fixed
    /// absolute schedule loses phase accuracy at large ℏ. These values give
    /// ~1e-9 phase accuracy across ℏ ∈ [0.1, π] while staying three orders
    /// of magnitude above the conditioning safeguard.
    pub fn default_for_hbar(hbar: f64) -> Result<Self> {
        if !(hbar > 0.0 && hbar.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "the damping schedule requires hbar > 0, got {hbar}"
            )));
        }
        let scale = 2.0 / hbar;
        let etas = [1e-3, 3e-4, 1e-4, 3e-5, 1e-5];
        DampingSchedule::new(etas.iter().map(|&e| scale * e).collect(), 3)
    }

    pub fn epsilons(&self) -> &[f64] {
        &self.epsilons
    }

    pub fn extrapolation_order(&self) -> usize {
        self.extrapolation_order
    }
}

/// The damped character integral I(ε) in closed form.
///
/// Writing w = (u, v) and b = (k, l), the exponent is
/// `-w·Aw + i b·w` with `A = εI - (i/ℏ)S`, where S is the real symmetric
/// matrix `[[0, θ], [θᵀ, 0]]`. Diagonalizing S = U diag(d) Uᵀ gives
///
/// ```text
/// I(ε) = ℏ^{-2n} · ∏_j z_j^{-1/2} · exp(-¼ Σ_j c_j²/z_j),
/// z_j = ε - i d_j/ℏ,  c = Uᵀ b.
/// ```
///
/// Since Re z_j = ε > 0, the principal square root of each z_j is exactly
/// the branch reached by continuous deformation from the real
/// positive-definite regime ε → ∞, so the determinant branch is always
/// correct. The value is finite for every ε > 0.
pub fn damped_phase_integral(
    ctx: &DeformationContext,
    k: &LatticeVector,
    l: &LatticeVector,
    epsilon: f64,
) -> Result<Complex64> {
    let hbar = ctx.hbar();
    if !(hbar > 0.0) {
        return Err(Error::InvalidArgument(
            "the oscillatory oracle requires hbar > 0".into(),
        ));
    }
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "damping strength must be positive and finite, got {epsilon}"
        )));
    }
    let floor = EPSILON_SAFEGUARD_FACTOR * (2.0 / hbar);
    if epsilon < floor {
        return Err(Error::InvalidArgument(format!(
            "damping strength {epsilon:.3e} is below the conditioning floor {floor:.3e}"
        )));
    }
    let n = ctx.dim_n();
    if k.dim_n() != n || l.dim_n() != n {
        return Err(Error::dim(2 * n, 2 * k.dim_n().min(l.dim_n())));
    }
    let d = 2 * n;
    let theta = ctx.structure().theta();

    // S = [[0, θ], [θᵀ, 0]], symmetric of size 4n.
    let mut s = DMatrix::<f64>::zeros(2 * d, 2 * d);
    for r in 0..d {
        for c in 0..d {
            s[(r, d + c)] = theta[(r, c)];
            s[(d + r, c)] = theta[(c, r)];
        }
    }
    let eig = s.symmetric_eigen();
    let b = DVector::<f64>::from_iterator(
        2 * d,
        k.components()
            .iter()
            .chain(l.components().iter())
            .map(|&x| x as f64),
    );
    let c = eig.eigenvectors.transpose() * b;

    let mut prefactor = Complex64::new(hbar.powi(-(d as i32)), 0.0);
    let mut exponent = Complex64::new(0.0, 0.0);
    for j in 0..2 * d {
        let z = Complex64::new(epsilon, -eig.eigenvalues[j] / hbar);
        prefactor /= z.sqrt();
        exponent -= 0.25 * c[j] * c[j] / z;
    }
    let value = prefactor * exponent.exp();
    if !value.re.is_finite() || !value.im.is_finite() {
        return Err(Error::NonConvergence(
            "damped phase integral evaluated to a non-finite value".into(),
        ));
    }
    Ok(value)
}

/// Extrapolates the damped integrals to ε = 0 by Neville's scheme in ε,
/// returning the extrapolated value together with an error estimate.
///
/// With m schedule entries and degree J = min(order, m−1), the estimate is
/// the magnitude of the last extrapolation correction: the difference
/// between the full-degree value and the degree-J value that omits the
/// smallest-ε node (or, when the schedule is too short for that, the
/// difference between the last two extrapolation columns).
pub fn extrapolated_phase(
    ctx: &DeformationContext,
    k: &LatticeVector,
    l: &LatticeVector,
    schedule: &DampingSchedule,
) -> Result<(Complex64, f64)> {
    let xs = schedule.epsilons();
    let m = xs.len();
    let degree = schedule.extrapolation_order().min(m - 1);

    // Neville tableau evaluated at ε = 0: rows follow the schedule, column
    // j interpolates the last j+1 nodes ending at row i.
    let mut tableau: Vec<Vec<Complex64>> = Vec::with_capacity(m);
    for (i, &x) in xs.iter().enumerate() {
        let mut row = vec![damped_phase_integral(ctx, k, l, x)?];
        for j in 1..=degree.min(i) {
            let prev = tableau[i - 1][j - 1];
            let cur = row[j - 1];
            let x_far = xs[i - j];
            row.push((x_far * cur - x * prev) / (x_far - x));
        }
        tableau.push(row);
    }
    let value = tableau[m - 1][degree];
    let error_estimate = if m >= degree + 2 {
        (value - tableau[m - 2][degree]).norm()
    } else {
        (value - tableau[m - 1][degree - 1]).norm()
    };
    Ok((value, error_estimate))
}

/// The deformed product computed entirely from the oscillatory oracle,
/// termwise over the supports of `a` and `b`.
pub fn oracle_star(
    ctx: &DeformationContext,
    a: &FourierElement,
    b: &FourierElement,
    schedule: &DampingSchedule,
) -> Result<FourierElement> {
    let n = ctx.dim_n();
    if a.dim_n() != n || b.dim_n() != n {
        return Err(Error::dim(2 * n, 2 * a.dim_n().min(b.dim_n())));
    }
    let mut terms: Vec<(LatticeVector, Complex64)> =
        Vec::with_capacity(a.num_terms() * b.num_terms());
    for (k, ca) in a.terms() {
        for (l, cb) in b.terms() {
            let (sigma, _) = extrapolated_phase(ctx, k, l, schedule)?;
            terms.push((k.add(l)?, ca * cb * sigma));
        }
    }
    FourierElement::from_terms(n, terms)
}

/// Default seven-node schedule used by the zero-mode self-test: geometric
/// from 1e-1 down to 1e-4, extrapolated at order 2.
pub fn reference_schedule() -> DampingSchedule {
    DampingSchedule::new(geomspace(1e-1, 1e-4, 7), 2)
        .expect("the reference schedule is statically valid")
}
