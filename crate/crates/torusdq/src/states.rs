//! Classical states on the torus algebra, their deformed counterparts
//! ω_ℏ = ω_0 ∘ S_ℏ, and the continuity probes for state sections: curves
//! over an ℏ grid and seeded positivity scans.
//!
//! The deformed functional of a classical state is automatically a state of
//! the deformed algebra: unital because S_ℏ is, and positive on deformed
//! squares because S_ℏ(a* ⋆ a) is a positive function. At ℏ = 0 it
//! coincides with the classical state bit for bit.

use num_complex::Complex64;

use crate::deform::DeformationContext;
use crate::error::{Error, Result};
use crate::fourier::{FourierElement, LatticeVector};
use crate::sample::random_element;
use crate::smoothing::smooth;
use crate::symplectic::SymplecticStructure;

/// Grid resolution (points per axis) of the density positivity proxy.
const DENSITY_GRID_REFINEMENT: usize = 64;

/// Tolerance for the density validity checks (Hermiticity defect,
/// normalization defect, grid positivity).
const DENSITY_TOLERANCE: f64 = 1e-10;

/// A positive normalized functional on the undeformed algebra.
#[derive(Clone, Debug)]
pub enum ClassicalState {
    /// The normalized trace a ↦ a_0.
    Trace,
    /// Evaluation at a point of the torus (angles in radians).
    Point(Vec<f64>),
    /// Integration against a density: a ↦ (d·a)_0 with d a normalized
    /// nonnegative real function.
    Density(FourierElement),
}

impl ClassicalState {
    pub fn trace() -> Self {
        ClassicalState::Trace
    }

    /// Point evaluation; the coordinate vector must have even positive
    /// length 2n.
    pub fn point(x: Vec<f64>) -> Result<Self> {
        if x.is_empty() || !x.len().is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!(
                "a point on the 2n-torus needs an even positive number of coordinates, got {}",
                x.len()
            )));
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(
                "point coordinates must be finite".into(),
            ));
        }
        Ok(ClassicalState::Point(x))
    }

    /// Density state. Requires d = d* (coefficient Hermiticity), zero-mode
    /// coefficient exactly normalized to 1 within 1e-10, and min of the
    /// density over a refinement-64 grid ≥ -1e-10 (positivity proxy).
    pub fn density(d: FourierElement) -> Result<Self> {
        let herm_defect = d.sub(&d.involution())?.l1_norm();
        if herm_defect > DENSITY_TOLERANCE * d.l1_norm().max(1.0) {
            return Err(Error::InvalidArgument(format!(
                "density is not self-adjoint (defect {herm_defect:.3e})"
            )));
        }
        let zero = d.coefficient(&LatticeVector::zero(d.dim_n())?);
        if (zero - Complex64::new(1.0, 0.0)).norm() > DENSITY_TOLERANCE {
            return Err(Error::InvalidArgument(format!(
                "density zero-mode coefficient must be 1, got {zero}"
            )));
        }
        let scan = d.grid_scan(DENSITY_GRID_REFINEMENT)?;
        if scan.min_re < -DENSITY_TOLERANCE {
            return Err(Error::InvalidArgument(format!(
                "density takes the value {:.3e} < 0 on the proxy grid",
                scan.min_re
            )));
        }
        Ok(ClassicalState::Density(d))
    }

    /// The dimension the state is bound to, if any (the trace applies in
    /// every dimension).
    pub fn dim_n(&self) -> Option<usize> {
        match self {
            ClassicalState::Trace => None,
            ClassicalState::Point(x) => Some(x.len() / 2),
            ClassicalState::Density(d) => Some(d.dim_n()),
        }
    }

    fn check_dim(&self, a: &FourierElement) -> Result<()> {
        if let Some(n) = self.dim_n() {
            if n != a.dim_n() {
                return Err(Error::dim(2 * n, 2 * a.dim_n()));
            }
        }
        Ok(())
    }
}

/// Applies the classical state: trace → a_0, point → evaluation,
/// density → zero mode of the pointwise product d·a.
pub fn classical_evaluate(s: &ClassicalState, a: &FourierElement) -> Result<Complex64> {
    s.check_dim(a)?;
    match s {
        ClassicalState::Trace => Ok(a.coefficient(&LatticeVector::zero(a.dim_n())?)),
        ClassicalState::Point(x) => a.evaluate(x),
        ClassicalState::Density(d) => {
            let prod = d.multiply(a)?;
            Ok(prod.coefficient(&LatticeVector::zero(a.dim_n())?))
        }
    }
}

/// The deformed state ω_ℏ = ω_0 ∘ S_ℏ applied to `a`.
pub fn deformed_evaluate(
    s: &ClassicalState,
    ctx: &DeformationContext,
    a: &FourierElement,
) -> Result<Complex64> {
    classical_evaluate(s, &smooth(ctx, a)?)
}

/// A finite increasing set of deformation scales starting at 0.
#[derive(Clone, Debug)]
pub struct HbarGrid {
    values: Vec<f64>,
}

impl HbarGrid {
    /// Validates: nonempty, finite, strictly increasing, first element 0.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidArgument("empty hbar grid".into()));
        }
        if values[0] != 0.0 {
            return Err(Error::InvalidArgument(format!(
                "an hbar grid must start at 0, got {}",
                values[0]
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("hbar grid values must be finite".into()));
        }
        if values.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidArgument(
                "hbar grid values must be strictly increasing".into(),
            ));
        }
        Ok(HbarGrid { values })
    }

    /// Uniform grid {0, stop/(count-1), …, stop}.
    pub fn linear(stop: f64, count: usize) -> Result<Self> {
        if count < 2 || !(stop > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "a linear grid needs count >= 2 and stop > 0, got count {count}, stop {stop}"
            )));
        }
        let step = stop / (count - 1) as f64;
        let mut values: Vec<f64> = (0..count).map(|i| i as f64 * step).collect();
        values[count - 1] = stop;
        HbarGrid::new(values)
    }

    /// 0 followed by a geometric ladder from `start` to `stop`.
    pub fn log_with_zero(start: f64, stop: f64, count: usize) -> Result<Self> {
        if !(start > 0.0 && stop > start) || count < 2 {
            return Err(Error::InvalidArgument(format!(
                "a log grid needs 0 < start < stop and count >= 2, got start {start}, stop {stop}, count {count}"
            )));
        }
        let mut values = vec![0.0];
        values.extend(crate::numerics::geomspace(start, stop, count));
        HbarGrid::new(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// The grid with all midpoints of adjacent values inserted (2× finer).
    pub fn refined(&self) -> HbarGrid {
        let mut values = Vec::with_capacity(2 * self.values.len() - 1);
        for w in self.values.windows(2) {
            values.push(w[0]);
            values.push(0.5 * (w[0] + w[1]));
        }
        values.push(*self.values.last().expect("grids are nonempty"));
        HbarGrid { values }
    }
}

/// Samples ℏ ↦ ω_ℏ(a) over the grid. The first sample has ℏ = 0 and equals
/// the classical value exactly — S_0 is the identity, coefficient by
/// coefficient, so the two evaluations run on identical data.
pub fn state_curve(
    s: &ClassicalState,
    structure: &SymplecticStructure,
    a: &FourierElement,
    grid: &HbarGrid,
) -> Result<Vec<(f64, Complex64)>> {
    grid.values()
        .iter()
        .map(|&hbar| {
            let ctx = DeformationContext::new(structure.clone(), hbar)?;
            Ok((hbar, deformed_evaluate(s, &ctx, a)?))
        })
        .collect()
}

/// Largest modulus of the difference between adjacent curve values.
pub fn max_adjacent_jump(curve: &[(f64, Complex64)]) -> f64 {
    curve
        .windows(2)
        .map(|w| (w[1].1 - w[0].1).norm())
        .fold(0.0, f64::max)
}

/// Outcome of a seeded positivity scan.
#[derive(Clone, Debug)]
pub struct PositivityScan {
    /// Smallest real part of ω_ℏ(a* ⋆ a) over the trials.
    pub min_found: f64,
    /// The trial element attaining the minimum.
    pub worst_case: FourierElement,
    /// Largest observed |Im ω_ℏ(a* ⋆ a)| / ‖a‖₁² over the trials.
    pub max_imag_ratio: f64,
    /// Largest ‖a‖₁² over the trials (the scale for thresholds).
    pub max_sq_l1: f64,
}

/// Draws `trials` random elements (≤ `modes` modes, coefficients uniform on
/// the unit disc, support ‖k‖∞ ≤ 3, deterministic from `seed`) and records
/// the minimum of Re ω_ℏ(a* ⋆ a) together with its witness.
pub fn positivity_scan(
    s: &ClassicalState,
    ctx: &DeformationContext,
    trials: usize,
    modes: usize,
    seed: u64,
) -> Result<PositivityScan> {
    if trials == 0 || modes == 0 {
        return Err(Error::InvalidArgument(
            "positivity scans need trials >= 1 and modes >= 1".into(),
        ));
    }
    let n = ctx.dim_n();
    let mut rng = crate::sample::seeded_rng(seed);
    let mut min_found = f64::INFINITY;
    let mut worst_case = FourierElement::unit(n)?;
    let mut max_imag_ratio: f64 = 0.0;
    let mut max_sq_l1: f64 = 0.0;
    for _ in 0..trials {
        let a = random_element(&mut rng, n, modes, crate::sample::DEFAULT_MAX_WAVE)?;
        let square = ctx.star_product(&a.involution(), &a)?;
        let value = deformed_evaluate(s, ctx, &square)?;
        let sq_l1 = a.l1_norm() * a.l1_norm();
        max_sq_l1 = max_sq_l1.max(sq_l1);
        max_imag_ratio = max_imag_ratio.max(value.im.abs() / sq_l1.max(1e-30));
        if value.re < min_found {
            min_found = value.re;
            worst_case = a;
        }
    }
    Ok(PositivityScan {
        min_found,
        worst_case,
        max_imag_ratio,
        max_sq_l1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lv(components: &[i64]) -> LatticeVector {
        LatticeVector::new(components.to_vec()).unwrap()
    }

    fn sample_element() -> FourierElement {
        FourierElement::from_terms(
            1,
            vec![
                (lv(&[0, 0]), Complex64::new(0.3, 0.1)),
                (lv(&[1, 0]), Complex64::new(0.4, -0.9)),
                (lv(&[-2, 3]), Complex64::new(0.1, 0.7)),
            ],
        )
        .unwrap()
    }

    fn simple_density() -> FourierElement {
        FourierElement::from_terms(
            1,
            vec![
                (lv(&[0, 0]), Complex64::new(1.0, 0.0)),
                (lv(&[1, 0]), Complex64::new(0.25, 0.0)),
                (lv(&[-1, 0]), Complex64::new(0.25, 0.0)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn trace_picks_the_zero_mode() {
        let s = ClassicalState::trace();
        let e0 = FourierElement::unit(1).unwrap();
        let ek = FourierElement::character(lv(&[2, -1])).unwrap();
        assert_eq!(classical_evaluate(&s, &e0).unwrap(), Complex64::new(1.0, 0.0));
        assert_eq!(classical_evaluate(&s, &ek).unwrap(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn point_at_the_origin_sums_the_coefficients() {
        let s = ClassicalState::point(vec![0.0, 0.0]).unwrap();
        let a = sample_element();
        let total: Complex64 = a.terms().map(|(_, c)| *c).sum();
        assert!((classical_evaluate(&s, &a).unwrap() - total).norm() < 1e-15);
    }

    #[test]
    fn unit_density_reproduces_the_trace() {
        let d = FourierElement::unit(1).unwrap();
        let s = ClassicalState::density(d).unwrap();
        let a = sample_element();
        assert_eq!(
            classical_evaluate(&s, &a).unwrap(),
            classical_evaluate(&ClassicalState::trace(), &a).unwrap()
        );
    }

    #[test]
    fn density_validation_rejects_bad_inputs() {
        assert!(ClassicalState::density(simple_density()).is_ok());
        // Zero mode not normalized.
        let unnorm = simple_density().scale(Complex64::new(2.0, 0.0));
        assert!(ClassicalState::density(unnorm).is_err());
        // Not self-adjoint.
        let skew = FourierElement::from_terms(
            1,
            vec![
                (lv(&[0, 0]), Complex64::new(1.0, 0.0)),
                (lv(&[1, 0]), Complex64::new(0.25, 0.0)),
            ],
        )
        .unwrap();
        assert!(ClassicalState::density(skew).is_err());
        // Goes negative: 1 + 1.2·cos goes down to -0.2.
        let negative = FourierElement::from_terms(
            1,
            vec![
                (lv(&[0, 0]), Complex64::new(1.0, 0.0)),
                (lv(&[1, 0]), Complex64::new(0.6, 0.0)),
                (lv(&[-1, 0]), Complex64::new(0.6, 0.0)),
            ],
        )
        .unwrap();
        assert!(ClassicalState::density(negative).is_err());
    }

    #[test]
    fn point_validation_rejects_bad_inputs() {
        assert!(ClassicalState::point(vec![]).is_err());
        assert!(ClassicalState::point(vec![1.0]).is_err());
        assert!(ClassicalState::point(vec![f64::NAN, 0.0]).is_err());
        assert!(ClassicalState::point(vec![1.0, -2.0]).is_ok());
    }

    #[test]
    fn states_are_unital_for_every_hbar() {
        let e0 = FourierElement::unit(1).unwrap();
        let one = Complex64::new(1.0, 0.0);
        for s in [
            ClassicalState::trace(),
            ClassicalState::point(vec![0.7, -1.2]).unwrap(),
            ClassicalState::density(simple_density()).unwrap(),
        ] {
            for hbar in [0.0, 1.0, std::f64::consts::PI] {
                let ctx = DeformationContext::standard(1, hbar).unwrap();
                assert_eq!(deformed_evaluate(&s, &ctx, &e0).unwrap(), one);
            }
        }
    }

    #[test]
    fn trace_section_is_literally_constant_in_hbar() {
        let a = sample_element();
        let s = ClassicalState::trace();
        let classical = classical_evaluate(&s, &a).unwrap();
        for hbar in [0.0, 0.1, 1.0, 2.71] {
            let ctx = DeformationContext::standard(1, hbar).unwrap();
            assert_eq!(deformed_evaluate(&s, &ctx, &a).unwrap(), classical);
        }
    }

    #[test]
    fn point_state_curve_follows_the_multiplier_ladder() {
        let s = ClassicalState::point(vec![0.0, 0.0]).unwrap();
        let a = FourierElement::character(lv(&[1, 0])).unwrap();
        let grid = HbarGrid::new(vec![0.0, 1.0, 2.0]).unwrap();
        let structure = SymplecticStructure::standard(1).unwrap();
        let curve = state_curve(&s, &structure, &a, &grid).unwrap();
        let expected = [1.0, 0.7788007830714049, 0.6065306597126334];
        for ((_, v), e) in curve.iter().zip(expected.iter()) {
            assert!((v - Complex64::new(*e, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn curve_starts_exactly_at_the_classical_value() {
        let s = ClassicalState::point(vec![0.4, 2.2]).unwrap();
        let a = sample_element();
        let structure = SymplecticStructure::standard(1).unwrap();
        let grid = HbarGrid::linear(std::f64::consts::PI, 9).unwrap();
        let curve = state_curve(&s, &structure, &a, &grid).unwrap();
        assert_eq!(curve[0].0, 0.0);
        assert_eq!(curve[0].1, classical_evaluate(&s, &a).unwrap());
    }

    #[test]
    fn refinement_does_not_increase_the_max_jump() {
        let s = ClassicalState::point(vec![0.4, 2.2]).unwrap();
        let a = sample_element();
        let structure = SymplecticStructure::standard(1).unwrap();
        let grid = HbarGrid::linear(std::f64::consts::PI, 11).unwrap();
        let coarse = state_curve(&s, &structure, &a, &grid).unwrap();
        let fine = state_curve(&s, &structure, &a, &grid.refined()).unwrap();
        assert!(max_adjacent_jump(&fine) <= max_adjacent_jump(&coarse) + 1e-15);
    }

    #[test]
    fn hbar_grid_validation_and_constructors() {
        assert!(HbarGrid::new(vec![]).is_err());
        assert!(HbarGrid::new(vec![0.1, 0.2]).is_err());
        assert!(HbarGrid::new(vec![0.0, 0.2, 0.2]).is_err());
        assert!(HbarGrid::new(vec![0.0, 0.3, 0.2]).is_err());
        let lin = HbarGrid::linear(2.0, 5).unwrap();
        assert_eq!(lin.values(), &[0.0, 0.5, 1.0, 1.5, 2.0]);
        let log = HbarGrid::log_with_zero(1e-3, 1e-1, 3).unwrap();
        assert_eq!(log.values().len(), 4);
        assert_eq!(log.values()[0], 0.0);
        assert!((log.values()[2] - 1e-2).abs() < 1e-17);
        let refined = lin.refined();
        assert_eq!(refined.values().len(), 9);
        assert_eq!(refined.values()[1], 0.25);
        assert_eq!(refined.values()[8], 2.0);
    }

    #[test]
    fn deformed_squares_of_characters_evaluate_to_one() {
        let ctx = DeformationContext::standard(1, std::f64::consts::PI).unwrap();
        let a = FourierElement::character(lv(&[2, -1])).unwrap();
        let square = ctx.star_product(&a.involution(), &a).unwrap();
        for s in [
            ClassicalState::trace(),
            ClassicalState::point(vec![0.5, 0.5]).unwrap(),
        ] {
            assert_eq!(
                deformed_evaluate(&s, &ctx, &square).unwrap(),
                Complex64::new(1.0, 0.0)
            );
        }
    }

    #[test]
    fn positivity_scan_is_deterministic_and_positive_here() {
        let ctx = DeformationContext::standard(1, 1.0).unwrap();
        for s in [
            ClassicalState::trace(),
            ClassicalState::point(vec![0.0, 0.0]).unwrap(),
            ClassicalState::density(simple_density()).unwrap(),
        ] {
            let scan1 = positivity_scan(&s, &ctx, 50, 4, 42).unwrap();
            let scan2 = positivity_scan(&s, &ctx, 50, 4, 42).unwrap();
            assert_eq!(scan1.min_found, scan2.min_found);
            assert_eq!(scan1.worst_case, scan2.worst_case);
            assert!(scan1.min_found >= -1e-9 * scan1.max_sq_l1);
            assert!(scan1.max_imag_ratio <= 1e-10);
        }
    }

    #[test]
    fn classical_scan_at_hbar_zero_is_plainly_positive() {
        let ctx = DeformationContext::standard(1, 0.0).unwrap();
        let s = ClassicalState::point(vec![1.1, -0.3]).unwrap();
        let scan = positivity_scan(&s, &ctx, 50, 4, 7).unwrap();
        assert!(scan.min_found >= -1e-10 * scan.max_sq_l1);
    }
}
