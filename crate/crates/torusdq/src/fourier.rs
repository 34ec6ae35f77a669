//! Fourier-lattice algebra: finitely supported complex coefficient maps on
//! the integer lattice Z^{2n}, viewed as trigonometric polynomials on the
//! 2n-torus. This is the undeformed *-algebra every other module deforms,
//! smooths, or estimates.
//!
//! Coefficients are stored in a `BTreeMap` keyed by lattice vector so that
//! every iteration (products, serialization, grid scans) has a fixed,
//! reproducible order. Exact zero coefficients are pruned on construction;
//! numerical cleanup below a threshold is only ever explicit (`clean`).

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A wave vector in Z^{2n}: the exponent of one character `e_k`.
///
/// The component count is always `2 * dim_n` with `dim_n >= 1`; this is
/// enforced at construction so the rest of the crate can rely on it.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatticeVector(Vec<i64>);

impl LatticeVector {
    /// Builds a lattice vector from its components; the length must be
    /// even and at least 2 (ambient dimension n >= 1).
    pub fn new(components: Vec<i64>) -> Result<Self> {
        if components.is_empty() || !components.len().is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!(
                "lattice vector length must be even and positive, got {}",
                components.len()
            )));
        }
        Ok(LatticeVector(components))
    }

    /// The zero vector in Z^{2n}.
    pub fn zero(dim_n: usize) -> Result<Self> {
        LatticeVector::new(vec![0; 2 * dim_n])
    }

    pub fn components(&self) -> &[i64] {
        &self.0
    }

    /// Ambient dimension n (half the component count).
    pub fn dim_n(&self) -> usize {
        self.0.len() / 2
    }

    /// Componentwise sum; both vectors must have the same length.
    pub fn add(&self, other: &LatticeVector) -> Result<Self> {
        if self.0.len() != other.0.len() {
            return Err(Error::dim(self.0.len(), other.0.len()));
        }
        Ok(LatticeVector(
            self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect(),
        ))
    }

    /// Componentwise negation.
    pub fn neg(&self) -> Self {
        LatticeVector(self.0.iter().map(|a| -a).collect())
    }

    /// Real dot product `k . x` with a vector of angles.
    pub fn dot(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.0.len() {
            return Err(Error::dim(self.0.len(), x.len()));
        }
        Ok(self.0.iter().zip(x).map(|(&k, &xi)| k as f64 * xi).sum())
    }

    /// Sup norm of the components.
    pub fn norm_inf(&self) -> i64 {
        self.0.iter().map(|k| k.abs()).max().unwrap_or(0)
    }
}

/// Statistics of a trigonometric polynomial sampled on the uniform grid
/// with `refinement` points per axis (`refinement^{2n}` points total).
#[derive(Clone, Debug)]
pub struct GridScan {
    /// Largest modulus seen on the grid (a lower bound for the sup norm).
    pub max_abs: f64,
    /// Smallest real part seen on the grid.
    pub min_re: f64,
    /// Grid point (angles in radians) where `min_re` was attained.
    pub argmin: Vec<f64>,
    /// Largest |imaginary part| seen on the grid.
    pub max_abs_im: f64,
}

/// A trigonometric polynomial on the 2n-torus, stored as its finite Fourier
/// coefficient map `k -> a_k`. Two elements are equal iff their pruned
/// coefficient maps are equal.
#[derive(Clone, Debug, PartialEq)]
pub struct FourierElement {
    dim_n: usize,
    coefficients: BTreeMap<LatticeVector, Complex64>,
}

impl FourierElement {
    /// The zero element of the algebra over the 2n-torus.
    pub fn zero(dim_n: usize) -> Result<Self> {
        if dim_n == 0 {
            return Err(Error::InvalidArgument(
                "ambient dimension n must be at least 1".into(),
            ));
        }
        Ok(FourierElement {
            dim_n,
            coefficients: BTreeMap::new(),
        })
    }

    /// The multiplicative unit `e_0`.
    pub fn unit(dim_n: usize) -> Result<Self> {
        Self::character(LatticeVector::zero(dim_n)?)
    }

    /// The character `e_k` (single coefficient 1 at `k`).
    pub fn character(k: LatticeVector) -> Result<Self> {
        let mut coefficients = BTreeMap::new();
        let dim_n = k.dim_n();
        coefficients.insert(k, Complex64::new(1.0, 0.0));
        Ok(FourierElement {
            dim_n,
            coefficients,
        })
    }

    /// Builds an element from `(k, c)` terms. Terms with equal `k` are
    /// summed; exact zero coefficients are pruned. Every key must have
    /// length `2 * dim_n`.
    pub fn from_terms<I>(dim_n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (LatticeVector, Complex64)>,
    {
        let mut out = FourierElement::zero(dim_n)?;
        for (k, c) in terms {
            if k.dim_n() != dim_n {
                return Err(Error::dim(2 * dim_n, k.components().len()));
            }
            let entry = out.coefficients.entry(k).or_insert(Complex64::new(0.0, 0.0));
            *entry += c;
        }
        out.coefficients
            .retain(|_, c| !(c.re == 0.0 && c.im == 0.0));
        Ok(out)
    }

    pub fn dim_n(&self) -> usize {
        self.dim_n
    }

    /// Number of (pruned) support points.
    pub fn num_terms(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// Iterates the support in lattice-vector order.
    pub fn terms(&self) -> impl Iterator<Item = (&LatticeVector, &Complex64)> {
        self.coefficients.iter()
    }

    /// Coefficient at `k` (zero when absent).
    pub fn coefficient(&self, k: &LatticeVector) -> Complex64 {
        self.coefficients
            .get(k)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// ℓ¹ norm of the coefficients, `Σ_k |a_k|`.
    pub fn l1_norm(&self) -> f64 {
        self.coefficients.values().map(|c| c.norm()).sum()
    }

    /// Undeformed (pointwise) product: coefficient convolution
    /// `(ab)_m = Σ_{k+l=m} a_k b_l`. Commutative with unit `e_0`.
    pub fn multiply(&self, other: &FourierElement) -> Result<FourierElement> {
        if self.dim_n != other.dim_n {
            return Err(Error::dim(2 * self.dim_n, 2 * other.dim_n));
        }
        let mut out = FourierElement::zero(self.dim_n)?;
        for (k, ca) in &self.coefficients {
            for (l, cb) in &other.coefficients {
                let m = k.add(l)?;
                let entry = out.coefficients.entry(m).or_insert(Complex64::new(0.0, 0.0));
                *entry += ca * cb;
            }
        }
        out.coefficients
            .retain(|_, c| !(c.re == 0.0 && c.im == 0.0));
        Ok(out)
    }

    /// *-involution `(a*)_k = conj(a_{-k})`; pointwise complex conjugation
    /// of the corresponding function on the torus.
    pub fn involution(&self) -> FourierElement {
        let coefficients = self
            .coefficients
            .iter()
            .map(|(k, c)| (k.neg(), c.conj()))
            .collect();
        FourierElement {
            dim_n: self.dim_n,
            coefficients,
        }
    }

    /// Evaluates the polynomial at a point `x` of the torus (angles in
    /// radians): `Σ_k a_k exp(i k·x)`.
    pub fn evaluate(&self, x: &[f64]) -> Result<Complex64> {
        if x.len() != 2 * self.dim_n {
            return Err(Error::dim(2 * self.dim_n, x.len()));
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, c) in &self.coefficients {
            let phase = k.dot(x)?;
            acc += c * Complex64::new(phase.cos(), phase.sin());
        }
        Ok(acc)
    }

    /// Translation action `α_u`: multiplies the coefficient at `k` by
    /// `exp(i k·u)`. Preserves the ℓ¹ norm exactly and satisfies the group
    /// law `α_{u+v} = α_u ∘ α_v`.
    pub fn translate(&self, u: &[f64]) -> Result<FourierElement> {
        if u.len() != 2 * self.dim_n {
            return Err(Error::dim(2 * self.dim_n, u.len()));
        }
        let coefficients = self
            .coefficients
            .iter()
            .map(|(k, c)| {
                let phase = k.dot(u).expect("length checked above");
                (k.clone(), c * Complex64::new(phase.cos(), phase.sin()))
            })
            .collect();
        Ok(FourierElement {
            dim_n: self.dim_n,
            coefficients,
        })
    }

    /// Infinitesimal generator of translation along coordinate `direction`
    /// (1-based, `1..=2n`): multiplies the coefficient at `k` by
    /// `i k_direction`. Satisfies the Leibniz rule for `multiply`.
    pub fn derivative(&self, direction: usize) -> Result<FourierElement> {
        if direction == 0 || direction > 2 * self.dim_n {
            return Err(Error::InvalidArgument(format!(
                "direction must be in 1..={}, got {direction}",
                2 * self.dim_n
            )));
        }
        let mut out = FourierElement::zero(self.dim_n)?;
        for (k, c) in &self.coefficients {
            let kj = k.components()[direction - 1] as f64;
            if kj == 0.0 {
                continue;
            }
            out.coefficients
                .insert(k.clone(), c * Complex64::new(0.0, kj));
        }
        Ok(out)
    }

    /// Sum of two elements.
    pub fn add(&self, other: &FourierElement) -> Result<FourierElement> {
        if self.dim_n != other.dim_n {
            return Err(Error::dim(2 * self.dim_n, 2 * other.dim_n));
        }
        let mut out = self.clone();
        for (k, c) in &other.coefficients {
            let entry = out.coefficients.entry(k.clone()).or_insert(Complex64::new(0.0, 0.0));
            *entry += c;
        }
        out.coefficients
            .retain(|_, c| !(c.re == 0.0 && c.im == 0.0));
        Ok(out)
    }

    /// Difference of two elements.
    pub fn sub(&self, other: &FourierElement) -> Result<FourierElement> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// Scalar multiple.
    pub fn scale(&self, factor: Complex64) -> FourierElement {
        let coefficients = self
            .coefficients
            .iter()
            .map(|(k, c)| (k.clone(), c * factor))
            .filter(|(_, c)| !(c.re == 0.0 && c.im == 0.0))
            .collect();
        FourierElement {
            dim_n: self.dim_n,
            coefficients,
        }
    }

    /// Explicit numerical cleanup: drops coefficients with `|a_k| <= threshold`.
    /// Never applied implicitly.
    pub fn clean(&self, threshold: f64) -> Result<FourierElement> {
        if !(threshold >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "cleanup threshold must be nonnegative, got {threshold}"
            )));
        }
        let coefficients = self
            .coefficients
            .iter()
            .filter(|(_, c)| c.norm() > threshold)
            .map(|(k, c)| (k.clone(), *c))
            .collect();
        Ok(FourierElement {
            dim_n: self.dim_n,
            coefficients,
        })
    }

    /// Sandwich estimate of the sup norm `|a|_0` of the function on the
    /// torus: `lower` is the max modulus over the uniform grid with
    /// `refinement` points per axis, `upper` is the ℓ¹ coefficient norm.
    /// `lower <= |a|_0 <= upper`, and `lower` is nondecreasing along nested
    /// grid refinements.
    pub fn sup_norm_estimate(&self, refinement: usize) -> Result<(f64, f64)> {
        let scan = self.grid_scan(refinement)?;
        Ok((scan.max_abs, self.l1_norm()))
    }

    /// Scans the uniform grid with `refinement` points per axis and reports
    /// max modulus, min real part (with its grid point), and max |Im|.
    ///
    /// The scan walks the grid in odometer order keeping per-axis partial
    /// products of each mode's phase factors, so the cost is about one
    /// complex multiply-add per (grid point, mode) pair.
    pub fn grid_scan(&self, refinement: usize) -> Result<GridScan> {
        if refinement == 0 {
            return Err(Error::InvalidArgument(
                "grid refinement must be at least 1".into(),
            ));
        }
        let axes = 2 * self.dim_n;
        let r = refinement;
        let modes: Vec<(&LatticeVector, Complex64)> =
            self.coefficients.iter().map(|(k, c)| (k, *c)).collect();
        let nm = modes.len();
        let xs: Vec<f64> = (0..r)
            .map(|j| 2.0 * std::f64::consts::PI * j as f64 / r as f64)
            .collect();
        // Per-mode, per-axis phase tables exp(i k_axis x_j).
        let mut tables: Vec<Vec<Vec<Complex64>>> = Vec::with_capacity(nm);
        for (k, _) in &modes {
            let per_axis: Vec<Vec<Complex64>> = (0..axes)
                .map(|ax| {
                    let ka = k.components()[ax] as f64;
                    xs.iter()
                        .map(|&x| {
                            let p = ka * x;
                            Complex64::new(p.cos(), p.sin())
                        })
                        .collect()
                })
                .collect();
            tables.push(per_axis);
        }

        let mut scan = GridScan {
            max_abs: 0.0,
            min_re: f64::INFINITY,
            argmin: vec![0.0; axes],
            max_abs_im: 0.0,
        };
        if nm == 0 {
            scan.min_re = 0.0;
            return Ok(scan);
        }

        // partial[d][m] = c_m * Π_{ax < d} tables[m][ax][idx[ax]].
        let mut partial: Vec<Vec<Complex64>> = vec![vec![Complex64::new(0.0, 0.0); nm]; axes + 1];
        for (m, (_, c)) in modes.iter().enumerate() {
            partial[0][m] = *c;
        }
        let mut idx = vec![0usize; axes];
        let mut depth = 0usize;
        loop {
            for d in depth..axes {
                for m in 0..nm {
                    partial[d + 1][m] = partial[d][m] * tables[m][d][idx[d]];
                }
            }
            let value: Complex64 = partial[axes].iter().sum();
            let abs = value.norm();
            if abs > scan.max_abs {
                scan.max_abs = abs;
            }
            if value.re < scan.min_re {
                scan.min_re = value.re;
                for (slot, &j) in scan.argmin.iter_mut().zip(&idx) {
                    *slot = xs[j];
                }
            }
            let im = value.im.abs();
            if im > scan.max_abs_im {
                scan.max_abs_im = im;
            }
            // Advance the odometer; `depth` marks the first changed axis.
            let mut d = axes;
            loop {
                if d == 0 {
                    return Ok(scan);
                }
                d -= 1;
                idx[d] += 1;
                if idx[d] < r {
                    depth = d;
                    break;
                }
                idx[d] = 0;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lv(components: &[i64]) -> LatticeVector {
        LatticeVector::new(components.to_vec()).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rejects_degenerate_dimension() {
        assert!(FourierElement::zero(0).is_err());
        assert!(LatticeVector::new(vec![]).is_err());
        assert!(LatticeVector::new(vec![1, 2, 3]).is_err());
    }

    #[test]
    fn characters_multiply_by_adding_wave_vectors() {
        let a = FourierElement::character(lv(&[1, 0])).unwrap();
        let b = FourierElement::character(lv(&[0, 2])).unwrap();
        let ab = a.multiply(&b).unwrap();
        assert_eq!(ab, FourierElement::character(lv(&[1, 2])).unwrap());
    }

    #[test]
    fn unit_law_holds_exactly() {
        let a = FourierElement::from_terms(
            1,
            vec![(lv(&[1, 0]), c(0.3, -0.7)), (lv(&[-2, 1]), c(0.0, 1.5))],
        )
        .unwrap();
        let e0 = FourierElement::unit(1).unwrap();
        assert_eq!(e0.multiply(&a).unwrap(), a);
        assert_eq!(a.multiply(&e0).unwrap(), a);
    }

    #[test]
    fn binomial_square_of_cosine_pair() {
        // (e_k + e_{-k})^2 = e_{2k} + 2 e_0 + e_{-2k}.
        let k = lv(&[3, -1]);
        let a = FourierElement::from_terms(
            1,
            vec![(k.clone(), c(1.0, 0.0)), (k.neg(), c(1.0, 0.0))],
        )
        .unwrap();
        let sq = a.multiply(&a).unwrap();
        assert_eq!(sq.coefficient(&lv(&[6, -2])), c(1.0, 0.0));
        assert_eq!(sq.coefficient(&lv(&[0, 0])), c(2.0, 0.0));
        assert_eq!(sq.coefficient(&lv(&[-6, 2])), c(1.0, 0.0));
        assert_eq!(sq.num_terms(), 3);
    }

    #[test]
    fn involution_flips_and_conjugates() {
        let a = FourierElement::from_terms(1, vec![(lv(&[2, -1]), c(1.0, 2.0))]).unwrap();
        let astar = a.involution();
        assert_eq!(astar.coefficient(&lv(&[-2, 1])), c(1.0, -2.0));
        assert_eq!(astar.involution(), a);
        // involution(i e_0) = -i e_0.
        let ie0 = FourierElement::unit(1).unwrap().scale(c(0.0, 1.0));
        assert_eq!(ie0.involution(), ie0.scale(c(-1.0, 0.0)));
    }

    #[test]
    fn evaluate_basic_values() {
        let e0 = FourierElement::unit(1).unwrap();
        assert_eq!(e0.evaluate(&[0.4, -2.0]).unwrap(), c(1.0, 0.0));
        let e10 = FourierElement::character(lv(&[1, 0])).unwrap();
        let v = e10
            .evaluate(&[std::f64::consts::FRAC_PI_2, 0.0])
            .unwrap();
        assert!((v - c(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn evaluate_of_involution_is_conjugate() {
        let a = FourierElement::from_terms(
            1,
            vec![(lv(&[1, 2]), c(0.5, 0.25)), (lv(&[0, -3]), c(-1.0, 0.75))],
        )
        .unwrap();
        let x = [0.31, 1.78];
        let v = a.evaluate(&x).unwrap();
        let w = a.involution().evaluate(&x).unwrap();
        assert!((w - v.conj()).norm() < 1e-14);
    }

    #[test]
    fn sup_norm_estimate_for_characters_and_cosine() {
        let ek = FourierElement::character(lv(&[2, 5])).unwrap();
        let (lo, hi) = ek.sup_norm_estimate(1).unwrap();
        assert!((lo - 1.0).abs() < 1e-15);
        assert_eq!(hi, 1.0);
        // 2 cos(x1): upper 2, lower approaches 2 on refined grids.
        let a = FourierElement::from_terms(
            1,
            vec![(lv(&[1, 0]), c(1.0, 0.0)), (lv(&[-1, 0]), c(1.0, 0.0))],
        )
        .unwrap();
        let (lo16, up) = a.sup_norm_estimate(16).unwrap();
        let (lo64, _) = a.sup_norm_estimate(64).unwrap();
        assert_eq!(up, 2.0);
        assert!(lo16 <= lo64 + 1e-15);
        assert!((lo64 - 2.0).abs() < 1e-2);
    }

    #[test]
    fn grid_lower_bounds_are_nested() {
        let a = FourierElement::from_terms(
            1,
            vec![
                (lv(&[1, 0]), c(0.9, 0.1)),
                (lv(&[0, 2]), c(-0.4, 0.3)),
                (lv(&[-1, 1]), c(0.2, -0.8)),
                (lv(&[2, -1]), c(0.05, 0.55)),
                (lv(&[0, 0]), c(0.3, 0.0)),
            ],
        )
        .unwrap();
        let (lo8, up) = a.sup_norm_estimate(8).unwrap();
        let (lo16, _) = a.sup_norm_estimate(16).unwrap();
        // Grid 16 contains grid 8 (nested), so the lower bound cannot drop.
        assert!(lo8 <= lo16 + 1e-15);
        assert!(lo16 <= up + 1e-15);
    }

    #[test]
    fn translation_is_an_eigenvalue_on_characters() {
        let k = lv(&[1, -2]);
        let ek = FourierElement::character(k.clone()).unwrap();
        let u = [0.7, 0.2];
        let t = ek.translate(&u).unwrap();
        let expected = Complex64::new(0.0, k.dot(&u).unwrap()).exp();
        assert!((t.coefficient(&k) - expected).norm() < 1e-15);
    }

    #[test]
    fn translation_group_law_and_isometry() {
        let a = FourierElement::from_terms(
            1,
            vec![(lv(&[3, 1]), c(0.4, -0.9)), (lv(&[-1, 2]), c(1.1, 0.6))],
        )
        .unwrap();
        let u = [1.3, -0.8];
        let round = a.translate(&u).unwrap().translate(&[-u[0], -u[1]]).unwrap();
        for (k, v) in a.terms() {
            assert!((round.coefficient(k) - v).norm() < 1e-13);
        }
        assert!((a.translate(&u).unwrap().l1_norm() - a.l1_norm()).abs() < 1e-13);
        assert_eq!(a.translate(&[0.0, 0.0]).unwrap(), a);
    }

    #[test]
    fn derivative_on_characters_and_leibniz() {
        let e0 = FourierElement::unit(1).unwrap();
        assert!(e0.derivative(1).unwrap().is_zero());
        let e10 = FourierElement::character(lv(&[1, 0])).unwrap();
        assert_eq!(e10.derivative(1).unwrap(), e10.scale(c(0.0, 1.0)));
        assert!(e10.derivative(0).is_err());
        assert!(e10.derivative(3).is_err());

        let a = FourierElement::from_terms(
            1,
            vec![(lv(&[1, 0]), c(0.3, 0.4)), (lv(&[0, -1]), c(-0.2, 0.9))],
        )
        .unwrap();
        let b = FourierElement::from_terms(
            1,
            vec![(lv(&[2, 1]), c(0.7, -0.1)), (lv(&[0, 1]), c(0.5, 0.5))],
        )
        .unwrap();
        for dir in 1..=2 {
            let lhs = a.multiply(&b).unwrap().derivative(dir).unwrap();
            let rhs = a
                .derivative(dir)
                .unwrap()
                .multiply(&b)
                .unwrap()
                .add(&a.multiply(&b.derivative(dir).unwrap()).unwrap())
                .unwrap();
            assert!(lhs.sub(&rhs).unwrap().l1_norm() < 1e-13);
        }
    }

    #[test]
    fn clean_is_explicit_and_thresholded() {
        let a = FourierElement::from_terms(
            1,
            vec![(lv(&[1, 0]), c(1e-16, 0.0)), (lv(&[0, 1]), c(1.0, 0.0))],
        )
        .unwrap();
        assert_eq!(a.num_terms(), 2); // tiny coefficient survives construction
        let cleaned = a.clean(1e-15).unwrap();
        assert_eq!(cleaned.num_terms(), 1);
        assert!(a.clean(-1.0).is_err());
    }

    #[test]
    fn duplicate_terms_are_summed_and_zeros_pruned() {
        let a = FourierElement::from_terms(
            1,
            vec![
                (lv(&[1, 1]), c(1.0, 0.0)),
                (lv(&[1, 1]), c(-1.0, 0.0)),
                (lv(&[0, 1]), c(0.5, 0.0)),
            ],
        )
        .unwrap();
        assert_eq!(a.num_terms(), 1);
        assert_eq!(a.coefficient(&lv(&[0, 1])), c(0.5, 0.0));
    }

    #[test]
    fn dimension_mismatches_are_rejected() {
        let a = FourierElement::unit(1).unwrap();
        let b = FourierElement::unit(2).unwrap();
        assert!(matches!(
            a.multiply(&b),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(a.evaluate(&[0.0]).is_err());
        assert!(a.translate(&[0.0, 0.0, 0.0]).is_err());
    }

    #[test]
    fn grid_scan_finds_minimum_of_shifted_cosine() {
        // 1 + cos(x1) has minimum 0 at x1 = π.
        let a = FourierElement::from_terms(
            1,
            vec![
                (lv(&[0, 0]), c(1.0, 0.0)),
                (lv(&[1, 0]), c(0.5, 0.0)),
                (lv(&[-1, 0]), c(0.5, 0.0)),
            ],
        )
        .unwrap();
        let scan = a.grid_scan(64).unwrap();
        assert!(scan.min_re.abs() < 1e-12);
        assert!((scan.argmin[0] - std::f64::consts::PI).abs() < 1e-12);
        assert!(scan.max_abs_im < 1e-14);
        assert!((scan.max_abs - 2.0).abs() < 1e-2);
    }
}
