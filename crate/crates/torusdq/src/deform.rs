//! The deformed (twisted-convolution) product attached to a compatible
//! symplectic triple and a deformation scale ℏ.
//!
//! On characters the product is `e_k ⋆ e_l = σ_ℏ(k, l) e_{k+l}` with the
//! bicharacter `σ_ℏ(k, l) = exp(-(iℏ/2) k·π l)` built from the Poisson
//! tensor π = -θ^{-1}; it extends to arbitrary elements by bilinearity.
//! At ℏ = 0 the phase vanishes identically and the product degenerates to
//! the pointwise (convolution) product, bit for bit.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fourier::{FourierElement, LatticeVector};
use crate::numerics::reduce_mod_two_pi;
use crate::symplectic::SymplecticStructure;

/// Largest admissible truncation order for the ℏ-expansion of the product.
pub const MAX_MOYAL_ORDER: usize = 64;

/// A symplectic structure paired with a deformation scale ℏ ≥ 0.
///
/// The Poisson tensor is computed once at construction; all products,
/// cocycles and expansions derive from it.
#[derive(Clone, Debug)]
pub struct DeformationContext {
    structure: SymplecticStructure,
    hbar: f64,
    poisson: DMatrix<f64>,
}

impl DeformationContext {
    pub fn new(structure: SymplecticStructure, hbar: f64) -> Result<Self> {
        if !(hbar >= 0.0 && hbar.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "hbar must be a finite nonnegative number, got {hbar}"
            )));
        }
        let poisson = structure.poisson_tensor()?;
        Ok(DeformationContext {
            structure,
            hbar,
            poisson,
        })
    }

    /// Context over the standard triple in dimension n.
    pub fn standard(dim_n: usize, hbar: f64) -> Result<Self> {
        DeformationContext::new(SymplecticStructure::standard(dim_n)?, hbar)
    }

    pub fn structure(&self) -> &SymplecticStructure {
        &self.structure
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn dim_n(&self) -> usize {
        self.structure.dim_n()
    }

    /// The phase `-(ℏ/2) k·π l` reduced into [-π, π]. Exact zero whenever
    /// ℏ = 0, k = ±l, or either argument is the zero vector.
    fn phase(&self, k: &LatticeVector, l: &LatticeVector) -> Result<f64> {
        let form = self.structure.lattice_form(&self.poisson, k, l)?;
        Ok(reduce_mod_two_pi(form.mul_f64(-0.5 * self.hbar)))
    }

    /// The unreduced phase, for Taylor expansions in ℏ.
    fn phase_unreduced(&self, k: &LatticeVector, l: &LatticeVector) -> Result<f64> {
        let form = self.structure.lattice_form(&self.poisson, k, l)?;
        Ok(form.mul_f64(-0.5 * self.hbar).to_f64())
    }

    /// The product bicharacter `σ_ℏ(k, l) = exp(-(iℏ/2) k·π l)`.
    ///
    /// Satisfies the cocycle identity
    /// `σ(k, l) σ(k+l, m) = σ(k, l+m) σ(l, m)` and the unitarity relations
    /// `σ(k, l) σ(l, k) = 1`, `σ(k, ±k) = σ(k, 0) = 1`.
    pub fn cocycle(&self, k: &LatticeVector, l: &LatticeVector) -> Result<Complex64> {
        let phi = self.phase(k, l)?;
        Ok(Complex64::new(phi.cos(), phi.sin()))
    }

    /// The deformed product `a ⋆ b`, termwise over the supports:
    /// `e_k ⋆ e_l = σ_ℏ(k, l) e_{k+l}`.
    pub fn star_product(&self, a: &FourierElement, b: &FourierElement) -> Result<FourierElement> {
        let n = self.dim_n();
        if a.dim_n() != n || b.dim_n() != n {
            return Err(Error::dim(2 * n, 2 * a.dim_n().min(b.dim_n())));
        }
        let mut terms: Vec<(LatticeVector, Complex64)> =
            Vec::with_capacity(a.num_terms() * b.num_terms());
        for (k, ca) in a.terms() {
            for (l, cb) in b.terms() {
                let sigma = self.cocycle(k, l)?;
                terms.push((k.add(l)?, ca * cb * sigma));
            }
        }
        FourierElement::from_terms(n, terms)
    }

    /// Partial sum of the ℏ-expansion of the deformed product through the
    /// stated order: each character pair contributes
    /// `Σ_{m=0}^{order} (iφ)^m / m!` with φ the unreduced phase, via a
    /// running-product recurrence. Order 0 is the pointwise product; the
    /// defect against the full product scales as ℏ^{order+1}.
    pub fn moyal_truncated(
        &self,
        a: &FourierElement,
        b: &FourierElement,
        order: usize,
    ) -> Result<FourierElement> {
        if order > MAX_MOYAL_ORDER {
            return Err(Error::InvalidArgument(format!(
                "expansion order {order} exceeds the cap of {MAX_MOYAL_ORDER}"
            )));
        }
        let n = self.dim_n();
        if a.dim_n() != n || b.dim_n() != n {
            return Err(Error::dim(2 * n, 2 * a.dim_n().min(b.dim_n())));
        }
        let mut terms: Vec<(LatticeVector, Complex64)> =
            Vec::with_capacity(a.num_terms() * b.num_terms());
        for (k, ca) in a.terms() {
            for (l, cb) in b.terms() {
                let z = Complex64::new(0.0, self.phase_unreduced(k, l)?);
                let mut partial = Complex64::new(1.0, 0.0);
                let mut term = Complex64::new(1.0, 0.0);
                for m in 1..=order {
                    term *= z / (m as f64);
                    partial += term;
                }
                terms.push((k.add(l)?, ca * cb * partial));
            }
        }
        FourierElement::from_terms(n, terms)
    }

    /// The scaled commutator `(a ⋆ b - b ⋆ a) / (iℏ)`. Converges to the
    /// Poisson bracket as ℏ → 0, with an O(ℏ²) defect. Rejects ℏ = 0.
    pub fn commutator_over_ihbar(
        &self,
        a: &FourierElement,
        b: &FourierElement,
    ) -> Result<FourierElement> {
        if self.hbar == 0.0 {
            return Err(Error::InvalidArgument(
                "the scaled commutator requires hbar > 0".into(),
            ));
        }
        let ab = self.star_product(a, b)?;
        let ba = self.star_product(b, a)?;
        Ok(ab
            .sub(&ba)?
            .scale(Complex64::new(0.0, -1.0 / self.hbar)))
    }
}
