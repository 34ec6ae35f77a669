//! Compatible symplectic triples (θ, g, J) on R^{2n} and the operations
//! they induce on the Fourier-lattice algebra: the metric Laplacian, the
//! Poisson bracket, and the complex coordinate frame attached to J.
//!
//! A triple is *compatible* when θ is an antisymmetric invertible form,
//! J is a complex structure (J² = -I), and g = θ·J is symmetric positive
//! definite. The standard triple has θ = [[0, I], [-I, 0]],
//! J = [[0, -I], [I, 0]] and g = I.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fourier::{FourierElement, LatticeVector};
use crate::numerics::{lattice_bilinear, Dd};

/// Default entrywise tolerance for the structure invariants.
pub const STRUCTURE_TOLERANCE: f64 = 1e-12;

/// Tolerance for the frame validation (conjugated J against block form).
pub const FRAME_TOLERANCE: f64 = 1e-10;

/// A validated compatible triple (θ, g, J) of 2n×2n real matrices.
#[derive(Clone, Debug)]
pub struct SymplecticStructure {
    dim_n: usize,
    theta: DMatrix<f64>,
    metric_g: DMatrix<f64>,
    complex_j: DMatrix<f64>,
}

fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0f64, |acc, &x| acc.max(x.abs()))
}

impl SymplecticStructure {
    /// Validates and wraps a triple with the default tolerance (1e-12).
    pub fn new(theta: DMatrix<f64>, metric_g: DMatrix<f64>, complex_j: DMatrix<f64>) -> Result<Self> {
        Self::with_tolerance(theta, metric_g, complex_j, STRUCTURE_TOLERANCE)
    }

    /// Validates and wraps a triple, checking every invariant entrywise to
    /// `tolerance`: θ antisymmetric and invertible, g symmetric positive
    /// definite, J·J = -I, and g = θ·J.
    pub fn with_tolerance(
        theta: DMatrix<f64>,
        metric_g: DMatrix<f64>,
        complex_j: DMatrix<f64>,
        tolerance: f64,
    ) -> Result<Self> {
        if !(tolerance > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "structure tolerance must be positive, got {tolerance}"
            )));
        }
        let d = theta.nrows();
        if d == 0 || !d.is_multiple_of(2) || theta.ncols() != d {
            return Err(Error::InvalidStructure(format!(
                "theta must be square of even positive size, got {}x{}",
                theta.nrows(),
                theta.ncols()
            )));
        }
        for (name, m) in [("g", &metric_g), ("J", &complex_j)] {
            if m.nrows() != d || m.ncols() != d {
                return Err(Error::InvalidStructure(format!(
                    "{name} must be {d}x{d}, got {}x{}",
                    m.nrows(),
                    m.ncols()
                )));
            }
        }
        if max_abs(&(&theta + theta.transpose())) > tolerance {
            return Err(Error::InvalidStructure(
                "theta is not antisymmetric".into(),
            ));
        }
        if theta.clone().try_inverse().is_none() {
            return Err(Error::InvalidStructure("theta is singular".into()));
        }
        if max_abs(&(&metric_g - metric_g.transpose())) > tolerance {
            return Err(Error::InvalidStructure("g is not symmetric".into()));
        }
        let eig = metric_g.clone().symmetric_eigen();
        let min_eig = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
        if !(min_eig > tolerance) {
            return Err(Error::InvalidStructure(format!(
                "g is not positive definite (min eigenvalue {min_eig:.3e})"
            )));
        }
        let jj = &complex_j * &complex_j;
        if max_abs(&(jj + DMatrix::<f64>::identity(d, d))) > tolerance {
            return Err(Error::InvalidStructure("J*J != -I".into()));
        }
        if max_abs(&(&metric_g - &theta * &complex_j)) > tolerance {
            return Err(Error::InvalidStructure("g != theta*J".into()));
        }
        Ok(SymplecticStructure {
            dim_n: d / 2,
            theta,
            metric_g,
            complex_j,
        })
    }

    /// The canonical compatible triple in dimension n:
    /// θ = [[0, I], [-I, 0]], J = [[0, -I], [I, 0]], g = θ·J = I.
    pub fn standard(dim_n: usize) -> Result<Self> {
        if dim_n == 0 {
            return Err(Error::InvalidArgument(
                "ambient dimension n must be at least 1".into(),
            ));
        }
        let d = 2 * dim_n;
        let mut theta = DMatrix::<f64>::zeros(d, d);
        let mut complex_j = DMatrix::<f64>::zeros(d, d);
        for i in 0..dim_n {
            theta[(i, dim_n + i)] = 1.0;
            theta[(dim_n + i, i)] = -1.0;
            complex_j[(i, dim_n + i)] = -1.0;
            complex_j[(dim_n + i, i)] = 1.0;
        }
        let metric_g = DMatrix::<f64>::identity(d, d);
        SymplecticStructure::new(theta, metric_g, complex_j)
    }

    pub fn dim_n(&self) -> usize {
        self.dim_n
    }

    pub fn theta(&self) -> &DMatrix<f64> {
        &self.theta
    }

    pub fn metric_g(&self) -> &DMatrix<f64> {
        &self.metric_g
    }

    pub fn complex_j(&self) -> &DMatrix<f64> {
        &self.complex_j
    }

    /// The Poisson tensor π = -θ^{-1}, exactly antisymmetrized.
    ///
    /// The sign convention is the one under which the first-order term of
    /// the deformed commutator reproduces this bracket and the character
    /// phase of the deformed product matches the damped oscillatory-integral
    /// oracle; on the standard triple π coincides with θ itself.
    pub fn poisson_tensor(&self) -> Result<DMatrix<f64>> {
        let inv = self
            .theta
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::InvalidStructure("theta is singular".into()))?;
        let mut pi = -inv;
        // Force exact antisymmetry so downstream phase identities cancel
        // exactly rather than to rounding.
        let d = pi.nrows();
        for i in 0..d {
            pi[(i, i)] = 0.0;
            for j in (i + 1)..d {
                let v = 0.5 * (pi[(i, j)] - pi[(j, i)]);
                pi[(i, j)] = v;
                pi[(j, i)] = -v;
            }
        }
        Ok(pi)
    }

    /// Laplacian with respect to g: multiplies the coefficient at `k` by
    /// `-(k · g^{-1} k)`. Composes as Σ_{rs} (g^{-1})^{rs} ∂_r ∂_s.
    pub fn laplacian_g(&self, a: &FourierElement) -> Result<FourierElement> {
        if a.dim_n() != self.dim_n {
            return Err(Error::dim(2 * self.dim_n, 2 * a.dim_n()));
        }
        let g_inv = self
            .metric_g
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::InvalidStructure("g is singular".into()))?;
        let terms = a.terms().map(|(k, c)| {
            let q = lattice_bilinear(&g_inv, k.components(), k.components()).to_f64();
            (k.clone(), c * Complex64::new(-q, 0.0))
        });
        FourierElement::from_terms(self.dim_n, terms.collect::<Vec<_>>())
    }

    /// Canonical Poisson bracket `{a, b} = Σ_{rs} π^{rs} (∂_r a)(∂_s b)`
    /// with π the Poisson tensor. On characters this is
    /// `{e_k, e_l} = -(k·π l) e_{k+l}`; antisymmetric, and `{a, e_0} = 0`.
    pub fn poisson_bracket(&self, a: &FourierElement, b: &FourierElement) -> Result<FourierElement> {
        if a.dim_n() != self.dim_n || b.dim_n() != self.dim_n {
            return Err(Error::dim(2 * self.dim_n, 2 * a.dim_n().min(b.dim_n())));
        }
        let pi = self.poisson_tensor()?;
        let mut terms: Vec<(LatticeVector, Complex64)> = Vec::new();
        for (k, ca) in a.terms() {
            for (l, cb) in b.terms() {
                let p = lattice_bilinear(&pi, k.components(), l.components()).to_f64();
                if p == 0.0 {
                    continue;
                }
                terms.push((k.add(l)?, ca * cb * Complex64::new(-p, 0.0)));
            }
        }
        FourierElement::from_terms(self.dim_n, terms)
    }

    /// Real basis change bringing J to the standard block form, together
    /// with the induced complex coordinates for lattice vectors.
    ///
    /// Construction: with R = g^{1/2}, the conjugated structure R J R^{-1}
    /// is orthogonal with square -I, so a pairwise Gram–Schmidt over seed
    /// vectors produces an orthogonal O whose column pairs (v_i, Ĵ v_i)
    /// bring it to block form. P = R^{-1} O then satisfies P^T θ P = θ_0,
    /// P^{-1} J P = J_0 and P^T g P = I simultaneously. On the standard
    /// triple the frame is exactly the identity.
    pub fn complex_frame(&self) -> Result<ComplexFrame> {
        let d = 2 * self.dim_n;
        let identity = DMatrix::<f64>::identity(d, d);
        let standard = SymplecticStructure::standard(self.dim_n)?;
        if self.metric_g == identity && self.complex_j == standard.complex_j {
            return Ok(ComplexFrame {
                dim_n: self.dim_n,
                basis_change: identity.clone(),
                inverse: identity.clone(),
                transform: identity,
            });
        }

        // R = g^{1/2}, R^{-1} = g^{-1/2} via the symmetric eigendecomposition.
        let eig = self.metric_g.clone().symmetric_eigen();
        let mut sqrt_w = DMatrix::<f64>::zeros(d, d);
        let mut inv_sqrt_w = DMatrix::<f64>::zeros(d, d);
        for (i, &w) in eig.eigenvalues.iter().enumerate() {
            if !(w > 0.0) {
                return Err(Error::InvalidStructure(format!(
                    "g eigenvalue {w:.3e} is not positive"
                )));
            }
            sqrt_w[(i, i)] = w.sqrt();
            inv_sqrt_w[(i, i)] = 1.0 / w.sqrt();
        }
        let v = &eig.eigenvectors;
        let r = v * sqrt_w * v.transpose();
        let r_inv = v * inv_sqrt_w * v.transpose();
        let j_hat = &r * &self.complex_j * &r_inv;

        // Pairwise Gram–Schmidt: each accepted seed contributes the pair
        // (v, Ĵ v); orthogonality of Ĵ keeps the pair orthonormal.
        let mut pairs: Vec<DVector<f64>> = Vec::with_capacity(self.dim_n);
        let mut basis: Vec<DVector<f64>> = Vec::with_capacity(d);
        for seed_idx in 0..d {
            if pairs.len() == self.dim_n {
                break;
            }
            let mut vec = DVector::<f64>::zeros(d);
            vec[seed_idx] = 1.0;
            for _ in 0..2 {
                for b in &basis {
                    let proj = b.dot(&vec);
                    vec -= b * proj;
                }
            }
            let norm = vec.norm();
            if norm < 1e-6 {
                continue;
            }
            vec /= norm;
            let partner = &j_hat * &vec;
            pairs.push(vec.clone());
            basis.push(vec);
            basis.push(partner);
        }
        if pairs.len() != self.dim_n {
            return Err(Error::InvalidStructure(
                "failed to build a complex frame: Gram-Schmidt exhausted its seeds".into(),
            ));
        }
        let mut o = DMatrix::<f64>::zeros(d, d);
        for (i, p) in pairs.iter().enumerate() {
            o.set_column(i, p);
            o.set_column(self.dim_n + i, &(&j_hat * p));
        }
        let p_mat = &r_inv * &o;
        let basis_change = o.transpose() * &r; // P^{-1}, since O is orthogonal
        let transform = p_mat.transpose();

        // Validate: conjugating J must give the standard block form.
        let conj = &basis_change * &self.complex_j * &p_mat;
        if max_abs(&(conj - &standard.complex_j)) > FRAME_TOLERANCE {
            return Err(Error::InvalidStructure(
                "complex frame validation failed: conjugated J is not in block form".into(),
            ));
        }
        Ok(ComplexFrame {
            dim_n: self.dim_n,
            basis_change,
            inverse: p_mat,
            transform,
        })
    }

    /// Bilinear form `k^T m l` of a structure-sized matrix on two lattice
    /// vectors, accumulated error-free. Shared by the deformed product and
    /// the bracket.
    pub(crate) fn lattice_form(
        &self,
        m: &DMatrix<f64>,
        k: &LatticeVector,
        l: &LatticeVector,
    ) -> Result<Dd> {
        if k.dim_n() != self.dim_n || l.dim_n() != self.dim_n {
            return Err(Error::dim(2 * self.dim_n, 2 * k.dim_n().min(l.dim_n())));
        }
        Ok(lattice_bilinear(m, k.components(), l.components()))
    }
}

/// The real coordinates adapted to J: `basis_change` conjugates J into the
/// standard block form, and `lambda_of` expresses a lattice vector in the
/// induced complex coordinates.
#[derive(Clone, Debug)]
pub struct ComplexFrame {
    dim_n: usize,
    basis_change: DMatrix<f64>,
    inverse: DMatrix<f64>,
    transform: DMatrix<f64>,
}

impl ComplexFrame {
    pub fn dim_n(&self) -> usize {
        self.dim_n
    }

    /// The matrix C with `C J C^{-1} = [[0, -I], [I, 0]]`.
    pub fn basis_change(&self) -> &DMatrix<f64> {
        &self.basis_change
    }

    /// `C^{-1}` (the frame matrix P itself).
    pub fn basis_change_inverse(&self) -> &DMatrix<f64> {
        &self.inverse
    }

    /// Complex coordinates of a lattice vector: with k' = P^T k (the
    /// covariant transform, so that `k·u` is preserved in new coordinates),
    /// `λ_j = k'_j + i k'_{n+j}`. For the standard structure this is
    /// `λ_j = k_j + i k_{n+j}`.
    pub fn lambda_of(&self, k: &LatticeVector) -> Result<Vec<Complex64>> {
        if k.dim_n() != self.dim_n {
            return Err(Error::dim(2 * self.dim_n, k.components().len()));
        }
        let kv = DVector::<f64>::from_iterator(
            2 * self.dim_n,
            k.components().iter().map(|&x| x as f64),
        );
        let kp = &self.transform * kv;
        Ok((0..self.dim_n)
            .map(|j| Complex64::new(kp[j], kp[self.dim_n + j]))
            .collect())
    }
}
