//! Cholesky factorization of the regularized Gram system `(R + νI) y = b`.

use crate::error::{CoreError, Result};
use crate::gram::GramMatrix;
use crate::params::Coefficients;
use crate::scalar::Scalar;

/// Lower-triangular Cholesky factor `L` of `R + shift·I`, row-major.
#[derive(Debug, Clone)]
pub struct SpdFactor<T> {
    dim: usize,
    lower: Vec<T>,
}

impl<T: Scalar> SpdFactor<T> {
    /// Factor `R + shift·I`.
    ///
    /// A pivot at or below `dim · ε · max_diag` is treated as singular.
    pub fn factor(gram: &GramMatrix<T>, shift: T) -> Result<Self> {
        let dim = gram.dim();
        let a = gram.entries();
        let max_diag = (0..dim)
            .map(|i| a[i * dim + i] + shift)
            .fold(T::zero(), T::max);
        let threshold = T::from_usize(dim).unwrap() * T::epsilon() * max_diag;

        let mut lower = vec![T::zero(); dim * dim];
        for j in 0..dim {
            let mut d = a[j * dim + j] + shift;
            for p in 0..j {
                let l = lower[j * dim + p];
                d -= l * l;
            }
            if !d.is_finite() || d <= threshold {
                return Err(CoreError::SingularSystem {
                    pivot: j,
                    value: d.to_f64().unwrap_or(f64::NAN),
                });
            }
            let diag = d.sqrt();
            lower[j * dim + j] = diag;
            for i in (j + 1)..dim {
                let mut v = a[i * dim + j];
                for p in 0..j {
                    v -= lower[i * dim + p] * lower[j * dim + p];
                }
                lower[i * dim + j] = v / diag;
            }
        }
        Ok(Self { dim, lower })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Ratio of the largest to the smallest squared pivot; a cheap proxy for
    /// the condition number of the factored matrix.
    pub fn condition_estimate(&self) -> T {
        let (lo, hi) = (0..self.dim)
            .map(|i| {
                let d = self.lower[i * self.dim + i];
                d * d
            })
            .fold((T::infinity(), T::zero()), |(lo, hi), d| (lo.min(d), hi.max(d)));
        hi / lo
    }

    /// Forward then backward substitution.
    pub fn solve(&self, rhs: &[T]) -> Vec<T> {
        let n = self.dim;
        let l = &self.lower;
        let mut y = rhs.to_vec();
        for i in 0..n {
            let mut v = y[i];
            for p in 0..i {
                v -= l[i * n + p] * y[p];
            }
            y[i] = v / l[i * n + i];
        }
        for i in (0..n).rev() {
            let mut v = y[i];
            for p in (i + 1)..n {
                v -= l[p * n + i] * y[p];
            }
            y[i] = v / l[i * n + i];
        }
        y
    }
}

/// Solve `(R + ridge·I) y = rhs` through a Cholesky factorization.
///
/// Fails with `SingularSystem` when the regularized matrix is not numerically
/// positive definite, which for `ridge = 0` means `R` is rank-deficient.
pub fn tikhonov_solve<T: Scalar>(
    gram: &GramMatrix<T>,
    ridge: T,
    rhs: &Coefficients<T>,
) -> Result<Coefficients<T>> {
    if rhs.len() != gram.dim() {
        return Err(CoreError::DimensionMismatch {
            expected: gram.dim(),
            got: rhs.len(),
        });
    }
    if ridge.is_nan() || ridge < T::zero() {
        return Err(CoreError::InvalidParams(format!("ridge must be non-negative, got {ridge}")));
    }
    let factor = SpdFactor::factor(gram, ridge)?;
    log::debug!(
        "tikhonov solve: dim {}, ridge {:e}, pivot condition estimate {:e}",
        gram.dim(),
        ridge,
        factor.condition_estimate()
    );
    Coefficients::new(gram.n_modes(), factor.solve(rhs.values()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn identity(n_modes: usize) -> GramMatrix<f64> {
        let dim = 2 * n_modes + 1;
        let mut e = vec![0.0; dim * dim];
        for i in 0..dim {
            e[i * dim + i] = 1.0;
        }
        GramMatrix::from_entries(n_modes, e).unwrap()
    }

    #[test]
    fn zero_gram_with_ridge() {
        let g = GramMatrix::from_entries(1, vec![0.0; 9]).unwrap();
        let b = Coefficients::new(1, vec![1.0_f64, -2.0, 0.5]).unwrap();
        let y = tikhonov_solve(&g, 0.1, &b).unwrap();
        for (got, want) in y.values().iter().zip([10.0, -20.0, 5.0]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn identity_without_ridge() {
        let b = Coefficients::new(2, vec![1.0, 2.0, 3.0, 4.0, 5.0]).unwrap();
        let y = tikhonov_solve(&identity(2), 0.0, &b).unwrap();
        assert_eq!(y.values(), b.values());
    }

    #[test]
    fn singular_without_ridge() {
        let g = GramMatrix::from_entries(1, vec![0.0; 9]).unwrap();
        let b = Coefficients::new(1, vec![1.0, 1.0, 1.0]).unwrap();
        assert!(matches!(
            tikhonov_solve(&g, 0.0, &b),
            Err(CoreError::SingularSystem { pivot: 0, .. })
        ));
        // rank one
        let g = GramMatrix::from_entries(1, vec![1.0; 9]).unwrap();
        assert!(matches!(
            tikhonov_solve(&g, 0.0, &b),
            Err(CoreError::SingularSystem { .. })
        ));
        assert!(tikhonov_solve(&g, 1e-3, &b).is_ok());
    }

    #[test]
    fn dimension_mismatch() {
        let b = Coefficients::new(1, vec![1.0, 1.0, 1.0]).unwrap();
        assert!(matches!(
            tikhonov_solve(&identity(2), 0.0, &b),
            Err(CoreError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn small_spd_system() {
        // [[4,2,0],[2,3,1],[0,1,2]] y = [2,4,3] has solution [0,1,1].
        let g = GramMatrix::from_entries(1, vec![4.0_f64, 2.0, 0.0, 2.0, 3.0, 1.0, 0.0, 1.0, 2.0]).unwrap();
        let b = Coefficients::new(1, vec![2.0, 4.0, 3.0]).unwrap();
        let y = tikhonov_solve(&g, 0.0, &b).unwrap();
        for (got, want) in y.values().iter().zip([0.0, 1.0, 1.0]) {
            assert!((got - want).abs() < 1e-14);
        }
        let f = SpdFactor::factor(&g, 0.0).unwrap();
        assert!(f.condition_estimate() >= 1.0);
    }
}
