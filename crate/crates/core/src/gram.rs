use crate::error::{CoreError, Result};
use crate::operators::atom;
use crate::params::{BandParams, Window};
use crate::scalar::Scalar;
use crate::solve::SpdFactor;

/// The `(2N+1)×(2N+1)` Gram matrix `R = Q*Q` of the sinc atoms over a window,
/// stored row-major in ascending mode order.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix<T> {
    n_modes: usize,
    entries: Vec<T>,
    window: Option<Window>,
}

/// `R_{km} = Σ_{t=q}^{s} a_k(t) a_m(t)`.
///
/// Only the upper triangle is summed; the lower triangle is a copy, so the
/// matrix is exactly symmetric.
pub fn build_gram<T: Scalar>(params: &BandParams<T>, window: Window) -> GramMatrix<T> {
    let dim = params.dim();
    let n = params.n_modes as i64;
    let atoms: Vec<Vec<T>> = params
        .modes()
        .map(|k| window.times().map(|t| atom(params, k, t)).collect())
        .collect();

    let mut entries = vec![T::zero(); dim * dim];
    for i in 0..dim {
        for j in i..dim {
            let sum = atoms[i]
                .iter()
                .zip(&atoms[j])
                .fold(T::zero(), |acc, (&a, &b)| acc + a * b);
            entries[i * dim + j] = sum;
            entries[j * dim + i] = sum;
        }
    }
    debug_assert_eq!(atoms.len() as i64, 2 * n + 1);

    GramMatrix {
        n_modes: params.n_modes,
        entries,
        window: Some(window),
    }
}

impl<T: Scalar> GramMatrix<T> {
    /// Wrap explicit row-major entries. Rejects anything not exactly symmetric.
    pub fn from_entries(n_modes: usize, entries: Vec<T>) -> Result<Self> {
        let dim = 2 * n_modes + 1;
        if entries.len() != dim * dim {
            return Err(CoreError::DimensionMismatch {
                expected: dim * dim,
                got: entries.len(),
            });
        }
        for i in 0..dim {
            for j in 0..i {
                if entries[i * dim + j] != entries[j * dim + i] {
                    return Err(CoreError::InvalidConfig(format!(
                        "gram entries not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(Self {
            n_modes,
            entries,
            window: None,
        })
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn dim(&self) -> usize {
        2 * self.n_modes + 1
    }

    pub fn window(&self) -> Option<Window> {
        self.window
    }

    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    /// Entry `R_{km}` addressed by mode indices in `-N ..= N`.
    pub fn get(&self, k: i64, m: i64) -> T {
        let n = self.n_modes as i64;
        let dim = self.dim();
        self.entries[(k + n) as usize * dim + (m + n) as usize]
    }

    pub fn max_diagonal(&self) -> T {
        let dim = self.dim();
        (0..dim)
            .map(|i| self.entries[i * dim + i])
            .fold(T::zero(), T::max)
    }

    /// `1e-10 · max_k R_kk`.
    pub fn psd_tolerance(&self) -> T {
        T::lit(1e-10) * self.max_diagonal()
    }

    /// Positive semidefinite up to [`psd_tolerance`](Self::psd_tolerance):
    /// `R + tol·I` admits a Cholesky factorization exactly when its smallest
    /// eigenvalue is above `-tol`.
    pub fn is_psd(&self) -> bool {
        let tol = self.psd_tolerance();
        let tol = if tol > T::zero() { tol } else { T::min_positive_value() };
        SpdFactor::factor(self, tol).is_ok()
    }

    /// `R·y`, rows summed in ascending mode order.
    pub fn mul_vec(&self, y: &[T]) -> Vec<T> {
        let dim = self.dim();
        (0..dim)
            .map(|i| {
                self.entries[i * dim..(i + 1) * dim]
                    .iter()
                    .zip(y)
                    .fold(T::zero(), |acc, (&r, &v)| acc + r * v)
            })
            .collect()
    }
}
