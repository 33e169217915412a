use crate::scalar::Scalar;

/// Unnormalized cardinal sine, `sin(x) / x`, with the removable singularity
/// filled in. Below `1e-8` in magnitude the truncated series `1 - x²/6` is used.
pub fn sinc<T: Scalar>(x: T) -> T {
    if x == T::zero() {
        return T::one();
    }
    if x.abs() < T::lit(1e-8) {
        return T::one() - x * x / T::lit(6.0);
    }
    x.sin() / x
}
