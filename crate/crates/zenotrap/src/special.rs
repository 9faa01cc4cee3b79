//! Associated Laguerre polynomials and factorial square-root ratios.
//!
//! These are the two special-function ingredients of the sideband coupling
//! strength. Both are evaluated by schemes that stay stable for the large
//! vibrational indices a thermal or coherent ensemble can reach: the
//! polynomial by the three-term upward recurrence in the degree, the
//! factorial ratio as a product of inverse square roots (never forming a
//! factorial, which would overflow beyond 170!).

use thiserror::Error;

/// Largest accepted polynomial degree. The recurrence is O(n) and stays
/// finite well beyond this; the cap exists to catch runaway callers.
pub const N_MAX_SPECIAL: u32 = 10_000;

#[derive(Debug, Error, PartialEq)]
pub enum SpecialFnError {
    #[error("Laguerre argument x = {x} is outside the domain x >= 0")]
    DomainError { x: f64 },
    #[error("Laguerre degree n = {n} exceeds the supported maximum {max}")]
    DegreeTooLarge { n: u32, max: u32 },
}

/// Associated Laguerre polynomial `L_n^k(x)` for integer order `k >= 0`
/// and `x >= 0`.
///
/// Uses the degree recurrence
/// `(m+1) L_{m+1}^k = (2m+k+1-x) L_m^k - (m+k) L_{m-1}^k`
/// seeded with `L_0^k = 1`, `L_1^k = 1+k-x`, which is forward-stable on
/// the physical domain.
///
/// ```
/// use zenotrap::special::laguerre_assoc;
/// // L_2^0(x) = 1 - 2x + x^2/2 at x = 1 is -1/2.
/// assert!((laguerre_assoc(2, 0, 1.0).unwrap() + 0.5).abs() < 1e-15);
/// ```
pub fn laguerre_assoc(n: u32, k: u32, x: f64) -> Result<f64, SpecialFnError> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(SpecialFnError::DomainError { x });
    }
    if n > N_MAX_SPECIAL {
        return Err(SpecialFnError::DegreeTooLarge { n, max: N_MAX_SPECIAL });
    }
    if n == 0 {
        return Ok(1.0);
    }
    let kf = f64::from(k);
    let mut below = 1.0;
    let mut current = 1.0 + kf - x;
    for m in 1..n {
        let mf = m as f64;
        let next = ((2.0 * mf + kf + 1.0 - x) * current - (mf + kf) * below) / (mf + 1.0);
        below = current;
        current = next;
    }
    Ok(current)
}

/// `sqrt(n! / (n+k)!)`, i.e. the product of `1/sqrt(n+j)` for `j = 1..=k`.
///
/// This is the matrix-element normalization between vibrational levels `n`
/// and `n+k`. Evaluated without forming factorials so it cannot overflow.
///
/// ```
/// // sqrt(3!/5!) = 1/sqrt(20)
/// assert_eq!(zenotrap::special::sqrt_factorial_ratio(3, 2), 0.22360679774997896);
/// ```
pub fn sqrt_factorial_ratio(n: u32, k: u32) -> f64 {
    (1..=k)
        .map(|j| (f64::from(n) + f64::from(j)).sqrt().recip())
        .product()
}
