//! Exact integer, modular and polynomial arithmetic.

pub mod kronecker;
pub mod modp;
pub mod poly;
pub mod primes;

pub use kronecker::kronecker;
pub use modp::{FactorShape, FpPoly};
pub use poly::{poly_disc, IntPoly};
pub use primes::{factorize, is_prime, isqrt, primes_up_to};

use crate::error::{Error, Result};

/// Shape of the factorization of a monic integer polynomial modulo `p`.
pub fn factor_shape_mod_p(f: &IntPoly, p: u64) -> Result<FactorShape> {
    if !f.is_monic() {
        return Err(Error::input("monic required"));
    }
    if f.degree() < 1 {
        return Err(Error::input("degree >= 1 required"));
    }
    if !is_prime(p) {
        return Err(Error::input(format!("{p} is not prime")));
    }
    Ok(f.reduce_mod(p).shape())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_traits::Zero;

    #[test]
    fn non_monic_rejected() {
        assert!(factor_shape_mod_p(&IntPoly::from_i64s(&[1, 0, 2]), 5).is_err());
    }

    #[test]
    fn disc_vanishes_mod_p_iff_repeated_factor() {
        // Exhaustive over a small box of monic cubics and quartics.
        for p in [3u64, 5, 7] {
            for a in -3i64..=3 {
                for b in -3i64..=3 {
                    for c in -3i64..=3 {
                        for tail in [vec![a, b, c, 1], vec![a, b, c, 1, 1], vec![a, 0, b, c, 1]] {
                            let f = IntPoly::from_i64s(&tail);
                            let d = poly_disc(&f).unwrap();
                            let repeated = factor_shape_mod_p(&f, p).unwrap().parts.iter().any(|&(_, m)| m > 1);
                            assert_eq!((d % BigInt::from(p)).is_zero(), repeated, "{f} mod {p}");
                        }
                    }
                }
            }
        }
    }
}
