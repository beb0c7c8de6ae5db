use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;

use super::{check_bound, DirichletCoefficients, EllAdicFactor};
use crate::arith::primes_up_to;
use crate::error::{Error, Result};
use crate::splitting::{in_set_d, omega_e, FieldSpec};

/// Weight `w(p)` in `prod (1 + w(p) p^{-s})`.
#[derive(Clone, Copy, Debug)]
pub enum Weight<'a> {
    /// `ell - 1` on every prime of the set.
    Trivial,
    /// `omega_E(p)`.
    Field(&'a FieldSpec),
    Constant(i64),
}

/// `prod_{p in set} (1 + w(p) p^{-s})`, the set being `p ≡ (D/p) (mod ell)` or, with `all_primes`, every `p != ell`.
#[derive(Clone, Debug)]
pub struct EulerProductSpec<'a> {
    pub ell: u64,
    pub d: i64,
    pub weight: Weight<'a>,
    pub all_primes: bool,
}

impl EulerProductSpec<'_> {
    fn weight_at(&self, p: u64) -> Result<i64> {
        match self.weight {
            Weight::Trivial => Ok(self.ell as i64 - 1),
            Weight::Constant(w) => Ok(w),
            Weight::Field(e) => {
                if !self.all_primes && (&e.disc % BigInt::from(p)).is_zero() {
                    return Err(Error::input(format!("prime {p} of the product set ramifies in {}", e.poly)));
                }
                omega_e(p, e)
            }
        }
    }

    /// Primes up to `x` with their weights (zero weights dropped).
    pub fn weights(&self, x: u64) -> Result<Vec<(u64, i64)>> {
        let ps: Vec<u64> = primes_up_to(x)
            .into_iter()
            .filter(|&p| p != self.ell && (self.all_primes || in_set_d(p, self.d, self.ell)))
            .collect();
        let ws = ps.par_iter().map(|&p| self.weight_at(p).map(|w| (p, w))).collect::<Result<Vec<_>>>()?;
        Ok(ws.into_iter().filter(|&(_, w)| w != 0).collect())
    }

    /// Dense coefficients `c[m]`, `m <= x`, of the product over `p != ell`.
    pub fn dense(&self, x: u64) -> Result<Vec<i64>> {
        check_bound(x)?;
        dense_product(&self.weights(x)?, x)
    }
}

/// Knapsack expansion of `prod (1 + w p^{-s})` up to `x`.
pub(crate) fn dense_product(weights: &[(u64, i64)], x: u64) -> Result<Vec<i64>> {
    let mut c = vec![0i64; x as usize + 1];
    if x == 0 {
        return Ok(c);
    }
    c[1] = 1;
    for &(p, w) in weights {
        if p > x {
            continue;
        }
        for n in (1..=x / p).rev() {
            let v = c[n as usize];
            if v != 0 {
                let t = v
                    .checked_mul(w)
                    .and_then(|t| t.checked_add(c[(n * p) as usize]))
                    .ok_or_else(|| Error::resource("coefficient overflow in Euler product"))?;
                c[(n * p) as usize] = t;
            }
        }
    }
    Ok(c)
}

/// The Euler product alone, as an exact series truncated at `x`.
pub fn euler_truncate(spec: &EulerProductSpec, x: u64) -> Result<DirichletCoefficients> {
    let dense = spec.dense(x)?;
    let mut s = DirichletCoefficients::new(spec.ell, spec.d, x);
    s.add_product(&BigRational::from_integer(1.into()), &EllAdicFactor::one(), &dense);
    debug_assert!(s.iter().all(|(_, v)| !v.is_zero()));
    Ok(s)
}
