//! Exact Dirichlet series on the grid `ell^{e/2} m`, Euler products and the closed forms.

mod count;
mod euler;
mod io;
mod phi;
mod residue;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub use count::{aggregate_count, disc_from_conductor, partial_count, AggregateCount, BuiltinFields, FieldProvider, NoFields};
pub use euler::{euler_truncate, EulerProductSpec, Weight};
pub use io::{read_csv, read_json, IntegerSeries};
pub use phi::{
    a_b_factors, assemble_from_groups, assemble_phi, builtin_fields, check_field_counts, closed_form_header, cor34_phi, fields_by_b, pure_cubic_phi,
    sample_s3_phi, special_phi, special_phi_with, table_special_phi,
};
pub use residue::{residue_constant, ResidueConstant};

/// Largest supported truncation bound.
pub const MAX_BOUND: u64 = 50_000_000;

/// Polynomial in `t = ell^{-s/2}` with rational coefficients (lowest degree first).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EllAdicFactor {
    pub coeffs: Vec<BigRational>,
}

impl EllAdicFactor {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        EllAdicFactor { coeffs }
    }

    pub fn one() -> Self {
        Self::new(vec![BigRational::one()])
    }

    /// Sparse constructor from `(degree, numerator, denominator)` triples.
    pub fn from_terms(terms: &[(usize, i64, i64)]) -> Self {
        let n = terms.iter().map(|t| t.0 + 1).max().unwrap_or(0);
        let mut c = vec![BigRational::zero(); n];
        for &(e, num, den) in terms {
            c[e] += BigRational::new(num.into(), den.into());
        }
        Self::new(c)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let z = BigRational::zero();
        Self::new((0..n).map(|i| self.coeffs.get(i).unwrap_or(&z) + o.coeffs.get(i).unwrap_or(&z)).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.coeffs.is_empty() || o.coeffs.is_empty() {
            return Self::new(vec![]);
        }
        let mut c = vec![BigRational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Self::new(c)
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// Coefficientwise absolute value.
    pub fn abs(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.abs()).collect())
    }

    /// Value at `s = 1`, i.e. `t = ell^{-1/2}`.
    pub fn at_one(&self, ell: u64) -> f64 {
        let t = (ell as f64).powf(-0.5);
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c.to_f64().unwrap_or(f64::NAN))
    }
}

/// Exact coefficients indexed by `(e, m)` with value `ell^{e/2} m`, `gcd(m, ell) = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirichletCoefficients {
    pub ell: u64,
    pub d: i64,
    pub bound: u64,
    entries: BTreeMap<(u32, u64), BigRational>,
}

impl DirichletCoefficients {
    pub fn new(ell: u64, d: i64, bound: u64) -> Self {
        DirichletCoefficients {
            ell,
            d,
            bound,
            entries: BTreeMap::new(),
        }
    }

    /// Whether `ell^{e/2} m <= bound`.
    pub fn in_range(&self, e: u32, m: u64) -> bool {
        let lhs = (self.ell as u128).checked_pow(e).and_then(|v| v.checked_mul(m as u128 * m as u128));
        lhs.is_some_and(|v| v <= self.bound as u128 * self.bound as u128)
    }

    /// Largest `m` with `ell^{e/2} m <= bound`.
    fn m_limit(&self, e: u32) -> u64 {
        let Some(le) = (self.ell as u128).checked_pow(e) else { return 0 };
        let x2 = self.bound as u128 * self.bound as u128;
        crate::arith::isqrt(x2 / le) as u64
    }

    pub fn get(&self, e: u32, m: u64) -> BigRational {
        self.entries.get(&(e, m)).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add_at(&mut self, e: u32, m: u64, v: &BigRational) {
        if v.is_zero() || !self.in_range(e, m) {
            return;
        }
        let slot = self.entries.entry((e, m)).or_insert_with(BigRational::zero);
        *slot += v;
        if slot.is_zero() {
            self.entries.remove(&(e, m));
        }
    }

    /// Adds `scale * factor(t) * sum_m dense[m] m^{-s}`.
    pub fn add_product(&mut self, scale: &BigRational, factor: &EllAdicFactor, dense: &[i64]) {
        for (e, a) in factor.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let k = scale * a;
            let lim = self.m_limit(e as u32).min(dense.len().saturating_sub(1) as u64);
            for m in 1..=lim {
                let c = dense[m as usize];
                if c != 0 {
                    self.add_at(e as u32, m, &(&k * BigRational::from_integer(BigInt::from(c))));
                }
            }
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(u32, u64), &BigRational)> {
        self.entries.iter()
    }

    pub fn nonzero_len(&self) -> usize {
        self.entries.len()
    }

    /// Coefficient at the integer `n`.
    pub fn coefficient(&self, n: u64) -> BigRational {
        if n == 0 {
            return BigRational::zero();
        }
        let (mut e, mut m) = (0u32, n);
        while m % self.ell == 0 {
            m /= self.ell;
            e += 2;
        }
        self.get(e, m)
    }

    /// Any nonzero entry at an odd power of `sqrt ell`.
    pub fn half_power_residue(&self) -> Option<((u32, u64), BigRational)> {
        self.entries.iter().find(|((e, _), _)| e % 2 == 1).map(|(k, v)| (*k, v.clone()))
    }

    /// Flattens to `n -> c` after checking half-power cancellation and integrality.
    pub fn to_integer_series(&self) -> Result<IntegerSeries> {
        if let Some(((e, m), v)) = self.half_power_residue() {
            return Err(Error::invariant(format!("half-power cancellation failed at ell^({e}/2)*{m}: {v}")));
        }
        let mut terms = BTreeMap::new();
        for (&(e, m), v) in &self.entries {
            if !v.is_integer() {
                return Err(Error::invariant(format!("non-integral coefficient {v} at ell^({e}/2)*{m}")));
            }
            let n = (self.ell as u128).pow(e / 2) * m as u128;
            let n = u64::try_from(n).map_err(|_| Error::invariant("index overflow"))?;
            terms.insert(n, v.to_integer());
        }
        Ok(IntegerSeries {
            ell: self.ell,
            d: self.d,
            bound: self.bound,
            terms,
        })
    }

    /// The same series with `1/(ell-1)` added back at index 1.
    pub fn with_constant(&self) -> Self {
        let mut s = self.clone();
        s.add_at(0, 1, &BigRational::new(BigInt::one(), BigInt::from(self.ell - 1)));
        s
    }
}

pub(crate) fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub(crate) fn check_bound(x: u64) -> Result<()> {
    if x > MAX_BOUND {
        return Err(Error::resource(format!("bound {x} exceeds the supported maximum {MAX_BOUND}")));
    }
    Ok(())
}
