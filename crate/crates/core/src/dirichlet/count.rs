use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;

use super::phi::{assemble_bound, assemble_from_groups, assemble_phi, builtin_fields, cor34_phi, special_phi};
use super::DirichletCoefficients;
use crate::arith::primes::iroot;
use crate::error::{Error, Result};
use crate::quadfield::{ell_star, g_b_rank, is_fundamental, BIndex};
use crate::splitting::FieldSpec;

/// `|D|^{(ell-1)/2} f^{ell-1}`.
pub fn disc_from_conductor(f: u64, d: i64, ell: u64) -> BigInt {
    BigInt::from(d.unsigned_abs()).pow(((ell - 1) / 2) as u32) * BigInt::from(f).pow((ell - 1) as u32)
}

/// `sum_{n <= x} a_n` of the flattened series.
pub fn partial_count(series: &DirichletCoefficients, x: u64) -> Result<BigInt> {
    let flat = series.to_integer_series()?;
    if x == 0 {
        return Ok(BigInt::zero());
    }
    Ok(flat.terms.range(1..=x).map(|(_, v)| v).sum())
}

/// Complete lists of degree-ell fields for a resolvent, when known.
pub trait FieldProvider: Sync {
    fn fields(&self, d: i64, ell: u64) -> Option<Vec<FieldSpec>>;
}

/// The built-in registry.
pub struct BuiltinFields;

impl FieldProvider for BuiltinFields {
    fn fields(&self, d: i64, ell: u64) -> Option<Vec<FieldSpec>> {
        builtin_fields(d, ell)
    }
}

pub struct NoFields;

impl FieldProvider for NoFields {
    fn fields(&self, _: i64, _: u64) -> Option<Vec<FieldSpec>> {
        None
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AggregateCount {
    pub ell: u64,
    pub x: u64,
    /// Exact count over the resolved resolvents.
    pub exact: BigInt,
    /// `exact` plus a bound for every unresolved resolvent.
    pub upper: BigInt,
    pub resolved: Vec<i64>,
    pub unresolved: Vec<i64>,
}

enum PerD {
    Exact(BigInt),
    Bound(BigInt),
}

fn count_for(d: i64, ell: u64, n_max: u64, provider: &dyn FieldProvider) -> Result<PerD> {
    if d == ell_star(ell) {
        let s = if ell % 4 == 1 {
            special_phi(ell, n_max)?
        } else {
            cor34_phi(ell, d, n_max)?
        };
        return Ok(PerD::Exact(partial_count(&s, n_max)?));
    }
    let mut ranks = Vec::new();
    for b in BIndex::ALL.into_iter().filter(|b| b.is_legal(d, ell)) {
        ranks.push((b, g_b_rank(d, ell, b)?));
    }
    if ranks.iter().all(|&(_, r)| r == 0) {
        let groups: Vec<_> = ranks.iter().map(|&(b, _)| (b, vec![])).collect();
        let s = assemble_from_groups(d, ell, n_max, &groups)?;
        return Ok(PerD::Exact(partial_count(&s, n_max)?));
    }
    if let Some(fields) = provider.fields(d, ell) {
        let s = assemble_phi(d, ell, &fields, n_max)?;
        return Ok(PerD::Exact(partial_count(&s, n_max)?));
    }
    let s = assemble_bound(d, ell, n_max, &ranks)?;
    let total: BigRational = s
        .iter()
        .filter(|((e, _), _)| e % 2 == 0)
        .map(|(_, v)| v.clone())
        .fold(BigRational::zero(), |a, b| a + b);
    Ok(PerD::Bound(total.floor().to_integer()))
}

/// Number of degree-ell dihedral fields with `|Disc| <= x`, summed over resolvents.
pub fn aggregate_count(ell: u64, x: u64, provider: &dyn FieldProvider) -> Result<AggregateCount> {
    if ell < 5 || !crate::arith::is_prime(ell) {
        return Err(Error::input("aggregate counts need a prime ell >= 5"));
    }
    let half = ((ell - 1) / 2) as u32;
    let dmax = iroot(x as u128, half) as i64;
    let mut ds = Vec::new();
    for a in 3..=dmax {
        for d in [-a, a] {
            if is_fundamental(d)? {
                ds.push(d);
            }
        }
    }
    let per: Vec<(i64, PerD)> = ds
        .par_iter()
        .map(|&d| {
            let dpow = (d.unsigned_abs() as u128).pow(half);
            let n_max = iroot(x as u128 / dpow, (ell - 1) as u32) as u64;
            count_for(d, ell, n_max, provider).map(|c| (d, c))
        })
        .collect::<Result<_>>()?;
    let mut out = AggregateCount {
        ell,
        x,
        exact: BigInt::zero(),
        upper: BigInt::zero(),
        resolved: vec![],
        unresolved: vec![],
    };
    for (d, c) in per {
        match c {
            PerD::Exact(v) => {
                out.exact += &v;
                out.upper += v;
                out.resolved.push(d);
            }
            PerD::Bound(v) => {
                out.upper += v;
                out.unresolved.push(d);
            }
        }
    }
    Ok(out)
}
