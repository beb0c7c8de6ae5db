//! The resolvent `Q(sqrt ell*)`: the polynomial P, the canonical degree-ell field, AAC.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::primes::is_prime;
use crate::arith::IntPoly;
use crate::error::{Error, Result};
use crate::quadfield::{aac_holds, fundamental_unit, FundamentalUnit};
use crate::splitting::FieldSpec;

/// `P(x) = sum_k ell (ell-k-1)! / (k! (ell-2k)!) x^{ell-2k}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChebyshevP {
    pub ell: u64,
    pub poly: IntPoly,
}

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

pub fn chebyshev_p(ell: u64) -> Result<ChebyshevP> {
    if ell < 3 || !is_prime(ell) {
        return Err(Error::input(format!("ell = {ell} must be an odd prime")));
    }
    let mut coeffs = vec![BigInt::zero(); ell as usize + 1];
    for k in 0..=(ell - 1) / 2 {
        let num = factorial(ell - k - 1) * ell;
        let den = factorial(k) * factorial(ell - 2 * k);
        coeffs[(ell - 2 * k) as usize] = num / den;
    }
    Ok(ChebyshevP {
        ell,
        poly: IntPoly::new(coeffs),
    })
}

impl ChebyshevP {
    /// `x^ell P(x - 1/x) = x^{2 ell} - 1`, checked as a polynomial identity.
    pub fn identity_holds(&self) -> bool {
        let l = self.ell as usize;
        let x2m1 = IntPoly::from_i64s(&[-1, 0, 1]);
        let mut lhs = IntPoly::zero();
        let mut pw = IntPoly::from_i64s(&[1]);
        for j in 0..=l {
            let c = self.poly.coeff(j);
            if !c.is_zero() {
                let mut mono = vec![BigInt::zero(); l - j + 1];
                mono[l - j] = c;
                lhs = lhs.add(&pw.mul(&IntPoly::new(mono)));
            }
            pw = pw.mul(&x2m1);
        }
        let mut rhs = vec![BigInt::zero(); 2 * l + 1];
        rhs[0] = BigInt::from(-1);
        rhs[2 * l] = BigInt::one();
        lhs == IntPoly::new(rhs)
    }
}

/// Source of the fundamental unit of `Q(sqrt ell)` and the AAC verdict; injectable for tests.
pub trait UnitProvider: Sync {
    fn unit(&self, ell: u64) -> Result<FundamentalUnit>;
    fn aac_holds(&self, ell: u64) -> Result<bool>;
}

/// Units from the continued-fraction computation.
pub struct ComputedUnits;

impl UnitProvider for ComputedUnits {
    fn unit(&self, ell: u64) -> Result<FundamentalUnit> {
        fundamental_unit(ell as i64)
    }

    fn aac_holds(&self, ell: u64) -> Result<bool> {
        aac_holds(ell)
    }
}

fn require_one_mod_four(ell: u64) -> Result<()> {
    if !is_prime(ell) || ell % 4 != 1 {
        return Err(Error::input(format!("ell = {ell} must be a prime ≡ 1 (mod 4)")));
    }
    Ok(())
}

pub fn predicted_special_disc(ell: u64) -> Result<BigInt> {
    predicted_special_disc_with(ell, &ComputedUnits)
}

pub fn predicted_special_disc_with(ell: u64, units: &dyn UnitProvider) -> Result<BigInt> {
    require_one_mod_four(ell)?;
    let e = if units.aac_holds(ell)? { (3 * ell - 1) / 2 } else { ell - 2 };
    Ok(BigInt::from(ell).pow(e as u32))
}

pub fn dl_ramified_only_at_ell_exists(ell: u64) -> Result<bool> {
    dl_ramified_only_at_ell_exists_with(ell, &ComputedUnits)
}

pub fn dl_ramified_only_at_ell_exists_with(ell: u64, units: &dyn UnitProvider) -> Result<bool> {
    require_one_mod_four(ell)?;
    Ok(!units.aac_holds(ell)?)
}

/// `P(x) - Tr(ε)`.
pub fn special_field_poly(ell: u64) -> Result<FieldSpec> {
    special_field_poly_with(ell, &ComputedUnits)
}

pub fn special_field_poly_with(ell: u64, units: &dyn UnitProvider) -> Result<FieldSpec> {
    require_one_mod_four(ell)?;
    let tr = units.unit(ell)?.trace();
    let f = special_field_poly_with_trace(ell, &tr)?;
    FieldSpec::with_disc(f, predicted_special_disc_with(ell, units)?, ell)
}

/// `P(x) - t` for an arbitrary trace `t`, e.g. `Tr(±ε^m)`.
pub fn special_field_poly_with_trace(ell: u64, t: &BigInt) -> Result<IntPoly> {
    let p = chebyshev_p(ell)?.poly;
    Ok(p.sub(&IntPoly::constant(t.clone())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{factor_shape_mod_p, poly_disc, primes_up_to};
    use crate::splitting::{splitting_type, unit_power_split_test, SplittingType};

    #[test]
    fn small_chebyshev_polynomials() {
        assert_eq!(chebyshev_p(5).unwrap().poly, IntPoly::from_i64s(&[0, 5, 0, 5, 0, 1]));
        assert_eq!(chebyshev_p(3).unwrap().poly, IntPoly::from_i64s(&[0, 3, 0, 1]));
        assert_eq!(chebyshev_p(7).unwrap().poly, IntPoly::from_i64s(&[0, 7, 0, 14, 0, 7, 0, 1]));
        assert!(chebyshev_p(9).is_err());
    }

    #[test]
    fn chebyshev_identity() {
        for ell in [3u64, 5, 7, 11, 13, 17] {
            assert!(chebyshev_p(ell).unwrap().identity_holds(), "ell={ell}");
        }
        let mut bad = chebyshev_p(7).unwrap();
        bad.poly = bad.poly.add(&IntPoly::from_i64s(&[0, 1]));
        assert!(!bad.identity_holds());
    }

    #[test]
    fn special_fields() {
        let e5 = special_field_poly(5).unwrap();
        assert_eq!(e5.poly, IntPoly::from_i64s(&[-1, 5, 0, 5, 0, 1]));
        assert_eq!(poly_disc(&e5.poly).unwrap(), BigInt::from(5).pow(7));
        assert!(e5.index_sq.is_one());
        let e13 = special_field_poly(13).unwrap();
        assert_eq!(e13.poly, chebyshev_p(13).unwrap().poly.sub(&IntPoly::from_i64s(&[3])));
        assert_eq!(predicted_special_disc(5).unwrap(), BigInt::from(5).pow(7));
        assert_eq!(predicted_special_disc(13).unwrap(), BigInt::from(13).pow(19));
        assert!(!dl_ramified_only_at_ell_exists(5).unwrap());
        assert!(!dl_ramified_only_at_ell_exists(13).unwrap());
        assert!(special_field_poly(7).is_err());
    }

    #[test]
    fn square_quotients_and_irreducibility_witnesses() {
        for ell in [5u64, 13, 17, 29] {
            let e = special_field_poly(ell).unwrap();
            // An inert prime must be ≡ 1 (mod ell); for ell = 17 the first one is 103.
            let witness = primes_up_to(1000)
                .into_iter()
                .find(|&p| factor_shape_mod_p(&e.poly, p).unwrap().parts == vec![(ell as usize, 1)])
                .unwrap();
            assert_eq!(witness % ell, 1);
            assert_eq!(witness < 100, ell != 17, "ell={ell} witness={witness}");
            // disc(P - Tr ε) = Disc(E) * index^2; the index is recorded, not assumed trivial.
            let expect_index: u64 = if ell == 17 { 1 << 16 } else { 1 };
            assert_eq!(e.index_sq, BigInt::from(expect_index), "ell={ell}");
        }
    }

    #[test]
    fn alternate_trace_gives_same_fingerprint() {
        // Tr(-ε^3) for ε = (1 + sqrt 5)/2.
        let eps = fundamental_unit(5).unwrap();
        let cube = eps.power_coords(5, 3);
        let tr3: BigInt = -(&cube.0 * BigInt::from(2) + &cube.1);
        let f = special_field_poly_with_trace(5, &tr3).unwrap();
        let g = special_field_poly(5).unwrap();
        let ff = FieldSpec::trusted(f, 5).unwrap();
        let mut n = 0;
        for p in primes_up_to(1000) {
            if p == 5 || (&ff.disc % BigInt::from(p)).is_zero() {
                continue;
            }
            assert_eq!(splitting_type(&ff, p).unwrap(), splitting_type(&g, p).unwrap(), "p={p}");
            n += 1;
            if n == 20 {
                break;
            }
        }
        assert_eq!(n, 20);
    }

    #[test]
    fn splitting_matches_unit_power_test() {
        for ell in [5u64, 13] {
            let e = special_field_poly(ell).unwrap();
            for p in primes_up_to(10_000).into_iter().filter(|p| p % ell == 1) {
                let st = splitting_type(&e, p).unwrap();
                let split = unit_power_split_test(p, ell).unwrap();
                assert_eq!(st == SplittingType::TotallySplit, split, "ell={ell} p={p}");
                if !split {
                    assert_eq!(st, SplittingType::Inert);
                }
            }
        }
    }

    struct FakeAacFailure;

    impl UnitProvider for FakeAacFailure {
        fn unit(&self, ell: u64) -> Result<FundamentalUnit> {
            fundamental_unit(ell as i64)
        }
        fn aac_holds(&self, _ell: u64) -> Result<bool> {
            Ok(false)
        }
    }

    #[test]
    fn injected_aac_failure_switches_branch() {
        assert_eq!(predicted_special_disc_with(5, &FakeAacFailure).unwrap(), BigInt::from(125));
        assert!(dl_ramified_only_at_ell_exists_with(5, &FakeAacFailure).unwrap());
        let e = special_field_poly_with(5, &FakeAacFailure).unwrap();
        assert_eq!(e.index_sq, BigInt::from(625));
    }
}
