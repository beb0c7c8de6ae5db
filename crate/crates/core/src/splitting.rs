//! Prime classification: the product set, splitting types in degree-ell fields, weights.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::kronecker::kronecker_unchecked;
use crate::arith::primes::{is_prime, is_square, mul_mod};
use crate::arith::{factor_shape_mod_p, poly_disc, FactorShape, IntPoly};
use crate::error::{Error, Result};
use crate::quadfield::{ell_star, is_fundamental, FundamentalUnit};
use crate::special_case::chebyshev_p;

/// `p != ell` and `p ≡ (D/p) (mod ell)`.
pub fn in_set_d(p: u64, d: i64, ell: u64) -> bool {
    if p == ell {
        return false;
    }
    let k = kronecker_unchecked(d, p as i64);
    if k == 0 {
        return false;
    }
    (p as i64 - k as i64).rem_euclid(ell as i64) == 0
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SplittingType {
    TotallySplit,
    Inert,
    TotallyRamified,
    Other,
}

impl SplittingType {
    pub fn from_shape(shape: &FactorShape, degree: usize) -> Self {
        let parts = &shape.parts;
        if parts.len() == degree && parts.iter().all(|&(d, m)| d == 1 && m == 1) {
            SplittingType::TotallySplit
        } else if parts.len() == 1 && parts[0] == (degree, 1) {
            SplittingType::Inert
        } else if parts.len() == 1 && parts[0] == (1, degree) {
            SplittingType::TotallyRamified
        } else {
            SplittingType::Other
        }
    }
}

/// Exponent `b` in `|Disc E| = ell^{k+b} |D|^{(ell-1)/2}`.
pub fn disc_ell_offset(ell: u64, ell_divides_d: bool) -> u32 {
    let l = ell as u32;
    if !ell_divides_d {
        l - 2
    } else if ell % 4 == 1 {
        (l - 3) / 2
    } else {
        (l - 5) / 2
    }
}

/// The two admissible values of `k`.
pub fn k_values(ell: u64, ell_divides_d: bool) -> [u32; 2] {
    let l = ell as u32;
    if !ell_divides_d {
        [0, 2]
    } else if ell % 4 == 1 {
        [0, (l + 3) / 2]
    } else {
        [0, (l + 5) / 2]
    }
}

/// A degree-ell field given by a monic polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldSpec {
    pub poly: IntPoly,
    /// Field discriminant (signed).
    pub disc: BigInt,
    pub k_tag: Option<u32>,
    pub ell: u64,
    /// `poly_disc(poly) / disc`, a perfect square.
    pub index_sq: BigInt,
}

impl FieldSpec {
    /// Field for resolvent `Q(sqrt D)` with tag `k`; the discriminant is predicted from `(D, ell, k)`.
    pub fn general(poly: IntPoly, d: i64, ell: u64, k: u32) -> Result<Self> {
        if !is_fundamental(d)? {
            return Err(Error::input(format!("{d} is not a fundamental discriminant")));
        }
        let ldiv = d % ell as i64 == 0;
        if !k_values(ell, ldiv).contains(&k) {
            return Err(Error::input(format!(
                "k = {k} not admissible for D = {d}, ell = {ell} (expected one of {:?})",
                k_values(ell, ldiv)
            )));
        }
        let abs = BigInt::from(ell).pow(k + disc_ell_offset(ell, ldiv)) * BigInt::from(d.unsigned_abs()).pow(((ell - 1) / 2) as u32);
        let pd = Self::check_poly(&poly, ell)?;
        let disc = if pd.is_negative() { -abs } else { abs };
        let mut f = Self::with_disc(poly, disc, ell)?;
        f.k_tag = Some(k);
        Ok(f)
    }

    /// Field with a declared discriminant; the polynomial discriminant must be `disc * square`.
    pub fn with_disc(poly: IntPoly, disc: BigInt, ell: u64) -> Result<Self> {
        let pd = Self::check_poly(&poly, ell)?;
        if disc.is_zero() || !(&pd % &disc).is_zero() {
            return Err(Error::input(format!("declared discriminant {disc} does not divide disc({poly}) = {pd}")));
        }
        let q = &pd / &disc;
        if q.is_negative() || !big_is_square(&q) {
            return Err(Error::input(format!("disc({poly}) / {disc} = {q} is not a square")));
        }
        Ok(FieldSpec {
            poly,
            disc,
            k_tag: None,
            ell,
            index_sq: q,
        })
    }

    /// Field whose polynomial is trusted to generate the maximal order.
    pub fn trusted(poly: IntPoly, ell: u64) -> Result<Self> {
        let pd = Self::check_poly(&poly, ell)?;
        Self::with_disc(poly, pd, ell)
    }

    fn check_poly(poly: &IntPoly, ell: u64) -> Result<BigInt> {
        if poly.degree() != ell as usize || !poly.is_monic() {
            return Err(Error::input(format!("{poly} is not monic of degree {ell}")));
        }
        if poly.has_integer_root() {
            return Err(Error::input(format!("{poly} has a rational root")));
        }
        let pd = poly_disc(poly)?;
        if pd.is_zero() {
            return Err(Error::input(format!("{poly} is not squarefree")));
        }
        let witness = crate::arith::primes_up_to(10_000)
            .into_iter()
            .any(|p| !(&pd % p).is_zero() && factor_shape_mod_p(poly, p).map(|s| s.parts == vec![(ell as usize, 1)]).unwrap_or(false));
        if !witness {
            return Err(Error::input(format!("no irreducibility witness below 10^4 for {poly}")));
        }
        Ok(pd)
    }

    /// `|Disc E| = ell^{k+b} |D|^{(ell-1)/2}` for the given resolvent.
    pub fn matches_resolvent(&self, d: i64) -> bool {
        let ldiv = d % self.ell as i64 == 0;
        let b = disc_ell_offset(self.ell, ldiv);
        let dpart = BigInt::from(d.unsigned_abs()).pow(((self.ell - 1) / 2) as u32);
        k_values(self.ell, ldiv).iter().any(|&k| {
            let abs = BigInt::from(self.ell).pow(k + b) * &dpart;
            abs == self.disc.abs() && self.k_tag.is_none_or(|t| t == k)
        })
    }
}

fn big_is_square(n: &BigInt) -> bool {
    if let Some(v) = n.to_i128() {
        return is_square(v);
    }
    let r = n.sqrt();
    &r * &r == *n
}

pub fn splitting_type(e: &FieldSpec, p: u64) -> Result<SplittingType> {
    if !is_prime(p) {
        return Err(Error::input(format!("{p} is not prime")));
    }
    if (&e.index_sq % p).is_zero() {
        return Err(Error::input(format!("splitting undecidable from this polynomial at p = {p}")));
    }
    let shape = factor_shape_mod_p(&e.poly, p)?;
    Ok(SplittingType::from_shape(&shape, e.ell as usize))
}

/// `ell - 1` if totally split, `-1` if inert or totally ramified, `0` otherwise.
pub fn omega_e(p: u64, e: &FieldSpec) -> Result<i64> {
    Ok(match splitting_type(e, p)? {
        SplittingType::TotallySplit => e.ell as i64 - 1,
        SplittingType::Inert | SplittingType::TotallyRamified => -1,
        SplittingType::Other => 0,
    })
}

/// Minimal polynomial of `sqrt D (zeta - zeta^{-1})`.
pub fn mirror_min_poly(d: i64, ell: u64) -> Result<IntPoly> {
    if d == ell_star(ell) {
        return Err(Error::input("mirror field undefined in special case"));
    }
    if !is_fundamental(d)? {
        return Err(Error::input(format!("{d} is not a fundamental discriminant")));
    }
    // P(x)/x = R(x^2), and the mirror element squared is D times a root of R.
    let p = chebyshev_p(ell)?.poly;
    let m = (ell as usize - 1) / 2;
    let db = BigInt::from(d);
    let mut coeffs = vec![BigInt::zero(); ell as usize];
    for j in 0..=m {
        coeffs[2 * j] = p.coeff(2 * j + 1) * db.pow((m - j) as u32);
    }
    Ok(IntPoly::new(coeffs))
}

/// `ε^{(p-1)/ell} ≡ 1 (mod p)` for the fundamental unit of `Q(sqrt ell)`.
pub fn unit_power_split_test(p: u64, ell: u64) -> Result<bool> {
    let eps = crate::quadfield::fundamental_unit(ell as i64)?;
    unit_power_split_test_with(p, ell, &eps)
}

pub fn unit_power_split_test_with(p: u64, ell: u64, eps: &FundamentalUnit) -> Result<bool> {
    if ell % 4 != 1 || !is_prime(ell) {
        return Err(Error::input("ell must be a prime ≡ 1 (mod 4)"));
    }
    if !is_prime(p) || p % ell != 1 {
        return Err(Error::input(format!("p = {p} must be a prime ≡ 1 (mod {ell})")));
    }
    // ε = (a - b)/2 + b w with w^2 = w + (ell - 1)/4.
    let pb = BigInt::from(p);
    let x0 = ((&eps.a - &eps.b) / BigInt::from(2)).mod_floor(&pb).to_u64().unwrap();
    let y0 = eps.b.mod_floor(&pb).to_u64().unwrap();
    let n = ((ell - 1) / 4) % p;
    let mul = |u: (u64, u64), v: (u64, u64)| {
        let yy = mul_mod(u.1, v.1, p);
        (
            (mul_mod(u.0, v.0, p) + mul_mod(yy, n, p)) % p,
            (mul_mod(u.0, v.1, p) + mul_mod(u.1, v.0, p) + yy) % p,
        )
    };
    let mut e = (p - 1) / ell;
    let mut acc = (1u64, 0u64);
    let mut base = (x0, y0);
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(acc, base);
        }
        base = mul(base, base);
        e >>= 1;
    }
    Ok(acc == (1, 0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::primes_up_to;
    use num_traits::One;
    use proptest::prelude::*;

    fn d13_field() -> FieldSpec {
        FieldSpec::general(IntPoly::from_i64s(&[-3, 5, 0, 5, 0, 1]), 13, 5, 2).unwrap()
    }

    #[test]
    fn residue_list_mod_65() {
        let listed = [1u64, 16, 19, 24, 34, 36, 44, 51, 54, 56, 59, 61];
        for p in primes_up_to(5000) {
            if p == 5 || p == 13 {
                assert!(!in_set_d(p, 13, 5));
                continue;
            }
            assert_eq!(in_set_d(p, 13, 5), listed.contains(&(p % 65)), "p = {p}");
        }
        assert!(in_set_d(59, 13, 5));
        assert!(!in_set_d(11, 13, 5));
    }

    #[test]
    fn example_field_splitting() {
        let e = d13_field();
        assert_eq!(splitting_type(&e, 59).unwrap(), SplittingType::TotallySplit);
        assert_eq!(splitting_type(&e, 19).unwrap(), SplittingType::Inert);
        assert_eq!(omega_e(59, &e).unwrap(), 4);
        assert_eq!(omega_e(19, &e).unwrap(), -1);
        let c = FieldSpec::trusted(IntPoly::from_i64s(&[-1, -3, 0, 1]), 3).unwrap();
        assert_eq!(splitting_type(&c, 3).unwrap(), SplittingType::TotallyRamified);
        assert!(d13_field().matches_resolvent(13));
    }

    #[test]
    fn other_shape_has_zero_weight() {
        let e = d13_field();
        let p = primes_up_to(2000)
            .into_iter()
            .find(|&p| p > 13 && splitting_type(&e, p).unwrap() == SplittingType::Other)
            .unwrap();
        assert_eq!(omega_e(p, &e).unwrap(), 0);
    }

    #[test]
    fn field_spec_validation() {
        let f = IntPoly::from_i64s(&[-3, 5, 0, 5, 0, 1]);
        // k = 0 is consistent with this polynomial if it had index 5; only the index changes.
        let k0 = FieldSpec::general(f.clone(), 13, 5, 0).unwrap();
        assert_eq!(k0.index_sq, BigInt::from(25));
        assert!(splitting_type(&k0, 5).is_err());
        assert!(FieldSpec::general(f.clone(), 13, 5, 1).is_err());
        assert!(FieldSpec::general(IntPoly::from_i64s(&[-1, 0, 0, 0, 0, 1]), 13, 5, 2).is_err());
        assert!(FieldSpec::with_disc(f.clone(), BigInt::from(7), 5).is_err());
        let e7 = FieldSpec::general(IntPoly::from_i64s(&[-15, -56, 0, 56, 0, -14, 0, 1]), -287, 7, 6).unwrap();
        assert!(e7.index_sq.is_one());
        // Non-maximal polynomial: the index divisor is refused.
        let g = FieldSpec::with_disc(IntPoly::from_i64s(&[-8, -12, 0, 1]), BigInt::from(81), 3).unwrap();
        assert_eq!(g.index_sq, BigInt::from(64));
        assert!(splitting_type(&g, 2).is_err());
    }

    #[test]
    fn mirror_field_splits_exactly_on_the_product_set() {
        for (d, ell) in [(13i64, 5u64), (-287, 7)] {
            let m = mirror_min_poly(d, ell).unwrap();
            assert_eq!(m.degree(), ell as usize - 1);
            let md = poly_disc(&m).unwrap();
            for p in primes_up_to(1000) {
                if (&md % p).is_zero() {
                    continue;
                }
                let split = factor_shape_mod_p(&m, p).unwrap().parts.iter().all(|&(dg, mu)| dg == 1 && mu == 1);
                assert_eq!(split, in_set_d(p, d, ell), "D={d} ell={ell} p={p}");
            }
        }
        assert!(mirror_min_poly(5, 5).is_err());
        assert!(mirror_min_poly(-3, 3).is_err());
    }

    #[test]
    fn unit_power_test_matches_splitting() {
        let e = FieldSpec::trusted(IntPoly::from_i64s(&[-1, 5, 0, 5, 0, 1]), 5).unwrap();
        for p in primes_up_to(20_000).into_iter().filter(|p| p % 5 == 1) {
            let split = splitting_type(&e, p).unwrap() == SplittingType::TotallySplit;
            assert_eq!(unit_power_split_test(p, 5).unwrap(), split, "p={p}");
        }
        assert!(unit_power_split_test(5, 5).is_err());
        assert!(unit_power_split_test(13, 5).is_err());
    }

    proptest! {
        #[test]
        fn translation_preserves_splitting(c in -3i64..=3, pi in 0usize..20) {
            let f = IntPoly::from_i64s(&[-3, 5, 0, 5, 0, 1]);
            let g = f.shift(&BigInt::from(c));
            let e = FieldSpec::trusted(f.clone(), 5).unwrap();
            let e2 = FieldSpec::trusted(g, 5).unwrap();
            let p = primes_up_to(100).into_iter().filter(|&p| !(&e.disc % p).is_zero()).nth(pi).unwrap();
            prop_assert_eq!(splitting_type(&e, p).unwrap(), splitting_type(&e2, p).unwrap());
        }

        #[test]
        fn shapes_have_full_degree(a in -20i64..20, b in -20i64..20, pi in 0usize..15) {
            let f = IntPoly::from_i64s(&[a, b, 0, 5, 0, 1]);
            let p = primes_up_to(50)[pi];
            prop_assert_eq!(factor_shape_mod_p(&f, p).unwrap().total_degree(), 5);
        }
    }
}
