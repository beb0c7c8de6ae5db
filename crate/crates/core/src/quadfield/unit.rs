//! Fundamental units of real quadratic fields by continued fractions.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arith::primes::isqrt;
use crate::error::{Error, Result};
use crate::quadfield::order::Order;

/// `ε = (a + b sqrt D)/2` when `D ≡ 1 (mod 4)`, else `ε = a + b sqrt(D/4)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FundamentalUnit {
    pub a: BigInt,
    pub b: BigInt,
    pub denom: u8,
    pub norm: i8,
}

impl FundamentalUnit {
    /// Coordinates `(x, y)` with `ε = x + y w`.
    pub fn order_coords(&self, d: i64) -> (BigInt, BigInt) {
        if self.denom == 2 {
            Order::new(d).from_half_sqrt(&self.a, &self.b)
        } else {
            (self.a.clone(), self.b.clone())
        }
    }

    /// Trace of ε.
    pub fn trace(&self) -> BigInt {
        if self.denom == 2 {
            self.a.clone()
        } else {
            &self.a * 2
        }
    }

    /// `ε^k` as order coordinates.
    pub fn power_coords(&self, d: i64, k: u32) -> (BigInt, BigInt) {
        let o = Order::new(d);
        let e = self.order_coords(d);
        let mut acc = (BigInt::one(), BigInt::zero());
        for _ in 0..k {
            acc = o.mul_big(&acc, &e);
        }
        acc
    }
}

pub fn fundamental_unit(d: i64) -> Result<FundamentalUnit> {
    if d <= 0 {
        return Err(Error::input("no fundamental unit for D < 0"));
    }
    if !crate::quadfield::is_fundamental(d)? {
        return Err(Error::input(format!("{d} is not a fundamental discriminant")));
    }
    let o = Order::new(d);
    let s = isqrt(d as u128) as i64;
    // Expand w = (P + sqrt D)/Q with P = delta, Q = 2.
    let (mut p_, mut q_) = (o.delta, 2i64);
    let (mut h1, mut h2) = (BigInt::one(), BigInt::zero()); // p_{i-1}, p_{i-2}
    let (mut k1, mut k2) = (BigInt::zero(), BigInt::one()); // q_{i-1}, q_{i-2}
    let mut first_state = None;
    let mut i = 0usize;
    loop {
        let a = (p_ + s).div_euclid(q_);
        let h = &h1 * a + &h2;
        let k = &k1 * a + &k2;
        h2 = std::mem::replace(&mut h1, h);
        k2 = std::mem::replace(&mut k1, k);
        p_ = a * q_ - p_;
        q_ = (d - p_ * p_) / q_;
        i += 1;
        match first_state {
            None => first_state = Some((p_, q_)),
            Some(st) if st == (p_, q_) => break,
            _ => {}
        }
        if i > 10_000_000 {
            return Err(Error::invariant("continued fraction period not found"));
        }
    }
    // h2/k2 is the convergent just before the period closes.
    let x = &h2 - &k2 * o.delta;
    let y = k2;
    let norm = o.norm_big(&(x.clone(), y.clone()));
    if !norm.abs().is_one() {
        return Err(Error::invariant(format!("unit search produced norm {norm}")));
    }
    let (a, b, denom) = if o.delta == 1 { (&x * 2 + &y, y, 2) } else { (x, y, 1) };
    Ok(FundamentalUnit {
        a,
        b,
        denom,
        norm: if norm.is_positive() { 1 } else { -1 },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::primes::is_square;
    use crate::quadfield::is_fundamental;

    #[test]
    fn spec_units() {
        let u = fundamental_unit(5).unwrap();
        assert_eq!((u.a, u.b, u.denom, u.norm), (1.into(), 1.into(), 2, -1));
        let u = fundamental_unit(13).unwrap();
        assert_eq!((u.a, u.b, u.denom, u.norm), (3.into(), 1.into(), 2, -1));
        let u = fundamental_unit(8).unwrap();
        assert_eq!((u.a, u.b, u.denom, u.norm), (1.into(), 1.into(), 1, -1));
        let u = fundamental_unit(12).unwrap();
        assert_eq!((u.a, u.b, u.denom, u.norm), (2.into(), 1.into(), 1, 1));
        assert!(fundamental_unit(-4).is_err());
    }

    #[test]
    fn large_unit() {
        // Q(sqrt 94): 2143295 + 221064 sqrt 94
        let u = fundamental_unit(376).unwrap();
        assert_eq!((u.a, u.b), (2143295.into(), 221064.into()));
    }

    #[test]
    fn relation_and_minimality() {
        for d in 2i64..=200 {
            if !is_fundamental(d).unwrap() {
                continue;
            }
            let u = fundamental_unit(d).unwrap();
            let (a, b) = (u.a.clone(), u.b.clone());
            let (rad, den2) = if u.denom == 2 { (d, 4) } else { (d / 4, 1) };
            assert_eq!(&a * &a - &b * &b * rad, BigInt::from(den2 * u.norm as i64), "D={d}");
            assert!(a.is_positive() && b.is_positive());
            // No unit with smaller positive b (up to sign of the norm).
            let bmax: i64 = b.try_into().unwrap();
            for bb in 1..bmax {
                let t = (rad as i128) * (bb as i128) * (bb as i128);
                for n in [-1i128, 1] {
                    let sq = t + n * den2 as i128;
                    if is_square(sq) {
                        let aa = crate::arith::isqrt(sq as u128) as i128;
                        // (aa, bb) must also have the right parity to be an integer when denom 2.
                        assert!(den2 == 4 && (aa - bb as i128) % 2 != 0, "D={d} smaller unit b={bb}");
                    }
                }
            }
        }
    }
}
