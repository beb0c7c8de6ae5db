//! Dense integer polynomials.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::modp::FpPoly;
use crate::error::{Error, Result};

/// Integer polynomial, coefficients lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn x() -> Self {
        Self::from_i64s(&[0, 1])
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// `f(x + c)`.
    pub fn shift(&self, c: &BigInt) -> Self {
        let lin = Self::new(vec![c.clone(), BigInt::one()]);
        self.compose(&lin)
    }

    /// `f(g(x))` by Horner.
    pub fn compose(&self, g: &Self) -> Self {
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, c| acc.mul(g).add(&Self::constant(c.clone())))
    }

    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    pub fn reduce_mod(&self, p: u64) -> FpPoly {
        let pb = BigInt::from(p);
        FpPoly::new(p, self.coeffs.iter().map(|c| c.mod_floor(&pb).to_u64().expect("residue fits")).collect())
    }

    /// Rational roots of a polynomial with integer coefficients (monic case only needs integer divisors).
    pub fn has_integer_root(&self) -> bool {
        if self.is_zero() {
            return true;
        }
        if self.coeffs[0].is_zero() {
            return true;
        }
        if !self.is_monic() {
            return false;
        }
        let c0 = self.coeffs[0].abs();
        // Root bound (Cauchy): 1 + max |c_i|.
        let bound: BigInt = self.coeffs.iter().map(|c| c.abs()).max().unwrap() + 1;
        match (c0.to_u64(), bound.to_u64()) {
            (Some(c0), Some(b)) if c0 <= 1 << 40 => {
                let mut d = 1u64;
                while d * d <= c0 {
                    if c0 % d == 0 {
                        for cand in [d, c0 / d] {
                            if cand <= b {
                                for s in [1i64, -1] {
                                    let x = BigInt::from(cand) * s;
                                    if self.eval(&x).is_zero() {
                                        return true;
                                    }
                                }
                            }
                        }
                    }
                    d += 1;
                }
                false
            }
            _ => false,
        }
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let unit = mag.is_one() && i > 0;
            if !unit {
                write!(f, "{mag}")?;
                if i > 0 {
                    write!(f, "*")?;
                }
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

/// Discriminant `(-1)^{n(n-1)/2} Res(f, f') / lc(f)` of a monic polynomial.
pub fn poly_disc(f: &IntPoly) -> Result<BigInt> {
    if f.degree() < 2 || f.is_zero() {
        return Err(Error::input("discriminant needs degree >= 2"));
    }
    if !f.is_monic() {
        return Err(Error::input("monic required"));
    }
    let n = f.degree();
    let res = resultant(f, &f.derivative());
    let sign = if (n * (n - 1) / 2).is_multiple_of(2) { 1 } else { -1 };
    Ok(res * sign)
}

/// Resultant via a fraction-free (Bareiss) determinant of the Sylvester matrix.
pub fn resultant(f: &IntPoly, g: &IntPoly) -> BigInt {
    let m = f.degree();
    let n = g.degree();
    let size = m + n;
    if size == 0 {
        return BigInt::one();
    }
    let mut mat = vec![vec![BigInt::zero(); size]; size];
    for r in 0..n {
        for (i, c) in f.coeffs.iter().rev().enumerate() {
            mat[r][r + i] = c.clone();
        }
    }
    for r in 0..m {
        for (i, c) in g.coeffs.iter().rev().enumerate() {
            mat[n + r][r + i] = c.clone();
        }
    }
    bareiss_det(mat)
}

pub fn bareiss_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_discriminants() {
        assert_eq!(poly_disc(&IntPoly::from_i64s(&[-5, 0, 1])).unwrap(), BigInt::from(20));
        assert_eq!(poly_disc(&IntPoly::from_i64s(&[-1, -3, 0, 1])).unwrap(), BigInt::from(81));
        assert_eq!(poly_disc(&IntPoly::from_i64s(&[-1, 5, 0, 5, 0, 1])).unwrap(), BigInt::from(5).pow(7));
        assert!(poly_disc(&IntPoly::from_i64s(&[1, 1])).is_err());
        assert!(poly_disc(&IntPoly::from_i64s(&[1, 1, 2])).is_err());
    }

    #[test]
    fn cubic_discriminant_formula() {
        // x^3 + b x^2 + c x + d against the closed formula.
        for (b, c, d) in [(-1i64, -4, 1), (0, -1, -1), (2, -3, 7), (5, 0, -2)] {
            let f = IntPoly::from_i64s(&[d, c, b, 1]);
            let closed = 18 * b * c * d + b * b * c * c - 4 * c * c * c - 4 * b * b * b * d - 27 * d * d;
            assert_eq!(poly_disc(&f).unwrap(), BigInt::from(closed));
        }
    }

    #[test]
    fn example_field_discriminants() {
        // 5^5 * 13^2 and 7^7 * 287^3.
        let e5 = IntPoly::from_i64s(&[-3, 5, 0, 5, 0, 1]);
        assert_eq!(poly_disc(&e5).unwrap(), BigInt::from(5).pow(5) * 169);
        let e7 = IntPoly::from_i64s(&[-15, -56, 0, 56, 0, -14, 0, 1]);
        assert_eq!(poly_disc(&e7).unwrap(), BigInt::from(7).pow(7) * BigInt::from(287).pow(3));
    }

    #[test]
    fn display_and_shift() {
        let f = IntPoly::from_i64s(&[-1, 5, 0, 5, 0, 1]);
        assert_eq!(f.to_string(), "x^5 + 5*x^3 + 5*x - 1");
        let g = f.shift(&BigInt::from(2)).shift(&BigInt::from(-2));
        assert_eq!(f, g);
        assert_eq!(poly_disc(&f.shift(&BigInt::from(3))).unwrap(), poly_disc(&f).unwrap());
        assert!(IntPoly::from_i64s(&[-6, 1, 1]).has_integer_root());
        assert!(!IntPoly::from_i64s(&[1, -4, -1, 1]).has_integer_root());
    }
}
