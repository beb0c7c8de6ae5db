//! ell-ranks of ray class groups of quadratic fields for moduli supported above ell.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::kronecker::kronecker_unchecked;
use crate::arith::primes::{mod_inv, primes_up_to};
use crate::error::{Error, Result};
use crate::quadfield::forms::{BigForm, ClassGroup};
use crate::quadfield::order::{Ideal, Order};
use crate::quadfield::unit::fundamental_unit;
use crate::quadfield::BIndex;

/// How `(Z_K/m)^*` is handled.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UnitGroupMethod {
    /// Enumerate when `N(m) <= 10^6`, otherwise use the logarithm on `1 + rad`.
    Auto,
    Enumerate,
    Filtration,
}

pub const ENUMERATION_LIMIT: i128 = 1_000_000;

/// The modulus `b* ∩ K` for the given `b`.
pub fn modulus(o: &Order, ell: u64, b: BIndex) -> Result<Ideal> {
    let l = ell as i128;
    let ramified = o.d % ell as i64 == 0;
    let r = ramified_root(o, ell);
    let m = match (ramified, b) {
        (_, BIndex::Full) => Ideal::unit(),
        (false, BIndex::One) => Ideal { a: l * l, b: 0, c: l * l },
        (false, BIndex::Ell) => Ideal { a: l, b: 0, c: l },
        (false, BIndex::Sqrt) => return Err(Error::input("b = sqrt is only legal when ell | D")),
        // p = (ell, w - r); p^2 = ell Z_K; p^3 = ell p
        (true, BIndex::One) => Ideal::from_generators(&[(l * l, 0), (-r * l, l)]),
        (true, BIndex::Sqrt) => Ideal { a: l, b: 0, c: l },
        (true, BIndex::Ell) => Ideal::from_generators(&[(l, 0), (-r, 1)]),
    };
    Ok(m)
}

/// `r` with `w - r` in the prime above a ramified `ell`.
fn ramified_root(o: &Order, ell: u64) -> i128 {
    let l = ell as i128;
    // double root of x^2 - delta x - n: r = delta / 2
    (o.delta as i128 * mod_inv(2, l).unwrap_or(0)).rem_euclid(l)
}

/// Global units modulo torsion of order prime to ell, as order coordinates.
fn unit_generators(d: i64) -> Result<Vec<(BigInt, BigInt)>> {
    let mut out = vec![(BigInt::from(-1), BigInt::zero())];
    if d == -4 || d == -3 {
        out.push((BigInt::zero(), BigInt::one())); // w is a root of unity
    }
    if d > 0 {
        out.push(fundamental_unit(d)?.order_coords(d));
    }
    Ok(out)
}

/// Generators `α` with `(α) = 𝔭^e` for prime ideals 𝔭 whose classes span `Cl[ell]`.
fn torsion_generators(cg: &ClassGroup, ell: u64) -> Result<Vec<(BigInt, BigInt)>> {
    let d = cg.d;
    let o = *cg.order();
    let torsion = cg.torsion(ell);
    let id = cg.identity();
    // Subgroup spanned by the classes chosen so far.
    let mut span: HashSet<usize> = HashSet::from([id]);
    let mut out = Vec::new();
    for p in primes_up_to(1_000_000).into_iter().skip(1) {
        if span.len() == torsion.len() {
            break;
        }
        if p == ell || d.rem_euclid(p as i64) == 0 || kronecker_unchecked(d, p as i64) != 1 {
            continue;
        }
        let f = cg.prime_form(p).expect("split prime");
        let cls = cg.class_of_form(f);
        if span.contains(&cls) || cg.pow(cls, ell) != id {
            continue;
        }
        let mut grown = span.clone();
        let mut cur: Vec<usize> = span.iter().copied().collect();
        for _ in 1..ell {
            cur = cur.iter().map(|&x| cg.mul(x, cls)).collect();
            grown.extend(cur.iter().copied());
        }
        span = grown;
        out.push(prime_power_generator(d, &o, p, f.1, ell)?);
    }
    let remaining = torsion.len() - span.len();
    if remaining != 0 {
        return Err(Error::resource("no split prime found below 10^6 in some ell-torsion class"));
    }
    Ok(out)
}

/// Generator of `𝔭^ell` where `𝔭 = (p, (-b0 + sqrt D)/2)`.
fn prime_power_generator(d: i64, o: &Order, p: u64, b0: i64, ell: u64) -> Result<(BigInt, BigInt)> {
    let pb = BigInt::from(p);
    let modulus = pb.pow(ell as u32);
    let dd = BigInt::from(d);
    // Hensel lift of b0 to a root of x^2 = D mod p^ell.
    let mut x = BigInt::from(b0).mod_floor(&pb);
    let mut pk = pb.clone();
    for _ in 1..ell {
        pk *= &pb;
        let fx = (&x * &x - &dd).mod_floor(&pk);
        let dfx: BigInt = (&x * BigInt::from(2)).mod_floor(&pk);
        let inv = mod_inv_big(&dfx, &pk).ok_or_else(|| Error::invariant("Hensel lift failed"))?;
        x = (&x - fx * inv).mod_floor(&pk);
    }
    if (&x - &dd).is_odd() {
        x += &modulus;
    }
    let four = BigInt::from(4);
    debug_assert!((&x * &x - &dd).mod_floor(&(&four * &modulus)).is_zero());
    let c = (&x * &x - &dd) / (&four * &modulus);
    let form = BigForm {
        a: modulus.clone(),
        b: x.clone(),
        c,
    };
    let (u, v) = form.represent_unit(d)?;
    // α = u·A + (-v)(-B + sqrt D)/2 has norm ±A.
    let w = -v;
    let half = o.from_half_sqrt(&(-&x * &w), &w);
    let alpha = (&u * &modulus + &half.0, half.1);
    let n = o.norm_big(&alpha);
    if n.abs() != modulus {
        return Err(Error::invariant(format!("generator norm {n} != ±{p}^{ell}")));
    }
    Ok(alpha)
}

fn mod_inv_big(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let g = a.extended_gcd(m);
    if !g.gcd.is_one() {
        return None;
    }
    Some(g.x.mod_floor(m))
}

/// Everything needed to evaluate ray ranks for one `(D, ell)`.
pub struct RayData {
    pub order: Order,
    pub ell: u64,
    pub class_rank: u32,
    units: Vec<(BigInt, BigInt)>,
    alphas: Vec<(BigInt, BigInt)>,
}

impl RayData {
    pub fn new(cg: &ClassGroup, ell: u64) -> Result<Self> {
        Ok(RayData {
            order: *cg.order(),
            ell,
            class_rank: cg.ell_rank(ell),
            units: unit_generators(cg.d)?,
            alphas: torsion_generators(cg, ell)?,
        })
    }

    pub fn rank(&self, b: BIndex, method: UnitGroupMethod) -> Result<u32> {
        let m = modulus(&self.order, self.ell, b)?;
        let (_, quotient) = self.quotient_dim(&m, method)?;
        Ok(self.class_rank + quotient)
    }

    /// Whether the last unit generator (ε for D > 0) lies in `G^ell` for modulus `b`.
    pub fn unit_is_ell_power(&self, b: BIndex) -> Result<bool> {
        let m = modulus(&self.order, self.ell, b)?;
        let Some(eps) = self.units.last() else { return Ok(true) };
        let g = [m.reduce_big(eps)];
        let (z, q) = if m.norm() <= ENUMERATION_LIMIT {
            enumerate_quotient(&self.order, self.ell, &m, &g)?
        } else {
            filtration_quotient(&self.order, self.ell, &m, &g)?
        };
        Ok(z == q)
    }

    /// `(dim G/G^ell, dim G/<G^ell, units, α>)` for `G = (Z_K/m)^*`.
    pub fn quotient_dim(&self, m: &Ideal, method: UnitGroupMethod) -> Result<(u32, u32)> {
        let use_enum = match method {
            UnitGroupMethod::Enumerate => true,
            UnitGroupMethod::Filtration => false,
            UnitGroupMethod::Auto => m.norm() <= ENUMERATION_LIMIT,
        };
        let ramified = self.order.d % self.ell as i64 == 0;
        if !use_enum && ramified && self.ell == 3 {
            return Err(Error::input("logarithm route needs ell >= 5 at a ramified prime"));
        }
        let gens: Vec<(i128, i128)> = self.units.iter().chain(self.alphas.iter()).map(|g| m.reduce_big(g)).collect();
        if use_enum {
            enumerate_quotient(&self.order, self.ell, m, &gens)
        } else {
            filtration_quotient(&self.order, self.ell, m, &gens)
        }
    }
}

fn enumerate_quotient(o: &Order, ell: u64, m: &Ideal, gens: &[(i128, i128)]) -> Result<(u32, u32)> {
    if m.norm() > ENUMERATION_LIMIT * 10 {
        return Err(Error::resource("modulus too large to enumerate"));
    }
    if m.norm() == 1 {
        return Ok((0, 0));
    }
    let l = ell as i128;
    let mut elems = Vec::new();
    for x in 0..m.a {
        for y in 0..m.c {
            if o.norm((x, y)).rem_euclid(l) != 0 {
                elems.push((x, y));
            }
        }
    }
    let mul = |a: (i128, i128), b: (i128, i128)| m.reduce(o.mul(a, b));
    let pow = |a: (i128, i128), mut e: u64| {
        let mut acc = m.reduce((1, 0));
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul(acc, base);
            }
            base = mul(base, base);
            e >>= 1;
        }
        acc
    };
    let total = elems.len();
    let powers: HashSet<(i128, i128)> = elems.iter().map(|&g| pow(g, ell)).collect();
    let z = log_ell(total / powers.len(), ell)?;
    let mut h = powers;
    for &g in gens {
        if h.contains(&g) {
            continue;
        }
        let mut next = h.clone();
        let mut cur: Vec<(i128, i128)> = h.iter().copied().collect();
        for _ in 1..ell {
            cur = cur.iter().map(|&x| mul(x, g)).collect();
            next.extend(cur.iter().copied());
        }
        h = next;
    }
    let q = log_ell(total / h.len(), ell)?;
    Ok((z, q))
}

fn log_ell(mut n: usize, ell: u64) -> Result<u32> {
    let mut r = 0;
    while n > 1 {
        if !n.is_multiple_of(ell as usize) {
            return Err(Error::invariant("quotient order is not a power of ell"));
        }
        n /= ell as usize;
        r += 1;
    }
    Ok(r)
}

fn filtration_quotient(o: &Order, ell: u64, m: &Ideal, gens: &[(i128, i128)]) -> Result<(u32, u32)> {
    let l = ell as i128;
    let l2 = l * l;
    let kr = kronecker_unchecked(o.d, ell as i64);
    let n0: u64 = match kr {
        1 => (ell - 1) * (ell - 1),
        -1 => ell * ell - 1,
        _ => ell - 1,
    };
    let norm_m = m.norm();
    // dim of (1 + rad)/(1 + m) modulo ell-th powers
    let z: u32 = if kr == 0 {
        if norm_m == l2 * l {
            2
        } else if norm_m == l2 {
            1
        } else {
            0
        }
    } else if norm_m == l2 * l2 {
        2
    } else {
        0
    };
    if z == 0 {
        return Ok((0, 0));
    }
    let r = ramified_root(o, ell);
    let modl2 = Ideal { a: l2, b: 0, c: l2 };
    let pow = |a: (i128, i128), mut e: u64| {
        let mut acc = (1i128, 0i128);
        let mut base = modl2.reduce(a);
        while e > 0 {
            if e & 1 == 1 {
                acc = modl2.reduce(o.mul(acc, base));
            }
            base = modl2.reduce(o.mul(base, base));
            e >>= 1;
        }
        acc
    };
    let inv2 = mod_inv(2, l2).unwrap();
    let mut rows: Vec<Vec<i128>> = Vec::new();
    for &g in gens {
        let t = pow(g, n0);
        let x = modl2.reduce((t.0 - 1, t.1));
        // log(1 + x) = x - x^2/2 modulo p^3 (ell >= 5) and modulo ell^2 when unramified
        let x2 = modl2.reduce(o.mul(x, x));
        let lg = modl2.reduce((x.0 - x2.0 * inv2, x.1 - x2.1 * inv2));
        let coords = if kr != 0 {
            debug_assert!(lg.0 % l == 0 && lg.1 % l == 0);
            vec![(lg.0 / l).rem_euclid(l), (lg.1 / l).rem_euclid(l)]
        } else {
            // lg = A ell + B (w - r)
            let bcoef = lg.1;
            let acoef = (lg.0 + r * bcoef).div_euclid(l);
            debug_assert_eq!((lg.0 + r * bcoef).rem_euclid(l), 0);
            if z == 2 {
                vec![acoef.rem_euclid(l), bcoef.rem_euclid(l)]
            } else {
                vec![bcoef.rem_euclid(l)]
            }
        };
        rows.push(coords);
    }
    let rank = rank_mod(rows, l);
    Ok((z, z - rank))
}

/// Rank of a matrix over F_ell.
fn rank_mod(mut rows: Vec<Vec<i128>>, l: i128) -> u32 {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0usize;
    for col in 0..ncols {
        let Some(piv) = (rank..rows.len()).find(|&i| rows[i][col] % l != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = mod_inv(rows[rank][col], l).unwrap();
        let pivot = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && row[col] % l != 0 {
                let f = row[col] * inv % l;
                for (x, p) in row.iter_mut().zip(&pivot) {
                    *x = (*x - f * p).rem_euclid(l);
                }
            }
        }
        rank += 1;
    }
    rank as u32
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadfield::is_fundamental;

    fn ranks(d: i64, ell: u64, method: UnitGroupMethod) -> Vec<(BIndex, u32, u32)> {
        let cg = ClassGroup::new(d).unwrap();
        let data = RayData::new(&cg, ell).unwrap();
        let mut out = vec![];
        for b in BIndex::ALL {
            let Ok(m) = modulus(&data.order, ell, b) else { continue };
            let (z, q) = data.quotient_dim(&m, method).unwrap();
            out.push((b, z, q));
        }
        out
    }

    #[test]
    fn z_column_is_2_1_0_0() {
        for (d, ell) in [(13i64, 5u64), (-4, 5), (-287, 7), (5, 5), (-15, 5), (-23, 7), (40, 7)] {
            let z: Vec<u32> = ranks(d, ell, UnitGroupMethod::Enumerate).iter().map(|r| r.1).collect();
            let expect = if d % ell as i64 == 0 { vec![2, 1, 0, 0] } else { vec![2, 0, 0] };
            assert_eq!(z, expect, "D={d} ell={ell}");
        }
    }

    #[test]
    fn enumeration_and_logarithm_agree() {
        for ell in [5u64, 7] {
            for d in -400i64..400 {
                if d == 0 || !is_fundamental(d).unwrap() {
                    continue;
                }
                let a = ranks(d, ell, UnitGroupMethod::Enumerate);
                let b = ranks(d, ell, UnitGroupMethod::Filtration);
                assert_eq!(a, b, "D={d} ell={ell}");
            }
        }
    }

    #[test]
    fn generators_of_ell_torsion_powers() {
        // Q(sqrt -47) has h = 5; Q(sqrt -71) has h = 7.
        for (d, ell) in [(-47i64, 5u64), (-71, 7), (-23, 3)] {
            let cg = ClassGroup::new(d).unwrap();
            let data = RayData::new(&cg, ell).unwrap();
            assert_eq!(data.alphas.len(), 1);
        }
    }
}
