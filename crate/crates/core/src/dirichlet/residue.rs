use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::arith::is_prime;
use crate::arith::kronecker::kronecker_unchecked;
use crate::arith::primes::{primes_up_to, primitive_root};
use crate::error::{Error, Result};
use crate::quadfield::{ell_star, is_fundamental};
use crate::splitting::in_set_d;

/// Leading constant of `sum_{n <= Y} a_n ~ C Y (log Y)^{m-1}`.
#[derive(Clone, Debug, Serialize)]
pub struct ResidueConstant {
    pub ell: u64,
    pub d: i64,
    /// `C`.
    pub value: f64,
    /// Leading Laurent coefficient of the trivial Euler product at `s = 1`.
    pub residue: f64,
    pub prefactor: f64,
    pub pole_order: u32,
    pub prime_bound: u64,
    /// Estimated correct significant digits.
    pub digits: u32,
}

/// A primitive Dirichlet character given by its table mod `q`.
struct Character {
    q: u64,
    vals: Vec<Complex64>,
}

impl Character {
    fn at(&self, n: u64) -> Complex64 {
        self.vals[(n % self.q) as usize]
    }

    fn is_even(&self) -> bool {
        (self.at(self.q - 1) - Complex64::new(1.0, 0.0)).norm() < 1e-9
    }

    /// `L(1, ψ)` through the Gauss sum.
    fn l_at_one(&self) -> Complex64 {
        let q = self.q as f64;
        let z = |a: u64| Complex64::from_polar(1.0, 2.0 * PI * a as f64 / q);
        let tau: Complex64 = (1..self.q).map(|a| self.at(a) * z(a)).sum();
        if self.is_even() {
            let s: Complex64 = (1..self.q).map(|a| self.at(a).conj() * (2.0 * (PI * a as f64 / q).sin()).ln()).sum();
            -tau / q * s
        } else {
            let s: Complex64 = (1..self.q).map(|a| self.at(a).conj() * a as f64).sum();
            Complex64::new(0.0, PI) * tau / (q * q) * s
        }
    }
}

/// `ω^k · χ_{D'}` as a primitive character (`D' = 1` for none).
fn make_character(ell: u64, k: u64, dprime: i64) -> Character {
    let lq = if !k.is_multiple_of(ell - 1) { ell } else { 1 };
    let dq = dprime.unsigned_abs();
    let q = lq * dq;
    let mut dlog = vec![0u64; ell as usize];
    if lq > 1 {
        let g = primitive_root(ell);
        let mut x = 1u64;
        for i in 0..ell - 1 {
            dlog[x as usize] = i;
            x = x * g % ell;
        }
    }
    let vals = (0..q)
        .map(|a| {
            let w = if lq == 1 {
                Complex64::new(1.0, 0.0)
            } else if a % ell == 0 {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::from_polar(1.0, 2.0 * PI * ((k * dlog[(a % ell) as usize]) % (ell - 1)) as f64 / (ell - 1) as f64)
            };
            let c = if dq == 1 { 1 } else { kronecker_unchecked(dprime, a as i64) };
            w * c as f64
        })
        .collect();
    Character { q, vals }
}

/// The characters `ψ_j = ω^j χ_D^{j mod 2}`, `j = 0..ell-2`, made primitive.
fn characters(ell: u64, d: i64) -> Vec<Character> {
    let ldiv = d % ell as i64 == 0;
    (0..ell - 1)
        .map(|j| {
            if j % 2 == 0 {
                make_character(ell, j, 1)
            } else if ldiv {
                make_character(ell, j + (ell - 1) / 2, d / ell_star(ell))
            } else {
                make_character(ell, j, d)
            }
        })
        .collect()
}

fn prefactor(ell: u64, d: i64) -> Result<f64> {
    let l = ell as f64;
    let r2 = if d < 0 { 1 } else { 0 };
    let ldiv = d % ell as i64 == 0;
    if ell == 3 && ldiv {
        if d == -3 {
            return Ok(7.0 / 18.0);
        }
        return Err(Error::input("ell = 3 with 3 | D is supported only for D = -3"));
    }
    let c1 = 1.0 / ((l - 1.0) * l.powi(1 - r2));
    let c2 = if ldiv { 2.0 - 1.0 / l } else { (l * l + l - 1.0) / (l * l) };
    Ok(c1 * c2)
}

const PRIME_BOUNDS: [u64; 4] = [10_000, 100_000, 1_000_000, 10_000_000];

/// `C` for the resolvent `Q(sqrt d)` to `digits` significant digits.
pub fn residue_constant(ell: u64, d: i64, digits: u32) -> Result<ResidueConstant> {
    if ell < 3 || !is_prime(ell) {
        return Err(Error::input(format!("ell = {ell} must be an odd prime")));
    }
    if !is_fundamental(d)? {
        return Err(Error::input(format!("{d} is not a fundamental discriminant")));
    }
    let pre = prefactor(ell, d)?;
    let chars = characters(ell, d);
    let pole_order = chars.iter().filter(|c| c.q == 1).count() as u32;
    let lprod: Complex64 = chars.iter().filter(|c| c.q > 1).map(|c| c.l_at_one()).product();
    // Local factors are 1 + O(c/p^2); the tail past P is about c/(P log P).
    let c = 2.0 * ((ell - 1) as f64).powi(2);
    let target = 10f64.powi(-(digits as i32));
    let bound = PRIME_BOUNDS
        .into_iter()
        .find(|&p| c / (p as f64 * (p as f64).ln()) < target * 0.1)
        .ok_or_else(|| Error::resource(format!("{digits} digits need more than 10^7 primes")))?;
    let w = (ell - 1) as f64;
    let mut log_corr = 0.0f64;
    for p in primes_up_to(bound) {
        let pf = p as f64;
        let mut f = Complex64::new(if in_set_d(p, d, ell) { (1.0 + w / pf).ln() } else { 0.0 }, 0.0);
        for ch in &chars {
            f += (Complex64::new(1.0, 0.0) - ch.at(p) / pf).ln();
        }
        log_corr += f.re;
    }
    if lprod.im.abs() > 1e-8 * lprod.norm().max(1.0) {
        return Err(Error::invariant(format!("product of L-values is not real: {lprod}")));
    }
    let residue = lprod.re * log_corr.exp();
    let tail = c / (bound as f64 * (bound as f64).ln());
    Ok(ResidueConstant {
        ell,
        d,
        value: pre * residue,
        residue,
        prefactor: pre,
        pole_order,
        prime_bound: bound,
        digits: (-tail.log10()).floor().max(0.0) as u32,
    })
}
