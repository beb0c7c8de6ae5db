//! Binary quadratic forms `(a, b, c)` of discriminant `b^2 - 4ac = D` and the class group they carry.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::kronecker::kronecker_unchecked;
use crate::arith::primes::{isqrt, primes_up_to, sqrt_mod};
use crate::error::{Error, Result};
use crate::quadfield::order::{Ideal, Order};

pub type Form = (i64, i64, i64);

fn c_of(d: i64, a: i64, b: i64) -> i64 {
    let num = b as i128 * b as i128 - d as i128;
    debug_assert_eq!(num.rem_euclid(4 * a as i128), 0);
    (num / (4 * a as i128)) as i64
}

/// Reduced positive definite form equivalent to `f` (`D < 0`, `a > 0`).
pub fn reduce_definite(f: Form) -> Form {
    let (mut a, mut b, mut c) = f;
    let d = b * b - 4 * a * c;
    loop {
        if b > a || b <= -a {
            // b <- b - 2a q with -a < b <= a
            let two_a = 2 * a;
            let r = (b + a - 1).rem_euclid(two_a) - (a - 1);
            b = r;
            c = c_of(d, a, b);
        }
        if a > c {
            (a, b, c) = (c, -b, a);
            continue;
        }
        if a == c && b < 0 {
            b = -b;
        }
        break;
    }
    (a, b, c)
}

/// One reduction step for indefinite forms: `(a,b,c) -> (c, b', ...)`, `b' ≡ -b (mod 2c)`.
pub fn rho(f: Form, d: i64, s: i64) -> Form {
    let (_, b, c) = f;
    let ac = c.abs();
    let m = 2 * ac;
    let bp = if ac as i128 > s as i128 {
        // -|c| < b' <= |c|
        let r = (-b).rem_euclid(m);
        if r > ac {
            r - m
        } else {
            r
        }
    } else {
        // largest b' ≡ -b (mod 2|c|) with b' <= s
        s - (s + b).rem_euclid(m)
    };
    (c, bp, c_of(d, c, bp))
}

pub fn is_reduced_indefinite(f: Form, s: i64) -> bool {
    let (a, b, _) = f;
    b > 0 && b <= s && 2 * a.abs() + b > s && 2 * a.abs() - b <= s
}

/// All reduced forms of discriminant `d`.
pub fn reduced_forms(d: i64) -> Vec<Form> {
    let mut out = Vec::new();
    if d < 0 {
        let amax = isqrt((-d / 3) as u128) as i64;
        for a in 1..=amax {
            for b in -a + 1..=a {
                if (b - d).rem_euclid(2) != 0 {
                    continue;
                }
                let num = b * b - d;
                if num % (4 * a) != 0 {
                    continue;
                }
                let c = num / (4 * a);
                if c < a || (c == a && b < 0) {
                    continue;
                }
                if a.gcd(&b).gcd(&c) == 1 {
                    out.push((a, b, c));
                }
            }
        }
    } else {
        let s = isqrt(d as u128) as i64;
        for b in 1..=s {
            if (b - d).rem_euclid(2) != 0 {
                continue;
            }
            let n = (d - b * b) / 4; // = -ac > 0
            for a in 1..=n {
                if n % a != 0 {
                    continue;
                }
                for sa in [a, -a] {
                    let f = (sa, b, -n / sa);
                    if is_reduced_indefinite(f, s) && sa.gcd(&b).gcd(&f.2) == 1 {
                        out.push(f);
                    }
                }
            }
        }
    }
    out
}

/// Ideal `(a, (-b + sqrt D)/2)` attached to a form with `a > 0`.
pub fn form_to_ideal(f: Form, o: &Order) -> Ideal {
    let (a, b, _) = f;
    debug_assert!(a > 0);
    let x = (-b - o.delta) / 2;
    Ideal::from_generators(&[(a as i128, 0), (x as i128, 1)])
}

/// Form of a primitive ideal (`c == 1`).
pub fn ideal_to_form(i: &Ideal, o: &Order) -> Form {
    debug_assert_eq!(i.c, 1);
    let a = i.a as i64;
    let b = -(2 * i.b as i64 + o.delta);
    // Shift b into (-a, a] to keep numbers small.
    let two_a = 2 * a;
    let b = (b + a - 1).rem_euclid(two_a) - (a - 1);
    (a, b, c_of(o.d, a, b))
}

/// Class group of the maximal order (wide sense for `D > 0`).
#[derive(Clone, Debug)]
pub struct ClassGroup {
    pub d: i64,
    order: Order,
    /// Representative with `a > 0` for each class.
    reps: Vec<Form>,
    /// Every reduced form mapped to its class index.
    index: HashMap<Form, usize>,
    /// Number of reduced forms (D < 0) or of rho-cycles (D > 0).
    pub narrow_h: usize,
    sqrt_floor: i64,
}

impl ClassGroup {
    pub fn new(d: i64) -> Result<Self> {
        let order = Order::new(d);
        let forms = reduced_forms(d);
        let mut index = HashMap::new();
        let mut reps = Vec::new();
        let s = if d > 0 { isqrt(d as u128) as i64 } else { 0 };
        let narrow_h;
        if d < 0 {
            for f in forms {
                index.insert(f, reps.len());
                reps.push(f);
            }
            narrow_h = reps.len();
        } else {
            // rho-cycles
            let mut cycle_of: HashMap<Form, usize> = HashMap::new();
            let mut cycles: Vec<Vec<Form>> = Vec::new();
            for &f in &forms {
                if cycle_of.contains_key(&f) {
                    continue;
                }
                let id = cycles.len();
                let mut cyc = vec![];
                let mut g = f;
                loop {
                    cycle_of.insert(g, id);
                    cyc.push(g);
                    g = rho(g, d, s);
                    if g == f {
                        break;
                    }
                    if cyc.len() > forms.len() {
                        return Err(Error::invariant(format!("rho cycle does not close for D={d}")));
                    }
                }
                cycles.push(cyc);
            }
            narrow_h = cycles.len();
            // A wide class merges the cycles of (a,b,c) and (-a,b,-c).
            let mut class_of_cycle = vec![usize::MAX; cycles.len()];
            for (id, cyc) in cycles.iter().enumerate() {
                if class_of_cycle[id] != usize::MAX {
                    continue;
                }
                let (a, b, c) = cyc[0];
                let partner = cycle_of[&(-a, b, -c)];
                let cls = reps.len();
                class_of_cycle[id] = cls;
                class_of_cycle[partner] = cls;
                let rep = cyc
                    .iter()
                    .chain(cycles[partner].iter())
                    .copied()
                    .find(|f| f.0 > 0)
                    .expect("a wide class has a form with a > 0");
                reps.push(rep);
            }
            for (f, id) in cycle_of {
                index.insert(f, class_of_cycle[id]);
            }
        }
        Ok(ClassGroup {
            d,
            order,
            reps,
            index,
            narrow_h,
            sqrt_floor: s,
        })
    }

    pub fn order(&self) -> &Order {
        &self.order
    }

    pub fn h(&self) -> usize {
        self.reps.len()
    }

    pub fn identity(&self) -> usize {
        self.class_of_form(self.principal_form())
    }

    pub fn principal_form(&self) -> Form {
        let delta = self.order.delta;
        (1, delta, c_of(self.d, 1, delta))
    }

    pub fn rep(&self, cls: usize) -> Form {
        self.reps[cls]
    }

    /// Class of an arbitrary primitive form of this discriminant.
    pub fn class_of_form(&self, f: Form) -> usize {
        let r = if self.d < 0 {
            reduce_definite(f)
        } else {
            let mut g = f;
            let mut steps = 0;
            while !is_reduced_indefinite(g, self.sqrt_floor) {
                g = rho(g, self.d, self.sqrt_floor);
                steps += 1;
                assert!(steps < 100_000, "indefinite reduction did not terminate");
            }
            g
        };
        self.index[&r]
    }

    pub fn class_of_ideal(&self, i: &Ideal) -> usize {
        let (_, prim) = i.primitive_part();
        self.class_of_form(ideal_to_form(&prim, &self.order))
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        let o = &self.order;
        let i = form_to_ideal(self.reps[x], o);
        let j = form_to_ideal(self.reps[y], o);
        self.class_of_ideal(&i.mul(&j, o))
    }

    pub fn pow(&self, x: usize, e: u64) -> usize {
        let mut acc = self.identity();
        for _ in 0..e {
            acc = self.mul(acc, x);
        }
        acc
    }

    /// Classes killed by `ell`.
    pub fn torsion(&self, ell: u64) -> Vec<usize> {
        let id = self.identity();
        (0..self.h()).filter(|&x| self.pow(x, ell) == id).collect()
    }

    /// `dim_{F_ell} Cl[ell]`.
    pub fn ell_rank(&self, ell: u64) -> u32 {
        let n = self.torsion(ell).len() as u64;
        let mut r = 0;
        let mut m = 1;
        while m < n {
            m *= ell;
            r += 1;
        }
        assert_eq!(m, n, "torsion subgroup order is not a power of ell");
        r
    }

    /// Size of the subgroup generated by prime ideals of norm `<= bound`; equals h for a Minkowski-type bound.
    pub fn generated_by_small_primes(&self, bound: u64) -> usize {
        let mut gens = vec![];
        for p in primes_up_to(bound) {
            if let Some(f) = self.prime_form(p) {
                gens.push(self.class_of_form(f));
            }
        }
        let mut seen = vec![false; self.h()];
        let id = self.identity();
        seen[id] = true;
        let mut stack = vec![id];
        while let Some(x) = stack.pop() {
            for &g in &gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen.iter().filter(|&&s| s).count()
    }

    /// A form `(p, b, c)` for a prime `p` that is not inert.
    pub fn prime_form(&self, p: u64) -> Option<Form> {
        let d = self.d;
        if kronecker_unchecked(d, p as i64) == -1 {
            return None;
        }
        let pi = p as i64;
        let b = if p == 2 {
            (0..4).find(|&b| (b * b - d).rem_euclid(8) == 0)?
        } else {
            let r = sqrt_mod(d.rem_euclid(pi) as u64, p)? as i64;
            // match parity with d
            if (r - d).rem_euclid(2) == 0 {
                r
            } else {
                r - pi
            }
        };
        Some((pi, b, c_of(d, pi, b)))
    }
}

/// Forms with big coefficients for principal-generator searches.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigForm {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
}

/// `2x2` integer matrix `[[p, q], [r, s]]` acting by `f(px + qy, rx + sy)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat2 {
    pub p: BigInt,
    pub q: BigInt,
    pub r: BigInt,
    pub s: BigInt,
}

impl Mat2 {
    pub fn identity() -> Self {
        Mat2 {
            p: BigInt::one(),
            q: BigInt::zero(),
            r: BigInt::zero(),
            s: BigInt::one(),
        }
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        Mat2 {
            p: &self.p * &o.p + &self.q * &o.r,
            q: &self.p * &o.q + &self.q * &o.s,
            r: &self.r * &o.p + &self.s * &o.r,
            s: &self.r * &o.q + &self.s * &o.s,
        }
    }

    fn small(p: i64, q: BigInt, r: i64, s: BigInt) -> Mat2 {
        Mat2 {
            p: BigInt::from(p),
            q,
            r: BigInt::from(r),
            s,
        }
    }
}

impl BigForm {
    pub fn disc(&self) -> BigInt {
        &self.b * &self.b - BigInt::from(4) * &self.a * &self.c
    }

    pub fn eval(&self, x: &BigInt, y: &BigInt) -> BigInt {
        &self.a * x * x + &self.b * x * y + &self.c * y * y
    }

    pub fn apply(&self, m: &Mat2) -> BigForm {
        let a = self.eval(&m.p, &m.r);
        let c = self.eval(&m.q, &m.s);
        let b = BigInt::from(2) * &self.a * &m.p * &m.q + &self.b * (&m.p * &m.s + &m.q * &m.r) + BigInt::from(2) * &self.c * &m.r * &m.s;
        BigForm { a, b, c }
    }

    /// Finds `(u, v)` with `f(u, v) = ±1`, if the form is principal.
    pub fn represent_unit(&self, d: i64) -> Result<(BigInt, BigInt)> {
        let dd = BigInt::from(d);
        debug_assert_eq!(self.disc(), dd);
        let mut f = self.clone();
        let mut g = Mat2::identity();
        let two = BigInt::from(2);
        if d < 0 {
            loop {
                // translate b into (-a, a]
                let a = f.a.clone();
                if f.b > a || f.b <= -&a {
                    let two_a = &two * &a;
                    let k = -((&f.b + &a - BigInt::one()).div_floor(&two_a));
                    let t = Mat2::small(1, k, 0, BigInt::one());
                    f = f.apply(&t);
                    g = g.mul(&t);
                }
                if f.a > f.c {
                    let t = Mat2::small(0, -BigInt::one(), 1, BigInt::zero());
                    f = f.apply(&t);
                    g = g.mul(&t);
                    continue;
                }
                break;
            }
            if f.a.is_one() {
                return Ok((g.p, g.r));
            }
            return Err(Error::invariant("form is not principal"));
        }
        let s = BigInt::from(isqrt(d as u128) as i64);
        let reduced = |f: &BigForm| {
            let aa = f.a.abs();
            f.b.is_positive() && f.b <= s && &two * &aa + &f.b > s && &two * &aa - &f.b <= s
        };
        let step = |f: &BigForm| -> (BigForm, Mat2) {
            let ac = f.c.abs();
            let m = &two * &ac;
            let target = if ac > s {
                let r = (-&f.b).mod_floor(&m);
                if r > ac {
                    r - &m
                } else {
                    r
                }
            } else {
                &s - (&s + &f.b).mod_floor(&m)
            };
            // target = -b + 2 c t
            let t = (&target + &f.b) / (&two * &f.c);
            let mat = Mat2::small(0, -BigInt::one(), 1, t);
            (f.apply(&mat), mat)
        };
        let mut steps = 0usize;
        while !reduced(&f) {
            let (nf, m) = step(&f);
            f = nf;
            g = g.mul(&m);
            steps += 1;
            if steps > 1_000_000 {
                return Err(Error::invariant("indefinite reduction did not terminate"));
            }
        }
        let start = f.clone();
        loop {
            if f.a.abs().is_one() {
                return Ok((g.p, g.r));
            }
            let (nf, m) = step(&f);
            f = nf;
            g = g.mul(&m);
            if f == start {
                return Err(Error::invariant("form is not principal"));
            }
        }
    }
}
