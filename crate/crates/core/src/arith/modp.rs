//! Polynomials over F_p and their factorization.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::primes::mod_inv;

/// Polynomial over F_p, lowest degree first, no trailing zeros. Requires `p < 2^32`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FpPoly {
    p: u64,
    c: Vec<u64>,
}

/// Degrees and multiplicities of the irreducible factors, sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FactorShape {
    pub parts: Vec<(usize, usize)>,
}

impl FactorShape {
    pub fn total_degree(&self) -> usize {
        self.parts.iter().map(|(d, m)| d * m).sum()
    }
}

impl FpPoly {
    pub fn new(p: u64, mut c: Vec<u64>) -> Self {
        assert!((2..(1 << 32)).contains(&p), "modulus out of range");
        for x in c.iter_mut() {
            *x %= p;
        }
        while c.last() == Some(&0) {
            c.pop();
        }
        FpPoly { p, c }
    }

    pub fn one(p: u64) -> Self {
        Self::new(p, vec![1])
    }

    pub fn x(p: u64) -> Self {
        Self::new(p, vec![0, 1])
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c == [1]
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn deg(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    fn degree_or_zero(&self) -> usize {
        self.deg().unwrap_or(0)
    }

    pub fn eval(&self, x: u64) -> u64 {
        let p = self.p;
        self.c.iter().rev().fold(0, |acc, &a| (acc * x + a) % p)
    }

    pub fn monic(&self) -> Self {
        match self.c.last() {
            None => self.clone(),
            Some(&lc) => {
                let inv = mod_inv(lc as i128, self.p as i128).unwrap() as u64;
                Self::new(self.p, self.c.iter().map(|&a| a * inv % self.p).collect())
            }
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let g = |v: &Vec<u64>, i: usize| v.get(i).copied().unwrap_or(0);
        Self::new(self.p, (0..n).map(|i| (g(&self.c, i) + g(&o.c, i)) % self.p).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let g = |v: &Vec<u64>, i: usize| v.get(i).copied().unwrap_or(0);
        Self::new(self.p, (0..n).map(|i| (g(&self.c, i) + self.p - g(&o.c, i)) % self.p).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::new(self.p, vec![]);
        }
        let p = self.p;
        let mut out = vec![0u64; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                out[i + j] = (out[i + j] + a * b) % p;
            }
        }
        Self::new(p, out)
    }

    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let p = self.p;
        let dd = d.deg().expect("division by zero polynomial");
        let inv = mod_inv(d.c[dd] as i128, p as i128).unwrap() as u64;
        let mut r = self.c.clone();
        if r.len() <= dd {
            return (Self::new(p, vec![]), self.clone());
        }
        let mut q = vec![0u64; r.len() - dd];
        for i in (dd..r.len()).rev() {
            let coef = r[i] * inv % p;
            if coef == 0 {
                continue;
            }
            q[i - dd] = coef;
            for j in 0..=dd {
                let t = coef * d.c[j] % p;
                r[i - dd + j] = (r[i - dd + j] + p - t) % p;
            }
        }
        r.truncate(dd);
        (Self::new(p, q), Self::new(p, r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.div_rem(d).1
    }

    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        let p = self.p;
        Self::new(p, self.c.iter().enumerate().skip(1).map(|(i, &a)| a * (i as u64 % p) % p).collect())
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, mut e: u128, m: &Self) -> Self {
        let mut base = self.rem(m);
        let mut acc = Self::one(self.p).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e >>= 1;
        }
        acc
    }

    /// For `f = g(x^p)` return `g` (the p-th root over F_p).
    fn pth_root(&self) -> Self {
        let p = self.p as usize;
        Self::new(self.p, self.c.iter().step_by(p).copied().collect())
    }

    /// Squarefree decomposition of a monic polynomial: `(factor, multiplicity)`.
    pub fn squarefree(&self) -> Vec<(FpPoly, usize)> {
        let mut out = Vec::new();
        self.squarefree_into(1, &mut out);
        out
    }

    fn squarefree_into(&self, scale: usize, out: &mut Vec<(FpPoly, usize)>) {
        let f = self.monic();
        if f.degree_or_zero() == 0 {
            return;
        }
        let mut c = f.gcd(&f.derivative());
        let mut w = f.div_rem(&c).0;
        let mut i = 1;
        while !w.is_one() {
            let y = w.gcd(&c);
            let fac = w.div_rem(&y).0;
            if !fac.is_one() {
                out.push((fac.monic(), i * scale));
            }
            w = y;
            c = c.div_rem(&w).0;
            i += 1;
        }
        if !c.is_one() {
            c.pth_root().squarefree_into(scale * self.p as usize, out);
        }
    }

    /// Distinct-degree factorization of a monic squarefree polynomial.
    pub fn distinct_degree(&self) -> Vec<(FpPoly, usize)> {
        let p = self.p;
        let mut out = Vec::new();
        let mut f = self.monic();
        let x = Self::x(p);
        let mut h = x.rem(&f);
        let mut i = 1;
        while f.degree_or_zero() >= 2 * i {
            h = h.pow_mod(p as u128, &f);
            let g = f.gcd(&h.sub(&x));
            if !g.is_one() {
                out.push((g.clone(), i));
                f = f.div_rem(&g).0;
                h = h.rem(&f);
            }
            i += 1;
        }
        if f.degree_or_zero() > 0 {
            let d = f.degree_or_zero();
            out.push((f, d));
        }
        out
    }

    /// Splits a monic squarefree product of irreducibles of degree `d` (Cantor-Zassenhaus).
    pub fn equal_degree(&self, d: usize, rng: &mut ChaCha8Rng) -> Vec<FpPoly> {
        let p = self.p;
        let n = self.degree_or_zero();
        if n == d {
            return vec![self.monic()];
        }
        loop {
            let a = Self::new(p, (0..n).map(|_| rng.gen_range(0..p)).collect());
            if a.deg().unwrap_or(0) == 0 {
                continue;
            }
            let b = if p == 2 {
                // Trace map a + a^2 + ... + a^(2^(nd-1)) restricted to degree-d pieces.
                let mut t = a.rem(self);
                let mut acc = t.clone();
                for _ in 1..d {
                    t = t.mul(&t).rem(self);
                    acc = acc.add(&t);
                }
                acc
            } else {
                // a^((p^d - 1)/2) = (a^(1 + p + ... + p^(d-1)))^((p-1)/2)
                let mut frob = a.rem(self);
                let mut norm = frob.clone();
                for _ in 1..d {
                    frob = frob.pow_mod(p as u128, self);
                    norm = norm.mul(&frob).rem(self);
                }
                norm.pow_mod(((p - 1) / 2) as u128, self).sub(&Self::one(p))
            };
            let g = self.gcd(&b);
            let gd = g.degree_or_zero();
            if gd > 0 && gd < n {
                let (q, _) = self.div_rem(&g);
                let mut out = g.equal_degree(d, rng);
                out.extend(q.monic().equal_degree(d, rng));
                return out;
            }
        }
    }

    /// Complete factorization into monic irreducibles with multiplicities, sorted.
    pub fn factor(&self) -> Vec<(FpPoly, usize)> {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ self.p);
        let mut out = Vec::new();
        for (sf, m) in self.squarefree() {
            for (g, d) in sf.distinct_degree() {
                for h in g.equal_degree(d, &mut rng) {
                    out.push((h, m));
                }
            }
        }
        out.sort_by(|a, b| (a.0.c.len(), &a.0.c, a.1).cmp(&(b.0.c.len(), &b.0.c, b.1)));
        out
    }

    /// Factor degrees and multiplicities without splitting equal-degree products.
    pub fn shape(&self) -> FactorShape {
        let mut parts = Vec::new();
        for (sf, m) in self.squarefree() {
            for (g, d) in sf.distinct_degree() {
                let count = g.degree_or_zero() / d;
                parts.extend(std::iter::repeat_n((d, m), count));
            }
        }
        parts.sort();
        FactorShape { parts }
    }

    /// Roots by trying every residue; the deterministic fallback for small p.
    pub fn roots_exhaustive(&self) -> Vec<u64> {
        (0..self.p).filter(|&x| self.eval(x) == 0).collect()
    }

    /// Multiplicity of `x - r` as a factor.
    pub fn root_multiplicity(&self, r: u64) -> usize {
        let lin = Self::new(self.p, vec![(self.p - r % self.p) % self.p, 1]);
        let mut f = self.clone();
        let mut m = 0;
        while !f.is_zero() {
            let (q, rem) = f.div_rem(&lin);
            if !rem.is_zero() {
                break;
            }
            f = q;
            m += 1;
        }
        m
    }
}
