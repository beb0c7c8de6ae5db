//! Arithmetic in the maximal order Z[w] of Q(sqrt D), w = (delta + sqrt D)/2.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

/// Maximal order of discriminant `d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Order {
    pub d: i64,
    /// 0 or 1 with `d ≡ delta (mod 4)`.
    pub delta: i64,
    /// `w^2 = delta*w + n`.
    pub n: i64,
}

impl Order {
    pub fn new(d: i64) -> Self {
        let delta = d.rem_euclid(4);
        debug_assert!(delta == 0 || delta == 1);
        Order {
            d,
            delta,
            n: (d - delta) / 4,
        }
    }

    /// `(x1 + y1 w)(x2 + y2 w)`.
    pub fn mul(&self, a: (i128, i128), b: (i128, i128)) -> (i128, i128) {
        let (x1, y1) = a;
        let (x2, y2) = b;
        let yy = y1 * y2;
        (x1 * x2 + yy * self.n as i128, x1 * y2 + x2 * y1 + self.delta as i128 * yy)
    }

    pub fn mul_big(&self, a: &(BigInt, BigInt), b: &(BigInt, BigInt)) -> (BigInt, BigInt) {
        let yy = &a.1 * &b.1;
        (&a.0 * &b.0 + &yy * self.n, &a.0 * &b.1 + &b.0 * &a.1 + &yy * self.delta)
    }

    pub fn norm(&self, a: (i128, i128)) -> i128 {
        let (x, y) = a;
        x * x + self.delta as i128 * x * y - self.n as i128 * y * y
    }

    pub fn norm_big(&self, a: &(BigInt, BigInt)) -> BigInt {
        &a.0 * &a.0 + &a.0 * &a.1 * self.delta - &a.1 * &a.1 * self.n
    }

    /// Coordinates of `(u + v sqrt D)/2` (requires `u ≡ v D (mod 2)`).
    pub fn from_half_sqrt(&self, u: &BigInt, v: &BigInt) -> (BigInt, BigInt) {
        // sqrt D = 2w - delta
        let x = u - v * self.delta;
        debug_assert!(x.is_even());
        (x / 2, v.clone())
    }
}

/// Ideal with Hermite basis `a`, `b + c w` (`c | a`, `c | b`, `0 <= b < a`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Ideal {
    pub a: i128,
    pub b: i128,
    pub c: i128,
}

impl Ideal {
    pub fn unit() -> Self {
        Ideal { a: 1, b: 0, c: 1 }
    }

    pub fn norm(&self) -> i128 {
        self.a * self.c
    }

    /// Lattice generated by arbitrary vectors `(x, y)` meaning `x + y w`.
    pub fn from_generators(vs: &[(i128, i128)]) -> Self {
        let mut vs: Vec<(i128, i128)> = vs.to_vec();
        // Euclid on the w-coordinate until one vector carries it.
        loop {
            let nz: Vec<usize> = (0..vs.len()).filter(|&i| vs[i].1 != 0).collect();
            if nz.len() <= 1 {
                break;
            }
            let piv = *nz.iter().min_by_key(|&&i| vs[i].1.abs()).unwrap();
            let (px, py) = vs[piv];
            for &i in &nz {
                if i != piv {
                    let q = vs[i].1.div_euclid(py);
                    vs[i] = (vs[i].0 - q * px, vs[i].1 - q * py);
                }
            }
        }
        let (mut bx, mut c) = vs.iter().copied().find(|v| v.1 != 0).unwrap_or((0, 0));
        let mut a = 0i128;
        for v in &vs {
            if v.1 == 0 {
                a = a.gcd(&v.0);
            }
        }
        if c < 0 {
            c = -c;
            bx = -bx;
        }
        assert!(a > 0 && c > 0, "degenerate lattice");
        Ideal { a, b: bx.rem_euclid(a), c }
    }

    pub fn mul(&self, other: &Ideal, o: &Order) -> Ideal {
        let g1 = [(self.a, 0), (self.b, self.c)];
        let g2 = [(other.a, 0), (other.b, other.c)];
        let mut gens = Vec::with_capacity(4);
        for x in g1 {
            for y in g2 {
                gens.push(o.mul(x, y));
            }
        }
        Ideal::from_generators(&gens)
    }

    /// Integer content and the primitive part.
    pub fn primitive_part(&self) -> (i128, Ideal) {
        let g = self.c;
        (
            g,
            Ideal {
                a: self.a / g,
                b: self.b / g,
                c: 1,
            },
        )
    }

    /// Canonical representative of `x + y w` modulo this ideal.
    pub fn reduce(&self, v: (i128, i128)) -> (i128, i128) {
        let y = v.1.rem_euclid(self.c);
        let k = (v.1 - y) / self.c;
        let x = (v.0 - k * self.b).rem_euclid(self.a);
        (x, y)
    }

    pub fn reduce_big(&self, v: &(BigInt, BigInt)) -> (i128, i128) {
        let c = BigInt::from(self.c);
        let y = v.1.mod_floor(&c);
        let k = (&v.1 - &y) / &c;
        let x = (&v.0 - k * self.b).mod_floor(&BigInt::from(self.a));
        (x.to_i128().unwrap(), y.to_i128().unwrap())
    }

    pub fn contains(&self, v: (i128, i128)) -> bool {
        self.reduce(v) == (0, 0)
    }
}

pub fn is_zero_big(v: &(BigInt, BigInt)) -> bool {
    v.0.is_zero() && v.1.is_zero()
}
