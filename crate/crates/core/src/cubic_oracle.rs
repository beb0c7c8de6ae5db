//! Cubic fields by discriminant, from reduced binary cubic forms.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;

use crate::arith::primes::{factorize, iroot, isqrt};
use crate::arith::IntPoly;
use crate::error::{Error, Result};

/// Largest supported discriminant bound.
pub const MAX_CUBIC_BOUND: u64 = 10_000_000;

/// `a x^3 + b x^2 y + c x y^2 + d y^3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinaryCubicForm {
    pub a: i128,
    pub b: i128,
    pub c: i128,
    pub d: i128,
}

impl BinaryCubicForm {
    pub fn new(a: i128, b: i128, c: i128, d: i128) -> Self {
        BinaryCubicForm { a, b, c, d }
    }

    pub fn disc(&self) -> i128 {
        let BinaryCubicForm { a, b, c, d } = *self;
        b * b * c * c - 4 * a * c * c * c - 4 * b * b * b * d - 27 * a * a * d * d + 18 * a * b * c * d
    }

    pub fn eval(&self, x: i128, y: i128) -> i128 {
        self.a * x * x * x + self.b * x * x * y + self.c * x * y * y + self.d * y * y * y
    }

    /// Hessian `(P, Q, R)`.
    pub fn hessian(&self) -> (i128, i128, i128) {
        let BinaryCubicForm { a, b, c, d } = *self;
        (b * b - 3 * a * c, b * c - 9 * a * d, c * c - 3 * b * d)
    }

    /// `f(x + k y, y)`.
    pub fn translate(&self, k: i128) -> Self {
        let BinaryCubicForm { a, b, c, .. } = *self;
        BinaryCubicForm::new(a, b + 3 * a * k, c + 2 * b * k + 3 * a * k * k, self.eval(k, 1))
    }

    /// `det(γ)^{-1} f((x, y) γ)` for `γ = [[p, q], [r, s]]`.
    pub fn act(&self, p: i128, q: i128, r: i128, s: i128) -> Self {
        // (x, y)γ = (p x + r y, q x + s y).
        let (a, b, c, d) = (self.a, self.b, self.c, self.d);
        let na = a * p * p * p + b * p * p * q + c * p * q * q + d * q * q * q;
        let nd = a * r * r * r + b * r * r * s + c * r * s * s + d * s * s * s;
        let nb = 3 * a * p * p * r + b * (p * p * s + 2 * p * q * r) + c * (q * q * r + 2 * p * q * s) + 3 * d * q * q * s;
        let nc = 3 * a * p * r * r + b * (r * r * q + 2 * p * r * s) + c * (s * s * p + 2 * q * r * s) + 3 * d * q * s * s;
        let det = p * s - q * r;
        BinaryCubicForm::new(na * det, nb * det, nc * det, nd * det)
    }

    /// Monic `x^3 + b x^2 + a c x + a^2 d` with roots `a θ`.
    pub fn monic_poly(&self) -> IntPoly {
        let a = self.a;
        IntPoly::from_i64s(&[(a * a * self.d) as i64, (a * self.c) as i64, self.b as i64, 1])
    }

    fn monic_eval(&self, u: i128) -> i128 {
        let a = self.a;
        u * u * u + self.b * u * u + a * self.c * u + a * a * self.d
    }

    pub fn is_irreducible(&self) -> bool {
        if self.a == 0 || self.d == 0 {
            return false;
        }
        for p in [2i128, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
            if self.a % p != 0 && (0..p).all(|x| self.eval(x, 1).rem_euclid(p) != 0) {
                return true;
            }
        }
        !real_roots_monic(self).into_iter().any(|r| {
            let u = r.round() as i128;
            (u - 2..=u + 2).any(|v| self.monic_eval(v) == 0)
        })
    }

    /// The order of the form is maximal at every prime.
    pub fn is_maximal(&self) -> bool {
        let disc = self.disc().unsigned_abs() as u64;
        factorize(disc)
            .into_iter()
            .filter(|&(_, e)| e >= 2)
            .all(|(p, _)| self.is_maximal_at(p as i128))
    }

    pub fn is_maximal_at(&self, p: i128) -> bool {
        let BinaryCubicForm { a, b, c, d } = *self;
        if [a, b, c, d].iter().all(|v| v % p == 0) {
            return false;
        }
        let (x0, y0) = if a % p == 0 && b % p == 0 {
            (1, 0)
        } else {
            match (0..p).find(|&x| self.eval(x, 1) % p == 0 && (3 * a * x * x + 2 * b * x + c) % p == 0) {
                Some(x) => (x, 1),
                None => return true,
            }
        };
        self.eval(x0, y0) % (p * p) != 0
    }
}

/// Real roots of `u^3 + b u^2 + a c u + a^2 d`, approximately.
fn real_roots_monic(f: &BinaryCubicForm) -> Vec<f64> {
    let (b, c, d) = (f.b as f64, (f.a * f.c) as f64, (f.a * f.a * f.d) as f64);
    let g = |u: f64| ((u + b) * u + c) * u + d;
    let bound = 1.0 + b.abs().max(c.abs()).max(d.abs());
    let mut pts = vec![-bound];
    let disc = b * b - 3.0 * c;
    if disc > 0.0 {
        let s = disc.sqrt();
        pts.push((-b - s) / 3.0);
        pts.push((-b + s) / 3.0);
    }
    pts.push(bound);
    let mut out = Vec::new();
    for w in pts.windows(2) {
        let (mut lo, mut hi) = (w[0], w[1]);
        let (glo, ghi) = (g(lo), g(hi));
        if glo == 0.0 {
            out.push(lo);
            continue;
        }
        if glo.signum() == ghi.signum() {
            continue;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if g(mid).signum() == glo.signum() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        out.push(0.5 * (lo + hi));
    }
    out
}

/// Real root of `a t^3 + b t^2 + c t + d` for a form with one real root, `a > 0`.
fn real_root(f: &BinaryCubicForm) -> f64 {
    let r = real_roots_monic(f);
    r.first().copied().unwrap_or(0.0) / f.a as f64
}

/// `0 < Re ψ < 1/2` and `|ψ| > 1` for the complex root `ψ`; needs `a > 0`, negative discriminant.
fn is_reduced_negative(f: &BinaryCubicForm) -> bool {
    let BinaryCubicForm { a, b, c, d } = *f;
    if a * d - b * c <= 0 {
        return false;
    }
    if f.monic_eval(-(a + b)) >= 0 {
        return false;
    }
    let g = f.monic_eval(-d);
    if d < 0 {
        g > 0
    } else {
        g < 0
    }
}

/// The reduced representative of the class of `f` (negative discriminant), if its translation class holds one.
fn reduce_negative(f: &BinaryCubicForm) -> Option<BinaryCubicForm> {
    let theta = real_root(f);
    let re = (-(f.b as f64) / f.a as f64 - theta) / 2.0;
    // Re ψ shifts by -k under translation by k.
    let k0 = (re - 0.25).round() as i128;
    (k0 - 1..=k0 + 1).map(|k| f.translate(k)).find(is_reduced_negative)
}

/// Elements of GL2(Z) with entries in {-1, 0, 1}.
fn small_matrices() -> Vec<(i128, i128, i128, i128)> {
    let mut v = Vec::new();
    for p in -1..=1 {
        for q in -1..=1 {
            for r in -1..=1 {
                for s in -1..=1 {
                    let det: i128 = p * s - q * r;
                    if det.abs() == 1 {
                        v.push((p, q, r, s));
                    }
                }
            }
        }
    }
    v
}

fn act_quadratic(h: (i128, i128, i128), m: (i128, i128, i128, i128)) -> (i128, i128, i128) {
    let (pp, qq, rr) = h;
    let (p, q, r, s) = m;
    // H(p x + r y, q x + s y).
    (
        pp * p * p + qq * p * q + rr * q * q,
        2 * pp * p * r + qq * (p * s + q * r) + 2 * rr * q * s,
        pp * r * r + qq * r * s + rr * s * s,
    )
}

fn sign_normalize(f: BinaryCubicForm) -> BinaryCubicForm {
    if f.a < 0 {
        BinaryCubicForm::new(-f.a, -f.b, -f.c, -f.d)
    } else {
        f
    }
}

/// Canonical representative of the class of `f` (positive discriminant), if its translation class has a reduced Hessian.
fn reduce_positive(f: &BinaryCubicForm, mats: &[(i128, i128, i128, i128)]) -> Option<BinaryCubicForm> {
    let (p, q, _) = f.hessian();
    // Q shifts by 2Pk under translation by k; bring it into (-P, P].
    let k = (p - q).div_euclid(2 * p);
    let mut g = f.translate(k);
    let (p2, q2, r2) = g.hessian();
    debug_assert!(-p2 < q2 && q2 <= p2);
    if p2 > r2 {
        return None;
    }
    if q2 < 0 {
        g = sign_normalize(g.act(-1, 0, 0, 1));
    }
    let h = g.hessian();
    mats.iter()
        .filter(|&&m| act_quadratic(h, m) == h)
        .map(|&(a, b, c, d)| sign_normalize(g.act(a, b, c, d)))
        .min()
}

/// Cubic fields with `|Disc| <= bound`, keyed by signed discriminant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubicTable {
    pub bound: u64,
    pub fields: BTreeMap<i64, Vec<BinaryCubicForm>>,
}

pub fn enumerate_cubics(x: u64) -> Result<CubicTable> {
    enumerate_cubics_with_box(x, 1.0)
}

/// Enumeration with the search box for `a` and `P` scaled by `mult` (saturation checks).
pub fn enumerate_cubics_with_box(x: u64, mult: f64) -> Result<CubicTable> {
    if x > MAX_CUBIC_BOUND {
        return Err(Error::resource(format!("cubic enumeration bound {x} exceeds {MAX_CUBIC_BOUND}")));
    }
    let xi = x as i128;
    let amax = ((iroot((16 * x as u128) / 27, 4) as f64 + 1.0) * mult) as i128;
    let pmax = ((isqrt(3 * x as u128) as f64 + 1.0) * mult) as i128;
    let mats = small_matrices();
    let ab: Vec<(i128, i128)> = (1..=amax).flat_map(|a| (0..3 * a).map(move |b| (a, b))).collect();
    let found: Vec<BinaryCubicForm> = ab
        .par_iter()
        .flat_map_iter(|&(a, b)| {
            let mut out = Vec::new();
            let m27 = 27 * a * a;
            for p in -pmax..=pmax {
                if (b * b - p) % (3 * a) != 0 {
                    continue;
                }
                let c = (b * b - p) / (3 * a);
                let u0 = (2 * b * b * b - 9 * a * b * c).rem_euclid(m27);
                let p3 = 4 * p * p * p;
                // Negative discriminant: U^2 in [4P^3 + 27a^2, 4P^3 + 27a^2 X]; positive: [4P^3 - 27a^2 X, 4P^3 - 27a^2].
                for (lo, hi) in [(p3 + m27, p3 + m27 * xi), (p3 - m27 * xi, p3 - m27)] {
                    if hi < 0 {
                        continue;
                    }
                    let ulo = if lo <= 0 { 0 } else { isqrt(lo as u128 - 1) as i128 + 1 };
                    let uhi = isqrt(hi as u128) as i128;
                    for sign in [1i128, -1] {
                        let (s, e) = if sign == 1 { (ulo, uhi) } else { (-uhi, -ulo) };
                        let mut u = s + (u0 - s).rem_euclid(m27);
                        while u <= e {
                            if !(sign == -1 && u == 0 && ulo == 0) {
                                let d = (u - 2 * b * b * b + 9 * a * b * c) / m27;
                                let f = BinaryCubicForm::new(a, b, c, d);
                                let disc = f.disc();
                                if disc != 0 && disc.abs() <= xi {
                                    let red = if disc < 0 { reduce_negative(&f) } else { reduce_positive(&f, &mats) };
                                    if let Some(g) = red {
                                        out.push(g);
                                    }
                                }
                            }
                            u += m27;
                        }
                    }
                }
            }
            out
        })
        .collect();
    let uniq: HashSet<BinaryCubicForm> = found.into_iter().collect();
    let mut fields: BTreeMap<i64, Vec<BinaryCubicForm>> = BTreeMap::new();
    let good: Vec<BinaryCubicForm> = uniq.into_par_iter().filter(|f| f.is_irreducible() && f.is_maximal()).collect();
    for f in good {
        fields.entry(f.disc() as i64).or_default().push(f);
    }
    for v in fields.values_mut() {
        v.sort();
    }
    Ok(CubicTable { bound: x, fields })
}

impl CubicTable {
    fn check(&self, d: i64) -> Result<()> {
        if d.unsigned_abs() > self.bound {
            return Err(Error::input(format!("|D| = {} exceeds the table bound {}", d.unsigned_abs(), self.bound)));
        }
        Ok(())
    }

    /// Number of cubic fields of discriminant exactly `d`.
    pub fn n3(&self, d: i64) -> Result<u64> {
        self.check(d)?;
        Ok(self.fields.get(&d).map_or(0, |v| v.len() as u64))
    }

    pub fn polys(&self, d: i64) -> Result<Vec<IntPoly>> {
        self.check(d)?;
        Ok(self.fields.get(&d).map_or(vec![], |v| v.iter().map(|f| f.monic_poly()).collect()))
    }

    /// `N(D*) + N(-27D)` against `N(D)` (D < 0) or `3N(D) + 1` (D > 0).
    pub fn verify_on(&self, d: i64) -> Result<bool> {
        if !crate::quadfield::is_fundamental(d)? {
            return Err(Error::input(format!("{d} is not a fundamental discriminant")));
        }
        self.check(27 * d)?;
        let dstar = if d % 3 != 0 { -3 * d } else { -d / 3 };
        let lhs = self.n3(dstar)? + self.n3(-27 * d)?;
        let rhs = if d < 0 { self.n3(d)? } else { 3 * self.n3(d)? + 1 };
        Ok(lhs == rhs)
    }

    pub fn total(&self) -> usize {
        self.fields.values().map(Vec::len).sum()
    }

    /// `#X=<bound>` then `disc,a,b,c,d` per field.
    pub fn to_csv(&self) -> String {
        let mut s = format!("#X={}\n", self.bound);
        for (d, fs) in &self.fields {
            for f in fs {
                let _ = writeln!(s, "{d},{},{},{},{}", f.a, f.b, f.c, f.d);
            }
        }
        s
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let head = lines.next().ok_or_else(|| Error::input("empty cubic table"))?;
        let bound: u64 = head
            .strip_prefix("#X=")
            .and_then(|v| v.trim().parse().ok())
            .ok_or_else(|| Error::input("cubic table must start with #X=<bound>"))?;
        let mut fields: BTreeMap<i64, Vec<BinaryCubicForm>> = BTreeMap::new();
        for (i, line) in lines.enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let v: Vec<i128> = line
                .split(',')
                .map(|t| t.trim().parse::<i128>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::input(format!("cubic table line {}: {e}", i + 2)))?;
            if v.len() != 5 {
                return Err(Error::input(format!("cubic table line {}: expected 5 fields", i + 2)));
            }
            let f = BinaryCubicForm::new(v[1], v[2], v[3], v[4]);
            if f.disc() != v[0] {
                return Err(Error::input(format!("cubic table line {}: discriminant mismatch", i + 2)));
            }
            fields.entry(v[0] as i64).or_default().push(f);
        }
        Ok(CubicTable { bound, fields })
    }

    /// Loads the table from `path` when it covers `x`, otherwise enumerates and writes it.
    pub fn load_or_build(x: u64, path: &Path) -> Result<Self> {
        if let Ok(text) = std::fs::read_to_string(path) {
            let t = Self::from_csv(&text)?;
            if t.bound >= x {
                return Ok(t);
            }
        }
        let t = enumerate_cubics(x)?;
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir).map_err(|e| Error::resource(format!("cache dir: {e}")))?;
        }
        std::fs::write(path, t.to_csv()).map_err(|e| Error::resource(format!("writing {}: {e}", path.display())))?;
        Ok(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{factor_shape_mod_p, poly_disc, primes_up_to};
    use num_bigint::BigInt;
    use num_traits::Zero;
    use std::sync::OnceLock;

    fn table() -> &'static CubicTable {
        static T: OnceLock<CubicTable> = OnceLock::new();
        T.get_or_init(|| enumerate_cubics(20_000).unwrap())
    }

    #[test]
    fn known_small_discriminants() {
        let t = table();
        assert_eq!(t.n3(-23).unwrap(), 1);
        assert_eq!(t.n3(-31).unwrap(), 1);
        assert_eq!(t.n3(1).unwrap(), 0);
        assert_eq!(t.n3(81).unwrap(), 1);
        assert_eq!(t.n3(321).unwrap(), 1);
        assert_eq!(t.n3(-44).unwrap(), 1);
        // x^3 - x - 1.
        let p = &t.polys(-23).unwrap()[0];
        assert_eq!(poly_disc(p).unwrap(), BigInt::from(-23));
        assert!(t.n3(30_000).is_err());
    }

    #[test]
    fn totally_real_below_one_thousand() {
        let want = [
            49, 81, 148, 169, 229, 257, 316, 321, 361, 404, 469, 473, 564, 568, 621, 697, 733, 756, 761, 785, 788, 837, 892, 940, 961, 985, 993,
        ];
        let got: Vec<i64> = table().fields.range(1..1000).map(|(d, _)| *d).collect();
        assert_eq!(got, want);
        assert!(table().fields.range(1..1000).all(|(_, v)| v.len() == 1));
    }

    #[test]
    fn enumeration_is_complete_on_a_box() {
        let neg = table().fields.range(-1000..0).map(|(_, v)| v.len()).sum::<usize>();
        assert_eq!(neg, brute_count_negative(1000));
    }

    /// Classes met by every form in a coefficient box, reduced by translation, reflection and inversion.
    fn brute_count_negative(x: i128) -> usize {
        let mut classes: HashSet<BinaryCubicForm> = HashSet::new();
        let r = 12;
        for a in 1..=r {
            for b in -r..=r {
                for c in -r..=r {
                    for d in -r..=r {
                        let f = BinaryCubicForm::new(a, b, c, d);
                        let disc = f.disc();
                        if !(disc < 0 && -disc <= x && f.is_irreducible() && f.is_maximal()) {
                            continue;
                        }
                        let mut g = f;
                        let mut done = None;
                        for _ in 0..64 {
                            let re = (-(g.b as f64) / g.a as f64 - real_root(&g)) / 2.0;
                            g = g.translate(re.round() as i128);
                            done = reduce_negative(&g).or_else(|| reduce_negative(&sign_normalize(g.act(-1, 0, 0, 1))));
                            if done.is_some() {
                                break;
                            }
                            g = sign_normalize(g.act(0, 1, -1, 0));
                        }
                        classes.insert(done.unwrap_or_else(|| panic!("{f:?} did not reduce")));
                    }
                }
            }
        }
        classes.len()
    }

    #[test]
    fn fields_pairwise_non_isomorphic() {
        let ps = primes_up_to(2000);
        for (d, fs) in &table().fields {
            if fs.len() < 2 {
                continue;
            }
            let prints: Vec<Vec<Vec<(usize, usize)>>> = fs
                .iter()
                .map(|f| {
                    let g = f.monic_poly();
                    let pd = poly_disc(&g).unwrap();
                    ps.iter()
                        .filter(|&&p| !(&pd % p).is_zero())
                        .take(20)
                        .map(|&p| factor_shape_mod_p(&g, p).unwrap().parts)
                        .collect()
                })
                .collect();
            for i in 0..prints.len() {
                for j in i + 1..prints.len() {
                    assert_ne!(prints[i], prints[j], "D={d}");
                }
            }
        }
    }

    #[test]
    fn saturation() {
        let a = enumerate_cubics(5000).unwrap();
        let b = enumerate_cubics_with_box(5000, 2.0).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn cubic_count_identity_small() {
        for d in [-4i64, 5, -107, 8, -8, 12, 13, 21, -20, 40, -83, 229, 321, -740] {
            assert!(table().verify_on(d).unwrap(), "D={d}");
        }
        for d in -740i64..=740 {
            if d != 0 && d != -3 && crate::quadfield::is_fundamental(d).unwrap() {
                assert!(table().verify_on(d).unwrap(), "D={d}");
            }
        }
    }

    #[test]
    fn cubic_count_identity_fails_at_minus_three() {
        // D* = 1 and the cyclic field of discriminant 81 has trivial quadratic resolvent.
        let t = table();
        assert_eq!((t.n3(1).unwrap(), t.n3(81).unwrap(), t.n3(-3).unwrap()), (0, 1, 0));
        assert!(!t.verify_on(-3).unwrap());
    }

    #[test]
    fn csv_round_trip() {
        let t = enumerate_cubics(3000).unwrap();
        assert_eq!(CubicTable::from_csv(&t.to_csv()).unwrap(), t);
        assert!(CubicTable::from_csv("1,2,3").is_err());
    }

    #[test]
    fn maximality_examples() {
        // x^3 - 12x - 8 has discriminant 81 * 64 and is not maximal at 2.
        let f = BinaryCubicForm::new(1, 0, -12, -8);
        assert!(!f.is_maximal_at(2));
        assert!(BinaryCubicForm::new(1, 0, -3, -1).is_maximal());
        // 2 x^3 + ... with content 2.
        assert!(!BinaryCubicForm::new(2, 2, 4, 2).is_maximal_at(2));
    }

    #[test]
    fn action_composes() {
        let f = BinaryCubicForm::new(2, -3, 5, 7);
        assert_eq!(f.act(1, 0, 3, 1), f.translate(3));
        let h = f.act(0, 1, -1, 0).act(0, 1, -1, 0);
        assert_eq!(h, BinaryCubicForm::new(-2, 3, -5, -7));
        assert_eq!(f.act(2, 1, 1, 1).disc(), f.disc());
    }
}
