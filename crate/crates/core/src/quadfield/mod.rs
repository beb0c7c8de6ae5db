//! Quadratic field invariants: class groups, units, ray class ranks.

pub mod forms;
pub mod order;
pub mod ray;
pub mod unit;

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::arith::primes::{is_prime, is_squarefree};
use crate::error::{Error, Result};
pub use forms::ClassGroup;
pub use ray::{RayData, UnitGroupMethod};
pub use unit::{fundamental_unit, FundamentalUnit};

/// The four moduli `b ∈ {1, (ell)^{1/2}, (ell), (ell)^{ell/(ell-1)}}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BIndex {
    One,
    Sqrt,
    Ell,
    Full,
}

impl BIndex {
    pub const ALL: [BIndex; 4] = [BIndex::One, BIndex::Sqrt, BIndex::Ell, BIndex::Full];

    pub fn is_legal(self, d: i64, ell: u64) -> bool {
        self != BIndex::Sqrt || d % ell as i64 == 0
    }

    /// `dim (Z_{b1}/Z_{b1}^ell)`.
    pub fn z(self) -> u32 {
        match self {
            BIndex::One => 2,
            BIndex::Sqrt => 1,
            BIndex::Ell | BIndex::Full => 0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BIndex::One => "1",
            BIndex::Sqrt => "sqrt",
            BIndex::Ell => "ell",
            BIndex::Full => "full",
        }
    }
}

pub fn is_fundamental(d: i64) -> Result<bool> {
    if d == 0 {
        return Err(Error::input("D = 0 is not a discriminant"));
    }
    if d == 1 {
        return Ok(false);
    }
    let m = d.rem_euclid(4);
    if m == 1 {
        return Ok(is_squarefree(d.unsigned_abs()));
    }
    if m == 0 {
        let q = d / 4;
        let r = q.rem_euclid(4);
        return Ok((r == 2 || r == 3) && is_squarefree(q.unsigned_abs()));
    }
    Ok(false)
}

/// `ell* = (-1)^{(ell-1)/2} ell`.
pub fn ell_star(ell: u64) -> i64 {
    if ell % 4 == 1 {
        ell as i64
    } else {
        -(ell as i64)
    }
}

#[derive(Clone, Debug)]
pub struct QuadInvariants {
    pub d: i64,
    pub ell: u64,
    /// Class number (wide sense when D > 0).
    pub h: usize,
    /// Number of classes of forms under proper equivalence; differs from `h` only for D > 0.
    pub narrow_h: usize,
    pub ell_rank: u32,
    pub unit: Option<FundamentalUnit>,
    pub r2: u32,
    /// Ray class ell-ranks for b = 1, sqrt, ell, full (`None` where b is illegal).
    pub ray_ranks: [Option<u32>; 4],
    /// `ell | h` and the fundamental unit is trivial in `G/G^ell` for every modulus.
    pub unit_rank_edge: bool,
}

pub fn class_group(d: i64, ell: u64) -> Result<QuadInvariants> {
    if !is_fundamental(d)? {
        return Err(Error::input(format!("{d} is not a fundamental discriminant")));
    }
    if ell < 3 || !is_prime(ell) {
        return Err(Error::input(format!("ell = {ell} must be an odd prime")));
    }
    let cg = ClassGroup::new(d)?;
    let data = RayData::new(&cg, ell)?;
    let mut ray_ranks = [None; 4];
    for (i, b) in BIndex::ALL.into_iter().enumerate() {
        if b.is_legal(d, ell) {
            ray_ranks[i] = Some(data.rank(b, UnitGroupMethod::Auto)?);
        }
    }
    let unit = if d > 0 { Some(fundamental_unit(d)?) } else { None };
    let ell_rank = data.class_rank;
    let unit_rank_edge = d > 0 && ell_rank > 0 && data.unit_is_ell_power(BIndex::One)?;
    Ok(QuadInvariants {
        d,
        ell,
        h: cg.h(),
        narrow_h: cg.narrow_h,
        ell_rank,
        unit,
        r2: if d < 0 { 1 } else { 0 },
        ray_ranks,
        unit_rank_edge,
    })
}

type CacheMap = HashMap<(i64, u64), Arc<QuadInvariants>>;

/// Memo of `class_group` results; readers share, one writer inserts.
pub struct QuadCache {
    map: RwLock<CacheMap>,
}

impl QuadCache {
    pub fn new() -> Self {
        QuadCache {
            map: RwLock::new(HashMap::new()),
        }
    }

    pub fn get(&self, d: i64, ell: u64) -> Result<Arc<QuadInvariants>> {
        if let Some(v) = self.map.read().expect("cache lock").get(&(d, ell)) {
            return Ok(v.clone());
        }
        let inv = Arc::new(class_group(d, ell)?);
        let mut w = self.map.write().expect("cache lock");
        Ok(w.entry((d, ell)).or_insert(inv).clone())
    }

    pub fn len(&self) -> usize {
        self.map.read().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl Default for QuadCache {
    fn default() -> Self {
        Self::new()
    }
}

/// Process-wide cache.
pub fn quad_invariants(d: i64, ell: u64) -> Result<Arc<QuadInvariants>> {
    static CACHE: OnceLock<QuadCache> = OnceLock::new();
    CACHE.get_or_init(QuadCache::new).get(d, ell)
}

pub fn aac_holds(ell: u64) -> Result<bool> {
    if !is_prime(ell) || ell % 4 != 1 {
        return Err(Error::input("conjecture stated only for ell ≡ 1 (mod 4)"));
    }
    let u = fundamental_unit(ell as i64)?;
    Ok(!(&u.b % ell).is_zero())
}

pub fn ray_class_ell_rank(d: i64, ell: u64, b: BIndex) -> Result<u32> {
    if !b.is_legal(d, ell) {
        return Err(Error::input("b = sqrt is only legal when ell | D"));
    }
    let inv = quad_invariants(d, ell)?;
    let i = BIndex::ALL.iter().position(|&x| x == b).unwrap();
    Ok(inv.ray_ranks[i].expect("legal index"))
}

/// `r(b)` with `|G_b| = ell^{r(b)}`.
pub fn g_b_rank(d: i64, ell: u64, b: BIndex) -> Result<u32> {
    if ell < 5 {
        return Err(Error::input("g_b_rank needs ell >= 5"));
    }
    if d == ell_star(ell) {
        return Err(Error::input("g_b_rank covers the general case only (D != ell*)"));
    }
    let inv = quad_invariants(d, ell)?;
    let rk = ray_class_ell_rank(d, ell, b)? as i64;
    let r = 1 - inv.r2 as i64 - b.z() as i64 + rk;
    if r < 0 {
        return Err(Error::invariant(format!("inconsistent rank r({}) = {r} for D={d}, ell={ell}", b.name())));
    }
    Ok(r as u32)
}
