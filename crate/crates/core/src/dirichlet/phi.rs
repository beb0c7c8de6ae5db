use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use super::euler::dense_product;
use super::{check_bound, rat, DirichletCoefficients, EllAdicFactor, EulerProductSpec, Weight};
use crate::arith::{is_prime, primes_up_to, IntPoly};
use crate::error::{Error, Result};
use crate::quadfield::{ell_star, g_b_rank, is_fundamental, quad_invariants, BIndex};
use crate::special_case::{special_field_poly_with, ComputedUnits, UnitProvider};
use crate::splitting::{disc_ell_offset, k_values, splitting_type, FieldSpec, SplittingType};

fn require_ell(ell: u64, min: u64) -> Result<()> {
    if ell < min || !is_prime(ell) {
        return Err(Error::input(format!("ell = {ell} must be a prime >= {min}")));
    }
    Ok(())
}

fn require_fundamental(d: i64) -> Result<()> {
    if !is_fundamental(d)? {
        return Err(Error::input(format!("{d} is not a fundamental discriminant")));
    }
    Ok(())
}

/// `A_b(t)` for every legal `b`, `t = ell^{-s/2}`.
pub fn a_b_factors(ell: u64, ell_divides_d: bool) -> Result<Vec<(BIndex, EllAdicFactor)>> {
    require_ell(ell, 5)?;
    let l = ell as i64;
    Ok(if ell_divides_d {
        vec![
            (BIndex::One, EllAdicFactor::from_terms(&[(3, 1, 1)])),
            (BIndex::Sqrt, EllAdicFactor::from_terms(&[(2, 1, 1), (3, -1, 1)])),
            (BIndex::Ell, EllAdicFactor::from_terms(&[(2, -1, l)])),
            (BIndex::Full, EllAdicFactor::from_terms(&[(0, 1, l)])),
        ]
    } else {
        vec![
            (BIndex::One, EllAdicFactor::from_terms(&[(4, 1, 1)])),
            (BIndex::Ell, EllAdicFactor::from_terms(&[(4, -1, l)])),
            (BIndex::Full, EllAdicFactor::from_terms(&[(0, 1, l)])),
        ]
    })
}

/// Tags `k` whose fields belong to the character group of modulus `b`.
fn k_column(ell: u64, ell_divides_d: bool, b: BIndex) -> Vec<u32> {
    match b {
        BIndex::One | BIndex::Sqrt => vec![0],
        BIndex::Ell | BIndex::Full => k_values(ell, ell_divides_d).to_vec(),
    }
}

/// The tag `k` of a field over `Q(sqrt d)`, read from its discriminant when untagged.
fn field_k(e: &FieldSpec, d: i64) -> Result<u32> {
    if !e.matches_resolvent(d) {
        return Err(Error::input(format!(
            "field {} (disc {}) does not match resolvent D = {d}",
            e.poly, e.disc
        )));
    }
    if let Some(k) = e.k_tag {
        return Ok(k);
    }
    let ldiv = d % e.ell as i64 == 0;
    let dpart = BigInt::from(d.unsigned_abs()).pow(((e.ell - 1) / 2) as u32);
    k_values(e.ell, ldiv)
        .into_iter()
        .find(|&k| BigInt::from(e.ell).pow(k + disc_ell_offset(e.ell, ldiv)) * &dpart == e.disc.abs())
        .ok_or_else(|| Error::input("field discriminant matches no tag"))
}

/// Routes fields to the moduli `b` by tag.
pub fn fields_by_b(d: i64, ell: u64, fields: &[FieldSpec]) -> Result<Vec<(BIndex, Vec<&FieldSpec>)>> {
    let ldiv = d % ell as i64 == 0;
    let tags = fields
        .iter()
        .map(|e| {
            if e.ell != ell {
                return Err(Error::input(format!("field {} has degree {} but ell = {ell}", e.poly, e.ell)));
            }
            field_k(e, d)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BIndex::ALL
        .into_iter()
        .filter(|b| b.is_legal(d, ell))
        .map(|b| {
            let col = k_column(ell, ldiv, b);
            let fs = fields.iter().zip(&tags).filter(|(_, k)| col.contains(k)).map(|(e, _)| e).collect();
            (b, fs)
        })
        .collect())
}

/// Warnings when the number of fields per modulus differs from `(ell^{r(b)} - 1)/(ell - 1)`.
pub fn check_field_counts(d: i64, ell: u64, fields: &[FieldSpec]) -> Result<Vec<String>> {
    let mut out = Vec::new();
    for (b, fs) in fields_by_b(d, ell, fields)? {
        let r = g_b_rank(d, ell, b)?;
        let want = (ell.pow(r) - 1) / (ell - 1);
        if fs.len() as u64 != want {
            out.push(format!(
                "b = {}: {} field(s) supplied, |G_b| = {ell}^{r} needs {want}",
                b.name(),
                fs.len()
            ));
        }
    }
    Ok(out)
}

/// `ell^{r2}/(ell-1) sum_b A_b [F_triv + (ell-1) sum_E F_E] - 1/(ell-1)` with the fields grouped by `b`.
pub fn assemble_from_groups(d: i64, ell: u64, x: u64, groups: &[(BIndex, Vec<&FieldSpec>)]) -> Result<DirichletCoefficients> {
    require_ell(ell, 5)?;
    check_bound(x)?;
    let ldiv = d % ell as i64 == 0;
    let factors = a_b_factors(ell, ldiv)?;
    let r2 = if d < 0 { 1 } else { 0 };
    let pre = BigRational::new(BigInt::from(ell).pow(r2), BigInt::from(ell - 1));
    let triv = EulerProductSpec {
        ell,
        d,
        weight: Weight::Trivial,
        all_primes: false,
    }
    .dense(x)?;
    let mut field_dense: HashMap<IntPoly, Vec<i64>> = HashMap::new();
    let mut s = DirichletCoefficients::new(ell, d, x);
    let lm1 = BigRational::from_integer(BigInt::from(ell - 1));
    for (b, fs) in groups {
        let a = factors
            .iter()
            .find(|(bb, _)| bb == b)
            .map(|(_, f)| f)
            .ok_or_else(|| Error::input(format!("b = {} is not legal for D = {d}", b.name())))?;
        s.add_product(&pre, a, &triv);
        for e in fs {
            if !field_dense.contains_key(&e.poly) {
                let dn = EulerProductSpec {
                    ell,
                    d,
                    weight: Weight::Field(e),
                    all_primes: false,
                }
                .dense(x)?;
                field_dense.insert(e.poly.clone(), dn);
            }
            s.add_product(&(&pre * &lm1), a, &field_dense[&e.poly]);
        }
    }
    s.add_at(0, 1, &-rat(1, ell as i64 - 1));
    Ok(s)
}

/// The general-case series for resolvent `Q(sqrt d)` from its list of degree-ell fields.
pub fn assemble_phi(d: i64, ell: u64, fields: &[FieldSpec], x: u64) -> Result<DirichletCoefficients> {
    require_ell(ell, 5)?;
    require_fundamental(d)?;
    if d == ell_star(ell) {
        return Err(Error::input("D = ell* is the special case; use special_phi or cor34_phi"));
    }
    let groups = fields_by_b(d, ell, fields)?;
    assemble_from_groups(d, ell, x, &groups)
}

/// Upper bound series `ell^{r2}/(ell-1) sum_b |A_b| ell^{r(b)} F_triv` for unresolved resolvents.
pub(crate) fn assemble_bound(d: i64, ell: u64, x: u64, ranks: &[(BIndex, u32)]) -> Result<DirichletCoefficients> {
    let ldiv = d % ell as i64 == 0;
    let factors = a_b_factors(ell, ldiv)?;
    let r2 = if d < 0 { 1 } else { 0 };
    let pre = BigRational::new(BigInt::from(ell).pow(r2), BigInt::from(ell - 1));
    let triv = EulerProductSpec {
        ell,
        d,
        weight: Weight::Trivial,
        all_primes: false,
    }
    .dense(x)?;
    let mut s = DirichletCoefficients::new(ell, d, x);
    for &(b, r) in ranks {
        let a = &factors.iter().find(|(bb, _)| *bb == b).expect("legal b").1;
        s.add_product(&(&pre * BigRational::from_integer(BigInt::from(ell).pow(r))), &a.abs(), &triv);
    }
    Ok(s)
}

/// `-1/(ell-1) + L_ell(s)/(ell-1) prod (1 + (ell-1) p^{-s})` for `D < 0` with `ell ∤ h(D)`, or `D = ell*`, `ell ≡ 3 (mod 4)`.
pub fn cor34_phi(ell: u64, d: i64, x: u64) -> Result<DirichletCoefficients> {
    require_ell(ell, 5)?;
    require_fundamental(d)?;
    if d > 0 {
        return Err(Error::input("this closed form needs D < 0"));
    }
    if d != ell_star(ell) && quad_invariants(d, ell)?.h % ell as usize == 0 {
        return Err(Error::input(format!("ell = {ell} divides h({d}); the closed form does not apply")));
    }
    check_bound(x)?;
    let l = ell as i64;
    let local = if d % l == 0 {
        EllAdicFactor::from_terms(&[(0, 1, 1), (2, l - 1, 1)])
    } else {
        EllAdicFactor::from_terms(&[(0, 1, 1), (4, l - 1, 1)])
    };
    let triv = EulerProductSpec {
        ell,
        d,
        weight: Weight::Trivial,
        all_primes: false,
    }
    .dense(x)?;
    let mut s = DirichletCoefficients::new(ell, d, x);
    s.add_product(&rat(1, l - 1), &local, &triv);
    s.add_at(0, 1, &-rat(1, l - 1));
    Ok(s)
}

/// Special case `D = ell ≡ 1 (mod 4)`, computed prime by prime over all `p`.
pub fn special_phi(ell: u64, x: u64) -> Result<DirichletCoefficients> {
    special_phi_with(ell, x, &ComputedUnits)
}

pub fn special_phi_with(ell: u64, x: u64, units: &dyn UnitProvider) -> Result<DirichletCoefficients> {
    require_ell(ell, 5)?;
    if ell % 4 != 1 {
        return Err(Error::input(format!("ell = {ell} is not ≡ 1 (mod 4)")));
    }
    check_bound(x)?;
    let e = special_field_poly_with(ell, units)?;
    let l = ell as i64;
    let omega_ell = if units.aac_holds(ell)? { -1 } else { l - 1 };
    let ps: Vec<u64> = primes_up_to(x).into_iter().filter(|&p| p != ell).collect();
    let mut field_w = Vec::new();
    for &p in &ps {
        let w = if (&e.index_sq % p) == BigInt::from(0) {
            if p % ell == 1 {
                return Err(Error::invariant(format!("index prime {p} ≡ 1 (mod {ell})")));
            }
            0
        } else {
            match splitting_type(&e, p)? {
                SplittingType::TotallySplit => l - 1,
                SplittingType::Inert | SplittingType::TotallyRamified => -1,
                SplittingType::Other => 0,
            }
        };
        if w != 0 && p % ell != 1 {
            return Err(Error::invariant(format!("p = {p} ≢ 1 (mod {ell}) has weight {w} in the special field")));
        }
        if w != 0 {
            field_w.push((p, w));
        }
    }
    let triv_w: Vec<(u64, i64)> = ps.iter().filter(|&&p| p % ell == 1).map(|&p| (p, l - 1)).collect();
    let triv = dense_product(&triv_w, x)?;
    let field = dense_product(&field_w, x)?;
    let mut s = DirichletCoefficients::new(ell, l, x);
    s.add_product(&rat(1, l * (l - 1)), &EllAdicFactor::from_terms(&[(0, 1, 1), (2, l - 1, 1)]), &triv);
    s.add_product(&rat(1, l), &EllAdicFactor::from_terms(&[(0, 1, 1), (2, omega_ell, 1)]), &field);
    s.add_at(0, 1, &-rat(1, l - 1));
    Ok(s)
}

/// The special case through the general assembly with `|G_b| = (1, 1, ell, ell)`.
pub fn table_special_phi(ell: u64, x: u64) -> Result<DirichletCoefficients> {
    require_ell(ell, 5)?;
    if ell % 4 != 1 {
        return Err(Error::input(format!("ell = {ell} is not ≡ 1 (mod 4)")));
    }
    let e = special_field_poly_with(ell, &ComputedUnits)?;
    let groups = vec![
        (BIndex::One, vec![]),
        (BIndex::Sqrt, vec![]),
        (BIndex::Ell, vec![&e]),
        (BIndex::Full, vec![&e]),
    ];
    assemble_from_groups(ell as i64, ell, x, &groups)
}

/// `ell = 3` series with a cubic field product over all primes, `omega_E(3)` included.
fn cubic_phi(
    d: i64,
    e: &FieldSpec,
    x: u64,
    triv_scale: BigRational,
    triv_local: EllAdicFactor,
    field_scale: BigRational,
    field_local: EllAdicFactor,
) -> Result<DirichletCoefficients> {
    check_bound(x)?;
    let triv = EulerProductSpec {
        ell: 3,
        d,
        weight: Weight::Trivial,
        all_primes: false,
    }
    .dense(x)?;
    let field = EulerProductSpec {
        ell: 3,
        d,
        weight: Weight::Field(e),
        all_primes: true,
    }
    .dense(x)?;
    let w3 = crate::splitting::omega_e(3, e)?;
    let mut s = DirichletCoefficients::new(3, d, x);
    s.add_product(&triv_scale, &triv_local, &triv);
    s.add_product(
        &field_scale,
        &field_local.mul(&EllAdicFactor::from_terms(&[(0, 1, 1), (2, w3, 1)])),
        &field,
    );
    s.add_at(0, 1, &-rat(1, 2));
    Ok(s)
}

/// Cubic fields with resolvent `Q(sqrt -107)`.
pub fn sample_s3_phi(x: u64) -> Result<DirichletCoefficients> {
    let e = FieldSpec::trusted(IntPoly::from_i64s(&[1, -4, -1, 1]), 3)?;
    let local = EllAdicFactor::from_terms(&[(0, 1, 1), (4, 2, 1)]);
    cubic_phi(-107, &e, x, rat(1, 2), local.clone(), BigRational::one(), local)
}

/// Pure cubic fields, resolvent `Q(sqrt -3)`.
pub fn pure_cubic_phi(x: u64) -> Result<DirichletCoefficients> {
    let e = FieldSpec::trusted(IntPoly::from_i64s(&[-1, -3, 0, 1]), 3)?;
    cubic_phi(
        -3,
        &e,
        x,
        rat(1, 6),
        EllAdicFactor::from_terms(&[(0, 1, 1), (2, 2, 1), (4, 6, 1)]),
        rat(1, 3),
        EllAdicFactor::one(),
    )
}

/// Complete field lists for a few resolvents with nontrivial `G_b`.
pub fn builtin_fields(d: i64, ell: u64) -> Option<Vec<FieldSpec>> {
    let (poly, k): (&[i64], u32) = match (d, ell) {
        (13, 5) => (&[-3, 5, 0, 5, 0, 1], 2),
        (-287, 7) => (&[-15, -56, 0, 56, 0, -14, 0, 1], 6),
        _ => return None,
    };
    FieldSpec::general(IntPoly::from_i64s(poly), d, ell, k).ok().map(|f| vec![f])
}

/// Human-readable description of the assembled closed form.
pub fn closed_form_header(d: i64, ell: u64) -> Result<Vec<String>> {
    let ldiv = d % ell as i64 == 0;
    let r2 = if d < 0 { 1 } else { 0 };
    let mut out = vec![format!("prefactor = {}^{r2}/({})", ell, ell - 1), "t = ell^(-s/2)".into()];
    for (b, a) in a_b_factors(ell, ldiv)? {
        let terms: Vec<String> = a
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_integer() || c.to_integer() != BigInt::from(0))
            .map(|(i, c)| format!("({c}) t^{i}"))
            .collect();
        out.push(format!("A_{} = {}", b.name(), terms.join(" + ")));
    }
    let sum = a_b_factors(ell, ldiv)?
        .into_iter()
        .fold(EllAdicFactor::new(vec![]), |acc, (_, a)| acc.add(&a));
    let terms: Vec<String> = sum.coeffs.iter().enumerate().map(|(i, c)| format!("({c}) t^{i}")).collect();
    out.push(format!("sum_b A_b = {}", terms.join(" + ")));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dirichlet::IntegerSeries;
    use num_traits::Zero;

    fn flat(s: &DirichletCoefficients) -> IntegerSeries {
        s.to_integer_series().unwrap()
    }

    fn c(s: &IntegerSeries, n: u64) -> i64 {
        s.terms.get(&n).map(|v| i64::try_from(v).unwrap()).unwrap_or(0)
    }

    #[test]
    fn a_b_sums() {
        let sum = |ldiv| {
            a_b_factors(5, ldiv)
                .unwrap()
                .into_iter()
                .fold(EllAdicFactor::new(vec![]), |acc, (_, a)| acc.add(&a))
        };
        // ell ∤ D: (1/5)(1 + 4 t^4); ell | D: (1/5)(1 + 4 t^2).
        assert_eq!(sum(false), EllAdicFactor::from_terms(&[(0, 1, 5), (4, 4, 5)]));
        assert_eq!(sum(true), EllAdicFactor::from_terms(&[(0, 1, 5), (2, 4, 5)]));
        let f = a_b_factors(5, true).unwrap();
        assert_eq!(f[2].1.add(&f[3].1), EllAdicFactor::from_terms(&[(0, 1, 5), (2, -1, 5)]));
        assert!(a_b_factors(3, false).is_err());
    }

    #[test]
    fn d13_first_coefficients() {
        let fields = builtin_fields(13, 5).unwrap();
        assert!(check_field_counts(13, 5, &fields).unwrap().is_empty());
        let s = flat(&assemble_phi(13, 5, &fields, 1100).unwrap());
        let ones: Vec<u64> = s.terms.iter().filter(|(_, v)| **v == BigInt::from(1)).map(|(n, _)| *n).collect();
        for n in [59u64, 409, 475, 619, 709, 1009] {
            assert!(ones.contains(&n), "n={n} in {ones:?}");
        }
        assert_eq!(c(&s, 1), 0);
        assert!(s.terms.values().all(|v| !v.is_negative()));
    }

    #[test]
    fn d13_matches_hand_expansion() {
        // (1/20)(1 + 4 t^4) F_triv + (1/5)(1 - t^4) F_E - 1/4.
        let x = 3000;
        let fields = builtin_fields(13, 5).unwrap();
        let got = assemble_phi(13, 5, &fields, x).unwrap();
        let triv = EulerProductSpec {
            ell: 5,
            d: 13,
            weight: Weight::Trivial,
            all_primes: false,
        }
        .dense(x)
        .unwrap();
        let fe = EulerProductSpec {
            ell: 5,
            d: 13,
            weight: Weight::Field(&fields[0]),
            all_primes: false,
        }
        .dense(x)
        .unwrap();
        let mut want = DirichletCoefficients::new(5, 13, x);
        want.add_product(&rat(1, 20), &EllAdicFactor::from_terms(&[(0, 1, 1), (4, 4, 1)]), &triv);
        want.add_product(&rat(1, 5), &EllAdicFactor::from_terms(&[(0, 1, 1), (4, -1, 1)]), &fe);
        want.add_at(0, 1, &rat(-1, 4));
        assert_eq!(got, want);
    }

    #[test]
    fn seven_example() {
        let fields = builtin_fields(-287, 7).unwrap();
        assert!(check_field_counts(-287, 7, &fields).unwrap().is_empty());
        let s = flat(&assemble_phi(-287, 7, &fields, 300_000).unwrap());
        assert_eq!(c(&s, 1), 1);
        for n in [301u64, 337, 581, 791] {
            assert_eq!(c(&s, n), 7, "n={n}");
        }
        assert_eq!(c(&s, 296_897), 42);
    }

    #[test]
    fn missing_field_warns() {
        let w = check_field_counts(13, 5, &[]).unwrap();
        assert_eq!(w.len(), 2);
        let s = assemble_phi(13, 5, &[], 500).unwrap();
        assert!(s.to_integer_series().is_err() || s.nonzero_len() > 0);
    }

    #[test]
    fn wrong_resolvent_rejected() {
        let f = builtin_fields(13, 5).unwrap();
        assert!(assemble_phi(17, 5, &f, 100).is_err());
        assert!(assemble_phi(5, 5, &[], 100).is_err());
    }

    #[test]
    fn cor34_equals_empty_assembly() {
        for (ell, d) in [(5u64, -4i64), (5, -15), (7, -3), (5, -20)] {
            let a = cor34_phi(ell, d, 4000).unwrap();
            let b = assemble_phi(d, ell, &[], 4000).unwrap();
            assert_eq!(a, b, "ell={ell} D={d}");
            let f = flat(&a);
            assert_eq!(c(&f, 1), 0);
        }
        // h(-47) = 5.
        assert!(cor34_phi(5, -47, 100).is_err());
        assert!(cor34_phi(5, 13, 100).is_err());
    }

    #[test]
    fn cor34_hand_values() {
        // D = -4, ell = 5: (1/4)(1 + 4 t^4) prod_{p ≡ (-4/p) mod 5} (1 + 4/p^s) - 1/4; set primes 19, 41, 59, ...
        let s = flat(&cor34_phi(5, -4, 1000).unwrap());
        assert_eq!(c(&s, 5), 0);
        assert_eq!(c(&s, 25), 1);
        assert_eq!(c(&s, 11), 0);
        assert_eq!(c(&s, 19), 1);
        assert_eq!(c(&s, 41), 1);
        assert_eq!(c(&s, 779), 4);
        assert_eq!(c(&s, 475), 4);
        // Special D = -7: the local factor is 1 + 6 t^2.
        let s = flat(&cor34_phi(7, -7, 100).unwrap());
        assert_eq!(c(&s, 7), 1);
    }

    #[test]
    fn special_phi_matches_table_assembly() {
        for ell in [5u64, 13] {
            let a = special_phi(ell, 10_000).unwrap();
            let b = table_special_phi(ell, 10_000).unwrap();
            assert_eq!(a, b, "ell={ell}");
            let f = flat(&a);
            assert_eq!(c(&f, 1), 0);
            assert_eq!(c(&f, ell), 0);
        }
    }

    struct NoAac;
    impl UnitProvider for NoAac {
        fn unit(&self, ell: u64) -> Result<crate::quadfield::FundamentalUnit> {
            crate::quadfield::fundamental_unit(ell as i64)
        }
        fn aac_holds(&self, _: u64) -> Result<bool> {
            Ok(false)
        }
    }

    #[test]
    fn special_phi_aac_branch() {
        let s = special_phi_with(5, 200, &NoAac).unwrap();
        assert_eq!(s.coefficient(5), BigRational::one());
        assert!(s.coefficient(1).is_zero());
    }

    #[test]
    fn pure_cubic_first_terms() {
        let s = flat(&pure_cubic_phi(60).unwrap());
        assert_eq!(c(&s, 1), 0);
        assert_eq!(c(&s, 6), 1);
        assert!(s.terms.values().all(|v| !v.is_negative()));
    }

    #[test]
    fn sample_s3_is_integral() {
        let s = flat(&sample_s3_phi(500).unwrap());
        assert!(s.terms.values().all(|v| !v.is_negative()));
    }

    #[test]
    fn header_lists_factors() {
        let h = closed_form_header(13, 5).unwrap();
        assert!(h.iter().any(|l| l.starts_with("sum_b")));
    }

    #[test]
    fn d13_exact_support() {
        let fields = builtin_fields(13, 5).unwrap();
        let s = flat(&assemble_phi(13, 5, &fields, 30_000).unwrap());
        let small: Vec<(u64, i64)> = s.terms.range(..=1100).map(|(n, v)| (*n, i64::try_from(v).unwrap())).collect();
        assert_eq!(small, vec![(59, 1), (409, 1), (475, 1), (619, 1), (709, 1), (1009, 1)]);
        assert_eq!(c(&s, 24_131), 4);
    }

    #[test]
    fn half_power_cancellation_when_ell_divides_d() {
        let s = table_special_phi(5, 10_000).unwrap();
        assert!(s.half_power_residue().is_none());
        let s = assemble_phi(-15, 5, &[], 10_000).unwrap();
        assert!(s.half_power_residue().is_none());
        assert!(s.iter().any(|((e, _), _)| *e == 2));
    }

    #[test]
    fn examples_nonnegative_integral_to_ten_thousand() {
        let x = 10_000;
        let all = [
            assemble_phi(13, 5, &builtin_fields(13, 5).unwrap(), x).unwrap(),
            assemble_phi(-287, 7, &builtin_fields(-287, 7).unwrap(), x).unwrap(),
            special_phi(5, x).unwrap(),
            special_phi(13, x).unwrap(),
            cor34_phi(5, -4, x).unwrap(),
            cor34_phi(5, -15, x).unwrap(),
            sample_s3_phi(x).unwrap(),
            pure_cubic_phi(x).unwrap(),
        ];
        for s in &all {
            let f = flat(s);
            assert!(f.terms.values().all(|v| !v.is_negative()), "ell={} D={}", s.ell, s.d);
        }
    }

    #[test]
    fn pure_cubic_weights() {
        let e = FieldSpec::trusted(IntPoly::from_i64s(&[-1, -3, 0, 1]), 3).unwrap();
        for p in primes_up_to(2000).into_iter().filter(|&p| p != 3) {
            let w = crate::splitting::omega_e(p, &e).unwrap();
            assert_eq!(w == 2, p % 9 == 1 || p % 9 == 8, "p={p}");
        }
        assert_eq!(crate::splitting::omega_e(3, &e).unwrap(), -1);
    }
}
