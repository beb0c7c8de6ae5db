use std::sync::OnceLock;

use dseries::cubic_oracle::{enumerate_cubics, CubicTable};
use dseries::dirichlet::{pure_cubic_phi, sample_s3_phi};
use num_bigint::BigInt;

fn table() -> &'static CubicTable {
    static T: OnceLock<CubicTable> = OnceLock::new();
    T.get_or_init(|| enumerate_cubics(100_000).unwrap())
}

#[test]
fn sample_s3_matches_oracle() {
    let s = sample_s3_phi(30).unwrap().to_integer_series().unwrap();
    for n in 1..=30i64 {
        let want = table().n3(-107 * n * n).unwrap();
        assert_eq!(s.get(n as u64), BigInt::from(want), "n={n}");
    }
}

#[test]
fn pure_cubic_matches_oracle() {
    let s = pure_cubic_phi(180).unwrap().to_integer_series().unwrap();
    for n in 1..=180i64 {
        let want = table().n3(-3 * n * n).unwrap();
        assert_eq!(s.get(n as u64), BigInt::from(want), "n={n}");
    }
}

#[test]
fn unique_field_of_discriminant_321() {
    assert_eq!(table().n3(321).unwrap(), 1);
    let p = &table().polys(321).unwrap()[0];
    assert_eq!(dseries::arith::poly_disc(p).unwrap(), BigInt::from(321));
    assert_eq!(
        table().n3(-107 * 9).unwrap() >= 1,
        sample_s3_phi(3).unwrap().to_integer_series().unwrap().get(3) >= BigInt::from(1)
    );
}
