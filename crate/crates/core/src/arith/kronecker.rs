use crate::error::{Error, Result};

/// The Kronecker symbol `(d/n)`.
pub fn kronecker(d: i64, n: i64) -> Result<i32> {
    if d == 0 && n == 0 {
        return Err(Error::input("undefined symbol (0/0)"));
    }
    Ok(kronecker_unchecked(d, n))
}

pub(crate) fn kronecker_unchecked(d: i64, n: i64) -> i32 {
    let mut a = d as i128;
    let mut n = n as i128;
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    let mut sign = 1;
    if n < 0 {
        n = -n;
        if a < 0 {
            sign = -1;
        }
    }
    let tz = n.trailing_zeros();
    if tz > 0 {
        if a % 2 == 0 {
            return 0;
        }
        n >>= tz;
        if tz % 2 == 1 && (a.rem_euclid(8) == 3 || a.rem_euclid(8) == 5) {
            sign = -sign;
        }
    }
    // n odd positive: Jacobi symbol.
    a = a.rem_euclid(n);
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let r = n % 8;
            if r == 3 || r == 5 {
                sign = -sign;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            sign = -sign;
        }
        a %= n;
    }
    if n == 1 {
        sign
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn legendre_brute(d: i64, p: i64) -> i32 {
        let r = d.rem_euclid(p);
        if r == 0 {
            0
        } else if (1..p).any(|x| (x * x) % p == r) {
            1
        } else {
            -1
        }
    }

    #[test]
    fn spec_values() {
        assert_eq!(kronecker(5, 11).unwrap(), 1);
        assert_eq!(kronecker(-4, 2).unwrap(), 0);
        assert_eq!(kronecker(13, 3).unwrap(), 1);
        assert!(kronecker(0, 0).is_err());
    }

    #[test]
    fn odd_primes_match_brute_force() {
        for p in [3i64, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
            for d in -60..60 {
                assert_eq!(kronecker(d, p).unwrap(), legendre_brute(d, p), "({d}/{p})");
            }
        }
    }

    #[test]
    fn conventions_at_two_and_minus_one() {
        // (d/2) depends on d mod 8 for odd d.
        assert_eq!(kronecker(1, 2).unwrap(), 1);
        assert_eq!(kronecker(7, 2).unwrap(), 1);
        assert_eq!(kronecker(3, 2).unwrap(), -1);
        assert_eq!(kronecker(5, 2).unwrap(), -1);
        assert_eq!(kronecker(-3, -1).unwrap(), -1);
        assert_eq!(kronecker(5, -1).unwrap(), 1);
        assert_eq!(kronecker(-4, 3).unwrap(), -1);
    }
}
