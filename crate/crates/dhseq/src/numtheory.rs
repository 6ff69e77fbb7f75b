//! Elementary number theory over machine words, plus the big-integer gcd
//! identity that controls how Mersenne-style factors of 2^N - 1 interact
//! across levels of a prime power.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};

/// Deterministic primality test by trial division. Adequate for the word
/// sized inputs used throughout (periods, totients, CRT moduli).
pub fn is_prime(x: u64) -> bool {
    if x < 2 {
        return false;
    }
    if x % 2 == 0 {
        return x == 2;
    }
    let mut d = 3u64;
    while d * d <= x {
        if x % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Prime factorization `x = prod q_i^{e_i}` with `q_i` ascending.
fn factor(mut x: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= x {
        if x % d == 0 {
            let mut e = 0u32;
            while x % d == 0 {
                x /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if x > 1 {
        out.push((x, 1));
    }
    out
}

fn euler_phi(m: u64) -> u64 {
    factor(m)
        .into_iter()
        .map(|(q, e)| (q - 1) * q.pow(e - 1))
        .product()
}

/// Smallest `k >= 1` with `a^k = 1 (mod m)`.
///
/// Computed by stripping prime factors from the group exponent, so it
/// costs O(log) modular exponentiations rather than a brute force walk.
pub fn multiplicative_order(a: u64, m: u64) -> Result<u64> {
    if m < 2 {
        return Err(Error::InvalidParams(format!("modulus {m} must be >= 2")));
    }
    let a = a % m;
    if a.gcd(&m) != 1 {
        return Err(Error::NotInvertible { a, m });
    }
    let mut order = euler_phi(m);
    for (q, _) in factor(order) {
        while order % q == 0 && pow_mod(a, order / q, m) == 1 {
            order /= q;
        }
    }
    Ok(order)
}

/// Smallest primitive root `g >= 2` modulo `p^n` for an odd prime `p`.
/// One always exists because the unit group of `Z/p^n` is cyclic.
pub fn find_primitive_root(p: u64, n: u32) -> u64 {
    assert!(p % 2 == 1 && is_prime(p), "p must be an odd prime");
    assert!(n >= 1);
    let m = p.checked_pow(n).expect("p^n must fit in u64");
    let target = (p - 1) * p.pow(n - 1);
    (2..m)
        .find(|&g| matches!(multiplicative_order(g, m), Ok(o) if o == target))
        .expect("cyclic unit group has a generator")
}

/// Period parameters: an odd prime `p`, an exponent `n >= 1`, a primitive
/// root `g` modulo `p^n`, and the period `N = p^n`. Construction validates
/// everything, so holders of a `Params` can rely on the invariants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Params {
    p: u64,
    n: u32,
    g: u64,
    #[serde(rename = "N")]
    period: u64,
}

impl Params {
    /// Validates `p`, `n` and picks the smallest primitive root.
    pub fn new(p: u64, n: u32) -> Result<Self> {
        if p % 2 == 0 || !is_prime(p) {
            return Err(Error::InvalidParams(format!("p = {p} is not an odd prime")));
        }
        if n < 1 {
            return Err(Error::InvalidParams("n must be >= 1".into()));
        }
        let period = p
            .checked_pow(n)
            .ok_or_else(|| Error::InvalidParams(format!("p^n overflows u64 (p={p}, n={n})")))?;
        let g = find_primitive_root(p, n);
        Ok(Params { p, n, g, period })
    }

    /// Like [`Params::new`] but with a caller supplied root, which must
    /// generate the full unit group modulo `p^n`.
    pub fn with_root(p: u64, n: u32, g: u64) -> Result<Self> {
        let base = Params::new(p, n)?;
        if g < 2 || g >= base.period {
            return Err(Error::InvalidParams(format!(
                "g = {g} outside valid range 2..{}",
                base.period
            )));
        }
        if multiplicative_order(g, base.period)? != base.phi() {
            return Err(Error::InvalidParams(format!(
                "g = {g} is not a primitive root modulo {}",
                base.period
            )));
        }
        Ok(Params { g, ..base })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn g(&self) -> u64 {
        self.g
    }

    pub fn period(&self) -> u64 {
        self.period
    }

    /// `p^m` for `0 <= m <= n`.
    pub fn prime_power(&self, m: u32) -> u64 {
        assert!(m <= self.n);
        self.p.pow(m)
    }

    /// Size of the unit group modulo the period: `(p-1) p^{n-1}`.
    pub fn phi(&self) -> u64 {
        (self.p - 1) * self.prime_power(self.n - 1)
    }
}

/// `2^k - 1`.
pub fn mersenne(k: u64) -> BigUint {
    (BigUint::one() << usize::try_from(k).expect("shift fits usize")) - BigUint::one()
}

/// Record of one instance of the cross-level gcd identity, see
/// [`check_gcd_identity`].
#[derive(Debug, Clone, Serialize)]
pub struct GcdIdentityCheck {
    pub p: u64,
    pub n: u32,
    pub m: u32,
    #[serde(with = "crate::serde_util::biguint_dec")]
    pub lhs: BigUint,
    #[serde(with = "crate::serde_util::biguint_dec")]
    pub rhs: BigUint,
    pub equal: bool,
    pub is_one: bool,
}

/// Evaluates both sides of
/// `gcd(2^{p^m} - 1, (2^{p^n} - 1)/(2^{p^m} - 1)) = gcd(2^{p^m} - 1, p^{n-m})`
/// for `1 <= m <= n-1` and reports whether they agree. For odd primes the
/// common value is 1, which the record exposes as `is_one`.
pub fn check_gcd_identity(p: u64, n: u32, m: u32) -> Result<GcdIdentityCheck> {
    if p % 2 == 0 || !is_prime(p) {
        return Err(Error::InvalidParams(format!("p = {p} is not an odd prime")));
    }
    if n < 2 {
        return Err(Error::InvalidParams(
            "need n >= 2 so that 1 <= m <= n-1 is nonempty".into(),
        ));
    }
    if m < 1 || m >= n {
        return Err(Error::LevelOutOfRange { m, max: n - 1 });
    }
    let pm = p
        .checked_pow(m)
        .ok_or_else(|| Error::InvalidParams("p^m overflows u64".into()))?;
    let pn = p
        .checked_pow(n)
        .ok_or_else(|| Error::InvalidParams("p^n overflows u64".into()))?;
    let low = mersenne(pm);
    let full = mersenne(pn);
    // p^m | p^n, so 2^{p^m} - 1 divides 2^{p^n} - 1 and the quotient is exact.
    let cofactor = &full / &low;
    let lhs = low.gcd(&cofactor);
    let rhs = low.gcd(&BigUint::from(p.pow(n - m)));
    let equal = lhs == rhs;
    let is_one = lhs.is_one() && equal;
    Ok(GcdIdentityCheck {
        p,
        n,
        m,
        lhs,
        rhs,
        equal,
        is_one,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_small_values() {
        let primes: Vec<u64> = (0..60).filter(|&x| is_prime(x)).collect();
        assert_eq!(
            primes,
            vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]
        );
        assert!(is_prime(2_147_483_647)); // 2^31 - 1
        assert!(!is_prime(2_147_483_649)); // 3 * 715827883
    }

    #[test]
    fn order_matches_brute_force() {
        for m in 2u64..60 {
            for a in 0..m {
                let fast = multiplicative_order(a, m);
                // brute force oracle
                let mut acc = 1u64;
                let mut slow = None;
                for k in 1..=m {
                    acc = mul_mod(acc, a, m);
                    if acc == 1 {
                        slow = Some(k);
                        break;
                    }
                }
                match slow {
                    Some(k) => assert_eq!(fast.unwrap(), k, "a={a} m={m}"),
                    None => assert!(fast.is_err(), "a={a} m={m}"),
                }
            }
        }
    }

    #[test]
    fn order_known_values() {
        assert_eq!(multiplicative_order(2, 7).unwrap(), 3);
        assert_eq!(multiplicative_order(2, 9).unwrap(), 6);
        assert_eq!(multiplicative_order(1, 5).unwrap(), 1);
        assert!(multiplicative_order(6, 9).is_err());
    }

    #[test]
    fn primitive_roots_known_values() {
        assert_eq!(find_primitive_root(3, 1), 2);
        assert_eq!(find_primitive_root(3, 2), 2);
        assert_eq!(find_primitive_root(5, 1), 2);
        assert_eq!(find_primitive_root(7, 1), 3);
        assert_eq!(find_primitive_root(7, 2), 3);
        assert_eq!(find_primitive_root(11, 1), 2);
        assert_eq!(find_primitive_root(13, 1), 2);
    }

    #[test]
    fn params_validation() {
        let p = Params::new(3, 2).unwrap();
        assert_eq!((p.p(), p.n(), p.g(), p.period()), (3, 2, 2, 9));
        assert_eq!(p.phi(), 6);

        assert!(Params::new(2, 3).is_err());
        assert!(Params::new(9, 1).is_err());
        assert!(Params::new(15, 1).is_err());

        // 5 generates the units mod 9 as well: 5,7,8,4,2,1
        let q = Params::with_root(3, 2, 5).unwrap();
        assert_eq!(q.g(), 5);
        assert!(Params::with_root(3, 2, 8).is_err()); // order 2
        assert!(Params::with_root(3, 2, 3).is_err()); // not a unit
        assert!(Params::with_root(3, 2, 9).is_err()); // out of range
    }

    #[test]
    fn mersenne_values() {
        assert_eq!(mersenne(9), BigUint::from(511u32));
        assert_eq!(mersenne(1), BigUint::one());
    }

    #[test]
    fn gcd_identity_small_instance() {
        // p=3, n=2, m=1: gcd(7, 511/7 = 73) = 1 = gcd(7, 3)
        let c = check_gcd_identity(3, 2, 1).unwrap();
        assert_eq!(c.lhs, BigUint::one());
        assert_eq!(c.rhs, BigUint::one());
        assert!(c.equal && c.is_one);
    }

    #[test]
    fn gcd_identity_rejects_bad_level() {
        assert!(matches!(
            check_gcd_identity(3, 2, 2),
            Err(Error::LevelOutOfRange { .. })
        ));
        assert!(check_gcd_identity(3, 1, 1).is_err());
    }
}
