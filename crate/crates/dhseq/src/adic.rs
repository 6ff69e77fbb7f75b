//! Exact 2-adic complexity of one period, and the determinant of the
//! associated circulant by three routes: the closed-form product, the
//! resultant Res(x^N - 1, S(x)), and brute-force fraction-free
//! elimination. No floating point anywhere; all verdicts are integer.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::cyclotomy::ClassTable;
use crate::error::{Error, Result};
use crate::numtheory::{is_prime, mersenne, mul_mod, pow_mod, Params};
use crate::sequence::BinarySeq;

/// Everything the 2-adic complexity computation produces. `g` is
/// gcd(S(2), 2^N - 1); phi2 is the floor log2 of (2^N - 1)/g.
#[derive(Debug, Clone, Serialize)]
pub struct ComplexityReport {
    pub params: Params,
    #[serde(rename = "S2", with = "crate::serde_util::biguint_dec")]
    pub s2: BigUint,
    #[serde(with = "crate::serde_util::biguint_dec")]
    pub modulus: BigUint,
    #[serde(rename = "g", with = "crate::serde_util::biguint_dec")]
    pub gcd: BigUint,
    pub phi2: u64,
    pub bound: u64,
    pub bound_ok: bool,
    /// phi2 >= (N+1)/2, recorded for information only; the asserted
    /// statement is `bound_ok`.
    pub half_period_ok: bool,
}

pub fn two_adic_complexity(seq: &BinarySeq) -> ComplexityReport {
    let params = seq.params();
    let s2 = seq.s_of_two();
    let modulus = mersenne(params.period());
    let gcd = s2.gcd(&modulus);
    let reduced = &modulus / &gcd;
    // floor log2 of an integer >= 1 is its bit length minus one
    let phi2 = reduced.bits() - 1;
    let bound = params.period() - params.prime_power(params.n() - 1) - 1;
    ComplexityReport {
        params,
        s2,
        modulus,
        phi2,
        bound,
        bound_ok: phi2 >= bound,
        half_period_ok: phi2 >= (params.period() + 1) / 2,
        gcd,
    }
}

/// The determinant of the circulant of a generated period, as a product
/// of (p^n+1)/2 and one integer factor per level. The per-level base is
/// (p^{2m+1} - 1)/4 when p = 1 mod 4 and (p^{2m+1} + 1)/4 when
/// p = 3 mod 4; divisibility by 4 is guaranteed by the residue class and
/// asserted here rather than trusted.
pub fn det_closed_form(params: Params) -> Result<BigInt> {
    let p = params.p();
    let mut det = BigUint::from((params.period() + 1) / 2);
    for m in 0..params.n() {
        let pw = BigUint::from(p).pow(2 * m + 1);
        let base = if p % 4 == 1 { pw - 1u32 } else { pw + 1u32 };
        let (factor, rem) = base.div_rem(&BigUint::from(4u32));
        if !rem.is_zero() {
            return Err(Error::NonIntegralFactor(format!(
                "level {m} base for p = {p} is not divisible by 4"
            )));
        }
        let exp = params.prime_power(params.n() - m - 1) * (p - 1) / 2;
        let exp = u32::try_from(exp)
            .map_err(|_| Error::InvalidParams(format!("factor exponent {exp} too large")))?;
        det *= factor.pow(exp);
    }
    Ok(BigInt::from(det))
}

/// Res(x^N - 1, S(x)) by the method suited to the size: exact Sylvester
/// determinant up to N = 60, modular CRT above. Rejects periods above
/// `cap` because cost grows quickly.
pub fn det_resultant(seq: &BinarySeq, cap: u64) -> Result<BigInt> {
    let period = seq.params().period();
    if period > cap {
        return Err(Error::CapExceeded {
            quantity: "period",
            value: period,
            cap,
        });
    }
    Ok(if period <= 60 {
        resultant_sylvester(seq)
    } else {
        resultant_crt(seq)
    })
}

/// Resultant via the Sylvester matrix of x^N - 1 and S(x), eliminated
/// fraction-free. Exact but O((N + deg S)^3) big-integer operations.
pub fn resultant_sylvester(seq: &BinarySeq) -> BigInt {
    let n = seq.bits().len();
    let Some(d) = seq.bits().iter().rposition(|&b| b == 1) else {
        return BigInt::zero(); // S = 0 and deg f >= 1
    };
    // descending coefficient rows: f = x^N - 1, g = S
    let mut f_desc = vec![BigInt::zero(); n + 1];
    f_desc[0] = BigInt::one();
    f_desc[n] = BigInt::from(-1);
    let g_desc: Vec<BigInt> = (0..=d).map(|j| BigInt::from(seq.bits()[d - j])).collect();

    let size = n + d;
    let mut matrix = vec![vec![BigInt::zero(); size]; size];
    for r in 0..d {
        for (j, c) in f_desc.iter().enumerate() {
            matrix[r][r + j] = c.clone();
        }
    }
    for r in 0..n {
        for (j, c) in g_desc.iter().enumerate() {
            matrix[d + r][r + j] = c.clone();
        }
    }
    bareiss_det(matrix)
}

/// Fraction-free Gaussian elimination; every division is exact.
fn bareiss_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = !sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                debug_assert!((&num % &prev).is_zero(), "Bareiss division must be exact");
                a[i][j] = num / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    let det = std::mem::take(&mut a[n - 1][n - 1]);
    if sign {
        -det
    } else {
        det
    }
}

/// Resultant via residues modulo 31-bit primes, recombined by CRT once
/// the accumulated modulus clears twice the Hadamard bound
/// 2^ceil(d/2) * w^ceil(N/2) (coefficient norms of the two inputs).
pub fn resultant_crt(seq: &BinarySeq) -> BigInt {
    let bits = seq.bits();
    let n = bits.len();
    if bits.iter().all(|&b| b == 0) {
        return BigInt::zero();
    }
    let d = bits.iter().rposition(|&b| b == 1).unwrap();
    let w = seq.weight();
    let bound = (BigUint::one() << ((d + 1) / 2))
        * BigUint::from(w).pow(((n + 1) / 2) as u32);
    let target = &bound * 2u32;

    let mut acc = BigUint::zero();
    let mut modulus = BigUint::one();
    for q in (0u64..).map(|k| 2_147_483_647 - 2 * k).filter(|&c| is_prime(c)) {
        let r = resultant_mod_prime(n, bits, q);
        crt_push(&mut acc, &mut modulus, r, q);
        if modulus > target {
            break;
        }
    }
    if &acc * 2u32 > modulus {
        BigInt::from(acc) - BigInt::from(modulus)
    } else {
        BigInt::from(acc)
    }
}

fn poly_deg(v: &[u64]) -> Option<usize> {
    v.iter().rposition(|&c| c != 0)
}

fn poly_rem(mut a: Vec<u64>, b: &[u64], db: usize, q: u64) -> Vec<u64> {
    let inv = pow_mod(b[db], q - 2, q);
    while let Some(da) = poly_deg(&a) {
        if da < db {
            break;
        }
        let factor = mul_mod(a[da], inv, q);
        let shift = da - db;
        for k in 0..=db {
            if b[k] != 0 {
                let sub = mul_mod(factor, b[k], q);
                a[shift + k] = (a[shift + k] + q - sub) % q;
            }
        }
    }
    a
}

/// Res(x^n - 1, S(x)) in F_q by the Euclidean recurrence
/// Res(a, b) = (-1)^{da db} lc(b)^{da - dr} Res(b, r), r = a mod b.
fn resultant_mod_prime(n: usize, bits: &[u8], q: u64) -> u64 {
    let mut a = vec![0u64; n + 1];
    a[0] = q - 1;
    a[n] = 1;
    let mut b: Vec<u64> = bits.iter().map(|&x| x as u64).collect();

    let Some(mut da) = poly_deg(&a) else { return 0 };
    let Some(mut db) = poly_deg(&b) else { return 0 };
    let mut negate = false;
    if da < db {
        std::mem::swap(&mut a, &mut b);
        std::mem::swap(&mut da, &mut db);
        if da & db & 1 == 1 {
            negate = !negate;
        }
    }
    let mut res = 1u64;
    loop {
        if db == 0 {
            res = mul_mod(res, pow_mod(b[0], da as u64, q), q);
            break;
        }
        let r = poly_rem(a, &b, db, q);
        let Some(dr) = poly_deg(&r) else { return 0 };
        res = mul_mod(res, pow_mod(b[db], (da - dr) as u64, q), q);
        if da & db & 1 == 1 {
            negate = !negate;
        }
        a = b;
        da = db;
        b = r;
        db = dr;
    }
    if negate {
        (q - res) % q
    } else {
        res
    }
}

/// Merge residue r mod q into the running CRT pair (acc, modulus).
fn crt_push(acc: &mut BigUint, modulus: &mut BigUint, r: u64, q: u64) {
    let q_big = BigUint::from(q);
    let m_mod_q = (&*modulus % &q_big).to_u64().expect("residue fits u64");
    let a_mod_q = (&*acc % &q_big).to_u64().expect("residue fits u64");
    let delta = (r + q - a_mod_q) % q;
    let t = mul_mod(delta, pow_mod(m_mod_q, q - 2, q), q);
    *acc += &*modulus * BigUint::from(t);
    *modulus *= q_big;
}

/// Determinant of the N x N circulant with first column s, entries
/// a[k][j] = s[(k - j) mod N]. Brute-force oracle for the other routes;
/// cost is cubic, intended for small N.
pub fn circulant_determinant(seq: &BinarySeq) -> BigInt {
    let n = seq.bits().len();
    let matrix: Vec<Vec<BigInt>> = (0..n)
        .map(|k| {
            (0..n)
                .map(|j| BigInt::from(seq.bits()[(k + n - j) % n]))
                .collect()
        })
        .collect();
    bareiss_det(matrix)
}

/// True iff gcd(S(2), 2^N - 1) divides gcd(det, 2^N - 1).
pub fn verify_divisibility(seq: &BinarySeq, det: &BigInt) -> Result<bool> {
    if det.is_zero() {
        return Err(Error::ZeroDeterminant);
    }
    let modulus = mersenne(seq.params().period());
    let g_seq = seq.s_of_two().gcd(&modulus);
    let g_det = det.magnitude().gcd(&modulus);
    Ok((&g_det % &g_seq).is_zero())
}

/// Closed form and resultant side by side, plus the divisibility check
/// against the resultant value.
#[derive(Debug, Clone, Serialize)]
pub struct DetReport {
    pub params: Params,
    #[serde(with = "crate::serde_util::bigint_dec")]
    pub det_closed: BigInt,
    #[serde(with = "crate::serde_util::bigint_dec")]
    pub det_resultant: BigInt,
    #[serde(rename = "match")]
    pub is_match: bool,
    pub divisibility_ok: bool,
}

pub fn det_report(seq: &BinarySeq, resultant_cap: u64) -> Result<DetReport> {
    let det_closed = det_closed_form(seq.params())?;
    let det_res = det_resultant(seq, resultant_cap)?;
    let divisibility_ok = verify_divisibility(seq, &det_res)?;
    Ok(DetReport {
        params: seq.params(),
        is_match: det_closed == det_res,
        det_closed,
        det_resultant: det_res,
        divisibility_ok,
    })
}

/// Outcome of the full complexity pipeline for one parameter point.
#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub params: Params,
    pub phi2: u64,
    pub bound: u64,
    pub bound_ok: bool,
    #[serde(with = "crate::serde_util::biguint_dec")]
    pub gcd: BigUint,
    pub gcd_is_one: bool,
    pub divides_det_gcd: bool,
    pub divides_low_mersenne: bool,
    pub all_ok: bool,
}

/// Runs classes -> sequence -> complexity and checks the lower bound
/// phi2 >= p^n - p^{n-1} - 1 together with the two divisibility claims
/// behind it: gcd(S(2), 2^N - 1) divides gcd(det, 2^N - 1), and it
/// divides 2^{p^{n-1}} - 1. Uses the closed-form determinant, which is
/// exact for generated sequences at any size.
pub fn verify_lower_bound(params: Params) -> Result<BoundReport> {
    let table = ClassTable::build(params);
    let seq = BinarySeq::generate(&table);
    let complexity = two_adic_complexity(&seq);
    let det = det_closed_form(params)?;
    let divides_det_gcd = verify_divisibility(&seq, &det)?;
    let low = mersenne(params.prime_power(params.n() - 1));
    let divides_low_mersenne = (&low % &complexity.gcd).is_zero();
    let all_ok = complexity.bound_ok && divides_det_gcd && divides_low_mersenne;
    Ok(BoundReport {
        params,
        phi2: complexity.phi2,
        bound: complexity.bound,
        bound_ok: complexity.bound_ok,
        gcd_is_one: complexity.gcd.is_one(),
        gcd: complexity.gcd,
        divides_det_gcd,
        divides_low_mersenne,
        all_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(p: u64, n: u32) -> BinarySeq {
        BinarySeq::generate(&ClassTable::build(Params::new(p, n).unwrap()))
    }

    #[test]
    fn complexity_known_values() {
        let r = two_adic_complexity(&seq(5, 1));
        assert_eq!(r.s2, BigUint::from(13u32));
        assert_eq!(r.gcd, BigUint::one());
        assert_eq!((r.phi2, r.bound), (4, 3));
        assert!(r.bound_ok && r.half_period_ok);

        let r = two_adic_complexity(&seq(3, 2));
        assert_eq!(r.s2, BigUint::from(357u32));
        assert_eq!(r.modulus, BigUint::from(511u32));
        assert_eq!(r.gcd, BigUint::from(7u32));
        assert_eq!((r.phi2, r.bound), (6, 5));
        assert!(r.bound_ok && r.half_period_ok);

        let r = two_adic_complexity(&seq(3, 1));
        assert_eq!((r.phi2, r.bound), (2, 1));
    }

    #[test]
    fn closed_form_known_values() {
        let det = |p, n| det_closed_form(Params::new(p, n).unwrap()).unwrap();
        assert_eq!(det(3, 1), BigInt::from(2));
        assert_eq!(det(3, 2), BigInt::from(35));
        assert_eq!(det(5, 1), BigInt::from(3));
        assert_eq!(det(5, 2), BigInt::from(12493)); // 13 * 31^2
    }

    #[test]
    fn resultant_known_values() {
        assert_eq!(det_resultant(&seq(3, 1), 200).unwrap(), BigInt::from(2));
        assert_eq!(det_resultant(&seq(3, 2), 200).unwrap(), BigInt::from(35));
        assert_eq!(det_resultant(&seq(5, 2), 200).unwrap(), BigInt::from(12493));

        let ones = BinarySeq::from_bits(Params::new(3, 1).unwrap(), vec![1; 3]).unwrap();
        assert!(det_resultant(&ones, 200).unwrap().is_zero());

        assert!(matches!(
            det_resultant(&seq(3, 5), 200),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn three_routes_agree_on_small_periods() {
        for (p, n) in [(3, 1), (3, 2), (3, 3), (5, 1), (5, 2), (7, 1), (11, 1), (13, 1)] {
            let s = seq(p, n);
            let closed = det_closed_form(s.params()).unwrap();
            let sylvester = resultant_sylvester(&s);
            let modular = resultant_crt(&s);
            let brute = circulant_determinant(&s);
            assert_eq!(closed, sylvester, "p={p} n={n}");
            assert_eq!(closed, modular, "p={p} n={n}");
            assert_eq!(closed, brute, "p={p} n={n}");
        }
    }

    #[test]
    fn divisibility_known_values() {
        assert!(verify_divisibility(&seq(3, 2), &BigInt::from(35)).unwrap());
        assert!(verify_divisibility(&seq(5, 1), &BigInt::from(3)).unwrap());
        assert!(verify_divisibility(&seq(3, 1), &BigInt::from(2)).unwrap());
        assert!(matches!(
            verify_divisibility(&seq(3, 1), &BigInt::zero()),
            Err(Error::ZeroDeterminant)
        ));
        // 3 does not divide gcd(5, 7) = 1 trivially holds; force a failure
        // with a sequence whose gcd is 7 against a determinant coprime to it
        assert!(!verify_divisibility(&seq(3, 2), &BigInt::from(2)).unwrap());
    }

    #[test]
    fn lower_bound_pipeline() {
        let r = verify_lower_bound(Params::new(3, 2).unwrap()).unwrap();
        assert_eq!((r.phi2, r.bound), (6, 5));
        assert_eq!(r.gcd, BigUint::from(7u32));
        assert!(!r.gcd_is_one);
        assert!(r.all_ok);

        let r = verify_lower_bound(Params::new(5, 1).unwrap()).unwrap();
        assert_eq!((r.phi2, r.bound), (4, 3));
        assert!(r.all_ok && r.gcd_is_one);

        let r = verify_lower_bound(Params::new(7, 2).unwrap()).unwrap();
        assert_eq!(r.bound, 41);
        assert!(r.all_ok);
    }

    #[test]
    fn det_report_shape() {
        let rep = det_report(&seq(3, 2), 200).unwrap();
        assert!(rep.is_match && rep.divisibility_ok);
        let json = serde_json::to_value(&rep).unwrap();
        assert_eq!(json["det_closed"], "35");
        assert_eq!(json["match"], true);
    }
}
