//! Rational approximation of a 2-adic bit stream: recovers a smallest
//! pair (f, q), q odd, with f = q * A (mod 2^T) where A is the integer
//! carried by the first T stream bits. For a purely periodic stream this
//! denominator is (2^N - 1)/gcd(2^N - 1, S(2)), which makes the
//! procedure an independent oracle for the 2-adic complexity.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::adic::two_adic_complexity;
use crate::error::{Error, Result};
use crate::sequence::BinarySeq;

/// Reduced rational representation of a stream prefix. Invariants:
/// q is odd and positive, gcd(f, q) = 1, and f = q*A (mod 2^bits_used).
#[derive(Debug, Clone, Serialize)]
pub struct RationalApprox {
    #[serde(with = "crate::serde_util::bigint_dec")]
    pub f: BigInt,
    #[serde(with = "crate::serde_util::bigint_dec")]
    pub q: BigInt,
    pub bits_used: usize,
}

/// Basis vector of the approximation lattice, with the residual
/// t = f - A*q carried along so per-bit membership tests are O(1) shifts.
#[derive(Debug, Clone)]
struct LatticeVec {
    f: BigInt,
    q: BigInt,
    t: BigInt,
}

impl LatticeVec {
    fn double(&mut self) {
        self.f *= 2;
        self.q *= 2;
        self.t *= 2;
    }

    fn sub_scaled(&mut self, other: &LatticeVec, mu: &BigInt) {
        self.f -= mu * &other.f;
        self.q -= mu * &other.q;
        self.t -= mu * &other.t;
    }

    fn residual_bit(&self, k: usize) -> bool {
        (&self.t >> k).is_odd()
    }

    fn norm2(&self) -> BigInt {
        &self.f * &self.f + &self.q * &self.q
    }

    fn sum(&self, other: &LatticeVec) -> LatticeVec {
        LatticeVec {
            f: &self.f + &other.f,
            q: &self.q + &other.q,
            t: &self.t + &other.t,
        }
    }

    fn difference(&self, other: &LatticeVec) -> LatticeVec {
        LatticeVec {
            f: &self.f - &other.f,
            q: &self.q - &other.q,
            t: &self.t - &other.t,
        }
    }
}

/// Nearest integer to a/b for b > 0, ties rounded down-magnitude-free
/// (floor of (2a + b)/(2b)).
fn round_div(a: &BigInt, b: &BigInt) -> BigInt {
    ((a << 1u32) + b).div_floor(&(b << 1u32))
}

/// Lagrange-Gauss reduction on the current basis; leaves `u` the shorter
/// vector and `v` nearly orthogonal to it.
fn reduce_basis(u: &mut LatticeVec, v: &mut LatticeVec) {
    loop {
        if u.norm2() > v.norm2() {
            std::mem::swap(u, v);
        }
        let nu = u.norm2();
        if nu.is_zero() {
            break;
        }
        let dot = &u.f * &v.f + &u.q * &v.q;
        let mu = round_div(&dot, &nu);
        if mu.is_zero() {
            break;
        }
        v.sub_scaled(u, &mu);
    }
}

/// Successive lattice approximation over the prefix. Starting from the
/// full plane, each consumed bit halves the lattice of pairs (f, q) with
/// f = q*A (mod 2^k); the basis is updated by combining whichever
/// vectors fail the new congruence and kept short by Gauss reduction.
pub fn rational_approximation(bits: &[u8]) -> Result<RationalApprox> {
    if bits.len() < 4 {
        return Err(Error::PrefixTooShort {
            len: bits.len(),
            min: 4,
        });
    }
    if let Some((index, &value)) = bits.iter().enumerate().find(|(_, &b)| b > 1) {
        return Err(Error::NonBinaryEntry { index, value });
    }
    let t_len = bits.len();
    let value = BigInt::from(BigUint::from_radix_le(bits, 2).expect("binary digits"));

    let mut u = LatticeVec {
        f: BigInt::one(),
        q: BigInt::zero(),
        t: BigInt::one(),
    };
    let mut v = LatticeVec {
        f: BigInt::zero(),
        q: BigInt::one(),
        t: -&value,
    };

    for k in 0..t_len {
        match (u.residual_bit(k), v.residual_bit(k)) {
            (false, false) => {}
            (true, false) => u.double(),
            (false, true) => v.double(),
            (true, true) => {
                // u - v satisfies the new congruence; 2v restores rank
                let fixed = u.difference(&v);
                u = fixed;
                v.double();
            }
        }
        reduce_basis(&mut u, &mut v);
    }

    // smallest max(|f|, |q|) candidate with an odd denominator; the basis
    // cannot have two even denominators, so one always exists
    let candidates = [u.clone(), v.clone(), u.sum(&v), u.difference(&v)];
    let mut best: Option<&LatticeVec> = None;
    let mut best_score = BigInt::zero();
    for cand in &candidates {
        if !cand.q.is_odd() {
            continue;
        }
        let score = cand.f.abs().max(cand.q.abs());
        if best.is_none() || score < best_score {
            best = Some(cand);
            best_score = score;
        }
    }
    let chosen = best.expect("lattice basis spans odd denominators");

    let (mut f, mut q) = (chosen.f.clone(), chosen.q.clone());
    if q.is_negative() {
        f = -f;
        q = -q;
    }
    let common = f.gcd(&q); // odd, so dividing preserves the congruence
    if !common.is_one() {
        f /= &common;
        q /= &common;
    }

    let pow2 = BigInt::one() << t_len;
    assert!(
        ((&f - &q * &value) % &pow2).is_zero(),
        "approximation violates its congruence"
    );
    assert!(q.is_odd() && q.is_positive());
    assert!(f.gcd(&q).is_one());

    Ok(RationalApprox {
        f,
        q,
        bits_used: t_len,
    })
}

/// Independent confirmation of the 2-adic complexity: runs the
/// approximation on 2N + 4 bits of the periodic extension and compares
/// the floor log2 of the reduced denominator with phi2.
pub fn cross_check(seq: &BinarySeq, cap: u64) -> Result<bool> {
    let period = seq.params().period();
    if period > cap {
        return Err(Error::CapExceeded {
            quantity: "period",
            value: period,
            cap,
        });
    }
    let t_len = (2 * period + 4) as usize;
    let stream: Vec<u8> = (0..t_len as u64).map(|i| seq.bit(i)).collect();
    let approx = rational_approximation(&stream)?;
    let denom_log = approx.q.magnitude().bits() - 1;
    Ok(denom_log == two_adic_complexity(seq).phi2)
}
