//! One period of the binary sequence induced by the two-class partition,
//! its 2-adic integer image S(2), and linear complexity over GF(2).

use num_bigint::BigUint;
use serde::Serialize;

use crate::cyclotomy::{ClassTable, Label};
use crate::error::{Error, Result};
use crate::numtheory::Params;

/// One period s_0..s_{N-1}. Bit i is 1 exactly when i lies in the
/// class-1 half of the partition (zero included).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinarySeq {
    params: Params,
    bits: Vec<u8>,
}

impl BinarySeq {
    pub fn generate(table: &ClassTable) -> Self {
        let params = table.params();
        let bits = (0..params.period())
            .map(|i| match table.label(i) {
                Label::Zero => 1,
                Label::Class { class, .. } => class,
            })
            .collect();
        BinarySeq { params, bits }
    }

    /// Wraps caller-supplied bits (one full period, entries 0/1), for
    /// running the analysis machinery on arbitrary sequences.
    pub fn from_bits(params: Params, bits: Vec<u8>) -> Result<Self> {
        if bits.len() as u64 != params.period() {
            return Err(Error::LengthMismatch {
                len: bits.len(),
                expected: params.period(),
            });
        }
        if let Some((index, &value)) = bits.iter().enumerate().find(|(_, &b)| b > 1) {
            return Err(Error::NonBinaryEntry { index, value });
        }
        Ok(BinarySeq { params, bits })
    }

    pub fn params(&self) -> Params {
        self.params
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn bit(&self, i: u64) -> u8 {
        self.bits[(i % self.params.period()) as usize]
    }

    pub fn weight(&self) -> u64 {
        self.bits.iter().map(|&b| b as u64).sum()
    }

    pub fn complement(&self) -> Self {
        BinarySeq {
            params: self.params,
            bits: self.bits.iter().map(|&b| 1 - b).collect(),
        }
    }

    /// S(2) = sum s_i 2^i, with s_0 the least-significant bit.
    pub fn s_of_two(&self) -> BigUint {
        BigUint::from_radix_le(&self.bits, 2).expect("bits are valid base-2 digits")
    }

    /// ASCII rendering with s_0 leftmost.
    pub fn bit_string(&self) -> String {
        self.bits.iter().map(|&b| (b'0' + b) as char).collect()
    }

    /// Hex rendering of S(2); note the value packs s_0 as the least
    /// significant bit, so the string reads opposite to `bit_string`.
    pub fn s2_hex(&self) -> String {
        self.s_of_two().to_str_radix(16)
    }

    pub fn export(&self) -> SeqExport {
        SeqExport {
            p: self.params.p(),
            n: self.params.n(),
            g: self.params.g(),
            bits: self.bit_string(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SeqExport {
    pub p: u64,
    pub n: u32,
    pub g: u64,
    pub bits: String,
}

fn gf2_deg(a: &[u8]) -> Option<usize> {
    a.iter().rposition(|&c| c == 1)
}

fn gf2_rem(mut a: Vec<u8>, b: &[u8]) -> Vec<u8> {
    let db = gf2_deg(b).expect("remainder by zero polynomial");
    while let Some(da) = gf2_deg(&a) {
        if da < db {
            break;
        }
        let shift = da - db;
        for k in 0..=db {
            a[shift + k] ^= b[k];
        }
    }
    a
}

fn gf2_gcd(mut a: Vec<u8>, mut b: Vec<u8>) -> Vec<u8> {
    while gf2_deg(&b).is_some() {
        let r = gf2_rem(a, &b);
        a = b;
        b = r;
    }
    a
}

/// Classical LFSR synthesis over GF(2); returns the length of the
/// shortest register generating `bits`.
pub fn berlekamp_massey(bits: &[u8]) -> usize {
    let n = bits.len();
    let mut c = vec![0u8; n + 1];
    let mut b = vec![0u8; n + 1];
    c[0] = 1;
    b[0] = 1;
    let mut l = 0usize;
    let mut m = 1usize; // steps since the last length change
    for i in 0..n {
        let mut d = bits[i];
        for j in 1..=l {
            d ^= c[j] & bits[i - j];
        }
        if d == 0 {
            m += 1;
        } else if 2 * l <= i {
            let t = c.clone();
            for j in 0..=(n - m) {
                c[j + m] ^= b[j];
            }
            l = i + 1 - l;
            b = t;
            m = 1;
        } else {
            for j in 0..=(n - m) {
                c[j + m] ^= b[j];
            }
            m += 1;
        }
    }
    l
}

/// Linear complexity of the periodic extension of one period, computed
/// two independent ways that must agree:
/// N - deg gcd(x^N + 1, S(x)) over GF(2), and LFSR synthesis on 2N bits.
pub fn linear_complexity(seq: &BinarySeq) -> u64 {
    let n = seq.bits().len();
    let mut xn1 = vec![0u8; n + 1];
    xn1[0] = 1;
    xn1[n] = 1;
    let g = gf2_gcd(xn1, seq.bits().to_vec());
    let via_gcd = (n - gf2_deg(&g).expect("gcd of nonzero and anything is nonzero")) as u64;

    let doubled: Vec<u8> = seq.bits().iter().chain(seq.bits()).copied().collect();
    let via_synthesis = berlekamp_massey(&doubled) as u64;

    assert_eq!(
        via_gcd, via_synthesis,
        "linear complexity routes disagree for p={} n={}",
        seq.params().p(),
        seq.params().n()
    );
    via_gcd
}
