//! Exact arithmetic in Z[w], w a primitive p^n-th root of unity, over the
//! power basis modulo the prime-power cyclotomic polynomial
//! Phi(x) = sum_{k<p} x^{k e} with e = p^{n-1}. Used to evaluate Gauss
//! periods and the spectral values S(w^a) with integer coefficients only.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;
use std::ops::{Add, Mul, Neg, Sub};

use crate::cyclotomy::{ClassTable, Label};
use crate::error::{Error, Result};
use crate::numtheory::Params;
use crate::report::{Check, SuiteReport};
use crate::sequence::BinarySeq;

/// Element of Z[w] in canonical form: coefficients of 1, x, ...,
/// x^{phi-1} with phi = (p-1) p^{n-1}. Canonical forms are equal exactly
/// when the field elements are equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycInt {
    params: Params,
    coeffs: Vec<BigInt>,
}

impl CycInt {
    pub fn zero(params: Params) -> Self {
        CycInt {
            params,
            coeffs: vec![BigInt::zero(); params.phi() as usize],
        }
    }

    pub fn constant(params: Params, c: impl Into<BigInt>) -> Self {
        let mut out = Self::zero(params);
        out.coeffs[0] = c.into();
        out
    }

    /// w^e in canonical form.
    pub fn root_power(params: Params, e: u64) -> Self {
        Self::from_exponents(params, [e])
    }

    /// Canonical form of sum_x w^x over a multiset of exponents mod p^n.
    pub fn from_exponents(params: Params, exponents: impl IntoIterator<Item = u64>) -> Self {
        let period = params.period();
        let mut acc = vec![BigInt::zero(); period as usize];
        for e in exponents {
            acc[(e % period) as usize] += 1;
        }
        Self::reduce(params, acc)
    }

    /// Long division by the sparse modulus: every coefficient at position
    /// j >= phi folds down via x^phi = -(1 + x^e + ... + x^{(p-2)e}) shifted
    /// by j - phi. Positions touched stay strictly below j, so one
    /// descending pass suffices.
    fn reduce(params: Params, mut acc: Vec<BigInt>) -> Self {
        let phi = params.phi() as usize;
        let e = params.prime_power(params.n() - 1) as usize;
        let terms = (params.p() - 1) as usize;
        for j in (phi..acc.len()).rev() {
            if acc[j].is_zero() {
                continue;
            }
            let c = std::mem::take(&mut acc[j]);
            let base = j - phi;
            for k in 0..terms {
                acc[base + k * e] -= &c;
            }
        }
        acc.truncate(phi);
        acc.resize(phi, BigInt::zero());
        CycInt { params, coeffs: acc }
    }

    pub fn params(&self) -> Params {
        self.params
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn scale(&self, k: impl Into<BigInt>) -> Self {
        let k = k.into();
        CycInt {
            params: self.params,
            coeffs: self.coeffs.iter().map(|c| c * &k).collect(),
        }
    }

    pub fn export(&self) -> CycIntExport {
        CycIntExport {
            coeffs: self.coeffs.clone(),
            is_zero: self.is_zero(),
        }
    }

    fn assert_same_params(&self, rhs: &Self) {
        assert_eq!(
            self.params, rhs.params,
            "operands live in different cyclotomic rings"
        );
    }
}

/// Diagnostic JSON view; coefficients as decimal strings.
#[derive(Debug, Clone, Serialize)]
pub struct CycIntExport {
    #[serde(with = "crate::serde_util::bigint_vec_dec")]
    pub coeffs: Vec<BigInt>,
    pub is_zero: bool,
}

impl Add for &CycInt {
    type Output = CycInt;
    fn add(self, rhs: &CycInt) -> CycInt {
        self.assert_same_params(rhs);
        CycInt {
            params: self.params,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &CycInt {
    type Output = CycInt;
    fn sub(self, rhs: &CycInt) -> CycInt {
        self.assert_same_params(rhs);
        CycInt {
            params: self.params,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        CycInt {
            params: self.params,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &CycInt {
    type Output = CycInt;
    fn mul(self, rhs: &CycInt) -> CycInt {
        self.assert_same_params(rhs);
        let phi = self.coeffs.len();
        let mut conv = vec![BigInt::zero(); 2 * phi.max(1) - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                conv[i + j] += a * b;
            }
        }
        CycInt::reduce(self.params, conv)
    }
}

/// The Gauss period for class `i` at level `m`, embedded in Z[w]:
/// sum of w^x over the scaled coset p^{n-m} D_i^{(p^m)}.
pub fn gauss_period(table: &ClassTable, i: u8, m: u32) -> CycInt {
    assert!(i < 2, "class index must be 0 or 1");
    assert!(m >= 1 && m <= table.params().n(), "level out of range");
    CycInt::from_exponents(table.params(), table.coset(m, i))
}

/// Exact checks on the Gauss periods:
/// (a) the two level-1 periods sum to -1;
/// (b) the root powers over the multiples of p sum to zero (n >= 2);
/// (c) both periods vanish at every level m >= 2;
/// (d) 4 times the product of the level-1 periods is 1-p or 1+p
///     according to p mod 4.
pub fn verify_gauss_theorems(table: &ClassTable) -> SuiteReport {
    let params = table.params();
    let mut checks = Vec::new();

    let eta0 = gauss_period(table, 0, 1);
    let eta1 = gauss_period(table, 1, 1);

    let sum = &(&eta0 + &eta1) + &CycInt::constant(params, 1);
    checks.push(Check::from_condition(
        "level_one_sum",
        sum.is_zero(),
        format!("eta0 + eta1 + 1 = {:?}", sum.coeffs()),
    ));

    if params.n() >= 2 {
        let r_sum = CycInt::from_exponents(params, table.r_set());
        checks.push(Check::from_condition(
            "multiples_sum",
            r_sum.is_zero(),
            format!("sum over multiples of p = {:?}", r_sum.coeffs()),
        ));

        for m in 2..=params.n() {
            let bad: Vec<u8> = (0..2u8)
                .filter(|&i| !gauss_period(table, i, m).is_zero())
                .collect();
            checks.push(Check::from_condition(
                format!("periods_vanish_level_{m}"),
                bad.is_empty(),
                format!("nonzero period(s) for class(es) {bad:?} at level {m}"),
            ));
        }
    }

    let product = (&eta0 * &eta1).scale(4);
    let want = if params.p() % 4 == 1 {
        1 - params.p() as i64
    } else {
        1 + params.p() as i64
    };
    let diff = &product - &CycInt::constant(params, want);
    checks.push(Check::from_condition(
        "level_one_product",
        diff.is_zero(),
        format!("4 * eta0 * eta1 - ({want}) = {:?}", diff.coeffs()),
    ));

    SuiteReport::new("gauss", checks)
}

/// Which closed-form branch a root exponent falls in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootBranch {
    /// a = 0: the value is the sequence weight (N+1)/2.
    One,
    /// a = p^valuation * u with u a unit whose top-level class is `class`.
    Coset { valuation: u32, class: u8 },
}

#[derive(Debug, Clone)]
pub struct SpectralValue {
    pub a: u64,
    pub branch: RootBranch,
    pub value: CycInt,
    pub expected: CycInt,
    pub matches: bool,
}

/// Evaluates S(w^a) = sum_{s_i = 1} w^{a i} exactly and compares it with
/// the closed form for a's branch: (p^n+1)/2 at a = 0, otherwise
/// (p^m+1)/2 + p^m * (level-1 period of the opposite class), where m is
/// the exponent of p in a.
pub fn eval_s_at_root(seq: &BinarySeq, table: &ClassTable, a: u64) -> Result<SpectralValue> {
    let params = seq.params();
    assert_eq!(params, table.params(), "sequence and table disagree");
    let period = params.period();
    if a >= period {
        return Err(Error::ExponentOutOfRange { a, period });
    }

    let value = CycInt::from_exponents(
        params,
        seq.bits()
            .iter()
            .enumerate()
            .filter(|(_, &b)| b == 1)
            .map(|(i, _)| (a * i as u64) % period),
    );

    let (branch, expected) = match table.label(a) {
        Label::Zero => (
            RootBranch::One,
            CycInt::constant(params, (period + 1) / 2),
        ),
        Label::Class { level, class } => {
            let valuation = params.n() - level;
            let pm = params.prime_power(valuation);
            let eta = gauss_period(table, 1 - class, 1);
            (
                RootBranch::Coset { valuation, class },
                &CycInt::constant(params, (pm + 1) / 2) + &eta.scale(pm),
            )
        }
    };

    let matches = value == expected;
    Ok(SpectralValue {
        a,
        branch,
        value,
        expected,
        matches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomy::ClassTable;

    fn setup(p: u64, n: u32) -> (Params, ClassTable) {
        let params = Params::new(p, n).unwrap();
        (params, ClassTable::build(params))
    }

    fn coeffs(c: &CycInt) -> Vec<i64> {
        c.coeffs()
            .iter()
            .map(|b| i64::try_from(b).unwrap())
            .collect()
    }

    #[test]
    fn reduction_known_forms() {
        let (params, _) = setup(3, 2);
        // x^6 = -(1 + x^3) mod 1 + x^3 + x^6
        assert_eq!(coeffs(&CycInt::root_power(params, 6)), vec![-1, 0, 0, -1, 0, 0]);
        assert!(CycInt::from_exponents(params, [1, 4, 7]).is_zero());
        assert_eq!(coeffs(&CycInt::from_exponents(params, [0])), vec![1, 0, 0, 0, 0, 0]);
        assert!(CycInt::from_exponents(params, 0..9).is_zero());

        let (params, _) = setup(5, 1);
        // w + w^4 with x^4 = -(1 + x + x^2 + x^3)
        assert_eq!(
            coeffs(&CycInt::from_exponents(params, [1, 4])),
            vec![-1, 0, -1, -1]
        );
    }

    #[test]
    fn ring_identities() {
        let (params, _) = setup(3, 2);
        let a = CycInt::from_exponents(params, [1, 2, 5]);
        let one = CycInt::constant(params, 1);
        assert_eq!(&a * &one, a);
        let w = CycInt::root_power(params, 1);
        let w8 = CycInt::root_power(params, 8);
        assert_eq!(&w * &w8, one);
        // distributivity spot check
        let b = CycInt::from_exponents(params, [3, 3, 7]);
        let c = CycInt::root_power(params, 4);
        assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
    }

    #[test]
    #[should_panic(expected = "different cyclotomic rings")]
    fn mixed_ring_operations_rejected() {
        let (pa, _) = setup(3, 2);
        let (pb, _) = setup(5, 1);
        let _ = &CycInt::constant(pa, 1) + &CycInt::constant(pb, 1);
    }

    #[test]
    fn gauss_period_values() {
        let (_, table) = setup(3, 2);
        assert!(gauss_period(&table, 0, 2).is_zero());
        assert!(gauss_period(&table, 1, 2).is_zero());
        // eta_1 at level 1 is w^6
        assert_eq!(coeffs(&gauss_period(&table, 1, 1)), vec![-1, 0, 0, -1, 0, 0]);

        let (params, table) = setup(5, 2);
        let e0 = gauss_period(&table, 0, 1);
        let e1 = gauss_period(&table, 1, 1);
        assert_eq!(
            (&e0 * &e1).scale(4),
            CycInt::constant(params, -4) // (1 - p) with p = 5
        );
    }

    #[test]
    fn gauss_suite_small_grid() {
        for (p, n) in [(3, 1), (3, 2), (3, 3), (5, 1), (5, 2), (7, 2), (11, 1), (13, 1)] {
            let (_, table) = setup(p, n);
            let report = verify_gauss_theorems(&table);
            assert!(
                report.all_passed,
                "p={p} n={n}: {:?}",
                report.failures().collect::<Vec<_>>()
            );
        }
    }

    #[test]
    fn spectral_values_hand_checked() {
        let (params, table) = setup(3, 2);
        let seq = BinarySeq::generate(&table);

        let at0 = eval_s_at_root(&seq, &table, 0).unwrap();
        assert_eq!(at0.branch, RootBranch::One);
        assert_eq!(at0.value, CycInt::constant(params, 5));
        assert!(at0.matches);

        let at3 = eval_s_at_root(&seq, &table, 3).unwrap();
        assert_eq!(coeffs(&at3.value), vec![-1, 0, 0, -3, 0, 0]);
        assert_eq!(at3.branch, RootBranch::Coset { valuation: 1, class: 0 });
        assert!(at3.matches);

        let at1 = eval_s_at_root(&seq, &table, 1).unwrap();
        assert_eq!(coeffs(&at1.value), vec![0, 0, 0, -1, 0, 0]);
        assert!(at1.matches);

        for a in 0..9 {
            assert!(eval_s_at_root(&seq, &table, a).unwrap().matches, "a = {a}");
        }
        assert!(eval_s_at_root(&seq, &table, 9).is_err());
    }
}
