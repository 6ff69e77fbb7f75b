//! Generalized cyclotomic classes of order two modulo an odd prime power,
//! the induced two-class partition of Z_N, and exhaustive verifiers for
//! the counting identities the sequence construction relies on.

use serde::Serialize;

use crate::numtheory::{mul_mod, Params};
use crate::report::{Check, SuiteReport};

/// Where a residue sits in the level decomposition of Z_N: zero, or a
/// member of `p^{n-m} D_i^{(p^m)}`, recorded as level `m` and class `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Label {
    Zero,
    Class { level: u32, class: u8 },
}

impl Label {
    pub fn is_unit(&self, n: u32) -> bool {
        matches!(self, Label::Class { level, .. } if *level == n)
    }
}

/// Complete classification of Z_N. Every residue carries exactly one
/// label; the table is immutable after construction.
#[derive(Debug, Clone)]
pub struct ClassTable {
    params: Params,
    labels: Vec<Label>,
}

impl ClassTable {
    /// Classifies every residue of Z_N. At each level `m` the class
    /// `D_i^{(p^m)}` collects `g^{2t+i} mod p^m`, with the same root `g`
    /// reduced mod `p^m`, and its members are recorded at the scaled
    /// positions `p^{n-m} * x`.
    pub fn build(params: Params) -> Self {
        let period = params.period() as usize;
        let mut labels = vec![None; period];
        labels[0] = Some(Label::Zero);
        for m in 1..=params.n() {
            let q = params.prime_power(m);
            let stride = params.period() / q;
            let base = params.g() % q;
            let group_size = (params.p() - 1) * params.prime_power(m - 1);
            let mut power = 1u64;
            for t in 0..group_size {
                let slot = &mut labels[(power * stride) as usize];
                debug_assert!(slot.is_none(), "levels must not overlap");
                *slot = Some(Label::Class {
                    level: m,
                    class: (t % 2) as u8,
                });
                power = mul_mod(power, base, q);
            }
            debug_assert_eq!(power, 1, "g must have full order mod p^m");
        }
        let labels = labels
            .into_iter()
            .map(|l| l.expect("level cosets and zero cover all of Z_N"))
            .collect();
        ClassTable { params, labels }
    }

    pub fn params(&self) -> Params {
        self.params
    }

    pub fn label(&self, x: u64) -> Label {
        self.labels[(x % self.params.period()) as usize]
    }

    /// `D_i^{(p^m)}` as residues mod `p^m`, ascending.
    pub fn class_set(&self, level: u32, class: u8) -> Vec<u64> {
        assert!(level >= 1 && level <= self.params.n());
        assert!(class < 2);
        let stride = self.params.period() / self.params.prime_power(level);
        self.members(level, class)
            .map(|x| x / stride)
            .collect()
    }

    /// `p^{n-m} * D_i^{(p^m)}` as residues mod N, ascending.
    pub fn coset(&self, level: u32, class: u8) -> Vec<u64> {
        assert!(level >= 1 && level <= self.params.n());
        assert!(class < 2);
        self.members(level, class).collect()
    }

    fn members(&self, level: u32, class: u8) -> impl Iterator<Item = u64> + '_ {
        self.labels.iter().enumerate().filter_map(move |(x, l)| {
            (*l == Label::Class { level, class }).then_some(x as u64)
        })
    }

    /// Multiples of p in Z_N, zero included, ascending.
    pub fn r_set(&self) -> Vec<u64> {
        (0..self.params.period())
            .step_by(self.params.p() as usize)
            .collect()
    }

    /// Union of class-0 cosets over all levels, ascending.
    pub fn c0(&self) -> Vec<u64> {
        self.half(0, false)
    }

    /// Union of class-1 cosets over all levels plus zero, ascending.
    pub fn c1(&self) -> Vec<u64> {
        self.half(1, true)
    }

    fn half(&self, class: u8, with_zero: bool) -> Vec<u64> {
        self.labels
            .iter()
            .enumerate()
            .filter_map(|(x, l)| match l {
                Label::Zero => with_zero.then_some(x as u64),
                Label::Class { class: c, .. } => (*c == class).then_some(x as u64),
            })
            .collect()
    }

    pub fn export(&self) -> ClassTableExport {
        let n = self.params.n();
        ClassTableExport {
            p: self.params.p(),
            n,
            g: self.params.g(),
            classes: ClassSets {
                d0: self.class_set(n, 0),
                d1: self.class_set(n, 1),
                r: self.r_set(),
            },
            c1: self.c1(),
        }
    }
}

/// JSON view of the top-level sets.
#[derive(Debug, Clone, Serialize)]
pub struct ClassTableExport {
    pub p: u64,
    pub n: u32,
    pub g: u64,
    pub classes: ClassSets,
    #[serde(rename = "C1")]
    pub c1: Vec<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassSets {
    #[serde(rename = "D0")]
    pub d0: Vec<u64>,
    #[serde(rename = "D1")]
    pub d1: Vec<u64>,
    #[serde(rename = "R")]
    pub r: Vec<u64>,
}

/// `(i,j) = |(D_i + 1) ∩ D_j|` at the top level, by direct enumeration.
pub fn cyclotomic_number(table: &ClassTable, i: u8, j: u8) -> u64 {
    assert!(i < 2 && j < 2);
    let params = table.params();
    let n = params.n();
    table
        .coset(n, i)
        .into_iter()
        .filter(|&x| table.label((x + 1) % params.period()) == Label::Class { level: n, class: j })
        .count() as u64
}

/// Runs every counting identity the construction is supposed to satisfy,
/// each by exhaustive enumeration against its closed form. Failures carry
/// a counterexample; nothing is sampled or approximated.
pub fn verify_class_lemmas(table: &ClassTable) -> SuiteReport {
    let checks = vec![
        check_sizes(table),
        check_boundary_counts(table),
        check_cyclotomic_numbers(table),
        check_translation(table),
        check_unit_scaling(table),
        check_level_projection(table),
        check_negation_class(table),
    ];
    SuiteReport::new("cyclotomy", checks)
}

fn check_sizes(table: &ClassTable) -> Check {
    let params = table.params();
    let period = params.period();
    for m in 1..=params.n() {
        let want = (params.p() - 1) * params.prime_power(m - 1) / 2;
        for class in 0..2u8 {
            let got = table.coset(m, class).len() as u64;
            if got != want {
                return Check::fail(
                    "class_sizes",
                    format!("level {m} class {class}: |coset| = {got}, want {want}"),
                );
            }
        }
    }
    let c0 = table.c0().len() as u64;
    let c1 = table.c1().len() as u64;
    Check::from_condition(
        "class_sizes",
        c0 == (period - 1) / 2 && c1 == (period + 1) / 2,
        format!("|C0| = {c0}, |C1| = {c1}, period {period}"),
    )
}

/// How many successors of each top-level class land on a multiple of p.
fn check_boundary_counts(table: &ClassTable) -> Check {
    let params = table.params();
    let period = params.period();
    let count = |class: u8| -> u64 {
        table
            .coset(params.n(), class)
            .into_iter()
            .filter(|&x| ((x + 1) % period) % params.p() == 0)
            .count() as u64
    };
    let (got0, got1) = (count(0), count(1));
    let scale = params.prime_power(params.n() - 1);
    let (want0, want1) = if params.p() % 4 == 1 {
        (scale, 0)
    } else {
        (0, scale)
    };
    Check::from_condition(
        "boundary_into_multiples",
        (got0, got1) == (want0, want1),
        format!("counts (D0, D1) -> R: got ({got0}, {got1}), want ({want0}, {want1})"),
    )
}

fn check_cyclotomic_numbers(table: &ClassTable) -> Check {
    let params = table.params();
    let scale = params.prime_power(params.n() - 1);
    let p = params.p();
    // closed forms, split by residue class of p mod 4; every numerator is
    // divisible by 4 in its branch
    let want = if p % 4 == 1 {
        [
            [scale * (p - 5) / 4, scale * (p - 1) / 4],
            [scale * (p - 1) / 4, scale * (p - 1) / 4],
        ]
    } else {
        [
            [scale * (p - 3) / 4, scale * (p + 1) / 4],
            [scale * (p - 3) / 4, scale * (p - 3) / 4],
        ]
    };
    for i in 0..2u8 {
        for j in 0..2u8 {
            let got = cyclotomic_number(table, i, j);
            let expect = want[i as usize][j as usize];
            if got != expect {
                return Check::fail(
                    "cyclotomic_numbers",
                    format!("({i},{j}) = {got}, want {expect}"),
                );
            }
        }
    }
    Check::pass("cyclotomic_numbers")
}

/// Shifting a top-level class by any multiple of p permutes it and never
/// reaches the other class.
fn check_translation(table: &ClassTable) -> Check {
    let params = table.params();
    let period = params.period();
    let n = params.n();
    let same = params.phi() / 2;
    let classes = [table.coset(n, 0), table.coset(n, 1)];
    for &r in &table.r_set() {
        for i in 0..2u8 {
            let mut hits = [0u64; 2];
            for &x in &classes[i as usize] {
                if let Label::Class { level, class } = table.label((x + r) % period) {
                    if level == n {
                        hits[class as usize] += 1;
                    }
                }
            }
            let want = if i == 0 { [same, 0] } else { [0, same] };
            if hits != want {
                return Check::fail(
                    "translation_by_multiples",
                    format!("r = {r}, i = {i}: hits {hits:?}, want {want:?}"),
                );
            }
        }
    }
    Check::pass("translation_by_multiples")
}

/// Multiplying a top-level class by a unit lands in the class given by
/// adding the indices mod 2.
fn check_unit_scaling(table: &ClassTable) -> Check {
    let params = table.params();
    let period = params.period();
    let n = params.n();
    let classes = [table.coset(n, 0), table.coset(n, 1)];
    for i in 0..2u8 {
        for &a in &classes[i as usize] {
            for j in 0..2u8 {
                let target = (i + j) % 2;
                for &x in &classes[j as usize] {
                    let got = table.label(mul_mod(a, x, period));
                    if got != (Label::Class { level: n, class: target }) {
                        return Check::fail(
                            "unit_scaling",
                            format!("a = {a} (class {i}), x = {x} (class {j}): {a}*{x} not in class {target}"),
                        );
                    }
                }
            }
        }
    }
    Check::pass("unit_scaling")
}

/// Reduction mod p^{n1} maps the level-n2 class onto the level-n1 class,
/// hitting every element exactly p^{n2-n1} times; same for multiples of p.
fn check_level_projection(table: &ClassTable) -> Check {
    let params = table.params();
    let p = params.p();
    for n2 in 2..=params.n() {
        for n1 in 1..n2 {
            let q1 = params.prime_power(n1);
            let multiplicity = params.prime_power(n2 - n1);
            for i in 0..2u8 {
                let mut got = vec![0u64; q1 as usize];
                for x in table.class_set(n2, i) {
                    got[(x % q1) as usize] += 1;
                }
                let mut want = vec![0u64; q1 as usize];
                for y in table.class_set(n1, i) {
                    want[y as usize] = multiplicity;
                }
                if got != want {
                    return Check::fail(
                        "level_projection",
                        format!("class {i}: reduction p^{n2} -> p^{n1} is not {multiplicity}-to-1 onto the lower class"),
                    );
                }
            }
            let q2 = params.prime_power(n2);
            let mut got = vec![0u64; q1 as usize];
            for x in (0..q2).step_by(p as usize) {
                got[(x % q1) as usize] += 1;
            }
            let ok = (0..q1).all(|y| {
                let want = if y % p == 0 { multiplicity } else { 0 };
                got[y as usize] == want
            });
            if !ok {
                return Check::fail(
                    "level_projection",
                    format!("multiples of p: reduction p^{n2} -> p^{n1} is not {multiplicity}-to-1"),
                );
            }
        }
    }
    Check::pass("level_projection")
}

fn check_negation_class(table: &ClassTable) -> Check {
    let params = table.params();
    let want = if params.p() % 4 == 1 { 0u8 } else { 1u8 };
    let got = table.label(params.period() - 1);
    Check::from_condition(
        "negation_class",
        got == Label::Class { level: params.n(), class: want },
        format!("-1 labeled {got:?}, want top-level class {want}"),
    )
}
