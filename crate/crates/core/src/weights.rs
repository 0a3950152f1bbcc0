//! Action data for `T` or `T x H` on affine space, and the character window `L`.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Hypothesis, Result};

/// Shape of the acting group: a torus of rank `torus_rank` times `prod Z/m_j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupSpec {
    pub torus_rank: usize,
    pub invariant_factors: Vec<u32>,
}

impl GroupSpec {
    pub fn torus() -> Self {
        GroupSpec { torus_rank: 1, invariant_factors: Vec::new() }
    }

    pub fn with_finite(invariant_factors: Vec<u32>) -> Self {
        GroupSpec { torus_rank: 1, invariant_factors }
    }

    pub fn finite_order(&self) -> u32 {
        self.invariant_factors.iter().product()
    }

    pub fn validate(&self) -> Result<()> {
        if self.torus_rank != 1 {
            return Err(Error::validation(
                Hypothesis::TorusRank,
                format!("torus rank {} is not supported, only rank 1", self.torus_rank),
            ));
        }
        if let Some(m) = self.invariant_factors.iter().find(|&&m| m < 2) {
            return Err(Error::validation(
                Hypothesis::InvariantFactor,
                format!("invariant factor {m} is smaller than 2"),
            ));
        }
        Ok(())
    }
}

/// A character of `T x H`: an integer for the torus and a mixed-radix index into
/// the character group of `H` (digit `j` is a residue modulo `m_j`, first factor
/// least significant).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Character {
    pub torus: i64,
    pub finite: u32,
}

impl Character {
    pub const fn torus_only(torus: i64) -> Self {
        Character { torus, finite: 0 }
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.finite == 0 {
            write!(f, "{}", self.torus)
        } else {
            write!(f, "({},#{})", self.torus, self.finite)
        }
    }
}

/// Arithmetic in `Z x prod Z/m_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharacterGroup {
    moduli: Vec<u32>,
}

impl CharacterGroup {
    pub fn new(moduli: Vec<u32>) -> Self {
        CharacterGroup { moduli }
    }

    pub fn moduli(&self) -> &[u32] {
        &self.moduli
    }

    pub fn finite_order(&self) -> u32 {
        self.moduli.iter().product()
    }

    pub fn encode(&self, residues: &[u32]) -> u32 {
        let mut idx = 0u32;
        for (r, m) in residues.iter().zip(&self.moduli).rev() {
            idx = idx * m + r % m;
        }
        idx
    }

    pub fn decode(&self, mut idx: u32) -> Vec<u32> {
        self.moduli
            .iter()
            .map(|m| {
                let r = idx % m;
                idx /= m;
                r
            })
            .collect()
    }

    fn combine(&self, a: u32, b: u32, sign: i64) -> u32 {
        if self.moduli.is_empty() {
            return 0;
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0u32;
        let mut place = 1u32;
        for &m in &self.moduli {
            let (ra, rb) = (a % m, b % m);
            a /= m;
            b /= m;
            let r = (ra as i64 + sign * rb as i64).rem_euclid(m as i64) as u32;
            out += r * place;
            place *= m;
        }
        out
    }

    pub fn add(&self, a: Character, b: Character) -> Character {
        Character { torus: a.torus + b.torus, finite: self.combine(a.finite, b.finite, 1) }
    }

    pub fn sub(&self, a: Character, b: Character) -> Character {
        Character { torus: a.torus - b.torus, finite: self.combine(a.finite, b.finite, -1) }
    }

    pub fn neg(&self, a: Character) -> Character {
        self.sub(Character::torus_only(0), a)
    }

    pub fn scale(&self, a: Character, k: u32) -> Character {
        let mut finite = 0;
        if !self.moduli.is_empty() {
            let digits: Vec<u32> =
                self.decode(a.finite).iter().zip(&self.moduli).map(|(r, m)| (((*r as u64) * k as u64) % *m as u64) as u32).collect();
            finite = self.encode(&digits);
        }
        Character { torus: a.torus * k as i64, finite }
    }

    /// Order of a finite character, by repeated addition.
    pub fn finite_order_of(&self, idx: u32) -> u32 {
        let mut acc = idx;
        let mut k = 1;
        while acc != 0 {
            acc = self.combine(acc, idx, 1);
            k += 1;
        }
        k
    }
}

/// Torus weights plus optional residues of the finite part, one tuple per variable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeightData {
    pub group: GroupSpec,
    pub torus_weights: Vec<i64>,
    pub finite_weights: Vec<Vec<u32>>,
    #[serde(skip)]
    chars: Vec<Character>,
    #[serde(skip)]
    arith: CharacterGroup,
}

impl WeightData {
    /// Weights of a rank-one torus action with trivial finite part.
    pub fn torus(weights: &[i64]) -> Result<Self> {
        Self::new(GroupSpec::torus(), weights.to_vec(), Vec::new())
    }

    /// General constructor. `finite_weights` is either empty (trivial `H`) or has
    /// one residue tuple per variable.
    pub fn new(group: GroupSpec, torus_weights: Vec<i64>, finite_weights: Vec<Vec<u32>>) -> Result<Self> {
        group.validate()?;
        let n = torus_weights.len();
        if n < 2 {
            return Err(Error::validation(
                Hypothesis::VariableCount,
                format!("{n} variable(s) given, at least 2 required"),
            ));
        }
        let k = group.invariant_factors.len();
        let finite_weights = if k == 0 {
            if finite_weights.iter().any(|c| !c.is_empty()) {
                return Err(Error::validation(Hypothesis::FiniteWeights, "residues given for a trivial finite group"));
            }
            vec![Vec::new(); n]
        } else {
            if finite_weights.len() != n {
                return Err(Error::validation(
                    Hypothesis::FiniteWeights,
                    format!("{} residue tuples for {n} variables", finite_weights.len()),
                ));
            }
            let mut reduced = Vec::with_capacity(n);
            for c in &finite_weights {
                if c.len() != k {
                    return Err(Error::validation(
                        Hypothesis::FiniteWeights,
                        format!("residue tuple {c:?} has length {}, expected {k}", c.len()),
                    ));
                }
                reduced.push(c.iter().zip(&group.invariant_factors).map(|(r, m)| r % m).collect::<Vec<_>>());
            }
            reduced
        };
        let arith = CharacterGroup::new(group.invariant_factors.clone());
        let chars = torus_weights
            .iter()
            .zip(&finite_weights)
            .map(|(&t, c)| Character { torus: t, finite: arith.encode(c) })
            .collect();
        Ok(WeightData { group, torus_weights, finite_weights, chars, arith })
    }

    pub fn n(&self) -> usize {
        self.torus_weights.len()
    }

    pub fn has_finite_part(&self) -> bool {
        !self.group.invariant_factors.is_empty()
    }

    /// Combined character of each variable.
    pub fn variable_characters(&self) -> &[Character] {
        &self.chars
    }

    pub fn arithmetic(&self) -> &CharacterGroup {
        &self.arith
    }

    pub fn max_abs_weight(&self) -> i64 {
        self.torus_weights.iter().map(|w| w.abs()).max().unwrap_or(0)
    }

    /// The same torus weights without the finite part.
    pub fn torus_part(&self) -> WeightData {
        WeightData::torus(&self.torus_weights).expect("torus part of valid data is valid")
    }

    /// All characters of `H`, as mixed-radix indices.
    pub fn finite_characters(&self) -> impl Iterator<Item = u32> {
        0..self.group.finite_order()
    }
}

/// The three conditions defining effective weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EffectivenessReport {
    pub cond_two_sided: bool,
    pub cond_sum_zero: bool,
    pub cond_pairwise_gcd: bool,
    pub effective: bool,
}

impl EffectivenessReport {
    /// Index (1-based) of the first failing condition.
    pub fn first_failure(&self) -> Option<u8> {
        if !self.cond_two_sided {
            Some(1)
        } else if !self.cond_sum_zero {
            Some(2)
        } else if !self.cond_pairwise_gcd {
            Some(3)
        } else {
            None
        }
    }
}

/// For a rank-one torus the only line through the origin is the whole axis.
pub fn is_quasi_symmetric(w: &WeightData) -> bool {
    w.torus_weights.iter().sum::<i64>() == 0
}

fn mixed_pairs(w: &WeightData) -> impl Iterator<Item = (usize, usize)> + '_ {
    let n = w.n();
    (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| w.torus_weights[i] * w.torus_weights[j] < 0)
}

pub fn check_effectiveness(w: &WeightData) -> EffectivenessReport {
    let pos = w.torus_weights.iter().filter(|&&x| x > 0).count();
    let neg = w.torus_weights.iter().filter(|&&x| x < 0).count();
    let cond_two_sided = pos >= 2 && neg >= 2;
    let cond_sum_zero = is_quasi_symmetric(w);
    let cond_pairwise_gcd = mixed_pairs(w).all(|(i, j)| w.torus_weights[i].gcd(&w.torus_weights[j]) == 1);
    EffectivenessReport {
        cond_two_sided,
        cond_sum_zero,
        cond_pairwise_gcd,
        effective: cond_two_sided && cond_sum_zero && cond_pairwise_gcd,
    }
}

pub fn is_unimodular(w: &WeightData) -> bool {
    if !is_quasi_symmetric(w) {
        return false;
    }
    w.group
        .invariant_factors
        .iter()
        .enumerate()
        .all(|(j, &m)| w.finite_weights.iter().map(|c| c[j] as u64).sum::<u64>() % m as u64 == 0)
}

/// Pairwise generation criterion: every mixed-sign pair of variable characters
/// must generate the whole character group `Z x H`.
///
/// With `g = gcd(chi_i, chi_j) = 1`, the subgroup generated by the two characters
/// is everything iff the finite character `chi_j c_i - chi_i c_j` generates `H`.
pub fn pair_generates(w: &WeightData, i: usize, j: usize) -> bool {
    let (a, b) = (w.torus_weights[i], w.torus_weights[j]);
    if a.gcd(&b) != 1 {
        return false;
    }
    if !w.has_finite_part() {
        return true;
    }
    let ar = w.arithmetic();
    let scaled = |k: i64, c: u32| -> u32 {
        let m = ar.finite_order() as i64;
        let r = k.rem_euclid(m) as u32;
        ar.scale(Character { torus: 0, finite: c }, r).finite
    };
    let ci = w.variable_characters()[i].finite;
    let cj = w.variable_characters()[j].finite;
    let h = ar.sub(Character { torus: 0, finite: scaled(b, ci) }, Character { torus: 0, finite: scaled(a, cj) });
    ar.finite_order_of(h.finite) == ar.finite_order()
}

/// Sufficient criterion for genericity: two-sided signs and the pairwise
/// generation criterion on every mixed-sign pair (the gcd condition when `H` is trivial).
pub fn is_generic(w: &WeightData) -> bool {
    check_effectiveness(w).cond_two_sided && mixed_pairs(w).all(|(i, j)| pair_generates(w, i, j))
}

/// Genericity of the torus part alone.
pub fn is_torus_generic(w: &WeightData) -> bool {
    let r = check_effectiveness(w);
    r.cond_two_sided && r.cond_pairwise_gcd
}

/// Which end of the symmetric interval `[-P/2, P/2]` is removed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IntervalConvention {
    /// `(-P/2, P/2]`
    #[default]
    OpenLeft,
    /// `[-P/2, P/2)`
    OpenRight,
}

/// Integers in the half-open interval of length `P = sum of positive weights`.
pub fn compute_l(w: &WeightData, convention: IntervalConvention) -> Result<Vec<i64>> {
    if !is_quasi_symmetric(w) {
        return Err(Error::validation(
            Hypothesis::QuasiSymmetry,
            format!("torus weights sum to {}", w.torus_weights.iter().sum::<i64>()),
        ));
    }
    let p: i64 = w.torus_weights.iter().filter(|&&x| x > 0).sum();
    let keep = |k: i64| match convention {
        IntervalConvention::OpenLeft => -p < 2 * k && 2 * k <= p,
        IntervalConvention::OpenRight => -p <= 2 * k && 2 * k < p,
    };
    Ok((-p..=p).filter(|&k| keep(k)).collect())
}
