//! Pseudo-Boolean benchmark functions and their canonical fitness-level
//! partitions.
//!
//! Each partition lists the attainable fitness values in ascending order (one
//! level per value) together with a lower bound `s_i` on the probability that
//! standard bit mutation leaves level `i` for a strictly better one.

use std::f64::consts::E;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

pub use crate::bitstring::{BitString, BitStringError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ObjectiveError {
    #[error("bit string has length {got}, objective expects {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("fitness value {0} is not attainable")]
    UnknownFitness(i64),
    #[error("invalid objective: {0}")]
    Invalid(String),
}

/// A user-supplied unimodal function: every non-optimal point has a strictly
/// better Hamming neighbour, so each level gets `s_i = 1/(en)`.
pub trait UnimodalFunction: fmt::Debug + Send + Sync {
    fn name(&self) -> &str;
    fn evaluate(&self, x: &BitString) -> i64;
    /// Attainable values for `n` bits, strictly ascending; the last is the optimum.
    fn values(&self, n: usize) -> Vec<i64>;
}

/// Number of trailing one-bits. Unimodal with `n + 1` values.
#[derive(Debug, Clone, Copy, Default)]
pub struct TrailingOnes;

impl UnimodalFunction for TrailingOnes {
    fn name(&self) -> &str {
        "trailing-ones"
    }

    fn evaluate(&self, x: &BitString) -> i64 {
        (0..x.len()).rev().take_while(|&i| x.get(i)).count() as i64
    }

    fn values(&self, n: usize) -> Vec<i64> {
        (0..=n as i64).collect()
    }
}

/// Looks up a built-in custom function by the name used in `custom:<name>`.
pub fn builtin_custom(name: &str) -> Option<Arc<dyn UnimodalFunction>> {
    match name {
        "trailing-ones" | "trailingones" => Some(Arc::new(TrailingOnes)),
        _ => None,
    }
}

#[derive(Debug, Clone)]
pub enum ObjectiveKind {
    OneMax,
    LeadingOnes,
    Jump(usize),
    Custom(Arc<dyn UnimodalFunction>),
}

#[derive(Debug, Clone)]
pub struct Objective {
    kind: ObjectiveKind,
    n: usize,
}

impl Objective {
    pub fn new(kind: ObjectiveKind, n: usize) -> Result<Self, ObjectiveError> {
        if n == 0 {
            return Err(ObjectiveError::Invalid("bit count must be at least 1".into()));
        }
        match &kind {
            ObjectiveKind::Jump(k) if *k == 0 || *k > n => {
                return Err(ObjectiveError::Invalid(format!("jump gap {k} must lie in 1..={n}")));
            }
            ObjectiveKind::Custom(f) => {
                let values = f.values(n);
                if values.is_empty() || values.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(ObjectiveError::Invalid(format!(
                        "custom function '{}' must list strictly ascending values",
                        f.name()
                    )));
                }
            }
            _ => {}
        }
        Ok(Objective { kind, n })
    }

    pub fn onemax(n: usize) -> Result<Self, ObjectiveError> {
        Self::new(ObjectiveKind::OneMax, n)
    }

    pub fn leading_ones(n: usize) -> Result<Self, ObjectiveError> {
        Self::new(ObjectiveKind::LeadingOnes, n)
    }

    pub fn jump(k: usize, n: usize) -> Result<Self, ObjectiveError> {
        Self::new(ObjectiveKind::Jump(k), n)
    }

    /// Parses `onemax`, `lo`, `jump:k` or `custom:<name>`.
    pub fn parse(spec: &str, n: usize) -> Result<Self, ObjectiveError> {
        let spec = spec.trim();
        let lower = spec.to_ascii_lowercase();
        let kind = match lower.as_str() {
            "onemax" | "om" => ObjectiveKind::OneMax,
            "lo" | "leadingones" => ObjectiveKind::LeadingOnes,
            _ => {
                if let Some(k) = lower.strip_prefix("jump:") {
                    let k = k
                        .parse()
                        .map_err(|_| ObjectiveError::Invalid(format!("bad jump gap in '{spec}'")))?;
                    ObjectiveKind::Jump(k)
                } else if let Some(name) = spec.strip_prefix("custom:") {
                    ObjectiveKind::Custom(builtin_custom(name).ok_or_else(|| {
                        ObjectiveError::Invalid(format!("unknown custom function '{name}'"))
                    })?)
                } else {
                    return Err(ObjectiveError::Invalid(format!("unknown function '{spec}'")));
                }
            }
        };
        Self::new(kind, n)
    }

    pub fn kind(&self) -> &ObjectiveKind {
        &self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Config/CSV spelling of the function (without `n`).
    pub fn label(&self) -> String {
        match &self.kind {
            ObjectiveKind::OneMax => "onemax".into(),
            ObjectiveKind::LeadingOnes => "lo".into(),
            ObjectiveKind::Jump(k) => format!("jump:{k}"),
            ObjectiveKind::Custom(f) => format!("custom:{}", f.name()),
        }
    }

    pub fn evaluate(&self, x: &BitString) -> Result<i64, ObjectiveError> {
        if x.len() != self.n {
            return Err(ObjectiveError::LengthMismatch { expected: self.n, got: x.len() });
        }
        Ok(self.fitness(x))
    }

    /// Unchecked evaluation for the simulation hot loop.
    #[inline]
    pub(crate) fn fitness(&self, x: &BitString) -> i64 {
        debug_assert_eq!(x.len(), self.n);
        match &self.kind {
            ObjectiveKind::OneMax => x.count_ones() as i64,
            ObjectiveKind::LeadingOnes => x.leading_ones() as i64,
            ObjectiveKind::Jump(k) => {
                let ones = x.count_ones();
                if ones <= self.n - k || ones == self.n {
                    (k + ones) as i64
                } else {
                    (self.n - ones) as i64
                }
            }
            ObjectiveKind::Custom(f) => f.evaluate(x),
        }
    }

    pub fn optimum_value(&self) -> i64 {
        match &self.kind {
            ObjectiveKind::OneMax | ObjectiveKind::LeadingOnes => self.n as i64,
            ObjectiveKind::Jump(k) => (self.n + k) as i64,
            ObjectiveKind::Custom(f) => *f.values(self.n).last().unwrap_or(&0),
        }
    }

    pub fn is_optimal(&self, x: &BitString) -> bool {
        self.fitness(x) == self.optimum_value()
    }

    pub fn canonical_partition(&self) -> LevelPartition {
        let n = self.n;
        let nf = n as f64;
        let hamming = |count: usize| count as f64 / (E * nf);
        let (values, s) = match &self.kind {
            ObjectiveKind::OneMax => {
                let values = (0..=n as i64).collect();
                let s = (0..n).map(|ones| hamming(n - ones)).collect();
                (values, s)
            }
            ObjectiveKind::LeadingOnes => {
                let values = (0..=n as i64).collect();
                (values, vec![hamming(1); n])
            }
            ObjectiveKind::Custom(f) => {
                let values = f.values(n);
                let s = vec![hamming(1); values.len().saturating_sub(1)];
                (values, s)
            }
            ObjectiveKind::Jump(k) => {
                let k = *k;
                let mut values = Vec::with_capacity(n + 1);
                let mut s = Vec::with_capacity(n);
                // Gap region: n-z ones with 1 <= z < k, fitness z. Every one-bit
                // flip improves; from z = 1 the zero-bit flip reaches the optimum.
                for z in 1..k {
                    values.push(z as i64);
                    s.push(hamming(n - z + usize::from(z == 1)));
                }
                for ones in 0..=n - k {
                    values.push((k + ones) as i64);
                    if ones == n - k {
                        // Only the specific k-bit jump to 1^n improves.
                        s.push((-1.0 - k as f64 * nf.ln()).exp());
                    } else {
                        s.push(hamming(n - ones));
                    }
                }
                values.push((n + k) as i64);
                (values, s)
            }
        };
        LevelPartition::new(values, s).expect("canonical partitions are well formed")
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(n={})", self.label(), self.n)
    }
}

/// Fitness levels `A_1 <_f ... <_f A_m`, one per attainable fitness value,
/// with success-probability lower bounds `s_1..s_{m-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelPartition {
    values: Vec<i64>,
    s: Vec<f64>,
}

impl LevelPartition {
    /// `values` must be strictly ascending with `values.len() == s.len() + 1`
    /// and every `s_i` in `(0, 1]`.
    pub fn new(values: Vec<i64>, s: Vec<f64>) -> Result<Self, ObjectiveError> {
        if values.is_empty() || values.len() != s.len() + 1 {
            return Err(ObjectiveError::Invalid("need exactly m-1 success probabilities".into()));
        }
        if values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(ObjectiveError::Invalid("level values must be strictly ascending".into()));
        }
        if s.iter().any(|&p| !(p > 0.0 && p <= 1.0)) {
            return Err(ObjectiveError::Invalid("success probabilities must lie in (0, 1]".into()));
        }
        Ok(LevelPartition { values, s })
    }

    /// A partition given only by its success probabilities (level values 0..m-1).
    pub fn from_probabilities(s: Vec<f64>) -> Result<Self, ObjectiveError> {
        let values = (0..=s.len() as i64).collect();
        Self::new(values, s)
    }

    /// Number of levels `m`, including the optimum level.
    pub fn m(&self) -> usize {
        self.values.len()
    }

    /// Success probabilities `s_1..s_{m-1}`.
    pub fn s(&self) -> &[f64] {
        &self.s
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    /// 1-based level index of a fitness value.
    pub fn level_index(&self, fitness: i64) -> Result<usize, ObjectiveError> {
        self.values
            .binary_search(&fitness)
            .map(|i| i + 1)
            .map_err(|_| ObjectiveError::UnknownFitness(fitness))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bits(s: &str) -> BitString {
        s.parse().unwrap()
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12 * b.abs().max(1.0)
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(Objective::onemax(5).unwrap().evaluate(&bits("10110")).unwrap(), 3);
        assert_eq!(Objective::leading_ones(4).unwrap().evaluate(&bits("1101")).unwrap(), 2);
        let jump = Objective::jump(2, 4).unwrap();
        assert_eq!(jump.evaluate(&bits("1100")).unwrap(), 4);
        assert_eq!(jump.evaluate(&bits("1110")).unwrap(), 1);
        assert_eq!(jump.evaluate(&bits("1111")).unwrap(), 6);
    }

    #[test]
    fn length_mismatch() {
        let om = Objective::onemax(4).unwrap();
        assert_eq!(
            om.evaluate(&bits("101")),
            Err(ObjectiveError::LengthMismatch { expected: 4, got: 3 })
        );
    }

    #[test]
    fn invalid_objectives() {
        assert!(Objective::jump(0, 4).is_err());
        assert!(Objective::jump(5, 4).is_err());
        assert!(Objective::onemax(0).is_err());
        assert!(Objective::parse("jump:x", 4).is_err());
        assert!(Objective::parse("custom:nope", 4).is_err());
        assert!(Objective::parse("sphere", 4).is_err());
    }

    #[test]
    fn parse_labels() {
        for spec in ["onemax", "lo", "jump:3", "custom:trailing-ones"] {
            assert_eq!(Objective::parse(spec, 8).unwrap().label(), spec);
        }
    }

    #[test]
    fn onemax_partition() {
        let p = Objective::onemax(4).unwrap().canonical_partition();
        assert_eq!(p.m(), 5);
        assert!(close(p.s()[0], 1.0 / E));
        assert_eq!(p.level_index(4).unwrap(), 5);
    }

    #[test]
    fn lo_partition() {
        let p = Objective::leading_ones(4).unwrap().canonical_partition();
        assert_eq!(p.m(), 5);
        assert!(p.s().iter().all(|&s| close(s, 1.0 / (4.0 * E))));
        assert_eq!(p.level_index(0).unwrap(), 1);
    }

    #[test]
    fn jump_partition() {
        let obj = Objective::jump(2, 4).unwrap();
        let p = obj.canonical_partition();
        assert_eq!(p.m(), 5);
        // values: gap 1, then 2..=4 (ones 0..=2), optimum 6
        assert_eq!(p.values(), &[1, 2, 3, 4, 6]);
        let gap_edge = p.level_index(4).unwrap();
        assert!(close(p.s()[gap_edge - 1], 1.0 / (16.0 * E)));
        assert_eq!(p.level_index(6).unwrap(), p.m());
        assert_eq!(p.level_index(5), Err(ObjectiveError::UnknownFitness(5)));
        // gap point "1110": four improving neighbours
        assert!(close(p.s()[0], 4.0 / (4.0 * E)));
    }

    #[test]
    fn jump_one_matches_onemax() {
        let j = Objective::jump(1, 6).unwrap().canonical_partition();
        let om = Objective::onemax(6).unwrap().canonical_partition();
        for (a, b) in j.s().iter().zip(om.s()) {
            assert!(close(*a, *b));
        }
    }

    #[test]
    fn custom_trailing_ones() {
        let obj = Objective::parse("custom:trailing-ones", 5).unwrap();
        assert_eq!(obj.evaluate(&bits("00111")).unwrap(), 3);
        let p = obj.canonical_partition();
        assert_eq!(p.m(), 6);
        assert!(obj.is_optimal(&BitString::ones(5)));
    }

    /// Every n-bit string: optimum level <=> 1^n, and the fitness is attainable.
    #[test]
    fn optimum_level_iff_all_ones_exhaustive() {
        for n in 1..=10usize {
            let mut objs = vec![Objective::onemax(n).unwrap(), Objective::leading_ones(n).unwrap()];
            for k in 1..=n.min(4) {
                objs.push(Objective::jump(k, n).unwrap());
            }
            for obj in &objs {
                let part = obj.canonical_partition();
                for v in 0..(1u64 << n) {
                    let x = BitString::from_u64(v, n);
                    let level = part.level_index(obj.evaluate(&x).unwrap()).unwrap();
                    assert_eq!(level == part.m(), x.is_all_ones(), "{obj} {x}");
                }
            }
        }
    }

    proptest! {
        #[test]
        fn evaluate_matches_bit_loops(bits in proptest::collection::vec(any::<bool>(), 1..100), k in 1usize..5) {
            let n = bits.len();
            let x = BitString::from_bools(&bits);
            let ones = bits.iter().filter(|&&b| b).count();
            let lo = bits.iter().take_while(|&&b| b).count();
            prop_assert_eq!(Objective::onemax(n).unwrap().evaluate(&x).unwrap(), ones as i64);
            prop_assert_eq!(Objective::leading_ones(n).unwrap().evaluate(&x).unwrap(), lo as i64);
            if k <= n {
                let expect = if ones <= n - k || ones == n { k + ones } else { n - ones };
                prop_assert_eq!(Objective::jump(k, n).unwrap().evaluate(&x).unwrap(), expect as i64);
            }
        }

        #[test]
        fn level_index_monotone(n in 1usize..40, a in 0i64..40, b in 0i64..40) {
            let part = Objective::onemax(n).unwrap().canonical_partition();
            let (a, b) = (a.min(n as i64), b.min(n as i64));
            let (la, lb) = (part.level_index(a).unwrap(), part.level_index(b).unwrap());
            prop_assert_eq!(a <= b, la <= lb);
        }
    }
}
