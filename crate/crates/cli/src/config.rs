//! Pipeline configuration: weights, truncation and the requested tasks.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use nccr::{GroupSpec, IntervalConvention, WeightData};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Pipeline stages, declared in dependency order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    Checks,
    Nccr,
    Presentation,
    Resolution,
    Tilting,
    End,
}

impl Task {
    pub const ALL: [Task; 6] = [Task::Checks, Task::Nccr, Task::Presentation, Task::Resolution, Task::Tilting, Task::End];

    pub fn name(self) -> &'static str {
        match self {
            Task::Checks => "checks",
            Task::Nccr => "nccr",
            Task::Presentation => "presentation",
            Task::Resolution => "resolution",
            Task::Tilting => "tilting",
            Task::End => "end",
        }
    }

    /// Direct prerequisites.
    pub fn dependencies(self) -> &'static [Task] {
        match self {
            Task::Checks => &[],
            Task::Nccr => &[Task::Checks],
            Task::Presentation | Task::Resolution => &[Task::Nccr],
            Task::Tilting => &[Task::Resolution],
            Task::End => &[Task::Tilting],
        }
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One invariant factor `Z/m` of the finite part with the residue of every variable,
/// written `m:c1,c2,...`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteFactor {
    pub modulus: u32,
    pub residues: Vec<u32>,
}

impl FromStr for FiniteFactor {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (m, cs) = s.split_once(':').ok_or_else(|| format!("expected m:c1,c2,... in {s:?}"))?;
        let modulus = m.trim().parse().map_err(|e| format!("modulus {m:?}: {e}"))?;
        let residues = cs
            .split(',')
            .map(|c| c.trim().parse::<u32>().map_err(|e| format!("residue {c:?}: {e}")))
            .collect::<Result<_, _>>()?;
        Ok(FiniteFactor { modulus, residues })
    }
}

impl fmt::Display for FiniteFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cs: Vec<String> = self.residues.iter().map(|c| c.to_string()).collect();
        write!(f, "{}:{}", self.modulus, cs.join(","))
    }
}

impl Serialize for FiniteFactor {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FiniteFactor {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Parses `1,1,-1,-1`.
pub fn parse_weights(s: &str) -> Result<Vec<i64>, String> {
    s.split(',').map(|x| x.trim().parse::<i64>().map_err(|e| format!("weight {x:?}: {e}"))).collect()
}

pub fn parse_convention(s: &str) -> Result<IntervalConvention, String> {
    match s {
        "open_left" => Ok(IntervalConvention::OpenLeft),
        "open_right" => Ok(IntervalConvention::OpenRight),
        _ => Err(format!("unknown convention {s:?} (open_left, open_right)")),
    }
}

fn all_tasks() -> BTreeSet<Task> {
    Task::ALL.into_iter().collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub weights: Vec<i64>,
    #[serde(default)]
    pub finite: Vec<FiniteFactor>,
    /// Defaults to `3n`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<u32>,
    #[serde(default)]
    pub convention: IntervalConvention,
    #[serde(default = "all_tasks")]
    pub tasks: BTreeSet<Task>,
}

impl PipelineConfig {
    pub fn new(weights: Vec<i64>) -> Self {
        PipelineConfig {
            name: None,
            weights,
            finite: Vec::new(),
            truncation: None,
            convention: IntervalConvention::default(),
            tasks: all_tasks(),
        }
    }

    pub fn truncation(&self) -> u32 {
        self.truncation.unwrap_or(3 * self.weights.len() as u32)
    }

    /// The requested tasks closed under prerequisites, in dependency order.
    pub fn resolved_tasks(&self) -> Vec<Task> {
        let mut out: BTreeSet<Task> = BTreeSet::new();
        let mut stack: Vec<Task> = self.tasks.iter().copied().collect();
        while let Some(t) = stack.pop() {
            if out.insert(t) {
                stack.extend_from_slice(t.dependencies());
            }
        }
        out.into_iter().collect()
    }

    pub fn weight_data(&self) -> nccr::Result<WeightData> {
        if self.finite.is_empty() {
            return WeightData::torus(&self.weights);
        }
        let group = GroupSpec::with_finite(self.finite.iter().map(|f| f.modulus).collect());
        let n = self.weights.len();
        let mut per_variable = vec![Vec::with_capacity(self.finite.len()); n];
        for f in &self.finite {
            if f.residues.len() != n {
                return Err(nccr::Error::Validation {
                    hypothesis: nccr::Hypothesis::FiniteWeights,
                    detail: format!("factor {f} has {} residues for {n} variables", f.residues.len()),
                });
            }
            for (slot, &r) in per_variable.iter_mut().zip(&f.residues) {
                slot.push(r);
            }
        }
        WeightData::new(group, self.weights.clone(), per_variable)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dependency_closure() {
        let mut c = PipelineConfig::new(vec![1, 1, -1, -1]);
        c.tasks = [Task::End].into_iter().collect();
        assert_eq!(c.resolved_tasks(), vec![Task::Checks, Task::Nccr, Task::Resolution, Task::Tilting, Task::End]);
        c.tasks = [Task::Presentation].into_iter().collect();
        assert_eq!(c.resolved_tasks(), vec![Task::Checks, Task::Nccr, Task::Presentation]);
        assert_eq!(c.truncation(), 12);
    }

    #[test]
    fn finite_factor_round_trip() {
        let f: FiniteFactor = "2:1,1,1,1".parse().unwrap();
        assert_eq!(f, FiniteFactor { modulus: 2, residues: vec![1, 1, 1, 1] });
        assert_eq!(f.to_string(), "2:1,1,1,1");
        assert!("2".parse::<FiniteFactor>().is_err());
        assert!("2:x".parse::<FiniteFactor>().is_err());
    }

    #[test]
    fn weights_and_group() {
        assert_eq!(parse_weights("1, -1,0").unwrap(), vec![1, -1, 0]);
        assert!(parse_weights("1,a").is_err());
        let mut c = PipelineConfig::new(vec![1, 1, -1, -1]);
        c.finite = vec!["2:1,1,1,1".parse().unwrap()];
        let w = c.weight_data().unwrap();
        assert_eq!(w.finite_weights, vec![vec![1]; 4]);
        c.finite = vec!["2:1,1".parse().unwrap()];
        assert!(c.weight_data().is_err());
    }

    #[test]
    fn toml_defaults() {
        let c: PipelineConfig = toml::from_str("weights = [1, 1, -1, -1]\nfinite = [\"2:1,1,1,1\"]").unwrap();
        assert_eq!(c.tasks.len(), 6);
        assert_eq!(c.convention, IntervalConvention::OpenLeft);
        assert_eq!(c.truncation(), 12);
    }
}
