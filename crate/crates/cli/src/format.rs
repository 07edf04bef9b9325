//! JSON file formats. Complex numbers are `[re, im]` pairs and matrices are
//! lists of rows.

use std::path::Path;

use numschubert::geometry::Flag;
use numschubert::kernel::CMatrix;
use numschubert::{Bracket, Partition, SchubertError, SchubertInstance, SchubertProblem, C64};
use serde::{Deserialize, Serialize};

use crate::CliError;

pub type ComplexJson = [f64; 2];
pub type MatrixJson = Vec<Vec<ComplexJson>>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Notation {
    Brackets,
    Partitions,
}

/// One entry of `conditions`: a bare list, or a row with a multiplicity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ConditionEntry {
    Plain(Vec<usize>),
    Bracket {
        bracket: Vec<usize>,
        #[serde(default = "one")]
        multiplicity: usize,
    },
    Partition {
        partition: Vec<usize>,
        #[serde(default = "one")]
        multiplicity: usize,
    },
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemFile {
    pub k: usize,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub notation: Option<Notation>,
    pub conditions: Vec<ConditionEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    #[serde(flatten)]
    pub problem: ProblemFile,
    pub flags: Vec<MatrixJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionFile {
    pub instance: InstanceFile,
    pub solutions: Vec<MatrixJson>,
    pub residuals: Vec<f64>,
    /// Everything that may differ between otherwise identical runs.
    #[serde(default)]
    pub metadata: Metadata,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub version: String,
    #[serde(default)]
    pub expected: Option<u64>,
    #[serde(default)]
    pub complete: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed_method: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub monodromy_loops: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub paths: Option<PathCounts>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub failures: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings: Option<TimingsJson>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PathCounts {
    pub tracked: usize,
    pub succeeded: usize,
    pub diverged: usize,
    pub failed: usize,
}

/// Wall-clock seconds.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TimingsJson {
    pub seeding: f64,
    pub completion: f64,
    pub total: f64,
}

impl ProblemFile {
    pub fn from_problem(p: &SchubertProblem) -> Self {
        Self {
            k: p.k(),
            n: p.n(),
            notation: Some(Notation::Brackets),
            conditions: p
                .conditions()
                .iter()
                .map(|b| ConditionEntry::Plain(b.entries().to_vec()))
                .collect(),
        }
    }

    fn detect_notation(&self) -> Result<Notation, CliError> {
        if let Some(n) = self.notation {
            return Ok(n);
        }
        let plain: Vec<&Vec<usize>> = self
            .conditions
            .iter()
            .filter_map(|c| match c {
                ConditionEntry::Plain(v) => Some(v),
                _ => None,
            })
            .collect();
        let bracket_like = |v: &Vec<usize>| {
            v.len() == self.k && v.iter().all(|&e| (1..=self.n).contains(&e)) && v.windows(2).all(|w| w[0] < w[1])
        };
        let partition_like = |v: &Vec<usize>| v.len() <= self.k && v.windows(2).all(|w| w[0] >= w[1]);
        let brackets = plain.iter().all(|v| bracket_like(v));
        let partitions = plain.iter().all(|v| partition_like(v));
        match (brackets, partitions) {
            (true, false) => Ok(Notation::Brackets),
            (false, true) => Ok(Notation::Partitions),
            (true, true) if plain.is_empty() => Ok(Notation::Brackets),
            (true, true) => Err(CliError::Input(
                "conditions read both as brackets and as partitions; set \"notation\"".into(),
            )),
            (false, false) => {
                if plain.iter().all(|v| v.len() == self.k) {
                    Ok(Notation::Brackets)
                } else {
                    Ok(Notation::Partitions)
                }
            }
        }
    }

    pub fn to_problem(&self) -> Result<SchubertProblem, CliError> {
        let (k, n) = (self.k, self.n);
        if k == 0 || k >= n {
            return Err(SchubertError::InvalidGrassmannian { k, n }.into());
        }
        let notation = self.detect_notation()?;
        let mut brackets = Vec::new();
        for (index, c) in self.conditions.iter().enumerate() {
            let wrap = |source: SchubertError| SchubertError::InvalidCondition {
                index,
                source: Box::new(source),
            };
            let (bracket, m) = match c {
                ConditionEntry::Plain(v) => match notation {
                    Notation::Brackets => (Bracket::new(k, n, v.clone()).map_err(wrap)?, 1),
                    Notation::Partitions => (Partition::new(k, n, v.clone()).map_err(wrap)?.to_bracket(), 1),
                },
                ConditionEntry::Bracket { bracket, multiplicity } => {
                    (Bracket::new(k, n, bracket.clone()).map_err(wrap)?, *multiplicity)
                }
                ConditionEntry::Partition { partition, multiplicity } => (
                    Partition::new(k, n, partition.clone()).map_err(wrap)?.to_bracket(),
                    *multiplicity,
                ),
            };
            if m == 0 {
                return Err(CliError::Input(format!("condition {index}: multiplicity must be positive")));
            }
            brackets.extend(std::iter::repeat_n(bracket, m));
        }
        Ok(SchubertProblem::new(k, n, brackets)?)
    }
}

pub fn complex_to_json(z: C64) -> ComplexJson {
    [z.re, z.im]
}

pub fn matrix_to_json(m: &CMatrix) -> MatrixJson {
    (0..m.rows())
        .map(|r| (0..m.cols()).map(|c| complex_to_json(m[(r, c)])).collect())
        .collect()
}

pub fn matrix_from_json(m: &MatrixJson, what: &str) -> Result<CMatrix, CliError> {
    let rows: Vec<Vec<C64>> = m
        .iter()
        .map(|row| row.iter().map(|&[re, im]| C64::new(re, im)).collect())
        .collect();
    if rows.is_empty() {
        return Err(CliError::Input(format!("{what}: empty matrix")));
    }
    CMatrix::from_rows(&rows).map_err(|e| CliError::Input(format!("{what}: {e}")))
}

impl InstanceFile {
    pub fn from_instance(inst: &SchubertInstance, seed: Option<u64>) -> Self {
        Self {
            problem: ProblemFile::from_problem(inst.problem()),
            flags: inst.flags().iter().map(|f| matrix_to_json(f.matrix())).collect(),
            seed,
        }
    }

    pub fn to_instance(&self) -> Result<SchubertInstance, CliError> {
        let problem = self.problem.to_problem()?;
        let n = problem.n();
        if self.flags.len() != problem.len() {
            return Err(CliError::Input(format!(
                "{} flags given for {} conditions (multiplicities expanded)",
                self.flags.len(),
                problem.len()
            )));
        }
        let mut flags = Vec::with_capacity(self.flags.len());
        for (index, f) in self.flags.iter().enumerate() {
            let m = matrix_from_json(f, &format!("flag {index}"))?;
            if m.shape() != (n, n) {
                return Err(CliError::Input(format!(
                    "flag {index} is {}x{}, expected {n}x{n}",
                    m.rows(),
                    m.cols()
                )));
            }
            let flag = Flag::new(m).map_err(|e| match e {
                SchubertError::InvalidFlag { reason, .. } => SchubertError::InvalidFlag { index, reason },
                other => other,
            })?;
            flags.push(flag);
        }
        Ok(SchubertInstance::new(problem, flags)?)
    }
}

impl SolutionFile {
    /// Solution matrices, checked against the shape `n x k` of `inst`.
    pub fn matrices(&self, k: usize, n: usize) -> Result<Vec<CMatrix>, CliError> {
        self.solutions
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let m = matrix_from_json(s, &format!("solution {i}"))?;
                if m.shape() != (n, k) {
                    return Err(CliError::Input(format!(
                        "solution {i} is {}x{}, expected {n}x{k}",
                        m.rows(),
                        m.cols()
                    )));
                }
                Ok(m)
            })
            .collect()
    }

    /// The file with volatile metadata removed.
    pub fn without_metadata(&self) -> Self {
        Self {
            metadata: Metadata::default(),
            ..self.clone()
        }
    }
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// Pretty JSON with arrays of scalars kept on one line.
pub fn to_json_string<T: Serialize>(value: &T) -> String {
    let value = serde_json::to_value(value).expect("file types serialize");
    let mut s = String::new();
    write_value(&value, 0, &mut s);
    s.push('\n');
    s
}

fn is_scalar(v: &serde_json::Value) -> bool {
    !matches!(v, serde_json::Value::Array(_) | serde_json::Value::Object(_))
}

fn write_value(v: &serde_json::Value, depth: usize, s: &mut String) {
    use serde_json::Value;
    let pad = |s: &mut String, d: usize| s.extend(std::iter::repeat_n("  ", d));
    match v {
        Value::Array(items) if items.iter().all(is_scalar) => {
            let parts: Vec<String> = items.iter().map(|x| x.to_string()).collect();
            s.push('[');
            s.push_str(&parts.join(", "));
            s.push(']');
        }
        Value::Array(items) => {
            s.push_str("[\n");
            for (i, x) in items.iter().enumerate() {
                pad(s, depth + 1);
                write_value(x, depth + 1, s);
                s.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            pad(s, depth);
            s.push(']');
        }
        Value::Object(map) if map.is_empty() => s.push_str("{}"),
        Value::Object(map) => {
            s.push_str("{\n");
            for (i, (key, x)) in map.iter().enumerate() {
                pad(s, depth + 1);
                s.push_str(&Value::String(key.clone()).to_string());
                s.push_str(": ");
                write_value(x, depth + 1, s);
                s.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            pad(s, depth);
            s.push('}');
        }
        scalar => s.push_str(&scalar.to_string()),
    }
}

/// Reads an instance file, or the instance embedded in a solution file.
pub fn read_instance(path: &Path) -> Result<InstanceFile, CliError> {
    let mut value: serde_json::Value = read_json(path)?;
    if value.get("flags").is_none() {
        if let Some(inner) = value.get_mut("instance") {
            value = inner.take();
        }
    }
    serde_json::from_value(value).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// Whether a JSON document is (or embeds) an instance rather than a bare problem.
pub fn has_instance(path: &Path) -> Result<bool, CliError> {
    let value: serde_json::Value = read_json(path)?;
    Ok(value.get("flags").is_some() || value.get("instance").is_some())
}
