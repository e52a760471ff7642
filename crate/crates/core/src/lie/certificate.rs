use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::scalar::Field;

/// Witnesses kept per certificate; the full count goes in `total_failures`.
pub const WITNESS_CAP: usize = 16;

/// A failing basis tuple and the defect vector observed there.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub indices: Vec<usize>,
    pub defect: Vec<String>,
}

impl Witness {
    pub fn new<F: Field>(indices: Vec<usize>, defect: &[F]) -> Self {
        Witness {
            indices,
            defect: defect.iter().map(ToString::to_string).collect(),
        }
    }

    pub fn message(indices: Vec<usize>, msg: impl Into<String>) -> Self {
        Witness {
            indices,
            defect: vec![msg.into()],
        }
    }
}

/// Verdict of one named check on one target.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub check: String,
    pub target: String,
    pub pass: bool,
    pub witnesses: Vec<Witness>,
    pub total_failures: usize,
    pub elapsed_ms: u64,
    /// Set when the inputs did not meet the check's precondition.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precondition: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub details: BTreeMap<String, Value>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub subchecks: Vec<Certificate>,
}

fn elapsed(start: Instant) -> u64 {
    start.elapsed().as_millis() as u64
}

impl Certificate {
    pub fn from_failures(
        check: impl Into<String>,
        target: impl Into<String>,
        mut failures: Vec<Witness>,
        start: Instant,
    ) -> Self {
        let total = failures.len();
        failures.truncate(WITNESS_CAP);
        Certificate {
            check: check.into(),
            target: target.into(),
            pass: total == 0,
            witnesses: failures,
            total_failures: total,
            elapsed_ms: elapsed(start),
            precondition: None,
            details: BTreeMap::new(),
            subchecks: Vec::new(),
        }
    }

    /// Passes iff every subcheck passes. Each failing child `k` contributes a
    /// witness `[k]` carrying the child's first defect.
    pub fn composite(
        check: impl Into<String>,
        target: impl Into<String>,
        subchecks: Vec<Certificate>,
        start: Instant,
    ) -> Self {
        let failures = subchecks
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.pass)
            .map(|(k, c)| Witness {
                indices: vec![k],
                defect: c.first_defect(),
            })
            .collect();
        let mut cert = Self::from_failures(check, target, failures, start);
        cert.subchecks = subchecks;
        cert
    }

    pub fn precondition_failure(
        check: impl Into<String>,
        target: impl Into<String>,
        message: impl Into<String>,
        witness: Option<Witness>,
        start: Instant,
    ) -> Self {
        let message = message.into();
        let w = witness.unwrap_or_else(|| Witness::message(Vec::new(), message.clone()));
        let mut cert = Self::from_failures(check, target, vec![w], start);
        cert.precondition = Some(message);
        cert
    }

    fn first_defect(&self) -> Vec<String> {
        if let Some(w) = self.witnesses.first() {
            let mut d = vec![format!("{}:{:?}", self.check, w.indices)];
            d.extend(w.defect.iter().cloned());
            d
        } else {
            vec![self.check.clone()]
        }
    }

    pub fn with_target(mut self, target: impl Into<String>) -> Self {
        self.target = target.into();
        self
    }

    pub fn with_check(mut self, check: impl Into<String>) -> Self {
        self.check = check.into();
        self
    }

    pub fn detail(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.details.insert(key.to_string(), value.into());
        self
    }

    pub fn set_detail(&mut self, key: &str, value: impl Into<Value>) {
        self.details.insert(key.to_string(), value.into());
    }

    /// True if this certificate or any nested one failed a precondition.
    pub fn has_precondition_failure(&self) -> bool {
        self.precondition.is_some()
            || self
                .subchecks
                .iter()
                .any(Certificate::has_precondition_failure)
    }

    pub fn subcheck(&self, check: &str) -> Option<&Certificate> {
        self.subchecks.iter().find(|c| c.check == check)
    }

    /// Zeroes timing fields recursively, for byte-stable comparisons.
    pub fn strip_timing(&mut self) {
        self.elapsed_ms = 0;
        for s in &mut self.subchecks {
            s.strip_timing();
        }
    }
}

/// Evaluates `f` on all pairs `i < j < n` in parallel; failures come back in
/// lexicographic order.
pub(crate) fn sweep_pairs<W>(n: usize, f: W) -> Vec<Witness>
where
    W: Fn(usize, usize) -> Option<Witness> + Sync + Send,
{
    (0..n)
        .into_par_iter()
        .map(|i| (i + 1..n).filter_map(|j| f(i, j)).collect::<Vec<_>>())
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

/// Evaluates `f` on all triples `i < j < k < n`.
pub(crate) fn sweep_triples<W>(n: usize, f: W) -> Vec<Witness>
where
    W: Fn(usize, usize, usize) -> Option<Witness> + Sync + Send,
{
    (0..n)
        .into_par_iter()
        .map(|i| {
            let mut out = Vec::new();
            for j in i + 1..n {
                for k in j + 1..n {
                    if let Some(w) = f(i, j, k) {
                        out.push(w);
                    }
                }
            }
            out
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

/// Evaluates `f` on every index in `0..n`.
pub(crate) fn sweep_indices<W>(n: usize, f: W) -> Vec<Witness>
where
    W: Fn(usize) -> Vec<Witness> + Sync + Send,
{
    (0..n)
        .into_par_iter()
        .map(f)
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}
