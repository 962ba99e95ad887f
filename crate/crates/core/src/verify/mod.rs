//! Runnable acceptance checks with a stable JSON report.
//!
//! Exact checks use rational arithmetic and zero tolerance; statistical
//! checks draw from per-replicate streams of one master seed.

mod exact;
mod statistical;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};
use crate::rng::{stream, StreamRng};

/// Master seed used when none is given.
pub const DEFAULT_SEED: u64 = 7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Exact,
    Statistical,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Suite::Exact),
            "statistical" => Ok(Suite::Statistical),
            _ => Err(param(format!("unknown suite {s:?} (exact or statistical)"))),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Exact => "exact",
            Suite::Statistical => "statistical",
        })
    }
}

/// Outcome of one criterion.  `measured` holds the numbers the verdict
/// was based on.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub id: u32,
    pub name: String,
    pub suite: Suite,
    pub passed: bool,
    pub detail: String,
    pub measured: BTreeMap<String, f64>,
    pub seconds: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub seed: u64,
    /// False when the time budget ran out before every selected criterion
    /// was attempted.
    pub complete: bool,
    pub criteria: Vec<CriterionReport>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.complete && self.criteria.iter().all(|c| c.passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// What a check returns before timing and bookkeeping are attached.
#[derive(Debug, Default)]
pub(crate) struct Outcome {
    passed: bool,
    lines: Vec<String>,
    measured: BTreeMap<String, f64>,
}

impl Outcome {
    pub(crate) fn new() -> Self {
        Outcome { passed: true, ..Default::default() }
    }

    /// Records a sub-check; any failing sub-check fails the criterion.
    pub(crate) fn check(&mut self, ok: bool, line: impl Into<String>) {
        self.passed &= ok;
        let line = line.into();
        self.lines.push(if ok { line } else { format!("FAILED {line}") });
    }

    pub(crate) fn note(&mut self, line: impl Into<String>) {
        self.lines.push(line.into());
    }

    pub(crate) fn measure(&mut self, key: impl Into<String>, value: f64) {
        self.measured.insert(key.into(), value);
    }
}

type CheckFn = fn(u64) -> Result<Outcome>;

/// A registered acceptance criterion.
#[derive(Clone, Copy)]
pub struct Criterion {
    pub id: u32,
    pub name: &'static str,
    pub suite: Suite,
    check: CheckFn,
}

impl fmt::Debug for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Criterion").field("id", &self.id).field("name", &self.name).finish()
    }
}

impl Criterion {
    pub fn run(&self, seed: u64) -> CriterionReport {
        let start = Instant::now();
        let outcome = (self.check)(seed).unwrap_or_else(|e| {
            let mut o = Outcome::new();
            o.check(false, format!("error: {e}"));
            o
        });
        CriterionReport {
            id: self.id,
            name: self.name.to_string(),
            suite: self.suite,
            passed: outcome.passed,
            detail: outcome.lines.join("; "),
            measured: outcome.measured,
            seconds: start.elapsed().as_secs_f64(),
        }
    }
}

pub fn criteria() -> Vec<Criterion> {
    use Suite::*;
    let c = |id, name, suite, check| Criterion { id, name, suite, check };
    vec![
        c(1, "exact one-step recurrence", Exact, exact::recurrence_sweep as CheckFn),
        c(2, "exact martingale identity", Exact, exact::martingale_sweep),
        c(3, "falling factorial identities", Exact, exact::falling_factorials),
        c(4, "Remy uniformity", Exact, exact::remy_uniformity),
        c(5, "Loop and Glu coupling", Exact, exact::coupling),
        c(6, "seed decomposition law", Statistical, statistical::seed_decomposition),
        c(7, "seed discrimination bound", Statistical, statistical::discrimination),
        c(8, "max degree scaling", Statistical, statistical::degree_scaling),
        c(9, "edge observable first moment", Statistical, statistical::edge_moment),
        c(10, "net bound on a Remy run", Statistical, statistical::net_bound),
        c(11, "looptree diameter constant", Statistical, statistical::diameter_constant),
        c(12, "looptree ball dimension", Statistical, statistical::dimension),
        c(13, "subtree samplers", Statistical, statistical::samplers),
        c(14, "affine looptree and Ford identity", Exact, exact::ford_identity),
    ]
}

/// Runs the selected criteria in id order.  With a budget, criteria that
/// would start after it has elapsed are skipped and the report is marked
/// incomplete.
pub fn run(suite: Option<Suite>, ids: Option<&[u32]>, seed: u64, budget: Option<Duration>) -> Result<VerifyReport> {
    let all = criteria();
    if let Some(ids) = ids {
        if let Some(bad) = ids.iter().find(|&&i| !all.iter().any(|c| c.id == i)) {
            return Err(param(format!("no criterion {bad}")));
        }
    }
    let start = Instant::now();
    let mut complete = true;
    let mut reports = Vec::new();
    for c in all {
        if suite.is_some_and(|s| s != c.suite) || ids.is_some_and(|ids| !ids.contains(&c.id)) {
            continue;
        }
        if budget.is_some_and(|b| start.elapsed() >= b) {
            complete = false;
            break;
        }
        reports.push(c.run(seed));
    }
    Ok(VerifyReport { seed, complete, criteria: reports })
}

/// Stream for replicate `replicate` of criterion `id`.
pub(crate) fn replicate_rng(seed: u64, id: u32, replicate: u64) -> StreamRng {
    stream(seed, (u64::from(id) << 40) | replicate)
}
