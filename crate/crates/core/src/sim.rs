//! Storage-repair simulation: encode a random stripe, lose some nodes, and
//! repair locally where a group lost a single symbol, globally otherwise.

use std::fmt;
use std::str::FromStr;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codec::LrcCode;
use crate::error::{Error, Result};

/// Which nodes fail in a trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum FailureModel {
    /// One uniformly random node.
    SingleUniform,
    /// `f` distinct uniformly random nodes.
    MultiUniform(usize),
    /// Every node of one uniformly random repair group.
    GroupBurst,
}

impl fmt::Display for FailureModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FailureModel::SingleUniform => f.write_str("single-uniform"),
            FailureModel::MultiUniform(k) => write!(f, "multi-uniform({k})"),
            FailureModel::GroupBurst => f.write_str("group-burst"),
        }
    }
}

impl FromStr for FailureModel {
    type Err = Error;

    /// Accepts `single-uniform`, `group-burst`, and `multi-uniform(F)` or
    /// `multi-uniform:F`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "single-uniform" => return Ok(FailureModel::SingleUniform),
            "group-burst" => return Ok(FailureModel::GroupBurst),
            _ => {}
        }
        let count = s
            .strip_prefix("multi-uniform")
            .and_then(|rest| {
                rest.strip_prefix(':').or_else(|| rest.strip_prefix('(').and_then(|r| r.strip_suffix(')')))
            })
            .and_then(|n| n.trim().parse().ok())
            .ok_or_else(|| Error::Format(format!("unknown failure model {s:?}")))?;
        Ok(FailureModel::MultiUniform(count))
    }
}

impl From<FailureModel> for String {
    fn from(m: FailureModel) -> String {
        m.to_string()
    }
}

impl TryFrom<String> for FailureModel {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

/// Seed of stream `counter` derived from a master seed (SplitMix64 finalizer
/// over a golden-ratio counter).
pub fn stream_seed(seed: u64, counter: u64) -> u64 {
    let mut z = seed.wrapping_add(counter.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RepairMode {
    None,
    Local,
    Global,
}

/// One JSON line of simulator output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: u64,
    pub erased: Vec<usize>,
    pub mode: RepairMode,
    pub success: bool,
    pub helpers_read: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationSummary {
    pub trials: u64,
    pub failure_model: FailureModel,
    pub seed: u64,
    pub successes: u64,
    pub success_rate: f64,
    /// 95% Wilson score interval for the success rate.
    pub success_ci95: (f64, f64),
    pub mean_helpers_read: f64,
    /// Fraction of trials repaired with local repair alone.
    pub local_fraction: f64,
}

#[derive(Debug, Clone)]
pub struct Simulation {
    pub summary: SimulationSummary,
    pub records: Vec<TrialRecord>,
}

fn wilson(successes: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let z = 1.959_963_984_540_054_f64;
    let n = trials as f64;
    let p = successes as f64 / n;
    let denom = 1.0 + z * z / n;
    let centre = (p + z * z / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z * z / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

/// Repairs `word` with the local-first policy: if every erased symbol is the
/// only erasure in its group, each is rebuilt from its group partners;
/// otherwise the whole pattern goes to global repair.
pub fn repair(code: &LrcCode, word: &[Option<u32>]) -> (RepairMode, Result<Vec<u32>>, usize) {
    let erased: Vec<usize> = (0..word.len()).filter(|&i| word[i].is_none()).collect();
    if erased.is_empty() {
        return (RepairMode::None, Ok(word.iter().map(|x| x.unwrap()).collect()), 0);
    }
    let lone = erased.iter().all(|&i| code.group_of(i).iter().filter(|&&j| word[j].is_none()).count() == 1);
    if lone {
        let mut out: Vec<u32> = word.iter().map(|x| x.unwrap_or(0)).collect();
        let mut helpers = 0;
        for &i in &erased {
            match code.repair_local(word, i) {
                Ok(rep) => {
                    helpers += rep.helpers.len();
                    out[i] = rep.value;
                }
                Err(e) => return (RepairMode::Local, Err(e), helpers),
            }
        }
        (RepairMode::Local, Ok(out), helpers)
    } else {
        let helpers = word.len() - erased.len();
        (RepairMode::Global, code.repair_global(word).map(|g| g.codeword), helpers)
    }
}

fn erase(code: &LrcCode, model: FailureModel, rng: &mut ChaCha8Rng) -> Result<Vec<usize>> {
    let n = code.len();
    let mut erased = match model {
        FailureModel::SingleUniform => vec![rng.gen_range(0..n)],
        FailureModel::MultiUniform(f) => {
            if f > n {
                return Err(Error::InvalidParams(format!("cannot fail {f} of {n} nodes")));
            }
            sample(rng, n, f).into_vec()
        }
        FailureModel::GroupBurst => code.groups()[rng.gen_range(0..code.groups().len())].clone(),
    };
    erased.sort_unstable();
    Ok(erased)
}

/// Runs `trials` independent trials; trial `t` draws from its own stream
/// [`stream_seed`]`(seed, t)`, so results do not depend on thread count.
pub fn simulate_repairs(code: &LrcCode, trials: u64, model: FailureModel, seed: u64) -> Result<Simulation> {
    if let FailureModel::MultiUniform(f) = model {
        if f > code.len() {
            return Err(Error::InvalidParams(format!("cannot fail {f} of {} nodes", code.len())));
        }
    }
    let q = code.field().order();
    let k = code.dimension();
    let records: Vec<TrialRecord> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(seed, t));
            let msg: Vec<u32> = (0..k).map(|_| rng.gen_range(0..q)).collect();
            let cw = code.encode(&msg).expect("message has length k");
            let erased = erase(code, model, &mut rng).expect("model checked above");
            let mut word: Vec<Option<u32>> = cw.iter().map(|&x| Some(x)).collect();
            for &i in &erased {
                word[i] = None;
            }
            let (mode, result, helpers_read) = repair(code, &word);
            let success = result.map(|c| c == cw).unwrap_or(false);
            TrialRecord { trial: t, erased, mode, success, helpers_read }
        })
        .collect();
    let successes = records.iter().filter(|r| r.success).count() as u64;
    let local = records.iter().filter(|r| r.mode == RepairMode::Local && r.success).count();
    let helpers: usize = records.iter().map(|r| r.helpers_read).sum();
    let denom = trials.max(1) as f64;
    let summary = SimulationSummary {
        trials,
        failure_model: model,
        seed,
        successes,
        success_rate: successes as f64 / denom,
        success_ci95: wilson(successes, trials),
        mean_helpers_read: helpers as f64 / denom,
        local_fraction: local as f64 / denom,
    };
    Ok(Simulation { summary, records })
}
