//! Sweeping all small cases, comparing the decision procedure with the oracle.

use rayon::prelude::*;
use serde::Serialize;

use super::{decide_with, oracle_search, DecideOptions, OracleOptions, Status};
use crate::array::{MrsInstance, MrsParams};
use crate::error::Result;
use crate::group::{all_abelian_groups, FiniteAbelianGroup};
use crate::num::is_power_of_two;

#[derive(Clone, Copy, Debug)]
pub struct SweepOptions {
    pub max_order: u64,
    /// Run the oracle on every case; `None` sweeps the decision procedure only.
    pub oracle: Option<OracleOptions>,
    pub decide: DecideOptions,
    /// Worker threads across cases; each search runs single-threaded.
    pub jobs: usize,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions { max_order: 12, oracle: None, decide: DecideOptions::default(), jobs: 1 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    pub params: MrsParams,
    pub group: String,
    pub status: Status,
    pub reason: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_status: Option<Status>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_exhaustive: Option<bool>,
    pub witness_ref: Option<String>,
    #[serde(skip)]
    pub witness: Option<MrsInstance>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ConsistencyReport {
    pub rows: Vec<SweepRow>,
    /// Cases where one side says `Exists` and the other `NotExists`.
    pub contradictions: Vec<String>,
    /// Cases where exactly one side is definite.
    pub frontier: Vec<String>,
    /// Full `{odd, 2^alpha}` cases whose definite status disagrees with the
    /// predicted characterization.
    pub conjecture_violations: Vec<String>,
    /// Witnesses that failed verification.
    pub bad_witnesses: Vec<String>,
}

impl ConsistencyReport {
    pub fn is_consistent(&self) -> bool {
        self.contradictions.is_empty() && self.conjecture_violations.is_empty() && self.bad_witnesses.is_empty()
    }
}

/// Every `(m, n, s, k, c)` with `2 <= s <= n`, `2 <= k <= m`, `ms = nk` and
/// `nkc = order`.
pub fn admissible_params(order: usize) -> Vec<MrsParams> {
    let mut out = Vec::new();
    for c in (1..=order).filter(|c| order % c == 0) {
        let nk = order / c;
        for n in (2..=nk).filter(|n| nk % n == 0) {
            let k = nk / n;
            if k < 2 {
                continue;
            }
            for s in (2..=n).filter(|s| nk % s == 0) {
                let m = nk / s;
                if k <= m {
                    out.push(MrsParams::new(m, n, s, k, c));
                }
            }
        }
    }
    out
}

/// Predicted existence for full `{odd, 2^alpha}` shapes: the group has zero
/// or several involutions and the even side is not 2.
fn predicted(p: MrsParams, g: &FiniteAbelianGroup) -> Option<bool> {
    if !p.is_full() {
        return None;
    }
    let shape = |x: usize, y: usize| x % 2 == 1 && y % 2 == 0 && is_power_of_two(y as u64);
    let even_side = if shape(p.m, p.n) {
        p.n
    } else if shape(p.n, p.m) {
        p.m
    } else {
        return None;
    };
    Some(g.in_upsilon() && even_side != 2)
}

fn run_case(p: MrsParams, g: &FiniteAbelianGroup, opts: &SweepOptions) -> Result<SweepRow> {
    let v = decide_with(p, g, &opts.decide)?;
    let oracle = opts.oracle.as_ref().map(|o| oracle_search(p, g, o)).transpose()?;
    let witness = v.witness.clone().or_else(|| oracle.as_ref().and_then(|o| o.witness.clone()));
    Ok(SweepRow {
        params: p,
        group: g.to_string(),
        status: v.status,
        reason: v.reason.tag().to_string(),
        oracle_status: oracle.as_ref().map(|o| o.status),
        oracle_exhaustive: oracle.as_ref().and_then(|o| o.certificate.map(|c| c.exhaustive)),
        witness_ref: witness.as_ref().map(|_| format!("{p}@{g}")),
        witness,
    })
}

/// Decides every admissible case over every group of order at most
/// `max_order`, optionally checking each against the oracle.
pub fn cross_check(opts: &SweepOptions) -> Result<ConsistencyReport> {
    let cases: Vec<(MrsParams, FiniteAbelianGroup)> = (2..=opts.max_order)
        .flat_map(|order| {
            let params = admissible_params(order as usize);
            all_abelian_groups(order).into_iter().flat_map(move |g| params.clone().into_iter().map(move |p| (p, g.clone())))
        })
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs.max(1))
        .build()
        .map_err(|e| crate::error::MrsError::Unsupported(e.to_string()))?;
    let rows: Vec<SweepRow> =
        pool.install(|| cases.par_iter().map(|(p, g)| run_case(*p, g, opts)).collect::<Result<_>>())?;

    let mut report = ConsistencyReport::default();
    for ((p, g), row) in cases.iter().zip(&rows) {
        let label = format!("{p} over {g}");
        if let Some(w) = &row.witness {
            let r = w.verify();
            if !r.passed() || w.params() != *p {
                report.bad_witnesses.push(format!("{label}: {}", r.problems.join("; ")));
            }
        }
        let mut definite = row.status;
        if let Some(o) = row.oracle_status {
            match (row.status, o) {
                (Status::Exists, Status::NotExists) | (Status::NotExists, Status::Exists) => {
                    report.contradictions.push(format!("{label}: decide {} [{}], oracle {o}", row.status, row.reason))
                }
                (Status::Unknown, d) if d.is_definite() => {
                    report.frontier.push(format!("{label}: decide Unknown [{}], oracle {d}", row.reason));
                    definite = d;
                }
                (d, Status::Unknown) if d.is_definite() => {
                    report.frontier.push(format!("{label}: decide {d} [{}], oracle Unknown", row.reason))
                }
                _ => {}
            }
        }
        if let (Some(expect), true) = (predicted(*p, g), definite.is_definite()) {
            if expect != (definite == Status::Exists) {
                report.conjecture_violations.push(format!("{label}: predicted {expect}, found {definite}"));
            }
        }
    }
    report.rows = rows;
    Ok(report)
}
