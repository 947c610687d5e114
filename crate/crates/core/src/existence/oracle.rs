//! Exhaustive search as an independent existence oracle.

use super::{Certificate, ExistenceVerdict, Reason};
use crate::array::MrsParams;
use crate::error::Result;
use crate::group::FiniteAbelianGroup;
use crate::search::{search, SearchOptions, SearchOutcome};

/// Largest group order the oracle attempts by default.
pub const DEFAULT_ORACLE_CAP: u64 = 36;

#[derive(Clone, Copy, Debug)]
pub struct OracleOptions {
    pub search: SearchOptions,
    /// Orders above this are reported `Unknown` without searching.
    pub cap: u64,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions { search: SearchOptions::default(), cap: DEFAULT_ORACLE_CAP }
    }
}

/// Searches for an `MRS_G(m, n; s, k; c)`; `NotExists` only after every
/// branch has been explored.
pub fn oracle_search(p: MrsParams, gamma: &FiniteAbelianGroup, opts: &OracleOptions) -> Result<ExistenceVerdict> {
    if !p.is_admissible() || gamma.order() != p.order() as u64 {
        return Ok(ExistenceVerdict::not_exists(Reason::Nec, format!("{p} over {gamma} is not admissible")));
    }
    if gamma.order() > opts.cap {
        return Ok(ExistenceVerdict::unknown(
            Reason::Oracle,
            format!("order {} is above the oracle cap {}", gamma.order(), opts.cap),
        ));
    }
    let outcome = match search(p, gamma, &opts.search) {
        Ok(o) => o,
        Err(e) => return Ok(ExistenceVerdict::unknown(Reason::Oracle, e.to_string())),
    };
    Ok(match outcome {
        SearchOutcome::Found(w) => ExistenceVerdict::exists(Reason::Oracle, Some(w), ""),
        SearchOutcome::Exhausted { nodes, tasks } => ExistenceVerdict {
            certificate: Some(Certificate { nodes, tasks, exhaustive: true }),
            ..ExistenceVerdict::not_exists(Reason::Oracle, "exhaustive search")
        },
        SearchOutcome::BudgetExceeded { nodes, tasks } => ExistenceVerdict {
            certificate: Some(Certificate { nodes, tasks, exhaustive: false }),
            ..ExistenceVerdict::unknown(Reason::Oracle, format!("budget of {} nodes per task exceeded", opts.search.budget))
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::existence::Status;

    #[test]
    fn small_oracle_runs() {
        let opts = OracleOptions::default();
        let z6: FiniteAbelianGroup = "Z6".parse().unwrap();
        let v = oracle_search(MrsParams::new(2, 3, 3, 2, 1), &z6, &opts).unwrap();
        assert_eq!(v.status, Status::NotExists);
        assert!(v.certificate.unwrap().exhaustive);
        let z4: FiniteAbelianGroup = "Z4".parse().unwrap();
        let v = oracle_search(MrsParams::full(2, 2, 1), &z4, &opts).unwrap();
        assert_eq!(v.status, Status::Exists);
        let z2z6: FiniteAbelianGroup = "Z2+Z6".parse().unwrap();
        let v = oracle_search(MrsParams::new(2, 3, 3, 2, 2), &z2z6, &opts).unwrap();
        assert_eq!(v.status, Status::NotExists);
        let capped = OracleOptions { cap: 4, ..opts };
        let v = oracle_search(MrsParams::new(2, 3, 3, 2, 1), &z6, &capped).unwrap();
        assert_eq!(v.status, Status::Unknown);
    }
}
