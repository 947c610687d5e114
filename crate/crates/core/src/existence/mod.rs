//! Existence decisions for `MRS_G(m, n; s, k; c)`: a cited verdict from the
//! known theorems, an exhaustive-search oracle, and a sweep comparing them.

mod decide;
mod oracle;
mod sweep;

use std::fmt;

use serde::{Serialize, Serializer};

use crate::array::MrsInstance;

pub use decide::{decide, decide_with, DecideOptions};
pub use oracle::{oracle_search, OracleOptions, DEFAULT_ORACLE_CAP};
pub use sweep::{admissible_params, cross_check, ConsistencyReport, SweepOptions, SweepRow};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub enum Status {
    Exists,
    NotExists,
    Unknown,
}

impl Status {
    pub fn is_definite(self) -> bool {
        self != Status::Unknown
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// The result a verdict rests on.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Reason {
    /// Row/column counts, `ms = nk` or the group order fail.
    Nec,
    /// `s` or `k` odd with a single involution.
    CorSkOdd1,
    /// `k = 2` with `ns` odd (or the transpose).
    PropNoOdd,
    /// Full arrays outside the `{odd, 2^alpha}` shapes.
    ThmEsistenza,
    /// Full `(2l+1) x 4` arrays with `c = 2 (mod 4)`, cited.
    Ch21,
    /// Full `(2l+1) x 8` arrays with `c = 2 (mod 4)`.
    ThmMain,
    /// Full `(2l+1) x 2^alpha` arrays with `c` odd.
    PropOddC,
    /// All of `m, n, s, k` even.
    PropEven,
    /// `s, k` even outside the open congruence case.
    PropMod4,
    /// `s = k = 2 (mod 4)`, `m, n` odd, from a doubled diagonal set.
    Mrs2bSqRt,
    /// A full set of shape `k/d x s` exists by the full-array theorem.
    Cor123,
    /// A full set of shape `k/d x s` exists by another result.
    LemmaGcd,
    /// Full `{odd, 2^alpha}` shapes not settled by any result.
    ConjChFrontier,
    /// `s = k = 2 (mod 4)` with `m, n` odd and no applicable construction.
    Open2Mod4,
    /// Partially filled arrays not covered by any result.
    OpenPartial,
    /// Exhaustive search.
    Oracle,
}

impl Reason {
    pub fn tag(self) -> &'static str {
        match self {
            Reason::Nec => "NEC",
            Reason::CorSkOdd1 => "COR_SKODD1",
            Reason::PropNoOdd => "PROP_NO_ODD",
            Reason::ThmEsistenza => "THM_ESISTENZA",
            Reason::Ch21 => "CH21",
            Reason::ThmMain => "THM_MAIN",
            Reason::PropOddC => "PROP_ODD_C",
            Reason::PropEven => "PROP_EVEN",
            Reason::PropMod4 => "PROP_MOD4",
            Reason::Mrs2bSqRt => "MRS2B_SQ_RT",
            Reason::Cor123 => "COR123",
            Reason::LemmaGcd => "LEMMA_GCD",
            Reason::ConjChFrontier => "CONJ_CH_FRONTIER",
            Reason::Open2Mod4 => "OPEN_2MOD4",
            Reason::OpenPartial => "OPEN_PARTIAL",
            Reason::Oracle => "ORACLE",
        }
    }
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl Serialize for Reason {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.tag())
    }
}

/// Search statistics behind an oracle verdict.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct Certificate {
    pub nodes: u64,
    pub tasks: usize,
    /// True when every branch was explored.
    pub exhaustive: bool,
}

#[derive(Clone, Debug)]
pub struct ExistenceVerdict {
    pub status: Status,
    pub reason: Reason,
    /// A verified instance, when one was built or found.
    pub witness: Option<MrsInstance>,
    pub certificate: Option<Certificate>,
    pub note: String,
}

impl ExistenceVerdict {
    fn new(status: Status, reason: Reason, note: impl Into<String>) -> Self {
        ExistenceVerdict { status, reason, witness: None, certificate: None, note: note.into() }
    }

    fn exists(reason: Reason, witness: Option<MrsInstance>, note: impl Into<String>) -> Self {
        ExistenceVerdict { witness, ..Self::new(Status::Exists, reason, note) }
    }

    fn not_exists(reason: Reason, note: impl Into<String>) -> Self {
        Self::new(Status::NotExists, reason, note)
    }

    fn unknown(reason: Reason, note: impl Into<String>) -> Self {
        Self::new(Status::Unknown, reason, note)
    }

    /// The same verdict for the transposed parameters.
    pub fn transpose(mut self) -> Self {
        self.witness = self.witness.map(|w| w.transpose());
        self
    }
}

impl fmt::Display for ExistenceVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}]", self.status, self.reason)?;
        if !self.note.is_empty() {
            write!(f, ": {}", self.note)?;
        }
        Ok(())
    }
}
