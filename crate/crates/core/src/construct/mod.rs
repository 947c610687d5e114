//! Constructions of full magic rectangle sets over groups: zero-sum two-row
//! blocks, the explicit `r x 8` base cases, extension by a direct summand,
//! lifting a cyclic factor, and the pipelines assembling them.

mod base_case;
mod blocks;
mod lifting;
mod pipeline;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{MrsError, Result};
use crate::group::FiniteAbelianGroup;

pub use base_case::{base_case_p_2alpha, base_case_r8_2, complete_header};
pub use blocks::{zero_sum_blocks, OmegaSet};
pub use lifting::{extend_direct_sum, lift_cyclic};
pub use pipeline::{odd_c_construction, theorem_main};

/// Shape of the 2-part of order 16 (with more than one involution) used by the
/// `r x 8` base cases.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub enum BaseCaseKind {
    Z4Z4,
    Z2Z8,
    Z2Z2Z4,
    Z2Z2Z2Z2,
}

impl BaseCaseKind {
    pub const ALL: [BaseCaseKind; 4] =
        [BaseCaseKind::Z4Z4, BaseCaseKind::Z2Z8, BaseCaseKind::Z2Z2Z4, BaseCaseKind::Z2Z2Z2Z2];

    pub fn name(self) -> &'static str {
        match self {
            BaseCaseKind::Z4Z4 => "z4z4",
            BaseCaseKind::Z2Z8 => "z2z8",
            BaseCaseKind::Z2Z2Z4 => "z2z2z4",
            BaseCaseKind::Z2Z2Z2Z2 => "z2z2z2z2",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        BaseCaseKind::ALL.into_iter().find(|k| k.name() == name)
    }

    /// Invariant factors of the 2-part.
    pub fn two_part(self) -> &'static [u64] {
        match self {
            BaseCaseKind::Z4Z4 => &[4, 4],
            BaseCaseKind::Z2Z8 => &[2, 8],
            BaseCaseKind::Z2Z2Z4 => &[2, 2, 4],
            BaseCaseKind::Z2Z2Z2Z2 => &[2, 2, 2, 2],
        }
    }

    /// The group of the `r x 8` base case, as written by its construction:
    /// a cyclic factor absorbing `r` followed by the remaining 2-power factors.
    pub fn group(self, r: u64) -> Result<FiniteAbelianGroup> {
        match self {
            BaseCaseKind::Z4Z4 => FiniteAbelianGroup::new(&[4 * r, 4]),
            BaseCaseKind::Z2Z8 => FiniteAbelianGroup::new(&[2 * r, 8]),
            BaseCaseKind::Z2Z2Z4 => FiniteAbelianGroup::new(&[2 * r, 2, 4]),
            BaseCaseKind::Z2Z2Z2Z2 => FiniteAbelianGroup::new(&[2 * r, 2, 2, 2]),
        }
    }

    /// Kind matching the 2-part of `g`, if it has order 16 and is not cyclic.
    pub fn of_group(g: &FiniteAbelianGroup) -> Option<Self> {
        let mut two = g.sylow_factors(2);
        two.sort_unstable();
        BaseCaseKind::ALL.into_iter().find(|k| k.two_part() == two.as_slice())
    }
}

impl fmt::Display for BaseCaseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BaseCaseKind {
    type Err = MrsError;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.to_ascii_lowercase().replace(['+', '_', ' '], "");
        BaseCaseKind::ALL
            .into_iter()
            .find(|k| k.name() == key)
            .ok_or_else(|| MrsError::InvalidInput(format!("unknown base-case kind {s:?}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kinds() {
        let g: FiniteAbelianGroup = "Z12+Z4".parse().unwrap();
        assert_eq!(BaseCaseKind::of_group(&g), Some(BaseCaseKind::Z4Z4));
        let g: FiniteAbelianGroup = "Z48".parse().unwrap();
        assert_eq!(BaseCaseKind::of_group(&g), None);
        assert_eq!("Z2+Z2+Z4".parse::<BaseCaseKind>().unwrap(), BaseCaseKind::Z2Z2Z4);
        assert!("z8z2".parse::<BaseCaseKind>().is_err());
        for k in BaseCaseKind::ALL {
            assert_eq!(k.group(3).unwrap().order(), 48);
        }
    }
}
