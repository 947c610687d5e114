//! Base cases: zero-sum `r x 8` sets with two arrays, and `p x 2^alpha`
//! single arrays found by search.

use super::blocks::{zero_sum_blocks, OmegaSet};
use super::BaseCaseKind;
use crate::array::{juxtapose_horizontal, juxtapose_vertical, MrsInstance, MrsParams, PFArray};
use crate::error::{MrsError, Result};
use crate::fixtures::{self, Header};
use crate::group::FiniteAbelianGroup;
use crate::num::{is_power_of_two, is_prime};
use crate::search::{search, SearchOptions, SearchOutcome};

fn small_fixture(kind: BaseCaseKind) -> Option<&'static str> {
    match kind {
        BaseCaseKind::Z4Z4 => Some("base_z12_z4_r3"),
        BaseCaseKind::Z2Z8 => Some("base_z6_z8_r3"),
        BaseCaseKind::Z2Z2Z4 => Some("base_z6_z2_z4_r3"),
        BaseCaseKind::Z2Z2Z2Z2 => None,
    }
}

/// A zero-sum `MRS(r, 8; 2)` over [`BaseCaseKind::group`]`(r)`, for odd `r >= 3`.
///
/// Starts from the stored header rows and completes each array with rows of
/// zero-sum blocks over the residues of the cyclic factor not used by the
/// header. At `r = 3` the first three kinds use their stored complete arrays.
pub fn base_case_r8_2(r: u64, kind: BaseCaseKind) -> Result<MrsInstance> {
    if r % 2 == 0 || r < 3 {
        return Err(MrsError::UnsupportedParams(format!("r must be odd and at least 3, got {r}")));
    }
    if r == 3 {
        if let Some(name) = small_fixture(kind) {
            return fixtures::instance(name)?.into_verified();
        }
    }
    complete_header(r, &fixtures::header(kind))
}

/// Completes instantiated header rows to a verified `MRS(r, 8; 2)` with rows
/// of zero-sum blocks over the unused residues of the cyclic factor.
pub fn complete_header(r: u64, header: &Header) -> Result<MrsInstance> {
    if r % 2 == 0 || r < 3 {
        return Err(MrsError::UnsupportedParams(format!("r must be odd and at least 3, got {r}")));
    }
    let params = MrsParams::full(r as usize, 8, 2);
    if (r as usize) < header.rows() {
        return Err(MrsError::UnsupportedParams(format!("r = {r} is below the {} header rows", header.rows())));
    }
    let header = header.instantiate(r)?;
    let cyc = header.group.factors()[0];
    let tail = FiniteAbelianGroup::new(&header.group.factors()[1..])?;
    let omega = OmegaSet::complement(cyc, &header.first_coords)?;
    let blocks = zero_sum_blocks(&omega, &tail)?;
    // rows of width 8: single blocks, or two 2x4 blocks side by side
    let strips: Vec<PFArray> = if tail.order() == 4 {
        blocks.chunks(2).map(juxtapose_horizontal).collect::<Result<_>>()?
    } else {
        blocks
    };
    let per_array = (r as usize - header.arrays[0].rows()) / 2;
    if strips.len() != 2 * per_array {
        return Err(MrsError::ConstructionFailed(format!(
            "{} block rows for {} slots",
            strips.len(),
            2 * per_array
        )));
    }
    let arrays = header
        .arrays
        .iter()
        .enumerate()
        .map(|(a, head)| {
            let mut parts = vec![head.clone()];
            parts.extend_from_slice(&strips[a * per_array..(a + 1) * per_array]);
            juxtapose_vertical(&parts)
        })
        .collect::<Result<Vec<_>>>()?;
    MrsInstance::new(params, crate::array::Domain::Group(header.group), arrays)?.into_verified()
}

/// A single `p x 2^alpha` magic rectangle over `psi` (order `p 2^alpha`, `p`
/// an odd prime, `alpha >= 2`), found by exhaustive search.
pub fn base_case_p_2alpha(p: u64, psi: &FiniteAbelianGroup, opts: &SearchOptions) -> Result<MrsInstance> {
    if p % 2 == 0 || !is_prime(p) || psi.order() % p != 0 {
        return Err(MrsError::InvalidParams(format!("{p} is not an odd prime dividing |{psi}|")));
    }
    let two = psi.order() / p;
    if !is_power_of_two(two) || two < 4 {
        return Err(MrsError::InvalidParams(format!("|{psi}| / {p} is not a power of two >= 4")));
    }
    if psi.involution_count() == 1 {
        return Err(MrsError::NoSuchObject(format!("{psi} has a single involution")));
    }
    let params = MrsParams::full(p as usize, two as usize, 1);
    match search(params, psi, opts)? {
        SearchOutcome::Found(inst) => Ok(inst),
        SearchOutcome::Exhausted { .. } => Err(MrsError::ConstructionFailed(format!(
            "exhaustive search found no {params} over {psi}"
        ))),
        SearchOutcome::BudgetExceeded { .. } => Err(MrsError::BudgetExceeded { budget: opts.budget }),
    }
}
