//! Full sets with one odd side: `(2l+1) x 8` sets with `4h+2` arrays, and
//! `(2l+1) x 2^alpha` sets with an odd number of arrays.

use super::{base_case_p_2alpha, base_case_r8_2, extend_direct_sum, lift_cyclic, BaseCaseKind};
use crate::array::{juxtapose_vertical, MrsInstance, MrsParams};
use crate::error::{MrsError, Result};
use crate::group::{isomorphism, FiniteAbelianGroup};
use crate::num::{is_power_of_two, smallest_odd_prime};
use crate::search::SearchOptions;

fn to_group(inst: &MrsInstance, target: &FiniteAbelianGroup) -> Result<MrsInstance> {
    let source = inst.domain().group().ok_or(MrsError::GroupMismatch)?;
    if source == target {
        return Ok(inst.clone());
    }
    let f = isomorphism(source, target).ok_or(MrsError::GroupMismatch)?;
    inst.map_group(&f)
}

/// Odd-order primary components of `g` after removing one copy of `skip`.
fn odd_rest(g: &FiniteAbelianGroup, skip: u64) -> Result<FiniteAbelianGroup> {
    let mut rest: Vec<u64> =
        g.primary_factors().into_iter().filter(|&(p, _)| p != 2).map(|(_, pe)| pe).collect();
    if let Some(i) = rest.iter().position(|&x| x == skip) {
        rest.remove(i);
    }
    FiniteAbelianGroup::new(&rest)
}

/// Stacks runs of `per` consecutive arrays vertically.
fn stack(inst: &MrsInstance, per: usize) -> Result<MrsInstance> {
    if per == 1 {
        return Ok(inst.clone());
    }
    let arrays = inst.arrays().chunks(per).map(juxtapose_vertical).collect::<Result<Vec<_>>>()?;
    let p = inst.params();
    let params = MrsParams::full(p.m * per, p.n, arrays.len());
    MrsInstance::new(params, inst.domain().clone(), arrays)?.into_verified()
}

/// An `MRS_G(2l+1, 8; 4h+2)` for `|G| = 16 (2l+1)(2h+1)`.
///
/// Fails with `NoSuchObject` when `G` has a single involution. Otherwise takes
/// the smallest prime `q | 2l+1`, builds the `q x 8` base case on `Z_q` plus
/// the 2-part, lifts `Z_q` to the largest `q`-primary factor of `G`, adds the
/// remaining odd part as a direct summand and stacks `(2l+1)/q` arrays at a time.
pub fn theorem_main(l: u64, h: u64, gamma: &FiniteAbelianGroup) -> Result<MrsInstance> {
    let rows = 2 * l + 1;
    let sets = 4 * h + 2;
    if l == 0 || gamma.order() != 16 * rows * (2 * h + 1) {
        return Err(MrsError::InvalidParams(format!(
            "need l >= 1 and |G| = 16(2l+1)(2h+1), got l={l}, h={h}, |G|={}",
            gamma.order()
        )));
    }
    if gamma.involution_count() == 1 {
        return Err(MrsError::NoSuchObject(format!(
            "{gamma} has a single involution, so no MRS({rows},8;{sets}) exists"
        )));
    }
    let kind = BaseCaseKind::of_group(gamma).ok_or_else(|| {
        MrsError::InvalidParams(format!("2-part of {gamma} is not one of the four base shapes"))
    })?;
    let q = smallest_odd_prime(rows).expect("2l+1 >= 3 has an odd prime factor");
    let q_power = *gamma.sylow_factors(q).iter().max().expect("q divides |G|");

    let base = base_case_r8_2(q, kind)?;
    let mut seed_factors = vec![q];
    seed_factors.extend(kind.two_part());
    let seed = to_group(&base, &FiniteAbelianGroup::new(&seed_factors)?)?;
    let lifted = lift_cyclic(&seed, 0, q_power)?;
    let extended = extend_direct_sum(&lifted, &odd_rest(gamma, q_power)?)?;
    let stacked = stack(&extended, (rows / q) as usize)?;
    debug_assert_eq!(stacked.params(), MrsParams::full(rows as usize, 8, sets as usize));
    to_group(&stacked, gamma)?.into_verified()
}

/// An `MRS_G(2l+1, 2^alpha; c)` for odd `c`, `alpha >= 2` and `G` of order
/// `(2l+1) 2^alpha c` with more than one involution.
///
/// Takes the smallest prime `p | 2l+1`, searches a `p x 2^alpha` rectangle on
/// `Z_p` plus the 2-part, lifts `Z_p` to the largest `p`-primary factor, adds
/// the remaining odd part and stacks `(2l+1)/p` arrays at a time.
pub fn odd_c_construction(
    l: u64,
    alpha: u32,
    c: u64,
    gamma: &FiniteAbelianGroup,
    opts: &SearchOptions,
) -> Result<MrsInstance> {
    if c % 2 == 0 {
        return Err(MrsError::UnsupportedParams(format!("number of arrays must be odd, got {c}")));
    }
    let rows = 2 * l + 1;
    let cols = 1u64 << alpha;
    if l == 0 || alpha < 2 || gamma.order() != rows * cols * c {
        return Err(MrsError::InvalidParams(format!(
            "need l >= 1, alpha >= 2 and |G| = (2l+1) 2^alpha c, got l={l}, alpha={alpha}, c={c}, |G|={}",
            gamma.order()
        )));
    }
    if !gamma.in_upsilon() {
        return Err(MrsError::NoSuchObject(format!("{gamma} has a single involution")));
    }
    let p = smallest_odd_prime(rows).expect("2l+1 >= 3 has an odd prime factor");
    let p_power = *gamma.sylow_factors(p).iter().max().expect("p divides |G|");
    let two_part = gamma.sylow_factors(2);
    debug_assert!(is_power_of_two(two_part.iter().product()));

    let mut seed_factors = vec![p];
    seed_factors.extend(&two_part);
    let seed_group = FiniteAbelianGroup::new(&seed_factors)?;
    let seed = base_case_p_2alpha(p, &seed_group, opts)?;
    let lifted = lift_cyclic(&seed, 0, p_power)?;
    let extended = extend_direct_sum(&lifted, &odd_rest(gamma, p_power)?)?;
    let stacked = stack(&extended, (rows / p) as usize)?;
    to_group(&stacked, gamma)?.into_verified()
}
