//! Integer magic rectangle sets with two rows, and their reduction to cyclic groups.

use crate::array::{juxtapose_horizontal, Domain, Entry, MrsInstance, MrsParams, PFArray};
use crate::error::{MrsError, Result};
use crate::group::FiniteAbelianGroup;

fn int_block(rows: [&[i64]; 2]) -> PFArray {
    PFArray::from_rows(
        Domain::Integers,
        rows.iter().map(|r| r.iter().map(|&v| Some(Entry::Int(v))).collect()).collect(),
    )
    .expect("rectangular block")
}

/// 2x4 block with row sums `4bc+2` and column sums `2bc+1`.
pub fn q_block(b: i64, c: i64, i: i64) -> PFArray {
    let t = 2 * b * c;
    int_block([
        &[4 * i + 1, t - 4 * i - 1, t - 4 * i - 2, 4 * i + 4],
        &[t - 4 * i, 4 * i + 2, 4 * i + 3, t - 4 * i - 3],
    ])
}

/// 2x4 block with row sums `4bc` and `4bc+4`, column sums `2bc+1`.
pub fn s_block(b: i64, c: i64, j: i64) -> PFArray {
    let (lo, hi) = ((b - 6) * c, (b + 6) * c);
    int_block([
        &[lo + 4 * j + 1, hi - 4 * j - 1, lo + 4 * j + 3, hi - 4 * j - 3],
        &[hi - 4 * j, lo + 4 * j + 2, hi - 4 * j - 2, lo + 4 * j + 4],
    ])
}

/// 2x2 block number `u` of the even family; row sums `2bc+3` and `2bc-1`.
pub fn t_block(b: i64, c: i64, u: i64) -> PFArray {
    let (lo, hi) = ((b - 2) * c, (b + 2) * c);
    let h = u / 2;
    if u % 2 == 0 {
        int_block([&[hi - 4 * h, lo + 4 * h + 3], &[lo + 4 * h + 1, hi - 4 * h - 2]])
    } else {
        int_block([&[hi - 4 * h - 1, lo + 4 * h + 4], &[lo + 4 * h + 2, hi - 4 * h - 3]])
    }
}

/// The middle 2x2 block used once when `c` is odd.
pub fn t_prime_block(b: i64, c: i64) -> PFArray {
    let x = b * c;
    int_block([&[x + 2, x + 1], &[x - 1, x]])
}

/// An integer MRS(2, b; c) of `2 x b` arrays on `1..=2bc`, with row sums
/// `b(2bc+1)/2` and column sums `2bc+1`.
pub fn build_mrs_2_b_c(b: usize, c: usize) -> Result<MrsInstance> {
    if b < 4 || b % 2 == 1 || c == 0 {
        return Err(MrsError::UnsupportedParams(format!(
            "two-row sets need even b >= 4 and c >= 1, got b={b}, c={c}"
        )));
    }
    let (bi, ci) = (b as i64, c as i64);
    let mut arrays = Vec::with_capacity(c);
    if b % 4 == 0 {
        let per = bi / 4;
        for t in 0..ci {
            let blocks: Vec<PFArray> = (0..per).map(|u| q_block(bi, ci, t * per + u)).collect();
            arrays.push(juxtapose_horizontal(&blocks)?);
        }
    } else {
        let per = (bi - 6) / 4;
        let mut tees: Vec<PFArray> = Vec::with_capacity(c);
        if c % 2 == 1 {
            tees.push(t_prime_block(bi, ci));
        }
        let mut u = 0;
        while tees.len() < c {
            tees.push(t_block(bi, ci, u));
            u += 1;
        }
        for (t, tee) in (0..ci).zip(tees) {
            let mut blocks: Vec<PFArray> = (0..per).map(|u| q_block(bi, ci, t * per + u)).collect();
            blocks.push(s_block(bi, ci, t));
            blocks.push(tee);
            arrays.push(juxtapose_horizontal(&blocks)?);
        }
    }
    MrsInstance::new(MrsParams::full(2, b, c), Domain::Integers, arrays)?.into_verified()
}

/// Reduces a verified integer instance modulo its size into the cyclic group
/// of that order.
pub fn to_cyclic_group(inst: &MrsInstance) -> Result<MrsInstance> {
    if inst.domain() != &Domain::Integers {
        return Err(MrsError::InvalidInput("expected an integer instance".into()));
    }
    let report = inst.verify();
    if !report.passed() {
        return Err(MrsError::InvalidInput(format!(
            "input is not a magic rectangle set: {}",
            report.problems.join("; ")
        )));
    }
    let order = inst.params().order() as u64;
    let g = FiniteAbelianGroup::cyclic(order)?;
    let domain = Domain::Group(g.clone());
    let reduce = |e: &Entry| -> Result<Entry> {
        let v = e.as_int().ok_or_else(|| MrsError::ModeError("expected integers".into()))?;
        Ok(Entry::Elem(g.element(&[v])?))
    };
    let arrays: Result<Vec<PFArray>> =
        inst.arrays().iter().map(|a| a.map_entries(domain.clone(), reduce)).collect();
    let omega = report.omega.as_ref().map(reduce).transpose()?;
    let delta = report.delta.as_ref().map(reduce).transpose()?;
    MrsInstance::new(inst.params(), domain, arrays?)?
        .with_constants(omega, delta)?
        .into_verified()
}
