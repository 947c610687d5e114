//! Growing the group of a full magic rectangle set: adding a direct summand,
//! and enlarging one odd cyclic factor.

use crate::array::{Domain, Entry, MrsInstance, MrsParams, PFArray};
use crate::error::{MrsError, Result};
use crate::group::FiniteAbelianGroup;
use crate::num::factorize;

fn full_group_instance(inst: &MrsInstance) -> Result<&FiniteAbelianGroup> {
    let g = inst
        .domain()
        .group()
        .ok_or_else(|| MrsError::ModeError("expected a group instance".into()))?;
    if !inst.params().is_full() || inst.arrays().iter().any(|a| !a.is_full()) {
        return Err(MrsError::Unsupported("needs fully filled arrays".into()));
    }
    Ok(g)
}

/// Weights `+-1` (and one `-2` for odd lengths) summing to zero.
fn unit_weights(len: usize) -> Vec<i64> {
    let mut w: Vec<i64> = if len % 2 == 0 { vec![] } else { vec![1, 1, -2] };
    while w.len() < len {
        w.push(if w.len() % 2 == 0 { 1 } else { -1 });
    }
    w
}

/// Extends a full MRS over `G` to one over `G + phi` with `|phi|` times as
/// many arrays.
///
/// Copy `u` (for `u` in `phi`) of an array puts `(g, x_i y_j u)` in cell
/// `(i, j)` holding `g`, where `x` and `y` are zero-sum weight vectors of
/// units. Rows and columns then gain `0` in the new coordinate, and each cell
/// runs over all of `phi` across the copies. A weight of `-2` is needed for an
/// odd side, which requires `phi` to have odd exponent.
pub fn extend_direct_sum(inst: &MrsInstance, phi: &FiniteAbelianGroup) -> Result<MrsInstance> {
    if !phi.in_upsilon() {
        return Err(MrsError::PhiNotInUpsilon);
    }
    let g = full_group_instance(inst)?;
    if phi.order() == 1 {
        return Ok(inst.clone());
    }
    let p = inst.params();
    if (p.m % 2 == 1 || p.n % 2 == 1) && phi.exponent() % 2 == 0 {
        return Err(MrsError::Unsupported(format!(
            "an odd side needs a summand of odd exponent, got {phi}"
        )));
    }
    let (x, y) = (unit_weights(p.m), unit_weights(p.n));
    let target = g.direct_sum(phi);
    let domain = Domain::Group(target.clone());
    let mut arrays = Vec::with_capacity(p.c * phi.order() as usize);
    for u in phi.elements() {
        for a in inst.arrays() {
            let mut out = PFArray::new(p.m, p.n, domain.clone());
            for i in 0..p.m {
                for j in 0..p.n {
                    let e = a.get(i, j).and_then(Entry::as_elem).expect("full group array");
                    let shift = u.scalar_mul(x[i] * y[j]);
                    let coords: Vec<i64> =
                        e.coords().iter().chain(shift.coords()).map(|&v| v as i64).collect();
                    out.set(i, j, Some(Entry::Elem(target.element(&coords)?)))?;
                }
            }
            arrays.push(out);
        }
    }
    let params = MrsParams { c: arrays.len(), ..p };
    MrsInstance::new(params, domain, arrays)?.into_verified()
}

fn balanced(x: i64, p: i64) -> i64 {
    let r = x.rem_euclid(p);
    if r > p / 2 {
        r - p
    } else {
        r
    }
}

/// Replaces the cyclic factor at `axis` (order `M`) by `Z_target`, where
/// `h = target / M` is odd, producing `h` times as many arrays.
///
/// The old coordinate `v` becomes `h v + w + (h + 1) / 2` with
/// `|w| <= (h - 1) / 2`, so each old value spreads over a block of `h`
/// consecutive residues. Across the `h` copies every cell takes each `w` once;
/// within a row or column the `w` values cancel. For every prime `q | h`, each
/// side must be even or divisible by `q`. Row and column sums gain
/// `n (h + 1) / 2` and `m (h + 1) / 2` in the new coordinate.
pub fn lift_cyclic(inst: &MrsInstance, axis: usize, target: u64) -> Result<MrsInstance> {
    let g = full_group_instance(inst)?;
    let modulus = *g
        .factors()
        .get(axis)
        .ok_or_else(|| MrsError::IndexError(format!("factor {axis} of {g}")))?;
    if target % modulus != 0 || (target / modulus) % 2 == 0 {
        return Err(MrsError::InvalidDivisor(format!(
            "{target} is not an odd multiple of {modulus}"
        )));
    }
    let h = target / modulus;
    if h == 1 {
        return Ok(inst.clone());
    }
    let p = inst.params();
    let primes: Vec<i64> =
        factorize(h).into_iter().flat_map(|(q, e)| std::iter::repeat_n(q as i64, e as usize)).collect();
    for &q in &primes {
        let fits = |side: usize| side % 2 == 0 || side as i64 % q == 0;
        if !fits(p.m) || !fits(p.n) {
            return Err(MrsError::Unsupported(format!(
                "lifting by {h} needs each side even or divisible by {q}, sides are {}x{}",
                p.m, p.n
            )));
        }
    }
    let mut factors = g.factors().to_vec();
    factors[axis] = target;
    let out_group = FiniteAbelianGroup::new(&factors)?;
    let domain = Domain::Group(out_group.clone());
    let (row_odd, col_odd) = (p.n % 2 == 1, p.m % 2 == 1);
    let hi = h as i64;
    let centre = (hi + 1) / 2;

    let mut arrays = Vec::with_capacity(p.c * h as usize);
    for t in 0..hi {
        // mixed-radix digits of the copy index
        let mut digits = Vec::with_capacity(primes.len());
        let mut rest = t;
        for &q in &primes {
            digits.push(rest % q);
            rest /= q;
        }
        for a in inst.arrays() {
            let mut out = PFArray::new(p.m, p.n, domain.clone());
            for i in 0..p.m {
                let sign_i = if col_odd { 1 } else if i % 2 == 0 { 1 } else { -1 };
                for j in 0..p.n {
                    let sign_j = if row_odd { 1 } else if j % 2 == 0 { 1 } else { -1 };
                    let mut w = 0i64;
                    let mut place = 1i64;
                    for (&q, &d) in primes.iter().zip(&digits) {
                        let arg = d + if col_odd { i as i64 } else { 0 } + if row_odd { j as i64 } else { 0 };
                        w += place * balanced(sign_i * sign_j * arg, q);
                        place *= q;
                    }
                    let e = a.get(i, j).and_then(Entry::as_elem).expect("full group array");
                    let mut coords: Vec<i64> = e.coords().iter().map(|&v| v as i64).collect();
                    coords[axis] = hi * coords[axis] + w + centre;
                    out.set(i, j, Some(Entry::Elem(out_group.element(&coords)?)))?;
                }
            }
            arrays.push(out);
        }
    }
    let params = MrsParams { c: arrays.len(), ..p };
    MrsInstance::new(params, domain, arrays)?.into_verified()
}
