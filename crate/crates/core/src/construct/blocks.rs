//! Zero-sum `2 x 2^alpha` blocks covering `Omega x Psi`.

use crate::array::{Domain, Entry, PFArray};
use crate::error::{MrsError, Result};
use crate::group::{FiniteAbelianGroup, GroupElement};
use crate::num::is_power_of_two;

/// A negation-closed subset of a cyclic group with no element of order at most 2.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OmegaSet {
    group: FiniteAbelianGroup,
    elements: Vec<GroupElement>,
}

impl OmegaSet {
    pub fn new(group: FiniteAbelianGroup, mut elements: Vec<GroupElement>) -> Result<Self> {
        if group.rank() != 1 {
            return Err(MrsError::InvalidOmega(format!("{group} is not cyclic")));
        }
        elements.sort();
        elements.dedup();
        for x in &elements {
            if x.group() != &group {
                return Err(MrsError::GroupMismatch);
            }
            if x.order() <= 2 {
                return Err(MrsError::InvalidOmega(format!("{x} has order {}", x.order())));
            }
            if elements.binary_search(&x.neg()).is_err() {
                return Err(MrsError::InvalidOmega(format!("{x} is present but not its negative")));
            }
        }
        Ok(OmegaSet { group, elements })
    }

    /// All residues of `Z_order` except the listed ones.
    pub fn complement(order: u64, excluded: &[u64]) -> Result<Self> {
        let group = FiniteAbelianGroup::cyclic(order)?;
        let elements =
            group.elements().filter(|x| !excluded.contains(&x.coords()[0])).collect();
        OmegaSet::new(group, elements)
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Representatives `x` of the pairs `{x, -x}`, in ascending order.
    pub fn pair_representatives(&self) -> Vec<&GroupElement> {
        self.elements.iter().filter(|x| **x < x.neg()).collect()
    }
}

/// One zero-sum `2 x |Psi|` block per pair `{x, -x}` of `omega`, together
/// covering `omega x psi` exactly. Entries live in `Z_{2a} + psi`.
///
/// `psi` is split as `Z_{2b} + Phi` with `2b` its exponent (the last factor
/// attaining it). The first row lists `(x, j, g)` for `j < b` and the
/// negatives of `(x, j, g)` for `j >= b`, `g` running over `Phi`; the second
/// row is the negation of the first.
pub fn zero_sum_blocks(omega: &OmegaSet, psi: &FiniteAbelianGroup) -> Result<Vec<PFArray>> {
    let size = psi.order();
    if !is_power_of_two(size) || size < 4 {
        return Err(MrsError::UnsupportedParams(format!(
            "second summand must have order 2^alpha >= 4, got {psi}"
        )));
    }
    let exp = psi.exponent();
    let slot = psi.factors().iter().rposition(|&d| d == exp).expect("exponent is a factor");
    let rest: Vec<u64> =
        psi.factors().iter().enumerate().filter(|&(i, _)| i != slot).map(|(_, &d)| d).collect();
    let phi = FiniteAbelianGroup::new(&rest)?;
    let b = exp / 2;

    let mut factors = omega.group().factors().to_vec();
    factors.extend(psi.factors());
    let target = FiniteAbelianGroup::new(&factors)?;
    let domain = Domain::Group(target.clone());
    let width = size as usize;

    let mut blocks = Vec::with_capacity(omega.len() / 2);
    for x in omega.pair_representatives() {
        let mut block = PFArray::new(2, width, domain.clone());
        let mut col = 0;
        for j in 0..exp {
            for g in phi.elements() {
                let mut coords = vec![x.coords()[0] as i64];
                let mut tail = g.coords().iter();
                for i in 0..psi.rank() {
                    coords.push(if i == slot { j as i64 } else { *tail.next().unwrap() as i64 });
                }
                let mut e = target.element(&coords)?;
                if j >= b {
                    e = e.neg();
                }
                block.set(1, col, Some(Entry::Elem(e.neg())))?;
                block.set(0, col, Some(Entry::Elem(e)))?;
                col += 1;
            }
        }
        blocks.push(block);
    }
    Ok(blocks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn check(omega: &OmegaSet, psi: &FiniteAbelianGroup) {
        let blocks = zero_sum_blocks(omega, psi).unwrap();
        assert_eq!(blocks.len(), omega.len() / 2);
        let mut seen = BTreeSet::new();
        for b in &blocks {
            assert!(b.is_zero_sum().unwrap());
            for e in b.entries() {
                let g = e.as_elem().unwrap();
                assert!(seen.insert(g.coords().to_vec()), "repeated {g}");
            }
        }
        let expected: BTreeSet<Vec<u64>> = omega
            .elements()
            .iter()
            .flat_map(|x| psi.elements().map(move |y| [x.coords(), y.coords()].concat()))
            .collect();
        assert_eq!(seen, expected);
    }

    #[test]
    fn cover_and_zero_sums() {
        let z14 = FiniteAbelianGroup::cyclic(14).unwrap();
        let elems = [3i64, 4, 5, -3, -4, -5].iter().map(|&v| z14.element(&[v]).unwrap()).collect();
        let omega = OmegaSet::new(z14, elems).unwrap();
        check(&omega, &FiniteAbelianGroup::new(&[4]).unwrap());
        for f in [&[2, 2][..], &[2, 4], &[4, 2], &[8], &[2, 2, 2], &[4, 4], &[2, 8]] {
            check(&omega, &FiniteAbelianGroup::new(f).unwrap());
        }
    }

    #[test]
    fn bad_inputs() {
        let z14 = FiniteAbelianGroup::cyclic(14).unwrap();
        let only_three = vec![z14.element(&[3]).unwrap()];
        assert!(matches!(OmegaSet::new(z14.clone(), only_three), Err(MrsError::InvalidOmega(_))));
        assert!(matches!(
            OmegaSet::new(z14.clone(), vec![z14.element(&[7]).unwrap()]),
            Err(MrsError::InvalidOmega(_))
        ));
        let empty = OmegaSet::new(z14, vec![]).unwrap();
        assert!(zero_sum_blocks(&empty, &FiniteAbelianGroup::new(&[4]).unwrap()).unwrap().is_empty());
        let psi = FiniteAbelianGroup::new(&[2]).unwrap();
        assert!(matches!(zero_sum_blocks(&empty, &psi), Err(MrsError::UnsupportedParams(_))));
    }
}
