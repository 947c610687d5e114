//! Quotients by explicit subgroups, with a projection onto an invariant-factor
//! group and a deterministic section back.

use std::collections::HashSet;

use super::{smith_normal_form, FiniteAbelianGroup, GroupElement, GroupHom};
use crate::error::{MrsError, Result};

/// Result of [`quotient_with_iso`].
#[derive(Clone, Debug)]
pub struct Quotient {
    /// The quotient in invariant-factor form.
    pub group: FiniteAbelianGroup,
    /// Surjection from the ambient group whose kernel is exactly the subgroup.
    pub proj: GroupHom,
    /// One chosen preimage for every quotient element.
    pub section: Section,
}

/// A map choosing, for each element of the quotient, its first preimage in
/// enumeration order. Not a homomorphism in general.
#[derive(Clone, Debug)]
pub struct Section {
    quotient: FiniteAbelianGroup,
    source: FiniteAbelianGroup,
    table: Vec<usize>,
}

impl Section {
    pub fn apply(&self, q: &GroupElement) -> Result<GroupElement> {
        if q.group() != &self.quotient {
            return Err(MrsError::GroupMismatch);
        }
        Ok(self.source.element_at(self.table[q.index()]))
    }
}

fn check_subgroup(g: &FiniteAbelianGroup, h: &[GroupElement]) -> Result<HashSet<usize>> {
    if h.iter().any(|x| x.group() != g) {
        return Err(MrsError::GroupMismatch);
    }
    let set: HashSet<usize> = h.iter().map(GroupElement::index).collect();
    let closed = set.contains(&0)
        && h.iter().all(|a| set.contains(&a.neg().index()))
        && h.iter().all(|a| h.iter().all(|b| set.contains(&(a + b).index())));
    if closed {
        Ok(set)
    } else {
        Err(MrsError::NotASubgroup)
    }
}

/// Greedy generating set: keep an element whenever it is outside the span so far.
fn generators(h: &[GroupElement]) -> Vec<GroupElement> {
    let mut span: HashSet<usize> = HashSet::from([0]);
    let mut span_elems: Vec<GroupElement> = match h.first() {
        Some(x) => vec![x.group().zero()],
        None => return Vec::new(),
    };
    let mut gens = Vec::new();
    for x in h {
        if span.contains(&x.index()) {
            continue;
        }
        gens.push(x.clone());
        // close the span under adding multiples of x
        let mut frontier = span_elems.clone();
        while let Some(y) = frontier.pop() {
            let z = &y + x;
            if span.insert(z.index()) {
                span_elems.push(z.clone());
                frontier.push(z);
            }
        }
    }
    gens
}

/// Quotient of `g` by the subgroup listed in `h` (checked for closure).
///
/// The relation matrix has the rows `d_i e_i` together with generators of
/// `h`; its Smith normal form `U R V = D` gives the quotient factors and the
/// projection `x -> xV` reduced modulo the nontrivial diagonal entries.
pub fn quotient_with_iso(g: &FiniteAbelianGroup, h: &[GroupElement]) -> Result<Quotient> {
    check_subgroup(g, h)?;
    let s = g.rank();
    let mut rel: Vec<Vec<i128>> = (0..s)
        .map(|i| (0..s).map(|j| if i == j { g.factors()[i] as i128 } else { 0 }).collect())
        .collect();
    for x in generators(h) {
        rel.push(x.coords().iter().map(|&c| c as i128).collect());
    }
    let (diag, v) = if s == 0 { (Vec::new(), Vec::new()) } else { smith_normal_form(rel) };
    let kept: Vec<usize> = (0..diag.len()).filter(|&j| diag[j] > 1).collect();
    let qfactors: Vec<u64> = kept.iter().map(|&j| diag[j] as u64).collect();
    let quotient = FiniteAbelianGroup::new(&qfactors)?;
    let images: Vec<GroupElement> = (0..s)
        .map(|i| {
            let coords: Vec<i64> =
                kept.iter().map(|&j| v[i][j].rem_euclid(diag[j]) as i64).collect();
            quotient.element(&coords).expect("rank matches")
        })
        .collect();
    let proj = GroupHom::from_images(g, &quotient, &images)?;

    let mut table = vec![usize::MAX; quotient.order() as usize];
    let mut filled = 0;
    for x in g.elements() {
        let q = proj.apply(&x)?.index();
        if table[q] == usize::MAX {
            table[q] = x.index();
            filled += 1;
            if filled == table.len() {
                break;
            }
        }
    }
    debug_assert_eq!(filled, table.len(), "projection is onto");
    let section = Section { quotient: quotient.clone(), source: g.clone(), table };
    Ok(Quotient { group: quotient, proj, section })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::cyclic_subgroup;

    fn g(f: &[u64]) -> FiniteAbelianGroup {
        FiniteAbelianGroup::new(f).unwrap()
    }

    fn check(gr: &FiniteAbelianGroup, h: &[GroupElement]) -> Quotient {
        let q = quotient_with_iso(gr, h).unwrap();
        assert!(q.group.is_canonical());
        assert_eq!(q.group.order() * h.len() as u64, gr.order());
        let hset: HashSet<usize> = h.iter().map(GroupElement::index).collect();
        for x in gr.elements() {
            let y = q.proj.apply(&x).unwrap();
            assert_eq!(y.is_zero(), hset.contains(&x.index()));
        }
        for y in q.group.elements() {
            let x = q.section.apply(&y).unwrap();
            assert_eq!(q.proj.apply(&x).unwrap(), y);
        }
        q
    }

    #[test]
    fn quotient_of_z4_z8_by_order_four_element() {
        let gr = g(&[4, 8]);
        let h = cyclic_subgroup(&gr.element(&[1, 2]).unwrap());
        let q = check(&gr, &h);
        assert_eq!(q.group.factors(), &[8]);
    }

    #[test]
    fn trivial_and_whole_subgroups() {
        let gr = g(&[6, 2]);
        let q = check(&gr, &[gr.zero()]);
        assert!(q.group.is_isomorphic(&gr));
        assert!(q.proj.is_injective());
        let all: Vec<GroupElement> = gr.elements().collect();
        let q = check(&gr, &all);
        assert_eq!(q.group.order(), 1);
    }

    #[test]
    fn cyclic_quotient() {
        let gr = g(&[12]);
        let h = cyclic_subgroup(&gr.element(&[4]).unwrap());
        assert_eq!(check(&gr, &h).group.factors(), &[4]);
    }

    #[test]
    fn non_subgroup_rejected() {
        let gr = g(&[6]);
        let h = vec![gr.zero(), gr.element(&[1]).unwrap()];
        assert_eq!(quotient_with_iso(&gr, &h).unwrap_err(), MrsError::NotASubgroup);
    }

    #[test]
    fn noncyclic_subgroup() {
        let gr = g(&[4, 4, 2]);
        let a = gr.element(&[2, 0, 0]).unwrap();
        let b = gr.element(&[0, 2, 1]).unwrap();
        let h = vec![gr.zero(), a.clone(), b.clone(), &a + &b];
        assert_eq!(check(&gr, &h).group.order(), 8);
    }
}
