//! Diagonal magic rectangle sets and the partially filled constructions built
//! from them: two-diagonal sets from a cyclic subgroup, doubling to `2b`
//! diagonals, `4b` diagonals from `2 x 2` seeds, gcd composition, inflation of
//! `2 x 2` squares for even parameters, and the dispatch on `s, k (mod 4)`.

use std::fmt;

use serde::Serialize;

use crate::array::{Domain, Entry, MrsInstance, MrsParams, PFArray};
use crate::error::{MrsError, Result};
use crate::group::{quotient_with_iso, FiniteAbelianGroup, GroupElement};
use crate::num::gcd;

/// A diagonal `MRS_G(n; 2; c)` for `|G| = 2nc`, using the first element of
/// order `n` in enumeration order. `NoSuchObject` if there is none.
pub fn diagonal_n2c(n: usize, c: usize, gamma: &FiniteAbelianGroup) -> Result<MrsInstance> {
    check_order(n, c, gamma)?;
    let alpha = gamma.element_of_order(n as u64).ok_or_else(|| {
        MrsError::NoSuchObject(format!("{gamma} has no element of order {n}"))
    })?;
    diagonal_n2c_with(n, c, gamma, &alpha)
}

fn check_order(n: usize, c: usize, gamma: &FiniteAbelianGroup) -> Result<()> {
    if n < 2 || c == 0 || gamma.order() != (2 * n * c) as u64 {
        return Err(MrsError::InvalidParams(format!(
            "need n >= 2, c >= 1 and |G| = 2nc, got n={n}, c={c}, |G|={}",
            gamma.order()
        )));
    }
    Ok(())
}

/// As [`diagonal_n2c`] with a chosen generator `alpha` of order `n`.
///
/// With `H = <alpha>` and `G/H` written as `Z_2a + Phi` (`Z_2a` the last
/// invariant factor), the representatives `z` are preimages of `(g, i)` for
/// `i < a`, `g` in `Phi`, and `omega` is a preimage of the all `-1` element.
/// Array `z` holds `j alpha + z` at `(j, j)` and `omega - (j alpha + z)` at
/// `(j, j + 1)`. Rows sum to `omega`, columns to `omega + alpha`.
pub fn diagonal_n2c_with(
    n: usize,
    c: usize,
    gamma: &FiniteAbelianGroup,
    alpha: &GroupElement,
) -> Result<MrsInstance> {
    check_order(n, c, gamma)?;
    if alpha.group() != gamma {
        return Err(MrsError::GroupMismatch);
    }
    if alpha.order() != n as u64 {
        return Err(MrsError::InvalidParams(format!("{alpha} does not have order {n}")));
    }
    let quotient = quotient_with_iso(gamma, &gamma.cyclic_subgroup(alpha))?;
    let psi = &quotient.group;
    let rank = psi.rank();
    let top = *psi.factors().last().expect("quotient of order 2c is nontrivial");
    debug_assert_eq!(top % 2, 0);
    let phi = FiniteAbelianGroup::new(&psi.factors()[..rank - 1])?;
    let omega = quotient.section.apply(&psi.element(&vec![-1; rank])?)?;

    let mut reps = Vec::with_capacity(c);
    for i in 0..(top / 2) as i64 {
        for g in phi.elements() {
            let mut coords: Vec<i64> = g.coords().iter().map(|&v| v as i64).collect();
            coords.push(i);
            reps.push(quotient.section.apply(&psi.element(&coords)?)?);
        }
    }
    debug_assert_eq!(reps.len(), c);

    let domain = Domain::Group(gamma.clone());
    let arrays = reps
        .iter()
        .map(|z| {
            let mut a = PFArray::new(n, n, domain.clone());
            for j in 0..n {
                let x = &alpha.scalar_mul(j as i64) + z;
                a.set(j, (j + 1) % n, Some(Entry::Elem(&omega - &x)))?;
                a.set(j, j, Some(Entry::Elem(x)))?;
            }
            Ok(a)
        })
        .collect::<Result<Vec<_>>>()?;
    let delta = &omega + alpha;
    MrsInstance::new(MrsParams::new(n, n, 2, 2, c), domain, arrays)?
        .with_constants(Some(Entry::Elem(omega)), Some(Entry::Elem(delta)))?
        .into_verified()
}

/// A diagonal `MRS_G(n; 2b; c)` for `|G| = 2nbc` and `2b <= n`: array `l`
/// carries the two diagonals of arrays `lb, ..., lb + b - 1` of a diagonal
/// `MRS_G(n; 2; bc)` on its diagonals `2j, 2j + 1`.
pub fn diagonal_n_2b_c(n: usize, b: usize, c: usize, gamma: &FiniteAbelianGroup) -> Result<MrsInstance> {
    if b == 0 || 2 * b > n {
        return Err(MrsError::InvalidParams(format!("need 2 <= 2b <= n, got b={b}, n={n}")));
    }
    let seed = diagonal_n2c(n, b * c, gamma)?;
    let domain = seed.domain().clone();
    let arrays = seed
        .arrays()
        .chunks(b)
        .map(|group| {
            let mut a = PFArray::new(n, n, domain.clone());
            for (j, r) in group.iter().enumerate() {
                for i in 0..n {
                    a.set(i, (i + 2 * j) % n, r.get(i, i).cloned())?;
                    a.set(i, (i + 2 * j + 1) % n, r.get(i, (i + 1) % n).cloned())?;
                }
            }
            Ok(a)
        })
        .collect::<Result<Vec<_>>>()?;
    MrsInstance::new(MrsParams::new(n, n, 2 * b, 2 * b, c), domain, arrays)?.into_verified()
}

/// A diagonal `MRS_G(n; 4b; c)` for every `G` of order `4nbc`, `4b <= n`.
///
/// Takes a `2 x 2` set `[[x, y], [z, w]]` with `nbc` arrays and, in round `j`,
/// places square `i` at `x: (i, i+4j)`, `y: (i, i+4j+1)`, `z: (i+2, i+4j)`,
/// `w: (i+2, i+4j+1)`, indices modulo `n`. Each round fills diagonals
/// `4j-2 .. 4j+1` and adds `2 omega` to rows and `2 delta` to columns.
pub fn diagonal_n_4b_c(n: usize, b: usize, c: usize, gamma: &FiniteAbelianGroup) -> Result<MrsInstance> {
    if b == 0 || c == 0 || 4 * b > n || gamma.order() != (4 * n * b * c) as u64 {
        return Err(MrsError::InvalidParams(format!(
            "need 4 <= 4b <= n, c >= 1 and |G| = 4nbc, got n={n}, b={b}, c={c}, |G|={}",
            gamma.order()
        )));
    }
    let seed = diagonal_n2c(2, n * b * c, gamma)?;
    let domain = seed.domain().clone();
    let squares = seed.arrays();
    let mut arrays = Vec::with_capacity(c);
    for a in 0..c {
        let mut out = PFArray::new(n, n, domain.clone());
        for j in 0..b {
            for i in 0..n {
                let sq = &squares[(a * b + j) * n + i];
                let col = i + 4 * j;
                out.set(i, col % n, sq.get(0, 0).cloned())?;
                out.set(i, (col + 1) % n, sq.get(0, 1).cloned())?;
                out.set((i + 2) % n, col % n, sq.get(1, 0).cloned())?;
                out.set((i + 2) % n, (col + 1) % n, sq.get(1, 1).cloned())?;
            }
        }
        arrays.push(out);
    }
    MrsInstance::new(MrsParams::new(n, n, 4 * b, 4 * b, c), domain, arrays)?.into_verified()
}

fn check_target(p: MrsParams) -> Result<()> {
    if !p.is_admissible() {
        return Err(MrsError::InvalidParams(format!("{p} is not admissible")));
    }
    Ok(())
}

/// Builds an `MRS_G(m, n; s, k; c)` from a full `MRS_G(k1, s; ec)`, where
/// `d = gcd(s, k)`, `s = d s1`, `k = d k1` and `n = e s1`.
///
/// Array `f` of each run of `e` input arrays is placed with its top-left
/// corner at `(k1 f, s1 f)`, columns wrapping modulo `n`. Rows keep the input
/// row constant; columns meet `d` input columns, so the column constant is
/// multiplied by `d`.
pub fn gcd_compose(inst: &MrsInstance, target: MrsParams) -> Result<MrsInstance> {
    check_target(target)?;
    let (d, s1, k1, e) = target.gcd_split();
    let expected = MrsParams::full(k1, target.s, e * target.c);
    if inst.params() != expected || !inst.arrays().iter().all(PFArray::is_full) {
        return Err(MrsError::InvalidParams(format!(
            "{target} needs a full {expected}, got {}",
            inst.params()
        )));
    }
    debug_assert_eq!(d * s1, target.s);
    let domain = inst.domain().clone();
    let arrays = inst
        .arrays()
        .chunks(e)
        .map(|run| {
            let mut out = PFArray::new(target.m, target.n, domain.clone());
            for (f, r) in run.iter().enumerate() {
                for i in 0..k1 {
                    for j in 0..target.s {
                        out.set(k1 * f + i, (s1 * f + j) % target.n, r.get(i, j).cloned())?;
                    }
                }
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;
    MrsInstance::new(target, domain, arrays)?.into_verified()
}

/// An `MRS_G(m, n; s, k; c)` for `m, n, s, k` all even and any `G` of order
/// `nkc`.
///
/// Selects `gcd(s/2, k/2)` consecutive diagonals of an `m/2 x n/2` grid,
/// giving `s/2` cells per row and `k/2` per column, and inflates each chosen
/// cell to a `2 x 2` square taken from an `MRS_G(2, 2; nkc/4)`.
pub fn even_params(p: MrsParams, gamma: &FiniteAbelianGroup) -> Result<MrsInstance> {
    if [p.m, p.n, p.s, p.k].iter().any(|v| v % 2 == 1) {
        return Err(MrsError::UnsupportedParams(format!("{p} has an odd parameter")));
    }
    check_target(p)?;
    if gamma.order() != p.order() as u64 {
        return Err(MrsError::InvalidParams(format!("|{gamma}| != nkc for {p}")));
    }
    let (rows, cols) = (p.m / 2, p.n / 2);
    let e = gcd(rows, cols);
    let count = gcd(p.s / 2, p.k / 2);
    let mut cells = Vec::with_capacity(rows * p.s / 2);
    for i in 0..rows {
        for j in 0..cols {
            if (j + e - i % e) % e < count {
                cells.push((i, j));
            }
        }
    }
    let per = cells.len();
    debug_assert_eq!(per, p.n * p.k / 4);
    let seed = diagonal_n2c(2, per * p.c, gamma)?;
    let domain = seed.domain().clone();
    let arrays = seed
        .arrays()
        .chunks(per)
        .map(|squares| {
            let mut out = PFArray::new(p.m, p.n, domain.clone());
            for (&(i, j), sq) in cells.iter().zip(squares) {
                for (di, dj) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
                    out.set(2 * i + di, 2 * j + dj, sq.get(di, dj).cloned())?;
                }
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;
    MrsInstance::new(p, domain, arrays)?.into_verified()
}

/// Re-lays a diagonal `MRS_G(N; d; c)` with `N = nk/d`, `d = gcd(s, k)`, as an
/// `MRS_G(m, n; s, k; c)`: square cell `(i, j)` goes to `(i mod m, j mod n)`.
///
/// Since `N = lcm(m, n)` and `d <= gcd(m, n)` no two filled cells collide;
/// each rectangle row collects `N/m` square rows and each column `N/n` square
/// columns. The result is verified before it is returned.
pub fn diagonal_to_rectangle(inst: &MrsInstance, target: MrsParams) -> Result<MrsInstance> {
    check_target(target)?;
    let (d, s1, k1, e) = target.gcd_split();
    let side = e * s1 * k1;
    let expected = MrsParams::new(side, side, d, d, target.c);
    if inst.params() != expected {
        return Err(MrsError::InvalidParams(format!(
            "{target} needs a diagonal {expected}, got {}",
            inst.params()
        )));
    }
    if !crate::array::is_diagonal_instance(inst) {
        return Err(MrsError::InvalidParams("input is not a diagonal set".into()));
    }
    let domain = inst.domain().clone();
    let arrays = inst
        .arrays()
        .iter()
        .map(|sq| {
            let mut out = PFArray::new(target.m, target.n, domain.clone());
            for (i, j) in sq.filled_cells() {
                let (r, c) = (i % target.m, j % target.n);
                if out.get(r, c).is_some() {
                    return Err(MrsError::ConstructionFailed(format!("cell ({r},{c}) hit twice")));
                }
                out.set(r, c, sq.get(i, j).cloned())?;
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;
    MrsInstance::new(target, domain, arrays)?.into_verified()
}

/// Congruence classes of `(s, k)` handled by [`mod4_cases`].
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum Mod4Case {
    /// `s = k = 0 (mod 4)`: `4b` diagonals, then re-laid.
    BothZero,
    /// `s = 2`, `k = 0 (mod 4)`: even parameters, then gcd composition.
    RowsTwo,
    /// `s = 0`, `k = 2 (mod 4)`: the transpose of [`Mod4Case::RowsTwo`].
    ColsTwo,
    /// `s = k = 2 (mod 4)` with `m, n` even: even parameters directly.
    BothTwoEvenSides,
}

impl Mod4Case {
    pub fn of(p: MrsParams) -> Option<Self> {
        match (p.s % 4, p.k % 4) {
            (0, 0) => Some(Mod4Case::BothZero),
            (2, 0) => Some(Mod4Case::RowsTwo),
            (0, 2) => Some(Mod4Case::ColsTwo),
            (2, 2) if p.m % 2 == 0 && p.n % 2 == 0 => Some(Mod4Case::BothTwoEvenSides),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Mod4Case::BothZero => "s=k=0 mod 4",
            Mod4Case::RowsTwo => "s=2, k=0 mod 4",
            Mod4Case::ColsTwo => "s=0, k=2 mod 4",
            Mod4Case::BothTwoEvenSides => "s=k=2 mod 4, m and n even",
        }
    }
}

impl fmt::Display for Mod4Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// An `MRS_G(m, n; s, k; c)` with `s, k` even, for any `G` of order `nkc`,
/// outside the case `s = k = 2 (mod 4)` with `m, n` odd.
pub fn mod4_cases(p: MrsParams, gamma: &FiniteAbelianGroup) -> Result<(Mod4Case, MrsInstance)> {
    check_target(p)?;
    if gamma.order() != p.order() as u64 {
        return Err(MrsError::InvalidParams(format!("|{gamma}| != nkc for {p}")));
    }
    let case = Mod4Case::of(p).ok_or_else(|| {
        MrsError::UnsupportedParams(format!("{p} is not covered by the mod 4 cases"))
    })?;
    let inst = match case {
        Mod4Case::BothZero => {
            let (d, s1, k1, e) = p.gcd_split();
            let diag = diagonal_n_4b_c(e * s1 * k1, d / 4, p.c, gamma)?;
            diagonal_to_rectangle(&diag, p)?
        }
        Mod4Case::RowsTwo => rows_two(p, gamma)?,
        Mod4Case::ColsTwo => rows_two(p.transpose(), gamma)?.transpose().into_verified()?,
        Mod4Case::BothTwoEvenSides => even_params(p, gamma)?,
    };
    Ok((case, inst))
}

fn rows_two(p: MrsParams, gamma: &FiniteAbelianGroup) -> Result<MrsInstance> {
    let (_, _, k1, e) = p.gcd_split();
    let seed = even_params(MrsParams::full(k1, p.s, e * p.c), gamma)?;
    gcd_compose(&seed, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::array::is_diagonal_instance;

    fn elem(e: &Entry) -> &GroupElement {
        e.as_elem().expect("group entry")
    }

    fn g(spec: &str) -> FiniteAbelianGroup {
        spec.parse().unwrap()
    }

    fn e(gr: &FiniteAbelianGroup, c: &[i64]) -> Entry {
        Entry::Elem(gr.element(c).unwrap())
    }

    #[test]
    fn two_diagonals() {
        let z6 = g("Z6");
        let inst = diagonal_n2c(3, 1, &z6).unwrap();
        assert!(is_diagonal_instance(&inst));
        assert!(matches!(diagonal_n2c(4, 1, &g("Z2+Z2+Z2")), Err(MrsError::NoSuchObject(_))));
        assert!(matches!(diagonal_n2c(4, 2, &z6), Err(MrsError::InvalidParams(_))));
    }

    #[test]
    fn two_diagonals_with_chosen_generator() {
        let gr = g("Z4+Z8");
        let alpha = gr.element(&[1, 2]).unwrap();
        let inst = diagonal_n2c_with(4, 4, &gr, &alpha).unwrap();
        assert!(is_diagonal_instance(&inst));
        let omega = inst.omega().unwrap().clone();
        assert_eq!(inst.delta().unwrap(), &Entry::Elem(elem(&omega) + &alpha));
        // each array is a coset of <alpha> and its reflection through omega
        let h = gr.cyclic_subgroup(&alpha);
        for a in inst.arrays() {
            let z = elem(a.get(0, 0).unwrap());
            let diag: Vec<_> = (0..4).map(|j| elem(a.get(j, j).unwrap()) - z).collect();
            assert!(diag.iter().all(|x| h.contains(x)));
        }
        let wrong = gr.element(&[0, 1]).unwrap();
        assert!(diagonal_n2c_with(4, 4, &gr, &wrong).is_err());
    }

    #[test]
    fn doubled_diagonals() {
        let gr = g("Z6+Z2+Z4");
        let inst = diagonal_n_2b_c(6, 2, 2, &gr).unwrap();
        assert!(is_diagonal_instance(&inst));
        assert_eq!(inst.params(), MrsParams::new(6, 6, 4, 4, 2));
        let single = diagonal_n_2b_c(5, 1, 2, &g("Z20")).unwrap();
        assert_eq!(single, diagonal_n2c(5, 2, &g("Z20")).unwrap());
        assert!(is_diagonal_instance(&diagonal_n_2b_c(8, 2, 1, &g("Z8+Z4")).unwrap()));
    }

    #[test]
    fn four_diagonals() {
        let gr = g("Z4+Z4+Z2");
        let inst = diagonal_n_4b_c(8, 1, 1, &gr).unwrap();
        assert!(is_diagonal_instance(&inst));
        assert_eq!(inst.omega().unwrap(), &e(&gr, &[2, 2, 0]));
        assert_eq!(inst.delta().unwrap(), &e(&gr, &[2, 2, 0]));
        // no element of order 4 is needed
        assert!(is_diagonal_instance(&diagonal_n_4b_c(4, 1, 1, &g("Z2+Z2+Z2+Z2")).unwrap()));
        for gr in crate::group::all_abelian_groups(64) {
            let inst = diagonal_n_4b_c(8, 2, 1, &gr).unwrap();
            assert_eq!(inst.params().s, 8);
        }
        assert!(matches!(diagonal_n_4b_c(7, 2, 1, &g("Z56")), Err(MrsError::InvalidParams(_))));
    }

    #[test]
    fn compose_by_gcd() {
        let gr = g("Z8+Z3");
        let seed = diagonal_n2c(2, 6, &gr).unwrap();
        let target = MrsParams::new(6, 3, 2, 4, 2);
        let inst = gcd_compose(&seed, target).unwrap();
        assert_eq!(inst.params(), target);
        // column constant is d = 2 times the seed's
        let seed_delta = elem(seed.delta().unwrap());
        assert_eq!(inst.delta().unwrap(), &Entry::Elem(seed_delta.scalar_mul(2)));
        assert_eq!(inst.omega(), seed.omega());
        assert!(gcd_compose(&seed, MrsParams::new(6, 3, 2, 4, 1)).is_err());
    }

    #[test]
    fn even_parameter_sets() {
        for (p, spec) in [
            (MrsParams::new(2, 2, 2, 2, 1), "Z4"),
            (MrsParams::new(4, 4, 2, 2, 2), "Z8+Z2"),
            (MrsParams::new(4, 8, 4, 2, 1), "Z2+Z8"),
            (MrsParams::new(6, 4, 2, 3, 2), "Z24"),
        ] {
            let out = even_params(p, &g(spec));
            if p.k % 2 == 1 {
                assert!(matches!(out, Err(MrsError::UnsupportedParams(_))));
            } else {
                assert_eq!(out.unwrap().params(), p);
            }
        }
    }

    #[test]
    fn relay_square_onto_rectangle() {
        let gr = g("Z24");
        let square = diagonal_n2c(12, 1, &gr).unwrap();
        let rect = diagonal_to_rectangle(&square, MrsParams::full(4, 6, 1)).unwrap();
        assert!(rect.arrays()[0].is_full());
        let same = diagonal_to_rectangle(&square, MrsParams::new(12, 12, 2, 2, 1)).unwrap();
        assert_eq!(same.arrays(), square.arrays());
        assert!(diagonal_to_rectangle(&square, MrsParams::new(4, 6, 3, 2, 1)).is_err());
        let six = diagonal_n2c(6, 2, &gr).unwrap();
        assert_eq!(diagonal_to_rectangle(&six, MrsParams::new(6, 6, 2, 2, 2)).unwrap().arrays(), six.arrays());
        let eight = crate::fixtures::instance("diagonal_z4_z4_z2_n8_k4_c1").unwrap();
        let same = diagonal_to_rectangle(&eight, MrsParams::new(8, 8, 4, 4, 1)).unwrap();
        assert_eq!(same.arrays(), eight.arrays());
    }

    #[test]
    fn congruence_dispatch() {
        let cases = [
            (MrsParams::new(8, 8, 4, 4, 1), "Z4+Z4+Z2", Mod4Case::BothZero),
            (MrsParams::new(8, 4, 2, 4, 1), "Z16", Mod4Case::RowsTwo),
            (MrsParams::new(4, 8, 4, 2, 1), "Z2+Z8", Mod4Case::ColsTwo),
            (MrsParams::new(6, 6, 6, 6, 1), "Z6+Z6", Mod4Case::BothTwoEvenSides),
            (MrsParams::new(12, 6, 4, 8, 1), "Z48", Mod4Case::BothZero),
        ];
        for (p, spec, case) in cases {
            let (got, inst) = mod4_cases(p, &g(spec)).unwrap_or_else(|err| panic!("{p}: {err}"));
            assert_eq!(got, case);
            assert_eq!(inst.params(), p);
        }
        let open = MrsParams::new(3, 3, 2, 2, 2);
        assert!(matches!(mod4_cases(open, &g("Z12")), Err(MrsError::UnsupportedParams(_))));
    }
}
