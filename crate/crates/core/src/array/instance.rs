use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Domain, Entry, PFArray};
use crate::error::{MrsError, Result};
use crate::group::GroupHom;
use crate::num::gcd;

/// Parameter tuple `(m, n; s, k; c)`: `c` arrays of size `m x n` with `s`
/// filled cells per row and `k` per column.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct MrsParams {
    pub m: usize,
    pub n: usize,
    pub s: usize,
    pub k: usize,
    pub c: usize,
}

impl MrsParams {
    pub fn new(m: usize, n: usize, s: usize, k: usize, c: usize) -> Self {
        MrsParams { m, n, s, k, c }
    }

    /// Fully filled `a x b` arrays.
    pub fn full(a: usize, b: usize, c: usize) -> Self {
        MrsParams { m: a, n: b, s: b, k: a, c }
    }

    pub fn transpose(&self) -> Self {
        MrsParams { m: self.n, n: self.m, s: self.k, k: self.s, c: self.c }
    }

    pub fn is_full(&self) -> bool {
        self.s == self.n && self.k == self.m
    }

    /// Number of entries, `n k c`.
    pub fn order(&self) -> usize {
        self.n * self.k * self.c
    }

    /// `2 <= s <= n`, `2 <= k <= m`, `ms = nk`, `c >= 1`.
    pub fn is_admissible(&self) -> bool {
        2 <= self.s
            && self.s <= self.n
            && 2 <= self.k
            && self.k <= self.m
            && self.m * self.s == self.n * self.k
            && self.c >= 1
    }

    /// `(d, s1, k1, e)` with `s = d s1`, `k = d k1`, `m = e k1`, `n = e s1`.
    pub fn gcd_split(&self) -> (usize, usize, usize, usize) {
        let d = gcd(self.s, self.k);
        let (s1, k1) = (self.s / d, self.k / d);
        (d, s1, k1, self.m / k1)
    }
}

impl fmt::Display for MrsParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{};{},{};{})", self.m, self.n, self.s, self.k, self.c)
    }
}

/// A candidate magic rectangle set: `c` arrays plus optional claimed constants.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MrsInstance {
    params: MrsParams,
    domain: Domain,
    arrays: Vec<PFArray>,
    omega: Option<Entry>,
    delta: Option<Entry>,
}

impl MrsInstance {
    pub fn new(params: MrsParams, domain: Domain, arrays: Vec<PFArray>) -> Result<Self> {
        if arrays.len() != params.c {
            return Err(MrsError::ShapeError(format!(
                "{} arrays given, parameters {params} need {}",
                arrays.len(),
                params.c
            )));
        }
        for a in &arrays {
            if (a.rows(), a.cols()) != (params.m, params.n) {
                return Err(MrsError::ShapeError(format!(
                    "array of size {}x{} in an instance with parameters {params}",
                    a.rows(),
                    a.cols()
                )));
            }
            if a.domain() != &domain {
                return Err(MrsError::GroupMismatch);
            }
        }
        Ok(MrsInstance { params, domain, arrays, omega: None, delta: None })
    }

    /// Records claimed row and column constants, checked by [`verify_mrs`].
    pub fn with_constants(mut self, omega: Option<Entry>, delta: Option<Entry>) -> Result<Self> {
        for e in omega.iter().chain(delta.iter()) {
            if !self.domain.contains(e) {
                return Err(MrsError::ModeError(format!("constant {e} is outside the domain")));
            }
        }
        self.omega = omega;
        self.delta = delta;
        Ok(self)
    }

    pub fn params(&self) -> MrsParams {
        self.params
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn arrays(&self) -> &[PFArray] {
        &self.arrays
    }

    pub fn into_arrays(self) -> Vec<PFArray> {
        self.arrays
    }

    pub fn omega(&self) -> Option<&Entry> {
        self.omega.as_ref()
    }

    pub fn delta(&self) -> Option<&Entry> {
        self.delta.as_ref()
    }

    pub fn verify(&self) -> VerificationReport {
        verify_mrs(self)
    }

    pub fn transpose(&self) -> MrsInstance {
        transpose_instance(self)
    }

    /// Verifies the instance and fills in missing constants from the
    /// verifier; fails with `ConstructionFailed` if any condition breaks.
    pub fn into_verified(mut self) -> Result<Self> {
        let report = verify_mrs(&self);
        if !report.passed() {
            return Err(MrsError::ConstructionFailed(format!(
                "{} {}: {}",
                self.domain.group().map_or("integers".to_string(), |g| g.to_string()),
                self.params,
                report.problems.join("; ")
            )));
        }
        self.omega = report.omega;
        self.delta = report.delta;
        Ok(self)
    }

    /// Image of the instance under a group isomorphism.
    pub fn map_group(&self, f: &GroupHom) -> Result<MrsInstance> {
        if self.domain.group() != Some(f.source()) {
            return Err(MrsError::GroupMismatch);
        }
        let target = Domain::Group(f.target().clone());
        let map = |e: &Entry| -> Result<Entry> {
            let g = e.as_elem().ok_or_else(|| MrsError::ModeError("integer entry".into()))?;
            f.apply(g).map(Entry::Elem)
        };
        let arrays: Result<Vec<PFArray>> =
            self.arrays.iter().map(|a| a.map_entries(target.clone(), map)).collect();
        let omega = self.omega.as_ref().map(map).transpose()?;
        let delta = self.delta.as_ref().map(map).transpose()?;
        MrsInstance::new(self.params, target, arrays?)?.with_constants(omega, delta)
    }
}

/// Outcome of [`verify_mrs`], one flag per defining condition.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct VerificationReport {
    /// Every element of the group (or `1..=nkc`) occurs exactly once overall.
    pub entries_ok: bool,
    /// Every row has `s` filled cells and every column `k`.
    pub counts_ok: bool,
    /// All row sums agree and all column sums agree, across all arrays.
    pub sums_ok: bool,
    /// Comparison with the claimed constants, when the instance carries any.
    pub claimed_ok: Option<bool>,
    pub omega: Option<Entry>,
    pub delta: Option<Entry>,
    pub problems: Vec<String>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.entries_ok && self.counts_ok && self.sums_ok && self.claimed_ok != Some(false)
    }
}

fn check_entries(inst: &MrsInstance, problems: &mut Vec<String>) -> bool {
    let p = inst.params;
    let total: usize = inst.arrays.iter().map(PFArray::filled_count).sum();
    let (size, index): (usize, Box<dyn Fn(&Entry) -> Option<usize>>) = match &inst.domain {
        Domain::Integers => {
            let size = p.order();
            (size, Box::new(move |e: &Entry| {
                let v = e.as_int()?;
                (1..=size as i64).contains(&v).then(|| (v - 1) as usize)
            }))
        }
        Domain::Group(g) => (g.order() as usize, Box::new(|e: &Entry| e.as_elem().map(|x| x.index()))),
    };
    let mut seen = vec![false; size];
    let mut ok = true;
    for e in inst.arrays.iter().flat_map(PFArray::entries) {
        match index(e) {
            None => {
                problems.push(format!("entry {e} is out of range"));
                ok = false;
            }
            Some(i) if seen[i] => {
                problems.push(format!("entry {e} appears more than once"));
                ok = false;
            }
            Some(i) => seen[i] = true,
        }
    }
    if total != size {
        problems.push(format!("{total} filled cells for {size} entries"));
        ok = false;
    }
    ok
}

fn check_counts(inst: &MrsInstance, problems: &mut Vec<String>) -> bool {
    let p = inst.params;
    let mut ok = true;
    for (t, a) in inst.arrays.iter().enumerate() {
        for i in 0..p.m {
            if a.row_count(i) != p.s {
                problems.push(format!("array {t} row {i} has {} filled cells", a.row_count(i)));
                ok = false;
            }
        }
        for j in 0..p.n {
            if a.col_count(j) != p.k {
                problems.push(format!("array {t} column {j} has {} filled cells", a.col_count(j)));
                ok = false;
            }
        }
    }
    ok
}

/// Checks the three defining conditions independently and extracts the
/// constants from the first nonempty row and column of the first array.
pub fn verify_mrs(inst: &MrsInstance) -> VerificationReport {
    let mut problems = Vec::new();
    let entries_ok = check_entries(inst, &mut problems);
    let counts_ok = check_counts(inst, &mut problems);

    let p = inst.params;
    let (mut omega, mut delta) = (None, None);
    if let Some(first) = inst.arrays.first() {
        let row = (0..p.m).find(|&i| first.row_count(i) > 0).unwrap_or(0);
        let col = (0..p.n).find(|&j| first.col_count(j) > 0).unwrap_or(0);
        omega = first.row_sum(row).ok();
        delta = first.col_sum(col).ok();
    }
    let mut sums_ok = true;
    for (t, a) in inst.arrays.iter().enumerate() {
        for i in 0..p.m {
            let r = a.row_sum(i).ok();
            if r != omega {
                problems.push(format!("array {t} row {i} sums to {:?}", r));
                sums_ok = false;
            }
        }
        for j in 0..p.n {
            let c = a.col_sum(j).ok();
            if c != delta {
                problems.push(format!("array {t} column {j} sums to {:?}", c));
                sums_ok = false;
            }
        }
    }

    let claimed_ok = if inst.omega.is_some() || inst.delta.is_some() {
        let mut ok = true;
        if inst.omega.is_some() && inst.omega != omega {
            problems.push(format!("claimed row constant {:?}, found {:?}", inst.omega, omega));
            ok = false;
        }
        if inst.delta.is_some() && inst.delta != delta {
            problems.push(format!("claimed column constant {:?}, found {:?}", inst.delta, delta));
            ok = false;
        }
        Some(ok)
    } else {
        None
    };
    VerificationReport { entries_ok, counts_ok, sums_ok, claimed_ok, omega, delta, problems }
}

/// Transposes every array; parameters become `(n, m; k, s; c)` and the
/// constants swap.
pub fn transpose_instance(inst: &MrsInstance) -> MrsInstance {
    MrsInstance {
        params: inst.params.transpose(),
        domain: inst.domain.clone(),
        arrays: inst.arrays.iter().map(PFArray::transpose).collect(),
        omega: inst.delta.clone(),
        delta: inst.omega.clone(),
    }
}

/// Filled-cell diagonals of one array, as indices modulo `gcd(m, n)`, when the
/// filled cells are exactly a union of whole diagonals.
fn filled_diagonals(a: &PFArray) -> Option<Vec<usize>> {
    let (m, n) = (a.rows(), a.cols());
    let e = gcd(m, n);
    let per_diag = m / e * n;
    let mut counts = vec![0usize; e];
    for (i, j) in a.filled_cells() {
        counts[(j + e - i % e) % e] += 1;
    }
    if counts.iter().any(|&c| c != 0 && c != per_diag) {
        return None;
    }
    Some((0..e).filter(|&l| counts[l] > 0).collect())
}

fn cyclically_consecutive(set: &[usize], e: usize) -> bool {
    if set.is_empty() || set.len() == e {
        return !set.is_empty();
    }
    let members: HashSet<usize> = set.iter().copied().collect();
    // exactly one member starts a run: its predecessor is missing
    set.iter().filter(|&&l| !members.contains(&((l + e - 1) % e))).count() == 1
}

/// True when each array's filled cells are a run of consecutive diagonals
/// (indices modulo `gcd(m, n)`) giving `s` cells per row.
pub fn is_diagonal_instance(inst: &MrsInstance) -> bool {
    let p = inst.params;
    let e = gcd(p.m, p.n);
    inst.arrays.iter().all(|a| match filled_diagonals(a) {
        Some(ls) => cyclically_consecutive(&ls, e) && ls.len() * (p.n / e) == p.s,
        None => false,
    })
}

/// Constant-weight check for the complete multipartite graph whose parts are
/// the columns of the arrays.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct LabelingReport {
    pub parts: usize,
    pub part_size: usize,
    pub constant: bool,
    /// Common vertex weight when `constant` holds.
    pub mu: Option<Entry>,
}

/// Each vertex's weight is the sum of all labels minus the sum of its own column.
pub fn to_multipartite_labeling(inst: &MrsInstance) -> Result<LabelingReport> {
    let p = inst.params;
    if !p.is_full() || inst.arrays.iter().any(|a| !a.is_full()) {
        return Err(MrsError::Unsupported("labeling needs fully filled arrays".into()));
    }
    let zero = inst.domain.zero();
    let total = inst
        .arrays
        .iter()
        .flat_map(PFArray::entries)
        .try_fold(zero, |acc, e| acc.try_add(e))?;
    let mut weights = Vec::with_capacity(p.n * p.c);
    for a in &inst.arrays {
        for j in 0..p.n {
            weights.push(total.try_add(&a.col_sum(j)?.neg())?);
        }
    }
    let constant = weights.windows(2).all(|w| w[0] == w[1]);
    Ok(LabelingReport {
        parts: weights.len(),
        part_size: p.m,
        constant,
        mu: constant.then(|| weights[0].clone()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteAbelianGroup;

    fn mr35() -> MrsInstance {
        let rows: [[i64; 5]; 3] = [[15, 2, 14, 4, 5], [8, 10, 7, 9, 6], [1, 12, 3, 11, 13]];
        let a = PFArray::from_rows(
            Domain::Integers,
            rows.iter().map(|r| r.iter().map(|&v| Some(Entry::Int(v))).collect()).collect(),
        )
        .unwrap();
        MrsInstance::new(MrsParams::full(3, 5, 1), Domain::Integers, vec![a]).unwrap()
    }

    #[test]
    fn integer_magic_rectangle() {
        let inst = mr35();
        let r = verify_mrs(&inst);
        assert!(r.passed(), "{:?}", r.problems);
        assert_eq!(r.omega, Some(Entry::Int(40)));
        assert_eq!(r.delta, Some(Entry::Int(24)));
        let lab = to_multipartite_labeling(&inst).unwrap();
        assert_eq!(lab.mu, Some(Entry::Int(96)));
        let lab = to_multipartite_labeling(&inst.transpose()).unwrap();
        assert_eq!(lab.mu, Some(Entry::Int(80)));
    }

    #[test]
    fn each_condition_fails_on_its_own() {
        let inst = mr35();
        let mut arrays = inst.arrays().to_vec();
        // swap two entries in a row: sums break, entries and counts stay
        let (x, y) = (arrays[0].get(0, 0).cloned(), arrays[0].get(1, 0).cloned());
        arrays[0].set(0, 0, y).unwrap();
        arrays[0].set(1, 0, x).unwrap();
        let r = verify_mrs(&MrsInstance::new(inst.params(), Domain::Integers, arrays).unwrap());
        assert!(r.entries_ok && r.counts_ok && !r.sums_ok);

        let mut arrays = inst.arrays().to_vec();
        arrays[0].set(0, 0, Some(Entry::Int(2))).unwrap();
        let r = verify_mrs(&MrsInstance::new(inst.params(), Domain::Integers, arrays).unwrap());
        assert!(!r.entries_ok && r.counts_ok);

        let mut arrays = inst.arrays().to_vec();
        arrays[0].set(2, 4, None).unwrap();
        let r = verify_mrs(&MrsInstance::new(inst.params(), Domain::Integers, arrays).unwrap());
        assert!(!r.counts_ok && !r.entries_ok);

        let claimed = inst.clone().with_constants(Some(Entry::Int(41)), None).unwrap();
        let r = verify_mrs(&claimed);
        assert_eq!(r.claimed_ok, Some(false));
        assert!(!r.passed());
    }

    #[test]
    fn diagonal_detection() {
        let g = FiniteAbelianGroup::new(&[6]).unwrap();
        let mut a = PFArray::new(3, 3, Domain::Group(g.clone()));
        let vals = [[0, 1], [2, 3], [4, 5]];
        for i in 0..3 {
            a.set(i, i, Some(g.element(&[vals[i][0]]).unwrap().into())).unwrap();
            a.set(i, (i + 1) % 3, Some(g.element(&[vals[i][1]]).unwrap().into())).unwrap();
        }
        let inst = MrsInstance::new(MrsParams::new(3, 3, 2, 2, 1), Domain::Group(g.clone()), vec![a.clone()])
            .unwrap();
        assert!(is_diagonal_instance(&inst));
        let mut b = a;
        let moved = b.get(0, 1).cloned();
        b.set(0, 1, None).unwrap();
        b.set(0, 2, moved).unwrap();
        let inst = MrsInstance::new(MrsParams::new(3, 3, 2, 2, 1), Domain::Group(g), vec![b]).unwrap();
        assert!(!is_diagonal_instance(&inst));
        assert!(cyclically_consecutive(&[0, 4, 5], 6));
        assert!(!cyclically_consecutive(&[0, 2], 6));
    }

    #[test]
    fn params_helpers() {
        let p = MrsParams::new(6, 3, 2, 4, 2);
        assert!(p.is_admissible());
        assert_eq!(p.gcd_split(), (2, 1, 2, 3));
        assert_eq!(p.transpose(), MrsParams::new(3, 6, 4, 2, 2));
        assert!(!MrsParams::new(2, 3, 3, 3, 1).is_admissible());
        assert_eq!(p.to_string(), "(6,3;2,4;2)");
    }
}
