//! Finite abelian groups given as direct sums of cyclic groups.
//!
//! A group is a list of cyclic factors `Z_{d_1} + ... + Z_{d_s}`. Elements are
//! residue vectors. Enumeration is lexicographic on coordinates with the last
//! coordinate varying fastest; every "pick one" choice in the crate resolves to
//! the first candidate in this order.

mod hom;
mod quotient;
mod snf;

use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub};
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{MrsError, Result};
use crate::num::{factorize, gcd, lcm, partitions, rem};

pub use hom::{isomorphism, GroupHom};
pub use quotient::{quotient_with_iso, Quotient, Section};
pub use snf::smith_normal_form;

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GroupSpec", into = "GroupSpec")]
pub struct FiniteAbelianGroup {
    factors: Arc<[u64]>,
    canonical: bool,
}

#[derive(Serialize, Deserialize)]
struct GroupSpec {
    factors: Vec<u64>,
}

impl TryFrom<GroupSpec> for FiniteAbelianGroup {
    type Error = MrsError;
    fn try_from(spec: GroupSpec) -> Result<Self> {
        FiniteAbelianGroup::new(&spec.factors)
    }
}

impl From<FiniteAbelianGroup> for GroupSpec {
    fn from(g: FiniteAbelianGroup) -> Self {
        GroupSpec { factors: g.factors.to_vec() }
    }
}

/// Builds the group `Z_{d_1} + ... + Z_{d_s}`; every factor must be at least 2.
pub fn group_from_factors(factors: &[u64]) -> Result<FiniteAbelianGroup> {
    FiniteAbelianGroup::new(factors)
}

impl FiniteAbelianGroup {
    pub fn new(factors: &[u64]) -> Result<Self> {
        if let Some(&bad) = factors.iter().find(|&&d| d < 2) {
            return Err(MrsError::InvalidFactor(bad));
        }
        let canonical = factors.windows(2).all(|w| w[1] % w[0] == 0);
        Ok(FiniteAbelianGroup { factors: factors.into(), canonical })
    }

    pub fn trivial() -> Self {
        FiniteAbelianGroup { factors: Arc::from(Vec::new()), canonical: true }
    }

    /// `Z_n`; `n = 1` gives the trivial group.
    pub fn cyclic(n: u64) -> Result<Self> {
        match n {
            0 => Err(MrsError::InvalidFactor(0)),
            1 => Ok(Self::trivial()),
            _ => Self::new(&[n]),
        }
    }

    /// Like [`FiniteAbelianGroup::new`] but silently drops factors equal to 1.
    pub fn from_factors_lossy(factors: &[u64]) -> Result<Self> {
        let kept: Vec<u64> = factors.iter().copied().filter(|&d| d != 1).collect();
        Self::new(&kept)
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical
    }

    pub fn order(&self) -> u64 {
        self.factors.iter().product()
    }

    pub fn exponent(&self) -> u64 {
        self.factors.iter().fold(1, |acc, &d| lcm(acc, d))
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement { group: self.clone(), coords: vec![0; self.rank()] }
    }

    /// Element with the given coordinates, each reduced modulo its factor.
    pub fn element(&self, coords: &[i64]) -> Result<GroupElement> {
        if coords.len() != self.rank() {
            return Err(MrsError::InvalidInput(format!(
                "element has {} coordinates, group {} has rank {}",
                coords.len(),
                self,
                self.rank()
            )));
        }
        let coords = coords.iter().zip(self.factors.iter()).map(|(&x, &d)| rem(x, d)).collect();
        Ok(GroupElement { group: self.clone(), coords })
    }

    /// Position of `g` in the enumeration order.
    pub fn index_of(&self, g: &GroupElement) -> usize {
        debug_assert_eq!(&g.group, self);
        g.coords.iter().zip(self.factors.iter()).fold(0u64, |acc, (&x, &d)| acc * d + x) as usize
    }

    /// The element at position `idx` of the enumeration order.
    pub fn element_at(&self, idx: usize) -> GroupElement {
        let mut idx = idx as u64;
        let mut coords = vec![0; self.rank()];
        for (c, &d) in coords.iter_mut().zip(self.factors.iter()).rev() {
            *c = idx % d;
            idx /= d;
        }
        GroupElement { group: self.clone(), coords }
    }

    pub fn elements(&self) -> Elements {
        Elements { group: self.clone(), next: 0, end: self.order() as usize }
    }

    pub fn involutions(&self) -> Vec<GroupElement> {
        self.elements().filter(|g| g.order() == 2).collect()
    }

    /// `2^r - 1` where `r` is the number of even factors.
    pub fn involution_count(&self) -> u64 {
        (1u64 << self.factors.iter().filter(|&&d| d % 2 == 0).count()) - 1
    }

    /// Sum of all elements: the unique involution if there is exactly one, else zero.
    pub fn group_sum(&self) -> GroupElement {
        if self.involution_count() == 1 {
            let coords = self.factors.iter().map(|&d| if d % 2 == 0 { d / 2 } else { 0 }).collect();
            GroupElement { group: self.clone(), coords }
        } else {
            self.zero()
        }
    }

    /// True for groups of odd order or with more than one involution.
    pub fn in_upsilon(&self) -> bool {
        self.involution_count() != 1
    }

    /// First element of exact order `n` in enumeration order.
    pub fn element_of_order(&self, n: u64) -> Option<GroupElement> {
        if n == 0 || self.exponent() % n != 0 {
            return None;
        }
        self.elements().find(|g| g.order() == n)
    }

    /// Invariant factors `d_1 | d_2 | ... | d_t` of an isomorphic group.
    pub fn invariant_factors(&self) -> Vec<u64> {
        let mut by_prime: std::collections::BTreeMap<u64, Vec<u64>> = Default::default();
        for (p, q) in self.primary_factors() {
            by_prime.entry(p).or_default().push(q);
        }
        let len = by_prime.values().map(Vec::len).max().unwrap_or(0);
        let mut out = vec![1u64; len];
        for powers in by_prime.values() {
            // powers are ascending; align them to the end
            for (slot, &q) in out[len - powers.len()..].iter_mut().zip(powers) {
                *slot *= q;
            }
        }
        out
    }

    /// The isomorphic group in invariant-factor form.
    pub fn canonical_form(&self) -> Self {
        Self::new(&self.invariant_factors()).expect("invariant factors exceed 1")
    }

    /// Primary cyclic components `(p, p^e)`, sorted by prime then by power.
    pub fn primary_factors(&self) -> Vec<(u64, u64)> {
        let mut out: Vec<(u64, u64)> = self
            .factors
            .iter()
            .flat_map(|&d| factorize(d).into_iter().map(|(p, e)| (p, p.pow(e))))
            .collect();
        out.sort_unstable();
        out
    }

    /// Prime powers making up the Sylow `p`-subgroup, ascending.
    pub fn sylow_factors(&self, p: u64) -> Vec<u64> {
        self.primary_factors().into_iter().filter(|&(q, _)| q == p).map(|(_, pe)| pe).collect()
    }

    pub fn is_isomorphic(&self, other: &Self) -> bool {
        self.primary_factors() == other.primary_factors()
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let factors: Vec<u64> = self.factors.iter().chain(other.factors.iter()).copied().collect();
        Self::new(&factors).expect("factors already validated")
    }

    /// The subgroup generated by `a`, listed as `0, a, 2a, ...`.
    pub fn cyclic_subgroup(&self, a: &GroupElement) -> Vec<GroupElement> {
        cyclic_subgroup(a)
    }
}

impl fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "Z1");
        }
        let parts: Vec<String> = self.factors.iter().map(|d| format!("Z{d}")).collect();
        write!(f, "{}", parts.join("+"))
    }
}

impl fmt::Debug for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for FiniteAbelianGroup {
    type Err = MrsError;

    /// Parses `Z12+Z4` (case-insensitive). `Z1` and `0` denote the trivial group.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "0" || s.eq_ignore_ascii_case("trivial") {
            return Ok(Self::trivial());
        }
        let mut factors = Vec::new();
        for part in s.split('+') {
            let part = part.trim();
            let digits = part
                .strip_prefix('Z')
                .or_else(|| part.strip_prefix('z'))
                .ok_or_else(|| MrsError::Parse(format!("expected Zn, got {part:?}")))?;
            let d: u64 = digits
                .trim()
                .parse()
                .map_err(|_| MrsError::Parse(format!("bad cyclic order in {part:?}")))?;
            if d == 0 {
                return Err(MrsError::InvalidFactor(0));
            }
            if d > 1 {
                factors.push(d);
            }
        }
        Self::new(&factors)
    }
}

/// Iterator over all group elements in enumeration order.
pub struct Elements {
    group: FiniteAbelianGroup,
    next: usize,
    end: usize,
}

impl Iterator for Elements {
    type Item = GroupElement;
    fn next(&mut self) -> Option<GroupElement> {
        if self.next == self.end {
            return None;
        }
        let g = self.group.element_at(self.next);
        self.next += 1;
        Some(g)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = self.end - self.next;
        (left, Some(left))
    }
}

impl ExactSizeIterator for Elements {}

pub fn enumerate(g: &FiniteAbelianGroup) -> Elements {
    g.elements()
}

/// Every abelian group of the given order up to isomorphism, in invariant-factor form.
pub fn all_abelian_groups(order: u64) -> Vec<FiniteAbelianGroup> {
    assert!(order >= 1, "group order must be positive");
    let mut combos: Vec<Vec<Vec<u64>>> = vec![vec![]];
    for (p, e) in factorize(order) {
        let mut next = Vec::new();
        for combo in &combos {
            for part in partitions(e) {
                let mut c = combo.clone();
                c.push(part.iter().map(|&a| p.pow(a)).collect());
                next.push(c);
            }
        }
        combos = next;
    }
    combos
        .into_iter()
        .map(|per_prime| {
            let len = per_prime.iter().map(Vec::len).max().unwrap_or(0);
            let mut inv = vec![1u64; len];
            for powers in &per_prime {
                // powers are non-increasing; the largest goes to the last invariant factor
                for (k, &q) in powers.iter().enumerate() {
                    inv[len - 1 - k] *= q;
                }
            }
            FiniteAbelianGroup::new(&inv).expect("invariant factors exceed 1")
        })
        .collect()
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GroupElement {
    group: FiniteAbelianGroup,
    coords: Vec<u64>,
}

impl GroupElement {
    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn index(&self) -> usize {
        self.group.index_of(self)
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&x| x == 0)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        if self.group != other.group {
            return Err(MrsError::GroupMismatch);
        }
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .zip(self.group.factors.iter())
            .map(|((&a, &b), &d)| (a + b) % d)
            .collect();
        Ok(GroupElement { group: self.group.clone(), coords })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let coords =
            self.coords.iter().zip(self.group.factors.iter()).map(|(&a, &d)| (d - a) % d).collect();
        GroupElement { group: self.group.clone(), coords }
    }

    pub fn scalar_mul(&self, k: i64) -> Self {
        let coords = self
            .coords
            .iter()
            .zip(self.group.factors.iter())
            .map(|(&a, &d)| ((a as i128 * k as i128).rem_euclid(d as i128)) as u64)
            .collect();
        GroupElement { group: self.group.clone(), coords }
    }

    /// Least `k >= 1` with `k * self = 0`.
    pub fn order(&self) -> u64 {
        self.coords
            .iter()
            .zip(self.group.factors.iter())
            .fold(1, |acc, (&x, &d)| lcm(acc, d / gcd(d, x)))
    }
}

pub fn add(a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
    a.try_add(b)
}

pub fn neg(a: &GroupElement) -> GroupElement {
    a.neg()
}

pub fn scalar_mul(k: i64, a: &GroupElement) -> GroupElement {
    a.scalar_mul(k)
}

pub fn element_order(a: &GroupElement) -> u64 {
    a.order()
}

/// Sum of a list of elements of `group`; zero for an empty list.
pub fn sum_elements<'a, I>(group: &FiniteAbelianGroup, items: I) -> GroupElement
where
    I: IntoIterator<Item = &'a GroupElement>,
{
    items.into_iter().fold(group.zero(), |acc, g| &acc + g)
}

pub fn cyclic_subgroup(a: &GroupElement) -> Vec<GroupElement> {
    let mut out = vec![a.group.zero()];
    let mut cur = a.clone();
    while !cur.is_zero() {
        out.push(cur.clone());
        cur = &cur + a;
    }
    out
}

impl PartialOrd for GroupElement {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GroupElement {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.group
            .factors
            .cmp(&other.group.factors)
            .then_with(|| self.coords.cmp(&other.coords))
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(u64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} in {}", self.group)
    }
}

// Operator forms panic on mixed groups; use `try_add` when that can happen.
impl Add for &GroupElement {
    type Output = GroupElement;
    fn add(self, rhs: &GroupElement) -> GroupElement {
        self.try_add(rhs).expect("adding elements of different groups")
    }
}

impl Sub for &GroupElement {
    type Output = GroupElement;
    fn sub(self, rhs: &GroupElement) -> GroupElement {
        self.try_sub(rhs).expect("subtracting elements of different groups")
    }
}

impl Neg for &GroupElement {
    type Output = GroupElement;
    fn neg(self) -> GroupElement {
        GroupElement::neg(self)
    }
}

impl AddAssign<&GroupElement> for GroupElement {
    fn add_assign(&mut self, rhs: &GroupElement) {
        *self = &*self + rhs;
    }
}
