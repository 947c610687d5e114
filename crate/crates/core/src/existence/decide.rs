//! The cited decision procedure.

use super::{ExistenceVerdict, Reason, Status};
use crate::array::MrsParams;
use crate::construct::{odd_c_construction, theorem_main};
use crate::diagonal::{diagonal_n_2b_c, diagonal_to_rectangle, even_params, gcd_compose, mod4_cases, Mod4Case};
use crate::error::{MrsError, Result};
use crate::group::FiniteAbelianGroup;
use crate::num::is_power_of_two;
use crate::search::SearchOptions;

#[derive(Clone, Copy, Debug)]
pub struct DecideOptions {
    /// Build witnesses for constructive verdicts.
    pub witnesses: bool,
    /// Used by constructions that search for a small base case.
    pub search: SearchOptions,
}

impl Default for DecideOptions {
    fn default() -> Self {
        DecideOptions { witnesses: true, search: SearchOptions::default() }
    }
}

/// [`decide_with`] using default options.
pub fn decide(p: MrsParams, gamma: &FiniteAbelianGroup) -> Result<ExistenceVerdict> {
    decide_with(p, gamma, &DecideOptions::default())
}

/// Decides existence of an `MRS_G(m, n; s, k; c)` from the known results.
///
/// Checks run cheapest first: necessary conditions, nonexistence results,
/// constructions, then `Unknown`. Both orientations are tried, so the status
/// is invariant under transposition. Errors only signal a construction that
/// failed its own verification.
pub fn decide_with(p: MrsParams, gamma: &FiniteAbelianGroup, opts: &DecideOptions) -> Result<ExistenceVerdict> {
    let direct = oriented(p, gamma, opts)?;
    if direct.status.is_definite() {
        return Ok(direct);
    }
    let flipped = oriented(p.transpose(), gamma, opts)?;
    Ok(if flipped.status.is_definite() { flipped.transpose() } else { direct })
}

fn necessary(p: MrsParams, gamma: &FiniteAbelianGroup) -> Option<String> {
    if p.c == 0 {
        return Some("no arrays".into());
    }
    if !(2 <= p.s && p.s <= p.n && 2 <= p.k && p.k <= p.m) {
        return Some(format!("need 2 <= s <= n and 2 <= k <= m, got {p}"));
    }
    if p.m * p.s != p.n * p.k {
        return Some(format!("ms != nk for {p}"));
    }
    if gamma.order() != p.order() as u64 {
        return Some(format!("|{gamma}| = {} but nkc = {}", gamma.order(), p.order()));
    }
    None
}

/// Passes construction errors through only when they are verification failures.
fn built<T>(r: Result<T>) -> Result<Option<T>> {
    match r {
        Ok(x) => Ok(Some(x)),
        Err(e @ MrsError::ConstructionFailed(_)) => Err(e),
        Err(_) => Ok(None),
    }
}

fn oriented(p: MrsParams, gamma: &FiniteAbelianGroup, opts: &DecideOptions) -> Result<ExistenceVerdict> {
    if let Some(why) = necessary(p, gamma) {
        return Ok(ExistenceVerdict::not_exists(Reason::Nec, why));
    }
    let single_involution = gamma.involution_count() == 1;
    if (p.s % 2 == 1 || p.k % 2 == 1) && single_involution {
        return Ok(ExistenceVerdict::not_exists(
            Reason::CorSkOdd1,
            format!("s or k is odd and {gamma} has a single involution"),
        ));
    }
    if p.k == 2 && (p.n * p.s) % 2 == 1 {
        return Ok(ExistenceVerdict::not_exists(Reason::PropNoOdd, "k = 2 with ns odd"));
    }
    if p.is_full() {
        full(p, gamma, opts)
    } else {
        partial(p, gamma, opts)
    }
}

fn full(p: MrsParams, gamma: &FiniteAbelianGroup, opts: &DecideOptions) -> Result<ExistenceVerdict> {
    let (a, b, c) = (p.m, p.n, p.c);
    if a % 2 == 0 && b % 2 == 0 {
        let w = if opts.witnesses { Some(even_params(p, gamma)?) } else { None };
        return Ok(ExistenceVerdict::exists(Reason::PropEven, w, "both sides even"));
    }
    // from here the group is in the class with zero or several involutions
    let odd_power = |x: usize, y: usize| x % 2 == 1 && y % 2 == 0 && is_power_of_two(y as u64);
    if !odd_power(a, b) && !odd_power(b, a) {
        return Ok(ExistenceVerdict::exists(Reason::ThmEsistenza, None, "cited, no witness built"));
    }
    let transposed = odd_power(b, a);
    let (rows, cols) = if transposed { (b, a) } else { (a, b) };
    let l = (rows as u64 - 1) / 2;
    let orient = |v: ExistenceVerdict| if transposed { v.transpose() } else { v };
    match (cols, c % 4) {
        (4, 2) => {
            return Ok(ExistenceVerdict::exists(
                Reason::Ch21,
                None,
                "cited: several involutions suffice, no witness built",
            ))
        }
        (8, 2) => {
            let w = if opts.witnesses {
                Some(theorem_main(l, (c as u64 - 2) / 4, gamma)?)
            } else {
                None
            };
            return Ok(orient(ExistenceVerdict::exists(Reason::ThmMain, w, "")));
        }
        _ => {}
    }
    if c % 2 == 1 {
        let alpha = cols.trailing_zeros();
        let w = if opts.witnesses {
            built(odd_c_construction(l, alpha, c as u64, gamma, &opts.search))?
        } else {
            None
        };
        let note = if opts.witnesses && w.is_none() { "base case search did not finish" } else { "" };
        return Ok(orient(ExistenceVerdict::exists(Reason::PropOddC, w, note)));
    }
    Ok(ExistenceVerdict::unknown(
        Reason::ConjChFrontier,
        format!("{rows} x {cols} with {c} arrays is not settled"),
    ))
}

fn partial(p: MrsParams, gamma: &FiniteAbelianGroup, opts: &DecideOptions) -> Result<ExistenceVerdict> {
    let (d, _, k1, e) = p.gcd_split();
    let open_2mod4 = p.s % 4 == 2 && p.k % 4 == 2 && p.m % 2 == 1 && p.n % 2 == 1;
    if p.s % 2 == 0 && p.k % 2 == 0 {
        if let Some(case) = Mod4Case::of(p) {
            let w = if opts.witnesses { Some(mod4_cases(p, gamma)?.1) } else { None };
            return Ok(ExistenceVerdict::exists(Reason::PropMod4, w, case.name()));
        }
    }
    if open_2mod4 {
        let side = p.n * k1;
        if gamma.element_of_order(side as u64).is_some() {
            let w = if opts.witnesses {
                let diag = diagonal_n_2b_c(side, d / 2, p.c, gamma)?;
                Some(diagonal_to_rectangle(&diag, p)?)
            } else {
                None
            };
            return Ok(ExistenceVerdict::exists(
                Reason::Mrs2bSqRt,
                w,
                format!("{gamma} has an element of order {side}"),
            ));
        }
    }
    // a full k1 x s set gives the partial one by gcd composition
    let seed = MrsParams::full(k1, p.s, e * p.c);
    if k1 >= 2 {
        let full_verdict = decide_with(seed, gamma, opts)?;
        if full_verdict.status == Status::Exists {
            let reason = if full_verdict.reason == Reason::ThmEsistenza { Reason::Cor123 } else { Reason::LemmaGcd };
            let w = match &full_verdict.witness {
                Some(inner) if opts.witnesses => Some(gcd_compose(inner, p)?),
                _ => None,
            };
            return Ok(ExistenceVerdict::exists(
                reason,
                w,
                format!("from a full {seed} [{}]", full_verdict.reason),
            ));
        }
    }
    if open_2mod4 {
        Ok(ExistenceVerdict::unknown(Reason::Open2Mod4, "s = k = 2 (mod 4) with m, n odd"))
    } else {
        Ok(ExistenceVerdict::unknown(Reason::OpenPartial, "no applicable construction"))
    }
}
