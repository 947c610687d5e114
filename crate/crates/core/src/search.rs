//! Exhaustive backtracking search for magic rectangle sets over small groups.
//!
//! Each array's fill pattern is taken up to row and column permutation (one
//! doubly lexical representative per orbit is enough, since every 0/1 matrix
//! can be permuted into doubly lexical order). Constants are taken up to
//! translation of all entries. The remaining space is searched cell by cell
//! with the last cell of every row and column forced by its sum.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use rayon::prelude::*;
use serde::Serialize;

use crate::array::{Domain, Entry, MrsInstance, MrsParams, PFArray};
use crate::error::{MrsError, Result};
use crate::group::FiniteAbelianGroup;

/// Largest group order the search accepts (entries are tracked in a 128-bit mask).
pub const MAX_SEARCH_ORDER: u64 = 128;

/// Default node budget for a single search task.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

const MAX_TASKS: usize = 5_000_000;

/// Per-task budget of the first round; later rounds multiply it by
/// [`BUDGET_GROWTH`] up to the configured budget.
const FIRST_ROUND_BUDGET: u64 = 20_000;
const BUDGET_GROWTH: u64 = 16;

/// Which fill patterns are considered.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum PatternMode {
    /// Every pattern with the right row and column counts.
    Any,
    /// Square arrays filled on the `k` consecutive diagonals starting at the main one.
    Diagonal,
}

#[derive(Clone, Copy, Debug)]
pub struct SearchOptions {
    /// Node budget per task; a task is one choice of constants and patterns.
    pub budget: u64,
    /// Worker threads; 1 runs on the calling thread.
    pub jobs: usize,
    pub patterns: PatternMode,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { budget: DEFAULT_BUDGET, jobs: 1, patterns: PatternMode::Any }
    }
}

/// Result of [`search`].
#[derive(Clone, Debug)]
pub enum SearchOutcome {
    /// A verified witness; the first one in task order, independent of `jobs`.
    Found(MrsInstance),
    /// Every task ran to completion without a witness.
    Exhausted { nodes: u64, tasks: usize },
    /// At least one task hit the budget and no witness was found.
    BudgetExceeded { nodes: u64, tasks: usize },
}

struct Table {
    order: usize,
    add: Vec<u8>,
    neg: Vec<u8>,
}

impl Table {
    fn new(g: &FiniteAbelianGroup) -> Self {
        let order = g.order() as usize;
        let elems: Vec<_> = g.elements().collect();
        let mut add = vec![0u8; order * order];
        for (a, x) in elems.iter().enumerate() {
            for (b, y) in elems.iter().enumerate() {
                add[a * order + b] = (x + y).index() as u8;
            }
        }
        let neg = elems.iter().map(|x| x.neg().index() as u8).collect();
        Table { order, add, neg }
    }

    #[inline]
    fn add(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.order + b as usize]
    }

    #[inline]
    fn sub(&self, a: u8, b: u8) -> u8 {
        self.add(a, self.neg[b as usize])
    }

    fn mul(&self, k: usize, a: u8) -> u8 {
        (0..k).fold(0u8, |acc, _| self.add(acc, a))
    }
}

/// Row-major 0/1 patterns of `m x n` arrays with `s` ones per row and `k` per
/// column, rows and columns both in nonincreasing lexicographic order.
pub fn doubly_lexical_patterns(m: usize, n: usize, s: usize, k: usize) -> Vec<Vec<bool>> {
    if n > 32 || m * s != n * k || s > n || k > m {
        return Vec::new();
    }
    let mut rows: Vec<u32> = (0u32..1 << n).filter(|r| r.count_ones() as usize == s).collect();
    rows.sort_unstable_by(|a, b| b.cmp(a));
    let mut out = Vec::new();
    let mut chosen = Vec::with_capacity(m);
    let mut counts = vec![0usize; n];
    let eq = vec![true; n.saturating_sub(1)];
    pattern_rec(m, n, k, &rows, &mut chosen, &mut counts, eq, &mut out);
    out
}

// Column j is bit n-1-j, so numeric order on rows is lexicographic order.
#[allow(clippy::too_many_arguments)]
fn pattern_rec(
    m: usize,
    n: usize,
    k: usize,
    rows: &[u32],
    chosen: &mut Vec<u32>,
    counts: &mut [usize],
    eq: Vec<bool>,
    out: &mut Vec<Vec<bool>>,
) {
    let i = chosen.len();
    if i == m {
        out.push(chosen.iter().flat_map(|&r| (0..n).map(move |j| r >> (n - 1 - j) & 1 == 1)).collect());
        return;
    }
    let after = m - i - 1;
    'next: for &r in rows {
        if let Some(&prev) = chosen.last() {
            if r > prev {
                continue;
            }
        }
        let bit = |j: usize| (r >> (n - 1 - j)) & 1;
        for j in 0..n {
            let c = counts[j] + bit(j) as usize;
            if c > k || c + after < k {
                continue 'next;
            }
        }
        for j in 0..n.saturating_sub(1) {
            if eq[j] && bit(j) < bit(j + 1) {
                continue 'next;
            }
        }
        let eq_next: Vec<bool> = (0..eq.len()).map(|j| eq[j] && bit(j) == bit(j + 1)).collect();
        for (j, c) in counts.iter_mut().enumerate() {
            *c += bit(j) as usize;
        }
        chosen.push(r);
        pattern_rec(m, n, k, rows, chosen, counts, eq_next, out);
        chosen.pop();
        for (j, c) in counts.iter_mut().enumerate() {
            *c -= bit(j) as usize;
        }
    }
}

fn diagonal_pattern(n: usize, k: usize) -> Vec<bool> {
    (0..n * n).map(|x| (x % n + n - x / n) % n < k).collect()
}

/// Constant pairs `(row, column)` compatible with the totals, one per orbit of
/// translating every entry.
fn constant_pairs(t: &Table, g: &FiniteAbelianGroup, p: MrsParams) -> Vec<(u8, u8)> {
    let sigma = g.group_sum().index() as u8;
    let n = t.order;
    let mut out = Vec::new();
    for w in 0..n as u8 {
        if t.mul(p.c * p.m, w) != sigma {
            continue;
        }
        for d in 0..n as u8 {
            if t.mul(p.c * p.n, d) != sigma || t.mul(p.m, w) != t.mul(p.n, d) {
                continue;
            }
            let canonical = (0..n as u8).all(|x| {
                let pair = (t.add(w, t.mul(p.s, x)), t.add(d, t.mul(p.k, x)));
                pair >= (w, d)
            });
            if canonical {
                out.push((w, d));
            }
        }
    }
    out
}

fn nondecreasing_tuples(len: usize, choices: usize, limit: usize) -> Option<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let mut cur = vec![0usize; len];
    if choices == 0 {
        return Some(out);
    }
    loop {
        out.push(cur.clone());
        if out.len() > limit {
            return None;
        }
        let mut i = len;
        loop {
            if i == 0 {
                return Some(out);
            }
            i -= 1;
            if cur[i] + 1 < choices {
                let v = cur[i] + 1;
                for x in cur.iter_mut().skip(i) {
                    *x = v;
                }
                break;
            }
        }
    }
}

#[derive(Clone, Copy)]
struct Cell {
    arr: usize,
    row: usize,
    col: usize,
    row_last: bool,
    col_last: bool,
    /// Positions whose values this cell must exceed.
    gt: [Option<usize>; 2],
    must_be_zero: bool,
}

fn cell_order(m: usize, n: usize, pattern: &[bool]) -> Vec<(usize, usize)> {
    let mut seen = vec![false; m * n];
    let mut order = Vec::new();
    for t in 0..m.max(n) {
        if t < m {
            for j in 0..n {
                if pattern[t * n + j] && !seen[t * n + j] {
                    seen[t * n + j] = true;
                    order.push((t, j));
                }
            }
        }
        if t < n {
            for i in 0..m {
                if pattern[i * n + t] && !seen[i * n + t] {
                    seen[i * n + t] = true;
                    order.push((i, t));
                }
            }
        }
    }
    order
}

fn build_cells(p: MrsParams, patterns: &[&[bool]], pattern_ids: &[usize]) -> Vec<Cell> {
    let full = p.is_full();
    let mut cells: Vec<Cell> = Vec::new();
    let mut first_pos: Vec<usize> = Vec::new();
    for (a, pat) in patterns.iter().enumerate() {
        let order = cell_order(p.m, p.n, pat);
        let base = cells.len();
        first_pos.push(base);
        let pos_of = |i: usize, j: usize| base + order.iter().position(|&c| c == (i, j)).unwrap();
        for (x, &(i, j)) in order.iter().enumerate() {
            let row_last = order[x + 1..].iter().all(|c| c.0 != i);
            let col_last = order[x + 1..].iter().all(|c| c.1 != j);
            let mut gt = [None, None];
            let mut must_be_zero = false;
            if x == 0 {
                if a > 0 && pattern_ids[a] == pattern_ids[a - 1] {
                    gt[0] = Some(first_pos[a - 1]);
                }
                must_be_zero = full && a == 0;
            } else if full {
                gt[0] = Some(base);
                if i == 0 && j > 0 {
                    gt[1] = Some(pos_of(0, j - 1));
                } else if j == 0 && i > 0 {
                    gt[1] = Some(pos_of(i - 1, 0));
                }
            }
            cells.push(Cell { arr: a, row: i, col: j, row_last, col_last, gt, must_be_zero });
        }
    }
    cells
}

enum Step {
    Found,
    Witness(Vec<u8>),
    Exhausted,
    Budget,
}

struct Task<'a> {
    t: &'a Table,
    cells: Vec<Cell>,
    p: MrsParams,
    omega: u8,
    delta: u8,
    values: Vec<u8>,
    row_sum: Vec<u8>,
    col_sum: Vec<u8>,
    used: u128,
    nodes: u64,
    budget: u64,
}

impl Task<'_> {
    fn place(&mut self, pos: usize, v: u8) -> Step {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Step::Budget;
        }
        let c = self.cells[pos];
        let (ri, ci) = (c.arr * self.p.m + c.row, c.arr * self.p.n + c.col);
        let (old_r, old_c) = (self.row_sum[ri], self.col_sum[ci]);
        self.row_sum[ri] = self.t.add(old_r, v);
        self.col_sum[ci] = self.t.add(old_c, v);
        self.used |= 1u128 << v;
        self.values[pos] = v;
        let step = self.dfs(pos + 1);
        self.used &= !(1u128 << v);
        self.row_sum[ri] = old_r;
        self.col_sum[ci] = old_c;
        step
    }

    fn dfs(&mut self, pos: usize) -> Step {
        if pos == self.cells.len() {
            return Step::Found;
        }
        let c = self.cells[pos];
        let mut lower: i32 = -1;
        for q in c.gt.iter().flatten() {
            lower = lower.max(self.values[*q] as i32);
        }
        let (ri, ci) = (c.arr * self.p.m + c.row, c.arr * self.p.n + c.col);
        let forced = if c.row_last {
            Some(self.t.sub(self.omega, self.row_sum[ri]))
        } else if c.col_last {
            Some(self.t.sub(self.delta, self.col_sum[ci]))
        } else if c.must_be_zero {
            Some(0)
        } else {
            None
        };
        if let Some(v) = forced {
            if self.used >> v & 1 == 1 || (v as i32) <= lower {
                return Step::Exhausted;
            }
            if c.row_last && c.col_last && self.t.add(self.col_sum[ci], v) != self.delta {
                return Step::Exhausted;
            }
            if c.must_be_zero && v != 0 {
                return Step::Exhausted;
            }
            return self.place(pos, v);
        }
        let mut free = !self.used;
        if self.t.order < 128 {
            free &= (1u128 << self.t.order) - 1;
        }
        if lower >= 0 {
            free &= !((1u128 << (lower + 1)) - 1);
        }
        while free != 0 {
            let v = free.trailing_zeros() as u8;
            free &= free - 1;
            match self.place(pos, v) {
                Step::Exhausted => {}
                other => return other,
            }
        }
        Step::Exhausted
    }
}

/// Searches for an `MRS_G(m, n; s, k; c)`.
pub fn search(p: MrsParams, g: &FiniteAbelianGroup, opts: &SearchOptions) -> Result<SearchOutcome> {
    if !p.is_admissible() || g.order() != p.order() as u64 {
        return Err(MrsError::InvalidParams(format!("{p} over {g}")));
    }
    if g.order() > MAX_SEARCH_ORDER {
        return Err(MrsError::Unsupported(format!("search limited to order {MAX_SEARCH_ORDER}")));
    }
    let t = Table::new(g);
    let patterns: Vec<Vec<bool>> = match opts.patterns {
        _ if p.is_full() => vec![vec![true; p.m * p.n]],
        PatternMode::Diagonal => {
            if p.m != p.n || p.s != p.k {
                return Err(MrsError::InvalidParams("diagonal search needs square arrays".into()));
            }
            vec![diagonal_pattern(p.n, p.k)]
        }
        PatternMode::Any => {
            if p.n > 32 {
                return Err(MrsError::Unsupported("pattern search needs n <= 32".into()));
            }
            doubly_lexical_patterns(p.m, p.n, p.s, p.k)
        }
    };
    let pairs = constant_pairs(&t, g, p);
    let limit = MAX_TASKS / pairs.len().max(1);
    let Some(tuples) = nondecreasing_tuples(p.c, patterns.len(), limit) else {
        return Ok(SearchOutcome::BudgetExceeded { nodes: 0, tasks: 0 });
    };
    let tasks: Vec<((u8, u8), &Vec<usize>)> =
        pairs.iter().flat_map(|&pr| tuples.iter().map(move |tu| (pr, tu))).collect();
    let total_nodes = AtomicU64::new(0);

    let run = |&((omega, delta), ids): &((u8, u8), &Vec<usize>), budget: u64| -> Step {
        let pats: Vec<&[bool]> = ids.iter().map(|&i| patterns[i].as_slice()).collect();
        let cells = build_cells(p, &pats, ids);
        let mut task = Task {
            t: &t,
            values: vec![0; cells.len()],
            cells,
            p,
            omega,
            delta,
            row_sum: vec![0; p.c * p.m],
            col_sum: vec![0; p.c * p.n],
            used: 0,
            nodes: 0,
            budget,
        };
        let step = task.dfs(0);
        total_nodes.fetch_add(task.nodes, Ordering::Relaxed);
        match step {
            Step::Found => Step::Witness(task.values),
            other => other,
        }
    };

    let pool = if opts.jobs > 1 {
        Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(opts.jobs)
                .build()
                .map_err(|e| MrsError::Unsupported(e.to_string()))?,
        )
    } else {
        None
    };
    // Rounds of growing budgets: cheap witnesses surface before any task
    // spends the full budget, and exhausted tasks drop out for good.
    let mut pending: Vec<usize> = (0..tasks.len()).collect();
    let mut budget = opts.budget.min(FIRST_ROUND_BUDGET);
    let found = loop {
        let stalled = Mutex::new(Vec::new());
        let attempt = |&i: &usize| match run(&tasks[i], budget) {
            Step::Witness(v) => Some((i, v)),
            Step::Budget => {
                stalled.lock().expect("no panics while held").push(i);
                None
            }
            _ => None,
        };
        let hit = match &pool {
            None => pending.iter().find_map(attempt),
            Some(pool) => pool.install(|| pending.par_iter().find_map_first(attempt)),
        };
        if hit.is_some() {
            break hit;
        }
        let mut stalled = stalled.into_inner().expect("no panics while held");
        if stalled.is_empty() || budget >= opts.budget {
            pending = stalled;
            break None;
        }
        stalled.sort_unstable();
        pending = stalled;
        budget = budget.saturating_mul(BUDGET_GROWTH).min(opts.budget);
    };
    let nodes = total_nodes.load(Ordering::Relaxed);
    let Some((i, values)) = found else {
        return Ok(if pending.is_empty() {
            SearchOutcome::Exhausted { nodes, tasks: tasks.len() }
        } else {
            SearchOutcome::BudgetExceeded { nodes, tasks: tasks.len() }
        });
    };
    let ids = tasks[i].1;
    let pats: Vec<&[bool]> = ids.iter().map(|&x| patterns[x].as_slice()).collect();
    let cells = build_cells(p, &pats, ids);
    let domain = Domain::Group(g.clone());
    let mut arrays = vec![PFArray::new(p.m, p.n, domain.clone()); p.c];
    for (c, &v) in cells.iter().zip(&values) {
        arrays[c.arr].set(c.row, c.col, Some(Entry::Elem(g.element_at(v as usize))))?;
    }
    let inst = MrsInstance::new(p, domain, arrays)?.into_verified()?;
    Ok(SearchOutcome::Found(inst))
}
