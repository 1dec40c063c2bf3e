//! Exact optimal tours at small n, for optimality-gap computation.
//!
//! Two independent routes: exhaustive search over undirected tours (n <= 11)
//! and the Held-Karp subset dynamic program (n <= 22). Both return the tour
//! in a canonical form — starting at city 0, oriented so the second city has
//! the smaller index than the last — so equal optima compare bitwise.

use crate::error::{Error, Result};
use crate::instances::{Tour, TspInstance};
use crate::scalar::Scalar;

/// How an exact optimum was computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExactMethod {
    Brute,
    HeldKarp,
}

/// A certified globally optimal tour.
#[derive(Debug, Clone)]
pub struct ExactResult<S> {
    pub tour: Tour<S>,
    pub method: ExactMethod,
}

const BRUTE_MAX: usize = 11;
const HELD_KARP_MAX: usize = 22;

/// Rotate to start at 0 and reflect so order[1] < order[n-1]; the length is
/// recomputed on the canonical order so identical tours have identical bits.
fn canonical_tour<S: Scalar>(inst: &TspInstance<S>, mut order: Vec<usize>) -> Tour<S> {
    let n = order.len();
    let zero = order.iter().position(|&c| c == 0).expect("tour contains city 0");
    order.rotate_left(zero);
    if n > 2 && order[1] > order[n - 1] {
        order[1..].reverse();
    }
    let length = inst.cycle_sum(&order);
    Tour { order, length }
}

/// Exhaustive optimum over the (n-1)!/2 undirected tours fixing city 0.
///
/// The two neighbors of city 0 are enumerated as an ordered pair (a < b),
/// which halves the work; partial sums prune branches that already exceed
/// the incumbent.
pub fn brute_force<S: Scalar>(inst: &TspInstance<S>) -> Result<ExactResult<S>> {
    let n = inst.n();
    if n > BRUTE_MAX {
        return Err(Error::SizeLimit(format!("brute force handles n <= {BRUTE_MAX}, got {n}")));
    }

    let d = inst.dist();
    let mut best_len = S::infinity();
    let mut best_order: Vec<usize> = Vec::new();

    // order = [0, a, middle..., b]; recurse over the middle cities.
    let mut order = vec![0usize; n];
    let mut used = vec![false; n];
    for a in 1..n {
        for b in (a + 1)..n {
            order[1] = a;
            order[n - 1] = b;
            used[a] = true;
            used[b] = true;
            // With no middle cities a and b are adjacent on the cycle.
            let mut partial = d[(0, a)] + d[(b, 0)];
            if n == 3 {
                partial = partial + d[(a, b)];
            }
            extend(inst, &mut order, &mut used, 2, partial, &mut best_len, &mut best_order);
            used[a] = false;
            used[b] = false;
        }
    }
    Ok(ExactResult { tour: canonical_tour(inst, best_order), method: ExactMethod::Brute })
}

fn extend<S: Scalar>(
    inst: &TspInstance<S>,
    order: &mut [usize],
    used: &mut [bool],
    depth: usize,
    partial: S,
    best_len: &mut S,
    best_order: &mut Vec<usize>,
) {
    let n = order.len();
    let d = inst.dist();
    if partial >= *best_len {
        return;
    }
    if depth == n - 1 {
        // Middle fully placed: edges 0-a, spine, b-0 are all accounted once
        // the last middle city connects to b.
        let total = partial;
        if total < *best_len {
            *best_len = total;
            *best_order = order.to_vec();
        }
        return;
    }
    let prev = order[depth - 1];
    let closing = order[n - 1];
    for c in 1..n {
        if used[c] {
            continue;
        }
        used[c] = true;
        order[depth] = c;
        let mut added = d[(prev, c)];
        if depth + 1 == n - 1 {
            added = added + d[(c, closing)];
        }
        extend(inst, order, used, depth + 1, partial + added, best_len, best_order);
        used[c] = false;
    }
}

/// DP value and tour in DP orientation; the reconstructed tour's length is
/// bitwise the DP value because both accumulate edges in the same sequence.
pub(crate) fn held_karp_dp<S: Scalar>(inst: &TspInstance<S>) -> Result<(S, Vec<usize>)> {
    let n = inst.n();
    if n > HELD_KARP_MAX {
        return Err(Error::SizeLimit(format!(
            "Held-Karp handles n <= {HELD_KARP_MAX} (2^n * n states), got {n}"
        )));
    }
    let d = inst.dist();
    let m = n - 1; // cities 1..n, bit i <-> city i+1
    let full: usize = (1 << m) - 1;
    let mut dp = vec![S::infinity(); (1 << m) * m];
    let mut parent = vec![u8::MAX; (1 << m) * m];

    for j in 0..m {
        dp[(1 << j) * m + j] = d[(0, j + 1)];
    }
    for mask in 1..=full {
        if mask.count_ones() < 2 {
            continue;
        }
        let mut rest = mask;
        while rest != 0 {
            let j = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let prev_mask = mask ^ (1 << j);
            let mut best = S::infinity();
            let mut best_i = u8::MAX;
            let mut prest = prev_mask;
            while prest != 0 {
                let i = prest.trailing_zeros() as usize;
                prest &= prest - 1;
                let cand = dp[prev_mask * m + i] + d[(i + 1, j + 1)];
                if cand < best {
                    best = cand;
                    best_i = i as u8;
                }
            }
            dp[mask * m + j] = best;
            parent[mask * m + j] = best_i;
        }
    }

    let mut total = S::infinity();
    let mut last = usize::MAX;
    for j in 0..m {
        let cand = dp[full * m + j] + d[(j + 1, 0)];
        if cand < total {
            total = cand;
            last = j;
        }
    }

    let mut order = vec![0usize; n];
    let mut mask = full;
    let mut j = last;
    for t in (1..n).rev() {
        order[t] = j + 1;
        let p = parent[mask * m + j];
        mask ^= 1 << j;
        if p == u8::MAX {
            break;
        }
        j = p as usize;
    }
    Ok((total, order))
}

/// Held-Karp exact optimum: dynamic program over city subsets,
/// O(2^n n^2) time and O(2^n n) memory; n <= 22.
pub fn held_karp<S: Scalar>(inst: &TspInstance<S>) -> Result<ExactResult<S>> {
    let (_, order) = held_karp_dp(inst)?;
    Ok(ExactResult { tour: canonical_tour(inst, order), method: ExactMethod::HeldKarp })
}

/// Percentage excess of a method's length over the optimum:
/// `100 * (method_len - optimal_len) / optimal_len`.
///
/// A method length visibly below the optimum indicates an oracle bug and is
/// logged as a warning (small negatives are float noise and clamp to the
/// formula as-is).
pub fn optimality_gap<S: Scalar>(method_len: S, optimal_len: S) -> Result<S> {
    if optimal_len <= S::zero() {
        return Err(Error::InvalidArgument(format!("optimal length must be positive, got {optimal_len}")));
    }
    if method_len < optimal_len - S::from_f64_c(1e-9) {
        log::warn!("method length {method_len} is below the reported optimum {optimal_len}");
    }
    Ok(S::from_f64_c(100.0) * (method_len - optimal_len) / optimal_len)
}
