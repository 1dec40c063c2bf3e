//! Exact minimum-cost linear assignment, used to decode hard permutations
//! from logits.
//!
//! The solver is the O(n^3) augmenting-path (Jonker-Volgenant style)
//! formulation with dual potentials. Among equal-cost optima the returned
//! map is canonicalized to the lexicographically smallest one: the optimal
//! duals certify which edges can appear in *any* optimal assignment (zero
//! reduced cost), and a greedy row-by-row rematch over that tight subgraph
//! picks the smallest feasible column per row.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::perm::PermMatrix;
use crate::scalar::Scalar;
use crate::sinkhorn::Logits;

/// Square assignment cost matrix; all entries finite.
#[derive(Debug, Clone)]
pub struct CostMatrix<S> {
    c: Matrix<S>,
}

impl<S: Scalar> CostMatrix<S> {
    pub fn new(c: Matrix<S>) -> Result<Self> {
        if !c.is_finite() {
            return Err(Error::NonFinite("assignment cost matrix".into()));
        }
        Ok(CostMatrix { c })
    }

    pub fn n(&self) -> usize {
        self.c.n()
    }

    pub fn matrix(&self) -> &Matrix<S> {
        &self.c
    }
}

/// Minimum-cost assignment of rows to columns: returns the permutation
/// minimizing `sum_i c[i][map[i]]`; deterministic, and among optimal
/// assignments the lexicographically smallest map.
pub fn hungarian<S: Scalar>(cost: &CostMatrix<S>) -> PermMatrix {
    let n = cost.n();
    if n == 0 {
        return PermMatrix::identity(0);
    }
    let c = &cost.c;
    let inf = S::infinity();

    // row_of[j]: row currently matched to column j; column n is virtual.
    let mut u = vec![S::zero(); n];
    let mut v = vec![S::zero(); n + 1];
    let mut row_of = vec![usize::MAX; n + 1];
    let mut way = vec![0usize; n + 1];

    for i in 0..n {
        row_of[n] = i;
        let mut j0 = n;
        let mut minv = vec![inf; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = row_of[j0];
            let mut delta = inf;
            let mut j1 = n;
            for j in 0..n {
                if !used[j] {
                    let cur = c[(i0, j)] - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[row_of[j]] = u[row_of[j]] + delta;
                    v[j] = v[j] - delta;
                } else {
                    minv[j] = minv[j] - delta;
                }
            }
            j0 = j1;
            if row_of[j0] == usize::MAX {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            row_of[j0] = row_of[j1];
            j0 = j1;
            if j0 == n {
                break;
            }
        }
    }

    let mut map = vec![0usize; n];
    for j in 0..n {
        map[row_of[j]] = j;
    }
    canonicalize_lex(c, &u, &v, &mut map);
    PermMatrix::new(map).expect("assignment is a bijection")
}

/// Rewrites `map` into the lexicographically smallest optimal assignment.
///
/// Complementary slackness: every optimal assignment lives in the subgraph
/// of edges with zero reduced cost w.r.t. the optimal duals (u, v). Row by
/// row, take the smallest tight column that still leaves the remaining rows
/// perfectly matchable inside that subgraph.
fn canonicalize_lex<S: Scalar>(c: &Matrix<S>, u: &[S], v: &[S], map: &mut [usize]) {
    let n = c.n();
    // Tolerance for "zero" reduced cost: exact for integer-valued inputs,
    // and far above the rounding floor of f64 sums for generic inputs.
    let scale = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .fold(S::one(), |m, (i, j)| m.max(c[(i, j)].abs()));
    let tol = scale * S::from_f64_c(1e-9);

    let tight: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..n).filter(|&j| (c[(i, j)] - u[i] - v[j]).abs() <= tol).collect())
        .collect();

    let mut row_of = vec![usize::MAX; n];
    for (i, &j) in map.iter().enumerate() {
        row_of[j] = i;
    }
    let mut col_fixed = vec![false; n];

    for i in 0..n {
        let current = map[i];
        for &j in &tight[i] {
            if j >= current {
                break;
            }
            if col_fixed[j] {
                continue;
            }
            // Tentatively give column j to row i; its present owner must
            // rematch toward the column freed by row i.
            let displaced = row_of[j];
            row_of[current] = usize::MAX;
            row_of[j] = i;
            let mut visited = vec![false; n];
            visited[j] = true;
            if rematch(&tight, &col_fixed, &mut row_of, &mut visited, map, displaced) {
                map[i] = j;
                break;
            }
            row_of[j] = displaced;
            row_of[current] = i;
        }
        col_fixed[map[i]] = true;
    }
}

/// Kuhn augmenting step inside the tight subgraph: find row `r` a new
/// column, displacing others recursively toward the one free column.
fn rematch(
    tight: &[Vec<usize>],
    col_fixed: &[bool],
    row_of: &mut [usize],
    visited: &mut [bool],
    map: &mut [usize],
    r: usize,
) -> bool {
    for &j in &tight[r] {
        if visited[j] || col_fixed[j] {
            continue;
        }
        visited[j] = true;
        let owner = row_of[j];
        if owner == usize::MAX || rematch(tight, col_fixed, row_of, visited, map, owner) {
            row_of[j] = r;
            map[r] = j;
            return true;
        }
    }
    false
}

/// Hard permutation from logits: Hungarian on the cost `-(F + gamma*eps)/tau`,
/// i.e. the assignment maximizing the noisy scaled logits.
pub fn decode<S: Scalar>(lg: &Logits<S>) -> Result<PermMatrix> {
    let cost = CostMatrix::new(lg.sinkhorn_input().map(|v| -v))?;
    Ok(hungarian(&cost))
}
