//! Classical construction heuristics: greedy nearest neighbor (single and
//! all starts), farthest insertion, beam search over partial tours, and a
//! Christofides variant with greedy matching.
//!
//! Every tie is broken index-ascending so batch results are reproducible.

use crate::error::{Error, Result};
use crate::instances::{Tour, TspInstance};
use crate::scalar::Scalar;

/// Which baseline to run; carries the beam width where applicable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaselineKind {
    /// Nearest neighbor from a fixed start city.
    Nn { start: usize },
    /// Best nearest-neighbor tour over all n start cities.
    NnAllStarts,
    FarthestInsertion,
    Beam { width: usize },
    /// Christofides with greedy (not exact) odd-vertex matching.
    ChristofidesApprox,
}

impl BaselineKind {
    pub fn run<S: Scalar>(&self, inst: &TspInstance<S>) -> Result<Tour<S>> {
        match *self {
            BaselineKind::Nn { start } => nearest_neighbor(inst, start),
            BaselineKind::NnAllStarts => Ok(nn_all_starts(inst)),
            BaselineKind::FarthestInsertion => Ok(farthest_insertion(inst)),
            BaselineKind::Beam { width } => beam_search(inst, width),
            BaselineKind::ChristofidesApprox => christofides_approx(inst).map(|r| r.tour),
        }
    }
}

/// Greedy tour from `start`: repeatedly visit the nearest unvisited city,
/// ties to the smallest index.
pub fn nearest_neighbor<S: Scalar>(inst: &TspInstance<S>, start: usize) -> Result<Tour<S>> {
    let n = inst.n();
    if start >= n {
        return Err(Error::InvalidArgument(format!("start city {start} out of range 0..{n}")));
    }
    let d = inst.dist();
    let mut order = Vec::with_capacity(n);
    let mut visited = vec![false; n];
    order.push(start);
    visited[start] = true;
    let mut cur = start;
    for _ in 1..n {
        let mut best = S::infinity();
        let mut best_c = usize::MAX;
        for c in 0..n {
            if !visited[c] && d[(cur, c)] < best {
                best = d[(cur, c)];
                best_c = c;
            }
        }
        visited[best_c] = true;
        order.push(best_c);
        cur = best_c;
    }
    let length = inst.cycle_sum(&order);
    Ok(Tour { order, length })
}

/// Shortest nearest-neighbor tour over all start cities; ties keep the
/// smallest start.
pub fn nn_all_starts<S: Scalar>(inst: &TspInstance<S>) -> Tour<S> {
    let mut best: Option<Tour<S>> = None;
    for start in 0..inst.n() {
        let t = nearest_neighbor(inst, start).expect("start in range");
        if best.as_ref().map_or(true, |b| t.length < b.length) {
            best = Some(t);
        }
    }
    best.expect("n >= 3")
}

/// Farthest insertion: seed with the two mutually farthest cities, then
/// repeatedly take the unvisited city farthest from the partial tour
/// (max over min distance to tour cities) and insert it where it increases
/// the cycle length least.
pub fn farthest_insertion<S: Scalar>(inst: &TspInstance<S>) -> Tour<S> {
    let n = inst.n();
    let d = inst.dist();

    let (mut sa, mut sb, mut far) = (0usize, 1usize, S::neg_infinity());
    for i in 0..n {
        for j in (i + 1)..n {
            if d[(i, j)] > far {
                far = d[(i, j)];
                sa = i;
                sb = j;
            }
        }
    }

    let mut order = vec![sa, sb];
    let mut in_tour = vec![false; n];
    in_tour[sa] = true;
    in_tour[sb] = true;
    // min distance from each outside city to the current tour
    let mut min_dist: Vec<S> = (0..n).map(|c| d[(c, sa)].min(d[(c, sb)])).collect();

    while order.len() < n {
        let mut pick = usize::MAX;
        let mut pick_d = S::neg_infinity();
        for c in 0..n {
            if !in_tour[c] && min_dist[c] > pick_d {
                pick_d = min_dist[c];
                pick = c;
            }
        }

        let len = order.len();
        let mut best_pos = 0;
        let mut best_inc = S::infinity();
        for p in 0..len {
            let (u, v) = (order[p], order[(p + 1) % len]);
            let inc = d[(u, pick)] + d[(pick, v)] - d[(u, v)];
            if inc < best_inc {
                best_inc = inc;
                best_pos = p;
            }
        }
        order.insert(best_pos + 1, pick);
        in_tour[pick] = true;
        for c in 0..n {
            if !in_tour[c] {
                min_dist[c] = min_dist[c].min(d[(c, pick)]);
            }
        }
    }
    let length = inst.cycle_sum(&order);
    Tour { order, length }
}

const BEAM_MAX_N: usize = 128;

/// Beam search over partial tours from city 0.
///
/// A state is (visited set, last city, partial length). At each depth every
/// state is extended by every unvisited city; states with equal (visited,
/// last) keep only the shortest, and the `width` states of lowest partial
/// length survive. The answer is the best completed cycle. `width = 1`
/// degenerates to nearest neighbor from city 0; a width covering the whole
/// state space is exact. Wider beams help on average but a single instance
/// can get worse when a widening evicts a prefix that would have completed
/// well (the usual beam-search anomaly).
pub fn beam_search<S: Scalar>(inst: &TspInstance<S>, width: usize) -> Result<Tour<S>> {
    let n = inst.n();
    if width == 0 {
        return Err(Error::InvalidArgument("beam width must be >= 1".into()));
    }
    if n > BEAM_MAX_N {
        return Err(Error::SizeLimit(format!("beam search handles n <= {BEAM_MAX_N}, got {n}")));
    }
    let d = inst.dist();

    #[derive(Clone)]
    struct State<S> {
        visited: u128,
        last: u32,
        len: S,
        parent: u32,
    }

    // (last, parent) per kept state per depth, for path reconstruction.
    let mut trail: Vec<Vec<(u32, u32)>> = Vec::with_capacity(n);
    let mut beam = vec![State { visited: 1u128, last: 0, len: S::zero(), parent: u32::MAX }];
    trail.push(vec![(0, u32::MAX)]);

    for _depth in 1..n {
        let mut cands: Vec<State<S>> = Vec::with_capacity(beam.len() * n);
        for (pi, s) in beam.iter().enumerate() {
            for c in 0..n {
                if s.visited & (1u128 << c) == 0 {
                    cands.push(State {
                        visited: s.visited | (1u128 << c),
                        last: c as u32,
                        len: s.len + d[(s.last as usize, c)],
                        parent: pi as u32,
                    });
                }
            }
        }
        // Keep the shortest candidate per (visited, last) state.
        cands.sort_unstable_by(|a, b| {
            (a.visited, a.last)
                .cmp(&(b.visited, b.last))
                .then(a.len.partial_cmp(&b.len).expect("finite lengths"))
                .then(a.parent.cmp(&b.parent))
        });
        cands.dedup_by_key(|s| (s.visited, s.last));
        // Survivors: lowest partial length, ties by last city then parent.
        cands.sort_unstable_by(|a, b| {
            a.len
                .partial_cmp(&b.len)
                .expect("finite lengths")
                .then(a.last.cmp(&b.last))
                .then(a.parent.cmp(&b.parent))
        });
        cands.truncate(width);
        trail.push(cands.iter().map(|s| (s.last, s.parent)).collect());
        beam = cands;
    }

    let mut best_total = S::infinity();
    let mut best_idx = usize::MAX;
    for (i, s) in beam.iter().enumerate() {
        let total = s.len + d[(s.last as usize, 0)];
        if total < best_total {
            best_total = total;
            best_idx = i;
        }
    }

    let mut order = vec![0usize; n];
    let mut idx = best_idx as u32;
    for depth in (0..n).rev() {
        let (last, parent) = trail[depth][idx as usize];
        order[depth] = last as usize;
        idx = parent;
    }
    let length = inst.cycle_sum(&order);
    Ok(Tour { order, length })
}

/// Exact odd sets beyond this would make the brute-force matching explode.
const EXACT_MATCHING_MAX_ODD: usize = 16;

/// How Christofides pairs up the odd-degree MST vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatchingStrategy {
    /// Shortest-edge-first greedy matching.
    Greedy,
    /// Brute-force minimum-weight perfect matching; odd sets up to 16.
    ExactSmall,
}

/// Christofides output; `approximate_matching` is true unless the exact
/// matching strategy was used.
#[derive(Debug, Clone)]
pub struct ChristofidesResult<S> {
    pub tour: Tour<S>,
    pub approximate_matching: bool,
}

/// Christofides with greedy shortest-edge matching on the odd-degree
/// vertices (exact blossom matching is out of scope): Prim MST, matching,
/// Hierholzer Eulerian circuit, shortcut repeated vertices.
pub fn christofides_approx<S: Scalar>(inst: &TspInstance<S>) -> Result<ChristofidesResult<S>> {
    christofides_with_matching(inst, MatchingStrategy::Greedy)
}

pub fn christofides_with_matching<S: Scalar>(
    inst: &TspInstance<S>,
    strategy: MatchingStrategy,
) -> Result<ChristofidesResult<S>> {
    let n = inst.n();
    let d = inst.dist();

    // Prim MST from city 0.
    let mut in_tree = vec![false; n];
    let mut best_edge = vec![(S::infinity(), usize::MAX); n];
    let mut mst_edges: Vec<(usize, usize)> = Vec::with_capacity(n - 1);
    in_tree[0] = true;
    for c in 1..n {
        best_edge[c] = (d[(0, c)], 0);
    }
    for _ in 1..n {
        let mut pick = usize::MAX;
        let mut pick_d = S::infinity();
        for c in 0..n {
            if !in_tree[c] && best_edge[c].0 < pick_d {
                pick_d = best_edge[c].0;
                pick = c;
            }
        }
        in_tree[pick] = true;
        mst_edges.push((best_edge[pick].1, pick));
        for c in 0..n {
            if !in_tree[c] && d[(pick, c)] < best_edge[c].0 {
                best_edge[c] = (d[(pick, c)], pick);
            }
        }
    }

    let mut degree = vec![0usize; n];
    for &(u, v) in &mst_edges {
        degree[u] += 1;
        degree[v] += 1;
    }
    let odd: Vec<usize> = (0..n).filter(|&v| degree[v] % 2 == 1).collect();
    // Handshake lemma: odd-degree vertices come in pairs.
    assert!(odd.len() % 2 == 0, "odd-degree vertex count must be even");

    let matching = match strategy {
        MatchingStrategy::Greedy => greedy_matching(inst, &odd),
        MatchingStrategy::ExactSmall => {
            if odd.len() > EXACT_MATCHING_MAX_ODD {
                return Err(Error::SizeLimit(format!(
                    "exact matching handles up to {EXACT_MATCHING_MAX_ODD} odd vertices, got {}",
                    odd.len()
                )));
            }
            exact_matching(inst, &odd)
        }
    };

    // Multigraph adjacency: MST edges plus matching edges, every edge once.
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    let mut edge_used = Vec::new();
    for &(u, v) in mst_edges.iter().chain(matching.iter()) {
        let id = edge_used.len();
        edge_used.push(false);
        adj[u].push((v, id));
        adj[v].push((u, id));
    }

    // Hierholzer: every vertex has even degree, the graph is connected.
    let mut circuit = Vec::with_capacity(edge_used.len() + 1);
    let mut stack = vec![0usize];
    let mut next_edge = vec![0usize; n];
    while let Some(&v) = stack.last() {
        let mut advanced = false;
        while next_edge[v] < adj[v].len() {
            let (to, id) = adj[v][next_edge[v]];
            next_edge[v] += 1;
            if !edge_used[id] {
                edge_used[id] = true;
                stack.push(to);
                advanced = true;
                break;
            }
        }
        if !advanced {
            circuit.push(v);
            stack.pop();
        }
    }

    // Shortcut repeats: keep first occurrences.
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for &v in &circuit {
        if !seen[v] {
            seen[v] = true;
            order.push(v);
        }
    }
    debug_assert_eq!(order.len(), n);

    let length = inst.cycle_sum(&order);
    Ok(ChristofidesResult {
        tour: Tour { order, length },
        approximate_matching: matches!(strategy, MatchingStrategy::Greedy),
    })
}

fn greedy_matching<S: Scalar>(inst: &TspInstance<S>, odd: &[usize]) -> Vec<(usize, usize)> {
    let d = inst.dist();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for (a, &u) in odd.iter().enumerate() {
        for &v in &odd[a + 1..] {
            pairs.push((u, v));
        }
    }
    pairs.sort_by(|&(a, b), &(c, e)| {
        d[(a, b)].partial_cmp(&d[(c, e)]).expect("finite").then((a, b).cmp(&(c, e)))
    });
    let mut matched = vec![false; inst.n()];
    let mut matching = Vec::with_capacity(odd.len() / 2);
    for (u, v) in pairs {
        if !matched[u] && !matched[v] {
            matched[u] = true;
            matched[v] = true;
            matching.push((u, v));
        }
    }
    matching
}

/// Minimum-weight perfect matching by recursion on the first unmatched
/// vertex; exponential, test-sized odd sets only.
fn exact_matching<S: Scalar>(inst: &TspInstance<S>, odd: &[usize]) -> Vec<(usize, usize)> {
    fn go<S: Scalar>(
        inst: &TspInstance<S>,
        odd: &[usize],
        taken: &mut [bool],
        current: &mut Vec<(usize, usize)>,
        cost: S,
        best_cost: &mut S,
        best: &mut Vec<(usize, usize)>,
    ) {
        let Some(first) = (0..odd.len()).find(|&i| !taken[i]) else {
            if cost < *best_cost {
                *best_cost = cost;
                *best = current.clone();
            }
            return;
        };
        if cost >= *best_cost {
            return;
        }
        taken[first] = true;
        for j in (first + 1)..odd.len() {
            if taken[j] {
                continue;
            }
            taken[j] = true;
            current.push((odd[first], odd[j]));
            go(inst, odd, taken, current, cost + inst.dist()[(odd[first], odd[j])], best_cost, best);
            current.pop();
            taken[j] = false;
        }
        taken[first] = false;
    }

    let mut best = Vec::new();
    let mut best_cost = S::infinity();
    let mut taken = vec![false; odd.len()];
    go(inst, odd, &mut taken, &mut Vec::new(), S::zero(), &mut best_cost, &mut best);
    best
}
