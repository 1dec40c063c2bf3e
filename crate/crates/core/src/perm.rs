//! Exact permutation and cyclic-shift algebra.
//!
//! Permutations are stored as index maps, never as dense 0/1 matrices:
//! `map[i] = j` means the matrix has its 1 in row i, column j. All products
//! and conjugations are done with modular index arithmetic in O(n); dense
//! matrix products appear only inside test oracles.
//!
//! The cyclic shift matrix V maps row i to column (i+1) mod n and is the
//! canonical Hamiltonian cycle 0 -> 1 -> ... -> n-1 -> 0. V^k is again a
//! Hamiltonian cycle exactly when gcd(k, n) = 1, so conjugating V^k by any
//! permutation P enumerates Hamiltonian cycles without ever producing an
//! invalid tour.

use crate::error::{Error, Result};
use crate::instances::TspInstance;
use crate::scalar::Scalar;

/// A permutation matrix as an index map: row `i` has its 1 in column `map[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermMatrix {
    map: Vec<usize>,
}

impl PermMatrix {
    /// Validate that `map` is a bijection on 0..n-1.
    pub fn new(map: Vec<usize>) -> Result<Self> {
        let n = map.len();
        let mut seen = vec![false; n];
        for &j in &map {
            if j >= n {
                return Err(Error::InvalidTour(format!("column {j} out of range 0..{n}")));
            }
            if seen[j] {
                return Err(Error::InvalidTour(format!("column {j} used twice: not a bijection")));
            }
            seen[j] = true;
        }
        Ok(PermMatrix { map })
    }

    pub fn identity(n: usize) -> Self {
        PermMatrix { map: (0..n).collect() }
    }

    /// The permutation assigning city `order[t]` to cycle slot `t`, i.e.
    /// `map[order[t]] = t`. Extracting the k=1 tour from it recovers `order`.
    pub fn from_tour_order(order: &[usize]) -> Result<Self> {
        let n = order.len();
        let mut map = vec![usize::MAX; n];
        for (t, &city) in order.iter().enumerate() {
            if city >= n {
                return Err(Error::InvalidTour(format!("city {city} out of range 0..{n}")));
            }
            if map[city] != usize::MAX {
                return Err(Error::InvalidTour(format!("city {city} visited twice")));
            }
            map[city] = t;
        }
        Ok(PermMatrix { map })
    }

    pub fn n(&self) -> usize {
        self.map.len()
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    /// Inverse permutation: `inverse()[map[i]] = i`.
    pub fn inverse(&self) -> PermMatrix {
        let mut inv = vec![0; self.map.len()];
        for (i, &j) in self.map.iter().enumerate() {
            inv[j] = i;
        }
        PermMatrix { map: inv }
    }
}

/// The cyclic shift matrix V^k on n elements: row i maps to column (i+k) mod n.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CyclicShift {
    pub n: usize,
    pub k: usize,
}

impl CyclicShift {
    /// Requires n >= 3 and k >= 1.
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidSize(n));
        }
        if k == 0 {
            return Err(Error::InvalidArgument("shift exponent k must be >= 1".into()));
        }
        Ok(CyclicShift { n, k })
    }

    /// True iff V^k is a single n-cycle, i.e. gcd(k, n) = 1.
    pub fn is_coprime(&self) -> bool {
        gcd(self.k, self.n) == 1
    }

    pub fn to_perm(&self) -> PermMatrix {
        PermMatrix { map: (0..self.n).map(|i| (i + self.k) % self.n).collect() }
    }
}

/// The permutation matrix of V^k: i maps to (i+k) mod n.
pub fn shift_matrix(n: usize, k: usize) -> Result<PermMatrix> {
    Ok(CyclicShift::new(n, k)?.to_perm())
}

/// True iff the functional graph of `p` is a single cycle through all n rows.
pub fn is_hamiltonian(p: &PermMatrix) -> bool {
    let n = p.n();
    if n == 0 {
        return false;
    }
    // The orbit of 0 under a bijection returns to 0; it covers everything
    // exactly when its length is n.
    let mut cur = p.map[0];
    let mut steps = 1;
    while cur != 0 {
        cur = p.map[cur];
        steps += 1;
    }
    steps == n
}

/// All k in 1..=n with gcd(k, n) = 1, ascending; the count is Euler's
/// totient of n.
pub fn coprime_shifts(n: usize) -> Vec<usize> {
    (1..=n).filter(|&k| gcd(k, n) == 1).collect()
}

pub fn gcd(a: usize, b: usize) -> usize {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// The permutation matrix of the product P V^k P^T.
///
/// Entry (a, b) of the product is 1 iff map[b] = (map[a] + k) mod n, so the
/// resulting index map is `a -> inverse(map)[(map[a] + k) mod n]`. The result
/// is a Hamiltonian cycle whenever gcd(k, n) = 1.
pub fn conjugate(p: &PermMatrix, shift: CyclicShift) -> Result<PermMatrix> {
    if p.n() != shift.n {
        return Err(Error::SizeMismatch(format!(
            "permutation has n = {}, shift has n = {}",
            p.n(),
            shift.n
        )));
    }
    let n = shift.n;
    let inv = p.inverse();
    let map = (0..n).map(|a| inv.map[(p.map[a] + shift.k) % n]).collect();
    Ok(PermMatrix { map })
}

/// City visit order of the Hamiltonian cycle P V^k P^T.
///
/// Reading P as an assignment of cities (rows) to cycle slots (columns), the
/// cycle visits slots 0, k, 2k, ... mod n; position t of the tour is the
/// city assigned to slot t*k: `order[t] = inverse(map)[(t*k) mod n]`.
pub fn extract_tour(p: &PermMatrix, k: usize) -> Result<Vec<usize>> {
    let n = p.n();
    let g = gcd(k, n);
    if g != 1 {
        return Err(Error::NonHamiltonianShift { n, k, gcd: g });
    }
    let inv = p.inverse();
    Ok((0..n).map(|t| inv.map[(t * k) % n]).collect())
}

/// Tour length of the cycle P V^k P^T: the matrix inner product of the
/// distance matrix with P V^k P^T. Equals `tour_length(extract_tour(p, k))`
/// bitwise, because it is computed that way.
pub fn cycle_objective<S: Scalar>(inst: &TspInstance<S>, p: &PermMatrix, k: usize) -> Result<S> {
    if inst.n() != p.n() {
        return Err(Error::SizeMismatch(format!(
            "instance has n = {}, permutation has n = {}",
            inst.n(),
            p.n()
        )));
    }
    let order = extract_tour(p, k)?;
    Ok(inst.cycle_sum(&order))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::generate_uniform;
    use proptest::prelude::*;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_perm(n: usize, seed: u64) -> PermMatrix {
        let mut map: Vec<usize> = (0..n).collect();
        map.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        PermMatrix::new(map).unwrap()
    }

    // Dense 0/1 oracle helpers, used only here.
    fn dense(p: &PermMatrix) -> Vec<Vec<f64>> {
        let n = p.n();
        let mut m = vec![vec![0.0; n]; n];
        for (i, &j) in p.map().iter().enumerate() {
            m[i][j] = 1.0;
        }
        m
    }

    fn matmul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
        let n = a.len();
        let mut c = vec![vec![0.0; n]; n];
        for i in 0..n {
            for k in 0..n {
                for j in 0..n {
                    c[i][j] += a[i][k] * b[k][j];
                }
            }
        }
        c
    }

    fn transpose(a: &[Vec<f64>]) -> Vec<Vec<f64>> {
        let n = a.len();
        let mut t = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in 0..n {
                t[j][i] = a[i][j];
            }
        }
        t
    }

    fn conjugate_dense(p: &PermMatrix, k: usize) -> Vec<Vec<f64>> {
        let v = dense(&shift_matrix(p.n(), k).unwrap());
        matmul(&matmul(&dense(p), &v), &transpose(&dense(p)))
    }

    #[test]
    fn shift_matrix_examples() {
        assert_eq!(shift_matrix(4, 1).unwrap().map(), &[1, 2, 3, 0]);
        assert_eq!(shift_matrix(4, 2).unwrap().map(), &[2, 3, 0, 1]);
        assert_eq!(shift_matrix(5, 3).unwrap().map(), &[3, 4, 0, 1, 2]);
        assert!(shift_matrix(2, 1).is_err());
        assert!(shift_matrix(5, 0).is_err());
    }

    #[test]
    fn hamiltonian_detection() {
        assert!(!is_hamiltonian(&PermMatrix::identity(5)));
        assert!(is_hamiltonian(&shift_matrix(6, 1).unwrap()));
        for k in 1..=6 {
            let expect = k == 1 || k == 5;
            assert_eq!(is_hamiltonian(&shift_matrix(6, k).unwrap()), expect, "n=6 k={k}");
        }
        // Two 2-cycles.
        assert!(!is_hamiltonian(&shift_matrix(4, 2).unwrap()));
    }

    #[test]
    fn coprime_shift_counts() {
        assert_eq!(coprime_shifts(20), vec![1, 3, 7, 9, 11, 13, 17, 19]);
        assert_eq!(coprime_shifts(50).len(), 20);
        assert_eq!(coprime_shifts(100).len(), 40);
    }

    #[test]
    fn conjugate_identity_gives_shift() {
        for k in [1, 2, 3] {
            let c = conjugate(&PermMatrix::identity(5), CyclicShift::new(5, k).unwrap()).unwrap();
            assert_eq!(c, shift_matrix(5, k).unwrap());
        }
    }

    #[test]
    fn conjugate_matches_explicit_product_3x3() {
        let p = PermMatrix::new(vec![2, 0, 1]).unwrap();
        let c = conjugate(&p, CyclicShift::new(3, 1).unwrap()).unwrap();
        let oracle = conjugate_dense(&p, 1);
        for (i, &j) in c.map().iter().enumerate() {
            assert_eq!(oracle[i][j], 1.0, "row {i}");
            assert_eq!(oracle[i].iter().sum::<f64>(), 1.0);
        }
    }

    #[test]
    fn conjugate_matches_explicit_product_random() {
        for seed in 0..20 {
            let n = 3 + (seed as usize % 7);
            let p = random_perm(n, seed);
            for k in coprime_shifts(n) {
                let c = conjugate(&p, CyclicShift::new(n, k).unwrap()).unwrap();
                let oracle = conjugate_dense(&p, k);
                for (i, &j) in c.map().iter().enumerate() {
                    assert_eq!(oracle[i][j], 1.0, "n={n} k={k} row {i}");
                }
            }
        }
    }

    #[test]
    fn conjugate_size_mismatch() {
        let p = PermMatrix::identity(4);
        assert!(conjugate(&p, CyclicShift::new(5, 1).unwrap()).is_err());
    }

    #[test]
    fn extract_tour_examples() {
        let id5 = PermMatrix::identity(5);
        assert_eq!(extract_tour(&id5, 1).unwrap(), vec![0, 1, 2, 3, 4]);
        assert_eq!(extract_tour(&id5, 3).unwrap(), vec![0, 3, 1, 4, 2]);
        assert!(matches!(
            extract_tour(&PermMatrix::identity(6), 2),
            Err(Error::NonHamiltonianShift { gcd: 2, .. })
        ));
    }

    #[test]
    fn cycle_objective_square() {
        let inst = TspInstance::from_coords(vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]).unwrap();
        let obj = cycle_objective(&inst, &PermMatrix::identity(4), 1).unwrap();
        assert_eq!(obj, 4.0);
    }

    #[test]
    fn cycle_objective_matches_dense_trace() {
        // trace(D^T (P V^k P^T)) with explicit dense products.
        let inst = generate_uniform::<f64>(9, 5, 1).unwrap().remove(0);
        for seed in 0..10 {
            let p = random_perm(9, 100 + seed);
            for k in coprime_shifts(9) {
                let m = conjugate_dense(&p, k);
                let mut tr = 0.0;
                for i in 0..9 {
                    for j in 0..9 {
                        tr += inst.dist()[(i, j)] * m[i][j];
                    }
                }
                let got = cycle_objective(&inst, &p, k).unwrap();
                assert!((got - tr).abs() <= 1e-12 * tr.max(1.0), "k={k}: {got} vs {tr}");
            }
        }
    }

    #[test]
    fn reversal_remark_even_n() {
        // V^1 and V^{n-1} traverse the same undirected cycle in opposite
        // orientations: the reversed k=1 tour is a rotation of the k=n-1 tour.
        for n in [4, 6, 8, 10] {
            let id = PermMatrix::identity(n);
            let fwd = extract_tour(&id, 1).unwrap();
            let bwd = extract_tour(&id, n - 1).unwrap();
            let mut rev = fwd.clone();
            rev.reverse();
            let pos = bwd.iter().position(|&c| c == rev[0]).unwrap();
            let rotated: Vec<usize> = (0..n).map(|t| bwd[(pos + t) % n]).collect();
            assert_eq!(rotated, rev, "n={n}");
        }
    }

    #[test]
    fn from_tour_order_roundtrip() {
        let order = vec![3, 0, 4, 1, 2];
        let p = PermMatrix::from_tour_order(&order).unwrap();
        assert_eq!(extract_tour(&p, 1).unwrap(), order);
    }

    #[test]
    fn tour_length_equals_inner_product_objective() {
        // For P built from a visit order, <D, P V P^T> is that tour's length,
        // bitwise, for every n in 3..12.
        for n in 3..12 {
            for seed in 0..5 {
                let inst = generate_uniform::<f64>(n, 900 + seed, 1).unwrap().remove(0);
                let order = extract_tour(&random_perm(n, seed * 31 + n as u64), 1).unwrap();
                let p = PermMatrix::from_tour_order(&order).unwrap();
                let obj = cycle_objective(&inst, &p, 1).unwrap();
                assert_eq!(obj, inst.tour_length(&order).unwrap(), "n={n} seed={seed}");
            }
        }
    }

    proptest! {
        #[test]
        fn conjugation_preserves_hamiltonicity(seed in 0u64..1000, n in 3usize..50) {
            let p = random_perm(n, seed);
            let ks = coprime_shifts(n);
            let k = ks[(seed as usize) % ks.len()];
            let c = conjugate(&p, CyclicShift::new(n, k).unwrap()).unwrap();
            prop_assert!(is_hamiltonian(&c));
        }

        #[test]
        fn objective_equals_extracted_tour_length(seed in 0u64..200, n in 3usize..20) {
            let inst = generate_uniform::<f64>(n, seed, 1).unwrap().remove(0);
            let p = random_perm(n, seed ^ 0xABCD);
            let ks = coprime_shifts(n);
            let k = ks[(seed as usize) % ks.len()];
            let order = extract_tour(&p, k).unwrap();
            let len = inst.tour_length(&order).unwrap();
            let obj = cycle_objective(&inst, &p, k).unwrap();
            // Exact: same edges summed in the same sequence.
            prop_assert_eq!(obj, len);
        }

        #[test]
        fn totient_matches_trial_counting(n in 3usize..200) {
            let independent = (1..=n).filter(|&k| {
                let (mut a, mut b) = (k, n);
                while b != 0 { let t = a % b; a = b; b = t; }
                a == 1
            }).count();
            prop_assert_eq!(coprime_shifts(n).len(), independent);
        }
    }
}
