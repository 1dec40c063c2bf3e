//! TSP instances: generation, evaluation, and a line-oriented text format.
//!
//! An instance is a set of n points in the unit square together with its
//! Euclidean distance matrix. The distance matrix is always recomputed from
//! the coordinates, never stored separately, so the two cannot drift apart.

use std::fs;
use std::path::Path;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Scalar;
use crate::seeding;

/// A Euclidean TSP instance: n cities in [0,1]^2 and their distance matrix.
#[derive(Debug, Clone)]
pub struct TspInstance<S> {
    n: usize,
    coords: Vec<[S; 2]>,
    dist: Matrix<S>,
}

impl<S: Scalar> TspInstance<S> {
    /// Build an instance from coordinates; requires n >= 3.
    pub fn from_coords(coords: Vec<[S; 2]>) -> Result<Self> {
        let n = coords.len();
        if n < 3 {
            return Err(Error::InvalidSize(n));
        }
        let mut dist = Matrix::zeros(n);
        for i in 0..n {
            for j in (i + 1)..n {
                let dx = coords[i][0] - coords[j][0];
                let dy = coords[i][1] - coords[j][1];
                let d = (dx * dx + dy * dy).sqrt();
                dist[(i, j)] = d;
                dist[(j, i)] = d;
            }
        }
        Ok(TspInstance { n, coords, dist })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coords(&self) -> &[[S; 2]] {
        &self.coords
    }

    /// Euclidean distance matrix (symmetric, zero diagonal).
    pub fn dist(&self) -> &Matrix<S> {
        &self.dist
    }

    /// Mean of all n*n distance-matrix entries (diagonal included).
    pub fn mean_dist(&self) -> S {
        let total: S = self.dist.as_slice().iter().copied().sum();
        total / S::from_usize(self.n * self.n).unwrap()
    }

    /// Closed-cycle length of `order`, including the wrap-around edge.
    ///
    /// `order` must be a permutation of 0..n-1.
    pub fn tour_length(&self, order: &[usize]) -> Result<S> {
        self.check_order(order)?;
        Ok(self.cycle_sum(order))
    }

    /// Build a [`Tour`] from a visit order, validating and measuring it.
    pub fn tour(&self, order: Vec<usize>) -> Result<Tour<S>> {
        let length = self.tour_length(&order)?;
        Ok(Tour { order, length })
    }

    /// Edge sum along `order` without validation. Callers guarantee `order`
    /// is a permutation; sums sequentially so equal orders give bitwise
    /// equal lengths.
    pub(crate) fn cycle_sum(&self, order: &[usize]) -> S {
        let n = order.len();
        let mut total = S::zero();
        for t in 0..n {
            total = total + self.dist[(order[t], order[(t + 1) % n])];
        }
        total
    }

    fn check_order(&self, order: &[usize]) -> Result<()> {
        if order.len() != self.n {
            return Err(Error::InvalidTour(format!(
                "order has {} cities, instance has {}",
                order.len(),
                self.n
            )));
        }
        let mut seen = vec![false; self.n];
        for &c in order {
            if c >= self.n {
                return Err(Error::InvalidTour(format!("city {c} out of range 0..{}", self.n)));
            }
            if seen[c] {
                return Err(Error::InvalidTour(format!("city {c} visited twice")));
            }
            seen[c] = true;
        }
        Ok(())
    }
}

/// A closed tour: visit order plus its measured cycle length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tour<S> {
    pub order: Vec<usize>,
    pub length: S,
}

impl<S: Scalar + Serialize> Tour<S> {
    /// Serialize as `{"order":[...],"length":...}`.
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }
}

impl<S: Scalar + for<'de> Deserialize<'de>> Tour<S> {
    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// Generate `count` instances of `n` uniform cities each.
///
/// Instance `i` draws its coordinates from a ChaCha8 stream seeded with
/// `seeding::derive(seed, i)`, so datasets are reproducible element-wise:
/// regenerating with the same (n, seed) yields instance i bit-identically
/// regardless of `count`.
pub fn generate_uniform<S: Scalar>(n: usize, seed: u64, count: usize) -> Result<Vec<TspInstance<S>>> {
    if n < 3 {
        return Err(Error::InvalidSize(n));
    }
    (0..count)
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seeding::derive(seed, i as u64));
            let coords = (0..n)
                .map(|_| {
                    let x = rng.gen::<f64>();
                    let y = rng.gen::<f64>();
                    [S::from_f64_c(x), S::from_f64_c(y)]
                })
                .collect();
            TspInstance::from_coords(coords)
        })
        .collect()
}

/// Render instances in the text format described in [`read_instances_str`].
pub fn write_instances_str<S: Scalar>(instances: &[TspInstance<S>]) -> String {
    let mut out = String::new();
    for (idx, inst) in instances.iter().enumerate() {
        if idx > 0 {
            out.push('\n');
        }
        out.push_str(&format!("tsp {}\n", inst.n()));
        for c in inst.coords() {
            out.push_str(&format!("{} {}\n", c[0], c[1]));
        }
    }
    out
}

pub fn write_instances<S: Scalar>(path: impl AsRef<Path>, instances: &[TspInstance<S>]) -> Result<()> {
    fs::write(path, write_instances_str(instances))?;
    Ok(())
}

/// Parse instances from text.
///
/// Format: a header line `tsp <n>`, then n lines `x y` with decimal
/// literals. A blank line separates instances; lines starting with `#` are
/// comments. Coordinates round-trip at full precision.
pub fn read_instances_str<S: Scalar>(input: &str) -> Result<Vec<TspInstance<S>>> {
    let mut instances = Vec::new();
    let mut lines = input.lines().enumerate().peekable();

    loop {
        // Skip blank and comment lines between instances.
        while let Some((_, l)) = lines.peek() {
            let t = l.trim();
            if t.is_empty() || t.starts_with('#') {
                lines.next();
            } else {
                break;
            }
        }
        let Some((lineno, header)) = lines.next() else { break };
        let header_line = lineno + 1;
        let mut parts = header.trim().split_whitespace();
        match parts.next() {
            Some("tsp") => {}
            Some(other) => {
                return Err(Error::Parse {
                    line: header_line,
                    msg: format!("expected header `tsp <n>`, found token `{other}`"),
                })
            }
            None => unreachable!("blank lines were skipped"),
        }
        let n: usize = match parts.next() {
            Some(tok) => tok.parse().map_err(|_| Error::Parse {
                line: header_line,
                msg: format!("city count token `{tok}` is not a positive integer"),
            })?,
            None => {
                return Err(Error::Parse { line: header_line, msg: "header `tsp` missing city count".into() })
            }
        };
        if let Some(extra) = parts.next() {
            return Err(Error::Parse {
                line: header_line,
                msg: format!("unexpected token `{extra}` after city count"),
            });
        }
        if n < 3 {
            return Err(Error::InvalidSize(n));
        }

        let mut coords = Vec::with_capacity(n);
        while coords.len() < n {
            let Some((lineno, l)) = lines.next() else {
                return Err(Error::Parse {
                    line: header_line,
                    msg: format!("instance declares {n} cities but input ended after {}", coords.len()),
                });
            };
            let line = lineno + 1;
            let t = l.trim();
            if t.starts_with('#') {
                continue;
            }
            if t.is_empty() {
                return Err(Error::Parse {
                    line,
                    msg: format!("blank line inside instance: expected {n} coordinate lines, got {}", coords.len()),
                });
            }
            let mut toks = t.split_whitespace();
            let x = parse_coord::<S>(toks.next(), line, 1)?;
            let y = parse_coord::<S>(toks.next(), line, 2)?;
            if let Some(extra) = toks.next() {
                return Err(Error::Parse { line, msg: format!("unexpected token `{extra}` (field 3)") });
            }
            coords.push([x, y]);
        }
        instances.push(TspInstance::from_coords(coords)?);
    }
    Ok(instances)
}

pub fn read_instances<S: Scalar>(path: impl AsRef<Path>) -> Result<Vec<TspInstance<S>>> {
    let text = fs::read_to_string(path)?;
    read_instances_str(&text)
}

fn parse_coord<S: Scalar>(tok: Option<&str>, line: usize, field: usize) -> Result<S> {
    let tok = tok.ok_or_else(|| Error::Parse { line, msg: format!("missing coordinate (field {field})") })?;
    tok.parse::<S>().map_err(|_| Error::Parse {
        line,
        msg: format!("non-numeric token `{tok}` (field {field})"),
    })
}
