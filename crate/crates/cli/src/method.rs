//! Method strings accepted by `solve` and `sweep`.

use std::fmt;
use std::str::FromStr;

/// A solving method: the relaxation solver (single shift, budgeted or full
/// ensemble), a classical baseline, or the exact oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// `solver:kK` — gradient solver on the single shift V^K.
    Solver { k: usize },
    /// `ensemble` / `ensemble:mM` — instance-wise minimum over coprime
    /// shifts, all of them or the first M.
    Ensemble { m: Option<usize> },
    /// `nn` — greedy nearest neighbor from city 0.
    Nn,
    /// `nn_all` — best nearest-neighbor tour over all start cities.
    NnAll,
    /// `farthest` — farthest insertion.
    Farthest,
    /// `beam:wW` — beam search with width W.
    Beam { width: usize },
    /// `christofides` — MST + greedy matching + Euler shortcut.
    Christofides,
    /// `exact` — Held-Karp optimum (n <= 22).
    Exact,
}

impl Method {
    pub fn uses_solver_config(&self) -> bool {
        matches!(self, Method::Solver { .. } | Method::Ensemble { .. })
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Solver { k } => write!(f, "solver:k{k}"),
            Method::Ensemble { m: None } => write!(f, "ensemble"),
            Method::Ensemble { m: Some(m) } => write!(f, "ensemble:m{m}"),
            Method::Nn => write!(f, "nn"),
            Method::NnAll => write!(f, "nn_all"),
            Method::Farthest => write!(f, "farthest"),
            Method::Beam { width } => write!(f, "beam:w{width}"),
            Method::Christofides => write!(f, "christofides"),
            Method::Exact => write!(f, "exact"),
        }
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parse_suffix = |rest: &str, prefix: char| -> Result<usize, String> {
            let digits = rest
                .strip_prefix(prefix)
                .ok_or_else(|| format!("expected `{prefix}<number>`, got `{rest}`"))?;
            digits.parse::<usize>().map_err(|_| format!("`{digits}` is not a positive integer"))
        };
        match s {
            "nn" => Ok(Method::Nn),
            "nn_all" => Ok(Method::NnAll),
            "farthest" => Ok(Method::Farthest),
            "christofides" => Ok(Method::Christofides),
            "exact" => Ok(Method::Exact),
            "ensemble" => Ok(Method::Ensemble { m: None }),
            other => {
                if let Some(rest) = other.strip_prefix("solver:") {
                    let k = parse_suffix(rest, 'k')?;
                    if k == 0 {
                        return Err("shift exponent k must be >= 1".into());
                    }
                    Ok(Method::Solver { k })
                } else if let Some(rest) = other.strip_prefix("ensemble:") {
                    let m = parse_suffix(rest, 'm')?;
                    if m == 0 {
                        return Err("ensemble budget m must be >= 1".into());
                    }
                    Ok(Method::Ensemble { m: Some(m) })
                } else if let Some(rest) = other.strip_prefix("beam:") {
                    let width = parse_suffix(rest, 'w')?;
                    if width == 0 {
                        return Err("beam width must be >= 1".into());
                    }
                    Ok(Method::Beam { width })
                } else {
                    Err(format!(
                        "unknown method `{other}`; expected one of solver:kK, ensemble, ensemble:mM, nn, nn_all, farthest, beam:wW, christofides, exact"
                    ))
                }
            }
        }
    }
}
