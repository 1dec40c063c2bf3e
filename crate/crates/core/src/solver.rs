//! Per-instance gradient optimization of the relaxed tour objective for a
//! fixed cyclic shift V^k, with Adam, linear warmup, global-norm gradient
//! clipping, early stopping on decoded length, and independent Gumbel-noise
//! restarts; plus the ensemble over all coprime shifts with instance-wise
//! minimum selection.
//!
//! Every decode goes through the Hungarian algorithm and the similarity
//! transform, so the returned tour is a valid Hamiltonian cycle for any
//! configuration, including a step budget of zero.

use rayon::prelude::*;

use crate::assign::decode;
use crate::error::{Error, Result};
use crate::instances::{Tour, TspInstance};
use crate::matrix::Matrix;
use crate::perm::{coprime_shifts, extract_tour, gcd};
use crate::scalar::Scalar;
use crate::seeding;
use crate::sinkhorn::{gumbel_sample, loss_and_grad, AdjKernel, Logits};

/// All knobs of a per-instance solve. `s = None` means the kernel scale is
/// set per instance to twice the mean distance-matrix entry.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig<S> {
    pub tau: S,
    pub gamma: S,
    pub alpha: S,
    pub s: Option<S>,
    /// Sinkhorn iterations per forward pass.
    pub iters: usize,
    /// Gradient-step budget per restart.
    pub steps: usize,
    pub lr: S,
    pub weight_decay: S,
    pub warmup_steps: usize,
    pub clip_norm: S,
    /// Early stop after this many steps without decoded-length improvement.
    pub patience: usize,
    /// Decode (and check improvement) every this many steps.
    pub decode_every: usize,
    pub restarts: usize,
    pub seed: u64,
}

impl<S: Scalar> Default for SolverConfig<S> {
    fn default() -> Self {
        SolverConfig {
            tau: S::from_f64_c(3.0),
            gamma: S::from_f64_c(0.05),
            alpha: S::from_f64_c(10.0),
            s: None,
            iters: 60,
            steps: 600,
            lr: S::from_f64_c(0.1),
            weight_decay: S::from_f64_c(1e-4),
            warmup_steps: 15,
            clip_norm: S::from_f64_c(1.0),
            patience: 50,
            decode_every: 10,
            restarts: 4,
            seed: 0,
        }
    }
}

impl<S: Scalar> SolverConfig<S> {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidConfig(msg.into()));
        if self.tau <= S::zero() {
            return bad("tau must be > 0");
        }
        if self.gamma < S::zero() {
            return bad("gamma must be >= 0");
        }
        if self.alpha <= S::zero() {
            return bad("alpha must be > 0");
        }
        if let Some(s) = self.s {
            if s <= S::zero() {
                return bad("s must be > 0 (or auto)");
            }
        }
        if self.iters == 0 {
            return bad("iters must be >= 1");
        }
        if self.lr < S::zero() {
            return bad("lr must be >= 0");
        }
        if self.weight_decay < S::zero() {
            return bad("weight_decay must be >= 0");
        }
        if self.clip_norm <= S::zero() {
            return bad("clip_norm must be > 0");
        }
        if self.patience > self.steps {
            return bad("patience must be <= steps");
        }
        if self.decode_every == 0 {
            return bad("decode_every must be >= 1");
        }
        if self.restarts == 0 {
            return bad("restarts must be >= 1");
        }
        Ok(())
    }

    /// Parse a flat `key=value` config file; every key is optional and
    /// missing keys take their defaults. `#` starts a comment line,
    /// `s=auto` selects the per-instance kernel scale.
    pub fn from_config_str(text: &str) -> Result<Self> {
        let mut cfg = SolverConfig::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let lineno = idx + 1;
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::Parse { line: lineno, msg: format!("expected key=value, got `{line}`") });
            };
            let key = key.trim();
            let value = value.trim();
            let scalar = |v: &str| -> Result<S> {
                v.parse::<S>()
                    .map_err(|_| Error::Parse { line: lineno, msg: format!("non-numeric value `{v}` for `{key}`") })
            };
            let integer = |v: &str| -> Result<usize> {
                v.parse::<usize>()
                    .map_err(|_| Error::Parse { line: lineno, msg: format!("non-integer value `{v}` for `{key}`") })
            };
            match key {
                "tau" => cfg.tau = scalar(value)?,
                "gamma" => cfg.gamma = scalar(value)?,
                "alpha" => cfg.alpha = scalar(value)?,
                "s" => cfg.s = if value == "auto" { None } else { Some(scalar(value)?) },
                "iters" => cfg.iters = integer(value)?,
                "steps" => cfg.steps = integer(value)?,
                "lr" => cfg.lr = scalar(value)?,
                "weight_decay" => cfg.weight_decay = scalar(value)?,
                "warmup_steps" => cfg.warmup_steps = integer(value)?,
                "clip_norm" => cfg.clip_norm = scalar(value)?,
                "patience" => cfg.patience = integer(value)?,
                "decode_every" => cfg.decode_every = integer(value)?,
                "restarts" => cfg.restarts = integer(value)?,
                "seed" => {
                    cfg.seed = value.parse::<u64>().map_err(|_| Error::Parse {
                        line: lineno,
                        msg: format!("non-integer value `{value}` for `seed`"),
                    })?
                }
                other => {
                    return Err(Error::Parse { line: lineno, msg: format!("unknown config key `{other}`") })
                }
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Render as the `key=value` file format accepted by
    /// [`SolverConfig::from_config_str`].
    pub fn to_config_string(&self) -> String {
        let s = match self.s {
            Some(v) => format!("{v}"),
            None => "auto".into(),
        };
        format!(
            "tau={}\ngamma={}\nalpha={}\ns={}\niters={}\nsteps={}\nlr={}\nweight_decay={}\nwarmup_steps={}\nclip_norm={}\npatience={}\ndecode_every={}\nrestarts={}\nseed={}\n",
            self.tau,
            self.gamma,
            self.alpha,
            s,
            self.iters,
            self.steps,
            self.lr,
            self.weight_decay,
            self.warmup_steps,
            self.clip_norm,
            self.patience,
            self.decode_every,
            self.restarts,
            self.seed
        )
    }
}

/// Outcome of a solve: the decoded tour, the shift it came from, the loss
/// trace of the winning restart, and which restart won.
#[derive(Debug, Clone)]
pub struct SolveResult<S> {
    pub tour: Tour<S>,
    pub k: usize,
    pub loss_trace: Vec<S>,
    pub decoded_length: S,
    pub restart_index: usize,
}

struct Adam<S> {
    m: Vec<S>,
    v: Vec<S>,
    t: i32,
    beta1: S,
    beta2: S,
    eps: S,
}

impl<S: Scalar> Adam<S> {
    fn new(len: usize) -> Self {
        Adam {
            m: vec![S::zero(); len],
            v: vec![S::zero(); len],
            t: 0,
            beta1: S::from_f64_c(0.9),
            beta2: S::from_f64_c(0.999),
            eps: S::from_f64_c(1e-8),
        }
    }

    /// One step with L2 weight decay folded into the gradient.
    fn step(&mut self, theta: &mut [S], grad: &[S], lr: S, weight_decay: S) {
        self.t += 1;
        let bc1 = S::one() - self.beta1.powi(self.t);
        let bc2 = S::one() - self.beta2.powi(self.t);
        for ((th, &g), (m, v)) in
            theta.iter_mut().zip(grad).zip(self.m.iter_mut().zip(self.v.iter_mut()))
        {
            let g = g + weight_decay * *th;
            *m = self.beta1 * *m + (S::one() - self.beta1) * g;
            *v = self.beta2 * *v + (S::one() - self.beta2) * g * g;
            let m_hat = *m / bc1;
            let v_hat = *v / bc2;
            *th = *th - lr * m_hat / (v_hat.sqrt() + self.eps);
        }
    }
}

fn clip_global_norm<S: Scalar>(grad: &mut Matrix<S>, max_norm: S) {
    let sq: S = grad.as_slice().iter().map(|&g| g * g).sum();
    let norm = sq.sqrt();
    if norm > max_norm {
        let scale = max_norm / norm;
        for g in grad.as_mut_slice() {
            *g = *g * scale;
        }
    }
}

struct RestartOutcome<S> {
    tour: Tour<S>,
    trace: Vec<S>,
}

/// One restart: fresh Gumbel noise, Adam from the kernel initialization,
/// periodic Hungarian decodes, early stop on stale decoded length.
fn run_restart<S: Scalar>(
    inst: &TspInstance<S>,
    k: usize,
    cfg: &SolverConfig<S>,
    raw0: &Matrix<S>,
    noise_seed: u64,
) -> Result<RestartOutcome<S>> {
    let n = inst.n();
    let noise = gumbel_sample::<S>(n, noise_seed);
    let mut lg = Logits::new(raw0.clone(), cfg.alpha, noise, cfg.gamma, cfg.tau, cfg.iters)?;

    let decode_tour = |lg: &Logits<S>| -> Result<Tour<S>> {
        let p = decode(lg)?;
        let order = extract_tour(&p, k)?;
        Ok(Tour { length: inst.cycle_sum(&order), order })
    };

    let mut best = decode_tour(&lg)?;
    let mut last_improvement = 0usize;
    let mut adam = Adam::new(n * n);
    let mut trace = Vec::with_capacity(cfg.steps);

    for step in 1..=cfg.steps {
        let (value, mut grad) = loss_and_grad(inst, &lg, k)?;
        if !value.is_finite() || !grad.is_finite() {
            return Err(Error::SolveFailed(format!("non-finite loss at step {step}")));
        }
        trace.push(value);

        clip_global_norm(&mut grad, cfg.clip_norm);
        let warmup = if cfg.warmup_steps == 0 {
            S::one()
        } else {
            (S::from_usize(step).unwrap() / S::from_usize(cfg.warmup_steps).unwrap()).min(S::one())
        };
        adam.step(lg.raw_mut().as_mut_slice(), grad.as_slice(), cfg.lr * warmup, cfg.weight_decay);

        if step % cfg.decode_every == 0 || step == cfg.steps {
            let t = decode_tour(&lg)?;
            if t.length < best.length {
                best = t;
                last_improvement = step;
            } else if step - last_improvement >= cfg.patience {
                break;
            }
        }
    }
    Ok(RestartOutcome { tour: best, trace })
}

/// Optimize the relaxed objective for one fixed shift V^k and return the
/// best Hungarian-decoded tour across restarts.
///
/// Restart r uses noise seed `derive(derive(seed, k), r)`, so results are
/// deterministic and independent of how many other shifts are run. A
/// restart that produces a non-finite loss is skipped with a warning;
/// the call fails only if every restart fails.
pub fn solve_single<S: Scalar>(inst: &TspInstance<S>, k: usize, cfg: &SolverConfig<S>) -> Result<SolveResult<S>> {
    cfg.validate()?;
    let n = inst.n();
    let g = gcd(k, n);
    if g != 1 {
        return Err(Error::NonHamiltonianShift { n, k, gcd: g });
    }

    let s = cfg.s.unwrap_or_else(|| S::from_f64_c(2.0) * inst.mean_dist());
    let kernel = AdjKernel::from_instance(inst, s)?;
    let raw0 = kernel.log();

    let shift_seed = seeding::derive(cfg.seed, k as u64);
    let mut best: Option<SolveResult<S>> = None;
    let mut failures = Vec::new();
    for r in 0..cfg.restarts {
        match run_restart(inst, k, cfg, &raw0, seeding::derive(shift_seed, r as u64)) {
            Ok(out) => {
                if best.as_ref().map_or(true, |b| out.tour.length < b.decoded_length) {
                    best = Some(SolveResult {
                        decoded_length: out.tour.length,
                        tour: out.tour,
                        k,
                        loss_trace: out.trace,
                        restart_index: r,
                    });
                }
            }
            Err(e) => {
                log::warn!("restart {r} of shift k={k} failed: {e}");
                failures.push(format!("restart {r}: {e}"));
            }
        }
    }
    best.ok_or_else(|| Error::SolveFailed(format!("all {} restarts failed: {}", cfg.restarts, failures.join("; "))))
}

/// Ensemble over the first `m` coprime shifts (ascending k): runs
/// [`solve_single`] per member and keeps the instance-wise minimum decoded
/// length, ties to the smaller k. Members run in parallel; a failed member
/// is skipped with a warning as long as one succeeds.
pub fn solve_with_shift_budget<S: Scalar>(
    inst: &TspInstance<S>,
    cfg: &SolverConfig<S>,
    m: usize,
) -> Result<SolveResult<S>> {
    cfg.validate()?;
    let shifts = coprime_shifts(inst.n());
    if m == 0 || m > shifts.len() {
        return Err(Error::InvalidArgument(format!(
            "shift budget {m} out of range 1..={} (phi({}))",
            shifts.len(),
            inst.n()
        )));
    }
    let members: Vec<Result<SolveResult<S>>> =
        shifts[..m].par_iter().map(|&k| solve_single(inst, k, cfg)).collect();

    let mut best: Option<SolveResult<S>> = None;
    let mut errors = Vec::new();
    for (idx, res) in members.into_iter().enumerate() {
        match res {
            Ok(r) => {
                if best.as_ref().map_or(true, |b| r.decoded_length < b.decoded_length) {
                    best = Some(r);
                }
            }
            Err(e) => {
                log::warn!("ensemble member k={} failed: {e}", shifts[idx]);
                errors.push(format!("k={}: {e}", shifts[idx]));
            }
        }
    }
    best.ok_or_else(|| Error::SolveFailed(format!("all ensemble members failed: {}", errors.join("; "))))
}

/// Full ensemble: every k coprime with n, instance-wise minimum.
pub fn solve_ensemble<S: Scalar>(inst: &TspInstance<S>, cfg: &SolverConfig<S>) -> Result<SolveResult<S>> {
    let phi = coprime_shifts(inst.n()).len();
    solve_with_shift_budget(inst, cfg, phi)
}
