//! Implementations of the CLI subcommands.

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;

use gstsp::baselines::{beam_search, christofides_approx, farthest_insertion, nearest_neighbor, nn_all_starts};
use gstsp::instances::{generate_uniform, write_instances, TspInstance};
use gstsp::oracle::{held_karp, optimality_gap};
use gstsp::perm::coprime_shifts;
use gstsp::seeding;
use gstsp::solver::{solve_ensemble, solve_single, solve_with_shift_budget, SolverConfig};

use crate::error::{CliError, CliResult};
use crate::method::Method;
use crate::report::{dataset_fingerprint, version_string, GapKind, Record, RunReport, SCHEMA_VERSION};
use crate::stats::{aggregate, ecdf, histogram, Aggregate};

/// Where the per-instance gap column comes from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GapsMode {
    /// Held-Karp oracle when every instance has n <= 22, otherwise no gaps.
    Auto,
    Off,
    /// Relative gaps against the per-instance lengths of a reference report.
    Ref(PathBuf),
}

impl FromStr for GapsMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "auto" => Ok(GapsMode::Auto),
            "off" => Ok(GapsMode::Off),
            other => match other.strip_prefix("ref:") {
                Some(path) if !path.is_empty() => Ok(GapsMode::Ref(PathBuf::from(path))),
                _ => Err(format!("expected `auto`, `off` or `ref:<report.json>`, got `{other}`")),
            },
        }
    }
}

pub struct SolveOpts {
    pub instances: PathBuf,
    pub method: Method,
    pub config: Option<PathBuf>,
    pub seed: Option<u64>,
    pub out: PathBuf,
    pub gaps: GapsMode,
    pub timing: bool,
}

fn load_instances(path: &Path) -> CliResult<(Vec<TspInstance<f64>>, String)> {
    let bytes = fs::read(path)
        .map_err(|e| CliError::runtime(format!("reading {}: {e}", path.display())))?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| CliError::runtime(format!("{} is not valid UTF-8", path.display())))?;
    let instances = gstsp::instances::read_instances_str::<f64>(&text)
        .map_err(|e| CliError::runtime(format!("{}: {e}", path.display())))?;
    if instances.is_empty() {
        return Err(CliError::runtime(format!("{} contains no instances", path.display())));
    }
    Ok((instances, dataset_fingerprint(&bytes)))
}

fn load_config(path: Option<&Path>) -> CliResult<SolverConfig<f64>> {
    match path {
        None => Ok(SolverConfig::default()),
        Some(p) => {
            let text = fs::read_to_string(p)
                .map_err(|e| CliError::runtime(format!("reading {}: {e}", p.display())))?;
            SolverConfig::from_config_str(&text)
                .map_err(|e| CliError::runtime(format!("{}: {e}", p.display())))
        }
    }
}

fn uniform_n(instances: &[TspInstance<f64>]) -> Option<usize> {
    let n = instances[0].n();
    instances.iter().all(|i| i.n() == n).then_some(n)
}

/// Generate a uniform dataset and write it in the instance text format.
pub fn cmd_generate(n: usize, count: usize, seed: u64, out: &Path) -> CliResult<()> {
    if count == 0 {
        return Err(CliError::usage("count must be >= 1"));
    }
    let instances = generate_uniform::<f64>(n, seed, count)
        .map_err(|e| CliError::usage(e.to_string()))?;
    write_instances(out, &instances).map_err(|e| CliError::runtime(e.to_string()))?;
    println!("wrote {count} instances of n={n} (seed {seed}) to {}", out.display());
    Ok(())
}

/// Instance `idx` of a batch solve uses seed `derive(cfg.seed, idx)`, so
/// per-instance results do not depend on batch size or order.
fn run_method(
    inst: &TspInstance<f64>,
    idx: usize,
    method: Method,
    cfg: &SolverConfig<f64>,
) -> gstsp::Result<(f64, Option<usize>, Option<usize>)> {
    let solver_cfg = || SolverConfig { seed: seeding::derive(cfg.seed, idx as u64), ..cfg.clone() };
    match method {
        Method::Solver { k } => {
            let r = solve_single(inst, k, &solver_cfg())?;
            Ok((r.decoded_length, Some(r.k), Some(r.restart_index)))
        }
        Method::Ensemble { m } => {
            let r = match m {
                Some(m) => solve_with_shift_budget(inst, &solver_cfg(), m)?,
                None => solve_ensemble(inst, &solver_cfg())?,
            };
            Ok((r.decoded_length, Some(r.k), Some(r.restart_index)))
        }
        Method::Nn => Ok((nearest_neighbor(inst, 0)?.length, None, None)),
        Method::NnAll => Ok((nn_all_starts(inst).length, None, None)),
        Method::Farthest => Ok((farthest_insertion(inst).length, None, None)),
        Method::Beam { width } => Ok((beam_search(inst, width)?.length, None, None)),
        Method::Christofides => Ok((christofides_approx(inst)?.tour.length, None, None)),
        Method::Exact => Ok((held_karp(inst)?.tour.length, None, None)),
    }
}

/// Run a method over every instance, attach gaps, write the JSON report and
/// per-instance CSV, and print the aggregate table row.
pub fn cmd_solve(o: &SolveOpts) -> CliResult<RunReport> {
    let (instances, hash) = load_instances(&o.instances)?;
    let mut cfg = load_config(o.config.as_deref())?;
    if let Some(seed) = o.seed {
        cfg.seed = seed;
    }

    let runs: Vec<gstsp::Result<(f64, Option<usize>, Option<usize>, f64)>> = instances
        .par_iter()
        .enumerate()
        .map(|(idx, inst)| {
            let t0 = Instant::now();
            run_method(inst, idx, o.method, &cfg)
                .map(|(len, k, r)| (len, k, r, t0.elapsed().as_secs_f64() * 1e3))
        })
        .collect();

    let mut lengths = Vec::with_capacity(instances.len());
    let mut records = Vec::with_capacity(instances.len());
    for (id, run) in runs.into_iter().enumerate() {
        let (length, k_star, restart_index, wall_ms) =
            run.map_err(|e| CliError::runtime(format!("instance {id}: {e}")))?;
        lengths.push(length);
        records.push(Record {
            id,
            length,
            gap: None,
            wall_ms: if o.timing { wall_ms } else { 0.0 },
            k_star,
            restart_index,
        });
    }

    let gap_kind = attach_gaps(&instances, &mut records, o.method, &o.gaps)?;
    let gaps: Vec<f64> = records.iter().filter_map(|r| r.gap).collect();
    let gap_aggregate = (gaps.len() == records.len()).then(|| aggregate(&gaps));

    let report = RunReport {
        schema: SCHEMA_VERSION,
        version: version_string(),
        method: o.method.to_string(),
        instances_path: o.instances.display().to_string(),
        instances_hash: hash,
        n: uniform_n(&instances),
        count: instances.len(),
        seed: cfg.seed,
        config: o.method.uses_solver_config().then(|| cfg.to_config_string()),
        gap_kind,
        records,
        aggregate: aggregate(&lengths),
        gap_aggregate,
    };

    report.write_json(o.out.with_extension("json"))?;
    report.write_csv(o.out.with_extension("csv"))?;
    println!("{}", report.table_row());
    Ok(report)
}

fn attach_gaps(
    instances: &[TspInstance<f64>],
    records: &mut [Record],
    method: Method,
    mode: &GapsMode,
) -> CliResult<GapKind> {
    match mode {
        GapsMode::Off => Ok(GapKind::None),
        GapsMode::Auto => {
            if method == Method::Exact {
                for r in records.iter_mut() {
                    r.gap = Some(0.0);
                }
                return Ok(GapKind::Exact);
            }
            if instances.iter().any(|i| i.n() > 22) {
                log::info!("instances exceed the oracle cap (n > 22); no gaps computed");
                return Ok(GapKind::None);
            }
            let optima: Vec<gstsp::Result<f64>> =
                instances.par_iter().map(|i| held_karp(i).map(|r| r.tour.length)).collect();
            for (r, opt) in records.iter_mut().zip(optima) {
                let opt = opt.map_err(|e| CliError::runtime(e.to_string()))?;
                r.gap = Some(optimality_gap(r.length, opt).map_err(|e| CliError::runtime(e.to_string()))?);
            }
            Ok(GapKind::Exact)
        }
        GapsMode::Ref(path) => {
            let reference = RunReport::read_json(path)?;
            if reference.count != records.len() {
                return Err(CliError::runtime(format!(
                    "reference report has {} records, this run has {}",
                    reference.count,
                    records.len()
                )));
            }
            for (r, refrec) in records.iter_mut().zip(&reference.records) {
                if refrec.length <= 0.0 {
                    return Err(CliError::runtime(format!(
                        "reference length for instance {} is not positive",
                        refrec.id
                    )));
                }
                r.gap = Some(100.0 * (r.length - refrec.length) / refrec.length);
            }
            Ok(GapKind::Relative)
        }
    }
}

pub struct SweepOpts {
    pub instances: PathBuf,
    pub grid: PathBuf,
    pub config: Option<PathBuf>,
    pub method: Method,
    pub seed: Option<u64>,
    pub out: PathBuf,
}

#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct SweepCell {
    pub tau: f64,
    pub gamma: f64,
    pub mean: f64,
    pub std: f64,
}

#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct SweepReport {
    pub schema: u32,
    pub version: String,
    pub method: String,
    pub instances_path: String,
    pub instances_hash: String,
    pub count: usize,
    pub seed: u64,
    pub base_config: String,
    pub cells: Vec<SweepCell>,
    pub best: SweepCell,
}

/// Parse a grid file: `tau = a, b, ...` and `gamma = a, b, ...` lines.
fn parse_grid(text: &str) -> CliResult<(Vec<f64>, Vec<f64>)> {
    let mut taus = Vec::new();
    let mut gammas = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let lineno = idx + 1;
        let Some((key, values)) = line.split_once('=') else {
            return Err(CliError::runtime(format!("grid line {lineno}: expected key = v1, v2, ...")));
        };
        let parsed: Result<Vec<f64>, _> =
            values.split(',').map(|tok| tok.trim().parse::<f64>()).collect();
        let parsed = parsed
            .map_err(|_| CliError::runtime(format!("grid line {lineno}: non-numeric value in list")))?;
        match key.trim() {
            "tau" => taus = parsed,
            "gamma" => gammas = parsed,
            other => return Err(CliError::runtime(format!("grid line {lineno}: unknown key `{other}`"))),
        }
    }
    if taus.is_empty() || gammas.is_empty() {
        return Err(CliError::runtime("empty grid: need at least one tau and one gamma"));
    }
    Ok((taus, gammas))
}

/// Evaluate the solver over the (tau, gamma) grid and select the cell with
/// the lowest mean decoded length.
pub fn cmd_sweep(o: &SweepOpts) -> CliResult<SweepReport> {
    if !o.method.uses_solver_config() {
        return Err(CliError::usage(format!("sweep requires a solver method, got `{}`", o.method)));
    }
    let (instances, hash) = load_instances(&o.instances)?;
    let grid_text = fs::read_to_string(&o.grid)
        .map_err(|e| CliError::runtime(format!("reading {}: {e}", o.grid.display())))?;
    let (taus, gammas) = parse_grid(&grid_text)?;
    let mut base = load_config(o.config.as_deref())?;
    if let Some(seed) = o.seed {
        base.seed = seed;
    }

    let mut cells = Vec::with_capacity(taus.len() * gammas.len());
    for &tau in &taus {
        for &gamma in &gammas {
            let cfg = SolverConfig { tau, gamma, ..base.clone() };
            cfg.validate().map_err(|e| CliError::runtime(e.to_string()))?;
            let lengths: Vec<f64> = instances
                .par_iter()
                .enumerate()
                .map(|(idx, inst)| {
                    run_method(inst, idx, o.method, &cfg).map(|(len, _, _)| len)
                })
                .collect::<gstsp::Result<_>>()
                .map_err(|e| CliError::runtime(e.to_string()))?;
            let agg = aggregate(&lengths);
            println!("tau={tau} gamma={gamma}: mean {:.4} std {:.4}", agg.mean, agg.std);
            cells.push(SweepCell { tau, gamma, mean: agg.mean, std: agg.std });
        }
    }

    let best = cells
        .iter()
        .min_by(|a, b| a.mean.partial_cmp(&b.mean).expect("finite means"))
        .expect("grid non-empty")
        .clone();
    println!("best: tau={} gamma={} mean {:.4}", best.tau, best.gamma, best.mean);

    let report = SweepReport {
        schema: SCHEMA_VERSION,
        version: version_string(),
        method: o.method.to_string(),
        instances_path: o.instances.display().to_string(),
        instances_hash: hash,
        count: instances.len(),
        seed: base.seed,
        base_config: base.to_config_string(),
        cells,
        best,
    };
    let json = serde_json::to_string_pretty(&report).map_err(|e| CliError::runtime(e.to_string()))?;
    fs::write(o.out.with_extension("json"), json + "\n")
        .map_err(|e| CliError::runtime(e.to_string()))?;
    let mut csv = String::from("tau,gamma,mean,std\n");
    for c in &report.cells {
        csv.push_str(&format!("{},{},{},{}\n", c.tau, c.gamma, c.mean, c.std));
    }
    fs::write(o.out.with_extension("csv"), csv).map_err(|e| CliError::runtime(e.to_string()))?;
    Ok(report)
}

pub struct ShiftCurveOpts {
    pub instances: PathBuf,
    pub config: Option<PathBuf>,
    pub seed: Option<u64>,
    pub out: PathBuf,
}

/// Mean decoded length as a function of the shift budget m = 1..phi(n).
///
/// Every (instance, shift) member is solved once; the curve takes prefix
/// minima per instance, which matches `solve_with_shift_budget` (member
/// seeds do not depend on the budget).
pub fn cmd_shift_curve(o: &ShiftCurveOpts) -> CliResult<Vec<(usize, f64)>> {
    let (instances, _) = load_instances(&o.instances)?;
    let Some(n) = uniform_n(&instances) else {
        return Err(CliError::runtime("shift-curve needs instances sharing one n"));
    };
    let mut cfg = load_config(o.config.as_deref())?;
    if let Some(seed) = o.seed {
        cfg.seed = seed;
    }
    let shifts = coprime_shifts(n);

    // member_lengths[i][j]: decoded length of shift shifts[j] on instance i.
    let member_lengths: Vec<Vec<f64>> = instances
        .par_iter()
        .enumerate()
        .map(|(idx, inst)| {
            let cfg_i = SolverConfig { seed: seeding::derive(cfg.seed, idx as u64), ..cfg.clone() };
            shifts
                .iter()
                .map(|&k| solve_single(inst, k, &cfg_i).map(|r| r.decoded_length))
                .collect::<gstsp::Result<Vec<f64>>>()
        })
        .collect::<gstsp::Result<_>>()
        .map_err(|e| CliError::runtime(e.to_string()))?;

    let mut curve = Vec::with_capacity(shifts.len());
    for m in 1..=shifts.len() {
        let mean = member_lengths
            .iter()
            .map(|lens| lens[..m].iter().copied().fold(f64::INFINITY, f64::min))
            .sum::<f64>()
            / instances.len() as f64;
        curve.push((m, mean));
    }
    for w in curve.windows(2) {
        if w[1].1 > w[0].1 + 1e-12 {
            return Err(CliError::runtime(format!(
                "shift curve not monotone: m={} mean {} > m={} mean {}",
                w[1].0, w[1].1, w[0].0, w[0].1
            )));
        }
    }

    let mut csv = String::from("m,mean_length\n");
    for &(m, mean) in &curve {
        csv.push_str(&format!("{m},{mean}\n"));
        println!("m={m}: mean {mean:.4}");
    }
    fs::write(&o.out, csv).map_err(|e| CliError::runtime(e.to_string()))?;
    Ok(curve)
}

/// Histogram, five-number summary and ECDF per method from paired reports.
pub fn cmd_distribution(reports: &[PathBuf], out: &Path, bins: usize) -> CliResult<()> {
    if reports.is_empty() {
        return Err(CliError::usage("need at least one report"));
    }
    if bins == 0 {
        return Err(CliError::usage("bins must be >= 1"));
    }
    let loaded: Vec<RunReport> = reports.iter().map(RunReport::read_json).collect::<CliResult<_>>()?;
    let first = &loaded[0];
    for r in &loaded[1..] {
        if r.instances_hash != first.instances_hash || r.count != first.count {
            return Err(CliError::runtime(format!(
                "reports are not paired: `{}` and `{}` ran on different instance sets",
                first.method, r.method
            )));
        }
    }

    let all: Vec<f64> = loaded.iter().flat_map(|r| r.records.iter().map(|x| x.length)).collect();
    let lo = all.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = all.iter().copied().fold(f64::NEG_INFINITY, f64::max);

    let mut hist_csv = String::from("method,bin_lo,bin_hi,count\n");
    let mut summary_csv = String::from("method,min,p25,median,p75,max\n");
    let mut cdf_csv = String::from("method,length,fraction\n");
    for r in &loaded {
        let lengths: Vec<f64> = r.records.iter().map(|x| x.length).collect();
        for (blo, bhi, c) in histogram(&lengths, lo, hi, bins) {
            hist_csv.push_str(&format!("{},{blo},{bhi},{c}\n", r.method));
        }
        let a: Aggregate = aggregate(&lengths);
        summary_csv.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.method, a.min, a.p25, a.median, a.p75, a.max
        ));
        for (v, f) in ecdf(&lengths) {
            cdf_csv.push_str(&format!("{},{v},{f}\n", r.method));
        }
        println!("{}", r.table_row());
    }

    let write = |suffix: &str, content: &str| -> CliResult<()> {
        let path = out_with_suffix(out, suffix);
        fs::write(&path, content)
            .map_err(|e| CliError::runtime(format!("writing {}: {e}", path.display())))
    };
    write("hist.csv", &hist_csv)?;
    write("summary.csv", &summary_csv)?;
    write("cdf.csv", &cdf_csv)?;
    Ok(())
}

fn out_with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut name = prefix.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    if !name.is_empty() {
        name.push('_');
    }
    name.push_str(suffix);
    prefix.with_file_name(name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        let (t, g) = parse_grid("tau = 2.0, 3.0\ngamma = 0.05\n# c\n").unwrap();
        assert_eq!(t, vec![2.0, 3.0]);
        assert_eq!(g, vec![0.05]);
        assert!(parse_grid("tau = 2.0\n").is_err());
        assert!(parse_grid("tau = a\ngamma = 0.1\n").is_err());
        assert!(parse_grid("").is_err());

        // The published sweep shape: 4 taus x 6 gammas = 24 cells.
        let (t, g) = parse_grid(
            "tau = 2.0, 3.0, 4.0, 5.0\ngamma = 0.005, 0.01, 0.05, 0.1, 0.2, 0.3\n",
        )
        .unwrap();
        assert_eq!(t.len() * g.len(), 24);
    }

    #[test]
    fn gaps_mode_parsing() {
        assert_eq!("auto".parse::<GapsMode>().unwrap(), GapsMode::Auto);
        assert_eq!("off".parse::<GapsMode>().unwrap(), GapsMode::Off);
        assert_eq!("ref:r.json".parse::<GapsMode>().unwrap(), GapsMode::Ref(PathBuf::from("r.json")));
        assert!("ref:".parse::<GapsMode>().is_err());
        assert!("bogus".parse::<GapsMode>().is_err());
    }

    #[test]
    fn out_suffix_naming() {
        assert_eq!(out_with_suffix(Path::new("d/plot"), "hist.csv"), PathBuf::from("d/plot_hist.csv"));
    }
}
