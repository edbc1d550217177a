use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::seq::index::sample;
use rand::seq::SliceRandom;
use rayon::prelude::*;

use super::{SweepResult, SweepRow};
use crate::coloring::{color_edges, Color, ColorPattern, VertexColoring};
use crate::error::{Error, Result};
use crate::graph::{gen_gnp, gen_layered, Vertex};
use crate::ham::{brute_hamilton, posa_solve, validate_cycle, RotationParams, BRUTE_CAP};
use crate::inversion::{
    count_inversions, first_moment_bound, greedy_layer_probs, greedy_low_inversion, GreedyParams,
};
use crate::ordered::{ordered_layer_probs, solve_ordered, validate_order, OrderedParams};
use crate::pattern::{
    coupling_monotonicity, find_patterned, CouplingParams, PatternProblem, SearchMode, DEFAULT_NODE_BUDGET,
    PATTERN_EXACT_CAP,
};
use crate::rng::{derive_seed, stream};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExperimentKind {
    Hamiltonicity,
    EdgePattern,
    VertexPattern,
    Ordered,
    GreedyInversion,
    Coupling,
    FirstMoment,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 7] = [
        ExperimentKind::Hamiltonicity,
        ExperimentKind::EdgePattern,
        ExperimentKind::VertexPattern,
        ExperimentKind::Ordered,
        ExperimentKind::GreedyInversion,
        ExperimentKind::Coupling,
        ExperimentKind::FirstMoment,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Hamiltonicity => "hamiltonicity",
            ExperimentKind::EdgePattern => "edge-pattern",
            ExperimentKind::VertexPattern => "vertex-pattern",
            ExperimentKind::Ordered => "ordered",
            ExperimentKind::GreedyInversion => "greedy-inversion",
            ExperimentKind::Coupling => "coupling",
            ExperimentKind::FirstMoment => "first-moment",
        }
    }

    /// What the grid ranges over.
    pub fn grid_meaning(self) -> &'static str {
        match self {
            ExperimentKind::GreedyInversion => "M",
            ExperimentKind::Coupling => "t",
            _ => "p",
        }
    }

    /// Accepted `--params` keys.
    pub fn param_keys(self) -> &'static [&'static str] {
        match self {
            ExperimentKind::Hamiltonicity => &["solver"],
            ExperimentKind::EdgePattern => &["k", "alpha", "beta", "pattern", "pattern_seed", "mode", "budget"],
            ExperimentKind::VertexPattern => &["k", "pattern", "pattern_seed", "mode", "budget"],
            ExperimentKind::Ordered => &["s0", "omega"],
            ExperimentKind::GreedyInversion => &["p", "u_target"],
            ExperimentKind::Coupling => &["p", "k", "alpha", "beta_p", "pattern", "pattern_seed"],
            ExperimentKind::FirstMoment => &["m"],
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ExperimentKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = ExperimentKind::ALL.iter().map(|k| k.name()).collect();
                Error::invalid(format!("unknown experiment `{s}`; expected one of {}", names.join(", ")))
            })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub kind: ExperimentKind,
    pub n: usize,
    pub grid: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    pub params: BTreeMap<String, String>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.grid.is_empty() {
            return Err(Error::invalid("the grid is empty"));
        }
        if self.grid.iter().any(|x| !x.is_finite()) || self.grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("the grid must be finite and strictly increasing"));
        }
        if self.trials == 0 {
            return Err(Error::invalid("trials must be at least 1"));
        }
        if self.n < 3 {
            return Err(Error::invalid("n must be at least 3"));
        }
        let allowed = self.kind.param_keys();
        if let Some(k) = self.params.keys().find(|k| !allowed.contains(&k.as_str())) {
            return Err(Error::invalid(format!(
                "unknown parameter `{k}` for {}; accepted: {}",
                self.kind,
                allowed.join(", ")
            )));
        }
        Ok(())
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        match self.params.get(key) {
            None => Ok(None),
            Some(s) => s
                .parse()
                .map(Some)
                .map_err(|_| Error::invalid(format!("cannot parse parameter {key}={s}"))),
        }
    }

    fn get_or<T: FromStr>(&self, key: &str, default: T) -> Result<T> {
        Ok(self.get(key)?.unwrap_or(default))
    }

    fn list<T: FromStr>(&self, key: &str) -> Result<Option<Vec<T>>> {
        match self.params.get(key) {
            None => Ok(None),
            Some(s) => s
                .split(',')
                .map(|x| {
                    x.trim()
                        .parse()
                        .map_err(|_| Error::invalid(format!("cannot parse `{x}` in {key}={s}")))
                })
                .collect::<Result<Vec<T>>>()
                .map(Some),
        }
    }
}

/// Parses `lo:hi:step` (inclusive of `hi` up to rounding) or a comma list.
pub fn parse_grid(s: &str) -> Result<Vec<f64>> {
    let num = |x: &str| {
        x.trim()
            .parse::<f64>()
            .map_err(|_| Error::invalid(format!("cannot parse grid value `{x}`")))
    };
    let grid: Vec<f64> = if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::invalid("a range grid has the form lo:hi:step"));
        }
        let (lo, hi, step) = (num(parts[0])?, num(parts[1])?, num(parts[2])?);
        if !(step > 0.0) || !lo.is_finite() || !hi.is_finite() || hi < lo {
            return Err(Error::invalid("need lo <= hi and step > 0"));
        }
        let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
        (0..count).map(|i| round12(lo + i as f64 * step)).collect()
    } else {
        s.split(',').map(num).collect::<Result<_>>()?
    };
    if grid.is_empty() || grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("the grid must be non-empty and strictly increasing"));
    }
    Ok(grid)
}

// Removes floating-point noise from accumulated steps.
fn round12(x: f64) -> f64 {
    format!("{x:.12e}").parse().unwrap_or(x)
}

#[derive(Clone, Copy, Debug, Default)]
struct Outcome {
    success: bool,
    error: bool,
    stat: Option<f64>,
}

impl Outcome {
    fn of(success: bool) -> Outcome {
        Outcome {
            success,
            ..Default::default()
        }
    }

    fn failed() -> Outcome {
        Outcome {
            error: true,
            ..Default::default()
        }
    }
}

fn balanced(n: usize, k: usize) -> Vec<usize> {
    (0..k).map(|i| n / k + usize::from(i < n % k)).collect()
}

/// Colors and pattern shared by all trials of a pattern sweep.
fn sweep_pattern(spec: &SweepSpec, k: u32, counts: Option<&[usize]>) -> Result<ColorPattern> {
    if let Some(seq) = spec.list::<Color>("pattern")? {
        return ColorPattern::new(seq);
    }
    let pseed = spec.get_or("pattern_seed", derive_seed(spec.seed, "sweep-pattern", 0))?;
    match counts {
        None => Ok(ColorPattern::random(spec.n, k, pseed)),
        Some(counts) => {
            let mut seq: Vec<Color> = counts
                .iter()
                .enumerate()
                .flat_map(|(i, &c)| std::iter::repeat_n(i as Color + 1, c))
                .collect();
            seq.shuffle(&mut stream(pseed, "pattern", 0));
            ColorPattern::new(seq)
        }
    }
}

fn search_mode(spec: &SweepSpec) -> Result<SearchMode> {
    let budget = spec.get_or("budget", DEFAULT_NODE_BUDGET)?;
    let default = if spec.n <= PATTERN_EXACT_CAP { "exact" } else { "heuristic" };
    match spec.params.get("mode").map_or(default, String::as_str) {
        "exact" => Ok(SearchMode::Exact),
        "heuristic" => Ok(SearchMode::Heuristic { node_budget: budget }),
        other => Err(Error::invalid(format!("mode must be exact or heuristic, got {other}"))),
    }
}

fn alpha_of(spec: &SweepSpec, k: usize) -> Result<Vec<f64>> {
    Ok(spec.list("alpha")?.unwrap_or_else(|| vec![1.0 / k as f64; k]))
}

/// Runs `trials` independent trials per grid point. Trial `i` at point `j`
/// draws its instance from a seed derived from `(seed, j, i)` and its solver
/// randomness from a second derived seed. Successes are counted only after
/// an independent check of the returned object; solver errors count as
/// failures and are also tallied in `errors`.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    spec.validate()?;
    if spec.kind == ExperimentKind::Coupling {
        return run_coupling(spec);
    }
    let trial_fn = trial_runner(spec)?;
    let mut rows = Vec::with_capacity(spec.grid.len());
    for (j, &x) in spec.grid.iter().enumerate() {
        let outcomes: Vec<Outcome> = (0..spec.trials as u64)
            .into_par_iter()
            .map(|i| {
                let key = (j as u64) << 32 | i;
                let inst = derive_seed(spec.seed, "sweep-instance", key);
                let solve = derive_seed(spec.seed, "sweep-solve", key);
                trial_fn(x, inst, solve)
            })
            .collect();
        let stats: Vec<f64> = outcomes.iter().filter_map(|o| o.stat).collect();
        rows.push(SweepRow {
            point: x,
            trials: spec.trials,
            successes: outcomes.iter().filter(|o| o.success).count(),
            stat: if stats.is_empty() {
                0.0
            } else {
                stats.iter().sum::<f64>() / stats.len() as f64
            },
            errors: outcomes.iter().filter(|o| o.error).count(),
        });
    }
    Ok(SweepResult { rows })
}

type TrialFn = Box<dyn Fn(f64, u64, u64) -> Outcome + Sync + Send>;

fn check_p(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::invalid(format!("grid value {p} is not a probability")))
    }
}

fn trial_runner(spec: &SweepSpec) -> Result<TrialFn> {
    let n = spec.n;
    let rotation = RotationParams::default();
    if spec.kind.grid_meaning() == "p" {
        spec.grid.iter().try_for_each(|&p| check_p(p))?;
    }
    Ok(match spec.kind {
        ExperimentKind::Hamiltonicity => {
            let default = if n <= BRUTE_CAP { "brute" } else { "posa" };
            let brute = match spec.params.get("solver").map_or(default, String::as_str) {
                "brute" if n <= BRUTE_CAP => true,
                "brute" => {
                    return Err(Error::CapExceeded {
                        what: "brute-force sweep",
                        n,
                        cap: BRUTE_CAP,
                    })
                }
                "posa" => false,
                other => return Err(Error::invalid(format!("solver must be brute or posa, got {other}"))),
            };
            Box::new(move |p, inst, solve| {
                let g = match gen_gnp(n, p, inst) {
                    Ok(g) => g,
                    Err(_) => return Outcome::failed(),
                };
                let found = if brute {
                    brute_hamilton(&g, |_| true).ok().flatten()
                } else {
                    posa_solve(&g, &[], None, &rotation, solve).ok().map(|s| s.cycle)
                };
                Outcome::of(found.is_some_and(|h| validate_cycle(&g, h.as_slice(), None)))
            })
        }
        ExperimentKind::EdgePattern => {
            let k: usize = spec.get_or("k", 2)?;
            let alpha = alpha_of(spec, k)?;
            let beta: f64 = spec.get_or("beta", 1.0)?;
            let c1 = sweep_pattern(spec, alpha.len() as u32, None)?;
            if c1.len() != n {
                return Err(Error::invalid("pattern length must equal n"));
            }
            let mode = search_mode(spec)?;
            Box::new(move |p, inst, solve| {
                let run = || -> Result<bool> {
                    let g = gen_gnp(n, (beta * p).min(1.0), inst)?;
                    let ec = color_edges(&g, &alpha, derive_seed(inst, "sweep-colors", 0))?;
                    let prob = PatternProblem::new(g).with_edge_pattern(ec, c1.clone())?;
                    Ok(find_patterned(&prob, mode, solve)?.is_some_and(|m| prob.is_satisfied_by(&m.aligned)))
                };
                run().map_or_else(|_| Outcome::failed(), Outcome::of)
            })
        }
        ExperimentKind::VertexPattern => {
            let k: usize = spec.get_or("k", 2)?;
            if k == 0 || k > n {
                return Err(Error::invalid("need 1 <= k <= n"));
            }
            let counts = balanced(n, k);
            let vc = VertexColoring::block(n, &counts)?;
            let c2 = sweep_pattern(spec, k as u32, Some(&counts))?;
            PatternProblem::new(crate::graph::Graph::complete(n)).with_vertex_pattern(vc.clone(), c2.clone())?;
            let mode = search_mode(spec)?;
            Box::new(move |p, inst, solve| {
                let run = || -> Result<bool> {
                    let g = gen_gnp(n, p, inst)?;
                    let prob = PatternProblem::new(g).with_vertex_pattern(vc.clone(), c2.clone())?;
                    Ok(find_patterned(&prob, mode, solve)?.is_some_and(|m| prob.is_satisfied_by(&m.aligned)))
                };
                run().map_or_else(|_| Outcome::failed(), Outcome::of)
            })
        }
        ExperimentKind::Ordered => {
            let s0: usize = spec.get_or("s0", 10)?;
            let omega: f64 = spec.get_or("omega", 2.0)?;
            if s0 > n {
                return Err(Error::invalid("s0 exceeds n"));
            }
            let params = OrderedParams {
                omega,
                ..Default::default()
            };
            Box::new(move |p, inst, solve| {
                let lg = match ordered_layer_probs(n, p.min(0.999), omega).and_then(|pr| gen_layered(n, &pr, inst)) {
                    Ok(lg) => lg,
                    Err(_) => return Outcome::failed(),
                };
                let order: Vec<Vertex> = sample(&mut stream(inst, "sweep-s0", 0), n, s0)
                    .iter()
                    .map(|i| i as Vertex + 1)
                    .collect();
                match solve_ordered(&lg, &order, &params, solve) {
                    Ok(sol) => {
                        let ok = validate_cycle(&lg.union(), sol.cycle.as_slice(), None)
                            && validate_order(&sol.cycle, &order);
                        Outcome {
                            success: ok,
                            error: false,
                            stat: ok.then_some(sol.report.p_star as f64),
                        }
                    }
                    Err(_) => Outcome::of(false),
                }
            })
        }
        ExperimentKind::GreedyInversion => {
            let p: f64 = spec.get_or("p", 0.1)?;
            check_p(p)?;
            let params = GreedyParams {
                u_target: spec.get("u_target")?,
                ..Default::default()
            };
            Box::new(move |m, inst, solve| {
                let lg = match gen_layered(n, &greedy_layer_probs(p), inst) {
                    Ok(lg) => lg,
                    Err(_) => return Outcome::failed(),
                };
                match greedy_low_inversion(&lg, &params, solve) {
                    Ok((Some(h), _)) if validate_cycle(&lg.union(), h.as_slice(), None) => {
                        let iota = count_inversions(h.as_slice()) as f64;
                        Outcome {
                            success: iota <= m,
                            error: false,
                            stat: Some(iota),
                        }
                    }
                    Ok(_) => Outcome::of(false),
                    Err(_) => Outcome::failed(),
                }
            })
        }
        ExperimentKind::FirstMoment => {
            if n > BRUTE_CAP {
                return Err(Error::CapExceeded {
                    what: "first-moment sweep",
                    n,
                    cap: BRUTE_CAP,
                });
            }
            let m: u64 = spec.get_or("m", n as u64)?;
            Box::new(move |p, inst, _| {
                let g = match gen_gnp(n, p, inst) {
                    Ok(g) => g,
                    Err(_) => return Outcome::failed(),
                };
                let found = brute_hamilton(&g, |seq| count_inversions(seq) <= m).ok().flatten();
                let ok = found.is_some_and(|h| {
                    validate_cycle(&g, h.as_slice(), None)
                        && (count_inversions(h.as_slice()) <= m || count_inversions(h.reversed().as_slice()) <= m)
                });
                Outcome {
                    success: ok,
                    error: false,
                    stat: Some(first_moment_bound(n, m, p)),
                }
            })
        }
        ExperimentKind::Coupling => unreachable!("handled by run_coupling"),
    })
}

fn run_coupling(spec: &SweepSpec) -> Result<SweepResult> {
    let n = spec.n;
    let t_grid: Vec<usize> = spec
        .grid
        .iter()
        .map(|&t| {
            if t >= 0.0 && t.fract() == 0.0 {
                Ok(t as usize)
            } else {
                Err(Error::invalid(format!("coupling grid value {t} is not a nonnegative integer")))
            }
        })
        .collect::<Result<_>>()?;
    let k: usize = spec.get_or("k", 2)?;
    let alpha = alpha_of(spec, k)?;
    let pattern = sweep_pattern(spec, alpha.len() as u32, None)?;
    coupling_monotonicity(&CouplingParams {
        n,
        p: spec.get_or("p", 0.4)?,
        beta_p: spec.get("beta_p")?,
        alpha,
        pattern,
        t_grid,
        trials: spec.trials,
        seed: spec.seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sweep::csv_string;

    fn spec(kind: ExperimentKind, n: usize, grid: Vec<f64>, trials: usize) -> SweepSpec {
        SweepSpec {
            kind,
            n,
            grid,
            trials,
            seed: 11,
            params: BTreeMap::new(),
        }
    }

    #[test]
    fn grids() {
        assert_eq!(parse_grid("0.1:0.3:0.1").unwrap(), vec![0.1, 0.2, 0.3]);
        assert_eq!(parse_grid("1,2,5").unwrap(), vec![1.0, 2.0, 5.0]);
        assert!(parse_grid("2,1").is_err());
        assert!(parse_grid("0.3:0.1:0.1").is_err());
        assert!(parse_grid("0:1:0").is_err());
        assert!(parse_grid("").is_err());
    }

    #[test]
    fn kinds_roundtrip() {
        for k in ExperimentKind::ALL {
            assert_eq!(k.name().parse::<ExperimentKind>().unwrap(), k);
        }
        assert!("nope".parse::<ExperimentKind>().is_err());
    }

    #[test]
    fn invalid_specs() {
        assert!(run_sweep(&spec(ExperimentKind::Hamiltonicity, 6, vec![], 1)).is_err());
        assert!(run_sweep(&spec(ExperimentKind::Hamiltonicity, 6, vec![0.5], 0)).is_err());
        assert!(run_sweep(&spec(ExperimentKind::Hamiltonicity, 6, vec![1.5], 1)).is_err());
        let mut s = spec(ExperimentKind::Hamiltonicity, 6, vec![0.5], 1);
        s.params.insert("bogus".into(), "1".into());
        assert!(run_sweep(&s).is_err());
        assert!(run_sweep(&spec(ExperimentKind::FirstMoment, 13, vec![0.5], 1)).is_err());
    }

    #[test]
    fn deterministic_output() {
        for kind in ExperimentKind::ALL {
            let (n, grid) = match kind {
                ExperimentKind::Coupling => (6, vec![0.0, 15.0]),
                ExperimentKind::GreedyInversion => (40, vec![100.0, 400.0]),
                ExperimentKind::Ordered => (60, vec![0.2]),
                _ => (6, vec![0.3, 0.8]),
            };
            let mut s = spec(kind, n, grid, 3);
            if kind == ExperimentKind::Ordered {
                s.params.insert("s0".into(), "3".into());
            }
            if kind == ExperimentKind::GreedyInversion {
                s.params.insert("p".into(), "0.5".into());
            }
            let a = csv_string(&run_sweep(&s).unwrap());
            let b = csv_string(&run_sweep(&s).unwrap());
            assert_eq!(a, b, "{kind}");
            assert_eq!(a.lines().count(), s.grid.len() + 1);
        }
    }

    #[test]
    fn complete_graph_is_always_hamiltonian() {
        let r = run_sweep(&spec(ExperimentKind::Hamiltonicity, 7, vec![0.0, 1.0], 5)).unwrap();
        assert_eq!(r.rows[0].successes, 0);
        assert_eq!(r.rows[1].successes, 5);
    }
}
