//! The interpolation `Gamma_t` between G(n,p) and a colored G(n,beta p):
//! the first `t` pairs in lexicographic order are included with
//! probability `beta_p` and colored, the rest are included with
//! probability `p` and left uncolored.

use rand::distr::weighted::WeightedIndex;
use rand::Rng;
use rand_distr::Distribution;
use rayon::prelude::*;

use super::search::{dense_colors, Engine};
use crate::coloring::{Color, ColorPattern};
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::rng::stream;
use crate::sweep::{SweepResult, SweepRow};

/// Largest n accepted by [`coupling_monotonicity`].
pub const COUPLING_CAP: usize = 10;

#[derive(Clone, Debug)]
pub struct CouplingParams {
    pub n: usize,
    pub p: f64,
    /// Inclusion probability of the colored pairs; `None` means
    /// `min(1, p / alpha_min)`.
    pub beta_p: Option<f64>,
    pub alpha: Vec<f64>,
    pub pattern: ColorPattern,
    pub t_grid: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
}

impl CouplingParams {
    pub fn colored_prob(&self) -> f64 {
        self.beta_p.unwrap_or_else(|| {
            let amin = self.alpha.iter().copied().fold(f64::INFINITY, f64::min);
            (self.p / amin).min(1.0)
        })
    }
}

/// Monte Carlo estimate, for each `t` in the grid, of the probability that
/// `Gamma_t` has a Hamilton cycle whose colored edges follow the pattern.
/// Trial `i` uses the same random draws for every `t`.
pub fn coupling_monotonicity(params: &CouplingParams) -> Result<SweepResult> {
    let n = params.n;
    let pairs = n * n.saturating_sub(1) / 2;
    if n > COUPLING_CAP {
        return Err(Error::CapExceeded {
            what: "coupling_monotonicity",
            n,
            cap: COUPLING_CAP,
        });
    }
    if params.pattern.len() != n {
        return Err(Error::invalid("pattern length must equal n"));
    }
    if params.t_grid.iter().any(|&t| t > pairs) {
        return Err(Error::invalid(format!("t must lie in 0..={pairs}")));
    }
    let beta_p = params.colored_prob();
    for (name, q) in [("p", params.p), ("beta_p", beta_p)] {
        if !(0.0..=1.0).contains(&q) {
            return Err(Error::invalid(format!("{name} = {q} is not a probability")));
        }
    }
    let dist = WeightedIndex::new(&params.alpha).map_err(|e| Error::invalid(e.to_string()))?;
    let outcomes: Vec<Vec<bool>> = (0..params.trials as u64)
        .into_par_iter()
        .map(|trial| {
            let mut rng = stream(params.seed, "coupling", trial);
            let draws: Vec<(f64, Color)> = (0..pairs)
                .map(|_| (rng.random::<f64>(), dist.sample(&mut rng) as Color + 1))
                .collect();
            params
                .t_grid
                .iter()
                .map(|&t| proper_cycle_exists(n, &draws, t, params.p, beta_p, params.pattern.seq()))
                .collect()
        })
        .collect();
    let rows = params
        .t_grid
        .iter()
        .enumerate()
        .map(|(i, &t)| SweepRow {
            point: t as f64,
            trials: params.trials,
            successes: outcomes.iter().filter(|o| o[i]).count(),
            stat: 0.0,
            errors: 0,
        })
        .collect();
    Ok(SweepResult { rows })
}

fn proper_cycle_exists(n: usize, draws: &[(f64, Color)], t: usize, p: f64, beta_p: f64, c: &[Color]) -> bool {
    let mut edges = Vec::new();
    let mut colored = Vec::new();
    let mut j = 0;
    for u in 1..=n as Vertex {
        for v in u + 1..=n as Vertex {
            let (x, color) = draws[j];
            j += 1;
            let prob = if j <= t { beta_p } else { p };
            if x < prob {
                edges.push((u, v));
                if j <= t {
                    colored.push((u, v, color));
                }
            }
        }
    }
    let g = Graph::from_edges(n, edges).expect("distinct lexicographic pairs");
    let palette = c.iter().copied().max().unwrap_or(1).max(colored.iter().map(|x| x.2).max().unwrap_or(1));
    let engine = Engine {
        n,
        graph: &g,
        edge_color: Some(dense_colors(n, colored.into_iter())),
        c1: Some(c),
        vertex_color: None,
        c2: None,
        rainbow: false,
        palette: palette as usize,
    };
    engine.exact().is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ham::brute_hamilton;

    fn params(t_grid: Vec<usize>, alpha: Vec<f64>) -> CouplingParams {
        CouplingParams {
            n: 6,
            p: 0.5,
            beta_p: None,
            pattern: ColorPattern::random(6, alpha.len() as u32, 2),
            alpha,
            t_grid,
            trials: 200,
            seed: 9,
        }
    }

    #[test]
    fn t_zero_is_plain_hamiltonicity() {
        let res = coupling_monotonicity(&params(vec![0], vec![0.5, 0.5])).unwrap();
        // direct estimate from the same draws: the first coordinate decides inclusion
        let mut direct = 0;
        for trial in 0..200u64 {
            let mut rng = stream(9, "coupling", trial);
            let dist = WeightedIndex::new([0.5, 0.5]).unwrap();
            let mut edges = Vec::new();
            for u in 1..=6u32 {
                for v in u + 1..=6 {
                    let x: f64 = rng.random();
                    let _ = dist.sample(&mut rng);
                    if x < 0.5 {
                        edges.push((u, v));
                    }
                }
            }
            let g = Graph::from_edges(6, edges).unwrap();
            direct += brute_hamilton(&g, |_| true).unwrap().is_some() as usize;
        }
        assert_eq!(res.rows[0].successes, direct);
    }

    #[test]
    fn single_color_at_full_t_matches_hamiltonicity_at_beta_p() {
        let res = coupling_monotonicity(&params(vec![15], vec![1.0])).unwrap();
        let mut direct = 0;
        for trial in 0..200u64 {
            let mut rng = stream(9, "coupling", trial);
            let mut edges = Vec::new();
            for u in 1..=6u32 {
                for v in u + 1..=6 {
                    let x: f64 = rng.random();
                    let _ = WeightedIndex::new([1.0]).unwrap().sample(&mut rng);
                    if x < 0.5 {
                        edges.push((u, v));
                    }
                }
            }
            let g = Graph::from_edges(6, edges).unwrap();
            direct += brute_hamilton(&g, |_| true).unwrap().is_some() as usize;
        }
        assert_eq!(res.rows[0].successes, direct);
    }

    #[test]
    fn rejects_bad_grid() {
        assert!(coupling_monotonicity(&params(vec![16], vec![1.0])).is_err());
    }
}
