use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::polytope::RatePolytope;
use super::report::format_number;
use super::terms::RegionConfig;
use super::{region_for, TheoremSelector};
use crate::channel::{ChannelSpec, InputDistribution};
use crate::error::{Error, Result};

/// Environment variable capping sweep parallelism.
pub const THREADS_ENV: &str = "ONESHOT_THREADS";

/// Sampling parameters of a sweep.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    /// Grid points per simplex edge, at least 2.
    pub resolution: usize,
    /// Time-sharing alphabet size for the two-user forms, 1 to 4.
    pub time_sharing: usize,
    /// Number of rays between the two axes, at least 2.
    pub directions: usize,
    /// Largest number of distributions evaluated.
    pub max_samples: usize,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            resolution: 5,
            time_sharing: 1,
            directions: 33,
            max_samples: 100_000,
        }
    }
}

/// Farthest sampled point along one ray from the origin.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrontierPoint {
    /// Angle from the `R1` axis, in radians.
    pub direction: f64,
    pub r1: f64,
    pub r2: f64,
    /// Grid index of the first distribution attaining the point.
    pub sample: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Frontier {
    pub points: Vec<FrontierPoint>,
    pub samples: usize,
}

impl Frontier {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("direction,R1,R2\n");
        for p in &self.points {
            out.push_str(&format!(
                "{},{},{}\n",
                format_number(p.direction),
                format_number(p.r1),
                format_number(p.r2)
            ));
        }
        out
    }
}

/// Every probability vector of length `len` whose entries are multiples of
/// `1/(resolution − 1)`, in lexicographic order.
pub fn simplex_grid(len: usize, resolution: usize) -> Vec<Vec<f64>> {
    fn fill(len: usize, left: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() + 1 == len {
            prefix.push(left);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for k in (0..=left).rev() {
            prefix.push(k);
            fill(len, left - k, prefix, out);
            prefix.pop();
        }
    }
    let steps = resolution - 1;
    let mut raw = Vec::new();
    fill(len, steps, &mut Vec::new(), &mut raw);
    raw.into_iter()
        .map(|v| v.into_iter().map(|k| k as f64 / steps as f64).collect())
        .collect()
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1usize, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

fn grid_size(len: usize, resolution: usize) -> usize {
    binomial(len + resolution - 2, len - 1)
}

/// Cartesian product of grids, last factor fastest.
fn product(factors: &[Vec<Vec<f64>>]) -> Vec<Vec<Vec<f64>>> {
    let mut out: Vec<Vec<Vec<f64>>> = vec![Vec::new()];
    for f in factors {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                f.iter().map(move |v| {
                    let mut p = prefix.clone();
                    p.push(v.clone());
                    p
                })
            })
            .collect();
    }
    out
}

/// Distributions visited by a sweep, in grid-index order.
pub fn sweep_distributions(
    channel: &ChannelSpec,
    selector: TheoremSelector,
    spec: &SweepSpec,
) -> Result<Vec<InputDistribution>> {
    if spec.resolution < 2 {
        return Err(Error::OutOfRange {
            name: "resolution",
            value: spec.resolution as f64,
        });
    }
    let res = spec.resolution;
    if selector.uses_split() {
        let (s1, s2) = match (channel.split(0), channel.split(1)) {
            (Some(a), Some(b)) => (a, b),
            _ => {
                return Err(Error::InvalidChannel(format!(
                    "channel `{}` declares no input splits",
                    channel.name
                )))
            }
        };
        let lens = [s1.common.len(), s1.personal.len(), s2.common.len(), s2.personal.len()];
        let needed = lens
            .iter()
            .fold(1usize, |acc, &l| acc.saturating_mul(grid_size(l, res)));
        if needed > spec.max_samples {
            return Err(Error::GridTooLarge {
                needed,
                cap: spec.max_samples,
            });
        }
        let factors: Vec<_> = lens.iter().map(|&l| simplex_grid(l, res)).collect();
        return Ok(product(&factors)
            .into_iter()
            .map(|mut v| {
                let x22 = v.pop().expect("four factors");
                let x20 = v.pop().expect("four factors");
                let x11 = v.pop().expect("four factors");
                let x10 = v.pop().expect("four factors");
                InputDistribution::Split { x10, x11, x20, x22 }
            })
            .collect());
    }
    let m = spec.time_sharing;
    if !(1..=4).contains(&m) {
        return Err(Error::OutOfRange {
            name: "time_sharing",
            value: m as f64,
        });
    }
    let (n1, n2) = (channel.x1.len(), channel.x2.len());
    let needed = grid_size(m, res)
        .saturating_mul(grid_size(n1, res).saturating_pow(m as u32))
        .saturating_mul(grid_size(n2, res).saturating_pow(m as u32));
    if needed > spec.max_samples {
        return Err(Error::GridTooLarge {
            needed,
            cap: spec.max_samples,
        });
    }
    let mut factors = vec![simplex_grid(m, res)];
    for _ in 0..m {
        factors.push(simplex_grid(n1, res));
    }
    for _ in 0..m {
        factors.push(simplex_grid(n2, res));
    }
    Ok(product(&factors)
        .into_iter()
        .map(|v| {
            let mut it = v.into_iter();
            let q = it.next().expect("q factor");
            let x1_given_q: Vec<Vec<f64>> = it.by_ref().take(m).collect();
            let x2_given_q: Vec<Vec<f64>> = it.collect();
            InputDistribution::TimeSharing {
                q,
                x1_given_q,
                x2_given_q,
            }
        })
        .collect())
}

/// Largest `t` with `t·u` in the region, zero when the origin itself is excluded.
pub fn radial_extent(poly: &RatePolytope, angle: f64) -> f64 {
    let u = [angle.cos(), angle.sin()];
    let mut t = f64::INFINITY;
    for r in &poly.rows {
        let s = r.coefficients[0] * u[0] + r.coefficients[1] * u[1];
        if r.bound < 0.0 {
            return 0.0;
        }
        if s > 1e-15 {
            t = t.min(r.bound / s);
        }
    }
    t
}

fn thread_count() -> Option<usize> {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
}

/// Union over sampled input distributions, summarized by the farthest point along
/// each ray. Results are merged in grid-index order.
pub fn sweep_union(
    channel: &ChannelSpec,
    selector: TheoremSelector,
    config: &RegionConfig,
    spec: &SweepSpec,
) -> Result<Frontier> {
    config.params.validate()?;
    if spec.directions < 2 {
        return Err(Error::OutOfRange {
            name: "directions",
            value: spec.directions as f64,
        });
    }
    let dists = sweep_distributions(channel, selector, spec)?;
    let angles: Vec<f64> = (0..spec.directions)
        .map(|k| std::f64::consts::FRAC_PI_2 * k as f64 / (spec.directions - 1) as f64)
        .collect();
    let evaluate = || -> Vec<Result<Vec<f64>>> {
        dists
            .par_iter()
            .map(|d| {
                let poly = region_for(channel, d, selector, config)?;
                Ok(angles.iter().map(|&a| radial_extent(&poly, a)).collect())
            })
            .collect()
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_count() {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::InvalidChannel(format!("thread pool: {e}")))?;
    let radii = pool.install(evaluate);
    let mut best: Vec<(f64, usize)> = vec![(f64::NEG_INFINITY, 0); angles.len()];
    for (i, r) in radii.into_iter().enumerate() {
        let r = r?;
        for (k, &t) in r.iter().enumerate() {
            if t > best[k].0 {
                best[k] = (t, i);
            }
        }
    }
    let points = angles
        .iter()
        .zip(best)
        .map(|(&a, (t, sample))| {
            let coord = |c: f64| if t.is_infinite() { if c > 1e-15 { f64::INFINITY } else { 0.0 } } else { t * c };
            FrontierPoint {
                direction: a,
                r1: coord(a.cos()),
                r2: coord(a.sin()),
                sample,
            }
        })
        .collect();
    Ok(Frontier {
        points,
        samples: dists.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        let g = simplex_grid(2, 3);
        assert_eq!(g, vec![vec![1.0, 0.0], vec![0.5, 0.5], vec![0.0, 1.0]]);
        assert_eq!(simplex_grid(3, 5).len(), grid_size(3, 5));
        assert_eq!(grid_size(3, 5), 15);
        assert_eq!(simplex_grid(1, 4), vec![vec![1.0]]);
    }

    #[test]
    fn cartesian_order() {
        let p = product(&[vec![vec![0.0], vec![1.0]], vec![vec![2.0], vec![3.0]]]);
        assert_eq!(p[1], vec![vec![0.0], vec![3.0]]);
        assert_eq!(p.len(), 4);
    }
}
