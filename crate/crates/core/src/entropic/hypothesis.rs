//! Hypothesis-testing relative entropy via the quantum Neyman–Pearson construction.
//!
//! For a threshold `t ≥ 0` let `P₊(t)` project onto the strictly positive
//! eigenspace of `ρ − tσ`. The type-I acceptance `α(t) = Tr{P₊(t)ρ}` is
//! nonincreasing in `t`. Bisection brackets the threshold where `α` crosses
//! `1 − ε`, and the optimal test mixes the two bracketing projectors so that the
//! acceptance constraint holds with equality.

use serde::{Deserialize, Serialize};

use super::block::BlockPair;
use crate::error::{Error, Result};
use crate::operator::{eigh, DensityOperator, EIG_CLAMP};

pub const MAX_BISECTION_ITERATIONS: usize = 200;
const MAX_BRACKET_DOUBLINGS: usize = 1100;
const RELATIVE_WIDTH: f64 = 1e-14;

/// Result of an optimal hypothesis test.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HtOutcome {
    /// −log₂ β in bits; `+∞` when β = 0.
    pub value: f64,
    /// Minimal type-II error β*(ε).
    pub beta: f64,
    /// Threshold at which the optimal test was found.
    pub threshold: f64,
    pub iterations: usize,
}

impl HtOutcome {
    fn from_beta(beta: f64, threshold: f64, iterations: usize) -> Self {
        let value = if beta > 0.0 {
            -beta.log2()
        } else {
            f64::INFINITY
        };
        Self {
            value,
            beta,
            threshold,
            iterations,
        }
    }
}

/// `(Tr{P₊ρ}, Tr{P₊σ})` summed over blocks at threshold `t`.
fn acceptance(blocks: &[BlockPair], t: f64) -> (f64, f64) {
    let cutoff = 1e-13 * (1.0 + t);
    let mut alpha = 0.0;
    let mut beta = 0.0;
    for b in blocks {
        if let Some((r, s)) = b.scalars() {
            if r - t * s > cutoff {
                alpha += r;
                beta += s;
            }
            continue;
        }
        let diff = &b.rho - &b.sigma * crate::operator::C64::new(t, 0.0);
        let e = eigh(&diff);
        let positive: Vec<usize> = (0..e.values.len())
            .filter(|&k| e.values[k] > cutoff)
            .collect();
        for k in positive {
            let v = e.vectors.column(k);
            alpha += v.dotc(&(&b.rho * v)).re;
            beta += v.dotc(&(&b.sigma * v)).re;
        }
    }
    (alpha, beta)
}

/// Mass of `ρ` on the clamped kernel of `σ`, summed over blocks.
fn kernel_acceptance(blocks: &[BlockPair]) -> f64 {
    blocks
        .iter()
        .map(|b| {
            if let Some((r, s)) = b.scalars() {
                return if s <= EIG_CLAMP { r } else { 0.0 };
            }
            let e = eigh(&b.sigma);
            let w = e.diagonal_weights(&b.rho);
            e.values
                .iter()
                .zip(w)
                .filter(|(&l, _)| l <= EIG_CLAMP)
                .map(|(_, x)| x)
                .sum::<f64>()
        })
        .sum()
}

fn check_eps(eps: f64) -> Result<()> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::OutOfRange {
            name: "eps",
            value: eps,
        });
    }
    Ok(())
}

/// Optimal test for a block-diagonal pair.
pub fn hypothesis_test_blocks(blocks: &[BlockPair], eps: f64) -> Result<HtOutcome> {
    check_eps(eps)?;
    let target = 1.0 - eps;
    if kernel_acceptance(blocks) >= target {
        return Ok(HtOutcome::from_beta(0.0, f64::INFINITY, 0));
    }

    let (mut alpha_lo, mut beta_lo) = acceptance(blocks, 0.0);
    let mut lo = 0.0;
    let mut hi = 1.0;
    let (mut alpha_hi, mut beta_hi) = acceptance(blocks, hi);
    let mut doublings = 0;
    while alpha_hi >= target {
        lo = hi;
        alpha_lo = alpha_hi;
        beta_lo = beta_hi;
        hi *= 2.0;
        (alpha_hi, beta_hi) = acceptance(blocks, hi);
        doublings += 1;
        if doublings > MAX_BRACKET_DOUBLINGS {
            return Err(Error::BisectionNonConvergence {
                iterations: doublings,
                lo,
                hi,
                alpha_lo,
                alpha_hi,
            });
        }
    }

    let mut iterations = 0;
    while hi - lo > RELATIVE_WIDTH * hi {
        if iterations == MAX_BISECTION_ITERATIONS {
            return Err(Error::BisectionNonConvergence {
                iterations,
                lo,
                hi,
                alpha_lo,
                alpha_hi,
            });
        }
        iterations += 1;
        let mid = if lo == 0.0 {
            hi / 2.0
        } else if hi / lo > 4.0 {
            (lo * hi).sqrt()
        } else {
            0.5 * (lo + hi)
        };
        let (a, b) = acceptance(blocks, mid);
        if a >= target {
            lo = mid;
            alpha_lo = a;
            beta_lo = b;
        } else {
            hi = mid;
            alpha_hi = a;
            beta_hi = b;
        }
    }

    // Mixing weight on P₊(lo) that meets the acceptance constraint with equality.
    let span = alpha_lo - alpha_hi;
    let c = if span > 0.0 {
        ((target - alpha_hi) / span).clamp(0.0, 1.0)
    } else {
        1.0
    };
    let beta = beta_hi + c * (beta_lo - beta_hi);
    Ok(HtOutcome::from_beta(beta.max(0.0), lo, iterations))
}

/// D_H^ε(ρ‖σ) in bits.
pub fn hypothesis_testing_divergence(
    rho: &DensityOperator,
    sigma: &DensityOperator,
    eps: f64,
) -> Result<f64> {
    Ok(hypothesis_testing_outcome(rho, sigma, eps)?.value)
}

/// Full outcome of D_H^ε(ρ‖σ), including the optimal type-II error.
pub fn hypothesis_testing_outcome(
    rho: &DensityOperator,
    sigma: &DensityOperator,
    eps: f64,
) -> Result<HtOutcome> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            got: sigma.dim(),
        });
    }
    hypothesis_test_blocks(&[BlockPair::from_operators(rho, sigma)], eps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropic::divergences::classical_np_oracle;
    use crate::operator::{ComplexMatrix, C64};

    fn diag(p: &[f64]) -> DensityOperator {
        DensityOperator::from_diagonal(p).unwrap()
    }

    #[test]
    fn identical_states_give_one_minus_eps() {
        let rho = diag(&[0.2, 0.3, 0.5]);
        let out = hypothesis_testing_outcome(&rho, &rho, 0.1).unwrap();
        assert!((out.beta - 0.9).abs() < 1e-9);
        assert!((out.value - (1.0f64 / 0.9).log2()).abs() < 1e-9);
    }

    #[test]
    fn commuting_pair_matches_np_oracle() {
        let p = [0.5, 0.5];
        let q = [0.9, 0.1];
        let d = hypothesis_testing_divergence(&diag(&p), &diag(&q), 0.5).unwrap();
        let oracle = classical_np_oracle(&p, &q, 0.5).unwrap().divergence;
        assert!((d - oracle).abs() < 1e-9);
        assert!((d - 3.321928).abs() < 1e-6);
    }

    #[test]
    fn disjoint_support_is_infinite() {
        let d = hypothesis_testing_divergence(&diag(&[1.0, 0.0]), &diag(&[0.0, 1.0]), 0.1).unwrap();
        assert!(d.is_infinite());
    }

    #[test]
    fn partial_kernel_mass_below_target_is_finite() {
        // ρ puts 0.5 on σ's kernel; the remaining acceptance must come from the shared atom
        let p = [0.5, 0.5, 0.0];
        let q = [0.0, 0.5, 0.5];
        let d = hypothesis_testing_divergence(&diag(&p), &diag(&q), 0.25).unwrap();
        let oracle = classical_np_oracle(&p, &q, 0.25).unwrap().divergence;
        assert!((d - oracle).abs() < 1e-9);
    }

    #[test]
    fn block_route_matches_single_block() {
        let p = [0.1, 0.2, 0.3, 0.4];
        let q = [0.25; 4];
        let whole = hypothesis_testing_divergence(&diag(&p), &diag(&q), 0.3).unwrap();
        let blocks: Vec<BlockPair> = p
            .iter()
            .zip(q)
            .map(|(&a, b)| {
                BlockPair::new(
                    ComplexMatrix::from_element(1, 1, C64::new(a, 0.0)),
                    ComplexMatrix::from_element(1, 1, C64::new(b, 0.0)),
                )
            })
            .collect();
        let split = hypothesis_test_blocks(&blocks, 0.3).unwrap().value;
        assert!((whole - split).abs() < 1e-9);
    }

    #[test]
    fn rejects_bad_eps() {
        let a = diag(&[0.5, 0.5]);
        assert!(hypothesis_testing_divergence(&a, &a, 0.0).is_err());
        assert!(hypothesis_testing_divergence(&a, &a, 1.0).is_err());
    }

    #[test]
    fn qubit_pair_against_coarse_test_grid() {
        // ρ = |+⟩⟨+| mixed with I/2, σ diagonal; scan projective and scaled tests
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let plus = DensityOperator::pure(&[C64::new(s, 0.0), C64::new(s, 0.0)]).unwrap();
        let rho_m = plus.matrix() * C64::new(0.7, 0.0)
            + DensityOperator::maximally_mixed(2).matrix() * C64::new(0.3, 0.0);
        let rho = DensityOperator::new(rho_m).unwrap();
        let sigma = diag(&[0.8, 0.2]);
        let eps = 0.3;
        let beta = hypothesis_testing_outcome(&rho, &sigma, eps).unwrap().beta;
        let mut best = f64::INFINITY;
        let n = 200;
        for i in 0..=n {
            let theta = std::f64::consts::PI * i as f64 / n as f64;
            let v = [C64::new((theta / 2.0).cos(), 0.0), C64::new((theta / 2.0).sin(), 0.0)];
            let proj = DensityOperator::pure(&v).unwrap().into_matrix();
            let comp = ComplexMatrix::identity(2, 2) - &proj;
            let a1 = (&proj * rho.matrix()).trace().re;
            let a2 = (&comp * rho.matrix()).trace().re;
            let b1 = (&proj * sigma.matrix()).trace().re;
            let b2 = (&comp * sigma.matrix()).trace().re;
            // minimise λ1 b1 + λ2 b2 subject to λ1 a1 + λ2 a2 ≥ 1 − ε, λ in [0,1]²
            for (x, y) in [(a1, b1), (a2, b2)] {
                let (ox, oy) = if (x, y) == (a1, b1) { (a2, b2) } else { (a1, b1) };
                if x >= 1.0 - eps {
                    best = best.min((1.0 - eps) / x * y);
                }
                if ox > 0.0 && x < 1.0 - eps && x + ox >= 1.0 - eps {
                    best = best.min(y + (1.0 - eps - x) / ox * oy);
                }
            }
        }
        assert!(beta <= best + 1e-9, "solver {beta} worse than grid {best}");
        assert!(best - beta < 1e-3, "grid {best} far above solver {beta}");
    }
}
