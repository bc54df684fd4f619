//! Max-relative entropy and its smoothed version.

use super::block::BlockPair;
use super::params::{Smoothing, SmoothingStrategy};
use crate::error::{Error, Result};
use crate::operator::{eigh, ComplexMatrix, DensityOperator, DistanceConvention, EIG_CLAMP};

/// Commutator tolerance for the diagonal smoothing strategy.
pub const COMMUTATOR_TOL: f64 = 1e-9;
/// Eigenvalues of `ρ` closer than this share an eigenspace when building a common basis.
const DEGENERACY_TOL: f64 = 1e-9;

/// `λ_max(σ^{-1/2} ρ σ^{-1/2})` over blocks, or `None` if `ρ` leaves `supp σ`.
fn max_ratio(blocks: &[BlockPair]) -> Option<f64> {
    let mut outside = 0.0;
    let mut worst = 0.0f64;
    for b in blocks {
        if let Some((r, s)) = b.scalars() {
            if s <= EIG_CLAMP {
                outside += r;
            } else {
                worst = worst.max(r / s);
            }
            continue;
        }
        let e = eigh(&b.sigma);
        let support: Vec<usize> = (0..e.values.len())
            .filter(|&k| e.values[k] > EIG_CLAMP)
            .collect();
        let weights = e.diagonal_weights(&b.rho);
        outside += (0..e.values.len())
            .filter(|k| !support.contains(k))
            .map(|k| weights[k])
            .sum::<f64>();
        if support.is_empty() {
            continue;
        }
        let n = b.dim();
        let mut scaled = ComplexMatrix::zeros(n, support.len());
        for (j, &k) in support.iter().enumerate() {
            let col = e.vectors.column(k) / crate::operator::C64::new(e.values[k].sqrt(), 0.0);
            scaled.set_column(j, &col);
        }
        let reduced = scaled.adjoint() * &b.rho * &scaled;
        worst = worst.max(eigh(&reduced).max_value());
    }
    (outside < EIG_CLAMP).then_some(worst)
}

/// D_max over a block-diagonal pair, in bits.
pub fn max_relative_blocks(blocks: &[BlockPair]) -> f64 {
    match max_ratio(blocks) {
        Some(r) if r > 0.0 => r.log2(),
        Some(_) => f64::NEG_INFINITY,
        None => f64::INFINITY,
    }
}

/// D_max(ρ‖σ) = log₂ λ_max(σ^{-1/2} ρ σ^{-1/2}), `+∞` outside the support of `σ`.
pub fn max_relative_entropy(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            got: sigma.dim(),
        });
    }
    Ok(max_relative_blocks(&[BlockPair::from_operators(rho, sigma)]))
}

/// Probability weights of `ρ` and `σ` in a common eigenbasis of each block.
pub fn common_eigenbasis_weights(blocks: &[BlockPair]) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut p = Vec::new();
    let mut q = Vec::new();
    for b in blocks {
        let comm = b.commutator_norm();
        if comm > COMMUTATOR_TOL {
            return Err(Error::NonCommuting(comm));
        }
        if let Some((r, s)) = b.scalars() {
            p.push(r.max(0.0));
            q.push(s.max(0.0));
            continue;
        }
        let e = eigh(&b.rho);
        let n = b.dim();
        let mut start = 0;
        while start < n {
            let mut end = start + 1;
            while end < n && e.values[end] - e.values[end - 1] <= DEGENERACY_TOL {
                end += 1;
            }
            let basis = e.vectors.columns(start, end - start).into_owned();
            let compressed = basis.adjoint() * &b.sigma * &basis;
            let inner = eigh(&compressed);
            let vectors = &basis * &inner.vectors;
            for k in 0..vectors.ncols() {
                let v = vectors.column(k);
                p.push(v.dotc(&(&b.rho * v)).re.max(0.0));
                q.push(v.dotc(&(&b.sigma * v)).re.max(0.0));
            }
            start = end;
        }
    }
    Ok((p, q))
}

/// Squared purified distance between `p` and the best `p' ≤ 2^γ q`, or `None`
/// if no normalized `p'` fits under the caps.
fn best_squared_distance(p: &[f64], q: &[f64], gamma: f64, convention: DistanceConvention) -> Option<f64> {
    let scale = gamma.exp2();
    let mut capped: Vec<(f64, f64)> = Vec::new();
    let mut spare_capacity = 0.0;
    for (&pi, &qi) in p.iter().zip(q) {
        let cap = if qi > 0.0 { scale * qi } else { 0.0 };
        if pi > 0.0 {
            capped.push((pi, cap));
        } else {
            spare_capacity += cap;
        }
    }
    let support_capacity: f64 = capped.iter().map(|(_, c)| c).sum();

    let mut hellinger = 0.0;
    if support_capacity < 1.0 {
        let remainder = 1.0 - support_capacity;
        if spare_capacity < remainder {
            return None;
        }
        for &(pi, cap) in &capped {
            hellinger += (pi.sqrt() - cap.sqrt()).powi(2);
        }
        hellinger += remainder;
    } else {
        // p'_i = min(cap_i, κ p_i) with κ fixed by normalization
        capped.sort_by(|a, b| (a.1 / a.0).total_cmp(&(b.1 / b.0)));
        let mut capped_mass = 0.0;
        let mut free_p: f64 = capped.iter().map(|(pi, _)| pi).sum();
        let mut kappa = 1.0 / free_p;
        let mut split = 0;
        for (k, &(pi, cap)) in capped.iter().enumerate() {
            kappa = (1.0 - capped_mass) / free_p;
            if cap / pi >= kappa {
                split = k;
                break;
            }
            capped_mass += cap;
            free_p -= pi;
            split = k + 1;
        }
        for (k, &(pi, cap)) in capped.iter().enumerate() {
            let target = if k < split { cap } else { kappa * pi };
            hellinger += (pi.sqrt() - target.sqrt()).powi(2);
        }
    }
    Some(convention.squared_from_root_infidelity(0.5 * hellinger))
}

/// Exact minimum of D_max(p'‖q) over distributions `p'` within purified distance
/// `eps` of `p`, for commuting (classical) arguments.
pub fn smooth_max_classical(p: &[f64], q: &[f64], eps: f64, convention: DistanceConvention) -> f64 {
    let radius2 = eps * eps;
    let feasible = |g: f64| {
        best_squared_distance(p, q, g, convention).is_some_and(|d2| d2 <= radius2 * (1.0 + 1e-12))
    };
    let q_total: f64 = q.iter().sum();
    let mut lo = -q_total.log2();
    if feasible(lo) {
        return lo;
    }
    let unsmoothed = {
        let mut worst = 0.0f64;
        let mut outside = false;
        for (&pi, &qi) in p.iter().zip(q) {
            if pi > EIG_CLAMP {
                if qi <= EIG_CLAMP {
                    outside = true;
                } else {
                    worst = worst.max(pi / qi);
                }
            }
        }
        (!outside).then(|| worst.log2())
    };
    let mut hi = match unsmoothed {
        Some(v) => v.max(lo),
        None => {
            let mut h = lo.max(0.0) + 1.0;
            let mut doublings = 0;
            while !feasible(h) {
                h = 2.0 * h + 1.0;
                doublings += 1;
                if doublings > 64 {
                    return f64::INFINITY;
                }
            }
            h
        }
    };
    if hi <= lo {
        return hi;
    }
    for _ in 0..200 {
        if hi - lo <= 1e-13 * hi.abs().max(1.0) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if feasible(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
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

/// Smoothed D_max over a block-diagonal pair.
pub fn smooth_max_blocks(blocks: &[BlockPair], eps: f64, smoothing: Smoothing) -> Result<f64> {
    check_eps(eps)?;
    match smoothing.strategy {
        SmoothingStrategy::None => Ok(max_relative_blocks(blocks)),
        SmoothingStrategy::DiagonalScan => {
            let (p, q) = common_eigenbasis_weights(blocks)?;
            let smoothed = smooth_max_classical(&p, &q, eps, smoothing.convention);
            Ok(smoothed.min(max_relative_blocks(blocks)))
        }
    }
}

/// D_max^ε(ρ‖σ) under the chosen smoothing strategy.
pub fn smooth_max_relative_entropy(
    rho: &DensityOperator,
    sigma: &DensityOperator,
    eps: f64,
    smoothing: Smoothing,
) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            got: sigma.dim(),
        });
    }
    smooth_max_blocks(&[BlockPair::from_operators(rho, sigma)], eps, smoothing)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{purified_distance, C64};

    fn diag(p: &[f64]) -> DensityOperator {
        DensityOperator::from_diagonal(p).unwrap()
    }

    fn scan() -> Smoothing {
        Smoothing::new(SmoothingStrategy::DiagonalScan, DistanceConvention::Standard)
    }

    #[test]
    fn max_relative_examples() {
        let a = diag(&[0.3, 0.7]);
        assert!(max_relative_entropy(&a, &a).unwrap().abs() < 1e-12);
        let d = max_relative_entropy(&DensityOperator::basis(2, 0), &DensityOperator::maximally_mixed(2)).unwrap();
        assert!((d - 1.0).abs() < 1e-12);
        let d = max_relative_entropy(&diag(&[0.5, 0.5]), &diag(&[0.9, 0.1])).unwrap();
        let oracle = (0.5f64 / 0.9).max(0.5 / 0.1).log2();
        assert!((d - oracle).abs() < 1e-12);
        assert!((oracle - 2.321928).abs() < 1e-6);
        let inf = max_relative_entropy(&diag(&[0.5, 0.5]), &diag(&[1.0, 0.0])).unwrap();
        assert!(inf.is_infinite());
    }

    #[test]
    fn max_relative_of_pure_against_rotated_mixture() {
        // ρ = |+⟩⟨+|, σ = I/2: ratio 2 in every basis
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let plus = DensityOperator::pure(&[C64::new(s, 0.0), C64::new(0.0, s)]).unwrap();
        let d = max_relative_entropy(&plus, &DensityOperator::maximally_mixed(2)).unwrap();
        assert!((d - 1.0).abs() < 1e-12);
    }

    #[test]
    fn smoothing_with_tiny_eps_is_unsmoothed() {
        let rho = diag(&[0.9, 0.1]);
        let sigma = diag(&[0.5, 0.5]);
        let plain = max_relative_entropy(&rho, &sigma).unwrap();
        for strategy in [SmoothingStrategy::None, SmoothingStrategy::DiagonalScan] {
            let s = Smoothing::new(strategy, DistanceConvention::Standard);
            let v = smooth_max_relative_entropy(&rho, &sigma, 1e-13, s).unwrap();
            assert!((v - plain).abs() < 1e-9);
        }
    }

    #[test]
    fn smoothing_of_equal_states_is_zero() {
        let rho = diag(&[0.2, 0.8]);
        let v = smooth_max_relative_entropy(&rho, &rho, 0.1, scan()).unwrap();
        assert!(v.abs() < 1e-12);
    }

    #[test]
    fn mass_shift_example() {
        let rho = diag(&[0.9, 0.1]);
        let sigma = diag(&[0.5, 0.5]);
        let plain = max_relative_entropy(&rho, &sigma).unwrap();
        assert!((plain - 0.9f64.log2() - 1.0).abs() < 1e-12);
        assert!((plain - 0.847997).abs() < 1e-6);
        let v = smooth_max_relative_entropy(&rho, &sigma, 0.2, scan()).unwrap();
        let shifted = diag(&[0.8, 0.2]);
        let dist = purified_distance(&shifted, &rho, DistanceConvention::Standard).unwrap();
        assert!(dist <= 0.2);
        assert!(v <= plain + 1e-12);
        assert!(v <= 0.678072 + 1e-6);
        // one-dimensional scan over shifted mass
        let mut scan_best = plain;
        for k in 0..=10_000 {
            let s = 0.9 * k as f64 / 10_000.0;
            let cand = diag(&[0.9 - s, 0.1 + s]);
            if purified_distance(&cand, &rho, DistanceConvention::Standard).unwrap() <= 0.2 {
                scan_best = scan_best.min(max_relative_entropy(&cand, &sigma).unwrap());
            }
        }
        assert!(v <= scan_best + 1e-9);
        assert!(scan_best - v < 1e-3);
    }

    #[test]
    fn diagonal_scan_rejects_non_commuting() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let plus = DensityOperator::pure(&[C64::new(s, 0.0), C64::new(s, 0.0)]).unwrap();
        let err = smooth_max_relative_entropy(&plus, &diag(&[0.9, 0.1]), 0.1, scan());
        assert!(matches!(err, Err(Error::NonCommuting(_))));
    }

    #[test]
    fn unsupported_mass_can_be_smoothed_away() {
        let p = [0.99, 0.01];
        let q = [1.0, 0.0];
        let v = smooth_max_classical(&p, &q, 0.2, DistanceConvention::Standard);
        assert!(v.is_finite());
        assert!(v.abs() < 1e-9);
        let v = smooth_max_classical(&[0.5, 0.5], &q, 0.2, DistanceConvention::Standard);
        assert!(v.is_infinite());
    }
}
