//! Mutual informations of classical-quantum states, unconditional and conditioned
//! on a classical register.

use super::cq::CqState;
use super::hypothesis::hypothesis_test_blocks;
use super::maxrel::{max_relative_blocks, smooth_max_blocks};
use super::params::Smoothing;
use crate::error::{Error, Result};
use crate::operator::DistanceConvention;

/// Largest conditioning alphabet handled by exhaustive subset search.
pub const MAX_CONDITIONING_ALPHABET: usize = 20;

/// I_H^ε(A : B) = D_H^ε(ρ_AB ‖ ρ_A ⊗ ρ_B).
pub fn ht_mutual_info(state: &CqState, part_a: &[&str], part_b: &[&str], eps: f64) -> Result<f64> {
    let blocks = state.joint_blocks(part_a, part_b)?;
    Ok(hypothesis_test_blocks(&blocks, eps)?.value)
}

/// I_max(A : B) = D_max(ρ_AB ‖ ρ_A ⊗ ρ_B).
pub fn max_mutual_info(state: &CqState, part_a: &[&str], part_b: &[&str]) -> Result<f64> {
    let blocks = state.joint_blocks(part_a, part_b)?;
    Ok(max_relative_blocks(&blocks))
}

/// I_max^ε(A : B), smoothing the joint state with the product of marginals fixed.
pub fn smooth_max_mutual_info(
    state: &CqState,
    part_a: &[&str],
    part_b: &[&str],
    eps: f64,
    smoothing: Smoothing,
) -> Result<f64> {
    let blocks = state.joint_blocks(part_a, part_b)?;
    smooth_max_blocks(&blocks, eps, smoothing)
}

/// `max_S min_{z∈S} value(z)` over supports `S` reachable by a diagonal perturbation
/// of the conditioning distribution within purified distance `eps`.
///
/// `per_value` lists `(p(z), value(z))` for the values with positive probability.
/// Every subset is enumerated.
pub fn max_min_over_supports(
    per_value: &[(f64, f64)],
    eps: f64,
    convention: DistanceConvention,
) -> Result<f64> {
    let n = per_value.len();
    if n > MAX_CONDITIONING_ALPHABET {
        return Err(Error::AlphabetTooLarge {
            register: String::from("<conditioning>"),
            size: n,
            max: MAX_CONDITIONING_ALPHABET,
        });
    }
    let mut best = f64::NEG_INFINITY;
    for subset in 1u32..(1u32 << n) {
        let mut kept = 0.0;
        let mut worst = f64::INFINITY;
        for (i, &(p, v)) in per_value.iter().enumerate() {
            if subset & (1 << i) != 0 {
                kept += p;
                worst = worst.min(v);
            }
        }
        if convention.admits_discarded_mass(1.0 - kept, eps) && worst > best {
            best = worst;
        }
    }
    Ok(best)
}

fn conditional<F>(
    state: &CqState,
    cond: &str,
    eps: f64,
    convention: DistanceConvention,
    per_value: F,
) -> Result<f64>
where
    F: Fn(&CqState) -> Result<f64>,
{
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::OutOfRange {
            name: "eps",
            value: eps,
        });
    }
    let dist = state.register_distribution(cond)?;
    if dist.len() > MAX_CONDITIONING_ALPHABET {
        return Err(Error::AlphabetTooLarge {
            register: cond.to_string(),
            size: dist.len(),
            max: MAX_CONDITIONING_ALPHABET,
        });
    }
    let mut values = Vec::new();
    for (z, &p) in dist.iter().enumerate() {
        if p > 0.0 {
            let conditioned = state.condition_on(cond, z)?;
            values.push((p, per_value(&conditioned)?));
        }
    }
    max_min_over_supports(&values, eps, convention)
}

fn check_cond(part_a: &[&str], part_b: &[&str], cond: &str) -> Result<()> {
    if part_a.contains(&cond) || part_b.contains(&cond) {
        return Err(Error::OverlappingParts(cond.to_string()));
    }
    Ok(())
}

/// I_H^ε(A : B | Z) for a classical conditioning register `Z`.
pub fn cond_smooth_ht_mi(
    state: &CqState,
    part_a: &[&str],
    part_b: &[&str],
    cond: &str,
    eps: f64,
    convention: DistanceConvention,
) -> Result<f64> {
    check_cond(part_a, part_b, cond)?;
    conditional(state, cond, eps, convention, |s| {
        ht_mutual_info(s, part_a, part_b, eps)
    })
}

/// I_max^ε(A : B | Z) for a classical conditioning register `Z`.
pub fn cond_smooth_max_mi(
    state: &CqState,
    part_a: &[&str],
    part_b: &[&str],
    cond: &str,
    eps: f64,
    smoothing: Smoothing,
) -> Result<f64> {
    check_cond(part_a, part_b, cond)?;
    conditional(state, cond, eps, smoothing.convention, |s| {
        smooth_max_mutual_info(s, part_a, part_b, eps, smoothing)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropic::cq::Atom;
    use crate::entropic::divergences::classical_np_oracle;
    use crate::entropic::params::SmoothingStrategy;
    use crate::operator::{tensor, DensityOperator, RegisterLayout};

    /// Two classical bits `X`, `Y` with the given joint table and no quantum part.
    fn classical_pair(table: [[f64; 2]; 2]) -> CqState {
        let mut atoms = Vec::new();
        for (x, row) in table.iter().enumerate() {
            for (y, &p) in row.iter().enumerate() {
                atoms.push(Atom {
                    values: vec![x, y],
                    prob: p,
                    state: DensityOperator::maximally_mixed(1),
                });
            }
        }
        CqState::new(
            RegisterLayout::new([("X", 2), ("Y", 2)]).unwrap(),
            RegisterLayout::empty(),
            atoms,
        )
        .unwrap()
    }

    #[test]
    fn product_state_gives_one_minus_eps() {
        let s = classical_pair([[0.12, 0.28], [0.18, 0.42]]);
        let v = ht_mutual_info(&s, &["X"], &["Y"], 0.1).unwrap();
        assert!((v - (1.0f64 / 0.9).log2()).abs() < 1e-9);
        assert!(max_mutual_info(&s, &["X"], &["Y"]).unwrap().abs() < 1e-12);
    }

    #[test]
    fn correlated_bits() {
        let s = classical_pair([[0.5, 0.0], [0.0, 0.5]]);
        let v = ht_mutual_info(&s, &["X"], &["Y"], 0.25).unwrap();
        let oracle = classical_np_oracle(&[0.5, 0.0, 0.0, 0.5], &[0.25; 4], 0.25)
            .unwrap()
            .divergence;
        assert!((v - oracle).abs() < 1e-9);
        assert!((v - (8.0f64 / 3.0).log2()).abs() < 1e-6);
        let m = max_mutual_info(&s, &["X"], &["Y"]).unwrap();
        assert!((m - 1.0).abs() < 1e-12);
    }

    #[test]
    fn classical_versus_independent_quantum_register() {
        let atoms = (0..2)
            .map(|x| Atom {
                values: vec![x],
                prob: 0.5,
                state: DensityOperator::maximally_mixed(2),
            })
            .collect();
        let s = CqState::new(
            RegisterLayout::new([("X", 2)]).unwrap(),
            RegisterLayout::new([("B", 2)]).unwrap(),
            atoms,
        )
        .unwrap();
        let eps = 0.3;
        let v = ht_mutual_info(&s, &["X"], &["B"], eps).unwrap();
        assert!((v - (1.0 / (1.0 - eps)).log2()).abs() < 1e-9);
    }

    #[test]
    fn quantum_registers_are_reordered_consistently() {
        // B then A in the layout; ask for A against B
        let a = DensityOperator::from_diagonal(&[0.3, 0.7]).unwrap();
        let b = DensityOperator::from_diagonal(&[0.6, 0.1, 0.3]).unwrap();
        let s = CqState::new(
            RegisterLayout::new([("X", 1)]).unwrap(),
            RegisterLayout::new([("B", 3), ("A", 2)]).unwrap(),
            vec![Atom {
                values: vec![0],
                prob: 1.0,
                state: tensor(&b, &a),
            }],
        )
        .unwrap();
        let v = ht_mutual_info(&s, &["A"], &["B"], 0.2).unwrap();
        assert!((v - (1.0f64 / 0.8).log2()).abs() < 1e-9);
        assert!(max_mutual_info(&s, &["A"], &["B"]).unwrap().abs() < 1e-9);
    }

    #[test]
    fn overlapping_parts_rejected() {
        let s = classical_pair([[0.5, 0.0], [0.0, 0.5]]);
        assert!(matches!(
            ht_mutual_info(&s, &["X"], &["X"], 0.1),
            Err(Error::OverlappingParts(_))
        ));
        assert!(matches!(
            ht_mutual_info(&s, &["X"], &["W"], 0.1),
            Err(Error::UnknownRegister(_))
        ));
    }

    #[test]
    fn max_min_examples() {
        let per = [(0.95, 1.0), (0.05, 0.2)];
        let v = max_min_over_supports(&per, 0.3, DistanceConvention::Standard).unwrap();
        assert_eq!(v, 1.0);
        let v = max_min_over_supports(&per, 1e-6, DistanceConvention::Standard).unwrap();
        assert_eq!(v, 0.2);
        let v = max_min_over_supports(&[(1.0, 0.7)], 0.5, DistanceConvention::Standard).unwrap();
        assert_eq!(v, 0.7);
    }

    #[test]
    fn max_min_rejects_large_alphabet() {
        let per = vec![(1.0 / 21.0, 0.0); 21];
        assert!(matches!(
            max_min_over_supports(&per, 0.1, DistanceConvention::Standard),
            Err(Error::AlphabetTooLarge { .. })
        ));
    }

    #[test]
    fn deterministic_conditioning_equals_unconditional() {
        let table = [[0.4, 0.1], [0.1, 0.4]];
        let mut atoms = Vec::new();
        for (x, row) in table.iter().enumerate() {
            for (y, &p) in row.iter().enumerate() {
                atoms.push(Atom {
                    values: vec![0, x, y],
                    prob: p,
                    state: DensityOperator::maximally_mixed(1),
                });
            }
        }
        let s = CqState::new(
            RegisterLayout::new([("Q", 1), ("X", 2), ("Y", 2)]).unwrap(),
            RegisterLayout::empty(),
            atoms,
        )
        .unwrap();
        let plain = ht_mutual_info(&s, &["X"], &["Y"], 0.2).unwrap();
        let cond = cond_smooth_ht_mi(&s, &["X"], &["Y"], "Q", 0.2, DistanceConvention::Standard).unwrap();
        assert!((plain - cond).abs() < 1e-12);
        let smoothing = Smoothing::new(SmoothingStrategy::None, DistanceConvention::Standard);
        let plain = max_mutual_info(&s, &["X"], &["Y"]).unwrap();
        let cond = cond_smooth_max_mi(&s, &["X"], &["Y"], "Q", 0.2, smoothing).unwrap();
        assert!((plain - cond).abs() < 1e-12);
    }
}
