//! Entropies and relative entropies of single density operators, plus the
//! classical Neyman–Pearson solver used as an oracle for commuting inputs.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::{DensityOperator, Eigen, EIG_CLAMP};

fn check_dims(rho: &DensityOperator, sigma: &DensityOperator) -> Result<()> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            got: sigma.dim(),
        });
    }
    Ok(())
}

fn clamp(l: f64) -> f64 {
    if l <= EIG_CLAMP {
        0.0
    } else {
        l
    }
}

/// h_b(ε) = −ε log₂ ε − (1−ε) log₂(1−ε).
pub fn binary_entropy(eps: f64) -> Result<f64> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::OutOfRange {
            name: "eps",
            value: eps,
        });
    }
    Ok(-eps * eps.log2() - (1.0 - eps) * (1.0 - eps).log2())
}

/// Shannon entropy in bits of a probability vector, with 0 log 0 = 0.
pub fn shannon_entropy(p: &[f64]) -> f64 {
    p.iter()
        .map(|&x| clamp(x))
        .filter(|&x| x > 0.0)
        .map(|x| -x * x.log2())
        .sum()
}

pub fn von_neumann_entropy(rho: &DensityOperator) -> f64 {
    shannon_entropy(&rho.eigen().values)
}

/// Eigenvalues of `sigma` and the weight `ρ` places on each eigenvector.
fn weights_in_eigenbasis(rho: &DensityOperator, sigma: &DensityOperator) -> (Eigen, Vec<f64>) {
    let e = sigma.eigen();
    let w = e.diagonal_weights(rho.matrix());
    (e, w)
}

/// Weight of `rho` outside the clamped support of `sigma`.
pub(crate) fn weight_outside_support(rho: &DensityOperator, sigma: &DensityOperator) -> f64 {
    let (e, w) = weights_in_eigenbasis(rho, sigma);
    e.values
        .iter()
        .zip(&w)
        .filter(|(&l, _)| clamp(l) == 0.0)
        .map(|(_, &x)| x)
        .sum()
}

/// Umegaki relative entropy in bits; `+∞` when the support condition fails.
pub fn relative_entropy(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    check_dims(rho, sigma)?;
    let (e, w) = weights_in_eigenbasis(rho, sigma);
    let mut cross = 0.0;
    for (&l, &x) in e.values.iter().zip(&w) {
        let l = clamp(l);
        if l == 0.0 {
            if x >= EIG_CLAMP {
                return Ok(f64::INFINITY);
            }
        } else {
            cross += x * l.log2();
        }
    }
    Ok((-von_neumann_entropy(rho) - cross).max(0.0))
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha == 1.0 {
        return Err(Error::RenyiOrderOne);
    }
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::OutOfRange {
            name: "alpha",
            value: alpha,
        });
    }
    Ok(())
}

/// (1/(α−1)) log₂ Tr{ρ^α σ^{1−α}}.
pub fn renyi_relative_entropy(
    rho: &DensityOperator,
    sigma: &DensityOperator,
    alpha: f64,
) -> Result<f64> {
    check_alpha(alpha)?;
    check_dims(rho, sigma)?;
    if alpha > 1.0 && weight_outside_support(rho, sigma) >= EIG_CLAMP {
        return Ok(f64::INFINITY);
    }
    let rho_pow = rho.eigen().apply(|l| {
        let l = clamp(l);
        if l == 0.0 {
            0.0
        } else {
            l.powf(alpha)
        }
    });
    let sigma_pow = sigma.eigen().apply(|l| {
        let l = clamp(l);
        if l == 0.0 {
            0.0
        } else {
            l.powf(1.0 - alpha)
        }
    });
    let overlap = (rho_pow * sigma_pow).trace().re;
    if overlap <= 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(overlap.log2() / (alpha - 1.0))
}

/// (1/(1−α)) log₂ Tr{ρ^α}.
pub fn renyi_entropy(rho: &DensityOperator, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let s: f64 = rho
        .eigen()
        .values
        .iter()
        .map(|&l| clamp(l))
        .filter(|&l| l > 0.0)
        .map(|l| l.powf(alpha))
        .sum();
    Ok(s.log2() / (1.0 - alpha))
}

/// Right-hand side of D_H^ε ≤ (D + h_b(ε)) / (1 − ε).
pub fn fact_bound(rho: &DensityOperator, sigma: &DensityOperator, eps: f64) -> Result<f64> {
    let hb = binary_entropy(eps)?;
    let d = relative_entropy(rho, sigma)?;
    Ok((d + hb) / (1.0 - eps))
}

/// Optimal classical test: minimal type-II error and its divergence.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NpOutcome {
    pub beta: f64,
    pub divergence: f64,
}

fn check_distribution(p: &[f64], what: &str) -> Result<()> {
    if p.is_empty() {
        return Err(Error::InvalidDistribution(format!("{what} is empty")));
    }
    if let Some(x) = p.iter().find(|x| !(**x >= 0.0) || !x.is_finite()) {
        return Err(Error::InvalidDistribution(format!(
            "{what} has invalid entry {x}"
        )));
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidDistribution(format!(
            "{what} sums to {total}"
        )));
    }
    Ok(())
}

/// Exact classical Neyman–Pearson optimum by greedy likelihood-ratio filling.
///
/// Atoms are taken in decreasing order of `p/q` (atoms with `q = 0` first) until
/// the accepted `p` mass reaches `1 − eps`; the boundary atom is split.
pub fn classical_np_oracle(p: &[f64], q: &[f64], eps: f64) -> Result<NpOutcome> {
    check_distribution(p, "p")?;
    check_distribution(q, "q")?;
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch {
            expected: p.len(),
            got: q.len(),
        });
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::OutOfRange {
            name: "eps",
            value: eps,
        });
    }
    let mut atoms: Vec<(f64, f64)> = p
        .iter()
        .zip(q)
        .filter(|(&pi, _)| pi > 0.0)
        .map(|(&pi, &qi)| (pi, qi))
        .collect();
    // compare p_i/q_i > p_j/q_j as p_i q_j > p_j q_i, which also orders q = 0 first
    atoms.sort_by(|a, b| (b.0 * a.1).partial_cmp(&(a.0 * b.1)).unwrap());
    let need = 1.0 - eps;
    let mut accepted = 0.0;
    let mut beta = 0.0;
    for (pi, qi) in atoms {
        if accepted + pi >= need {
            beta += (need - accepted) / pi * qi;
            break;
        }
        accepted += pi;
        beta += qi;
    }
    let divergence = if beta > 0.0 {
        -beta.log2()
    } else {
        f64::INFINITY
    };
    Ok(NpOutcome { beta, divergence })
}
