//! Classical-quantum states stored as labelled probability atoms.

use std::collections::BTreeMap;

use super::block::BlockPair;
use crate::error::{Error, Result};
use crate::operator::{
    partial_trace_matrix, permute_subsystems, validate_density, ComplexMatrix, DensityOperator,
    RegisterLayout, C64,
};

/// Tolerance on the total probability of a classical-quantum state.
pub const TOL_PROB: f64 = 1e-9;

/// One classical value combination with its probability and conditional state.
#[derive(Clone, Debug)]
pub struct Atom {
    pub values: Vec<usize>,
    pub prob: f64,
    pub state: DensityOperator,
}

/// `Σ_x p(x) |x⟩⟨x| ⊗ ρ_x` over named classical and quantum registers.
#[derive(Clone, Debug)]
pub struct CqState {
    classical: RegisterLayout,
    quantum: RegisterLayout,
    atoms: Vec<Atom>,
}

/// Which side of a bipartition a register belongs to.
struct Side {
    classical: Vec<usize>,
    quantum_mask: Vec<bool>,
}

fn scalar_one() -> ComplexMatrix {
    ComplexMatrix::from_element(1, 1, C64::new(1.0, 0.0))
}

impl CqState {
    /// Validates probabilities, alphabets and conditional states. Atoms with zero
    /// probability are dropped and repeated value combinations are merged.
    pub fn new(classical: RegisterLayout, quantum: RegisterLayout, atoms: Vec<Atom>) -> Result<Self> {
        for name in classical.names() {
            if quantum.contains(name) {
                return Err(Error::DuplicateRegister(name.to_string()));
            }
        }
        let sizes = classical.dims();
        let qdim = quantum.total_dim();
        let mut total = 0.0;
        let mut merged: BTreeMap<Vec<usize>, (f64, ComplexMatrix)> = BTreeMap::new();
        for atom in atoms {
            if atom.values.len() != sizes.len() {
                return Err(Error::DimensionMismatch {
                    expected: sizes.len(),
                    got: atom.values.len(),
                });
            }
            if let Some((v, s)) = atom.values.iter().zip(&sizes).find(|(v, s)| v >= s) {
                return Err(Error::InvalidDistribution(format!(
                    "value {v} outside alphabet of size {s}"
                )));
            }
            if !(atom.prob >= 0.0) || !atom.prob.is_finite() {
                return Err(Error::InvalidDistribution(format!(
                    "negative or non-finite probability {}",
                    atom.prob
                )));
            }
            if atom.state.dim() != qdim {
                return Err(Error::DimensionMismatch {
                    expected: qdim,
                    got: atom.state.dim(),
                });
            }
            total += atom.prob;
            if atom.prob == 0.0 {
                continue;
            }
            let weighted = atom.state.matrix() * C64::new(atom.prob, 0.0);
            merged
                .entry(atom.values)
                .and_modify(|(p, m)| {
                    *p += atom.prob;
                    *m += &weighted;
                })
                .or_insert((atom.prob, weighted));
        }
        if (total - 1.0).abs() > TOL_PROB {
            return Err(Error::InvalidDistribution(format!(
                "probabilities sum to {total}"
            )));
        }
        let atoms = merged
            .into_iter()
            .map(|(values, (prob, m))| {
                let state = m * C64::new(1.0 / prob, 0.0);
                validate_density(&state)?;
                Ok(Atom {
                    values,
                    prob,
                    state: DensityOperator::from_matrix_unchecked(state),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            classical,
            quantum,
            atoms,
        })
    }

    pub fn classical(&self) -> &RegisterLayout {
        &self.classical
    }

    pub fn quantum(&self) -> &RegisterLayout {
        &self.quantum
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn has_register(&self, name: &str) -> bool {
        self.classical.contains(name) || self.quantum.contains(name)
    }

    fn check_known(&self, names: &[&str]) -> Result<()> {
        match names.iter().find(|n| !self.has_register(n)) {
            Some(n) => Err(Error::UnknownRegister(n.to_string())),
            None => Ok(()),
        }
    }

    /// Average quantum state `Σ_x p(x) ρ_x`.
    pub fn average_state(&self) -> DensityOperator {
        let d = self.quantum.total_dim();
        let mut m = ComplexMatrix::zeros(d, d);
        for a in &self.atoms {
            m += a.state.matrix() * C64::new(a.prob, 0.0);
        }
        DensityOperator::from_matrix_unchecked(m)
    }

    /// Probabilities of the classical registers named in `keep`, keyed by their values.
    pub fn classical_marginal(&self, keep: &[&str]) -> Result<BTreeMap<Vec<usize>, f64>> {
        let state = self.marginal(keep)?;
        Ok(state
            .atoms
            .iter()
            .map(|a| (a.values.clone(), a.prob))
            .collect())
    }

    /// Reduced state on the named registers, classical or quantum; order follows
    /// the original layouts.
    pub fn marginal(&self, keep: &[&str]) -> Result<CqState> {
        self.check_known(keep)?;
        let cmask: Vec<bool> = self.classical.names().map(|n| keep.contains(&n)).collect();
        let qmask: Vec<bool> = self.quantum.names().map(|n| keep.contains(&n)).collect();
        let qdims = self.quantum.dims();
        let keep_any_quantum = qmask.iter().any(|&k| k);
        let mut merged: BTreeMap<Vec<usize>, (f64, ComplexMatrix)> = BTreeMap::new();
        for a in &self.atoms {
            let values: Vec<usize> = a
                .values
                .iter()
                .zip(&cmask)
                .filter(|(_, &k)| k)
                .map(|(v, _)| *v)
                .collect();
            let reduced = if keep_any_quantum {
                partial_trace_matrix(a.state.matrix(), &qdims, &qmask)
            } else {
                scalar_one()
            };
            let weighted = reduced * C64::new(a.prob, 0.0);
            merged
                .entry(values)
                .and_modify(|(p, m)| {
                    *p += a.prob;
                    *m += &weighted;
                })
                .or_insert((a.prob, weighted));
        }
        let atoms = merged
            .into_iter()
            .map(|(values, (prob, m))| Atom {
                values,
                prob,
                state: DensityOperator::from_matrix_unchecked(m * C64::new(1.0 / prob, 0.0)),
            })
            .collect();
        Ok(CqState {
            classical: self.classical.restrict(&cmask),
            quantum: self.quantum.restrict(&qmask),
            atoms,
        })
    }

    /// State conditioned on a classical register taking `value`; the register is removed.
    pub fn condition_on(&self, register: &str, value: usize) -> Result<CqState> {
        let idx = self
            .classical
            .position(register)
            .ok_or_else(|| Error::UnknownRegister(register.to_string()))?;
        let selected: Vec<&Atom> = self.atoms.iter().filter(|a| a.values[idx] == value).collect();
        let mass: f64 = selected.iter().map(|a| a.prob).sum();
        if mass <= 0.0 {
            return Err(Error::InvalidDistribution(format!(
                "{register} = {value} has zero probability"
            )));
        }
        let mask: Vec<bool> = (0..self.classical.len()).map(|i| i != idx).collect();
        let atoms = selected
            .into_iter()
            .map(|a| Atom {
                values: a
                    .values
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != idx)
                    .map(|(_, v)| *v)
                    .collect(),
                prob: a.prob / mass,
                state: a.state.clone(),
            })
            .collect();
        Ok(CqState {
            classical: self.classical.restrict(&mask),
            quantum: self.quantum.clone(),
            atoms,
        })
    }

    /// Probability of each value of a classical register (zero entries included).
    pub fn register_distribution(&self, register: &str) -> Result<Vec<f64>> {
        let idx = self
            .classical
            .position(register)
            .ok_or_else(|| Error::UnknownRegister(register.to_string()))?;
        let mut p = vec![0.0; self.classical.dims()[idx]];
        for a in &self.atoms {
            p[a.values[idx]] += a.prob;
        }
        Ok(p)
    }

    fn side(&self, names: &[&str]) -> Side {
        Side {
            classical: self
                .classical
                .names()
                .enumerate()
                .filter(|(_, n)| names.contains(n))
                .map(|(i, _)| i)
                .collect(),
            quantum_mask: self.quantum.names().map(|n| names.contains(&n)).collect(),
        }
    }

    /// Block decomposition of `ρ_AB` against `ρ_A ⊗ ρ_B`.
    ///
    /// One block per pair of classical values `(a, b)`; each block lives on the
    /// quantum registers of `A` followed by those of `B`.
    pub fn joint_blocks(&self, part_a: &[&str], part_b: &[&str]) -> Result<Vec<BlockPair>> {
        self.check_known(part_a)?;
        self.check_known(part_b)?;
        if let Some(n) = part_a.iter().find(|n| part_b.contains(n)) {
            return Err(Error::OverlappingParts(n.to_string()));
        }
        if part_a.is_empty() || part_b.is_empty() {
            return Err(Error::UnknownRegister(String::from("<empty part>")));
        }
        let a = self.side(part_a);
        let b = self.side(part_b);
        let qdims = self.quantum.dims();
        let ab_mask: Vec<bool> = a
            .quantum_mask
            .iter()
            .zip(&b.quantum_mask)
            .map(|(x, y)| *x || *y)
            .collect();
        // order of the kept quantum registers, then the permutation putting A first
        let kept: Vec<usize> = (0..qdims.len()).filter(|&i| ab_mask[i]).collect();
        let kept_dims: Vec<usize> = kept.iter().map(|&i| qdims[i]).collect();
        let order: Vec<usize> = kept
            .iter()
            .enumerate()
            .filter(|(_, &i)| a.quantum_mask[i])
            .chain(kept.iter().enumerate().filter(|(_, &i)| b.quantum_mask[i]))
            .map(|(pos, _)| pos)
            .collect();
        let a_in_kept: Vec<bool> = kept.iter().map(|&i| a.quantum_mask[i]).collect();
        let b_in_kept: Vec<bool> = kept.iter().map(|&i| b.quantum_mask[i]).collect();
        let dim: usize = kept_dims.iter().product();

        let pick = |values: &[usize], idx: &[usize]| -> Vec<usize> {
            idx.iter().map(|&i| values[i]).collect()
        };

        type Weighted = (f64, ComplexMatrix);
        let mut joint: BTreeMap<(Vec<usize>, Vec<usize>), Weighted> = BTreeMap::new();
        let mut marg_a: BTreeMap<Vec<usize>, Weighted> = BTreeMap::new();
        let mut marg_b: BTreeMap<Vec<usize>, Weighted> = BTreeMap::new();
        let accumulate = |map: &mut BTreeMap<Vec<usize>, Weighted>, key: Vec<usize>, p: f64, m: ComplexMatrix| {
            map.entry(key)
                .and_modify(|(q, acc)| {
                    *q += p;
                    *acc += &m;
                })
                .or_insert((p, m));
        };
        for atom in &self.atoms {
            let va = pick(&atom.values, &a.classical);
            let vb = pick(&atom.values, &b.classical);
            let reduced = partial_trace_matrix(atom.state.matrix(), &qdims, &ab_mask);
            let on_a = partial_trace_matrix(&reduced, &kept_dims, &a_in_kept);
            let on_b = partial_trace_matrix(&reduced, &kept_dims, &b_in_kept);
            let ordered = permute_subsystems(&reduced, &kept_dims, &order);
            accumulate(&mut marg_a, va.clone(), atom.prob, on_a * C64::new(atom.prob, 0.0));
            accumulate(&mut marg_b, vb.clone(), atom.prob, on_b * C64::new(atom.prob, 0.0));
            joint
                .entry((va, vb))
                .and_modify(|(q, acc)| {
                    *q += atom.prob;
                    *acc += &ordered * C64::new(atom.prob, 0.0);
                })
                .or_insert_with(|| (atom.prob, ordered * C64::new(atom.prob, 0.0)));
        }

        let mut blocks = Vec::with_capacity(marg_a.len() * marg_b.len());
        for (va, (_, sa)) in &marg_a {
            for (vb, (_, sb)) in &marg_b {
                let sigma = sa.kronecker(sb);
                let rho = match joint.get(&(va.clone(), vb.clone())) {
                    Some((_, m)) => m.clone(),
                    None => ComplexMatrix::zeros(dim, dim),
                };
                blocks.push(BlockPair::new(rho, sigma));
            }
        }
        Ok(blocks)
    }

    /// Dense embedding with every classical register as a diagonal quantum register.
    ///
    /// The layout lists the classical registers first, then the quantum ones.
    pub fn embedded(&self) -> (DensityOperator, RegisterLayout) {
        let layout = self
            .classical
            .concat(&self.quantum)
            .expect("classical and quantum names are disjoint");
        let cdims = self.classical.dims();
        let qdim = self.quantum.total_dim();
        let total = layout.total_dim();
        let mut m = ComplexMatrix::zeros(total, total);
        for a in &self.atoms {
            let mut cidx = 0;
            for (v, d) in a.values.iter().zip(&cdims) {
                cidx = cidx * d + v;
            }
            let offset = cidx * qdim;
            for i in 0..qdim {
                for j in 0..qdim {
                    m[(offset + i, offset + j)] += a.state.matrix()[(i, j)] * a.prob;
                }
            }
        }
        (DensityOperator::from_matrix_unchecked(m), layout)
    }
}
