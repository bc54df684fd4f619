use crate::operator::{ComplexMatrix, DensityOperator};

/// One diagonal block of a block-diagonal pair of operators.
///
/// Classical registers make both arguments of a divergence block diagonal, one
/// block per classical value. The blocks carry their probability weights, so the
/// `rho` blocks of a pair list sum to unit trace.
#[derive(Clone, Debug)]
pub struct BlockPair {
    pub rho: ComplexMatrix,
    pub sigma: ComplexMatrix,
}

impl BlockPair {
    pub fn new(rho: ComplexMatrix, sigma: ComplexMatrix) -> Self {
        debug_assert_eq!(rho.shape(), sigma.shape());
        Self { rho, sigma }
    }

    pub fn from_operators(rho: &DensityOperator, sigma: &DensityOperator) -> Self {
        Self::new(rho.matrix().clone(), sigma.matrix().clone())
    }

    pub fn dim(&self) -> usize {
        self.rho.nrows()
    }

    /// Scalar entries of a 1×1 block.
    pub(crate) fn scalars(&self) -> Option<(f64, f64)> {
        (self.dim() == 1).then(|| (self.rho[(0, 0)].re, self.sigma[(0, 0)].re))
    }

    /// Largest entry of the commutator `[ρ, σ]`.
    pub fn commutator_norm(&self) -> f64 {
        let c = &self.rho * &self.sigma - &self.sigma * &self.rho;
        c.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}
