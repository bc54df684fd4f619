//! Seeded generators for density operators, unitaries and channels.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::channel::{ChannelSpec, OutputDims};
use crate::operator::{ComplexMatrix, DensityOperator, C64};

fn gaussian_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        C64::new(re, im)
    })
}

/// Haar-random unitary via QR of a Ginibre matrix with phase correction.
pub fn random_unitary(rng: &mut impl Rng, dim: usize) -> ComplexMatrix {
    let qr = gaussian_matrix(rng, dim, dim).qr();
    let (mut q, r) = (qr.q(), qr.r());
    for k in 0..dim {
        let d = r[(k, k)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        let mut col = q.column_mut(k);
        col *= phase;
    }
    q
}

/// Random probability vector from normalized exponentials, optionally with a zero
/// entry count.
pub fn random_distribution(rng: &mut impl Rng, len: usize, zeros: usize) -> Vec<f64> {
    let mut p: Vec<f64> = (0..len).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    for k in 0..zeros.min(len.saturating_sub(1)) {
        p[k] = 0.0;
    }
    let total: f64 = p.iter().sum();
    p.iter_mut().for_each(|x| *x /= total);
    p
}

/// Random density operator `G G† / Tr(G G†)` with a Ginibre matrix of the given rank.
pub fn random_density(rng: &mut impl Rng, dim: usize, rank: usize) -> DensityOperator {
    let g = gaussian_matrix(rng, dim, rank.clamp(1, dim));
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    DensityOperator::new(m / C64::new(tr, 0.0)).expect("positive by construction")
}

/// Random full-rank density operator.
pub fn random_full_rank(rng: &mut impl Rng, dim: usize) -> DensityOperator {
    random_density(rng, dim, dim)
}

/// Pair diagonal in a shared random basis; returns the two spectra as well.
pub fn random_commuting_pair(
    rng: &mut impl Rng,
    dim: usize,
) -> (DensityOperator, DensityOperator, Vec<f64>, Vec<f64>) {
    let p = random_distribution(rng, dim, 0);
    let q = random_distribution(rng, dim, 0);
    let u = random_unitary(rng, dim);
    let rho = DensityOperator::from_diagonal(&p).expect("valid").conjugate(&u);
    let sigma = DensityOperator::from_diagonal(&q).expect("valid").conjugate(&u);
    (rho, sigma, p, q)
}

/// Channel with a random output state for every input pair.
pub fn random_channel(rng: &mut impl Rng, n1: usize, n2: usize, dims: OutputDims) -> ChannelSpec {
    let states = (0..n1)
        .map(|_| (0..n2).map(|_| random_full_rank(rng, dims.total())).collect())
        .collect();
    let symbols = |n: usize| (0..n).map(|i| i.to_string()).collect();
    ChannelSpec::new("random", symbols(n1), symbols(n2), dims, states).expect("valid by construction")
}
