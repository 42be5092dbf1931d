//! Random states and unitaries for property checks.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::linalg::{kron, ComplexMatrix, DensityMatrix, C64};

fn gaussian(rng: &mut impl Rng) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-random unit vector.
pub fn random_pure_state(rng: &mut impl Rng, dim: usize) -> Vec<C64> {
    let mut v: Vec<C64> = (0..dim).map(|_| gaussian(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.iter_mut().for_each(|z| *z /= norm);
    v
}

pub fn random_pure_density(rng: &mut impl Rng, dim: usize) -> DensityMatrix {
    DensityMatrix::from_parts_unchecked(ComplexMatrix::projector(&random_pure_state(rng, dim)), vec![dim])
}

/// `G G† / tr(G G†)` for a `dim × rank` Ginibre matrix `G`.
pub fn random_density_with_rank(rng: &mut impl Rng, dim: usize, rank: usize) -> DensityMatrix {
    let cols: Vec<Vec<C64>> = (0..rank).map(|_| (0..dim).map(|_| gaussian(rng)).collect()).collect();
    let mut m = ComplexMatrix::zeros(dim);
    for c in &cols {
        m.add_scaled(C64::new(1.0, 0.0), &ComplexMatrix::projector(c));
    }
    let tr = m.trace().re;
    DensityMatrix::from_parts_unchecked(m.scale_real(1.0 / tr).hermitian_part(), vec![dim])
}

/// Full-rank random density matrix.
pub fn random_density(rng: &mut impl Rng, dim: usize) -> DensityMatrix {
    random_density_with_rank(rng, dim, dim)
}

/// Two-qutrit state with a random rank in `1..=9`.
pub fn random_two_qutrit(rng: &mut impl Rng) -> DensityMatrix {
    let rank = rng.random_range(1..=9);
    let m = random_density_with_rank(rng, 9, rank).into_matrix();
    DensityMatrix::from_parts_unchecked(m, vec![3, 3])
}

/// Convex mixture of `count` random pure states.
pub fn random_mixture(rng: &mut impl Rng, dim: usize, count: usize) -> DensityMatrix {
    let weights: Vec<f64> = (0..count).map(|_| rng.random::<f64>() + 1e-3).collect();
    let total: f64 = weights.iter().sum();
    let mut m = ComplexMatrix::zeros(dim);
    for w in weights {
        let psi = random_pure_state(rng, dim);
        m.add_scaled(C64::new(w / total, 0.0), &ComplexMatrix::projector(&psi));
    }
    DensityMatrix::from_parts_unchecked(m.hermitian_part(), vec![dim])
}

/// `ρ_A ⊗ ρ_B` with random qutrit marginals.
pub fn random_product_state(rng: &mut impl Rng) -> DensityMatrix {
    let (ra, rb) = (rng.random_range(1..=3), rng.random_range(1..=3));
    let a = random_density_with_rank(rng, 3, ra);
    let b = random_density_with_rank(rng, 3, rb);
    DensityMatrix::from_parts_unchecked(kron(a.matrix(), b.matrix()), vec![3, 3])
}

/// Mixture of `terms` random product states.
pub fn random_separable(rng: &mut impl Rng, terms: usize) -> DensityMatrix {
    let weights: Vec<f64> = (0..terms).map(|_| rng.random::<f64>() + 1e-3).collect();
    let total: f64 = weights.iter().sum();
    let mut m = ComplexMatrix::zeros(9);
    for w in weights {
        m.add_scaled(C64::new(w / total, 0.0), random_product_state(rng).matrix());
    }
    DensityMatrix::from_parts_unchecked(m.hermitian_part(), vec![3, 3])
}

/// Haar-random unitary from Gram-Schmidt on a Ginibre matrix.
pub fn random_unitary(rng: &mut impl Rng, dim: usize) -> ComplexMatrix {
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(dim);
    while cols.len() < dim {
        let mut v: Vec<C64> = (0..dim).map(|_| gaussian(rng)).collect();
        for u in &cols {
            let proj: C64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            v.iter_mut().zip(u).for_each(|(x, y)| *x -= proj * y);
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-8 {
            continue;
        }
        v.iter_mut().for_each(|z| *z /= norm);
        cols.push(v);
    }
    ComplexMatrix::from_fn(dim, |i, j| cols[j][i])
}
