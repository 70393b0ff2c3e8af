//! Shared fixtures for the kernel benchmarks.

use char3_core::composition::split_composition;
use char3_core::structurable::{tensor_structurable, StructurableAlgebra};
use char3_core::{Field, Matrix};

pub const F: Field = Field::three();

/// `C_{d1} ⊗ C_{d2}` over GF(3).
pub fn tensor(d1: usize, d2: usize) -> StructurableAlgebra {
    let c1 = split_composition(d1, F).expect("composition dimension");
    let c2 = split_composition(d2, F).expect("composition dimension");
    tensor_structurable(&c1, &c2).expect("tensor product")
}

/// Dense `n × n` matrix from a linear congruential stream, deterministic in `seed`.
pub fn dense_matrix(n: usize, seed: u64) -> Matrix {
    let mut x = seed;
    let data = (0..n * n)
        .map(|_| {
            x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((x >> 33) % 3) as u8
        })
        .collect();
    Matrix::from_flat(F, n, n, data)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_are_deterministic() {
        assert_eq!(dense_matrix(20, 1), dense_matrix(20, 1));
        assert_ne!(dense_matrix(20, 1), dense_matrix(20, 2));
        assert_eq!(tensor(8, 1).dim(), 8);
    }
}
