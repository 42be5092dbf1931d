use std::sync::OnceLock;

use super::matrix::{ComplexMatrix, C64};
use crate::error::{Error, Result};

/// The standard Gell-Mann matrix `λ_i`, `i` in `1..=8`.
pub fn gell_mann(i: usize) -> Result<ComplexMatrix> {
    if !(1..=8).contains(&i) {
        return Err(Error::InvalidParameter(format!("Gell-Mann index {i} outside 1..=8")));
    }
    Ok(gell_mann_set()[i - 1].clone())
}

/// `λ_1 … λ_8`, in order.
pub fn gell_mann_set() -> &'static [ComplexMatrix; 8] {
    static SET: OnceLock<[ComplexMatrix; 8]> = OnceLock::new();
    SET.get_or_init(|| std::array::from_fn(|k| build(k + 1)))
}

fn build(i: usize) -> ComplexMatrix {
    let one = C64::new(1.0, 0.0);
    let im = C64::new(0.0, 1.0);
    let mut m = ComplexMatrix::zeros(3);
    let mut sym = |a: usize, b: usize| {
        m[(a, b)] = one;
        m[(b, a)] = one;
    };
    match i {
        1 => sym(0, 1),
        4 => sym(0, 2),
        6 => sym(1, 2),
        _ => {}
    }
    let mut anti = |a: usize, b: usize| {
        m[(a, b)] = -im;
        m[(b, a)] = im;
    };
    match i {
        2 => anti(0, 1),
        5 => anti(0, 2),
        7 => anti(1, 2),
        _ => {}
    }
    match i {
        3 => {
            m[(0, 0)] = one;
            m[(1, 1)] = -one;
        }
        8 => {
            let s = 1.0 / 3f64.sqrt();
            m[(0, 0)] = one * s;
            m[(1, 1)] = one * s;
            m[(2, 2)] = one * (-2.0 * s);
        }
        _ => {}
    }
    m
}
