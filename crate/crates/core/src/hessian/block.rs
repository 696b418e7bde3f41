use super::cubic::cubic_form;
use super::eval::hessian_at_unit;
use super::point::Point12;
use crate::error::{domain, Result};
use crate::scalar::Scalar;
use crate::spectra::SymMatrix;

/// Coordinates `(r0, r1, s0, s1, t0, t1)` of `C³ ⊂ H³`.
pub const COMPLEX_COORDS: [usize; 6] = [0, 1, 4, 5, 8, 9];
/// Coordinates `(r2, r3, s2, s3, t2, t3)` of the `j`-part.
pub const J_COORDS: [usize; 6] = [2, 3, 6, 7, 10, 11];

#[derive(Clone, Debug)]
pub struct BlockDecomposition<T> {
    /// Hessian of the restriction of `w` to `C³`.
    pub a6: SymMatrix<T>,
    /// Block on the `j`-part; equals `N₆ − W·I`.
    pub m6: SymMatrix<T>,
    /// Entries of `H(a)` coupling the two blocks (all zero for complex sites).
    pub off_block: Vec<T>,
}

/// Splits `H(a)` (δ = 0) at a unit site of `C³` into its two 6×6 blocks.
pub fn block_decomposition<T: Scalar>(a: &Point12<T>) -> Result<BlockDecomposition<T>> {
    a.require_unit()?;
    if !a.is_complex() {
        return domain("block decomposition requires r, s, t in C (no j, k components)");
    }
    let h = hessian_at_unit(a, &T::zero());
    let a6 = h.permuted(&COMPLEX_COORDS);
    let m6 = h.permuted(&J_COORDS);
    let off_block = COMPLEX_COORDS
        .iter()
        .flat_map(|&i| J_COORDS.iter().map(move |&j| (i, j)))
        .map(|(i, j)| h.get(i, j).clone())
        .collect();
    Ok(BlockDecomposition { a6, m6, off_block })
}

/// The explicit 6×6 matrix `N₆` in the coordinates `(r2, r3, s2, s3, t2, t3)`.
pub fn n6_display<T: Scalar>(a: &Point12<T>) -> SymMatrix<T> {
    let (r0, r1) = (a.r.q0.clone(), a.r.q1.clone());
    let (s0, s1) = (a.s.q0.clone(), a.s.q1.clone());
    let (t0, t1) = (a.t.q0.clone(), a.t.q1.clone());
    let z = T::zero();
    let rows: [[T; 6]; 6] = [
        [z.clone(), z.clone(), -t0.clone(), -t1.clone(), -s0.clone(), s1.clone()],
        [z.clone(), z.clone(), t1.clone(), -t0.clone(), -s1.clone(), -s0.clone()],
        [-t0.clone(), t1.clone(), z.clone(), z.clone(), -r0.clone(), -r1.clone()],
        [-t1.clone(), -t0.clone(), z.clone(), z.clone(), r1.clone(), -r0.clone()],
        [-s0.clone(), -s1.clone(), -r0.clone(), r1.clone(), z.clone(), z.clone()],
        [s1, -s0, -r1, -r0, z.clone(), z],
    ];
    SymMatrix::from_fn(6, |i, j| rows[i][j].clone())
}

/// `N₆ = M₆ + W·I` computed from the Hessian block.
pub fn n6_from_block<T: Scalar>(a: &Point12<T>, block: &BlockDecomposition<T>) -> SymMatrix<T> {
    let w = cubic_form(a);
    SymMatrix::from_fn(6, |i, j| {
        let v = block.m6.get(i, j).clone();
        if i == j {
            v + w.clone()
        } else {
            v
        }
    })
}
