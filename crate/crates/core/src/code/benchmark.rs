use super::{circulant, CssCode};
use crate::error::{Error, Result};
use crate::gf2::BinaryMatrix;

/// Matrix over `F2[x]/(x^ell - 1)`; each entry is the exponent set of a
/// polynomial (empty means zero).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<usize>>,
}

impl PolyMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Vec<usize>>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: entries.len(),
            });
        }
        Ok(PolyMatrix {
            rows,
            cols,
            entries,
        })
    }

    /// Replaces every entry by its `ell x ell` circulant.
    pub fn lift(&self, ell: usize) -> Result<BinaryMatrix> {
        let mut rows = vec![Vec::new(); self.rows * ell];
        for r in 0..self.rows {
            for c in 0..self.cols {
                let block = circulant(&self.entries[r * self.cols + c], ell)?;
                for k in 0..ell {
                    rows[r * ell + k].extend(block.row(k).iter().map(|&j| c * ell + j));
                }
            }
        }
        BinaryMatrix::from_rows(self.cols * ell, rows)
    }
}

/// Lifted product of a polynomial matrix `A` (`m x n`) with a single
/// polynomial `b`: `H_X = [A | b·I_m]`, `H_Z = [b*·I_n | A*]`, where `*` is the
/// conjugate transpose (binary transpose after lifting).
pub fn lifted_two_block(
    name: impl Into<String>,
    a: &PolyMatrix,
    b: &[usize],
    ell: usize,
) -> Result<CssCode> {
    let a_lift = a.lift(ell)?;
    let b_circ = circulant(b, ell)?;
    let hx = a_lift.hstack(&BinaryMatrix::identity(a.rows).kron(&b_circ))?;
    let hz = BinaryMatrix::identity(a.cols)
        .kron(&b_circ.transpose())
        .hstack(&a_lift.transpose())?;
    CssCode::new(name, hx, hz)
}

/// The `[[882, 24]]` lifted-product benchmark code "B1"
/// (ell = 63, `b(x) = 1 + x + x^6`, `A` a 7x7 matrix with `x^27` on the
/// diagonal, `x^54` one step left and `1` two steps left, cyclically).
pub fn b1() -> CssCode {
    const ELL: usize = 63;
    const SIZE: usize = 7;
    let mut entries = vec![Vec::new(); SIZE * SIZE];
    for r in 0..SIZE {
        entries[r * SIZE + r] = vec![27];
        entries[r * SIZE + (r + SIZE - 1) % SIZE] = vec![54];
        entries[r * SIZE + (r + SIZE - 2) % SIZE] = vec![0];
    }
    let a = PolyMatrix::new(SIZE, SIZE, entries).expect("7x7 entries");
    lifted_two_block("B1", &a, &[0, 1, 6], ELL).expect("B1 is a valid CSS code")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::build_tanner;

    #[test]
    fn b1_parameters() {
        let code = b1();
        assert_eq!(code.n(), 882);
        assert_eq!(code.k(), 24);
        assert!(code.css_check());
        let g = build_tanner(code.hz()).unwrap();
        assert_eq!(g.num_checks(), 441);
        assert_eq!(g.dc_max(), 6);
        assert_eq!(g.dv_max(), 3);
        assert!((0..g.num_vars()).all(|j| g.var_degree(j) == 3));
    }

    #[test]
    fn lift_of_scalar_matches_circulant() {
        let a = PolyMatrix::new(1, 1, vec![vec![0, 2]]).unwrap();
        assert_eq!(a.lift(5).unwrap(), circulant(&[0, 2], 5).unwrap());
    }
}
