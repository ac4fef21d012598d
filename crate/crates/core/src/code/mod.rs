//! CSS codes, their constructions, and the Tanner graphs the decoders run on.

mod alist;
mod benchmark;
mod manifest;
mod tanner;

pub use alist::{from_alist, to_alist};
pub use benchmark::{b1, lifted_two_block, PolyMatrix};
pub use manifest::{CodeManifest, CodeSource};
pub use tanner::{build_tanner, GraphWarning, TannerGraph};

use crate::error::{Error, Result};
use crate::gf2::{BinaryMatrix, RowSpace};

/// A CSS code given by its X- and Z-type check matrices.
#[derive(Clone, Debug)]
pub struct CssCode {
    name: String,
    hx: BinaryMatrix,
    hz: BinaryMatrix,
    k: usize,
}

impl CssCode {
    /// Validates `H_X · H_Zᵀ = 0` and computes the number of logical qubits.
    pub fn new(name: impl Into<String>, hx: BinaryMatrix, hz: BinaryMatrix) -> Result<Self> {
        if hx.cols() != hz.cols() {
            return Err(Error::DimensionMismatch {
                expected: hx.cols(),
                found: hz.cols(),
            });
        }
        if let Some((x_row, z_row)) = first_css_violation(&hx, &hz) {
            return Err(Error::CssViolation { x_row, z_row });
        }
        let k = hx.cols() - hx.rank() - hz.rank();
        Ok(CssCode {
            name: name.into(),
            hx,
            hz,
            k,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Physical qubits.
    pub fn n(&self) -> usize {
        self.hx.cols()
    }

    /// Logical qubits.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn hx(&self) -> &BinaryMatrix {
        &self.hx
    }

    pub fn hz(&self) -> &BinaryMatrix {
        &self.hz
    }

    /// Whether `H_X · H_Zᵀ = 0`. Always true for a constructed code.
    pub fn css_check(&self) -> bool {
        css_check(&self.hx, &self.hz)
    }

    /// Row space of `H_X`, for degeneracy-aware classification of X corrections.
    pub fn x_stabilizers(&self) -> RowSpace {
        RowSpace::new(&self.hx)
    }
}

/// First pair of rows `(x_row, z_row)` with odd overlap, if any.
pub fn first_css_violation(hx: &BinaryMatrix, hz: &BinaryMatrix) -> Option<(usize, usize)> {
    if hx.cols() != hz.cols() {
        return Some((0, 0));
    }
    (0..hx.rows()).find_map(|a| {
        (0..hz.rows())
            .find(|&b| hx.dense_row(a).dot(hz.dense_row(b)))
            .map(|b| (a, b))
    })
}

/// Whether `H_X · H_Zᵀ = 0` over GF(2).
pub fn css_check(hx: &BinaryMatrix, hz: &BinaryMatrix) -> bool {
    first_css_violation(hx, hz).is_none()
}

/// Hypergraph product of two classical codes:
/// `H_X = [H1 ⊗ I_{n2} | I_{m1} ⊗ H2ᵀ]`, `H_Z = [I_{n1} ⊗ H2 | H1ᵀ ⊗ I_{m2}]`.
pub fn hypergraph_product(h1: &BinaryMatrix, h2: &BinaryMatrix) -> Result<CssCode> {
    if h1.rows() == 0 || h1.cols() == 0 || h2.rows() == 0 || h2.cols() == 0 {
        return Err(Error::InvalidMatrix(
            "hypergraph product of an empty matrix".into(),
        ));
    }
    let (m1, n1) = (h1.rows(), h1.cols());
    let (m2, n2) = (h2.rows(), h2.cols());
    n1.checked_mul(n2)
        .and_then(|a| m1.checked_mul(m2).and_then(|b| a.checked_add(b)))
        .ok_or_else(|| Error::InvalidMatrix("hypergraph product size overflows".into()))?;

    let hx = h1
        .kron(&BinaryMatrix::identity(n2))
        .hstack(&BinaryMatrix::identity(m1).kron(&h2.transpose()))?;
    let hz = BinaryMatrix::identity(n1)
        .kron(h2)
        .hstack(&h1.transpose().kron(&BinaryMatrix::identity(m2)))?;
    let name = format!("hgp-{}x{}-{}x{}", m1, n1, m2, n2);
    CssCode::new(name, hx, hz)
}

/// `ell x ell` circulant with ones at `(r, (r + a) mod ell)` for each `a` in `exponents`.
pub fn circulant(exponents: &[usize], ell: usize) -> Result<BinaryMatrix> {
    let mut sorted = exponents.to_vec();
    sorted.sort_unstable();
    if let Some(&bad) = sorted.iter().find(|&&a| a >= ell) {
        return Err(Error::InvalidConfig(format!(
            "circulant exponent {bad} is not below {ell}"
        )));
    }
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::InvalidConfig(format!(
            "duplicate circulant exponent {}",
            w[0]
        )));
    }
    let rows = (0..ell)
        .map(|r| sorted.iter().map(|&a| (r + a) % ell).collect())
        .collect();
    BinaryMatrix::from_rows(ell, rows)
}

/// Two-block code `H_X = [A | B]`, `H_Z = [Bᵀ | Aᵀ]`; CSS exactly when `A` and `B` commute.
pub fn two_block(name: impl Into<String>, a: &BinaryMatrix, b: &BinaryMatrix) -> Result<CssCode> {
    let hx = a.hstack(b)?;
    let hz = b.transpose().hstack(&a.transpose())?;
    CssCode::new(name, hx, hz)
}

/// Generalized bicycle code from two circulants given by their exponent sets.
pub fn generalized_bicycle(a: &[usize], b: &[usize], ell: usize) -> Result<CssCode> {
    if ell == 0 {
        return Err(Error::InvalidConfig(
            "circulant size must be positive".into(),
        ));
    }
    let ca = circulant(a, ell)?;
    let cb = circulant(b, ell)?;
    two_block(format!("gb-{ell}"), &ca, &cb)
}

/// `ell x ell` parity checks of a cyclic repetition code.
pub fn repetition_ring(ell: usize) -> Result<BinaryMatrix> {
    circulant(&[0, 1], ell)
}
