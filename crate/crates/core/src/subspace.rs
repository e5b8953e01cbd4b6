use std::cmp::Ordering;
use std::fmt;

use crate::error::{dim_err, Result};
use crate::field::PrimeField;
use crate::limits::{ensure_enumerable, CoeffIter};
use crate::matrix::Matrix;

/// A linear subspace of `GF(p)^n`, stored as the nonzero rows of its RREF.
///
/// The basis is canonical, so derived equality is set equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Matrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(field: PrimeField, ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Matrix::zeros(field, 0, ambient),
            pivots: Vec::new(),
        }
    }

    pub fn full(field: PrimeField, ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Matrix::identity(field, ambient),
            pivots: (0..ambient).collect(),
        }
    }

    /// Span of the rows of `m`.
    pub fn from_matrix_rows(m: &Matrix) -> Self {
        let (basis, pivots) = m.rref_nonzero_rows();
        Subspace {
            ambient: m.cols(),
            basis,
            pivots,
        }
    }

    pub fn from_vectors(field: PrimeField, ambient: usize, vecs: &[Vec<u32>]) -> Result<Self> {
        Ok(Subspace::from_matrix_rows(&Matrix::from_row_vecs(
            field, ambient, vecs,
        )?))
    }

    pub fn field(&self) -> PrimeField {
        self.basis.field()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    /// RREF basis, one vector per row.
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn basis_vecs(&self) -> Vec<Vec<u32>> {
        self.basis.row_vecs()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    fn check_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient != other.ambient || self.field() != other.field() {
            return Err(dim_err!(
                "subspaces live in GF({})^{} and GF({})^{}",
                self.field().p(),
                self.ambient,
                other.field().p(),
                other.ambient
            ));
        }
        Ok(())
    }

    /// Coordinates of `v` in the RREF basis, or `None` if `v` is not in the space.
    pub fn coordinates(&self, v: &[u32]) -> Result<Option<Vec<u32>>> {
        if v.len() != self.ambient {
            return Err(dim_err!(
                "vector of length {} in ambient {}",
                v.len(),
                self.ambient
            ));
        }
        let f = self.field();
        let coords: Vec<u32> = self.pivots.iter().map(|&c| v[c] % f.p()).collect();
        let mut recon = vec![0u32; self.ambient];
        for (i, &c) in coords.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (x, &b) in recon.iter_mut().zip(self.basis.row(i)) {
                *x = f.add(*x, f.mul(c, b));
            }
        }
        let same = recon.iter().zip(v).all(|(&a, &b)| a == b % f.p());
        Ok(same.then_some(coords))
    }

    pub fn contains(&self, v: &[u32]) -> Result<bool> {
        Ok(self.coordinates(v)?.is_some())
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> Result<bool> {
        self.check_ambient(other)?;
        for r in 0..self.dim() {
            if !other.contains(self.basis.row(r))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Linear combination of the basis with the given coefficients.
    pub fn combine(&self, coeffs: &[u32]) -> Vec<u32> {
        assert_eq!(coeffs.len(), self.dim());
        let f = self.field();
        let mut v = vec![0u32; self.ambient];
        for (i, &c) in coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (x, &b) in v.iter_mut().zip(self.basis.row(i)) {
                *x = f.add(*x, f.mul(c, b));
            }
        }
        v
    }

    /// A matrix whose null space is exactly this subspace (rows span the annihilator).
    pub fn constraints(&self) -> Matrix {
        let ann = self.basis.kernel();
        ann.basis.clone()
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        Ok(Subspace::from_matrix_rows(&self.basis.vstack(&other.basis)))
    }

    pub fn meet(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        Ok(self.constraints().vstack(&other.constraints()).kernel())
    }

    /// `{x | m * x in self}`; `m` maps the domain into this subspace's ambient space.
    pub fn preimage(&self, m: &Matrix) -> Result<Subspace> {
        if m.rows() != self.ambient || m.field() != self.field() {
            return Err(dim_err!(
                "preimage: matrix {:?} does not land in ambient {}",
                m.shape(),
                self.ambient
            ));
        }
        Ok(self.constraints().mul(m).kernel())
    }

    /// Forward image `m(self)`.
    pub fn image_under(&self, m: &Matrix) -> Result<Subspace> {
        if m.cols() != self.ambient || m.field() != self.field() {
            return Err(dim_err!(
                "image: matrix {:?} does not start in ambient {}",
                m.shape(),
                self.ambient
            ));
        }
        Ok(Subspace::from_matrix_rows(
            &m.mul(&self.basis.transpose()).transpose(),
        ))
    }

    /// A surjection `GF(p)^n -> GF(p)^(n - dim)` whose kernel is this subspace,
    /// built from a complement of coordinate vectors rather than the annihilator.
    pub fn quotient_map(&self) -> Matrix {
        let f = self.field();
        let n = self.ambient;
        let mut is_pivot = vec![false; n];
        for &c in &self.pivots {
            is_pivot[c] = true;
        }
        let comp: Vec<usize> = (0..n).filter(|&c| !is_pivot[c]).collect();
        // Columns of `full` are the basis vectors followed by the complementary units.
        let mut cols: Vec<Vec<u32>> = self.basis_vecs();
        for &c in &comp {
            let mut e = vec![0u32; n];
            e[c] = 1;
            cols.push(e);
        }
        let full = Matrix::from_col_vecs(f, n, &cols).expect("square change of basis");
        let inv = full.inverse().expect("basis plus complement is invertible");
        inv.block(self.dim(), 0, comp.len(), n)
    }

    /// Iterates every vector of the subspace. Subject to the enumeration cap.
    pub fn elements(&self) -> Result<impl Iterator<Item = Vec<u32>> + '_> {
        ensure_enumerable(self.field().p(), self.dim(), "subspace elements")?;
        Ok(CoeffIter::new(self.field().p(), self.dim()).map(move |c| self.combine(&c)))
    }

    /// Semicolon-joined RREF rows, entries comma-separated.
    pub fn label(&self) -> String {
        self.basis
            .row_vecs()
            .iter()
            .map(|r| {
                r.iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect::<Vec<_>>()
            .join(";")
    }
}

impl PartialOrd for Subspace {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Total order by (ambient, dimension, lexicographic RREF entries).
impl Ord for Subspace {
    fn cmp(&self, other: &Self) -> Ordering {
        self.ambient
            .cmp(&other.ambient)
            .then(self.dim().cmp(&other.dim()))
            .then_with(|| self.basis.data().cmp(other.basis.data()))
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace<{}>[{}]", self.ambient, self.label())
    }
}
