//! Hom spaces, endomorphism rings and their radicals.

use std::fmt;

use crate::error::{dim_err, Error, Result};
use crate::field::PrimeField;
use crate::limits::{ensure_enumerable, CoeffIter};
use crate::matrix::Matrix;
use crate::module::{Module, Morphism};
use crate::subspace::Subspace;

/// `Hom(source, target)` with a canonical basis.
#[derive(Clone, Debug)]
pub struct HomSpace {
    source: Module,
    target: Module,
    space: Subspace,
    basis: Vec<Morphism>,
}

/// Solutions of the intertwining equations `Y_a F_s = F_t X_a`, as the RREF
/// kernel of one linear system in the flattened block entries.
pub fn hom_basis(x: &Module, y: &Module) -> Result<HomSpace> {
    if !crate::module::same_algebra(x.algebra(), y.algebra()) {
        return Err(dim_err!("Hom between modules over different algebras"));
    }
    let f = x.field();
    let nv = x.dims().len();
    let mut off = Vec::with_capacity(nv);
    let mut n = 0;
    for v in 0..nv {
        off.push(n);
        n += x.dims()[v] * y.dims()[v];
    }
    let mut rows: Vec<Vec<u32>> = Vec::new();
    for (ai, a) in x.algebra().quiver().arrows().iter().enumerate() {
        let (s, t) = (a.source, a.target);
        let (xa, ya) = (&x.maps()[ai], &y.maps()[ai]);
        let (xs, xt, yt) = (x.dims()[s], x.dims()[t], y.dims()[t]);
        // entry (i, j) of Y_a F_s - F_t X_a, with i < dim Y_t and j < dim X_s
        for i in 0..yt {
            for j in 0..xs {
                let mut row = vec![0u32; n];
                for k in 0..y.dims()[s] {
                    let c = ya.get(i, k);
                    if c != 0 {
                        let idx = off[s] + k * xs + j;
                        row[idx] = f.add(row[idx], c);
                    }
                }
                for k in 0..xt {
                    let c = xa.get(k, j);
                    if c != 0 {
                        let idx = off[t] + i * xt + k;
                        row[idx] = f.sub(row[idx], c);
                    }
                }
                if row.iter().any(|&c| c != 0) {
                    rows.push(row);
                }
            }
        }
    }
    let space = Matrix::from_row_vecs(f, n, &rows)?.kernel();
    let basis = space
        .basis_vecs()
        .iter()
        .map(|v| Morphism::from_flat(x, y, v))
        .collect::<Result<Vec<_>>>()?;
    Ok(HomSpace {
        source: x.clone(),
        target: y.clone(),
        space,
        basis,
    })
}

impl HomSpace {
    pub fn source(&self) -> &Module {
        &self.source
    }

    pub fn target(&self) -> &Module {
        &self.target
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Morphism] {
        &self.basis
    }

    /// The flattened solution space.
    pub fn space(&self) -> &Subspace {
        &self.space
    }

    pub fn coordinates(&self, m: &Morphism) -> Result<Option<Vec<u32>>> {
        if m.source() != &self.source || m.target() != &self.target {
            return Err(dim_err!("morphism does not belong to this Hom space"));
        }
        self.space.coordinates(&m.flatten())
    }

    pub fn combine(&self, coeffs: &[u32]) -> Morphism {
        let v = self.space.combine(coeffs);
        Morphism::from_flat(&self.source, &self.target, &v).expect("basis combination is a morphism")
    }

    /// Matrix of the linear map `Hom(X, Y) -> W` given by `g`, in basis coordinates.
    /// Columns are `g(basis_k)` as flat vectors of length `out_len`.
    pub fn linear_map<F>(&self, out_len: usize, mut g: F) -> Result<Matrix>
    where
        F: FnMut(&Morphism) -> Result<Vec<u32>>,
    {
        let cols = self.basis.iter().map(&mut g).collect::<Result<Vec<_>>>()?;
        Matrix::from_col_vecs(self.source.field(), out_len, &cols)
    }

    pub fn elements(&self) -> Result<impl Iterator<Item = Morphism> + '_> {
        ensure_enumerable(self.source.field().p(), self.dim(), "Hom space elements")?;
        Ok(CoeffIter::new(self.source.field().p(), self.dim()).map(move |c| self.combine(&c)))
    }
}

fn flat_len(x: &Module, y: &Module) -> usize {
    x.dims().iter().zip(y.dims()).map(|(a, b)| a * b).sum()
}

/// Some `φ` with `α ∘ φ = β`, or `None`.
pub fn factors_through(beta: &Morphism, alpha: &Morphism) -> Result<Option<Morphism>> {
    if beta.target() != alpha.target() {
        return Err(dim_err!("factorization needs morphisms with a common target"));
    }
    let hom = hom_basis(beta.source(), alpha.source())?;
    let len = flat_len(beta.source(), beta.target());
    let a = hom.linear_map(len, |h| Ok(alpha.compose(h)?.flatten()))?;
    let b = Matrix::from_col_vecs(beta.field(), len, &[beta.flatten()])?;
    Ok(a.solve(&b)?.map(|c| hom.combine(&c.transpose().row_vecs()[0])))
}

/// Some `σ` with `σ ∘ ι = β`, or `None`.
pub fn factor_left(beta: &Morphism, iota: &Morphism) -> Result<Option<Morphism>> {
    if beta.source() != iota.source() {
        return Err(dim_err!("left factorization needs morphisms with a common source"));
    }
    let hom = hom_basis(iota.target(), beta.target())?;
    let len = flat_len(beta.source(), beta.target());
    let a = hom.linear_map(len, |h| Ok(h.compose(iota)?.flatten()))?;
    let b = Matrix::from_col_vecs(beta.field(), len, &[beta.flatten()])?;
    Ok(a.solve(&b)?.map(|c| hom.combine(&c.transpose().row_vecs()[0])))
}

/// `α` has a section: some `σ` with `α ∘ σ = id`.
pub fn is_retraction(alpha: &Morphism) -> Result<bool> {
    Ok(factors_through(&Morphism::identity(alpha.target()), alpha)?.is_some())
}

/// Has a retraction: some `σ` with `σ ∘ α = id`.
pub fn is_section(alpha: &Morphism) -> Result<bool> {
    Ok(factor_left(&Morphism::identity(alpha.source()), alpha)?.is_some())
}

/// A finite-dimensional associative unital algebra over GF(p), by structure constants.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteRing {
    field: PrimeField,
    table: Vec<Vec<Vec<u32>>>,
    unit: Vec<u32>,
}

impl fmt::Debug for FiniteRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteRing(GF({})^{})", self.field.p(), self.dim())
    }
}

impl FiniteRing {
    /// `table[i][j]` holds the coordinates of `b_i * b_j`.
    pub fn new(field: PrimeField, table: Vec<Vec<Vec<u32>>>, unit: Vec<u32>) -> Result<Self> {
        let d = unit.len();
        if table.len() != d || table.iter().any(|r| r.len() != d || r.iter().any(|v| v.len() != d)) {
            return Err(dim_err!("structure constants are not {d}x{d}x{d}"));
        }
        let r = FiniteRing { field, table, unit };
        r.check_axioms()?;
        Ok(r)
    }

    fn check_axioms(&self) -> Result<()> {
        let d = self.dim();
        let e = |i: usize| {
            let mut v = vec![0; d];
            v[i] = 1;
            v
        };
        for i in 0..d {
            if self.mul(&self.unit, &e(i)) != e(i) || self.mul(&e(i), &self.unit) != e(i) {
                return Err(Error::Precondition(format!("unit law fails on basis element {i}")));
            }
            for j in 0..d {
                let ij = &self.table[i][j];
                for k in 0..d {
                    if self.mul(ij, &e(k)) != self.mul(&e(i), &self.table[j][k]) {
                        return Err(Error::Precondition(format!(
                            "associativity fails on basis triple ({i}, {j}, {k})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.unit.len()
    }

    pub fn unit(&self) -> &[u32] {
        &self.unit
    }

    pub fn structure_constants(&self) -> &[Vec<Vec<u32>>] {
        &self.table
    }

    pub fn mul(&self, x: &[u32], y: &[u32]) -> Vec<u32> {
        let f = self.field;
        let d = self.dim();
        let mut out = vec![0; d];
        for (i, &a) in x.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in y.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                let ab = f.mul(a, b);
                for (o, &c) in out.iter_mut().zip(&self.table[i][j]) {
                    if c != 0 {
                        *o = f.add(*o, f.mul(ab, c));
                    }
                }
            }
        }
        out
    }

    /// Left multiplication by `x` on the ring itself.
    pub fn left_matrix(&self, x: &[u32]) -> Matrix {
        let d = self.dim();
        let cols: Vec<Vec<u32>> = (0..d)
            .map(|j| {
                let mut e = vec![0; d];
                e[j] = 1;
                self.mul(x, &e)
            })
            .collect();
        Matrix::from_col_vecs(self.field, d, &cols).expect("square")
    }

    pub fn is_nilpotent(&self, x: &[u32]) -> bool {
        self.left_matrix(x).is_nilpotent()
    }

    pub fn is_invertible(&self, x: &[u32]) -> bool {
        self.dim() > 0 && self.left_matrix(x).is_invertible()
    }

    /// `span(A·B)` for subspaces of the ring.
    pub fn product_span(&self, a: &Subspace, b: &Subspace) -> Subspace {
        let mut vecs = Vec::new();
        for u in a.basis_vecs() {
            for v in b.basis_vecs() {
                vecs.push(self.mul(&u, &v));
            }
        }
        Subspace::from_vectors(self.field, self.dim(), &vecs).expect("ring vectors")
    }

    /// For a one-sided ideal `L`: whether the chain `L, L·L, (L·L)·L, ...` reaches zero.
    pub fn is_nilpotent_ideal(&self, l: &Subspace) -> bool {
        let mut cur = l.clone();
        loop {
            if cur.is_zero() {
                return true;
            }
            let next = self.product_span(&cur, l);
            if next == cur {
                return false;
            }
            cur = next;
        }
    }

    /// `{y * x}` for `y` in the ring.
    pub fn left_ideal(&self, x: &[u32]) -> Subspace {
        let d = self.dim();
        let vecs: Vec<Vec<u32>> = (0..d)
            .map(|i| {
                let mut e = vec![0; d];
                e[i] = 1;
                self.mul(&e, x)
            })
            .collect();
        Subspace::from_vectors(self.field, d, &vecs).expect("ring vectors")
    }

    pub fn is_two_sided_ideal(&self, s: &Subspace) -> bool {
        let full = Subspace::full(self.field, self.dim());
        self.product_span(&full, s).is_subspace_of(s).unwrap_or(false)
            && self.product_span(s, &full).is_subspace_of(s).unwrap_or(false)
    }

    /// The quotient ring by a two-sided ideal, in complement coordinates.
    pub fn quotient(&self, ideal: &Subspace) -> Result<FiniteRing> {
        if !self.is_two_sided_ideal(ideal) {
            return Err(Error::Precondition("quotient by a non-ideal".into()));
        }
        let q = ideal.quotient_map();
        let d = self.dim();
        let comp: Vec<usize> = (0..d).filter(|c| !ideal.pivots().contains(c)).collect();
        let lift = |k: usize| {
            let mut e = vec![0; d];
            e[comp[k]] = 1;
            e
        };
        let table = (0..comp.len())
            .map(|i| {
                (0..comp.len())
                    .map(|j| q.mul_vec(&self.mul(&lift(i), &lift(j))))
                    .collect()
            })
            .collect();
        FiniteRing::new(self.field, table, q.mul_vec(&self.unit))
    }
}

/// `{x | y·x nilpotent for every y}`, found by exhaustive enumeration of the
/// ring. Each candidate is tested through the nilpotency of its left ideal.
pub fn jacobson_radical(r: &FiniteRing) -> Result<Subspace> {
    let j = radical_by_enumeration(r)?;
    let d = r.dim();
    if !r.is_two_sided_ideal(&j) {
        return Err(Error::Precondition("computed radical is not a two-sided ideal".into()));
    }
    let mut pow = j.clone();
    for _ in 0..d {
        pow = r.product_span(&pow, &j);
    }
    if d > 0 && !pow.is_zero() {
        return Err(Error::Precondition("computed radical is not nilpotent".into()));
    }
    if !j.is_full() {
        let quot = r.quotient(&j)?;
        if radical_by_enumeration(&quot)?.dim() != 0 {
            return Err(Error::Precondition("quotient by the radical is not semisimple".into()));
        }
    }
    Ok(j)
}

fn radical_by_enumeration(r: &FiniteRing) -> Result<Subspace> {
    let f = r.field();
    let d = r.dim();
    ensure_enumerable(f.p(), d, "Jacobson radical")?;
    let mut j = Subspace::zero(f, d);
    for x in CoeffIter::new(f.p(), d) {
        if j.contains(&x)? || !r.is_nilpotent(&x) {
            continue;
        }
        if r.is_nilpotent_ideal(&r.left_ideal(&x)) {
            j = j.sum(&Subspace::from_vectors(f, d, &[x])?)?;
        }
    }
    Ok(j)
}

/// Every element is in the radical or invertible (and the ring is nonzero).
pub fn is_local(r: &FiniteRing) -> Result<bool> {
    if r.dim() == 0 {
        return Ok(false);
    }
    let j = jacobson_radical(r)?;
    Ok(quotient_is_division(r, &j))
}

fn quotient_is_division(r: &FiniteRing, j: &Subspace) -> bool {
    let d = r.dim();
    let comp: Vec<usize> = (0..d).filter(|c| !j.pivots().contains(c)).collect();
    CoeffIter::new(r.field().p(), comp.len()).skip(1).all(|c| {
        let mut x = vec![0; d];
        for (k, &ck) in c.iter().enumerate() {
            x[comp[k]] = ck;
        }
        r.is_invertible(&x)
    })
}

/// `End(X)` as a ring, with the morphism behind each basis element.
/// Multiplication is composition: `b_i * b_j = b_i ∘ b_j`.
#[derive(Clone, Debug)]
pub struct EndRing {
    pub ring: FiniteRing,
    pub hom: HomSpace,
}

pub fn end_ring(x: &Module) -> Result<EndRing> {
    let hom = hom_basis(x, x)?;
    let b = hom.basis();
    let mut table = Vec::with_capacity(b.len());
    for bi in b {
        let mut row = Vec::with_capacity(b.len());
        for bj in b {
            let c = hom
                .coordinates(&bi.compose(bj)?)?
                .ok_or_else(|| Error::Precondition("composition left End".into()))?;
            row.push(c);
        }
        table.push(row);
    }
    let unit = hom
        .coordinates(&Morphism::identity(x))?
        .ok_or_else(|| Error::Precondition("identity not in End".into()))?;
    Ok(EndRing {
        ring: FiniteRing::new(x.field(), table, unit)?,
        hom,
    })
}

impl EndRing {
    pub fn radical(&self) -> Result<Subspace> {
        jacobson_radical(&self.ring)
    }

    pub fn is_local(&self) -> Result<bool> {
        is_local(&self.ring)
    }

    pub fn morphism(&self, coords: &[u32]) -> Morphism {
        self.hom.combine(coords)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::module::tests::{a2, dual_numbers, gf2};
    use crate::module::{direct_sum, Module};

    #[test]
    fn hom_dimension_examples() {
        let a = a2();
        let s1 = Module::simple(&a, 0).unwrap();
        let p1 = Module::projective(&a, 0).unwrap();
        assert_eq!(hom_basis(&s1, &p1).unwrap().dim(), 0);
        assert_eq!(hom_basis(&p1, &s1).unwrap().dim(), 1);

        let d = dual_numbers();
        let s = Module::simple(&d, 0).unwrap();
        let reg = Module::projective(&d, 0).unwrap();
        let h = hom_basis(&s, &reg).unwrap();
        assert_eq!(h.dim(), 1);
        // brute force over the 4 candidate 2x1 blocks
        let mut count = 0;
        for v in CoeffIter::new(2, 2) {
            if Morphism::from_flat(&s, &reg, &v).is_ok() {
                count += 1;
                assert!(h.space().contains(&v).unwrap());
            }
        }
        assert_eq!(count, 2);
        let gen = &h.basis()[0];
        assert!(gen.blocks()[0].mul(&Matrix::identity(gf2(), 1)) != Matrix::zeros(gf2(), 2, 1));
        // the image is the socle (killed by ε)
        let eps = reg.maps()[0].clone();
        assert!(eps.mul(&gen.blocks()[0]).is_zero());
    }

    #[test]
    fn end_ring_examples() {
        let a = a2();
        let e = end_ring(&Module::simple(&a, 0).unwrap()).unwrap();
        assert_eq!(e.ring.dim(), 1);
        assert!(e.is_local().unwrap());
        assert_eq!(e.radical().unwrap().dim(), 0);

        let d = dual_numbers();
        let reg = Module::projective(&d, 0).unwrap();
        let s = Module::simple(&d, 0).unwrap();
        let er = end_ring(&reg).unwrap();
        assert_eq!(er.ring.dim(), 2);
        assert_eq!(er.radical().unwrap().dim(), 1);
        assert!(er.is_local().unwrap());

        let c = direct_sum(&d, &[reg.clone(), s.clone()]).unwrap().module;
        let ec = end_ring(&c).unwrap();
        assert_eq!(ec.ring.dim(), 5);
        assert!(!ec.is_local().unwrap());

        let ss = direct_sum(&a, &[Module::simple(&a, 0).unwrap(), Module::simple(&a, 0).unwrap()])
            .unwrap()
            .module;
        let es = end_ring(&ss).unwrap();
        assert_eq!(es.ring.dim(), 4);
        assert_eq!(es.radical().unwrap().dim(), 0);
        assert!(!es.is_local().unwrap());
    }

    #[test]
    fn prime_field_ring_is_local() {
        let f3 = PrimeField::new(3).unwrap();
        let r = FiniteRing::new(f3, vec![vec![vec![1]]], vec![1]).unwrap();
        assert!(is_local(&r).unwrap());
        assert_eq!(jacobson_radical(&r).unwrap().dim(), 0);
    }

    #[test]
    fn radical_matches_quasi_invertibility() {
        let d = dual_numbers();
        let reg = Module::projective(&d, 0).unwrap();
        let s = Module::simple(&d, 0).unwrap();
        let c = direct_sum(&d, &[reg, s]).unwrap().module;
        let r = end_ring(&c).unwrap().ring;
        let j = jacobson_radical(&r).unwrap();
        let all: Vec<Vec<u32>> = CoeffIter::new(2, r.dim()).collect();
        for x in &all {
            let oracle = all.iter().all(|y| {
                let yx = r.mul(y, x);
                let one_minus: Vec<u32> =
                    r.unit().iter().zip(&yx).map(|(&u, &v)| r.field().sub(u, v)).collect();
                r.is_invertible(&one_minus)
            });
            assert_eq!(j.contains(x).unwrap(), oracle, "{x:?}");
        }
    }

    #[test]
    fn retraction_examples() {
        let a = a2();
        let p1 = Module::projective(&a, 0).unwrap();
        let s1 = Module::simple(&a, 0).unwrap();
        assert!(is_retraction(&Morphism::identity(&p1)).unwrap());
        assert!(!is_retraction(&Morphism::zero(&p1, &s1)).unwrap());
        let pi = hom_basis(&p1, &s1).unwrap().basis()[0].clone();
        assert!(!is_retraction(&pi).unwrap());
    }

    #[test]
    fn factorization_examples() {
        let a = a2();
        let p1 = Module::projective(&a, 0).unwrap();
        let s1 = Module::simple(&a, 0).unwrap();
        let pi = hom_basis(&p1, &s1).unwrap().basis()[0].clone();
        let phi = factors_through(&pi, &pi).unwrap().unwrap();
        assert_eq!(pi.compose(&phi).unwrap(), pi);
        let z = Morphism::zero(&p1, &s1);
        assert!(factors_through(&z, &pi).unwrap().unwrap().is_zero());
        assert!(factors_through(&pi, &Morphism::identity(&s1)).unwrap().is_some());
        let s2 = Module::simple(&a, 1).unwrap();
        let inc = hom_basis(&s2, &p1).unwrap().basis()[0].clone();
        assert!(factors_through(&inc, &pi).is_err());
    }
}
