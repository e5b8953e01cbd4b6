//! Krull-Schmidt decomposition by Fitting splitting, and isomorphism tests.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::hom::{end_ring, hom_basis, FiniteRing};
use crate::limits::{checked_pow, max_enum, CoeffIter};
use crate::module::{direct_sum, row_morphism, Module, Morphism};
use crate::subspace::Subspace;

#[derive(Debug, Clone)]
pub struct Decomposition {
    /// Indecomposable summands, each with a local endomorphism ring.
    pub summands: Vec<Module>,
    /// Summand inclusions into the decomposed module.
    pub inclusions: Vec<Morphism>,
    /// `⊕ summands -> module`, assembled from the inclusions; invertible.
    pub iso: Morphism,
}

/// A non-nilpotent, non-invertible element, or `None` when the ring is local.
///
/// Basis elements and their pairwise sums are tried first; the ring is then
/// searched exhaustively, which is what certifies locality.
pub(crate) fn splitting_element(r: &FiniteRing) -> Result<Option<Vec<u32>>> {
    let d = r.dim();
    let p = r.field().p();
    let splits = |x: &[u32]| !r.is_nilpotent(x) && !r.is_invertible(x);
    let unit = |i: usize| {
        let mut e = vec![0; d];
        e[i] = 1;
        e
    };
    for i in 0..d {
        let x = unit(i);
        if splits(&x) {
            return Ok(Some(x));
        }
    }
    for i in 0..d {
        for j in (i + 1)..d {
            let mut x = unit(i);
            x[j] = 1;
            if splits(&x) {
                return Ok(Some(x));
            }
        }
    }
    let size = checked_pow(p as u64, d);
    if size > max_enum() {
        return Err(Error::CapExceeded(format!(
            "idempotent search over a ring with {p}^{d} elements exceeds cap {}",
            max_enum()
        )));
    }
    Ok(CoeffIter::new(p, d).find(|x| splits(x)))
}

/// Splits `m` along `Ker φ^N ⊕ Im φ^N` for a non-nilpotent non-invertible
/// endomorphism until every piece has a local endomorphism ring.
pub fn decompose(m: &Module) -> Result<Decomposition> {
    let alg = m.algebra().clone();
    let mut pending: Vec<(Module, Morphism)> = vec![(m.clone(), Morphism::identity(m))];
    let mut summands = Vec::new();
    let mut inclusions = Vec::new();
    while let Some((x, inc)) = pending.pop() {
        if x.is_zero() {
            continue;
        }
        let end = end_ring(&x)?;
        let Some(phi) = splitting_element(&end.ring)? else {
            summands.push(x);
            inclusions.push(inc);
            continue;
        };
        let (ker, im) = fitting(&end.morphism(&phi))?;
        // Im first so that, after popping, the kernel part is handled first
        for (part, part_inc) in [im, ker] {
            pending.push((part, inc.compose(&part_inc)?));
        }
    }
    let (_, iso) = row_morphism(&alg, m, &inclusions)?;
    if !iso.is_iso() {
        return Err(Error::Precondition("summand inclusions do not assemble to an isomorphism".into()));
    }
    Ok(Decomposition {
        summands,
        inclusions,
        iso,
    })
}

type Part = (Module, Morphism);

/// `(Ker φ^N, Im φ^N)` with inclusions, `N` the total dimension.
pub(crate) fn fitting(phi: &Morphism) -> Result<(Part, Part)> {
    let x = phi.source();
    let n = x.total_dim().max(1);
    let blocks: Vec<_> = phi.blocks().iter().map(|b| b.pow(n)).collect();
    let kers: Vec<Subspace> = blocks.iter().map(|b| b.kernel()).collect();
    let ims: Vec<Subspace> = blocks.iter().map(|b| b.image()).collect();
    Ok((x.submodule(&kers)?, x.submodule(&ims)?))
}

/// Isomorphism test for two modules with local endomorphism rings: they are
/// isomorphic iff some basis pair composes to an invertible endomorphism.
pub fn indecomposables_isomorphic(a: &Module, b: &Module) -> Result<Option<Morphism>> {
    if a.dims() != b.dims() {
        return Ok(None);
    }
    let hab = hom_basis(a, b)?;
    let hba = hom_basis(b, a)?;
    for f in hab.basis() {
        if f.is_iso() {
            return Ok(Some(f.clone()));
        }
        for g in hba.basis() {
            if g.compose(f)?.is_iso() {
                return Ok(Some(f.clone()));
            }
        }
    }
    Ok(None)
}

/// An isomorphism `m -> n`, or `None`.
///
/// Small Hom spaces are searched exhaustively in coefficient order. Larger
/// ones are decided by decomposing both sides and matching summands.
pub fn is_isomorphic(m: &Module, n: &Module) -> Result<Option<Morphism>> {
    if !crate::module::same_algebra(m.algebra(), n.algebra()) {
        return Err(crate::error::input_err!("isomorphism test across different algebras"));
    }
    if m.dims() != n.dims() {
        return Ok(None);
    }
    if m.is_zero() {
        return Ok(Some(Morphism::zero(m, n)));
    }
    let hmn = hom_basis(m, n)?;
    if let Some(f) = hmn.basis().iter().find(|f| f.is_iso()) {
        return Ok(Some(f.clone()));
    }
    let hnm = hom_basis(n, m)?;
    if hmn.dim() != hnm.dim() || hmn.dim() < 1 {
        return Ok(None);
    }
    let size = checked_pow(m.field().p() as u64, hmn.dim());
    if size <= max_enum() {
        return Ok(hmn.elements()?.find(|f| f.is_iso()));
    }
    let dm = decompose(m)?;
    let dn = decompose(n)?;
    if dm.summands.len() != dn.summands.len() {
        return Ok(None);
    }
    let mut used = vec![false; dn.summands.len()];
    let mut parts = Vec::new();
    for s in &dm.summands {
        let mut found = None;
        for (k, t) in dn.summands.iter().enumerate() {
            if used[k] {
                continue;
            }
            if let Some(f) = indecomposables_isomorphic(s, t)? {
                found = Some((k, f));
                break;
            }
        }
        let Some((k, f)) = found else {
            return Ok(None);
        };
        used[k] = true;
        parts.push(dn.inclusions[k].compose(&f)?);
    }
    let alg: &Arc<_> = m.algebra();
    let (_, glued) = row_morphism(alg, n, &parts)?;
    // glued: ⊕ summands(m) -> n; precompose with the inverse of m's decomposition
    let inv = dm
        .iso
        .inverse()
        .ok_or_else(|| Error::Precondition("decomposition iso is not invertible".into()))?;
    let candidate = glued.compose(&inv)?;
    if candidate.is_iso() {
        Ok(Some(candidate))
    } else {
        Err(Error::Precondition("matched summands failed to glue to an isomorphism".into()))
    }
}

/// `⊕ ms`, module only.
pub fn sum_of(alg: &Arc<crate::algebra::PathAlgebra>, ms: &[Module]) -> Result<Module> {
    Ok(direct_sum(alg, ms)?.module)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::module::tests::{a2, dual_numbers, gf2, kronecker};

    fn dims_multiset(d: &Decomposition) -> Vec<Vec<usize>> {
        let mut v: Vec<Vec<usize>> = d.summands.iter().map(|s| s.dims().to_vec()).collect();
        v.sort();
        v
    }

    #[test]
    fn simple_is_indecomposable() {
        let a = a2();
        let s = Module::simple(&a, 0).unwrap();
        let d = decompose(&s).unwrap();
        assert_eq!(d.summands, vec![s]);
    }

    #[test]
    fn dual_numbers_sum_splits() {
        let d = dual_numbers();
        let c = sum_of(&d, &[Module::projective(&d, 0).unwrap(), Module::simple(&d, 0).unwrap()]).unwrap();
        let dec = decompose(&c).unwrap();
        let mut sizes: Vec<usize> = dec.summands.iter().map(Module::total_dim).collect();
        sizes.sort();
        assert_eq!(sizes, vec![1, 2]);
        for s in &dec.summands {
            assert!(end_ring(s).unwrap().is_local().unwrap());
        }
    }

    #[test]
    fn semisimple_splits_into_copies() {
        let a = a2();
        let s1 = Module::simple(&a, 0).unwrap();
        let ss = sum_of(&a, &[s1.clone(), s1.clone()]).unwrap();
        let dec = decompose(&ss).unwrap();
        assert_eq!(dec.summands.len(), 2);
        for s in &dec.summands {
            assert!(is_isomorphic(s, &s1).unwrap().is_some());
        }
    }

    #[test]
    fn decomposition_of_sum_matches_parts() {
        let k = kronecker();
        let parts = [
            Module::projective(&k, 0).unwrap(),
            Module::injective(&k, 1).unwrap(),
            Module::simple(&k, 0).unwrap(),
        ];
        let total = decompose(&sum_of(&k, &parts).unwrap()).unwrap();
        let mut expected: Vec<Vec<usize>> = Vec::new();
        for p in &parts {
            expected.extend(dims_multiset(&decompose(p).unwrap()));
        }
        expected.sort();
        assert_eq!(dims_multiset(&total), expected);
    }

    #[test]
    fn isomorphism_examples() {
        let a = a2();
        let s1 = Module::simple(&a, 0).unwrap();
        let s2 = Module::simple(&a, 1).unwrap();
        let id = is_isomorphic(&s1, &s1).unwrap().unwrap();
        assert!(id.is_iso());
        assert!(is_isomorphic(&s1, &s2).unwrap().is_none());

        // straight and diagonal copies of the regular module inside C
        let d = dual_numbers();
        let reg = Module::projective(&d, 0).unwrap();
        let c = sum_of(&d, &[reg.clone(), Module::simple(&d, 0).unwrap()]).unwrap();
        let e = c.maps()[0].clone();
        let one = vec![1u32, 0, 0];
        let eps_one = e.mul_vec(&one);
        let straight = Subspace::from_vectors(gf2(), 3, &[one.clone(), eps_one.clone()]).unwrap();
        let diag = Subspace::from_vectors(gf2(), 3, &[vec![1, 0, 1], eps_one]).unwrap();
        let (ms, _) = c.submodule(&[straight]).unwrap();
        let (md, _) = c.submodule(&[diag]).unwrap();
        assert!(is_isomorphic(&ms, &md).unwrap().is_some());
        assert!(is_isomorphic(&md, &reg).unwrap().is_some());
        let s = Module::simple(&d, 0).unwrap();
        let ss = sum_of(&d, &[s.clone(), s]).unwrap();
        assert!(is_isomorphic(&ss, &reg).unwrap().is_none());
    }
}
