//! Right almost split morphisms and almost split sequences.

use crate::determined::{construct_determined, DeterminedResult};
use crate::error::{Error, Result};
use crate::gamma::GammaModule;
use crate::hom::{end_ring, factor_left, factors_through, hom_basis, is_local, FiniteRing};
use crate::limits::checked_pow;
use crate::module::{is_split_exact, Module, Morphism};
use crate::universe::Universe;

#[derive(Debug, Clone)]
pub struct RightAlmostSplit {
    pub result: DeterminedResult,
    pub not_retraction: bool,
    /// Every non-retraction from a universe member factors through `α`,
    /// checked over all elements of each Hom space.
    pub nonretractions_factor: bool,
}

impl RightAlmostSplit {
    pub fn verified(&self) -> bool {
        self.result.verified() && self.not_retraction && self.nonretractions_factor
    }
}

fn all_morphisms(x: &Module, y: &Module) -> Result<Vec<Morphism>> {
    Ok(hom_basis(x, y)?.elements()?.collect())
}

/// `α_{{y}, rad End y}`, checked against the definition by enumeration.
pub fn right_almost_split(y: &Module, u: &Universe) -> Result<RightAlmostSplit> {
    let gm = GammaModule::new(std::slice::from_ref(y), y)?;
    if !gm.gamma().is_local()? {
        return Err(Error::Precondition("End(Y) is not local".into()));
    }
    let rad = gm.gamma().radical()?;
    let result = construct_determined(&gm, &rad, u)?;
    let alpha = &result.alpha;
    let id = Morphism::identity(y);
    let not_retraction = factors_through(&id, alpha)?.is_none();
    let mut nonretractions_factor = true;
    for t in u.modules() {
        let sections = all_morphisms(y, t)?;
        for beta in all_morphisms(t, y)? {
            let mut retraction = false;
            for g in &sections {
                if beta.compose(g)? == id {
                    retraction = true;
                    break;
                }
            }
            if !retraction && factors_through(&beta, alpha)?.is_none() {
                nonretractions_factor = false;
            }
        }
    }
    Ok(RightAlmostSplit {
        result,
        not_retraction,
        nonretractions_factor,
    })
}

/// `End(M) / rad End(M)` summarized.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopRing {
    pub dim: usize,
    pub order: u64,
    pub commutative: bool,
    pub is_field: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EndModRad {
    pub x: TopRing,
    pub z: TopRing,
    /// Both are fields of the same order.
    pub isomorphic: bool,
}

fn top_ring(m: &Module) -> Result<TopRing> {
    let e = end_ring(m)?;
    let q = e.ring.quotient(&e.radical()?)?;
    Ok(TopRing {
        dim: q.dim(),
        order: checked_pow(q.field().p() as u64, q.dim()),
        commutative: is_commutative(&q),
        // a finite local ring with zero radical is a division ring, hence a field
        is_field: is_local(&q)?,
    })
}

fn is_commutative(r: &FiniteRing) -> bool {
    let t = r.structure_constants();
    (0..r.dim()).all(|i| (0..r.dim()).all(|j| t[i][j] == t[j][i]))
}

pub fn end_mod_rad_compare(x: &Module, z: &Module) -> Result<EndModRad> {
    let x = top_ring(x)?;
    let z = top_ring(z)?;
    let isomorphic = x.is_field && z.is_field && x.order == z.order;
    Ok(EndModRad { x, z, isomorphic })
}

/// `0 -> X --ι--> Y --π--> Z -> 0`.
#[derive(Debug, Clone)]
pub struct AlmostSplitSequence {
    pub iota: Morphism,
    pub pi: Morphism,
    pub right: RightAlmostSplit,
    pub left_almost_split: bool,
    pub short_exact: bool,
    pub split: bool,
    pub ends: EndModRad,
}

impl AlmostSplitSequence {
    pub fn verified(&self) -> bool {
        self.right.verified() && self.left_almost_split && self.short_exact && !self.split && self.ends.isomorphic
    }
}

/// `ι` is not a section and every non-section `X -> T` from the universe
/// extends along `ι`, checked over all elements.
fn left_almost_split(iota: &Morphism, u: &Universe) -> Result<bool> {
    let x = iota.source();
    let id = Morphism::identity(x);
    if factor_left(&id, iota)?.is_some() {
        return Ok(false);
    }
    for t in u.modules() {
        let retractions = all_morphisms(t, x)?;
        for beta in all_morphisms(x, t)? {
            let mut section = false;
            for r in &retractions {
                if r.compose(&beta)? == id {
                    section = true;
                    break;
                }
            }
            if !section && factor_left(&beta, iota)?.is_none() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub fn almost_split_sequence(z: &Module, u: &Universe) -> Result<AlmostSplitSequence> {
    if z.is_projective()? {
        return Err(Error::Precondition("Z is projective, so no almost split sequence ends in it".into()));
    }
    let right = right_almost_split(z, u)?;
    let pi = right.result.alpha.clone();
    let iota = pi.factor()?.kernel_inclusion;
    let y = pi.source();
    let short_exact = iota.is_mono()
        && pi.is_epi()
        && pi.compose(&iota)?.is_zero()
        && (0..y.dims().len()).all(|v| iota.source().dims()[v] + z.dims()[v] == y.dims()[v]);
    let split = if short_exact { is_split_exact(&iota, &pi)? } else { false };
    let left = left_almost_split(&iota, u)?;
    let ends = end_mod_rad_compare(iota.source(), z)?;
    Ok(AlmostSplitSequence {
        iota,
        pi,
        right,
        left_almost_split: left,
        short_exact,
        split,
        ends,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decompose::is_isomorphic;
    use crate::module::tests::{a2, dual_numbers};
    use crate::universe::build_universe;

    #[test]
    fn dual_numbers_sequence() {
        let d = dual_numbers();
        let u = build_universe(&d, 2).unwrap();
        let s = Module::simple(&d, 0).unwrap();
        let seq = almost_split_sequence(&s, &u).unwrap();
        assert!(seq.verified());
        assert!(is_isomorphic(seq.iota.source(), &s).unwrap().is_some());
        assert!(is_isomorphic(seq.pi.source(), &Module::regular(&d).unwrap()).unwrap().is_some());
        assert_eq!(seq.ends.x.order, 2);
        assert_eq!(seq.ends.z.order, 2);
    }

    #[test]
    fn a2_sequence_and_projective() {
        let a = a2();
        let u = build_universe(&a, 2).unwrap();
        let s1 = Module::simple(&a, 0).unwrap();
        let seq = almost_split_sequence(&s1, &u).unwrap();
        assert!(seq.verified());
        assert_eq!(seq.iota.source().dims(), &[0, 1]);
        assert_eq!(seq.pi.source().dims(), &[1, 1]);

        let p1 = Module::projective(&a, 0).unwrap();
        assert!(almost_split_sequence(&p1, &u).is_err());
        let r = right_almost_split(&p1, &u).unwrap();
        assert!(r.verified());
        assert_eq!(r.result.alpha.source().dims(), &[0, 1]);
        assert!(r.result.alpha.is_mono());
    }

    #[test]
    fn end_mod_rad_self() {
        let d = dual_numbers();
        let reg = Module::regular(&d).unwrap();
        let c = end_mod_rad_compare(&reg, &reg).unwrap();
        assert!(c.isomorphic);
        assert_eq!(c.x, c.z);
        let ss = crate::decompose::sum_of(&d, &[Module::simple(&d, 0).unwrap(), Module::simple(&d, 0).unwrap()]).unwrap();
        let c = end_mod_rad_compare(&ss, &reg).unwrap();
        assert!(!c.x.is_field);
        assert!(!c.x.commutative);
        assert!(!c.isomorphic);
    }

    #[test]
    fn decomposable_target_is_rejected() {
        let d = dual_numbers();
        let u = build_universe(&d, 2).unwrap();
        let s = Module::simple(&d, 0).unwrap();
        let ss = crate::decompose::sum_of(&d, &[s.clone(), s]).unwrap();
        assert!(right_almost_split(&ss, &u).is_err());
    }
}
