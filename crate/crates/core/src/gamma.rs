//! `Hom(C, Y)` as a right module over `Γ = End(C)` and the subfunctors it determines.

use crate::decompose::sum_of;
use crate::error::{dim_err, input_err, Error, Result};
use crate::hom::{end_ring, hom_basis, EndRing, HomSpace};
use crate::matrix::Matrix;
use crate::module::{Module, Morphism};
use crate::subspace::Subspace;

/// `Hom(⊕C, Y)` with `γ` acting by `β ↦ β ∘ γ`, so `act(γ₁γ₂) = act(γ₂)·act(γ₁)`.
#[derive(Debug, Clone)]
pub struct GammaModule {
    parts: Vec<Module>,
    c: Module,
    y: Module,
    gamma: EndRing,
    hom: HomSpace,
    action: Vec<Matrix>,
}

impl GammaModule {
    /// An empty `cs` gives the zero module over the zero ring.
    pub fn new(cs: &[Module], y: &Module) -> Result<Self> {
        let alg = y.algebra();
        for (i, c) in cs.iter().enumerate() {
            if !crate::module::same_algebra(c.algebra(), alg) {
                return Err(input_err!("C member #{i} lives over a different algebra than Y"));
            }
        }
        let c = sum_of(alg, cs)?;
        let gamma = end_ring(&c)?;
        let hom = hom_basis(&c, y)?;
        let action = gamma
            .hom
            .basis()
            .iter()
            .map(|g| precomposition_matrix(&hom, &hom, g))
            .collect::<Result<Vec<_>>>()?;
        let gm = GammaModule {
            parts: cs.to_vec(),
            c,
            y: y.clone(),
            gamma,
            hom,
            action,
        };
        gm.check_contravariance()?;
        Ok(gm)
    }

    fn check_contravariance(&self) -> Result<()> {
        let r = &self.gamma.ring;
        let f = r.field();
        for i in 0..r.dim() {
            for j in 0..r.dim() {
                let prod = &r.structure_constants()[i][j];
                let mut lhs = Matrix::zeros(f, self.dim(), self.dim());
                for (k, &c) in prod.iter().enumerate() {
                    if c != 0 {
                        lhs = lhs.add(&self.action[k].scale(c));
                    }
                }
                if lhs != self.action[j].mul(&self.action[i]) {
                    return Err(Error::Precondition(format!(
                        "precomposition action is not contravariant on basis pair ({i}, {j})"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn parts(&self) -> &[Module] {
        &self.parts
    }

    /// `⊕C`.
    pub fn c(&self) -> &Module {
        &self.c
    }

    pub fn y(&self) -> &Module {
        &self.y
    }

    pub fn gamma(&self) -> &EndRing {
        &self.gamma
    }

    pub fn hom(&self) -> &HomSpace {
        &self.hom
    }

    pub fn dim(&self) -> usize {
        self.hom.dim()
    }

    /// Matrices of `β ↦ β ∘ γ_i` in Hom coordinates, one per basis element of `Γ`.
    pub fn action(&self) -> &[Matrix] {
        &self.action
    }

    pub fn is_stable(&self, h: &Subspace) -> Result<bool> {
        if h.ambient() != self.dim() {
            return Err(dim_err!("subspace of dimension-{} space given for Hom of dimension {}", h.ambient(), self.dim()));
        }
        for a in &self.action {
            if !h.image_under(a)?.is_subspace_of(h)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn require_stable(&self, h: &Subspace) -> Result<()> {
        if !self.is_stable(h)? {
            return Err(input_err!("H = [{}] is not a Γ-submodule of Hom(C, Y)", h.label()));
        }
        Ok(())
    }

    /// The Γ-submodule generated by the given morphisms.
    pub fn generated_by(&self, gens: &[Morphism]) -> Result<Subspace> {
        let mut vecs = Vec::new();
        for g in gens {
            vecs.push(
                self.hom
                    .coordinates(g)?
                    .ok_or_else(|| input_err!("generator is not a morphism C -> Y"))?,
            );
        }
        let mut h = Subspace::from_vectors(self.y.field(), self.dim(), &vecs)?;
        loop {
            let mut next = h.clone();
            for a in &self.action {
                next = next.sum(&h.image_under(a)?)?;
            }
            if next == h {
                return Ok(h);
            }
            h = next;
        }
    }

    /// `Im Hom(C, α)` for `α: X -> Y`.
    pub fn image_subfunctor(&self, alpha: &Morphism) -> Result<Subspace> {
        if alpha.target() != &self.y {
            return Err(dim_err!("morphism does not end at Y"));
        }
        let hx = hom_basis(&self.c, alpha.source())?;
        let mut vecs = Vec::new();
        for g in hx.basis() {
            vecs.push(
                self.hom
                    .coordinates(&alpha.compose(g)?)?
                    .ok_or_else(|| Error::Precondition("composite is not in Hom(C, Y)".into()))?,
            );
        }
        let h = Subspace::from_vectors(self.y.field(), self.dim(), &vecs)?;
        if !self.is_stable(&h)? {
            return Err(Error::Precondition("image subfunctor is not Γ-stable".into()));
        }
        Ok(h)
    }

    /// `F_H(X) ⊆ Hom(X, Y)`, in coordinates of `hom_basis(X, Y)`.
    pub fn fh_eval(&self, h: &Subspace, x: &Module, method: FhMethod) -> Result<Subspace> {
        self.require_stable(h)?;
        let hxy = hom_basis(x, &self.y)?;
        let hcx = hom_basis(&self.c, x)?;
        // L_j : β ↦ β ∘ γ_j, Hom(X, Y) -> Hom(C, Y)
        let ls = hcx
            .basis()
            .iter()
            .map(|g| precomposition_matrix(&hxy, &self.hom, g))
            .collect::<Result<Vec<_>>>()?;
        let f = self.y.field();
        match method {
            FhMethod::Intersection => {
                let mut out = Subspace::full(f, hxy.dim());
                for l in &ls {
                    out = out.meet(&h.preimage(l)?)?;
                }
                Ok(out)
            }
            FhMethod::Coinduction => {
                let q = h.quotient_map();
                let mut eta = Matrix::zeros(f, 0, hxy.dim());
                for l in &ls {
                    eta = eta.vstack(&q.mul(l));
                }
                Ok(eta.kernel())
            }
        }
    }

    /// Morphisms behind a subspace of `hom_basis(x, y)` coordinates.
    pub fn morphisms_of(hxy: &HomSpace, s: &Subspace) -> Vec<Morphism> {
        s.basis_vecs().iter().map(|c| hxy.combine(c)).collect()
    }
}

/// Matrix of `β ↦ β ∘ γ` from `from` (Hom(X, Y)) to `to` (Hom(C, Y)) coordinates.
fn precomposition_matrix(from: &HomSpace, to: &HomSpace, gamma: &Morphism) -> Result<Matrix> {
    let cols = from
        .basis()
        .iter()
        .map(|b| {
            to.coordinates(&b.compose(gamma)?)?
                .ok_or_else(|| Error::Precondition("precomposite left the Hom space".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_col_vecs(from.source().field(), to.dim(), &cols)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FhMethod {
    /// Intersection of preimages of `H` under all `β ↦ β ∘ γ`.
    Intersection,
    /// Kernel of `β ↦ (γ ↦ βγ + H)` into `Hom(Hom(C,X), Hom(C,Y)/H)`.
    Coinduction,
}

/// `{x ∈ X | α(x) ∈ h for every α: X -> C}` inside the total space of `X`.
/// `h` is any subspace of the total space of `C`.
pub fn forgetful_fh(c: &Module, h: &Subspace, x: &Module) -> Result<Subspace> {
    if h.ambient() != c.total_dim() {
        return Err(dim_err!("h has ambient {} but C has dimension {}", h.ambient(), c.total_dim()));
    }
    let mut out = Subspace::full(x.field(), x.total_dim());
    for a in hom_basis(x, c)?.basis() {
        out = out.meet(&h.preimage(&a.total_matrix())?)?;
    }
    Ok(out)
}

/// Whether a total-space subspace of `C` is stable under every endomorphism.
pub fn is_end_stable(c: &Module, h: &Subspace) -> Result<bool> {
    for e in hom_basis(c, c)?.basis() {
        if !h.image_under(&e.total_matrix())?.is_subspace_of(h)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::limits::CoeffIter;
    use crate::module::tests::{a2, dual_numbers, gf2};
    use crate::module::direct_sum;

    #[test]
    fn yoneda_and_empty() {
        let d = dual_numbers();
        let reg = Module::regular(&d).unwrap();
        let y = direct_sum(&d, &[reg.clone(), Module::simple(&d, 0).unwrap()]).unwrap().module;
        assert_eq!(GammaModule::new(std::slice::from_ref(&reg), &y).unwrap().dim(), y.total_dim());
        let empty = GammaModule::new(&[], &y).unwrap();
        assert_eq!(empty.dim(), 0);
        assert_eq!(empty.gamma().ring.dim(), 0);
        let gm = GammaModule::new(std::slice::from_ref(&y), &y).unwrap();
        assert_eq!(gm.gamma().ring.dim(), 5);
        assert_eq!(gm.dim(), 5);
    }

    #[test]
    fn image_subfunctor_examples() {
        let a = a2();
        let p1 = Module::projective(&a, 0).unwrap();
        let s1 = Module::simple(&a, 0).unwrap();
        let gm = GammaModule::new(std::slice::from_ref(&s1), &s1).unwrap();
        assert!(gm.image_subfunctor(&Morphism::identity(&s1)).unwrap().is_full());
        assert!(gm.image_subfunctor(&Morphism::zero(&p1, &s1)).unwrap().is_zero());
        let pi = hom_basis(&p1, &s1).unwrap().basis()[0].clone();
        assert!(gm.image_subfunctor(&pi).unwrap().is_zero());
    }

    #[test]
    fn fh_examples_and_methods_agree() {
        let d = dual_numbers();
        let reg = Module::regular(&d).unwrap();
        let s = Module::simple(&d, 0).unwrap();
        let gm = GammaModule::new(std::slice::from_ref(&reg), &reg).unwrap();
        let full = Subspace::full(gf2(), gm.dim());
        for x in [&reg, &s] {
            let hxy = hom_basis(x, &reg).unwrap();
            for m in [FhMethod::Intersection, FhMethod::Coinduction] {
                assert_eq!(gm.fh_eval(&full, x, m).unwrap().dim(), hxy.dim());
                assert!(gm.fh_eval(&Subspace::zero(gf2(), gm.dim()), x, m).unwrap().is_zero());
            }
        }
        // socle line: the endomorphism 1 ↦ ε
        let soc = gm.generated_by(&[hom_basis(&reg, &reg)
            .unwrap()
            .basis()
            .iter()
            .find(|b| b.blocks()[0].rank() == 1)
            .unwrap()
            .clone()])
        .unwrap();
        assert_eq!(soc.dim(), 1);
        let on_reg = gm.fh_eval(&soc, &reg, FhMethod::Intersection).unwrap();
        assert_eq!(on_reg, gm.fh_eval(&soc, &reg, FhMethod::Coinduction).unwrap());
        assert_eq!(on_reg, soc);
        let on_s = gm.fh_eval(&soc, &s, FhMethod::Coinduction).unwrap();
        assert!(on_s.is_full());
        assert_eq!(on_s, gm.fh_eval(&soc, &s, FhMethod::Intersection).unwrap());

        // elementwise oracle: β ∈ F_H(X) iff β∘γ ∈ H for all γ: C -> X
        for x in [&reg, &s] {
            let hxy = hom_basis(x, &reg).unwrap();
            let hcx = hom_basis(&reg, x).unwrap();
            let fh = gm.fh_eval(&soc, x, FhMethod::Intersection).unwrap();
            for c in CoeffIter::new(2, hxy.dim()) {
                let beta = hxy.combine(&c);
                let oracle = hcx.elements().unwrap().all(|g| {
                    let v = gm.hom().coordinates(&beta.compose(&g).unwrap()).unwrap().unwrap();
                    soc.contains(&v).unwrap()
                });
                assert_eq!(fh.contains(&c).unwrap(), oracle);
            }
        }
    }

    #[test]
    fn unstable_h_rejected() {
        let d = dual_numbers();
        let reg = Module::regular(&d).unwrap();
        let gm = GammaModule::new(std::slice::from_ref(&reg), &reg).unwrap();
        let id = gm.hom().coordinates(&Morphism::identity(&reg)).unwrap().unwrap();
        let line = Subspace::from_vectors(gf2(), 2, &[id]).unwrap();
        assert!(!gm.is_stable(&line).unwrap());
        assert!(gm.fh_eval(&line, &reg, FhMethod::Intersection).is_err());
    }

    #[test]
    fn forgetful_examples() {
        let d = dual_numbers();
        let reg = Module::regular(&d).unwrap();
        let c = direct_sum(&d, &[reg.clone(), Module::simple(&d, 0).unwrap()]).unwrap().module;
        let full = Subspace::full(gf2(), 3);
        assert!(forgetful_fh(&c, &full, &reg).unwrap().is_full());
        assert!(forgetful_fh(&reg, &Subspace::zero(gf2(), 2), &reg).unwrap().is_zero());
        let h = Subspace::from_vectors(gf2(), 3, &[vec![0, 1, 0]]).unwrap();
        let got = forgetful_fh(&c, &h, &reg).unwrap();
        let maps: Vec<Morphism> = hom_basis(&reg, &c).unwrap().elements().unwrap().collect();
        let oracle: Vec<Vec<u32>> = CoeffIter::new(2, 2)
            .filter(|x| maps.iter().all(|a| h.contains(&a.total_matrix().mul_vec(x)).unwrap()))
            .collect();
        assert_eq!(got, Subspace::from_vectors(gf2(), 2, &oracle).unwrap());
        assert_eq!(got.dim(), 1);
        assert!(is_end_stable(&c, &h).unwrap());
    }
}
