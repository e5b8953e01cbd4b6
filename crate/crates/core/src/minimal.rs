//! Right-minimal reduction, minimal weak kernels and minimal presentations.

use crate::decompose::fitting;
use crate::error::{Error, Result};
use crate::hom::{end_ring, hom_basis, EndRing};
use crate::limits::{checked_pow, max_enum, CoeffIter};
use crate::module::{direct_sum, Module, Morphism};
use crate::subspace::Subspace;
use crate::universe::Universe;

/// `X = X' ⊕ X''` with `α|X'` right minimal and `α|X'' = 0`.
#[derive(Debug, Clone)]
pub struct RightMinimal {
    /// `α' = α|X'`.
    pub alpha: Morphism,
    pub minimal_inclusion: Morphism,
    pub null_inclusion: Morphism,
    /// `X -> X'` along `X''`; `α = α' ∘ projection`.
    pub projection: Morphism,
    /// `{ψ ∈ End X' | α'ψ = 0}` is a nilpotent ideal, so every `φ` with
    /// `α'φ = α'` is invertible.
    pub certified: bool,
    /// Direct enumeration of `{φ | α'φ = α'}`, when small enough to run.
    pub enumerated: Option<bool>,
}

/// Coordinates (in `end`) of the endomorphisms `ψ` with `α ∘ ψ = 0`.
fn annihilator_ideal(alpha: &Morphism, end: &EndRing) -> Result<Subspace> {
    let len: usize = alpha.blocks().iter().map(|b| b.rows() * b.cols()).sum();
    let m = end.hom.linear_map(len, |psi| Ok(alpha.compose(psi)?.flatten()))?;
    Ok(m.kernel())
}

/// Some non-nilpotent element of a subspace that is not nil.
fn non_nilpotent_in(end: &EndRing, k: &Subspace) -> Result<Vec<u32>> {
    let r = &end.ring;
    let basis = k.basis_vecs();
    let mut cands: Vec<Vec<u32>> = basis.clone();
    for i in 0..basis.len() {
        for j in (i + 1)..basis.len() {
            cands.push(basis[i].iter().zip(&basis[j]).map(|(&a, &b)| r.field().add(a, b)).collect());
        }
    }
    for u in &basis {
        for v in &basis {
            cands.push(r.mul(u, v));
        }
    }
    if let Some(x) = cands.into_iter().find(|x| !r.is_nilpotent(x)) {
        return Ok(x);
    }
    let p = r.field().p();
    if checked_pow(p as u64, k.dim()) > max_enum() {
        return Err(Error::CapExceeded(format!(
            "search for a non-nilpotent endomorphism over {p}^{} candidates",
            k.dim()
        )));
    }
    CoeffIter::new(p, k.dim())
        .map(|c| k.combine(&c))
        .find(|x| !r.is_nilpotent(x))
        .ok_or_else(|| Error::Precondition("non-nilpotent ideal without a non-nilpotent element".into()))
}

/// Whether every `φ ∈ End X` with `αφ = α` is invertible, by enumeration.
pub fn right_minimal_by_enumeration(alpha: &Morphism) -> Result<Option<bool>> {
    let end = end_ring(alpha.source())?;
    let k = annihilator_ideal(alpha, &end)?;
    let p = alpha.field().p();
    if checked_pow(p as u64, k.dim()) > max_enum() {
        return Ok(None);
    }
    let one = end.ring.unit().to_vec();
    let ok = CoeffIter::new(p, k.dim()).all(|c| {
        let x: Vec<u32> = k.combine(&c).iter().zip(&one).map(|(&a, &b)| end.ring.field().add(a, b)).collect();
        end.morphism(&x).is_iso()
    });
    Ok(Some(ok))
}

/// Whether `α` is right minimal, via nilpotency of its annihilator ideal.
pub fn is_right_minimal(alpha: &Morphism) -> Result<bool> {
    let end = end_ring(alpha.source())?;
    let k = annihilator_ideal(alpha, &end)?;
    Ok(end.ring.is_nilpotent_ideal(&k))
}

/// Splits off summands of the source on which `α` vanishes.
///
/// While the right ideal `K = {ψ | αψ = 0}` of `End X` is not nilpotent it
/// contains a non-nilpotent `ψ`; then `X = Ker ψ^N ⊕ Im ψ^N` and `α` kills
/// `Im ψ^N`. The loop continues on `Ker ψ^N`.
pub fn right_minimal_reduce(alpha: &Morphism) -> Result<RightMinimal> {
    let x = alpha.source();
    let f = x.field();
    let mut cur: Vec<Subspace> = x.dims().iter().map(|&d| Subspace::full(f, d)).collect();
    let mut null: Vec<Subspace> = x.dims().iter().map(|&d| Subspace::zero(f, d)).collect();
    loop {
        let (xc, inc) = x.submodule(&cur)?;
        let ac = alpha.compose(&inc)?;
        let end = end_ring(&xc)?;
        let k = annihilator_ideal(&ac, &end)?;
        if end.ring.is_nilpotent_ideal(&k) {
            break;
        }
        let psi = end.morphism(&non_nilpotent_in(&end, &k)?);
        let ((_, ker_inc), (_, im_inc)) = fitting(&psi)?;
        let kers: Vec<Subspace> = ker_inc.blocks().iter().map(|b| b.image()).collect();
        let ims: Vec<Subspace> = im_inc.blocks().iter().map(|b| b.image()).collect();
        let new_null = inc.image_of(&ims)?;
        for (n, add) in null.iter_mut().zip(new_null) {
            *n = n.sum(&add)?;
        }
        cur = inc.image_of(&kers)?;
    }
    let (xm, minimal_inclusion) = x.submodule(&cur)?;
    let (xn, null_inclusion) = x.submodule(&null)?;
    let alpha_min = alpha.compose(&minimal_inclusion)?;
    if !alpha.compose(&null_inclusion)?.is_zero() {
        return Err(Error::Precondition("split-off summand is not killed by the morphism".into()));
    }
    let sum = direct_sum(x.algebra(), &[xm.clone(), xn])?;
    let glue = minimal_inclusion
        .compose(&sum.projections[0])?
        .add(&null_inclusion.compose(&sum.projections[1])?)?;
    let inv = glue
        .inverse()
        .ok_or_else(|| Error::Precondition("summands do not decompose the source".into()))?;
    let projection = sum.projections[0].compose(&inv)?;
    let certified = is_right_minimal(&alpha_min)?;
    let enumerated = right_minimal_by_enumeration(&alpha_min)?;
    if enumerated == Some(false) {
        return Err(Error::Precondition("enumeration contradicts the minimality certificate".into()));
    }
    Ok(RightMinimal {
        alpha: alpha_min,
        minimal_inclusion,
        null_inclusion,
        projection,
        certified,
        enumerated,
    })
}

/// The kernel inclusion: a monomorphism, hence right minimal.
pub fn minimal_weak_kernel(beta: &Morphism) -> Result<Morphism> {
    Ok(beta.factor()?.kernel_inclusion)
}

#[derive(Debug, Clone)]
pub struct MinimalPresentation {
    pub beta: RightMinimal,
    /// Right-minimal reduction of the kernel inclusion of the reduced map.
    pub kappa: RightMinimal,
}

/// `K --κ--> X' --β'--> Y` with both maps right minimal and `β' ∘ κ = 0`.
pub fn minimal_presentation(beta: &Morphism) -> Result<MinimalPresentation> {
    let reduced = right_minimal_reduce(beta)?;
    let kappa = right_minimal_reduce(&minimal_weak_kernel(&reduced.alpha)?)?;
    Ok(MinimalPresentation {
        beta: reduced,
        kappa,
    })
}

impl MinimalPresentation {
    pub fn is_complex(&self) -> Result<bool> {
        Ok(self.beta.alpha.compose(&self.kappa.alpha)?.is_zero())
    }

    /// `Hom(T, K) -> Hom(T, X') -> Hom(T, Y)` is exact at `Hom(T, X')`.
    pub fn exact_at(&self, t: &Module) -> Result<bool> {
        let b = &self.beta.alpha;
        let k = &self.kappa.alpha;
        let htx = hom_basis(t, b.source())?;
        let len_y: usize = t.dims().iter().zip(b.target().dims()).map(|(a, c)| a * c).sum();
        let post_b = htx.linear_map(len_y, |g| Ok(b.compose(g)?.flatten()))?;
        let ker_coords = post_b.kernel();
        let htk = hom_basis(t, k.source())?;
        let mut img = Vec::new();
        for h in htk.basis() {
            let c = htx
                .coordinates(&k.compose(h)?)?
                .ok_or_else(|| Error::Precondition("composite left the Hom space".into()))?;
            img.push(c);
        }
        let img = Subspace::from_vectors(b.field(), htx.dim(), &img)?;
        Ok(img == ker_coords)
    }

    pub fn exact_over(&self, u: &Universe) -> Result<bool> {
        for t in u.modules() {
            if !self.exact_at(t)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}
