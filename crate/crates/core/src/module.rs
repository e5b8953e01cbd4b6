//! Representations of bound quivers and morphisms between them.
//!
//! A module assigns a space `GF(p)^dims[v]` to each vertex and a matrix of
//! shape `dims[target] x dims[source]` to each arrow. Vectors of the total
//! space concatenate the vertex blocks in vertex order.

use std::fmt;
use std::sync::Arc;

use crate::algebra::{Element, Path, PathAlgebra};
use crate::error::{dim_err, input_err, Error, Result};
use crate::field::PrimeField;
use crate::matrix::Matrix;
use crate::subspace::Subspace;

#[derive(Clone)]
pub struct Module {
    alg: Arc<PathAlgebra>,
    dims: Vec<usize>,
    maps: Vec<Matrix>,
}

impl PartialEq for Module {
    fn eq(&self, other: &Self) -> bool {
        self.dims == other.dims && self.maps == other.maps && same_algebra(&self.alg, &other.alg)
    }
}

impl Eq for Module {}

pub(crate) fn same_algebra(a: &Arc<PathAlgebra>, b: &Arc<PathAlgebra>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl fmt::Debug for Module {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let q = self.alg.quiver();
        write!(f, "Module(dims {:?}", self.dims)?;
        for (a, m) in q.arrows().iter().zip(&self.maps) {
            if !m.is_zero() {
                write!(f, ", {}: {:?}", a.name, m.row_vecs())?;
            }
        }
        write!(f, ")")
    }
}

impl Module {
    /// Checked constructor: shapes and relations must hold.
    pub fn new(alg: Arc<PathAlgebra>, dims: Vec<usize>, maps: Vec<Matrix>) -> Result<Self> {
        let m = Module::new_unchecked(alg, dims, maps)?;
        m.validate()?;
        Ok(m)
    }

    /// Shape-checked only; relations are not evaluated.
    pub fn new_unchecked(alg: Arc<PathAlgebra>, dims: Vec<usize>, maps: Vec<Matrix>) -> Result<Self> {
        let q = alg.quiver();
        if dims.len() != q.num_vertices() {
            return Err(dim_err!(
                "{} vertex dimensions given for {} vertices",
                dims.len(),
                q.num_vertices()
            ));
        }
        if maps.len() != q.arrows().len() {
            return Err(dim_err!("{} arrow maps given for {} arrows", maps.len(), q.arrows().len()));
        }
        for (a, m) in q.arrows().iter().zip(&maps) {
            if m.shape() != (dims[a.target], dims[a.source]) || m.field() != alg.field() {
                return Err(dim_err!(
                    "arrow {} needs a {}x{} matrix, got {:?}",
                    a.name,
                    dims[a.target],
                    dims[a.source],
                    m.shape()
                ));
            }
        }
        Ok(Module { alg, dims, maps })
    }

    pub fn zero(alg: &Arc<PathAlgebra>) -> Self {
        let dims = vec![0; alg.num_vertices()];
        let maps = alg.quiver().arrows().iter().map(|_| Matrix::zeros(alg.field(), 0, 0)).collect();
        Module {
            alg: alg.clone(),
            dims,
            maps,
        }
    }

    pub fn algebra(&self) -> &Arc<PathAlgebra> {
        &self.alg
    }

    pub fn field(&self) -> PrimeField {
        self.alg.field()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    pub fn maps(&self) -> &[Matrix] {
        &self.maps
    }

    pub fn map(&self, arrow: &str) -> Result<&Matrix> {
        Ok(&self.maps[self.alg.quiver().arrow_index(arrow)?])
    }

    /// Start of each vertex block inside the total space.
    pub fn offsets(&self) -> Vec<usize> {
        let mut acc = 0;
        self.dims
            .iter()
            .map(|d| {
                let o = acc;
                acc += d;
                o
            })
            .collect()
    }

    pub fn path_matrix(&self, p: &Path) -> Matrix {
        let mut m = Matrix::identity(self.field(), self.dims[p.source]);
        for &a in &p.arrows {
            m = self.maps[a].mul(&m);
        }
        m
    }

    /// The action of an algebra element on the total space.
    pub fn element_matrix(&self, x: &Element) -> Matrix {
        let f = self.field();
        let n = self.total_dim();
        let off = self.offsets();
        let mut out = Matrix::zeros(f, n, n);
        for (i, &c) in x.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let p = &self.alg.basis()[i];
            let pm = self.path_matrix(p).scale(c);
            let cur = out.block(off[p.target], off[p.source], pm.rows(), pm.cols());
            out.set_block(off[p.target], off[p.source], &cur.add(&pm));
        }
        out
    }

    /// Arrow maps and vertex projections as total-space matrices; they
    /// generate the algebra action.
    pub fn generator_matrices(&self) -> Vec<Matrix> {
        let mut gens: Vec<Matrix> = (0..self.alg.num_vertices())
            .map(|v| self.element_matrix(&self.alg.idempotent(v)))
            .collect();
        let off = self.offsets();
        let n = self.total_dim();
        for (a, m) in self.alg.quiver().arrows().iter().zip(&self.maps) {
            let mut t = Matrix::zeros(self.field(), n, n);
            t.set_block(off[a.target], off[a.source], m);
            gens.push(t);
        }
        gens
    }

    /// Every relation, and every path of length equal to the cap, acting as zero.
    pub fn violations(&self) -> Vec<String> {
        let q = self.alg.quiver();
        let f = self.field();
        let mut out = Vec::new();
        for (k, r) in self.alg.relations().iter().enumerate() {
            let mut acc = Matrix::zeros(f, self.dims[r.target()], self.dims[r.source()]);
            for (c, p) in r.terms() {
                acc = acc.add(&self.path_matrix(p).scale(*c));
            }
            if !acc.is_zero() {
                let desc: Vec<String> =
                    r.terms().iter().map(|(c, p)| format!("{c}·{}", p.display(q))).collect();
                out.push(format!("relation #{k} ({}) does not vanish", desc.join(" + ")));
            }
        }
        for s in 0..q.num_vertices() {
            let mut frontier = vec![Path::trivial(s)];
            for _ in 0..self.alg.cap() {
                frontier = frontier
                    .iter()
                    .flat_map(|p| (0..q.arrows().len()).filter_map(|a| p.then_arrow(q, a)))
                    .filter(|p| !self.path_matrix(p).is_zero())
                    .collect();
            }
            for p in frontier {
                out.push(format!("path {} of length {} acts nonzero", p.display(q), p.len()));
            }
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        match self.violations().first() {
            None => Ok(()),
            Some(v) => Err(Error::Precondition(format!("module violates its algebra: {v}"))),
        }
    }

    pub fn simple(alg: &Arc<PathAlgebra>, v: usize) -> Result<Self> {
        check_vertex(alg, v)?;
        let mut dims = vec![0; alg.num_vertices()];
        dims[v] = 1;
        let maps = alg
            .quiver()
            .arrows()
            .iter()
            .map(|a| Matrix::zeros(alg.field(), dims[a.target], dims[a.source]))
            .collect();
        Module::new(alg.clone(), dims, maps)
    }

    /// Paths starting at `v`; an arrow sends `q` to `q` followed by the arrow.
    pub fn projective(alg: &Arc<PathAlgebra>, v: usize) -> Result<Self> {
        check_vertex(alg, v)?;
        let nv = alg.num_vertices();
        let blocks: Vec<Vec<usize>> = (0..nv).map(|w| alg.basis_between(v, w)).collect();
        let dims: Vec<usize> = blocks.iter().map(Vec::len).collect();
        let q = alg.quiver();
        let f = alg.field();
        let maps = q
            .arrows()
            .iter()
            .enumerate()
            .map(|(ai, a)| {
                let arrow = Path {
                    source: a.source,
                    target: a.target,
                    arrows: vec![ai],
                };
                let ae = alg.reduce_path(&arrow);
                let mut m = Matrix::zeros(f, dims[a.target], dims[a.source]);
                for (j, &bj) in blocks[a.source].iter().enumerate() {
                    let prod = alg.multiply(&alg.unit(bj), &ae);
                    for (i, &bi) in blocks[a.target].iter().enumerate() {
                        m.set(i, j, prod[bi]);
                    }
                }
                m
            })
            .collect();
        Module::new(alg.clone(), dims, maps)
    }

    /// Dual of the paths ending at `v`.
    pub fn injective(alg: &Arc<PathAlgebra>, v: usize) -> Result<Self> {
        check_vertex(alg, v)?;
        let nv = alg.num_vertices();
        let blocks: Vec<Vec<usize>> = (0..nv).map(|w| alg.basis_between(w, v)).collect();
        let dims: Vec<usize> = blocks.iter().map(Vec::len).collect();
        let q = alg.quiver();
        let f = alg.field();
        let maps = q
            .arrows()
            .iter()
            .enumerate()
            .map(|(ai, a)| {
                let arrow = Path {
                    source: a.source,
                    target: a.target,
                    arrows: vec![ai],
                };
                let ae = alg.reduce_path(&arrow);
                // left multiplication by the arrow: paths target(a)->v to paths source(a)->v
                let mut left = Matrix::zeros(f, dims[a.source], dims[a.target]);
                for (j, &bj) in blocks[a.target].iter().enumerate() {
                    let prod = alg.multiply(&ae, &alg.unit(bj));
                    for (i, &bi) in blocks[a.source].iter().enumerate() {
                        left.set(i, j, prod[bi]);
                    }
                }
                left.transpose()
            })
            .collect();
        Module::new(alg.clone(), dims, maps)
    }

    /// The regular module, the sum of all indecomposable projectives.
    pub fn regular(alg: &Arc<PathAlgebra>) -> Result<Self> {
        let ps = (0..alg.num_vertices())
            .map(|v| Module::projective(alg, v))
            .collect::<Result<Vec<_>>>()?;
        Ok(direct_sum(alg, &ps)?.module)
    }

    /// `D = Hom(-, GF(p))`, a module over `op` (which must be the opposite algebra).
    pub fn dual_over(&self, op: &Arc<PathAlgebra>) -> Result<Module> {
        let q = self.alg.quiver();
        let oq = op.quiver();
        if oq.vertices() != q.vertices()
            || oq.arrows().len() != q.arrows().len()
            || oq.arrows().iter().zip(q.arrows()).any(|(o, a)| {
                o.name != a.name || o.source != a.target || o.target != a.source
            })
        {
            return Err(input_err!("dual: algebra is not the opposite of the module's algebra"));
        }
        Module::new(op.clone(), self.dims.clone(), self.maps.iter().map(Matrix::transpose).collect())
    }

    pub fn dual(&self) -> Result<Module> {
        self.dual_over(&Arc::new(self.alg.opposite()?))
    }

    /// Dimension of `top = M / rad M` at each vertex.
    pub fn top_dims(&self) -> Vec<usize> {
        let q = self.alg.quiver();
        let f = self.field();
        (0..q.num_vertices())
            .map(|v| {
                let mut rad = Subspace::zero(f, self.dims[v]);
                for (a, m) in q.arrows().iter().zip(&self.maps) {
                    if a.target == v {
                        rad = rad.sum(&m.image()).expect("same vertex");
                    }
                }
                self.dims[v] - rad.dim()
            })
            .collect()
    }

    /// Projective iff the projective cover of the top has the same dimension.
    pub fn is_projective(&self) -> Result<bool> {
        let top = self.top_dims();
        let mut cover = 0;
        for (v, &t) in top.iter().enumerate() {
            if t > 0 {
                cover += t * Module::projective(&self.alg, v)?.total_dim();
            }
        }
        Ok(cover == self.total_dim())
    }

    /// `ν(P) = D Hom(P, Λ)`, computed vertexwise as `D Hom(P, P(v))`.
    pub fn nakayama(&self) -> Result<Module> {
        if !self.is_projective()? {
            return Err(Error::Precondition("Nakayama functor needs a projective module".into()));
        }
        let alg = &self.alg;
        let nv = alg.num_vertices();
        let ps: Vec<Module> = (0..nv).map(|v| Module::projective(alg, v)).collect::<Result<_>>()?;
        let homs: Vec<crate::hom::HomSpace> =
            ps.iter().map(|pv| crate::hom::hom_basis(self, pv)).collect::<Result<_>>()?;
        let dims: Vec<usize> = homs.iter().map(|h| h.dim()).collect();
        let q = alg.quiver();
        let f = self.field();
        let mut maps = Vec::new();
        for (ai, a) in q.arrows().iter().enumerate() {
            // left multiplication by a: P(target) -> P(source)
            let lam = left_mult_morphism(alg, &ps[a.target], &ps[a.source], ai)?;
            let (u, v) = (a.source, a.target);
            let mut post = Matrix::zeros(f, dims[u], dims[v]);
            for (j, g) in homs[v].basis().iter().enumerate() {
                let c = homs[u]
                    .coordinates(&lam.compose(g)?)?
                    .ok_or_else(|| Error::Precondition("postcomposition left the Hom space".into()))?;
                for (i, x) in c.into_iter().enumerate() {
                    post.set(i, j, x);
                }
            }
            maps.push(post.transpose());
        }
        Module::new(alg.clone(), dims, maps)
    }

    /// Submodule spanned vertexwise by the given subspaces, with its inclusion.
    /// The basis of each vertex is the RREF basis of the subspace.
    pub fn submodule(&self, subs: &[Subspace]) -> Result<(Module, Morphism)> {
        if subs.len() != self.dims.len()
            || subs.iter().zip(&self.dims).any(|(s, &d)| s.ambient() != d)
        {
            return Err(dim_err!("submodule: subspaces do not match the vertex dimensions"));
        }
        let incl: Vec<Matrix> = subs.iter().map(|s| s.basis().transpose()).collect();
        let mut maps = Vec::new();
        for (a, m) in self.alg.quiver().arrows().iter().zip(&self.maps) {
            let img = m.mul(&incl[a.source]);
            let x = incl[a.target].solve(&img)?.ok_or_else(|| {
                Error::Precondition(format!("submodule is not stable under arrow {}", a.name))
            })?;
            maps.push(x);
        }
        let dims: Vec<usize> = subs.iter().map(Subspace::dim).collect();
        let sub = Module::new_unchecked(self.alg.clone(), dims, maps)?;
        let inc = Morphism::new_unchecked(sub.clone(), self.clone(), incl)?;
        Ok((sub, inc))
    }

    /// Splits a subspace of the total space into vertex parts, if it is graded.
    pub fn split_total(&self, s: &Subspace) -> Result<Vec<Subspace>> {
        if s.ambient() != self.total_dim() {
            return Err(dim_err!("subspace ambient {} vs module dimension {}", s.ambient(), self.total_dim()));
        }
        let f = self.field();
        let off = self.offsets();
        let mut parts = Vec::new();
        let mut total = 0;
        for (&o, &d) in off.iter().zip(&self.dims) {
            let proj = Matrix::identity(f, self.total_dim()).block(o, 0, d, self.total_dim());
            let part = s.image_under(&proj)?;
            total += part.dim();
            parts.push(part);
        }
        if total != s.dim() {
            return Err(Error::Precondition("subspace is not a sum of vertex pieces".into()));
        }
        Ok(parts)
    }

    /// Vertex pieces embedded back into the total space.
    pub fn join_total(&self, parts: &[Subspace]) -> Subspace {
        let off = self.offsets();
        let n = self.total_dim();
        let mut vecs = Vec::new();
        for (v, s) in parts.iter().enumerate() {
            for r in s.basis_vecs() {
                let mut w = vec![0; n];
                w[off[v]..off[v] + r.len()].copy_from_slice(&r);
                vecs.push(w);
            }
        }
        Subspace::from_vectors(self.field(), n, &vecs).expect("lengths match")
    }
}

fn check_vertex(alg: &PathAlgebra, v: usize) -> Result<()> {
    if v >= alg.num_vertices() {
        return Err(input_err!("vertex index {v} out of range"));
    }
    Ok(())
}

/// `λ_a : P(t) -> P(s)`, `q ↦ a·q`, for an arrow `a: s -> t`.
pub(crate) fn left_mult_morphism(
    alg: &Arc<PathAlgebra>,
    pt: &Module,
    ps: &Module,
    arrow: usize,
) -> Result<Morphism> {
    let a = &alg.quiver().arrows()[arrow];
    let ae = alg.reduce_path(&Path {
        source: a.source,
        target: a.target,
        arrows: vec![arrow],
    });
    let f = alg.field();
    let blocks = (0..alg.num_vertices())
        .map(|w| {
            let src = alg.basis_between(a.target, w);
            let dst = alg.basis_between(a.source, w);
            let mut m = Matrix::zeros(f, dst.len(), src.len());
            for (j, &bj) in src.iter().enumerate() {
                let prod = alg.multiply(&ae, &alg.unit(bj));
                for (i, &bi) in dst.iter().enumerate() {
                    m.set(i, j, prod[bi]);
                }
            }
            m
        })
        .collect();
    Morphism::new(pt.clone(), ps.clone(), blocks)
}

/// A module map given by one matrix per vertex.
#[derive(Clone, PartialEq, Eq)]
pub struct Morphism {
    source: Module,
    target: Module,
    blocks: Vec<Matrix>,
}

impl fmt::Debug for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Morphism({:?} -> {:?}: {:?})",
            self.source.dims,
            self.target.dims,
            self.blocks.iter().map(Matrix::row_vecs).collect::<Vec<_>>()
        )
    }
}

impl Morphism {
    pub fn new(source: Module, target: Module, blocks: Vec<Matrix>) -> Result<Self> {
        let m = Morphism::new_unchecked(source, target, blocks)?;
        if let Some(a) = m.intertwining_failure() {
            return Err(Error::Precondition(format!("morphism does not commute with arrow {a}")));
        }
        Ok(m)
    }

    pub(crate) fn new_unchecked(source: Module, target: Module, blocks: Vec<Matrix>) -> Result<Self> {
        if !same_algebra(&source.alg, &target.alg) {
            return Err(input_err!("morphism between modules over different algebras"));
        }
        if blocks.len() != source.dims.len() {
            return Err(dim_err!("{} blocks for {} vertices", blocks.len(), source.dims.len()));
        }
        for (v, b) in blocks.iter().enumerate() {
            if b.shape() != (target.dims[v], source.dims[v]) {
                return Err(dim_err!(
                    "block at vertex {v} is {:?}, expected {}x{}",
                    b.shape(),
                    target.dims[v],
                    source.dims[v]
                ));
            }
        }
        Ok(Morphism {
            source,
            target,
            blocks,
        })
    }

    fn intertwining_failure(&self) -> Option<String> {
        let q = self.source.alg.quiver();
        q.arrows().iter().enumerate().find_map(|(i, a)| {
            let lhs = self.target.maps[i].mul(&self.blocks[a.source]);
            let rhs = self.blocks[a.target].mul(&self.source.maps[i]);
            (lhs != rhs).then(|| a.name.clone())
        })
    }

    pub fn zero(source: &Module, target: &Module) -> Self {
        let f = source.field();
        let blocks = (0..source.dims.len())
            .map(|v| Matrix::zeros(f, target.dims[v], source.dims[v]))
            .collect();
        Morphism {
            source: source.clone(),
            target: target.clone(),
            blocks,
        }
    }

    pub fn identity(m: &Module) -> Self {
        let f = m.field();
        Morphism {
            source: m.clone(),
            target: m.clone(),
            blocks: m.dims.iter().map(|&d| Matrix::identity(f, d)).collect(),
        }
    }

    pub fn source(&self) -> &Module {
        &self.source
    }

    pub fn target(&self) -> &Module {
        &self.target
    }

    pub fn blocks(&self) -> &[Matrix] {
        &self.blocks
    }

    pub fn field(&self) -> PrimeField {
        self.source.field()
    }

    /// `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &Morphism) -> Result<Morphism> {
        if other.target != self.source {
            return Err(dim_err!(
                "cannot compose: {:?} -> {:?} after {:?} -> {:?}",
                self.source.dims,
                self.target.dims,
                other.source.dims,
                other.target.dims
            ));
        }
        Ok(Morphism {
            source: other.source.clone(),
            target: self.target.clone(),
            blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| a.mul(b)).collect(),
        })
    }

    fn check_parallel(&self, other: &Morphism) -> Result<()> {
        if self.source != other.source || self.target != other.target {
            return Err(dim_err!("morphisms are not parallel"));
        }
        Ok(())
    }

    pub fn add(&self, other: &Morphism) -> Result<Morphism> {
        self.check_parallel(other)?;
        Ok(Morphism {
            blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| a.add(b)).collect(),
            ..self.clone()
        })
    }

    pub fn sub(&self, other: &Morphism) -> Result<Morphism> {
        self.check_parallel(other)?;
        Ok(Morphism {
            blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| a.sub(b)).collect(),
            ..self.clone()
        })
    }

    pub fn scale(&self, c: u32) -> Morphism {
        Morphism {
            blocks: self.blocks.iter().map(|b| b.scale(c)).collect(),
            ..self.clone()
        }
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(Matrix::is_zero)
    }

    pub fn is_mono(&self) -> bool {
        self.blocks.iter().all(|b| b.rank() == b.cols())
    }

    pub fn is_epi(&self) -> bool {
        self.blocks.iter().all(|b| b.rank() == b.rows())
    }

    pub fn is_iso(&self) -> bool {
        self.blocks.iter().all(Matrix::is_invertible)
    }

    pub fn inverse(&self) -> Option<Morphism> {
        let blocks = self.blocks.iter().map(Matrix::inverse).collect::<Option<Vec<_>>>()?;
        Some(Morphism {
            source: self.target.clone(),
            target: self.source.clone(),
            blocks,
        })
    }

    /// Block entries concatenated vertex by vertex, each block row-major.
    pub fn flatten(&self) -> Vec<u32> {
        self.blocks.iter().flat_map(|b| b.data().iter().copied()).collect()
    }

    pub fn from_flat(source: &Module, target: &Module, v: &[u32]) -> Result<Morphism> {
        let f = source.field();
        let mut blocks = Vec::new();
        let mut pos = 0;
        for (&ds, &dt) in source.dims.iter().zip(&target.dims) {
            let n = ds * dt;
            if pos + n > v.len() {
                return Err(dim_err!("flat morphism vector too short"));
            }
            blocks.push(Matrix::new(f, dt, ds, v[pos..pos + n].to_vec())?);
            pos += n;
        }
        if pos != v.len() {
            return Err(dim_err!("flat morphism vector too long"));
        }
        Morphism::new(source.clone(), target.clone(), blocks)
    }

    /// Block-diagonal matrix on the total spaces.
    pub fn total_matrix(&self) -> Matrix {
        let f = self.field();
        let mut m = Matrix::zeros(f, self.target.total_dim(), self.source.total_dim());
        let (so, to) = (self.source.offsets(), self.target.offsets());
        for (v, b) in self.blocks.iter().enumerate() {
            m.set_block(to[v], so[v], b);
        }
        m
    }

    /// Vertexwise images of vertexwise subspaces of the source.
    pub fn image_of(&self, subs: &[Subspace]) -> Result<Vec<Subspace>> {
        subs.iter().zip(&self.blocks).map(|(s, b)| s.image_under(b)).collect()
    }

    /// Vertexwise preimages of vertexwise subspaces of the target.
    pub fn preimage_of(&self, subs: &[Subspace]) -> Result<Vec<Subspace>> {
        subs.iter().zip(&self.blocks).map(|(s, b)| s.preimage(b)).collect()
    }

    /// Kernel, image and cokernel with their canonical maps.
    pub fn factor(&self) -> Result<Factorization> {
        let kers: Vec<Subspace> = self.blocks.iter().map(Matrix::kernel).collect();
        let imgs: Vec<Subspace> = self.blocks.iter().map(Matrix::image).collect();
        let (kernel, kernel_inclusion) = self.source.submodule(&kers)?;
        let (image, image_inclusion) = self.target.submodule(&imgs)?;
        let quots: Vec<Matrix> = imgs.iter().map(Subspace::quotient_map).collect();
        let mut maps = Vec::new();
        for (a, m) in self.target.alg.quiver().arrows().iter().zip(&self.target.maps) {
            let rhs = quots[a.target].mul(m);
            let y = quots[a.source]
                .solve_left(&rhs)?
                .ok_or_else(|| Error::Precondition("cokernel map is not induced".into()))?;
            maps.push(y);
        }
        let dims: Vec<usize> = quots.iter().map(Matrix::rows).collect();
        let cokernel = Module::new_unchecked(self.target.alg.clone(), dims, maps)?;
        let cokernel_projection = Morphism::new(self.target.clone(), cokernel.clone(), quots)?;
        Ok(Factorization {
            kernel,
            kernel_inclusion,
            image,
            image_inclusion,
            cokernel,
            cokernel_projection,
        })
    }
}

#[derive(Debug, Clone)]
pub struct Factorization {
    pub kernel: Module,
    pub kernel_inclusion: Morphism,
    pub image: Module,
    pub image_inclusion: Morphism,
    pub cokernel: Module,
    pub cokernel_projection: Morphism,
}

#[derive(Debug, Clone)]
pub struct DirectSum {
    pub module: Module,
    pub injections: Vec<Morphism>,
    pub projections: Vec<Morphism>,
}

/// `⊕ ms` with canonical injections and projections. The empty sum is zero.
pub fn direct_sum(alg: &Arc<PathAlgebra>, ms: &[Module]) -> Result<DirectSum> {
    for m in ms {
        if !same_algebra(&m.alg, alg) {
            return Err(input_err!("direct sum of modules over different algebras"));
        }
    }
    let f = alg.field();
    let nv = alg.num_vertices();
    let dims: Vec<usize> = (0..nv).map(|v| ms.iter().map(|m| m.dims[v]).sum()).collect();
    let maps = (0..alg.quiver().arrows().len())
        .map(|a| {
            let blocks: Vec<Matrix> = ms.iter().map(|m| m.maps[a].clone()).collect();
            Matrix::block_diag(f, &blocks)
        })
        .collect();
    let module = Module::new_unchecked(alg.clone(), dims.clone(), maps)?;
    let mut injections = Vec::new();
    let mut projections = Vec::new();
    let mut off = vec![0usize; nv];
    for m in ms {
        let mut inj = Vec::new();
        let mut proj = Vec::new();
        for v in 0..nv {
            let mut i = Matrix::zeros(f, dims[v], m.dims[v]);
            i.set_block(off[v], 0, &Matrix::identity(f, m.dims[v]));
            proj.push(i.transpose());
            inj.push(i);
            off[v] += m.dims[v];
        }
        injections.push(Morphism::new_unchecked(m.clone(), module.clone(), inj)?);
        projections.push(Morphism::new_unchecked(module.clone(), m.clone(), proj)?);
    }
    Ok(DirectSum {
        module,
        injections,
        projections,
    })
}

/// The morphism `⊕ sources -> target` with the given components.
pub fn row_morphism(alg: &Arc<PathAlgebra>, target: &Module, parts: &[Morphism]) -> Result<(DirectSum, Morphism)> {
    let sources: Vec<Module> = parts.iter().map(|m| m.source.clone()).collect();
    let sum = direct_sum(alg, &sources)?;
    let mut total = Morphism::zero(&sum.module, target);
    for (part, proj) in parts.iter().zip(&sum.projections) {
        if part.target != *target {
            return Err(dim_err!("row morphism component has the wrong target"));
        }
        total = total.add(&part.compose(proj)?)?;
    }
    Ok((sum, total))
}

/// `0 -> X -> Y -> Z -> 0` splits, i.e. `ι` has a retraction.
pub fn is_split_exact(iota: &Morphism, pi: &Morphism) -> Result<bool> {
    if iota.target != pi.source {
        return Err(dim_err!("sequence maps are not composable"));
    }
    let short_exact = pi.compose(iota)?.is_zero()
        && iota.is_mono()
        && pi.is_epi()
        && (0..iota.source.dims.len())
            .all(|v| iota.source.dims[v] + pi.target.dims[v] == iota.target.dims[v]);
    if !short_exact {
        return Err(Error::Precondition("sequence is not short exact".into()));
    }
    Ok(crate::hom::factor_left(&Morphism::identity(&iota.source), iota)?.is_some())
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::algebra::{Quiver, Relation};

    pub fn gf2() -> PrimeField {
        PrimeField::new(2).unwrap()
    }

    pub fn dual_numbers() -> Arc<PathAlgebra> {
        let f = gf2();
        let q = Quiver::new(&["•"], &[("e", "•", "•")]).unwrap();
        let r = Relation::from_names(&q, f, &[(1, vec!["e", "e"])]).unwrap();
        Arc::new(PathAlgebra::new(f, q, vec![r], 2).unwrap())
    }

    /// `1 -> 2` over GF(2).
    pub fn a2() -> Arc<PathAlgebra> {
        let q = Quiver::new(&["1", "2"], &[("a", "1", "2")]).unwrap();
        Arc::new(PathAlgebra::new(gf2(), q, vec![], 2).unwrap())
    }

    pub fn kronecker() -> Arc<PathAlgebra> {
        Arc::new(PathAlgebra::beilinson(1, 1, gf2()).unwrap())
    }

    pub fn module(alg: &Arc<PathAlgebra>, dims: &[usize], maps: &[Vec<Vec<i64>>]) -> Module {
        let q = alg.quiver();
        let ms = q
            .arrows()
            .iter()
            .zip(maps)
            .map(|(a, rows)| Matrix::from_rows(alg.field(), dims[a.source], rows).unwrap())
            .collect();
        Module::new(alg.clone(), dims.to_vec(), ms).unwrap()
    }

    #[test]
    fn validate_examples() {
        let d = dual_numbers();
        let reg = module(&d, &[2], &[vec![vec![0, 0], vec![1, 0]]]);
        assert!(reg.validate().is_ok());
        let bad = Module::new(d.clone(), vec![1], vec![Matrix::identity(gf2(), 1)]);
        assert!(bad.is_err());
        assert!(Module::new(d, vec![2], vec![Matrix::identity(gf2(), 3)]).is_err());
    }

    #[test]
    fn projectives_simples_injectives() {
        let a = a2();
        let p1 = Module::projective(&a, 0).unwrap();
        assert_eq!(p1.dims(), &[1, 1]);
        assert_eq!(Module::projective(&a, 1).unwrap(), Module::simple(&a, 1).unwrap());
        assert_eq!(Module::injective(&a, 0).unwrap(), Module::simple(&a, 0).unwrap());
        assert_eq!(Module::injective(&a, 1).unwrap().dims(), &[1, 1]);

        let d = dual_numbers();
        let p = Module::projective(&d, 0).unwrap();
        assert_eq!(p.total_dim(), 2);
        assert!(!p.maps()[0].is_zero());

        let k = kronecker();
        let i0 = Module::injective(&k, k.quiver().vertex_index("0").unwrap()).unwrap();
        assert_eq!(i0.dims(), &[2, 1]);
        assert!(Module::simple(&k, 7).is_err());
    }

    #[test]
    fn injective_is_dual_of_opposite_projective() {
        for alg in [a2(), dual_numbers(), kronecker()] {
            let op = Arc::new(alg.opposite().unwrap());
            for v in 0..alg.num_vertices() {
                let dp = Module::projective(&op, v).unwrap().dual_over(&alg).unwrap();
                assert_eq!(dp, Module::injective(&alg, v).unwrap());
            }
        }
    }

    #[test]
    fn dual_of_simple_and_double_dual() {
        let a = a2();
        let op = Arc::new(a.opposite().unwrap());
        let s = Module::simple(&a, 0).unwrap();
        assert_eq!(s.dual_over(&op).unwrap(), Module::simple(&op, 0).unwrap());
        let p = Module::projective(&a, 0).unwrap();
        assert_eq!(p.dual_over(&op).unwrap().dual_over(&a).unwrap(), p);
    }

    #[test]
    fn direct_sum_examples() {
        let d = dual_numbers();
        let c = direct_sum(&d, &[Module::projective(&d, 0).unwrap(), Module::simple(&d, 0).unwrap()])
            .unwrap();
        assert_eq!(c.module.total_dim(), 3);
        for (i, p) in c.injections.iter().zip(&c.projections) {
            assert_eq!(p.compose(i).unwrap(), Morphism::identity(i.source()));
        }
        let a = a2();
        let s = direct_sum(&a, &[Module::simple(&a, 0).unwrap(), Module::simple(&a, 1).unwrap()]).unwrap();
        assert_eq!(s.module.dims(), &[1, 1]);
        assert!(s.module.maps()[0].is_zero());
        assert!(direct_sum(&a, &[Module::simple(&d, 0).unwrap()]).is_err());
    }

    #[test]
    fn factor_examples() {
        let a = a2();
        let p1 = Module::projective(&a, 0).unwrap();
        let s1 = Module::simple(&a, 0).unwrap();
        let pi = Morphism::new(
            p1.clone(),
            s1.clone(),
            vec![Matrix::identity(gf2(), 1), Matrix::zeros(gf2(), 0, 1)],
        )
        .unwrap();
        let fa = pi.factor().unwrap();
        assert_eq!(fa.kernel, Module::simple(&a, 1).unwrap());
        assert!(fa.cokernel.is_zero());

        let id = Morphism::identity(&p1).factor().unwrap();
        assert!(id.kernel.is_zero() && id.cokernel.is_zero());
        assert_eq!(id.image, p1);
        let z = Morphism::zero(&p1, &s1).factor().unwrap();
        assert_eq!(z.kernel, p1);
        assert!(z.image.is_zero());
        assert_eq!(z.cokernel.dims(), s1.dims());
    }

    #[test]
    fn nakayama_examples() {
        let a = a2();
        for v in 0..2 {
            let nu = Module::projective(&a, v).unwrap().nakayama().unwrap();
            assert_eq!(nu.dims(), Module::injective(&a, v).unwrap().dims());
        }
        assert!(Module::simple(&a, 0).unwrap().nakayama().is_err());
        let d = dual_numbers();
        let reg = Module::regular(&d).unwrap();
        assert_eq!(reg.nakayama().unwrap().total_dim(), 2);
    }

    #[test]
    fn split_exact_examples() {
        let d = dual_numbers();
        let reg = Module::projective(&d, 0).unwrap();
        let s = Module::simple(&d, 0).unwrap();
        let sum = direct_sum(&d, &[s.clone(), s.clone()]).unwrap();
        assert!(is_split_exact(&sum.injections[0], &sum.projections[1]).unwrap());

        let hs = crate::hom::hom_basis(&s, &reg).unwrap();
        let ht = crate::hom::hom_basis(&reg, &s).unwrap();
        assert!(!is_split_exact(&hs.basis()[0], &ht.basis()[0]).unwrap());

        let a = a2();
        let s2 = Module::simple(&a, 1).unwrap();
        let p1 = Module::projective(&a, 0).unwrap();
        let s1 = Module::simple(&a, 0).unwrap();
        let i = crate::hom::hom_basis(&s2, &p1).unwrap().basis()[0].clone();
        let p = crate::hom::hom_basis(&p1, &s1).unwrap().basis()[0].clone();
        assert!(!is_split_exact(&i, &p).unwrap());
        assert!(is_split_exact(&p, &i).is_err());
    }
}
