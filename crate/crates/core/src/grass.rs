//! Projective varieties as quiver Grassmannians of Beilinson-algebra modules.

use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{Element, PathAlgebra};
use crate::error::{input_err, Error, Result};
use crate::field::PrimeField;
use crate::limits::CoeffIter;
use crate::matrix::Matrix;
use crate::module::Module;
use crate::poly::Polynomial;
use crate::subspace::Subspace;

/// Enumeration guard for both point counts.
pub const MAX_POINTS: u128 = 10_000_000;
pub const MAX_PROJECTIVE_POINTS: u128 = 1_000_000;

#[derive(Debug, Clone)]
pub struct VarietySpec {
    pub n: usize,
    pub p: usize,
    pub polys: Vec<Polynomial>,
    pub q: u32,
}

impl VarietySpec {
    pub fn new(n: usize, p: usize, polys: Vec<Polynomial>, q: u32) -> Result<Self> {
        let spec = VarietySpec { n, p, polys, q };
        spec.validate()?;
        Ok(spec)
    }

    pub fn field(&self) -> Result<PrimeField> {
        PrimeField::new(self.q as u64)
    }

    pub fn validate(&self) -> Result<()> {
        self.field()?;
        if self.p < 1 {
            return Err(input_err!("degree cap p must be at least 1"));
        }
        for f in &self.polys {
            let d = f
                .homogeneous_degree()
                .ok_or_else(|| input_err!("polynomial {f} is not homogeneous (or is zero)"))?;
            if d as usize > self.p {
                return Err(input_err!("polynomial {f} has degree {d} > p = {}", self.p));
            }
            if f.num_vars() > self.n + 1 {
                return Err(input_err!("polynomial {f} uses a variable beyond x{}", self.n));
            }
        }
        Ok(())
    }

    pub fn algebra(&self) -> Result<Arc<PathAlgebra>> {
        Ok(Arc::new(PathAlgebra::beilinson(self.n, self.p, self.field()?)?))
    }
}

/// Span of `b_i g b_j` over basis elements and generators.
pub fn two_sided_ideal(alg: &PathAlgebra, gens: &[Element]) -> Result<Subspace> {
    let mut vecs = Vec::new();
    for g in gens {
        for i in 0..alg.dim() {
            let left = alg.multiply(&alg.unit(i), g);
            for j in 0..alg.dim() {
                vecs.push(alg.multiply(&left, &alg.unit(j)));
            }
        }
    }
    Subspace::from_vectors(alg.field(), alg.dim(), &vecs)
}

/// `I(0)` of `Λ/⟨f_1..f_r⟩`, as the Λ-submodule of `I_Λ(0)` of functionals
/// vanishing on the ideal.
pub fn beilinson_injective(spec: &VarietySpec) -> Result<Module> {
    spec.validate()?;
    let alg = spec.algebra()?;
    let sink = alg.quiver().vertex_index("0")?;
    let inj = Module::injective(&alg, sink)?;
    let mut gens = Vec::new();
    for f in &spec.polys {
        gens.extend(alg.place_polynomial(f)?);
    }
    let ideal = two_sided_ideal(&alg, &gens)?;
    let f = alg.field();
    let mut subs = Vec::new();
    for w in 0..alg.num_vertices() {
        let block = alg.basis_between(w, sink);
        let rows: Vec<Vec<u32>> = ideal
            .basis_vecs()
            .iter()
            .map(|v| block.iter().map(|&b| v[b]).collect())
            .collect();
        let m = Matrix::from_row_vecs(f, block.len(), &rows)?;
        subs.push(m.kernel());
    }
    let (m, _) = inj.submodule(&subs)?;
    m.validate()?;
    Ok(m)
}

/// The same module through the quotient algebra, re-read over Λ.
pub fn beilinson_injective_via_quotient(spec: &VarietySpec) -> Result<Module> {
    spec.validate()?;
    let f = spec.field()?;
    let quot = Arc::new(PathAlgebra::beilinson_quotient(spec.n, spec.p, f, &spec.polys)?);
    let sink = quot.quiver().vertex_index("0")?;
    let i0 = Module::injective(&quot, sink)?;
    Module::new(spec.algebra()?, i0.dims().to_vec(), i0.maps().to_vec())
}

/// Number of `k`-dimensional subspaces of `GF(q)^n`.
pub fn gaussian_binomial(n: usize, k: usize, q: u32) -> u128 {
    if k > n {
        return 0;
    }
    let q = q as u128;
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k {
        num = num.saturating_mul(q.saturating_pow((n - i) as u32) - 1);
        den = den.saturating_mul(q.saturating_pow((i + 1) as u32) - 1);
    }
    num / den
}

/// All `k`-dimensional subspaces of `GF(p)^n`, by pivot pattern then free entries.
pub fn subspaces_of_dim(field: PrimeField, n: usize, k: usize) -> Result<Vec<Subspace>> {
    let mut out = Vec::new();
    if k > n {
        return Ok(out);
    }
    let mut pivots: Vec<usize> = (0..k).collect();
    loop {
        let free: Vec<(usize, usize)> = (0..k)
            .flat_map(|r| ((pivots[r] + 1)..n).filter(|c| !pivots.contains(c)).map(move |c| (r, c)))
            .collect();
        for vals in CoeffIter::new(field.p(), free.len()) {
            let mut rows = vec![vec![0u32; n]; k];
            for (r, &c) in pivots.iter().enumerate() {
                rows[r][c] = 1;
            }
            for (&(r, c), &v) in free.iter().zip(&vals) {
                rows[r][c] = v;
            }
            out.push(Subspace::from_vectors(field, n, &rows)?);
        }
        // next k-combination of 0..n
        let Some(i) = (0..k).rev().find(|&i| pivots[i] < n - k + i) else {
            break;
        };
        pivots[i] += 1;
        for j in (i + 1)..k {
            pivots[j] = pivots[j - 1] + 1;
        }
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct GrassmannianCount {
    pub dim_vector: Vec<usize>,
    /// Subrepresentations as one subspace per vertex.
    pub points: Vec<Vec<Subspace>>,
    pub count: usize,
}

/// Subrepresentations of `m` with dimension vector `d`.
pub fn grassmannian_points(m: &Module, d: &[usize]) -> Result<GrassmannianCount> {
    let dims = m.dims();
    if d.len() != dims.len() || d.iter().zip(dims).any(|(a, b)| a > b) {
        return Err(input_err!("dimension vector {d:?} does not fit under {dims:?}"));
    }
    let f = m.field();
    let total = d
        .iter()
        .zip(dims)
        .fold(1u128, |acc, (&k, &n)| acc.saturating_mul(gaussian_binomial(n, k, f.p())));
    if total > MAX_POINTS {
        return Err(Error::CapExceeded(format!(
            "{total} candidate subspace tuples exceed {MAX_POINTS}"
        )));
    }
    let choices = d
        .iter()
        .zip(dims)
        .map(|(&k, &n)| subspaces_of_dim(f, n, k))
        .collect::<Result<Vec<_>>>()?;
    let arrows = m.algebra().quiver().arrows();
    let mut points = Vec::new();
    let mut cur: Vec<Subspace> = Vec::new();
    search(m, &choices, arrows, &mut cur, &mut points)?;
    let count = points.len();
    Ok(GrassmannianCount {
        dim_vector: d.to_vec(),
        points,
        count,
    })
}

fn search(
    m: &Module,
    choices: &[Vec<Subspace>],
    arrows: &[crate::algebra::Arrow],
    cur: &mut Vec<Subspace>,
    out: &mut Vec<Vec<Subspace>>,
) -> Result<()> {
    let v = cur.len();
    if v == choices.len() {
        out.push(cur.clone());
        return Ok(());
    }
    for s in &choices[v] {
        cur.push(s.clone());
        let mut ok = true;
        for (ai, a) in arrows.iter().enumerate() {
            // check each arrow once both ends are fixed
            if a.source.max(a.target) != v {
                continue;
            }
            let img = cur[a.source].image_under(&m.maps()[ai])?;
            if !img.is_subspace_of(&cur[a.target])? {
                ok = false;
                break;
            }
        }
        if ok {
            search(m, choices, arrows, cur, out)?;
        }
        cur.pop();
    }
    Ok(())
}

/// Points of `V(f_1..f_r) ⊆ P^n(F_q)`, first nonzero coordinate 1.
pub fn variety_points(spec: &VarietySpec) -> Result<Vec<Vec<u32>>> {
    spec.validate()?;
    let f = spec.field()?;
    let q = spec.q as u128;
    let size = (q.saturating_pow(spec.n as u32 + 1) - 1) / (q - 1);
    if size > MAX_PROJECTIVE_POINTS {
        return Err(Error::CapExceeded(format!(
            "{size} projective points exceed {MAX_PROJECTIVE_POINTS}"
        )));
    }
    let mut out = Vec::new();
    for x in CoeffIter::new(spec.q, spec.n + 1) {
        if x.iter().find(|&&c| c != 0) != Some(&1) {
            continue;
        }
        if spec.polys.iter().all(|g| g.eval(f, &x) == 0) {
            out.push(x);
        }
    }
    out.sort();
    Ok(out)
}

/// The line at vertex `1` of a subrepresentation of `I(0)` with all dimensions 1,
/// read as a projective point.
pub fn point_of(spec: &VarietySpec, sub: &[Subspace]) -> Option<Vec<u32>> {
    let s = &sub[spec.p - 1];
    (s.dim() == 1).then(|| s.basis_vecs().remove(0))
}

#[derive(Debug, Clone, Serialize)]
pub struct RealizationReport {
    pub n: usize,
    pub p: usize,
    pub q: u32,
    pub module_dims: Vec<usize>,
    pub grassmannian_count: usize,
    pub variety_count: usize,
    pub grassmannian_points: Vec<Vec<u32>>,
    pub variety_points: Vec<Vec<u32>>,
}

impl RealizationReport {
    pub fn counts_match(&self) -> bool {
        self.grassmannian_count == self.variety_count
    }

    pub fn points_match(&self) -> bool {
        self.grassmannian_points == self.variety_points
    }
}

/// Both counts for the dimension vector `(1, ..., 1)`, with point sets.
pub fn compare_realization(spec: &VarietySpec) -> Result<RealizationReport> {
    let m = beilinson_injective(spec)?;
    let g = grassmannian_points(&m, &vec![1; m.dims().len()])?;
    let mut gp: Vec<Vec<u32>> = g.points.iter().filter_map(|s| point_of(spec, s)).collect();
    gp.sort();
    let vp = variety_points(spec)?;
    Ok(RealizationReport {
        n: spec.n,
        p: spec.p,
        q: spec.q,
        module_dims: m.dims().to_vec(),
        grassmannian_count: g.count,
        variety_count: vp.len(),
        grassmannian_points: gp,
        variety_points: vp,
    })
}
