//! Quivers, path algebras with relations, and the Beilinson algebras.
//!
//! Paths compose left to right: `[a, b]` means "first `a`, then `b`" and
//! requires `target(a) == source(b)`. A representation sends `[a, b]` to
//! `M_b * M_a`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{input_err, Error, Result};
use crate::field::PrimeField;
use crate::poly::Polynomial;
use crate::subspace::Subspace;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
}

impl Quiver {
    /// Arrows are given as `(name, source vertex name, target vertex name)`.
    pub fn new<S: AsRef<str>>(vertices: &[S], arrows: &[(S, S, S)]) -> Result<Self> {
        let vertices: Vec<String> = vertices.iter().map(|v| v.as_ref().to_string()).collect();
        for (i, v) in vertices.iter().enumerate() {
            if vertices[..i].contains(v) {
                return Err(input_err!("duplicate vertex name {v:?}"));
            }
        }
        let lookup = |name: &str| {
            vertices
                .iter()
                .position(|v| v == name)
                .ok_or_else(|| input_err!("arrow endpoint {name:?} is not a vertex"))
        };
        let mut out = Vec::with_capacity(arrows.len());
        for (name, s, t) in arrows {
            let name = name.as_ref().to_string();
            if out.iter().any(|a: &Arrow| a.name == name) {
                return Err(input_err!("duplicate arrow name {name:?}"));
            }
            if vertices.contains(&name) {
                return Err(input_err!("arrow name {name:?} clashes with a vertex"));
            }
            out.push(Arrow {
                name,
                source: lookup(s.as_ref())?,
                target: lookup(t.as_ref())?,
            });
        }
        Ok(Quiver {
            vertices,
            arrows: out,
        })
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_index(&self, name: &str) -> Result<usize> {
        self.vertices
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| input_err!("unknown vertex {name:?}"))
    }

    pub fn arrow_index(&self, name: &str) -> Result<usize> {
        self.arrows
            .iter()
            .position(|a| a.name == name)
            .ok_or_else(|| input_err!("unknown arrow {name:?}"))
    }

    /// Same vertices, every arrow reversed (names kept).
    pub fn opposite(&self) -> Quiver {
        Quiver {
            vertices: self.vertices.clone(),
            arrows: self
                .arrows
                .iter()
                .map(|a| Arrow {
                    name: a.name.clone(),
                    source: a.target,
                    target: a.source,
                })
                .collect(),
        }
    }

    /// Builds a path from arrow names, checking composability.
    pub fn path(&self, names: &[impl AsRef<str>]) -> Result<Path> {
        let idx: Vec<usize> = names
            .iter()
            .map(|n| self.arrow_index(n.as_ref()))
            .collect::<Result<_>>()?;
        let Some(&first) = idx.first() else {
            return Err(input_err!("empty arrow list; use Path::trivial for idempotents"));
        };
        let mut p = Path::trivial(self.arrows[first].source);
        for a in idx {
            p = p
                .then_arrow(self, a)
                .ok_or_else(|| input_err!("path {:?} is not composable", path_names(self, names)))?;
        }
        Ok(p)
    }
}

fn path_names(_q: &Quiver, names: &[impl AsRef<str>]) -> Vec<String> {
    names.iter().map(|n| n.as_ref().to_string()).collect()
}

/// A path in a quiver. Trivial paths have no arrows and `source == target`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub source: usize,
    pub target: usize,
    pub arrows: Vec<usize>,
}

impl Path {
    pub fn trivial(v: usize) -> Self {
        Path {
            source: v,
            target: v,
            arrows: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn then_arrow(&self, q: &Quiver, a: usize) -> Option<Path> {
        let arrow = &q.arrows[a];
        (arrow.source == self.target).then(|| {
            let mut arrows = self.arrows.clone();
            arrows.push(a);
            Path {
                source: self.source,
                target: arrow.target,
                arrows,
            }
        })
    }

    /// `self` followed by `other`.
    pub fn concat(&self, other: &Path) -> Option<Path> {
        (self.target == other.source).then(|| {
            let mut arrows = self.arrows.clone();
            arrows.extend_from_slice(&other.arrows);
            Path {
                source: self.source,
                target: other.target,
                arrows,
            }
        })
    }

    pub fn reversed(&self) -> Path {
        let mut arrows = self.arrows.clone();
        arrows.reverse();
        Path {
            source: self.target,
            target: self.source,
            arrows,
        }
    }

    pub fn display(&self, q: &Quiver) -> String {
        if self.arrows.is_empty() {
            format!("e_{}", q.vertices[self.source])
        } else {
            self.arrows
                .iter()
                .map(|&a| q.arrows[a].name.as_str())
                .collect::<Vec<_>>()
                .join("·")
        }
    }

    // sort key for "larger" paths: longer first, then lexicographically larger
    fn order_key(&self) -> (usize, &[usize]) {
        (self.arrows.len(), &self.arrows)
    }
}

/// A linear combination of parallel paths required to vanish.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    terms: Vec<(u32, Path)>,
}

impl Relation {
    /// Collects like terms, drops zero coefficients, and checks parallelism.
    pub fn new(field: PrimeField, terms: Vec<(i64, Path)>) -> Result<Self> {
        let mut acc: BTreeMap<Path, u32> = BTreeMap::new();
        for (c, p) in terms {
            let e = acc.entry(p).or_insert(0);
            *e = field.add(*e, field.elem(c));
        }
        let terms: Vec<(u32, Path)> = acc
            .into_iter()
            .filter(|(_, c)| *c != 0)
            .map(|(p, c)| (c, p))
            .collect();
        let Some((_, first)) = terms.first() else {
            return Err(input_err!("relation has no nonzero terms"));
        };
        let (s, t) = (first.source, first.target);
        if terms.iter().any(|(_, p)| p.source != s || p.target != t) {
            return Err(input_err!("relation terms are not parallel paths"));
        }
        Ok(Relation { terms })
    }

    /// Convenience constructor from `(coefficient, arrow names)` pairs.
    pub fn from_names<S: AsRef<str>>(
        quiver: &Quiver,
        field: PrimeField,
        terms: &[(i64, Vec<S>)],
    ) -> Result<Self> {
        let terms = terms
            .iter()
            .map(|(c, names)| Ok((*c, quiver.path(names)?)))
            .collect::<Result<Vec<_>>>()?;
        Relation::new(field, terms)
    }

    pub fn terms(&self) -> &[(u32, Path)] {
        &self.terms
    }

    pub fn source(&self) -> usize {
        self.terms[0].1.source
    }

    pub fn target(&self) -> usize {
        self.terms[0].1.target
    }

    fn reversed(&self) -> Relation {
        Relation {
            terms: self.terms.iter().map(|(c, p)| (*c, p.reversed())).collect(),
        }
    }
}

/// Sparse vector over the algebra basis.
type Sparse = Vec<(usize, u32)>;

/// `kQ / I` for an ideal `I` generated by parallel relations, truncated at
/// `cap`: every path of length `cap` must already lie in `I`.
#[derive(Clone)]
pub struct PathAlgebra {
    field: PrimeField,
    quiver: Quiver,
    relations: Vec<Relation>,
    cap: usize,
    basis: Vec<Path>,
    basis_index: HashMap<Path, usize>,
    reductions: HashMap<Path, Sparse>,
    mult: Vec<Vec<Sparse>>,
    beilinson: Option<(usize, usize)>,
}

/// Element of a path algebra in coordinates over its basis.
pub type Element = Vec<u32>;

impl PartialEq for PathAlgebra {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self, other)
            || (self.field == other.field
                && self.cap == other.cap
                && self.quiver == other.quiver
                && self.relations == other.relations)
    }
}

impl Eq for PathAlgebra {}

impl fmt::Debug for PathAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PathAlgebra")
            .field("p", &self.field.p())
            .field("vertices", &self.quiver.vertices)
            .field("arrows", &self.quiver.arrows.len())
            .field("relations", &self.relations.len())
            .field("dim", &self.basis.len())
            .finish()
    }
}

/// All paths from `s` of length at most `max_len`, grouped by target.
fn paths_from(q: &Quiver, s: usize, max_len: usize) -> Vec<Path> {
    let mut out = vec![Path::trivial(s)];
    let mut frontier = vec![Path::trivial(s)];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for p in &frontier {
            for a in 0..q.arrows.len() {
                if let Some(np) = p.then_arrow(q, a) {
                    next.push(np);
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

impl PathAlgebra {
    pub fn new(
        field: PrimeField,
        quiver: Quiver,
        relations: Vec<Relation>,
        cap: usize,
    ) -> Result<Self> {
        if cap == 0 {
            return Err(input_err!("nilpotency cap must be at least 1"));
        }
        for r in &relations {
            for (_, p) in r.terms() {
                if p.arrows.iter().any(|&a| a >= quiver.arrows.len())
                    || p.source >= quiver.num_vertices()
                {
                    return Err(input_err!("relation refers to an arrow outside the quiver"));
                }
            }
        }
        let nv = quiver.num_vertices();
        let all: Vec<Vec<Path>> = (0..nv).map(|s| paths_from(&quiver, s, cap)).collect();

        let mut basis: Vec<Path> = Vec::new();
        let mut reductions: HashMap<Path, Vec<(Path, u32)>> = HashMap::new();

        for s in 0..nv {
            for t in 0..nv {
                let mut block: Vec<Path> =
                    all[s].iter().filter(|p| p.target == t).cloned().collect();
                // columns: largest path first so pivots eliminate long paths
                block.sort_by(|a, b| b.order_key().cmp(&a.order_key()));
                let col: HashMap<&Path, usize> =
                    block.iter().enumerate().map(|(i, p)| (p, i)).collect();

                let mut gens: Vec<Vec<u32>> = Vec::new();
                for r in &relations {
                    let min_len = r.terms().iter().map(|(_, p)| p.len()).min().unwrap_or(0);
                    let lefts = all[s].iter().filter(|u| u.target == r.source());
                    for u in lefts {
                        for w in all[r.target()].iter().filter(|w| w.target == t) {
                            if u.len() + min_len + w.len() > cap {
                                continue;
                            }
                            let mut v = vec![0u32; block.len()];
                            for (c, p) in r.terms() {
                                if u.len() + p.len() + w.len() > cap {
                                    continue;
                                }
                                let full = u.concat(p).and_then(|x| x.concat(w)).expect("composable");
                                let j = col[&full];
                                v[j] = field.add(v[j], *c);
                            }
                            if v.iter().any(|&x| x != 0) {
                                gens.push(v);
                            }
                        }
                    }
                }
                let ideal = Subspace::from_vectors(field, block.len(), &gens)?;
                for (j, p) in block.iter().enumerate() {
                    if p.len() == cap {
                        let mut e = vec![0u32; block.len()];
                        e[j] = 1;
                        if !ideal.contains(&e)? {
                            return Err(input_err!(
                                "ideal is not admissible at cap {cap}: path {} survives",
                                p.display(&quiver)
                            ));
                        }
                    }
                }
                let pivots = ideal.pivots().to_vec();
                let mut is_pivot = vec![false; block.len()];
                for &c in &pivots {
                    is_pivot[c] = true;
                }
                let free: Vec<usize> = (0..block.len()).filter(|&c| !is_pivot[c]).collect();
                let mut block_basis: Vec<Path> = free.iter().map(|&c| block[c].clone()).collect();
                block_basis.reverse();
                basis.extend(block_basis);
                for (j, p) in block.iter().enumerate() {
                    if p.len() >= cap {
                        continue;
                    }
                    let red = if let Some(i) = pivots.iter().position(|&c| c == j) {
                        free.iter()
                            .filter_map(|&k| {
                                let v = ideal.basis().get(i, k);
                                (v != 0).then(|| (block[k].clone(), field.neg(v)))
                            })
                            .collect()
                    } else {
                        vec![(p.clone(), 1)]
                    };
                    reductions.insert(p.clone(), red);
                }
            }
        }

        let basis_index: HashMap<Path, usize> =
            basis.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        let reductions: HashMap<Path, Sparse> = reductions
            .into_iter()
            .map(|(p, v)| {
                let mut v: Sparse = v.into_iter().map(|(q, c)| (basis_index[&q], c)).collect();
                v.sort();
                (p, v)
            })
            .collect();

        let mut alg = PathAlgebra {
            field,
            quiver,
            relations,
            cap,
            basis,
            basis_index,
            reductions,
            mult: Vec::new(),
            beilinson: None,
        };
        alg.mult = (0..alg.dim())
            .map(|i| (0..alg.dim()).map(|j| alg.reduce_product(i, j)).collect())
            .collect();
        alg.check_associative()?;
        Ok(alg)
    }

    fn reduce_product(&self, i: usize, j: usize) -> Sparse {
        match self.basis[i].concat(&self.basis[j]) {
            Some(p) if p.len() < self.cap => self.reductions[&p].clone(),
            _ => Vec::new(),
        }
    }

    fn check_associative(&self) -> Result<()> {
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                if self.basis[i].target != self.basis[j].source {
                    continue;
                }
                for k in 0..n {
                    if self.basis[j].target != self.basis[k].source {
                        continue;
                    }
                    let left = self.multiply(&self.multiply(&self.unit(i), &self.unit(j)), &self.unit(k));
                    let right = self.multiply(&self.unit(i), &self.multiply(&self.unit(j), &self.unit(k)));
                    if left != right {
                        return Err(Error::Precondition(format!(
                            "multiplication not associative on basis triple ({}, {}, {})",
                            self.basis[i].display(&self.quiver),
                            self.basis[j].display(&self.quiver),
                            self.basis[k].display(&self.quiver)
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

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Path] {
        &self.basis
    }

    pub fn num_vertices(&self) -> usize {
        self.quiver.num_vertices()
    }

    /// `(n, p)` when this algebra was built by [`PathAlgebra::beilinson`].
    pub fn beilinson_params(&self) -> Option<(usize, usize)> {
        self.beilinson
    }

    /// Indices of basis paths from `s` to `t`, in basis order.
    pub fn basis_between(&self, s: usize, t: usize) -> Vec<usize> {
        (0..self.dim())
            .filter(|&i| self.basis[i].source == s && self.basis[i].target == t)
            .collect()
    }

    pub fn unit(&self, i: usize) -> Element {
        let mut v = vec![0; self.dim()];
        v[i] = 1;
        v
    }

    pub fn idempotent(&self, v: usize) -> Element {
        self.unit(self.basis_index[&Path::trivial(v)])
    }

    pub fn one(&self) -> Element {
        let mut e = vec![0; self.dim()];
        for v in 0..self.num_vertices() {
            e[self.basis_index[&Path::trivial(v)]] = 1;
        }
        e
    }

    /// Reduces an arbitrary path to basis coordinates (zero if too long).
    pub fn reduce_path(&self, p: &Path) -> Element {
        let mut v = vec![0; self.dim()];
        if p.len() < self.cap {
            for &(i, c) in &self.reductions[p] {
                v[i] = self.field.add(v[i], c);
            }
        }
        v
    }

    pub fn multiply(&self, x: &[u32], y: &[u32]) -> Element {
        let f = self.field;
        let mut out = vec![0; self.dim()];
        for (i, &a) in x.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in y.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                let ab = f.mul(a, b);
                for &(k, c) in &self.mult[i][j] {
                    out[k] = f.add(out[k], f.mul(ab, c));
                }
            }
        }
        out
    }

    /// Coordinates of `basis[i] * basis[j]`.
    pub fn basis_product(&self, i: usize, j: usize) -> &[(usize, u32)] {
        &self.mult[i][j]
    }

    pub fn basis_position(&self, p: &Path) -> Option<usize> {
        self.basis_index.get(p).copied()
    }

    pub fn opposite(&self) -> Result<PathAlgebra> {
        PathAlgebra::new(
            self.field,
            self.quiver.opposite(),
            self.relations.iter().map(Relation::reversed).collect(),
            self.cap,
        )
    }

    /// The Beilinson algebra: vertices `p, p-1, ..., 0`, arrows `x0..xn` from
    /// each vertex `i` to `i - 1` (named `x{k}_{i}`), all commutativity relations.
    pub fn beilinson(n: usize, p: usize, field: PrimeField) -> Result<Self> {
        let (quiver, rels) = beilinson_presentation(n, p, field)?;
        let mut alg = PathAlgebra::new(field, quiver, rels, p + 1)?;
        alg.beilinson = Some((n, p));
        Ok(alg)
    }

    /// The quotient of a Beilinson algebra by all placements of `polys`.
    pub fn beilinson_quotient(
        n: usize,
        p: usize,
        field: PrimeField,
        polys: &[Polynomial],
    ) -> Result<Self> {
        let (quiver, mut rels) = beilinson_presentation(n, p, field)?;
        for f in polys {
            rels.extend(placement_relations(&quiver, n, p, field, f)?);
        }
        let mut alg = PathAlgebra::new(field, quiver, rels, p + 1)?;
        alg.beilinson = Some((n, p));
        Ok(alg)
    }

    /// One element per target vertex `0..=p-d`: the sum over the monomials of
    /// `f` of the corresponding path.
    pub fn place_polynomial(&self, f: &Polynomial) -> Result<Vec<Element>> {
        let Some((n, p)) = self.beilinson else {
            return Err(Error::Precondition(
                "polynomial placement needs a Beilinson algebra".into(),
            ));
        };
        let d = check_placeable(n, p, f)?;
        let field = self.field;
        let mut out = Vec::new();
        for t in 0..=(p - d) {
            let mut el = vec![0; self.dim()];
            for (c, e) in f.reduce_mod(field) {
                let path = monomial_path(&self.quiver, p, t + d, &e)?;
                let red = self.reduce_path(&path);
                for (x, r) in el.iter_mut().zip(red) {
                    *x = field.add(*x, field.mul(c, r));
                }
            }
            out.push(el);
        }
        Ok(out)
    }

    /// Human-readable element, e.g. `x0_2·x1_1 + 2 e_0`.
    pub fn display_element(&self, x: &[u32]) -> String {
        let parts: Vec<String> = x
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| {
                let p = self.basis[i].display(&self.quiver);
                if c == 1 {
                    p
                } else {
                    format!("{c} {p}")
                }
            })
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

fn beilinson_vertex_index(p: usize, v: usize) -> usize {
    p - v
}

fn beilinson_presentation(n: usize, p: usize, field: PrimeField) -> Result<(Quiver, Vec<Relation>)> {
    if p < 1 {
        return Err(input_err!("Beilinson algebra needs p >= 1"));
    }
    let vertices: Vec<String> = (0..=p).rev().map(|v| v.to_string()).collect();
    let mut arrows = Vec::new();
    for v in (1..=p).rev() {
        for k in 0..=n {
            arrows.push((format!("x{k}_{v}"), v.to_string(), (v - 1).to_string()));
        }
    }
    let quiver = Quiver::new(&vertices, &arrows)?;
    let mut rels = Vec::new();
    for v in (2..=p).rev() {
        for i in 0..=n {
            for j in (i + 1)..=n {
                let a = quiver.path(&[format!("x{i}_{v}"), format!("x{j}_{}", v - 1)])?;
                let b = quiver.path(&[format!("x{j}_{v}"), format!("x{i}_{}", v - 1)])?;
                rels.push(Relation::new(field, vec![(1, a), (-1, b)])?);
            }
        }
    }
    Ok((quiver, rels))
}

fn check_placeable(n: usize, p: usize, f: &Polynomial) -> Result<usize> {
    let d = f
        .homogeneous_degree()
        .ok_or_else(|| input_err!("polynomial {f} is not homogeneous (or is zero)"))? as usize;
    if d > p {
        return Err(input_err!("polynomial {f} has degree {d} > p = {p}"));
    }
    if f.num_vars() > n + 1 {
        return Err(input_err!(
            "polynomial {f} uses x{} but only x0..x{n} exist",
            f.num_vars() - 1
        ));
    }
    Ok(d)
}

/// Path from vertex `start` spelling the monomial with variables in ascending order.
fn monomial_path(q: &Quiver, p: usize, start: usize, exps: &[u32]) -> Result<Path> {
    let mut vars = Vec::new();
    for (i, &k) in exps.iter().enumerate() {
        vars.extend(std::iter::repeat_n(i, k as usize));
    }
    let mut path = Path::trivial(beilinson_vertex_index(p, start));
    let mut v = start;
    for i in vars {
        let a = q.arrow_index(&format!("x{i}_{v}"))?;
        path = path.then_arrow(q, a).expect("consecutive Beilinson arrows compose");
        v -= 1;
    }
    Ok(path)
}

fn placement_relations(
    q: &Quiver,
    n: usize,
    p: usize,
    field: PrimeField,
    f: &Polynomial,
) -> Result<Vec<Relation>> {
    let d = check_placeable(n, p, f)?;
    let terms = f.reduce_mod(field);
    if terms.is_empty() {
        return Ok(Vec::new());
    }
    (0..=(p - d))
        .map(|t| {
            let rt = terms
                .iter()
                .map(|(c, e)| Ok((*c as i64, monomial_path(q, p, t + d, e)?)))
                .collect::<Result<Vec<_>>>()?;
            Relation::new(field, rt)
        })
        .filter(|r| !matches!(r, Err(Error::Input(m)) if m.contains("no nonzero")))
        .collect()
}
