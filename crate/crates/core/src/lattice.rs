//! Lattices of subspaces stable under a family of operators, with Hasse diagrams.

use std::collections::{BTreeSet, HashSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{dim_err, input_err, Error, Result};
use crate::field::PrimeField;
use crate::gamma::{forgetful_fh, GammaModule};
use crate::hom::hom_basis;
use crate::limits::{ensure_enumerable, max_enum, CoeffIter};
use crate::matrix::Matrix;
use crate::module::Module;
use crate::subspace::Subspace;

/// Largest ambient dimension the enumerator accepts.
pub const MAX_LATTICE_AMBIENT: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LatticeMode {
    /// Submodules of a module (stable under the algebra).
    Lambda,
    /// Subspaces of a module stable under all of its endomorphisms.
    EndStable,
    /// Γ-submodules of `Hom(C, Y)`.
    Gamma,
    /// Values at `C` of the subfunctors `F_h` of the forgetful functor, `h` a submodule.
    Forgetful,
}

impl std::str::FromStr for LatticeMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lambda" => Ok(LatticeMode::Lambda),
            "end-stable" => Ok(LatticeMode::EndStable),
            "gamma" => Ok(LatticeMode::Gamma),
            "forgetful" => Ok(LatticeMode::Forgetful),
            _ => Err(input_err!("unknown lattice mode {s:?}")),
        }
    }
}

/// Elements sorted by (dimension, RREF entries); `hasse` holds covering pairs
/// `(lower, upper)` as indices into `elements`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubmoduleLattice {
    pub mode: LatticeMode,
    pub field: PrimeField,
    pub ambient: usize,
    pub elements: Vec<Subspace>,
    pub hasse: Vec<(usize, usize)>,
}

/// Orbit span of `v`: the smallest stable subspace containing it.
fn cyclic(field: PrimeField, ambient: usize, gens: &[Matrix], v: Vec<u32>) -> Result<Subspace> {
    let mut s = Subspace::from_vectors(field, ambient, &[v])?;
    loop {
        let mut next = s.clone();
        for g in gens {
            next = next.sum(&s.image_under(g)?)?;
        }
        if next == s {
            return Ok(s);
        }
        s = next;
    }
}

/// All subspaces of `GF(p)^ambient` stable under every matrix in `gens`.
pub fn stable_subspaces(field: PrimeField, ambient: usize, gens: &[Matrix]) -> Result<Vec<Subspace>> {
    if ambient > MAX_LATTICE_AMBIENT {
        return Err(Error::CapExceeded(format!(
            "lattice ambient dimension {ambient} exceeds {MAX_LATTICE_AMBIENT}"
        )));
    }
    for g in gens {
        if g.shape() != (ambient, ambient) {
            return Err(dim_err!("operator of shape {:?} on a space of dimension {ambient}", g.shape()));
        }
    }
    ensure_enumerable(field.p(), ambient, "cyclic submodule generators")?;
    let mut cyclics: BTreeSet<Subspace> = BTreeSet::new();
    for v in CoeffIter::new(field.p(), ambient).skip(1) {
        // a nonzero scalar multiple generates the same cyclic subspace
        if v.iter().find(|&&c| c != 0) != Some(&1) {
            continue;
        }
        cyclics.insert(cyclic(field, ambient, gens, v)?);
    }
    let cyclics: Vec<Subspace> = cyclics.into_iter().collect();
    let mut seen: HashSet<Subspace> = HashSet::new();
    let zero = Subspace::zero(field, ambient);
    seen.insert(zero.clone());
    let mut work = vec![zero];
    while let Some(e) = work.pop() {
        for c in &cyclics {
            let s = e.sum(c)?;
            if seen.insert(s.clone()) {
                if seen.len() as u64 > max_enum() {
                    return Err(Error::CapExceeded("lattice has too many elements".into()));
                }
                work.push(s);
            }
        }
    }
    let mut out: Vec<Subspace> = seen.into_iter().collect();
    out.sort();
    Ok(out)
}

/// Covering pairs of the inclusion order on sorted, distinct subspaces.
pub fn hasse_edges(elements: &[Subspace]) -> Result<Vec<(usize, usize)>> {
    let n = elements.len();
    let mut below = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i != j && elements[i].dim() < elements[j].dim() {
                below[i][j] = elements[i].is_subspace_of(&elements[j])?;
            }
        }
    }
    let mut edges = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if below[i][j] && !(0..n).any(|k| below[i][k] && below[k][j]) {
                edges.push((i, j));
            }
        }
    }
    Ok(edges)
}

impl SubmoduleLattice {
    pub fn from_generators(mode: LatticeMode, field: PrimeField, ambient: usize, gens: &[Matrix]) -> Result<Self> {
        let elements = stable_subspaces(field, ambient, gens)?;
        Self::from_elements(mode, field, ambient, elements)
    }

    fn from_elements(mode: LatticeMode, field: PrimeField, ambient: usize, mut elements: Vec<Subspace>) -> Result<Self> {
        elements.sort();
        elements.dedup();
        let hasse = hasse_edges(&elements)?;
        Ok(SubmoduleLattice {
            mode,
            field,
            ambient,
            elements,
            hasse,
        })
    }

    /// Submodules of `m`, as subspaces of its total space.
    pub fn lambda(m: &Module) -> Result<Self> {
        Self::from_generators(LatticeMode::Lambda, m.field(), m.total_dim(), &m.generator_matrices())
    }

    /// Subspaces of the total space of `m` stable under `End(m)`.
    pub fn end_stable(m: &Module) -> Result<Self> {
        let gens: Vec<Matrix> = hom_basis(m, m)?.basis().iter().map(|e| e.total_matrix()).collect();
        Self::from_generators(LatticeMode::EndStable, m.field(), m.total_dim(), &gens)
    }

    /// Γ-submodules of `Hom(C, Y)` in Hom coordinates.
    pub fn gamma(gm: &GammaModule) -> Result<Self> {
        Self::from_generators(LatticeMode::Gamma, gm.y().field(), gm.dim(), gm.action())
    }

    /// Distinct values `F_h(C)` as `h` ranges over the submodules of `C`.
    pub fn forgetful(c: &Module) -> Result<Self> {
        let subs = Self::lambda(c)?;
        let vals = subs
            .elements
            .iter()
            .map(|h| forgetful_fh(c, h, c))
            .collect::<Result<Vec<_>>>()?;
        Self::from_elements(LatticeMode::Forgetful, c.field(), c.total_dim(), vals)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_of(&self, s: &Subspace) -> Option<usize> {
        self.elements.binary_search(s).ok()
    }

    /// Every element is below or above every other.
    pub fn is_chain(&self) -> bool {
        self.hasse.len() + 1 == self.elements.len()
            && self.hasse.iter().enumerate().all(|(k, &(a, b))| a == k && b == k + 1)
    }

    /// `digraph sub { rankdir=BT; ... }` with nodes first, then covering edges
    /// from the smaller to the larger element.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph sub {\n  rankdir=BT;\n");
        for e in &self.elements {
            let _ = writeln!(out, "  \"{}\";", e.label());
        }
        for &(a, b) in &self.hasse {
            let _ = writeln!(out, "  \"{}\" -> \"{}\";", self.elements[a].label(), self.elements[b].label());
        }
        out.push_str("}\n");
        out
    }

    pub fn to_dump(&self) -> LatticeDump {
        LatticeDump {
            mode: self.mode,
            p: self.field.p(),
            ambient: self.ambient,
            elements: self.elements.iter().map(|e| e.basis_vecs()).collect(),
            hasse: self.hasse.iter().map(|&(a, b)| [a, b]).collect(),
        }
    }
}

/// Serializable lattice.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeDump {
    pub mode: LatticeMode,
    pub p: u32,
    pub ambient: usize,
    pub elements: Vec<Vec<Vec<u32>>>,
    pub hasse: Vec<[usize; 2]>,
}

impl LatticeDump {
    /// Re-derives canonical forms and covering pairs and checks they match.
    pub fn validate(&self) -> Result<SubmoduleLattice> {
        let field = PrimeField::new(self.p as u64)?;
        let mut elements = Vec::new();
        for (i, rows) in self.elements.iter().enumerate() {
            let s = Subspace::from_vectors(field, self.ambient, rows)?;
            if s.basis_vecs() != *rows {
                return Err(input_err!("lattice element #{i} is not in reduced row-echelon form"));
            }
            elements.push(s);
        }
        let mut sorted = elements.clone();
        sorted.sort();
        sorted.dedup();
        if sorted != elements {
            return Err(input_err!("lattice elements are not sorted and distinct"));
        }
        let hasse = hasse_edges(&elements)?;
        let given: Vec<(usize, usize)> = self.hasse.iter().map(|e| (e[0], e[1])).collect();
        if hasse != given {
            return Err(input_err!("lattice covering pairs do not match the elements"));
        }
        Ok(SubmoduleLattice {
            mode: self.mode,
            field,
            ambient: self.ambient,
            elements,
            hasse,
        })
    }
}

/// A small poset given by named nodes (optionally pinned to subspace labels)
/// and its covering pairs `(lower, upper)`.
#[derive(Debug, Clone)]
pub struct ReferencePoset {
    pub names: Vec<&'static str>,
    pub labels: Vec<Option<&'static str>>,
    pub covers: Vec<(usize, usize)>,
}

impl ReferencePoset {
    /// Seven-node diagram for `F2[ε] ⊕ F2`, coordinates `(1, ε, 1')`.
    pub fn dual_numbers_figure() -> Self {
        let names = vec!["F2[e]+F2", "F2[e]", "(e)+F2", "(e)", "(e+1)", "F2", "0"];
        let labels = vec![
            Some("1,0,0;0,1,0;0,0,1"),
            Some("1,0,0;0,1,0"),
            Some("0,1,0;0,0,1"),
            Some("0,1,0"),
            Some("0,1,1"),
            Some("0,0,1"),
            Some(""),
        ];
        let covers = vec![(3, 2), (2, 0), (1, 0), (3, 1), (6, 3), (6, 4), (4, 2), (5, 2), (6, 5)];
        ReferencePoset { names, labels, covers }
    }

    fn leq(&self) -> Vec<Vec<bool>> {
        let n = self.names.len();
        let mut r = vec![vec![false; n]; n];
        for (i, row) in r.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(a, b) in &self.covers {
            r[a][b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if r[i][k] && r[k][j] {
                        r[i][j] = true;
                    }
                }
            }
        }
        r
    }
}

#[derive(Debug, Clone)]
pub struct PosetComparison {
    pub reference_size: usize,
    pub computed_size: usize,
    /// Hasse diagrams agree up to isomorphism.
    pub isomorphic: bool,
    /// Number of order embeddings of the reference into the computed poset.
    pub embeddings: usize,
    /// Reference nodes whose pinned label is not a computed element.
    pub missing: Vec<String>,
    /// Computed elements outside the image of the pinned labels.
    pub extra: Vec<String>,
    /// The pinned-label map is an order embedding.
    pub pinned_embedding: bool,
}

impl PosetComparison {
    pub fn summary(&self) -> String {
        let mut s = format!(
            "reference poset: {} nodes; computed: {} elements; isomorphic: {}; order embeddings: {}",
            self.reference_size,
            self.computed_size,
            if self.isomorphic { "yes" } else { "no" },
            self.embeddings
        );
        if !self.missing.is_empty() {
            let _ = write!(s, "; missing from computation: {}", self.missing.join(", "));
        }
        if !self.extra.is_empty() {
            let quoted: Vec<String> = self.extra.iter().map(|e| format!("\"{e}\"")).collect();
            let _ = write!(s, "; extra computed elements: {}", quoted.join(", "));
        }
        s
    }
}

fn lattice_leq(l: &SubmoduleLattice) -> Result<Vec<Vec<bool>>> {
    let n = l.len();
    (0..n)
        .map(|i| (0..n).map(|j| l.elements[i].is_subspace_of(&l.elements[j])).collect())
        .collect()
}

fn count_embeddings(rl: &[Vec<bool>], cl: &[Vec<bool>]) -> usize {
    fn go(k: usize, map: &mut Vec<usize>, used: &mut Vec<bool>, rl: &[Vec<bool>], cl: &[Vec<bool>]) -> usize {
        if k == rl.len() {
            return 1;
        }
        let mut total = 0;
        for c in 0..cl.len() {
            if used[c] {
                continue;
            }
            if (0..k).all(|i| rl[i][k] == cl[map[i]][c] && rl[k][i] == cl[c][map[i]]) {
                used[c] = true;
                map.push(c);
                total += go(k + 1, map, used, rl, cl);
                map.pop();
                used[c] = false;
            }
        }
        total
    }
    go(0, &mut Vec::new(), &mut vec![false; cl.len()], rl, cl)
}

/// Compares a computed lattice with a reference poset without forcing agreement.
pub fn compare_with_reference(l: &SubmoduleLattice, r: &ReferencePoset) -> Result<PosetComparison> {
    let rl = r.leq();
    let cl = lattice_leq(l)?;
    let embeddings = count_embeddings(&rl, &cl);
    let isomorphic = r.names.len() == l.len() && embeddings > 0;
    let labels: Vec<String> = l.elements.iter().map(Subspace::label).collect();
    let mut missing = Vec::new();
    let mut image = vec![None; r.names.len()];
    for (i, lab) in r.labels.iter().enumerate() {
        if let Some(lab) = lab {
            match labels.iter().position(|x| x == lab) {
                Some(j) => image[i] = Some(j),
                None => missing.push(r.names[i].to_string()),
            }
        }
    }
    let pinned_embedding = image.iter().all(Option::is_some)
        && (0..r.names.len()).all(|i| {
            (0..r.names.len()).all(|j| rl[i][j] == cl[image[i].unwrap()][image[j].unwrap()])
        });
    let hit: HashSet<usize> = image.iter().flatten().copied().collect();
    let extra = (0..l.len()).filter(|j| !hit.contains(j)).map(|j| labels[j].clone()).collect();
    Ok(PosetComparison {
        reference_size: r.names.len(),
        computed_size: l.len(),
        isomorphic,
        embeddings,
        missing,
        extra,
        pinned_embedding,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hom::hom_basis;
    use crate::module::direct_sum;
    use crate::module::tests::{a2, dual_numbers, gf2};

    fn dual_c() -> Module {
        let d = dual_numbers();
        direct_sum(&d, &[Module::regular(&d).unwrap(), Module::simple(&d, 0).unwrap()]).unwrap().module
    }

    /// Every subspace of GF(2)^n, by enumerating generator sets.
    fn all_subspaces(n: usize) -> BTreeSet<Subspace> {
        let vecs: Vec<Vec<u32>> = CoeffIter::new(2, n).collect();
        let mut out = BTreeSet::new();
        for mask in 0u64..(1 << vecs.len()) {
            let chosen: Vec<Vec<u32>> = (0..vecs.len()).filter(|i| mask >> i & 1 == 1).map(|i| vecs[i].clone()).collect();
            out.insert(Subspace::from_vectors(gf2(), n, &chosen).unwrap());
        }
        out
    }

    #[test]
    fn simple_module_lattice_is_two_chain() {
        let a = a2();
        let s = Module::simple(&a, 0).unwrap();
        for l in [SubmoduleLattice::lambda(&s).unwrap(), SubmoduleLattice::end_stable(&s).unwrap()] {
            assert_eq!(l.len(), 2);
            assert!(l.is_chain());
        }
    }

    #[test]
    fn dual_numbers_lambda_lattice_matches_oracle() {
        let c = dual_c();
        let l = SubmoduleLattice::lambda(&c).unwrap();
        let eps = c.maps()[0].clone();
        let oracle: Vec<Subspace> = all_subspaces(3)
            .into_iter()
            .filter(|s| s.image_under(&eps).unwrap().is_subspace_of(s).unwrap())
            .collect();
        assert_eq!(all_subspaces(3).len(), 16);
        assert_eq!(oracle.len(), 8);
        assert_eq!(l.elements, oracle);
        let brute = hasse_edges(&oracle).unwrap();
        assert_eq!(l.hasse, brute);
        assert_eq!(l.hasse.len(), 11);
        let labels: Vec<String> = l.elements.iter().map(Subspace::label).collect();
        assert!(labels.contains(&"1,0,1;0,1,0".to_string()));
    }

    #[test]
    fn end_stable_and_forgetful_are_four_chains() {
        let c = dual_c();
        let e = SubmoduleLattice::end_stable(&c).unwrap();
        assert_eq!(e.len(), 4);
        assert!(e.is_chain());
        let f = SubmoduleLattice::forgetful(&c).unwrap();
        assert_eq!(f.elements, e.elements);
    }

    #[test]
    fn gamma_lattice_of_regular_is_three_chain() {
        let d = dual_numbers();
        let reg = Module::regular(&d).unwrap();
        let gm = GammaModule::new(std::slice::from_ref(&reg), &reg).unwrap();
        let l = SubmoduleLattice::gamma(&gm).unwrap();
        assert_eq!(l.len(), 3);
        assert!(l.is_chain());
        let _ = hom_basis(&reg, &reg).unwrap();
    }

    #[test]
    fn reference_comparison_reports_diagonal() {
        let l = SubmoduleLattice::lambda(&dual_c()).unwrap();
        let cmp = compare_with_reference(&l, &ReferencePoset::dual_numbers_figure()).unwrap();
        assert!(!cmp.isomorphic);
        assert!(cmp.pinned_embedding);
        assert!(cmp.missing.is_empty());
        assert_eq!(cmp.extra, vec!["1,0,1;0,1,0".to_string()]);
        assert!(cmp.embeddings > 0);
    }

    #[test]
    fn dot_and_dump_round_trip() {
        let l = SubmoduleLattice::lambda(&dual_c()).unwrap();
        let dot = l.to_dot();
        assert!(dot.starts_with("digraph sub {\n  rankdir=BT;\n  \"\";\n"));
        assert_eq!(dot.matches(" -> ").count(), 11);
        assert_eq!(dot.lines().filter(|x| x.ends_with("\";") && !x.contains("->")).count(), 8);
        let json = serde_json::to_string(&l.to_dump()).unwrap();
        let back: LatticeDump = serde_json::from_str(&json).unwrap();
        assert_eq!(back.validate().unwrap(), l);
        let mut broken = l.to_dump();
        broken.hasse.pop();
        assert!(broken.validate().is_err());
    }

    #[test]
    fn ambient_cap() {
        let f = gf2();
        assert!(stable_subspaces(f, 13, &[]).is_err());
    }
}
