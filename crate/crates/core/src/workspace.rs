//! JSON workspace files: an algebra given by quiver and relations, plus named modules.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{PathAlgebra, Quiver, Relation};
use crate::decompose::sum_of;
use crate::error::{input_err, Error, Result};
use crate::field::PrimeField;
use crate::matrix::Matrix;
use crate::module::Module;
use crate::universe::Universe;

/// Largest nilpotency cap tried when none is given.
pub const MAX_AUTO_CAP: usize = 16;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorkspaceFile {
    pub field: FieldDef,
    pub quiver: QuiverDef,
    #[serde(default)]
    pub relations: Vec<Vec<TermDef>>,
    #[serde(default)]
    pub modules: BTreeMap<String, ModuleDef>,
    #[serde(default, skip_serializing_if = "Options::is_empty")]
    pub options: Options,
    /// Free-form notes per module name (how a universe member was found).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<BTreeMap<String, String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldDef {
    pub p: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuiverDef {
    pub vertices: Vec<String>,
    #[serde(default)]
    pub arrows: Vec<ArrowDef>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrowDef {
    pub name: String,
    pub source: String,
    pub target: String,
}

/// `coeff` times the path spelled by arrow names, first arrow first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDef {
    pub coeff: i64,
    pub path: Vec<String>,
}

/// Exactly one of: explicit `dims` + `maps`, `regular`, `simple`,
/// `projective`, `injective` (vertex names) or `sum` (module names).
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleDef {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dims: Option<Vec<usize>>,
    /// Arrow name to a `dim(target) x dim(source)` integer matrix.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub maps: Option<BTreeMap<String, Vec<Vec<i64>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub regular: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub simple: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub projective: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub injective: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sum: Option<Vec<String>>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    /// Paths of this length are zero in the algebra.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nilpotency_cap: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub universe_dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_enum: Option<u64>,
}

impl Options {
    fn is_empty(&self) -> bool {
        *self == Options::default()
    }
}

/// A parsed and validated workspace.
#[derive(Debug, Clone)]
pub struct Workspace {
    pub alg: Arc<PathAlgebra>,
    pub modules: BTreeMap<String, Module>,
    pub options: Options,
    pub provenance: BTreeMap<String, String>,
}

impl WorkspaceFile {
    pub fn from_json(src: &str) -> Result<Self> {
        serde_json::from_str(src).map_err(|e| input_err!("workspace JSON: {e}"))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("workspace serializes") + "\n"
    }

    pub fn build_algebra(&self) -> Result<Arc<PathAlgebra>> {
        let field = PrimeField::new(self.field.p)?;
        let vertices: Vec<&str> = self.quiver.vertices.iter().map(String::as_str).collect();
        let arrows: Vec<(&str, &str, &str)> = self
            .quiver
            .arrows
            .iter()
            .map(|a| (a.name.as_str(), a.source.as_str(), a.target.as_str()))
            .collect();
        let quiver = Quiver::new(&vertices, &arrows)?;
        let mut rels = Vec::new();
        for (i, r) in self.relations.iter().enumerate() {
            let mut terms = Vec::new();
            for t in r {
                if t.path.is_empty() {
                    return Err(input_err!("relation #{i} has a term with an empty path"));
                }
                terms.push((t.coeff, quiver.path(&t.path).map_err(|e| input_err!("relation #{i}: {e}"))?));
            }
            rels.push(Relation::new(field, terms).map_err(|e| input_err!("relation #{i}: {e}"))?);
        }
        if let Some(cap) = self.options.nilpotency_cap {
            return Ok(Arc::new(PathAlgebra::new(field, quiver, rels, cap)?));
        }
        let mut last = None;
        for cap in 1..=MAX_AUTO_CAP.max(quiver.num_vertices()) {
            match PathAlgebra::new(field, quiver.clone(), rels.clone(), cap) {
                Ok(a) => return Ok(Arc::new(a)),
                Err(Error::Input(m)) if m.contains("not admissible") => last = Some(m),
                Err(e) => return Err(e),
            }
        }
        Err(input_err!(
            "no admissible nilpotency cap up to {MAX_AUTO_CAP}{}",
            last.map(|m| format!(" ({m})")).unwrap_or_default()
        ))
    }

    pub fn load(&self) -> Result<Workspace> {
        if let Some(m) = self.options.max_enum {
            crate::limits::set_max_enum(m);
        }
        let alg = self.build_algebra()?;
        let mut modules = BTreeMap::new();
        let mut visiting = Vec::new();
        for name in self.modules.keys() {
            resolve(self, &alg, name, &mut modules, &mut visiting)?;
        }
        if let Some(prov) = &self.provenance {
            if let Some(k) = prov.keys().find(|k| !modules.contains_key(*k)) {
                return Err(input_err!("provenance names unknown module {k:?}"));
            }
        }
        Ok(Workspace {
            alg,
            modules,
            options: self.options.clone(),
            provenance: self.provenance.clone().unwrap_or_default(),
        })
    }

    /// A workspace holding the algebra of `alg` and the given modules explicitly.
    pub fn from_modules(alg: &PathAlgebra, modules: &[(String, &Module)]) -> Self {
        let q = alg.quiver();
        let name_path = |p: &crate::algebra::Path| p.arrows.iter().map(|&a| q.arrows()[a].name.clone()).collect();
        WorkspaceFile {
            field: FieldDef { p: alg.field().p() as u64 },
            quiver: QuiverDef {
                vertices: q.vertices().to_vec(),
                arrows: q
                    .arrows()
                    .iter()
                    .map(|a| ArrowDef {
                        name: a.name.clone(),
                        source: q.vertices()[a.source].clone(),
                        target: q.vertices()[a.target].clone(),
                    })
                    .collect(),
            },
            relations: alg
                .relations()
                .iter()
                .map(|r| {
                    r.terms()
                        .iter()
                        .map(|(c, p)| TermDef {
                            coeff: *c as i64,
                            path: name_path(p),
                        })
                        .collect()
                })
                .collect(),
            modules: modules.iter().map(|(n, m)| (n.clone(), explicit(m))).collect(),
            options: Options {
                nilpotency_cap: Some(alg.cap()),
                ..Options::default()
            },
            provenance: None,
        }
    }

    /// Members named `U0, U1, ...` with their provenance.
    pub fn from_universe(u: &Universe) -> Self {
        let names: Vec<String> = (0..u.len()).map(|i| format!("U{i}")).collect();
        let pairs: Vec<(String, &Module)> = names.iter().cloned().zip(u.modules()).collect();
        let mut w = Self::from_modules(u.algebra(), &pairs);
        w.options.universe_dim = Some(u.dim_bound());
        w.provenance = Some(names.into_iter().zip(u.provenance().iter().cloned()).collect());
        w
    }
}

/// The explicit `dims` + `maps` form of a module.
pub fn explicit(m: &Module) -> ModuleDef {
    let q = m.algebra().quiver();
    let maps = q
        .arrows()
        .iter()
        .zip(m.maps())
        .map(|(a, mat)| {
            let rows = mat.row_vecs().into_iter().map(|r| r.into_iter().map(i64::from).collect()).collect();
            (a.name.clone(), rows)
        })
        .collect();
    ModuleDef {
        dims: Some(m.dims().to_vec()),
        maps: Some(maps),
        ..ModuleDef::default()
    }
}

fn resolve(
    w: &WorkspaceFile,
    alg: &Arc<PathAlgebra>,
    name: &str,
    done: &mut BTreeMap<String, Module>,
    visiting: &mut Vec<String>,
) -> Result<Module> {
    if let Some(m) = done.get(name) {
        return Ok(m.clone());
    }
    let def = w.modules.get(name).ok_or_else(|| input_err!("unknown module {name:?}"))?;
    if visiting.iter().any(|v| v == name) {
        return Err(input_err!("module {name:?} is defined in terms of itself"));
    }
    visiting.push(name.to_string());
    let m = build(w, alg, name, def, done, visiting).map_err(|e| match e {
        Error::Input(m) if m.starts_with("module ") => Error::Input(m),
        Error::Input(m) | Error::Dimension(m) | Error::Precondition(m) => input_err!("module {name:?}: {m}"),
        other => other,
    })?;
    visiting.pop();
    done.insert(name.to_string(), m.clone());
    Ok(m)
}

fn build(
    w: &WorkspaceFile,
    alg: &Arc<PathAlgebra>,
    name: &str,
    def: &ModuleDef,
    done: &mut BTreeMap<String, Module>,
    visiting: &mut Vec<String>,
) -> Result<Module> {
    let forms = [
        def.dims.is_some() || def.maps.is_some(),
        def.regular.is_some(),
        def.simple.is_some(),
        def.projective.is_some(),
        def.injective.is_some(),
        def.sum.is_some(),
    ];
    if forms.iter().filter(|&&b| b).count() != 1 {
        return Err(input_err!("module {name:?} must use exactly one definition form"));
    }
    let q = alg.quiver();
    let vertex = |v: &str| q.vertex_index(v);
    if let Some(v) = &def.simple {
        return Module::simple(alg, vertex(v)?);
    }
    if let Some(v) = &def.projective {
        return Module::projective(alg, vertex(v)?);
    }
    if let Some(v) = &def.injective {
        return Module::injective(alg, vertex(v)?);
    }
    if let Some(r) = def.regular {
        if !r {
            return Err(input_err!("module {name:?}: `regular` must be true"));
        }
        return Module::regular(alg);
    }
    if let Some(parts) = &def.sum {
        let ms = parts
            .iter()
            .map(|p| resolve(w, alg, p, done, visiting))
            .collect::<Result<Vec<_>>>()?;
        return sum_of(alg, &ms);
    }
    let dims = def.dims.clone().ok_or_else(|| input_err!("module {name:?} has maps but no dims"))?;
    if dims.len() != q.num_vertices() {
        return Err(input_err!("module {name:?} has {} dims for {} vertices", dims.len(), q.num_vertices()));
    }
    let given = def.maps.clone().unwrap_or_default();
    if let Some(k) = given.keys().find(|k| q.arrow_index(k).is_err()) {
        return Err(input_err!("module {name:?} gives a map for unknown arrow {k:?}"));
    }
    let f = alg.field();
    let mut maps = Vec::new();
    for a in q.arrows() {
        let (r, c) = (dims[a.target], dims[a.source]);
        let m = match given.get(&a.name) {
            Some(rows) => {
                if rows.len() != r || rows.iter().any(|row| row.len() != c) {
                    return Err(input_err!("module {name:?}: map {} must be {r}x{c}", a.name));
                }
                Matrix::from_rows(f, c, rows)?
            }
            None if r == 0 || c == 0 => Matrix::zeros(f, r, c),
            None => return Err(input_err!("module {name:?} has no map for arrow {}", a.name)),
        };
        maps.push(m);
    }
    let m = Module::new_unchecked(alg.clone(), dims, maps)?;
    if let Some(v) = m.violations().first() {
        return Err(input_err!("module {name:?} violates {v}"));
    }
    Ok(m)
}

impl Workspace {
    pub fn from_json(src: &str) -> Result<Self> {
        WorkspaceFile::from_json(src)?.load()
    }

    pub fn from_path(path: &std::path::Path) -> Result<Self> {
        let src = std::fs::read_to_string(path).map_err(|e| input_err!("cannot read {}: {e}", path.display()))?;
        Self::from_json(&src)
    }

    pub fn module(&self, name: &str) -> Result<&Module> {
        self.modules.get(name).ok_or_else(|| {
            let known: Vec<&str> = self.modules.keys().map(String::as_str).collect();
            input_err!("unknown module {name:?} (known: {})", known.join(", "))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decompose::is_isomorphic;
    use crate::universe::build_universe;

    const DUAL: &str = r#"{
        "field": {"p": 2},
        "quiver": {"vertices": ["1"], "arrows": [{"name": "e", "source": "1", "target": "1"}]},
        "relations": [[{"coeff": 1, "path": ["e", "e"]}]],
        "modules": {
            "S": {"simple": "1"},
            "GEN": {"regular": true},
            "C": {"sum": ["GEN", "S"]},
            "Y": {"dims": [2], "maps": {"e": [[0, 0], [1, 0]]}}
        }
    }"#;

    #[test]
    fn loads_dual_numbers() {
        let w = Workspace::from_json(DUAL).unwrap();
        assert_eq!(w.alg.dim(), 2);
        assert_eq!(w.alg.cap(), 2);
        assert_eq!(w.module("C").unwrap().dims(), &[3]);
        assert!(is_isomorphic(w.module("Y").unwrap(), w.module("GEN").unwrap()).unwrap().is_some());
        assert!(w.module("Z").is_err());
    }

    #[test]
    fn rejects_bad_input() {
        let unknown = DUAL.replace("\"relations\"", "\"relatons\"");
        assert!(matches!(Workspace::from_json(&unknown), Err(Error::Input(_))));
        let bad_map = DUAL.replace("[[0, 0], [1, 0]]", "[[0, 1], [0, 1]]");
        let e = Workspace::from_json(&bad_map).unwrap_err().to_string();
        assert!(e.contains("\"Y\""), "{e}");
        let cyc = DUAL.replace("[\"GEN\", \"S\"]", "[\"C\"]");
        assert!(Workspace::from_json(&cyc).is_err());
        let two = DUAL.replace("{\"simple\": \"1\"}", "{\"simple\": \"1\", \"regular\": true}");
        assert!(Workspace::from_json(&two).is_err());
        let no_rel = DUAL.replace("[[{\"coeff\": 1, \"path\": [\"e\", \"e\"]}]]", "[]");
        assert!(Workspace::from_json(&no_rel).unwrap_err().to_string().contains("admissible"));
    }

    #[test]
    fn universe_round_trip() {
        let w = Workspace::from_json(DUAL).unwrap();
        let u = build_universe(&w.alg, 4).unwrap();
        let file = WorkspaceFile::from_universe(&u);
        let json = file.to_json();
        let back = Workspace::from_json(&json).unwrap();
        assert_eq!(back.modules.len(), u.len());
        for (i, m) in u.modules().iter().enumerate() {
            assert_eq!(back.module(&format!("U{i}")).unwrap().maps(), m.maps());
        }
        assert_eq!(WorkspaceFile::from_json(&json).unwrap(), file);
        assert_eq!(back.provenance.len(), u.len());
    }
}
