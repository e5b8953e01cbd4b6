//! A finite list of indecomposables standing in for the whole module category.

use std::collections::HashSet;
use std::sync::Arc;

use crate::algebra::PathAlgebra;
use crate::decompose::{decompose, indecomposables_isomorphic};
use crate::error::{Error, Result};
use crate::hom::hom_basis;
use crate::module::Module;

#[derive(Debug, Clone)]
pub struct Universe {
    alg: Arc<PathAlgebra>,
    modules: Vec<Module>,
    provenance: Vec<String>,
    dim_bound: usize,
    complete: bool,
}

impl Universe {
    pub fn algebra(&self) -> &Arc<PathAlgebra> {
        &self.alg
    }

    pub fn modules(&self) -> &[Module] {
        &self.modules
    }

    /// How each member was first reached.
    pub fn provenance(&self) -> &[String] {
        &self.provenance
    }

    pub fn dim_bound(&self) -> usize {
        self.dim_bound
    }

    /// The closure reached a fixpoint without discarding anything.
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn len(&self) -> usize {
        self.modules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modules.is_empty()
    }

    /// Index of the member isomorphic to an indecomposable `m`.
    pub fn position(&self, m: &Module) -> Result<Option<usize>> {
        for (i, u) in self.modules.iter().enumerate() {
            if indecomposables_isomorphic(u, m)?.is_some() {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    /// Assembles a universe from explicit members (all must be indecomposable
    /// and pairwise non-isomorphic). The result is marked incomplete.
    pub fn from_modules(alg: &Arc<PathAlgebra>, modules: Vec<Module>, dim_bound: usize) -> Result<Self> {
        let mut u = Universe {
            alg: alg.clone(),
            modules: Vec::new(),
            provenance: Vec::new(),
            dim_bound,
            complete: false,
        };
        for (i, m) in modules.into_iter().enumerate() {
            let d = decompose(&m)?;
            if d.summands.len() != 1 {
                return Err(Error::Precondition(format!("universe member #{i} is decomposable")));
            }
            if m.total_dim() > dim_bound {
                return Err(Error::Precondition(format!("universe member #{i} exceeds the dimension bound")));
            }
            if u.position(&m)?.is_some() {
                return Err(Error::Precondition(format!("universe member #{i} repeats an isomorphism class")));
            }
            u.modules.push(m);
            u.provenance.push(format!("given #{i}"));
        }
        Ok(u)
    }
}

struct Builder {
    u: Universe,
    pruned: bool,
}

impl Builder {
    /// Decomposes `m` and records every new summand; returns how many were new.
    fn absorb(&mut self, m: &Module, origin: &str) -> Result<usize> {
        if m.is_zero() {
            return Ok(0);
        }
        let mut added = 0;
        for s in decompose(m)?.summands {
            if s.total_dim() > self.u.dim_bound {
                self.pruned = true;
                continue;
            }
            if self.u.position(&s)?.is_none() {
                self.u.modules.push(s);
                self.u.provenance.push(origin.to_string());
                added += 1;
            }
        }
        Ok(added)
    }
}

/// Simples, projectives and injectives, closed under kernels, images and
/// cokernels of Hom basis morphisms between members, then decomposed.
/// Summands above `dim_bound` are dropped and the universe marked incomplete.
pub fn build_universe(alg: &Arc<PathAlgebra>, dim_bound: usize) -> Result<Universe> {
    let mut b = Builder {
        u: Universe {
            alg: alg.clone(),
            modules: Vec::new(),
            provenance: Vec::new(),
            dim_bound,
            complete: false,
        },
        pruned: false,
    };
    let names = alg.quiver().vertices().to_vec();
    for (v, name) in names.iter().enumerate() {
        b.absorb(&Module::simple(alg, v)?, &format!("simple {name}"))?;
    }
    for (v, name) in names.iter().enumerate() {
        b.absorb(&Module::projective(alg, v)?, &format!("projective {name}"))?;
    }
    for (v, name) in names.iter().enumerate() {
        b.absorb(&Module::injective(alg, v)?, &format!("injective {name}"))?;
    }
    let mut done: HashSet<(usize, usize)> = HashSet::new();
    loop {
        let n = b.u.modules.len();
        let mut grew = false;
        for i in 0..n {
            for j in 0..n {
                if !done.insert((i, j)) {
                    continue;
                }
                let hom = hom_basis(&b.u.modules[i], &b.u.modules[j])?;
                for (k, f) in hom.basis().iter().enumerate() {
                    let fa = f.factor()?;
                    let tag = |what: &str| format!("{what} of basis map {k}: #{i} -> #{j}");
                    grew |= b.absorb(&fa.kernel, &tag("kernel"))? > 0;
                    grew |= b.absorb(&fa.image, &tag("image"))? > 0;
                    grew |= b.absorb(&fa.cokernel, &tag("cokernel"))? > 0;
                }
            }
        }
        if !grew {
            break;
        }
    }
    b.u.complete = !b.pruned;
    Ok(b.u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::module::tests::{a2, dual_numbers, gf2, kronecker};
    use crate::algebra::Quiver;

    #[test]
    fn dual_numbers_universe() {
        let u = build_universe(&dual_numbers(), 2).unwrap();
        assert!(u.is_complete());
        let mut dims: Vec<usize> = u.modules().iter().map(Module::total_dim).collect();
        dims.sort();
        assert_eq!(dims, vec![1, 2]);
    }

    #[test]
    fn a2_universe() {
        let u = build_universe(&a2(), 2).unwrap();
        assert!(u.is_complete());
        let mut dims: Vec<Vec<usize>> = u.modules().iter().map(|m| m.dims().to_vec()).collect();
        dims.sort();
        assert_eq!(dims, vec![vec![0, 1], vec![1, 0], vec![1, 1]]);
    }

    #[test]
    fn kronecker_bound_one_is_incomplete() {
        let u = build_universe(&kronecker(), 1).unwrap();
        assert!(!u.is_complete());
        assert_eq!(u.len(), 2);
    }

    #[test]
    fn a3_universe_has_six_members() {
        let q = Quiver::new(&["1", "2", "3"], &[("a", "1", "2"), ("b", "2", "3")]).unwrap();
        let alg = Arc::new(PathAlgebra::new(gf2(), q, vec![], 3).unwrap());
        let u = build_universe(&alg, 3).unwrap();
        assert!(u.is_complete());
        assert_eq!(u.len(), 6);
    }
}
