//! Acceptance criteria 1-10. Each test prints one `PASS`/`FAIL` line.

use std::io::Write;
use std::sync::Arc;
use std::time::{Duration, Instant};

use mqd::almost_split::almost_split_sequence;
use mqd::decompose::{is_isomorphic, sum_of};
use mqd::determined::{
    auslander_bijection_check, construct_determined, kernel_determinacy_check, mutually_factoring,
};
use mqd::gamma::{FhMethod, GammaModule};
use mqd::grass::{beilinson_injective, grassmannian_points, point_of, variety_points, VarietySpec};
use mqd::hom::hom_basis;
use mqd::lattice::{compare_with_reference, ReferencePoset, SubmoduleLattice};
use mqd::minimal::minimal_presentation;
use mqd::universe::{build_universe, Universe};
use mqd::{Matrix, Module, Morphism, PathAlgebra, Polynomial, PrimeField, Quiver, Relation, Subspace};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn gf(p: u64) -> PrimeField {
    PrimeField::new(p).unwrap()
}

fn dual_numbers() -> Arc<PathAlgebra> {
    let q = Quiver::new(&["1"], &[("e", "1", "1")]).unwrap();
    let r = Relation::from_names(&q, gf(2), &[(1, vec!["e", "e"])]).unwrap();
    Arc::new(PathAlgebra::new(gf(2), q, vec![r], 2).unwrap())
}

fn a2() -> Arc<PathAlgebra> {
    let q = Quiver::new(&["1", "2"], &[("a", "1", "2")]).unwrap();
    Arc::new(PathAlgebra::new(gf(2), q, vec![], 2).unwrap())
}

fn a3() -> Arc<PathAlgebra> {
    let q = Quiver::new(&["1", "2", "3"], &[("a", "1", "2"), ("b", "2", "3")]).unwrap();
    Arc::new(PathAlgebra::new(gf(2), q, vec![], 3).unwrap())
}

fn complete_universe(alg: &Arc<PathAlgebra>) -> Universe {
    let u = build_universe(alg, 4).unwrap();
    assert!(u.is_complete());
    u
}

fn report(n: usize, name: &str, ok: bool, detail: &str, elapsed: Duration, limit: Duration) {
    let within = elapsed < limit;
    let verdict = if ok && within { "PASS" } else { "FAIL" };
    let mut out = std::io::stdout().lock();
    writeln!(
        out,
        "criterion {n:>2} [{name}]: {verdict} ({detail}; {:.3} s, limit {} s)",
        elapsed.as_secs_f64(),
        limit.as_secs()
    )
    .unwrap();
    assert!(ok, "criterion {n} failed: {detail}");
    assert!(within, "criterion {n} took {elapsed:?}, limit {limit:?}");
}

fn note(line: &str) {
    writeln!(std::io::stdout().lock(), "    {line}").unwrap();
}

/// Nonempty subsets of the universe, as lists of members.
fn nonempty_subsets(u: &Universe) -> Vec<Vec<Module>> {
    let ms = u.modules();
    (1u32..(1 << ms.len()))
        .map(|mask| (0..ms.len()).filter(|i| mask >> i & 1 == 1).map(|i| ms[i].clone()).collect())
        .collect()
}

/// Every `(C, Y)` of criterion 2 with its Γ-lattice.
fn gamma_grid() -> Vec<(Universe, GammaModule, SubmoduleLattice)> {
    let mut out = Vec::new();
    for alg in [dual_numbers(), a2()] {
        let u = complete_universe(&alg);
        for cs in nonempty_subsets(&u) {
            for y in u.modules() {
                let gm = GammaModule::new(&cs, y).unwrap();
                let lat = SubmoduleLattice::gamma(&gm).unwrap();
                out.push((u.clone(), gm, lat));
            }
        }
    }
    out
}

/// All morphisms `m -> n` by running over every tuple of block matrices.
fn brute_morphisms(m: &Module, n: &Module) -> Vec<Morphism> {
    let f = m.field();
    let p = f.p() as u64;
    let shapes: Vec<(usize, usize)> = n.dims().iter().zip(m.dims()).map(|(&r, &c)| (r, c)).collect();
    let len: usize = shapes.iter().map(|(r, c)| r * c).sum();
    let total = p.pow(len as u32);
    assert!(total <= 1 << 16, "brute force too large");
    let mut out = Vec::new();
    for code in 0..total {
        let mut digits = (0..len).scan(code, |c, _| {
            let d = (*c % p) as u32;
            *c /= p;
            Some(d)
        });
        let blocks: Vec<Matrix> = shapes
            .iter()
            .map(|&(r, c)| Matrix::new(f, r, c, digits.by_ref().take(r * c).collect()).unwrap())
            .collect();
        if let Ok(g) = Morphism::new(m.clone(), n.clone(), blocks) {
            out.push(g);
        }
    }
    out
}

#[test]
fn criterion_01_extremes() {
    let t = Instant::now();
    let mut checks = 0;
    let mut ok = true;
    for alg in [dual_numbers(), a2()] {
        let u = complete_universe(&alg);
        let gen = Module::regular(&alg).unwrap();
        for y in u.modules() {
            let empty = GammaModule::new(&[], y).unwrap();
            let r = construct_determined(&empty, &Subspace::zero(y.field(), 0), &u).unwrap();
            ok &= r.verified() && mutually_factoring(&r.alpha, &Morphism::identity(y)).unwrap();
            let g = GammaModule::new(std::slice::from_ref(&gen), y).unwrap();
            let r = construct_determined(&g, &Subspace::zero(y.field(), g.dim()), &u).unwrap();
            ok &= r.verified() && r.alpha.source().is_zero();
            checks += 2;
        }
    }
    report(1, "determined-morphism extremes", ok, &format!("{checks} checks"), t.elapsed(), Duration::from_secs(1));
}

#[test]
fn criterion_02_fh_double_derivation() {
    let t = Instant::now();
    let grid = gamma_grid();
    let mut checks = 0;
    let mut ok = true;
    for (u, gm, lat) in &grid {
        for h in &lat.elements {
            for x in u.modules().iter().chain(std::iter::once(gm.c())) {
                let a = gm.fh_eval(h, x, FhMethod::Intersection).unwrap();
                let b = gm.fh_eval(h, x, FhMethod::Coinduction).unwrap();
                ok &= a == b;
                checks += 1;
            }
            // restriction to C gives H back
            ok &= gm.fh_eval(h, gm.c(), FhMethod::Intersection).unwrap() == *h;
        }
    }
    report(
        2,
        "F_H by intersection vs coinduction",
        ok,
        &format!("{} (C, Y) pairs, {checks} evaluations", grid.len()),
        t.elapsed(),
        Duration::from_secs(10),
    );
}

#[test]
fn criterion_03_construction_certificate() {
    let t = Instant::now();
    let mut n = 0;
    let mut failures = Vec::new();
    for (u, gm, lat) in gamma_grid() {
        for h in &lat.elements {
            let r = construct_determined(&gm, h, &u).unwrap();
            n += 1;
            if !(r.image_check && r.minimal_check && r.universality_check() && r.truncation() == "exact") {
                failures.push(h.label());
            }
        }
    }
    report(
        3,
        "alpha_{C,H} certificates",
        failures.is_empty(),
        &format!("{n} submodules H, failing: {failures:?}"),
        t.elapsed(),
        Duration::from_secs(30),
    );
}

#[test]
fn criterion_04_bijection_round_trip() {
    let t = Instant::now();
    let mut checked = 0;
    let mut failures = Vec::new();
    for (u, gm, _) in gamma_grid() {
        let rep = auslander_bijection_check(gm.parts(), gm.y(), &u).unwrap();
        checked += rep.checked;
        failures.extend(rep.failures);
    }
    report(
        4,
        "bijection round trip",
        failures.is_empty(),
        &format!("{checked} checks, failures: {failures:?}"),
        t.elapsed(),
        Duration::from_secs(30),
    );
}

/// Both almost split conditions by brute force over all morphisms.
fn brute_almost_split(iota: &Morphism, pi: &Morphism, u: &Universe) -> bool {
    let (x, y, z) = (iota.source(), pi.source(), pi.target());
    let idx = Morphism::identity(x);
    let idz = Morphism::identity(z);
    let splits_right = brute_morphisms(z, y).iter().any(|s| pi.compose(s).unwrap() == idz);
    let splits_left = brute_morphisms(y, x).iter().any(|r| r.compose(iota).unwrap() == idx);
    if splits_right || splits_left {
        return false;
    }
    for t in u.modules() {
        let into_y = brute_morphisms(t, y);
        let from_y = brute_morphisms(y, t);
        let z_t = brute_morphisms(z, t);
        for beta in brute_morphisms(t, z) {
            let retraction = z_t.iter().any(|s| beta.compose(s).unwrap() == idz);
            let factors = into_y.iter().any(|phi| pi.compose(phi).unwrap() == beta);
            if !retraction && !factors {
                return false;
            }
        }
        let t_x = brute_morphisms(t, x);
        for beta in brute_morphisms(x, t) {
            let section = t_x.iter().any(|r| r.compose(&beta).unwrap() == idx);
            let extends = from_y.iter().any(|s| s.compose(iota).unwrap() == beta);
            if !section && !extends {
                return false;
            }
        }
    }
    true
}

#[test]
fn criterion_05_almost_split_sequences() {
    let t = Instant::now();
    let d = dual_numbers();
    let a = a2();
    let cases = [
        (d.clone(), Module::simple(&d, 0).unwrap(), Module::simple(&d, 0).unwrap(), Module::regular(&d).unwrap()),
        (a.clone(), Module::simple(&a, 0).unwrap(), Module::simple(&a, 1).unwrap(), Module::projective(&a, 0).unwrap()),
    ];
    let mut ok = true;
    let mut detail = Vec::new();
    for (alg, z, x_expect, y_expect) in cases {
        let u = complete_universe(&alg);
        let seq = almost_split_sequence(&z, &u).unwrap();
        ok &= seq.verified() && seq.short_exact && !seq.split;
        ok &= is_isomorphic(seq.iota.source(), &x_expect).unwrap().is_some();
        ok &= is_isomorphic(seq.pi.source(), &y_expect).unwrap().is_some();
        ok &= brute_almost_split(&seq.iota, &seq.pi, &u);
        ok &= seq.ends.isomorphic && seq.ends.x.order == 2 && seq.ends.z.order == 2;
        detail.push(format!("End/rad orders {} and {}", seq.ends.x.order, seq.ends.z.order));
    }
    let p1 = Module::projective(&a, 0).unwrap();
    ok &= almost_split_sequence(&p1, &complete_universe(&a)).is_err();
    report(5, "almost split sequences", ok, &detail.join(", "), t.elapsed(), Duration::from_secs(5));
}

/// `|P^n(F_q)|` and the zeros of `polys` there, by direct counting.
fn projective_zeros(n: usize, q: u32, polys: &[Polynomial]) -> usize {
    let f = gf(q as u64);
    let mut count = 0;
    for code in 0..(q as u64).pow(n as u32 + 1) {
        let x: Vec<u32> = (0..=n).map(|i| ((code / (q as u64).pow(i as u32)) % q as u64) as u32).collect();
        // canonical: last nonzero coordinate is 1
        match x.iter().rev().find(|&&c| c != 0) {
            Some(&1) => {}
            _ => continue,
        }
        if polys.iter().all(|g| g.eval(f, &x) == 0) {
            count += 1;
        }
    }
    count
}

#[test]
fn criterion_06_beilinson_realization() {
    let t = Instant::now();
    let conic = vec![Polynomial::parse("x0*x2 - x1^2").unwrap()];
    let squares: Vec<Polynomial> = ["x0^2", "x1^2", "x2^2"].iter().map(|s| Polynomial::parse(s).unwrap()).collect();
    let mut cases: Vec<(VarietySpec, usize)> = Vec::new();
    for q in [2u32, 3, 5] {
        cases.push((VarietySpec::new(1, 1, vec![], q).unwrap(), q as usize + 1));
    }
    for (q, e) in [(2u32, 3usize), (3, 4)] {
        cases.push((VarietySpec::new(2, 2, conic.clone(), q).unwrap(), e));
    }
    for q in [2u32, 3] {
        cases.push((VarietySpec::new(2, 2, squares.clone(), q).unwrap(), 0));
    }
    let mut ok = true;
    let mut detail = Vec::new();
    for (spec, expected) in &cases {
        let m = beilinson_injective(spec).unwrap();
        let g = grassmannian_points(&m, &vec![1; m.dims().len()]).unwrap();
        let v = variety_points(spec).unwrap();
        let direct = projective_zeros(spec.n, spec.q, &spec.polys);
        let mut gp: Vec<Vec<u32>> = g.points.iter().filter_map(|s| point_of(spec, s)).collect();
        gp.sort();
        ok &= g.count == *expected && v.len() == *expected && direct == *expected && gp == v;
        detail.push(format!("n={} q={} #polys={}: {}={}", spec.n, spec.q, spec.polys.len(), g.count, v.len()));
    }
    report(6, "Grassmannian vs variety counts", ok, &detail.join("; "), t.elapsed(), Duration::from_secs(10));
}

#[test]
fn criterion_07_dual_numbers_lattice() {
    let t = Instant::now();
    let d = dual_numbers();
    let c = sum_of(&d, &[Module::regular(&d).unwrap(), Module::simple(&d, 0).unwrap()]).unwrap();
    let lat = SubmoduleLattice::lambda(&c).unwrap();
    // oracle: all 16 subspaces of F2^3, kept when stable under ε
    let f = gf(2);
    let vecs: Vec<Vec<u32>> = (0..8u32).map(|i| vec![i >> 2 & 1, i >> 1 & 1, i & 1]).collect();
    let mut all: Vec<Subspace> = (0u32..256)
        .map(|mask| {
            let gens: Vec<Vec<u32>> = (0..8).filter(|i| mask >> i & 1 == 1).map(|i| vecs[i].clone()).collect();
            Subspace::from_vectors(f, 3, &gens).unwrap()
        })
        .collect();
    all.sort();
    all.dedup();
    let eps = c.maps()[0].clone();
    let stable: Vec<Subspace> = all
        .iter()
        .filter(|s| s.basis_vecs().iter().all(|v| s.contains(&eps.mul_vec(v)).unwrap()))
        .cloned()
        .collect();
    let covers: Vec<(usize, usize)> = (0..stable.len())
        .flat_map(|i| (0..stable.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| {
            let lt = |a: usize, b: usize| a != b && stable[a].is_subspace_of(&stable[b]).unwrap();
            lt(i, j) && !(0..stable.len()).any(|k| lt(i, k) && lt(k, j))
        })
        .collect();
    let ok = all.len() == 16 && stable.len() == 8 && lat.elements == stable && lat.hasse == covers;
    let cmp = compare_with_reference(&lat, &ReferencePoset::dual_numbers_figure()).unwrap();
    let end = SubmoduleLattice::end_stable(&c).unwrap();
    let fg = SubmoduleLattice::forgetful(&c).unwrap();
    report(
        7,
        "dual-numbers submodule lattice",
        ok,
        &format!("{} elements, {} covering pairs", lat.len(), lat.hasse.len()),
        t.elapsed(),
        Duration::from_secs(1),
    );
    note(&format!("advisory: {}", cmp.summary()));
    note(&format!("end-stable reading: {} elements, chain: {}", end.len(), end.is_chain()));
    note(&format!("forgetful-subfunctor reading: {} elements, chain: {}", fg.len(), fg.is_chain()));
}

#[test]
fn criterion_08_determinacy_sweep() {
    let t = Instant::now();
    let mut checked = 0;
    let mut failures = Vec::new();
    for alg in [dual_numbers(), a2()] {
        let rep = kernel_determinacy_check(&complete_universe(&alg)).unwrap();
        checked += rep.checked;
        failures.extend(rep.failures);
    }
    report(
        8,
        "determinacy sweep",
        failures.is_empty(),
        &format!("{checked} checks, failures: {failures:?}"),
        t.elapsed(),
        Duration::from_secs(30),
    );
}

#[test]
fn criterion_09_minimal_presentations() {
    let t = Instant::now();
    let mut n = 0;
    let mut ok = true;
    for alg in [dual_numbers(), a2(), a3()] {
        let u = complete_universe(&alg);
        for s in u.modules() {
            for y in u.modules() {
                for beta in hom_basis(s, y).unwrap().basis() {
                    let mp = minimal_presentation(beta).unwrap();
                    ok &= mp.beta.certified && mp.kappa.certified;
                    ok &= mp.beta.enumerated != Some(false) && mp.kappa.enumerated != Some(false);
                    ok &= mp.is_complex().unwrap() && mp.exact_over(&u).unwrap();
                    ok &= mp.beta.alpha.compose(&mp.beta.projection).unwrap() == *beta;
                    n += 1;
                }
            }
        }
    }
    report(9, "minimal presentations", ok, &format!("{n} morphisms"), t.elapsed(), Duration::from_secs(30));
}

fn random_matrix(rng: &mut ChaCha8Rng, f: PrimeField, r: usize, c: usize) -> Matrix {
    let data = (0..r * c).map(|_| rng.random_range(0..f.p())).collect();
    Matrix::new(f, r, c, data).unwrap()
}

#[test]
fn criterion_10_linear_algebra() {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x006d_7164);
    let mut ok = true;
    let trials = 1000;
    for i in 0..trials {
        let f = gf([2, 3, 5][i % 3]);
        let (r, c) = (rng.random_range(0..7), rng.random_range(1..7));
        let m = random_matrix(&mut rng, f, r, c);
        ok &= m.rank() + m.kernel().dim() == c;
        let e = m.rref().matrix;
        ok &= e.rref().matrix == e;
        let (ka, kb) = (rng.random_range(0..5), rng.random_range(0..5));
        let a = Subspace::from_matrix_rows(&random_matrix(&mut rng, f, ka, c));
        let b = Subspace::from_matrix_rows(&random_matrix(&mut rng, f, kb, c));
        ok &= a.sum(&b).unwrap().dim() + a.meet(&b).unwrap().dim() == a.dim() + b.dim();
        let x = random_matrix(&mut rng, f, c, 1);
        let rhs = m.mul(&x);
        ok &= matches!(m.solve(&rhs).unwrap(), Some(s) if m.mul(&s) == rhs);
    }
    report(
        10,
        "linear-algebra substrate",
        ok,
        &format!("{trials} randomized trials over GF(2), GF(3), GF(5)"),
        t.elapsed(),
        Duration::from_secs(5),
    );
}
