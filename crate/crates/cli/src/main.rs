use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use mqd::almost_split::almost_split_sequence;
use mqd::decompose::{is_isomorphic, sum_of};
use mqd::determined::{auslander_bijection_check, construct_determined, galois_adjunction_check};
use mqd::gamma::GammaModule;
use mqd::grass::{beilinson_injective, compare_realization, grassmannian_points, point_of, variety_points, VarietySpec};
use mqd::hom::{end_ring, hom_basis};
use mqd::lattice::{compare_with_reference, ReferencePoset, SubmoduleLattice};
use mqd::minimal::minimal_presentation;
use mqd::universe::{build_universe, Universe};
use mqd::workspace::{Workspace, WorkspaceFile};
use mqd::{Error, Matrix, Module, Morphism, Polynomial, Subspace};

const DEFAULT_UNIVERSE_DIM: usize = 4;

#[derive(Parser)]
#[command(name = "mqd", version, about = "Morphisms determined by objects over quiver algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a workspace file
    Check { file: PathBuf },
    /// Basis of Hom(M, N)
    Hom { file: PathBuf, m: String, n: String },
    /// Endomorphism ring of M
    End {
        file: PathBuf,
        m: String,
        #[arg(long)]
        radical: bool,
    },
    /// Indecomposables reachable from simples, projectives and injectives
    Universe {
        file: PathBuf,
        #[arg(long)]
        dim: usize,
        /// Emit the universe as a workspace file
        #[arg(long)]
        json: bool,
    },
    /// Submodule lattice as JSON (default) or DOT
    Lattice {
        file: PathBuf,
        #[arg(long, conflicts_with = "hom")]
        module: Option<String>,
        #[arg(long, value_enum, default_value = "lambda", requires = "module")]
        mode: ModeArg,
        /// Γ-submodules of Hom(C, Y); C may be a comma-separated list
        #[arg(long, num_args = 2, value_names = ["C", "Y"])]
        hom: Option<Vec<String>>,
        #[arg(long, conflicts_with = "json")]
        dot: bool,
        #[arg(long)]
        json: bool,
    },
    /// Construct α_{C,H} and its certificate
    Determined {
        file: PathBuf,
        /// Module name, or a comma-separated list (empty for no objects)
        #[arg(long, allow_hyphen_values = true)]
        c: String,
        #[arg(long)]
        y: String,
        /// Generators of H in Hom(C, Y) coordinates, e.g. "1,0;0,1"
        #[arg(long, allow_hyphen_values = true)]
        h: String,
        #[arg(long)]
        universe_dim: Option<usize>,
    },
    /// Almost split sequence ending in Z
    AlmostSplit {
        file: PathBuf,
        z: String,
        #[arg(long)]
        universe_dim: Option<usize>,
    },
    /// Round trip H -> α_{C,H} -> H and the factorization adjunction
    CheckBijection {
        file: PathBuf,
        #[arg(long)]
        c: String,
        #[arg(long)]
        y: String,
        #[arg(long)]
        universe_dim: Option<usize>,
    },
    /// Varieties from quiver Grassmannians of Beilinson algebras
    Beilinson {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: usize,
        #[arg(long = "poly")]
        polys: Vec<String>,
        #[arg(long)]
        q: u32,
        #[arg(long)]
        json: bool,
        #[arg(value_enum)]
        action: BeilinsonAction,
    },
    /// Minimal presentation of a morphism given as SRC:TGT:c0,c1,...
    Minimal {
        file: PathBuf,
        #[arg(long)]
        morphism: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Lambda,
    EndStable,
    Forgetful,
}

#[derive(Clone, Copy, ValueEnum)]
enum BeilinsonAction {
    Grassmann,
    Variety,
    Compare,
}

/// Printed output plus whether every check passed.
struct Outcome {
    out: String,
    verified: bool,
}

impl Outcome {
    fn ok(out: String) -> Self {
        Outcome { out, verified: true }
    }
}

fn input(msg: String) -> Error {
    Error::Input(msg)
}

fn matrix_str(m: &Matrix) -> String {
    let rows: Vec<String> = m
        .row_vecs()
        .iter()
        .map(|r| format!("[{}]", r.iter().map(u32::to_string).collect::<Vec<_>>().join(",")))
        .collect();
    format!("[{}]", rows.join(","))
}

fn morphism_str(f: &Morphism, indent: &str) -> String {
    let names = f.source().algebra().quiver().vertices();
    let mut s = String::new();
    for (v, b) in f.blocks().iter().enumerate() {
        let _ = writeln!(s, "{indent}{}: {}", names[v], matrix_str(b));
    }
    s
}

fn dims_str(m: &Module) -> String {
    format!("({})", m.dims().iter().map(usize::to_string).collect::<Vec<_>>().join(","))
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn pass(b: bool) -> &'static str {
    if b {
        "pass"
    } else {
        "FAIL"
    }
}

fn point_str(x: &[u32]) -> String {
    format!("({})", x.iter().map(u32::to_string).collect::<Vec<_>>().join(":"))
}

fn modules_named(ws: &Workspace, list: &str) -> Result<Vec<Module>, Error> {
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|n| ws.module(n).cloned())
        .collect()
}

/// `"1,0;0,1"` as vectors of length `dim`; blank means none.
fn parse_vectors(src: &str, dim: usize, field: mqd::PrimeField) -> Result<Vec<Vec<u32>>, Error> {
    let mut out = Vec::new();
    for row in src.split(';').map(str::trim).filter(|r| !r.is_empty()) {
        let v = row
            .split(',')
            .map(|x| x.trim().parse::<i64>().map(|c| field.elem(c)))
            .collect::<Result<Vec<u32>, _>>()
            .map_err(|e| input(format!("bad vector {row:?}: {e}")))?;
        if v.len() != dim {
            return Err(input(format!("vector {row:?} has {} entries, Hom(C, Y) has dimension {dim}", v.len())));
        }
        out.push(v);
    }
    Ok(out)
}

fn universe_for(ws: &Workspace, dim: Option<usize>) -> Result<Universe, Error> {
    let d = dim.or(ws.options.universe_dim).unwrap_or(DEFAULT_UNIVERSE_DIM);
    build_universe(&ws.alg, d)
}

fn universe_line(u: &Universe) -> String {
    format!(
        "universe: {} indecomposables up to dimension {}, {}\n",
        u.len(),
        u.dim_bound(),
        if u.is_complete() { "complete" } else { "truncated" }
    )
}

fn run(cli: Cli) -> Result<Outcome, Error> {
    match cli.command {
        Command::Check { file } => {
            let ws = Workspace::from_path(&file)?;
            let a = &ws.alg;
            let mut s = format!(
                "field: GF({})\nalgebra: {} vertices, {} arrows, {} relations, dimension {}, nilpotency cap {}\n",
                a.field().p(),
                a.num_vertices(),
                a.quiver().arrows().len(),
                a.relations().len(),
                a.dim(),
                a.cap()
            );
            for (name, m) in &ws.modules {
                let _ = writeln!(s, "module {name}: dims {}", dims_str(m));
            }
            s.push_str("ok\n");
            Ok(Outcome::ok(s))
        }
        Command::Hom { file, m, n } => {
            let ws = Workspace::from_path(&file)?;
            let h = hom_basis(ws.module(&m)?, ws.module(&n)?)?;
            let mut s = format!("dim Hom({m}, {n}) = {}\n", h.dim());
            for (i, f) in h.basis().iter().enumerate() {
                let _ = writeln!(s, "basis {i}:");
                s.push_str(&morphism_str(f, "  "));
            }
            Ok(Outcome::ok(s))
        }
        Command::End { file, m, radical } => {
            let ws = Workspace::from_path(&file)?;
            let e = end_ring(ws.module(&m)?)?;
            let rad = e.radical()?;
            let mut s = format!("dim End({m}) = {}\nlocal: {}\n", e.ring.dim(), yes(e.is_local()?));
            if radical {
                let _ = writeln!(s, "dim rad End({m}) = {}", rad.dim());
                for (i, v) in rad.basis_vecs().iter().enumerate() {
                    let _ = writeln!(s, "radical basis {i}:");
                    s.push_str(&morphism_str(&e.morphism(v), "  "));
                }
            }
            Ok(Outcome::ok(s))
        }
        Command::Universe { file, dim, json } => {
            let ws = Workspace::from_path(&file)?;
            let u = build_universe(&ws.alg, dim)?;
            if json {
                return Ok(Outcome::ok(WorkspaceFile::from_universe(&u).to_json()));
            }
            let mut s = universe_line(&u);
            for (i, (m, how)) in u.modules().iter().zip(u.provenance()).enumerate() {
                let _ = writeln!(s, "U{i}: dims {} ({how})", dims_str(m));
            }
            Ok(Outcome::ok(s))
        }
        Command::Lattice {
            file,
            module,
            mode,
            hom,
            dot,
            json: _,
        } => {
            let ws = Workspace::from_path(&file)?;
            let lat = match (&module, &hom) {
                (Some(name), None) => {
                    let m = ws.module(name)?;
                    let lat = match mode {
                        ModeArg::Lambda => SubmoduleLattice::lambda(m)?,
                        ModeArg::EndStable => SubmoduleLattice::end_stable(m)?,
                        ModeArg::Forgetful => SubmoduleLattice::forgetful(m)?,
                    };
                    if matches!(mode, ModeArg::Lambda) {
                        advisory(&ws, m, &lat)?;
                    }
                    lat
                }
                (None, Some(cy)) => {
                    let gm = GammaModule::new(&modules_named(&ws, &cy[0])?, ws.module(&cy[1])?)?;
                    SubmoduleLattice::gamma(&gm)?
                }
                _ => return Err(input("give either --module M or --hom C Y".into())),
            };
            if dot {
                Ok(Outcome::ok(lat.to_dot()))
            } else {
                let js = serde_json::to_string_pretty(&lat.to_dump()).expect("lattice serializes");
                Ok(Outcome::ok(js + "\n"))
            }
        }
        Command::Determined {
            file,
            c,
            y,
            h,
            universe_dim,
        } => {
            let ws = Workspace::from_path(&file)?;
            let cs = modules_named(&ws, &c)?;
            let ym = ws.module(&y)?;
            let gm = GammaModule::new(&cs, ym)?;
            let vecs = parse_vectors(&h, gm.dim(), ym.field())?;
            let hs = Subspace::from_vectors(ym.field(), gm.dim(), &vecs)?;
            if !gm.is_stable(&hs)? {
                return Err(input(format!("H = [{}] is not a Γ-submodule of Hom(C, {y})", hs.label())));
            }
            let u = universe_for(&ws, universe_dim)?;
            let r = construct_determined(&gm, &hs, &u)?;
            let mut s = format!(
                "C: {} (dims {})\nY: {y} (dims {})\nH: dimension {} in Hom(C, Y) of dimension {}\n",
                if c.trim().is_empty() { "(none)" } else { c.trim() },
                dims_str(gm.c()),
                dims_str(ym),
                hs.dim(),
                gm.dim()
            );
            s.push_str(&universe_line(&u));
            let _ = writeln!(s, "alpha: source dims {}, zero morphism: {}", dims_str(r.alpha.source()), yes(r.alpha.is_zero()));
            s.push_str(&morphism_str(&r.alpha, "  "));
            let _ = writeln!(s, "image check: {}", pass(r.image_check));
            let enumerated = match r.reduction.enumerated {
                Some(true) => "pass",
                Some(false) => "FAIL",
                None => "skipped",
            };
            let _ = writeln!(s, "minimality: {} (enumeration {enumerated})", pass(r.minimal_check));
            let good = r.witnesses.iter().filter(|w| w.phi.is_some()).count();
            let _ = writeln!(s, "universality: {good}/{} witnesses factor", r.witnesses.len());
            if let Some(w) = r.witnesses.iter().find(|w| w.phi.is_none()) {
                let _ = writeln!(s, "counterexample from universe member U{}:", w.member);
                s.push_str(&morphism_str(&w.beta, "  "));
            }
            let _ = writeln!(s, "truncation: {}", r.truncation());
            let _ = writeln!(s, "verdict: {}", if r.verified() { "VERIFIED" } else { "FAILED" });
            Ok(Outcome {
                out: s,
                verified: r.verified(),
            })
        }
        Command::AlmostSplit { file, z, universe_dim } => {
            let ws = Workspace::from_path(&file)?;
            let zm = ws.module(&z)?;
            let u = universe_for(&ws, universe_dim)?;
            let seq = almost_split_sequence(zm, &u)?;
            let mut s = universe_line(&u);
            let _ = writeln!(
                s,
                "0 -> X {} -> Y {} -> {z} {} -> 0",
                dims_str(seq.iota.source()),
                dims_str(seq.pi.source()),
                dims_str(zm)
            );
            s.push_str("iota:\n");
            s.push_str(&morphism_str(&seq.iota, "  "));
            s.push_str("pi:\n");
            s.push_str(&morphism_str(&seq.pi, "  "));
            let _ = writeln!(s, "short exact: {}", pass(seq.short_exact));
            let _ = writeln!(s, "non-split: {}", pass(!seq.split));
            let _ = writeln!(s, "right almost split: {}", pass(seq.right.verified()));
            let _ = writeln!(s, "left almost split: {}", pass(seq.left_almost_split));
            let _ = writeln!(
                s,
                "End/rad: X order {}, Z order {}, isomorphic fields: {}",
                seq.ends.x.order,
                seq.ends.z.order,
                yes(seq.ends.isomorphic)
            );
            let _ = writeln!(s, "verdict: {}", if seq.verified() { "VERIFIED" } else { "FAILED" });
            Ok(Outcome {
                out: s,
                verified: seq.verified(),
            })
        }
        Command::CheckBijection { file, c, y, universe_dim } => {
            let ws = Workspace::from_path(&file)?;
            let cs = modules_named(&ws, &c)?;
            let ym = ws.module(&y)?;
            let u = universe_for(&ws, universe_dim)?;
            let mut s = universe_line(&u);
            let lat = SubmoduleLattice::gamma(&GammaModule::new(&cs, ym)?)?;
            let _ = writeln!(s, "Γ-submodules of Hom(C, Y): {}", lat.len());
            let b = auslander_bijection_check(&cs, ym, &u)?;
            let g = galois_adjunction_check(&cs, ym, &u)?;
            let mut verified = true;
            for (name, rep) in [("bijection", &b), ("adjunction", &g)] {
                let _ = writeln!(s, "{name}: {} checks, {} failures", rep.checked, rep.failures.len());
                for f in &rep.failures {
                    let _ = writeln!(s, "  counterexample: {f}");
                }
                verified &= rep.passed();
            }
            let _ = writeln!(s, "verdict: {}", if verified { "VERIFIED" } else { "FAILED" });
            Ok(Outcome { out: s, verified })
        }
        Command::Beilinson {
            n,
            p,
            polys,
            q,
            json,
            action,
        } => {
            let polys = polys.iter().map(|e| Polynomial::parse(e)).collect::<Result<Vec<_>, _>>()?;
            let spec = VarietySpec::new(n, p, polys, q)?;
            beilinson(&spec, action, json)
        }
        Command::Minimal { file, morphism } => {
            let ws = Workspace::from_path(&file)?;
            let parts: Vec<&str> = morphism.splitn(3, ':').collect();
            let [src, tgt, coeffs] = parts[..] else {
                return Err(input(format!("morphism {morphism:?} is not of the form SRC:TGT:c0,c1,...")));
            };
            let h = hom_basis(ws.module(src)?, ws.module(tgt)?)?;
            let field = h.source().field();
            let c = parse_vectors(coeffs, h.dim(), field)?;
            let beta = match c.first() {
                Some(v) => h.combine(v),
                None => Morphism::zero(h.source(), h.target()),
            };
            let mp = minimal_presentation(&beta)?;
            let mut s = format!("beta: {src} -> {tgt}\n");
            s.push_str(&morphism_str(&beta, "  "));
            let _ = writeln!(
                s,
                "right-minimal part: source dims {}, split-off summand dims {}, certified: {}",
                dims_str(mp.beta.alpha.source()),
                dims_str(mp.beta.null_inclusion.source()),
                yes(mp.beta.certified)
            );
            s.push_str(&morphism_str(&mp.beta.alpha, "  "));
            let _ = writeln!(
                s,
                "minimal weak kernel: source dims {}, certified: {}",
                dims_str(mp.kappa.alpha.source()),
                yes(mp.kappa.certified)
            );
            s.push_str(&morphism_str(&mp.kappa.alpha, "  "));
            let u = universe_for(&ws, None)?;
            let exact = mp.exact_over(&u)?;
            let complex = mp.is_complex()?;
            s.push_str(&universe_line(&u));
            let _ = writeln!(s, "complex: {}\nexact over universe: {}", pass(complex), pass(exact));
            let verified = complex && exact && mp.beta.certified && mp.kappa.certified;
            let _ = writeln!(s, "verdict: {}", if verified { "VERIFIED" } else { "FAILED" });
            Ok(Outcome { out: s, verified })
        }
    }
}

/// Notes on stderr when `m` is `F2[ε] ⊕ F2` over the dual numbers.
fn advisory(ws: &Workspace, m: &Module, lat: &SubmoduleLattice) -> Result<(), Error> {
    let a = &ws.alg;
    if a.field().p() != 2 || a.num_vertices() != 1 || a.quiver().arrows().len() != 1 || a.dim() != 2 {
        return Ok(());
    }
    let c = sum_of(a, &[Module::regular(a)?, Module::simple(a, 0)?])?;
    if is_isomorphic(m, &c)?.is_none() {
        return Ok(());
    }
    let cmp = compare_with_reference(lat, &ReferencePoset::dual_numbers_figure())?;
    eprintln!("advisory: comparison with the 7-node figure: {}", cmp.summary());
    let end = SubmoduleLattice::end_stable(m)?;
    let fg = SubmoduleLattice::forgetful(m)?;
    eprintln!("advisory: end-stable reading has {} elements; forgetful reading has {}", end.len(), fg.len());
    Ok(())
}

fn beilinson(spec: &VarietySpec, action: BeilinsonAction, json: bool) -> Result<Outcome, Error> {
    match action {
        BeilinsonAction::Grassmann => {
            let m = beilinson_injective(spec)?;
            let g = grassmannian_points(&m, &vec![1; m.dims().len()])?;
            let mut pts: Vec<Vec<u32>> = g.points.iter().filter_map(|s| point_of(spec, s)).collect();
            pts.sort();
            if json {
                let v = serde_json::json!({"module_dims": m.dims(), "count": g.count, "points": pts});
                return Ok(Outcome::ok(serde_json::to_string_pretty(&v).expect("json") + "\n"));
            }
            let mut s = format!("I(0) dims {}\ngrassmannian points: {}\n", dims_str(&m), g.count);
            for p in &pts {
                let _ = writeln!(s, "  {}", point_str(p));
            }
            Ok(Outcome::ok(s))
        }
        BeilinsonAction::Variety => {
            let pts = variety_points(spec)?;
            if json {
                let v = serde_json::json!({"count": pts.len(), "points": pts});
                return Ok(Outcome::ok(serde_json::to_string_pretty(&v).expect("json") + "\n"));
            }
            let mut s = format!("variety points: {}\n", pts.len());
            for p in &pts {
                let _ = writeln!(s, "  {}", point_str(p));
            }
            Ok(Outcome::ok(s))
        }
        BeilinsonAction::Compare => {
            let r = compare_realization(spec)?;
            let ok = r.counts_match() && r.points_match();
            if json {
                let mut v = serde_json::to_value(&r).expect("json");
                v["match"] = ok.into();
                return Ok(Outcome {
                    out: serde_json::to_string_pretty(&v).expect("json") + "\n",
                    verified: ok,
                });
            }
            let mut s = format!(
                "I(0) dims ({})\ngrassmannian: {}\nvariety: {}\n",
                r.module_dims.iter().map(usize::to_string).collect::<Vec<_>>().join(","),
                r.grassmannian_count,
                r.variety_count
            );
            if ok {
                let _ = writeln!(s, "MATCH {}", r.variety_count);
            } else {
                let _ = writeln!(s, "MISMATCH {} {}", r.grassmannian_count, r.variety_count);
            }
            Ok(Outcome { out: s, verified: ok })
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::CapExceeded(_) => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(o) => {
            print!("{}", o.out);
            if o.verified {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
