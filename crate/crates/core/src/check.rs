//! Seeded invariant suites, one per module, for the `check` command.
//!
//! Every suite derives its own generator from the seed and the suite name,
//! so suites can run concurrently and still report identically.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cats::{Category, QCategory};
use crate::commclass::{random_longest_word, CommClass};
use crate::error::{Error, Result};
use crate::preproj::{layers, Orientation};
use crate::qcm::{check_inverse, invert_series, quantum_cartan, three_way, FoldedCartan};
use crate::qdatum::{validate, QDatum};
use crate::rootsys::{FoldedType, RootSystem, Weight};

/// Which suites to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Scope {
    All,
    Rootsys,
    Commclass,
    Qdatum,
    Preproj,
    Cats,
    Qcm,
}

impl Scope {
    pub const MODULES: [Scope; 6] = [
        Scope::Rootsys,
        Scope::Commclass,
        Scope::Qdatum,
        Scope::Preproj,
        Scope::Cats,
        Scope::Qcm,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scope::All => "all",
            Scope::Rootsys => "rootsys",
            Scope::Commclass => "commclass",
            Scope::Qdatum => "qdatum",
            Scope::Preproj => "preproj",
            Scope::Cats => "cats",
            Scope::Qcm => "qcm",
        }
    }

    /// The module scopes covered by `self`.
    pub fn expand(self) -> Vec<Scope> {
        match self {
            Scope::All => Self::MODULES.to_vec(),
            s => vec![s],
        }
    }
}

impl fmt::Display for Scope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scope {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        std::iter::once(Scope::All)
            .chain(Self::MODULES)
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown scope '{s}'")))
    }
}

/// Outcome of one suite: how many cases ran and the first failure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub scope: Scope,
    pub cases: usize,
    pub failure: Option<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

type Outcome = std::result::Result<usize, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rng_for(seed: u64, scope: Scope) -> ChaCha8Rng {
    let salt = scope
        .name()
        .bytes()
        .fold(0u64, |h, b| h.wrapping_mul(131).wrapping_add(b as u64));
    ChaCha8Rng::seed_from_u64(seed ^ salt)
}

fn rs(s: &str) -> Arc<RootSystem> {
    Arc::new(RootSystem::parse(s).expect("built-in diagram"))
}

fn standard(ty: &str) -> QDatum {
    QDatum::standard(ty.parse::<FoldedType>().expect("built-in type")).expect("standard datum")
}

fn random_class(r: &Arc<RootSystem>, rng: &mut ChaCha8Rng) -> CommClass {
    CommClass::new(r, &random_longest_word(r, rng)).expect("random longest words are reduced")
}

/// Runs one module scope.
pub fn run(scope: Scope, seed: u64) -> SuiteReport {
    let mut rng = rng_for(seed, scope);
    let out = match scope {
        Scope::All => unreachable!("expand `all` before running"),
        Scope::Rootsys => rootsys_suite(),
        Scope::Commclass => commclass_suite(&mut rng),
        Scope::Qdatum => qdatum_suite(&mut rng),
        Scope::Preproj => preproj_suite(&mut rng),
        Scope::Cats => cats_suite(&mut rng),
        Scope::Qcm => qcm_suite(&mut rng),
    };
    match out {
        Ok(cases) => SuiteReport {
            scope,
            cases,
            failure: None,
        },
        Err(e) => SuiteReport {
            scope,
            cases: 0,
            failure: Some(e),
        },
    }
}

/// Runs every module in `scope` on its own thread, reporting in a fixed
/// order.
pub fn run_all(scope: Scope, seed: u64) -> Vec<SuiteReport> {
    std::thread::scope(|s| {
        let handles: Vec<_> = scope
            .expand()
            .into_iter()
            .map(|m| s.spawn(move || run(m, seed)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("suite thread panicked"))
            .collect()
    })
}

fn rootsys_suite() -> Outcome {
    let mut cases = 0;
    let sizes = [
        ("A1", 1),
        ("A4", 10),
        ("D4", 12),
        ("D5", 20),
        ("E6", 36),
        ("E7", 63),
        ("E8", 120),
    ];
    for (ty, npos) in sizes {
        let r = rs(ty);
        ensure(r.n_pos() == npos, || {
            format!("{ty}: {} positive roots", r.n_pos())
        })?;
        let w0 = r.longest_word();
        ensure(r.inversion_count(w0) == npos, || {
            format!("{ty}: longest word {w0:?}")
        })?;
        for v in r.diagram().vertices() {
            let img = r.apply_word(w0, &r.fundamental(v));
            ensure(img == -&r.fundamental(r.star(v)), || {
                format!("{ty}: w0 on fundamental weight {v}")
            })?;
            ensure(r.star(r.star(v)) == v, || format!("{ty}: star at {v}"))?;
            for b in r.positive_roots() {
                let c = r.reflect(v, &r.reflect(v, b));
                ensure(&c == b, || format!("{ty}: s_{v}^2 on {:?}", b.0))?;
            }
            cases += 1;
        }
    }
    Ok(cases)
}

fn commclass_suite(rng: &mut ChaCha8Rng) -> Outcome {
    let mut cases = 0;
    for ty in ["A3", "A4", "D4", "A5", "D5"] {
        let r = rs(ty);
        for _ in 0..8 {
            let c = random_class(&r, rng);
            let label = || format!("{ty} {:?}", c.canon());
            let mut roots: Vec<Weight> = c.roots().to_vec();
            roots.sort();
            roots.dedup();
            ensure(roots.len() == r.n_pos(), || {
                format!("{}: repeated roots", label())
            })?;
            let n = c.n();
            for k in 1 - n..=2 * n {
                ensure(c.index_of(&c.coord(k)) == Ok(k), || {
                    format!("{}: index {k}", label())
                })?;
            }
            for v in r.diagram().vertices() {
                if c.is_source(v) {
                    let back = c.reflect(v).and_then(|m| m.reflect_inv(v));
                    ensure(back.as_ref() == Ok(&c), || {
                        format!("{}: reflection at {v}", label())
                    })?;
                }
                let f = c.frieze_basis(v, 1 - n, 3 * n as usize);
                ensure(c.is_additive_frieze(&f) == Ok(true), || {
                    format!("{}: frieze {v}", label())
                })?;
                ensure((1 - n..=n).all(|k| f.at(k + n) == -f.at(k)), || {
                    format!("{}: frieze {v} not anti-periodic", label())
                })?;
            }
            cases += 1;
        }
    }
    Ok(cases)
}

fn qdatum_suite(rng: &mut ChaCha8Rng) -> Outcome {
    let mut cases = 0;
    for ty in ["A3", "D4", "B2", "B3", "C3", "F4", "G2"] {
        let base = standard(ty);
        for steps in [0, 5, 11] {
            let q = base.random_walk(rng, steps);
            let label = || format!("{} xi={:?}", q.diagram(), q.xi());
            let v = validate(q.diagram(), q.xi()).map_err(|e| e.to_string())?;
            ensure(v.ok, || format!("{}: {:?}", label(), v.failures))?;
            ensure(q.tau().pow(2 * q.rh() as u64).is_identity(), || {
                format!("{}: τ order", label())
            })?;
            for x in q.gamma_vertices() {
                let a = q.phi(x).map_err(|e| format!("{}: {e}", label()))?;
                let b = q
                    .phi_recursive(x)
                    .map_err(|e| format!("{}: {e}", label()))?;
                ensure(a == b, || format!("{}: φ at {x}", label()))?;
                ensure(q.psi(x).as_ref() == Ok(&a.root), || {
                    format!("{}: ψ at {x}", label())
                })?;
                ensure(q.g_additive_check(x) == Ok(true), || {
                    format!("{}: additivity at {x}", label())
                })?;
                cases += 1;
            }
        }
    }
    Ok(cases)
}

fn preproj_suite(rng: &mut ChaCha8Rng) -> Outcome {
    let mut cases = 0;
    for ty in ["A3", "A4", "D4", "A5"] {
        let r = rs(ty);
        let o = Orientation::base(r.diagram());
        for _ in 0..10 {
            let w = random_longest_word(&r, rng);
            let beta = r.beta_roots(&w).roots;
            let ms = layers(&o, &w).map_err(|e| format!("{ty} {w:?}: {e}"))?;
            for (k, m) in ms.iter().enumerate() {
                ensure(m.check_relations(&o), || {
                    format!("{ty} {w:?} layer {}: relations", k + 1)
                })?;
                ensure(m.dim_vector(&r) == beta[k], || {
                    format!("{ty} {w:?} layer {}: dimension vector", k + 1)
                })?;
                cases += 1;
            }
        }
    }
    Ok(cases)
}

fn cats_suite(rng: &mut ChaCha8Rng) -> Outcome {
    let mut cases = 0;
    let mut classes: Vec<(String, CommClass)> = ["B2", "C3", "G2"]
        .iter()
        .map(|ty| (ty.to_string(), standard(ty).class().clone()))
        .collect();
    for ty in ["A3", "A4", "D4"] {
        let r = rs(ty);
        for _ in 0..3 {
            let c = random_class(&r, rng);
            classes.push((format!("{ty} {:?}", c.canon()), c));
        }
    }
    for (label, c) in classes {
        let cat = Category::new(c.clone());
        let n = cat.n();
        for a in 1 - n..=2 * n {
            for b in 1 - n..=2 * n {
                ensure(cat.symmetrization_holds(a, b), || {
                    format!("{label}: symmetrization at ({a},{b})")
                })?;
                cases += 1;
            }
        }
        for k in 1 - n..=n {
            let rep = cat
                .verify_mesh_triangles(k)
                .map_err(|e| format!("{label} mesh {k}: {e}"))?;
            ensure(rep.ok(), || {
                format!("{label}: mesh triangle at {k}: {rep:?}")
            })?;
        }
        let g = cat.gabriel_quiver().map_err(|e| format!("{label}: {e}"))?;
        let mut ar = c.ar_quiver();
        ar.sort_unstable();
        ensure(g.without_superfluous() == ar, || {
            format!("{label}: Gabriel quiver")
        })?;
    }
    for ty in ["B2", "C3", "G2"] {
        let q = standard(ty);
        let qc = QCategory::new(q.clone());
        let n = q.class().n();
        let window = qc.window(1 - n, 2 * n);
        for m in qc.gamma_objects().into_iter().filter(|m| q.d(m.v) == q.r()) {
            for &x in &window {
                let (l, r) = qc.serre_duality(m, x).map_err(|e| e.to_string())?;
                ensure(l == r, || {
                    format!("{ty}: Serre duality M={m} N={x}: {l} vs {r}")
                })?;
                cases += 1;
            }
        }
    }
    Ok(cases)
}

fn qcm_suite(rng: &mut ChaCha8Rng) -> Outcome {
    let mut cases = 0;
    for ty in ["A2", "A3", "B2", "B3", "C3", "G2", "D4"] {
        let q = standard(ty).random_walk(rng, 7);
        let ft = q.folded_type();
        let umax = 2 * q.rh();
        let rows = three_way(&q, umax).map_err(|e| format!("{ty}: {e}"))?;
        if let Some(bad) = rows.iter().find(|r| !r.agree()) {
            return Err(format!("{ty} xi={:?}: {bad:?}", q.xi()));
        }
        let c = quantum_cartan(&FoldedCartan::new(ft).map_err(|e| e.to_string())?);
        let s = invert_series(&c, umax).map_err(|e| e.to_string())?;
        ensure(check_inverse(&c, &s), || format!("{ty}: C·C̃ ≠ I"))?;
        cases += rows.len();
    }
    Ok(cases)
}
