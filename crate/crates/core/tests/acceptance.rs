//! Acceptance suite: one pass/fail line per criterion, with runtime
//! budgets. Exits nonzero if any criterion fails.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use arcat::commclass::{all_classes, random_longest_word};
use arcat::linalg::{q, Matrix};
use arcat::preproj::layers;
use arcat::qcm::{
    check_inverse, ctilde_fo, default_truncation, invert_series, quantum_cartan, three_way,
};
use arcat::qdatum::gamma_to_upsilon;
use arcat::{
    Category, CommClass, FoldedCartan, FoldedType, HatVertex, LatticeMap, Orientation, QCategory,
    QDatum, RootSystem,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Check = std::result::Result<String, String>;
type Criterion = (&'static str, fn() -> Check, Duration);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rs(s: &str) -> Arc<RootSystem> {
    Arc::new(RootSystem::parse(s).expect("valid diagram"))
}

fn qd(diagram: &str, xi: &[i64]) -> QDatum {
    QDatum::from_diagram(diagram.parse().expect("diagram"), xi.to_vec()).expect("valid Q-datum")
}

fn standard(ty: &str) -> QDatum {
    QDatum::standard(ty.parse::<FoldedType>().expect("type")).expect("standard datum")
}

fn random_class(r: &Arc<RootSystem>, rng: &mut ChaCha8Rng) -> CommClass {
    CommClass::new(r, &random_longest_word(r, rng)).expect("random longest words are reduced")
}

fn coords(r: &RootSystem, w: &arcat::Weight) -> Vec<i64> {
    r.root_coords(w).expect("root lattice")
}

fn a3_fixture() -> Check {
    let r = rs("A3");
    let c = CommClass::new(&r, &[3, 2, 1, 2, 3, 2]).map_err(|e| e.to_string())?;
    let roots: Vec<Vec<i64>> = c.roots().iter().map(|x| coords(&r, x)).collect();
    let want = vec![
        vec![0, 0, 1],
        vec![0, 1, 1],
        vec![1, 1, 1],
        vec![1, 0, 0],
        vec![1, 1, 0],
        vec![0, 1, 0],
    ];
    ensure(roots == want, || format!("roots {roots:?}"))?;
    let residues: Vec<usize> = (1..=6).map(|k| c.letter(k)).collect();
    ensure(residues == [3, 2, 1, 2, 3, 2], || {
        format!("residues {residues:?}")
    })?;
    let inj: BTreeSet<Vec<i64>> = (1..=3)
        .map(|v| coords(&r, &c.root_at(c.injective_index(v))))
        .collect();
    let proj: BTreeSet<Vec<i64>> = (1..=3)
        .map(|v| coords(&r, &c.root_at(c.projective_index(v))))
        .collect();
    ensure(
        inj == BTreeSet::from([vec![1, 1, 1], vec![0, 1, 1], vec![0, 0, 1]]),
        || format!("injectives {inj:?}"),
    )?;
    ensure(
        proj == BTreeSet::from([vec![1, 1, 0], vec![0, 1, 0], vec![1, 1, 1]]),
        || format!("projectives {proj:?}"),
    )?;
    Ok("roots, residues, 3 injectives, 3 projectives".into())
}

fn b3_fixture() -> Check {
    let q2 = qd("A5^2", &[2, 4, 5, 6, 8]);
    let r = q2.root_system().clone();
    ensure(q2.sources() == [5] && q2.sinks() == [1, 3], || {
        format!("sources {:?} sinks {:?}", q2.sources(), q2.sinks())
    })?;
    ensure(q2.projective_vertex(3) == HatVertex::new(3, -3), || {
        "projective at 3".into()
    })?;
    ensure(q2.projective_vertex(1) == HatVertex::new(5, -4), || {
        "projective at 1".into()
    })?;
    let w = [5, 4, 3, 2, 5, 3, 1, 4, 3, 2, 5, 3, 4, 3, 5];
    let cw = CommClass::new(&r, &w).map_err(|e| e.to_string())?;
    ensure(&cw == q2.class(), || {
        "word not in the class of the datum".into()
    })?;
    gamma_to_upsilon(&q2).map_err(|e| e.to_string())?;
    let mut walk = q2.clone();
    for &v in &w {
        walk = walk.reflect(v).map_err(|e| format!("step {v}: {e}"))?;
    }
    ensure(
        q2.psi(HatVertex::new(3, 3)).ok() == Some(r.simple_root(2)),
        || "psi(3,3)".into(),
    )?;
    let tau = LatticeMap::word(&r, &[1, 5, 4, 3])
        .compose(&LatticeMap::sigma(q2.diagram()))
        .compose(&LatticeMap::reflection(&r, 1));
    ensure(q2.tau() == &tau, || {
        "tau differs from s1 s5 s4 s3 σ s1".into()
    })?;
    ensure(q2.tau().order(100) == Some(10), || "tau order".into())?;
    ensure(q2.tau_pow(5) == &LatticeMap::identity(5).neg(), || {
        "tau^5 != -1".into()
    })?;
    Ok("validity, sources/sinks, projectives, source sequence, psi, tau".into())
}

fn layer_law() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut words = 0;
    let mut modules = 0;
    for ty in ["A3", "A4", "D4", "A5"] {
        let r = rs(ty);
        let o = Orientation::base(r.diagram());
        for _ in 0..50 {
            let w = random_longest_word(&r, &mut rng);
            let beta = r.beta_roots(&w).roots;
            let ms = layers(&o, &w).map_err(|e| format!("{ty} {w:?}: {e}"))?;
            for (k, m) in ms.iter().enumerate() {
                ensure(m.check_relations(&o), || {
                    format!("{ty} {w:?} layer {}: relations", k + 1)
                })?;
                ensure(m.dim_vector(&r) == beta[k], || {
                    format!("{ty} {w:?} layer {}: dimension vector", k + 1)
                })?;
            }
            words += 1;
            modules += ms.len();
        }
    }
    Ok(format!("{words} words, {modules} layer modules"))
}

fn symmetrization_on(cat: &Category, label: &str) -> std::result::Result<usize, String> {
    let n = cat.n();
    let mut pairs = 0;
    for a in 1 - n..=2 * n {
        for b in 1 - n..=2 * n {
            ensure(cat.symmetrization_holds(a, b), || {
                format!("{label}: indices ({a},{b})")
            })?;
            pairs += 1;
        }
    }
    Ok(pairs)
}

fn euler_symmetrization() -> Check {
    let mut pairs = 0;
    for ty in ["B3", "B2", "C3"] {
        pairs += symmetrization_on(&Category::new(standard(ty).class().clone()), ty)?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for ty in ["A4", "D4"] {
        let c = random_class(&rs(ty), &mut rng);
        pairs += symmetrization_on(&Category::new(c), ty)?;
    }
    Ok(format!("{pairs} ordered pairs"))
}

fn b2_euler() -> Check {
    let qc = QCategory::new(qd("A3^2", &[3, 4, 5]));
    let s2 = HatVertex::new(2, 0);
    let vals: Vec<i64> = [
        HatVertex::new(2, 2),
        HatVertex::new(1, 3),
        HatVertex::new(2, 4),
    ]
    .iter()
    .map(|&x| qc.euler(x, s2))
    .collect::<arcat::Result<_>>()
    .map_err(|e| e.to_string())?;
    ensure(vals == [-1, 0, 0], || format!("values {vals:?}"))?;
    let cat = qc.category();
    let mut rows = Vec::new();
    for a in 1..=cat.n() {
        rows.push((1..=cat.n()).map(|b| q(cat.euler(a, b).euler)).collect());
    }
    let m = Matrix::from_rows(rows, cat.n() as usize);
    ensure(m.rank() == 6, || {
        format!("Euler matrix has rank {}", m.rank())
    })?;
    Ok("values -1, 0, 0; 6x6 Euler matrix invertible".into())
}

fn meshes_on(cat: &Category, label: &str) -> std::result::Result<usize, String> {
    let n = cat.n();
    for k in 1 - n..=n {
        let rep = cat
            .verify_mesh_triangles(k)
            .map_err(|e| format!("{label} mesh {k}: {e}"))?;
        ensure(rep.ok(), || format!("{label} mesh {k}: {rep:?}"))?;
    }
    Ok(2 * n as usize)
}

fn additivity() -> Check {
    let mut meshes = 0;
    let q2 = qd("A5^2", &[2, 4, 5, 6, 8]);
    ensure(
        q2.g_additive_check(HatVertex::new(4, 6)) == Ok(true),
        || "B3 mesh at (4,6)".into(),
    )?;
    let qc = QCategory::new(q2.clone());
    let k = qc.index(HatVertex::new(4, 6)).map_err(|e| e.to_string())?;
    let rep = qc
        .category()
        .verify_mesh_triangles(k)
        .map_err(|e| e.to_string())?;
    ensure(rep.ok(), || format!("B3 mesh triangles at (4,6): {rep:?}"))?;
    for ty in ["B2", "B3", "C3", "G2", "F4", "A4", "D4"] {
        let q = standard(ty);
        let n = q.class().n();
        for k in 1 - n..=n {
            let x = q.vertex_of_index(k);
            ensure(q.g_additive_check(x) == Ok(true), || {
                format!("{ty}: additivity at {x}")
            })?;
        }
        meshes += meshes_on(&Category::new(q.class().clone()), ty)?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for ty in ["A3", "A4", "D4"] {
        let r = rs(ty);
        for _ in 0..17 {
            meshes += meshes_on(&Category::new(random_class(&r, &mut rng)), ty)?;
        }
    }
    Ok(format!("{meshes} meshes"))
}

fn gabriel() -> Check {
    let mut classes = all_classes(&rs("A3"), 1000).ok_or("A3 class enumeration overflowed")?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let d4 = rs("D4");
    classes.extend((0..10).map(|_| random_class(&d4, &mut rng)));
    for c in &classes {
        let cat = Category::new(c.clone());
        let g = cat.gabriel_quiver().map_err(|e| e.to_string())?;
        let mut ar = c.ar_quiver();
        ar.sort_unstable();
        ensure(g.without_superfluous() == ar, || {
            format!("class {:?}", c.canon())
        })?;
    }
    Ok(format!("{} classes", classes.len()))
}

fn serre() -> Check {
    let mut checks = 0;
    let mut nonzero = 0;
    for ty in ["B2", "B3", "C3", "G2"] {
        let q = standard(ty);
        let qc = QCategory::new(q.clone());
        let n = q.class().n();
        let window = qc.window(1 - n, 2 * n);
        for m in qc.gamma_objects().into_iter().filter(|m| q.d(m.v) == q.r()) {
            for &x in &window {
                let (l, r) = qc.serre_duality(m, x).map_err(|e| e.to_string())?;
                ensure(l == r, || format!("{ty}: M={m} N={x}: {l} vs {r}"))?;
                checks += 1;
                nonzero += (l > 0) as usize;
            }
        }
    }
    for ty in ["B2", "B3", "B4"] {
        let q = standard(ty);
        let qc = QCategory::new(q.clone());
        let objs: Vec<HatVertex> = qc
            .gamma_objects()
            .into_iter()
            .filter(|m| q.d(m.v) == 1)
            .collect();
        for &m in &objs {
            for &x in &objs {
                let (l, r) = qc.serre_prime_duality(m, x).map_err(|e| e.to_string())?;
                ensure(l == r, || format!("{ty} S': M={m} N={x}: {l} vs {r}"))?;
                checks += 1;
                nonzero += (l > 0) as usize;
            }
        }
    }
    Ok(format!("{checks} dimension equalities, {nonzero} nonzero"))
}

fn quantum_cartan_agreement() -> Check {
    let mut rows = 0;
    let mut cat_rows = 0;
    let mut nonzero = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for ty in ["A2", "A3", "B2", "B3", "C3", "G2", "F4"] {
        let ft: FoldedType = ty.parse().map_err(|e: arcat::Error| e.to_string())?;
        let q = QDatum::standard(ft).map_err(|e| e.to_string())?;
        let umax = 2 * ft.r() * ft.h_dual();
        let table = three_way(&q, umax).map_err(|e| format!("{ty}: {e}"))?;
        if let Some(bad) = table.iter().find(|r| !r.agree()) {
            return Err(format!("{ty}: {bad:?}"));
        }
        ensure(table.iter().any(|r| r.cat.is_some()), || {
            format!("{ty}: no categorical rows")
        })?;
        rows += table.len();
        cat_rows += table.iter().filter(|r| r.cat.is_some()).count();
        nonzero += table.iter().filter(|r| r.oracle != 0).count();
        let fc = FoldedCartan::new(ft).map_err(|e| e.to_string())?;
        let moved = q.random_walk(&mut rng, 12);
        for i in 0..fc.rank() {
            for j in 0..fc.rank() {
                for u in 0..=umax {
                    let a = ctilde_fo(&q, &fc, i, j, u).map_err(|e| e.to_string())?;
                    let b = ctilde_fo(&moved, &fc, i, j, u).map_err(|e| e.to_string())?;
                    ensure(a == b, || {
                        format!("{ty}: datum dependence at ({i},{j},{u})")
                    })?;
                }
            }
        }
        let c = quantum_cartan(&fc);
        let s = invert_series(&c, default_truncation(ft)).map_err(|e| e.to_string())?;
        ensure(check_inverse(&c, &s), || format!("{ty}: C·C̃ ≠ I"))?;
    }
    let a1 = FoldedCartan::new("A1".parse().expect("A1")).map_err(|e| e.to_string())?;
    let s = invert_series(&quantum_cartan(&a1), 6).map_err(|e| e.to_string())?;
    let v: Vec<Option<i64>> = [1, 3, 5].iter().map(|&u| s.get(0, 0, u)).collect();
    ensure(v == [Some(1), Some(-1), Some(1)], || {
        format!("A1 values {v:?}")
    })?;
    Ok(format!(
        "{rows} rows over 7 types, {nonzero} nonzero, {cat_rows} with the categorical value"
    ))
}

fn friezes() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut classes = 0;
    for ty in ["A3", "A4", "D4", "A5"] {
        let r = rs(ty);
        for _ in 0..20 {
            let c = random_class(&r, &mut rng);
            let n = c.n();
            for v in r.diagram().vertices() {
                let f = c.frieze_basis(v, 1 - n, 3 * n as usize);
                ensure(c.is_additive_frieze(&f) == Ok(true), || {
                    format!("{ty} {:?}: frieze {v}", c.canon())
                })?;
                for k in 1 - n..=n {
                    ensure(f.at(k + n) == -f.at(k), || {
                        format!("{ty}: anti-periodicity at {k}")
                    })?;
                }
            }
            let (_, m) = c.injective_matrix();
            for (a, row) in m.iter().enumerate() {
                for (b, &x) in row.iter().enumerate() {
                    let want_zero = a > b;
                    ensure(!(want_zero && x != 0) && (a != b || x == 1), || {
                        format!("{ty}: injective matrix {m:?}")
                    })?;
                }
            }
            classes += 1;
        }
    }
    Ok(format!("{classes} classes"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("A3 fixture", a3_fixture, Duration::from_secs(1)),
        ("B3 fixture", b3_fixture, Duration::from_secs(1)),
        (
            "layer modules: relations and dimension vectors",
            layer_law,
            Duration::from_secs(60),
        ),
        (
            "Euler form symmetrization",
            euler_symmetrization,
            Duration::from_secs(120),
        ),
        (
            "B2 Euler values and invertibility",
            b2_euler,
            Duration::from_secs(1),
        ),
        (
            "generalized additivity and mesh triangles",
            additivity,
            Duration::from_secs(60),
        ),
        (
            "Gabriel quiver minus superfluous arrows",
            gabriel,
            Duration::from_secs(120),
        ),
        ("partial Serre duality", serre, Duration::from_secs(120)),
        (
            "inverse quantum Cartan three-way agreement",
            quantum_cartan_agreement,
            Duration::from_secs(300),
        ),
        ("frieze suite", friezes, Duration::from_secs(30)),
    ];
    let mut failed = 0;
    for (n, (name, run, budget)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let res = run();
        let dt = t.elapsed();
        let (ok, detail) = match res {
            Ok(s) if dt <= *budget => (true, s),
            Ok(s) => (false, format!("{s}; over budget {budget:?}")),
            Err(e) => (false, e),
        };
        failed += !ok as usize;
        println!(
            "[{}] {:>2} {name}: {detail} ({:.2}s)",
            if ok { "PASS" } else { "FAIL" },
            n + 1,
            dt.as_secs_f64()
        );
    }
    println!(
        "{} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
