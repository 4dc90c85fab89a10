use arcat::qcm::{
    check_inverse, default_truncation, invert_series, pairing_euler, pairing_n, quantum_cartan,
    three_way,
};
use arcat::{FoldedCartan, FoldedType, QCategory, QDatum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn datum(name: &str) -> QDatum {
    QDatum::standard_for(name.parse().unwrap()).unwrap()
}

#[test]
fn g2_agrees_for_both_triality_foldings() {
    for name in ["D4^3", "D4^3'"] {
        let q = datum(name);
        assert_eq!(q.folded_type().to_string(), "G2");
        assert_eq!((q.r(), q.h_dual()), (3, 4));
        let rows = three_way(&q, default_truncation(q.folded_type())).unwrap();
        let bad: Vec<_> = rows.iter().filter(|r| !r.agree()).collect();
        assert!(bad.is_empty(), "{name}: {bad:?}");
        assert!(rows.iter().any(|r| r.cat.is_some_and(|c| c != 0)));
    }
}

#[test]
fn simply_laced_d4_and_e6() {
    for name in ["D4", "E6"] {
        let q = datum(name);
        let rows = three_way(&q, 2 * q.h_dual()).unwrap();
        assert!(rows.iter().all(|r| r.agree()), "{name}");
        // every pair is admissible when r = 1, so only parity leaves gaps
        let odd: Vec<_> = rows
            .iter()
            .filter(|r| r.cat.is_some() != ((r.u + q.xi_of(r.i) + q.xi_of(r.j)).rem_euclid(2) == 1))
            .take(4)
            .collect();
        assert!(odd.is_empty(), "{name} {:?} {odd:?}", q.xi());
    }
}

#[test]
fn closed_formula_is_independent_of_the_datum() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for ty in ["B3", "C3", "F4"] {
        let base = QDatum::standard(ty.parse().unwrap()).unwrap();
        let u = 2 * base.rh();
        let reference: Vec<i64> = three_way(&base, u).unwrap().iter().map(|r| r.fo).collect();
        for _ in 0..3 {
            let q = base.random_walk(&mut rng, 9);
            let rows = three_way(&q, u).unwrap();
            assert!(rows.iter().all(|r| r.agree()), "{ty}");
            assert_eq!(
                rows.iter().map(|r| r.fo).collect::<Vec<_>>(),
                reference,
                "{ty}"
            );
        }
    }
}

#[test]
fn series_is_a_one_sided_inverse_for_every_type() {
    for ty in ["A1", "A4", "B4", "C4", "D5", "E6", "E7", "E8", "F4", "G2"] {
        let ty: FoldedType = ty.parse().unwrap();
        let c = quantum_cartan(&FoldedCartan::new(ty).unwrap());
        let s = invert_series(&c, 2 * ty.r() * ty.h_dual()).unwrap();
        assert!(check_inverse(&c, &s), "{ty}");
    }
}

#[test]
fn series_is_anti_periodic() {
    // c̃_ij(u + rh^∨) = −c̃_ij*(u), and * is trivial for these types
    for ty in ["B3", "C3", "F4", "G2", "E7"] {
        let ty: FoldedType = ty.parse().unwrap();
        let fc = FoldedCartan::new(ty).unwrap();
        let rh = ty.r() * ty.h_dual();
        let s = invert_series(&quantum_cartan(&fc), 3 * rh).unwrap();
        for i in 0..fc.rank() {
            for j in 0..fc.rank() {
                for u in 1..2 * rh {
                    assert_eq!(
                        s.get(i, j, u + rh),
                        s.get(i, j, u).map(|x| -x),
                        "{ty} ({i},{j}) at {u}"
                    );
                }
            }
        }
    }
}

#[test]
fn pairing_matches_symmetrized_euler_form() {
    for ty in ["B3", "C3", "G2", "D4"] {
        let q = QDatum::standard(ty.parse().unwrap()).unwrap();
        let fc = FoldedCartan::new(q.folded_type()).unwrap();
        let qc = QCategory::new(q.clone());
        let span = 2 * q.rh();
        let s = invert_series(&quantum_cartan(&fc), 2 * span + 4).unwrap();
        let verts: Vec<(usize, i64)> = qc
            .window(1 - qc.category().n(), 2 * qc.category().n())
            .into_iter()
            .map(|x| q.fold(x))
            .map(|y| (fc.reps.iter().position(|&r| r == y.orbit).unwrap(), y.p))
            .collect();
        let mut checked = 0;
        for &a in &verts {
            assert_eq!(pairing_n(&s, &fc, a, a).unwrap(), 0);
            for &b in &verts {
                if a == b || b.1 < a.1 || b.1 - a.1 > span {
                    continue;
                }
                assert_eq!(
                    pairing_n(&s, &fc, a, b).unwrap(),
                    pairing_euler(&qc, &fc, a, b).unwrap(),
                    "{ty} {a:?} {b:?}"
                );
                checked += 1;
            }
        }
        assert!(checked > 50, "{ty}: {checked}");
    }
}

#[test]
fn pairing_is_skew_symmetric() {
    let fc = FoldedCartan::new("B3".parse().unwrap()).unwrap();
    let s = invert_series(&quantum_cartan(&fc), 40).unwrap();
    for i in 0..fc.rank() {
        for j in 0..fc.rank() {
            for p in 0..8 {
                for t in 0..8 {
                    let a = pairing_n(&s, &fc, (i, p), (j, t)).unwrap();
                    let b = pairing_n(&s, &fc, (j, t), (i, p)).unwrap();
                    assert_eq!(a, -b, "({i},{p}) ({j},{t})");
                }
            }
        }
    }
}
