use la_nodal::corpus::{build_corpus, default_exponents, EntryKind};
use la_nodal::monotonicity::Parity;
use la_nodal::poly::ratio_to_f64;
use std::collections::BTreeSet;

#[test]
fn names_are_unique_and_points_are_zeros() {
    for a in default_exponents() {
        let corpus = build_corpus(&a, 6).unwrap();
        let names: BTreeSet<_> = corpus.iter().map(|e| e.name.clone()).collect();
        assert_eq!(names.len(), corpus.len());
        for e in corpus.iter().filter(|e| e.exact().is_some()) {
            let u = e.exact().unwrap();
            for p in e.resolved_points().unwrap() {
                let scale = 1.0 + p.center.iter().map(|c| c.abs()).sum::<f64>();
                assert!(la_nodal::field::Field::value(u, &p.center).abs() < 1e-10 * scale.powi(6), "{} at {:?}", e.name, p.center);
            }
        }
    }
}

#[test]
fn homogeneous_entries_scale() {
    for a in default_exponents() {
        for e in build_corpus(&a, 6).unwrap().into_iter().filter(|e| e.kind == EntryKind::Homogeneous) {
            let k = e.homogeneity.unwrap();
            let u = e.exact().unwrap();
            let x: Vec<f64> = (0..=e.n).map(|i| 0.3 + 0.21 * i as f64).collect();
            let x2: Vec<f64> = x.iter().map(|c| 2.0 * c).collect();
            let (v1, v2) = (la_nodal::field::Field::value(u, &x), la_nodal::field::Field::value(u, &x2));
            assert!((v2 - 2f64.powf(k) * v1).abs() < 1e-10 * v2.abs().max(1.0), "{}", e.name);
        }
    }
}

#[test]
fn ground_truth_orders_lie_on_their_lattice() {
    for a in default_exponents() {
        let af = ratio_to_f64(&a);
        for e in build_corpus(&a, 6).unwrap() {
            for p in &e.points {
                let on_sigma = p.center.last() == Some(&0.0);
                if !on_sigma {
                    continue;
                }
                let off = match p.order_parity {
                    Parity::Symmetric => 0.0,
                    Parity::Antisymmetric => 1.0 - af,
                    Parity::Mixed => panic!("{}: the order of a field has one lattice", e.name),
                };
                let r = (p.order - off).rem_euclid(1.0);
                assert!(r < 1e-12 || r > 1.0 - 1e-12, "{}: order {} off lattice", e.name, p.order);
            }
        }
    }
}

#[test]
fn every_kind_is_represented() {
    let corpus = build_corpus(&default_exponents()[0], 6).unwrap();
    for kind in [EntryKind::Homogeneous, EntryKind::Composite, EntryKind::Solver, EntryKind::OneDimensional] {
        assert!(corpus.iter().any(|e| e.kind == kind), "{kind:?}");
    }
}
