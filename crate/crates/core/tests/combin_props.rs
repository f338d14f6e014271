mod common;

use common::{random_scheme, Rng};
use srr_core::codebook::{make_mds, make_replication, make_simplex, StorageScheme};
use srr_core::combin::{
    achievable_via_matching, build_graph, fractional_matching_number, integral_achievable, is_bipartite, matching_number, vertex_cover_number, GraphMode,
};
use srr_core::galois::FieldSpec;
use srr_core::rational::{int, Rational};
use srr_core::recovery::enumerate_recovery_sets;
use srr_core::region::ServiceRegion;

fn fixtures() -> Vec<StorageScheme> {
    let mut out = vec![
        make_simplex(2, int(1)).unwrap(),
        make_simplex(3, int(1)).unwrap(),
        make_replication(2, &[2, 2], int(1)).unwrap(),
        make_replication(3, &[1, 2, 3], int(1)).unwrap(),
        make_mds(4, 2, &FieldSpec::prime(3).unwrap(), true, int(1)).unwrap(),
    ];
    let mut rng = Rng::new(31);
    for c in 0..50 {
        out.push(random_scheme(&mut rng, [2, 3][c % 2], 2 + c % 2, 6));
    }
    out
}

#[test]
fn sandwich_and_koenig() {
    for s in fixtures() {
        let cat = enumerate_recovery_sets(&s).unwrap();
        for mode in [GraphMode::PairsOnly, GraphMode::Full] {
            let g = build_graph(&s, &cat, mode);
            if g.vertex_count() > 24 {
                continue;
            }
            let nu = matching_number(&g).unwrap();
            let nuf = fractional_matching_number(&g).unwrap();
            let tau = vertex_cover_number(&g).unwrap();
            assert!(int(nu as i128) <= nuf && nuf <= int(tau as i128), "{:?}", s.columns());
            if mode == GraphMode::PairsOnly && is_bipartite(&g).unwrap() {
                assert_eq!((int(nu as i128), nuf), (int(tau as i128), int(tau as i128)));
            }
        }
    }
}

#[test]
fn pair_graph_cover_bounds_total_demand() {
    for s in fixtures() {
        let cat = enumerate_recovery_sets(&s).unwrap();
        let g = build_graph(&s, &cat, GraphMode::PairsOnly);
        if g.vertex_count() > 24 || cat.all().any(|r| r.size() > 2) {
            continue;
        }
        let r = ServiceRegion::new(cat, int(1)).unwrap();
        let ones = vec![int(1); s.k()];
        assert!(r.support(&ones).unwrap() <= int(vertex_cover_number(&g).unwrap() as i128));
    }
}

#[test]
fn matching_lp_equals_region_lp() {
    let mut rng = Rng::new(8);
    for (c, s) in fixtures().into_iter().enumerate() {
        let cat = enumerate_recovery_sets(&s).unwrap();
        let g = build_graph(&s, &cat, GraphMode::Full);
        let r = ServiceRegion::new(cat, int(1)).unwrap();
        for _ in 0..4 {
            let d: Vec<Rational> = (0..s.k()).map(|_| rng.rational(int(4), 4)).collect();
            let a = achievable_via_matching(&g, int(1), &d).unwrap().is_some();
            assert_eq!(a, r.is_achievable(&d).unwrap().is_some(), "case {c} {d:?}");
        }
    }
}

#[test]
fn integral_witnesses_are_fractional_witnesses() {
    let mut rng = Rng::new(9);
    let mut candidates = 0;
    for s in fixtures() {
        let cat = enumerate_recovery_sets(&s).unwrap();
        let r = ServiceRegion::new(cat.clone(), int(1)).unwrap();
        for _ in 0..3 {
            let d: Vec<Rational> = (0..s.k()).map(|_| int(rng.below(3) as i128)).collect();
            let frac = r.is_achievable(&d).unwrap().is_some();
            match integral_achievable(&cat, int(1), &d).unwrap() {
                Some(w) => {
                    w.validate(&cat, &d, int(1)).unwrap();
                    assert!(frac);
                }
                None if frac => {
                    candidates += 1;
                    eprintln!("integer point {d:?} is fractionally but not integrally achievable for {:?}", s.columns());
                }
                None => {}
            }
        }
    }
    eprintln!("{candidates} integer points without an integral allocation");
}
