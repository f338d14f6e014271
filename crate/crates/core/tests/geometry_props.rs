mod common;

use common::{random_scheme, Rng};
use srr_core::codebook::StorageScheme;
use srr_core::galois::Fe;
use srr_core::geometry::{hyperplane_bounds, outer_polytope, point_multiset};
use srr_core::rational::{int, Rational};
use srr_core::recovery::enumerate_recovery_sets;
use srr_core::region::ServiceRegion;

fn directions(rng: &mut Rng, k: usize, count: usize) -> Vec<Vec<Rational>> {
    (0..count).map(|_| (0..k).map(|_| int(rng.below(6) as i128 - 1)).collect()).collect()
}

#[test]
fn outer_bound_contains_exact_region() {
    let mut rng = Rng::new(21);
    for c in 0..40 {
        let s = random_scheme(&mut rng, [2, 3, 4][c % 3], 2 + c % 2, 7);
        let cat = enumerate_recovery_sets(&s).unwrap();
        let exact = ServiceRegion::new(cat.clone(), int(1)).unwrap();
        for counting in [false, true] {
            let outer = outer_polytope(&s, counting.then_some(&cat), int(1)).unwrap();
            for d in directions(&mut rng, s.k(), 32) {
                let o = outer.support(&d).unwrap();
                let e = exact.support(&d).unwrap();
                assert!(o >= e, "case {c}: {:?} direction {d:?}: outer {o} < exact {e}", s.columns());
            }
        }
    }
}

#[test]
fn bounds_ignore_column_scaling() {
    let mut rng = Rng::new(22);
    for c in 0..20 {
        let s = random_scheme(&mut rng, [3, 4, 5][c % 3], 2 + c % 2, 6);
        let f = s.field().clone();
        let q = f.order() as u64;
        let cols: Vec<Vec<Fe>> = s
            .columns()
            .iter()
            .map(|col| {
                let a = Fe(1 + rng.below(q - 1) as u32);
                col.iter().map(|&x| f.mul(x, a)).collect()
            })
            .collect();
        let t = StorageScheme::with_field(f, s.k(), cols, s.mu()).unwrap();
        assert_eq!(point_multiset(&s).unwrap(), point_multiset(&t).unwrap());
        assert_eq!(hyperplane_bounds(&s, int(1)).unwrap(), hyperplane_bounds(&t, int(1)).unwrap());
    }
}
