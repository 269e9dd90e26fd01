use std::collections::HashSet;

use bsrinf::abelian::{self, AbHom, FinAbGroup};
use bsrinf::gcgroup::{phi_matrix, BsParams};
use bsrinf::intlinalg::IntMatrix;
use num_bigint::BigInt;
use proptest::prelude::*;

fn factors(fs: &[u64]) -> FinAbGroup {
    FinAbGroup::from_factors(&fs.iter().map(|&f| BigInt::from(f)).collect::<Vec<_>>()).unwrap()
}

fn small_groups() -> Vec<FinAbGroup> {
    [
        vec![1],
        vec![2],
        vec![8],
        vec![2, 2],
        vec![2, 4],
        vec![3, 3],
        vec![2, 2, 2],
        vec![2, 8],
        vec![4, 4],
        vec![6, 10],
        vec![2, 3, 4],
    ]
    .iter()
    .map(|f| factors(f))
    .collect()
}

proptest! {
    #[test]
    fn group_axioms(gi in 0usize..11, x in 0u64..1000, y in 0u64..1000, z in 0u64..1000) {
        let g = &small_groups()[gi];
        let n = g.order_u64().unwrap();
        let (x, y, z) = (g.element_at(x % n).unwrap(), g.element_at(y % n).unwrap(), g.element_at(z % n).unwrap());
        let xy_z = g.add(&g.add(&x, &y).unwrap(), &z).unwrap();
        let x_yz = g.add(&x, &g.add(&y, &z).unwrap()).unwrap();
        prop_assert_eq!(xy_z, x_yz);
        prop_assert_eq!(g.add(&x, &g.zero()).unwrap(), x.clone());
        prop_assert!(g.add(&x, &g.neg(&x).unwrap()).unwrap().is_zero());
        prop_assert_eq!(g.add(&x, &y).unwrap(), g.add(&y, &x).unwrap());
    }

    /// Quotients by random nonsingular relation matrices behave as groups
    /// and the projection respects the relations.
    #[test]
    fn quotient_by_random_relations(entries in prop::collection::vec(-6i64..=6, 9), v in prop::collection::vec(-20i64..=20, 3)) {
        let rel = IntMatrix::new(3, 3, entries.into_iter().map(BigInt::from).collect()).unwrap();
        let det = bsrinf::intlinalg::determinant(&rel).unwrap();
        prop_assume!(det != BigInt::from(0));
        let g = FinAbGroup::from_relation_matrix(&rel).unwrap();
        prop_assert_eq!(g.order(), &num_traits::Signed::abs(&det));
        for j in 0..3 {
            prop_assert!(g.project(&rel.column(j)).unwrap().is_zero());
        }
        let v: Vec<BigInt> = v.into_iter().map(BigInt::from).collect();
        let x = g.project(&v).unwrap();
        prop_assert_eq!(g.project(&g.lift(&x).unwrap()).unwrap(), x);
    }

    #[test]
    fn cokernel_times_image_is_order(gi in 0usize..11, entries in prop::collection::vec(0i64..12, 9)) {
        let g = &small_groups()[gi];
        let k = g.rank();
        let data: Vec<BigInt> = entries[..k * k].iter().map(|&e| BigInt::from(e)).collect();
        let h = match AbHom::from_matrix(g, g, &IntMatrix::new(k, k, data).unwrap()) {
            Ok(h) => h,
            Err(_) => return Ok(()),
        };
        let image: HashSet<_> = g.elements().unwrap().map(|x| h.apply(&x).unwrap()).collect();
        prop_assert_eq!(h.cokernel_order().unwrap() * BigInt::from(image.len()), g.order().clone());
    }
}

#[test]
fn relation_matrix_orders_and_shapes() {
    for m in 1i64..=6 {
        for n in (-8i64..=8).filter(|&n| n != 0 && n.abs() >= m && n != m) {
            let p = BsParams::new(m, n).unwrap();
            let q = BigInt::from(p.diff().abs() / p.d);
            for c in 1..=4 {
                let g = FinAbGroup::from_relation_matrix(&phi_matrix(m, n, c)).unwrap();
                assert_eq!(g.order(), &num_traits::pow(BigInt::from(p.diff().abs()), c));
                let d = BigInt::from(p.d);
                let mut want = vec![d.clone(); c - 1];
                want.push(d * num_traits::pow(q.clone(), c));
                want.retain(|f| *f != BigInt::from(1));
                assert_eq!(g.invariant_factors(), want.as_slice(), "m={m} n={n} c={c}");
            }
        }
    }
}

/// Counts bijective endomorphisms by trying every tuple of basis images
/// and enumerating the image set.
fn brute_force_automorphism_count(g: &FinAbGroup) -> usize {
    let k = g.rank();
    let elems: Vec<_> = g.elements().unwrap().collect();
    let n = elems.len();
    let mut count = 0;
    let mut idx = vec![0usize; k];
    loop {
        let mut data = vec![BigInt::from(0); k * k];
        for (j, &e) in idx.iter().enumerate() {
            for i in 0..k {
                data[i * k + j] = elems[e].coords()[i].clone();
            }
        }
        if let Ok(h) = AbHom::from_matrix(g, g, &IntMatrix::new(k, k, data).unwrap()) {
            let image: HashSet<_> = elems.iter().map(|x| h.apply(x).unwrap()).collect();
            if image.len() == n {
                count += 1;
            }
        }
        let mut pos = 0;
        loop {
            if pos == k {
                return count;
            }
            idx[pos] += 1;
            if idx[pos] < n {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

#[test]
fn automorphism_enumeration_is_exact() {
    for g in small_groups().into_iter().filter(|g| g.order_u64().unwrap() <= 64 && !g.is_trivial()) {
        let autos: Vec<_> = abelian::enumerate_automorphisms(&g, 1 << 20).unwrap().collect();
        for h in &autos {
            assert!(h.is_automorphism().unwrap());
        }
        let distinct: HashSet<_> = autos.iter().map(|h| h.matrix().entries().to_vec()).collect();
        assert_eq!(distinct.len(), autos.len());
        assert_eq!(autos.len(), brute_force_automorphism_count(&g), "{g:?}");
    }
    assert_eq!(abelian::enumerate_automorphisms(&factors(&[2, 2, 2]), 1 << 20).unwrap().count(), 168);
    assert_eq!(abelian::enumerate_automorphisms(&factors(&[2, 4]), 1 << 20).unwrap().count(), 8);
}

#[test]
fn inverse_round_trips() {
    let g = factors(&[2, 8]);
    for h in abelian::enumerate_automorphisms(&g, 1 << 20).unwrap() {
        let inv = h.inverse().unwrap();
        assert_eq!(h.compose(&inv).unwrap(), AbHom::identity(&g));
        assert_eq!(inv.compose(&h).unwrap(), AbHom::identity(&g));
    }
}
