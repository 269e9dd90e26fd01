use bsrinf::intlinalg::{self, IntMatrix};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn matrix(max_dim: usize, max_entry: i64) -> impl Strategy<Value = IntMatrix> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(move |(r, c)| {
        prop::collection::vec(-max_entry..=max_entry, r * c).prop_map(move |v| {
            IntMatrix::new(r, c, v.into_iter().map(BigInt::from).collect()).unwrap()
        })
    })
}

fn square(max_dim: usize, max_entry: i64) -> impl Strategy<Value = IntMatrix> {
    (1..=max_dim).prop_flat_map(move |n| {
        prop::collection::vec(-max_entry..=max_entry, n * n)
            .prop_map(move |v| IntMatrix::new(n, n, v.into_iter().map(BigInt::from).collect()).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn snf_is_a_valid_decomposition(a in matrix(6, 50)) {
        let s = intlinalg::snf(&a).unwrap();
        prop_assert_eq!(s.u.mul(&a).unwrap().mul(&s.v).unwrap(), s.d.clone());
        prop_assert!(s.u.is_unimodular());
        prop_assert!(s.v.is_unimodular());
        prop_assert_eq!(s.u.mul(&s.u_inv).unwrap(), IntMatrix::identity(a.rows()));
        prop_assert_eq!(s.v_inv.mul(&s.v).unwrap(), IntMatrix::identity(a.cols()));
        prop_assert!(s.d.is_diagonal());
        for w in s.divisors.windows(2) {
            prop_assert!(!w[0].is_negative());
            if w[0].is_zero() {
                prop_assert!(w[1].is_zero());
            } else {
                prop_assert!(w[1].is_multiple_of(&w[0]));
            }
        }
        if a.is_square() {
            let det = intlinalg::determinant(&a).unwrap();
            prop_assert_eq!(det.abs(), s.divisors.iter().product::<BigInt>());
        }
    }

    #[test]
    fn rank_matches_zero_divisors(a in matrix(5, 3)) {
        let s = intlinalg::snf(&a).unwrap();
        let t = intlinalg::snf(&a.transpose()).unwrap();
        prop_assert_eq!(&s.divisors, &t.divisors);
        prop_assert_eq!(s.rank(), t.rank());
    }

    /// Cramer's rule gives the unique rational solution of a nonsingular
    /// system; the lattice solver must agree on integrality and value.
    #[test]
    fn lattice_solve_matches_cramer(a in square(4, 9), v in prop::collection::vec(-30i64..=30, 4)) {
        let n = a.rows();
        let v: Vec<BigInt> = v[..n].iter().map(|&x| BigInt::from(x)).collect();
        let det = intlinalg::determinant(&a).unwrap();
        prop_assume!(!det.is_zero());
        let mut cramer = Vec::with_capacity(n);
        let mut integral = true;
        for i in 0..n {
            let mut ai = a.clone();
            for r in 0..n {
                ai[(r, i)] = v[r].clone();
            }
            let (q, rem) = intlinalg::determinant(&ai).unwrap().div_rem(&det);
            integral &= rem.is_zero();
            cramer.push(q);
        }
        let solved = intlinalg::solve_in_lattice(&a, &v).unwrap();
        prop_assert_eq!(solved.is_some(), integral);
        if let Some(x) = solved {
            prop_assert_eq!(a.mul_vec(&x).unwrap(), v.clone());
            prop_assert_eq!(x, cramer);
        }
    }

    #[test]
    fn lattice_solve_finds_planted_solutions(a in matrix(4, 6), x0 in prop::collection::vec(-5i64..=5, 4)) {
        let x0: Vec<BigInt> = x0[..a.cols()].iter().map(|&x| BigInt::from(x)).collect();
        let v = a.mul_vec(&x0).unwrap();
        let x = intlinalg::solve_in_lattice(&a, &v).unwrap();
        prop_assert!(x.is_some());
        prop_assert_eq!(a.mul_vec(&x.unwrap()).unwrap(), v);
    }
}

/// Membership in the column lattice of a small singular or rectangular
/// matrix, decided by exhausting a box of coefficient vectors.
#[test]
fn lattice_solve_matches_box_search() {
    let cases = [
        IntMatrix::from_rows(&[[2, 4], [1, 2]]),
        IntMatrix::from_rows(&[[2, 0, 3], [0, 2, 1]]),
        IntMatrix::from_rows(&[[3], [6]]),
        IntMatrix::from_rows(&[[4, 6], [2, 8]]),
    ];
    const B: i64 = 12;
    for a in &cases {
        for v0 in -4i64..=4 {
            for v1 in -4i64..=4 {
                let v = [BigInt::from(v0), BigInt::from(v1)];
                let solved = intlinalg::solve_in_lattice(a, &v).unwrap();
                let mut found = false;
                let cols = a.cols();
                let mut x = vec![-B; cols];
                'outer: loop {
                    let xb: Vec<BigInt> = x.iter().map(|&t| BigInt::from(t)).collect();
                    if a.mul_vec(&xb).unwrap() == v {
                        found = true;
                        break;
                    }
                    for i in 0..cols {
                        x[i] += 1;
                        if x[i] <= B {
                            continue 'outer;
                        }
                        x[i] = -B;
                    }
                    break;
                }
                assert_eq!(solved.is_some(), found, "{a:?} v = ({v0}, {v1})");
                if let Some(x) = solved {
                    assert_eq!(a.mul_vec(&x).unwrap(), v.to_vec());
                }
            }
        }
    }
}

#[test]
fn bidiagonal_closed_form_sweep() {
    for a in (-12i64..=12).filter(|x| x.abs() >= 2) {
        for b in (-12i64..=12).filter(|x| x.abs() >= 2 && x.gcd(&a) == 1) {
            let (ab, bb) = (BigInt::from(a), BigInt::from(b));
            for n in 1..=6 {
                for k in 1..=3 {
                    let m = intlinalg::bidiagonal_matrix(&ab, &bb, n, k);
                    let want = intlinalg::bidiagonal_snf_closed_form(&ab, &bb, n, k).unwrap();
                    assert_eq!(intlinalg::snf(&m).unwrap().divisors, want, "a={a} b={b} n={n} k={k}");
                }
            }
        }
    }
}

#[test]
fn closed_form_rejects_common_factors() {
    let r = intlinalg::bidiagonal_snf_closed_form(&BigInt::from(4), &BigInt::from(6), 3, 1);
    assert!(matches!(r, Err(bsrinf::Error::NonCoprimeInput { .. })));
}
