use num_bigint::BigInt;
use num_traits::One;
use proptest::prelude::*;
use reinhardt::intmat::IntMatrix;
use reinhardt::lattice::{common_fixed_vector, complete_to_slnz, factorization_holds, is_unimodular, quotient_action};
use reinhardt::{Error, IntVector};

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn unimodular(n: usize) -> impl Strategy<Value = IntVector> {
    prop::collection::vec(-1_000_000i64..=1_000_000, n).prop_filter_map("content 1", |v| {
        (v.iter().fold(0, |g, &x| gcd(g, x)) == 1).then(|| IntVector::from_i64s(&v))
    })
}

/// `M · diag(1, B) · M^{-1}` fixes the first column of `M`.
fn fixing_matrix(v: &IntVector, block: &IntMatrix, top: &[i64]) -> IntMatrix {
    let n = v.len();
    let m = complete_to_slnz(v).unwrap();
    let mut inner = IntMatrix::identity(n);
    for i in 1..n {
        inner[(0, i)] = BigInt::from(top[i - 1]);
        for j in 1..n {
            inner[(i, j)] = block[(i - 1, j - 1)].clone();
        }
    }
    &(&m * &inner) * &m.inverse_gl().unwrap()
}

fn block(n: usize) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec((0..n, 0..n, -2i64..=2), 0..6).prop_map(move |ops| {
        ops.iter().fold(IntMatrix::identity(n), |acc, &(i, j, k)| {
            let mut e = IntMatrix::identity(n);
            if i != j {
                e[(i, j)] = BigInt::from(k);
            }
            &acc * &e
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn completion_has_det_one_and_first_column_v(v in (2usize..=5).prop_flat_map(unimodular)) {
        let m = complete_to_slnz(&v).unwrap();
        prop_assert_eq!(m.det(), BigInt::one());
        prop_assert_eq!(m.column(0), v.0);
    }

    #[test]
    fn quotient_factorization_is_exact(
        (v, b, top) in (3usize..=4).prop_flat_map(|n| (unimodular(n), block(n - 1), prop::collection::vec(-3i64..=3, n - 1)))
    ) {
        let a = fixing_matrix(&v, &b, &top);
        prop_assert_eq!(a.mul_vec(&v.0), v.0.clone());
        let q = quotient_action(&a, &v).unwrap();
        prop_assert!(factorization_holds(&a, &q));
        prop_assert_eq!(q.charpoly(), b.charpoly());
    }

    #[test]
    fn common_fixed_vector_is_fixed(
        (v, b1, b2) in (3usize..=4).prop_flat_map(|n| (unimodular(n), block(n - 1), block(n - 1)))
    ) {
        let n = v.len();
        let g1 = fixing_matrix(&v, &b1, &vec![1; n - 1]);
        let g2 = fixing_matrix(&v, &b2, &vec![0; n - 1]);
        let w = common_fixed_vector(&[g1.clone(), g2.clone()]).unwrap().expect("v is fixed");
        prop_assert!(is_unimodular(&w).unwrap());
        prop_assert_eq!(g1.mul_vec(&w.0), w.0.clone());
        prop_assert_eq!(g2.mul_vec(&w.0), w.0.clone());
    }
}

#[test]
fn rejects_bad_vectors() {
    assert_eq!(complete_to_slnz(&IntVector::from_i64s(&[2, 4])), Err(Error::NotUnimodular("2".into())));
    assert_eq!(is_unimodular(&IntVector::from_i64s(&[0, 0])), Err(Error::ZeroVector));
    let a = IntMatrix::from_i64(&[&[2, 1], &[1, 1]]);
    assert_eq!(quotient_action(&a, &IntVector::from_i64s(&[1, 0])), Err(Error::NotFixed));
}

#[test]
fn vectors_accept_numbers_and_strings() {
    let a: IntVector = serde_json::from_str(r#"[3, "5", -7]"#).unwrap();
    assert_eq!(a, IntVector::from_i64s(&[3, 5, -7]));
    let back: IntVector = serde_json::from_str(&serde_json::to_string(&a).unwrap()).unwrap();
    assert_eq!(back, a);
}
