use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use reinhardt::intmat::{CharPoly, IntMatrix};
use reinhardt::logdomain::{
    affine_fixed_point, eigenbasis, find_r_orbit_point, hpolytope, lp, normalize_hyperbolic, octant_domains,
    orbit_hull, quadrant_domains, AffineAutomorphism, ConvexRegion, Halfspace, OrbitOptions,
};
use reinhardt::Error;

fn golden() -> IntMatrix {
    IntMatrix::from_i64(&[&[2, 1], &[1, 1]])
}

fn cubic() -> IntMatrix {
    IntMatrix::companion(&CharPoly::from_i64s(&[1, -2, -1, 1]).unwrap())
}

fn apply(a: &IntMatrix, x: &[f64]) -> Vec<f64> {
    (0..a.dim())
        .map(|i| a.row(i).iter().zip(x).map(|(e, v)| e.to_string().parse::<f64>().unwrap() * v).sum())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn cones_are_invariant(c in prop::collection::vec(-3.0f64..3.0, 3)) {
        prop_assume!(c.iter().all(|x| x.abs() > 1e-3));
        let a = cubic();
        let cones = octant_domains::<f64>(&a).unwrap();
        let (_, b) = cones[0].frame().unwrap();
        let x = b.to_standard(&c);
        let ax = apply(&a, &x);
        let inv = apply(&a.inverse_gl().unwrap(), &x);
        let hits: Vec<usize> = (0..8).filter(|&i| cones[i].contains_point(&x, 0.0).unwrap()).collect();
        prop_assert_eq!(hits.len(), 1);
        // the eigenvalue of A on X_2 is negative, so A swaps the cones differing in that sign
        let i = hits[0];
        let hit_ax: Vec<usize> = (0..8).filter(|&j| cones[j].contains_point(&ax, -1e-12).unwrap()).collect();
        let hit_inv: Vec<usize> = (0..8).filter(|&j| cones[j].contains_point(&inv, -1e-12).unwrap()).collect();
        prop_assert_eq!(&hit_ax, &hit_inv);
        prop_assert_eq!(hit_ax, vec![i ^ 0b010]);
    }

    #[test]
    fn exact_hull_agrees_with_lp(x in prop::collection::vec(-4.0f64..8.0, 2), k in 1usize..4) {
        let h = orbit_hull::<f64>(&golden(), &[1.0, 0.3], k).unwrap();
        let ConvexRegion::OrbitHull(oh) = &h else { unreachable!() };
        let pts = oh.hull().points_f64();
        let c = h.clearance(&x).unwrap();
        if c > 1e-7 {
            prop_assert!(lp::in_convex_hull(&pts, &x, 0.0));
        } else if c < -1e-7 {
            prop_assert!(!lp::in_convex_hull(&pts, &x, 0.0));
        }
    }

    #[test]
    fn affine_fixed_points_are_fixed(b in prop::collection::vec(-50i64..50, 3), den in 1i64..20) {
        let t: Vec<BigRational> = b.iter().map(|&x| BigRational::new(BigInt::from(x), BigInt::from(den))).collect();
        let f = AffineAutomorphism::new(cubic(), t).unwrap();
        let p = affine_fixed_point(&f).unwrap();
        prop_assert_eq!(f.apply(&p), p);
    }

    #[test]
    fn orbit_points_exist_in_every_octant(mask in 0usize..8, q in prop::collection::vec(0.2f64..3.0, 3)) {
        let cones = octant_domains::<f64>(&cubic()).unwrap();
        let signed: Vec<f64> = q.iter().enumerate().map(|(j, &v)| if mask >> j & 1 == 1 { -v } else { v }).collect();
        let rep = find_r_orbit_point(&cones[mask], &signed, &OrbitOptions::default()).unwrap();
        prop_assert!(rep.min_vertex_clearance > 0.0 && rep.min_orbit_clearance > 0.0);
    }
}

#[test]
fn eigenbases_in_both_precisions() {
    for a in [golden(), IntMatrix::from_i64(&[&[3, 1], &[5, 2]])] {
        let b64 = eigenbasis::<f64>(&a).unwrap();
        let b32 = eigenbasis::<f32>(&a).unwrap();
        assert!(b64.residual(&a) < 1e-12);
        assert!(b32.residual(&a) < 1e-4);
        for (x, y) in b64.values().iter().zip(b32.values()) {
            assert!((x - f64::from(*y)).abs() < 1e-5 * x);
        }
        let n = b64.dim();
        for i in 0..n {
            for j in 0..n {
                let d: f64 = b64.dual()[i].iter().zip(&b64.vectors()[j]).map(|(u, v)| u * v).sum();
                assert!((d - if i == j { 1.0 } else { 0.0 }).abs() < 1e-13);
            }
        }
    }
}

#[test]
fn normalisation_exponents() {
    assert_eq!(normalize_hyperbolic::<f64>(&golden()).unwrap().0, 1);
    // det -1 with eigenvalues φ and -1/φ: only even powers are positive
    let fib = IntMatrix::from_i64(&[&[1, 1], &[1, 0]]);
    assert_eq!(normalize_hyperbolic::<f64>(&fib).unwrap().0, 2);
    assert_eq!(normalize_hyperbolic::<f64>(&cubic()).unwrap().0, -2);
    let rot = IntMatrix::from_i64(&[&[0, -1], &[1, 0]]);
    assert!(matches!(normalize_hyperbolic::<f64>(&rot), Err(Error::SpectrumNotTotallyRealPositive(_))));
}

#[test]
fn quadrant_queries_in_single_precision() {
    let q = quadrant_domains::<f32>(&golden()).unwrap();
    let (_, b) = q[0].frame().unwrap();
    assert!(q[0].contains_point(&b.to_standard(&[1.0, 2.0]), 0.0).unwrap());
    let rep = find_r_orbit_point(&q[0], &[1.0f32, 1.0], &OrbitOptions::default()).unwrap();
    assert!(rep.min_orbit_clearance > 0.0);
}

#[test]
fn lineality_of_polytopes() {
    let hs = |rows: &[([f64; 3], f64)]| {
        hpolytope::<f64>(3, rows.iter().map(|(n, b)| Halfspace { normal: n.to_vec(), offset: *b }).collect()).unwrap()
    };
    // a slab in R^3 contains lines along its two free directions
    assert!(hs(&[([0.0, 0.0, 1.0], 1.0), ([0.0, 0.0, -1.0], 1.0)]).contains_affine_line());
    // a wedge with two independent normals still contains the z-axis direction
    assert!(hs(&[([1.0, 0.0, 0.0], 0.0), ([0.0, 1.0, 0.0], 0.0)]).contains_affine_line());
    // a simplex cone is pointed
    assert!(!hs(&[([-1.0, 0.0, 0.0], 0.0), ([0.0, -1.0, 0.0], 0.0), ([0.0, 0.0, -1.0], 0.0)]).contains_affine_line());
    // inconsistent slab is empty, hence contains nothing
    assert!(!hs(&[([0.0, 0.0, 1.0], -1.0), ([0.0, 0.0, -1.0], -1.0)]).contains_affine_line());
}

#[test]
fn orbit_hull_escalation_reaches_cap() {
    let a = golden();
    let h = orbit_hull::<f64>(&a, &[1.0, 0.3], 1).unwrap();
    let mut k = vec![];
    let mut cur = Some(h);
    while let Some(r) = cur {
        k.push(r.truncation().unwrap());
        cur = r.escalate(16);
    }
    assert_eq!(k, vec![1, 2, 4, 8, 16]);
}
