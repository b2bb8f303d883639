//! Linear programs used as independent membership and feasibility checks.

use minilp::{ComparisonOp, OptimizationDirection, Problem};

/// Whether `x` is a convex combination of `points`, up to the absolute
/// tolerance `tol` per coordinate.
pub fn in_convex_hull(points: &[Vec<f64>], x: &[f64], tol: f64) -> bool {
    if points.is_empty() {
        return false;
    }
    let mut p = Problem::new(OptimizationDirection::Minimize);
    let w: Vec<_> = points.iter().map(|_| p.add_var(0.0, (0.0, f64::INFINITY))).collect();
    p.add_constraint(w.iter().map(|&v| (v, 1.0)).collect::<Vec<_>>().as_slice(), ComparisonOp::Eq, 1.0);
    for (i, &xi) in x.iter().enumerate() {
        let row: Vec<_> = w.iter().zip(points).map(|(&v, q)| (v, q[i])).collect();
        p.add_constraint(row.as_slice(), ComparisonOp::Le, xi + tol);
        p.add_constraint(row.as_slice(), ComparisonOp::Ge, xi - tol);
    }
    p.solve().is_ok()
}

/// Largest common slack `t ≤ cap` with `⟨a_i, x⟩ + t ≤ b_i` for all rows
/// (unit normals make `t` a Euclidean clearance). The open polyhedron is
/// nonempty iff the result is positive.
pub fn max_uniform_slack(normals: &[Vec<f64>], offsets: &[f64], dim: usize, cap: f64) -> Option<f64> {
    let mut p = Problem::new(OptimizationDirection::Maximize);
    let x: Vec<_> = (0..dim).map(|_| p.add_var(0.0, (f64::NEG_INFINITY, f64::INFINITY))).collect();
    let t = p.add_var(1.0, (f64::NEG_INFINITY, cap));
    for (a, &b) in normals.iter().zip(offsets) {
        let mut row: Vec<_> = x.iter().zip(a).map(|(&v, &c)| (v, c)).collect();
        row.push((t, 1.0));
        p.add_constraint(row.as_slice(), ComparisonOp::Le, b);
    }
    p.solve().ok().map(|s| s.objective())
}
