//! Analytic disks `d_R` over a hyperbolic fiber: boundary data, Poisson
//! extension, center divergence, boundary compactness and containment.
//!
//! With `f_R(z) = log i (R+z)/(R-z)` and `α = Re f / μ_1`, the fiber part of
//! the disk has boundary values `Im g_j = λ_j^α`, so the boundary traces the
//! real orbit `A^α r`. The interior is the Poisson mean of that orbit.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::logdomain::{find_r_orbit_point, ConvexRegion, EigenBasis, OrbitOptions, DEFAULT_K_CAP};
use crate::num::Real;

/// Smallest grid accepted by the Poisson sums.
pub const MIN_GRID: usize = 16;
/// Largest grid used by `center_height`. Near `R = 1 + 10^-6` the trapezoid
/// rule needs about `20 / (R - 1)` nodes.
pub const MAX_GRID: usize = 1 << 26;
/// Largest per-sample grid used for interior points.
pub const MAX_SAMPLE_GRID: usize = 1 << 20;
/// Default tolerance for boundary containment and compactness checks.
pub const DEFAULT_MARGIN: f64 = 1e-6;
pub const COMPACTNESS_TOL: f64 = 1e-8;

/// Eigen-data of a hyperbolic fiber together with an orbit point `r`
/// (eigen-coordinates) whose real orbit lies in the region.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real + Serialize", deserialize = "T: Real + Deserialize<'de>"))]
pub struct SuspensionData<T> {
    region: ConvexRegion<T>,
    basis: EigenBasis<T>,
    mu1: T,
    r: Vec<T>,
}

impl<T: Real> SuspensionData<T> {
    /// Uses the region's normalised eigen frame; `r` must lie in the region.
    pub fn new(region: ConvexRegion<T>, r: Vec<T>) -> Result<Self> {
        let (_, basis) = region
            .frame()
            .ok_or_else(|| Error::InvalidArgument(format!("{} region carries no eigen frame", region.kind())))?;
        if !basis.is_normalized() {
            return Err(Error::SpectrumNotTotallyRealPositive("need λ_1 > 1 > λ_2 > ... > 0".into()));
        }
        if r.len() != basis.dim() {
            return Err(Error::DimensionMismatch { expected: basis.dim(), found: r.len() });
        }
        let basis = basis.clone();
        if !region.contains_point(&basis.to_standard(&r), T::zero())? {
            return Err(Error::PointOutsideRegion(format!("r = {r:?} (eigen-coordinates)")));
        }
        let mu1 = basis.values()[0].ln();
        Ok(SuspensionData { region, basis, mu1, r })
    }

    /// Runs the orbit-point search from `q` and keeps the (possibly escalated) region.
    pub fn from_region(region: &ConvexRegion<T>, q: &[T], opts: &OrbitOptions) -> Result<Self> {
        let rep = find_r_orbit_point(region, q, opts)?;
        Self::new(rep.region, rep.r)
    }

    pub fn dim(&self) -> usize {
        self.r.len()
    }

    pub fn lambdas(&self) -> &[T] {
        self.basis.values()
    }

    /// `μ_1 = log λ_1`.
    pub fn mu1(&self) -> T {
        self.mu1
    }

    pub fn r(&self) -> &[T] {
        &self.r
    }

    pub fn region(&self) -> &ConvexRegion<T> {
        &self.region
    }

    pub fn basis(&self) -> &EigenBasis<T> {
        &self.basis
    }

    /// Standard coordinates of `Σ_j r_j u_j X_j`.
    pub fn fiber_point(&self, u: &[T]) -> Vec<T> {
        let c: Vec<T> = self.r.iter().zip(u).map(|(&r, &x)| r * x).collect();
        self.basis.to_standard(&c)
    }

    /// `λ_j^α` for all `j`.
    fn powers(&self, alpha: T) -> Vec<T> {
        self.lambdas().iter().map(|&l| (alpha * l.ln()).exp()).collect()
    }
}

fn check_radius<T: Real>(big_r: T) -> Result<()> {
    if big_r > T::one() && big_r.is_finite() {
        Ok(())
    } else {
        Err(Error::PoleAtBoundary(big_r.to_f64().unwrap_or(f64::NAN)))
    }
}

/// `f_R(z) = log(i (R + z) / (R - z))`, principal branch, for `|z| ≤ 1 < R`.
pub fn f_r<T: Real>(z: Complex<T>, big_r: T) -> Result<Complex<T>> {
    check_radius(big_r)?;
    if z.norm() > T::one() {
        return Err(Error::InvalidArgument(format!("|z| = {} exceeds 1", z.norm())));
    }
    let rp = Complex::new(big_r, T::zero()) + z;
    let rm = Complex::new(big_r, T::zero()) - z;
    // arg(R + z) - arg(R - z) lies in (-π/2, π/2), so no branch cut is crossed
    Ok(Complex::new(rp.norm().ln() - rm.norm().ln(), T::FRAC_PI_2() + rp.arg() - rm.arg()))
}

/// Boundary values `λ_j^{Re f(e^{iθ}) / μ_1}`.
pub fn boundary_data<T: Real>(s: &SuspensionData<T>, big_r: T, theta: T) -> Result<Vec<T>> {
    let f = f_r(Complex::from_polar(T::one(), theta), big_r)?;
    Ok(s.powers(f.re / s.mu1))
}

/// Uniform grid `w_k = e^{2πik/N}` on the unit circle.
#[derive(Clone, Debug)]
pub struct Grid<T> {
    nodes: Vec<Complex<T>>,
}

impl<T: Real> Grid<T> {
    pub fn new(n: usize) -> Result<Self> {
        if n < MIN_GRID {
            return Err(Error::QuadratureUnderflow(n));
        }
        let step = 2.0 * std::f64::consts::PI / n as f64;
        let nodes = (0..n)
            .map(|k| {
                let t = step * k as f64;
                Complex::new(T::lit(t.cos()), T::lit(t.sin()))
            })
            .collect();
        Ok(Grid { nodes })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn theta(&self, k: usize) -> T {
        T::lit(2.0 * std::f64::consts::PI * k as f64 / self.len() as f64)
    }

    pub fn nodes(&self) -> &[Complex<T>] {
        &self.nodes
    }
}

/// Value of the harmonic extension `u` and its conjugate `ũ`, normalised so
/// that `ũ(0) = 0`. The holomorphic `g` with `Im g = u` is `-ũ + i u`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HarmonicValue<T> {
    pub value: T,
    pub conjugate: T,
}

impl<T: Real> HarmonicValue<T> {
    /// `g(s)` with `Im g = u` on the circle and `Re g(0) = 0`.
    pub fn holomorphic(&self) -> Complex<T> {
        Complex::new(-self.conjugate, self.value)
    }
}

/// Harmonic extensions of several boundary data sets sampled on `grid`, at `s`.
///
/// Uses the discrete Poisson and conjugate kernels `Re, Im (w+s)/(w-s)`,
/// divided by the discrete Poisson mass; the Poisson weights are positive,
/// so the value is a convex combination of the samples.
pub fn harmonic_extend_many<T: Real>(grid: &Grid<T>, data: &[&[T]], s: Complex<T>) -> Result<Vec<HarmonicValue<T>>> {
    if s.norm() >= T::one() {
        return Err(Error::InvalidArgument(format!("|s| = {} is not inside the unit disk", s.norm())));
    }
    for d in data {
        if d.len() != grid.len() {
            return Err(Error::DimensionMismatch { expected: grid.len(), found: d.len() });
        }
    }
    let mut mass = T::zero();
    let mut acc = vec![(T::zero(), T::zero()); data.len()];
    for (k, &w) in grid.nodes.iter().enumerate() {
        let kern = (w + s) / (w - s);
        mass = mass + kern.re;
        for (a, d) in acc.iter_mut().zip(data) {
            a.0 = a.0 + kern.re * d[k];
            a.1 = a.1 + kern.im * d[k];
        }
    }
    Ok(acc.into_iter().map(|(v, c)| HarmonicValue { value: v / mass, conjugate: c / mass }).collect())
}

/// Harmonic extension at `s` of boundary samples on the uniform grid of
/// their length.
pub fn harmonic_extend<T: Real>(samples: &[T], s: Complex<T>) -> Result<HarmonicValue<T>> {
    let grid = Grid::new(samples.len())?;
    Ok(harmonic_extend_many(&grid, &[samples], s)?[0])
}

/// Trapezoid approximation with its grid size and the change from the
/// previous (half-size) grid.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Quadrature<T> {
    pub value: T,
    pub n: usize,
    pub error_estimate: T,
}

/// `e^{Re f_R(e^{iθ})} = |R + e^{iθ}| / |R - e^{iθ}|`.
fn center_integrand<T: Real>(big_r: T, theta: f64) -> T {
    let w = Complex::new(T::lit(theta.cos()), T::lit(theta.sin()));
    let r = Complex::new(big_r, T::zero());
    (r + w).norm() / (r - w).norm()
}

fn rel_tol<T: Real>() -> T {
    T::lit(1e-8).max(T::epsilon() * T::lit(1024.0))
}

/// Mean of `e^{Re f_R}` on the fixed grid of `n` points.
pub fn center_height_fixed<T: Real>(big_r: T, n: usize) -> Result<T> {
    check_radius(big_r)?;
    if n < MIN_GRID {
        return Err(Error::QuadratureUnderflow(n));
    }
    let step = 2.0 * std::f64::consts::PI / n as f64;
    let sum: T = (0..n).into_par_iter().map(|k| center_integrand(big_r, step * k as f64)).sum();
    Ok(sum / T::lit(n as f64))
}

/// `Im g_1(0) = ∫_{S^1} e^{Re f_R}` (normalised measure), doubling the grid
/// from `n` until two successive values agree to 1e-8 relative.
///
/// Each doubling only evaluates the new midpoints.
pub fn center_height<T: Real>(big_r: T, n: usize) -> Result<Quadrature<T>> {
    check_radius(big_r)?;
    if n < MIN_GRID {
        return Err(Error::QuadratureUnderflow(n));
    }
    if !n.is_power_of_two() {
        return Err(Error::InvalidArgument(format!("grid size {n} is not a power of two")));
    }
    let mut n = n;
    let mut sum = center_height_fixed(big_r, n)? * T::lit(n as f64);
    let mut mean = sum / T::lit(n as f64);
    let tol = rel_tol::<T>();
    while n < MAX_GRID {
        let step = std::f64::consts::PI / n as f64;
        let odd: T = (0..n).into_par_iter().map(|k| center_integrand(big_r, step * (2 * k + 1) as f64)).sum();
        sum = sum + odd;
        n *= 2;
        let next = sum / T::lit(n as f64);
        let change = (next - mean).abs();
        mean = next;
        if change <= tol * next.abs() {
            return Ok(Quadrature { value: next, n, error_estimate: change });
        }
    }
    let half = center_height_fixed(big_r, n / 2)?;
    Err(Error::NoConvergence {
        previous: half.to_f64().unwrap_or(f64::NAN),
        last: mean.to_f64().unwrap_or(f64::NAN),
        n,
    })
}

/// `d̃(0)`: base coordinate `μ_1^{-1} f(0) = i π / (2 μ_1)` and fiber
/// coordinates `r_j Im g_j(0)` (eigen frame) from the grid of `n` points.
pub fn center_point<T: Real>(s: &SuspensionData<T>, big_r: T, n: usize) -> Result<(Complex<T>, Vec<T>)> {
    let grid = Grid::<T>::new(n)?;
    let data = boundary_table(s, big_r, &grid)?;
    let refs: Vec<&[T]> = data.iter().map(Vec::as_slice).collect();
    let vals = harmonic_extend_many(&grid, &refs, Complex::new(T::zero(), T::zero()))?;
    let base = f_r(Complex::new(T::zero(), T::zero()), big_r)? / s.mu1;
    Ok((base, vals.iter().zip(s.r()).map(|(v, &r)| r * v.value).collect()))
}

/// Boundary data tabulated per coordinate: `table[j][k] = λ_j^{α(θ_k)}`.
fn boundary_table<T: Real>(s: &SuspensionData<T>, big_r: T, grid: &Grid<T>) -> Result<Vec<Vec<T>>> {
    let mut table = vec![Vec::with_capacity(grid.len()); s.dim()];
    for &w in grid.nodes() {
        let f = f_r(w, big_r)?;
        for (col, v) in table.iter_mut().zip(s.powers(f.re / s.mu1)) {
            col.push(v);
        }
    }
    Ok(table)
}

/// Interior and boundary membership of `d̃'` in the region.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContainmentReport {
    #[serde(rename = "R")]
    pub big_r: f64,
    pub samples: usize,
    pub violations: usize,
    /// Smallest clearance over the interior samples.
    pub worst_margin: f64,
    pub boundary_samples: usize,
    pub boundary_violations: usize,
    pub boundary_worst_margin: f64,
    pub margin: f64,
    pub base_grid: usize,
    pub max_grid: usize,
    pub k_used: Option<usize>,
}

/// Options for the containment and scan drivers.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiskOptions {
    /// Initial quadrature grid (power of two, at least 16).
    pub n: usize,
    /// Interior samples per `R`.
    pub samples: usize,
    pub seed: u64,
    /// Points with clearance `≤ -margin` count as violations.
    pub margin: f64,
    pub k_cap: usize,
}

impl Default for DiskOptions {
    fn default() -> Self {
        DiskOptions { n: 1024, samples: 10_000, seed: 0, margin: DEFAULT_MARGIN, k_cap: DEFAULT_K_CAP }
    }
}

/// Fixed-seed interior points `√u e^{2πiv}`.
pub fn interior_samples<T: Real>(m: usize, seed: u64) -> Vec<Complex<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..m)
        .map(|_| {
            let u: f64 = rng.gen();
            let v: f64 = rng.gen();
            let z = Complex::from_polar(u.sqrt(), 2.0 * std::f64::consts::PI * v);
            Complex::new(T::lit(z.re), T::lit(z.im))
        })
        .collect()
}

/// Grid size for an interior point: at least `base`, and at least
/// `16 / (1 - |s|)` so the kernel is resolved.
fn sample_grid_size(base: usize, s_abs: f64) -> usize {
    let need = (MIN_GRID as f64 / (1.0 - s_abs)).ceil();
    let need = if need.is_finite() && need < MAX_SAMPLE_GRID as f64 { need as usize } else { MAX_SAMPLE_GRID };
    need.next_power_of_two().max(base).min(MAX_SAMPLE_GRID.max(base))
}

struct Tabulated<T> {
    grid: Grid<T>,
    data: Vec<Vec<T>>,
}

fn scan_points<T: Real>(
    s: &SuspensionData<T>,
    region: &ConvexRegion<T>,
    points: &[Vec<T>],
    margin: T,
) -> Result<(usize, T)> {
    let res: Result<Vec<T>> = points.par_iter().map(|u| region.clearance(&s.fiber_point(u))).collect();
    let cs = res?;
    let bad = cs.iter().filter(|&&c| !(c > -margin)).count();
    Ok((bad, cs.into_iter().fold(T::infinity(), T::min)))
}

/// Checks `d̃'(s) = Σ_j r_j Im g_j(s) X_j` for `opts.samples` interior
/// points and `d̃'(e^{iθ})` on the base grid against the region. Orbit
/// hulls are escalated up to `opts.k_cap` while violations remain.
pub fn verify_containment<T: Real>(s: &SuspensionData<T>, big_r: T, opts: &DiskOptions) -> Result<ContainmentReport> {
    check_radius(big_r)?;
    let base = center_height::<T>(big_r, opts.n.max(MIN_GRID).next_power_of_two())
        .map(|q| q.n)
        .unwrap_or(MAX_SAMPLE_GRID)
        .min(MAX_SAMPLE_GRID);
    let pts = interior_samples::<T>(opts.samples, opts.seed);
    let sizes: Vec<usize> = pts.iter().map(|z| sample_grid_size(base, z.norm().to_f64().unwrap_or(1.0))).collect();
    let mut tables: BTreeMap<usize, Tabulated<T>> = BTreeMap::new();
    for &n in sizes.iter().chain([&base]) {
        if let std::collections::btree_map::Entry::Vacant(e) = tables.entry(n) {
            let grid = Grid::new(n)?;
            let data = boundary_table(s, big_r, &grid)?;
            e.insert(Tabulated { grid, data });
        }
    }
    let interior: Result<Vec<Vec<T>>> = pts
        .par_iter()
        .zip(&sizes)
        .map(|(&z, n)| {
            let t = &tables[n];
            let refs: Vec<&[T]> = t.data.iter().map(Vec::as_slice).collect();
            Ok(harmonic_extend_many(&t.grid, &refs, z)?.iter().map(|h| h.value).collect())
        })
        .collect();
    let interior = interior?;
    let bt = &tables[&base];
    let boundary: Vec<Vec<T>> = (0..base).map(|k| bt.data.iter().map(|col| col[k]).collect()).collect();
    let margin = T::lit(opts.margin);
    let mut region = s.region.clone();
    loop {
        let (bad, worst) = scan_points(s, &region, &interior, margin)?;
        let (bbad, bworst) = scan_points(s, &region, &boundary, margin)?;
        if bad + bbad > 0 {
            if let Some(next) = region.escalate(opts.k_cap) {
                region = next;
                continue;
            }
        }
        return Ok(ContainmentReport {
            big_r: big_r.to_f64().unwrap_or(f64::NAN),
            samples: interior.len(),
            violations: bad,
            worst_margin: worst.to_f64().unwrap_or(f64::NAN),
            boundary_samples: boundary.len(),
            boundary_violations: bbad,
            boundary_worst_margin: bworst.to_f64().unwrap_or(f64::NAN),
            margin: opts.margin,
            base_grid: base,
            max_grid: sizes.iter().copied().max().unwrap_or(base),
            k_used: region.truncation(),
        });
    }
}

/// Reduced boundary representatives for one `R`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompactnessRow {
    #[serde(rename = "R")]
    pub big_r: f64,
    pub n: usize,
    /// Largest `|λ_j^{-α} r_j Im g_j - r_j|` over boundary samples.
    pub max_deviation: f64,
    /// Range of the reduced base coordinate `μ_1^{-1} Im f`.
    pub base_min: f64,
    pub base_max: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompactnessReport {
    pub rows: Vec<CompactnessRow>,
    pub max_deviation: f64,
    /// Upper end `π / μ_1` of the base interval.
    pub base_bound: f64,
    pub passed: bool,
}

/// Divides out the real flow from every boundary point of `d̃`: the fiber
/// part must reduce to `r` and the base to `i μ_1^{-1} Im f` with
/// `0 < μ_1^{-1} Im f < π / μ_1`, for every `R` in `rs`.
pub fn verify_boundary_compact<T: Real>(s: &SuspensionData<T>, rs: &[T], n: usize) -> Result<CompactnessReport> {
    let grid = Grid::<T>::new(n)?;
    let mut rows = Vec::with_capacity(rs.len());
    for &big_r in rs {
        check_radius(big_r)?;
        let mut dev = T::zero();
        let (mut lo, mut hi) = (T::infinity(), T::neg_infinity());
        for &w in grid.nodes() {
            let f = f_r(w, big_r)?;
            let im_g = s.powers(f.re / s.mu1);
            // the real flow by -α, with α read off the first coordinate
            let alpha = im_g[0].ln() / s.mu1;
            let back = s.powers(-alpha);
            for ((&g, &b), &r) in im_g.iter().zip(&back).zip(&s.r) {
                dev = dev.max((b * r * g - r).abs());
            }
            let base = f.im / s.mu1;
            lo = lo.min(base);
            hi = hi.max(base);
        }
        rows.push(CompactnessRow {
            big_r: big_r.to_f64().unwrap_or(f64::NAN),
            n,
            max_deviation: dev.to_f64().unwrap_or(f64::NAN),
            base_min: lo.to_f64().unwrap_or(f64::NAN),
            base_max: hi.to_f64().unwrap_or(f64::NAN),
        });
    }
    let bound = (T::PI() / s.mu1).to_f64().unwrap_or(f64::NAN);
    let max_deviation = rows.iter().map(|r| r.max_deviation).fold(0.0, f64::max);
    let passed = max_deviation <= COMPACTNESS_TOL && rows.iter().all(|r| r.base_min > 0.0 && r.base_max < bound);
    Ok(CompactnessReport { rows, max_deviation, base_bound: bound, passed })
}

/// One row of the divergence scan.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiskReport {
    #[serde(rename = "R")]
    pub big_r: f64,
    #[serde(rename = "N")]
    pub n: usize,
    /// `Im g_1(0)`.
    pub center_height: f64,
    pub quadrature_error: f64,
    /// Fiber coordinates of `d̃(0)` in the eigen frame.
    pub center_fiber: Vec<f64>,
    /// The constant reduced boundary fiber coordinates, `r`.
    pub boundary_reduced_coords: Vec<f64>,
    pub boundary_dev: f64,
    pub containment: ContainmentReport,
}

fn to_f64s<T: Real>(x: &[T]) -> Vec<f64> {
    x.iter().map(|v| v.to_f64().unwrap_or(f64::NAN)).collect()
}

/// Center height, boundary compactness and containment along a schedule of
/// radii decreasing to 1. Rows follow the schedule order.
pub fn divergence_scan<T: Real>(s: &SuspensionData<T>, schedule: &[T], opts: &DiskOptions) -> Result<Vec<DiskReport>> {
    if schedule.is_empty() {
        return Err(Error::InvalidArgument("empty R schedule".into()));
    }
    for &r in schedule {
        check_radius(r)?;
    }
    if schedule.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidArgument("R schedule must be strictly decreasing".into()));
    }
    schedule
        .par_iter()
        .map(|&big_r| {
            let q = center_height(big_r, opts.n)?;
            let (_, fiber) = center_point(s, big_r, q.n)?;
            let compact = verify_boundary_compact(s, &[big_r], q.n)?;
            let containment = verify_containment(s, big_r, opts)?;
            Ok(DiskReport {
                big_r: big_r.to_f64().unwrap_or(f64::NAN),
                n: q.n,
                center_height: q.value.to_f64().unwrap_or(f64::NAN),
                quadrature_error: q.error_estimate.to_f64().unwrap_or(f64::NAN),
                center_fiber: to_f64s(&fiber),
                boundary_reduced_coords: to_f64s(&s.r),
                boundary_dev: compact.max_deviation,
                containment,
            })
        })
        .collect()
}

/// `%.12g`-style formatting.
pub fn format_g12(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { format!("{x}") };
    }
    let sci = format!("{x:.11e}");
    let (mant, exp) = sci.split_once('e').expect("scientific format");
    let e: i32 = exp.parse().expect("exponent");
    if (-4..12).contains(&e) {
        let fixed = format!("{:.*}", (11 - e).max(0) as usize, x);
        trim_zeros(&fixed).to_string()
    } else {
        format!("{}e{}{:02}", trim_zeros(mant), if e < 0 { '-' } else { '+' }, e.abs())
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// CSV with header `R,N,center_height,worst_margin,boundary_dev`.
pub fn scan_csv(rows: &[DiskReport]) -> String {
    let mut out = String::from("R,N,center_height,worst_margin,boundary_dev\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            format_g12(r.big_r),
            r.n,
            format_g12(r.center_height),
            format_g12(r.containment.worst_margin.min(r.containment.boundary_worst_margin)),
            format_g12(r.boundary_dev)
        );
    }
    out
}
