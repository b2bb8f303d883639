//! Verdicts for Reinhardt domains (membership in the Serre class) and for
//! flat bundles with such fibers, with replayable reason traces.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intmat::{
    classify_spectrum, group_spec_verdict, spectral_radius, GroupVerdict, IntMatrix, RadiusBound, SearchParams,
    SpectrumClass, SpectrumTag,
};
use crate::logdomain::RegionSpec;

/// Tolerance of the certified spectral radius used in width comparisons.
const RADIUS_TOL: f64 = 1e-12;

/// Domain data: dimension, the coordinate hyperplanes `{z_i = 0}` (one-based)
/// meeting `D`, generators of the matrix group of algebraic automorphisms and
/// optionally the region `log(D ∩ (C*)^n)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainSpec {
    pub n: usize,
    #[serde(default)]
    pub hyperplane_pattern: Vec<usize>,
    #[serde(default)]
    pub generators: Vec<IntMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub region: Option<RegionSpec>,
}

/// Flat bundle data. `widths[i]`, when present, is the holomorphic width
/// (log of modulus) of the loop with monodromy `monodromies[i]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleSpec {
    pub fiber: DomainSpec,
    pub monodromies: Vec<IntMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub widths: Option<Vec<Option<f64>>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VerdictTag {
    InS,
    NotInS,
    Stein,
    NotStein,
    Unknown,
}

impl VerdictTag {
    pub fn is_definitive(self) -> bool {
        self != VerdictTag::Unknown
    }
}

impl fmt::Display for VerdictTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    None,
    Pattern {
        n: usize,
        hyperplanes: Vec<usize>,
    },
    /// Block of each generator on the coordinates other than `hyperplane`.
    Block {
        hyperplane: usize,
        blocks: Vec<IntMatrix>,
    },
    Group {
        generators: Vec<IntMatrix>,
        verdict: GroupVerdict,
    },
    Spectrum {
        matrix: IntMatrix,
        class: SpectrumClass,
    },
    Width {
        /// Zero-based index into the monodromies.
        generator: usize,
        matrix: IntMatrix,
        spectral_radius: RadiusBound,
        width: f64,
        threshold_lo: f64,
        threshold_hi: f64,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub rule: String,
    pub key: String,
    pub witness: Witness,
}

impl TraceEntry {
    fn new(rule: impl Into<String>, key: &str, witness: Witness) -> Self {
        TraceEntry { rule: rule.into(), key: key.into(), witness }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub tag: VerdictTag,
    pub trace: Vec<TraceEntry>,
}

impl Verdict {
    fn new(tag: VerdictTag, trace: Vec<TraceEntry>) -> Self {
        Verdict { tag, trace }
    }

    /// Recomputes every witness in the trace: group verdicts against their
    /// generators, spectrum classes and width comparisons.
    pub fn replay(&self) -> Result<bool> {
        for e in &self.trace {
            let ok = match &e.witness {
                Witness::Group { generators, verdict } => verdict.reverify(generators)?,
                Witness::Spectrum { matrix, class } => classify_spectrum(matrix)? == *class,
                Witness::Width { matrix, spectral_radius: rho, width, threshold_lo, threshold_hi, .. } => {
                    let again = spectral_radius(matrix, RADIUS_TOL)?;
                    let (lo, hi) = threshold_interval(&again)?;
                    again == *rho && lo == *threshold_lo && hi == *threshold_hi && width.is_finite()
                }
                Witness::None | Witness::Pattern { .. } | Witness::Block { .. } => true,
            };
            if !ok {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.tag)?;
        for (i, e) in self.trace.iter().enumerate() {
            writeln!(f, "  {}. [{}] {}", i + 1, e.key, e.rule)?;
        }
        Ok(())
    }
}

/// `2π² / log ρ`: a bundle whose width exceeds this value for a loop with
/// monodromy of spectral radius `ρ` is not Stein (two-dimensional fibers).
pub fn width_threshold(rho: f64) -> Result<f64> {
    if !(rho > 1.0) || !rho.is_finite() {
        return Err(Error::RhoNotGreaterThanOne(rho));
    }
    Ok(2.0 * std::f64::consts::PI.powi(2) / rho.ln())
}

/// Threshold range over a certified `ρ` interval.
fn threshold_interval(rho: &RadiusBound) -> Result<(f64, f64)> {
    let lo = width_threshold(rho.hi())?;
    let hi = if rho.lo() > 1.0 { width_threshold(rho.lo())? } else { f64::INFINITY };
    Ok((lo, hi))
}

fn check_generators(n: usize, gens: &[IntMatrix]) -> Result<()> {
    for g in gens {
        g.ensure_square()?;
        if g.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, found: g.dim() });
        }
        g.ensure_gl()?;
    }
    Ok(())
}

/// The trivial group when no generator is given.
fn generators_or_identity(n: usize, gens: &[IntMatrix]) -> Vec<IntMatrix> {
    if gens.is_empty() {
        vec![IntMatrix::identity(n)]
    } else {
        gens.to_vec()
    }
}

fn normalized_pattern(d: &DomainSpec) -> Result<Vec<usize>> {
    let mut p = d.hyperplane_pattern.clone();
    p.sort_unstable();
    p.dedup();
    if let Some(&bad) = p.iter().find(|&&i| i == 0 || i > d.n) {
        return Err(Error::InvalidArgument(format!("hyperplane index {bad} outside 1..={}", d.n)));
    }
    Ok(p)
}

fn group_entry(gens: &[IntMatrix], v: &GroupVerdict, rule: &str, key: &str) -> TraceEntry {
    TraceEntry::new(rule, key, Witness::Group { generators: gens.to_vec(), verdict: v.clone() })
}

/// Decides whether the domain belongs to the Serre class.
pub fn classify_domain(d: &DomainSpec, params: &SearchParams) -> Result<Verdict> {
    let n = d.n;
    if n == 0 {
        return Err(Error::UnsupportedDimension(0));
    }
    check_generators(n, &d.generators)?;
    let pattern = normalized_pattern(d)?;
    if n != 2 && n != 3 {
        return Ok(Verdict::new(
            VerdictTag::Unknown,
            vec![TraceEntry::new(
                format!("no classification is known in dimension {n}"),
                "higher-dimension-open-question",
                Witness::Pattern { n, hyperplanes: pattern },
            )],
        ));
    }
    let gens = generators_or_identity(n, &d.generators);
    if let (Some(spec), true) = (&d.region, pattern.is_empty()) {
        let region = spec.build::<f64>()?;
        if region.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, found: region.dim() });
        }
        if region.contains_affine_line() {
            return Err(Error::InputInconsistent(
                "log D contains an affine line, so D is not bounded in (C*)^n".into(),
            ));
        }
    }
    let pattern_entry = Witness::Pattern { n, hyperplanes: pattern.clone() };
    match (n, pattern.len()) {
        (2, k) if k > 0 => finite_by_pattern(
            &gens,
            params,
            TraceEntry::new("plane domain meets a coordinate axis", "plane-domain-meets-axis", pattern_entry),
        ),
        (3, k) if k >= 2 => finite_by_pattern(
            &gens,
            params,
            TraceEntry::new(
                "several coordinate hyperplanes meet D: finitely many algebraic automorphisms",
                "several-hyperplanes-finite-automorphisms",
                pattern_entry,
            ),
        ),
        (3, 1) => {
            let i = pattern[0] - 1;
            let blocks = gens.iter().map(|g| hyperplane_block(g, i)).collect::<Result<Vec<_>>>()?;
            let v = group_spec_verdict(&blocks, params)?;
            let mut trace = vec![
                TraceEntry::new(
                    format!("only {{z_{} = 0}} meets D: restrict to the complementary 2x2 block", i + 1),
                    "single-hyperplane-block-reduction",
                    Witness::Block { hyperplane: i + 1, blocks: blocks.clone() },
                ),
            ];
            let tag = match &v {
                GroupVerdict::AllOnUnitCircle { .. } => {
                    trace.push(group_entry(&blocks, &v, "block spectrum on the unit circle", "unit-circle-criterion"));
                    VerdictTag::InS
                }
                GroupVerdict::HyperbolicWitness { matrix, .. } => {
                    trace.push(group_entry(&blocks, &v, "hyperbolic block: the slice D ∩ {z_i = 0} already fails", "hyperbolic-slice-suspension"));
                    trace.push(TraceEntry::new(
                        "block witness spectrum",
                        "unit-circle-criterion",
                        Witness::Spectrum { matrix: matrix.clone(), class: classify_spectrum(matrix)? },
                    ));
                    VerdictTag::NotInS
                }
                GroupVerdict::Inconclusive { .. } => {
                    trace.push(group_entry(&blocks, &v, "word search exhausted", "bounded-word-search"));
                    VerdictTag::Unknown
                }
            };
            Ok(Verdict::new(tag, trace))
        }
        _ => {
            let v = group_spec_verdict(&gens, params)?;
            let mut trace = Vec::new();
            let tag = match &v {
                GroupVerdict::AllOnUnitCircle { .. } => {
                    trace.push(group_entry(&gens, &v, "every element has spectrum on the unit circle", "unit-circle-criterion"));
                    VerdictTag::InS
                }
                GroupVerdict::HyperbolicWitness { matrix, .. } => {
                    let class = classify_spectrum(matrix)?;
                    let rule = match class.tag {
                        SpectrumTag::Hyperbolic2 => "hyperbolic element: real eigenvalues λ, ±1/λ off the unit circle",
                        SpectrumTag::Case3 if class.all_real => "element with three real irrational eigenvalues",
                        SpectrumTag::Case2R => "element with eigenvalues ±1, λ, ±1/λ and |λ| ≠ 1",
                        _ => {
                            return Err(Error::InputInconsistent(format!(
                                "witness {} has a non-real eigenvalue off the unit circle, which no automorphism group of a bounded domain contains",
                                matrix.charpoly()
                            )))
                        }
                    };
                    trace.push(group_entry(&gens, &v, "spectrum leaves the unit circle", "unit-circle-criterion"));
                    trace.push(TraceEntry::new(rule, "hyperbolic-witness-class", Witness::Spectrum { matrix: matrix.clone(), class }));
                    VerdictTag::NotInS
                }
                GroupVerdict::Inconclusive { .. } => {
                    trace.push(group_entry(&gens, &v, "word search exhausted", "bounded-word-search"));
                    VerdictTag::Unknown
                }
            };
            Ok(Verdict::new(tag, trace))
        }
    }
}

/// Pattern rules that force a finite group: the generators must not contain
/// a hyperbolic element.
fn finite_by_pattern(gens: &[IntMatrix], params: &SearchParams, first: TraceEntry) -> Result<Verdict> {
    let v = group_spec_verdict(gens, params)?;
    if let GroupVerdict::HyperbolicWitness { word, .. } = &v {
        return Err(Error::InputInconsistent(format!(
            "hyperplane pattern forces a finite group, but {word} is hyperbolic"
        )));
    }
    let mut trace = vec![first];
    trace.push(group_entry(gens, &v, "consistency: no hyperbolic element among searched words", "pattern-consistency"));
    Ok(Verdict::new(VerdictTag::InS, trace))
}

/// The 2x2 action on the coordinates other than `i`; the generator must fix
/// the exponent of `z_i` (column `i` is the `i`-th unit vector).
fn hyperplane_block(g: &IntMatrix, i: usize) -> Result<IntMatrix> {
    let n = g.dim();
    let ok = (0..n).all(|r| {
        let e = &g.row(r)[i];
        if r == i {
            *e == 1.into()
        } else {
            *e == 0.into()
        }
    });
    if !ok {
        return Err(Error::InputInconsistent(format!(
            "generator {g} does not preserve the hyperplane z_{} = 0 with unit exponent",
            i + 1
        )));
    }
    let keep: Vec<usize> = (0..n).filter(|&r| r != i).collect();
    Ok(g.submatrix(&keep, &keep))
}

/// Decides Steinness of a flat bundle from its monodromies and optional
/// holomorphic widths.
pub fn classify_bundle(e: &BundleSpec, params: &SearchParams) -> Result<Verdict> {
    let n = e.fiber.n;
    if e.monodromies.is_empty() {
        return Err(Error::EmptyGenerators);
    }
    check_generators(n, &e.monodromies)?;
    if let Some(w) = &e.widths {
        if w.len() != e.monodromies.len() {
            return Err(Error::DimensionMismatch { expected: e.monodromies.len(), found: w.len() });
        }
    }
    let v = group_spec_verdict(&e.monodromies, params)?;
    if v.is_unit_circle() {
        let t = group_entry(&e.monodromies, &v, "monodromy spectrum on the unit circle", "unit-circle-monodromy-stein");
        return Ok(Verdict::new(VerdictTag::Stein, vec![t]));
    }
    let mut trace = vec![group_entry(
        &e.monodromies,
        &v,
        if v.is_hyperbolic() { "monodromy group has an element off the unit circle" } else { "word search exhausted" },
        if v.is_hyperbolic() { "unit-circle-criterion" } else { "bounded-word-search" },
    )];
    let widths = e.widths.clone().unwrap_or_default();
    for (i, g) in e.monodromies.iter().enumerate() {
        let Some(w) = widths.get(i).copied().flatten() else { continue };
        let rho = spectral_radius(g, RADIUS_TOL)?;
        if rho.lo() <= 1.0 {
            continue;
        }
        let (lo, hi) = threshold_interval(&rho)?;
        let witness =
            Witness::Width { generator: i, matrix: g.clone(), spectral_radius: rho, width: w, threshold_lo: lo, threshold_hi: hi };
        if w > hi {
            if n == 2 {
                trace.push(TraceEntry::new(
                    format!("width {w} exceeds 2π²/log ρ = {hi}"),
                    "width-threshold-criterion",
                    witness,
                ));
                return Ok(Verdict::new(VerdictTag::NotStein, trace));
            }
            trace.push(TraceEntry::new(
                format!("width {w} exceeds 2π²/log ρ = {hi}, but the width criterion is only known for two-dimensional fibers; the fiber itself is not in the Serre class"),
                "width-criterion-dimension-two",
                witness,
            ));
        } else if w >= lo {
            trace.push(TraceEntry::new(
                format!("width {w} is within the certified range [{lo}, {hi}] of the threshold"),
                "width-threshold-straddle",
                witness,
            ));
        } else {
            trace.push(TraceEntry::new(
                format!("width {w} does not exceed 2π²/log ρ = {lo}"),
                "width-criterion-gap",
                witness,
            ));
        }
    }
    Ok(Verdict::new(VerdictTag::Unknown, trace))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_i64(rows)
    }

    fn domain(n: usize, pattern: &[usize], gens: Vec<IntMatrix>) -> DomainSpec {
        DomainSpec { n, hyperplane_pattern: pattern.to_vec(), generators: gens, region: None }
    }

    #[test]
    fn golden_fiber_is_not_in_s() {
        let v = classify_domain(&domain(2, &[], vec![m(&[&[2, 1], &[1, 1]])]), &SearchParams::default()).unwrap();
        assert_eq!(v.tag, VerdictTag::NotInS);
        let Witness::Spectrum { class, .. } = &v.trace[1].witness else { panic!() };
        assert_eq!(class.tag, SpectrumTag::Hyperbolic2);
        assert!((class.spectral_radius.value - 2.618_033_988_749_895).abs() < 1e-12);
        assert!(v.replay().unwrap());
    }

    #[test]
    fn finite_groups_are_in_s() {
        let p = SearchParams::default();
        let rot = classify_domain(&domain(2, &[], vec![m(&[&[0, -1], &[1, 0]])]), &p).unwrap();
        assert_eq!(rot.tag, VerdictTag::InS);
        assert!(rot.replay().unwrap());
        let all = classify_domain(&domain(3, &[1, 2, 3], vec![IntMatrix::identity(3)]), &p).unwrap();
        assert_eq!(all.tag, VerdictTag::InS);
        let high = classify_domain(&domain(4, &[], vec![]), &p).unwrap();
        assert_eq!(high.tag, VerdictTag::Unknown);
    }

    #[test]
    fn inconsistent_inputs() {
        let p = SearchParams::default();
        let g = m(&[&[2, 1], &[1, 1]]);
        assert!(matches!(classify_domain(&domain(2, &[1], vec![g]), &p), Err(Error::InputInconsistent(_))));
        // column 1 is not e_1
        let bad = m(&[&[1, 0, 0], &[1, 2, 1], &[0, 1, 1]]);
        assert!(matches!(classify_domain(&domain(3, &[1], vec![bad]), &p), Err(Error::InputInconsistent(_))));
    }

    #[test]
    fn single_hyperplane_block() {
        let p = SearchParams::default();
        let g = m(&[&[1, 3, -1], &[0, 2, 1], &[0, 1, 1]]);
        let v = classify_domain(&domain(3, &[1], vec![g]), &p).unwrap();
        assert_eq!(v.tag, VerdictTag::NotInS);
        let r = m(&[&[1, 0, 0], &[0, 0, -1], &[0, 1, 0]]);
        assert_eq!(classify_domain(&domain(3, &[1], vec![r]), &p).unwrap().tag, VerdictTag::InS);
    }

    #[test]
    fn threshold_values() {
        let golden = (3.0 + 5f64.sqrt()) / 2.0;
        assert!((width_threshold(golden).unwrap() - 20.510).abs() < 1e-3);
        let e = (2.0 * std::f64::consts::PI.powi(2)).exp();
        assert!((width_threshold(e).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(width_threshold(1.0), Err(Error::RhoNotGreaterThanOne(1.0)));
    }

    #[test]
    fn bundle_width_rule() {
        let p = SearchParams::default();
        let fiber = domain(2, &[], vec![m(&[&[2, 1], &[1, 1]])]);
        let mk = |w: f64| BundleSpec {
            fiber: fiber.clone(),
            monodromies: vec![m(&[&[2, 1], &[1, 1]])],
            widths: Some(vec![Some(w)]),
        };
        let v = classify_bundle(&mk(25.0), &p).unwrap();
        assert_eq!(v.tag, VerdictTag::NotStein);
        assert!(v.replay().unwrap());
        assert_eq!(classify_bundle(&mk(5.0), &p).unwrap().tag, VerdictTag::Unknown);
        let finite = BundleSpec { fiber, monodromies: vec![m(&[&[0, -1], &[1, 0]])], widths: None };
        assert_eq!(classify_bundle(&finite, &p).unwrap().tag, VerdictTag::Stein);
    }
}
