//! Verification suites planned from a run configuration. Every check carries a
//! serialized [`CheckSpec`] under `inputs.replay`, so it can be re-executed alone.

use std::str::FromStr;
use std::time::Instant;

use num_traits::{One, Signed, Zero};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::ellipticity::{build_graph, ellipticity_check, heldout_check, sign_change_check, touch_check, HessianFunctional};
use crate::error::{Error, Result};
use crate::factorization::{
    classify_and_verify_position, classify_region, half_site_intervals_check, separation_check, verify_double_root,
    verify_factorization, verify_interlacing, verify_lambda67, verify_resultant_identity, Region,
};
use crate::hessian::{random_rational_sphere_point, random_rational_sphere_vector, Point12};
use crate::hyperbolicity::{
    certify_ratio, claim_sweep, k_stress, main_lemma_check, mu_difference_sweep, restricted_trace_exact, trace_identity_exact, Space,
};
use crate::isaacs::{isaacs_check, toy_pencils_check};
use crate::poly::{w0_root, W_MAX};
use crate::report::{Check, Status, SuiteReport, VerificationReport};
use crate::rng::{sample_rng, stream_id};
use crate::scalar::{format_rational, parse_rational, rat, Rational, Scalar};
use crate::spectra::haar_orthogonal_with;

/// Float sweeps are split into checks of this many samples.
pub const BATCH: u64 = 1000;
pub const LAMBDA67_TOL: f64 = 1e-9;
pub const W0_TOL: f64 = 1e-12;
pub const HELDOUT_TOL: f64 = 1e-7;
/// Share of separation witnesses needed for PASS; the rest is INCONCLUSIVE.
pub const SEPARATION_QUOTA: f64 = 0.99;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SuiteName {
    Factorization,
    Interlacing,
    Position,
    Resultant,
    Hyperbolicity,
    Ellipticity,
    Isaacs,
    Separation,
}

impl SuiteName {
    pub const ALL: [SuiteName; 8] = [
        SuiteName::Factorization,
        SuiteName::Interlacing,
        SuiteName::Position,
        SuiteName::Resultant,
        SuiteName::Hyperbolicity,
        SuiteName::Ellipticity,
        SuiteName::Isaacs,
        SuiteName::Separation,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            SuiteName::Factorization => "factorization",
            SuiteName::Interlacing => "interlacing",
            SuiteName::Position => "position",
            SuiteName::Resultant => "resultant",
            SuiteName::Hyperbolicity => "hyperbolicity",
            SuiteName::Ellipticity => "ellipticity",
            SuiteName::Isaacs => "isaacs",
            SuiteName::Separation => "separation",
        }
    }

    /// `all` expands to every suite.
    pub fn parse_selector(s: &str) -> Result<Vec<SuiteName>> {
        if s == "all" {
            return Ok(Self::ALL.to_vec());
        }
        Ok(vec![s.parse()?])
    }
}

impl FromStr for SuiteName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .iter()
            .copied()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }
}

mod rational_strings {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(format_rational))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational>, D::Error> {
        let raw: Vec<String> = Vec::deserialize(d)?;
        raw.iter().map(|t| parse_rational(t, false).map_err(serde::de::Error::custom)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub suites: Vec<SuiteName>,
    /// Empty means the per-suite default grid.
    #[serde(with = "rational_strings")]
    pub deltas: Vec<Rational>,
    pub dim: usize,
    pub samples: u64,
    pub points: u64,
    pub seed: u64,
    pub exact: bool,
    pub tolerance: Option<f64>,
    pub workers: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            suites: SuiteName::ALL.to_vec(),
            deltas: vec![],
            dim: 12,
            samples: 10_000,
            points: 100,
            seed: 0,
            exact: false,
            tolerance: None,
            workers: None,
        }
    }
}

fn grid(values: &[(i64, i64)]) -> Vec<Rational> {
    values.iter().map(|&(p, q)| rat(p, q)).collect()
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.suites.is_empty() {
            return Err(Error::Domain("no suite selected".into()));
        }
        if self.dim != 12 && self.dim != 11 {
            return Err(Error::Domain(format!("dimension {} is not 12 or 11", self.dim)));
        }
        if self.samples == 0 || self.points == 0 {
            return Err(Error::Domain("sample and point counts must be at least 1".into()));
        }
        let one = Rational::one();
        if let Some(d) = self.deltas.iter().find(|d| d.is_negative() || **d >= one) {
            return Err(Error::Domain(format!("δ = {} is outside [0, 1)", format_rational(d))));
        }
        if self.dim == 11 && self.deltas.iter().any(|d| !d.is_zero()) {
            return Err(Error::Domain("dimension 11 is stated for δ = 0 only".into()));
        }
        if let Some(t) = self.tolerance {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Error::Domain(format!("tolerance {t} must be positive")));
            }
        }
        if self.workers == Some(0) {
            return Err(Error::Domain("workers must be at least 1".into()));
        }
        Ok(())
    }

    /// The δ grid for a suite: the configured one, or the suite default.
    pub fn deltas_for(&self, suite: SuiteName) -> Vec<Rational> {
        if !self.deltas.is_empty() {
            return self.deltas.clone();
        }
        let quarters = grid(&[(0, 1), (1, 4), (1, 2), (3, 4)]);
        if self.dim == 11 {
            return vec![Rational::zero()];
        }
        match suite {
            SuiteName::Factorization | SuiteName::Resultant => quarters,
            SuiteName::Interlacing => vec![Rational::zero()],
            SuiteName::Position => quarters[1..].to_vec(),
            SuiteName::Hyperbolicity => (0..10).map(|k| rat(k, 10)).collect(),
            SuiteName::Ellipticity | SuiteName::Isaacs | SuiteName::Separation => grid(&[(0, 1), (1, 2)]),
        }
    }
}

/// One replayable unit of verification.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CheckSpec {
    Factorization { site: Vec<String>, delta: String },
    DoubleRoot { site: Vec<String>, delta: String },
    Interlacing { seed: u64, start: u64, count: u64 },
    HalfSiteIntervals,
    Lambda67 { seed: u64, start: u64, count: u64, tolerance: f64 },
    Position { r0: f64, m: f64, n: f64, delta: String, expect: Option<(usize, usize)> },
    PositionSweep { delta: String, seed: u64, start: u64, count: u64 },
    W0 { tolerance: f64 },
    Resultant { r0: String, m: String, n: String, delta: String },
    Ratio { delta: f64, dim: usize, samples: u64, seed: u64 },
    TraceExact { site: Vec<String>, delta: String },
    RestrictedTraceExact { site: Vec<String>, coordinate: usize },
    MainLemma { seed: u64, start: u64, count: u64 },
    MuDifference { samples: u64, seed: u64 },
    Claim { samples: u64, seed: u64 },
    KStress { samples: u64, seed: u64 },
    Heldout { dim: usize, delta: f64, graph: u64, sites: u64, seed: u64, tolerance: f64 },
    EllipticityConstant { dim: usize, delta: f64, graph: u64, trials: u64, seed: u64, ceiling: f64 },
    Touch { delta: f64, graph: u64, quadratics: u64, seed: u64 },
    SignChange { delta: f64, quadratics: u64, seed: u64 },
    Isaacs { delta: f64, dim: usize, pairs: u64, seed: u64 },
    ToyPencils,
    Separation { delta: f64, seed: u64, start: u64, count: u64 },
}

fn rational(s: &str) -> Result<Rational> {
    parse_rational(s, false)
}

fn rational_site(coords: &[String]) -> Result<Point12<Rational>> {
    Point12::from_coords(&coords.iter().map(|c| rational(c)).collect::<Result<Vec<_>>>()?)
}

fn site_strings(a: &Point12<Rational>) -> Vec<String> {
    a.coords().iter().map(format_rational).collect()
}

fn float_site(seed: u64, stream: &str, index: u64) -> Point12<f64> {
    Point12::random_unit(&mut sample_rng(seed, stream_id(stream), index))
}

/// Failing indices listed in a batch observation.
const LISTED: usize = 20;

impl CheckSpec {
    /// Replaces the pass tolerance where the check has one; residuals are unaffected.
    pub fn with_tolerance(mut self, tol: f64) -> Self {
        match &mut self {
            CheckSpec::Lambda67 { tolerance, .. } | CheckSpec::W0 { tolerance } | CheckSpec::Heldout { tolerance, .. } => {
                *tolerance = tol
            }
            _ => {}
        }
        self
    }

    pub fn run(&self) -> Result<Check> {
        match self {
            CheckSpec::Factorization { site, delta } => verify_factorization(&rational_site(site)?, &rational(delta)?),
            CheckSpec::DoubleRoot { site, delta } => verify_double_root(&rational_site(site)?, &rational(delta)?),
            CheckSpec::Interlacing { seed, start, count } => {
                let rows: Vec<(u64, bool, f64, f64)> = (*start..start + count)
                    .into_par_iter()
                    .map(|i| {
                        let r = verify_interlacing(&float_site(*seed, "interlacing", i))?;
                        Ok((i, r.pass, r.chain_slack, r.max_deviation))
                    })
                    .collect::<Result<_>>()?;
                let failed: Vec<u64> = rows.iter().filter(|r| !r.1).map(|r| r.0).collect();
                let slack = rows.iter().map(|r| r.2).fold(f64::INFINITY, f64::min);
                let dev = rows.iter().map(|r| r.3).fold(0.0, f64::max);
                Ok(Check::new("interlacing", Status::from_bool(failed.is_empty()))
                    .expected(json!({"chain_slack_at_least": -1e-10, "spectrum_deviation_at_most": 1e-9}))
                    .observed(json!({"sites": count, "failed": failed.len(), "first_failed": &failed[..failed.len().min(LISTED)],
                        "min_chain_slack": slack, "max_deviation": dev}))
                    .residual(dev))
            }
            CheckSpec::HalfSiteIntervals => half_site_intervals_check(),
            CheckSpec::Lambda67 { seed, start, count, tolerance } => {
                let rows: Vec<(u64, f64)> = (*start..start + count)
                    .into_par_iter()
                    .map(|i| Ok((i, verify_lambda67(&float_site(*seed, "lambda67", i), *tolerance)?.residual.unwrap_or(f64::INFINITY))))
                    .collect::<Result<_>>()?;
                let failed: Vec<u64> = rows.iter().filter(|r| !(r.1 <= *tolerance)).map(|r| r.0).collect();
                let worst = rows.iter().map(|r| r.1).fold(0.0, f64::max);
                Ok(Check::new("lambda67", Status::from_bool(failed.is_empty()))
                    .expected(json!({"deviation_at_most": tolerance}))
                    .observed(json!({"sites": count, "failed": failed.len(), "first_failed": &failed[..failed.len().min(LISTED)], "max_deviation": worst}))
                    .residual(worst))
            }
            CheckSpec::Position { r0, m, n, delta, expect } => {
                let site = crate::hessian::site_from_invariants(*r0, *m, *n)?;
                let r = classify_and_verify_position(&site, &rational(delta)?)?;
                let placed = expect.is_none_or(|e| r.mu2_positions == e);
                let mut c = r.to_check("position");
                if !placed {
                    c.status = Status::Fail;
                }
                Ok(c.expected(json!({"mu2_positions": expect.or(r.label.mu2_positions())})))
            }
            CheckSpec::PositionSweep { delta, seed, start, count } => {
                let d = rational(delta)?;
                let rows: Vec<(u64, bool)> = (*start..start + count)
                    .into_par_iter()
                    .map(|i| Ok((i, classify_and_verify_position(&float_site(*seed, "position", i), &d)?.pass)))
                    .collect::<Result<_>>()?;
                let failed: Vec<u64> = rows.iter().filter(|r| !r.1).map(|r| r.0).collect();
                Ok(Check::new("position-sweep", Status::from_bool(failed.is_empty()))
                    .expected(json!({"mu2_at_region_positions": count}))
                    .observed(json!({"sites": count, "failed": failed.len(), "first_failed": &failed[..failed.len().min(LISTED)]}))
                    .residual(failed.len() as f64))
            }
            CheckSpec::W0 { tolerance } => {
                let w0 = w0_root(0.0, 1e-15)?;
                let res = (w0 - W_MAX).abs();
                Ok(Check::new("w0-at-zero", Status::from_bool(res <= *tolerance))
                    .expected(json!(W_MAX))
                    .observed(json!(w0))
                    .residual(res))
            }
            CheckSpec::Resultant { r0, m, n, delta } => {
                Ok(verify_resultant_identity(&rational(r0)?, &rational(m)?, &rational(n)?, &rational(delta)?)?.0)
            }
            CheckSpec::Ratio { delta, dim, samples, seed } => certify_ratio(*delta, *dim, *samples, *seed),
            CheckSpec::TraceExact { site, delta } => trace_identity_exact(&rational_site(site)?, &rational(delta)?),
            CheckSpec::RestrictedTraceExact { site, coordinate } => restricted_trace_exact(&rational_site(site)?, *coordinate),
            CheckSpec::MainLemma { seed, start, count } => {
                let rows: Vec<(u64, bool, f64)> = (*start..start + count)
                    .into_par_iter()
                    .map(|i| {
                        let mut rng = sample_rng(*seed, stream_id("main-lemma"), i);
                        let a = Point12::random_unit(&mut rng);
                        let b = Point12::random_unit(&mut rng);
                        let o = haar_orthogonal_with(&mut rng, 12);
                        let c = main_lemma_check(&a, &b, &o)?;
                        Ok((i, c.passed(), c.residual.unwrap_or(f64::INFINITY)))
                    })
                    .collect::<Result<_>>()?;
                let failed: Vec<u64> = rows.iter().filter(|r| !r.1).map(|r| r.0).collect();
                let worst = rows.iter().map(|r| r.2).fold(0.0, f64::max);
                Ok(Check::new("main-lemma", Status::from_bool(failed.is_empty()))
                    .expected(json!({"trace_identity_and_inequalities": count}))
                    .observed(json!({"samples": count, "failed": failed.len(), "first_failed": &failed[..failed.len().min(LISTED)], "max_trace_residual": worst}))
                    .residual(worst))
            }
            CheckSpec::MuDifference { samples, seed } => mu_difference_sweep(*samples, *seed),
            CheckSpec::Claim { samples, seed } => claim_sweep(*samples, *seed),
            CheckSpec::KStress { samples, seed } => k_stress(*samples, *seed),
            CheckSpec::Heldout { dim, delta, graph, sites, seed, tolerance } => {
                let f = functional(*dim, *delta, *graph, *seed)?;
                heldout_check(&f, *sites as usize, seed.wrapping_add(1), *tolerance)
            }
            CheckSpec::EllipticityConstant { dim, delta, graph, trials, seed, ceiling } => {
                let f = functional(*dim, *delta, *graph, *seed)?;
                ellipticity_check(&f, *trials as usize, seed.wrapping_add(2), *ceiling)
            }
            CheckSpec::Touch { delta, graph, quadratics, seed } => {
                let f = functional(12, *delta, *graph, *seed)?;
                let x0 = float_site(*seed, "touch-centre", 0).scale(&0.7);
                touch_check(&f, &x0, *quadratics as usize, seed.wrapping_add(3))
            }
            CheckSpec::SignChange { delta, quadratics, seed } => sign_change_check(*delta, *quadratics as usize, *seed),
            CheckSpec::Isaacs { delta, dim, pairs, seed } => isaacs_check(*delta, &Space::for_dim(*dim)?, *pairs, *seed),
            CheckSpec::ToyPencils => toy_pencils_check(),
            CheckSpec::Separation { delta, seed, start, count } => {
                let rows: Vec<(u64, Status, f64)> = (*start..start + count)
                    .into_par_iter()
                    .map(|i| {
                        let mut rng = sample_rng(*seed, stream_id("separation"), i);
                        let a = Point12::random_unit(&mut rng);
                        let b = Point12::random_unit(&mut rng);
                        let c = separation_check(&a, &b, *delta)?;
                        Ok((i, c.status, c.residual.unwrap_or(f64::NEG_INFINITY)))
                    })
                    .collect::<Result<_>>()?;
                let found = rows.iter().filter(|r| r.1 == Status::Pass).count();
                let missing: Vec<u64> = rows.iter().filter(|r| r.1 != Status::Pass).map(|r| r.0).collect();
                let share = found as f64 / *count as f64;
                // the claim is existential, so a shortfall is never a failure
                let status = if share >= SEPARATION_QUOTA { Status::Pass } else { Status::Inconclusive };
                let margin = rows.iter().map(|r| r.2).fold(f64::INFINITY, f64::min);
                Ok(Check::new("separation", status)
                    .expected(json!({"share_at_least": SEPARATION_QUOTA}))
                    .observed(json!({"pairs": count, "found": found, "share": share, "inconclusive": &missing[..missing.len().min(LISTED)], "min_margin": margin}))
                    .residual(margin))
            }
        }
    }
}

fn functional(dim: usize, delta: f64, graph: u64, seed: u64) -> Result<HessianFunctional> {
    let space = Space::for_dim(dim)?;
    let g = build_graph(&space, delta, graph as usize, seed)?;
    HessianFunctional::new(g, space)
}

fn batches(total: u64) -> impl Iterator<Item = (u64, u64)> {
    (0..total.div_ceil(BATCH)).map(move |b| (b * BATCH, BATCH.min(total - b * BATCH)))
}

/// Specs for one suite under a configuration.
pub fn plan(suite: SuiteName, cfg: &RunConfig) -> Result<Vec<CheckSpec>> {
    let deltas = cfg.deltas_for(suite);
    let (seed, n_points, n_samples) = (cfg.seed, cfg.points, cfg.samples);
    let mut specs = Vec::new();
    match suite {
        SuiteName::Factorization => {
            for i in 0..n_points {
                let a = random_rational_sphere_point(&mut sample_rng(seed, stream_id("factorization-sites"), i), 5, 4);
                for d in &deltas {
                    let (site, delta) = (site_strings(&a), format_rational(d));
                    specs.push(CheckSpec::Factorization { site: site.clone(), delta: delta.clone() });
                    specs.push(CheckSpec::DoubleRoot { site, delta });
                }
            }
        }
        SuiteName::Interlacing => {
            specs.push(CheckSpec::HalfSiteIntervals);
            for (start, count) in batches(n_samples) {
                specs.push(CheckSpec::Interlacing { seed, start, count });
                let tolerance = cfg.tolerance.unwrap_or(LAMBDA67_TOL);
                specs.push(CheckSpec::Lambda67 { seed, start, count, tolerance });
            }
        }
        SuiteName::Position => {
            specs.push(CheckSpec::W0 { tolerance: cfg.tolerance.unwrap_or(W0_TOL) });
            let s = 1.0 / 3f64.sqrt();
            let probes = [((0.05, 0.05, 0.05), Region::BMinus, (6, 7)), ((s, s, s - 0.01), Region::BPlus, (5, 6)), ((-s, s, s - 0.01), Region::BPlus, (7, 8))];
            for d in &deltas {
                for ((r0, m, n), region, expect) in probes {
                    let snapped = crate::factorization::snapped_invariants(&crate::hessian::site_from_invariants(r0, m, n)?)?;
                    // probes outside their region at this δ are skipped
                    if classify_region(&snapped[0], &snapped[1], &snapped[2], d).region == region {
                        specs.push(CheckSpec::Position { r0, m, n, delta: format_rational(d), expect: Some(expect) });
                    }
                }
                for (start, count) in batches(n_points) {
                    specs.push(CheckSpec::PositionSweep { delta: format_rational(d), seed, start, count });
                }
            }
        }
        SuiteName::Resultant => {
            let h = rat(1, 2);
            specs.push(CheckSpec::Resultant { r0: format_rational(&h), m: format_rational(&h), n: format_rational(&h), delta: "0".into() });
            for i in 1..n_points {
                let mut rng = sample_rng(seed, stream_id("resultant-tuples"), i);
                let d = &deltas[i as usize % deltas.len()];
                let (r0, m, n) = if i % 5 == 0 {
                    let v = random_rational_sphere_vector(&mut rng, 3, 5, 4);
                    (v[0].clone(), v[1].abs(), v[2].abs())
                } else if i % 5 == 1 {
                    // near the diagonal corner, where |W| can exceed W₀(δ)
                    let mut c = || rat(rng.random_range(50..=57i64), 100);
                    let (r0, m, n) = (c(), c(), c());
                    (if i % 2 == 0 { -r0 } else { r0 }, m, n)
                } else {
                    loop {
                        let den = rng.random_range(2..=12i64);
                        let r0 = rat(rng.random_range(-den..=den), den);
                        let m = rat(rng.random_range(1..=den), den);
                        let n = rat(rng.random_range(1..=den), den);
                        if &r0 * &r0 + &m * &m + &n * &n <= Rational::one() {
                            break (r0, m, n);
                        }
                    }
                };
                specs.push(CheckSpec::Resultant { r0: format_rational(&r0), m: format_rational(&m), n: format_rational(&n), delta: format_rational(d) });
            }
        }
        SuiteName::Hyperbolicity => {
            for d in &deltas {
                specs.push(CheckSpec::Ratio { delta: d.to_f64(), dim: cfg.dim, samples: n_samples, seed });
            }
            for i in 0..n_points {
                let mut rng = sample_rng(seed, stream_id("trace-sites"), i);
                if cfg.dim == 12 {
                    let a = random_rational_sphere_point(&mut rng, 5, 4);
                    let d = &deltas[i as usize % deltas.len()];
                    specs.push(CheckSpec::TraceExact { site: site_strings(&a), delta: format_rational(d) });
                } else {
                    let mut c = vec![Rational::zero()];
                    c.extend(random_rational_sphere_vector(&mut rng, 11, 5, 4));
                    specs.push(CheckSpec::RestrictedTraceExact { site: c.iter().map(format_rational).collect(), coordinate: 0 });
                }
            }
            if cfg.dim == 12 {
                for (start, count) in batches(n_points * 10) {
                    specs.push(CheckSpec::MainLemma { seed, start, count });
                }
                specs.push(CheckSpec::MuDifference { samples: n_samples, seed });
                specs.push(CheckSpec::Claim { samples: n_samples, seed });
                specs.push(CheckSpec::KStress { samples: n_samples, seed });
            }
        }
        SuiteName::Ellipticity => {
            let ceiling = if cfg.dim == 12 { 1e5 } else { 1e4 };
            for d in &deltas {
                let delta = d.to_f64();
                let graph = n_samples;
                let tolerance = cfg.tolerance.unwrap_or(HELDOUT_TOL);
                specs.push(CheckSpec::Heldout { dim: cfg.dim, delta, graph, sites: n_points, seed, tolerance });
                specs.push(CheckSpec::EllipticityConstant { dim: cfg.dim, delta, graph, trials: n_points, seed, ceiling });
                if cfg.dim == 12 {
                    specs.push(CheckSpec::Touch { delta, graph, quadratics: n_points, seed });
                    if delta > 0.0 {
                        specs.push(CheckSpec::SignChange { delta, quadratics: n_points, seed });
                    }
                }
            }
        }
        SuiteName::Isaacs => {
            specs.push(CheckSpec::ToyPencils);
            for d in &deltas {
                specs.push(CheckSpec::Isaacs { delta: d.to_f64(), dim: cfg.dim, pairs: n_points, seed });
            }
        }
        SuiteName::Separation => {
            for d in &deltas {
                for (start, count) in batches(n_points) {
                    specs.push(CheckSpec::Separation { delta: d.to_f64(), seed, start, count });
                }
            }
        }
    }
    Ok(specs)
}

/// Runs a spec and files the result under a suite-unique id. Errors become FAIL
/// records that keep the replay data.
pub fn execute(suite: SuiteName, index: usize, spec: &CheckSpec) -> Check {
    let replay = serde_json::to_value(spec).unwrap_or(Value::Null);
    let (base, detail, mut check) = match spec.run() {
        Ok(c) => (c.id.clone(), c.inputs.clone(), c),
        Err(e) => ("error".to_string(), Value::Null, Check::new("error", Status::Fail).observed(json!({"error": e.to_string()}))),
    };
    check.id = format!("{}/{index:05}/{base}", suite.as_str());
    check.inputs = json!({"replay": replay, "detail": detail});
    check
}

fn with_pool<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match workers {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(n).build().map_err(|e| Error::Domain(e.to_string()))?;
            Ok(pool.install(f))
        }
        None => Ok(f()),
    }
}

/// Plans and runs every selected suite. The content is deterministic in
/// `(config, seed)`; only wall times vary.
pub fn run_suite(cfg: &RunConfig) -> Result<VerificationReport> {
    cfg.validate()?;
    let plans: Vec<(SuiteName, Vec<CheckSpec>)> = cfg.suites.iter().map(|&s| Ok((s, plan(s, cfg)?))).collect::<Result<_>>()?;
    let suites = with_pool(cfg.workers, || {
        plans
            .iter()
            .map(|(suite, specs)| {
                let t = Instant::now();
                let checks: Vec<Check> = specs.par_iter().enumerate().map(|(i, spec)| execute(*suite, i, spec)).collect();
                SuiteReport::new(suite.as_str(), checks, t.elapsed().as_secs_f64() * 1e3)
            })
            .collect()
    })?;
    Ok(VerificationReport::new(serde_json::to_value(cfg)?, suites))
}

/// Re-executes one recorded check. A tolerance override changes the pass
/// threshold of tolerance-governed checks but never their residuals.
pub fn replay(report: &VerificationReport, id: &str, tolerance: Option<f64>, workers: Option<usize>) -> Result<VerificationReport> {
    let (suite, check) = report.find(id).ok_or_else(|| Error::NotFound(format!("check {id:?}")))?;
    let spec: CheckSpec = serde_json::from_value(check.inputs.get("replay").cloned().unwrap_or(Value::Null))
        .map_err(|e| Error::Format(format!("check {id:?} has no replay data: {e}")))?;
    let spec = match tolerance {
        Some(t) => spec.with_tolerance(t),
        None => spec,
    };
    let name: SuiteName = suite.name.parse()?;
    let t = Instant::now();
    let mut out = with_pool(workers, || execute(name, 0, &spec))?;
    out.id = id.to_string();
    let config = json!({"replay": id, "source_config": report.config, "tolerance": tolerance});
    Ok(VerificationReport::new(config, vec![SuiteReport::new(name.as_str(), vec![out], t.elapsed().as_secs_f64() * 1e3)]))
}
