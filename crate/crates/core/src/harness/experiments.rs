//! Experiment drivers: the routines that turn the inequalities and
//! identities into pass/fail suites over generated polytopes.

use std::time::Instant;

use nalgebra::DVector;
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map};

use crate::complex::is_stacked_2sphere;
use crate::enumeration::{g_from_h, h_from_f, shadow, FaceVector, GVector};
use crate::error::{Error, Result};
use crate::generators::{self, GeneratorKind, GeneratorSpec};
use crate::geometry::shadow::{cap_subspaces, shadow_boundary_subcomplex, strip_vertex_sets};
use crate::geometry::{hausdorff_to_ball, Polytope};
use crate::harness::report::{
    least_squares, mix_seed, ExperimentReport, ScalingPoint, ScalingSeries, TrialRecord,
};
use crate::homology::betti;
use crate::stress;

fn g_vector_of(p: &Polytope) -> GVector {
    g_from_h(&h_from_f(&FaceVector::of_complex(&p.boundary_complex())))
}

fn big_to_f64(v: &BigInt) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}

// ---------------------------------------------------------------------------
// verify-qlbt
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QlbtConfig {
    pub specs: Vec<GeneratorSpec>,
    pub trials_per_spec: usize,
    pub seed: u64,
}

impl Default for QlbtConfig {
    fn default() -> Self {
        QlbtConfig {
            specs: vec![
                GeneratorSpec::new(GeneratorKind::SphereUniform { n: 150 }, 3, 31),
                GeneratorSpec::new(GeneratorKind::SphereUniform { n: 90 }, 4, 32),
                GeneratorSpec::new(GeneratorKind::SphereUniform { n: 36 }, 5, 33),
                GeneratorSpec::new(GeneratorKind::Cyclic { n: 10 }, 4, 0),
                GeneratorSpec::new(GeneratorKind::Cross, 4, 0),
                GeneratorSpec::new(GeneratorKind::Cross, 3, 0),
                GeneratorSpec::new(GeneratorKind::Stacked { steps: 12 }, 4, 34),
                GeneratorSpec::new(GeneratorKind::SphereUniform { n: 120 }, 3, 35),
            ],
            trials_per_spec: 260,
            seed: 2024,
        }
    }
}

/// Samples a vertex subset W of P: uniform random subsets, geometric strips,
/// and shadow-boundary vertex sets, in rotation.
fn sample_subset(
    p: &Polytope,
    k: usize,
    sampler: usize,
    rng: &mut ChaCha8Rng,
) -> (String, Option<Vec<u32>>) {
    let n = p.n_vertices();
    let d = p.d();
    match sampler % 3 {
        0 => {
            let size = rng.random_range(1..=n);
            let mut idx: Vec<usize> = (0..n).collect();
            // Partial Fisher-Yates.
            for i in 0..size {
                let j = rng.random_range(i..n);
                idx.swap(i, j);
            }
            let mut w: Vec<u32> = idx[..size].iter().map(|&i| i as u32).collect();
            w.sort_unstable();
            ("random_subset".into(), Some(w))
        }
        1 => {
            let u = {
                let mut v = DVector::from_iterator(d, (0..d).map(|_| rng.random_range(-1.0..1.0f64)));
                while v.norm() < 1e-6 {
                    v = DVector::from_iterator(d, (0..d).map(|_| rng.random_range(-1.0..1.0f64)));
                }
                let n = v.norm();
                v / n
            };
            let vals: Vec<f64> = (0..n).map(|i| u.dot(p.vertices().point(i))).collect();
            let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let a = lo + rng.random_range(0.0..1.0f64) * (hi - lo);
            let width = rng.random_range(0.05..0.5) * (hi - lo);
            let w: Vec<u32> = (0..n)
                .filter(|&i| vals[i] >= a && vals[i] <= a + width)
                .map(|i| i as u32)
                .collect();
            ("geometric_strip".into(), Some(w))
        }
        _ => {
            // Shadow-boundary vertex sets need a generic projection; retry a
            // few times before giving up on the trial.
            for _ in 0..5 {
                let basis: Vec<DVector<f64>> = (0..d - k)
                    .map(|_| DVector::from_iterator(d, (0..d).map(|_| rng.random_range(-1.0..1.0f64))))
                    .collect();
                match shadow_boundary_subcomplex(p, &basis) {
                    Ok(shadow) => {
                        return (
                            "shadow_boundary".into(),
                            Some(shadow.vertex_set().to_vec()),
                        );
                    }
                    Err(_) => continue,
                }
            }
            ("shadow_boundary".into(), None)
        }
    }
}

/// Checks beta_{d-k-1}(Delta_W) <= g_k over sampled subsets.
pub fn verify_qlbt(cfg: &QlbtConfig) -> Result<ExperimentReport> {
    let started = Instant::now();
    let mut prepared = Vec::new();
    for spec in &cfg.specs {
        let p = spec.build()?;
        let g = g_vector_of(&p);
        prepared.push((spec.label(), p, g));
    }
    let trials: Vec<TrialRecord> = prepared
        .par_iter()
        .enumerate()
        .flat_map(|(spec_idx, (label, p, g))| {
            (0..cfg.trials_per_spec)
                .into_par_iter()
                .map(move |t| {
                    let seed = mix_seed(cfg.seed, spec_idx as u64, t as u64);
                    let mut rec = TrialRecord::new(spec_idx * cfg.trials_per_spec + t, seed);
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    let d = p.d();
                    let kmax = (d / 2).max(1);
                    let k = rng.random_range(1..=kmax);
                    let (sampler, subset) = sample_subset(p, k, t, &mut rng);
                    rec.set("polytope", label.as_str());
                    rec.set("k", k);
                    rec.set("sampler", sampler);
                    let Some(w) = subset else {
                        rec.skip("no generic projection found");
                        return rec;
                    };
                    rec.set("subset_size", w.len());
                    let bc = p.boundary_complex();
                    let induced = bc.induced(&w).expect("subset of vertex set");
                    let beta = betti(&induced).betti(d as i64 - k as i64 - 1);
                    let gk = g.entry(k);
                    rec.set("beta", beta);
                    rec.set("g_k", big_to_f64(&gk));
                    if BigInt::from(beta) > gk {
                        rec.violate(format!(
                            "beta_{}(Delta_W) = {} > g_{} = {} on {}",
                            d - k - 1,
                            beta,
                            k,
                            gk,
                            label
                        ));
                        // Dump the offending instance for post-mortem.
                        rec.set("instance_polytope", p.to_text());
                        rec.set_json(
                            "instance_subset",
                            json!(w),
                        );
                    }
                    rec
                })
                .collect::<Vec<_>>()
        })
        .collect();
    let mut summary = Map::new();
    let max_beta = trials
        .iter()
        .filter_map(|t| t.data.get("beta").and_then(|v| v.as_u64()))
        .max()
        .unwrap_or(0);
    summary.insert("max_beta_observed".into(), max_beta.into());
    Ok(ExperimentReport::assemble(
        "verify-qlbt",
        serde_json::to_value(cfg)?,
        trials,
        summary,
        started.elapsed().as_secs_f64(),
    ))
}

// ---------------------------------------------------------------------------
// stress-crosscheck
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StressCrosscheckConfig {
    pub specs: Vec<GeneratorSpec>,
    /// Skip the exact backend above this many unknowns ((k-1)-faces).
    pub exact_unknown_cap: usize,
}

impl Default for StressCrosscheckConfig {
    fn default() -> Self {
        let mut specs = vec![
            GeneratorSpec::new(GeneratorKind::Simplex, 3, 0),
            GeneratorSpec::new(GeneratorKind::Simplex, 4, 0),
            GeneratorSpec::new(GeneratorKind::Simplex, 5, 0),
            GeneratorSpec::new(GeneratorKind::Simplex, 6, 0),
            GeneratorSpec::new(GeneratorKind::Cross, 3, 0),
            GeneratorSpec::new(GeneratorKind::Cross, 4, 0),
            GeneratorSpec::new(GeneratorKind::Cyclic { n: 7 }, 4, 0),
            GeneratorSpec::new(GeneratorKind::Cyclic { n: 8 }, 4, 0),
            GeneratorSpec::new(GeneratorKind::Cyclic { n: 9 }, 4, 0),
        ];
        for steps in 5..=20 {
            specs.push(GeneratorSpec::new(GeneratorKind::Stacked { steps }, 4, 40 + steps as u64));
        }
        for (n, d, seed) in [(20, 4, 61), (30, 4, 62), (20, 5, 63), (30, 5, 64)] {
            specs.push(GeneratorSpec::new(GeneratorKind::SphereUniform { n }, d, seed));
        }
        StressCrosscheckConfig { specs, exact_unknown_cap: 5000 }
    }
}

/// Asserts dim(affine k-stresses) = g_k with agreeing backends, and the
/// graph-stress identity dim(stress space) = g_2.
pub fn stress_crosscheck(cfg: &StressCrosscheckConfig) -> Result<ExperimentReport> {
    let started = Instant::now();
    let trials: Vec<TrialRecord> = cfg
        .specs
        .par_iter()
        .enumerate()
        .map(|(i, spec)| {
            let mut rec = TrialRecord::new(i, spec.seed);
            rec.set("polytope", spec.label());
            let p = match spec.build() {
                Ok(p) => p,
                Err(e) => {
                    rec.skip(format!("generator failed: {e}"));
                    return rec;
                }
            };
            let d = p.d();
            let bc = p.boundary_complex();
            let coords = p.vertices().points().to_vec();
            let g = g_vector_of(&p);
            let mut dims = Vec::new();
            for k in 1..=d / 2 {
                let n_unknowns = bc.faces_of_dim(k as i64 - 1).len();
                if n_unknowns > cfg.exact_unknown_cap {
                    rec.skip(format!("{n_unknowns} unknowns exceed the exact cap"));
                    return rec;
                }
                match stress::affine_stress_dim_checked(&bc, &coords, k) {
                    Ok(dim) => {
                        let gk = g.entry(k);
                        if BigInt::from(dim) != gk {
                            rec.violate(format!(
                                "dim affine {k}-stress = {dim} != g_{k} = {gk} on {}",
                                spec.label()
                            ));
                        }
                        dims.push(dim);
                    }
                    Err(e) => rec.violate(format!("{k}-stress backend failure: {e}")),
                }
            }
            rec.set_json("affine_dims", json!(dims));
            // Kalai's identity: classical graph stress dimension equals g_2
            // (h_2 - h_1, defined for every d >= 3).
            if d >= 3 {
                let h = h_from_f(&FaceVector::of_complex(&bc));
                let g2 = &h.entries()[2] - &h.entries()[1];
                let fw = stress::Framework::from_polytope_graph(&p);
                match stress::stress_dim_checked(&fw) {
                    Ok(dim) => {
                        rec.set("graph_stress_dim", dim);
                        rec.set("g_2", big_to_f64(&g2));
                        if BigInt::from(dim) != g2 {
                            rec.violate(format!(
                                "graph stress dim {dim} != g_2 = {g2} on {}",
                                spec.label()
                            ));
                        }
                        if matches!(spec.kind, GeneratorKind::Stacked { .. }) && dim != 0 {
                            rec.violate(format!("stacked polytope with nonzero g_2 = {dim}"));
                        }
                    }
                    Err(e) => rec.violate(format!("graph stress backend failure: {e}")),
                }
            }
            rec
        })
        .collect();
    Ok(ExperimentReport::assemble(
        "stress-crosscheck",
        serde_json::to_value(cfg)?,
        trials,
        Map::new(),
        started.elapsed().as_secs_f64(),
    ))
}

// ---------------------------------------------------------------------------
// witness-strips
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WitnessStripConfig {
    pub d: usize,
    pub k: usize,
    pub eps_schedule: Vec<f64>,
    pub seed: u64,
    /// Cap radius in units of sqrt(eps).
    #[serde(default = "default_cap_radius_factor")]
    pub cap_radius_factor: f64,
    /// Cap-center separation in units of sqrt(eps).
    #[serde(default = "default_separation_factor")]
    pub separation_factor: f64,
}

fn default_cap_radius_factor() -> f64 {
    11.0
}

fn default_separation_factor() -> f64 {
    35.0
}

impl WitnessStripConfig {
    pub fn default_d3() -> Self {
        WitnessStripConfig {
            d: 3,
            k: 1,
            eps_schedule: vec![0.002, 0.001],
            seed: 5,
            cap_radius_factor: 11.0,
            separation_factor: 35.0,
        }
    }

    pub fn default_d4() -> Self {
        WitnessStripConfig {
            d: 4,
            k: 2,
            eps_schedule: vec![0.012, 0.008],
            seed: 6,
            cap_radius_factor: 11.0,
            separation_factor: 35.0,
        }
    }
}

/// End-to-end witness-strip pipeline: cap centers separated by 35 sqrt(eps),
/// caps of radius 11 sqrt(eps), strips harvested around (d-k)-subspaces, and
/// the resulting Betti witnesses summed against g_k.
pub fn witness_strips(cfg: &WitnessStripConfig) -> Result<ExperimentReport> {
    let started = Instant::now();
    let (d, k) = (cfg.d, cfg.k);
    if k < 1 || k > d / 2 {
        return Err(Error::InfeasibleCaps(format!("k={k} out of range for d={d}")));
    }
    let trials: Vec<TrialRecord> = cfg
        .eps_schedule
        .par_iter()
        .enumerate()
        .map(|(i, &eps)| {
            let seed = mix_seed(cfg.seed, 71, i as u64);
            let mut rec = TrialRecord::new(i, seed);
            rec.set("eps", eps);
            match witness_strip_trial(cfg, eps, seed, &mut rec) {
                Ok(()) => {}
                Err(e) => rec.skip(format!("{e}")),
            }
            rec
        })
        .collect();
    let mut summary = Map::new();
    summary.insert(
        "net_construction".into(),
        json!("multi-axis lattice lift (full-sphere extension of the single-sheet net)"),
    );
    Ok(ExperimentReport::assemble(
        "witness-strips",
        serde_json::to_value(cfg)?,
        trials,
        summary,
        started.elapsed().as_secs_f64(),
    ))
}

fn witness_strip_trial(
    cfg: &WitnessStripConfig,
    eps: f64,
    seed: u64,
    rec: &mut TrialRecord,
) -> Result<()> {
    let (d, k) = (cfg.d, cfg.k);
    let sep = cfg.separation_factor * eps.sqrt();
    let cap_chord = cfg.cap_radius_factor * eps.sqrt();
    if 1.0 - cap_chord * cap_chord / 2.0 <= 0.0 {
        return Err(Error::InfeasibleCaps(format!("eps = {eps} too large for the cap radius")));
    }
    // Inscribed net hull with measured Hausdorff distance below eps.
    let mut spacing = (eps / 1.4).sqrt();
    let mut hull = None;
    for _ in 0..4 {
        let p = generators::net_hull_relaxed(spacing, d, seed)?;
        let delta = hausdorff_to_ball(&p)?;
        if delta < eps {
            hull = Some((p, delta));
            break;
        }
        spacing *= 0.8;
    }
    let Some((p, delta)) = hull else {
        return Err(Error::InfeasibleCaps("could not reach delta < eps".into()));
    };
    rec.set("spacing", spacing);
    rec.set("delta_h", delta);
    rec.set("f0", p.n_vertices());

    // Edge-length bound from the inscribed geometry.
    let longest = p.longest_edge();
    rec.set("longest_edge", longest);
    if longest > 4.0 * delta.sqrt() {
        rec.violate(format!(
            "longest edge {longest:.5} exceeds 4 sqrt(delta) = {:.5}",
            4.0 * delta.sqrt()
        ));
    }

    // Cap centers: a coarse net pruned to pairwise separation.
    let caps = generators::cap_centers(sep, d, mix_seed(seed, 5, 5));
    rec.set("cap_count", caps.len());
    let subspaces =
        cap_subspaces(caps.points(), eps, k, mix_seed(seed, 7, 7), cfg.cap_radius_factor)?;
    let strips = strip_vertex_sets(&p, &subspaces)?;

    // Pairwise disjointness, with the triangle-inequality gap
    // (separation - 2 cap_radius - 2 * edge bound) sqrt(eps); at the default
    // constants that is (35 - 11 - 4 - 11 - 4) = 5 sqrt(eps).
    let gap_factor = cfg.separation_factor - 2.0 * cfg.cap_radius_factor - 8.0;
    let mut min_gap = f64::INFINITY;
    for i in 0..strips.len() {
        for j in i + 1..strips.len() {
            if strips[i].iter().any(|v| strips[j].contains(v)) {
                rec.violate(format!("strips {i} and {j} share a vertex"));
            }
            for &a in &strips[i] {
                for &b in &strips[j] {
                    let dist = (p.vertices().point(a) - p.vertices().point(b)).norm();
                    min_gap = min_gap.min(dist);
                }
            }
        }
    }
    if strips.len() > 1 {
        rec.set("min_inter_strip_distance", min_gap);
        if gap_factor > 0.0 && min_gap < gap_factor * eps.sqrt() {
            rec.violate(format!(
                "inter-strip gap {min_gap:.5} below {gap_factor} sqrt(eps) = {:.5}",
                gap_factor * eps.sqrt()
            ));
        }
    }

    // Each strip must carry a (d-k-1)-cycle, and the witnesses sum below g_k.
    let bc = p.boundary_complex();
    let g = g_vector_of(&p);
    let gk = g.entry(k);
    let mut total_beta: u64 = 0;
    let mut strip_betas = Vec::new();
    for (i, strip) in strips.iter().enumerate() {
        if strip.is_empty() {
            rec.violate(format!("strip {i} is empty"));
            continue;
        }
        let w: Vec<u32> = strip.iter().map(|&v| v as u32).collect();
        let induced = bc.induced(&w)?;
        let beta = betti(&induced).betti(d as i64 - k as i64 - 1);
        strip_betas.push(beta);
        total_beta += beta;
        if beta < 1 {
            rec.violate(format!("strip {i} has beta_{} = 0", d - k - 1));
        }
    }
    rec.set_json("strip_betas", json!(strip_betas));
    rec.set("witnesses", strips.len());
    rec.set("total_beta", total_beta);
    rec.set("g_k", big_to_f64(&gk));
    if BigInt::from(total_beta) > gk {
        rec.violate(format!("sum of strip witnesses {total_beta} exceeds g_{k} = {gk}"));
    }
    if BigInt::from(strips.len()) > gk {
        rec.violate(format!("strip count {} exceeds g_{k} = {gk}", strips.len()));
    }
    rec.set("g_k_slack", big_to_f64(&(gk - BigInt::from(total_beta))));
    Ok(())
}

// ---------------------------------------------------------------------------
// scaling
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScalingConfig {
    pub d: usize,
    pub k: usize,
    pub spacings: Vec<f64>,
    pub seed: u64,
    /// Accepted band around the target slope -(d-1)/2: [lo_offset, hi_offset].
    pub slope_band: (f64, f64),
    /// Optional ellipsoid body (symmetric positive definite matrix A, the
    /// body being A^{1/2} of the unit ball). Hulls are mapped into the body
    /// and distances taken from the certified pullback interval; the default
    /// is the unit ball.
    #[serde(default)]
    pub ellipsoid: Option<Vec<Vec<f64>>>,
}

impl ScalingConfig {
    pub fn default_d3() -> Self {
        ScalingConfig {
            d: 3,
            k: 1,
            spacings: vec![0.2, 0.141, 0.1, 0.0707, 0.05, 0.0354, 0.025],
            seed: 12,
            slope_band: (-0.5, 0.3),
            ellipsoid: None,
        }
    }

    pub fn default_d4() -> Self {
        ScalingConfig {
            d: 4,
            k: 2,
            spacings: vec![0.26, 0.21, 0.17, 0.135, 0.105, 0.075],
            seed: 13,
            slope_band: (-0.5, 0.3),
            ellipsoid: None,
        }
    }
}

/// Measures g_k against the Hausdorff distance over net hulls and fits the
/// log-log slope; the quantitative lower bound predicts -(d-1)/2. For an
/// ellipsoid body the hulls are mapped into the body, the distance is the
/// midpoint of the certified interval, and the interval is recorded.
pub fn scaling_fit(cfg: &ScalingConfig) -> Result<ExperimentReport> {
    let started = Instant::now();
    if cfg.spacings.len() < 5 {
        return Err(Error::InvalidGenerator("scaling needs at least 5 spacings".into()));
    }
    let body = match &cfg.ellipsoid {
        None => crate::geometry::BodySpec::unit_ball(cfg.d),
        Some(rows) => {
            if rows.len() != cfg.d || rows.iter().any(|r| r.len() != cfg.d) {
                return Err(Error::InvalidBody("ellipsoid matrix of wrong shape".into()));
            }
            crate::geometry::BodySpec::ellipsoid(nalgebra::DMatrix::from_fn(
                cfg.d,
                cfg.d,
                |r, c| rows[r][c],
            ))?
        }
    };
    let (transform, _, _) = body.transform();
    let points: Vec<Result<(ScalingPoint, f64, (f64, f64))>> = cfg
        .spacings
        .par_iter()
        .enumerate()
        .map(|(i, &spacing)| {
            let ball_hull =
                generators::net_hull_relaxed(spacing, cfg.d, mix_seed(cfg.seed, 3, i as u64))?;
            let p = ball_hull.linear_image(&transform)?;
            let (lo, hi) = crate::geometry::hausdorff_to_body(&p, &body)?;
            let delta = (lo * hi).sqrt();
            let g = g_vector_of(&p);
            let gk = big_to_f64(&g.entry(cfg.k));
            // The edge bound is an inscribed-in-the-ball statement; measure
            // it on the pullback hull.
            let longest = ball_hull.longest_edge();
            Ok((
                ScalingPoint {
                    spacing,
                    delta_h: delta,
                    f0: p.n_vertices() as u64,
                    g_k: gk,
                    witnesses: 0,
                },
                longest,
                (lo, hi),
            ))
        })
        .collect();

    let mut trials = Vec::new();
    let mut series_points = Vec::new();
    for (i, res) in points.into_iter().enumerate() {
        let mut rec = TrialRecord::new(i, mix_seed(cfg.seed, 3, i as u64));
        match res {
            Ok((pt, longest, (lo, hi))) => {
                rec.set("spacing", pt.spacing);
                rec.set("delta_h", pt.delta_h);
                rec.set("delta_lo", lo);
                rec.set("delta_hi", hi);
                rec.set("f0", pt.f0);
                rec.set("g_k", pt.g_k);
                rec.set("longest_edge", longest);
                // The edge bound applies to the inscribed pullback hull, so
                // it is checked against the pullback distance lo/sigma ratio:
                // for the unit ball lo == hi == delta.
                if cfg.ellipsoid.is_none() && longest > 4.0 * pt.delta_h.sqrt() {
                    rec.violate(format!(
                        "longest edge {longest:.5} exceeds 4 sqrt(delta) = {:.5}",
                        4.0 * pt.delta_h.sqrt()
                    ));
                }
                series_points.push(pt);
            }
            Err(e) => rec.skip(format!("{e}")),
        }
        trials.push(rec);
    }
    let series = ScalingSeries::new(series_points);

    let mut summary = Map::new();
    let target = -((cfg.d as f64 - 1.0) / 2.0);
    summary.insert("target_slope".into(), json!(target));
    summary.insert(
        "net_construction".into(),
        json!("multi-axis lattice lift (full-sphere extension of the single-sheet net)"),
    );
    // Annotation constants from the covering-density asymptotics.
    summary.insert("theta_2".into(), json!(crate::harness::report::THETA_2));
    summary.insert(
        "unit_ball_volume_d_minus_1".into(),
        json!(crate::harness::report::unit_ball_volume(cfg.d - 1)),
    );
    summary.insert("series".into(), serde_json::to_value(&series)?);
    let mut rec = TrialRecord::new(trials.len(), cfg.seed);
    if let Some(fit) = series.fit {
        summary.insert("fit".into(), serde_json::to_value(fit)?);
        let lo = target + cfg.slope_band.0;
        let hi = target + cfg.slope_band.1;
        rec.set("fitted_slope", fit.slope);
        rec.set("r2", fit.r2);
        if !(lo..=hi).contains(&fit.slope) {
            rec.violate(format!(
                "fitted slope {:.3} outside [{lo:.3}, {hi:.3}]",
                fit.slope
            ));
        }
        // Lower-bound statistic: g_k * delta^{(d-1)/2} bounded away from 0
        // and non-vanishing across the series.
        let stats: Vec<f64> = series
            .points
            .iter()
            .map(|p| p.g_k * p.delta_h.powf((cfg.d as f64 - 1.0) / 2.0))
            .collect();
        let stat_min = stats.iter().copied().fold(f64::INFINITY, f64::min);
        let stat_max = stats.iter().copied().fold(0.0f64, f64::max);
        summary.insert("gk_delta_stat_min".into(), json!(stat_min));
        summary.insert("gk_delta_stat_max".into(), json!(stat_max));
        rec.set("stat_min", stat_min);
        rec.set("stat_max", stat_max);
        if !(stat_min > 0.0) {
            rec.violate("g_k * delta^{(d-1)/2} not positive".to_string());
        }
        if stat_max / stat_min > 10.0 {
            rec.violate(format!(
                "g_k * delta^{{(d-1)/2}} varies by {:.2}x (> 10x) across the series",
                stat_max / stat_min
            ));
        }
        // Vertex-count boundedness: f0 * delta^{(d-1)/2} stays in a
        // factor-20 band (asserted for d = 3, recorded otherwise).
        let f0_stats: Vec<f64> = series
            .points
            .iter()
            .map(|p| p.f0 as f64 * p.delta_h.powf((cfg.d as f64 - 1.0) / 2.0))
            .collect();
        let f0_min = f0_stats.iter().copied().fold(f64::INFINITY, f64::min);
        let f0_max = f0_stats.iter().copied().fold(0.0f64, f64::max);
        summary.insert("f0_delta_stat_min".into(), json!(f0_min));
        summary.insert("f0_delta_stat_max".into(), json!(f0_max));
        if cfg.d == 3 && f0_max / f0_min > 20.0 {
            rec.violate(format!(
                "f0 * delta^{{(d-1)/2}} varies by {:.2}x (> 20x) across the series",
                f0_max / f0_min
            ));
        }
    } else {
        rec.violate("series did not span a decade with positive g_k; no fit".to_string());
    }
    trials.push(rec);
    Ok(ExperimentReport::assemble(
        "scaling",
        serde_json::to_value(cfg)?,
        trials,
        summary,
        started.elapsed().as_secs_f64(),
    ))
}

// ---------------------------------------------------------------------------
// random-trends
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RandomTrendsConfig {
    pub d: usize,
    pub ns: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub f0_exponent_band: (f64, f64),
    pub delta_exponent_band: (f64, f64),
}

impl RandomTrendsConfig {
    pub fn default_d3() -> Self {
        RandomTrendsConfig {
            d: 3,
            ns: vec![128, 256, 512, 1024, 2048, 4096, 8192],
            trials: 20,
            seed: 77,
            f0_exponent_band: (0.35, 0.65),
            delta_exponent_band: (-0.7, -0.3),
        }
    }

    pub fn default_d4() -> Self {
        RandomTrendsConfig {
            d: 4,
            ns: vec![128, 256, 512, 1024, 2048],
            trials: 10,
            seed: 78,
            f0_exponent_band: (0.45, 0.75),
            delta_exponent_band: (-0.6, -0.2),
        }
    }
}

/// Random-polytope trends: mean f_0 and mean Hausdorff distance of hulls of
/// uniform ball samples against n, with the conjectured difference statistic
/// g_k - shadow(k+1, g_{k+1}) reported (not asserted).
pub fn random_body_trends(cfg: &RandomTrendsConfig) -> Result<ExperimentReport> {
    let started = Instant::now();
    let per_n: Vec<(usize, Vec<TrialRecord>, f64, f64, f64)> = cfg
        .ns
        .par_iter()
        .map(|&n| {
            let mut recs = Vec::new();
            let mut f0s = Vec::new();
            let mut deltas = Vec::new();
            let mut gstats = Vec::new();
            for t in 0..cfg.trials {
                let seed = mix_seed(cfg.seed, n as u64, t as u64);
                let mut rec = TrialRecord::new(t, seed);
                rec.set("n", n);
                match generators::ball_uniform_polytope(n, cfg.d, seed)
                    .and_then(|p| Ok((hausdorff_to_ball(&p)?, p)))
                {
                    Ok((delta, p)) => {
                        let g = g_vector_of(&p);
                        rec.set("f0", p.n_vertices());
                        rec.set("delta_h", delta);
                        f0s.push(p.n_vertices() as f64);
                        deltas.push(delta);
                        if cfg.d >= 4 {
                            let g1 = g.entry(1);
                            let g2 = g.entry(2);
                            let stat = &g1
                                - if g2.is_positive() {
                                    shadow(2, &g2)
                                } else {
                                    BigInt::zero()
                                };
                            rec.set("g1_minus_shadow_g2", big_to_f64(&stat));
                            gstats.push(big_to_f64(&stat));
                        }
                    }
                    Err(e) => rec.skip(format!("{e}")),
                }
                recs.push(rec);
            }
            let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len().max(1) as f64;
            (n, recs, mean(&f0s), mean(&deltas), mean(&gstats))
        })
        .collect();

    let mut trials = Vec::new();
    let mut ln_n = Vec::new();
    let mut ln_f0 = Vec::new();
    let mut ln_delta = Vec::new();
    let mut conj_stat = Vec::new();
    for (n, recs, mean_f0, mean_delta, mean_gstat) in per_n {
        trials.extend(recs);
        ln_n.push((n as f64).ln());
        ln_f0.push(mean_f0.ln());
        ln_delta.push(mean_delta.ln());
        if cfg.d >= 4 {
            conj_stat.push(mean_gstat);
        }
    }
    let f0_fit = least_squares(&ln_n, &ln_f0);
    let delta_fit = least_squares(&ln_n, &ln_delta);
    let mut summary = Map::new();
    summary.insert("f0_fit".into(), serde_json::to_value(f0_fit)?);
    summary.insert("delta_fit".into(), serde_json::to_value(delta_fit)?);
    summary.insert(
        "f0_exponent_target".into(),
        json!((cfg.d as f64 - 1.0) / (cfg.d as f64 + 1.0)),
    );
    summary.insert("delta_exponent_target".into(), json!(-2.0 / (cfg.d as f64 + 1.0)));

    let mut rec = TrialRecord::new(trials.len(), cfg.seed);
    rec.set("f0_exponent", f0_fit.slope);
    rec.set("delta_exponent", delta_fit.slope);
    if !(cfg.f0_exponent_band.0..=cfg.f0_exponent_band.1).contains(&f0_fit.slope) {
        rec.violate(format!(
            "f0 exponent {:.3} outside [{}, {}]",
            f0_fit.slope, cfg.f0_exponent_band.0, cfg.f0_exponent_band.1
        ));
    }
    if !(cfg.delta_exponent_band.0..=cfg.delta_exponent_band.1).contains(&delta_fit.slope) {
        rec.violate(format!(
            "delta exponent {:.3} outside [{}, {}]",
            delta_fit.slope, cfg.delta_exponent_band.0, cfg.delta_exponent_band.1
        ));
    }
    // Conjectured difference statistic (reported, never asserted).
    if cfg.d >= 4 && conj_stat.len() >= 2 {
        let increasing = conj_stat.windows(2).filter(|w| w[1] > w[0]).count();
        let frac = increasing as f64 / (conj_stat.len() - 1) as f64;
        summary.insert("conjecture_ii_stat_series".into(), json!(conj_stat));
        summary.insert("conjecture_ii_increasing_fraction".into(), json!(frac));
        rec.set("conjecture_ii_increasing_fraction", frac);
    }
    trials.push(rec);
    Ok(ExperimentReport::assemble(
        "random-trends",
        serde_json::to_value(cfg)?,
        trials,
        summary,
        started.elapsed().as_secs_f64(),
    ))
}

// ---------------------------------------------------------------------------
// d4-ball
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct D4BallConfig {
    pub eps_schedule: Vec<f64>,
    pub seed: u64,
}

impl Default for D4BallConfig {
    fn default() -> Self {
        D4BallConfig { eps_schedule: vec![0.05, 0.03, 0.02], seed: 90 }
    }
}

/// The rigidity route to the 4-ball bound: vertices with non-stacked links
/// yield local stresses; stresses at pairwise graph distance > 4 have
/// disjoint supports and are linearly independent, so their count bounds g_2
/// from below.
pub fn d4_ball_experiment(cfg: &D4BallConfig) -> Result<ExperimentReport> {
    let started = Instant::now();
    let trials: Vec<TrialRecord> = cfg
        .eps_schedule
        .par_iter()
        .enumerate()
        .map(|(i, &eps)| {
            let seed = mix_seed(cfg.seed, 11, i as u64);
            let mut rec = TrialRecord::new(i, seed);
            rec.set("eps", eps);
            let n = (5.0 * eps.powf(-1.5)).ceil() as usize;
            rec.set("n", n);
            match d4_ball_trial(n, eps, seed, &mut rec) {
                Ok(()) => {}
                Err(e) => rec.skip(format!("{e}")),
            }
            rec
        })
        .collect();
    Ok(ExperimentReport::assemble(
        "d4-ball",
        serde_json::to_value(cfg)?,
        trials,
        Map::new(),
        started.elapsed().as_secs_f64(),
    ))
}

fn d4_ball_trial(n: usize, _eps: f64, seed: u64, rec: &mut TrialRecord) -> Result<()> {
    let p = generators::sphere_uniform_polytope(n, 4, seed)?;
    let delta = hausdorff_to_ball(&p)?;
    rec.set("delta_h", delta);
    let bc = p.boundary_complex();
    let g = g_vector_of(&p);
    let g2 = g.entry(2);

    // Scan links for stackedness.
    let mut non_stacked: Vec<usize> = Vec::new();
    for v in 0..p.n_vertices() {
        let link = bc.link(&crate::complex::Face::vertex(v as u32))?;
        if !is_stacked_2sphere(&link)? {
            non_stacked.push(v);
        }
    }
    rec.set("non_stacked_links", non_stacked.len());
    if non_stacked.is_empty() {
        rec.violate("no vertex with a non-stacked link found".to_string());
        return Ok(());
    }

    // Greedy subset at pairwise graph distance > 4 (disjoint N_2 balls).
    let mut chosen: Vec<usize> = Vec::new();
    let mut occupied: std::collections::BTreeSet<u32> = Default::default();
    for &v in &non_stacked {
        let ball = bc.graph_ball(v as u32, 2)?;
        if ball.iter().all(|u| !occupied.contains(u)) {
            chosen.push(v);
            occupied.extend(ball);
        }
    }
    rec.set("selected_vertices", chosen.len());

    // Extract local stresses; supports are disjoint by construction.
    let mut supports: Vec<std::collections::BTreeSet<usize>> = Vec::new();
    let mut stress_vectors: Vec<std::collections::BTreeMap<(usize, usize), f64>> = Vec::new();
    for &v in &chosen {
        match stress::local_stress_near_vertex(&p, v)? {
            Some(local) => {
                if local.residual > 1e-8 {
                    rec.violate(format!(
                        "local stress at vertex {v} has residual {:.2e}",
                        local.residual
                    ));
                }
                let mut coeffs = std::collections::BTreeMap::new();
                for (e, &(a, b)) in local.edges.iter().enumerate() {
                    let val = local.coefficients[e];
                    if val.abs() > 1e-12 {
                        coeffs.insert((a.min(b), a.max(b)), val);
                    }
                }
                if coeffs.is_empty() {
                    rec.violate(format!("local stress at vertex {v} is numerically zero"));
                }
                supports.push(local.support_vertices.iter().copied().collect());
                stress_vectors.push(coeffs);
            }
            None => rec.violate(format!("vertex {v} unexpectedly has a stacked link")),
        }
    }
    for i in 0..supports.len() {
        for j in i + 1..supports.len() {
            if supports[i].intersection(&supports[j]).next().is_some() {
                rec.violate(format!("supports of stresses {i} and {j} overlap"));
            }
        }
    }

    // Rank of the stacked stress vectors in the common edge space; disjoint
    // supports make the Gram matrix diagonal, but the rank is computed
    // honestly.
    let m = stress_vectors.len();
    if m > 0 {
        let mut gram = nalgebra::DMatrix::zeros(m, m);
        for i in 0..m {
            for j in 0..m {
                let mut acc = 0.0;
                for (e, v) in &stress_vectors[i] {
                    if let Some(w) = stress_vectors[j].get(e) {
                        acc += v * w;
                    }
                }
                gram[(i, j)] = acc;
            }
        }
        let rank = crate::linalg::float::svd_rank(&gram, 1e-10);
        rec.set("stress_rank", rank);
        if rank != m {
            rec.violate(format!("only {rank} of {m} disjoint stresses are independent"));
        }
        rec.set("g2", big_to_f64(&g2));
        rec.set("derived_lower_bound", m);
        if BigInt::from(m) > g2 {
            rec.violate(format!("derived bound {m} exceeds g_2 = {g2}"));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::report::Verdict;

    #[test]
    fn qlbt_small_run_passes() {
        let cfg = QlbtConfig {
            specs: vec![
                GeneratorSpec::new(GeneratorKind::Cross, 3, 0),
                GeneratorSpec::new(GeneratorKind::SphereUniform { n: 30 }, 4, 2),
            ],
            trials_per_spec: 30,
            seed: 1,
        };
        let report = verify_qlbt(&cfg).unwrap();
        assert_eq!(report.verdict, Verdict::Pass, "{:?}", report.summary);
        assert_eq!(report.trials.len(), 60);
        // Octahedron equator is among the reachable cases; check one known
        // pair by hand: W = equator, k = 1 gives beta_1 = 1 <= g_1 = 2.
        let p = GeneratorSpec::new(GeneratorKind::Cross, 3, 0).build().unwrap();
        let bc = p.boundary_complex();
        let g = g_vector_of(&p);
        // Equator: the four vertices not extreme in the last coordinate.
        let mut idx: Vec<(f64, u32)> = (0..6)
            .map(|i| (p.vertices().point(i)[2].abs(), i as u32))
            .collect();
        idx.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let w: Vec<u32> = idx[..4].iter().map(|&(_, i)| i).collect();
        let beta = betti(&bc.induced(&w).unwrap()).betti(1);
        assert_eq!(beta, 1);
        assert_eq!(g.entry(1), BigInt::from(2));
    }

    #[test]
    fn trivial_full_subset_has_zero_beta() {
        // W = V: Delta_W is the whole (d-1)-sphere, and beta_{d-k-1} = 0 for
        // k >= 1.
        let p = GeneratorSpec::new(GeneratorKind::Cross, 4, 0).build().unwrap();
        let bc = p.boundary_complex();
        let b = betti(&bc);
        for k in 1..=2i64 {
            assert_eq!(b.betti(4 - k - 1), 0);
        }
    }

    #[test]
    fn stress_crosscheck_small_suite() {
        let cfg = StressCrosscheckConfig {
            specs: vec![
                GeneratorSpec::new(GeneratorKind::Simplex, 4, 0),
                GeneratorSpec::new(GeneratorKind::Cross, 4, 0),
                GeneratorSpec::new(GeneratorKind::Stacked { steps: 6 }, 4, 44),
            ],
            exact_unknown_cap: 5000,
        };
        let report = stress_crosscheck(&cfg).unwrap();
        assert_eq!(report.verdict, Verdict::Pass, "{:?}", report.trials);
    }

    #[test]
    fn random_trends_tiny_run_produces_fits() {
        let cfg = RandomTrendsConfig {
            d: 3,
            ns: vec![64, 128, 256],
            trials: 3,
            seed: 5,
            f0_exponent_band: (0.0, 1.0),
            delta_exponent_band: (-1.0, 0.0),
        };
        let report = random_body_trends(&cfg).unwrap();
        assert_eq!(report.verdict, Verdict::Pass, "{:?}", report.summary);
        assert!(report.summary.contains_key("f0_fit"));
    }
}
