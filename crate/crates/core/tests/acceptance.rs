//! Acceptance suite. Runs without the libtest harness so every criterion
//! prints its PASS/FAIL line; exits non-zero if any criterion fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use norbrack_core::arc::{flow_arc, flow_field, frobenius_defect, leaf_invariant};
use norbrack_core::calculus::{bracket_closed_form, bracket_numeric, torsion_defect, variation_of_normal, Generator};
use norbrack_core::curves::{self, random_fourier_curve};
use norbrack_core::field::trig_basis;
use norbrack_core::hoermander::{normal_generators, span_of, sum_of_brackets, synthesize_tangential, verify_spanning};
use norbrack_core::oneform::{decompose_oneform, decompose_supported, OneForm, Window};
use norbrack_core::{Ambient, DiscreteImmersion, ImmersionTangent, PeriodicScalarField, Result, Vec3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;

const N: usize = 256;
const RANDOM_MODES: usize = 5;
const RANDOM_DECAY: f64 = 2.0;

type Case = (&'static str, DiscreteImmersion, fn(f64) -> Vec3);
type Criterion = fn() -> Result<Outcome>;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Result<Outcome> {
    Ok(Outcome { pass, detail })
}

fn timed(limit: Duration, f: impl FnOnce() -> Result<Outcome>) -> Result<Outcome> {
    let start = Instant::now();
    let mut out = f()?;
    let elapsed = start.elapsed();
    out.detail = format!("{}; runtime {:.2?} (limit {:?})", out.detail, elapsed, limit);
    out.pass &= elapsed < limit;
    Ok(out)
}

fn plane_curves(n: usize) -> Result<Vec<(String, DiscreteImmersion)>> {
    let mut out = vec![
        ("circle".to_string(), curves::circle(n, 1.0)?),
        ("ellipse(2,1)".to_string(), curves::ellipse(n, 2.0, 1.0)?),
    ];
    for seed in 1..=5 {
        out.push((format!("fourier#{seed}"), random_fourier_curve(seed, n, RANDOM_MODES, RANDOM_DECAY)?));
    }
    Ok(out)
}

fn sphere_curves(n: usize) -> Result<Vec<(String, DiscreteImmersion)>> {
    Ok(vec![
        ("great_circle".to_string(), curves::great_circle(n)?),
        ("small_circle(0.5)".to_string(), curves::small_circle(n, 0.5)?),
    ])
}

fn trig_pairs(n: usize) -> Result<Vec<(PeriodicScalarField, PeriodicScalarField)>> {
    let basis = trig_basis(n, 4)?;
    let mut pairs = Vec::new();
    for (i, a) in basis.iter().enumerate() {
        for b in &basis[i + 1..] {
            pairs.push((a.clone(), b.clone()));
        }
    }
    Ok(pairs)
}

fn bracket_error(c: &DiscreteImmersion, eps: f64) -> Result<f64> {
    let mut worst = 0.0f64;
    for (a, b) in trig_pairs(c.grid_n())? {
        let closed = bracket_closed_form(c, &a, &b)?;
        let numeric = bracket_numeric(c, &a, &b, eps)?;
        worst = worst.max(max_diff(closed.vectors(), numeric.vectors()));
    }
    Ok(worst)
}

fn criterion_1() -> Result<Outcome> {
    timed(Duration::from_secs(10), || {
        let mut pass = true;
        let mut plane_worst = 0.0f64;
        for (_, c) in plane_curves(N)? {
            let e = bracket_error(&c, 1e-5)?;
            plane_worst = plane_worst.max(e);
            pass &= e <= 1e-3;
        }
        let mut sphere_worst = 0.0f64;
        for (_, c) in sphere_curves(N)? {
            let e = bracket_error(&c, 1e-5)?;
            sphere_worst = sphere_worst.max(e);
            pass &= e <= 1e-2;
        }
        outcome(pass, format!("plane max {plane_worst:.2e} (tol 1e-3), sphere max {sphere_worst:.2e} (tol 1e-2)"))
    })
}

fn columns(generators: &[ImmersionTangent]) -> Vec<Vec<f64>> {
    generators.iter().map(|g| g.vectors().iter().flat_map(|w| [w.x, w.y]).collect()).collect()
}

fn criterion_2() -> Result<Outcome> {
    timed(Duration::from_secs(5), || {
        let mut pass = true;
        let mut worst_cond = f64::INFINITY;
        let mut notes = Vec::new();
        for n in [8, 16, 32] {
            let k = n / 2 - 1;
            let family = [
                curves::circle(n, 1.0)?,
                random_fourier_curve(11, n, 3, RANDOM_DECAY)?,
                random_fourier_curve(12, n, 3, RANDOM_DECAY)?,
            ];
            for c in &family {
                let report = verify_spanning(c, k, 1e-8)?;
                worst_cond = worst_cond.min(report.inverse_condition());
                pass &= report.full && report.inverse_condition() >= 1e-8;
                let normals = normal_generators(c, k)?;
                let normal_rank = span_of(c, &normals, k, 1e-8)?.rank;
                let oracle_rank = gram_schmidt_rank(&columns(&normals), 1e-8);
                if normal_rank != n || oracle_rank != n {
                    notes.push(format!("N={n}: normal rank {normal_rank}, oracle {oracle_rank}"));
                    pass = false;
                }
            }
        }
        let extra = if notes.is_empty() { String::new() } else { format!("; {}", notes.join(", ")) };
        outcome(pass, format!("min σ_min/σ_max {worst_cond:.2e} (tol 1e-8), normal ranks = N{extra}"))
    })
}

fn random_form(rng: &mut ChaCha8Rng, n: usize, modes: usize) -> Vec<f64> {
    let c0: f64 = rng.gen_range(-1.0..1.0);
    let coeffs: Vec<(f64, f64)> = (0..modes).map(|_| (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    samples(n, |t| {
        c0 + coeffs
            .iter()
            .enumerate()
            .map(|(k, (a, b))| {
                let k = (k + 1) as f64;
                a * (k * t).cos() + b * (k * t).sin()
            })
            .sum::<f64>()
    })
}

/// `Σ coeff (a ∂b − b ∂a)`, recomputed outside the library.
fn reconstruct(d: &norbrack_core::oneform::AbDecomposition, n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n];
    for t in d.terms() {
        let (a, b) = (t.a.samples(), t.b.samples());
        let (da, db) = (diff4_scalar(a), diff4_scalar(b));
        for k in 0..n {
            out[k] += t.coeff * (a[k] * db[k] - b[k] * da[k]);
        }
    }
    out
}

fn criterion_3() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst = 0.0f64;
    let mut max_terms = 0;
    for _ in 0..20 {
        let modes = rng.gen_range(1..=10);
        let alpha = random_form(&mut rng, N, modes);
        let d = decompose_oneform(&OneForm::new(alpha.clone())?)?;
        max_terms = max_terms.max(d.len());
        worst = worst.max(rel_l2_scalar(&reconstruct(&d, N), &alpha));
    }

    let window = Window::new(1.0, 3.5)?;
    let mut leaks = 0usize;
    for _ in 0..20 {
        let modes = rng.gen_range(1..=10);
        let base = random_form(&mut rng, N, modes);
        let env = samples(N, |t| {
            let s = (t - 1.3) / 1.9;
            if s > 0.0 && s < 1.0 {
                (-1.0 / (s * (1.0 - s))).exp() * 50.0
            } else {
                0.0
            }
        });
        let alpha: Vec<f64> = base.iter().zip(&env).map(|(b, e)| b * e).collect();
        let d = decompose_supported(&OneForm::new(alpha)?, window)?;
        for (k, t) in samples(N, |t| t).into_iter().enumerate() {
            if window.offset(t) > window.length() {
                leaks += d.terms().iter().filter(|term| term.a[k] != 0.0 || term.b[k] != 0.0).count();
            }
        }
    }
    let pass = worst <= 1e-5 && max_terms <= 8 && leaks == 0;
    outcome(
        pass,
        format!("max relative L² {worst:.2e} (tol 1e-5), max terms {max_terms} (≤ 8), nonzero samples outside window {leaks}"),
    )
}

fn criterion_4() -> Result<Outcome> {
    let cases: [Case; 2] = [
        ("circle", curves::circle(N, 1.0)?, |t| Vec3::new(-t.sin(), t.cos(), 0.0)),
        ("ellipse", curves::ellipse(N, 2.0, 1.0)?, |t| Vec3::new(-2.0 * t.sin(), t.cos(), 0.0)),
    ];
    let ms: [fn(f64) -> f64; 3] = [|_| 1.0, f64::cos, |t| (3.0 * t).cos()];
    let mut worst = 0.0f64;
    for (_, c, velocity) in &cases {
        for m in ms {
            let mf = PeriodicScalarField::from_fn(N, m)?;
            let synthesized = sum_of_brackets(c, &synthesize_tangential(c, &mf)?)?;
            let target: Vec<Vec3> = samples(N, |t| t).into_iter().map(|t| velocity(t) * m(t)).collect();
            worst = worst.max(rel_l2(synthesized.vectors(), &target));
        }
    }
    outcome(worst <= 1e-3, format!("max relative L² {worst:.2e} (tol 1e-3)"))
}

fn random_direction(c: &DiscreteImmersion, seed: u64) -> Vec<Vec3> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let z = if c.ambient() == Ambient::Sphere { 1.0 } else { 0.0 };
    let mut draw = || Vec3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), z * rng.gen_range(-1.0..1.0));
    let coeffs: Vec<(Vec3, Vec3)> = (0..=4).map(|_| (draw(), draw())).collect();
    samples(c.grid_n(), |t| t)
        .into_iter()
        .zip(c.points())
        .map(|(t, p)| {
            let w: Vec3 =
                coeffs.iter().enumerate().map(|(k, (a, b))| a * (k as f64 * t).cos() + b * (k as f64 * t).sin()).sum();
            match c.ambient() {
                Ambient::Plane => w,
                Ambient::Sphere => w - p * p.dot(&w),
            }
        })
        .collect()
}

fn variation_error(c: &DiscreteImmersion) -> Result<f64> {
    let n = normal_of(c.points(), c.ambient());
    let v = tangent_of(c.points(), c.ambient());
    let cos = samples(c.grid_n(), f64::cos);
    let directions = [n.clone(), n.iter().zip(&cos).map(|(w, a)| w * *a).collect(), v, random_direction(c, 77)];
    let mut worst = 0.0f64;
    for h in directions {
        let formula = variation_of_normal(c, &ImmersionTangent::from_vectors(h.clone()))?;
        let fd = fd_normal_variation(c, &h, 1e-4);
        worst = worst.max(max_diff(formula.vectors(), &fd));
    }
    Ok(worst)
}

fn criterion_5() -> Result<Outcome> {
    let plane = [
        curves::circle(N, 1.0)?,
        curves::ellipse(N, 2.0, 1.0)?,
        random_fourier_curve(1, N, RANDOM_MODES, RANDOM_DECAY)?,
    ];
    let sphere = [curves::great_circle(N)?, curves::small_circle(N, 0.5)?, curves::wavy_sphere_curve(N)?];
    let mut plane_worst = 0.0f64;
    for c in &plane {
        plane_worst = plane_worst.max(variation_error(c)?);
    }
    let mut sphere_worst = 0.0f64;
    for c in &sphere {
        sphere_worst = sphere_worst.max(variation_error(c)?);
    }
    outcome(
        plane_worst <= 1e-3 && sphere_worst <= 1e-3,
        format!("plane max {plane_worst:.2e}, sphere max {sphere_worst:.2e} (tol 1e-3)"),
    )
}

fn torsion_error(c: &DiscreteImmersion) -> Result<f64> {
    let mut worst = 0.0f64;
    for (a, b) in trig_pairs(c.grid_n())? {
        worst = worst.max(torsion_defect(c, &Generator::Normal(a), &Generator::Normal(b), 1e-4)?);
    }
    Ok(worst)
}

fn criterion_6() -> Result<Outcome> {
    let mut plane_worst = 0.0f64;
    for (_, c) in plane_curves(N)? {
        plane_worst = plane_worst.max(torsion_error(&c)?);
    }
    let mut sphere_worst = 0.0f64;
    for (_, c) in sphere_curves(N)? {
        sphere_worst = sphere_worst.max(torsion_error(&c)?);
    }
    outcome(
        plane_worst <= 1e-3 && sphere_worst <= 1e-2,
        format!("plane max {plane_worst:.2e} (tol 1e-3), sphere max {sphere_worst:.2e} (tol 1e-2)"),
    )
}

fn normal_field(f: impl Fn(f64) -> f64) -> Result<Generator> {
    Ok(Generator::Normal(PeriodicScalarField::from_fn(N, f)?))
}

fn criterion_7() -> Result<Outcome> {
    timed(Duration::from_secs(10), || {
        let families = [
            curves::circle(N, 1.0)?,
            curves::ellipse(N, 2.0, 1.0)?,
            random_fourier_curve(3, N, RANDOM_MODES, RANDOM_DECAY)?,
        ];
        let mut leaf_worst = 0.0f64;
        let mut control_min = f64::INFINITY;
        for c in &families {
            let field = normal_field(|t| 0.2 * (3.0 * t).cos())?;
            let projected = flow_arc(c, field.clone(), 0.3, 100)?;
            leaf_worst = leaf_worst.max(leaf_invariant(c, &projected)?);
            let free = flow_field(c, &field, 0.3, 100)?;
            control_min = control_min.min(leaf_invariant(c, &free)?);
        }

        let c = curves::ellipse(N, 2.0, 1.0)?;
        let pairs = [
            (Generator::unit_normal(N)?, normal_field(f64::cos)?),
            (normal_field(|t| (2.0 * t).cos())?, normal_field(|t| (3.0 * t).sin())?),
            (Generator::Constant(Vec3::new(1.0, 0.0, 0.0)), normal_field(|t| (2.0 * t).sin())?),
        ];
        let mut frob_worst = 0.0f64;
        for (x, y) in pairs {
            frob_worst = frob_worst.max(frobenius_defect(&c, x, y, 1e-4)?);
        }
        outcome(
            leaf_worst <= 1e-5 && frob_worst <= 1e-3 && control_min >= 1e-2,
            format!(
                "leaf max {leaf_worst:.2e} (tol 1e-5), frobenius max {frob_worst:.2e} (tol 1e-3), unprojected min {control_min:.2e} (≥ 1e-2)"
            ),
        )
    })
}

fn criterion_8() -> Result<Outcome> {
    let coarse = curves::circle(128, 1.0)?;
    let fine = curves::circle(256, 1.0)?;
    let b = (bracket_error(&coarse, 1e-5)?, bracket_error(&fine, 1e-5)?);
    let v = (variation_error(&coarse)?, variation_error(&fine)?);
    let (rb, rv) = (b.0 / b.1, v.0 / v.1);
    outcome(
        rb >= 8.0 && rv >= 8.0,
        format!(
            "bracket {:.2e} → {:.2e} (ratio {rb:.1}), variation {:.2e} → {:.2e} (ratio {rv:.1}); need ≥ 8",
            b.0, b.1, v.0, v.1
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 8] = [
        ("bracket closed form vs numeric", criterion_1),
        ("hoermander rank", criterion_2),
        ("constructive one-form spanning", criterion_3),
        ("tangential synthesis", criterion_4),
        ("variation of the normal", criterion_5),
        ("torsion-freeness", criterion_6),
        ("arc integrability", criterion_7),
        ("convergence 128 → 256", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let (pass, detail) = match run() {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        failed += usize::from(!pass);
        println!("criterion {} {:<32} {}  {}", i + 1, name, if pass { "PASS" } else { "FAIL" }, detail);
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
