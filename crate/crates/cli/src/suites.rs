use norbrack_core::arc::{flow_arc_trajectory, frobenius_defect, leaf_invariant};
use norbrack_core::calculus::{
    bracket_closed_form, bracket_numeric, directional_derivative, torsion_defect, variation_of_normal, Generator,
};
use norbrack_core::field::{spacing, trig_basis};
use norbrack_core::hoermander::{verify_spanning, DEFAULT_RANK_TOL};
use norbrack_core::io::write_trajectory;
use norbrack_core::oneform::{bump, decompose_oneform, decompose_supported, random_band_limited, OneForm, Window};
use norbrack_core::{Ambient, DiscreteImmersion, PeriodicScalarField, Result};

use crate::config::{Suite, SuiteConfig};
use crate::report::ReportRecord;

const ARC_FLOW_TIME: f64 = 0.3;
const ARC_FLOW_STEPS: usize = 100;

struct Ctx<'a> {
    cfg: &'a SuiteConfig,
    records: Vec<ReportRecord>,
}

impl Ctx<'_> {
    fn name(&self) -> &'static str {
        self.cfg.suite.name()
    }

    fn push(&mut self, case: String, metric: &str, tolerance: f64, value: Result<f64>) {
        let (suite, n) = (self.name(), self.cfg.grid_n);
        self.records.push(match value {
            Ok(v) => ReportRecord::bounded(suite, case, n, metric, v, tolerance),
            Err(e) => ReportRecord::failed(suite, case, n, metric, tolerance, e),
        });
    }

    fn tolerance(&self, default: f64) -> f64 {
        self.cfg.tolerance.unwrap_or(default)
    }

    fn ambient_tolerance(&self, c: &DiscreteImmersion, plane: f64, sphere: f64) -> f64 {
        self.tolerance(if c.ambient() == Ambient::Plane { plane } else { sphere })
    }
}

/// Runs the configured suite over all cases. Case failures become failed
/// records; nothing here aborts the run.
pub fn run_suite(cfg: &SuiteConfig) -> Vec<ReportRecord> {
    let mut ctx = Ctx { cfg, records: Vec::new() };
    if cfg.suite == Suite::Oneform {
        oneform(&mut ctx);
        return ctx.records;
    }
    for spec in &cfg.curves {
        let label = spec.label(cfg.seed);
        match spec.build(cfg.grid_n, cfg.seed) {
            Ok(c) => match cfg.suite {
                Suite::Torsion => torsion(&mut ctx, &label, &c),
                Suite::Variation => variation(&mut ctx, &label, &c),
                Suite::Bracket => bracket(&mut ctx, &label, &c),
                Suite::Spanning => spanning(&mut ctx, &label, &c),
                Suite::Arc => arc(&mut ctx, &label, &c),
                Suite::Oneform => unreachable!(),
            },
            Err(e) => {
                let r = ReportRecord::failed(ctx.name(), label, cfg.grid_n, "curve", 0.0, e);
                ctx.records.push(r);
            }
        }
    }
    ctx.records
}

fn trig_pairs(n: usize, modes: usize) -> Result<Vec<(PeriodicScalarField, PeriodicScalarField)>> {
    let basis = trig_basis(n, modes)?;
    let mut out = Vec::new();
    for (i, a) in basis.iter().enumerate() {
        for b in &basis[i + 1..] {
            out.push((a.clone(), b.clone()));
        }
    }
    Ok(out)
}

fn worst_over_pairs(
    c: &DiscreteImmersion,
    modes: usize,
    f: impl Fn(&PeriodicScalarField, &PeriodicScalarField) -> Result<f64>,
) -> Result<f64> {
    trig_pairs(c.grid_n(), modes)?.iter().try_fold(0.0f64, |m, (a, b)| Ok(m.max(f(a, b)?)))
}

fn bracket(ctx: &mut Ctx, label: &str, c: &DiscreteImmersion) {
    let (modes, eps) = (ctx.cfg.modes.unwrap_or(4), ctx.cfg.epsilon);
    let tol = ctx.ambient_tolerance(c, 1e-3, 1e-2);
    let value = worst_over_pairs(c, modes, |a, b| {
        let closed = bracket_closed_form(c, a, b)?;
        Ok(closed.sub(&bracket_numeric(c, a, b, eps)?)?.max_norm())
    });
    ctx.push(format!("{label}/modes<={modes}"), "max_abs_closed_minus_numeric", tol, value);
}

fn torsion(ctx: &mut Ctx, label: &str, c: &DiscreteImmersion) {
    let (modes, eps) = (ctx.cfg.modes.unwrap_or(4), ctx.cfg.epsilon);
    let tol = ctx.ambient_tolerance(c, 1e-3, 1e-2);
    let value = worst_over_pairs(c, modes, |a, b| {
        torsion_defect(c, &Generator::Normal(a.clone()), &Generator::Normal(b.clone()), eps)
    });
    ctx.push(format!("{label}/modes<={modes}"), "torsion_defect", tol, value);
}

fn variation(ctx: &mut Ctx, label: &str, c: &DiscreteImmersion) {
    let eps = ctx.cfg.epsilon;
    let tol = ctx.tolerance(1e-3);
    let frame = c.frame();
    let cos = PeriodicScalarField::from_fn(c.grid_n(), f64::cos);
    let directions = [
        ("n", Ok(frame.normal.clone())),
        ("cos*n", cos.and_then(|a| frame.normal.weighted(&a))),
        ("v", Ok(frame.tangent.clone())),
    ];
    for (name, h) in directions {
        let value = (|| {
            let h = h?;
            let fd = directional_derivative(&Generator::unit_normal(c.grid_n())?, c, &h, eps)?;
            Ok(variation_of_normal(c, &h)?.sub(&fd)?.max_norm())
        })();
        ctx.push(format!("{label}/h={name}"), "max_abs_formula_minus_fd", tol, value);
    }
}

fn spanning(ctx: &mut Ctx, label: &str, c: &DiscreteImmersion) {
    let n = c.grid_n();
    let modes = ctx.cfg.modes.unwrap_or(n / 2 - 1);
    let case = format!("{label}/K={modes}");
    let rank_tol = ctx.tolerance(DEFAULT_RANK_TOL);
    match verify_spanning(c, modes, rank_tol) {
        Ok(report) => {
            let mut rank =
                ReportRecord::bounded(ctx.name(), case.clone(), n, "rank", report.rank as f64, (2 * n) as f64);
            rank.pass = report.full;
            ctx.records.push(rank);
            let cond = if report.sigma_min > 0.0 { report.sigma_max / report.sigma_min } else { f64::INFINITY };
            ctx.push(case, "condition_number", 1.0 / rank_tol, Ok(cond));
        }
        Err(e) => {
            let r = ReportRecord::failed(ctx.name(), case, n, "rank", (2 * n) as f64, e);
            ctx.records.push(r);
        }
    }
}

fn arc(ctx: &mut Ctx, label: &str, c: &DiscreteImmersion) {
    let n = c.grid_n();
    let tol = ctx.tolerance(1e-5);
    let field = PeriodicScalarField::from_fn(n, |t| 0.2 * (3.0 * t).cos()).map(Generator::Normal);
    let leaf = (|| {
        let frames = flow_arc_trajectory(c, field?, ARC_FLOW_TIME, ARC_FLOW_STEPS, 10)?;
        if let Some(dir) = &ctx.cfg.trajectory_dir {
            let sub = dir.join(label.replace(['/', '(', ')', ',', '='], "_"));
            write_trajectory(&sub, &frames)?;
        }
        leaf_invariant(c, frames.last().expect("trajectory holds the initial curve"))
    })();
    ctx.push(format!("{label}/cos3*n"), "leaf_invariant", tol, leaf);

    let frob_tol = ctx.tolerance(1e-3);
    let eps = ctx.cfg.epsilon;
    let frob = (|| {
        let a = Generator::unit_normal(n)?;
        let b = Generator::Normal(PeriodicScalarField::from_fn(n, f64::cos)?);
        frobenius_defect(c, a, b, eps)
    })();
    ctx.push(format!("{label}/[n,cos*n]"), "frobenius_defect", frob_tol, frob);
}

fn oneform(ctx: &mut Ctx) {
    let cfg = ctx.cfg;
    let (n, modes) = (cfg.grid_n, cfg.modes.unwrap_or(10));
    let tol = ctx.tolerance(1e-5);
    for i in 0..cfg.cases as u64 {
        let seed = cfg.seed.wrapping_mul(1000).wrapping_add(i);
        let case = format!("random(seed={seed},modes<={modes})");
        match random_band_limited(seed, n, modes).and_then(|alpha| Ok((decompose_oneform(&alpha)?, alpha))) {
            Ok((d, alpha)) => {
                ctx.push(case.clone(), "relative_l2", tol, d.reconstruct().relative_error(&alpha));
                ctx.push(case, "terms", 8.0, Ok(d.len() as f64));
            }
            Err(e) => ctx.push(case, "relative_l2", tol, Err(e)),
        }
    }
    ctx.push("supported(window=(1,3.5))".into(), "max_abs_outside_window", 0.0, supported_leak(n, cfg.seed));
}

/// Largest output sample outside the window for a bump-localized form.
fn supported_leak(n: usize, seed: u64) -> Result<f64> {
    let window = Window::new(1.0, 3.5)?;
    let base = random_band_limited(seed, n, 6)?;
    let alpha =
        OneForm(base.0.zip_with(&PeriodicScalarField::from_fn(n, |t| 50.0 * bump((t - 2.25) / 0.95))?, |a, b| a * b)?);
    let d = decompose_supported(&alpha, window)?;
    let h = spacing(n);
    let mut worst = 0.0f64;
    for k in 0..n {
        if window.offset(h * k as f64) > window.length() {
            for t in d.terms() {
                worst = worst.max(t.a[k].abs()).max(t.b[k].abs());
            }
        }
    }
    Ok(worst)
}
