//! Arc-length preserving deformations of plane curves.
//!
//! A tangent vector `h` at `c` lies in the Arc distribution when the relative
//! speed change `u = ⟨D_s h, v⟩` is constant along the curve. The integral
//! manifolds are the classes of curves whose speed functions are proportional.

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::calculus::{connection_bracket, rk4_step, CurveField};
use crate::curve::{Ambient, DiscreteImmersion, ImmersionTangent};
use crate::error::{GeometryError, Result};
use crate::field::{derivative_symbol, PeriodicScalarField};

/// Correction sweeps in [`project_to_arc`]. The first sweep inverts the
/// derivative stencil; later sweeps remove the discrete product-rule residual.
const PROJECTION_SWEEPS: usize = 4;

#[derive(Debug, Clone)]
pub struct ArcDefect {
    /// `u = ⟨D_s h, v⟩`, the speed variation density.
    pub u: PeriodicScalarField,
    /// `D_s u`.
    pub defect: PeriodicScalarField,
    pub defect_norm: f64,
}

fn require_plane(c: &DiscreteImmersion) -> Result<()> {
    if c.ambient() != Ambient::Plane {
        return Err(GeometryError::UnsupportedAmbient { expected: "plane" });
    }
    Ok(())
}

fn speed_variation(
    c: &DiscreteImmersion,
    tangent: &ImmersionTangent,
    h: &ImmersionTangent,
) -> Result<PeriodicScalarField> {
    let dh = c.arclen_deriv_vectors(h)?;
    PeriodicScalarField::new(dh.iter().zip(tangent.vectors()).map(|(d, v)| d.dot(v)).collect())
}

pub fn arc_defect(c: &DiscreteImmersion, h: &ImmersionTangent) -> Result<ArcDefect> {
    require_plane(c)?;
    let u = speed_variation(c, &c.frame().tangent, h)?;
    let defect = c.arclen_deriv(&u)?;
    let defect_norm = defect.max_abs();
    Ok(ArcDefect { u, defect, defect_norm })
}

/// Solves `∂θ ψ = r` for the 4th-order stencil, assuming `r` has zero mean.
/// The mean and Nyquist components of `ψ` are set to zero.
fn inverse_derivative(planner: &mut FftPlanner<f64>, r: &[f64]) -> Vec<f64> {
    let n = r.len();
    let mut buf: Vec<Complex<f64>> = r.iter().map(|&x| Complex::new(x, 0.0)).collect();
    planner.plan_fft_forward(n).process(&mut buf);
    for (j, z) in buf.iter_mut().enumerate() {
        let k = if j <= n / 2 { j as i64 } else { j as i64 - n as i64 };
        if k == 0 || 2 * k.unsigned_abs() as usize == n {
            *z = Complex::new(0.0, 0.0);
        } else {
            // divide by i λ_k
            *z = Complex::new(z.im, -z.re) / derivative_symbol(n, k);
        }
    }
    planner.plan_fft_inverse(n).process(&mut buf);
    buf.iter().map(|z| z.re / n as f64).collect()
}

/// Projects `h` onto Arc by adding a tangential correction `ψ v`, where
/// `D_s ψ = ū − u` and `ū` is the arclength average of `u`.
pub fn project_to_arc(c: &DiscreteImmersion, h: &ImmersionTangent) -> Result<ImmersionTangent> {
    require_plane(c)?;
    c.check_tangent(h)?;
    let tangent = c.frame().tangent;
    let speed = c.speed();
    let length: f64 = speed.samples().iter().sum();
    let mut planner = FftPlanner::new();
    let mut out = h.clone();
    for _ in 0..PROJECTION_SWEEPS {
        let u = speed_variation(c, &tangent, &out)?;
        let mean = u.samples().iter().zip(speed.samples()).map(|(u, s)| u * s).sum::<f64>() / length;
        let rhs: Vec<f64> = u.samples().iter().zip(speed.samples()).map(|(u, s)| (mean - u) * s).collect();
        let psi = PeriodicScalarField::new(inverse_derivative(&mut planner, &rhs))?;
        out = out.add(&tangent.weighted(&psi)?)?;
    }
    Ok(out)
}

/// The field `c ↦ project_to_arc(c, F(c))`.
#[derive(Clone)]
pub struct ArcProjected<F> {
    inner: F,
}

impl<F: CurveField> ArcProjected<F> {
    pub fn new(inner: F) -> Self {
        Self { inner }
    }
}

impl<F: CurveField> CurveField for ArcProjected<F> {
    fn eval(&self, c: &DiscreteImmersion) -> Result<ImmersionTangent> {
        project_to_arc(c, &self.inner.eval(c)?)
    }
}

fn check_flow_args(c0: &DiscreteImmersion, t: f64, steps: usize) -> Result<()> {
    require_plane(c0)?;
    if steps == 0 {
        return Err(GeometryError::InvalidParameter("flow needs at least one step".into()));
    }
    if !t.is_finite() {
        return Err(GeometryError::InvalidParameter(format!("flow time {t}")));
    }
    Ok(())
}

/// RK4 integration of `ċ = project_to_arc(c, F(c))` over `[0, t]`.
pub fn flow_arc<F: CurveField>(c0: &DiscreteImmersion, field: F, t: f64, steps: usize) -> Result<DiscreteImmersion> {
    flow_field(c0, &ArcProjected::new(field), t, steps)
}

/// RK4 integration of `ċ = F(c)` without projection.
pub fn flow_field<F: CurveField + ?Sized>(
    c0: &DiscreteImmersion,
    field: &F,
    t: f64,
    steps: usize,
) -> Result<DiscreteImmersion> {
    check_flow_args(c0, t, steps)?;
    let dt = t / steps as f64;
    let mut c = c0.clone();
    for _ in 0..steps {
        c = rk4_step(field, &c, dt)?;
    }
    Ok(c)
}

/// Like [`flow_arc`], returning the initial curve and every `save_every`-th
/// step (and always the final curve).
pub fn flow_arc_trajectory<F: CurveField>(
    c0: &DiscreteImmersion,
    field: F,
    t: f64,
    steps: usize,
    save_every: usize,
) -> Result<Vec<DiscreteImmersion>> {
    check_flow_args(c0, t, steps)?;
    let projected = ArcProjected::new(field);
    let dt = t / steps as f64;
    let save_every = save_every.max(1);
    let mut frames = vec![c0.clone()];
    let mut c = c0.clone();
    for step in 1..=steps {
        c = rk4_step(&projected, &c, dt)?;
        if step % save_every == 0 || step == steps {
            frames.push(c.clone());
        }
    }
    Ok(frames)
}

/// Relative spread `max_k |r_k − r̄| / r̄` of the speed ratio `r = |c1'| / |c0'|`.
pub fn leaf_invariant(c0: &DiscreteImmersion, c1: &DiscreteImmersion) -> Result<f64> {
    require_plane(c0)?;
    require_plane(c1)?;
    let ratio = c1.speed().zip_with(&c0.speed(), |a, b| a / b)?;
    let mean = ratio.mean();
    Ok(ratio.samples().iter().fold(0.0, |m: f64, r| m.max((r - mean).abs())) / mean)
}

/// Arc defect of the numeric bracket of the projected fields `P F1`, `P F2`.
pub fn frobenius_defect<F1: CurveField, F2: CurveField>(
    c: &DiscreteImmersion,
    f1: F1,
    f2: F2,
    eps: f64,
) -> Result<f64> {
    require_plane(c)?;
    let g1 = ArcProjected::new(f1);
    let g2 = ArcProjected::new(f2);
    let bracket = connection_bracket(c, &g1, &g2, eps)?;
    Ok(arc_defect(c, &bracket)?.defect_norm)
}
