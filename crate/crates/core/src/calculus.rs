//! Calculus on the discretized space of immersions.
//!
//! A tangent vector at a curve `c` is an ambient vector per node. Vector fields
//! on the immersion space are rules `c ↦ F(c)` ([`CurveField`]). Covariant
//! derivatives are central differences in the immersion variable followed by
//! the ambient tangent projection, which on the round sphere realizes the
//! Levi-Civita connection of the product of spheres.

use std::fmt;

use crate::curve::{DiscreteImmersion, ImmersionTangent, Vec3};
use crate::error::{GeometryError, Result};
use crate::field::PeriodicScalarField;

/// Default step in the immersion variable for directional derivatives.
pub const DEFAULT_EPSILON: f64 = 1e-5;

/// A vector field on the space of immersions.
pub trait CurveField: Send + Sync {
    fn eval(&self, c: &DiscreteImmersion) -> Result<ImmersionTangent>;
}

impl<F: CurveField + ?Sized> CurveField for &F {
    fn eval(&self, c: &DiscreteImmersion) -> Result<ImmersionTangent> {
        (**self).eval(c)
    }
}

impl<F: CurveField + ?Sized> CurveField for Box<F> {
    fn eval(&self, c: &DiscreteImmersion) -> Result<ImmersionTangent> {
        (**self).eval(c)
    }
}

/// The standard generators.
#[derive(Debug, Clone, PartialEq)]
pub enum Generator {
    /// `a · n` for a fixed function `a` of the parameter.
    Normal(PeriodicScalarField),
    /// The same ambient vector at every node (projected on the sphere).
    Constant(Vec3),
    /// `m · v`, `v` the unit tangent.
    Tangential(PeriodicScalarField),
    Sum(Vec<Generator>),
}

impl Generator {
    /// The unit normal field `n`.
    pub fn unit_normal(n: usize) -> Result<Self> {
        Ok(Self::Normal(PeriodicScalarField::constant(n, 1.0)?))
    }

    /// The unit tangent field `v`.
    pub fn unit_tangent(n: usize) -> Result<Self> {
        Ok(Self::Tangential(PeriodicScalarField::constant(n, 1.0)?))
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Normal(_) => write!(f, "a·n"),
            Generator::Constant(w) => write!(f, "const({}, {}, {})", w.x, w.y, w.z),
            Generator::Tangential(_) => write!(f, "m·v"),
            Generator::Sum(parts) => {
                let names: Vec<String> = parts.iter().map(ToString::to_string).collect();
                write!(f, "{}", names.join(" + "))
            }
        }
    }
}

impl CurveField for Generator {
    fn eval(&self, c: &DiscreteImmersion) -> Result<ImmersionTangent> {
        match self {
            Generator::Normal(a) => {
                c.check_field(a)?;
                c.frame().normal.weighted(a)
            }
            Generator::Constant(w) => Ok(ImmersionTangent::constant(c, *w)),
            Generator::Tangential(m) => {
                c.check_field(m)?;
                c.frame().tangent.weighted(m)
            }
            Generator::Sum(parts) => {
                parts.iter().try_fold(ImmersionTangent::zeros(c.grid_n()), |acc, g| acc.add(&g.eval(c)?))
            }
        }
    }
}

fn check_step(c: &DiscreteImmersion, eps: f64) -> Result<()> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(GeometryError::InvalidParameter(format!("step {eps} must be positive")));
    }
    let limit = 0.1 * c.min_speed();
    if eps > limit {
        return Err(GeometryError::StepTooLarge { eps, limit });
    }
    Ok(())
}

fn project_at(c: &DiscreteImmersion, w: ImmersionTangent) -> ImmersionTangent {
    ImmersionTangent::at(c, w.vectors().to_vec()).expect("same grid")
}

/// Covariant derivative `∇_X F` at `c`: `(F(c+εX) − F(c−εX)) / 2ε`, projected
/// to the ambient tangent planes at `c`.
pub fn directional_derivative<F: CurveField + ?Sized>(
    field: &F,
    c: &DiscreteImmersion,
    x: &ImmersionTangent,
    eps: f64,
) -> Result<ImmersionTangent> {
    check_step(c, eps)?;
    let plus = field.eval(&c.perturbed(x, eps)?)?;
    let minus = field.eval(&c.perturbed(x, -eps)?)?;
    Ok(project_at(c, plus.sub(&minus)?.scale(0.5 / eps)))
}

/// `∇_{X(c)} Y − ∇_{Y(c)} X`, the bracket of two fields via the torsion-free
/// connection.
pub fn connection_bracket<X: CurveField + ?Sized, Y: CurveField + ?Sized>(
    c: &DiscreteImmersion,
    x: &X,
    y: &Y,
    eps: f64,
) -> Result<ImmersionTangent> {
    let xc = x.eval(c)?;
    let yc = y.eval(c)?;
    directional_derivative(y, c, &xc, eps)?.sub(&directional_derivative(x, c, &yc, eps)?)
}

/// One classical Runge–Kutta step of `ċ = F(c)`, retracting every stage to
/// the ambient.
pub fn rk4_step<F: CurveField + ?Sized>(field: &F, c: &DiscreteImmersion, dt: f64) -> Result<DiscreteImmersion> {
    let k1 = field.eval(c)?;
    let k2 = field.eval(&c.perturbed(&k1, 0.5 * dt)?)?;
    let k3 = field.eval(&c.perturbed(&k2, 0.5 * dt)?)?;
    let k4 = field.eval(&c.perturbed(&k3, dt)?)?;
    let incr = k1.add(&k2.scale(2.0))?.add(&k3.scale(2.0))?.add(&k4)?;
    c.perturbed(&incr, dt / 6.0)
}

/// `φ^Y_{−t} ∘ φ^X_{−t} ∘ φ^Y_t ∘ φ^X_t (c) − c`, each flow one RK4 step.
fn commutator_displacement<X: CurveField + ?Sized, Y: CurveField + ?Sized>(
    c: &DiscreteImmersion,
    x: &X,
    y: &Y,
    t: f64,
) -> Result<ImmersionTangent> {
    let c1 = rk4_step(x, c, t)?;
    let c2 = rk4_step(y, &c1, t)?;
    let c3 = rk4_step(x, &c2, -t)?;
    let c4 = rk4_step(y, &c3, -t)?;
    Ok(ImmersionTangent::from_vectors(c4.points().iter().zip(c.points()).map(|(p, q)| p - q).collect()))
}

/// Lie bracket `[X, Y]` at `c` from the flow commutator, averaged over
/// `t = ±ε` so the `O(ε)` term of the group commutator cancels.
pub fn flow_commutator<X: CurveField + ?Sized, Y: CurveField + ?Sized>(
    c: &DiscreteImmersion,
    x: &X,
    y: &Y,
    eps: f64,
) -> Result<ImmersionTangent> {
    check_step(c, eps)?;
    let fwd = commutator_displacement(c, x, y, eps)?;
    let bwd = commutator_displacement(c, x, y, -eps)?;
    Ok(project_at(c, fwd.add(&bwd)?.scale(0.5 / (eps * eps))))
}

/// `max_k |∇_X Y − ∇_Y X − [X, Y]|` at `c`.
pub fn torsion_defect<X: CurveField + ?Sized, Y: CurveField + ?Sized>(
    c: &DiscreteImmersion,
    x: &X,
    y: &Y,
    eps: f64,
) -> Result<f64> {
    let via_connection = connection_bracket(c, x, y, eps)?;
    let via_flows = flow_commutator(c, x, y, eps)?;
    Ok(via_connection.sub(&via_flows)?.max_norm())
}

/// Variation of the unit normal along `h`:
/// `∇_h n = −(κ m |∂θc| + D_s p) v` where `h = m ∂θc + p n`.
pub fn variation_of_normal(c: &DiscreteImmersion, h: &ImmersionTangent) -> Result<ImmersionTangent> {
    let split = c.split_tangent_normal(h)?;
    let kappa = c.curvature();
    let speed = c.speed();
    let ds_p = c.arclen_deriv(&split.normal_coeff)?;
    let coeff: Vec<f64> =
        (0..c.grid_n()).map(|k| -(kappa[k] * split.tangential_coeff[k] * speed[k] + ds_p[k])).collect();
    c.frame().tangent.weighted(&PeriodicScalarField::new(coeff)?)
}

/// `[a n, b n] = (a D_s b − b D_s a) v`.
pub fn bracket_closed_form(
    c: &DiscreteImmersion,
    a: &PeriodicScalarField,
    b: &PeriodicScalarField,
) -> Result<ImmersionTangent> {
    a.check_same_grid(b)?;
    let ds_a = c.arclen_deriv(a)?;
    let ds_b = c.arclen_deriv(b)?;
    let w: Vec<f64> = (0..c.grid_n()).map(|k| a[k] * ds_b[k] - b[k] * ds_a[k]).collect();
    c.frame().tangent.weighted(&PeriodicScalarField::new(w)?)
}

/// `∇_{an}(bn) − ∇_{bn}(an)` by central differences.
pub fn bracket_numeric(
    c: &DiscreteImmersion,
    a: &PeriodicScalarField,
    b: &PeriodicScalarField,
    eps: f64,
) -> Result<ImmersionTangent> {
    a.check_same_grid(b)?;
    connection_bracket(c, &Generator::Normal(a.clone()), &Generator::Normal(b.clone()), eps)
}
