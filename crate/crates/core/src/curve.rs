//! Discrete closed immersed curves in the plane or on the unit sphere.

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::error::{GeometryError, Result};
use crate::field::{periodic_derivative, spacing, validate_grid, PeriodicScalarField};

pub type Vec3 = Vector3<f64>;

/// Minimum admissible speed `|∂θ c|`.
pub const DEGENERACY_THRESHOLD: f64 = 1e-10;
/// Points of a spherical curve must have unit norm to this tolerance.
pub const SPHERE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Ambient {
    Plane,
    Sphere,
}

impl Ambient {
    pub fn dim(self) -> usize {
        match self {
            Ambient::Plane => 2,
            Ambient::Sphere => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Ambient::Plane => "plane",
            Ambient::Sphere => "sphere",
        }
    }

    /// Orthogonal projection onto the tangent space of the ambient at `point`:
    /// the identity in the plane, `Id − x xᵀ` on the sphere.
    pub fn project(self, point: &Vec3, w: &Vec3) -> Vec3 {
        match self {
            Ambient::Plane => *w,
            Ambient::Sphere => w - point * point.dot(w),
        }
    }

    /// Pulls a perturbed point back onto the ambient.
    pub fn retract(self, point: Vec3) -> Vec3 {
        match self {
            Ambient::Plane => point,
            Ambient::Sphere => point.normalize(),
        }
    }
}

impl std::str::FromStr for Ambient {
    type Err = GeometryError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plane" => Ok(Ambient::Plane),
            "sphere" => Ok(Ambient::Sphere),
            other => Err(GeometryError::InvalidParameter(format!("unknown ambient `{other}`"))),
        }
    }
}

/// A closed curve sampled at `θ_k = 2πk/N`.
///
/// Plane curves keep a zero third coordinate. Construction checks the grid,
/// the unit-norm constraint on the sphere, and the immersion condition.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteImmersion {
    points: Vec<Vec3>,
    velocity: Vec<Vec3>,
    ambient: Ambient,
}

impl DiscreteImmersion {
    pub fn new(points: Vec<Vec3>, ambient: Ambient) -> Result<Self> {
        validate_grid(points.len())?;
        for (k, p) in points.iter().enumerate() {
            if !p.iter().all(|x| x.is_finite()) {
                return Err(GeometryError::NonFinite(k));
            }
            match ambient {
                Ambient::Plane if p.z != 0.0 => {
                    return Err(GeometryError::InvalidParameter(format!("plane curve has nonzero z at node {k}")))
                }
                Ambient::Sphere if (p.norm() - 1.0).abs() > SPHERE_TOLERANCE => {
                    return Err(GeometryError::OffSphere { index: k, norm: p.norm() })
                }
                _ => {}
            }
        }
        let velocity = periodic_derivative(&points);
        if let Some((index, speed)) =
            velocity.iter().map(|v| v.norm()).enumerate().find(|(_, s)| *s <= DEGENERACY_THRESHOLD)
        {
            return Err(GeometryError::ImmersionDegenerate { index, speed });
        }
        Ok(Self { points, velocity, ambient })
    }

    pub fn planar(xy: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        Self::new(xy.into_iter().map(|(x, y)| Vec3::new(x, y, 0.0)).collect(), Ambient::Plane)
    }

    /// Samples a parametrized curve `θ ↦ c(θ)`; spherical samples are normalized.
    pub fn from_fn(n: usize, ambient: Ambient, f: impl Fn(f64) -> Vec3) -> Result<Self> {
        validate_grid(n)?;
        let h = spacing(n);
        let points = (0..n).map(|k| ambient.retract(f(h * k as f64))).collect();
        Self::new(points, ambient)
    }

    pub fn grid_n(&self) -> usize {
        self.points.len()
    }

    pub fn ambient(&self) -> Ambient {
        self.ambient
    }

    pub fn points(&self) -> &[Vec3] {
        &self.points
    }

    /// `∂θ c` by 4th-order central differences.
    pub fn velocity(&self) -> &[Vec3] {
        &self.velocity
    }

    pub fn check_tangent(&self, h: &ImmersionTangent) -> Result<()> {
        if h.len() != self.grid_n() {
            return Err(GeometryError::GridMismatch { left: self.grid_n(), right: h.len() });
        }
        Ok(())
    }

    pub fn check_field(&self, u: &PeriodicScalarField) -> Result<()> {
        if u.grid_n() != self.grid_n() {
            return Err(GeometryError::GridMismatch { left: self.grid_n(), right: u.grid_n() });
        }
        Ok(())
    }

    /// `|∂θ c|`; squared, it is the single component of the pullback metric.
    pub fn speed(&self) -> PeriodicScalarField {
        PeriodicScalarField::new(self.velocity.iter().map(|v| v.norm()).collect())
            .expect("speed of a validated immersion is finite")
    }

    /// Unit tangent `v` and unit normal `n` (plane: `n = Jv`; sphere: `n = c × v`).
    pub fn frame(&self) -> Frame {
        let (tangent, normal) = self
            .points
            .iter()
            .zip(&self.velocity)
            .map(|(p, dc)| {
                let v = self.ambient.project(p, dc).normalize();
                let n = match self.ambient {
                    Ambient::Plane => Vec3::new(-v.y, v.x, 0.0),
                    Ambient::Sphere => p.cross(&v),
                };
                (v, n)
            })
            .unzip();
        Frame { tangent: ImmersionTangent::from_vectors(tangent), normal: ImmersionTangent::from_vectors(normal) }
    }

    /// Arclength derivative `D_s u = ∂θ u / |∂θ c|`.
    pub fn arclen_deriv(&self, u: &PeriodicScalarField) -> Result<PeriodicScalarField> {
        self.check_field(u)?;
        u.deriv_theta().zip_with(&self.speed(), |du, s| du / s)
    }

    /// Componentwise arclength derivative of an ambient vector sequence.
    pub fn arclen_deriv_vectors(&self, h: &ImmersionTangent) -> Result<Vec<Vec3>> {
        self.check_tangent(h)?;
        Ok(periodic_derivative(h.vectors()).into_iter().zip(&self.velocity).map(|(dh, dc)| dh / dc.norm()).collect())
    }

    /// `κ = ⟨D_s v, n⟩`: signed curvature in the plane, geodesic curvature on
    /// the sphere (the normal component of `D_s v` is unaffected by the
    /// projection to the sphere's tangent plane, since `n ⊥ c`).
    pub fn curvature(&self) -> PeriodicScalarField {
        let frame = self.frame();
        let dv = self.arclen_deriv_vectors(&frame.tangent).expect("frame lives on the same grid");
        PeriodicScalarField::new(
            dv.iter()
                .zip(frame.normal.vectors())
                .zip(&self.points)
                .map(|((d, n), p)| self.ambient.project(p, d).dot(n))
                .collect(),
        )
        .expect("curvature of a validated immersion is finite")
    }

    /// Splits `h = m ∂θc + ⟨h, n⟩ n` (after tangent projection on the sphere).
    pub fn split_tangent_normal(&self, h: &ImmersionTangent) -> Result<TangentNormalSplit> {
        self.check_tangent(h)?;
        let frame = self.frame();
        let speed = self.speed();
        let mut m = Vec::with_capacity(self.grid_n());
        let mut p = Vec::with_capacity(self.grid_n());
        for k in 0..self.grid_n() {
            let w = h.vectors()[k];
            m.push(w.dot(&frame.tangent.vectors()[k]) / speed[k]);
            p.push(w.dot(&frame.normal.vectors()[k]));
        }
        Ok(TangentNormalSplit {
            tangential_coeff: PeriodicScalarField::new(m)?,
            normal_coeff: PeriodicScalarField::new(p)?,
        })
    }

    /// `c + εh` pointwise, retracted to the sphere when needed.
    pub fn perturbed(&self, h: &ImmersionTangent, eps: f64) -> Result<Self> {
        self.check_tangent(h)?;
        let points = self.points.iter().zip(h.vectors()).map(|(p, w)| self.ambient.retract(p + w * eps)).collect();
        Self::new(points, self.ambient)
    }

    /// Cyclic shift of the node labels: new node `k` is old node `k + shift`.
    pub fn rotated(&self, shift: usize) -> Self {
        let mut points = self.points.clone();
        let mut velocity = self.velocity.clone();
        points.rotate_left(shift % self.grid_n());
        velocity.rotate_left(shift % self.grid_n());
        Self { points, velocity, ambient: self.ambient }
    }

    pub fn min_speed(&self) -> f64 {
        self.speed().min()
    }
}

/// A tangent vector to the space of immersions: one ambient vector per node.
#[derive(Debug, Clone, PartialEq)]
pub struct ImmersionTangent {
    vectors: Vec<Vec3>,
}

impl ImmersionTangent {
    pub fn from_vectors(vectors: Vec<Vec3>) -> Self {
        Self { vectors }
    }

    /// Builds a tangent at `c`, projecting each vector to the ambient tangent
    /// plane at its base point.
    pub fn at(c: &DiscreteImmersion, vectors: Vec<Vec3>) -> Result<Self> {
        if vectors.len() != c.grid_n() {
            return Err(GeometryError::GridMismatch { left: c.grid_n(), right: vectors.len() });
        }
        Ok(Self { vectors: vectors.iter().zip(c.points()).map(|(w, p)| c.ambient().project(p, w)).collect() })
    }

    pub fn zeros(n: usize) -> Self {
        Self { vectors: vec![Vec3::zeros(); n] }
    }

    /// The same ambient vector at every node, projected to the ambient.
    pub fn constant(c: &DiscreteImmersion, w: Vec3) -> Self {
        Self::at(c, vec![w; c.grid_n()]).expect("length matches by construction")
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[Vec3] {
        &self.vectors
    }

    /// Pointwise product with a scalar field.
    pub fn weighted(&self, a: &PeriodicScalarField) -> Result<Self> {
        if a.grid_n() != self.len() {
            return Err(GeometryError::GridMismatch { left: self.len(), right: a.grid_n() });
        }
        Ok(Self { vectors: self.vectors.iter().zip(a.samples()).map(|(w, s)| w * *s).collect() })
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self { vectors: self.vectors.iter().map(|w| w * factor).collect() }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, |a, b| a - b)
    }

    /// `self + factor · other`.
    pub fn axpy(&self, factor: f64, other: &Self) -> Result<Self> {
        self.combine(other, |a, b| a + b * factor)
    }

    fn combine(&self, other: &Self, f: impl Fn(&Vec3, &Vec3) -> Vec3) -> Result<Self> {
        if self.len() != other.len() {
            return Err(GeometryError::GridMismatch { left: self.len(), right: other.len() });
        }
        Ok(Self { vectors: self.vectors.iter().zip(&other.vectors).map(|(a, b)| f(a, b)).collect() })
    }

    /// Pointwise inner product `⟨self_k, other_k⟩`.
    pub fn dot(&self, other: &Self) -> Result<Vec<f64>> {
        if self.len() != other.len() {
            return Err(GeometryError::GridMismatch { left: self.len(), right: other.len() });
        }
        Ok(self.vectors.iter().zip(&other.vectors).map(|(a, b)| a.dot(b)).collect())
    }

    /// `max_k |h_k|`.
    pub fn max_norm(&self) -> f64 {
        self.vectors.iter().fold(0.0, |m, w| m.max(w.norm()))
    }

    /// Discrete L² norm `(h Σ_k |h_k|²)^{1/2}`.
    pub fn l2_norm(&self) -> f64 {
        (spacing(self.len()) * self.vectors.iter().map(|w| w.norm_squared()).sum::<f64>()).sqrt()
    }

    /// Euclidean norm of the stacked coordinates.
    pub fn euclidean_norm(&self) -> f64 {
        self.vectors.iter().map(|w| w.norm_squared()).sum::<f64>().sqrt()
    }
}

#[derive(Debug, Clone)]
pub struct Frame {
    pub tangent: ImmersionTangent,
    pub normal: ImmersionTangent,
}

/// Coefficients of `h = m ∂θc + p n`.
#[derive(Debug, Clone)]
pub struct TangentNormalSplit {
    /// `m`, with `X^⊤ = m ∂θ`.
    pub tangential_coeff: PeriodicScalarField,
    /// `p = ⟨h, n⟩`.
    pub normal_coeff: PeriodicScalarField,
}

impl TangentNormalSplit {
    /// `m |∂θc| v + p n`.
    pub fn recombine(&self, c: &DiscreteImmersion) -> Result<ImmersionTangent> {
        let frame = c.frame();
        let speed = c.speed();
        let m = self.tangential_coeff.zip_with(&speed, |m, s| m * s)?;
        frame.tangent.weighted(&m)?.add(&frame.normal.weighted(&self.normal_coeff)?)
    }
}
