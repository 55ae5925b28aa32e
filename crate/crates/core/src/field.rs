//! Scalar fields sampled on the uniform periodic grid `θ_k = 2πk/N`.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{GeometryError, Result};

/// Stencil weights of the 4th-order central first derivative, offsets 1 and 2.
const STENCIL: [f64; 2] = [8.0 / 12.0, -1.0 / 12.0];

pub fn validate_grid(n: usize) -> Result<()> {
    if n < 8 || !n.is_multiple_of(2) {
        return Err(GeometryError::InvalidGrid(n));
    }
    Ok(())
}

/// Grid spacing `2π/N`.
pub fn spacing(n: usize) -> f64 {
    2.0 * PI / n as f64
}

/// Grid nodes `θ_k = 2πk/N`.
pub fn nodes(n: usize) -> impl Iterator<Item = f64> {
    let h = spacing(n);
    (0..n).map(move |k| h * k as f64)
}

/// 4th-order central difference of a periodic sequence.
///
/// Works for anything that forms a vector space over `f64` (scalars, ambient
/// vectors). Every node is evaluated with the same operation order, so a
/// cyclic shift of the input shifts the output bit for bit.
pub fn periodic_derivative<T>(samples: &[T]) -> Vec<T>
where
    T: Copy + Add<Output = T> + Sub<Output = T> + Mul<f64, Output = T>,
{
    let n = samples.len();
    let inv_h = 1.0 / spacing(n);
    (0..n)
        .map(|k| {
            let near = samples[(k + 1) % n] - samples[(k + n - 1) % n];
            let far = samples[(k + 2) % n] - samples[(k + n - 2) % n];
            (near * STENCIL[0] + far * STENCIL[1]) * inv_h
        })
        .collect()
}

/// Fourier symbol of [`periodic_derivative`]: `D e^{ikθ} = i λ_k e^{ikθ}`.
pub fn derivative_symbol(n: usize, k: i64) -> f64 {
    let h = spacing(n);
    let x = k as f64 * h;
    2.0 * (STENCIL[0] * x.sin() + STENCIL[1] * (2.0 * x).sin()) / h
}

/// N uniform samples of a smooth function on the circle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct PeriodicScalarField {
    samples: Vec<f64>,
}

impl TryFrom<Vec<f64>> for PeriodicScalarField {
    type Error = GeometryError;

    fn try_from(samples: Vec<f64>) -> Result<Self> {
        Self::new(samples)
    }
}

impl From<PeriodicScalarField> for Vec<f64> {
    fn from(field: PeriodicScalarField) -> Self {
        field.samples
    }
}

impl PeriodicScalarField {
    pub fn new(samples: Vec<f64>) -> Result<Self> {
        validate_grid(samples.len())?;
        if let Some(k) = samples.iter().position(|x| !x.is_finite()) {
            return Err(GeometryError::NonFinite(k));
        }
        Ok(Self { samples })
    }

    /// Samples `u(θ_k)` of a closure on an `n`-node grid.
    pub fn from_fn(n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(nodes(n).map(f).collect())
    }

    pub fn constant(n: usize, value: f64) -> Result<Self> {
        Self::new(vec![value; n])
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Self::constant(n, 0.0)
    }

    pub fn grid_n(&self) -> usize {
        self.samples.len()
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn min(&self) -> f64 {
        self.samples.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.samples.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Discrete L² norm `(h Σ u_k²)^{1/2}`.
    pub fn l2_norm(&self) -> f64 {
        let h = spacing(self.grid_n());
        (h * self.samples.iter().map(|x| x * x).sum::<f64>()).sqrt()
    }

    /// Plain average of the samples (trapezoidal mean on the periodic grid).
    pub fn mean(&self) -> f64 {
        self.samples.iter().sum::<f64>() / self.grid_n() as f64
    }

    pub fn check_same_grid(&self, other: &Self) -> Result<()> {
        if self.grid_n() != other.grid_n() {
            return Err(GeometryError::GridMismatch { left: self.grid_n(), right: other.grid_n() });
        }
        Ok(())
    }

    /// 4th-order central derivative with respect to θ.
    pub fn deriv_theta(&self) -> Self {
        Self { samples: periodic_derivative(&self.samples) }
    }

    /// Pointwise map. Panics in debug builds if the result is not finite.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        let samples: Vec<f64> = self.samples.iter().map(|&x| f(x)).collect();
        debug_assert!(samples.iter().all(|x| x.is_finite()));
        Self { samples }
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        self.check_same_grid(other)?;
        let samples = self.samples.iter().zip(&other.samples).map(|(&x, &y)| f(x, y)).collect();
        Ok(Self { samples })
    }

    pub fn scale(&self, factor: f64) -> Self {
        self.map(|x| factor * x)
    }

    /// Cyclic shift: output sample `k` is input sample `k + shift`.
    pub fn rotated(&self, shift: usize) -> Self {
        let mut samples = self.samples.clone();
        samples.rotate_left(shift % self.grid_n());
        Self { samples }
    }
}

impl std::ops::Index<usize> for PeriodicScalarField {
    type Output = f64;

    fn index(&self, k: usize) -> &f64 {
        &self.samples[k]
    }
}

/// Real trigonometric basis `{1, cos θ, sin θ, …, cos Kθ, sin Kθ}` on an `n`-node
/// grid. Once `K = N/2 − 1` the Nyquist mode `cos(Nθ/2)` is appended, since
/// `sin(Nθ/2)` vanishes on the grid and the remaining N functions span every
/// grid function.
pub fn trig_basis(n: usize, modes: usize) -> Result<Vec<PeriodicScalarField>> {
    validate_grid(n)?;
    if 2 * modes + 1 > n {
        return Err(GeometryError::BasisTooLarge { modes, grid_n: n });
    }
    let mut basis = vec![PeriodicScalarField::constant(n, 1.0)?];
    for k in 1..=modes {
        let kf = k as f64;
        basis.push(PeriodicScalarField::from_fn(n, |t| (kf * t).cos())?);
        basis.push(PeriodicScalarField::from_fn(n, |t| (kf * t).sin())?);
    }
    if 2 * modes + 2 == n {
        basis.push(PeriodicScalarField::new((0..n).map(|k| if k % 2 == 0 { 1.0 } else { -1.0 }).collect())?);
    }
    Ok(basis)
}
