//! Standard test curves.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::curve::{Ambient, DiscreteImmersion, Vec3};
use crate::error::{GeometryError, Result};
use crate::field::spacing;

/// Minimum speed required of generated random curves.
pub const MIN_RANDOM_SPEED: f64 = 0.1;
const MAX_RESCALINGS: usize = 100;

pub fn circle(n: usize, radius: f64) -> Result<DiscreteImmersion> {
    DiscreteImmersion::from_fn(n, Ambient::Plane, |t| Vec3::new(radius * t.cos(), radius * t.sin(), 0.0))
}

pub fn ellipse(n: usize, a: f64, b: f64) -> Result<DiscreteImmersion> {
    DiscreteImmersion::from_fn(n, Ambient::Plane, |t| Vec3::new(a * t.cos(), b * t.sin(), 0.0))
}

/// The equator `(cos θ, sin θ, 0)`.
pub fn great_circle(n: usize) -> Result<DiscreteImmersion> {
    DiscreteImmersion::from_fn(n, Ambient::Sphere, |t| Vec3::new(t.cos(), t.sin(), 0.0))
}

/// The circle of latitude at `z = height`, `|height| < 1`.
pub fn small_circle(n: usize, height: f64) -> Result<DiscreteImmersion> {
    if height.abs() >= 1.0 {
        return Err(GeometryError::InvalidParameter(format!("latitude height {height} outside (-1, 1)")));
    }
    let r = (1.0 - height * height).sqrt();
    DiscreteImmersion::from_fn(n, Ambient::Sphere, |t| Vec3::new(r * t.cos(), r * t.sin(), height))
}

/// A non-symmetric spherical curve: the normalized image of
/// `(cos θ, sin θ, 0.3 sin 2θ + 0.1 cos 3θ)`.
pub fn wavy_sphere_curve(n: usize) -> Result<DiscreteImmersion> {
    DiscreteImmersion::from_fn(n, Ambient::Sphere, |t| {
        Vec3::new(t.cos(), t.sin(), 0.3 * (2.0 * t).sin() + 0.1 * (3.0 * t).cos())
    })
}

/// Parameters of a randomly perturbed unit circle.
///
/// Each coordinate receives `amplitude · Σ_{k=1}^{K} k^{-decay} (α_k cos kθ + β_k sin kθ)`
/// with `α_k, β_k` uniform on `[-1, 1]`. The perturbation is halved until the
/// curve has speed at least [`MIN_RANDOM_SPEED`] everywhere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourierCurve {
    pub seed: u64,
    pub grid_n: usize,
    pub modes: usize,
    pub decay: f64,
    pub amplitude: f64,
}

impl FourierCurve {
    pub const DEFAULT_AMPLITUDE: f64 = 0.25;

    pub fn new(seed: u64, grid_n: usize, modes: usize, decay: f64) -> Self {
        Self { seed, grid_n, modes, decay, amplitude: Self::DEFAULT_AMPLITUDE }
    }

    pub fn with_amplitude(mut self, amplitude: f64) -> Self {
        self.amplitude = amplitude;
        self
    }

    pub fn generate(&self) -> Result<DiscreteImmersion> {
        if self.modes < 1 {
            return Err(GeometryError::InvalidParameter("random curve needs at least one mode".into()));
        }
        if self.decay.is_nan() || self.decay <= 1.0 {
            return Err(GeometryError::InvalidParameter(format!("decay {} must exceed 1", self.decay)));
        }
        if !self.amplitude.is_finite() || self.amplitude < 0.0 {
            return Err(GeometryError::InvalidParameter(format!("amplitude {}", self.amplitude)));
        }
        crate::field::validate_grid(self.grid_n)?;

        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        // (x cos, x sin, y cos, y sin) per mode
        let coeffs: Vec<[f64; 4]> = (1..=self.modes)
            .map(|k| {
                let w = (k as f64).powf(-self.decay);
                [(); 4].map(|_| w * rng.gen_range(-1.0..=1.0))
            })
            .collect();

        let h = spacing(self.grid_n);
        let mut scale = self.amplitude;
        for _ in 0..MAX_RESCALINGS {
            let points = (0..self.grid_n)
                .map(|j| {
                    let t = h * j as f64;
                    let (mut x, mut y) = (t.cos(), t.sin());
                    for (i, c) in coeffs.iter().enumerate() {
                        let (s, co) = (((i + 1) as f64) * t).sin_cos();
                        x += scale * (c[0] * co + c[1] * s);
                        y += scale * (c[2] * co + c[3] * s);
                    }
                    Vec3::new(x, y, 0.0)
                })
                .collect();
            match DiscreteImmersion::new(points, Ambient::Plane) {
                Ok(curve) if curve.min_speed() >= MIN_RANDOM_SPEED => return Ok(curve),
                Ok(_) | Err(GeometryError::ImmersionDegenerate { .. }) => scale *= 0.5,
                Err(e) => return Err(e),
            }
        }
        Err(GeometryError::GenerationFailed { attempts: MAX_RESCALINGS })
    }
}

/// Random plane curve with the default amplitude.
pub fn random_fourier_curve(seed: u64, grid_n: usize, modes: usize, decay: f64) -> Result<DiscreteImmersion> {
    FourierCurve::new(seed, grid_n, modes, decay).generate()
}
