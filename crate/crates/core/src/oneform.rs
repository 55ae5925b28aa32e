//! Writing one-forms on the circle as finite sums of `a db − b da`.
//!
//! The pipeline localizes a form with a four-chart partition of unity, writes
//! each piece as `f dg` in a chart coordinate, shifts `f` to be positive, and
//! realizes positive `f dg` exactly with `a = (f e^{-g})^{1/2}`,
//! `b = (f e^{g})^{1/2}`.

use std::f64::consts::{FRAC_PI_2, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{GeometryError, Result};
use crate::field::{nodes, validate_grid, PeriodicScalarField};

/// Nodes where `|α| < SUPPORT_ZERO` count as outside the support of a form.
pub const SUPPORT_ZERO: f64 = 1e-12;

/// Samples `α(∂θ)` of a one-form at the grid nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct OneForm(pub PeriodicScalarField);

impl OneForm {
    pub fn new(samples: Vec<f64>) -> Result<Self> {
        PeriodicScalarField::new(samples).map(Self)
    }

    pub fn from_fn(n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        PeriodicScalarField::from_fn(n, f).map(Self)
    }

    pub fn grid_n(&self) -> usize {
        self.0.grid_n()
    }

    pub fn samples(&self) -> &[f64] {
        self.0.samples()
    }

    /// `‖self − other‖₂ / max(‖other‖₂, 1)` in the discrete L² norm.
    pub fn relative_error(&self, reference: &OneForm) -> Result<f64> {
        let diff = self.0.zip_with(&reference.0, |x, y| x - y)?;
        Ok(diff.l2_norm() / reference.0.l2_norm().max(1.0))
    }
}

/// Random band-limited form `c_0 + Σ_{k≤modes} (a_k cos kθ + b_k sin kθ)`
/// with coefficients uniform in `[−1, 1]`.
pub fn random_band_limited(seed: u64, n: usize, modes: usize) -> Result<OneForm> {
    validate_grid(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c0: f64 = rng.gen_range(-1.0..=1.0);
    let coeffs: Vec<(f64, f64)> = (0..modes).map(|_| (rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0))).collect();
    OneForm::from_fn(n, |t| {
        coeffs.iter().enumerate().fold(c0, |acc, (k, (a, b))| {
            let (s, c) = (((k + 1) as f64) * t).sin_cos();
            acc + a * c + b * s
        })
    })
}

/// `a db − b da`, with `d` the 4th-order θ-derivative.
pub fn ab_form(a: &PeriodicScalarField, b: &PeriodicScalarField) -> Result<OneForm> {
    a.check_same_grid(b)?;
    let db = b.deriv_theta();
    let da = a.deriv_theta();
    OneForm::new((0..a.grid_n()).map(|k| a[k] * db[k] - b[k] * da[k]).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AbTerm {
    pub coeff: f64,
    pub a: PeriodicScalarField,
    pub b: PeriodicScalarField,
}

/// A finite combination `Σ coeff_i (a_i db_i − b_i da_i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AbDecomposition {
    grid_n: usize,
    terms: Vec<AbTerm>,
}

impl AbDecomposition {
    pub fn empty(grid_n: usize) -> Result<Self> {
        validate_grid(grid_n)?;
        Ok(Self { grid_n, terms: Vec::new() })
    }

    pub fn from_terms(grid_n: usize, terms: Vec<AbTerm>) -> Result<Self> {
        validate_grid(grid_n)?;
        for t in &terms {
            for f in [&t.a, &t.b] {
                if f.grid_n() != grid_n {
                    return Err(GeometryError::GridMismatch { left: grid_n, right: f.grid_n() });
                }
            }
        }
        Ok(Self { grid_n, terms })
    }

    pub fn grid_n(&self) -> usize {
        self.grid_n
    }

    pub fn terms(&self) -> &[AbTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn extend(&mut self, other: AbDecomposition) {
        self.terms.extend(other.terms);
    }

    pub fn reconstruct(&self) -> OneForm {
        let mut acc = vec![0.0; self.grid_n];
        for t in &self.terms {
            let form = ab_form(&t.a, &t.b).expect("terms share the decomposition grid");
            for (s, x) in acc.iter_mut().zip(form.samples()) {
                *s += t.coeff * x;
            }
        }
        OneForm::new(acc).expect("finite terms give a finite sum")
    }

    /// JSON export: `[{"coeff": c, "a": [...], "b": [...]}, ...]`.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.terms).expect("terms serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let terms: Vec<AbTerm> = serde_json::from_str(text)?;
        let grid_n = terms
            .first()
            .map(|t| t.a.grid_n())
            .ok_or_else(|| GeometryError::InvalidParameter("empty decomposition carries no grid size".into()))?;
        Self::from_terms(grid_n, terms)
    }
}

/// Single-term representation of `f dg` for strictly positive `f`.
pub fn span_positive(f: &PeriodicScalarField, g: &PeriodicScalarField) -> Result<AbDecomposition> {
    f.check_same_grid(g)?;
    let min = f.min();
    if min <= 0.0 {
        return Err(GeometryError::NotPositive { min });
    }
    let a = f.zip_with(g, |f, g| (f * (-g).exp()).sqrt())?;
    let b = f.zip_with(g, |f, g| (f * g.exp()).sqrt())?;
    AbDecomposition::from_terms(f.grid_n(), vec![AbTerm { coeff: 1.0, a, b }])
}

/// Two-term representation of `f dg` for arbitrary `f`: with
/// `C = max(0, −min f)`, `f dg = (f + C + 1) dg − (C + 1)(1·dg − g·d1)`.
pub fn span_fdg(f: &PeriodicScalarField, g: &PeriodicScalarField) -> Result<AbDecomposition> {
    f.check_same_grid(g)?;
    if f.max_abs() == 0.0 {
        return AbDecomposition::empty(f.grid_n());
    }
    let shift = (-f.min()).max(0.0) + 1.0;
    let mut out = span_positive(&f.map(|x| x + shift), g)?;
    out.terms.push(AbTerm { coeff: -shift, a: PeriodicScalarField::constant(f.grid_n(), 1.0)?, b: g.clone() });
    Ok(out)
}

/// Smooth bump `exp(−1/(1−t²))` on `(−1, 1)`, zero elsewhere.
pub fn bump(t: f64) -> f64 {
    if t.abs() < 1.0 {
        (-1.0 / (1.0 - t * t)).exp()
    } else {
        0.0
    }
}

/// Signed angular distance of `theta` from `center`, in `(−π, π]`.
fn angular_offset(theta: f64, center: f64) -> f64 {
    let d = (theta - center).rem_euclid(2.0 * PI);
    if d > PI {
        d - 2.0 * PI
    } else {
        d
    }
}

#[derive(Debug, Clone)]
pub struct Chart {
    pub center: f64,
    pub half_width: f64,
    /// A global function restricting to a coordinate on the arc.
    pub coordinate: PeriodicScalarField,
    pub partition: PeriodicScalarField,
}

/// Four arcs centred at `0, π/2, π, 3π/2` with half-width `3π/8`, using
/// `sin θ` on the arcs at `0, π` and `cos θ` on the arcs at `π/2, 3π/2`.
#[derive(Debug, Clone)]
pub struct ChartAtlas {
    pub charts: Vec<Chart>,
}

impl ChartAtlas {
    pub const HALF_WIDTH: f64 = 3.0 * PI / 8.0;

    pub fn build(n: usize) -> Result<Self> {
        validate_grid(n)?;
        let centers = [0.0, FRAC_PI_2, PI, 3.0 * FRAC_PI_2];
        let bumps: Vec<Vec<f64>> = centers
            .iter()
            .map(|&c| nodes(n).map(|t| bump(angular_offset(t, c) / Self::HALF_WIDTH)).collect())
            .collect();
        let total: Vec<f64> = (0..n).map(|k| bumps.iter().map(|b| b[k]).sum()).collect();
        let charts = centers
            .iter()
            .zip(&bumps)
            .enumerate()
            .map(|(i, (&center, b))| {
                let coordinate = if i % 2 == 0 {
                    PeriodicScalarField::from_fn(n, f64::sin)?
                } else {
                    PeriodicScalarField::from_fn(n, f64::cos)?
                };
                let partition = PeriodicScalarField::new(b.iter().zip(&total).map(|(x, s)| x / s).collect())?;
                Ok(Chart { center, half_width: Self::HALF_WIDTH, coordinate, partition })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { charts })
    }
}

/// Decomposes any one-form into at most eight `a db − b da` terms.
pub fn decompose_oneform(alpha: &OneForm) -> Result<AbDecomposition> {
    let n = alpha.grid_n();
    let atlas = ChartAtlas::build(n)?;
    let mut out = AbDecomposition::empty(n)?;
    for chart in &atlas.charts {
        let dx = chart.coordinate.deriv_theta();
        // divide only where the partition is nonzero; literal zero elsewhere
        let f: Vec<f64> = (0..n)
            .map(|k| {
                let phi = chart.partition[k];
                if phi > 0.0 {
                    phi * alpha.samples()[k] / dx[k]
                } else {
                    0.0
                }
            })
            .collect();
        out.extend(span_fdg(&PeriodicScalarField::new(f)?, &chart.coordinate)?);
    }
    Ok(out)
}

/// An open arc `(lo, hi)` of the circle, `0 < hi − lo < 2π`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub lo: f64,
    pub hi: f64,
}

impl Window {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && hi > lo && hi - lo < 2.0 * PI) {
            return Err(GeometryError::InvalidParameter(format!("window ({lo}, {hi})")));
        }
        Ok(Self { lo, hi })
    }

    pub fn length(&self) -> f64 {
        self.hi - self.lo
    }

    /// Position of `theta` measured from `lo`, in `[0, 2π)`.
    pub fn offset(&self, theta: f64) -> f64 {
        (theta - self.lo).rem_euclid(2.0 * PI)
    }

    pub fn contains(&self, theta: f64) -> bool {
        let s = self.offset(theta);
        s > 0.0 && s < self.length()
    }
}

/// C^∞ step: 0 for `x ≤ 0`, 1 for `x ≥ 1`.
fn smooth_step(x: f64) -> f64 {
    let psi = |x: f64| if x > 0.0 { (-1.0 / x).exp() } else { 0.0 };
    let (p, q) = (psi(x), psi(1.0 - x));
    if p == 0.0 {
        0.0
    } else {
        p / (p + q)
    }
}

/// Cutoff equal to 1 on `[s_lo, s_hi]` and 0 outside `(0, len)`, in window offsets.
fn window_cutoff(offset: f64, len: f64, s_lo: f64, s_hi: f64) -> f64 {
    if offset <= 0.0 || offset >= len {
        0.0
    } else if offset < s_lo {
        smooth_step(offset / s_lo)
    } else if offset > s_hi {
        smooth_step((len - offset) / (len - s_hi))
    } else {
        1.0
    }
}

/// Like [`decompose_oneform`] for a form supported in `window`, with every
/// output function multiplied by a cutoff that equals 1 on the support of `α`
/// and vanishes identically outside the window.
pub fn decompose_supported(alpha: &OneForm, window: Window) -> Result<AbDecomposition> {
    let n = alpha.grid_n();
    let offsets: Vec<f64> = nodes(n).map(|t| window.offset(t)).collect();
    let mut support: Option<(f64, f64)> = None;
    for (k, (&value, &t)) in alpha.samples().iter().zip(&offsets).enumerate() {
        let inside = t > 0.0 && t < window.length();
        if value.abs() >= SUPPORT_ZERO {
            if !inside {
                return Err(GeometryError::SupportViolation { index: k, value });
            }
            support = Some(support.map_or((t, t), |(lo, hi)| (lo.min(t), hi.max(t))));
        }
    }

    let cutoff = match support {
        Some((s_lo, s_hi)) => {
            PeriodicScalarField::new(offsets.iter().map(|&t| window_cutoff(t, window.length(), s_lo, s_hi)).collect())?
        }
        None => PeriodicScalarField::zeros(n)?,
    };

    let global = decompose_oneform(alpha)?;
    let terms = global
        .terms
        .into_iter()
        .map(|t| {
            Ok(AbTerm {
                coeff: t.coeff,
                a: t.a.zip_with(&cutoff, |x, c| x * c)?,
                b: t.b.zip_with(&cutoff, |x, c| x * c)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    AbDecomposition::from_terms(n, terms)
}
