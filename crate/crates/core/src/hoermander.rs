//! Rank verification that normal fields plus one layer of brackets span the
//! tangent space of the discretized space of plane curves, and synthesis of
//! tangential fields from brackets.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::calculus::bracket_closed_form;
use crate::curve::{Ambient, DiscreteImmersion, ImmersionTangent};
use crate::error::{GeometryError, Result};
use crate::field::{trig_basis, PeriodicScalarField};
use crate::oneform::{decompose_oneform, AbDecomposition, OneForm};

/// Default relative singular-value threshold for rank decisions.
pub const DEFAULT_RANK_TOL: f64 = 1e-8;

/// Outcome of a spanning check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpanReport {
    #[serde(rename = "n")]
    pub grid_n: usize,
    #[serde(rename = "K")]
    pub modes: usize,
    #[serde(rename = "m")]
    pub num_generators: usize,
    pub rank: usize,
    pub full: bool,
    pub sigma_min: f64,
    pub sigma_max: f64,
    pub rank_tol: f64,
    #[serde(skip)]
    pub singular_values: Vec<f64>,
}

impl SpanReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    /// `σ_min / σ_max`.
    pub fn inverse_condition(&self) -> f64 {
        if self.sigma_max > 0.0 {
            self.sigma_min / self.sigma_max
        } else {
            0.0
        }
    }
}

/// `T_j n` for the trigonometric basis of order `modes`.
pub fn normal_generators(c: &DiscreteImmersion, modes: usize) -> Result<Vec<ImmersionTangent>> {
    let n = c.frame().normal;
    trig_basis(c.grid_n(), modes)?.iter().map(|t| n.weighted(t)).collect()
}

/// `[T_i n, T_j n]` for all `i < j` over the trigonometric basis.
pub fn bracket_generators(c: &DiscreteImmersion, modes: usize) -> Result<Vec<ImmersionTangent>> {
    let basis = trig_basis(c.grid_n(), modes)?;
    let mut out = Vec::with_capacity(basis.len() * basis.len().saturating_sub(1) / 2);
    for (i, a) in basis.iter().enumerate() {
        for b in &basis[i + 1..] {
            out.push(bracket_closed_form(c, a, b)?);
        }
    }
    Ok(out)
}

fn require_plane(c: &DiscreteImmersion) -> Result<()> {
    if c.ambient() != Ambient::Plane {
        return Err(GeometryError::UnsupportedAmbient { expected: "plane" });
    }
    Ok(())
}

/// Column matrix of plane coordinates `(x_0, y_0, x_1, y_1, …)`, unit columns.
fn generator_matrix(grid_n: usize, generators: &[ImmersionTangent]) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(2 * grid_n, generators.len());
    for (j, g) in generators.iter().enumerate() {
        let norm = g.euclidean_norm();
        let scale = if norm > 0.0 { 1.0 / norm } else { 0.0 };
        for (k, w) in g.vectors().iter().enumerate() {
            m[(2 * k, j)] = w.x * scale;
            m[(2 * k + 1, j)] = w.y * scale;
        }
    }
    m
}

/// Rank of an arbitrary family of plane tangent vectors at `c`.
pub fn span_of(
    c: &DiscreteImmersion,
    generators: &[ImmersionTangent],
    modes: usize,
    rank_tol: f64,
) -> Result<SpanReport> {
    require_plane(c)?;
    if let Some(g) = generators.iter().find(|g| g.len() != c.grid_n()) {
        return Err(GeometryError::GridMismatch { left: c.grid_n(), right: g.len() });
    }
    let n = c.grid_n();
    let mut singular_values: Vec<f64> = if generators.is_empty() {
        Vec::new()
    } else {
        generator_matrix(n, generators).singular_values().iter().copied().collect()
    };
    singular_values.sort_by(|a, b| b.total_cmp(a));
    let sigma_max = singular_values.first().copied().unwrap_or(0.0);
    let sigma_min = singular_values.last().copied().unwrap_or(0.0);
    let rank = singular_values.iter().filter(|&&s| s > 0.0 && s >= rank_tol * sigma_max).count();
    Ok(SpanReport {
        grid_n: n,
        modes,
        num_generators: generators.len(),
        rank,
        full: rank == 2 * n,
        sigma_min,
        sigma_max,
        rank_tol,
        singular_values,
    })
}

/// Checks that `Nor + [Nor, Nor]` spans all `2N` plane directions at `c`.
pub fn verify_spanning(c: &DiscreteImmersion, modes: usize, rank_tol: f64) -> Result<SpanReport> {
    require_plane(c)?;
    let mut generators = normal_generators(c, modes)?;
    generators.extend(bracket_generators(c, modes)?);
    span_of(c, &generators, modes, rank_tol)
}

/// Pairs `(a_k, b_k)` whose brackets sum to the tangential field `m ∂θc`.
///
/// Since `[an, bn] = |∂θc|^{-1} (a ∂θb − b ∂θa) v`, it suffices to decompose
/// the one-form with `α(∂θ) = m |∂θc|²`.
pub fn synthesize_tangential(c: &DiscreteImmersion, m: &PeriodicScalarField) -> Result<AbDecomposition> {
    require_plane(c)?;
    c.check_field(m)?;
    let alpha = m.zip_with(&c.speed(), |m, s| m * s * s)?;
    decompose_oneform(&OneForm(alpha))
}

/// `Σ coeff_k [a_k n, b_k n]`.
pub fn sum_of_brackets(c: &DiscreteImmersion, decomposition: &AbDecomposition) -> Result<ImmersionTangent> {
    decomposition
        .terms()
        .iter()
        .try_fold(ImmersionTangent::zeros(c.grid_n()), |acc, t| acc.axpy(t.coeff, &bracket_closed_form(c, &t.a, &t.b)?))
}
