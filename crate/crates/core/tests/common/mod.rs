//! Test oracles written independently of the library internals.
#![allow(dead_code)]

use std::f64::consts::PI;

use norbrack_core::{Ambient, DiscreteImmersion, Vec3};

/// 4th-order periodic central difference, written out directly.
pub fn diff4(u: &[Vec3]) -> Vec<Vec3> {
    let n = u.len();
    let h = 2.0 * PI / n as f64;
    (0..n)
        .map(|k| {
            let p1 = u[(k + 1) % n];
            let m1 = u[(k + n - 1) % n];
            let p2 = u[(k + 2) % n];
            let m2 = u[(k + n - 2) % n];
            (8.0 * (p1 - m1) - (p2 - m2)) / (12.0 * h)
        })
        .collect()
}

/// Unit normal recomputed from raw points.
pub fn normal_of(points: &[Vec3], ambient: Ambient) -> Vec<Vec3> {
    let d = diff4(points);
    points
        .iter()
        .zip(&d)
        .map(|(p, dp)| match ambient {
            Ambient::Plane => {
                let v = dp.normalize();
                Vec3::new(-v.y, v.x, 0.0)
            }
            Ambient::Sphere => {
                let t = (dp - p * p.dot(dp)).normalize();
                p.cross(&t)
            }
        })
        .collect()
}

/// Unit tangent recomputed from raw points.
pub fn tangent_of(points: &[Vec3], ambient: Ambient) -> Vec<Vec3> {
    let d = diff4(points);
    points
        .iter()
        .zip(&d)
        .map(|(p, dp)| match ambient {
            Ambient::Plane => dp.normalize(),
            Ambient::Sphere => (dp - p * p.dot(dp)).normalize(),
        })
        .collect()
}

pub fn retract(p: Vec3, ambient: Ambient) -> Vec3 {
    match ambient {
        Ambient::Plane => p,
        Ambient::Sphere => p.normalize(),
    }
}

pub fn shifted(c: &DiscreteImmersion, h: &[Vec3], eps: f64) -> Vec<Vec3> {
    c.points().iter().zip(h).map(|(p, w)| retract(p + w * eps, c.ambient())).collect()
}

/// Central difference of the unit normal along `h`, projected at `c`.
pub fn fd_normal_variation(c: &DiscreteImmersion, h: &[Vec3], eps: f64) -> Vec<Vec3> {
    let plus = normal_of(&shifted(c, h, eps), c.ambient());
    let minus = normal_of(&shifted(c, h, -eps), c.ambient());
    c.points()
        .iter()
        .zip(plus.iter().zip(&minus))
        .map(|(p, (a, b))| {
            let d = (a - b) / (2.0 * eps);
            match c.ambient() {
                Ambient::Plane => d,
                Ambient::Sphere => d - p * p.dot(&d),
            }
        })
        .collect()
}

pub fn max_diff(a: &[Vec3], b: &[Vec3]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Relative L² distance `‖a − b‖ / ‖b‖` on the uniform grid.
pub fn rel_l2(a: &[Vec3], b: &[Vec3]) -> f64 {
    let h = 2.0 * PI / a.len() as f64;
    let num = (h * a.iter().zip(b).map(|(x, y)| (x - y).norm_squared()).sum::<f64>()).sqrt();
    let den = (h * b.iter().map(|y| y.norm_squared()).sum::<f64>()).sqrt();
    num / den
}

pub fn rel_l2_scalar(a: &[f64], b: &[f64]) -> f64 {
    let h = 2.0 * PI / a.len() as f64;
    let num = (h * a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>()).sqrt();
    let den = (h * b.iter().map(|y| y * y).sum::<f64>()).sqrt();
    num / den
}

/// Numerical rank by modified Gram–Schmidt with re-orthogonalization.
pub fn gram_schmidt_rank(columns: &[Vec<f64>], tol: f64) -> usize {
    let scale = columns.iter().map(|c| norm(c)).fold(0.0, f64::max);
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for col in columns {
        let mut w = col.clone();
        for _ in 0..2 {
            for q in &basis {
                let d: f64 = w.iter().zip(q).map(|(a, b)| a * b).sum();
                w.iter_mut().zip(q).for_each(|(a, b)| *a -= d * b);
            }
        }
        let nw = norm(&w);
        if nw > tol * scale {
            basis.push(w.iter().map(|x| x / nw).collect());
        }
    }
    basis.len()
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn diff4_scalar(u: &[f64]) -> Vec<f64> {
    let v: Vec<Vec3> = u.iter().map(|&x| Vec3::new(x, 0.0, 0.0)).collect();
    diff4(&v).iter().map(|w| w.x).collect()
}

pub fn samples(n: usize, f: impl Fn(f64) -> f64) -> Vec<f64> {
    (0..n).map(|k| f(2.0 * PI * k as f64 / n as f64)).collect()
}
