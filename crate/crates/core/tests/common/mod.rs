//! Brute-force oracle for the reduced phase system
//! `Σ e^{iφ_j} = Σ e^{iψ_j} = Σ e^{i(φ_j+ψ_j)} = −L`.
//!
//! The first two equations fix `φ₂, φ₃` given `φ₁` (two unit vectors with a
//! prescribed sum) up to swapping them, and likewise for `ψ`. The third
//! equation is then scanned on a grid over `(φ₁, ψ₁)` and every promising
//! cell is refined by Newton's method.

#![allow(dead_code)]

use std::f64::consts::PI;

use num_complex::Complex64;

pub const GRID: usize = 60;

#[derive(Debug, Clone, Copy)]
pub struct Root {
    pub phi: [f64; 3],
    pub psi: [f64; 3],
    pub residual: f64,
}

/// Completes `e^{iθ₁} + e^{iθ₂} + e^{iθ₃} = −L`; `None` if impossible.
fn complete(l: f64, t1: f64, sign: f64) -> Option<[f64; 3]> {
    let w = Complex64::new(-l, 0.0) - Complex64::from_polar(1.0, t1);
    let a = w / 2.0;
    let r = a.norm();
    if !(1e-14..=1.0).contains(&r) {
        return None;
    }
    let h = (1.0 - r * r).sqrt();
    let perp = Complex64::i() * a / r * h;
    Some([t1, (a + perp * sign).arg(), (a - perp * sign).arg()])
}

fn third(l: f64, x: [f64; 2], s: [f64; 2]) -> Option<(Complex64, [f64; 3], [f64; 3])> {
    let phi = complete(l, x[0], s[0])?;
    let psi = complete(l, x[1], s[1])?;
    let z: Complex64 = (0..3).map(|j| Complex64::from_polar(1.0, phi[j] + psi[j])).sum();
    Some((z + l, phi, psi))
}

fn newton(l: f64, mut x: [f64; 2], s: [f64; 2]) -> Option<Root> {
    let h = 1e-7;
    for _ in 0..60 {
        let (f, _, _) = third(l, x, s)?;
        if f.norm() < 1e-14 {
            break;
        }
        let (fx, _, _) = third(l, [x[0] + h, x[1]], s)?;
        let (fy, _, _) = third(l, [x[0], x[1] + h], s)?;
        let (a, c) = ((fx.re - f.re) / h, (fx.im - f.im) / h);
        let (b, d) = ((fy.re - f.re) / h, (fy.im - f.im) / h);
        let det = a * d - b * c;
        if det.abs() < 1e-14 {
            return None;
        }
        x[0] -= (d * f.re - b * f.im) / det;
        x[1] -= (-c * f.re + a * f.im) / det;
    }
    let (f, phi, psi) = third(l, x, s)?;
    Some(Root {
        phi,
        psi,
        residual: f.norm(),
    })
}

/// Smallest residual of the third equation over the grid.
pub fn grid_min_residual(l: f64) -> f64 {
    let mut best = f64::INFINITY;
    for s in signs() {
        for i in 0..GRID {
            for k in 0..GRID {
                let x = [2.0 * PI * i as f64 / GRID as f64, 2.0 * PI * k as f64 / GRID as f64];
                if let Some((f, _, _)) = third(l, x, s) {
                    best = best.min(f.norm());
                }
            }
        }
    }
    best
}

fn signs() -> [[f64; 2]; 4] {
    [[1.0, 1.0], [1.0, -1.0], [-1.0, 1.0], [-1.0, -1.0]]
}

/// Every root reached by Newton from grid cells whose residual is below
/// `seed_cut`, with residual below `accept`.
pub fn grid_roots(l: f64, seed_cut: f64, accept: f64) -> Vec<Root> {
    let mut out = Vec::new();
    for s in signs() {
        for i in 0..GRID {
            for k in 0..GRID {
                let x = [2.0 * PI * i as f64 / GRID as f64, 2.0 * PI * k as f64 / GRID as f64];
                let Some((f, _, _)) = third(l, x, s) else { continue };
                if f.norm() > seed_cut {
                    continue;
                }
                if let Some(r) = newton(l, x, s) {
                    if r.residual < accept {
                        out.push(r);
                    }
                }
            }
        }
    }
    out
}

fn angle_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(2.0 * PI);
    d.min(2.0 * PI - d)
}

/// Whether the pairs `(φ_j, ψ_j)` of two solutions agree up to relabelling
/// `j` and overall complex conjugation.
pub fn equivalent(a: ([f64; 3], [f64; 3]), b: ([f64; 3], [f64; 3]), tol: f64) -> bool {
    const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    [1.0, -1.0].iter().any(|&sign| {
        PERMS.iter().any(|p| {
            (0..3).all(|j| angle_gap(a.0[j], sign * b.0[p[j]]) < tol && angle_gap(a.1[j], sign * b.1[p[j]]) < tol)
        })
    })
}
