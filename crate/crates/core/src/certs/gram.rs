//! Existence of a truncated hyperbolic tetrahedron from its Gram matrix.
//!
//! This is the only place floating point is used.

use std::f64::consts::PI;

use serde::Serialize;

use super::tetra::TruncatedTetrahedron;
use crate::error::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-9;

/// Eigenvalues of a small symmetric matrix by cyclic Jacobi rotations, ascending.
#[allow(clippy::needless_range_loop)]
pub fn symmetric_eigenvalues<const N: usize>(m: [[f64; N]; N]) -> [f64; N] {
    let mut a = m;
    for _sweep in 0..100 {
        let off: f64 = (0..N)
            .flat_map(|i| (0..N).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..N {
            for q in p + 1..N {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..N {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..N {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut eig: [f64; N] = std::array::from_fn(|i| a[i][i]);
    eig.sort_by(f64::total_cmp);
    eig
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GramReport {
    pub eigenvalues: [f64; 4],
    /// (positive, negative) eigenvalue counts of the full matrix.
    pub signature: (usize, usize),
    pub truncated_block: [f64; 3],
    /// Eigenvalues of the face blocks at the three ordinary vertices.
    pub vertex_blocks: Vec<(usize, [f64; 3])>,
    pub accepted: bool,
}

/// The 4x4 Gram matrix of the face planes; face `i` is opposite vertex `i`.
pub fn gram_matrix(t: &TruncatedTetrahedron) -> [[f64; 4]; 4] {
    let mut g = [[0.0; 4]; 4];
    for (i, row) in g.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            *entry = if i == j {
                1.0
            } else {
                // faces i and j meet along the edge joining the other two vertices
                let (a, b) = other_two(i, j);
                -(PI / t.order(a, b) as f64).cos()
            };
        }
    }
    g
}

fn other_two(i: usize, j: usize) -> (usize, usize) {
    let mut rest = (0..4).filter(|&k| k != i && k != j);
    (
        rest.next().expect("four vertices"),
        rest.next().expect("four vertices"),
    )
}

/// The faces through vertex `v` are the three faces other than face `v`.
fn vertex_block(g: &[[f64; 4]; 4], v: usize) -> [[f64; 3]; 3] {
    let faces: Vec<usize> = (0..4).filter(|&f| f != v).collect();
    std::array::from_fn(|a| std::array::from_fn(|b| g[faces[a]][faces[b]]))
}

/// Accepts when the Gram matrix has signature (3,1), the block at the
/// truncated vertex is indefinite (the vertex lies beyond the sphere at
/// infinity) and the block at every other vertex is positive definite.
pub fn gram_check(t: &TruncatedTetrahedron, tol: f64) -> Result<GramReport> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Tetrahedron(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let g = gram_matrix(t);
    let sign = |values: &[f64], which: String| -> Result<(usize, usize)> {
        if let Some(&v) = values.iter().find(|v| v.abs() < tol) {
            return Err(Error::GramDegenerate {
                which,
                value: v,
                tol,
            });
        }
        Ok((
            values.iter().filter(|&&v| v > 0.0).count(),
            values.iter().filter(|&&v| v < 0.0).count(),
        ))
    };
    let eigenvalues = symmetric_eigenvalues(g);
    let signature = sign(&eigenvalues, "the Gram matrix".into())?;
    let truncated_block = symmetric_eigenvalues(vertex_block(&g, t.truncated));
    let (_, neg) = sign(
        &truncated_block,
        format!("the block at vertex {}", t.truncated),
    )?;
    let mut accepted = signature == (3, 1) && neg > 0;
    let mut vertex_blocks = Vec::new();
    for v in (0..4).filter(|&v| v != t.truncated) {
        let eig = symmetric_eigenvalues(vertex_block(&g, v));
        let (_, neg) = sign(&eig, format!("the block at vertex {v}"))?;
        accepted &= neg == 0;
        vertex_blocks.push((v, eig));
    }
    Ok(GramReport {
        eigenvalues,
        signature,
        truncated_block,
        vertex_blocks,
        accepted,
    })
}
