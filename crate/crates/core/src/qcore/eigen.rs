//! Hermitian eigendecomposition via cyclic Jacobi on the real embedding.
//!
//! A Hermitian H = A + iB maps to the real symmetric 2n x 2n matrix
//! M = [[A, -B], [B, A]]. Each complex eigenpair (λ, u + iv) of H appears in
//! M twice, as (u; v) and (-v; u). Jacobi sweeps are run on M until the
//! off-diagonal Frobenius norm drops below [`tol::EIGEN_SWEEP`], then one
//! complex eigenvector per doubled eigenvalue is recovered by Gram-Schmidt
//! within each eigenvalue cluster. Dimensions never exceed eight, so the
//! quadratic-per-sweep cost is irrelevant next to the robustness.

// Index loops over symmetric matrix halves read better than iterator chains.
#![allow(clippy::needless_range_loop)]

use super::complex::Complex;
use super::ket::Ket;
use super::matrix::ComplexMatrix;
use crate::tol;
use crate::{Error, Result};

/// Eigenvalues in ascending order with matching orthonormal eigenvectors.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: Vec<Ket>,
}

impl HermitianEigen {
    pub fn max_value(&self) -> f64 {
        *self.values.last().expect("nonempty spectrum")
    }

    pub fn max_vector(&self) -> &Ket {
        self.vectors.last().expect("nonempty spectrum")
    }
}

/// Eigendecomposition of a Hermitian matrix of dimension <= 8.
pub fn hermitian_eigen(h: &ComplexMatrix) -> Result<HermitianEigen> {
    if !h.is_square() {
        return Err(Error::ShapeMismatch(format!("{}x{} is not square", h.rows(), h.cols())));
    }
    let defect = h.hermiticity_defect();
    if defect > tol::STRUCTURAL {
        return Err(Error::NotHermitian(defect));
    }
    let n = h.rows();
    if n > 8 {
        return Err(Error::SizeBudget(n));
    }

    // Real-symmetric embedding, symmetrized against the tolerated defect.
    let m = 2 * n;
    let mut a = vec![vec![0.0f64; m]; m];
    for i in 0..n {
        for j in 0..n {
            let e = h.get(i, j);
            let et = h.get(j, i).conj();
            let re = 0.5 * (e.re + et.re);
            let im = 0.5 * (e.im + et.im);
            a[i][j] = re;
            a[n + i][n + j] = re;
            a[i][n + j] = -im;
            a[n + i][j] = im;
        }
    }

    let mut q = vec![vec![0.0f64; m]; m];
    for (i, row) in q.iter_mut().enumerate() {
        row[i] = 1.0;
    }

    jacobi_sweeps(&mut a, &mut q)?;

    // Candidate real eigenpairs, sorted by eigenvalue.
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&i, &j| a[i][i].partial_cmp(&a[j][j]).expect("finite eigenvalues"));

    // Cluster doubled eigenvalues, then extract one complex vector per pair.
    let mut vectors: Vec<Ket> = Vec::with_capacity(n);
    let mut start = 0;
    while start < m {
        let mut end = start + 1;
        while end < m && a[order[end]][order[end]] - a[order[end - 1]][order[end - 1]] <= 1e-9 {
            end += 1;
        }
        // Embedding doubles every eigenvalue; an odd cluster means the gap
        // threshold split a pair, so absorb the next candidate.
        if (end - start) % 2 == 1 && end < m {
            end += 1;
        }
        let wanted = (end - start) / 2;
        extract_cluster(&q, &order[start..end], n, wanted, &mut vectors);
        start = end;
    }

    if vectors.len() != n {
        return Err(Error::EigenConvergence);
    }

    // Rayleigh quotients give tighter eigenvalues than the cluster diagonal.
    let mut pairs: Vec<(f64, Ket)> = vectors
        .into_iter()
        .map(|v| {
            let hv = h.matvec(v.amplitudes());
            let lambda = v
                .amplitudes()
                .iter()
                .zip(&hv)
                .fold(Complex::real(0.0), |acc, (x, y)| acc + x.conj() * *y);
            (lambda.re, v)
        })
        .collect();
    pairs.sort_by(|x, y| x.0.partial_cmp(&y.0).expect("finite eigenvalues"));

    let (values, vectors) = pairs.into_iter().unzip();
    Ok(HermitianEigen { values, vectors })
}

fn jacobi_sweeps(a: &mut [Vec<f64>], q: &mut [Vec<f64>]) -> Result<()> {
    let m = a.len();
    const MAX_SWEEPS: usize = 100;
    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for i in 0..m {
            for j in (i + 1)..m {
                off += 2.0 * a[i][j] * a[i][j];
            }
        }
        if off.sqrt() < tol::EIGEN_SWEEP {
            return Ok(());
        }
        for p in 0..m - 1 {
            for r in p + 1..m {
                rotate(a, q, p, r);
            }
        }
    }
    Err(Error::EigenConvergence)
}

/// One Jacobi rotation annihilating a[p][r].
fn rotate(a: &mut [Vec<f64>], q: &mut [Vec<f64>], p: usize, r: usize) {
    let apr = a[p][r];
    if apr.abs() < 1e-300 {
        return;
    }
    let theta = 0.5 * (a[r][r] - a[p][p]) / apr;
    let t = if theta.abs() > 1e150 {
        // Avoid overflow in theta^2; the rotation is tiny anyway.
        0.5 / theta
    } else {
        let sign = if theta >= 0.0 { 1.0 } else { -1.0 };
        sign / (theta.abs() + (1.0 + theta * theta).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let tau = s / (1.0 + c);

    let m = a.len();
    let app = a[p][p];
    let arr = a[r][r];
    a[p][p] = app - t * apr;
    a[r][r] = arr + t * apr;
    a[p][r] = 0.0;
    a[r][p] = 0.0;
    for k in 0..m {
        if k != p && k != r {
            let akp = a[k][p];
            let akr = a[k][r];
            a[k][p] = akp - s * (akr + tau * akp);
            a[p][k] = a[k][p];
            a[k][r] = akr + s * (akp - tau * akr);
            a[r][k] = a[k][r];
        }
    }
    for row in q.iter_mut() {
        let qkp = row[p];
        let qkr = row[r];
        row[p] = qkp - s * (qkr + tau * qkp);
        row[r] = qkr + s * (qkp - tau * qkr);
    }
}

/// Greedy Gram-Schmidt over the complex reinterpretation of the cluster's
/// real eigenvectors. The 2w real vectors span a w-dimensional complex
/// space, so picking the largest residual w times always succeeds.
fn extract_cluster(q: &[Vec<f64>], cluster: &[usize], n: usize, wanted: usize, out: &mut Vec<Ket>) {
    let candidates: Vec<Vec<Complex>> = cluster
        .iter()
        .map(|&col| (0..n).map(|i| Complex::new(q[i][col], q[n + i][col])).collect())
        .collect();

    let mut kept: Vec<Vec<Complex>> = Vec::with_capacity(wanted);
    for _ in 0..wanted {
        let mut best: Option<(f64, Vec<Complex>)> = None;
        for cand in &candidates {
            let mut v = cand.clone();
            for k in &kept {
                let overlap = k
                    .iter()
                    .zip(v.iter())
                    .fold(Complex::real(0.0), |acc, (a, b)| acc + a.conj() * *b);
                for (vi, ki) in v.iter_mut().zip(k.iter()) {
                    *vi = *vi - overlap * *ki;
                }
            }
            let norm_sqr: f64 = v.iter().map(|c| c.norm_sqr()).sum();
            if best.as_ref().is_none_or(|(b, _)| norm_sqr > *b) {
                best = Some((norm_sqr, v));
            }
        }
        let (norm_sqr, v) = best.expect("cluster has candidates");
        let inv = 1.0 / norm_sqr.sqrt();
        kept.push(v.iter().map(|c| c.scale(inv)).collect());
    }
    out.extend(kept.into_iter().map(Ket::raw));
}
