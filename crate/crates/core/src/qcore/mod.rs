//! Dense complex linear algebra for Hilbert spaces of dimension <= 8:
//! matrices, kets, Kronecker products, Hermitian eigendecomposition, and the
//! Bloch-angle observables with their outcome projectors.

mod complex;
mod eigen;
mod ket;
mod matrix;

pub use complex::Complex;
pub use eigen::{hermitian_eigen, HermitianEigen};
pub use ket::Ket;
pub use matrix::{pauli_x, pauli_y, pauli_z, ComplexMatrix};

use crate::tol;
use crate::{Error, Result};

/// Kronecker product; `(a ⊗ b)[(i*rb + k), (j*cb + l)] = a[i][j] * b[k][l]`.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (ra, ca) = (a.rows(), a.cols());
    let (rb, cb) = (b.rows(), b.cols());
    let mut out = ComplexMatrix::zeros(ra * rb, ca * cb);
    for i in 0..ra {
        for j in 0..ca {
            let aij = a.get(i, j);
            for k in 0..rb {
                for l in 0..cb {
                    out.set(i * rb + k, j * cb + l, aij * b.get(k, l));
                }
            }
        }
    }
    out
}

/// <psi| op |psi> for a Hermitian operator and a pure state.
///
/// The imaginary residual is asserted below [`tol::STRUCTURAL`]; it can only
/// exceed that if the Hermiticity precondition check itself is broken.
pub fn expectation(op: &ComplexMatrix, psi: &Ket) -> Result<f64> {
    if !op.is_square() || op.rows() != psi.dim() {
        return Err(Error::DimensionMismatch(format!(
            "operator {}x{} on ket of dim {}",
            op.rows(),
            op.cols(),
            psi.dim()
        )));
    }
    let defect = op.hermiticity_defect();
    if defect > tol::STRUCTURAL {
        return Err(Error::NotHermitian(defect));
    }
    let op_psi = op.matvec(psi.amplitudes());
    let val = psi
        .amplitudes()
        .iter()
        .zip(&op_psi)
        .fold(Complex::real(0.0), |acc, (a, b)| acc + a.conj() * *b);
    assert!(
        val.im.abs() <= tol::STRUCTURAL,
        "expectation of a Hermitian operator came out complex: {val}"
    );
    Ok(val.re)
}

/// Spin observable along the Bloch direction (θ, φ):
/// sinθ cosφ σ_x + sinθ sinφ σ_y + cosθ σ_z. Angles are taken mod 2π;
/// the result is Hermitian, traceless, with eigenvalues exactly ±1.
pub fn bloch_observable(theta: f64, phi: f64) -> ComplexMatrix {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    ComplexMatrix::from_rows(vec![
        vec![Complex::real(ct), Complex::new(st * cp, -st * sp)],
        vec![Complex::new(st * cp, st * sp), Complex::real(-ct)],
    ])
}

/// Projector onto the outcome of a ±1-valued observable:
/// `(I + (-1)^outcome * obs) / 2`. Outcome 0 selects the +1 eigenspace.
pub fn outcome_projector(obs: &ComplexMatrix, outcome: u8) -> Result<ComplexMatrix> {
    if !obs.is_square() {
        return Err(Error::ShapeMismatch("observable must be square".into()));
    }
    let defect = obs.hermiticity_defect();
    if defect > tol::STRUCTURAL {
        return Err(Error::NotHermitian(defect));
    }
    let sq = obs.mul(obs)?;
    let dev = sq.max_abs_diff(&ComplexMatrix::identity(obs.rows()));
    if dev > tol::STRUCTURAL {
        return Err(Error::NotInvolution(dev));
    }
    let sign = if outcome & 1 == 0 { 1.0 } else { -1.0 };
    ComplexMatrix::identity(obs.rows()).add(&obs.scale(sign)).map(|m| m.scale(0.5))
}
