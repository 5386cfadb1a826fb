use super::complex::{Complex, ZERO};
use crate::tol;
use crate::{Error, Result};

/// A pure state: unit-norm complex amplitude vector.
///
/// Normalized on construction; the only way to hold an unnormalized vector is
/// the crate-internal `Ket::raw`.
#[derive(Debug, Clone, PartialEq)]
pub struct Ket {
    amplitudes: Vec<Complex>,
}

impl Ket {
    /// Normalizes the amplitudes. Rejects the zero vector.
    pub fn new(amplitudes: Vec<Complex>) -> Result<Self> {
        let norm_sqr: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if norm_sqr <= 0.0 {
            return Err(Error::InvalidValue("cannot normalize the zero vector".into()));
        }
        let inv = 1.0 / norm_sqr.sqrt();
        let ket = Self { amplitudes: amplitudes.into_iter().map(|a| a.scale(inv)).collect() };
        debug_assert!((ket.norm_sqr() - 1.0).abs() <= tol::KET_NORM);
        Ok(ket)
    }

    /// Computational basis state |index> of the given dimension.
    pub fn basis(dim: usize, index: usize) -> Self {
        assert!(index < dim);
        let mut amplitudes = vec![ZERO; dim];
        amplitudes[index] = Complex::real(1.0);
        Self { amplitudes }
    }

    /// Unnormalized constructor for intermediate results inside the crate.
    pub(crate) fn raw(amplitudes: Vec<Complex>) -> Self {
        Self { amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitude(&self, i: usize) -> Complex {
        self.amplitudes[i]
    }

    pub fn amplitudes(&self) -> &[Complex] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// <self|other>.
    pub fn inner(&self, other: &Ket) -> Complex {
        assert_eq!(self.dim(), other.dim(), "inner product dimension");
        self.amplitudes.iter().zip(&other.amplitudes).fold(ZERO, |acc, (a, b)| acc + a.conj() * *b)
    }

    /// |<self|other>|², the overlap probability.
    pub fn fidelity(&self, other: &Ket) -> f64 {
        self.inner(other).norm_sqr()
    }

    pub fn tensor(&self, other: &Ket) -> Ket {
        let mut amplitudes = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amplitudes {
            for b in &other.amplitudes {
                amplitudes.push(*a * *b);
            }
        }
        Ket { amplitudes }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes_on_construction() {
        let k = Ket::new(vec![Complex::real(3.0), Complex::real(4.0)]).unwrap();
        assert!((k.norm_sqr() - 1.0).abs() < 1e-15);
        assert!((k.amplitude(0).re - 0.6).abs() < 1e-15);
    }

    #[test]
    fn zero_vector_rejected() {
        assert!(Ket::new(vec![ZERO, ZERO]).is_err());
    }

    #[test]
    fn tensor_of_basis_states() {
        let k = Ket::basis(2, 1).tensor(&Ket::basis(2, 0));
        // |1> ⊗ |0> = |10> at index 2
        assert_eq!(k.amplitude(2), Complex::real(1.0));
        assert_eq!(k.dim(), 4);
    }
}
