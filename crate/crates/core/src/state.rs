//! Density-matrix bookkeeping for the three-level system.

use crate::error::{Error, Result};
use crate::mat::{hermitian_eigenvalues, outer, CMat3, CVec3};
use crate::scalar::{approx_f64, real, Scalar};

/// Basis a state is expressed in.
///
/// `BareRotating` is the rotating-frame basis `|1>, |2>, |3>`; `Dressed` is
/// the instantaneous eigenbasis `|+>, |0>, |->` of the drive Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateBasis {
    BareRotating,
    Dressed,
}

/// Allowed Hermiticity defect for a physical state.
pub const HERMITICITY_TOL: f64 = 1e-12;
/// Allowed deviation of the trace from one.
pub const TRACE_TOL: f64 = 1e-9;
/// Most negative eigenvalue tolerated before a state is rejected.
pub const POSITIVITY_TOL: f64 = 1e-8;

/// A 3x3 Hermitian, unit-trace, positive-semidefinite (within tolerance)
/// density matrix, tagged with the basis it lives in.
///
/// Construction validates all three physicality conditions; the wrapped
/// matrix is immutable afterwards.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix<T> {
    mat: CMat3<T>,
    basis: StateBasis,
}

impl<T: Scalar> DensityMatrix<T> {
    /// Pure state `|k><k|` for a 1-based basis index in the rotating frame.
    pub fn pure(k: usize) -> Result<Self> {
        if !(1..=3).contains(&k) {
            return Err(Error::IndexOutOfRange(k));
        }
        let ket = CVec3::basis(k - 1);
        Ok(Self { mat: outer(&ket, &ket), basis: StateBasis::BareRotating })
    }

    /// Maximally mixed state `I/3`.
    pub fn maximally_mixed() -> Self {
        let third = T::one() / real::<T>(3.0);
        Self {
            mat: CMat3::diag_real(third, third, third),
            basis: StateBasis::BareRotating,
        }
    }

    /// Wrap a raw matrix after validating Hermiticity, unit trace and
    /// positivity within the module tolerances.
    pub fn from_matrix(mat: CMat3<T>, basis: StateBasis) -> Result<Self> {
        if !mat.is_finite() {
            return Err(Error::NotPhysical("non-finite entries".into()));
        }
        let herm = mat.herm_defect();
        if herm > real::<T>(HERMITICITY_TOL) {
            return Err(Error::NotPhysical(format!(
                "Hermiticity defect {:.3e} exceeds {HERMITICITY_TOL:.0e}",
                approx_f64(herm)
            )));
        }
        let trace_err = (mat.trace().re - T::one()).abs().max(mat.trace().im.abs());
        if trace_err > real::<T>(TRACE_TOL) {
            return Err(Error::NotPhysical(format!(
                "trace error {:.3e} exceeds {TRACE_TOL:.0e}",
                approx_f64(trace_err)
            )));
        }
        let min_eig = hermitian_eigenvalues(&mat.hermitized())[0];
        if min_eig < -real::<T>(POSITIVITY_TOL) {
            return Err(Error::NotPhysical(format!(
                "minimum eigenvalue {:.3e} below -{POSITIVITY_TOL:.0e}",
                approx_f64(min_eig)
            )));
        }
        Ok(Self { mat, basis })
    }

    pub fn matrix(&self) -> &CMat3<T> {
        &self.mat
    }

    pub fn basis(&self) -> StateBasis {
        self.basis
    }

    /// Population of the 1-based basis state `k` in this state's own basis,
    /// clamped to `[0, 1]`.
    pub fn population(&self, k: usize) -> Result<T> {
        if !(1..=3).contains(&k) {
            return Err(Error::IndexOutOfRange(k));
        }
        self.check_trace_and_hermiticity()?;
        let p = self.mat.m[k - 1][k - 1].re;
        Ok(p.max(T::zero()).min(T::one()))
    }

    /// Smallest eigenvalue; rejects inputs whose Hermiticity defect exceeds
    /// the physicality tolerance.
    pub fn min_eigenvalue(&self) -> Result<T> {
        let defect = self.mat.herm_defect();
        if defect > real::<T>(HERMITICITY_TOL) {
            return Err(Error::NotHermitian(approx_f64(defect)));
        }
        Ok(hermitian_eigenvalues(&self.mat.hermitized())[0])
    }

    /// `|tr(rho) - 1|`.
    pub fn trace_error(&self) -> T {
        (self.mat.trace().re - T::one()).abs().max(self.mat.trace().im.abs())
    }

    pub fn herm_defect(&self) -> T {
        self.mat.herm_defect()
    }

    fn check_trace_and_hermiticity(&self) -> Result<()> {
        let defect = self.mat.herm_defect();
        if defect > real::<T>(HERMITICITY_TOL) {
            return Err(Error::NotPhysical(format!(
                "Hermiticity defect {:.3e}",
                approx_f64(defect)
            )));
        }
        if self.trace_error() > real::<T>(TRACE_TOL) {
            return Err(Error::NotPhysical(format!(
                "trace error {:.3e}",
                approx_f64(self.trace_error())
            )));
        }
        Ok(())
    }
}
