//! Gaussian pulse pair, mixing angles, rotating-frame Hamiltonian and the
//! instantaneous dressed eigensystem of the driven lambda system.
//!
//! Conventions: the pulse width `T` is the time unit (1 by default), all
//! rates and frequencies are in units of `1/T`, delays in units of `T`.
//! Dressed-basis matrices are ordered `|+>, |0>, |->`.

use crate::error::{Error, Result};
use crate::mat::{outer, CMat3, CVec3};
use crate::scalar::{approx_f64, real, Scalar};
use crate::state::{DensityMatrix, StateBasis};

/// Pulse ordering of the pump/Stokes pair.
///
/// `Counterintuitive` (Stokes before pump) transfers population through the
/// dark state; `Intuitive` (pump before Stokes) transfers through the lower
/// bright state and needs a nonzero single-photon detuning.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sequence {
    Counterintuitive,
    Intuitive,
}

impl std::fmt::Display for Sequence {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Sequence::Counterintuitive => write!(f, "counterintuitive"),
            Sequence::Intuitive => write!(f, "intuitive"),
        }
    }
}

/// Parameters of the Gaussian pulse pair.
///
/// The two couplings entering the Hamiltonian are
/// `omega0 * exp(-(t -/+ tau/2)^2 / width^2)`; which one drives the pump
/// transition is set by `sequence`. `omega0` is the peak value of the
/// Hamiltonian matrix element, the convention under which the standard
/// parameter set (`omega0 = 25/T`, `tau = 1.5 T`, `T delta = 1`) yields
/// near-unity closed-system transfer for both pulse orders.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseSchedule<T> {
    /// Peak Rabi parameter, units 1/T.
    pub omega0: T,
    /// Delay between the two pulse centers, units T.
    pub tau: T,
    /// Pulse width T, the time unit. Fixed to 1 everywhere in practice.
    pub width: T,
    /// Single-photon detuning, units 1/T.
    pub delta: T,
    pub sequence: Sequence,
}

impl<T: Scalar> PulseSchedule<T> {
    pub fn new(omega0: T, tau: T, width: T, delta: T, sequence: Sequence) -> Result<Self> {
        for (name, v) in [("omega0", omega0), ("tau", tau), ("width", width), ("delta", delta)] {
            if !v.is_finite() {
                return Err(Error::InvalidParameter(format!("{name} must be finite")));
            }
        }
        if omega0 < T::zero() {
            return Err(Error::InvalidParameter("omega0 must be >= 0".into()));
        }
        if width <= T::zero() {
            return Err(Error::InvalidParameter("pulse width must be > 0".into()));
        }
        if delta < T::zero() {
            return Err(Error::InvalidParameter("delta must be >= 0".into()));
        }
        if sequence == Sequence::Intuitive && delta <= T::zero() {
            return Err(Error::InvalidParameter(
                "the intuitive sequence requires delta > 0".into(),
            ));
        }
        Ok(Self { omega0, tau, width, delta, sequence })
    }

    /// Pump and Stokes couplings `(omega_p, omega_s)` at time `t`.
    pub fn amplitudes(&self, t: T) -> (T, T) {
        let half = real::<T>(0.5);
        let x1 = (t - self.tau * half) / self.width;
        let x2 = (t + self.tau * half) / self.width;
        let late = self.omega0 * (-(x1 * x1)).exp();
        let early = self.omega0 * (-(x2 * x2)).exp();
        match self.sequence {
            // pump is the late pulse: Stokes arrives first
            Sequence::Counterintuitive => (late, early),
            Sequence::Intuitive => (early, late),
        }
    }

    /// Exponent `x` such that `tan(theta) = exp(x)` exactly for this pulse
    /// pair. Evaluating theta through this form avoids the 0/0 that the
    /// amplitude ratio produces once both Gaussians underflow.
    pub fn tan_theta_exponent(&self, t: T) -> T {
        let two = real::<T>(2.0);
        let x = two * t * self.tau / (self.width * self.width);
        match self.sequence {
            Sequence::Counterintuitive => x,
            Sequence::Intuitive => -x,
        }
    }

    /// Mixing angle theta at time `t`, computed from the analytic log-ratio.
    pub fn theta(&self, t: T) -> T {
        self.tan_theta_exponent(t).exp().atan()
    }
}

/// Pump and Stokes amplitudes at time `t` under the given schedule.
pub fn pulse_amplitudes<T: Scalar>(t: T, sched: &PulseSchedule<T>) -> (T, T) {
    sched.amplitudes(t)
}

/// The two mixing angles and the total Rabi parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixingAngles<T> {
    /// `theta = atan2(omega_p, omega_s)`, in `[0, pi/2]`.
    pub theta: T,
    /// `phi = atan2(2 Omega, delta) / 2`, in `(0, pi/4]` for positive delta.
    pub phi: T,
    /// `Omega = sqrt(omega_p^2 + omega_s^2)`.
    pub rabi: T,
}

/// Mixing angles from instantaneous couplings.
///
/// Fails when both amplitudes vanish (theta is undefined); schedule-driven
/// callers should use [`PulseSchedule::theta`], which stays well defined at
/// the pulse tails.
pub fn mixing_angles<T: Scalar>(omega_p: T, omega_s: T, delta: T) -> Result<MixingAngles<T>> {
    if omega_p < T::zero() || omega_s < T::zero() {
        return Err(Error::InvalidParameter("pulse amplitudes must be >= 0".into()));
    }
    if !(omega_p.is_finite() && omega_s.is_finite() && delta.is_finite()) {
        return Err(Error::InvalidParameter("non-finite coupling".into()));
    }
    if omega_p == T::zero() && omega_s == T::zero() {
        return Err(Error::AnglesUndefined);
    }
    let theta = omega_p.atan2(omega_s);
    let rabi = omega_p.hypot(omega_s);
    let phi = phi_angle(rabi, delta);
    Ok(MixingAngles { theta, phi, rabi })
}

fn phi_angle<T: Scalar>(rabi: T, delta: T) -> T {
    let two = real::<T>(2.0);
    (two * rabi).atan2(delta) / two
}

/// Rotating-frame Hamiltonian for explicit couplings, in units of 1/T:
/// zero diagonal except `delta` on the excited level, pump coupling on
/// (1,2) and Stokes coupling on (2,3), vanishing (1,3) element.
pub fn hamiltonian_from_couplings<T: Scalar>(omega_p: T, omega_s: T, delta: T) -> CMat3<T> {
    let z = T::zero();
    CMat3::from_real([[z, omega_p, z], [omega_p, delta, omega_s], [z, omega_s, z]])
}

/// Rotating-frame Hamiltonian at time `t` under the given schedule.
pub fn hamiltonian<T: Scalar>(t: T, sched: &PulseSchedule<T>) -> CMat3<T> {
    let (omega_p, omega_s) = sched.amplitudes(t);
    hamiltonian_from_couplings(omega_p, omega_s, sched.delta)
}

/// Instantaneous eigensystem of the drive Hamiltonian.
///
/// Eigenvalues satisfy `omega_plus >= 0 = omega_zero >= omega_minus` for
/// nonnegative detuning; eigenvectors are real and orthonormal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DressedFrame<T> {
    pub theta: T,
    pub phi: T,
    pub rabi: T,
    pub omega_plus: T,
    pub omega_minus: T,
    pub plus: CVec3<T>,
    pub zero: CVec3<T>,
    pub minus: CVec3<T>,
}

impl<T: Scalar> DressedFrame<T> {
    /// Build the frame from `(theta, Omega, delta)`; `phi` is derived so the
    /// three parameters are always mutually consistent.
    ///
    /// Eigenvalues use the cancellation-free forms
    /// `omega_plus = (delta + R)/2` and `omega_minus = -2 Omega^2/(delta + R)`
    /// with `R = hypot(delta, 2 Omega)`, algebraically equal to
    /// `Omega cot(phi)` and `-Omega tan(phi)`.
    pub fn from_parameters(theta: T, rabi: T, delta: T) -> Self {
        let two = real::<T>(2.0);
        let phi = phi_angle(rabi, delta);
        let r = delta.hypot(two * rabi);
        let (omega_plus, omega_minus) = if r > T::zero() {
            (
                (delta + r) / two,
                -(two * rabi * rabi) / (delta + r),
            )
        } else {
            (T::zero(), T::zero())
        };
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        let plus = CVec3::from_real(sp * st, cp, sp * ct);
        let zero = CVec3::from_real(ct, T::zero(), -st);
        let minus = CVec3::from_real(cp * st, -sp, cp * ct);
        Self { theta, phi, rabi, omega_plus, omega_minus, plus, zero, minus }
    }

    /// Eigenvalues ordered as the dressed basis `[+, 0, -]`.
    pub fn eigenvalues(&self) -> [T; 3] {
        [self.omega_plus, T::zero(), self.omega_minus]
    }

    pub fn eigenvectors(&self) -> [CVec3<T>; 3] {
        [self.plus, self.zero, self.minus]
    }

    /// Orthogonal change-of-basis matrix whose columns are the dressed kets
    /// in bare coordinates.
    pub fn basis_matrix(&self) -> CMat3<T> {
        let mut v = CMat3::zeros();
        for (j, ket) in self.eigenvectors().iter().enumerate() {
            for i in 0..3 {
                v.m[i][j] = ket.a[i];
            }
        }
        v
    }

    /// Reconstruct the Hamiltonian as `sum_v omega_v |v><v|`.
    pub fn reconstruct_hamiltonian(&self) -> CMat3<T> {
        let p = outer(&self.plus, &self.plus).scale_re(self.omega_plus);
        let m = outer(&self.minus, &self.minus).scale_re(self.omega_minus);
        p + m
    }
}

/// Absolute residual tolerance for the closed-form eigenvector check, at
/// unit Hamiltonian scale.
pub const EIGEN_RESIDUAL_TOL: f64 = 1e-10;

/// Dressed frame at time `t` under the schedule.
///
/// Theta comes from the analytic log-ratio, phi and the eigenvalues from the
/// instantaneous amplitudes, and the closed-form eigenvectors are verified
/// against the Hamiltonian before the frame is returned.
pub fn dressed_frame<T: Scalar>(t: T, sched: &PulseSchedule<T>) -> Result<DressedFrame<T>> {
    let (omega_p, omega_s) = sched.amplitudes(t);
    let theta = sched.theta(t);
    let rabi = omega_p.hypot(omega_s);
    let frame = DressedFrame::from_parameters(theta, rabi, sched.delta);
    let h = hamiltonian_from_couplings(omega_p, omega_s, sched.delta);
    // 1e-10 at f64; widens with the scalar's precision so f32 instantiations
    // are not rejected by their own rounding
    let base = real::<T>(EIGEN_RESIDUAL_TOL).max(T::epsilon() * real::<T>(500.0));
    let tol = base * T::one().max(h.max_abs());
    let residual = eigen_residual(&h, &frame);
    if residual > tol {
        return Err(Error::EigenResidual { t: approx_f64(t), residual: approx_f64(residual) });
    }
    Ok(frame)
}

/// Largest component of `H|v> - omega_v |v>` over the three eigenpairs.
fn eigen_residual<T: Scalar>(h: &CMat3<T>, frame: &DressedFrame<T>) -> T {
    let mut worst = T::zero();
    for (ket, ev) in frame.eigenvectors().iter().zip(frame.eigenvalues()) {
        let hv = h.mul_vec(ket);
        for i in 0..3 {
            let d = hv.a[i] - ket.a[i].scale(ev);
            worst = worst.max(d.re.abs()).max(d.im.abs());
        }
    }
    worst
}

/// Populations `[P_+, P_0, P_-]` of a bare-basis matrix projected onto the
/// instantaneous dressed states.
pub fn dressed_populations<T: Scalar>(rho: &CMat3<T>, frame: &DressedFrame<T>) -> [T; 3] {
    let mut out = [T::zero(); 3];
    for (slot, ket) in frame.eigenvectors().iter().enumerate() {
        out[slot] = ket.dot(&rho.mul_vec(ket)).re;
    }
    out
}

impl<T: Scalar> DensityMatrix<T> {
    /// Rotate a bare-rotating state into the dressed basis of `frame`.
    pub fn to_dressed(&self, frame: &DressedFrame<T>) -> Result<Self> {
        if self.basis() != StateBasis::BareRotating {
            return Err(Error::InvalidParameter("state is already dressed".into()));
        }
        let v = frame.basis_matrix();
        Self::from_matrix(v.adjoint() * *self.matrix() * v, StateBasis::Dressed)
    }

    /// Rotate a dressed-basis state back to the bare rotating frame.
    pub fn to_bare(&self, frame: &DressedFrame<T>) -> Result<Self> {
        if self.basis() != StateBasis::Dressed {
            return Err(Error::InvalidParameter("state is not dressed".into()));
        }
        let v = frame.basis_matrix();
        Self::from_matrix(v * *self.matrix() * v.adjoint(), StateBasis::BareRotating)
    }
}
