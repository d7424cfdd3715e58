//! Dissipators for the driven lambda system.
//!
//! Two generators are provided. The microscopic one damps transitions
//! between the instantaneous dressed states `|+>, |0>, |->` through seven
//! channels whose rates depend on the mixing angles; it follows from a
//! system-bath model in which both lower levels couple to the excited level
//! through a bosonic bath with a flat spectral density, so every rate is a
//! constant times an angular factor. The phenomenological one is plain
//! spontaneous emission from the bare excited level toward the two lower
//! levels.
//!
//! A spectral-decomposition pipeline that rebuilds the microscopic generator
//! from first principles (eigenprojector sums over Bohr frequencies) is also
//! included; it is the independent cross-check for the closed-form jump
//! operators and is used by the verification suite, never by the production
//! integration path.

use crate::drive::{self, DressedFrame, PulseSchedule};
use crate::error::{Error, Result};
use crate::mat::{anticommutator, commutator, outer, CMat3, C};
use crate::scalar::{approx_f64, real, Scalar};

/// Flat-spectrum bath parameters.
///
/// `gamma` is the spectral density of the channel coupling levels 1 and 2;
/// the channel coupling levels 3 and 2 carries `alpha * gamma`. `n_photons`
/// is the mean occupation of the bath modes near the (optical) transition
/// frequencies, a single number standing in for the whole occupation
/// profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathModel<T> {
    pub gamma: T,
    pub alpha: T,
    pub n_photons: T,
}

impl<T: Scalar> BathModel<T> {
    pub fn new(gamma: T, alpha: T, n_photons: T) -> Result<Self> {
        for (name, v) in [("gamma", gamma), ("alpha", alpha), ("n_photons", n_photons)] {
            if !v.is_finite() || v < T::zero() {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be finite and >= 0"
                )));
            }
        }
        Ok(Self { gamma, alpha, n_photons })
    }

    /// Zero-temperature bath with equal dipole strengths.
    pub fn zero_temperature(gamma: T) -> Result<Self> {
        Self::new(gamma, T::one(), T::zero())
    }
}

/// The four flat-spectrum decay rates.
///
/// Emission rates scale with `1 + N`, absorption rates with `N`; the `a`
/// channel couples levels 1 and 2, the `b` channel levels 3 and 2. With a
/// flat spectrum the rates carry no frequency argument at all.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateTable<T> {
    /// `gamma (1 + N)`
    pub emission_a: T,
    /// `alpha gamma (1 + N)`
    pub emission_b: T,
    /// `gamma N`
    pub absorption_a: T,
    /// `alpha gamma N`
    pub absorption_b: T,
}

/// Decay-rate table for the bath; upward (absorption) rates are `N/(1+N)`
/// times their downward (emission) partners by construction.
pub fn rates<T: Scalar>(bath: &BathModel<T>) -> RateTable<T> {
    let occ = bath.n_photons;
    RateTable {
        emission_a: bath.gamma * (T::one() + occ),
        emission_b: bath.alpha * bath.gamma * (T::one() + occ),
        absorption_a: bath.gamma * occ,
        absorption_b: bath.alpha * bath.gamma * occ,
    }
}

/// The seven dissipation channels in the dressed basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DressedChannel {
    /// `|+> -> |0>`, emission
    PlusToZero,
    /// `|0> -> |->`, absorption (vanishes at zero temperature)
    ZeroToMinus,
    /// `|+> -> |->`, mixed emission/absorption
    PlusToMinus,
    /// collective dephasing between `|+>` and `|->`
    Dephasing,
    /// `|0> -> |+>`, absorption (vanishes at zero temperature)
    ZeroToPlus,
    /// `|-> -> |0>`, emission
    MinusToZero,
    /// `|-> -> |+>`, mixed emission/absorption
    MinusToPlus,
}

/// One Lindblad term: a dressed-basis jump operator and its rate.
///
/// Every ladder channel has a single nonzero entry in the dressed basis
/// (ordered `|+>, |0>, |->`); the dephasing operator is diagonal traceless.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LindbladTerm<T> {
    pub channel: DressedChannel,
    pub jump: CMat3<T>,
    pub rate: T,
}

impl<T: Scalar> LindbladTerm<T> {
    /// Rotate the dressed-basis jump operator into the bare rotating frame.
    pub fn to_bare(&self, frame: &DressedFrame<T>) -> CMat3<T> {
        let v = frame.basis_matrix();
        v * self.jump * v.adjoint()
    }
}

// dressed indices
const PLUS: usize = 0;
const ZERO: usize = 1;
const MINUS: usize = 2;

/// The seven dressed-basis Lindblad terms at mixing angles `(theta, phi)`.
///
/// Angles must satisfy `0 <= theta <= pi/2` and `0 <= phi < pi/2`; `phi = 0`
/// is the undriven limit where `|+>` coincides with the bare excited level.
/// At zero temperature the two channels that pump population out of `|0>`
/// carry rate exactly zero; the other five survive.
pub fn jump_operators<T: Scalar>(
    theta: T,
    phi: T,
    bath: &BathModel<T>,
) -> Result<[LindbladTerm<T>; 7]> {
    let half_pi = T::FRAC_PI_2();
    if !(theta >= T::zero() && theta <= half_pi) {
        return Err(Error::InvalidParameter(format!(
            "theta = {} outside [0, pi/2]",
            approx_f64(theta)
        )));
    }
    if !(phi >= T::zero() && phi < half_pi) {
        return Err(Error::InvalidParameter(format!(
            "phi = {} outside [0, pi/2)",
            approx_f64(phi)
        )));
    }
    let r = rates(bath);
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    let (st2, ct2) = (st * st, ct * ct);
    let (sp2, cp2) = (sp * sp, cp * cp);
    let (sp4, cp4) = (sp2 * sp2, cp2 * cp2);

    let rate_plus_zero = (r.emission_a * ct2 + r.emission_b * st2) * cp2;
    let rate_zero_minus = (r.absorption_a * ct2 + r.absorption_b * st2) * sp2;
    let rate_plus_minus = (r.emission_a * st2 + r.emission_b * ct2) * cp4
        + (r.absorption_a * st2 + r.absorption_b * ct2) * sp4;
    let rate_dephasing = ((r.emission_a + r.absorption_a) * st2
        + (r.emission_b + r.absorption_b) * ct2)
        * sp2
        * cp2;
    let rate_zero_plus = (r.absorption_a * ct2 + r.absorption_b * st2) * cp2;
    let rate_minus_zero = (r.emission_a * ct2 + r.emission_b * st2) * sp2;
    let rate_minus_plus = (r.absorption_a * st2 + r.absorption_b * ct2) * cp4
        + (r.emission_a * st2 + r.emission_b * ct2) * sp4;

    let dephasing_op = CMat3::diag_real(T::one(), T::zero(), -T::one());

    Ok([
        LindbladTerm {
            channel: DressedChannel::PlusToZero,
            jump: CMat3::unit(ZERO, PLUS),
            rate: rate_plus_zero,
        },
        LindbladTerm {
            channel: DressedChannel::ZeroToMinus,
            jump: CMat3::unit(MINUS, ZERO),
            rate: rate_zero_minus,
        },
        LindbladTerm {
            channel: DressedChannel::PlusToMinus,
            jump: CMat3::unit(MINUS, PLUS),
            rate: rate_plus_minus,
        },
        LindbladTerm {
            channel: DressedChannel::Dephasing,
            jump: dephasing_op,
            rate: rate_dephasing,
        },
        LindbladTerm {
            channel: DressedChannel::ZeroToPlus,
            jump: CMat3::unit(PLUS, ZERO),
            rate: rate_zero_plus,
        },
        LindbladTerm {
            channel: DressedChannel::MinusToZero,
            jump: CMat3::unit(ZERO, MINUS),
            rate: rate_minus_zero,
        },
        LindbladTerm {
            channel: DressedChannel::MinusToPlus,
            jump: CMat3::unit(PLUS, MINUS),
            rate: rate_minus_plus,
        },
    ])
}

/// `sum_i rate_i (L_i rho L_i^dag - {L_i^dag L_i, rho} / 2)`.
pub fn lindblad_dissipator<T: Scalar>(terms: &[(CMat3<T>, T)], rho: &CMat3<T>) -> CMat3<T> {
    let half = real::<T>(0.5);
    let mut out = CMat3::zeros();
    for (jump, rate) in terms {
        if *rate == T::zero() {
            continue;
        }
        let gain = *jump * *rho * jump.adjoint();
        let loss = anticommutator(&(jump.adjoint() * *jump), rho).scale_re(half);
        out = out + (gain - loss).scale_re(*rate);
    }
    out
}

/// `-i [h, rho]`.
pub fn hamiltonian_flow<T: Scalar>(h: &CMat3<T>, rho: &CMat3<T>) -> CMat3<T> {
    commutator(h, rho).scale(C::new(T::zero(), -T::one()))
}

/// Right-hand side of the microscopic master equation at time `t`.
///
/// The output is Hermitian and traceless whenever `rho` is Hermitian. The
/// generator depends on time only through the mixing angles.
pub fn microscopic_generator<T: Scalar>(
    t: T,
    sched: &PulseSchedule<T>,
    bath: &BathModel<T>,
    rho: &CMat3<T>,
) -> Result<CMat3<T>> {
    let frame = drive::dressed_frame(t, sched)?;
    let h = drive::hamiltonian(t, sched);
    let terms = jump_operators(frame.theta, frame.phi, bath)?;
    let bare: Vec<(CMat3<T>, T)> = terms
        .iter()
        .filter(|term| term.rate > T::zero())
        .map(|term| (term.to_bare(&frame), term.rate))
        .collect();
    Ok(hamiltonian_flow(&h, rho) + lindblad_dissipator(&bare, rho))
}

/// Right-hand side of the phenomenological master equation at time `t`:
/// spontaneous emission from the bare excited level toward levels 1 and 3
/// with rates `gamma1` and `gamma3`. Time independent apart from the
/// Hamiltonian.
pub fn phenomenological_generator<T: Scalar>(
    t: T,
    sched: &PulseSchedule<T>,
    gamma1: T,
    gamma3: T,
    rho: &CMat3<T>,
) -> CMat3<T> {
    let h = drive::hamiltonian(t, sched);
    let half = real::<T>(0.5);
    let two = real::<T>(2.0);
    let g13 = gamma1 + gamma3;
    let r22 = rho.m[1][1];

    let mut d = CMat3::zeros();
    d.m[0][0] = r22.scale(-two * gamma1);
    d.m[1][1] = r22.scale(two * g13);
    d.m[2][2] = r22.scale(-two * gamma3);
    d.m[0][1] = rho.m[0][1].scale(g13);
    d.m[1][0] = rho.m[1][0].scale(g13);
    d.m[1][2] = rho.m[1][2].scale(g13);
    d.m[2][1] = rho.m[2][1].scale(g13);
    // the (1,3) corner is untouched by this model

    hamiltonian_flow(&h, rho) - d.scale_re(half)
}

/// How [`spectral_decompose`] treats Bohr frequencies that are distinct but
/// closer than the separation threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegeneracyPolicy {
    /// Return an error naming the two clashing frequencies.
    Abort,
    /// Merge their components into a single one.
    Merge,
}

/// Threshold under which two Bohr frequencies count as degenerate, for a
/// drive with peak Rabi parameter `omega0`.
pub fn bohr_degeneracy_threshold<T: Scalar>(omega0: T) -> T {
    real::<T>(1e-9) * omega0
}

/// Decompose `a` into its components at the Bohr frequencies of the frame:
/// for each eigenvalue pair, the piece `P(e) a P(e')` belongs to the
/// frequency `e' - e`. Summing all components returns `a`, and each
/// component `a_w` satisfies `[H, a_w] = -w a_w`.
///
/// The three diagonal pieces always share the zero-frequency component.
/// When pieces from *different* eigenvalue pairs land within `delta_omega`
/// of each other the channel attribution is ambiguous; the policy decides
/// whether to merge them or abort.
pub fn spectral_decompose<T: Scalar>(
    a: &CMat3<T>,
    frame: &DressedFrame<T>,
    delta_omega: T,
    policy: DegeneracyPolicy,
) -> Result<Vec<(T, CMat3<T>)>> {
    let kets = frame.eigenvectors();
    let evs = frame.eigenvalues();
    let projectors: Vec<CMat3<T>> = kets.iter().map(|k| outer(k, k)).collect();

    // (frequency, eigenvalue-pair class, component); all diagonal pairs
    // belong to class 0 by construction
    let mut parts: Vec<(T, usize, CMat3<T>)> = Vec::with_capacity(9);
    for i in 0..3 {
        for j in 0..3 {
            let omega = if i == j { T::zero() } else { evs[j] - evs[i] };
            let class = if i == j { 0 } else { 1 + 3 * i + j };
            let comp = projectors[i] * *a * projectors[j];
            parts.push((omega, class, comp));
        }
    }
    parts.sort_by(|x, y| x.0.partial_cmp(&y.0).expect("finite Bohr frequencies"));

    let mut out: Vec<(T, CMat3<T>)> = Vec::new();
    let mut idx = 0;
    while idx < parts.len() {
        let mut hi = idx;
        while hi + 1 < parts.len() && parts[hi + 1].0 - parts[hi].0 <= delta_omega {
            hi += 1;
        }
        let cluster = &parts[idx..=hi];
        let ambiguous = cluster.iter().any(|p| p.1 != cluster[0].1);
        if ambiguous && policy == DegeneracyPolicy::Abort {
            return Err(Error::DegenerateBohrFrequencies(
                approx_f64(cluster[0].0),
                approx_f64(cluster[cluster.len() - 1].0),
            ));
        }
        let mut sum = CMat3::zeros();
        for part in cluster {
            sum = sum + part.2;
        }
        out.push((cluster[0].0, sum));
        idx = hi + 1;
    }
    Ok(out)
}

/// Bare-basis coupling operators connecting each lower level to the excited
/// level, paired with the rate class each one carries.
fn coupling_operators<T: Scalar>(bath: &BathModel<T>) -> [(CMat3<T>, T); 4] {
    let r = rates(bath);
    [
        (CMat3::unit(0, 1), r.emission_a),   // |1><2|
        (CMat3::unit(1, 0), r.absorption_a), // |2><1|
        (CMat3::unit(2, 1), r.emission_b),   // |3><2|
        (CMat3::unit(1, 2), r.absorption_b), // |2><3|
    ]
}

/// First-principles generator: spectrally decompose each coupling operator
/// over the frame's Bohr frequencies and feed every component into the
/// Lindblad form with its flat-spectrum rate.
///
/// This route never touches the closed-form jump operators, so it serves as
/// their independent oracle. It requires well-separated Bohr frequencies and
/// refuses to run otherwise.
pub fn spectral_pipeline_generator<T: Scalar>(
    frame: &DressedFrame<T>,
    bath: &BathModel<T>,
    rho: &CMat3<T>,
    delta_omega: T,
) -> Result<CMat3<T>> {
    let h = frame.reconstruct_hamiltonian();
    let mut out = hamiltonian_flow(&h, rho);
    for (op, rate) in coupling_operators(bath) {
        let comps = spectral_decompose(&op, frame, delta_omega, DegeneracyPolicy::Abort)?;
        let terms: Vec<(CMat3<T>, T)> = comps.into_iter().map(|(_, c)| (c, rate)).collect();
        out = out + lindblad_dissipator(&terms, rho);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::drive::Sequence;
    use crate::state::DensityMatrix;
    use crate::testkit::Rng;

    fn frame_for(theta: f64, phi: f64) -> DressedFrame<f64> {
        // pick Omega = 1 and the detuning consistent with the requested phi
        let delta = 2.0 / (2.0 * phi).tan();
        let f = DressedFrame::from_parameters(theta, 1.0, delta);
        assert!((f.phi - phi).abs() < 1e-12);
        f
    }

    #[test]
    fn rate_table_examples() {
        let r = rates(&BathModel::new(1.0, 1.0, 0.0).unwrap());
        assert_eq!(
            (r.emission_a, r.emission_b, r.absorption_a, r.absorption_b),
            (1.0, 1.0, 0.0, 0.0)
        );
        let r = rates(&BathModel::new(0.5, 2.0, 2.0).unwrap());
        assert_eq!(
            (r.emission_a, r.emission_b, r.absorption_a, r.absorption_b),
            (1.5, 3.0, 1.0, 2.0)
        );
    }

    #[test]
    fn detailed_balance() {
        let bath = BathModel::<f64>::new(0.7, 3.0, 4.5).unwrap();
        let r = rates(&bath);
        let ratio = bath.n_photons / (1.0 + bath.n_photons);
        assert!((r.absorption_a / r.emission_a - ratio).abs() < 1e-15);
        assert!((r.absorption_b / r.emission_b - ratio).abs() < 1e-15);
    }

    #[test]
    fn jump_rates_at_theta_zero_phi_quarter_pi() {
        let bath = BathModel::new(1.0, 1.0, 0.0).unwrap();
        let terms = jump_operators(0.0, std::f64::consts::FRAC_PI_4, &bath).unwrap();
        let rate_of = |ch: DressedChannel| {
            terms.iter().find(|t| t.channel == ch).unwrap().rate
        };
        assert!((rate_of(DressedChannel::PlusToZero) - 0.5).abs() < 1e-15);
        assert!((rate_of(DressedChannel::PlusToMinus) - 0.25).abs() < 1e-15);
        assert!((rate_of(DressedChannel::Dephasing) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn absorption_channels_vanish_at_zero_temperature() {
        let bath = BathModel::new(2.0, 0.7, 0.0).unwrap();
        let mut rng = Rng::new(11);
        for _ in 0..32 {
            let theta = rng.uniform(0.0, std::f64::consts::FRAC_PI_2);
            let phi = rng.uniform(1e-3, std::f64::consts::FRAC_PI_2 - 1e-3);
            let terms = jump_operators(theta, phi, &bath).unwrap();
            for t in &terms {
                match t.channel {
                    DressedChannel::ZeroToMinus | DressedChannel::ZeroToPlus => {
                        assert_eq!(t.rate, 0.0)
                    }
                    _ => assert!(t.rate >= 0.0),
                }
            }
        }
    }

    #[test]
    fn all_rates_vanish_without_coupling() {
        let bath = BathModel::new(0.0, 1.0, 5.0).unwrap();
        let terms = jump_operators(0.3, 0.5, &bath).unwrap();
        assert!(terms.iter().all(|t| t.rate == 0.0));
    }

    #[test]
    fn jump_structure_in_dressed_basis() {
        let bath = BathModel::<f64>::new(1.0, 2.0, 0.5).unwrap();
        let terms = jump_operators(0.4, 0.3, &bath).unwrap();
        for term in &terms {
            if term.channel == DressedChannel::Dephasing {
                // diagonal traceless
                assert!(term.jump.trace().re.abs() < 1e-15);
                for i in 0..3 {
                    for j in 0..3 {
                        if i != j {
                            assert_eq!(term.jump.m[i][j].norm_sqr(), 0.0);
                        }
                    }
                }
            } else {
                let nonzero = term
                    .jump
                    .m
                    .iter()
                    .flatten()
                    .filter(|z| z.norm_sqr() > 0.0)
                    .count();
                assert_eq!(nonzero, 1);
            }
        }
    }

    #[test]
    fn jump_operators_reject_bad_angles() {
        let bath = BathModel::new(1.0, 1.0, 0.0).unwrap();
        assert!(jump_operators(-0.1, 0.3, &bath).is_err());
        assert!(jump_operators(2.0, 0.3, &bath).is_err());
        assert!(jump_operators(0.3, std::f64::consts::FRAC_PI_2, &bath).is_err());
    }

    #[test]
    fn spectral_decompose_identity() {
        let frame = frame_for(0.6, 0.4);
        let id = CMat3::identity();
        let comps = spectral_decompose(
            &id,
            &frame,
            bohr_degeneracy_threshold(25.0),
            DegeneracyPolicy::Abort,
        )
        .unwrap();
        let nontrivial: Vec<_> = comps
            .iter()
            .filter(|(_, c)| c.max_abs() > 1e-14)
            .collect();
        assert_eq!(nontrivial.len(), 1);
        assert!(nontrivial[0].0.abs() < 1e-14);
        assert!(nontrivial[0].1.max_abs_diff(&id) < 1e-13);
    }

    #[test]
    fn spectral_decompose_aborts_on_degenerate_spectrum() {
        // zero detuning makes the two ladder splittings coincide
        let frame = DressedFrame::from_parameters(0.5, 1.0, 0.0);
        let op = CMat3::unit(0, 1);
        let res = spectral_decompose(&op, &frame, 1e-9, DegeneracyPolicy::Abort);
        assert!(matches!(res, Err(Error::DegenerateBohrFrequencies(_, _))));
        assert!(spectral_decompose(&op, &frame, 1e-9, DegeneracyPolicy::Merge).is_ok());
    }

    /// Closed forms for the spectral components of the four coupling
    /// operators, written out independently of `jump_operators`.
    fn closed_form_components(
        which: usize,
        theta: f64,
        phi: f64,
        frame: &DressedFrame<f64>,
    ) -> Vec<(f64, CMat3<f64>)> {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        let op = |i: usize, j: usize, c: f64| {
            outer(&frame.eigenvectors()[i], &frame.eigenvectors()[j]).scale_re(c)
        };
        let w_p0 = frame.omega_plus;
        let w_0m = -frame.omega_minus;
        let w_pm = frame.omega_plus - frame.omega_minus;
        const P: usize = 0;
        const Z: usize = 1;
        const M: usize = 2;
        match which {
            // |1><2|
            0 => vec![
                (w_p0, op(Z, P, ct * cp)),
                (-w_0m, op(Z, M, -ct * sp)),
                (w_pm, op(M, P, st * cp * cp)),
                (-w_pm, op(P, M, -st * sp * sp)),
                (0.0, (op(P, P, 1.0) - op(M, M, 1.0)).scale_re(st * sp * cp)),
            ],
            // |2><1|
            1 => vec![
                (-w_p0, op(P, Z, ct * cp)),
                (w_0m, op(M, Z, -ct * sp)),
                (-w_pm, op(P, M, st * cp * cp)),
                (w_pm, op(M, P, -st * sp * sp)),
                (0.0, (op(P, P, 1.0) - op(M, M, 1.0)).scale_re(st * sp * cp)),
            ],
            // |3><2|
            2 => vec![
                (w_p0, op(Z, P, -st * cp)),
                (-w_0m, op(Z, M, st * sp)),
                (w_pm, op(M, P, ct * cp * cp)),
                (0.0, (op(P, P, 1.0) - op(M, M, 1.0)).scale_re(ct * sp * cp)),
                (-w_pm, op(P, M, -ct * sp * sp)),
            ],
            // |2><3|
            _ => vec![
                (-w_p0, op(P, Z, -st * cp)),
                (w_0m, op(M, Z, st * sp)),
                (-w_pm, op(P, M, ct * cp * cp)),
                (0.0, (op(P, P, 1.0) - op(M, M, 1.0)).scale_re(ct * sp * cp)),
                (w_pm, op(M, P, -ct * sp * sp)),
            ],
        }
    }

    fn assemble(comps: &[(f64, CMat3<f64>)]) -> Vec<(f64, CMat3<f64>)> {
        // sum components sharing a frequency, drop zero matrices
        let mut out: Vec<(f64, CMat3<f64>)> = Vec::new();
        for (w, c) in comps {
            if let Some(slot) = out.iter_mut().find(|(w0, _)| (w0 - w).abs() < 1e-9) {
                slot.1 = slot.1 + *c;
            } else {
                out.push((*w, *c));
            }
        }
        out.retain(|(_, c)| c.max_abs() > 0.0);
        out.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        out
    }

    #[test]
    fn spectral_components_match_closed_forms() {
        // lower-bright-side angles where the spectrum is well separated
        let mut rng = Rng::new(2024);
        let delta_omega = 1e-9;
        for trial in 0..100 {
            let theta = rng.uniform(0.05, std::f64::consts::FRAC_PI_2 - 0.05);
            let phi = rng.uniform(0.05, std::f64::consts::FRAC_PI_4 - 0.02);
            let frame = frame_for(theta, phi);
            for (which, op) in [
                CMat3::<f64>::unit(0, 1),
                CMat3::unit(1, 0),
                CMat3::unit(2, 1),
                CMat3::unit(1, 2),
            ]
            .iter()
            .enumerate()
            {
                let numeric_raw =
                    spectral_decompose(op, &frame, delta_omega, DegeneracyPolicy::Abort)
                        .unwrap();
                let numeric = assemble(&numeric_raw);
                let closed = assemble(&closed_form_components(which, theta, phi, &frame));
                assert_eq!(numeric.len(), closed.len(), "trial {trial} op {which}");
                for ((wn, cn), (wc, cc)) in numeric.iter().zip(closed.iter()) {
                    assert!((wn - wc).abs() < 1e-9, "trial {trial} op {which}");
                    assert!(
                        cn.max_abs_diff(cc) < 1e-10,
                        "trial {trial} op {which}: {:.3e}",
                        cn.max_abs_diff(cc)
                    );
                }
                // completeness: the components sum back to the operator
                let mut total = CMat3::zeros();
                for (_, c) in &numeric_raw {
                    total = total + *c;
                }
                assert!(total.max_abs_diff(op) < 1e-12);
                // ladder property against the reconstructed Hamiltonian
                let h = frame.reconstruct_hamiltonian();
                for (w, c) in &numeric_raw {
                    let lhs = commutator(&h, c);
                    let rhs = c.scale_re(-*w);
                    assert!(lhs.max_abs_diff(&rhs) < 1e-10);
                }
            }
        }
    }

    #[test]
    fn fixed_angle_example_matches_closed_forms() {
        let theta = std::f64::consts::FRAC_PI_4;
        let phi = std::f64::consts::FRAC_PI_6;
        let frame = frame_for(theta, phi);
        let op = CMat3::unit(2, 1); // |3><2|
        let numeric = assemble(
            &spectral_decompose(&op, &frame, 1e-9, DegeneracyPolicy::Abort).unwrap(),
        );
        let closed = assemble(&closed_form_components(2, theta, phi, &frame));
        assert_eq!(numeric.len(), closed.len());
        for ((wn, cn), (wc, cc)) in numeric.iter().zip(closed.iter()) {
            assert!((wn - wc).abs() < 1e-10);
            assert!(cn.max_abs_diff(cc) < 1e-10);
        }
    }

    #[test]
    fn generator_reduces_to_hamiltonian_flow_without_coupling() {
        let sched = PulseSchedule::new(25.0, 1.5, 1.0, 1.0, Sequence::Counterintuitive).unwrap();
        let bath = BathModel::new(0.0, 1.0, 0.0).unwrap();
        let rho = DensityMatrix::<f64>::pure(1).unwrap();
        let t = 0.3;
        let g = microscopic_generator(t, &sched, &bath, rho.matrix()).unwrap();
        let h = drive::hamiltonian(t, &sched);
        let expect = hamiltonian_flow(&h, rho.matrix());
        assert!(g.max_abs_diff(&expect) < 1e-15);
    }

    #[test]
    fn generator_is_trace_free_and_hermiticity_preserving() {
        let sched = PulseSchedule::new(25.0, 1.5, 1.0, 1.0, Sequence::Intuitive).unwrap();
        let bath = BathModel::new(0.8, 1.7, 2.3).unwrap();
        let mut rng = Rng::new(7);
        for _ in 0..1000 {
            let rho = rng.density();
            let t = rng.uniform(-6.0, 6.0);
            let g = microscopic_generator(t, &sched, &bath, &rho).unwrap();
            assert!(g.trace().re.abs() < 1e-12 && g.trace().im.abs() < 1e-12);
            assert!(g.herm_defect() < 1e-12);
            let p = phenomenological_generator(t, &sched, 0.9, 1.4, &rho);
            assert!(p.trace().re.abs() < 1e-12 && p.trace().im.abs() < 1e-12);
            assert!(p.herm_defect() < 1e-12);
        }
    }

    #[test]
    fn microscopic_generator_matches_spectral_pipeline() {
        // the central cross-check: closed-form channels against the
        // first-principles eigenprojector pipeline, at finite temperature
        let sched = PulseSchedule::new(25.0, 1.5, 1.0, 1.0, Sequence::Counterintuitive).unwrap();
        let bath = BathModel::new(0.6, 1.8, 1.2).unwrap();
        let mut rng = Rng::new(99);
        for _ in 0..50 {
            let t = rng.uniform(-2.0, 2.0);
            let rho = rng.density();
            let g = microscopic_generator(t, &sched, &bath, &rho).unwrap();
            let frame = drive::dressed_frame(t, &sched).unwrap();
            let oracle =
                spectral_pipeline_generator(&frame, &bath, &rho, bohr_degeneracy_threshold(25.0))
                    .unwrap();
            assert!(
                g.max_abs_diff(&oracle) < 1e-10,
                "mismatch {:.3e} at t = {t}",
                g.max_abs_diff(&oracle)
            );
        }
    }

    #[test]
    fn zero_temperature_channels_match_dedicated_forms() {
        // build the five zero-temperature channels directly and compare
        let bath = BathModel::new(1.3, 0.6, 0.0).unwrap();
        let mut rng = Rng::new(5);
        for _ in 0..64 {
            let theta = rng.uniform(0.05, std::f64::consts::FRAC_PI_2 - 0.05);
            let phi = rng.uniform(0.05, std::f64::consts::FRAC_PI_4);
            let rho = rng.density();
            let terms = jump_operators(theta, phi, &bath).unwrap();
            let all: Vec<(CMat3<f64>, f64)> =
                terms.iter().map(|t| (t.jump, t.rate)).collect();
            let via_production = lindblad_dissipator(&all, &rho);

            let (st, ct) = theta.sin_cos();
            let (sp, cp) = phi.sin_cos();
            let (ga, gb) = (bath.gamma, bath.alpha * bath.gamma);
            let five: Vec<(CMat3<f64>, f64)> = vec![
                (CMat3::unit(ZERO, PLUS), (ga * ct * ct + gb * st * st) * cp * cp),
                (CMat3::unit(ZERO, MINUS), (ga * ct * ct + gb * st * st) * sp * sp),
                (
                    CMat3::unit(MINUS, PLUS),
                    (ga * st * st + gb * ct * ct) * cp * cp * cp * cp,
                ),
                (
                    CMat3::unit(PLUS, MINUS),
                    (ga * st * st + gb * ct * ct) * sp * sp * sp * sp,
                ),
                (
                    CMat3::diag_real(1.0, 0.0, -1.0),
                    (ga * st * st + gb * ct * ct) * sp * sp * cp * cp,
                ),
            ];
            let via_five = lindblad_dissipator(&five, &rho);
            assert!(via_production.max_abs_diff(&via_five) < 1e-14);
        }
    }

    #[test]
    fn phenomenological_examples() {
        // spontaneous emission out of the bare excited level, no drive
        let sched = PulseSchedule::new(0.0, 1.5, 1.0, 0.0, Sequence::Counterintuitive).unwrap();
        let rho = DensityMatrix::<f64>::pure(2).unwrap();
        // far tail so the pulses are numerically zero
        let g = phenomenological_generator(1e6, &sched, 1.0, 1.0, rho.matrix());
        assert!((g.m[0][0].re - 1.0).abs() < 1e-12);
        assert!((g.m[1][1].re + 2.0).abs() < 1e-12);
        assert!((g.m[2][2].re - 1.0).abs() < 1e-12);

        let ground = DensityMatrix::<f64>::pure(1).unwrap();
        let g = phenomenological_generator(1e6, &sched, 1.0, 1.0, ground.matrix());
        assert!(g.max_abs() < 1e-15);
    }

    #[test]
    fn phenomenological_leaves_corner_coherence_alone() {
        let sched = PulseSchedule::new(0.0, 1.5, 1.0, 0.0, Sequence::Counterintuitive).unwrap();
        let mut rng = Rng::new(31);
        for _ in 0..100 {
            let rho = rng.density();
            let g = phenomenological_generator(1e6, &sched, 0.7, 1.9, &rho);
            // with the drive off, d rho_13 / dt has no dissipative part
            let expect = hamiltonian_flow(&drive::hamiltonian(1e6, &sched), &rho);
            assert!((g.m[0][2] - expect.m[0][2]).norm_sqr() < 1e-30);
        }
    }

    #[test]
    fn zero_temperature_flow_funnels_into_dark_state() {
        // fixed angles, Hamiltonian off: population accumulates in |0>
        let bath = BathModel::new(1.0, 1.0, 0.0).unwrap();
        let theta = std::f64::consts::FRAC_PI_4;
        let phi = std::f64::consts::FRAC_PI_6;
        let terms = jump_operators(theta, phi, &bath).unwrap();
        let all: Vec<(CMat3<f64>, f64)> = terms.iter().map(|t| (t.jump, t.rate)).collect();
        // dressed-basis evolution with a plain RK4 loop
        let mut rho = CMat3::diag_real(0.2, 0.1, 0.7);
        rho.m[0][2] = C::new(0.1, 0.05);
        rho.m[2][0] = C::new(0.1, -0.05);
        let h = 1e-2;
        let mut p0_prev = rho.m[1][1].re;
        for _ in 0..5000 {
            let k1 = lindblad_dissipator(&all, &rho);
            let k2 = lindblad_dissipator(&all, &(rho + k1.scale_re(h / 2.0)));
            let k3 = lindblad_dissipator(&all, &(rho + k2.scale_re(h / 2.0)));
            let k4 = lindblad_dissipator(&all, &(rho + k3.scale_re(h)));
            rho = rho + (k1 + k2.scale_re(2.0) + k3.scale_re(2.0) + k4).scale_re(h / 6.0);
            let p0 = rho.m[1][1].re;
            assert!(p0 >= p0_prev - 1e-12);
            p0_prev = p0;
        }
        assert!(p0_prev > 1.0 - 1e-6, "P0 = {p0_prev}");
    }
}
