//! Parameter validation for the single-run command.
//!
//! Every numeric field is validated against the owning type's constraints
//! before any computation starts; invalid configurations never reach the
//! integrator.

use stirap_core::dissipator::BathModel;
use stirap_core::experiments::ModelKind;
use stirap_core::integrator::ModelSpec;
use stirap_core::Error;

/// Build the model for a single run, applying the phenomenological defaults
/// `Gamma_1 = gamma`, `Gamma_3 = alpha * gamma` unless overridden.
pub fn validated_model(
    kind: ModelKind,
    gamma: f64,
    alpha: f64,
    n_photons: f64,
    gamma1: Option<f64>,
    gamma3: Option<f64>,
) -> Result<ModelSpec<f64>, Error> {
    match kind {
        ModelKind::Microscopic => {
            if gamma1.is_some() || gamma3.is_some() {
                return Err(Error::InvalidParameter(
                    "--gamma1/--gamma3 apply to the phenomenological model only".into(),
                ));
            }
            Ok(ModelSpec::Microscopic(BathModel::new(gamma, alpha, n_photons)?))
        }
        ModelKind::Phenomenological => {
            let g1 = gamma1.unwrap_or(gamma);
            let g3 = gamma3.unwrap_or(alpha * gamma);
            ModelSpec::phenomenological(g1, g3)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use stirap_core::drive::{PulseSchedule, Sequence};
    use stirap_core::experiments::SweepSpec;
    use stirap_core::integrator::{IntegratorConfig, StepMode};

    #[test]
    fn microscopic_rejects_phenomenological_overrides() {
        let res = validated_model(ModelKind::Microscopic, 1.0, 1.0, 0.0, Some(0.5), None);
        assert!(res.is_err());
    }

    #[test]
    fn phenomenological_defaults_follow_gamma_and_alpha() {
        let m = validated_model(ModelKind::Phenomenological, 2.0, 1.5, 0.0, None, None).unwrap();
        match m {
            ModelSpec::Phenomenological { gamma1, gamma3 } => {
                assert_eq!(gamma1, 2.0);
                assert_eq!(gamma3, 3.0);
            }
            _ => panic!("wrong model"),
        }
    }

    proptest! {
        // fuzzed invalid parameters must be rejected before any integration
        #[test]
        fn invalid_bath_parameters_never_validate(
            gamma in -10.0f64..10.0,
            alpha in -10.0f64..10.0,
            n in -10.0f64..10.0,
        ) {
            let res = validated_model(ModelKind::Microscopic, gamma, alpha, n, None, None);
            let valid = gamma >= 0.0 && alpha >= 0.0 && n >= 0.0;
            prop_assert_eq!(res.is_ok(), valid);
        }

        #[test]
        fn invalid_schedules_never_validate(
            omega0 in -30.0f64..30.0,
            tau in -3.0f64..3.0,
            delta in -2.0f64..2.0,
            intuitive in proptest::bool::ANY,
        ) {
            let seq = if intuitive { Sequence::Intuitive } else { Sequence::Counterintuitive };
            let res = PulseSchedule::new(omega0, tau, 1.0, delta, seq);
            let valid = omega0 >= 0.0 && delta >= 0.0 && !(intuitive && delta <= 0.0);
            prop_assert_eq!(res.is_ok(), valid);
        }

        #[test]
        fn invalid_integrator_configs_never_validate(
            t_start in -10.0f64..10.0,
            t_end in -10.0f64..10.0,
            h in -1.0f64..1.0,
            samples in 0usize..10,
        ) {
            let cfg = IntegratorConfig {
                t_start,
                t_end,
                step_mode: StepMode::Fixed,
                h,
                samples,
                ..IntegratorConfig::default()
            };
            let valid = t_start < t_end && h > 0.0 && samples >= 2;
            prop_assert_eq!(cfg.validate().is_ok(), valid);
        }

        #[test]
        fn invalid_sweep_grids_never_validate(
            gammas in proptest::collection::vec(-5.0f64..5.0, 0..4),
            alphas in proptest::collection::vec(-5.0f64..5.0, 0..3),
        ) {
            let mut spec = SweepSpec::new(
                Sequence::Counterintuitive,
                stirap_core::experiments::ModelChoice::Microscopic,
                gammas.clone(),
            );
            spec.alpha_grid = alphas.clone();
            let valid = !gammas.is_empty()
                && !alphas.is_empty()
                && gammas.iter().all(|g| *g >= 0.0)
                && alphas.iter().all(|a| *a >= 0.0);
            prop_assert_eq!(spec.validate().is_ok(), valid);
        }
    }
}
