//! Randomised invariants over the parameter space.

use heralded_cat::detection::{chopping_probability, chopping_with_loss, DetectorModel};
use heralded_cat::phasespace::{
    frame_vector, husimi_closed, husimi_oracle, quadrature_closed, quadrature_oracle, wigner_closed,
    wigner_oracle, EvalContext,
};
use heralded_cat::states::ConditionalState;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn states_are_normalised_with_fixed_parity(alpha in 0.02f64..0.9, m in 0usize..14) {
        let s = ConditionalState::new(alpha, m).unwrap();
        let v = s.fock_vector();
        prop_assert!((v.norm_sqr() - 1.0).abs() < 1e-12);
        for (n, c) in v.amplitudes().iter().enumerate() {
            if (n + m) % 2 == 1 {
                prop_assert_eq!(c.norm_sqr(), 0.0);
            }
        }
    }

    #[test]
    fn closed_forms_match_fock_sums(
        alpha in -0.8f64..0.8,
        m in 0usize..8,
        x in -3.5f64..3.5,
        p in -3.5f64..3.5,
        phi in 0.0f64..std::f64::consts::PI,
    ) {
        prop_assume!(alpha.abs() > 0.02);
        let s = ConditionalState::new(alpha, m).unwrap();
        let ctx = EvalContext::new(&s).unwrap();
        let v = frame_vector(&s);
        prop_assert!((wigner_closed(&ctx, x, p) - wigner_oracle(&v, x, p)).abs() < 1e-10);
        prop_assert!((husimi_closed(&ctx, x, p) - husimi_oracle(&v, x, p)).abs() < 1e-10);
        prop_assert!((quadrature_closed(&ctx, phi, x) - quadrature_oracle(&v, phi, x)).abs() < 1e-10);
    }

    #[test]
    fn wigner_is_bounded(alpha in 0.02f64..0.9, m in 0usize..10, x in -5.0f64..5.0, p in -5.0f64..5.0) {
        let ctx = EvalContext::new(&ConditionalState::new(alpha, m).unwrap()).unwrap();
        prop_assert!(wigner_closed(&ctx, x, p).abs() <= 1.0 / std::f64::consts::PI + 1e-12);
    }

    #[test]
    fn detector_rows_are_stochastic(n in 1usize..30, m in 0usize..60, eta in 0.05f64..1.0) {
        let ideal: f64 = (0..=n).map(|k| chopping_probability(n, k, m).unwrap()).sum();
        prop_assert!((ideal - 1.0).abs() < 1e-12);
        let det = DetectorModel::new(n, eta).unwrap();
        let lossy: f64 = (0..=n).map(|k| chopping_with_loss(&det, k, m).unwrap()).sum();
        prop_assert!((lossy - 1.0).abs() < 1e-12);
        // never more clicks than photons or diodes
        for k in (m.min(n) + 1)..=n {
            prop_assert_eq!(chopping_probability(n, k, m).unwrap(), 0.0);
        }
    }
}
