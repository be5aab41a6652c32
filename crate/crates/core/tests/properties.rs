use fockbench::coherent::{coherent_ladder, CoherentSpec};
use fockbench::fock::{quadrature_report, FockState};
use fockbench::squeezing::{squeezed_vacuum_closed_form, two_mode_theta_vacuum, SqueezeSpec};
use fockbench::C64;
use ndarray::Array1;
use proptest::prelude::*;

const DIM: usize = 32;

/// Random state confined to the lowest levels, so the tail is empty.
fn low_state() -> impl Strategy<Value = FockState> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..DIM / 2).prop_filter_map(
        "zero vector",
        |coeffs| {
            let mut amps = Array1::<C64>::zeros(DIM);
            for (k, (re, im)) in coeffs.into_iter().enumerate() {
                amps[k] = C64::new(re, im);
            }
            FockState::new(amps).ok()?.normalized().ok()
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn heisenberg_floor(s in low_state()) {
        let q = quadrature_report(&s).unwrap();
        prop_assert!(q.product >= 0.25 - 1e-9);
        prop_assert!(!q.tail_warning);
    }

    #[test]
    fn coherent_states_saturate(re in -2.0f64..2.0, im in -2.0f64..2.0) {
        let s = coherent_ladder(&CoherentSpec::new(C64::new(re, im), 64).unwrap()).unwrap();
        let q = quadrature_report(&s).unwrap();
        prop_assert!((q.product - 0.25).abs() < 1e-8);
        prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn squeezed_vacuum_saturates(r in 0.0f64..1.0, phi in 0.0f64..6.28) {
        let s = squeezed_vacuum_closed_form(&SqueezeSpec::new(r, phi, 80).unwrap()).unwrap();
        let q = quadrature_report(&s).unwrap();
        prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
        prop_assert!(q.product >= 0.25 - 1e-9);
        if phi == 0.0 {
            prop_assert!((q.product - 0.25).abs() < 1e-8);
        }
    }

    #[test]
    fn theta_vacuum_pairs_photons(t in -0.8f64..0.8) {
        let s = two_mode_theta_vacuum(t, 30, 30).unwrap();
        prop_assert!(s.off_diagonal_mass() == 0.0);
        prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
    }
}
