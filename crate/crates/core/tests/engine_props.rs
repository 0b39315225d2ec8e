mod common;

use cvteleport::engine::{
    beam_splitter, homodyne_x, phase_shift, qnd_couple, ModeRegistry, ModeSpec, QuadratureForm,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-12;

fn spec() -> impl Strategy<Value = ModeSpec> {
    any::<u64>().prop_map(|s| common::random_spec(&mut ChaCha8Rng::seed_from_u64(s)))
}

proptest! {
    #[test]
    fn splitter_preserves_pairings(t in 0.0f64..=1.0, a in spec(), b in spec()) {
        let mut reg = ModeRegistry::new();
        let (_, f1) = reg.allocate_mode(a).unwrap();
        let (_, f2) = reg.allocate_mode(b).unwrap();
        let (o1, o2) = beam_splitter(f1, f2, t).unwrap();
        prop_assert!((o1.pairing() - 1.0).abs() < TOL);
        prop_assert!((o2.pairing() - 1.0).abs() < TOL);
        prop_assert!((o1.pairing() + o2.pairing() - 2.0).abs() < TOL);
        prop_assert!(o1.x().pairing(o2.y()).abs() < TOL);
        prop_assert!(o1.y().pairing(o2.x()).abs() < TOL);
        // Energy: total quadrature variance is conserved.
        let before = a.var_x + a.var_y + b.var_x + b.var_y;
        let after = reg.variance(o1.x()).unwrap() + reg.variance(o1.y()).unwrap()
            + reg.variance(o2.x()).unwrap() + reg.variance(o2.y()).unwrap();
        prop_assert!((before - after).abs() < 1e-10 * before);
    }

    #[test]
    fn qnd_preserves_pairings_and_qnd_variables(g in -10.0f64..10.0, a in spec(), b in spec()) {
        let mut reg = ModeRegistry::new();
        let (_, fa) = reg.allocate_mode(a).unwrap();
        let (_, fb) = reg.allocate_mode(b).unwrap();
        let (xb0, ya0) = (fb.x().clone(), fa.y().clone());
        let (oa, ob) = qnd_couple(fa, fb, g).unwrap();
        let tol = TOL * (1.0 + g * g);
        prop_assert!((oa.pairing() - 1.0).abs() < tol);
        prop_assert!((ob.pairing() - 1.0).abs() < tol);
        prop_assert!(oa.x().pairing(ob.y()).abs() < tol);
        prop_assert_eq!(ob.x(), &xb0);
        prop_assert_eq!(oa.y(), &ya0);
    }

    #[test]
    fn phase_shift_inverts(phi in -10.0f64..10.0, a in spec()) {
        let mut reg = ModeRegistry::new();
        let (m, f) = reg.allocate_mode(a).unwrap();
        let back = phase_shift(phase_shift(f, phi).unwrap(), -phi).unwrap();
        prop_assert!(back.x().max_abs_diff(&QuadratureForm::basis_x(m)) < TOL);
        prop_assert!(back.y().max_abs_diff(&QuadratureForm::basis_y(m)) < TOL);
    }

    #[test]
    fn covariance_is_symmetric_and_psd(t in 0.0f64..=1.0, g in -3.0f64..3.0, a in spec(), b in spec()) {
        let mut reg = ModeRegistry::new();
        let (_, f1) = reg.allocate_mode(a).unwrap();
        let (_, f2) = reg.allocate_mode(b).unwrap();
        let (o1, o2) = beam_splitter(f1, f2, t).unwrap();
        let (o1, o2) = qnd_couple(o1, o2, g).unwrap();
        let forms = [o1.x(), o1.y(), o2.x(), o2.y()];
        for f in forms {
            for h in forms {
                let c1 = reg.covariance(f, h).unwrap();
                let c2 = reg.covariance(h, f).unwrap();
                prop_assert_eq!(c1, c2);
                let (vf, vh) = (reg.variance(f).unwrap(), reg.variance(h).unwrap());
                prop_assert!(c1 * c1 <= vf * vh * (1.0 + 1e-12) + 1e-12);
            }
        }
    }

    #[test]
    fn conditioning_never_increases_variance(g in -5.0f64..5.0, a in spec(), b in spec()) {
        let mut reg = ModeRegistry::new();
        let (_, fa) = reg.allocate_mode(a).unwrap();
        let (_, fb) = reg.allocate_mode(b).unwrap();
        let (oa, ob) = qnd_couple(fa, fb, g).unwrap();
        let v = reg.variance(ob.y()).unwrap();
        let vc = reg.conditional_variance(ob.y(), oa.y()).unwrap();
        prop_assert!(vc <= v * (1.0 + 1e-12));
        prop_assert!(vc >= -1e-12);
    }

    #[test]
    fn homodyne_record_commutes_with_survivors(t in 0.0f64..=1.0, a in spec(), b in spec()) {
        let mut reg = ModeRegistry::new();
        let (_, f1) = reg.allocate_mode(a).unwrap();
        let (_, f2) = reg.allocate_mode(b).unwrap();
        let (o1, o2) = beam_splitter(f1, f2, t).unwrap();
        let r = homodyne_x(o1);
        prop_assert!(r.pairing(o2.x()).abs() < TOL);
        prop_assert!(r.pairing(o2.y()).abs() < TOL);
    }

    #[test]
    fn random_circuits_stay_physical(seed in any::<u64>()) {
        let s = common::random_circuit(seed);
        prop_assert!(s.beam_pairing_error < TOL, "{:?}", s);
        prop_assert!(s.feed_pairing_error < TOL, "{:?}", s);
        prop_assert!(s.cross_pairing_error < TOL, "{:?}", s);
    }
}

#[test]
fn worst_case_over_many_circuits() {
    let worst = (0..2000u64)
        .map(common::random_circuit)
        .fold((0.0f64, 0.0f64), |acc, s| {
            (
                acc.0.max(s.beam_pairing_error),
                acc.1.max(s.feed_pairing_error.max(s.cross_pairing_error)),
            )
        });
    assert!(worst.0 < TOL && worst.1 < TOL, "{worst:?}");
}
