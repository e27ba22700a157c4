use lsys_core::funclass::{stieltjes_check, CheckOutcome};
use lsys_core::lsystem::{
    class_angles, class_angles_closed_form, classify_extension, f_mu, impedance_from_transfer,
    mu0_stieltjes, t_h_report, BoundaryParameter, ExtensionClass, ExtensionParameter,
    SchrodingerLSystem,
};
use lsys_core::numeric::sampling;
use lsys_core::weyl::WeylFunction;
use lsys_core::Error;
use num_complex::Complex64;
use proptest::prelude::*;

fn system(h: Complex64, mu: ExtensionParameter, c: f64) -> SchrodingerLSystem {
    let weyl = if c == 0.0 {
        WeylFunction::free()
    } else {
        WeylFunction::constant(c).unwrap()
    };
    SchrodingerLSystem::new(BoundaryParameter::new(h).unwrap(), mu, weyl).unwrap()
}

fn upper_point() -> impl Strategy<Value = Complex64> {
    (-3.0f64..3.0, 0.0f64..std::f64::consts::PI)
        .prop_map(|(log_r, arg)| Complex64::from_polar(10f64.powf(log_r), arg.max(1e-6)))
}

fn mu_strategy() -> impl Strategy<Value = ExtensionParameter> {
    prop_oneof![
        1 => Just(ExtensionParameter::Infinite),
        9 => (-5.0f64..5.0).prop_map(ExtensionParameter::Finite),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, ..ProptestConfig::default() })]

    #[test]
    fn transfer_round_trip(
        re in -2.0f64..2.0, im in 0.05f64..2.0, mu in mu_strategy(), c in 0.0f64..3.0, z in upper_point(), lower in any::<bool>()
    ) {
        let sys = system(Complex64::new(re, im), mu, c);
        let z = if lower { z.conj() } else { z };
        if let (Ok(v), Ok(w)) = (sys.impedance(z), sys.transfer(z)) {
            let back = impedance_from_transfer(w).unwrap();
            prop_assert!((back - v).norm() <= 1e-10 * v.norm().max(1e-300), "{back} vs {v}");
        }
    }

    #[test]
    fn herglotz_symmetry(re in -2.0f64..2.0, im in 0.05f64..2.0, mu in mu_strategy(), z in upper_point()) {
        let sys = system(Complex64::new(re, im), mu, 0.0);
        if let (Ok(a), Ok(b)) = (sys.impedance(z), sys.impedance(z.conj())) {
            prop_assert!((b - a.conj()).norm() <= 1e-12 * a.norm().max(1.0));
        }
    }

    #[test]
    fn large_mu_approaches_infinity(re in 0.0f64..2.0, im in 0.05f64..2.0, z in upper_point()) {
        let h = Complex64::new(re, im);
        let far = system(h, ExtensionParameter::Finite(1e12), 0.0).impedance(z).unwrap();
        let inf = system(h, ExtensionParameter::Infinite, 0.0).impedance(z).unwrap();
        prop_assert!((far - inf).norm() <= 1e-9 * inf.norm(), "{far} vs {inf}");
    }

    #[test]
    fn f_mu_tends_to_theta(re in 0.05f64..3.0, im in 0.05f64..3.0, c in 0.0f64..2.0) {
        let h = Complex64::new(re, im);
        let m0 = c.sqrt();
        let theta = t_h_report(h, m0).theta_tan.unwrap();
        let far = f_mu(h, m0, 1e12, lsys_core::funclass::Variant::Stieltjes).unwrap();
        prop_assert!((far - theta).abs() <= 1e-4 * theta.max(1.0), "{far} vs {theta}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn branch_implies_class(re in 0.05f64..3.0, im in 0.05f64..3.0, t in 0.0f64..1.0, seed in any::<u64>()) {
        let h = Complex64::new(re, im);
        let mu0 = mu0_stieltjes(h, 0.0);
        let samples = sampling::off_axis_points(seed, 20);
        for (mu, want) in [
            (ExtensionParameter::Finite(t * re), ExtensionClass::InverseBranch),
            (ExtensionParameter::Finite(mu0 * (1.0 + 5.0 * t)), ExtensionClass::StieltjesBranch),
            (ExtensionParameter::Infinite, ExtensionClass::StieltjesBranch),
        ] {
            let sys = system(h, mu, 0.0);
            prop_assert_eq!(classify_extension(&sys).unwrap(), want);
            let variant = want.variant().unwrap();
            prop_assert_eq!(stieltjes_check(&sys.impedance_fn(), &samples, 1e-9, variant).unwrap(), CheckOutcome::Pass);
        }
    }

    #[test]
    fn closed_form_angles_match_limits(re in 0.05f64..3.0, im in 0.05f64..3.0, t in 0.0f64..1.0, c in 0.0f64..2.0) {
        let h = Complex64::new(re, im);
        let m0 = c.sqrt();
        let mu0 = mu0_stieltjes(h, m0);
        for mu in [-m0 + t * (re + m0), mu0 + 0.1 + 10.0 * t] {
            let sys = system(h, ExtensionParameter::Finite(mu), c);
            // class_angles itself cross-checks the closed form against limits
            let (a1, a2) = class_angles(&sys).unwrap();
            let (_, c1, c2) = class_angles_closed_form(&sys).unwrap();
            prop_assert_eq!((a1, a2), (c1, c2));
            prop_assert!(0.0 <= a1 && a1 <= a2);
        }
    }
}

#[test]
fn not_accretive_is_an_error_everywhere() {
    let sys = system(Complex64::new(-1.0, 1.0), ExtensionParameter::Infinite, 0.0);
    assert!(matches!(
        classify_extension(&sys),
        Err(Error::NotAccretive { .. })
    ));
    assert!(matches!(
        class_angles(&sys),
        Err(Error::NotAccretive { .. })
    ));
}
