use proptest::prelude::*;
use twomode_core::mean_field::*;
use twomode_core::model::ModelParams;

// high-precision reference values for ω = 1, w = 2, g = 0.1, λ = 0.11
const NU: f64 = 2.179_976_222_307_879;
const E0: f64 = -2.498_229_425_103_279;
const A: f64 = 1.000_918_531_931_092_5;
const B: f64 = 0.475_229_632_982_773_1;
const EPSILON: f64 = 0.313_791_477_423_030_74;
const THETA: f64 = -0.913_781_142_208_612_6;
const ZERO_POINT: f64 = -0.343_563_527_254_030_9;
const ENTROPY: f64 = 0.581_992_913_824_223_7;

fn reference_point() -> ModelParams<f64> {
    ModelParams::<f64>::new(1.0, 2.0, 0.1).unwrap().with_lambda(0.11).unwrap()
}

#[test]
fn condensate_amplitude_and_energy() {
    let p = reference_point();
    let s = stationary_amplitude(&p).unwrap();
    assert_eq!(s.branch, Branch::Superfluid);
    assert!((s.nu - NU).abs() < 1e-13);
    assert!((s.e0 - E0).abs() < 1e-13);
    assert!(s.residual(&p) <= 1e-12);
    // the other two real roots are the metastable and the barrier points
    assert_eq!(s.all_real_roots.len(), 3);
    for &r in &s.all_real_roots {
        assert!(mean_field_energy(&p, r) >= s.e0);
    }
}

#[test]
fn bogoliubov_coefficients() {
    let p = reference_point();
    let b = bogoliubov_params(&p, &stationary_amplitude(&p).unwrap()).unwrap();
    for (got, want) in [
        (b.a_coef, A),
        (b.b_coef, B),
        (b.epsilon, EPSILON),
        (b.theta, THETA),
        (b.zero_point, ZERO_POINT),
    ] {
        assert!((got - want).abs() < 1e-13, "{got} vs {want}");
    }
    assert!((squeezed_ground_entropy(b.theta) - ENTROPY).abs() < 1e-13);
}

#[test]
fn normal_branch_amplitude() {
    let p = ModelParams::<f64>::new(1.0, 0.5, 0.01).unwrap().with_lambda(0.1).unwrap();
    let s = stationary_amplitude(&p).unwrap();
    assert_eq!(s.branch, Branch::Normal);
    assert!((s.nu - 0.195_784_130_007_616_78).abs() < 1e-14);
}

#[test]
fn squeezed_state_is_the_quadratic_ground_state() {
    let p = reference_point();
    let b = bogoliubov_params(&p, &stationary_amplitude(&p).unwrap()).unwrap();
    let c = quadratic_check(&b, None).unwrap();
    assert!(c.converged);
    assert!((c.gap - EPSILON).abs() < 1e-8);
    assert!((c.ground_energy - ZERO_POINT).abs() < 1e-8);
    assert!(c.fidelity >= 1.0 - 1e-8);
    assert!((c.entropy - ENTROPY).abs() < 1e-6);
}

#[test]
fn closed_form_squeezing_matches_exponential() {
    let cut = twomode_core::fock::FockCutoff::new(120);
    let closed = squeezed_vacuum(THETA, cut);
    let exp = squeezed_by_exponential(THETA, cut).unwrap();
    for n in 0..40 {
        assert!((closed[n] - exp[n]).norm() < 1e-10, "n = {n}");
    }
}

#[test]
fn zero_field_superfluid_diverges() {
    let p = ModelParams::<f64>::new(1.0, 2.0, 0.1).unwrap();
    let s = stationary_amplitude(&p).unwrap();
    assert!(s.zero_field_limit);
    assert!((s.nu - zero_field_amplitude(&p).unwrap()).abs() < 1e-15);
    assert!(matches!(bogoliubov_params(&p, &s), Err(twomode_core::Error::SqueezingDivergence)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn bogoliubov_identities(w in 1.05f64..3.0, g in 0.005f64..0.3, lambda in 1e-3f64..0.5) {
        let p = ModelParams::<f64>::new(1.0, w, g).unwrap().with_lambda(lambda).unwrap();
        let s = stationary_amplitude(&p).unwrap();
        let scale = 2.0 * g * s.nu.powi(3) + p.effective_detuning().abs() * s.nu + lambda;
        prop_assert!(s.residual(&p) <= 1e-12 * scale.max(1.0));
        let b = bogoliubov_params(&p, &s).unwrap();
        prop_assert!(b.epsilon > 0.0);
        let lhs = b.epsilon * b.epsilon + 4.0 * b.b_coef * b.b_coef;
        prop_assert!((lhs - b.a_coef * b.a_coef).abs() <= 1e-12 * b.a_coef * b.a_coef);
        prop_assert!(b.theta <= 0.0);
        prop_assert!(((2.0 * b.theta).tanh() - b.tanh_two_theta()).abs() < 1e-12);
        // the returned root is the global minimum among the stationary points
        for &r in &s.all_real_roots {
            prop_assert!(mean_field_energy(&p, r) >= s.e0 - 1e-12 * s.e0.abs().max(1.0));
        }
    }

    #[test]
    fn entropy_is_non_negative_and_even(theta in -3.0f64..3.0) {
        let s = squeezed_ground_entropy(theta);
        prop_assert!(s >= 0.0);
        prop_assert!((s - squeezed_ground_entropy(-theta)).abs() < 1e-12 * s.max(1.0));
    }
}
