use twomode_core::fock::{level_shift, partitioned_shift, TwoModeCutoff};
use twomode_core::model::*;

fn residual(w: f64, lambda: f64) -> f64 {
    let p = ModelParams::<f64>::new(1.0, w, 0.01).unwrap().with_lambda(lambda).unwrap();
    let n = classify_phase(&p).n_alpha();
    let h = build_sbf_hamiltonian(&p, TwoModeCutoff::square(n + 40));
    let exact = level_shift(&h, n, 0).unwrap();
    (exact - perturbative_energy_shift(&p).delta_e).abs()
}

#[test]
fn perturbative_residual_is_fourth_order() {
    for w in [0.5, 1.04] {
        let r: Vec<f64> = [1e-3, 5e-4, 2.5e-4].iter().map(|&l| residual(w, l)).collect();
        for pair in r.windows(2) {
            let exponent = (pair[0] / pair[1]).log2();
            assert!((exponent - 4.0).abs() <= 0.3, "w = {w}: {r:?}");
        }
    }
}

#[test]
fn boundary_splitting_is_first_order() {
    let mut r = Vec::new();
    for lambda in [1e-3, 5e-4, 2.5e-4] {
        let p = ModelParams::<f64>::new(1.0, 1.05, 0.01).unwrap().with_lambda(lambda).unwrap();
        let h = build_sbf_hamiltonian(&p, TwoModeCutoff::square(40));
        let c = h.cutoff();
        let e = p.alpha_level(2);
        let exact = partitioned_shift(&h, &[c.index(2, 0), c.index(3, 0)], e).unwrap();
        r.push((exact - perturbative_energy_shift(&p).delta_e).abs());
    }
    for pair in r.windows(2) {
        assert!(((pair[0] / pair[1]).log2() - 2.0).abs() <= 0.3, "{r:?}");
    }
}

#[test]
fn zero_field_ground_energy_formula() {
    // 20 parameter sets with n_α from 1 to 30
    let mut seen = Vec::new();
    for k in 0..20 {
        let n = 1 + (29 * k) / 19;
        let g = [0.01, 0.02, 0.05][k % 3];
        // centre of the n_α plateau: w − ω = 2gn
        let w = 1.0 + 2.0 * g * n as f64;
        let p = ModelParams::<f64>::new(1.0, w, g).unwrap();
        let class = classify_phase(&p);
        assert_eq!(class.n_alpha(), n);
        let ed = analyze_ground(&p, CutoffChoice::Auto).unwrap();
        let formula = (1.0 - w) * n as f64 + g * (n * n) as f64;
        assert!((ed.energy - formula).abs() <= 1e-10, "n = {n}: {} vs {formula}", ed.energy);
        assert!((ed.entropy - fock_condensate_entropy::<f64>(n)).abs() <= 1e-8);
        seen.push(n);
    }
    assert_eq!(seen.first(), Some(&1));
    assert_eq!(seen.last(), Some(&30));
}
