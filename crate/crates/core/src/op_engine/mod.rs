//! Orthogonal polynomials for the Gaussian weight with two jumps.
//!
//! The weight is discretized by composite Gauss–Legendre panels that split
//! exactly at the jumps, and the recurrence coefficients are obtained by
//! Lanczos tridiagonalization of the discrete measure. Hankel determinants
//! are only ever handled through their logarithms.

mod grid;
mod recurrence;
mod weight;

pub use grid::{
    build_quadrature, build_quadrature_with, truncation_radius, QuadratureGrid,
    DEFAULT_NODES_PER_PANEL, MAX_DEGREE,
};
pub use recurrence::{
    compute_recurrence, compute_recurrence_with, eval_monic_op, gue_log_hankel, hankel_f_cd,
    hankel_f_finite_difference, hankel_f_subleading, RecurrenceTable, WeightedValues,
};
pub use weight::JumpWeightSpec;

/// Finite-difference step used by the diagonal-derivative oracle.
pub const FD_STEP: f64 = 1e-5;

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn reference_spec() -> JumpWeightSpec {
        JumpWeightSpec::new(0.3, 1.1, 0.4, 0.7).unwrap()
    }

    #[test]
    fn hermite_reduction() {
        let spec = JumpWeightSpec::new(0.0, 1.0, 1.0, 1.0).unwrap();
        let table = compute_recurrence(&spec, 5).unwrap();
        for n in 0..5 {
            assert!(table.alpha[n].abs() < 1e-12);
        }
        for n in 1..5 {
            assert!((table.beta2[n] - 0.5 * n as f64).abs() < 1e-10);
        }
        assert!((table.log_hankel(1) - 0.572_364_942_924_700_1).abs() < 1e-12);
        assert!((table.log_hankel(2) - (PI / 2.0).ln()).abs() < 1e-12);
        assert!((gue_log_hankel(2) - (PI / 2.0).ln()).abs() < 1e-14);
    }

    #[test]
    fn hermite_to_degree_one_hundred() {
        let table = compute_recurrence(&JumpWeightSpec::gaussian(), 101).unwrap();
        for n in 1..=100 {
            assert!(table.alpha[n].abs() < 1e-12, "alpha_{n}");
            assert!((table.beta2[n] - 0.5 * n as f64).abs() < 1e-10, "beta_{n}");
            assert!((table.log_hankel(n) - gue_log_hankel(n)).abs() < 1e-8, "D_{n}");
            assert!(table.log_hankel_ratio_gue(n).abs() < 1e-11);
        }
    }

    #[test]
    fn equal_heights_match_single_jump() {
        let spec = JumpWeightSpec::new(-0.4, 0.9, 0.35, 0.35).unwrap();
        let single = JumpWeightSpec::single_jump(-0.4, 0.35).unwrap();
        let a = compute_recurrence(&spec, 30).unwrap();
        let b = compute_recurrence(&single, 30).unwrap();
        for n in 0..30 {
            assert!((a.alpha[n] - b.alpha[n]).abs() < 1e-12);
            assert!((a.beta2[n] - b.beta2[n]).abs() < 1e-12 * b.beta2[n].max(1.0));
            assert!((a.log_hankel[n] - b.log_hankel[n]).abs() < 1e-12 * b.log_hankel[n].abs().max(1.0));
        }
    }

    #[test]
    fn monic_hermite_values() {
        let table = compute_recurrence(&JumpWeightSpec::gaussian(), 4).unwrap();
        let (p, dp) = eval_monic_op(&table, 2, 1.0).unwrap();
        assert!((p - 0.5).abs() < 1e-14 && (dp - 2.0).abs() < 1e-14);
        assert!(eval_monic_op(&table, 3, 0.0).unwrap().0.abs() < 1e-14);
        assert!(eval_monic_op(&table, 5, 0.0).is_err());
    }

    #[test]
    fn gram_schmidt_oracle() {
        // Gram–Schmidt on monomials with 50-digit moments
        let table = compute_recurrence(&reference_spec(), 7).unwrap();
        let (p, dp) = table.eval_monic(4, 0.0).unwrap();
        assert!((p - 0.622_371_507_869_271_41).abs() < 1e-12);
        assert!((dp + 0.515_282_504_781_865_15).abs() < 1e-12);
        assert!((table.eval_monic(4, 0.7).unwrap().0 + 0.887_214_853_134_757_89).abs() < 1e-12);
        let alpha = [
            -0.158_535_318_680_446_26,
            0.020_176_788_883_323_495,
            0.010_806_111_998_340_341,
            -0.091_051_672_848_029_027,
            0.061_553_047_969_713_429,
            -0.081_691_439_360_052_207,
            0.031_915_177_874_791_707,
        ];
        let beta2 = [
            0.452_030_219_188_420_21,
            1.140_249_379_081_906_1,
            1.402_333_902_645_217_0,
            2.068_900_485_890_294_4,
            2.499_612_575_943_604_4,
            2.975_159_524_804_307_9,
        ];
        let log_hankel = [
            0.369_706_711_556_290_46,
            -0.054_592_821_660_579_467,
            -0.347_645_362_813_501_63,
            -0.302_559_982_051_511_09,
            0.469_542_698_632_425_09,
            2.157_781_129_558_925_4,
            4.936_317_219_828_383_0,
        ];
        for k in 0..7 {
            assert!((table.alpha[k] - alpha[k]).abs() < 1e-13, "alpha_{k}");
            assert!((table.log_hankel[k] - log_hankel[k]).abs() < 1e-12, "D_{}", k + 1);
        }
        for k in 1..7 {
            assert!((table.beta2[k] - beta2[k - 1]).abs() < 1e-13, "beta_{k}");
        }
        assert!((table.mu0 - 1.447_310_073_090_897_1).abs() < 1e-14);
    }

    #[test]
    fn weighted_values_agree_with_monic() {
        let table = compute_recurrence(&reference_spec(), 12).unwrap();
        for &x in &[-1.3, 0.3, 0.95, 2.2] {
            for n in 1..11 {
                let v = table.eval_weighted(n, x).unwrap();
                let (p, dp) = table.eval_monic(n, x).unwrap();
                let (pp, dpp) = table.eval_monic(n - 1, x).unwrap();
                let e = (-0.5 * x * x).exp();
                assert!((v.q - table.gamma[n] * p * e).abs() < 1e-13);
                assert!((v.dq - table.gamma[n] * dp * e).abs() < 1e-12);
                assert!((v.q_prev - table.gamma[n - 1] * pp * e).abs() < 1e-13);
                assert!((v.dq_prev - table.gamma[n - 1] * dpp * e).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn weighted_values_survive_high_degree() {
        let spec = JumpWeightSpec::new(22.0, 23.0, 0.4, 0.7).unwrap();
        let table = compute_recurrence(&spec, 300).unwrap();
        let mut overflowed = false;
        for x in [21.5, 22.0, 25.0, 30.0] {
            let v = table.eval_weighted(299, x).unwrap();
            assert!(v.q.is_finite() && v.q.abs() < 10.0 && v.q != 0.0);
            let (p, _) = table.eval_monic(299, x).unwrap();
            if !p.is_finite() {
                overflowed = true;
                continue;
            }
            // γ_299 is tiny, so compare in logs
            let expected = p.abs().ln() + table.log_gamma[299] - 0.5 * x * x;
            assert!((v.q.abs().ln() - expected).abs() < 1e-10, "x = {x}");
        }
        assert!(overflowed);
    }

    #[test]
    fn f_routes_vanish_for_gaussian() {
        let spec = JumpWeightSpec::new(-0.5, 0.8, 1.0, 1.0).unwrap();
        let table = compute_recurrence(&spec, 10).unwrap();
        assert_eq!(hankel_f_cd(&table, 6).unwrap(), 0.0);
        assert!(hankel_f_subleading(&table, 6).unwrap().abs() < 1e-13);
    }

    #[test]
    fn three_routes_for_f() {
        let spec = reference_spec();
        for n in [1, 3, 6, 12, 25] {
            let table = compute_recurrence(&spec, n + 1).unwrap();
            let cd = hankel_f_cd(&table, n).unwrap();
            let sub = hankel_f_subleading(&table, n).unwrap();
            let fd = hankel_f_finite_difference(&spec, n, FD_STEP).unwrap();
            assert!((cd - sub).abs() < 1e-9, "n = {n}: {cd} vs {sub}");
            assert!((cd - fd).abs() < 1e-6, "n = {n}: {cd} vs {fd}");
        }
    }

    #[test]
    fn single_jump_cd_route_drops_second_term() {
        let spec = JumpWeightSpec::new(0.2, 1.4, 0.6, 0.6).unwrap();
        let table = compute_recurrence(&spec, 9).unwrap();
        let v = table.eval_weighted(8, 0.2).unwrap();
        let only_first = 0.4 * table.beta(8) * (v.dq * v.q_prev - v.q * v.dq_prev);
        assert!((hankel_f_cd(&table, 8).unwrap() - only_first).abs() < 1e-15);
        assert!((only_first - hankel_f_subleading(&table, 8).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn orthogonality_residual() {
        let spec = reference_spec();
        let table = compute_recurrence(&spec, 51).unwrap();
        let grid = build_quadrature(&spec, 51).unwrap();
        let values: Vec<Vec<f64>> = grid
            .nodes
            .iter()
            .map(|&x| (0..=50).map(|n| table.eval_monic(n, x).unwrap().0).collect())
            .collect();
        for n in 1..=50 {
            let norm = (-2.0 * table.log_gamma[n]).exp();
            for m in 0..n {
                let ip: f64 = values
                    .iter()
                    .zip(&grid.weights)
                    .map(|(v, w)| w * v[m] * v[n])
                    .sum();
                assert!(ip.abs() <= 1e-10 * norm, "({m}, {n}): {ip} vs {norm}");
            }
        }
    }

    #[test]
    fn stable_under_node_doubling() {
        let spec = JumpWeightSpec::new(-0.7, 1.8, 0.25, 1.6).unwrap();
        let a = compute_recurrence(&spec, 200).unwrap();
        let b = compute_recurrence_with(&spec, 200, 2 * DEFAULT_NODES_PER_PANEL).unwrap();
        for n in 0..200 {
            let scale = b.beta2[n].sqrt().max(1.0);
            assert!((a.alpha[n] - b.alpha[n]).abs() < 1e-11 * scale, "alpha_{n}");
            assert!((a.beta2[n] - b.beta2[n]).abs() <= 1e-11 * b.beta2[n], "beta_{n}");
        }
    }

    #[test]
    fn loss_of_positivity_is_signalled() {
        // almost all mass sits far below the window the grid resolves
        let spec = JumpWeightSpec::new(-60.0, -59.0, 0.0, 0.0).unwrap();
        match compute_recurrence(&spec, 50) {
            Err(e) => assert_eq!(e.tag(), "loss-of-positivity"),
            Ok(t) => panic!("expected failure, got beta2 = {:?}", &t.beta2[..5]),
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn positivity_and_hankel_consistency(
            s1 in -2.0f64..3.0,
            gap in 0.05f64..2.0,
            w1 in 0.0f64..2.0,
            w2 in 0.0f64..2.0,
            n_max in 2usize..40,
        ) {
            let spec = JumpWeightSpec::new(s1, s1 + gap, w1, w2).unwrap();
            let table = compute_recurrence(&spec, n_max).unwrap();
            prop_assert!(table.beta2[1..].iter().all(|b| *b > 0.0));
            for n in 1..=n_max {
                let direct: f64 = -2.0 * table.log_gamma[..n].iter().sum::<f64>();
                prop_assert!((direct - table.log_hankel(n)).abs() <= 1e-12 * direct.abs().max(1.0));
                let via_ratio = table.log_hankel_ratio_gue(n) + gue_log_hankel(n);
                prop_assert!((via_ratio - table.log_hankel(n)).abs() <= 1e-10 * direct.abs().max(1.0));
            }
        }

        #[test]
        fn subleading_matches_cd(
            s1 in -2.0f64..2.5,
            gap in 0.05f64..1.5,
            w1 in 0.0f64..2.0,
            w2 in 0.0f64..2.0,
            n in 1usize..30,
        ) {
            let spec = JumpWeightSpec::new(s1, s1 + gap, w1, w2).unwrap();
            let table = compute_recurrence(&spec, n + 1).unwrap();
            let cd = hankel_f_cd(&table, n).unwrap();
            let sub = hankel_f_subleading(&table, n).unwrap();
            prop_assert!((cd - sub).abs() < 1e-9, "{} vs {}", cd, sub);
        }
    }
}
