use proptest::prelude::*;
use sparsefrac_core::orlicz::{generalized_holder_check, norm_sandwich_check, DiscreteMeasure, HOLDER_CONSTANT};
use sparsefrac_core::{GridFunction, Mesh, UnitBox, YoungFunction};

fn measure() -> impl Strategy<Value = DiscreteMeasure> {
    (1usize..12).prop_flat_map(|m| {
        (prop::collection::vec(-20.0..20.0f64, m), prop::collection::vec(0.01..5.0f64, m))
            .prop_map(|(v, w)| DiscreteMeasure::new(v, w).unwrap())
    })
}

fn nonzero(m: &DiscreteMeasure) -> bool {
    m.max_abs() > 1e-9
}

proptest! {
    #[test]
    fn power_luxemburg_is_p_average(m in measure(), p in 1.0..6.0f64) {
        prop_assume!(nonzero(&m));
        let lux = m.luxemburg(YoungFunction::Power(p));
        prop_assert!((lux / m.lp_average(p) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn amemiya_sandwich(m in measure(), which in 0usize..3) {
        prop_assume!(nonzero(&m));
        let phi = [YoungFunction::LLog, YoungFunction::Expm1, YoungFunction::Power(2.5)][which];
        let lux = m.luxemburg(phi);
        let am = m.amemiya(phi);
        prop_assert!(lux <= am * (1.0 + 1e-9), "lux {lux} amemiya {am}");
        prop_assert!(am <= 2.0 * lux * (1.0 + 1e-9), "lux {lux} amemiya {am}");
    }

    #[test]
    fn one_norm_below_llog(m in measure()) {
        prop_assume!(nonzero(&m));
        prop_assert!(m.lp_average(1.0) <= m.luxemburg(YoungFunction::LLog) * (1.0 + 1e-12));
    }
}

fn grid(values: Vec<f64>) -> GridFunction {
    GridFunction::new(Mesh::unit(1, 4).unwrap(), values).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn generalized_holder(
        f in prop::collection::vec(-10.0..10.0f64, 16),
        g in prop::collection::vec(-3.0..3.0f64, 16),
        s in prop::collection::vec(0.1..4.0f64, 16),
        lo in 0.0..0.5f64,
        len in 0.1..0.5f64,
    ) {
        let region = UnitBox::new(&[lo], &[lo + len]);
        let sigma = grid(s);
        let (lhs, rhs) = generalized_holder_check(&grid(f), &grid(g), &region, Some(&sigma)).unwrap();
        prop_assert!(lhs <= rhs * (1.0 + 1e-12) + 1e-300, "lhs {lhs} rhs {rhs}");
        prop_assert_eq!(HOLDER_CONSTANT, 2.0);
    }

    #[test]
    fn llog_sits_between_one_and_p(f in prop::collection::vec(0.0..10.0f64, 16), p in 1.05..4.0f64) {
        prop_assume!(f.iter().any(|&x| x > 1e-6));
        let (one, lux, _) = norm_sandwich_check(&grid(f), &UnitBox::root(1), None, p).unwrap();
        prop_assert!(one <= lux * (1.0 + 1e-12));
    }
}
