use proptest::prelude::*;
use sparsefrac::io::{self, GridFunctionJson};
use sparsefrac::report::{self, ReportRow};
use sparsefrac_core::{GridFunction, Mesh, RootBox};

fn finite() -> impl Strategy<Value = f64> {
    prop_oneof![any::<f64>().prop_filter("finite", |x| x.is_finite()), Just(0.0), Just(-0.0), Just(f64::MIN_POSITIVE)]
}

fn grid_function() -> impl Strategy<Value = GridFunction> {
    (1usize..=2, 0u32..=4, -5.0..5.0f64, -5.0..5.0f64, 1e-3..1e3f64).prop_flat_map(|(n, k, a, b, side)| {
        let mesh = Mesh::new(RootBox::new(&[a, b][..n], side).unwrap(), k).unwrap();
        prop::collection::vec(finite(), mesh.len()).prop_map(move |v| GridFunction::new(mesh, v).unwrap())
    })
}

fn row() -> impl Strategy<Value = ReportRow> {
    (finite(), finite(), proptest::option::of(-3.0..3.0f64), any::<bool>(), 0usize..5).prop_map(|(lhs, c, gamma, pass, v)| {
        ReportRow {
            case_id: format!("case|{v}"),
            theorem: "strong-fractional".into(),
            n: 1,
            alpha: 0.25,
            p: 4.0 / 3.0,
            q: 2.0,
            gamma,
            x0: gamma.map(|_| vec![1.0 / 3.0]),
            depth: 10,
            k_char: 6,
            characteristic: 1.0 + c.abs().min(1e300),
            lhs,
            rhs_without_constant: c,
            measured_constant: lhs / 3.0,
            threshold: 0.1,
            violations: v,
            pass,
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn grid_function_formats_round_trip(f in grid_function()) {
        let mut text = Vec::new();
        io::write_grid_function(&mut text, &f).unwrap();
        prop_assert_eq!(&io::read_grid_function(text.as_slice()).unwrap(), &f);
        let mut bin = Vec::new();
        io::write_grid_function_binary(&mut bin, &f).unwrap();
        prop_assert_eq!(&io::read_grid_function_binary(bin.as_slice()).unwrap(), &f);
        let json = serde_json::to_string(&GridFunctionJson::from_function(&f)).unwrap();
        let back: GridFunctionJson = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(&back.to_function().unwrap(), &f);
    }

    #[test]
    fn report_rows_round_trip(rows in prop::collection::vec(row(), 0..6)) {
        let mut csv = Vec::new();
        report::write_csv(&mut csv, &rows).unwrap();
        prop_assert_eq!(&report::read_csv(csv.as_slice()).unwrap(), &rows);
        let mut json = Vec::new();
        report::write_json(&mut json, &rows).unwrap();
        prop_assert_eq!(&report::read_json(json.as_slice()).unwrap(), &rows);
    }
}

#[test]
fn truncated_binary_is_rejected() {
    let f = GridFunction::constant(Mesh::unit(1, 3).unwrap(), 2.5).unwrap();
    let mut bin = Vec::new();
    io::write_grid_function_binary(&mut bin, &f).unwrap();
    bin.truncate(bin.len() - 3);
    assert!(io::read_grid_function_binary(bin.as_slice()).is_err());
}
