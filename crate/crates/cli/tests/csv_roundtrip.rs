use polycoreset::{Label, LabeledPointSet, PointSet};
use polycoreset_cli::io::{parse_labeled, parse_points, write_labeled, write_points};
use proptest::prelude::*;

fn finite() -> impl Strategy<Value = f64> {
    prop_oneof![
        any::<f64>().prop_filter("finite", |v| v.is_finite()),
        -1e3..1e3f64,
        Just(0.0),
        Just(-0.0),
        Just(f64::MIN_POSITIVE),
    ]
}

fn rows() -> impl Strategy<Value = Vec<Vec<f64>>> {
    (1usize..=6)
        .prop_flat_map(|d| prop::collection::vec(prop::collection::vec(finite(), d), 1..=12))
}

proptest! {
    #[test]
    fn points_round_trip_bit_exact(rows in rows()) {
        let points = PointSet::new(rows.clone()).unwrap();
        let mut buf = Vec::new();
        write_points(&mut buf, &points).unwrap();
        let back = parse_points(buf.as_slice(), "mem").unwrap();
        for (a, b) in back.to_rows().iter().flatten().zip(rows.iter().flatten()) {
            prop_assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn labeled_round_trip(rows in rows(), signs in prop::collection::vec(any::<bool>(), 12)) {
        let labels: Vec<Label> = signs[..rows.len()]
            .iter()
            .map(|&s| if s { Label::Positive } else { Label::Negative })
            .collect();
        let labeled = LabeledPointSet::new(PointSet::new(rows).unwrap(), labels).unwrap();
        let mut buf = Vec::new();
        write_labeled(&mut buf, &labeled).unwrap();
        let back = parse_labeled(buf.as_slice(), "mem").unwrap();
        prop_assert_eq!(back, labeled);
    }
}
