use bregman_cli::{read_csv, write_csv, CsvSchema};
use bregman_core::{FeatureVector, LabeledDataset};
use proptest::prelude::*;

fn dataset(rows: Vec<(Vec<f64>, u8)>) -> LabeledDataset {
    let (v, l): (Vec<_>, Vec<_>) = rows
        .into_iter()
        .map(|(x, c)| (FeatureVector::new(x).unwrap(), format!("c{c}")))
        .unzip();
    LabeledDataset::new(v, l, "gen").unwrap()
}

fn finite() -> impl Strategy<Value = f64> {
    prop::num::f64::NORMAL | prop::num::f64::SUBNORMAL | prop::num::f64::ZERO
}

proptest! {
    #[test]
    fn csv_round_trip_is_exact(
        dim in 1usize..6,
        rows in prop::collection::vec((prop::collection::vec(finite(), 6), 0u8..4), 1..20),
    ) {
        let d = dataset(rows.into_iter().map(|(mut v, c)| { v.truncate(dim); (v, c) }).collect());
        let mut buf = Vec::new();
        write_csv(&d, &mut buf).unwrap();
        let back = read_csv(buf.as_slice(), &CsvSchema::default(), "gen").unwrap();
        prop_assert_eq!(back.labels(), d.labels());
        for (a, b) in back.vectors().iter().zip(d.vectors()) {
            for (x, y) in a.iter().zip(b.iter()) {
                prop_assert_eq!(x.to_bits(), y.to_bits());
            }
        }
    }

    #[test]
    fn scaling_composes_up_to_rounding(
        xs in prop::collection::vec(-1e6f64..1e6, 1..8),
        a in 1e-3f64..1e3,
        b in 1e-3f64..1e3,
    ) {
        let d = dataset(vec![(xs, 0)]);
        let twice = d.scale_features(a).unwrap().scale_features(b).unwrap();
        let once = d.scale_features(a * b).unwrap();
        for (p, q) in twice.vectors()[0].iter().zip(once.vectors()[0].iter()) {
            // (x·a)·b and x·(a·b) round three times between them, so they can
            // differ by 2 ulp (relative 2ε), not 1.
            prop_assert!((p - q).abs() <= 2.0 * f64::EPSILON * q.abs(), "{} vs {}", p, q);
        }
        prop_assert!((twice.applied_scale() - a * b).abs() <= a * b * f64::EPSILON);
    }
}

#[test]
fn written_features_carry_17_significant_digits() {
    let d = dataset(vec![(vec![0.1, 1.0 / 3.0], 1)]);
    let mut buf = Vec::new();
    write_csv(&d, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert_eq!(
        text,
        "f0,f1,label\n1.0000000000000001e-1,3.3333333333333331e-1,c1\n"
    );
}
