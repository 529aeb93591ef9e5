use std::path::Path;

use nofdm_core::berlab::{render, BerPoint, BerSweepResult, Format, StoppingRule};
use nofdm_core::TransformKind;
use proptest::prelude::*;

fn schema() -> serde_json::Value {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas/ber_sweep.schema.json");
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn point() -> impl Strategy<Value = BerPoint> {
    (
        prop_oneof![Just(TransformKind::Frct), Just(TransformKind::Frht)],
        0.01f64..=1.0,
        -5.0f64..30.0,
        0usize..100,
        1u64..10_000_000,
        any::<prop::sample::Index>(),
    )
        .prop_map(|(kind, alpha, ebn0, iters, bits, e)| {
            let errors = e.index(bits as usize + 1) as u64 / 2;
            BerPoint::new(kind, alpha, ebn0, iters, bits, errors)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn csv_round_trip_is_exact(records in prop::collection::vec(point(), 0..20)) {
        let result = BerSweepResult { stopping: None, records };
        let csv = render(&result, Format::Csv).unwrap();
        prop_assert_eq!(BerSweepResult::from_csv(&csv).unwrap(), result);
    }

    #[test]
    fn json_output_validates(records in prop::collection::vec(point(), 0..20), seed in any::<u64>()) {
        let result = BerSweepResult {
            stopping: Some(StoppingRule { max_bits: 100_000, min_errors: 100, min_bits: 0, batch_symbols: 64, seed }),
            records,
        };
        let json = render(&result, Format::Json).unwrap();
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        let validator = jsonschema::validator_for(&schema()).unwrap();
        prop_assert!(validator.is_valid(&value), "{}", json);
        prop_assert_eq!(BerSweepResult::from_json(&json).unwrap(), result);
    }
}

#[test]
fn schema_rejects_malformed_records() {
    let validator = jsonschema::validator_for(&schema()).unwrap();
    let bad = serde_json::json!({"records": [{"kind": "dft", "alpha": 0.8, "ebn0_db": 1, "iterations": 1,
        "bits": 1, "errors": 0, "ber": 0, "ci_lo": 0, "ci_hi": 1}]});
    assert!(!validator.is_valid(&bad));
    assert!(!validator.is_valid(&serde_json::json!({})));
    assert!(validator.is_valid(&serde_json::json!({"records": []})));
}

#[test]
fn files_round_trip_in_both_formats() {
    let dir = tempfile::tempdir().unwrap();
    let result = BerSweepResult {
        stopping: None,
        records: vec![BerPoint::new(TransformKind::Frct, 0.8, 6.0, 20, 1_000_000, 2390)],
    };
    for format in [Format::Csv, Format::Json] {
        let path = dir.path().join(format!("r.{format:?}"));
        nofdm_core::berlab::export_results(&result, &path, format).unwrap();
        assert_eq!(BerSweepResult::import(&path, format).unwrap(), result);
    }
    let err = BerSweepResult::import(&dir.path().join("absent.csv"), Format::Csv).unwrap_err();
    assert!(err.to_string().contains("absent.csv"));
}
