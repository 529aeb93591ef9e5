use nofdm_web::{ber_curve_json, correlation_row_json, psd_json};
use serde_json::Value;

#[test]
fn correlation_row_is_unit_at_alpha_one() {
    let v: Value = serde_json::from_str(&correlation_row_json("frct", 16, 1.0, 4).unwrap()).unwrap();
    let row = v["abs_c"].as_array().unwrap();
    assert_eq!(row.len(), 16);
    assert!((row[4].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!(v["ici_power"].as_f64().unwrap() < 1e-20);
    assert!(correlation_row_json("dft", 16, 1.0, 4).is_err());
    assert!(correlation_row_json("frct", 16, 1.5, 4).is_err());
}

#[test]
fn psd_edge_tracks_alpha() {
    let v: Value = serde_json::from_str(&psd_json("frct", 0.8, 1, 0).unwrap()).unwrap();
    let edge = v["edge_hz"].as_f64().unwrap();
    assert!((edge - 4.0e9).abs() < 0.25e9, "{edge}");
}

#[test]
fn ber_curve_has_one_point_per_two_db() {
    let v: Value = serde_json::from_str(&ber_curve_json("frct", 1.0, 0, 4.0, 1).unwrap()).unwrap();
    let pts = v.as_array().unwrap();
    assert_eq!(pts.len(), 3);
    for p in pts {
        let (ber, theory) = (p["ber"].as_f64().unwrap(), p["orthogonal"].as_f64().unwrap());
        assert!((ber / theory - 1.0).abs() < 0.4, "{p}");
    }
}
