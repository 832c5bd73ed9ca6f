use std::path::Path;

use newtonmr_bench::records::{read_records, write_records};
use newtonmr_bench::runner::run_experiment;
use newtonmr_bench::suite::find_problem;
use newtonmr_bench::{default_configs, BenchRecord};

#[test]
fn round_trip_with_non_finite_values() {
    let problems = vec![
        find_problem("unbounded-cubic-1").unwrap(),
        find_problem("quad-face-6").unwrap(),
    ];
    let runs = run_experiment(&problems, &default_configs(), 2).unwrap();
    let mut records: Vec<BenchRecord> = runs.iter().map(BenchRecord::from).collect();
    records[0].f = f64::NEG_INFINITY;
    records[1].grad_norm = f64::NAN;
    let mut buf = Vec::new();
    write_records(&mut buf, &records).unwrap();
    let text = String::from_utf8(buf.clone()).unwrap();
    assert_eq!(text.lines().count(), 4);
    assert!(text.contains("\"f\":\"-inf\""));
    assert!(text.contains("\"grad_norm\":\"nan\""));
    assert!(text.lines().all(|l| l.contains("\"version\":1")));
    let back = read_records(&buf[..], Path::new("mem")).unwrap();
    assert_eq!(back.len(), 4);
    assert_eq!(back[0].f, f64::NEG_INFINITY);
    assert!(back[1].grad_norm.is_nan());
    assert_eq!(back[2..], records[2..]);
}

#[test]
fn floats_survive_exactly() {
    let run = &run_experiment(
        &[find_problem("quad-vertex-4").unwrap()],
        &default_configs()[..1],
        1,
    )
    .unwrap()[0];
    let mut rng = 0x9e3779b97f4a7c15u64;
    let mut records = Vec::new();
    for _ in 0..2000 {
        rng ^= rng << 13;
        rng ^= rng >> 7;
        rng ^= rng << 17;
        let mut r = BenchRecord::from(run);
        r.f = f64::from_bits(rng >> 2) - 1.0;
        r.wall_seconds = (rng >> 11) as f64 / (1u64 << 53) as f64 * 1e-3;
        records.push(r);
    }
    let mut buf = Vec::new();
    write_records(&mut buf, &records).unwrap();
    let back = read_records(&buf[..], Path::new("mem")).unwrap();
    for (a, b) in records.iter().zip(&back) {
        assert_eq!(a.f.to_bits(), b.f.to_bits());
        assert_eq!(a.wall_seconds.to_bits(), b.wall_seconds.to_bits());
    }
}

#[test]
fn fields_are_named() {
    let run = &run_experiment(
        &[find_problem("quad-interior-10").unwrap()],
        &default_configs()[..1],
        1,
    )
    .unwrap()[0];
    let line = serde_json::to_value(BenchRecord::from(run)).unwrap();
    for key in [
        "problem",
        "config_label",
        "status",
        "f",
        "grad_norm",
        "iterations",
        "n_f",
        "n_g",
        "n_hv",
        "wall_seconds",
        "version",
    ] {
        assert!(line.get(key).is_some(), "{key}");
    }
    assert_eq!(line["status"], "converged");
}

#[test]
fn bad_lines_rejected() {
    let good = r#"{"version":1,"problem":"a","config_label":"P","algorithm":"p","status":"converged","f":1.0,"grad_norm":0.0,"iterations":1,"n_f":1,"n_g":1,"n_hv":0,"wall_seconds":0.1}"#;
    assert_eq!(
        read_records(format!("{good}\n\n{good}\n").as_bytes(), Path::new("m"))
            .unwrap()
            .len(),
        2
    );
    let v2 = good.replace("\"version\":1", "\"version\":2");
    assert!(read_records(v2.as_bytes(), Path::new("m")).is_err());
    let bad_f = good.replace("\"f\":1.0", "\"f\":\"big\"");
    assert!(read_records(bad_f.as_bytes(), Path::new("m")).is_err());
    assert!(read_records("{not json".as_bytes(), Path::new("m")).is_err());
}
