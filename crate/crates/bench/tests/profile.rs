use newtonmr_bench::profile::{breakpoints, performance_profile, profile_from_times};
use newtonmr_bench::table::equivalence_table;

mod common;

use common::record;

fn names(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

#[test]
fn faster_method_wins_at_one() {
    let p = profile_from_times(
        names(&["A", "B"]),
        names(&["x"]),
        vec![vec![1.0], vec![2.0]],
        None,
    )
    .unwrap();
    assert_eq!(p.taus, vec![1.0, 2.0]);
    assert_eq!(p.gamma, vec![vec![1.0, 1.0], vec![0.0, 1.0]]);
    assert_eq!(p.gamma_at(1, 1.999), 0.0);
}

#[test]
fn ties_count_for_both() {
    let p = profile_from_times(
        names(&["A", "B"]),
        names(&["x"]),
        vec![vec![3.0], vec![3.0]],
        None,
    )
    .unwrap();
    assert_eq!(p.gamma, vec![vec![1.0], vec![1.0]]);
}

#[test]
fn three_problems_by_hand() {
    // ratios A: 1, 1, 4; B: 2, 1.5, 1
    let times = vec![vec![1.0, 2.0, 8.0], vec![2.0, 3.0, 2.0]];
    let p = profile_from_times(names(&["A", "B"]), names(&["p", "q", "r"]), times, None).unwrap();
    assert_eq!(p.taus, vec![1.0, 1.5, 2.0, 4.0]);
    let third = 1.0 / 3.0;
    assert_eq!(p.gamma[0], vec![2.0 * third, 2.0 * third, 2.0 * third, 1.0]);
    assert_eq!(p.gamma[1], vec![third, 2.0 * third, 1.0, 1.0]);
    for g in &p.gamma {
        assert!(g.windows(2).all(|w| w[1] >= w[0]));
    }
}

#[test]
fn zero_times() {
    let p = profile_from_times(
        names(&["A", "B"]),
        names(&["x", "y"]),
        vec![vec![0.0, 1.0], vec![0.0, 0.0]],
        None,
    )
    .unwrap();
    assert_eq!(p.ratios, vec![vec![1.0, f64::INFINITY], vec![1.0, 1.0]]);
    assert_eq!(breakpoints(&p.ratios), vec![1.0]);
    assert_eq!(p.gamma[0], vec![0.5]);
}

#[test]
fn explicit_grid_and_errors() {
    let p = profile_from_times(
        names(&["A", "B"]),
        names(&["x"]),
        vec![vec![1.0], vec![4.0]],
        Some(&[1.0, 2.0, 8.0]),
    )
    .unwrap();
    assert_eq!(p.gamma[1], vec![0.0, 0.0, 1.0]);
    assert!(profile_from_times(names(&["A"]), names(&["x"]), vec![vec![1.0]], None).is_err());
    assert!(profile_from_times(names(&["A", "B"]), names(&["x"]), vec![vec![1.0]], None).is_err());
}

#[test]
fn restricted_to_commonly_solved() {
    let recs = vec![
        record("p", "A", 1.0, 1.0),
        record("p", "B", 1.0, 3.0),
        record("q", "A", 1.0, 1.0),
        record("q", "B", 2.0, 0.5),
        record("r", "A", 0.0, 2.0),
        record("r", "B", 0.0, 1.0),
    ];
    let p = performance_profile(&recs, 0.1, None).unwrap();
    let t = equivalence_table(&recs, &[0.1]).unwrap();
    assert_eq!(p.problems, t.commonly_solved(0));
    assert_eq!(p.problems, names(&["p", "r"]));
    assert_eq!(p.times, vec![vec![1.0, 2.0], vec![3.0, 1.0]]);
    assert_eq!(p.gamma_at(0, 1.0) + p.gamma_at(1, 1.0), 1.0);
}

#[test]
fn empty_profile_warns() {
    let recs = vec![
        record("p", "A", 1.0, 1.0),
        record("p", "B", 5.0, 1.0),
        record("q", "A", 9.0, 1.0),
        record("q", "B", 1.0, 1.0),
    ];
    let p = performance_profile(&recs, 0.1, None).unwrap();
    assert!(p.problems.is_empty());
    assert!(p.warning.is_some());
    assert_eq!(p.gamma, vec![vec![0.0], vec![0.0]]);
}

#[test]
fn csv_and_script() {
    let p = profile_from_times(
        names(&["P", "T"]),
        names(&["x"]),
        vec![vec![1.0], vec![2.0]],
        None,
    )
    .unwrap();
    let mut buf = Vec::new();
    p.write_csv(&mut buf).unwrap();
    assert_eq!(String::from_utf8(buf).unwrap(), "tau,P,T\n1,1,0\n2,1,1\n");
    let gp = p.gnuplot_script("prof.csv");
    assert!(gp.contains("'prof.csv' using 1:2 with steps title 'P'"));
    assert!(gp.contains("'' using 1:3 with steps title 'T'"));
}
