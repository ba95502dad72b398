use harness::{CaseRecord, Relation, Report, CSV_HEADER};

fn sample() -> Report {
    let cases = vec![
        CaseRecord::new("cube", 4, 0.9, "sweep-volume", 0.1, 0.1 + 1e-17, Relation::Le, 1e-12).with_direction(&[0.5, 0.5, 0.5, 0.5]),
        CaseRecord::new("cube", 3, 0.6, "hessian-perimeter-min-eig", 0.49, 0.0, Relation::Gt, 0.0),
        CaseRecord::new("simplex", 3, 0.5, "limit", 1.0 / 3.0, 0.3, Relation::Abs, 1e-12).as_evidence(),
        CaseRecord::new("cube", 3, 0.66, "hessian-perimeter-max-eig", 0.2, 0.0, Relation::Lt, 0.0),
    ];
    Report::assemble("demo", 42, cases)
}

#[test]
fn verdicts_follow_the_relation() {
    assert!(CaseRecord::new("cube", 3, 0.0, "m", 1.0 + 1e-13, 1.0, Relation::Le, 1e-12).pass);
    assert!(!CaseRecord::new("cube", 3, 0.0, "m", 1.0 + 1e-11, 1.0, Relation::Le, 1e-12).pass);
    assert!(CaseRecord::new("cube", 3, 0.0, "m", 0.5, 0.5, Relation::Ge, 0.0).pass);
    assert!(!CaseRecord::new("cube", 3, 0.0, "m", 0.0, 0.0, Relation::Gt, 0.0).pass);
    assert!(CaseRecord::new("cube", 3, 0.0, "m", 1e-20, 2e-20, Relation::Abs, 1e-12).pass);
    assert!(!CaseRecord::new("cube", 3, 0.0, "m", 1e-20, 2e-20, Relation::Rel, 1e-12).pass);
    assert!(!CaseRecord::new("cube", 3, 0.0, "m", f64::NAN, 1.0, Relation::Le, 1.0).pass);
}

#[test]
fn summary_counts_checks_but_not_evidence() {
    let r = sample();
    assert_eq!(r.summary.passed, 2);
    assert_eq!(r.summary.failed, 1);
    assert!((r.summary.max_violation - 0.2).abs() < 1e-15);
    assert!(!r.all_pass());
    assert!(r.is_consistent());
}

#[test]
fn cases_are_sorted() {
    let r = sample();
    let keys: Vec<(String, usize, f64)> = r.cases.iter().map(|c| (c.body.clone(), c.n, c.t)).collect();
    assert_eq!(keys[0], ("cube".to_string(), 3, 0.6));
    assert_eq!(keys[3].0, "simplex");
}

#[test]
fn json_round_trips() {
    let r = sample();
    let s = r.to_json().unwrap();
    let back = Report::from_json(&s).unwrap();
    assert_eq!(back, r);
    assert_eq!(back.cases[0].t.to_bits(), r.cases[0].t.to_bits());
    for key in ["\"suite\"", "\"seed\"", "\"cases\"", "\"summary\"", "\"passed\"", "\"failed\"", "\"max_violation\"", "\"runtime_ms\": null"] {
        assert!(s.contains(key), "{key}");
    }
}

#[test]
fn tampered_verdicts_are_detected() {
    let mut r = sample();
    r.cases[0].pass = !r.cases[0].pass;
    assert!(!r.is_consistent());
}

#[test]
fn csv_layout() {
    let empty = Report::assemble("empty", 42, Vec::new());
    assert_eq!(empty.to_csv().unwrap(), format!("{}\n", CSV_HEADER.join(",")));

    let csv = sample().to_csv().unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 5);
    assert_eq!(lines[0], "suite,body,n,t,a_canonical,method,value,bound,pass");
    assert!(lines.iter().any(|l| l.contains("5.0000000000000000e-1;5.0000000000000000e-1")));
    // seventeen significant digits
    assert!(lines.iter().any(|l| l.contains("3.3333333333333331e-1")));
    assert_eq!(csv, sample().to_csv().unwrap());
}
