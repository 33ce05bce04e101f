use cmnim::verifier::{
    golden_tables, run_suite, verify_golden_table, verify_golden_tables, Status, Suite,
};
use cmnim::Position;

#[test]
fn full_suite_passes() {
    let reports = run_suite(Suite::All, 9).unwrap();
    for r in &reports {
        println!("{r}");
    }
    assert!(reports.len() > 30);
    assert!(reports.iter().all(|r| r.passed()));
}

#[test]
fn dropping_a_listed_position_is_caught() {
    let mut t = golden_tables()
        .into_iter()
        .find(|t| t.name == "cookie_monster_3")
        .unwrap();
    let dropped = t.table.entries.remove(3).0;
    let r = verify_golden_table(&t, 9).unwrap();
    assert_eq!(r.status, Status::Fail);
    assert_eq!(r.counterexamples, vec![dropped]);
}

#[test]
fn listing_an_n_position_is_caught() {
    let mut t = golden_tables()
        .into_iter()
        .find(|t| t.name == "wythoff_pairs")
        .unwrap();
    t.table.entries.push((Position::from([2, 3]), None));
    let r = verify_golden_table(&t, 9).unwrap();
    assert_eq!(r.status, Status::Fail);
    assert!(r.counterexamples.contains(&Position::from([2, 3])));
}

#[test]
fn out_of_bound_entry_is_flagged_not_failed() {
    let t = golden_tables()
        .into_iter()
        .find(|t| t.name == "at_most_2")
        .unwrap();
    let r = verify_golden_table(&t, 9).unwrap();
    assert_eq!(r.status, Status::Pass);
    assert!(r.notes.iter().any(|n| n.contains("(2,5,7)")));
}

#[test]
fn combined_report_needs_bound_nine() {
    assert!(verify_golden_tables(8).is_err());
    assert!(verify_golden_tables(9).unwrap().passed());
}

#[test]
fn suite_names_parse() {
    assert_eq!("golden".parse::<Suite>().unwrap(), Suite::Golden);
    assert!("everything".parse::<Suite>().is_err());
}
