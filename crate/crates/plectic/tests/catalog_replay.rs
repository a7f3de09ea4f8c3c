//! Full catalog replay: every embedded example re-verifies.

use plectic::catalog;

#[test]
fn full_catalog_replay_is_green() {
    let report = catalog::replay(None).expect("catalog data loads");
    let failures: Vec<_> = report.checks.iter().filter(|c| !c.passed).collect();
    for f in &failures {
        eprintln!("FAIL {} {:?}", f.name, f.witness);
    }
    assert!(failures.is_empty(), "{} failing checks", failures.len());
}
