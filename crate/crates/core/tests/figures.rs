mod common;

use common::{check_figure, FIGURES};

#[test]
fn figure_pairs_match() {
    let mut failures = Vec::new();
    for &(name, system, op) in FIGURES {
        if let Err(e) = check_figure(name, system, op) {
            failures.push(format!("{name}: {e}"));
        }
    }
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}

#[test]
fn every_fixture_is_listed() {
    let dir = common::fixture("figures");
    let mut stems: Vec<String> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .filter_map(|n| n.strip_suffix(".before.ndp").map(str::to_owned))
        .collect();
    stems.sort();
    let mut listed: Vec<String> = FIGURES.iter().map(|(n, _, _)| n.to_string()).collect();
    listed.sort();
    assert_eq!(stems, listed);
}

#[test]
fn pairs_differ() {
    for &(name, _, _) in FIGURES {
        let before = common::load(&format!("figures/{name}.before.ndp"));
        let after = common::load(&format!("figures/{name}.after.ndp"));
        assert!(!before.alpha_eq(&after), "{name}");
    }
}
