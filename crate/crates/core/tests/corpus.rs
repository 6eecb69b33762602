//! Golden reports for the instance files in `tests/corpus`. Set
//! `CMEASURE_BLESS=1` to rewrite the expected outputs.

use std::fs;
use std::path::{Path, PathBuf};

use cmeasure::dsl::{parse, run, RunConfig};

fn corpus() -> Vec<PathBuf> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/corpus");
    let mut files: Vec<PathBuf> = fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "cm"))
        .collect();
    files.sort();
    files
}

fn report(path: &Path) -> String {
    let text = fs::read_to_string(path).unwrap();
    let program = parse(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    run(&program, &RunConfig::default()).to_json()
}

#[test]
fn corpus_is_large_enough() {
    assert!(corpus().len() >= 30, "only {} corpus files", corpus().len());
}

#[test]
fn reports_are_deterministic() {
    for path in corpus() {
        assert_eq!(report(&path), report(&path), "{}", path.display());
    }
}

#[test]
fn reports_match_expected() {
    let bless = std::env::var_os("CMEASURE_BLESS").is_some();
    let mut mismatched = Vec::new();
    for path in corpus() {
        let got = report(&path);
        let expected_path = path.with_extension("expected.json");
        if bless {
            fs::write(&expected_path, &got).unwrap();
            continue;
        }
        let expected = fs::read_to_string(&expected_path)
            .unwrap_or_else(|_| panic!("missing {}", expected_path.display()));
        if got != expected {
            mismatched.push(path.display().to_string());
        }
    }
    assert!(mismatched.is_empty(), "reports differ from expected: {mismatched:?}");
}

#[test]
fn pretty_print_round_trips() {
    for path in corpus() {
        let program = parse(&fs::read_to_string(&path).unwrap()).unwrap();
        let printed = program.to_string();
        let again = parse(&printed).unwrap_or_else(|e| panic!("{}: {e}\n{printed}", path.display()));
        assert_eq!(program, again, "{}", path.display());
        assert_eq!(printed, again.to_string());
    }
}

fn result(file: &str, line: usize) -> serde_json::Value {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/corpus").join(file);
    let v: serde_json::Value = serde_json::from_str(&report(&path)).unwrap();
    let entry = v["results"].as_array().unwrap().iter().find(|e| e["line"] == line).cloned();
    let entry = entry.unwrap_or_else(|| panic!("{file}: nothing on line {line}"));
    entry.get("result").cloned().unwrap_or_else(|| entry["error"].clone())
}

// Hand-computed values for a sample of the corpus, so a wrong blessing
// does not go unnoticed.
#[test]
fn pinned_values() {
    use serde_json::json;
    let cases: &[(&str, usize, &str, serde_json::Value)] = &[
        ("01_cotransitive_compare.cm", 2, "", json!("below_hi")),
        ("01_cotransitive_compare.cm", 3, "", json!("above_lo")),
        ("02_pair.cm", 1, "", json!([1, 1])),
        ("02_pair.cm", 2, "", json!([1, 2])),
        ("02_pair.cm", 3, "", json!([2, 1])),
        ("03_sum_with_tail.cm", 1, "", json!({"lo": "3/4", "hi": "3/4"})),
        ("03_sum_with_tail.cm", 2, "", json!({"lo": "7/8", "hi": "9/8"})),
        ("04_cc_join.cm", 2, "/pattern", json!("[1,1,0]")),
        ("05_cc_meet.cm", 2, "/pattern", json!("[0,0,0]")),
        ("05_cc_meet.cm", 3, "/pattern", json!("[0,1,0]")),
        ("06_cc_not_minus.cm", 2, "/pattern", json!("[0,1,1]")),
        ("06_cc_not_minus.cm", 4, "/pattern", json!("[1,0,0]")),
        ("07_chi.cm", 2, "", json!({"p": 1, "q": 0, "r": 0})),
        ("07_chi.cm", 3, "", json!({})),
        ("08_delta.cm", 2, "/pattern", json!("[1,1,0]")),
        ("09_bp_apply.cm", 2, "", json!({"p": 0})),
        ("09_bp_apply.cm", 3, "", json!({"q": 1})),
        ("10_rp_apply.cm", 2, "/values", json!({"p": "5/1"})),
        ("10_rp_apply.cm", 4, "/values", json!({"p": "1/1", "q": "1/2"})),
        ("11_family.cm", 2, "/union", json!(["p", "q"])),
        ("11_family.cm", 3, "/intersection", json!(["q"])),
        ("14_dirac.cm", 3, "/mu", json!("1/1")),
        ("14_dirac.cm", 4, "/mu", json!("0/1")),
        ("16_counting.cm", 3, "/mu", json!("2/1")),
        ("16_counting.cm", 4, "/mu", json!("0/1")),
        ("21_pms4.cm", 4, "/cases/0/witness", json!("p")),
        ("21_pms4.cm", 5, "/cases/0/limit", json!("0/1")),
        ("21_pms4.cm", 6, "/cases/0/limit", json!("2/1")),
        ("22_index_leq.cm", 4, "", json!(true)),
        ("22_index_leq.cm", 5, "", json!(false)),
        ("23_bottom_on.cm", 4, "", json!({"index": "[0,0,0]", "mu": "0/1"})),
        ("24_eval_simple.cm", 3, "", json!({"p": "2/1", "q": "5/1", "r": "3/1"})),
        ("25_simple_eq.cm", 4, "", json!(true)),
        ("25_simple_eq.cm", 5, "", json!(true)),
        ("25_simple_eq.cm", 6, "", json!(false)),
        ("27_integrate_simple.cm", 3, "", json!("2/1")),
        ("27_integrate_simple.cm", 4, "", json!("7/3")),
        ("28_phin.cm", 3, "/measure", json!("0/1")),
        ("28_phin.cm", 4, "/index", json!("[1,1,0]")),
        ("36_l1_integral.cm", 9, "", json!({"lo": "3/4", "hi": "1/1"})),
        ("38_lebesgue.cm", 10, "/integral", json!("31/32")),
        ("39_density.cm", 7, "/n", json!(5)),
        ("39_density.cm", 8, "/n", json!(0)),
        ("40_cauchy.cm", 9, "/integral", json!("1/1")),
    ];
    for (file, line, pointer, want) in cases {
        let got = result(file, *line);
        let got = got.pointer(pointer).unwrap_or_else(|| panic!("{file}:{line} has no {pointer}: {got}"));
        assert_eq!(got, want, "{file}:{line}{pointer}");
    }
}
