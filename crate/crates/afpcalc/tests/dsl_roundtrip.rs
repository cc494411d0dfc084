//! Corpus-driven checks for the text format: every valid document is in
//! canonical form (parse then print reproduces the file byte for byte) and
//! yields a well-formed problem; every `invalid-*` document is rejected with
//! a diagnostic.

use std::fs;
use std::path::PathBuf;

use afpcalc::dsl::{parse_problem, print_problem};
use afpcalc::engine::compute;

fn corpus_files() -> Vec<PathBuf> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/corpus");
    let mut files: Vec<PathBuf> = fs::read_dir(&dir)
        .expect("corpus directory")
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "afp"))
        .collect();
    files.sort();
    files
}

fn is_invalid(path: &PathBuf) -> bool {
    path.file_name()
        .unwrap()
        .to_str()
        .unwrap()
        .starts_with("invalid-")
}

#[test]
fn corpus_has_enough_valid_documents() {
    let valid = corpus_files().iter().filter(|p| !is_invalid(p)).count();
    assert!(valid >= 15, "only {valid} valid corpus documents");
}

#[test]
fn valid_documents_roundtrip_byte_identically() {
    for path in corpus_files().iter().filter(|p| !is_invalid(p)) {
        let text = fs::read_to_string(path).unwrap();
        let doc = parse_problem(&text)
            .unwrap_or_else(|e| panic!("{}: parse failed: {:?}", path.display(), e));
        let printed = print_problem(&doc);
        assert_eq!(printed, text, "{} is not in canonical form", path.display());

        // A second pass through parse/print must be a fixed point.
        let again = print_problem(&parse_problem(&printed).unwrap());
        assert_eq!(again, printed, "{} printing is unstable", path.display());
    }
}

#[test]
fn valid_documents_validate_and_compute() {
    for path in corpus_files().iter().filter(|p| !is_invalid(p)) {
        let text = fs::read_to_string(path).unwrap();
        let problem = parse_problem(&text)
            .unwrap()
            .to_problem()
            .unwrap_or_else(|e| panic!("{}: not a problem: {:?}", path.display(), e));
        assert!(
            problem.validate().is_empty(),
            "{} fails validation",
            path.display()
        );

        // Computation must be deterministic document by document.
        let first = afpcalc::dsl::result_to_json(&compute(&problem));
        let second = afpcalc::dsl::result_to_json(&compute(&problem));
        assert_eq!(first, second, "{} compute is unstable", path.display());
    }
}

#[test]
fn invalid_documents_are_rejected() {
    for path in corpus_files().iter().filter(|p| is_invalid(p)) {
        let text = fs::read_to_string(path).unwrap();
        let rejected = match parse_problem(&text) {
            Err(_) => true,
            Ok(doc) => match doc.to_problem() {
                Err(_) => true,
                Ok(problem) => !problem.validate().is_empty(),
            },
        };
        assert!(rejected, "{} was accepted", path.display());
    }
}

#[test]
fn decimal_weight_diagnostic_points_at_the_literal() {
    let text = fs::read_to_string(
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/corpus/invalid-decimal.afp"),
    )
    .unwrap();
    let errs = parse_problem(&text).unwrap_err();
    assert_eq!(errs.len(), 1);
    assert!(errs[0].message.contains("rationals must be p/q"));
    assert_eq!(errs[0].line, 6);
}

#[test]
fn missing_row_diagnostic_names_the_summand() {
    let text = fs::read_to_string(
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/corpus/invalid-missing-row.afp"),
    )
    .unwrap();
    let errs = parse_problem(&text).unwrap().to_problem().unwrap_err();
    assert!(errs.iter().any(|d| d.message.contains("d1")), "{errs:?}");
}
