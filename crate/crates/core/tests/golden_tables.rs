use ppcodes::fixtures::{self, compare, golden_examples};
use ppcodes::pipeline::{run, InputKind};
use ppcodes::toric::ExponentMatrix;

#[test]
fn every_published_cell_matches() {
    let report = fixtures::check_all().unwrap();
    assert!(report.cells_checked > 150);
    assert!(report.passed(), "{:#?}", report.mismatches);
}

#[test]
fn corrupted_matrix_entry_is_located() {
    let golden = golden_examples().into_iter().find(|g| g.name == "example3").unwrap();
    let mut a = fixtures::example3_matrix();
    a.set_entry(1, 1, 3);
    let mut config = golden.config();
    config.input = InputKind::Matrix(a);
    let r = compare(&golden, &run(&config).unwrap());
    assert!(!r.passed());
    let first = &r.mismatches[0];
    assert_eq!(first.example, "example3");
    assert!(!first.column.is_empty());
    assert_ne!(first.expected, first.got);
}

#[test]
fn rows_past_the_regularity_index_are_trivial() {
    let golden = golden_examples().into_iter().find(|g| g.name == "example2").unwrap();
    let report = run(&golden.config()).unwrap();
    for d in [11u32, 12] {
        let row = &report.table.rows[d as usize];
        assert_eq!(row.h_x, Some(512));
        assert_eq!(row.delta_lower, Some(1));
        assert_eq!(row.singleton, Some(1));
    }
}

#[test]
fn graph_and_matrix_inputs_agree() {
    let golden = golden_examples().into_iter().find(|g| g.name == "example1").unwrap();
    let mut config = golden.config();
    config.d_max = Some(4);
    let via_graph = run(&config).unwrap();
    config.input = InputKind::Matrix(ExponentMatrix::new(fixtures::example1_matrix().rows().to_vec()).unwrap());
    let via_matrix = run(&config).unwrap();
    assert_eq!(via_graph.table, via_matrix.table);
    assert!(via_matrix.graph.is_none());
}
