mod common;

use liepres::document::{table_from_json, table_to_csv, table_to_json, table_to_latex};

#[test]
fn golden_file_is_a_json_fixed_point() {
    let text = common::read_fixture("g2_golden.json");
    let t = table_from_json(&text).unwrap();
    assert_eq!(t.dim(), 14);
    assert_eq!(table_to_json(&t), text);
}

#[test]
fn csv_lists_all_91_pairs() {
    let csv = table_to_csv(&common::golden_table()).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "i,j,h1,h2,a12,a13,a23,a21,a31,a32,x1,x2,x3,y1,y2,y3"
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 91);
    let x1x2 = rows.iter().find(|r| r.starts_with("x1,x2,")).unwrap();
    assert!(x1x2.ends_with(",0/1,0/1,2/1"), "{x1x2}");
}

#[test]
fn latex_has_table_shape() {
    let tex = table_to_latex(&common::golden_table());
    let x1_row = tex.lines().find(|l| l.starts_with("$x_1$")).unwrap();
    let cells: Vec<&str> = x1_row
        .trim_end_matches(" \\\\ \\hline")
        .split(" & ")
        .collect();
    assert_eq!(cells.len(), 15);
    // columns: label, h1, h2, a12, a13, a23, a21, a31, a32, x1, x2, ...
    assert_eq!(cells[10], "$2y_3$");
    assert_eq!(cells[12], "$2h_1+h_2$");
    assert!(cells[1..9].iter().all(|c| c.is_empty()));
    assert_eq!(tex.lines().filter(|l| l.ends_with("\\hline")).count(), 15);
}

#[test]
fn exports_are_deterministic() {
    let t = common::golden_table();
    assert_eq!(table_to_latex(&t), table_to_latex(&t.clone()));
    assert_eq!(table_to_csv(&t).unwrap(), table_to_csv(&t).unwrap());
}
