use std::io::Write;

use censcov::io::{
    parse_dataset_csv, parse_dataset_reader, write_dataset, write_dataset_csv, Columns,
};
use censcov::CliError;
use censcov_core::CensoredDataset;
use proptest::prelude::*;

fn cols() -> Columns {
    Columns::new("ldl", "age", "event")
}

fn parse(text: &str) -> Result<CensoredDataset, CliError> {
    parse_dataset_reader(text.as_bytes(), &cols())
}

#[test]
fn three_rows() {
    let ds = parse("id,ldl,age,event\n1,4.1,60,1\n2,4.5,71.5,0\n3,3.9,55,1\n").unwrap();
    assert_eq!((ds.n(), ds.m()), (3, 2));
    assert_eq!(ds.records()[1].v, 71.5);
    assert_eq!(ds.records()[1].delta, 0);
}

#[test]
fn bad_status_names_the_row() {
    let text = "ldl,age,event\n1,2,1\n1,3,0\n2,4,1\n2,5,2\n";
    match parse(text) {
        Err(CliError::Parse { row, line, reason }) => {
            assert_eq!((row, line), (4, 5));
            assert!(reason.contains("'2'"), "{reason}");
        }
        other => panic!("expected a parse error, got {other:?}"),
    }
    let e = parse(text).unwrap_err();
    assert!(e.to_string().contains("row 4"), "{e}");
    assert_eq!(e.exit_code(), 2);
}

#[test]
fn non_numeric_and_non_finite_cells() {
    assert!(matches!(
        parse("ldl,age,event\nx,1,1\n"),
        Err(CliError::Parse { row: 1, .. })
    ));
    assert!(matches!(
        parse("ldl,age,event\n1,1,1\n1,inf,1\n"),
        Err(CliError::Parse { row: 2, .. })
    ));
    assert!(matches!(
        parse("ldl,age,event\n1,1,\n"),
        Err(CliError::Parse { row: 1, .. })
    ));
}

#[test]
fn schema_errors() {
    match parse("ldl,years,event\n1,2,1\n") {
        Err(CliError::Schema(msg)) => assert!(msg.contains("'age'"), "{msg}"),
        other => panic!("{other:?}"),
    }
    assert!(matches!(parse(""), Err(CliError::Schema(_))));
    assert!(matches!(parse("ldl,age,event\n"), Err(CliError::Schema(_))));
}

#[test]
fn missing_file_is_an_io_error() {
    let e = parse_dataset_csv("/nonexistent/data.csv".as_ref(), &cols()).unwrap_err();
    assert!(matches!(e, CliError::Io { .. }));
    assert_eq!(e.exit_code(), 2);
}

#[test]
fn file_round_trip() {
    let ds =
        CensoredDataset::from_columns(&[0.1, 1.0 / 3.0, -2e-300], &[1e10, 0.7, 3.25], &[1, 0, 1])
            .unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d.csv");
    write_dataset_csv(&path, &ds, &cols()).unwrap();
    let back = parse_dataset_csv(&path, &cols()).unwrap();
    assert_eq!(back, ds);

    // Column order and extra columns in the input do not matter.
    let mut f = std::fs::File::create(&path).unwrap();
    writeln!(f, "event,extra,age,ldl\n1,x,2,3").unwrap();
    drop(f);
    let ds = parse_dataset_csv(&path, &cols()).unwrap();
    assert_eq!((ds.records()[0].y, ds.records()[0].v), (3.0, 2.0));
}

proptest! {
    #[test]
    fn write_then_read_is_bit_exact(
        rows in proptest::collection::vec((-1e6f64..1e6, -1e3f64..1e3, 0u8..2), 1..50),
    ) {
        let ys: Vec<f64> = rows.iter().map(|r| r.0).collect();
        let vs: Vec<f64> = rows.iter().map(|r| r.1).collect();
        let ds: Vec<u8> = rows.iter().map(|r| r.2).collect();
        let data = CensoredDataset::from_columns(&ys, &vs, &ds).unwrap();
        let mut buf = Vec::new();
        write_dataset(&mut buf, &data, &cols()).unwrap();
        let back = parse_dataset_reader(buf.as_slice(), &cols()).unwrap();
        for (a, b) in data.records().iter().zip(back.records()) {
            prop_assert_eq!(a.y.to_bits(), b.y.to_bits());
            prop_assert_eq!(a.v.to_bits(), b.v.to_bits());
            prop_assert_eq!(a.delta, b.delta);
        }
    }
}
