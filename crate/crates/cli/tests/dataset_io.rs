//! CSV round trips for tabular data sets.

use proptest::prelude::*;
use sparseperm_cli::dataset::{load_csv, parse_csv, write_csv, TabularDataset};
use sparseperm_cli::CliError;

fn table() -> impl Strategy<Value = TabularDataset> {
    (1usize..5, 0usize..8, any::<bool>()).prop_flat_map(|(cols, rows, with_block)| {
        let values = prop::collection::vec(
            prop::collection::vec(
                prop_oneof![
                    any::<f64>().prop_filter("finite", |v| v.is_finite()),
                    -1e3..1e3f64,
                    Just(0.0),
                    Just(-0.0),
                    Just(f64::MIN_POSITIVE),
                ],
                cols,
            ),
            rows,
        );
        let labels = prop::collection::vec("[a-z]{1,3}", rows);
        (values, labels).prop_map(move |(rows, labels)| {
            let mut header: Vec<String> = (0..cols).map(|j| format!("c{j}")).collect();
            let block_index = with_block.then(|| {
                header.insert(1.min(cols), "key".into());
                1.min(cols)
            });
            TabularDataset {
                header,
                rows,
                block_index,
                blocks: if with_block { labels } else { Vec::new() },
            }
        })
    })
}

proptest! {
    #[test]
    fn write_then_load_is_identity(data in table()) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        write_csv(&data, &path).unwrap();
        let block = data.block_index.map(|i| data.header[i].clone());
        let back = load_csv(&path, block.as_deref()).unwrap();
        prop_assert_eq!(back.header, data.header);
        prop_assert_eq!(back.block_index, data.block_index);
        prop_assert_eq!(back.blocks, data.blocks);
        prop_assert_eq!(back.rows.len(), data.rows.len());
        for (a, b) in back.rows.iter().zip(&data.rows) {
            let bits = |r: &Vec<f64>| r.iter().map(|v| v.to_bits()).collect::<Vec<_>>();
            prop_assert_eq!(bits(a), bits(b));
        }
    }
}

#[test]
fn scientific_notation() {
    let d = parse_csv("a\n1e-3\n2.5E2\n".as_bytes(), None).unwrap();
    assert_eq!(d.column("a").unwrap(), vec![0.001, 250.0]);
}

#[test]
fn ragged_rows_name_the_row() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.csv");
    std::fs::write(&path, "a,b\n1,2\n3,4\n5,6,7\n").unwrap();
    let err = load_csv(&path, None).unwrap_err();
    let msg = err.to_string();
    assert!(matches!(err, CliError::Io { .. }));
    assert!(msg.contains("row 4") && msg.contains("r.csv"), "{msg}");
}

#[test]
fn text_cells_only_in_the_block_column() {
    let text = "id,v\nnorth,1\nsouth,2\n";
    assert!(parse_csv(text.as_bytes(), Some("id")).is_ok());
    let err = parse_csv(text.as_bytes(), None).unwrap_err();
    assert!(err.to_string().contains("row 2"), "{err}");
    assert!(matches!(
        parse_csv(text.as_bytes(), Some("zone")),
        Err(CliError::Config(_))
    ));
}
