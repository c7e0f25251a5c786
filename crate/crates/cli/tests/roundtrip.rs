use proptest::prelude::*;
use snf_cli::input::{parse, parse_str, InputDocument, StructureSpec};
use snf_cli::json;

fn finite() -> impl Strategy<Value = f64> {
    prop_oneof![
        any::<f64>().prop_filter("finite", |v| v.is_finite()),
        -10.0..10.0f64,
        Just(0.0),
        Just(-0.0),
    ]
}

fn document() -> impl Strategy<Value = InputDocument> {
    (1usize..4, 1usize..4, 1usize..4).prop_flat_map(|(rows, cols, len)| {
        let entries = prop::collection::vec(
            prop::collection::vec(prop::collection::vec(finite(), 1..=len), cols),
            rows,
        );
        let structure = prop_oneof![
            Just(None),
            Just(Some(StructureSpec::Named("support".into()))),
            Just(Some(StructureSpec::Named("degree".into()))),
        ];
        (entries, structure).prop_map(move |(entries, structure)| InputDocument {
            rows,
            cols,
            entries,
            structure,
        })
    })
}

proptest! {
    #[test]
    fn serialize_then_parse_is_bit_exact(doc in document()) {
        let text = json::to_string(&doc);
        let back = parse_str(&text).unwrap();
        prop_assert_eq!(back.rows, doc.rows);
        prop_assert_eq!(&back.structure, &doc.structure);
        for (r0, r1) in doc.entries.iter().zip(&back.entries) {
            for (c0, c1) in r0.iter().zip(r1) {
                let b0: Vec<u64> = c0.iter().map(|v| v.to_bits()).collect();
                let b1: Vec<u64> = c1.iter().map(|v| v.to_bits()).collect();
                prop_assert_eq!(b0, b1);
            }
        }
    }
}

#[test]
fn example_fixture_parses_with_degree_three() {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/fixture_ex1.json");
    let (doc, _) = parse(&path).unwrap();
    let a = doc.matpoly().unwrap();
    assert_eq!((a.rows(), a.cols(), a.degree_bound()), (4, 4, 3));
    assert_eq!(a.coeff(2, 2, 3), 0.03);
    assert_eq!(doc.structure, Some(StructureSpec::Named("support".into())));
}

#[test]
fn mask_round_trip() {
    let doc = InputDocument {
        rows: 1,
        cols: 2,
        entries: vec![vec![vec![1.0, 2.0], vec![0.5]]],
        structure: Some(StructureSpec::Mask(vec![vec![vec![true, false], vec![false, true]]])),
    };
    assert_eq!(parse_str(&json::to_string(&doc)).unwrap(), doc);
}
