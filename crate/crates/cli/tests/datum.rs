use std::path::PathBuf;

use wdparity::datum::{self, DatumError, Parsed};
use wdparity::fixtures;

fn examples_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples")
}

fn read(name: &str) -> String {
    std::fs::read_to_string(examples_dir().join(name)).unwrap()
}

/// Set `WDPARITY_WRITE_EXAMPLES=1` to rewrite the files from the builders.
#[test]
fn shipped_examples_match_builders() {
    let write = std::env::var_os("WDPARITY_WRITE_EXAMPLES").is_some();
    for (name, parsed) in fixtures::all().unwrap() {
        let expected = datum::serialize(&parsed);
        let path = examples_dir().join(&name);
        if write {
            std::fs::create_dir_all(examples_dir()).unwrap();
            std::fs::write(&path, &expected).unwrap();
        }
        let found = std::fs::read_to_string(&path).unwrap_or_default();
        assert_eq!(found, expected, "{name} is stale");
    }
}

#[test]
fn serialize_after_parse_is_identity_on_examples() {
    for (name, _) in fixtures::all().unwrap() {
        let text = read(&name);
        let parsed = datum::parse(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(datum::serialize(&parsed), text, "{name}");
    }
}

#[test]
fn split_multiplicative_example_is_a_global_point() {
    match datum::parse(&read("split_mult.datum")).unwrap() {
        Parsed::Point(g) => {
            assert_eq!((g.degree, g.r2, g.dim, g.h1f), (1, 0, 2, Some(1)));
            assert_eq!(g.places.len(), 2);
            assert!(g.places[0].is_above_p());
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn numerology_examples_parse_as_numerology() {
    for name in ["qp.num", "qp1.num"] {
        assert!(matches!(
            datum::parse(&read(name)).unwrap(),
            Parsed::Numerology(_)
        ));
    }
}

#[test]
fn empty_input_is_rejected() {
    assert!(matches!(datum::parse(""), Err(DatumError::Empty)));
    assert!(matches!(datum::parse(" \n\t"), Err(DatumError::Empty)));
}

#[test]
fn unknown_field_is_named() {
    let text = read("qp.num").replace("\"kdeg\"", "\"kdegree\"");
    let err = datum::parse(&text).unwrap_err();
    let message = err.to_string();
    assert!(matches!(err, DatumError::Syntax { .. }));
    assert!(message.contains("kdegree"), "{message}");
}

#[test]
fn unknown_top_level_field_is_named() {
    let text = read("qp.num").replacen('{', "{\n  \"comment\": \"x\",", 1);
    let message = datum::parse(&text).unwrap_err().to_string();
    assert!(message.contains("comment"), "{message}");
}

#[test]
fn syntax_errors_carry_line_and_column() {
    let text = read("qp.num").replace("\"d\": 1,", "\"d\": 1");
    match datum::parse(&text).unwrap_err() {
        DatumError::Syntax { line, .. } => assert!(line > 1),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn version_mismatch_is_rejected() {
    let text = read("qp.num").replace("\"version\": 1", "\"version\": 2");
    assert!(matches!(
        datum::parse(&text),
        Err(DatumError::Version { found: 2 })
    ));
    let text = read("qp.num").replace("wdparity-datum", "other");
    assert!(matches!(datum::parse(&text), Err(DatumError::Field { .. })));
}

#[test]
fn bad_scalar_is_located_by_path() {
    let text = read("split_mult.datum");
    let mut file = datum::parse_file(&text).unwrap();
    let point = file.point.as_mut().unwrap();
    point.places[1].rep.frobenius[0][1] = "1 + w".into();
    let err = datum::resolve(&file).unwrap_err().to_string();
    assert!(
        err.starts_with("point.places[1].rep.frobenius[0][1]"),
        "{err}"
    );
}

#[test]
fn ragged_matrix_is_located_by_path() {
    let mut file = datum::parse_file(&read("split_mult.datum")).unwrap();
    file.point.as_mut().unwrap().places[0].gram[1].pop();
    let err = datum::resolve(&file).unwrap_err().to_string();
    assert!(err.starts_with("point.places[0].gram[1]"), "{err}");
}

#[test]
fn exactly_one_payload_is_required() {
    let mut file = datum::parse_file(&read("split_mult.datum")).unwrap();
    file.numerology = datum::parse_file(&read("qp.num")).unwrap().numerology;
    assert!(datum::resolve(&file).is_err());
    file.point = None;
    file.numerology = None;
    assert!(datum::resolve(&file).is_err());
}

#[test]
fn invalid_pairing_is_attributed_to_the_gram_matrix() {
    let mut file = datum::parse_file(&read("split_mult.datum")).unwrap();
    let gram = &mut file.point.as_mut().unwrap().places[0].gram;
    gram[0][1] = "2".into();
    let err = datum::resolve(&file).unwrap_err().to_string();
    assert!(err.starts_with("point.places[0].gram"), "{err}");
}
