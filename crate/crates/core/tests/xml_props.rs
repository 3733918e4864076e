mod common;

use common::fixture_text;
use ddlite::xml::{parse, serialize, XmlTerm};
use proptest::prelude::*;

fn element() -> impl Strategy<Value = XmlTerm> {
    let name = "[a-z][a-z0-9_]{0,5}";
    let value = "[ -~]{0,8}";
    let leaf = (name, prop::collection::btree_map(name, value, 0..3), prop::option::of("[a-zA-Z0-9 <>&'\"]{1,8}"))
        .prop_map(|(tag, attrs, text)| {
            let mut e = XmlTerm::new(tag);
            for (k, v) in attrs {
                e = e.with_attr(k, v);
            }
            match text {
                Some(t) if !t.trim().is_empty() => e.with_text(t.trim().to_string()),
                _ => e,
            }
        });
    leaf.prop_recursive(3, 16, 4, |inner| {
        ("[a-z][a-z0-9]{0,5}", prop::collection::vec(inner, 0..4)).prop_map(|(tag, kids)| {
            kids.into_iter().fold(XmlTerm::new(tag), XmlTerm::with_child)
        })
    })
}

proptest! {
    #[test]
    fn serialize_then_parse_is_identity(e in element()) {
        let text = serialize(&e);
        prop_assert_eq!(parse(&text).unwrap(), e);
    }

    #[test]
    fn term_encoding_round_trips(e in element()) {
        prop_assert_eq!(XmlTerm::from_term(&e.to_term()).unwrap(), e);
    }
}

#[test]
fn fixtures_round_trip() {
    for name in ["works_on.xml", "people.xml", "uncle.xml"] {
        let doc = parse(&fixture_text(name)).unwrap();
        assert_eq!(parse(&serialize(&doc)).unwrap(), doc, "{name}");
    }
}
