use proptest::prelude::*;
use reprkit_cli::parse_document;
use reprkit_cli::syntax::{print_decls, Body, Decl};

/// Labels drawn from an alphabet that includes every structural character.
fn label() -> impl Strategy<Value = String> {
    proptest::string::string_regex(r##"[a-c{}(),=:"#\\ >\-⊗]{0,5}"##).unwrap()
}

fn labels() -> impl Strategy<Value = Vec<String>> {
    proptest::collection::btree_set(label(), 0..5).prop_map(|s| s.into_iter().collect())
}

fn document() -> impl Strategy<Value = Vec<Decl>> {
    (labels(), labels(), any::<u64>()).prop_map(|(a, b, bits)| {
        let mut decls = vec![
            Decl {
                name: "A(1)".into(),
                body: Body::Set(a.clone()),
            },
            Decl {
                name: "B -> C".into(),
                body: Body::Set(b.clone()),
            },
        ];
        let mut pairs = Vec::new();
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                if bits >> ((i * 5 + j) % 64) & 1 == 1 {
                    pairs.push((x.clone(), y.clone()));
                }
            }
        }
        decls.push(Decl {
            name: "r".into(),
            body: Body::Relation {
                src: "A(1)".into(),
                tgt: "B -> C".into(),
                pairs,
            },
        });
        if !b.is_empty() {
            let map = a
                .iter()
                .enumerate()
                .map(|(i, x)| (x.clone(), b[i % b.len()].clone()))
                .collect();
            decls.push(Decl {
                name: "f".into(),
                body: Body::Function {
                    src: "A(1)".into(),
                    tgt: "B -> C".into(),
                    map,
                },
            });
        }
        decls
    })
}

proptest! {
    #[test]
    fn parse_inverts_print(decls in document()) {
        let text = print_decls(&decls);
        let doc = parse_document(&text).unwrap();
        prop_assert_eq!(doc.decls(), decls.as_slice());
        prop_assert_eq!(doc.print(), text);
    }
}
