use std::path::Path;

use dgforge::doc::{parse_document, AlgebraDoc, AlgebraRef, Document, Loader, ModuleDoc, Object, TwistedDoc};
use dgforge_core::corpus;
use dgforge_core::sample::Sampler;
use dgforge_core::scalars::FieldSpec;
use proptest::prelude::*;

fn field(p: u64) -> FieldSpec {
    if p == 0 { FieldSpec::Rationals } else { FieldSpec::prime(p).unwrap() }
}

fn reemit(obj: Object, algebra: AlgebraRef) -> Document {
    match obj {
        Object::Algebra(a) => Document::Algebra(AlgebraDoc::of(&a)),
        Object::Module(m) => Document::Module(ModuleDoc::of(&m, algebra)),
        Object::Twisted(x) => Document::Twisted(TwistedDoc::of(&x, algebra)),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sampled_documents_round_trip(
        alg_ix in 0..corpus::NAMES.len(),
        p in prop::sample::select(vec![0u64, 2, 3, 5, 101]),
        seed in any::<u64>(),
        named in any::<bool>(),
    ) {
        let name = corpus::NAMES[alg_ix];
        let alg = corpus::by_name(name, field(p)).unwrap();
        let algebra = if named {
            AlgebraRef::Name(if p == 0 { name.to_string() } else { format!("{name}@F{p}") })
        } else {
            AlgebraRef::Inline(Box::new(AlgebraDoc::of(&alg)))
        };
        let mut s = Sampler::new(&alg, seed);
        let mut docs = vec![
            Document::Algebra(AlgebraDoc::of(&alg)),
            Document::Twisted(TwistedDoc::of(&s.twisted(4, -2, 2), algebra.clone())),
        ];
        if alg.is_class_p() {
            docs.push(Document::Module(ModuleDoc::of(&s.module(16), algebra.clone())));
        }
        let mut loader = Loader::new();
        for doc in docs {
            let text = doc.to_canonical();
            let back = parse_document(&text).unwrap();
            prop_assert_eq!(&back, &doc);
            let obj = loader.build(&back, Path::new(".")).unwrap();
            let again = reemit(obj, algebra.clone());
            prop_assert_eq!(again.kind(), doc.kind());
            prop_assert_eq!(again.to_canonical(), text);
        }
    }

    #[test]
    fn integer_and_string_coefficients_agree(a in -50i64..50, b in 1i64..20) {
        let as_int = format!(
            r#"{{"algebra": "k1", "basis": [{{"name": "u", "deg": 0, "idem": "e1"}}, {{"name": "v", "deg": 1, "idem": "e1"}}],
                "diff": [["u", [{{"c": "v", "coef": {a}}}]]], "action": []}}"#
        );
        let as_text = as_int.replace(&format!("\"coef\": {a}"), &format!("\"coef\": \"{}/{}\"", a * b, b));
        let mut loader = Loader::new();
        let x = loader.build(&parse_document(&as_int).unwrap(), Path::new(".")).unwrap();
        let y = loader.build(&parse_document(&as_text).unwrap(), Path::new(".")).unwrap();
        let emit = |o: Object| match o {
            Object::Module(m) => ModuleDoc::of(&m, AlgebraRef::Name("k1".into())),
            _ => unreachable!(),
        };
        prop_assert_eq!(emit(x), emit(y));
    }
}
