//! The example documents written by `dgforge corpus`.

use std::sync::Arc;

use dgforge_core::corpus;
use dgforge_core::dg::{DgModule, Lin, ModuleBuilder};
use dgforge_core::scalars::FieldSpec;
use dgforge_core::twisted::{Cell, TwistedComplex};
use dgforge_core::weight::simple_module;

use crate::doc::{AlgebraDoc, AlgebraRef, Document, ModuleDoc, TwistedDoc};

fn named(name: &str) -> AlgebraRef {
    AlgebraRef::Name(name.into())
}

fn module(file: &str, alg: &str, m: DgModule) -> (String, Document) {
    (file.into(), Document::Module(ModuleDoc::of(&m, named(alg))))
}

fn twisted(file: &str, alg: &str, x: TwistedComplex) -> (String, Document) {
    (file.into(), Document::Twisted(TwistedDoc::of(&x, named(alg))))
}

/// `(file name, document)` for every shipped example, in a fixed order.
pub fn documents() -> Vec<(String, Document)> {
    let q = FieldSpec::Rationals;
    let mut out: Vec<(String, Document)> = corpus::NAMES
        .iter()
        .map(|n| (format!("{n}.json"), Document::Algebra(AlgebraDoc::of(&corpus::by_name(n, q).expect("corpus name")))))
        .collect();

    let lambda = corpus::lambda(q);
    let a2 = corpus::a2(q);
    let k2 = corpus::semisimple(q, 2);
    let dual = corpus::dual_numbers(q);
    let quiver = corpus::quiver(q);
    let simple = |a: &Arc<_>, i| simple_module(a, i).expect("class P");

    out.push(module("lambda_simple.json", "lambda", simple(&lambda, 0)));
    out.push(module("lambda_free.json", "lambda", DgModule::regular(&lambda)));
    out.push(module(
        "lambda_mixed.json",
        "lambda",
        ModuleBuilder::new(&lambda)
            .element("a", -1, 0)
            .element("b", 0, 0)
            .element("c", 0, 0)
            .element("d", 1, 0)
            .element("z", 2, 0)
            .differential("a", &[("b", 1)])
            .action("c", "x", &[("d", 1)])
            .build()
            .expect("module"),
    ));
    out.push(module("a2_free.json", "a2", DgModule::regular(&a2)));
    out.push(module("a2_simple.json", "a2", simple(&a2, 0)));
    out.push(module(
        "k2_module.json",
        "k2",
        ModuleBuilder::new(&k2)
            .element("p", 0, 0)
            .element("q", -1, 1)
            .element("r", 0, 1)
            .element("s", 2, 1)
            .differential("q", &[("r", 1)])
            .build()
            .expect("module"),
    ));
    out.push(module("quiver_free.json", "quiver", DgModule::regular(&quiver)));
    out.push(module("quiver_simple2.json", "quiver", simple(&quiver, 1)));

    out.push(twisted("lambda_mx.json", "lambda", corpus::m_x(&lambda).expect("M_x")));
    out.push(twisted("dual_cone_eps.json", "dual", corpus::cone_eps(&dual).expect("cone")));
    let b = quiver.index_of("b").expect("arrow b");
    out.push(twisted(
        "quiver_extension.json",
        "quiver",
        TwistedComplex::new(quiver.clone(), vec![Cell::new(1, 0), Cell::new(0, 0)], vec![(0, 1, Lin::basis(b, q))])
            .expect("twisted"),
    ));
    let x = lambda.index_of("x").expect("x");
    out.push(twisted(
        "lambda_contractible.json",
        "lambda",
        TwistedComplex::new(
            lambda.clone(),
            vec![Cell::new(0, 0), Cell::new(0, 1), Cell::new(0, 0), Cell::new(0, 0)],
            vec![(1, 2, Lin::basis(lambda.idempotent(0), q)), (0, 3, Lin::basis(x, q))],
        )
        .expect("twisted"),
    ));
    out
}
