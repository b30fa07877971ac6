use std::sync::Arc;

use gmcat::adjoint::{check_free_construction, truncate, FreeAlgebra, Mode};
use gmcat::catoperad::CatOperad;
use gmcat::dalgebra::validate_algebra;
use gmcat::dmulticat::DMulticat;
use gmcat::opmonad::Monad;

fn terminal(name: &str, bound: usize) -> Arc<DMulticat> {
    let monad = Arc::new(Monad::new(Arc::new(CatOperad::builtin(name, bound).unwrap())).unwrap());
    Arc::new(DMulticat::terminal(monad, bound).unwrap())
}

#[test]
fn both_constructions_are_algebras_within_the_bound() {
    for name in ["associative", "barratt-eccles"] {
        for mode in [Mode::Provisional, Mode::Quotient] {
            let free = Arc::new(FreeAlgebra::new(terminal(name, 3), mode, 3).unwrap());
            let t = truncate(free.clone()).unwrap();
            let category = t.algebra.carrier().validate();
            assert!(category.is_valid(), "{name} {mode:?}: {}", category.summary());
            let algebra = validate_algebra(&t.algebra, 3);
            assert!(algebra.is_valid(), "{name} {mode:?}: {}", algebra.summary());
            let fork = check_free_construction(&free);
            assert!(fork.is_valid(), "{name} {mode:?}: {}", fork.summary());
        }
    }
}

#[test]
fn every_relation_leg_stays_in_its_hom_set() {
    let free = FreeAlgebra::new(terminal("barratt-eccles", 3), Mode::Quotient, 3).unwrap();
    for a in free.objects() {
        for b in free.objects() {
            let hom = free.hom(&a, &b).unwrap();
            for x in &hom.elements {
                assert_eq!(free.source(x).unwrap(), a);
                assert_eq!(free.target(x), b);
            }
            let classes = hom.representatives();
            assert!(classes.len() <= hom.elements.len());
            for r in &classes {
                assert_eq!(free.normalize((*r).clone()).unwrap(), **r);
            }
        }
    }
}
