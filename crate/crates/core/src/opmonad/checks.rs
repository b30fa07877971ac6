//! Exhaustive and sampled checks of the monad: monad laws, the category
//! object `(𝔻₀, 𝔻₁, S_𝔻, T_𝔻, I_𝔻, γ_𝔻)`, and the Cartesian property.
//!
//! Pullback conditions on infinite sets are tested fiberwise: for every
//! element `b` of the top-right corner within the arity bound, the fiber of
//! the top map over `b` is enumerated and must meet each element of the
//! bottom-left corner over the same point exactly once.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Debug;
use std::hash::Hash;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Monad, MonadElem};
use crate::catoperad::arity_profiles;
use crate::error::Result;
use crate::finset::{pullback, FinFn, FinSet};
use crate::report::{Check, Report};

type Elem = MonadElem<usize>;

/// Fiberwise pullback test of the square with corners `A → B`, `A → C`,
/// `B → D`, `C → D`. `fiber(b)` must list every `a` over `b`.
#[allow(clippy::too_many_arguments)]
pub fn fiberwise_pullback<A, B, C, D>(
    check: &mut Check,
    bs: &[B],
    cs: &[C],
    fiber: impl Fn(&B) -> Result<Vec<A>>,
    left: impl Fn(&A) -> Result<C>,
    right: impl Fn(&B) -> Result<D>,
    bottom: impl Fn(&C) -> Result<D>,
    show: impl Fn(&B, &C) -> String,
) where
    C: Clone + Eq + Hash,
    D: Eq + Hash,
{
    let mut over: HashMap<D, Vec<usize>> = HashMap::new();
    for (i, c) in cs.iter().enumerate() {
        match bottom(c) {
            Ok(d) => over.entry(d).or_default().push(i),
            Err(e) => check.error("bottom map", &e),
        }
    }
    for b in bs {
        let d = match right(b) {
            Ok(d) => d,
            Err(e) => {
                check.error("right map", &e);
                continue;
            }
        };
        let lifts = match fiber(b) {
            Ok(l) => l,
            Err(e) => {
                check.error("fiber", &e);
                continue;
            }
        };
        let mut counts: HashMap<C, usize> = HashMap::new();
        for a in &lifts {
            match left(a) {
                Ok(c) => {
                    let commutes = bottom(&c).map(|x| x == d).unwrap_or(false);
                    if !commutes {
                        check.fail(format!("square does not commute over {}", show(b, &c)));
                    }
                    *counts.entry(c).or_default() += 1;
                }
                Err(e) => check.error("left map", &e),
            }
        }
        for &i in over.get(&d).map(Vec::as_slice).unwrap_or(&[]) {
            let c = &cs[i];
            let n = counts.get(c).copied().unwrap_or(0);
            check.record(n == 1, || format!("{n} lifts over {}", show(b, c)));
        }
    }
}

fn random_fn(rng: &mut ChaCha8Rng, n: usize, m: usize) -> FinFn {
    let table = (0..n).map(|_| rng.gen_range(0..m)).collect();
    FinFn::new(FinSet::range(n), FinSet::range(m), table).expect("in range")
}

/// Every element of `𝔻ⱼ𝔻ⱼX` whose `μ` is `b`.
pub fn mu_fiber(monad: &Monad, b: &Elem) -> Result<Vec<MonadElem<Elem>>> {
    let j = b.degree();
    let n = b.arity();
    let op = monad.operad();
    let mut out = BTreeSet::new();
    for k in 0..=monad.max_arity() {
        for outer in (0..op.size(j, k)).filter(|&o| monad.is_canonical_op(j, k, o)) {
            for profile in arity_profiles(k, n).into_iter().filter(|p| p.iter().sum::<usize>() == n) {
                let choices: Vec<Vec<usize>> = profile
                    .iter()
                    .map(|&m| (0..op.size(j, m)).filter(|&i| monad.is_canonical_op(j, m, i)).collect())
                    .collect();
                let sizes: Vec<usize> = choices.iter().map(Vec::len).collect();
                let mut err = None;
                crate::catoperad::for_each_index(&sizes, &mut |idx| {
                    let inner: Vec<(usize, usize)> = profile.iter().zip(idx).enumerate().map(|(l, (&m, &i))| (m, choices[l][i])).collect();
                    let g = match op.compose(j, outer, &inner) {
                        Ok(g) => g,
                        Err(e) => {
                            err = Some(e);
                            return;
                        }
                    };
                    for s in 0..op.perms(n).len() {
                        let moved = monad.shift(b, s);
                        if moved.op() != g {
                            continue;
                        }
                        let mut pos = 0;
                        let blocks: Vec<Elem> = inner
                            .iter()
                            .map(|&(m, i)| {
                                let e = monad.canonicalize(MonadElem::raw(j, i, moved.entries()[pos..pos + m].to_vec()));
                                pos += m;
                                e
                            })
                            .collect();
                        out.insert(monad.canonicalize(MonadElem::raw(j, outer, blocks)));
                    }
                });
                if let Some(e) = err {
                    return Err(e);
                }
            }
        }
    }
    Ok(out.into_iter().collect())
}

/// Every element of `𝔻ⱼ𝔻ⱼY` with total arity at most `bound`.
pub fn double_elements(monad: &Monad, j: usize, alphabet: usize, bound: usize) -> Vec<MonadElem<Elem>> {
    let inner = monad.elements(j, alphabet, bound);
    monad.elements_over(j, &inner, |e| e.arity(), bound, monad.max_arity())
}

/// `𝔻ⱼ` applied to squares of finite sets: random pullback squares are
/// preserved, and the naturality squares of `η` and `μ` are pullbacks.
pub fn check_cartesian(monad: &Monad, j: usize, seed: u64, squares: usize, bound: usize) -> Report {
    let mut report = Report::new(format!("cartesian-degree-{j}"));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut preserve = Check::new("pullback-preservation");
    let mut eta = Check::new("eta-naturality");
    let mut mu = Check::new("mu-naturality");
    let show2 = |b: &Elem, c: &Elem| format!("({}, {})", monad.show(b, |x| x.to_string()), monad.show(c, |x| x.to_string()));

    let mut maps = vec![FinFn::new(FinSet::range(2), FinSet::range(1), vec![0, 0]).expect("to a point")];
    for s in 0..squares {
        let (nb, nc, nd) = (rng.gen_range(1..=5), rng.gen_range(1..=5), rng.gen_range(1..=5));
        let f = random_fn(&mut rng, nb, nd);
        let g = random_fn(&mut rng, nc, nd);
        if s < 10 {
            maps.push(random_fn(&mut rng, nb.min(3), nd.min(3)));
        }
        let (a, p1, p2) = pullback(&f, &g).expect("common codomain");
        let mut preimage: Vec<Vec<usize>> = vec![Vec::new(); nb];
        for x in a.indices() {
            preimage[p1.apply(x)].push(x);
        }
        let bs = monad.elements(j, nb, bound);
        let cs = monad.elements(j, nc, bound);
        fiberwise_pullback(
            &mut preserve,
            &bs,
            &cs,
            |b| {
                let lists: Vec<&Vec<usize>> = b.entries().iter().map(|&y| &preimage[y]).collect();
                let sizes: Vec<usize> = lists.iter().map(|l| l.len()).collect();
                let mut out = BTreeSet::new();
                crate::catoperad::for_each_index(&sizes, &mut |idx| {
                    let entries = lists.iter().zip(idx).map(|(l, &i)| l[i]).collect();
                    out.insert(monad.canonicalize(MonadElem::raw(j, b.op(), entries)));
                });
                if sizes.is_empty() {
                    out.insert(monad.canonicalize(MonadElem::raw(j, b.op(), Vec::new())));
                }
                Ok(out.into_iter().collect())
            },
            |a: &Elem| Ok(monad.map(a, |&x| p2.apply(x))),
            |b| Ok(monad.map(b, |&x| f.apply(x))),
            |c| Ok(monad.map(c, |&x| g.apply(x))),
            show2,
        );
    }

    for f in &maps {
        let (nx, ny) = (f.src().len(), f.tgt().len());
        let bs = monad.elements(j, nx, bound);
        let ys: Vec<usize> = (0..ny).collect();
        fiberwise_pullback(
            &mut eta,
            &bs,
            &ys,
            |b| {
                let unit = b.arity() == 1 && b.op() == monad.operad().unit(j);
                Ok(if unit { vec![b.entries()[0]] } else { Vec::new() })
            },
            |&x| Ok(f.apply(x)),
            |b| Ok(monad.map(b, |&x| f.apply(x))),
            |&y| Ok(monad.eta(j, y)),
            |b, y| format!("({}, {y})", monad.show(b, |x| x.to_string())),
        );
        let cs = double_elements(monad, j, ny, bound);
        fiberwise_pullback(
            &mut mu,
            &bs,
            &cs,
            |b| mu_fiber(monad, b),
            |w| Ok(monad.map(w, |e| monad.map(e, |&x| f.apply(x)))),
            |b| Ok(monad.map(b, |&x| f.apply(x))),
            |c| monad.mu(c),
            |b, c| format!("({}, {})", monad.show(b, |x| x.to_string()), monad.show(c, |e| monad.show(e, |x| x.to_string()))),
        );
    }
    for c in [preserve, eta, mu] {
        report.push(c);
    }
    report
}

/// Unit and associativity laws of `μ` on every element over a carrier of
/// the given size, within the arity bound.
pub fn check_monad_laws(monad: &Monad, j: usize, carrier: usize, bound: usize) -> Report {
    let mut report = Report::new(format!("monad-laws-degree-{j}"));
    let mut left = Check::new("left-unit");
    let mut right = Check::new("right-unit");
    let mut assoc = Check::new("associativity");
    let show = |e: &Elem| monad.show(e, |x| x.to_string());
    for e in monad.elements(j, carrier, bound) {
        let outer = MonadElem::raw(j, monad.operad().unit(j), vec![e.clone()]);
        match monad.mu(&outer) {
            Ok(v) => left.record(v == e, || show(&e)),
            Err(err) => left.error(&show(&e), &err),
        }
        let lifted = monad.map(&e, |&x| monad.eta(j, x));
        match monad.mu(&lifted) {
            Ok(v) => right.record(v == e, || show(&e)),
            Err(err) => right.error(&show(&e), &err),
        }
    }
    let doubles = double_elements(monad, j, carrier, bound);
    let weight = |w: &MonadElem<Elem>| w.arity().max(w.entries().iter().map(|e| e.arity()).sum());
    let triples = monad.elements_over(j, &doubles, weight, bound, monad.max_arity());
    for t in &triples {
        let outer_first = monad.mu(t).and_then(|w| monad.mu(&w));
        let inner_first = monad.try_map(t, |w| monad.mu(w)).and_then(|w| monad.mu(&w));
        match (outer_first, inner_first) {
            (Ok(a), Ok(b)) => assoc.record(a == b, || format!("{} vs {}", show(&a), show(&b))),
            (Err(e), _) | (_, Err(e)) => assoc.error("triple", &e),
        }
    }
    for c in [left, right, assoc] {
        report.push(c);
    }
    report
}

fn record<T: PartialEq + Debug>(check: &mut Check, lhs: Result<T>, rhs: Result<T>, what: impl FnOnce() -> String) {
    match (lhs, rhs) {
        (Ok(a), Ok(b)) => check.record(a == b, || format!("{}: {a:?} vs {b:?}", what())),
        (Err(e), _) | (_, Err(e)) => check.error(&what(), &e),
    }
}

/// The category-object laws for `𝔻₀X ⇇ 𝔻₁X`, their naturality in `X`, and
/// their compatibility with `η` and `μ`.
pub fn check_category_object(monad: &Monad, carrier: usize, bound: usize, seed: u64) -> Report {
    let mut report = Report::new("category-object");
    let mut ids = Check::new("identity-endpoints");
    let mut ends = Check::new("composite-endpoints");
    let mut unit = Check::new("composite-unit");
    let mut assoc = Check::new("composite-associativity");
    let mut natural = Check::new("naturality");
    let mut with_eta = Check::new("eta-compatibility");
    let mut with_mu = Check::new("mu-compatibility");
    let show = |e: &Elem| monad.show(e, |x| x.to_string());

    let objects = monad.elements(0, carrier, bound);
    for x in &objects {
        let id = monad.identity_d(x);
        record(&mut ids, id.as_ref().map_err(Clone::clone).and_then(|i| monad.source_d(i)), Ok(x.clone()), || show(x));
        record(&mut ids, id.and_then(|i| monad.target_d(&i)), Ok(x.clone()), || show(x));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = random_fn(&mut rng, carrier, carrier.max(1));
    for x in 0..carrier {
        let (e0, e1) = (monad.eta(0, x), monad.eta(1, x));
        record(&mut with_eta, monad.source_d(&e1), Ok(e0.clone()), || format!("S η {x}"));
        record(&mut with_eta, monad.target_d(&e1), Ok(e0.clone()), || format!("T η {x}"));
        record(&mut with_eta, monad.identity_d(&e0), Ok(e1.clone()), || format!("I η {x}"));
        record(&mut with_eta, monad.compose_d(&e1, &e1), Ok(e1.clone()), || format!("γ η {x}"));
    }
    for h in monad.elements(1, carrier, bound) {
        let (s, t) = match (monad.source_d(&h), monad.target_d(&h)) {
            (Ok(s), Ok(t)) => (s, t),
            _ => continue,
        };
        record(&mut unit, monad.identity_d(&t).and_then(|i| monad.compose_d(&i, &h)), Ok(h.clone()), || show(&h));
        record(&mut unit, monad.identity_d(&s).and_then(|i| monad.compose_d(&h, &i)), Ok(h.clone()), || show(&h));
        let fh = monad.map(&h, |&x| f.apply(x));
        record(&mut natural, monad.source_d(&fh), Ok(monad.map(&s, |&x| f.apply(x))), || format!("S at {}", show(&h)));
        record(&mut natural, monad.target_d(&fh), Ok(monad.map(&t, |&x| f.apply(x))), || format!("T at {}", show(&h)));
        for g in monad.morphisms_from(&t) {
            let gh = monad.compose_d(&g, &h);
            record(&mut ends, gh.as_ref().map_err(Clone::clone).and_then(|v| monad.source_d(v)), Ok(s.clone()), || {
                format!("{} ∘ {}", show(&g), show(&h))
            });
            record(&mut ends, gh.as_ref().map_err(Clone::clone).and_then(|v| monad.target_d(v)), monad.target_d(&g), || {
                format!("{} ∘ {}", show(&g), show(&h))
            });
            let fg = monad.map(&g, |&x| f.apply(x));
            record(
                &mut natural,
                gh.as_ref().map(|v| monad.map(v, |&x| f.apply(x))).map_err(Clone::clone),
                monad.compose_d(&fg, &fh),
                || format!("γ at {} ∘ {}", show(&g), show(&h)),
            );
            let Ok(gh) = gh else { continue };
            let Ok(tg) = monad.target_d(&g) else { continue };
            for k in monad.morphisms_from(&tg) {
                let lhs = monad.compose_d(&k, &g).and_then(|kg| monad.compose_d(&kg, &h));
                let rhs = monad.compose_d(&k, &gh);
                record(&mut assoc, lhs, rhs, || format!("{} ∘ {} ∘ {}", show(&k), show(&g), show(&h)));
            }
        }
    }
    for x in &objects {
        record(
            &mut natural,
            monad.identity_d(x).map(|i| monad.map(&i, |&v| f.apply(v))),
            monad.identity_d(&monad.map(x, |&v| f.apply(v))),
            || format!("I at {}", show(x)),
        );
    }

    // S_𝔻, T_𝔻 and I_𝔻 are monad maps
    for w in double_elements(monad, 1, carrier, bound) {
        let lhs = monad.mu(&w).and_then(|v| monad.source_d(&v));
        let rhs = monad
            .source_d(&w)
            .and_then(|o| monad.try_map(&o, |e| monad.source_d(e)))
            .and_then(|o| monad.mu(&o));
        record(&mut with_mu, lhs, rhs, || format!("S μ at {}", monad.show(&w, |e| show(e))));
        let lhs = monad.mu(&w).and_then(|v| monad.target_d(&v));
        let rhs = monad
            .target_d(&w)
            .and_then(|o| monad.try_map(&o, |e| monad.target_d(e)))
            .and_then(|o| monad.mu(&o));
        record(&mut with_mu, lhs, rhs, || format!("T μ at {}", monad.show(&w, |e| show(e))));
    }
    for v in double_elements(monad, 0, carrier, bound) {
        let lhs = monad.mu(&v).and_then(|x| monad.identity_d(&x));
        let rhs = monad
            .identity_d(&v)
            .and_then(|o| monad.try_map(&o, |e| monad.identity_d(e)))
            .and_then(|o| monad.mu(&o));
        record(&mut with_mu, lhs, rhs, || format!("I μ at {}", monad.show(&v, |e| show(e))));
    }
    // γ_𝔻 is a monad map: compare on 𝔻₂𝔻₂X, written as a composable pair of
    // elements of 𝔻₁ over composable pairs
    let pairs: Vec<(Elem, Elem)> = monad
        .elements(1, carrier, bound.min(2))
        .into_iter()
        .flat_map(|r| {
            let t = monad.target_d(&r).expect("degree 1");
            monad.morphisms_from(&t).into_iter().map(move |l| (l, r.clone()))
        })
        .collect();
    let outer = monad.elements_over(1, &pairs, |p| p.0.arity(), bound.min(2), monad.max_arity());
    for g in &outer {
        let Ok(sg) = monad.source_d(g) else { continue };
        for f in monad.morphisms_into(&sg) {
            let Ok(fa) = monad.align_target(&f, monad.operad().level(g.arity()).source(g.op())) else {
                with_mu.fail("alignment failed".into());
                continue;
            };
            let lefts = MonadElem::raw(1, g.op(), g.entries().iter().map(|p| p.0.clone()).collect());
            let rights = MonadElem::raw(1, fa.op(), fa.entries().iter().map(|p| p.1.clone()).collect());
            let lhs = monad.mu(&lefts).and_then(|l| monad.mu(&rights).and_then(|r| monad.compose_d(&l, &r)));
            let rhs = monad
                .compose_d(g, &f)
                .and_then(|gf| monad.try_map(&gf, |p| monad.compose_d(&p.0, &p.1)))
                .and_then(|w| monad.mu(&w));
            record(&mut with_mu, lhs, rhs, || "γ μ on a composable pair".to_string());
        }
    }
    for c in [ids, ends, unit, assoc, natural, with_eta, with_mu] {
        report.push(c);
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catoperad::CatOperad;
    use std::sync::Arc;

    fn be(n: usize) -> Monad {
        Monad::new(Arc::new(CatOperad::barratt_eccles(n))).unwrap()
    }

    #[test]
    fn identity_square_is_a_pullback() {
        let m = be(3);
        let mut check = Check::new("id");
        let bs = m.elements(0, 2, 3);
        fiberwise_pullback(
            &mut check,
            &bs,
            &bs,
            |b| Ok(vec![b.clone()]),
            |a| Ok(a.clone()),
            |b| Ok(b.clone()),
            |c| Ok(c.clone()),
            |_, _| String::new(),
        );
        assert!(check.passed());
        assert_eq!(check.instances as usize, bs.len());
    }

    #[test]
    fn mu_fibers_reassemble() {
        let m = be(3);
        for b in m.elements(1, 2, 3) {
            let fib = mu_fiber(&m, &b).unwrap();
            assert!(!fib.is_empty());
            for w in fib {
                assert_eq!(m.mu(&w).unwrap(), b);
            }
        }
    }

    #[test]
    fn barratt_eccles_is_cartesian() {
        let m = be(3);
        for j in 0..2 {
            let r = check_cartesian(&m, j, 11, 8, 3);
            assert!(r.is_valid(), "{}", r.summary());
        }
    }

    #[test]
    fn commutative_operad_fails_mu_naturality() {
        let m = Monad::new_unchecked(Arc::new(CatOperad::commutative(3)));
        let r = check_cartesian(&m, 0, 11, 2, 3);
        let mu = r.check("mu-naturality").unwrap();
        assert!(!mu.passed());
        assert!(mu.witnesses.iter().any(|w| w.starts_with("2 lifts over ([*; 0, 0, 1]")), "{:?}", mu.witnesses);
    }

    #[test]
    fn monad_laws_hold() {
        let m = be(3);
        for j in 0..2 {
            let r = check_monad_laws(&m, j, 2, 3);
            assert!(r.is_valid(), "{}", r.summary());
        }
    }

    #[test]
    fn category_object_laws_hold() {
        let r = check_category_object(&be(3), 2, 3, 5);
        assert!(r.is_valid(), "{}", r.summary());
        for c in &r.checks {
            assert!(c.instances > 0, "{}", c.name);
        }
    }
}
