//! The unit `M → U(LM)`, the counit `L(UA) → A` and the triangle
//! identities, all evaluated on truncations.

use std::collections::HashMap;
use std::sync::Arc;

use super::{truncate, FreeAlgebra, HatMorphism, Mode, Truncation};
use crate::dalgebra::{underlying, validate_algebra, DAlgebra, Underlying};
use crate::dmulticat::{check_multicat_map, DMulticat, MulticatMap};
use crate::error::{Error, Result};
use crate::opmonad::MonadElem;
use crate::report::{Check, Report};

type Elem = MonadElem<usize>;

fn underlying_index(u: &Underlying) -> HashMap<(usize, Elem), usize> {
    let m = &u.multicat;
    m.morphisms().indices().map(|i| ((u.kappa[i], m.source(i).clone()), i)).collect()
}

/// `η f = ([u; f], I_𝔻(S f))`.
fn unit_of(free: &FreeAlgebra, f: usize) -> Result<HatMorphism> {
    let monad = free.monad();
    free.normalize(HatMorphism {
        components: monad.eta(0, f),
        arrangement: monad.identity_d(free.multicat().source(f))?,
    })
}

/// The unit on objects and morphisms, into the underlying multicategory of
/// a truncation of `LM` (or `L̂M`).
pub fn unit_map(m: &DMulticat, t: &Truncation, u: &Underlying) -> Result<MulticatMap> {
    let monad = m.monad();
    let index = underlying_index(u);
    let on_objects = m
        .objects()
        .indices()
        .map(|x| t.object(&monad.eta(0, x)))
        .collect::<Result<Vec<_>>>()?;
    let on_morphisms = m
        .morphisms()
        .indices()
        .map(|f| {
            let c = t.morphism(&unit_of(&t.free, f)?)?;
            let s = monad.map(m.source(f), |&x| on_objects[x]);
            index.get(&(c, s)).copied().ok_or(Error::BoundExceeded {
                arity: m.source(f).arity(),
                bound: t.free.bound(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MulticatMap {
        on_objects,
        on_morphisms,
    })
}

/// Both sides of the action square for the unit at `(f, δ)`, as morphisms
/// of the free construction: `η(f·δ)` and `η f ∘ ξ₁(𝔻₁I(𝔻₁η δ))`.
pub fn unit_action_sides(free: &FreeAlgebra, f: usize, delta: &Elem) -> Result<(HatMorphism, HatMorphism)> {
    let m = free.multicat();
    let monad = free.monad();
    let lhs = unit_of(free, m.act(f, delta)?)?;
    let ids = monad.try_map(delta, |&x| free.identity(&monad.eta(0, x)))?;
    let slide = free.act_morphisms(&ids)?;
    let rhs = free.compose(&unit_of(free, f)?, &slide)?;
    Ok((lhs, rhs))
}

/// An instance where the unit into the provisional construction fails to
/// respect the action.
#[derive(Debug, Clone)]
pub struct HatUnitFailure {
    pub morphism: usize,
    pub acting: Elem,
    pub unit_of_action: HatMorphism,
    pub action_on_unit: HatMorphism,
    pub description: String,
}

/// Searches the action domain of `m` for a pair where the two sides of the
/// unit's action square differ in `L̂M`.
pub fn witness_hat_unit_failure(m: Arc<DMulticat>, bound: usize) -> Result<Option<HatUnitFailure>> {
    let hat = FreeAlgebra::new(m.clone(), Mode::Provisional, bound)?;
    for (f, delta) in m.action_domain() {
        let (lhs, rhs) = match unit_action_sides(&hat, f, &delta) {
            Err(e) if e.is_bound_exceeded() => continue,
            other => other?,
        };
        if lhs != rhs {
            let description = format!(
                "at ({}, {}): η(f·δ) = {} but (η f)·δ = {}",
                m.show_morphism(f),
                m.show_elem(&delta),
                hat.show(&lhs),
                hat.show(&rhs)
            );
            return Ok(Some(HatUnitFailure {
                morphism: f,
                acting: delta,
                unit_of_action: lhs,
                action_on_unit: rhs,
                description,
            }));
        }
    }
    Ok(None)
}

/// `ε(φ, σ) = ξ₁(I_𝔻 𝔻₀κ₁ φ) ∘ ξ₁(𝔻₁I σ)` for a morphism of `L(UA)`.
pub fn counit_morphism(a: &DAlgebra, u: &Underlying, h: &HatMorphism) -> Result<usize> {
    let monad = a.monad();
    let c = a.carrier();
    let upper = a.act_morphisms(&monad.identity_d(&monad.map(&h.components, |&g| u.kappa[g]))?)?;
    let lower = a.act_morphisms(&monad.map(&h.arrangement, |&x| c.identity(x)))?;
    c.compose(upper, lower)
        .ok_or_else(|| Error::internal("the two halves of the counit do not compose"))
}

fn record(check: &mut Check, what: impl Fn() -> String, outcome: Result<bool>) {
    match outcome {
        Ok(ok) => check.record(ok, what),
        Err(e) => check.error(&what(), &e),
    }
}

/// The counit is well defined on classes, a functor and an algebra map.
pub fn check_counit(a: &DAlgebra, bound: usize) -> Report {
    let mut report = Report::new("counit");
    let mut setup = Check::new("counit-setup");
    let built = underlying(a).and_then(|u| {
        let free = FreeAlgebra::new(Arc::new(u.multicat.clone()), Mode::Quotient, bound)?;
        Ok((u, free))
    });
    let (u, free) = match built {
        Ok(x) => x,
        Err(e) => {
            setup.error("building L(UA)", &e);
            report.push(setup);
            return report;
        }
    };
    let monad = a.monad();
    let c = a.carrier();
    let m = free.multicat().clone();
    let eps = |h: &HatMorphism| counit_morphism(a, &u, h);
    let show = |h: &HatMorphism| free.show(h);
    let mut well = Check::new("counit-well-defined");
    let mut ends = Check::new("counit-endpoints");
    let mut ids = Check::new("counit-identity");
    let mut comp = Check::new("counit-composition");
    let mut alg = Check::new("counit-algebra-map");

    let objects = free.objects();
    let mut reps: Vec<HatMorphism> = Vec::new();
    let mut homs = HashMap::new();
    for x in &objects {
        for y in &objects {
            match free.hom(x, y) {
                Ok(hom) => {
                    for r in hom.representatives() {
                        let members = hom.members(r);
                        let values: Result<Vec<usize>> = members.iter().map(|h| eps(h)).collect();
                        record(&mut well, || show(r), values.map(|v| v.windows(2).all(|p| p[0] == p[1])));
                        reps.push(r.clone());
                    }
                    homs.insert((x.clone(), y.clone()), hom);
                }
                Err(e) => setup.error(&format!("hom({}, {})", m.show_elem(x), m.show_elem(y)), &e),
            }
        }
        record(
            &mut ids,
            || m.show_elem(x),
            (|| Ok(eps(&free.identity(x)?)? == c.identity(a.act_objects(x)?)))(),
        );
    }
    for h in &reps {
        record(
            &mut ends,
            || show(h),
            (|| {
                let e = eps(h)?;
                Ok(c.source(e) == a.act_objects(&free.source(h)?)? && c.target(e) == a.act_objects(&free.target(h))?)
            })(),
        );
    }
    for f in &reps {
        let mid = free.target(f);
        for g in reps.iter() {
            if free.source(g).ok().as_ref() != Some(&mid) {
                continue;
            }
            record(
                &mut comp,
                || format!("{} ∘ {}", show(g), show(f)),
                (|| {
                    let lhs = eps(&free.compose(g, f)?)?;
                    Ok(c.compose(eps(g)?, eps(f)?) == Some(lhs))
                })(),
            );
        }
    }
    let weight = |h: &HatMorphism| {
        let s = free.source(h).map(|s| m.weight(&s).max(s.arity())).unwrap_or(usize::MAX);
        let t = free.target(h);
        s.max(m.weight(&t).max(t.arity()))
    };
    for w in monad.elements_over(1, &reps, weight, bound, bound) {
        let what = || monad.show(&w, |h| show(h));
        let outcome = (|| {
            let lhs = match free.act_morphisms(&w) {
                Err(e) if e.is_bound_exceeded() => return Ok(true),
                other => eps(&other?)?,
            };
            let rhs = a.act_morphisms(&monad.try_map(&w, |h| eps(h))?)?;
            Ok(lhs == rhs)
        })();
        record(&mut alg, what, outcome);
    }
    for check in [setup, well, ends, ids, comp, alg] {
        report.push(check);
    }
    report
}

/// `Uε ∘ ηU = id` on the underlying multicategory of `a`, and
/// `εL ∘ Lη = id` on the truncation of `LM`.
pub fn check_triangles(m: Arc<DMulticat>, a: &DAlgebra, bound: usize) -> Report {
    let mut report = Report::new("triangles");
    report.push(algebra_triangle(a));
    report.push(multicat_triangle(m, bound));
    report
}

fn algebra_triangle(a: &DAlgebra) -> Check {
    let mut check = Check::new("triangle-algebra");
    let monad = a.monad();
    let objects = a.carrier().objects();
    for x in objects.indices() {
        record(&mut check, || format!("object {}", objects.label(x)), a.act_objects(&monad.eta(0, x)).map(|y| y == x));
    }
    let u = match underlying(a) {
        Ok(u) => u,
        Err(e) => {
            check.error("building UA", &e);
            return check;
        }
    };
    let um = &u.multicat;
    for i in um.morphisms().indices() {
        let outcome = (|| {
            let h = HatMorphism {
                components: monad.eta(0, i),
                arrangement: monad.identity_d(um.source(i))?,
            };
            let c = counit_morphism(a, &u, &h)?;
            let s = monad.try_map(um.source(i), |&x| a.act_objects(&monad.eta(0, x)))?;
            Ok(c == u.kappa[i] && s == *um.source(i))
        })();
        record(&mut check, || um.show_morphism(i), outcome);
    }
    check
}

fn multicat_triangle(m: Arc<DMulticat>, bound: usize) -> Check {
    let mut check = Check::new("triangle-multicat");
    let built = (|| {
        let t = truncate(Arc::new(FreeAlgebra::new(m.clone(), Mode::Quotient, bound)?))?;
        let u = underlying(&t.algebra)?;
        let eta = unit_map(&m, &t, &u)?;
        Ok((t, u, eta))
    })();
    let (t, u, eta) = match built {
        Ok(x) => x,
        Err(e) => {
            check.error("building U(LM)", &e);
            return check;
        }
    };
    let monad = m.monad();
    for (k, x) in t.objects.iter().enumerate() {
        let back = t.algebra.act_objects(&monad.map(x, |&y| eta.on_objects[y]));
        record(&mut check, || m.show_elem(x), back.map(|j| j == k));
    }
    for (k, h) in t.morphisms.iter().enumerate() {
        let lifted = HatMorphism {
            components: monad.map(&h.components, |&f| eta.on_morphisms[f]),
            arrangement: monad.map(&h.arrangement, |&y| eta.on_objects[y]),
        };
        record(&mut check, || t.free.show(h), counit_morphism(&t.algebra, &u, &lifted).map(|j| j == k));
    }
    check
}

/// Everything needed for `L ⊣ U` on one multicategory and one algebra: the
/// free construction, the unit, the counit and both triangles.
pub fn check_adjunction(m: Arc<DMulticat>, a: &DAlgebra, bound: usize, mode: Mode) -> Report {
    let mut report = Report::new(match mode {
        Mode::Quotient => "adjunction",
        Mode::Provisional => "adjunction-provisional",
    });
    let free = match FreeAlgebra::new(m.clone(), mode, bound) {
        Ok(f) => Arc::new(f),
        Err(e) => {
            let mut c = Check::new("free-construction");
            c.error("building the free construction", &e);
            report.push(c);
            return report;
        }
    };
    report.extend(super::check_free_construction(&free));
    let mut unit = Check::new("unit");
    match truncate(free.clone()) {
        Ok(t) => {
            report.extend(validate_algebra(&t.algebra, bound));
            match underlying(&t.algebra).and_then(|u| unit_map(&m, &t, &u).map(|eta| (u, eta))) {
                Ok((u, eta)) => {
                    unit.record(true, String::new);
                    report.push(unit);
                    report.extend(check_multicat_map(&m, &u.multicat, &eta));
                }
                Err(e) => {
                    unit.error("building the unit", &e);
                    report.push(unit);
                }
            }
        }
        Err(e) => {
            unit.error("truncating the free construction", &e);
            report.push(unit);
        }
    }
    report.extend(check_counit(a, bound));
    report.extend(check_triangles(m, a, bound));
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catoperad::CatOperad;
    use crate::fincat::FinCategory;
    use crate::opmonad::Monad;

    fn monad(name: &str, bound: usize) -> Arc<Monad> {
        Arc::new(Monad::new(Arc::new(CatOperad::builtin(name, bound).unwrap())).unwrap())
    }

    #[test]
    fn unit_into_the_quotient_is_a_map() {
        for name in ["ass", "barratt-eccles"] {
            let m = Arc::new(DMulticat::terminal(monad(name, 3), 3).unwrap());
            let t = truncate(Arc::new(FreeAlgebra::new(m.clone(), Mode::Quotient, 3).unwrap())).unwrap();
            let u = underlying(&t.algebra).unwrap();
            let eta = unit_map(&m, &t, &u).unwrap();
            let report = check_multicat_map(&m, &u.multicat, &eta);
            assert!(report.is_valid(), "{name}: {}", report.summary());
        }
    }

    #[test]
    fn provisional_unit_breaks_the_action_and_the_quotient_repairs_it() {
        let m = Arc::new(DMulticat::terminal(monad("barratt-eccles", 3), 3).unwrap());
        let w = witness_hat_unit_failure(m.clone(), 3).unwrap().expect("a witness");
        assert_ne!(w.unit_of_action, w.action_on_unit);
        let quotient = FreeAlgebra::new(m.clone(), Mode::Quotient, 3).unwrap();
        assert!(quotient.equivalent(&w.unit_of_action, &w.action_on_unit).unwrap());

        let t = truncate(Arc::new(FreeAlgebra::new(m.clone(), Mode::Provisional, 3).unwrap())).unwrap();
        let u = underlying(&t.algebra).unwrap();
        let report = check_multicat_map(&m, &u.multicat, &unit_map(&m, &t, &u).unwrap());
        let failed: Vec<&str> = report.failures().map(|c| c.name.as_str()).collect();
        assert_eq!(failed, ["preserves-action"]);
    }

    #[test]
    fn counit_on_the_cyclic_group() {
        let a = DAlgebra::cyclic(monad("barratt-eccles", 2), 2).unwrap();
        let u = underlying(&a).unwrap();
        let free = FreeAlgebra::new(Arc::new(u.multicat.clone()), Mode::Quotient, 2).unwrap();
        let monad = a.monad();
        let ones = monad.elem(0, 0, vec![1, 1]).unwrap();
        assert_eq!(a.act_objects(&ones).unwrap(), 0);
        let id = free.identity(&ones).unwrap();
        assert_eq!(counit_morphism(&a, &u, &id).unwrap(), a.carrier().identity(0));
        let report = check_counit(&a, 2);
        assert!(report.is_valid(), "{}", report.summary());
    }

    #[test]
    fn triangles_hold_for_the_standard_pairs() {
        let ass = monad("ass", 3);
        let m = Arc::new(DMulticat::terminal(ass.clone(), 3).unwrap());
        let a = DAlgebra::free(ass, &FinCategory::terminal(), 3).unwrap();
        let report = check_triangles(m, &a, 3);
        assert!(report.is_valid(), "{}", report.summary());

        let be = monad("barratt-eccles", 3);
        let m = Arc::new(DMulticat::terminal(be.clone(), 3).unwrap());
        let a = DAlgebra::cyclic(be, 2).unwrap();
        let report = check_triangles(m, &a, 3);
        assert!(report.is_valid(), "{}", report.summary());
    }

    #[test]
    fn broken_unit_law_fails_the_algebra_triangle() {
        let be = monad("barratt-eccles", 3);
        let m = Arc::new(DMulticat::terminal(be.clone(), 3).unwrap());
        let a = DAlgebra::cyclic(be, 2).unwrap().with_unit_fault();
        let report = check_triangles(m, &a, 3);
        let check = report.check("triangle-algebra").unwrap();
        assert_eq!(check.status, crate::report::Status::Fail);
        assert!(check.witnesses[0].starts_with("object"), "{:?}", check.witnesses);
        assert!(report.check("triangle-multicat").unwrap().passed());
    }

    #[test]
    fn full_suite_on_the_standard_pairs() {
        let ass = monad("ass", 3);
        let m = Arc::new(DMulticat::terminal(ass.clone(), 3).unwrap());
        let a = DAlgebra::free(ass, &FinCategory::terminal(), 3).unwrap();
        let report = check_adjunction(m, &a, 3, Mode::Quotient);
        assert!(report.is_valid(), "{}", report.summary());

        let be = monad("barratt-eccles", 3);
        let m = Arc::new(DMulticat::terminal(be.clone(), 3).unwrap());
        let a = DAlgebra::cyclic(be, 2).unwrap();
        let report = check_adjunction(m.clone(), &a, 3, Mode::Quotient);
        assert!(report.is_valid(), "{}", report.summary());
        let hat = check_adjunction(m, &a, 3, Mode::Provisional);
        let failed: Vec<&str> = hat.failures().map(|c| c.name.as_str()).collect();
        assert_eq!(failed, ["multicategory-map: preserves-action"], "{}", hat.summary());
    }
}
