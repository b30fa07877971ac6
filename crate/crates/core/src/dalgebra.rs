//! Algebras over `𝔻`: a finite category `C` with action maps
//! `ξ₀: 𝔻₀C₀ → C₀` and `ξ₁: 𝔻₁C₁ → C₁` forming a functor `𝔻C → C`, and the
//! underlying multicategory `UC` whose morphisms are morphisms of `C`
//! together with a decomposition of their source.
//!
//! Carriers may be truncations of infinite categories. Objects then carry a
//! weight, every enumeration is cut off at a total weight, and the action
//! maps report [`Error::BoundExceeded`] outside the truncation.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::dmulticat::{Composable, Composable3, DMulticat, MulticatParts};
use crate::error::{Error, Result};
use crate::fincat::FinCategory;
use crate::finset::{FinSet, Label};
use crate::opmonad::dcat::apply_to_category;
use crate::opmonad::{Monad, MonadElem};
use crate::report::{Check, Report};

type Elem = MonadElem<usize>;

/// An action map `𝔻ⱼCⱼ → Cⱼ`, on elements whose entries index `Cⱼ`.
pub type ActionMap = Arc<dyn Fn(&Elem) -> Result<usize> + Send + Sync>;

#[derive(Clone)]
pub struct DAlgebra {
    monad: Arc<Monad>,
    carrier: Arc<FinCategory>,
    on_objects: ActionMap,
    on_morphisms: ActionMap,
    weights: Vec<usize>,
    bound: usize,
}

impl fmt::Debug for DAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DAlgebra")
            .field("carrier", &self.carrier)
            .field("weights", &self.weights)
            .field("bound", &self.bound)
            .finish_non_exhaustive()
    }
}

impl DAlgebra {
    /// Every object has weight one; the bound is the monad's truncation.
    pub fn new(monad: Arc<Monad>, carrier: Arc<FinCategory>, on_objects: ActionMap, on_morphisms: ActionMap) -> Self {
        let weights = vec![1; carrier.num_objects()];
        let bound = monad.max_arity();
        DAlgebra {
            monad,
            carrier,
            on_objects,
            on_morphisms,
            weights,
            bound,
        }
    }

    pub fn with_weights(mut self, weights: Vec<usize>, bound: usize) -> Result<Self> {
        if weights.len() != self.carrier.num_objects() {
            return Err(Error::structural("one weight per object is required"));
        }
        self.weights = weights;
        self.bound = bound.min(self.monad.max_arity());
        Ok(self)
    }

    /// A deliberately broken copy: `ξ₀` sends a singleton `[u; x]` to the
    /// next object instead of `x`, violating the unit law. Used to inject
    /// faults.
    pub fn with_unit_fault(mut self) -> Self {
        let inner = self.on_objects.clone();
        let n = self.carrier.num_objects();
        self.on_objects = Arc::new(move |e| {
            let x = inner(e)?;
            Ok(if e.arity() == 1 { (x + 1) % n } else { x })
        });
        self
    }

    /// The discrete category on `ℤ/n` with `ξ₀` the iterated sum.
    pub fn cyclic(monad: Arc<Monad>, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::structural("ℤ/0 has no elements"));
        }
        let carrier = Arc::new(FinCategory::discrete(FinSet::range(n)));
        let sum = move |e: &Elem| e.entries().iter().sum::<usize>() % n;
        let c = carrier.clone();
        Ok(DAlgebra::new(
            monad,
            carrier,
            Arc::new(move |e| Ok(sum(e))),
            Arc::new(move |e| Ok(c.identity(e.entries().iter().map(|&f| c.source(f)).sum::<usize>() % n))),
        ))
    }

    /// The free algebra `𝔻C` with action `μ`, truncated at `bound`; objects
    /// weigh their arity.
    pub fn free(monad: Arc<Monad>, c: &FinCategory, bound: usize) -> Result<Self> {
        let dc = Arc::new(apply_to_category(&monad, c, bound)?);
        let weights = dc.objects.iter().map(|e| e.arity()).collect();
        let (m0, d0) = (monad.clone(), dc.clone());
        let on_objects: ActionMap = Arc::new(move |e| {
            let flat = m0.mu(&m0.map(e, |&x| d0.objects[x].clone()))?;
            d0.object_index(&flat).ok_or(Error::BoundExceeded { arity: flat.arity(), bound })
        });
        let (m1, d1) = (monad.clone(), dc.clone());
        let on_morphisms: ActionMap = Arc::new(move |e| {
            let flat = m1.mu(&m1.map(e, |&x| d1.morphisms[x].clone()))?;
            d1.morphism_index(&flat).ok_or(Error::BoundExceeded { arity: flat.arity(), bound })
        });
        DAlgebra::new(monad, dc.category.clone(), on_objects, on_morphisms).with_weights(weights, bound)
    }

    pub fn monad(&self) -> &Arc<Monad> {
        &self.monad
    }

    pub fn carrier(&self) -> &Arc<FinCategory> {
        &self.carrier
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn weights(&self) -> &[usize] {
        &self.weights
    }

    /// `ξ₀`.
    pub fn act_objects(&self, e: &Elem) -> Result<usize> {
        (self.on_objects)(e)
    }

    /// `ξ₁`.
    pub fn act_morphisms(&self, e: &Elem) -> Result<usize> {
        (self.on_morphisms)(e)
    }

    fn morphism_weight(&self, f: usize) -> usize {
        self.weights[self.carrier.source(f)].max(self.weights[self.carrier.target(f)])
    }

    /// Elements of `𝔻₀C₀` within the bound.
    pub fn object_elements(&self, bound: usize) -> Vec<Elem> {
        let letters: Vec<usize> = self.carrier.objects().indices().collect();
        self.monad.elements_over(0, &letters, |&x| self.weights[x], bound, bound)
    }

    /// Elements of `𝔻₁C₁` whose source and target lie within the bound.
    pub fn morphism_elements(&self, bound: usize) -> Vec<Elem> {
        let letters: Vec<usize> = self.carrier.morphisms().indices().collect();
        self.monad.elements_over(1, &letters, |&f| self.morphism_weight(f), bound, bound)
    }

    fn show(&self, e: &Elem, degree: usize) -> String {
        let set = if degree == 0 { self.carrier.objects() } else { self.carrier.morphisms() };
        self.monad.show(e, |&x| set.label(x).to_string())
    }
}

fn record_eq(check: &mut Check, lhs: Result<usize>, rhs: Result<usize>, what: impl FnOnce() -> String) {
    match (lhs, rhs) {
        (Ok(a), Ok(b)) => check.record(a == b, what),
        (Err(e), _) | (_, Err(e)) => check.error(&what(), &e),
    }
}

/// The monad-action laws for both components and functoriality of
/// `(ξ₀, ξ₁)`, on every element within `bound`.
pub fn validate_algebra(a: &DAlgebra, bound: usize) -> Report {
    let mut report = Report::new("algebra");
    let bound = bound.min(a.bound);
    let monad = a.monad();
    let c = a.carrier();

    let mut carrier = Check::new("carrier-is-category");
    for bad in c.validate().failures() {
        carrier.fail(format!("{}: {}", bad.name, bad.witnesses.first().cloned().unwrap_or_default()));
    }
    carrier.record(true, String::new);
    report.push(carrier);

    let mut unit = Check::new("unit-law");
    let mut assoc = Check::new("associativity-law");
    for degree in 0..2 {
        let act = |e: &Elem| if degree == 0 { a.act_objects(e) } else { a.act_morphisms(e) };
        let size = if degree == 0 { c.num_objects() } else { c.num_morphisms() };
        for x in 0..size {
            record_eq(&mut unit, act(&monad.eta(degree, x)), Ok(x), || format!("degree {degree} at {x}"));
        }
        let inner = if degree == 0 { a.object_elements(bound) } else { a.morphism_elements(bound) };
        // μ needs the total inner arity within the operad's truncation too
        let weight = |e: &Elem| -> usize {
            let w: usize = e
                .entries()
                .iter()
                .map(|&x| if degree == 0 { a.weights[x] } else { a.morphism_weight(x) })
                .sum();
            w.max(e.arity())
        };
        for w in monad.elements_over(degree, &inner, weight, bound, bound) {
            let lhs = monad.mu(&w).and_then(|e| act(&e));
            let rhs = monad.try_map(&w, |e| act(e)).and_then(|e| act(&e));
            record_eq(&mut assoc, lhs, rhs, || {
                format!("degree {degree} at {}", monad.show(&w, |e| a.show(e, degree)))
            });
        }
    }
    report.push(unit);
    report.push(assoc);

    let mut ends = Check::new("preserves-endpoints");
    let mut ids = Check::new("preserves-identity");
    let mut comp = Check::new("preserves-composition");
    let morphisms = a.morphism_elements(bound);
    let mut by_source: HashMap<Elem, Vec<&Elem>> = HashMap::new();
    for e in &morphisms {
        let what = || a.show(e, 1);
        let x = a.act_morphisms(e);
        let src = monad.source_d_with(e, |&f| c.source(f)).and_then(|s| {
            by_source.entry(s.clone()).or_default().push(e);
            a.act_objects(&s)
        });
        record_eq(&mut ends, x.clone().map(|x| c.source(x)), src, what);
        let tgt = monad.target_d_with(e, |&f| c.target(f)).and_then(|t| a.act_objects(&t));
        record_eq(&mut ends, x.map(|x| c.target(x)), tgt, what);
    }
    for e in a.object_elements(bound) {
        let lhs = monad.identity_d_with(&e, |&x| c.identity(x)).and_then(|i| a.act_morphisms(&i));
        let rhs = a.act_objects(&e).map(|x| c.identity(x));
        record_eq(&mut ids, lhs, rhs, || a.show(&e, 0));
    }
    for f in &morphisms {
        let Ok(t) = monad.target_d_with(f, |&m| c.target(m)) else { continue };
        for g in by_source.get(&t).map(Vec::as_slice).unwrap_or(&[]) {
            let what = || format!("{} ∘ {}", a.show(g, 1), a.show(f, 1));
            let lhs = monad.compose_d_with(g, f, |&x, &y| c.compose(x, y)).and_then(|gf| a.act_morphisms(&gf));
            let rhs = a.act_morphisms(g).and_then(|x| {
                a.act_morphisms(f)
                    .and_then(|y| c.compose(x, y).ok_or_else(|| Error::structural("images are not composable")))
            });
            record_eq(&mut comp, lhs, rhs, what);
        }
    }
    for check in [ends, ids, comp] {
        report.push(check);
    }
    report
}

/// `UC` together with the comparison map `κ₁: (UC)₁ → C₁`.
#[derive(Debug, Clone)]
pub struct Underlying {
    pub multicat: DMulticat,
    pub kappa: Vec<usize>,
}

fn elem_label(monad: &Monad, e: &Elem, objects: &FinSet) -> Label {
    let op = monad.operad().label(0, e.arity(), e.op()).clone();
    let xs = Label::Tuple(e.entries().iter().map(|&x| objects.label(x).clone()).collect());
    Label::Tuple(vec![op, xs])
}

/// The underlying multicategory: morphisms `(c, s)` with `ξ₀ s = S c`.
pub fn underlying(a: &DAlgebra) -> Result<Underlying> {
    let monad = a.monad().clone();
    let c = a.carrier();
    let mut pairs = Vec::new();
    for s in a.object_elements(a.bound) {
        let x = a.act_objects(&s)?;
        for &f in c.out_of(x) {
            pairs.push((f, s.clone()));
        }
    }
    let labels: Vec<Label> = pairs
        .iter()
        .map(|(f, s)| Label::pair(c.morphisms().label(*f).clone(), elem_label(&monad, s, c.objects())))
        .collect();
    let morphisms = FinSet::new(labels.clone())?;
    let mut ordered = pairs.clone();
    for (i, l) in labels.iter().enumerate() {
        ordered[morphisms.index_of(l).expect("present")] = pairs[i].clone();
    }
    let index: HashMap<(usize, Elem), usize> = ordered.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    let lookup = |f: usize, s: Elem| -> Result<usize> {
        if let Some(&i) = index.get(&(f, s.clone())) {
            return Ok(i);
        }
        let weight = s.entries().iter().map(|&x| a.weights[x]).sum::<usize>().max(s.arity());
        if weight > a.bound {
            return Err(Error::BoundExceeded { arity: weight, bound: a.bound });
        }
        Err(Error::structural(format!(
            "({}, {}) is not a morphism: ξ₀ of the source is not the source",
            c.morphisms().label(f),
            a.show(&s, 0)
        )))
    };

    let identity = c
        .objects()
        .indices()
        .map(|x| lookup(c.identity(x), monad.eta(0, x)))
        .collect::<Result<Vec<_>>>()?;
    let mut action = HashMap::new();
    for (u, (f, s)) in ordered.iter().enumerate() {
        for d in monad.morphisms_into(s) {
            let y = a.act_morphisms(&monad.map(&d, |&x| c.identity(x)))?;
            let g = c.compose(*f, y).ok_or_else(|| Error::structural("action leaves the carrier's composables"))?;
            action.insert((u, d.clone()), lookup(g, monad.source_d(&d)?)?);
        }
    }
    let parts = MulticatParts {
        objects: c.objects().clone(),
        morphisms,
        target: ordered.iter().map(|(f, _)| c.target(*f)).collect(),
        source: ordered.iter().map(|(_, s)| s.clone()).collect(),
        identity,
        action,
        composition: HashMap::new(),
    };
    let kappa: Vec<usize> = ordered.iter().map(|(f, _)| *f).collect();
    let mut multicat = DMulticat::new(monad.clone(), parts)?.with_weights(a.weights.clone(), a.bound)?;
    let mut u = Underlying {
        multicat: multicat.clone(),
        kappa,
    };
    for w in multicat.composables() {
        let [f, y] = kappa2(a, &u, &w)?;
        let g = c.compose(f, y).ok_or_else(|| Error::structural("κ₂ is not composable"))?;
        let inner = MonadElem::raw(0, ordered[w.outer].1.op(), w.inner.iter().map(|&g| ordered[g].1.clone()).collect());
        let value = lookup(g, monad.mu(&inner)?)?;
        multicat.set_composite(w, value);
    }
    u.multicat = multicat;
    Ok(u)
}

/// `κ₂(w)` as a string of two composable morphisms of `C`, target first.
pub fn kappa2(a: &DAlgebra, u: &Underlying, w: &Composable) -> Result<[usize; 2]> {
    let m = &u.multicat;
    let s = m.source(w.outer);
    let below = a.monad().identity_d(&MonadElem::raw(0, s.op(), w.inner.iter().map(|&g| u.kappa[g]).collect()))?;
    Ok([u.kappa[w.outer], a.act_morphisms(&below)?])
}

/// `κ₃(w)` as a string of three composable morphisms of `C`, target first.
pub fn kappa3(a: &DAlgebra, u: &Underlying, w: &Composable3) -> Result<[usize; 3]> {
    let m = &u.multicat;
    let [f, y] = kappa2(a, u, &w.target_pair())?;
    let s = m.source(w.outer);
    let lower = w
        .middle
        .iter()
        .zip(&w.inner)
        .map(|(&g, hs)| {
            kappa2(
                a,
                u,
                &Composable {
                    outer: g,
                    inner: hs.clone(),
                },
            )
            .map(|k| k[1])
        })
        .collect::<Result<Vec<_>>>()?;
    let z = a.act_morphisms(&a.monad().identity_d(&MonadElem::raw(0, s.op(), lower))?)?;
    Ok([f, y, z])
}

/// The comparison maps `κ₁, κ₂, κ₃`: their values are composable strings,
/// they commute with `T` and `S`, with `γ` and with both unit inclusions.
pub fn check_kappa(a: &DAlgebra, u: &Underlying) -> Report {
    let mut report = Report::new("comparison-maps");
    let m = &u.multicat;
    let c = a.carrier();
    let monad = a.monad();
    let composable = |s: &[usize]| s.windows(2).all(|p| c.source(p[0]) == c.target(p[1]));

    let mut k1 = Check::new("kappa-1");
    for f in m.morphisms().indices() {
        k1.record(c.target(u.kappa[f]) == m.target(f), || m.show_morphism(f));
        record_eq(&mut k1, Ok(c.source(u.kappa[f])), a.act_objects(m.source(f)), || m.show_morphism(f));
    }
    report.push(k1);

    let mut k2 = Check::new("kappa-2");
    for w in m.composables() {
        let what = || m.show_composable(&w);
        match kappa2(a, u, &w) {
            Ok(k) => {
                k2.record(composable(&k), what);
                k2.record(k[0] == u.kappa[w.outer], what);
                let via = c.compose(k[0], k[1]).ok_or_else(|| Error::structural("not composable"));
                record_eq(&mut k2, via, m.compose(&w).map(|h| u.kappa[h]), what);
            }
            Err(e) => k2.error(&what(), &e),
        }
    }
    report.push(k2);

    let mut units = Check::new("kappa-units");
    for f in m.morphisms().indices() {
        let kf = u.kappa[f];
        let left = Composable {
            outer: m.identity(m.target(f)),
            inner: vec![f],
        };
        if m.within_bound(&left) {
            let ok = kappa2(a, u, &left).map(|k| k == [c.identity(c.target(kf)), kf]);
            units.record(matches!(ok, Ok(true)), || format!("left at {}", m.show_morphism(f)));
        }
        let right = Composable {
            outer: f,
            inner: m.source(f).entries().iter().map(|&x| m.identity(x)).collect(),
        };
        let ok = kappa2(a, u, &right).map(|k| k == [kf, c.identity(c.source(kf))]);
        units.record(matches!(ok, Ok(true)), || format!("right at {}", m.show_morphism(f)));
    }
    report.push(units);

    let mut k3 = Check::new("kappa-3");
    for w in m.composables3() {
        let what = || format!("{} over {:?}", m.show_composable(&w.target_pair()), w.inner);
        match kappa3(a, u, &w) {
            Ok(k) => {
                k3.record(composable(&k), what);
                let top = kappa2(a, u, &w.target_pair());
                k3.record(matches!(top, Ok(t) if t == [k[0], k[1]]), what);
                let s = m.source(w.outer);
                let lower = w
                    .middle
                    .iter()
                    .zip(&w.inner)
                    .map(|(&g, hs)| {
                        kappa2(a, u, &Composable { outer: g, inner: hs.clone() })
                    })
                    .collect::<Result<Vec<_>>>();
                // S κ₃ = ξ₂ I²_𝔻 𝔻₀κ₂ S, one component at a time
                let via = lower.and_then(|ks| {
                    let first = monad.identity_d(&MonadElem::raw(0, s.op(), ks.iter().map(|k| k[0]).collect()))?;
                    let second = monad.identity_d(&MonadElem::raw(0, s.op(), ks.iter().map(|k| k[1]).collect()))?;
                    Ok([a.act_morphisms(&first)?, a.act_morphisms(&second)?])
                });
                k3.record(matches!(via, Ok(v) if v == [k[1], k[2]]), what);
            }
            Err(e) => k3.error(&what(), &e),
        }
    }
    report.push(k3);
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catoperad::CatOperad;
    use crate::dmulticat::{check_multicat_map, from_nonsymmetric, validate_multicat, ClassicalMulticat, MulticatMap};

    fn be(n: usize) -> Arc<Monad> {
        Arc::new(Monad::new(Arc::new(CatOperad::barratt_eccles(n))).unwrap())
    }

    fn ass(n: usize) -> Arc<Monad> {
        Arc::new(Monad::new(Arc::new(CatOperad::associative(n))).unwrap())
    }

    #[test]
    fn cyclic_algebras_are_valid() {
        for m in [be(3), ass(3)] {
            let a = DAlgebra::cyclic(m, 2).unwrap();
            let r = validate_algebra(&a, 3);
            assert!(r.is_valid(), "{}", r.summary());
            assert!(r.check("associativity-law").unwrap().instances > 0);
        }
    }

    #[test]
    fn free_algebra_is_valid() {
        let a = DAlgebra::free(be(3), &FinCategory::terminal(), 3).unwrap();
        assert_eq!(a.carrier().num_objects(), 4);
        let r = validate_algebra(&a, 3);
        assert!(r.is_valid(), "{}", r.summary());
    }

    #[test]
    fn projection_to_first_fails_associativity() {
        let m = be(3);
        let carrier = Arc::new(FinCategory::discrete(FinSet::range(2)));
        let first = |e: &Elem| e.entries().first().copied().unwrap_or(0);
        let c = carrier.clone();
        let a = DAlgebra::new(
            m,
            carrier,
            Arc::new(move |e| Ok(first(e))),
            Arc::new(move |e| Ok(c.identity(e.entries().first().map_or(0, |&f| c.source(f))))),
        );
        let r = validate_algebra(&a, 3);
        assert!(r.check("unit-law").unwrap().passed());
        let assoc = r.check("associativity-law").unwrap();
        assert!(!assoc.passed());
        assert!(!assoc.witnesses.is_empty());
    }

    #[test]
    fn underlying_of_cyclic_algebra() {
        let a = DAlgebra::cyclic(be(3), 2).unwrap();
        let u = underlying(&a).unwrap();
        // one morphism (id, s) for every list s of length at most 3
        assert_eq!(u.multicat.morphisms().len(), 1 + 2 + 4 + 8);
        for f in u.multicat.morphisms().indices() {
            let s = u.multicat.source(f);
            assert_eq!(u.multicat.target(f), s.entries().iter().sum::<usize>() % 2);
        }
        let r = validate_multicat(&u.multicat);
        assert!(r.is_valid(), "{}", r.summary());
        let k = check_kappa(&a, &u);
        assert!(k.is_valid(), "{}", k.summary());
    }

    #[test]
    fn underlying_of_point_is_terminal() {
        let m = ass(3);
        let a = DAlgebra::cyclic(m.clone(), 1).unwrap();
        let u = underlying(&a).unwrap().multicat;
        let t = from_nonsymmetric(&ClassicalMulticat::complete(&["*"], 3), m).unwrap();
        assert_eq!(u.morphisms().len(), t.morphisms().len());
        let on_morphisms = u
            .morphisms()
            .indices()
            .map(|f| t.morphisms().indices().find(|&g| t.source(g).arity() == u.source(f).arity()).unwrap())
            .collect();
        let map = MulticatMap {
            on_objects: vec![0],
            on_morphisms,
        };
        let r = check_multicat_map(&u, &t, &map);
        assert!(r.is_valid(), "{}", r.summary());
    }

    #[test]
    fn underlying_of_free_algebra() {
        let a = DAlgebra::free(be(3), &FinCategory::terminal(), 3).unwrap();
        let u = underlying(&a).unwrap();
        let r = validate_multicat(&u.multicat);
        assert!(r.is_valid(), "{}", r.summary());
        let k = check_kappa(&a, &u);
        assert!(k.is_valid(), "{}", k.summary());
        assert!(k.check("kappa-3").unwrap().instances > 0);
    }
}
