//! Multicategories shaped by the monad `𝔻`: morphisms with a target object,
//! a source in `𝔻₀M₀`, a presheaf action by the morphisms of `𝔻(M₀)` and a
//! composition on composable pairs.
//!
//! The action is stored on pairs `(f, δ)` with `δ ∈ 𝔻₁M₀` and `T_𝔻δ = S f`;
//! the form over `𝔻(∗)` is derived on demand by pushing forward along `𝔻ε`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::catoperad::{for_each_index, Composition};
use crate::error::{Error, Result};
use crate::fincat::{pushforward_presheaf, CatFunctor, FinCategory, Presheaf};
use crate::finset::{block_perm, block_sum, FinSet, Label, Perm};
use crate::opmonad::dcat::{apply_to_category, apply_to_functor, DCategory};
use crate::opmonad::{Monad, MonadElem};
use crate::report::{Check, Report};

type Elem = MonadElem<usize>;

/// An element of `M₂ = M₁ ×_{𝔻₀M₀} 𝔻₀M₁`: a morphism and one morphism into
/// each of its source slots, in the order of the canonical source.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Composable {
    pub outer: usize,
    pub inner: Vec<usize>,
}

/// An element of `M₃ = M₂ ×_{𝔻₀M₁} 𝔻₀M₂`: `inner[i]` feeds the source
/// slots of `middle[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Composable3 {
    pub outer: usize,
    pub middle: Vec<usize>,
    pub inner: Vec<Vec<usize>>,
}

impl Composable3 {
    /// The projection `T: M₃ → M₂`.
    pub fn target_pair(&self) -> Composable {
        Composable {
            outer: self.outer,
            inner: self.middle.clone(),
        }
    }

    /// `γ_T`: composes the outer morphism with the middle layer.
    pub fn compose_target(&self, m: &DMulticat) -> Result<Composable> {
        let pair = self.target_pair();
        let top = m.compose(&pair)?;
        let inner: Vec<usize> = self.inner.iter().flatten().copied().collect();
        m.align_composable(top, &pair, inner)
    }

    /// `γ_S`: composes each middle morphism with its inputs.
    pub fn compose_source(&self, m: &DMulticat) -> Result<Composable> {
        let inner = self
            .middle
            .iter()
            .zip(&self.inner)
            .map(|(&g, hs)| {
                m.compose(&Composable {
                    outer: g,
                    inner: hs.clone(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Composable { outer: self.outer, inner })
    }
}

/// Raw data of a multicategory, indexed by position in `objects` and
/// `morphisms`.
#[derive(Debug, Clone)]
pub struct MulticatParts {
    pub objects: FinSet,
    pub morphisms: FinSet,
    pub target: Vec<usize>,
    pub source: Vec<Elem>,
    pub identity: Vec<usize>,
    pub action: HashMap<(usize, Elem), usize>,
    pub composition: HashMap<Composable, usize>,
}

#[derive(Debug, Clone)]
pub struct DMulticat {
    monad: Arc<Monad>,
    parts: MulticatParts,
    by_target: Vec<Vec<usize>>,
    max_arity: usize,
    weights: Vec<usize>,
    max_weight: usize,
}

impl DMulticat {
    /// Checks shapes only; use [`validate_multicat`] for the axioms.
    pub fn new(monad: Arc<Monad>, parts: MulticatParts) -> Result<Self> {
        let (n0, n1) = (parts.objects.len(), parts.morphisms.len());
        if parts.target.len() != n1 || parts.source.len() != n1 || parts.identity.len() != n0 {
            return Err(Error::structural("structure maps have the wrong length"));
        }
        if let Some(&x) = parts.target.iter().find(|&&x| x >= n0) {
            return Err(Error::structural(format!("target {x} is not an object")));
        }
        if let Some(&f) = parts.identity.iter().find(|&&f| f >= n1) {
            return Err(Error::structural(format!("identity {f} is not a morphism")));
        }
        let mut max_arity = 0;
        for (f, s) in parts.source.iter().enumerate() {
            if s.degree() != 0 || s.entries().iter().any(|&x| x >= n0) {
                return Err(Error::structural(format!("source of {} is malformed", parts.morphisms.label(f))));
            }
            monad.operad().require_level(s.arity())?;
            if monad.canonicalize(s.clone()) != *s {
                return Err(Error::structural(format!("source of {} is not canonical", parts.morphisms.label(f))));
            }
            max_arity = max_arity.max(s.arity());
        }
        let mut by_target = vec![Vec::new(); n0];
        for (f, &x) in parts.target.iter().enumerate() {
            by_target[x].push(f);
        }
        let weights = vec![1; n0];
        Ok(DMulticat {
            monad,
            parts,
            by_target,
            max_arity,
            weights,
            max_weight: max_arity,
        })
    }

    /// Bounds composables by the total weight of their sources as well as
    /// by arity, for multicategories built from truncated carriers.
    pub fn with_weights(mut self, weights: Vec<usize>, max_weight: usize) -> Result<Self> {
        if weights.len() != self.objects().len() {
            return Err(Error::structural("one weight per object is required"));
        }
        self.weights = weights;
        self.max_weight = max_weight;
        Ok(self)
    }

    pub fn weight(&self, e: &Elem) -> usize {
        e.entries().iter().map(|&x| self.weights[x]).sum()
    }

    /// One object and one morphism for each canonical source up to `bound`.
    pub fn terminal(monad: Arc<Monad>, bound: usize) -> Result<Self> {
        monad.operad().require_level(bound)?;
        let sources = monad.elements(0, 1, bound);
        let labels: Vec<Label> = sources
            .iter()
            .map(|s| Label::Tuple(vec![Label::Int(s.arity() as i64), monad.operad().label(0, s.arity(), s.op()).clone()]))
            .collect();
        let morphisms = FinSet::new(labels.clone())?;
        let order: Vec<usize> = labels.iter().map(|l| morphisms.index_of(l).expect("present")).collect();
        let mut source = vec![sources[0].clone(); sources.len()];
        for (i, s) in sources.iter().enumerate() {
            source[order[i]] = s.clone();
        }
        let index: HashMap<Elem, usize> = source.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        let identity = vec![index[&monad.eta(0, 0)]];
        let mut action = HashMap::new();
        for (f, s) in source.iter().enumerate() {
            for d in monad.morphisms_into(s) {
                let to = index[&monad.source_d(&d)?];
                action.insert((f, d), to);
            }
        }
        let mut m = DMulticat::new(
            monad.clone(),
            MulticatParts {
                objects: FinSet::new(vec![Label::atom("*")])?,
                morphisms,
                target: vec![0; source.len()],
                source: source.clone(),
                identity,
                action,
                composition: HashMap::new(),
            },
        )?;
        for w in m.composables() {
            let outer = MonadElem::raw(0, source[w.outer].op(), w.inner.iter().map(|&g| source[g].clone()).collect());
            let value = index[&monad.mu(&outer)?];
            m.parts.composition.insert(w, value);
        }
        Ok(m)
    }

    pub fn monad(&self) -> &Arc<Monad> {
        &self.monad
    }

    pub fn parts(&self) -> &MulticatParts {
        &self.parts
    }

    pub fn objects(&self) -> &FinSet {
        &self.parts.objects
    }

    pub fn morphisms(&self) -> &FinSet {
        &self.parts.morphisms
    }

    pub fn target(&self, f: usize) -> usize {
        self.parts.target[f]
    }

    pub fn source(&self, f: usize) -> &Elem {
        &self.parts.source[f]
    }

    pub fn identity(&self, x: usize) -> usize {
        self.parts.identity[x]
    }

    /// Largest source arity; composables are enumerated up to it.
    pub fn max_arity(&self) -> usize {
        self.max_arity
    }

    pub fn morphisms_into(&self, x: usize) -> &[usize] {
        &self.by_target[x]
    }

    /// `f·δ`; an error outside the domain `T_𝔻δ = S f`.
    pub fn act(&self, f: usize, delta: &Elem) -> Result<usize> {
        self.parts.action.get(&(f, delta.clone())).copied().ok_or_else(|| {
            Error::structural(format!(
                "action undefined at ({}, {})",
                self.show_morphism(f),
                self.show_elem(delta)
            ))
        })
    }

    /// `γ`; an error outside the composition table.
    pub fn compose(&self, w: &Composable) -> Result<usize> {
        self.parts
            .composition
            .get(w)
            .copied()
            .ok_or_else(|| Error::structural(format!("composition undefined at {}", self.show_composable(w))))
    }

    /// Replaces one composite; used to inject faults.
    pub fn set_composite(&mut self, w: Composable, value: usize) {
        self.parts.composition.insert(w, value);
    }

    /// Replaces one action value; used to inject faults.
    pub fn set_action(&mut self, f: usize, delta: Elem, value: usize) {
        self.parts.action.insert((f, delta), value);
    }

    pub fn is_composable(&self, w: &Composable) -> bool {
        w.outer < self.parts.source.len()
            && self.source(w.outer).arity() == w.inner.len()
            && w.inner
                .iter()
                .zip(self.source(w.outer).entries())
                .all(|(&g, &x)| g < self.parts.target.len() && self.target(g) == x)
    }

    fn within(&self, inputs: impl Iterator<Item = usize> + Clone) -> bool {
        inputs.clone().map(|g| self.source(g).arity()).sum::<usize>() <= self.max_arity
            && inputs.map(|g| self.weight(self.source(g))).sum::<usize>() <= self.max_weight
    }

    /// Whether `w` lies within the bounds, so that its composite must be
    /// tabulated.
    pub fn within_bound(&self, w: &Composable) -> bool {
        self.within(w.inner.iter().copied())
    }

    /// `M₂` within the arity bound.
    pub fn composables(&self) -> Vec<Composable> {
        let mut out = Vec::new();
        for f in self.parts.morphisms.indices() {
            let slots: Vec<&[usize]> = self.source(f).entries().iter().map(|&x| self.morphisms_into(x)).collect();
            let sizes: Vec<usize> = slots.iter().map(|s| s.len()).collect();
            for_each_index(&sizes, &mut |idx| {
                let inner: Vec<usize> = slots.iter().zip(idx).map(|(s, &i)| s[i]).collect();
                let w = Composable { outer: f, inner };
                if self.within_bound(&w) {
                    out.push(w);
                }
            });
        }
        out
    }

    /// `M₃` restricted to elements whose every composite lies within the
    /// arity bound.
    pub fn composables3(&self) -> Vec<Composable3> {
        let pairs = self.composables();
        let mut by_outer: HashMap<usize, Vec<&Composable>> = HashMap::new();
        for w in &pairs {
            by_outer.entry(w.outer).or_default().push(w);
        }
        let mut out = Vec::new();
        for w in &pairs {
            let slots: Vec<&[&Composable]> = w.inner.iter().map(|g| by_outer.get(g).map(Vec::as_slice).unwrap_or(&[])).collect();
            let sizes: Vec<usize> = slots.iter().map(|s| s.len()).collect();
            for_each_index(&sizes, &mut |idx| {
                let inner: Vec<Vec<usize>> = slots.iter().zip(idx).map(|(s, &i)| s[i].inner.clone()).collect();
                if self.within(inner.iter().flatten().copied()) {
                    out.push(Composable3 {
                        outer: w.outer,
                        middle: w.inner.clone(),
                        inner,
                    });
                }
            });
        }
        out
    }

    /// Pairs `outer` with `inner` listed in the order `μ` produces for the
    /// sources of `sources`, reordered to match the canonical source of
    /// `outer`.
    fn align_composable(&self, outer: usize, sources: &Composable, inner: Vec<usize>) -> Result<Composable> {
        let parts: Vec<(usize, usize)> = sources.inner.iter().map(|&g| (self.source(g).arity(), self.source(g).op())).collect();
        let op = self.monad.operad().compose(0, self.source(sources.outer).op(), &parts)?;
        let w = Composable {
            outer,
            inner: self.monad.canonicalize(MonadElem::raw(0, op, inner)).into_entries(),
        };
        if self.is_composable(&w) {
            return Ok(w);
        }
        Err(Error::structural(format!("{} is not composable", self.show_composable(&w))))
    }

    /// Every pair `(f, δ)` on which the action must be defined.
    pub fn action_domain(&self) -> Vec<(usize, Elem)> {
        self.parts
            .morphisms
            .indices()
            .flat_map(|f| self.monad.morphisms_into(self.source(f)).into_iter().map(move |d| (f, d)))
            .collect()
    }

    /// The action as a presheaf over `𝔻(M₀)` with structure map `S`.
    pub fn action_presheaf(&self) -> Result<(DCategory, Presheaf)> {
        let dm = apply_to_category(&self.monad, &FinCategory::discrete(self.objects().clone()), self.max_arity)?;
        let p = self.presheaf_over(&dm)?;
        Ok((dm, p))
    }

    fn presheaf_over(&self, dm: &DCategory) -> Result<Presheaf> {
        let eps = self
            .parts
            .source
            .iter()
            .map(|s| dm.object_index(s).ok_or_else(|| Error::internal("source missing from 𝔻M₀")))
            .collect::<Result<Vec<_>>>()?;
        Presheaf::from_fn(dm.category.clone(), self.morphisms().clone(), eps, |f, d| self.act(f, &dm.morphisms[d]))
    }

    /// The action as a presheaf over `𝔻(∗)`, pushed forward along the
    /// target cover `𝔻ε`.
    pub fn presheaf_over_point(&self) -> Result<Presheaf> {
        let objects = self.objects().clone();
        let point = Arc::new(FinCategory::terminal());
        let discrete = Arc::new(FinCategory::discrete(objects.clone()));
        let eps = CatFunctor::new(discrete.clone(), point, vec![0; objects.len()], vec![0; discrete.num_morphisms()])?;
        let (dm, _, deps) = apply_to_functor(&self.monad, &eps, self.max_arity)?;
        let p = self.presheaf_over(&dm)?;
        pushforward_presheaf(&deps, &p)
    }

    pub fn show_morphism(&self, f: usize) -> String {
        self.parts.morphisms.label(f).to_string()
    }

    pub fn show_elem(&self, e: &Elem) -> String {
        self.monad.show(e, |&x| self.parts.objects.label(x).to_string())
    }

    pub fn show_composable(&self, w: &Composable) -> String {
        let inner: Vec<String> = w.inner.iter().map(|&g| self.show_morphism(g)).collect();
        format!("({}; {})", self.show_morphism(w.outer), inner.join(", "))
    }

    fn show_composable3(&self, w: &Composable3) -> String {
        let inner: Vec<String> = w
            .inner
            .iter()
            .map(|hs| hs.iter().map(|&h| self.show_morphism(h)).collect::<Vec<_>>().join(" "))
            .collect();
        format!("{} over [{}]", self.show_composable(&w.target_pair()), inner.join(" | "))
    }
}

impl fmt::Display for Composable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}; {:?})", self.outer, self.inner)
    }
}

fn record_eq<T: PartialEq>(check: &mut Check, lhs: Result<T>, rhs: Result<T>, what: impl FnOnce() -> String) {
    match (lhs, rhs) {
        (Ok(a), Ok(b)) => check.record(a == b, what),
        (Err(e), _) | (_, Err(e)) => check.error(&what(), &e),
    }
}

/// Every axiom of a `𝔻`-multicategory, exhaustively within the arity bound.
pub fn validate_multicat(m: &DMulticat) -> Report {
    let mut report = Report::new("multicategory");
    let monad = m.monad();
    let obj = |x: usize| m.objects().label(x).to_string();

    let mut units = Check::new("unit-triangle");
    for x in m.objects().indices() {
        let i = m.identity(x);
        units.record(m.source(i) == &monad.eta(0, x), || format!("S I {} is {}", obj(x), m.show_elem(m.source(i))));
        units.record(m.target(i) == x, || format!("T I {} is {}", obj(x), obj(m.target(i))));
    }
    report.push(units);

    let domain = m.action_domain();
    let mut dom = Check::new("action-domain");
    for (f, d) in &domain {
        let v = m.parts.action.get(&(*f, d.clone()));
        dom.record(matches!(v, Some(&y) if y < m.morphisms().len()), || {
            format!("({}, {}) has no valid value", m.show_morphism(*f), m.show_elem(d))
        });
    }
    dom.record(m.parts.action.len() == domain.len(), || {
        format!("{} action entries lie outside the domain", m.parts.action.len().saturating_sub(domain.len()))
    });
    let domain_ok = dom.passed();
    report.push(dom);

    let mut ends = Check::new("action-endpoints");
    let mut unit = Check::new("action-unit");
    let mut assoc = Check::new("action-associativity");
    if domain_ok {
        for (f, d) in &domain {
            let what = || format!("({}, {})", m.show_morphism(*f), m.show_elem(d));
            let Ok(y) = m.act(*f, d) else { continue };
            let src = monad.source_d(d);
            record_eq(&mut ends, Ok(m.source(y).clone()), src.clone(), what);
            ends.record(m.target(y) == m.target(*f), what);
            if let Ok(src) = src {
                for d2 in monad.morphisms_into(&src) {
                    let lhs = m.act(y, &d2);
                    let rhs = monad.compose_d(d, &d2).and_then(|dd| m.act(*f, &dd));
                    record_eq(&mut assoc, lhs, rhs, || format!("{} then {}", what(), m.show_elem(&d2)));
                }
            }
        }
        for f in m.morphisms().indices() {
            let rhs = monad.identity_d(m.source(f)).and_then(|i| m.act(f, &i));
            record_eq(&mut unit, Ok(f), rhs, || m.show_morphism(f));
        }
    }
    report.push(ends);
    report.push(unit);
    report.push(assoc);

    let pairs = m.composables();
    let mut cdom = Check::new("composition-domain");
    for w in &pairs {
        cdom.record(matches!(m.parts.composition.get(w), Some(&h) if h < m.morphisms().len()), || {
            format!("no composite at {}", m.show_composable(w))
        });
    }
    for w in m.parts.composition.keys() {
        cdom.record(m.is_composable(w), || format!("{} is not composable", m.show_composable(w)));
    }
    let composition_ok = cdom.passed();
    report.push(cdom);

    let mut cend = Check::new("composition-endpoints");
    let mut cunit = Check::new("composition-unit");
    let mut equi = Check::new("composition-equivariance");
    let mut cassoc = Check::new("composition-associativity");
    if composition_ok {
        for w in &pairs {
            let h = m.compose(w).expect("checked");
            cend.record(m.target(h) == m.target(w.outer), || format!("T at {}", m.show_composable(w)));
            let outer = MonadElem::raw(0, m.source(w.outer).op(), w.inner.iter().map(|&g| m.source(g).clone()).collect());
            record_eq(&mut cend, Ok(m.source(h).clone()), monad.mu(&outer), || format!("S at {}", m.show_composable(w)));
            check_equivariance(m, w, h, &mut equi);
        }
        for f in m.morphisms().indices() {
            let left = Composable {
                outer: m.identity(m.target(f)),
                inner: vec![f],
            };
            let right = Composable {
                outer: f,
                inner: m.source(f).entries().iter().map(|&x| m.identity(x)).collect(),
            };
            if m.within_bound(&left) {
                record_eq(&mut cunit, m.compose(&left), Ok(f), || format!("left unit at {}", m.show_morphism(f)));
            }
            record_eq(&mut cunit, m.compose(&right), Ok(f), || format!("right unit at {}", m.show_morphism(f)));
        }
        for w in m.composables3() {
            let lhs = w.compose_target(m).and_then(|p| m.compose(&p));
            let rhs = w.compose_source(m).and_then(|p| m.compose(&p));
            record_eq(&mut cassoc, lhs, rhs, || m.show_composable3(&w));
        }
    }
    for c in [cend, cunit, equi, cassoc] {
        report.push(c);
    }

    let mut point = Check::new("presheaf-over-point");
    if domain_ok {
        match m.presheaf_over_point() {
            Ok(p) => {
                for c in p.validate().failures() {
                    point.fail(format!("{}: {}", c.name, c.witnesses.first().cloned().unwrap_or_default()));
                }
                point.record(true, String::new);
            }
            Err(e) => point.error("pushforward", &e),
        }
    }
    report.push(point);
    report
}

/// `γ((f, g⃗)·Δ) = γ(f, g⃗)·μΔ` for every `Δ = [m; δ⃗]` acting on `w`.
fn check_equivariance(m: &DMulticat, w: &Composable, h: usize, check: &mut Check) {
    let monad = m.monad();
    let sf = m.source(w.outer);
    let k = sf.arity();
    let level = monad.operad().level(k);
    let slots: Vec<Vec<Elem>> = w.inner.iter().map(|&g| monad.morphisms_into(m.source(g))).collect();
    let sizes: Vec<usize> = slots.iter().map(Vec::len).collect();
    for alpha in monad.morphisms_into(sf) {
        let aligned = match monad.align_target(&alpha, sf.op()) {
            Ok(a) if a.entries() == sf.entries() => a,
            _ => {
                check.fail(format!("cannot align {} with {}", m.show_elem(&alpha), m.show_elem(sf)));
                continue;
            }
        };
        let Ok(f2) = m.act(w.outer, &alpha) else { continue };
        let src_op = level.source(aligned.op());
        for_each_index(&sizes, &mut |idx| {
            let deltas: Vec<Elem> = slots.iter().zip(idx).map(|(s, &i)| s[i].clone()).collect();
            let moved = w.inner.iter().zip(&deltas).map(|(&g, d)| m.act(g, d)).collect::<Result<Vec<_>>>();
            let lhs = moved.and_then(|gs| {
                let pair = monad.canonicalize(MonadElem::raw(0, src_op, gs));
                m.compose(&Composable {
                    outer: f2,
                    inner: pair.into_entries(),
                })
            });
            let rhs = monad.mu(&MonadElem::raw(1, aligned.op(), deltas.clone())).and_then(|d| m.act(h, &d));
            record_eq(check, lhs, rhs, || {
                let ds: Vec<String> = deltas.iter().map(|d| m.show_elem(d)).collect();
                format!("{} acted on by {} and [{}]", m.show_composable(w), m.show_elem(&alpha), ds.join(", "))
            });
        });
    }
}

/// A map of multicategories over the same monad, given on objects and
/// morphisms.
#[derive(Debug, Clone)]
pub struct MulticatMap {
    pub on_objects: Vec<usize>,
    pub on_morphisms: Vec<usize>,
}

/// Preservation of targets, sources, identities, the action and
/// composition.
pub fn check_multicat_map(src: &DMulticat, tgt: &DMulticat, map: &MulticatMap) -> Report {
    let mut report = Report::new("multicategory-map");
    let monad = src.monad();
    let mut shape = Check::new("map-shape");
    shape.record(
        map.on_objects.len() == src.objects().len()
            && map.on_morphisms.len() == src.morphisms().len()
            && map.on_objects.iter().all(|&x| x < tgt.objects().len())
            && map.on_morphisms.iter().all(|&f| f < tgt.morphisms().len()),
        || "tables have the wrong shape".into(),
    );
    let ok = shape.passed();
    report.push(shape);
    if !ok {
        return report;
    }
    let f0 = |x: &usize| map.on_objects[*x];
    let f1 = |f: usize| map.on_morphisms[f];
    let mut ends = Check::new("preserves-endpoints");
    let mut ids = Check::new("preserves-identity");
    let mut act = Check::new("preserves-action");
    let mut comp = Check::new("preserves-composition");
    for f in src.morphisms().indices() {
        ends.record(tgt.target(f1(f)) == f0(&src.target(f)), || format!("T at {}", src.show_morphism(f)));
        ends.record(*tgt.source(f1(f)) == monad.map(src.source(f), f0), || format!("S at {}", src.show_morphism(f)));
    }
    for x in src.objects().indices() {
        ids.record(tgt.identity(f0(&x)) == f1(src.identity(x)), || format!("I at {}", src.objects().label(x)));
    }
    for (f, d) in src.action_domain() {
        let lhs = src.act(f, &d).map(f1);
        let rhs = tgt.act(f1(f), &monad.map(&d, f0));
        record_eq(&mut act, lhs, rhs, || format!("({}, {})", src.show_morphism(f), src.show_elem(&d)));
    }
    for w in src.composables() {
        let lhs = src.compose(&w).map(f1);
        let image = Composable {
            outer: f1(w.outer),
            inner: w.inner.iter().map(|&g| f1(g)).collect(),
        };
        record_eq(&mut comp, lhs, tgt.compose(&image), || src.show_composable(&w));
    }
    for c in [ends, ids, act, comp] {
        report.push(c);
    }
    report
}

/// A classical multicategory: typed operations, identities, composition and
/// optionally a symmetric-group action.
#[derive(Debug, Clone)]
pub struct ClassicalMulticat {
    pub objects: Vec<String>,
    pub operations: Vec<Operation>,
    pub identities: Vec<usize>,
    /// `(f, σ) ↦ f·σ`, whose sources are `(a_{σ(1)}, …, a_{σ(n)})`.
    pub symmetry: Option<HashMap<(usize, Perm), usize>>,
    /// `(f, g⃗) ↦ γ(f; g⃗)`.
    pub composition: HashMap<(usize, Vec<usize>), usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Operation {
    pub name: String,
    pub target: usize,
    pub sources: Vec<usize>,
}

impl ClassicalMulticat {
    /// One operation for every typing with at most `bound` inputs; on a
    /// single object this is the multicategory of a commutative monoid.
    pub fn complete(objects: &[&str], bound: usize) -> Self {
        let n = objects.len();
        let mut operations = Vec::new();
        let mut index = HashMap::new();
        for arity in 0..=bound {
            for_each_index(&vec![n; arity], &mut |srcs| {
                for t in 0..n {
                    let names: Vec<&str> = srcs.iter().map(|&s| objects[s]).collect();
                    index.insert((t, srcs.to_vec()), operations.len());
                    operations.push(Operation {
                        name: format!("{}<-{}", objects[t], names.join(",")),
                        target: t,
                        sources: srcs.to_vec(),
                    });
                }
            });
        }
        let identities = (0..n).map(|t| index[&(t, vec![t])]).collect();
        let mut symmetry = HashMap::new();
        for (f, op) in operations.iter().enumerate() {
            for p in Perm::all(op.sources.len()) {
                let srcs: Vec<usize> = (0..op.sources.len()).map(|i| op.sources[p.apply(i)]).collect();
                symmetry.insert((f, p), index[&(op.target, srcs)]);
            }
        }
        let mut composition = HashMap::new();
        for (f, op) in operations.iter().enumerate() {
            let slots: Vec<Vec<usize>> = op
                .sources
                .iter()
                .map(|&x| (0..operations.len()).filter(|&g| operations[g].target == x).collect())
                .collect();
            let sizes: Vec<usize> = slots.iter().map(Vec::len).collect();
            for_each_index(&sizes, &mut |idx| {
                let inner: Vec<usize> = slots.iter().zip(idx).map(|(s, &i)| s[i]).collect();
                let srcs: Vec<usize> = inner.iter().flat_map(|&g| operations[g].sources.clone()).collect();
                if srcs.len() <= bound {
                    composition.insert((f, inner), index[&(op.target, srcs)]);
                }
            });
        }
        ClassicalMulticat {
            objects: objects.iter().map(|s| s.to_string()).collect(),
            operations,
            identities,
            symmetry: Some(symmetry),
            composition,
        }
    }

    /// One object whose only operation is its identity.
    pub fn identity_only() -> Self {
        ClassicalMulticat {
            objects: vec!["*".into()],
            operations: vec![Operation {
                name: "id".into(),
                target: 0,
                sources: vec![0],
            }],
            identities: vec![0],
            symmetry: Some(HashMap::from([((0, Perm::identity(1)), 0)])),
            composition: HashMap::from([((0, vec![0]), 0)]),
        }
    }

    /// The associative operad as a one-object symmetric multicategory: the
    /// `n`-ary operations are the orderings of `n` inputs.
    pub fn orderings(bound: usize) -> Self {
        let mut operations = Vec::new();
        let mut index = HashMap::new();
        for n in 0..=bound {
            for p in Perm::all(n) {
                index.insert(p.clone(), operations.len());
                operations.push(Operation {
                    name: p.to_string(),
                    target: 0,
                    sources: vec![0; n],
                });
            }
        }
        let perm_of: HashMap<usize, Perm> = index.iter().map(|(p, &i)| (i, p.clone())).collect();
        let mut symmetry = HashMap::new();
        for (f, p) in &perm_of {
            for s in Perm::all(p.arity()) {
                symmetry.insert((*f, s.clone()), index[&p.compose(&s)]);
            }
        }
        let mut composition = HashMap::new();
        for (f, p) in &perm_of {
            let k = p.arity();
            for_each_index(&vec![operations.len(); k], &mut |inner| {
                let sizes: Vec<usize> = inner.iter().map(|g| perm_of[g].arity()).collect();
                if sizes.iter().sum::<usize>() > bound {
                    return;
                }
                let blocks: Vec<Perm> = inner.iter().map(|g| perm_of[g].clone()).collect();
                let outer = block_perm(p, &sizes).expect("sizes match");
                composition.insert((*f, inner.to_vec()), index[&outer.compose(&block_sum(&blocks))]);
            });
        }
        ClassicalMulticat {
            objects: vec!["*".into()],
            operations,
            identities: vec![index[&Perm::identity(1)]],
            symmetry: Some(symmetry),
            composition,
        }
    }

    fn check_shape(&self) -> Result<()> {
        let (n0, n1) = (self.objects.len(), self.operations.len());
        for op in &self.operations {
            if op.target >= n0 || op.sources.iter().any(|&s| s >= n0) {
                return Err(Error::structural(format!("operation {} has an unknown object", op.name)));
            }
        }
        if self.identities.len() != n0 {
            return Err(Error::structural("one identity per object is required"));
        }
        for (x, &i) in self.identities.iter().enumerate() {
            let ok = self.operations.get(i).is_some_and(|op| op.target == x && op.sources == [x]);
            if !ok {
                return Err(Error::structural(format!("identity of {} is mistyped", self.objects[x])));
            }
        }
        for ((f, inner), &h) in &self.composition {
            let (Some(op), true) = (self.operations.get(*f), h < n1) else {
                return Err(Error::structural("composition refers to an unknown operation"));
            };
            if inner.len() != op.sources.len() {
                return Err(Error::structural(format!(
                    "arity mismatch: {} takes {} inputs, given {}",
                    op.name,
                    op.sources.len(),
                    inner.len()
                )));
            }
            for (&g, &x) in inner.iter().zip(&op.sources) {
                if self.operations.get(g).is_none_or(|o| o.target != x) {
                    return Err(Error::structural(format!("input of {} is mistyped", op.name)));
                }
            }
        }
        Ok(())
    }
}

/// Positions of an orbit member: a degree-1 element's action on the source
/// slots, computed by running its realignment on distinct letters.
fn slot_perm(monad: &Monad, aligned: &Elem) -> Result<Perm> {
    let n = aligned.arity();
    let letters = MonadElem::raw(1, aligned.op(), (0..n).collect());
    let src = monad.source_d(&letters)?;
    Ok(Perm::from_zero_based(src.into_entries()))
}

fn canonical_object(monad: &Monad, n: usize) -> Result<usize> {
    (0..monad.operad().size(0, n))
        .find(|&o| monad.is_canonical_op(0, n, o))
        .ok_or_else(|| Error::internal("level without canonical objects"))
}

fn encode(c: &ClassicalMulticat, monad: Arc<Monad>, symmetric: bool) -> Result<DMulticat> {
    c.check_shape()?;
    let objects = FinSet::new(c.objects.iter().map(|s| Label::atom(s.as_str())).collect())?;
    let morphisms = FinSet::new(c.operations.iter().map(|o| Label::atom(o.name.as_str())).collect())?;
    if objects.len() != c.objects.len() || morphisms.len() != c.operations.len() {
        return Err(Error::structural("names must be distinct"));
    }
    let obj: Vec<usize> = c.objects.iter().map(|s| objects.index_of(&Label::atom(s.as_str())).expect("present")).collect();
    let mor: Vec<usize> = c.operations.iter().map(|o| morphisms.index_of(&Label::atom(o.name.as_str())).expect("present")).collect();
    let mut back = vec![0; mor.len()];
    for (i, &f) in mor.iter().enumerate() {
        back[f] = i;
    }
    let mut source = Vec::with_capacity(mor.len());
    let mut target = Vec::with_capacity(mor.len());
    for &i in &back {
        let op = &c.operations[i];
        monad.operad().require_level(op.sources.len())?;
        let base = canonical_object(&monad, op.sources.len())?;
        let entries = op.sources.iter().map(|&s| obj[s]).collect();
        source.push(MonadElem::raw(0, base, entries));
        target.push(obj[op.target]);
    }
    let mut identity = vec![0; obj.len()];
    for (x, &i) in c.identities.iter().enumerate() {
        identity[obj[x]] = mor[i];
    }
    let mut m = DMulticat::new(
        monad.clone(),
        MulticatParts {
            objects,
            morphisms,
            target,
            source,
            identity,
            action: HashMap::new(),
            composition: HashMap::new(),
        },
    )?;
    for (f, d) in m.action_domain() {
        let aligned = monad.align_target(&d, m.source(f).op())?;
        let sigma = slot_perm(&monad, &aligned)?;
        let value = if sigma.is_identity() {
            Some(back[f])
        } else if symmetric {
            c.symmetry.as_ref().and_then(|s| s.get(&(back[f], sigma.clone()))).copied()
        } else {
            None
        };
        let value = value.ok_or_else(|| {
            Error::structural(format!("{} has no action by {sigma}", c.operations[back[f]].name))
        })?;
        let fd = mor[value];
        if m.source(fd) != &monad.source_d(&d)? || m.target(fd) != m.target(f) {
            return Err(Error::structural(format!(
                "{}·{sigma} = {} does not permute the sources",
                c.operations[back[f]].name, c.operations[value].name
            )));
        }
        m.parts.action.insert((f, d), fd);
    }
    for w in m.composables() {
        let key = (back[w.outer], w.inner.iter().map(|&g| back[g]).collect::<Vec<_>>());
        let h = c
            .composition
            .get(&key)
            .ok_or_else(|| Error::structural(format!("composition undefined at {}", m.show_composable(&w))))?;
        m.parts.composition.insert(w, mor[*h]);
    }
    if let Some(bad) = validate_multicat(&m).failures().next() {
        return Err(Error::structural(format!(
            "{}: {}",
            bad.name,
            bad.witnesses.first().cloned().unwrap_or_default()
        )));
    }
    Ok(m)
}

/// Encodes a symmetric multicategory over the Barratt-Eccles monad; the
/// action permutes the order in which sources are listed.
pub fn from_symmetric(c: &ClassicalMulticat, monad: Arc<Monad>) -> Result<DMulticat> {
    if !matches!(monad.operad().composition(), Composition::BarrattEccles) {
        return Err(Error::Precondition("symmetric multicategories need the Barratt-Eccles operad".into()));
    }
    if c.symmetry.is_none() {
        return Err(Error::structural("a symmetric multicategory needs a symmetric-group action"));
    }
    encode(c, monad, true)
}

/// Encodes a non-symmetric multicategory over the associative monad; any
/// symmetric-group action is ignored.
pub fn from_nonsymmetric(c: &ClassicalMulticat, monad: Arc<Monad>) -> Result<DMulticat> {
    if !matches!(monad.operad().composition(), Composition::Associative) {
        return Err(Error::Precondition("non-symmetric multicategories need the associative operad".into()));
    }
    encode(c, monad, false)
}
