//! Finite categories, functors between them, presheaves, nerve levels,
//! target and source covers, the Grothendieck construction, presheaf
//! transport along target covers, and quotients by free actions.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::finset::{check_pullback_square, FinFn, FinSet, GroupAction, Label, Perm};
use crate::report::{Check, Report};

/// A finite category stored as tables. `compose` maps `(g, f)` to `g∘f` and
/// is meant to be defined exactly when `S(g) = T(f)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinCategory {
    objects: FinSet,
    morphisms: FinSet,
    source: Vec<usize>,
    target: Vec<usize>,
    identity: Vec<usize>,
    compose: HashMap<(usize, usize), usize>,
    by_target: Vec<Vec<usize>>,
    by_source: Vec<Vec<usize>>,
}

impl FinCategory {
    /// Checks table shapes only; the category axioms are checked by
    /// [`FinCategory::validate`].
    pub fn new(
        objects: FinSet,
        morphisms: FinSet,
        source: Vec<usize>,
        target: Vec<usize>,
        identity: Vec<usize>,
        compose: HashMap<(usize, usize), usize>,
    ) -> Result<Self> {
        let (n0, n1) = (objects.len(), morphisms.len());
        if source.len() != n1 || target.len() != n1 || identity.len() != n0 {
            return Err(Error::structural("category tables have the wrong length"));
        }
        if source.iter().chain(&target).any(|&a| a >= n0) || identity.iter().any(|&m| m >= n1) {
            return Err(Error::structural("category table entry out of range"));
        }
        if compose.iter().any(|(&(g, f), &h)| g >= n1 || f >= n1 || h >= n1) {
            return Err(Error::structural("composition entry out of range"));
        }
        let mut by_target = vec![Vec::new(); n0];
        let mut by_source = vec![Vec::new(); n0];
        for m in 0..n1 {
            by_target[target[m]].push(m);
            by_source[source[m]].push(m);
        }
        Ok(FinCategory {
            objects,
            morphisms,
            source,
            target,
            identity,
            compose,
            by_target,
            by_source,
        })
    }

    /// Fills the composition table by evaluating `comp(g, f)` on every pair
    /// with `S(g) = T(f)`.
    pub fn from_composition(
        objects: FinSet,
        morphisms: FinSet,
        source: Vec<usize>,
        target: Vec<usize>,
        identity: Vec<usize>,
        mut comp: impl FnMut(usize, usize) -> Result<usize>,
    ) -> Result<Self> {
        let mut table = HashMap::new();
        for g in 0..morphisms.len() {
            for f in 0..morphisms.len() {
                if target.get(f) == source.get(g) {
                    table.insert((g, f), comp(g, f)?);
                }
            }
        }
        FinCategory::new(objects, morphisms, source, target, identity, table)
    }

    pub fn terminal() -> Self {
        FinCategory::discrete(FinSet::new(vec![Label::atom("*")]).expect("one label"))
    }

    /// Only identity morphisms, labelled like the objects.
    pub fn discrete(objects: FinSet) -> Self {
        let n = objects.len();
        FinCategory::from_composition(
            objects.clone(),
            objects,
            (0..n).collect(),
            (0..n).collect(),
            (0..n).collect(),
            |g, _| Ok(g),
        )
        .expect("discrete category")
    }

    /// The preorder category with a morphism `a → b` labelled `(a, b)`
    /// whenever `leq(a, b)`. `leq` must be reflexive and transitive.
    pub fn preorder(objects: FinSet, leq: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let n = objects.len();
        let mut pairs = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if leq(a, b) {
                    pairs.push((a, b));
                }
            }
        }
        let index: HashMap<(usize, usize), usize> = pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let morphisms = FinSet::new(
            pairs
                .iter()
                .map(|&(a, b)| Label::pair(objects.label(a).clone(), objects.label(b).clone()))
                .collect(),
        )?;
        let identity = (0..n)
            .map(|a| index.get(&(a, a)).copied().ok_or_else(|| Error::structural("preorder is not reflexive")))
            .collect::<Result<Vec<_>>>()?;
        FinCategory::from_composition(
            objects,
            morphisms,
            pairs.iter().map(|p| p.0).collect(),
            pairs.iter().map(|p| p.1).collect(),
            identity,
            |g, f| {
                let (a, _) = pairs[f];
                let (_, c) = pairs[g];
                index.get(&(a, c)).copied().ok_or_else(|| Error::structural("preorder is not transitive"))
            },
        )
    }

    /// Exactly one morphism between any two objects.
    pub fn chaotic(objects: FinSet) -> Self {
        FinCategory::preorder(objects, |_, _| true).expect("chaotic category")
    }

    /// A permutation group as a one-object category; morphisms are labelled
    /// by one-based image lists and compose as permutations.
    pub fn group(elements: &[Perm]) -> Result<Self> {
        let morphisms = FinSet::new(elements.iter().map(|p| Label::ints(p.one_based())).collect())?;
        let perms: Vec<Perm> = morphisms
            .labels()
            .iter()
            .map(|l| elements.iter().find(|p| &Label::ints(p.one_based()) == l).expect("listed").clone())
            .collect();
        let id = perms
            .iter()
            .position(Perm::is_identity)
            .ok_or_else(|| Error::structural("group lacks the identity"))?;
        let n = perms.len();
        FinCategory::from_composition(
            FinSet::new(vec![Label::atom("*")])?,
            morphisms.clone(),
            vec![0; n],
            vec![0; n],
            vec![id],
            |g, f| {
                morphisms
                    .index_of(&Label::ints(perms[g].compose(&perms[f]).one_based()))
                    .ok_or_else(|| Error::structural("group is not closed under composition"))
            },
        )
    }

    pub fn objects(&self) -> &FinSet {
        &self.objects
    }

    pub fn morphisms(&self) -> &FinSet {
        &self.morphisms
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn num_morphisms(&self) -> usize {
        self.morphisms.len()
    }

    pub fn source(&self, m: usize) -> usize {
        self.source[m]
    }

    pub fn target(&self, m: usize) -> usize {
        self.target[m]
    }

    pub fn identity(&self, a: usize) -> usize {
        self.identity[a]
    }

    /// `g∘f`, if the table defines it.
    pub fn compose(&self, g: usize, f: usize) -> Option<usize> {
        self.compose.get(&(g, f)).copied()
    }

    pub fn composition_table(&self) -> &HashMap<(usize, usize), usize> {
        &self.compose
    }

    /// Morphisms with target `b`, ascending.
    pub fn into_object(&self, b: usize) -> &[usize] {
        &self.by_target[b]
    }

    /// Morphisms with source `a`, ascending.
    pub fn out_of(&self, a: usize) -> &[usize] {
        &self.by_source[a]
    }

    pub fn hom(&self, a: usize, b: usize) -> Vec<usize> {
        self.by_source[a].iter().copied().filter(|&m| self.target[m] == b).collect()
    }

    pub fn source_fn(&self) -> FinFn {
        FinFn::new(self.morphisms.clone(), self.objects.clone(), self.source.clone()).expect("valid table")
    }

    pub fn target_fn(&self) -> FinFn {
        FinFn::new(self.morphisms.clone(), self.objects.clone(), self.target.clone()).expect("valid table")
    }

    pub fn identity_fn(&self) -> FinFn {
        FinFn::new(self.objects.clone(), self.morphisms.clone(), self.identity.clone()).expect("valid table")
    }

    fn mor(&self, m: usize) -> &Label {
        self.morphisms.label(m)
    }

    /// Checks every category axiom, with witnesses.
    pub fn validate(&self) -> Report {
        let mut report = Report::new("category");
        let mut ids = Check::new("identity-endpoints");
        for a in self.objects.indices() {
            let i = self.identity[a];
            ids.record(self.source[i] == a && self.target[i] == a, || {
                format!("identity {} at object {}", self.mor(i), self.objects.label(a))
            });
        }
        let mut domain = Check::new("composition-domain");
        for &(g, f) in self.compose.keys() {
            domain.record(self.source[g] == self.target[f], || {
                format!("composite defined on non-composable ({}, {})", self.mor(g), self.mor(f))
            });
        }
        let mut endpoints = Check::new("composition-endpoints");
        let mut left = Check::new("left-unit");
        let mut right = Check::new("right-unit");
        for f in self.morphisms.indices() {
            for &g in self.out_of(self.target[f]) {
                match self.compose(g, f) {
                    None => domain.fail(format!("missing composite ({}, {})", self.mor(g), self.mor(f))),
                    Some(h) => endpoints.record(self.source[h] == self.source[f] && self.target[h] == self.target[g], || {
                        format!("{}∘{} = {} has wrong endpoints", self.mor(g), self.mor(f), self.mor(h))
                    }),
                }
            }
            let (a, b) = (self.source[f], self.target[f]);
            left.record(self.compose(self.identity[b], f) == Some(f), || {
                format!("identity at object {} is not a left unit for {}", self.objects.label(b), self.mor(f))
            });
            right.record(self.compose(f, self.identity[a]) == Some(f), || {
                format!("identity at object {} is not a right unit for {}", self.objects.label(a), self.mor(f))
            });
        }
        let mut assoc = Check::new("associativity");
        for f in self.morphisms.indices() {
            for &g in self.out_of(self.target[f]) {
                for &h in self.out_of(self.target[g]) {
                    let lhs = self.compose(h, g).and_then(|hg| self.compose(hg, f));
                    let rhs = self.compose(g, f).and_then(|gf| self.compose(h, gf));
                    assoc.record(lhs.is_some() && lhs == rhs, || {
                        format!("({}∘{})∘{} differs from {}∘({}∘{})", self.mor(h), self.mor(g), self.mor(f), self.mor(h), self.mor(g), self.mor(f))
                    });
                }
            }
        }
        for c in [ids, domain, endpoints, left, right, assoc] {
            report.push(c);
        }
        report
    }
}

/// The composable strings of length `n`, written target-first:
/// `(g_1, …, g_n)` with `S(g_i) = T(g_{i+1})`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NerveLevel {
    pub n: usize,
    pub simplices: FinSet,
    /// Object indices for `n = 0`, morphism indices otherwise.
    pub strings: Vec<Vec<usize>>,
    /// Face maps to level `n - 1`, dropping the source-most and the
    /// target-most entry respectively; absent for `n = 0`.
    pub faces: Option<(FinFn, FinFn)>,
}

impl NerveLevel {
    pub fn target_face(&self) -> Option<&FinFn> {
        self.faces.as_ref().map(|f| &f.0)
    }

    pub fn source_face(&self) -> Option<&FinFn> {
        self.faces.as_ref().map(|f| &f.1)
    }
}

fn string_label(c: &FinCategory, n: usize, s: &[usize]) -> Label {
    match n {
        0 => c.objects.label(s[0]).clone(),
        1 => c.morphisms.label(s[0]).clone(),
        _ => Label::Tuple(s.iter().map(|&m| c.morphisms.label(m).clone()).collect()),
    }
}

fn composable_strings(c: &FinCategory, n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return c.objects.indices().map(|a| vec![a]).collect();
    }
    let mut out: Vec<Vec<usize>> = c.morphisms.indices().map(|m| vec![m]).collect();
    for _ in 1..n {
        let mut next = Vec::new();
        for s in out {
            let last = *s.last().expect("nonempty");
            for &f in c.into_object(c.source[last]) {
                let mut t = s.clone();
                t.push(f);
                next.push(t);
            }
        }
        out = next;
    }
    out
}

pub fn nerve_level(c: &FinCategory, n: usize) -> NerveLevel {
    let strings = composable_strings(c, n);
    let simplices = FinSet::new(strings.iter().map(|s| string_label(c, n, s)).collect()).expect("distinct strings");
    let faces = (n > 0).then(|| {
        if n == 1 {
            (c.target_fn(), c.source_fn())
        } else {
            let lower = composable_strings(c, n - 1);
            let index: HashMap<&[usize], usize> = lower.iter().enumerate().map(|(i, s)| (s.as_slice(), i)).collect();
            let lower_set = FinSet::new(lower.iter().map(|s| string_label(c, n - 1, s)).collect()).expect("distinct");
            let t = strings.iter().map(|s| index[&s[..n - 1]]).collect();
            let s = strings.iter().map(|s| index[&s[1..]]).collect();
            (
                FinFn::new(simplices.clone(), lower_set.clone(), t).expect("face"),
                FinFn::new(simplices.clone(), lower_set, s).expect("face"),
            )
        }
    });
    NerveLevel {
        n,
        simplices,
        strings,
        faces,
    }
}

/// A functor between finite categories, stored extensionally.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatFunctor {
    src: Arc<FinCategory>,
    tgt: Arc<FinCategory>,
    on_objects: Vec<usize>,
    on_morphisms: Vec<usize>,
}

impl CatFunctor {
    pub fn new(src: Arc<FinCategory>, tgt: Arc<FinCategory>, on_objects: Vec<usize>, on_morphisms: Vec<usize>) -> Result<Self> {
        if on_objects.len() != src.num_objects() || on_morphisms.len() != src.num_morphisms() {
            return Err(Error::structural("functor tables have the wrong length"));
        }
        if on_objects.iter().any(|&a| a >= tgt.num_objects()) || on_morphisms.iter().any(|&m| m >= tgt.num_morphisms()) {
            return Err(Error::structural("functor table entry out of range"));
        }
        Ok(CatFunctor {
            src,
            tgt,
            on_objects,
            on_morphisms,
        })
    }

    pub fn identity(c: Arc<FinCategory>) -> Self {
        let (n0, n1) = (c.num_objects(), c.num_morphisms());
        CatFunctor {
            src: c.clone(),
            tgt: c,
            on_objects: (0..n0).collect(),
            on_morphisms: (0..n1).collect(),
        }
    }

    pub fn src(&self) -> &Arc<FinCategory> {
        &self.src
    }

    pub fn tgt(&self) -> &Arc<FinCategory> {
        &self.tgt
    }

    pub fn on_object(&self, a: usize) -> usize {
        self.on_objects[a]
    }

    pub fn on_morphism(&self, m: usize) -> usize {
        self.on_morphisms[m]
    }

    pub fn object_fn(&self) -> FinFn {
        FinFn::new(self.src.objects.clone(), self.tgt.objects.clone(), self.on_objects.clone()).expect("valid table")
    }

    pub fn morphism_fn(&self) -> FinFn {
        FinFn::new(self.src.morphisms.clone(), self.tgt.morphisms.clone(), self.on_morphisms.clone()).expect("valid table")
    }

    pub fn validate(&self) -> Report {
        let (c, d) = (&*self.src, &*self.tgt);
        let mut report = Report::new("functor");
        let mut ends = Check::new("preserves-endpoints");
        for m in c.morphisms.indices() {
            let fm = self.on_morphisms[m];
            ends.record(
                d.source[fm] == self.on_objects[c.source[m]] && d.target[fm] == self.on_objects[c.target[m]],
                || format!("endpoints of {}", c.mor(m)),
            );
        }
        let mut ids = Check::new("preserves-identity");
        for a in c.objects.indices() {
            ids.record(self.on_morphisms[c.identity[a]] == d.identity[self.on_objects[a]], || {
                format!("identity at {}", c.objects.label(a))
            });
        }
        let mut comp = Check::new("preserves-composition");
        for (&(g, f), &h) in &c.compose {
            comp.record(d.compose(self.on_morphisms[g], self.on_morphisms[f]) == Some(self.on_morphisms[h]), || {
                format!("composite {}∘{}", c.mor(g), c.mor(f))
            });
        }
        for ch in [ends, ids, comp] {
            report.push(ch);
        }
        report
    }

    /// The square `(T, F)` is a pullback; the error is a witness.
    pub fn target_cover_witness(&self) -> std::result::Result<(), String> {
        check_pullback_square(&self.src.target_fn(), &self.morphism_fn(), &self.object_fn(), &self.tgt.target_fn())
    }

    pub fn source_cover_witness(&self) -> std::result::Result<(), String> {
        check_pullback_square(&self.src.source_fn(), &self.morphism_fn(), &self.object_fn(), &self.tgt.source_fn())
    }

    pub fn is_target_cover(&self) -> bool {
        self.target_cover_witness().is_ok()
    }

    pub fn is_source_cover(&self) -> bool {
        self.source_cover_witness().is_ok()
    }

    /// `(b, f') ↦ f` with `T(f) = b` and `F(f) = f'`, for a target cover.
    fn target_lifts(&self) -> Result<HashMap<(usize, usize), usize>> {
        self.target_cover_witness().map_err(|w| Error::Precondition(format!("not a target cover: {w}")))?;
        Ok(self
            .src
            .morphisms
            .indices()
            .map(|f| ((self.src.target[f], self.on_morphisms[f]), f))
            .collect())
    }

    /// The induced map on level `n` of the nerves.
    pub fn on_nerve(&self, n: usize) -> FinFn {
        let (lo, hi) = (nerve_level(&self.src, n), nerve_level(&self.tgt, n));
        let index: HashMap<&[usize], usize> = hi.strings.iter().enumerate().map(|(i, s)| (s.as_slice(), i)).collect();
        let table = lo
            .strings
            .iter()
            .map(|s| {
                let image: Vec<usize> = if n == 0 {
                    vec![self.on_objects[s[0]]]
                } else {
                    s.iter().map(|&m| self.on_morphisms[m]).collect()
                };
                index[image.as_slice()]
            })
            .collect();
        FinFn::new(lo.simplices, hi.simplices, table).expect("functor on strings")
    }

    /// The squares `(face, F_n)` from level `n` to `n - 1` are pullbacks,
    /// using target faces or source faces.
    pub fn nerve_square_witness(&self, n: usize, use_target: bool) -> std::result::Result<(), String> {
        assert!(n >= 1, "nerve squares start at level 1");
        let (lo, hi) = (nerve_level(&self.src, n), nerve_level(&self.tgt, n));
        let pick = |l: &NerveLevel| {
            if use_target {
                l.target_face().cloned()
            } else {
                l.source_face().cloned()
            }
            .expect("n >= 1")
        };
        check_pullback_square(&pick(&lo), &self.on_nerve(n), &self.on_nerve(n - 1), &pick(&hi))
    }
}

/// A presheaf over a finite category: a set `X` over the objects with a
/// right action `ξ(x, f)` defined when `ε(x) = T(f)`, landing over `S(f)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presheaf {
    base: Arc<FinCategory>,
    carrier: FinSet,
    eps: Vec<usize>,
    action: HashMap<(usize, usize), usize>,
}

impl Presheaf {
    pub fn new(base: Arc<FinCategory>, carrier: FinSet, eps: Vec<usize>, action: HashMap<(usize, usize), usize>) -> Result<Self> {
        if eps.len() != carrier.len() || eps.iter().any(|&a| a >= base.num_objects()) {
            return Err(Error::structural("presheaf structure map is malformed"));
        }
        if action.iter().any(|(&(x, f), &y)| x >= carrier.len() || f >= base.num_morphisms() || y >= carrier.len()) {
            return Err(Error::structural("presheaf action entry out of range"));
        }
        Ok(Presheaf {
            base,
            carrier,
            eps,
            action,
        })
    }

    /// Evaluates `act(x, f)` on every pair with `ε(x) = T(f)`.
    pub fn from_fn(
        base: Arc<FinCategory>,
        carrier: FinSet,
        eps: Vec<usize>,
        mut act: impl FnMut(usize, usize) -> Result<usize>,
    ) -> Result<Self> {
        let mut action = HashMap::new();
        if eps.len() != carrier.len() || eps.iter().any(|&a| a >= base.num_objects()) {
            return Err(Error::structural("presheaf structure map is malformed"));
        }
        for x in carrier.indices() {
            for &f in base.into_object(eps[x]) {
                action.insert((x, f), act(x, f)?);
            }
        }
        Presheaf::new(base, carrier, eps, action)
    }

    /// The objects acting on themselves: `X = C_0`, `ε = id`, `ξ(a, f) = S(f)`.
    pub fn objects_of(base: Arc<FinCategory>) -> Self {
        let c = base.clone();
        let n = base.num_objects();
        Presheaf::from_fn(base, c.objects.clone(), (0..n).collect(), |_, f| Ok(c.source[f])).expect("valid")
    }

    /// The morphisms under precomposition: `X = C_1`, `ε = S`, `ξ(g, f) = g∘f`.
    pub fn morphisms_of(base: Arc<FinCategory>) -> Result<Self> {
        let c = base.clone();
        Presheaf::from_fn(base, c.morphisms.clone(), c.source.clone(), |g, f| {
            c.compose(g, f).ok_or_else(|| Error::structural("composition table is not total"))
        })
    }

    pub fn base(&self) -> &Arc<FinCategory> {
        &self.base
    }

    pub fn carrier(&self) -> &FinSet {
        &self.carrier
    }

    pub fn eps(&self, x: usize) -> usize {
        self.eps[x]
    }

    pub fn eps_table(&self) -> &[usize] {
        &self.eps
    }

    pub fn act(&self, x: usize, f: usize) -> Option<usize> {
        self.action.get(&(x, f)).copied()
    }

    pub fn validate(&self) -> Report {
        let c = &*self.base;
        let mut report = Report::new("presheaf");
        let mut total = Check::new("action-domain");
        let mut over = Check::new("action-over-source");
        let mut unit = Check::new("action-unit");
        let mut assoc = Check::new("action-associativity");
        for &(x, f) in self.action.keys() {
            total.record(self.eps[x] == c.target[f], || {
                format!("action defined on ({}, {}) off the pullback", self.carrier.label(x), c.mor(f))
            });
        }
        for x in self.carrier.indices() {
            let a = self.eps[x];
            unit.record(self.act(x, c.identity[a]) == Some(x), || {
                format!("identity does not fix {}", self.carrier.label(x))
            });
            for &g in c.into_object(a) {
                let Some(y) = self.act(x, g) else {
                    total.fail(format!("action undefined on ({}, {})", self.carrier.label(x), c.mor(g)));
                    continue;
                };
                over.record(self.eps[y] == c.source[g], || {
                    format!("{}·{} lies over the wrong object", self.carrier.label(x), c.mor(g))
                });
                for &f in c.into_object(c.source[g]) {
                    let lhs = self.act(y, f);
                    let rhs = c.compose(g, f).and_then(|gf| self.act(x, gf));
                    assoc.record(lhs.is_some() && lhs == rhs, || {
                        format!("({}·{})·{}", self.carrier.label(x), c.mor(g), c.mor(f))
                    });
                }
            }
        }
        for ch in [total, over, unit, assoc] {
            report.push(ch);
        }
        report
    }
}

/// The category of elements `C∫X` with its projection, which is a target
/// cover whose object map is `ε`. Morphisms are pairs `(x, f)` with
/// `ε(x) = T(f)`, with target `x` and source `ξ(x, f)`.
pub fn grothendieck(p: &Presheaf) -> Result<(Arc<FinCategory>, CatFunctor)> {
    let report = p.validate();
    if let Some(bad) = report.failures().next() {
        return Err(Error::structural(format!(
            "invalid presheaf: {} {}",
            bad.name,
            bad.witnesses.first().cloned().unwrap_or_default()
        )));
    }
    let c = &*p.base;
    let eps = FinFn::new(p.carrier.clone(), c.objects.clone(), p.eps.clone())?;
    let (pairs, to_x, to_c) = crate::finset::pullback(&eps, &c.target_fn())?;
    let index: HashMap<(usize, usize), usize> = pairs.indices().map(|i| ((to_x.apply(i), to_c.apply(i)), i)).collect();
    let source = pairs.indices().map(|i| p.act(to_x.apply(i), to_c.apply(i)).expect("total")).collect();
    let identity = p.carrier.indices().map(|x| index[&(x, c.identity[p.eps[x]])]).collect();
    let cat = FinCategory::from_composition(
        p.carrier.clone(),
        pairs.clone(),
        source,
        to_x.table().to_vec(),
        identity,
        |g, f| {
            let h = c.compose(to_c.apply(g), to_c.apply(f)).ok_or_else(|| Error::structural("base composition missing"))?;
            Ok(index[&(to_x.apply(g), h)])
        },
    )?;
    let cat = Arc::new(cat);
    let proj = CatFunctor::new(cat.clone(), p.base.clone(), p.eps.clone(), to_c.table().to_vec())?;
    Ok((cat, proj))
}

/// Moves a presheaf over the target of a target cover `F` to one over its
/// source, given a factorization `ε' = F_0 ∘ eps_factor`. The new action is
/// `ξ(x, c) = ξ'(x, F_1 c)`.
pub fn transport_presheaf(f: &CatFunctor, p: &Presheaf, eps_factor: &[usize]) -> Result<Presheaf> {
    f.target_cover_witness().map_err(|w| Error::Precondition(format!("not a target cover: {w}")))?;
    if p.base != *f.tgt() {
        return Err(Error::Precondition("presheaf is not over the functor's target".into()));
    }
    if eps_factor.len() != p.carrier.len() || eps_factor.iter().any(|&a| a >= f.src.num_objects()) {
        return Err(Error::structural("factorization has the wrong shape"));
    }
    if let Some(x) = p.carrier.indices().find(|&x| f.on_objects[eps_factor[x]] != p.eps[x]) {
        return Err(Error::structural(format!("factorization fails at {}", p.carrier.label(x))));
    }
    let out = Presheaf::from_fn(f.src.clone(), p.carrier.clone(), eps_factor.to_vec(), |x, c| {
        p.act(x, f.on_morphisms[c]).ok_or_else(|| Error::structural("action not total"))
    })?;
    if let Some(bad) = out.validate().failures().next() {
        return Err(Error::structural(format!(
            "transported action is not a presheaf: {} {}",
            bad.name,
            bad.witnesses.first().cloned().unwrap_or_default()
        )));
    }
    Ok(out)
}

/// The inverse direction: a presheaf over the source of a target cover `F`
/// becomes one over its target with structure map `F_0 ∘ ε`, acting through
/// the unique lifts.
pub fn pushforward_presheaf(f: &CatFunctor, p: &Presheaf) -> Result<Presheaf> {
    let lifts = f.target_lifts()?;
    if p.base != *f.src() {
        return Err(Error::Precondition("presheaf is not over the functor's source".into()));
    }
    let eps = p.eps.iter().map(|&a| f.on_objects[a]).collect();
    Presheaf::from_fn(f.tgt.clone(), p.carrier.clone(), eps, |x, fp| {
        let lift = lifts[&(p.eps[x], fp)];
        p.act(x, lift).ok_or_else(|| Error::structural("action not total"))
    })
}

/// A group acting on a category by automorphism functors, freely.
#[derive(Debug, Clone)]
pub struct CategoryAction {
    category: Arc<FinCategory>,
    objects: GroupAction,
    morphisms: GroupAction,
}

impl CategoryAction {
    /// `on_objects[g][a]` and `on_morphisms[g][m]` give the action of the
    /// `g`-th group element. Freeness and functoriality are checked.
    pub fn new(
        category: Arc<FinCategory>,
        group: Vec<Perm>,
        on_objects: Vec<Vec<usize>>,
        on_morphisms: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let objects = GroupAction::new(group.clone(), category.objects.clone(), on_objects, true)?;
        let morphisms = GroupAction::new(group, category.morphisms.clone(), on_morphisms, true)?;
        let c = &*category;
        for (g, perm) in objects.group().iter().enumerate() {
            for m in c.morphisms.indices() {
                let gm = morphisms.act(g, m);
                if c.source[gm] != objects.act(g, c.source[m]) || c.target[gm] != objects.act(g, c.target[m]) {
                    return Err(Error::structural(format!("{perm} does not preserve the endpoints of {}", c.mor(m))));
                }
            }
            for a in c.objects.indices() {
                if morphisms.act(g, c.identity[a]) != c.identity[objects.act(g, a)] {
                    return Err(Error::structural(format!("{perm} does not preserve identities")));
                }
            }
            for (&(x, y), &h) in &c.compose {
                if c.compose(morphisms.act(g, x), morphisms.act(g, y)) != Some(morphisms.act(g, h)) {
                    return Err(Error::structural(format!("{perm} does not preserve composition")));
                }
            }
        }
        Ok(CategoryAction {
            category,
            objects,
            morphisms,
        })
    }

    pub fn category(&self) -> &Arc<FinCategory> {
        &self.category
    }

    pub fn on_objects(&self) -> &GroupAction {
        &self.objects
    }

    pub fn on_morphisms(&self) -> &GroupAction {
        &self.morphisms
    }

    /// The orbit category with its projection functor. Orbits are labelled by
    /// their minimal members.
    pub fn quotient(&self) -> Result<(Arc<FinCategory>, CatFunctor)> {
        let c = &*self.category;
        let (obj_orbits, q0) = self.objects.orbits();
        let (mor_orbits, q1) = self.morphisms.orbits();
        let rep_obj = |o: usize| c.objects.index_of(obj_orbits.label(o)).expect("rep");
        let rep_mor = |m: usize| c.morphisms.index_of(mor_orbits.label(m)).expect("rep");
        let source = mor_orbits.indices().map(|m| q0.apply(c.source[rep_mor(m)])).collect();
        let target = mor_orbits.indices().map(|m| q0.apply(c.target[rep_mor(m)])).collect();
        let identity = obj_orbits.indices().map(|o| q1.apply(c.identity[rep_obj(o)])).collect();
        let groups = self.objects.group().len();
        let quotient = FinCategory::from_composition(obj_orbits, mor_orbits.clone(), source, target, identity, |g, f| {
            let (g0, f0) = (rep_mor(g), rep_mor(f));
            let h = (0..groups)
                .find(|&h| c.target[self.morphisms.act(h, f0)] == c.source[g0])
                .ok_or_else(|| Error::internal("no translate is composable"))?;
            let gf = c
                .compose(g0, self.morphisms.act(h, f0))
                .ok_or_else(|| Error::structural("composition table is not total"))?;
            Ok(q1.apply(gf))
        })?;
        let quotient = Arc::new(quotient);
        let proj = CatFunctor::new(self.category.clone(), quotient.clone(), q0.table().to_vec(), q1.table().to_vec())?;
        Ok((quotient, proj))
    }
}

/// The functor induced on orbit categories by an equivariant functor.
pub fn quotient_functor(f: &CatFunctor, src: &CategoryAction, tgt: &CategoryAction) -> Result<CatFunctor> {
    if src.objects.group() != tgt.objects.group() || src.category != f.src || tgt.category != f.tgt {
        return Err(Error::Precondition("actions do not match the functor".into()));
    }
    if !src.objects.is_equivariant(&f.object_fn(), &tgt.objects) || !src.morphisms.is_equivariant(&f.morphism_fn(), &tgt.morphisms) {
        return Err(Error::structural("functor is not equivariant"));
    }
    let (qs, ps) = src.quotient()?;
    let (qt, pt) = tgt.quotient()?;
    let rep = |set: &FinSet, orbits: &FinSet, i: usize| set.index_of(orbits.label(i)).expect("rep");
    let on_objects = qs
        .objects
        .indices()
        .map(|o| pt.on_object(f.on_object(rep(&f.src.objects, &qs.objects, o))))
        .collect();
    let on_morphisms = qs
        .morphisms
        .indices()
        .map(|m| pt.on_morphism(f.on_morphism(rep(&f.src.morphisms, &qs.morphisms, m))))
        .collect();
    let _ = ps;
    CatFunctor::new(qs, qt, on_objects, on_morphisms)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sigma2() -> Arc<FinCategory> {
        let objs = FinSet::new(Perm::all(2).iter().map(|p| Label::ints(p.one_based())).collect()).unwrap();
        Arc::new(FinCategory::chaotic(objs))
    }

    #[test]
    fn terminal_category_is_valid() {
        assert!(FinCategory::terminal().validate().is_valid());
    }

    #[test]
    fn wrong_unit_names_the_object() {
        let c = FinCategory::preorder(FinSet::range(2), |a, b| a <= b).unwrap();
        let mut table = c.composition_table().clone();
        // id_1 ∘ (0→1) := id_0's slot is impossible; instead send it to id_1
        let f = c.hom(0, 1)[0];
        table.insert((c.identity(1), f), c.identity(1));
        let bad = FinCategory::new(
            c.objects().clone(),
            c.morphisms().clone(),
            (0..3).map(|m| c.source(m)).collect(),
            (0..3).map(|m| c.target(m)).collect(),
            vec![c.identity(0), c.identity(1)],
            table,
        )
        .unwrap();
        let report = bad.validate();
        let check = report.check("left-unit").unwrap();
        assert!(!check.passed());
        assert!(check.witnesses[0].contains("object 1"));
    }

    #[test]
    fn e_sigma_2_is_valid_with_eight_composable_pairs() {
        let c = sigma2();
        assert_eq!((c.num_objects(), c.num_morphisms()), (2, 4));
        assert!(c.validate().is_valid());
        assert_eq!(c.composition_table().len(), 8);
        assert_eq!(nerve_level(&c, 2).simplices.len(), 8);
    }

    #[test]
    fn low_nerve_levels() {
        let c = sigma2();
        assert_eq!(nerve_level(&c, 0).simplices, *c.objects());
        assert_eq!(nerve_level(&c, 1).simplices, *c.morphisms());
        let n3 = nerve_level(&c, 3);
        assert_eq!(n3.simplices.len(), 16);
        let (t, s) = n3.faces.unwrap();
        // dropping either end of a string leaves a string
        assert_eq!(t.tgt().len(), 8);
        assert_eq!(s.tgt().len(), 8);
    }

    #[test]
    fn covers() {
        let c = sigma2();
        assert!(CatFunctor::identity(c.clone()).is_target_cover());
        let t = Arc::new(FinCategory::terminal());
        let bang = CatFunctor::new(c, t, vec![0, 0], vec![0; 4]).unwrap();
        assert!(bang.validate().is_valid());
        assert!(!bang.is_target_cover());
        assert!(bang.target_cover_witness().unwrap_err().contains("2 lifts"));
    }

    fn free_orbit_over_sigma2() -> Presheaf {
        // X = {p, q} over the two objects, every arrow acts by the unique
        // element over its source
        let c = sigma2();
        let x = FinSet::new(vec!["p".into(), "q".into()]).unwrap();
        let c2 = c.clone();
        Presheaf::from_fn(c, x, vec![0, 1], |_, f| Ok(c2.source(f))).unwrap()
    }

    #[test]
    fn grothendieck_examples() {
        let p = free_orbit_over_sigma2();
        assert!(p.validate().is_valid());
        let (cat, proj) = grothendieck(&p).unwrap();
        assert_eq!((cat.num_objects(), cat.num_morphisms()), (2, 4));
        assert!(cat.validate().is_valid());
        assert!(proj.validate().is_valid());
        assert!(proj.is_target_cover());

        let c = sigma2();
        let (cat, proj) = grothendieck(&Presheaf::objects_of(c.clone())).unwrap();
        assert_eq!(cat.num_morphisms(), c.num_morphisms());
        assert!(proj.morphism_fn().is_bijective());

        let t = Arc::new(FinCategory::terminal());
        let x = FinSet::new(vec!["u".into(), "v".into(), "w".into()]).unwrap();
        let p = Presheaf::from_fn(t, x, vec![0; 3], |x, _| Ok(x)).unwrap();
        let (cat, _) = grothendieck(&p).unwrap();
        assert_eq!(cat.num_morphisms(), 3);
    }

    #[test]
    fn grothendieck_rejects_invalid_presheaf() {
        let c = sigma2();
        let x = FinSet::new(vec!["p".into(), "q".into()]).unwrap();
        let c2 = c.clone();
        // lands over the target instead of the source
        let p = Presheaf::from_fn(c, x, vec![0, 1], |_, f| Ok(c2.target(f))).unwrap();
        assert!(matches!(grothendieck(&p), Err(Error::Structural(_))));
    }

    #[test]
    fn transport_round_trip_and_identity() {
        let p = free_orbit_over_sigma2();
        let id = CatFunctor::identity(p.base().clone());
        assert_eq!(transport_presheaf(&id, &p, p.eps_table()).unwrap(), p);

        let (cat, proj) = grothendieck(&p).unwrap();
        let over_cat = Presheaf::objects_of(cat.clone());
        let down = pushforward_presheaf(&proj, &over_cat).unwrap();
        assert!(down.validate().is_valid());
        let back = transport_presheaf(&proj, &down, over_cat.eps_table()).unwrap();
        assert_eq!(back, over_cat);
    }

    #[test]
    fn transport_requires_cover_and_factorization() {
        let c = sigma2();
        let t = Arc::new(FinCategory::terminal());
        let bang = CatFunctor::new(c, t.clone(), vec![0, 0], vec![0; 4]).unwrap();
        let p = Presheaf::objects_of(t);
        assert!(matches!(transport_presheaf(&bang, &p, &[0]), Err(Error::Precondition(_))));

        let p = free_orbit_over_sigma2();
        let id = CatFunctor::identity(p.base().clone());
        assert!(matches!(transport_presheaf(&id, &p, &[1, 0]), Err(Error::Structural(_))));
    }

    fn swap_action(c: Arc<FinCategory>) -> Result<CategoryAction> {
        // left translation by Σ₂ on objects, diagonally on arrows
        let swap = |a: usize| 1 - a;
        let mor = |m: usize| {
            let (s, t) = (c.source(m), c.target(m));
            c.hom(swap(s), swap(t))[0]
        };
        CategoryAction::new(
            c.clone(),
            Perm::all(2),
            vec![vec![0, 1], vec![1, 0]],
            vec![(0..4).collect(), (0..4).map(mor).collect()],
        )
    }

    #[test]
    fn quotient_of_e_sigma_2() {
        let c = sigma2();
        let act = swap_action(c.clone()).unwrap();
        let (q, proj) = act.quotient().unwrap();
        assert_eq!((q.num_objects(), q.num_morphisms()), (1, 2));
        assert!(q.validate().is_valid());
        assert!(proj.validate().is_valid());
    }

    #[test]
    fn quotient_by_trivial_group_is_identity() {
        let c = sigma2();
        let act = CategoryAction::new(c.clone(), vec![Perm::identity(2)], vec![vec![0, 1]], vec![(0..4).collect()]).unwrap();
        let (q, _) = act.quotient().unwrap();
        assert_eq!(*q, *c);
    }

    #[test]
    fn quotient_rejects_non_free_action() {
        let t = Arc::new(FinCategory::terminal());
        let err = CategoryAction::new(t, Perm::all(2), vec![vec![0], vec![0]], vec![vec![0], vec![0]]).unwrap_err();
        assert!(matches!(err, Error::NotFree(_)));
    }

    #[test]
    fn quotient_of_target_cover_is_target_cover() {
        // C∫X → EΣ₂ for the free orbit, with Σ₂ swapping p, q
        let p = free_orbit_over_sigma2();
        let (_, proj) = grothendieck(&p).unwrap();
        let top = proj.src().clone();
        let base = proj.tgt().clone();
        let base_act = swap_action(base.clone()).unwrap();
        let swap_top = |m: usize| {
            let image = base_act.on_morphisms().act(1, proj.on_morphism(m));
            let x = 1 - top.target(m);
            (0..top.num_morphisms())
                .find(|&n| top.target(n) == x && proj.on_morphism(n) == image)
                .unwrap()
        };
        let n1 = top.num_morphisms();
        let top_act = CategoryAction::new(
            top.clone(),
            Perm::all(2),
            vec![vec![0, 1], vec![1, 0]],
            vec![(0..n1).collect(), (0..n1).map(swap_top).collect()],
        )
        .unwrap();
        let qf = quotient_functor(&proj, &top_act, &base_act).unwrap();
        assert!(qf.validate().is_valid());
        assert!(qf.is_target_cover());
        assert!(qf.is_source_cover());
    }

    #[test]
    fn nerve_squares_of_a_cover_are_pullbacks() {
        let p = free_orbit_over_sigma2();
        let (_, proj) = grothendieck(&p).unwrap();
        for n in 1..=3 {
            assert!(proj.nerve_square_witness(n, true).is_ok());
        }
    }

    #[test]
    fn objects_and_morphisms_over_a_cover() {
        let p = free_orbit_over_sigma2();
        let (_, proj) = grothendieck(&p).unwrap();
        let top = proj.src().clone();
        let objs = pushforward_presheaf(&proj, &Presheaf::objects_of(top.clone())).unwrap();
        assert!(objs.validate().is_valid());
        let mors = pushforward_presheaf(&proj, &Presheaf::morphisms_of(top.clone()).unwrap()).unwrap();
        assert!(mors.validate().is_valid());
        // consistent with left composition: (h∘g)·f' = h∘(g·f')
        for g in top.morphisms().indices() {
            for &h in top.out_of(top.target(g)) {
                let hg = top.compose(h, g).unwrap();
                for &fp in proj.tgt().into_object(proj.on_object(top.source(g))) {
                    let lhs = mors.act(hg, fp).unwrap();
                    let rhs = top.compose(h, mors.act(g, fp).unwrap()).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn group_category_is_valid() {
        let g = FinCategory::group(&Perm::all(3)).unwrap();
        assert_eq!(g.num_morphisms(), 6);
        assert!(g.validate().is_valid());
    }
}
