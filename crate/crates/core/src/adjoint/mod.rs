//! The free `𝔻`-algebra `LM` on a `𝔻`-multicategory `M`.
//!
//! Objects are `𝔻₀M₀`. A morphism of the provisional construction `L̂M` is a
//! pair `(φ, σ)` with `φ ∈ 𝔻₀M₁` and `σ ∈ 𝔻₁M₀` such that
//! `T_𝔻σ = μ(𝔻₀S φ)`; it runs from `S_𝔻σ` to `𝔻₀T φ`. The morphisms of `LM`
//! are the classes of the equivalence generated by sliding the action of
//! `M` across the pair, `([p; fᵢ·τᵢ], σ) ~ ([p; fᵢ], μ(I_𝔻[p; τᵢ]) ∘ σ)`.
//!
//! Hom-sets are built on demand and cached. Every class is represented by
//! its smallest member.

mod unit;

pub use unit::{
    check_adjunction, check_counit, check_triangles, counit_morphism, unit_map, witness_hat_unit_failure,
    HatUnitFailure,
};

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, Mutex};

use crate::dalgebra::{ActionMap, DAlgebra};
use crate::dmulticat::{Composable, DMulticat};
use crate::error::{Error, Result};
use crate::fincat::FinCategory;
use crate::finset::{FinSet, Label, UnionFind};
use crate::opmonad::{Monad, MonadElem};
use crate::report::{Check, Report};

type Elem = MonadElem<usize>;

/// A morphism `(φ, σ)` of `L̂M`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HatMorphism {
    /// `φ ∈ 𝔻₀M₁`.
    pub components: Elem,
    /// `σ ∈ 𝔻₁M₀` with `T_𝔻σ = μ(𝔻₀S φ)`.
    pub arrangement: Elem,
}

/// Whether morphisms are taken up to the sliding relation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Provisional,
    Quotient,
}

/// One hom-set of `L̂M` with its partition into classes.
#[derive(Debug)]
pub struct HomSet {
    pub source: Elem,
    pub target: Elem,
    /// Sorted.
    pub elements: Vec<HatMorphism>,
    index: HashMap<HatMorphism, usize>,
    representative: Vec<usize>,
    /// Number of relation instances generated.
    pub relations: usize,
}

impl HomSet {
    pub fn position(&self, h: &HatMorphism) -> Option<usize> {
        self.index.get(h).copied()
    }

    /// The smallest member of the class of `h`.
    pub fn class_of(&self, h: &HatMorphism) -> Option<&HatMorphism> {
        self.position(h).map(|i| &self.elements[self.representative[i]])
    }

    pub fn representatives(&self) -> Vec<&HatMorphism> {
        self.elements
            .iter()
            .enumerate()
            .filter(|(i, _)| self.representative[*i] == *i)
            .map(|(_, h)| h)
            .collect()
    }

    pub fn members(&self, rep: &HatMorphism) -> Vec<&HatMorphism> {
        let Some(r) = self.position(rep) else { return Vec::new() };
        let r = self.representative[r];
        self.elements
            .iter()
            .enumerate()
            .filter(|(i, _)| self.representative[*i] == r)
            .map(|(_, h)| h)
            .collect()
    }
}

/// `L̂M` or `LM`, truncated at `bound` in both arity and object weight.
pub struct FreeAlgebra {
    multicat: Arc<DMulticat>,
    mode: Mode,
    bound: usize,
    cache: Mutex<HashMap<(Elem, Elem), Arc<HomSet>>>,
}

impl std::fmt::Debug for FreeAlgebra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FreeAlgebra")
            .field("mode", &self.mode)
            .field("bound", &self.bound)
            .finish_non_exhaustive()
    }
}

impl FreeAlgebra {
    pub fn new(multicat: Arc<DMulticat>, mode: Mode, bound: usize) -> Result<Self> {
        let monad = multicat.monad();
        if !monad.is_free() {
            return Err(Error::NotFree(format!("{} acts with fixed points", monad.operad().name())));
        }
        monad.operad().require_level(bound)?;
        Ok(FreeAlgebra {
            multicat,
            mode,
            bound,
            cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn multicat(&self) -> &Arc<DMulticat> {
        &self.multicat
    }

    pub fn monad(&self) -> &Arc<Monad> {
        self.multicat.monad()
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    fn require_object(&self, x: &Elem) -> Result<()> {
        let w = self.multicat.weight(x).max(x.arity());
        if w > self.bound {
            return Err(Error::BoundExceeded {
                arity: w,
                bound: self.bound,
            });
        }
        Ok(())
    }

    /// Objects within the truncation, sorted.
    pub fn objects(&self) -> Vec<Elem> {
        let m = &self.multicat;
        let letters: Vec<usize> = m.objects().indices().collect();
        let monad = self.monad();
        monad
            .elements_over(0, &letters, |&x| m.weight(&monad.eta(0, x)), self.bound, self.bound)
            .into_iter()
            .filter(|x| self.require_object(x).is_ok())
            .collect()
    }

    pub fn source(&self, h: &HatMorphism) -> Result<Elem> {
        self.monad().source_d(&h.arrangement)
    }

    pub fn target(&self, h: &HatMorphism) -> Elem {
        self.monad().map(&h.components, |&f| self.multicat.target(f))
    }

    /// `μ(𝔻₀S φ)`, the object the arrangement must land on.
    fn spread(&self, components: &Elem) -> Result<Elem> {
        let m = &self.multicat;
        let monad = self.monad();
        monad.mu(&monad.map(components, |&f| m.source(f).clone()))
    }

    /// Checks the defining equation of a morphism of `L̂M`.
    pub fn is_morphism(&self, h: &HatMorphism) -> bool {
        h.components.degree() == 0
            && h.arrangement.degree() == 1
            && matches!(
                (self.spread(&h.components), self.monad().target_d(&h.arrangement)),
                (Ok(a), Ok(b)) if a == b
            )
    }

    /// The hom-set from `a` to `b`, built on first use.
    pub fn hom(&self, a: &Elem, b: &Elem) -> Result<Arc<HomSet>> {
        let key = (a.clone(), b.clone());
        if let Some(h) = self.cache.lock().expect("cache lock").get(&key) {
            return Ok(h.clone());
        }
        let built = Arc::new(self.build_hom(a, b)?);
        self.cache.lock().expect("cache lock").insert(key, built.clone());
        Ok(built)
    }

    /// Component lists `[q; fᵢ]` over `b` whose sources have total arity
    /// `arity`.
    fn component_lists(&self, b: &Elem, arity: usize) -> Vec<Vec<usize>> {
        fn go(m: &DMulticat, slots: &[usize], left: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            let Some((&y, rest)) = slots.split_first() else {
                if left == 0 {
                    out.push(acc.clone());
                }
                return;
            };
            for &f in m.morphisms_into(y) {
                let n = m.source(f).arity();
                if n <= left {
                    acc.push(f);
                    go(m, rest, left - n, acc, out);
                    acc.pop();
                }
            }
        }
        let mut out = Vec::new();
        go(&self.multicat, b.entries(), arity, &mut Vec::new(), &mut out);
        out
    }

    fn build_hom(&self, a: &Elem, b: &Elem) -> Result<HomSet> {
        self.require_object(a)?;
        self.require_object(b)?;
        let monad = self.monad();
        let m = &self.multicat;
        let q = b.op();
        let lists = self.component_lists(b, a.arity());
        let mut set = BTreeSet::new();
        for fs in &lists {
            let components = MonadElem::raw(0, q, fs.clone());
            let t = self.spread(&components)?;
            for sigma in monad.morphisms_into(&t) {
                if monad.source_d(&sigma)? == *a {
                    set.insert(HatMorphism {
                        components: components.clone(),
                        arrangement: sigma,
                    });
                }
            }
        }
        let elements: Vec<HatMorphism> = set.into_iter().collect();
        let index: HashMap<HatMorphism, usize> = elements.iter().cloned().enumerate().map(|(i, h)| (h, i)).collect();
        let mut classes = UnionFind::new(elements.len());
        let mut relations = 0;
        if self.mode == Mode::Quotient {
            let locate = |h: &HatMorphism| {
                index.get(h).copied().ok_or_else(|| {
                    Error::internal(format!("a relation leg leaves the hom-set: {}", self.show(h)))
                })
            };
            for fs in &lists {
                let slots: Vec<Vec<Elem>> = fs.iter().map(|&f| monad.morphisms_into(m.source(f))).collect();
                let sizes: Vec<usize> = slots.iter().map(Vec::len).collect();
                let mut failure = None;
                crate::catoperad::for_each_index(&sizes, &mut |idx| {
                    if failure.is_some() {
                        return;
                    }
                    let taus: Vec<Elem> = slots.iter().zip(idx).map(|(s, &i)| s[i].clone()).collect();
                    let mut step = || -> Result<usize> {
                        let acted = fs
                            .iter()
                            .zip(&taus)
                            .map(|(&f, tau)| m.act(f, tau))
                            .collect::<Result<Vec<_>>>()?;
                        let slide = monad.mu(&monad.identity_d(&MonadElem::raw(0, q, taus.clone()))?)?;
                        let u = monad.source_d(&slide)?;
                        let mut count = 0;
                        for sigma in monad.morphisms_into(&u) {
                            if monad.source_d(&sigma)? != *a {
                                continue;
                            }
                            let left = HatMorphism {
                                components: monad.canonicalize(MonadElem::raw(0, q, acted.clone())),
                                arrangement: sigma.clone(),
                            };
                            let right = HatMorphism {
                                components: MonadElem::raw(0, q, fs.clone()),
                                arrangement: monad.compose_d(&slide, &sigma)?,
                            };
                            classes.union(locate(&left)?, locate(&right)?);
                            count += 1;
                        }
                        Ok(count)
                    };
                    match step() {
                        Ok(n) => relations += n,
                        Err(e) => failure = Some(e),
                    }
                });
                if let Some(e) = failure {
                    return Err(e);
                }
            }
        }
        Ok(HomSet {
            source: a.clone(),
            target: b.clone(),
            representative: classes.min_representatives(),
            elements,
            index,
            relations,
        })
    }

    /// The class representative of `h` (`h` itself for `L̂M`).
    pub fn normalize(&self, h: HatMorphism) -> Result<HatMorphism> {
        if self.mode == Mode::Provisional {
            return Ok(h);
        }
        let hom = self.hom(&self.source(&h)?, &self.target(&h))?;
        hom.class_of(&h)
            .cloned()
            .ok_or_else(|| Error::internal(format!("{} is missing from its hom-set", self.show(&h))))
    }

    /// Whether two morphisms of `L̂M` become equal in `LM`. Morphisms with
    /// different endpoints are never equivalent.
    pub fn equivalent(&self, x: &HatMorphism, y: &HatMorphism) -> Result<bool> {
        let (sx, sy) = (self.source(x)?, self.source(y)?);
        if sx != sy || self.target(x) != self.target(y) {
            return Ok(false);
        }
        let quotient = FreeAlgebra::new(self.multicat.clone(), Mode::Quotient, self.bound)?;
        let hom = if self.mode == Mode::Quotient { self.hom(&sx, &self.target(x))? } else { quotient.hom(&sx, &self.target(x))? };
        match (hom.position(x), hom.position(y)) {
            (Some(i), Some(j)) => Ok(hom.representative[i] == hom.representative[j]),
            _ => Err(Error::structural("not a morphism of the free construction")),
        }
    }

    /// Why two morphisms cannot be compared, if they have different ends.
    pub fn endpoint_mismatch(&self, x: &HatMorphism, y: &HatMorphism) -> Result<Option<String>> {
        let (sx, sy) = (self.source(x)?, self.source(y)?);
        let (tx, ty) = (self.target(x), self.target(y));
        let obj = |e: &Elem| self.multicat.show_elem(e);
        Ok(if sx != sy {
            Some(format!("sources differ: {} vs {}", obj(&sx), obj(&sy)))
        } else if tx != ty {
            Some(format!("targets differ: {} vs {}", obj(&tx), obj(&ty)))
        } else {
            None
        })
    }

    /// `(𝔻₀I x, I_𝔻 x)`.
    pub fn identity(&self, x: &Elem) -> Result<HatMorphism> {
        let m = &self.multicat;
        self.normalize(HatMorphism {
            components: self.monad().map(x, |&y| m.identity(y)),
            arrangement: self.monad().identity_d(x)?,
        })
    }

    /// `g ∘ f`: slide `g`'s arrangement past `f`'s components with `χ`,
    /// compose in `M` slot by slot and concatenate the arrangements.
    pub fn compose(&self, g: &HatMorphism, f: &HatMorphism) -> Result<HatMorphism> {
        let monad = self.monad();
        let m = &self.multicat;
        if self.source(g)? != self.target(f) {
            return Err(Error::structural(format!("{} and {} are not composable", self.show(g), self.show(f))));
        }
        let (top, theta) = monad.chi(&g.arrangement, &f.components, |&h| m.target(h), |&h| m.source(h).clone())?;
        let p = g.components.op();
        let outer = g.components.entries();
        let inner_ops: Vec<(usize, usize)> = outer.iter().map(|&h| (m.source(h).arity(), m.source(h).op())).collect();
        let raw_op = monad.operad().compose(0, p, &inner_ops)?;
        let aligned = monad.realign(&top, raw_op)?;
        let mut rest = aligned.entries();
        let mut composites = Vec::with_capacity(outer.len());
        for (&h, &(n, _)) in outer.iter().zip(&inner_ops) {
            let (block, tail) = rest.split_at(n);
            rest = tail;
            let w = Composable {
                outer: h,
                inner: block.to_vec(),
            };
            composites.push(m.compose(&w).map_err(|e| {
                if m.within_bound(&w) {
                    e
                } else {
                    Error::BoundExceeded {
                        arity: block.iter().map(|&k| m.source(k).arity()).sum(),
                        bound: m.max_arity(),
                    }
                }
            })?);
        }
        self.normalize(HatMorphism {
            components: monad.canonicalize(MonadElem::raw(0, p, composites)),
            arrangement: monad.compose_d(&theta, &f.arrangement)?,
        })
    }

    /// `ξ₀ = μ`.
    pub fn act_objects(&self, w: &MonadElem<Elem>) -> Result<Elem> {
        let x = self.monad().mu(w)?;
        self.require_object(&x)?;
        Ok(x)
    }

    /// `ξ₁[m; (φᵢ, σᵢ)] = (μ[T m; φᵢ], μ[m; σᵢ])`.
    pub fn act_morphisms(&self, w: &MonadElem<HatMorphism>) -> Result<HatMorphism> {
        let monad = self.monad();
        let components = monad.mu(&monad.target_d_with(w, |h| h.components.clone())?)?;
        let arrangement = monad.mu(&monad.map(w, |h| h.arrangement.clone()))?;
        let h = HatMorphism {
            components,
            arrangement,
        };
        self.require_object(&self.source(&h)?)?;
        self.require_object(&self.target(&h))?;
        self.normalize(h)
    }

    pub fn show(&self, h: &HatMorphism) -> String {
        let m = &self.multicat;
        let monad = self.monad();
        format!(
            "({}, {})",
            monad.show(&h.components, |&f| m.morphisms().label(f).to_string()),
            m.show_elem(&h.arrangement)
        )
    }
}

fn elem_label(monad: &Monad, e: &Elem, letters: &FinSet) -> Label {
    let op = monad.operad().label(e.degree(), e.arity(), e.op()).clone();
    Label::Tuple(vec![op, Label::Tuple(e.entries().iter().map(|&x| letters.label(x).clone()).collect())])
}

/// `LM` (or `L̂M`) cut down to a finite `𝔻`-algebra: objects of weight at
/// most the bound and one morphism per class between them.
#[derive(Debug, Clone)]
pub struct Truncation {
    pub free: Arc<FreeAlgebra>,
    pub objects: Vec<Elem>,
    pub morphisms: Vec<HatMorphism>,
    pub object_index: Arc<HashMap<Elem, usize>>,
    pub morphism_index: Arc<HashMap<HatMorphism, usize>>,
    pub algebra: DAlgebra,
}

impl Truncation {
    pub fn object(&self, x: &Elem) -> Result<usize> {
        self.object_index.get(x).copied().ok_or(Error::BoundExceeded {
            arity: x.arity(),
            bound: self.free.bound,
        })
    }

    /// The index of the class of `h`.
    pub fn morphism(&self, h: &HatMorphism) -> Result<usize> {
        let rep = self.free.normalize(h.clone())?;
        self.morphism_index.get(&rep).copied().ok_or(Error::BoundExceeded {
            arity: h.arrangement.arity(),
            bound: self.free.bound,
        })
    }
}

pub fn truncate(free: Arc<FreeAlgebra>) -> Result<Truncation> {
    let m = free.multicat().clone();
    let monad = free.monad().clone();
    let objs = free.objects();
    let obj_labels: Vec<Label> = objs.iter().map(|x| elem_label(&monad, x, m.objects())).collect();
    let object_set = FinSet::new(obj_labels.clone())?;
    let mut objects = objs.clone();
    for (i, l) in obj_labels.iter().enumerate() {
        objects[object_set.index_of(l).expect("present")] = objs[i].clone();
    }
    let mut found = Vec::new();
    for a in &objects {
        for b in &objects {
            found.extend(free.hom(a, b)?.representatives().into_iter().cloned());
        }
    }
    let mor_labels: Vec<Label> = found
        .iter()
        .map(|h| {
            Label::pair(
                elem_label(&monad, &h.components, m.morphisms()),
                elem_label(&monad, &h.arrangement, m.objects()),
            )
        })
        .collect();
    let morphism_set = FinSet::new(mor_labels.clone())?;
    let mut morphisms = found.clone();
    for (i, l) in mor_labels.iter().enumerate() {
        morphisms[morphism_set.index_of(l).expect("present")] = found[i].clone();
    }
    let object_index: Arc<HashMap<Elem, usize>> =
        Arc::new(objects.iter().cloned().enumerate().map(|(i, x)| (x, i)).collect());
    let morphism_index: Arc<HashMap<HatMorphism, usize>> =
        Arc::new(morphisms.iter().cloned().enumerate().map(|(i, h)| (h, i)).collect());
    let locate_obj = |x: &Elem| object_index.get(x).copied().ok_or_else(|| Error::internal("object outside the truncation"));
    let source = morphisms.iter().map(|h| locate_obj(&free.source(h)?)).collect::<Result<Vec<_>>>()?;
    let target = morphisms.iter().map(|h| locate_obj(&free.target(h))).collect::<Result<Vec<_>>>()?;
    let identity = objects
        .iter()
        .map(|x| {
            let h = free.identity(x)?;
            morphism_index.get(&h).copied().ok_or_else(|| Error::internal("identity outside the truncation"))
        })
        .collect::<Result<Vec<_>>>()?;
    let carrier = FinCategory::from_composition(object_set, morphism_set, source, target, identity, |g, f| {
        let h = free.compose(&morphisms[g], &morphisms[f])?;
        morphism_index
            .get(&h)
            .copied()
            .ok_or_else(|| Error::internal(format!("composite {} outside the truncation", free.show(&h))))
    })?;
    let bound = free.bound;
    let (f0, objs0, idx0) = (free.clone(), Arc::new(objects.clone()), object_index.clone());
    let on_objects: ActionMap = Arc::new(move |w| {
        let x = f0.act_objects(&f0.monad().map(w, |&i| objs0[i].clone()))?;
        idx0.get(&x).copied().ok_or(Error::BoundExceeded { arity: x.arity(), bound })
    });
    let (f1, mors1, idx1) = (free.clone(), Arc::new(morphisms.clone()), morphism_index.clone());
    let on_morphisms: ActionMap = Arc::new(move |w| {
        let h = f1.act_morphisms(&f1.monad().map(w, |&i| mors1[i].clone()))?;
        idx1.get(&h).copied().ok_or(Error::BoundExceeded {
            arity: h.arrangement.arity(),
            bound,
        })
    });
    let weights = objects.iter().map(|x| m.weight(x).max(x.arity())).collect();
    let algebra = DAlgebra::new(monad, Arc::new(carrier), on_objects, on_morphisms).with_weights(weights, bound)?;
    Ok(Truncation {
        free,
        objects,
        morphisms,
        object_index,
        morphism_index,
        algebra,
    })
}

/// Reflexivity of the sliding fork and descent of composition to classes.
pub fn check_free_construction(free: &FreeAlgebra) -> Report {
    let mut report = Report::new("free-construction");
    let monad = free.monad();
    let m = free.multicat();
    let mut reflexive = Check::new("fork-reflexive");
    let mut legs = Check::new("fork-legs-in-hom");
    let mut descent = Check::new("descent");
    let objects = free.objects();
    let mut homs = Vec::new();
    for a in &objects {
        for b in &objects {
            match free.hom(a, b) {
                Ok(h) => {
                    legs.record(true, String::new);
                    homs.push(h)
                }
                Err(e) => legs.error(&format!("hom({}, {})", m.show_elem(a), m.show_elem(b)), &e),
            }
        }
    }
    for hom in &homs {
        for h in &hom.elements {
            // The common section sends (φ, σ) to (φ, 𝔻₀I_𝔻(𝔻₀S φ), σ).
            let res = (|| -> Result<bool> {
                let acted: Vec<usize> = h
                    .components
                    .entries()
                    .iter()
                    .map(|&f| m.act(f, &monad.identity_d(m.source(f))?))
                    .collect::<Result<_>>()?;
                let taus = monad.map(&h.components, |&f| monad.identity_d(m.source(f)).expect("degree 0"));
                let slide = monad.mu(&monad.identity_d(&taus)?)?;
                let left_ok = acted == h.components.entries();
                let right_ok = monad.compose_d(&slide, &h.arrangement)? == h.arrangement;
                Ok(left_ok && right_ok)
            })();
            match res {
                Ok(ok) => reflexive.record(ok, || free.show(h)),
                Err(e) => reflexive.error(&free.show(h), &e),
            }
        }
    }
    if free.mode() == Mode::Quotient {
        let hat = FreeAlgebra::new(m.clone(), Mode::Provisional, free.bound()).expect("already validated");
        let by_ends: HashMap<(&Elem, &Elem), &Arc<HomSet>> = homs.iter().map(|h| ((&h.source, &h.target), h)).collect();
        for f_hom in &homs {
            for g_hom in homs.iter().filter(|g| g.source == f_hom.target) {
                let Some(gf_hom) = by_ends.get(&(&f_hom.source, &g_hom.target)) else { continue };
                for f in f_hom.representatives() {
                    for g in g_hom.representatives() {
                        let mut seen: Option<usize> = None;
                        for f2 in f_hom.members(f) {
                            for g2 in g_hom.members(g) {
                                match hat.compose(g2, f2) {
                                    Ok(c) => {
                                        let pos = gf_hom.position(&c).map(|i| gf_hom.representative[i]);
                                        let ok = pos.is_some() && (seen.is_none() || seen == pos);
                                        seen = seen.or(pos);
                                        descent.record(ok, || format!("{} ∘ {}", free.show(g2), free.show(f2)));
                                    }
                                    Err(e) => descent.error(&format!("{} ∘ {}", free.show(g2), free.show(f2)), &e),
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    for c in [legs, reflexive, descent] {
        report.push(c);
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catoperad::CatOperad;

    fn terminal(name: &str, bound: usize) -> Arc<DMulticat> {
        let monad = Arc::new(Monad::new(Arc::new(CatOperad::builtin(name, bound).unwrap())).unwrap());
        Arc::new(DMulticat::terminal(monad, bound).unwrap())
    }

    fn word(free: &FreeAlgebra, n: usize) -> Elem {
        free.objects().into_iter().find(|x| x.arity() == n).unwrap()
    }

    fn binomial(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn provisional_hom_counts() {
        let ass = FreeAlgebra::new(terminal("ass", 3), Mode::Provisional, 3).unwrap();
        let two = word(&ass, 2);
        assert_eq!(ass.hom(&two, &two).unwrap().elements.len(), 3);
        let be = FreeAlgebra::new(terminal("barratt-eccles", 3), Mode::Provisional, 3).unwrap();
        let (two, one) = (word(&be, 2), word(&be, 1));
        assert_eq!(be.hom(&two, &one).unwrap().elements.len(), 2);
    }

    #[test]
    fn provisional_morphisms_merge_in_the_quotient() {
        let be = FreeAlgebra::new(terminal("barratt-eccles", 3), Mode::Quotient, 3).unwrap();
        let (two, one) = (word(&be, 2), word(&be, 1));
        let hom = be.hom(&two, &one).unwrap();
        assert_eq!(hom.representatives().len(), 1);
        assert!(be.equivalent(&hom.elements[0], &hom.elements[1]).unwrap());
    }

    #[test]
    fn quotient_hom_counts_match_closed_forms() {
        let be = FreeAlgebra::new(terminal("barratt-eccles", 4), Mode::Quotient, 4).unwrap();
        let ass = FreeAlgebra::new(terminal("ass", 4), Mode::Quotient, 4).unwrap();
        for source in 0..=4 {
            for target in 0..=4 {
                let n = be.hom(&word(&be, source), &word(&be, target)).unwrap().representatives().len();
                assert_eq!(n, target.pow(source as u32), "be {source}→{target}");
                let n = ass.hom(&word(&ass, source), &word(&ass, target)).unwrap().representatives().len();
                let expected = if target == 0 { usize::from(source == 0) } else { binomial(source + target - 1, target - 1) };
                assert_eq!(n, expected, "ass {source}→{target}");
            }
        }
    }

    #[test]
    fn endpoint_mismatch_is_not_an_equivalence() {
        let be = FreeAlgebra::new(terminal("barratt-eccles", 2), Mode::Quotient, 2).unwrap();
        let (one, two) = (word(&be, 1), word(&be, 2));
        let x = be.identity(&one).unwrap();
        let y = be.identity(&two).unwrap();
        assert!(!be.equivalent(&x, &y).unwrap());
        assert!(be.endpoint_mismatch(&x, &y).unwrap().unwrap().contains("sources differ"));
    }

    #[test]
    fn truncation_is_an_algebra() {
        for name in ["ass", "barratt-eccles"] {
            let free = Arc::new(FreeAlgebra::new(terminal(name, 3), Mode::Quotient, 3).unwrap());
            let t = truncate(free.clone()).unwrap();
            let report = crate::dalgebra::validate_algebra(&t.algebra, 3);
            assert!(report.is_valid(), "{name}: {}", report.summary());
            let checks = check_free_construction(&free);
            assert!(checks.is_valid(), "{name}: {}", checks.summary());
        }
    }
}
