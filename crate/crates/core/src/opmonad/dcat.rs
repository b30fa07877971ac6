//! `𝔻` applied to finite categories, truncated at an arity bound. Morphisms
//! preserve arity, so the truncation is a full subcategory and cover
//! conditions can be tested exactly on it.

use std::collections::HashMap;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Monad, MonadElem};
use crate::error::{Error, Result};
use crate::fincat::{grothendieck, CatFunctor, FinCategory, Presheaf};
use crate::finset::{check_pullback_square, FinFn, FinSet, Label, Perm};
use crate::report::{Check, Report};

/// The truncated category `𝔻C` together with the element behind every
/// object and morphism index.
#[derive(Debug, Clone)]
pub struct DCategory {
    pub category: Arc<FinCategory>,
    pub objects: Vec<MonadElem<usize>>,
    pub morphisms: Vec<MonadElem<usize>>,
    object_index: HashMap<MonadElem<usize>, usize>,
    morphism_index: HashMap<MonadElem<usize>, usize>,
}

impl DCategory {
    pub fn object_index(&self, e: &MonadElem<usize>) -> Option<usize> {
        self.object_index.get(e).copied()
    }

    pub fn morphism_index(&self, e: &MonadElem<usize>) -> Option<usize> {
        self.morphism_index.get(e).copied()
    }
}

fn elem_label(monad: &Monad, e: &MonadElem<usize>, entries: &FinSet) -> Label {
    let op = monad.operad().label(e.degree(), e.arity(), e.op()).clone();
    let xs = Label::Tuple(e.entries().iter().map(|&x| entries.label(x).clone()).collect());
    Label::Tuple(vec![Label::Int(e.arity() as i64), op, xs])
}

/// The objects and morphisms of `𝔻C` up to an arity bound, sorted by label,
/// with endpoints and identities but no composition.
struct Graph {
    objects: FinSet,
    morphisms: FinSet,
    object_elems: Vec<MonadElem<usize>>,
    morphism_elems: Vec<MonadElem<usize>>,
    object_index: HashMap<MonadElem<usize>, usize>,
    morphism_index: HashMap<MonadElem<usize>, usize>,
    source: Vec<usize>,
    target: Vec<usize>,
    identity: Vec<usize>,
}

type Sorted = (FinSet, Vec<MonadElem<usize>>, HashMap<MonadElem<usize>, usize>);

fn sorted_elems(monad: &Monad, elems: Vec<MonadElem<usize>>, letters: &FinSet) -> Result<Sorted> {
    let labels: Vec<Label> = elems.iter().map(|e| elem_label(monad, e, letters)).collect();
    let set = FinSet::new(labels.clone())?;
    let mut sorted = elems.clone();
    for (e, l) in elems.into_iter().zip(&labels) {
        sorted[set.index_of(l).expect("present")] = e;
    }
    let index = sorted.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
    Ok((set, sorted, index))
}

fn graph(monad: &Monad, c: &FinCategory, max_arity: usize) -> Result<Graph> {
    monad.operad().require_level(max_arity)?;
    let obj_letters: Vec<usize> = c.objects().indices().collect();
    let mor_letters: Vec<usize> = c.morphisms().indices().collect();
    let (objects, object_elems, object_index) =
        sorted_elems(monad, monad.elements_over(0, &obj_letters, |_| 1, max_arity, max_arity), c.objects())?;
    let (morphisms, morphism_elems, morphism_index) =
        sorted_elems(monad, monad.elements_over(1, &mor_letters, |_| 1, max_arity, max_arity), c.morphisms())?;
    let obj_of = |e: &MonadElem<usize>| -> Result<usize> {
        object_index.get(e).copied().ok_or_else(|| Error::internal("endpoint outside truncation"))
    };
    let mut source = Vec::with_capacity(morphism_elems.len());
    let mut target = Vec::with_capacity(morphism_elems.len());
    for e in &morphism_elems {
        source.push(obj_of(&monad.source_d_with(e, |&m| c.source(m))?)?);
        target.push(obj_of(&monad.target_d_with(e, |&m| c.target(m))?)?);
    }
    let identity = object_elems
        .iter()
        .map(|e| {
            let id = monad.identity_d_with(e, |&a| c.identity(a))?;
            morphism_index.get(&id).copied().ok_or_else(|| Error::internal("identity outside truncation"))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Graph {
        objects,
        morphisms,
        object_elems,
        morphism_elems,
        object_index,
        morphism_index,
        source,
        target,
        identity,
    })
}

/// Materializes `𝔻C` up to arity `max_arity`.
pub fn apply_to_category(monad: &Monad, c: &FinCategory, max_arity: usize) -> Result<DCategory> {
    let g = graph(monad, c, max_arity)?;
    let n1 = g.morphism_elems.len();
    let mut into: Vec<Vec<usize>> = vec![Vec::new(); g.object_elems.len()];
    for f in 0..n1 {
        into[g.target[f]].push(f);
    }
    let mut table = HashMap::new();
    for h in 0..n1 {
        for &f in &into[g.source[h]] {
            let hf = monad.compose_d_with(&g.morphism_elems[h], &g.morphism_elems[f], |&a, &b| c.compose(a, b))?;
            let idx = g.morphism_index.get(&hf).copied().ok_or_else(|| Error::internal("composite outside truncation"))?;
            table.insert((h, f), idx);
        }
    }
    let category = FinCategory::new(g.objects, g.morphisms, g.source, g.target, g.identity, table)?;
    Ok(DCategory {
        category: Arc::new(category),
        object_index: g.object_index,
        morphism_index: g.morphism_index,
        objects: g.object_elems,
        morphisms: g.morphism_elems,
    })
}

/// `𝔻F` between the truncations of source and target.
pub fn apply_to_functor(monad: &Monad, f: &CatFunctor, max_arity: usize) -> Result<(DCategory, DCategory, CatFunctor)> {
    let src = apply_to_category(monad, f.src(), max_arity)?;
    let tgt = apply_to_category(monad, f.tgt(), max_arity)?;
    let on_objects = src
        .objects
        .iter()
        .map(|e| tgt.object_index(&monad.map(e, |&a| f.on_object(a))).ok_or_else(|| Error::internal("image outside truncation")))
        .collect::<Result<Vec<_>>>()?;
    let on_morphisms = src
        .morphisms
        .iter()
        .map(|e| tgt.morphism_index(&monad.map(e, |&m| f.on_morphism(m))).ok_or_else(|| Error::internal("image outside truncation")))
        .collect::<Result<Vec<_>>>()?;
    let functor = CatFunctor::new(src.category.clone(), tgt.category.clone(), on_objects, on_morphisms)?;
    Ok((src, tgt, functor))
}

/// The presheaf `𝔻₀X` over `𝔻C` induced by a presheaf `X` over `C`:
/// `[d, x⃗]·[m, c⃗] = [S m, (xᵢ·cᵢ)]` after aligning `T m` with `d`.
pub fn derived_presheaf(monad: &Monad, p: &Presheaf, dc: &DCategory, max_arity: usize) -> Result<Presheaf> {
    let letters: Vec<usize> = p.carrier().indices().collect();
    let elems = monad.elements_over(0, &letters, |_| 1, max_arity, max_arity);
    let labels: Vec<Label> = elems.iter().map(|e| elem_label(monad, e, p.carrier())).collect();
    let carrier = FinSet::new(labels.clone())?;
    let mut sorted = elems.clone();
    for (e, l) in elems.iter().zip(&labels) {
        sorted[carrier.index_of(l).expect("present")] = e.clone();
    }
    let index: HashMap<&MonadElem<usize>, usize> = sorted.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let eps = sorted
        .iter()
        .map(|e| dc.object_index(&monad.map(e, |&x| p.eps(x))).ok_or_else(|| Error::internal("structure map outside truncation")))
        .collect::<Result<Vec<_>>>()?;
    Presheaf::from_fn(dc.category.clone(), carrier, eps, |x, m| {
        let xe = &sorted[x];
        let me = monad.align_target(&dc.morphisms[m], xe.op())?;
        let lvl = monad.operad().level(xe.arity());
        let entries = xe
            .entries()
            .iter()
            .zip(me.entries())
            .map(|(&xi, &ci)| p.act(xi, ci).ok_or_else(|| Error::structural("entries do not act")))
            .collect::<Result<Vec<_>>>()?;
        let out = monad.canonicalize(MonadElem::raw(0, lvl.source(me.op()), entries));
        index.get(&out).copied().ok_or_else(|| Error::internal("action leaves the truncation"))
    })
}

/// Runs the cover checks on `𝔻F`: every kind of cover that `F` is must be
/// inherited by `𝔻F` within the bound. Only objects, morphisms and their
/// endpoints are built, so large truncations stay affordable; composition
/// is preserved by naturality of `γ_𝔻`, checked with the category-object laws.
pub fn check_preserves_cover(monad: &Monad, f: &CatFunctor, max_arity: usize) -> Report {
    let mut report = Report::new("preserves-cover");
    let mut functor = Check::new("d-functor-graph");
    let mut target = Check::new("target-cover");
    let mut source = Check::new("source-cover");
    match cover_maps(monad, f, max_arity) {
        Err(e) => functor.error("applying 𝔻", &e),
        Ok((lo, hi, on_objects, on_morphisms)) => {
            for m in 0..lo.morphism_elems.len() {
                let image = on_morphisms[m];
                functor.record(
                    hi.source[image] == on_objects[lo.source[m]] && hi.target[image] == on_objects[lo.target[m]],
                    || format!("𝔻F moves {} off its endpoints", lo.morphisms.label(m)),
                );
            }
            for a in 0..lo.object_elems.len() {
                functor.record(on_morphisms[lo.identity[a]] == hi.identity[on_objects[a]], || {
                    format!("𝔻F does not preserve the identity at {}", lo.objects.label(a))
                });
            }
            let as_fn = |set: &FinSet, to: &FinSet, table: &[usize]| FinFn::new(set.clone(), to.clone(), table.to_vec());
            let square = |lo_end: &[usize], hi_end: &[usize]| -> Result<std::result::Result<(), String>> {
                Ok(check_pullback_square(
                    &as_fn(&lo.morphisms, &lo.objects, lo_end)?,
                    &as_fn(&lo.morphisms, &hi.morphisms, &on_morphisms)?,
                    &as_fn(&lo.objects, &hi.objects, &on_objects)?,
                    &as_fn(&hi.morphisms, &hi.objects, hi_end)?,
                ))
            };
            for (is_cover, check, lo_end, hi_end) in [
                (f.is_target_cover(), &mut target, &lo.target, &hi.target),
                (f.is_source_cover(), &mut source, &lo.source, &hi.source),
            ] {
                if !is_cover {
                    continue;
                }
                match square(lo_end, hi_end) {
                    Ok(r) => check.record(r.is_ok(), || r.unwrap_err()),
                    Err(e) => check.error("cover square", &e),
                }
            }
        }
    }
    for c in [functor, target, source] {
        report.push(c);
    }
    report
}

type CoverMaps = (Graph, Graph, Vec<usize>, Vec<usize>);

fn cover_maps(monad: &Monad, f: &CatFunctor, max_arity: usize) -> Result<CoverMaps> {
    let lo = graph(monad, f.src(), max_arity)?;
    let hi = graph(monad, f.tgt(), max_arity)?;
    let outside = || Error::internal("image outside truncation");
    let on_objects = lo
        .object_elems
        .iter()
        .map(|e| hi.object_index.get(&monad.map(e, |&a| f.on_object(a))).copied().ok_or_else(outside))
        .collect::<Result<Vec<_>>>()?;
    let on_morphisms = lo
        .morphism_elems
        .iter()
        .map(|e| hi.morphism_index.get(&monad.map(e, |&m| f.on_morphism(m))).copied().ok_or_else(outside))
        .collect::<Result<Vec<_>>>()?;
    Ok((lo, hi, on_objects, on_morphisms))
}

/// A seeded family of covers: Grothendieck projections of random sets with
/// a group action over a group viewed as a category, projections of random
/// presheaves on the arrow `0 → 1`, and maps of finite sets viewed as
/// functors between discrete categories.
pub fn sample_covers(seed: u64, count: usize) -> Result<Vec<CatFunctor>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let f = match i % 3 {
            0 => group_set_cover(&mut rng)?,
            1 => arrow_presheaf_cover(&mut rng)?,
            _ => discrete_cover(&mut rng)?,
        };
        out.push(f);
    }
    Ok(out)
}

fn group_set_cover(rng: &mut ChaCha8Rng) -> Result<CatFunctor> {
    let n = rng.gen_range(2..=3);
    let perms = Perm::all(n);
    let g = Arc::new(FinCategory::group(&perms)?);
    let free_orbits = rng.gen_range(0..=1);
    let fixed = rng.gen_range(0..=2);
    if free_orbits + fixed == 0 {
        return group_set_cover(rng);
    }
    // right action: free orbits are copies of the group, fixed points are inert
    let mut labels = Vec::new();
    for k in 0..free_orbits {
        for p in &perms {
            labels.push(Label::pair(Label::Int(k as i64), Label::ints(p.one_based())));
        }
    }
    for k in 0..fixed {
        labels.push(Label::atom(format!("fixed{k}")));
    }
    let carrier = FinSet::new(labels)?;
    let gc = g.clone();
    let carrier2 = carrier.clone();
    let p = Presheaf::from_fn(g, carrier.clone(), vec![0; carrier.len()], |x, m| {
        let l = carrier2.label(x);
        let Label::Tuple(parts) = l else { return Ok(x) };
        let Label::Tuple(ints) = &parts[1] else { unreachable!() };
        let h: Vec<usize> = ints.iter().map(|i| if let Label::Int(v) = i { *v as usize } else { 0 }).collect();
        let h = Perm::from_one_based(&h)?;
        let Label::Tuple(gi) = gc.morphisms().label(m) else { unreachable!() };
        let gp: Vec<usize> = gi.iter().map(|i| if let Label::Int(v) = i { *v as usize } else { 0 }).collect();
        let gp = Perm::from_one_based(&gp)?;
        carrier2.require(&Label::pair(parts[0].clone(), Label::ints(h.compose(&gp).one_based())))
    })?;
    Ok(grothendieck(&p)?.1)
}

fn arrow_presheaf_cover(rng: &mut ChaCha8Rng) -> Result<CatFunctor> {
    let arrow = Arc::new(FinCategory::preorder(FinSet::range(2), |a, b| a <= b)?);
    let (n0, n1) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
    let restrict: Vec<usize> = (0..n1).map(|_| rng.gen_range(0..n0)).collect();
    let labels: Vec<Label> = (0..n0)
        .map(|i| Label::atom(format!("a{i}")))
        .chain((0..n1).map(|i| Label::atom(format!("b{i}"))))
        .collect();
    let carrier = FinSet::new(labels)?;
    let eps: Vec<usize> = (0..n0 + n1).map(|i| usize::from(i >= n0)).collect();
    let a = arrow.clone();
    let p = Presheaf::from_fn(arrow, carrier, eps.clone(), |x, m| {
        if a.source(m) == a.target(m) {
            Ok(x)
        } else {
            Ok(restrict[x - n0])
        }
    })?;
    Ok(grothendieck(&p)?.1)
}

fn discrete_cover(rng: &mut ChaCha8Rng) -> Result<CatFunctor> {
    let (n, m) = (rng.gen_range(1..=4), rng.gen_range(1..=3));
    let mut table: Vec<usize> = (0..n).map(|_| rng.gen_range(0..m)).collect();
    table.shuffle(rng);
    let src = Arc::new(FinCategory::discrete(FinSet::range(n)));
    let tgt = Arc::new(FinCategory::discrete(FinSet::range(m)));
    CatFunctor::new(src, tgt, table.clone(), table)
}
