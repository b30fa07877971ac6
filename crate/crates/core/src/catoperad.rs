//! Operads of finite categories, truncated at a maximum level, with a free
//! right action of the symmetric groups on every level.
//!
//! Elements are addressed per level and per degree: degree 0 is an object of
//! `𝒟ₙ`, degree 1 a morphism. Permutations at level `n` are addressed by
//! their lexicographic rank in `Σₙ`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fincat::FinCategory;
use crate::finset::{block_perm, block_sum, FinSet, GroupAction, Label, Perm};
use crate::report::{Check, Report};

/// An element of some level: `(arity, index)`.
pub type Leveled = (usize, usize);

/// Composition tables keyed by `(outer, inner list)`, one per degree.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CompositionTable {
    pub entries: [HashMap<(usize, Vec<Leveled>), usize>; 2],
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Composition {
    BarrattEccles,
    Associative,
    Commutative,
    Tabulated(Arc<CompositionTable>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatOperad {
    name: String,
    levels: Vec<Arc<FinCategory>>,
    perms: Vec<Vec<Perm>>,
    /// `action[j][n][s][e]` is `e·σ` for the `s`-th permutation of `Σₙ`.
    action: [Vec<Vec<Vec<usize>>>; 2],
    unit: usize,
    composition: Composition,
}

fn perm_labels(n: usize) -> FinSet {
    FinSet::new(Perm::all(n).iter().map(|p| Label::ints(p.one_based())).collect()).expect("distinct")
}

impl CatOperad {
    /// Assembles an operad from explicit data. Shapes are checked here; the
    /// operad axioms are checked by [`validate_operad`].
    pub fn from_parts(
        name: impl Into<String>,
        levels: Vec<Arc<FinCategory>>,
        object_action: Vec<Vec<Vec<usize>>>,
        morphism_action: Vec<Vec<Vec<usize>>>,
        unit: usize,
        composition: Composition,
    ) -> Result<Self> {
        if levels.len() < 2 {
            return Err(Error::structural("an operad needs levels 0 and 1"));
        }
        let perms: Vec<Vec<Perm>> = (0..levels.len()).map(Perm::all).collect();
        for (j, action) in [&object_action, &morphism_action].into_iter().enumerate() {
            if action.len() != levels.len() {
                return Err(Error::structural("one action table per level is required"));
            }
            for (n, per_level) in action.iter().enumerate() {
                let size = if j == 0 { levels[n].num_objects() } else { levels[n].num_morphisms() };
                if per_level.len() != perms[n].len() || per_level.iter().any(|row| row.len() != size || row.iter().any(|&e| e >= size)) {
                    return Err(Error::structural(format!("action table at level {n} has the wrong shape")));
                }
            }
        }
        if unit >= levels[1].num_objects() {
            return Err(Error::structural("unit is not an object of level 1"));
        }
        Ok(CatOperad {
            name: name.into(),
            levels,
            perms,
            action: [object_action, morphism_action],
            unit,
            composition,
        })
    }

    fn symmetric(name: &str, max_level: usize, discrete: bool, composition: Composition) -> Self {
        let mut levels = Vec::new();
        let mut obj_action = Vec::new();
        let mut mor_action = Vec::new();
        for n in 0..=max_level.max(1) {
            let perms = Perm::all(n);
            let objs = perm_labels(n);
            let cat = if discrete { FinCategory::discrete(objs) } else { FinCategory::chaotic(objs) };
            let size = perms.len();
            let on_objects: Vec<Vec<usize>> = perms
                .iter()
                .map(|s| perms.iter().map(|p| p.compose(s).lex_rank()).collect())
                .collect();
            let on_morphisms = on_objects
                .iter()
                .map(|row| {
                    if discrete {
                        row.clone()
                    } else {
                        (0..size * size).map(|m| row[m / size] * size + row[m % size]).collect()
                    }
                })
                .collect();
            levels.push(Arc::new(cat));
            obj_action.push(on_objects);
            mor_action.push(on_morphisms);
        }
        CatOperad::from_parts(name, levels, obj_action, mor_action, 0, composition).expect("builtin operad")
    }

    /// The categorical Barratt–Eccles operad: level `n` is the chaotic
    /// category on `Σₙ`, with exactly one morphism between any two objects.
    pub fn barratt_eccles(max_level: usize) -> Self {
        CatOperad::symmetric("barratt-eccles", max_level, false, Composition::BarrattEccles)
    }

    /// Level `n` is the discrete category `Σₙ`.
    pub fn associative(max_level: usize) -> Self {
        CatOperad::symmetric("associative", max_level, true, Composition::Associative)
    }

    /// Every level terminal. Satisfies the operad axioms but the actions are
    /// not free from level 2 on.
    pub fn commutative(max_level: usize) -> Self {
        let n = max_level.max(1);
        let levels = (0..=n).map(|_| Arc::new(FinCategory::terminal())).collect();
        let action: Vec<Vec<Vec<usize>>> = (0..=n).map(|k| vec![vec![0]; Perm::all(k).len()]).collect();
        CatOperad::from_parts("commutative", levels, action.clone(), action, 0, Composition::Commutative)
            .expect("builtin operad")
    }

    pub fn builtin(name: &str, max_level: usize) -> Option<Self> {
        match name {
            "barratt-eccles" | "e-sigma" => Some(CatOperad::barratt_eccles(max_level)),
            "associative" | "ass" => Some(CatOperad::associative(max_level)),
            "commutative" | "com" => Some(CatOperad::commutative(max_level)),
            _ => None,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn max_level(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, n: usize) -> &Arc<FinCategory> {
        &self.levels[n]
    }

    pub fn composition(&self) -> &Composition {
        &self.composition
    }

    /// `Σₙ` in lexicographic order.
    pub fn perms(&self, n: usize) -> &[Perm] {
        &self.perms[n]
    }

    pub fn perm_rank(&self, p: &Perm) -> usize {
        p.lex_rank()
    }

    pub fn unit_object(&self) -> usize {
        self.unit
    }

    /// The unit in degree `j`: the unit object or its identity morphism.
    pub fn unit(&self, j: usize) -> usize {
        if j == 0 {
            self.unit
        } else {
            self.levels[1].identity(self.unit)
        }
    }

    /// Number of degree-`j` elements at level `n`.
    pub fn size(&self, j: usize, n: usize) -> usize {
        if j == 0 {
            self.levels[n].num_objects()
        } else {
            self.levels[n].num_morphisms()
        }
    }

    pub fn label(&self, j: usize, n: usize, e: usize) -> &Label {
        if j == 0 {
            self.levels[n].objects().label(e)
        } else {
            self.levels[n].morphisms().label(e)
        }
    }

    pub fn require_level(&self, n: usize) -> Result<()> {
        if n > self.max_level() {
            Err(Error::BoundExceeded {
                arity: n,
                bound: self.max_level(),
            })
        } else {
            Ok(())
        }
    }

    /// `e·σ`, with `σ` given by rank.
    pub fn act(&self, j: usize, n: usize, e: usize, sigma: usize) -> usize {
        self.action[j][n][sigma][e]
    }

    pub fn act_by(&self, j: usize, n: usize, e: usize, sigma: &Perm) -> usize {
        self.act(j, n, e, sigma.lex_rank())
    }

    /// Operadic composition `γ(outer; inner…)` in degree `j`, where `outer`
    /// lives at level `inner.len()`.
    pub fn compose(&self, j: usize, outer: usize, inner: &[Leveled]) -> Result<usize> {
        let total: usize = inner.iter().map(|b| b.0).sum();
        self.require_level(inner.len())?;
        self.require_level(total)?;
        match &self.composition {
            Composition::Commutative => Ok(0),
            Composition::BarrattEccles | Composition::Associative => {
                let size = |n: usize| self.perms[n].len();
                if j == 0 || matches!(self.composition, Composition::Associative) {
                    Ok(self.block_composite(outer, inner, |b| b))
                } else {
                    let k = size(inner.len());
                    let src = self.block_composite(outer / k, inner, |(n, m)| (n, m / size(n)));
                    let tgt = self.block_composite(outer % k, inner, |(n, m)| (n, m % size(n)));
                    Ok(src * size(total) + tgt)
                }
            }
            Composition::Tabulated(table) => table.entries[j]
                .get(&(outer, inner.to_vec()))
                .copied()
                .ok_or_else(|| Error::structural(format!("composition undefined on {}", self.show_tuple(j, outer, inner)))),
        }
    }

    /// Rank of `ρ⟨n₁,…,n_k⟩ ∘ (ρ₁ ⊕ … ⊕ ρ_k)` for permutations given by rank:
    /// position `t` of block `i` goes to the new offset of block `i` plus
    /// `ρᵢ(t)`.
    fn block_composite(&self, outer: usize, inner: &[Leveled], pick: impl Fn(Leveled) -> Leveled) -> usize {
        const MAX: usize = 16;
        let k = inner.len();
        let rho = self.perms[k][outer].zero_based();
        let mut new_off = [0usize; MAX];
        for i in 0..k {
            new_off[i] = (0..k).filter(|&l| rho[l] < rho[i]).map(|l| inner[l].0).sum();
        }
        let mut images = [0usize; MAX];
        let mut pos = 0;
        for (i, &b) in inner.iter().enumerate() {
            let (n, e) = pick(b);
            for &t in self.perms[n][e].zero_based() {
                images[pos] = new_off[i] + t;
                pos += 1;
            }
        }
        let mut rank = 0;
        for i in 0..pos {
            let smaller = (i + 1..pos).filter(|&l| images[l] < images[i]).count();
            rank = rank * (pos - i) + smaller;
        }
        rank
    }

    pub fn show_tuple(&self, j: usize, outer: usize, inner: &[Leveled]) -> String {
        let parts: Vec<String> = inner.iter().map(|&(n, e)| self.label(j, n, e).to_string()).collect();
        format!("γ({}; {})", self.label(j, inner.len(), outer), parts.join(", "))
    }

    /// The left action of `Σₙ` used for freeness: `σ·e = e·σ⁻¹`.
    pub fn level_action(&self, j: usize, n: usize) -> Result<GroupAction> {
        let perms = &self.perms[n];
        let carrier = if j == 0 { self.levels[n].objects() } else { self.levels[n].morphisms() };
        let table = perms
            .iter()
            .map(|s| {
                let inv = s.inverse().lex_rank();
                (0..carrier.len()).map(|e| self.act(j, n, e, inv)).collect()
            })
            .collect();
        GroupAction::new(perms.clone(), carrier.clone(), table, false)
    }

    /// The first fixed point found, as `(level, degree, σ, element)`.
    pub fn freeness_witness(&self) -> Option<String> {
        for n in 0..=self.max_level() {
            for j in 0..2 {
                for (s, perm) in self.perms[n].iter().enumerate().skip(1) {
                    if let Some(e) = (0..self.size(j, n)).find(|&e| self.act(j, n, e, s) == e) {
                        let what = if j == 0 { "object" } else { "morphism" };
                        return Some(format!("level {n}: {perm} fixes {what} {}", self.label(j, n, e)));
                    }
                }
            }
        }
        None
    }

    pub fn is_sigma_free(&self) -> bool {
        self.freeness_witness().is_none()
    }

    /// The same operad with composition materialized as a table over every
    /// tuple of total arity at most the truncation level.
    pub fn tabulate(&self) -> Result<CatOperad> {
        let mut table = CompositionTable::default();
        for j in 0..2 {
            self.for_each_tuple(j, self.max_level(), &mut |outer, inner| {
                let v = self.compose(j, outer, inner)?;
                table.entries[j].insert((outer, inner.to_vec()), v);
                Ok(())
            })?;
        }
        let mut out = self.clone();
        out.composition = Composition::Tabulated(Arc::new(table));
        Ok(out)
    }

    /// Overwrites one composite of a tabulated operad.
    pub fn set_composite(&mut self, j: usize, outer: usize, inner: Vec<Leveled>, value: usize) -> Result<()> {
        let Composition::Tabulated(table) = &mut self.composition else {
            return Err(Error::Precondition("only tabulated operads can be edited".into()));
        };
        Arc::make_mut(table).entries[j].insert((outer, inner), value);
        Ok(())
    }

    /// Calls `f(outer, inner)` on every composable tuple of degree `j` whose
    /// total arity is at most `max_total`.
    pub fn for_each_tuple(&self, j: usize, max_total: usize, f: &mut dyn FnMut(usize, &[Leveled]) -> Result<()>) -> Result<()> {
        for k in 0..=self.max_level() {
            for profile in arity_profiles(k, max_total) {
                let sizes: Vec<usize> = profile.iter().map(|&n| self.size(j, n)).collect();
                let mut inner: Vec<Leveled> = profile.iter().map(|&n| (n, 0)).collect();
                for outer in 0..self.size(j, k) {
                    let mut err = None;
                    for_each_index(&sizes, &mut |idx| {
                        if err.is_some() {
                            return;
                        }
                        for (slot, &i) in inner.iter_mut().zip(idx) {
                            slot.1 = i;
                        }
                        if let Err(e) = f(outer, &inner) {
                            err = Some(e);
                        }
                    });
                    if let Some(e) = err {
                        return Err(e);
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for CatOperad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (levels 0..={})", self.name, self.max_level())
    }
}

/// All length-`k` lists of naturals with sum at most `max_total`.
pub fn arity_profiles(k: usize, max_total: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(k: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for n in 0..=left {
            cur.push(n);
            go(k, left - n, cur, out);
            cur.pop();
        }
    }
    go(k, max_total, &mut cur, &mut out);
    out
}

/// Visits every index vector below `sizes`, in lexicographic order.
pub fn for_each_index(sizes: &[usize], f: &mut dyn FnMut(&[usize])) {
    if sizes.contains(&0) {
        return;
    }
    let mut idx = vec![0; sizes.len()];
    loop {
        f(&idx);
        let mut pos = sizes.len();
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < sizes[pos] {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// Checks the operad axioms exhaustively up to the truncation level, in both
/// degrees, together with the compatibility of the actions and of the
/// composition with the category structure of each level.
///
/// When every level is thin, a morphism is determined by its endpoints, so
/// once composition and the actions respect endpoints on every tuple the
/// degree-1 laws follow from the degree-0 ones. In that case degree 1 is
/// checked through endpoints only.
pub fn validate_operad(op: &CatOperad) -> Report {
    validate_with(op, (0..=op.max_level()).all(|n| is_thin(op.level(n))))
}

fn is_thin(c: &FinCategory) -> bool {
    let mut seen = std::collections::HashSet::new();
    (0..c.num_morphisms()).all(|m| seen.insert((c.source(m), c.target(m))))
}

fn validate_with(op: &CatOperad, thin: bool) -> Report {
    let mut report = Report::new("operad");
    let top = op.max_level();

    let mut levels = Check::new("levels-are-categories");
    for n in 0..=top {
        for c in op.level(n).validate().failures() {
            levels.fail(format!("level {n}: {} {}", c.name, c.witnesses.first().cloned().unwrap_or_default()));
        }
        levels.instances += 1;
    }
    report.push(levels);

    let mut action = Check::new("action-laws");
    let mut functorial = Check::new("action-by-functors");
    for n in 0..=top {
        let perms = op.perms(n);
        let cat = op.level(n);
        for j in 0..2 {
            for e in 0..op.size(j, n) {
                action.record(op.act(j, n, e, 0) == e, || format!("identity moves {}", op.label(j, n, e)));
                for (s, sp) in perms.iter().enumerate() {
                    for (t, tp) in perms.iter().enumerate() {
                        let lhs = op.act(j, n, op.act(j, n, e, s), t);
                        let rhs = op.act(j, n, e, sp.compose(tp).lex_rank());
                        action.record(lhs == rhs, || format!("({}·{sp})·{tp} differs from {}·({sp}∘{tp})", op.label(j, n, e), op.label(j, n, e)));
                    }
                }
            }
            let _ = j;
        }
        for s in 0..perms.len() {
            for m in 0..cat.num_morphisms() {
                let ms = op.act(1, n, m, s);
                functorial.record(
                    cat.source(ms) == op.act(0, n, cat.source(m), s) && cat.target(ms) == op.act(0, n, cat.target(m), s),
                    || format!("{} moves {} off its endpoints", perms[s], cat.morphisms().label(m)),
                );
            }
            for a in 0..cat.num_objects() {
                functorial.record(op.act(1, n, cat.identity(a), s) == cat.identity(op.act(0, n, a, s)), || {
                    format!("{} does not preserve the identity at {}", perms[s], cat.objects().label(a))
                });
            }
            for (&(g, f), &h) in cat.composition_table() {
                functorial.record(cat.compose(op.act(1, n, g, s), op.act(1, n, f, s)) == Some(op.act(1, n, h, s)), || {
                    format!("{} does not preserve {}∘{}", perms[s], cat.morphisms().label(g), cat.morphisms().label(f))
                });
            }
        }
    }
    report.push(action);
    report.push(functorial);

    let degrees = if thin { 0..1 } else { 0..2 };
    let mut thinness = Check::new("morphisms/thin-levels");
    thinness.instances = (op.max_level() + 1) as u64;
    if thin {
        report.push(thinness);
    }
    for j in degrees {
        let prefix = if j == 0 { "objects" } else { "morphisms" };
        let mut unit = Check::new(format!("{prefix}/unit"));
        let mut outer_eq = Check::new(format!("{prefix}/equivariance-outer"));
        let mut inner_eq = Check::new(format!("{prefix}/equivariance-inner"));
        let mut assoc = Check::new(format!("{prefix}/associativity"));
        let u = op.unit(j);
        let _ = op.for_each_tuple(j, top, &mut |outer, inner| {
            let k = inner.len();
            let here = op.compose(j, outer, inner);
            let show = || op.show_tuple(j, outer, inner);
            let Ok(here) = here else {
                let e = here.unwrap_err();
                for c in [&mut unit, &mut outer_eq, &mut inner_eq, &mut assoc] {
                    c.error(&show(), &e);
                }
                return Ok(());
            };
            let total: usize = inner.iter().map(|b| b.0).sum();
            // right unit: γ(a; u, …, u) = a
            if inner.iter().all(|&(n, e)| n == 1 && e == u) {
                unit.record(here == outer, || format!("{} ≠ outer", show()));
            }
            // left unit: γ(u; b) = b
            if k == 1 && outer == u {
                unit.record(here == inner[0].1, || format!("{} ≠ inner", show()));
            }
            let sizes: Vec<usize> = inner.iter().map(|b| b.0).collect();
            for (s, sigma) in op.perms(k).iter().enumerate() {
                let lhs = op.compose(j, op.act(j, k, outer, s), inner);
                let moved = sigma.permute(inner);
                let rhs = op
                    .compose(j, outer, &moved)
                    .and_then(|v| Ok(op.act_by(j, total, v, &block_perm(sigma, &sizes)?)));
                check_eq(&mut outer_eq, lhs, rhs, || format!("{} with σ = {sigma}", show()));
            }
            // inner equivariance, one slot at a time generates the product
            for (slot, &(n, e)) in inner.iter().enumerate() {
                for (t, tau) in op.perms(n).iter().enumerate().skip(1) {
                    let mut twisted = inner.to_vec();
                    twisted[slot].1 = op.act(j, n, e, t);
                    let lhs = op.compose(j, outer, &twisted);
                    let mut blocks: Vec<Perm> = sizes.iter().map(|&m| Perm::identity(m)).collect();
                    blocks[slot] = tau.clone();
                    let rhs = Ok(op.act_by(j, total, here, &block_sum(&blocks)));
                    check_eq(&mut inner_eq, lhs, rhs, || format!("{} with τ = {tau} in slot {}", show(), slot + 1));
                }
            }
            // associativity against every third layer that stays in range
            for profile in arity_profiles(total, top) {
                let sizes3: Vec<usize> = profile.iter().map(|&n| op.size(j, n)).collect();
                for_each_index(&sizes3, &mut |idx| {
                    let third: Vec<Leveled> = profile.iter().copied().zip(idx.iter().copied()).collect();
                    let lhs = op.compose(j, here, &third);
                    let mut rhs_inner = Vec::with_capacity(k);
                    let mut pos = 0;
                    let mut failed = None;
                    for &(n, e) in inner {
                        let chunk = &third[pos..pos + n];
                        pos += n;
                        let m: usize = chunk.iter().map(|c| c.0).sum();
                        match op.compose(j, e, chunk) {
                            Ok(v) => rhs_inner.push((m, v)),
                            Err(err) => failed = Some(err),
                        }
                    }
                    let rhs = match failed {
                        Some(err) => Err(err),
                        None => op.compose(j, outer, &rhs_inner),
                    };
                    check_eq(&mut assoc, lhs, rhs, || {
                        let parts: Vec<String> = third.iter().map(|&(n, e)| op.label(j, n, e).to_string()).collect();
                        format!("{} then ({})", show(), parts.join(", "))
                    });
                });
            }
            Ok(())
        });
        for c in [unit, outer_eq, inner_eq, assoc] {
            report.push(c);
        }
    }

    let mut structure = Check::new("composition-is-functorial");
    let _ = op.for_each_tuple(1, top, &mut |outer, inner| {
        let k = inner.len();
        let total: usize = inner.iter().map(|b| b.0).sum();
        let show = || op.show_tuple(1, outer, inner);
        let lvl = |n: usize| op.level(n);
        let Ok(here) = op.compose(1, outer, inner) else {
            structure.fail(format!("{} undefined", show()));
            return Ok(());
        };
        let srcs: Vec<Leveled> = inner.iter().map(|&(n, m)| (n, lvl(n).source(m))).collect();
        let tgts: Vec<Leveled> = inner.iter().map(|&(n, m)| (n, lvl(n).target(m))).collect();
        let s = op.compose(0, lvl(k).source(outer), &srcs);
        let t = op.compose(0, lvl(k).target(outer), &tgts);
        structure.record(s == Ok(lvl(total).source(here)) && t == Ok(lvl(total).target(here)), || {
            format!("{} has the wrong endpoints", show())
        });
        if thin {
            return Ok(());
        }
        // identities, and composition against every composable follow-up
        let ids = inner.iter().all(|&(n, m)| lvl(n).identity(lvl(n).source(m)) == m);
        if ids && lvl(k).identity(lvl(k).source(outer)) == outer {
            structure.record(lvl(total).identity(lvl(total).source(here)) == here, || format!("{} is not an identity", show()));
        }
        let nexts: Vec<&[usize]> = inner.iter().map(|&(n, m)| lvl(n).out_of(lvl(n).target(m))).collect();
        let sizes: Vec<usize> = nexts.iter().map(|v| v.len()).collect();
        for &g in lvl(k).out_of(lvl(k).target(outer)) {
            for_each_index(&sizes, &mut |idx| {
                let after: Vec<Leveled> = inner
                    .iter()
                    .enumerate()
                    .map(|(slot, &(n, _))| (n, nexts[slot][idx[slot]]))
                    .collect();
                let both: Option<Vec<Leveled>> = inner
                    .iter()
                    .zip(&after)
                    .map(|(&(n, f), &(_, g))| lvl(n).compose(g, f).map(|h| (n, h)))
                    .collect();
                let lhs = both.and_then(|b| lvl(k).compose(g, outer).map(|o| op.compose(1, o, &b)));
                let rhs = op
                    .compose(1, g, &after)
                    .ok()
                    .and_then(|ga| lvl(total).compose(ga, here));
                structure.record(matches!(lhs, Some(Ok(v)) if Some(v) == rhs), || format!("interchange fails after {}", show()));
            });
        }
        Ok(())
    });
    report.push(structure);
    report
}

fn check_eq(check: &mut Check, lhs: Result<usize>, rhs: Result<usize>, witness: impl FnOnce() -> String) {
    match (lhs, rhs) {
        (Ok(a), Ok(b)) => check.record(a == b, witness),
        (Err(e), _) | (_, Err(e)) => check.error(&witness(), &e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn barratt_eccles_level_sizes() {
        let op = CatOperad::barratt_eccles(4);
        assert_eq!(op.level(3).num_objects(), 6);
        assert_eq!(op.level(3).num_morphisms(), 36);
        for n in 0..2 {
            assert_eq!((op.level(n).num_objects(), op.level(n).num_morphisms()), (1, 1));
        }
        assert!(op.is_sigma_free());
    }

    #[test]
    fn associative_level_two() {
        let op = CatOperad::associative(4);
        assert_eq!((op.level(2).num_objects(), op.level(2).num_morphisms()), (2, 2));
        assert!(op.is_sigma_free());
        let swap = Perm::transposition(2, 1, 2).lex_rank();
        assert_eq!(op.compose(0, swap, &[(1, 0), (1, 0)]).unwrap(), swap);
    }

    #[test]
    fn commutative_is_not_free() {
        let op = CatOperad::commutative(3);
        assert!(!op.is_sigma_free());
        assert_eq!(op.freeness_witness().unwrap(), "level 2: [2 1] fixes object *");
        assert!(validate_operad(&op).is_valid());
    }

    #[test]
    fn builtins_validate() {
        assert!(validate_operad(&CatOperad::barratt_eccles(3)).is_valid());
        assert!(validate_operad(&CatOperad::associative(4)).is_valid());
    }

    #[test]
    fn validation_counts_instances() {
        let r = validate_operad(&CatOperad::barratt_eccles(3));
        for name in ["objects/associativity", "morphisms/thin-levels", "composition-is-functorial"] {
            assert!(r.check(name).unwrap().instances > 0, "{name}");
        }
    }

    #[test]
    fn thin_shortcut_agrees_with_the_full_check() {
        for op in [CatOperad::barratt_eccles(3), CatOperad::associative(3)] {
            let full = validate_with(&op, false);
            assert!(full.is_valid(), "{}", full.summary());
            assert!(full.check("morphisms/associativity").unwrap().instances > 0);
            assert!(validate_operad(&op).is_valid());
        }
        let mut tab = CatOperad::barratt_eccles(3).tabulate().unwrap();
        // a degree-1 composite with the wrong endpoints
        tab.set_composite(1, 0, vec![(1, 0), (2, 0)], 1).unwrap();
        assert!(!validate_with(&tab, false).is_valid());
        assert!(!validate_operad(&tab).is_valid());
    }

    #[test]
    fn truncation_four_validates() {
        assert!(validate_operad(&CatOperad::barratt_eccles(4)).is_valid());
    }

    #[test]
    fn tabulated_copy_validates_and_corruption_is_named() {
        let op = CatOperad::associative(3);
        let mut tab = op.tabulate().unwrap();
        assert!(validate_operad(&tab).is_valid());
        let swap = Perm::transposition(2, 1, 2).lex_rank();
        // γ((1 2); id₁, id₂) corrupted to the identity of level 3
        tab.set_composite(0, swap, vec![(1, 0), (2, 0)], 0).unwrap();
        let r = validate_operad(&tab);
        assert!(!r.is_valid());
        let named = r
            .failures()
            .flat_map(|c| c.witnesses.iter())
            .any(|w| w.contains("γ((2,1); (1), (1,2))"));
        assert!(named, "{}", r.summary());
    }

    #[test]
    fn barratt_eccles_composition_matches_blocks() {
        let op = CatOperad::barratt_eccles(4);
        let swap = Perm::transposition(2, 1, 2);
        // γ((1 2); id₂, id₁) moves the first block after the second
        let v = op.compose(0, swap.lex_rank(), &[(2, 0), (1, 0)]).unwrap();
        assert_eq!(op.perms(3)[v].one_based(), vec![2, 3, 1]);
    }

    #[test]
    fn arity_profiles_count() {
        // compositions of at most 3 into 2 parts: 10
        assert_eq!(arity_profiles(2, 3).len(), 10);
        assert_eq!(arity_profiles(0, 3), vec![Vec::<usize>::new()]);
    }
}
