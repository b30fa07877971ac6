//! The monads `𝔻₀`, `𝔻₁` associated to an operad of categories, acting on
//! finite sets (viewed as discrete categories) and, through [`dcat`], on
//! finite categories.
//!
//! An element `[d, x₁…xₙ]` of `𝔻ⱼX` is an orbit of `(𝒟ₙ)ⱼ × Xⁿ` under
//! `(d·σ, x) ~ (d, σ·x)`. Elements are always stored in canonical form:
//! the operad part is the least member of its orbit and the entries are
//! moved along with it.

pub mod checks;
pub mod dcat;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::catoperad::{CatOperad, Leveled};
use crate::error::{Error, Result};

/// A canonical element of `𝔻ⱼX`. Ordered by degree, arity, operad part and
/// then entries.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MonadElem<T> {
    degree: usize,
    arity: usize,
    op: usize,
    entries: Vec<T>,
}

impl<T> MonadElem<T> {
    /// Unchecked and uncanonicalized; callers must canonicalize.
    pub(crate) fn raw(degree: usize, op: usize, entries: Vec<T>) -> Self {
        MonadElem {
            degree,
            arity: entries.len(),
            op,
            entries,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Index of the operad part within its level.
    pub fn op(&self) -> usize {
        self.op
    }

    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<T> {
        self.entries
    }
}

impl<T: fmt::Display> fmt::Display for MonadElem<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[#{}", self.op)?;
        for (i, x) in self.entries.iter().enumerate() {
            write!(f, "{}{x}", if i == 0 { "; " } else { ", " })?;
        }
        write!(f, "]")
    }
}

/// Orbit data for one operad element: its orbit minimum and every `σ` with
/// `e·σ` equal to it.
#[derive(Debug, Clone)]
struct Canon {
    min: usize,
    sigmas: Vec<usize>,
}

/// The monad of an operad. Construction requires the operad to be Σ-free,
/// except through [`Monad::new_unchecked`].
#[derive(Debug, Clone)]
pub struct Monad {
    operad: Arc<CatOperad>,
    free: bool,
    canon: [Vec<Vec<Canon>>; 2],
    inverse: Vec<Vec<usize>>,
    skip_mu_canonicalization: bool,
}

impl Monad {
    pub fn new(operad: Arc<CatOperad>) -> Result<Self> {
        if let Some(w) = operad.freeness_witness() {
            return Err(Error::NotFree(w));
        }
        Ok(Monad::build(operad, true))
    }

    /// Builds the monad on a possibly non-free operad. Orbit representatives
    /// are still canonical, but realignment may be ambiguous.
    pub fn new_unchecked(operad: Arc<CatOperad>) -> Self {
        let free = operad.is_sigma_free();
        Monad::build(operad, free)
    }

    fn build(operad: Arc<CatOperad>, free: bool) -> Self {
        let canon = [0, 1].map(|j| {
            (0..=operad.max_level())
                .map(|n| {
                    (0..operad.size(j, n))
                        .map(|e| {
                            let images: Vec<usize> = (0..operad.perms(n).len()).map(|s| operad.act(j, n, e, s)).collect();
                            let min = *images.iter().min().expect("Σₙ is nonempty");
                            let sigmas = (0..images.len()).filter(|&s| images[s] == min).collect();
                            Canon { min, sigmas }
                        })
                        .collect()
                })
                .collect()
        });
        let inverse = (0..=operad.max_level())
            .map(|n| operad.perms(n).iter().map(|p| p.inverse().lex_rank()).collect())
            .collect();
        Monad {
            operad,
            free,
            canon,
            inverse,
            skip_mu_canonicalization: false,
        }
    }

    /// A deliberately broken copy whose `μ` skips canonicalization, used to
    /// confirm that the adjunction checks detect a faulty monad.
    pub fn with_mu_fault(mut self) -> Self {
        self.skip_mu_canonicalization = true;
        self
    }

    pub fn operad(&self) -> &Arc<CatOperad> {
        &self.operad
    }

    pub fn is_free(&self) -> bool {
        self.free
    }

    pub fn max_arity(&self) -> usize {
        self.operad.max_level()
    }

    fn check_arity(&self, n: usize) -> Result<()> {
        self.operad.require_level(n)
    }

    /// Whether `op` is the least element of its orbit.
    pub fn is_canonical_op(&self, j: usize, n: usize, op: usize) -> bool {
        self.canon[j][n][op].min == op
    }

    /// `(d·σ, σ⁻¹·x)`: the same orbit element with operad part `d·σ`.
    fn shift<T: Clone>(&self, e: &MonadElem<T>, sigma: usize) -> MonadElem<T> {
        let n = e.arity;
        let perm = &self.operad.perms(n)[sigma];
        MonadElem {
            degree: e.degree,
            arity: n,
            op: self.operad.act(e.degree, n, e.op, sigma),
            entries: (0..n).map(|i| e.entries[perm.apply(i)].clone()).collect(),
        }
    }

    pub fn canonicalize<T: Clone + Ord>(&self, e: MonadElem<T>) -> MonadElem<T> {
        let c = &self.canon[e.degree][e.arity][e.op];
        if c.sigmas.len() == 1 {
            if c.sigmas[0] == 0 {
                return e;
            }
            return self.shift(&e, c.sigmas[0]);
        }
        c.sigmas
            .iter()
            .map(|&s| self.shift(&e, s))
            .min()
            .expect("orbit minimum is attained")
    }

    /// Builds and canonicalizes `[op, entries]`.
    pub fn elem<T: Clone + Ord>(&self, degree: usize, op: usize, entries: Vec<T>) -> Result<MonadElem<T>> {
        if degree > 1 {
            return Err(Error::Precondition(format!("degree {degree} is not stored directly")));
        }
        self.check_arity(entries.len())?;
        if op >= self.operad.size(degree, entries.len()) {
            return Err(Error::structural(format!("no operation {op} at level {}", entries.len())));
        }
        Ok(self.canonicalize(MonadElem::raw(degree, op, entries)))
    }

    /// The representative of `e`'s orbit whose operad part is `desired`.
    /// Not canonical in general.
    pub fn realign<T: Clone + Ord>(&self, e: &MonadElem<T>, desired: usize) -> Result<MonadElem<T>> {
        let n = e.arity;
        let (from, to) = (&self.canon[e.degree][n][e.op], &self.canon[e.degree][n][desired]);
        if from.min != to.min {
            return Err(Error::internal(format!(
                "operations {} and {desired} at level {n} lie in different orbits",
                e.op
            )));
        }
        // e·σ_e = min = desired·σ_d, so e·(σ_e ∘ σ_d⁻¹) = desired
        let perms = self.operad.perms(n);
        let sigma = perms[from.sigmas[0]].compose(&perms[self.inverse[n][to.sigmas[0]]]).lex_rank();
        Ok(self.shift(e, sigma))
    }

    /// Realigns a degree-1 element so that its operad part has target `obj`.
    pub fn align_target<T: Clone + Ord>(&self, e: &MonadElem<T>, obj: usize) -> Result<MonadElem<T>> {
        self.align_endpoint(e, obj, true)
    }

    /// Realigns a degree-1 element so that its operad part has source `obj`.
    pub fn align_source<T: Clone + Ord>(&self, e: &MonadElem<T>, obj: usize) -> Result<MonadElem<T>> {
        self.align_endpoint(e, obj, false)
    }

    fn align_endpoint<T: Clone + Ord>(&self, e: &MonadElem<T>, obj: usize, target: bool) -> Result<MonadElem<T>> {
        let n = e.arity;
        let lvl = self.operad.level(n);
        let end = if target { lvl.target(e.op) } else { lvl.source(e.op) };
        let (from, to) = (&self.canon[0][n][end], &self.canon[0][n][obj]);
        if from.min != to.min {
            return Err(Error::internal("endpoint lies in a different orbit"));
        }
        let perms = self.operad.perms(n);
        let sigma = perms[from.sigmas[0]].compose(&perms[self.inverse[n][to.sigmas[0]]]).lex_rank();
        Ok(self.shift(e, sigma))
    }

    pub fn eta<T: Clone + Ord>(&self, degree: usize, x: T) -> MonadElem<T> {
        MonadElem::raw(degree, self.operad.unit(degree), vec![x])
    }

    /// Composes the outer operad part with the inner ones and concatenates
    /// the entries.
    pub fn mu<T: Clone + Ord>(&self, outer: &MonadElem<MonadElem<T>>) -> Result<MonadElem<T>> {
        let j = outer.degree;
        if outer.entries.iter().any(|b| b.degree != j) {
            return Err(Error::structural("μ needs inner elements of the outer degree"));
        }
        let inner: Vec<Leveled> = outer.entries.iter().map(|b| (b.arity, b.op)).collect();
        let op = self.operad.compose(j, outer.op, &inner)?;
        let entries: Vec<T> = outer.entries.iter().flat_map(|b| b.entries.iter().cloned()).collect();
        let raw = MonadElem::raw(j, op, entries);
        Ok(if self.skip_mu_canonicalization { raw } else { self.canonicalize(raw) })
    }

    /// `𝔻ⱼf`: applies `f` to the entries.
    pub fn map<T, U: Clone + Ord>(&self, e: &MonadElem<T>, f: impl FnMut(&T) -> U) -> MonadElem<U> {
        let entries = e.entries.iter().map(f).collect();
        self.canonicalize(MonadElem::raw(e.degree, e.op, entries))
    }

    pub fn try_map<T, U: Clone + Ord>(&self, e: &MonadElem<T>, f: impl FnMut(&T) -> Result<U>) -> Result<MonadElem<U>> {
        let entries = e.entries.iter().map(f).collect::<Result<Vec<U>>>()?;
        Ok(self.canonicalize(MonadElem::raw(e.degree, e.op, entries)))
    }

    fn require_degree<T>(&self, e: &MonadElem<T>, degree: usize) -> Result<()> {
        if e.degree != degree {
            return Err(Error::structural(format!("expected an element of degree {degree}")));
        }
        Ok(())
    }

    /// `S_𝔻` on a discrete carrier.
    pub fn source_d<T: Clone + Ord>(&self, e: &MonadElem<T>) -> Result<MonadElem<T>> {
        self.source_d_with(e, T::clone)
    }

    /// `T_𝔻` on a discrete carrier.
    pub fn target_d<T: Clone + Ord>(&self, e: &MonadElem<T>) -> Result<MonadElem<T>> {
        self.target_d_with(e, T::clone)
    }

    /// `I_𝔻` on a discrete carrier.
    pub fn identity_d<T: Clone + Ord>(&self, e: &MonadElem<T>) -> Result<MonadElem<T>> {
        self.identity_d_with(e, T::clone)
    }

    /// `S_𝔻` with the source map of the carrier category applied entrywise.
    pub fn source_d_with<T, U: Clone + Ord>(&self, e: &MonadElem<T>, f: impl FnMut(&T) -> U) -> Result<MonadElem<U>> {
        self.require_degree(e, 1)?;
        let op = self.operad.level(e.arity).source(e.op);
        Ok(self.canonicalize(MonadElem::raw(0, op, e.entries.iter().map(f).collect())))
    }

    pub fn target_d_with<T, U: Clone + Ord>(&self, e: &MonadElem<T>, f: impl FnMut(&T) -> U) -> Result<MonadElem<U>> {
        self.require_degree(e, 1)?;
        let op = self.operad.level(e.arity).target(e.op);
        Ok(self.canonicalize(MonadElem::raw(0, op, e.entries.iter().map(f).collect())))
    }

    pub fn identity_d_with<T, U: Clone + Ord>(&self, e: &MonadElem<T>, f: impl FnMut(&T) -> U) -> Result<MonadElem<U>> {
        self.require_degree(e, 0)?;
        let op = self.operad.level(e.arity).identity(e.op);
        Ok(self.canonicalize(MonadElem::raw(1, op, e.entries.iter().map(f).collect())))
    }

    /// `γ_𝔻(g, f) = g∘f` in `𝔻(X^δ)`; requires `S_𝔻 g = T_𝔻 f`.
    pub fn compose_d<T: Clone + Ord>(&self, g: &MonadElem<T>, f: &MonadElem<T>) -> Result<MonadElem<T>> {
        if self.source_d(g)? != self.target_d(f)? {
            return Err(Error::structural("γ_𝔻 of a non-composable pair"));
        }
        self.compose_d_with(g, f, |a, b| (a == b).then(|| a.clone()))
    }

    /// `γ_𝔻` on `𝔻C` for a category `C` whose composition is `entry(g, f)`.
    /// The right factor is realigned so that the operad parts compose.
    pub fn compose_d_with<T: Clone + Ord>(
        &self,
        g: &MonadElem<T>,
        f: &MonadElem<T>,
        mut entry: impl FnMut(&T, &T) -> Option<T>,
    ) -> Result<MonadElem<T>> {
        self.require_degree(g, 1)?;
        self.require_degree(f, 1)?;
        if g.arity != f.arity {
            return Err(Error::structural("γ_𝔻 of elements of different arity"));
        }
        let n = g.arity;
        let lvl = self.operad.level(n);
        let f = self.align_target(f, lvl.source(g.op))?;
        let op = lvl
            .compose(g.op, f.op)
            .ok_or_else(|| Error::internal("operad parts do not compose after alignment"))?;
        let entries = g
            .entries
            .iter()
            .zip(&f.entries)
            .map(|(a, b)| entry(a, b).ok_or_else(|| Error::structural("entries are not composable")))
            .collect::<Result<Vec<T>>>()?;
        Ok(self.canonicalize(MonadElem::raw(1, op, entries)))
    }

    /// `θ = μ ∘ 𝔻₁I_𝔻 ∘ 𝔻₁S` for a carrier with source structure
    /// `source: X → 𝔻₀M₀`.
    pub fn theta<T>(&self, omega: &MonadElem<T>, mut source: impl FnMut(&T) -> MonadElem<usize>) -> Result<MonadElem<usize>> {
        self.require_degree(omega, 1)?;
        let inner = omega
            .entries
            .iter()
            .map(|x| self.identity_d(&source(x)))
            .collect::<Result<Vec<_>>>()?;
        self.mu(&MonadElem::raw(1, omega.op, inner))
    }

    /// The interchange `χ`: lifts `(δ, φ)` with `S_𝔻δ = 𝔻₀T(φ)` to the unique
    /// `ω ∈ 𝔻₁M₁` and returns `(T_𝔻ω, θω)`.
    pub fn chi<T: Clone + Ord>(
        &self,
        delta: &MonadElem<usize>,
        phi: &MonadElem<T>,
        mut target: impl FnMut(&T) -> usize,
        source: impl FnMut(&T) -> MonadElem<usize>,
    ) -> Result<(MonadElem<T>, MonadElem<usize>)> {
        let omega = self.lift_interchange(delta, phi, &mut target)?;
        let top = self.target_d(&omega)?;
        let theta = self.theta(&omega, source)?;
        Ok((top, theta))
    }

    /// The element `ω = [m, f⃗]` with `𝔻₁T ω = δ` and `S_𝔻 ω = φ`. Not
    /// canonical: its operad part is `δ`'s.
    pub fn lift_interchange<T: Clone + Ord>(
        &self,
        delta: &MonadElem<usize>,
        phi: &MonadElem<T>,
        target: &mut impl FnMut(&T) -> usize,
    ) -> Result<MonadElem<T>> {
        self.require_degree(delta, 1)?;
        self.require_degree(phi, 0)?;
        if self.source_d(delta)? != self.map(phi, |x| target(x)) {
            return Err(Error::structural("χ applied outside its pullback"));
        }
        let m = delta.op;
        let aligned = self.realign(phi, self.operad.level(delta.arity).source(m))?;
        if aligned.entries.iter().map(target).ne(delta.entries.iter().copied()) {
            return Err(Error::internal("unique lift does not exist"));
        }
        Ok(MonadElem::raw(1, m, aligned.entries))
    }

    /// Canonical elements of degree `j` over `{0, …, alphabet-1}` with arity
    /// at most `max_arity`, sorted.
    pub fn elements(&self, j: usize, alphabet: usize, max_arity: usize) -> Vec<MonadElem<usize>> {
        let letters: Vec<usize> = (0..alphabet).collect();
        self.elements_over(j, &letters, |_| 1, max_arity, max_arity)
    }

    /// Canonical elements of degree `j` with entries from `alphabet`, arity
    /// at most `max_arity` and total entry weight at most `max_weight`.
    pub fn elements_over<T: Clone + Ord>(
        &self,
        j: usize,
        alphabet: &[T],
        weight: impl Fn(&T) -> usize,
        max_weight: usize,
        max_arity: usize,
    ) -> Vec<MonadElem<T>> {
        let mut out = BTreeSet::new();
        for n in 0..=max_arity.min(self.max_arity()) {
            let tuples = weighted_tuples(alphabet, n, &weight, max_weight);
            for op in 0..self.operad.size(j, n) {
                if self.free && !self.is_canonical_op(j, n, op) {
                    continue;
                }
                for t in &tuples {
                    out.insert(self.canonicalize(MonadElem::raw(j, op, t.clone())));
                }
            }
        }
        out.into_iter().collect()
    }

    /// Every degree-1 element with `T_𝔻 = s`, over a discrete carrier.
    pub fn morphisms_into<T: Clone + Ord>(&self, s: &MonadElem<T>) -> Vec<MonadElem<T>> {
        self.morphisms_at(s, true)
    }

    /// Every degree-1 element with `S_𝔻 = s`, over a discrete carrier.
    pub fn morphisms_from<T: Clone + Ord>(&self, s: &MonadElem<T>) -> Vec<MonadElem<T>> {
        self.morphisms_at(s, false)
    }

    fn morphisms_at<T: Clone + Ord>(&self, s: &MonadElem<T>, into: bool) -> Vec<MonadElem<T>> {
        let lvl = self.operad.level(s.arity);
        let ends = if into { lvl.into_object(s.op) } else { lvl.out_of(s.op) };
        let set: BTreeSet<MonadElem<T>> = ends
            .iter()
            .map(|&m| self.canonicalize(MonadElem::raw(1, m, s.entries.clone())))
            .collect();
        set.into_iter().collect()
    }

    /// Renders an element with the operad's labels.
    pub fn show<T>(&self, e: &MonadElem<T>, mut entry: impl FnMut(&T) -> String) -> String {
        let parts: Vec<String> = e.entries.iter().map(&mut entry).collect();
        format!("[{}; {}]", self.operad.label(e.degree, e.arity, e.op), parts.join(", "))
    }
}

/// Length-`n` tuples over `alphabet` with total weight at most `max_weight`.
fn weighted_tuples<T: Clone>(alphabet: &[T], n: usize, weight: &impl Fn(&T) -> usize, max_weight: usize) -> Vec<Vec<T>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn go<T: Clone>(
        alphabet: &[T],
        n: usize,
        weight: &impl Fn(&T) -> usize,
        left: usize,
        cur: &mut Vec<T>,
        out: &mut Vec<Vec<T>>,
    ) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for a in alphabet {
            let w = weight(a);
            if w <= left {
                cur.push(a.clone());
                go(alphabet, n, weight, left - w, cur, out);
                cur.pop();
            }
        }
    }
    go(alphabet, n, weight, max_weight, &mut cur, &mut out);
    out
}

/// An element of `𝔻₂X = 𝔻₁X ×_{𝔻₀X} 𝔻₁X`: `left` after `right`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ComposablePair<T> {
    left: MonadElem<T>,
    right: MonadElem<T>,
}

impl<T: Clone + Ord> ComposablePair<T> {
    pub fn new(monad: &Monad, left: MonadElem<T>, right: MonadElem<T>) -> Result<Self> {
        if monad.source_d(&left)? != monad.target_d(&right)? {
            return Err(Error::structural("pair is not composable"));
        }
        Ok(ComposablePair { left, right })
    }

    pub fn left(&self) -> &MonadElem<T> {
        &self.left
    }

    pub fn right(&self) -> &MonadElem<T> {
        &self.right
    }

    pub fn compose(&self, monad: &Monad) -> Result<MonadElem<T>> {
        monad.compose_d(&self.left, &self.right)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finset::Perm;

    fn be(n: usize) -> Monad {
        Monad::new(Arc::new(CatOperad::barratt_eccles(n))).unwrap()
    }

    fn ass(n: usize) -> Monad {
        Monad::new(Arc::new(CatOperad::associative(n))).unwrap()
    }

    #[test]
    fn commutative_operad_is_rejected() {
        let err = Monad::new(Arc::new(CatOperad::commutative(3))).unwrap_err();
        assert!(matches!(err, Error::NotFree(_)));
    }

    #[test]
    fn eta_is_the_unit_on_one_entry() {
        let m = be(3);
        let e = m.eta(0, 'a');
        assert_eq!((e.arity(), e.op(), e.entries()), (1, 0, &['a'][..]));
        assert_eq!(m.show(&ass(3).eta(0, "a"), |s| s.to_string()), "[(1); a]");
    }

    #[test]
    fn mu_flattens_lists_for_the_associative_operad() {
        let m = ass(4);
        let a = m.elem(0, 0, vec!['a']).unwrap();
        let bc = m.elem(0, 0, vec!['b', 'c']).unwrap();
        let outer = MonadElem::raw(0, 0, vec![a, bc]);
        let flat = m.mu(&outer).unwrap();
        assert_eq!(flat, m.elem(0, 0, vec!['a', 'b', 'c']).unwrap());
    }

    #[test]
    fn degree_zero_is_the_free_monoid_for_barratt_eccles() {
        let m = be(3);
        // every orbit has a representative on the identity permutation
        let swapped = m.elem(0, 1, vec!['x', 'y']).unwrap();
        assert_eq!(swapped.op(), 0);
        assert_eq!(swapped.entries(), &['y', 'x']);
        let inner1 = m.elem(0, 0, vec!['a']).unwrap();
        let inner2 = m.elem(0, 1, vec!['b', 'c']).unwrap();
        let outer = m.elem(0, 0, vec![inner1, inner2]).unwrap();
        assert_eq!(m.mu(&outer).unwrap().entries(), &['a', 'c', 'b']);
    }

    #[test]
    fn unit_laws_on_samples() {
        for m in [be(3), ass(3)] {
            for j in 0..2 {
                for e in m.elements(j, 2, 3) {
                    let left = MonadElem::raw(j, m.operad().unit(j), vec![e.clone()]);
                    assert_eq!(m.mu(&left).unwrap(), e);
                    let right = m.map(&e, |&x| m.eta(j, x));
                    assert_eq!(m.mu(&right).unwrap(), e);
                }
            }
        }
    }

    #[test]
    fn map_examples() {
        let m = be(3);
        for e in m.elements(1, 3, 3) {
            assert_eq!(m.map(&e, |&x| x), e);
            let collapsed = m.map(&e, |_| 0usize);
            assert!(collapsed.entries().iter().all(|&x| x == 0));
            // naturality of η
            assert_eq!(m.map(&m.eta(1, 2usize), |&x| x + 1), m.eta(1, 3usize));
        }
    }

    #[test]
    fn identity_then_endpoints() {
        let m = be(3);
        for e in m.elements(0, 2, 3) {
            let id = m.identity_d(&e).unwrap();
            assert_eq!(m.source_d(&id).unwrap(), e);
            assert_eq!(m.target_d(&id).unwrap(), e);
        }
    }

    #[test]
    fn automorphisms_of_three_points() {
        let m = be(3);
        let three = m.elem(0, 0, vec![(); 3]).unwrap();
        let homs: Vec<_> = m
            .morphisms_into(&three)
            .into_iter()
            .filter(|f| m.source_d(f).unwrap() == three)
            .collect();
        assert_eq!(homs.len(), 6);
        // composition is the group product: name each automorphism by the
        // target permutation of its representative with identity source
        let name = |f: &MonadElem<()>| {
            let lvl = m.operad().level(3);
            let aligned = m.align_source(f, 0).unwrap();
            m.operad().perms(3)[lvl.target(aligned.op())].clone()
        };
        for f in &homs {
            for g in &homs {
                let gf = m.compose_d(g, f).unwrap();
                assert_eq!(name(&gf), name(g).compose(&name(f)));
            }
        }
    }

    #[test]
    fn realign_reaches_every_orbit_member() {
        let m = be(3);
        let e = m.elem(1, 7, vec!['a', 'b', 'c']).unwrap();
        for s in 0..6 {
            let target = m.operad().act(1, 3, e.op(), s);
            let r = m.realign(&e, target).unwrap();
            assert_eq!(r.op(), target);
            assert_eq!(m.canonicalize(r), e);
        }
    }

    #[test]
    fn canonical_form_is_constant_on_orbits_and_separates_them() {
        let m = be(3);
        let mut seen = std::collections::HashMap::new();
        for op in 0..36 {
            for x in 0..27usize {
                let entries = vec![x / 9, (x / 3) % 3, x % 3];
                let e = MonadElem::raw(1, op, entries);
                let c = m.canonicalize(e.clone());
                for s in 0..6 {
                    assert_eq!(m.canonicalize(m.shift(&e, s)), c);
                }
                seen.entry(c).or_insert(0usize);
            }
        }
        // 36·27 pairs in free orbits of size 6
        assert_eq!(seen.len(), 36 * 27 / 6);
    }

    #[test]
    fn theta_on_unary_sources() {
        let m = ass(3);
        // a carrier with one element whose source is [id; 0]
        let src = m.elem(0, 0, vec![0usize]).unwrap();
        let omega = m.eta(1, ());
        let th = m.theta(&omega, |_| src.clone()).unwrap();
        assert_eq!(th, m.identity_d(&src).unwrap());
    }

    #[test]
    fn theta_of_identities_and_composites() {
        let m = be(3);
        let sources = m.elements(0, 2, 1);
        let src = |&x: &usize| sources[x].clone();
        for phi in m.elements(0, sources.len(), 2) {
            let id = m.identity_d(&phi).unwrap();
            let flat = m.mu(&m.map(&phi, src)).unwrap();
            assert_eq!(m.theta(&id, src).unwrap(), m.identity_d(&flat).unwrap());
        }
        let mut pairs = 0;
        for f in m.elements(1, sources.len(), 2) {
            for g in m.morphisms_from(&m.target_d(&f).unwrap()) {
                let gf = m.compose_d(&g, &f).unwrap();
                let composite = m.compose_d(&m.theta(&g, src).unwrap(), &m.theta(&f, src).unwrap()).unwrap();
                assert_eq!(m.theta(&gf, src).unwrap(), composite);
                pairs += 1;
            }
        }
        assert!(pairs > 0);
    }

    #[test]
    fn chi_with_identity_left_leg() {
        // M₁ = {f₂} with T f₂ = 0 and S f₂ = [id; 0, 0]
        let m = be(3);
        let src = m.elem(0, 0, vec![0usize, 0]).unwrap();
        let phi = m.eta(0, "f2");
        let delta = m.identity_d(&m.eta(0, 0usize)).unwrap();
        let (top, theta) = m.chi(&delta, &phi, |_| 0, |_| src.clone()).unwrap();
        assert_eq!(top, phi);
        assert_eq!(theta, m.identity_d(&src).unwrap());
    }

    #[test]
    fn chi_with_identity_right_leg() {
        // every element of M₁ is an identity: T = id, S = η
        let m = be(3);
        let two = m.elem(0, 0, vec![0usize, 1]).unwrap();
        let phi = two.clone();
        for delta in m.morphisms_from(&two) {
            let (top, theta) = m.chi(&delta, &phi, |&x| x, |&x| m.eta(0, x)).unwrap();
            assert_eq!(theta, delta);
            assert_eq!(top, m.target_d(&delta).unwrap());
        }
    }

    #[test]
    fn chi_on_the_associative_operad() {
        // f: (0,0) → 0 and g: () → 1; δ is the identity on [f-target, g-target]
        let m = ass(3);
        let sources = |x: &char| match x {
            'f' => m.elem(0, 0, vec![0usize, 0]).unwrap(),
            _ => m.elem(0, 0, Vec::<usize>::new()).unwrap(),
        };
        let targets = |x: &char| if *x == 'f' { 0 } else { 1 };
        let phi = m.elem(0, 0, vec!['f', 'g']).unwrap();
        let delta = m.identity_d(&m.elem(0, 0, vec![0usize, 1]).unwrap()).unwrap();
        let (top, theta) = m.chi(&delta, &phi, targets, sources).unwrap();
        assert_eq!(top, phi);
        // θ concatenates the sources: (0,0) followed by nothing
        assert_eq!(theta, m.identity_d(&m.elem(0, 0, vec![0usize, 0]).unwrap()).unwrap());
        let swap = Perm::transposition(2, 1, 2).lex_rank();
        // the other ordering is a different element of 𝔻₀M₁
        assert_ne!(m.elem(0, swap, vec!['f', 'g']).unwrap(), phi);
    }

    #[test]
    fn composable_pairs_check_endpoints() {
        let m = be(2);
        let two = m.elem(0, 0, vec!['a', 'b']).unwrap();
        let homs = m.morphisms_into(&two);
        assert_eq!(homs.len(), 2);
        let id = m.identity_d(&two).unwrap();
        let swap = homs.iter().find(|f| **f != id).unwrap().clone();
        assert!(ComposablePair::new(&m, swap.clone(), swap.clone()).is_err());
        let back = m.morphisms_from(&two).into_iter().find(|f| *f != id).unwrap();
        let pair = ComposablePair::new(&m, back.clone(), swap.clone()).unwrap();
        assert_eq!(pair.compose(&m).unwrap(), m.identity_d(&m.source_d(&swap).unwrap()).unwrap());
    }

    #[test]
    fn mu_beyond_truncation_is_reported() {
        let m = be(2);
        let two = m.elem(0, 0, vec![0usize, 1]).unwrap();
        let outer = m.elem(0, 0, vec![two.clone(), two]).unwrap();
        assert!(m.mu(&outer).unwrap_err().is_bound_exceeded());
    }
}
