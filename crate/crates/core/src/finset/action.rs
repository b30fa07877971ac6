use std::collections::HashMap;

use super::{pullback, FinFn, FinSet, Label, Perm};
use crate::error::{Error, Result};

/// A left action of a finite permutation group on a finite set.
///
/// `table[g][x]` is the index of `g·x`. When constructed with
/// `require_free`, freeness is verified up front and orbit canonicalization
/// is available.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupAction {
    group: Vec<Perm>,
    carrier: FinSet,
    table: Vec<Vec<usize>>,
    free: bool,
}

impl GroupAction {
    pub fn new(group: Vec<Perm>, carrier: FinSet, table: Vec<Vec<usize>>, require_free: bool) -> Result<Self> {
        if group.is_empty() {
            return Err(Error::structural("group must contain the identity"));
        }
        if table.len() != group.len() || table.iter().any(|row| row.len() != carrier.len()) {
            return Err(Error::structural("action table has the wrong shape"));
        }
        if table.iter().flatten().any(|&y| y >= carrier.len()) {
            return Err(Error::structural("action table leaves the carrier"));
        }
        let index: HashMap<&Perm, usize> = group.iter().enumerate().map(|(i, g)| (g, i)).collect();
        if index.len() != group.len() {
            return Err(Error::structural("repeated group element"));
        }
        let id = group
            .iter()
            .position(Perm::is_identity)
            .ok_or_else(|| Error::structural("group must contain the identity"))?;
        if let Some(x) = carrier.indices().find(|&x| table[id][x] != x) {
            return Err(Error::structural(format!("identity moves {}", carrier.label(x))));
        }
        for (gi, g) in group.iter().enumerate() {
            if !index.contains_key(&g.inverse()) {
                return Err(Error::structural(format!("group not closed under inverse at {g}")));
            }
            for (hi, h) in group.iter().enumerate() {
                let gh = index
                    .get(&g.compose(h))
                    .ok_or_else(|| Error::structural(format!("group not closed: {g}∘{h}")))?;
                for x in carrier.indices() {
                    if table[*gh][x] != table[gi][table[hi][x]] {
                        return Err(Error::structural(format!(
                            "not an action: ({g}∘{h})·{} differs from {g}·({h}·{})",
                            carrier.label(x),
                            carrier.label(x)
                        )));
                    }
                }
            }
        }
        let mut action = GroupAction {
            group,
            carrier,
            table,
            free: false,
        };
        if require_free {
            if let Some((g, x)) = action.fixed_point() {
                return Err(Error::NotFree(format!(
                    "{} fixes {}",
                    action.group[g],
                    action.carrier.label(x)
                )));
            }
            action.free = true;
        }
        Ok(action)
    }

    /// `G` acting on `G × names` by left multiplication on the first factor.
    /// Elements are labelled `(σ, name)`.
    pub fn free_on(group: Vec<Perm>, names: &[Label]) -> Result<Self> {
        let labels: Vec<Label> = group
            .iter()
            .flat_map(|g| names.iter().map(move |n| Label::pair(Label::ints(g.one_based()), n.clone())))
            .collect();
        let carrier = FinSet::new(labels)?;
        let table = group
            .iter()
            .map(|g| {
                carrier
                    .labels()
                    .iter()
                    .map(|l| {
                        let Label::Tuple(parts) = l else { unreachable!() };
                        let h = perm_of_label(&parts[0]);
                        let moved = Label::pair(Label::ints(g.compose(&h).one_based()), parts[1].clone());
                        carrier.index_of(&moved).expect("closed")
                    })
                    .collect()
            })
            .collect();
        GroupAction::new(group, carrier, table, true)
    }

    /// The group acting trivially.
    pub fn trivial(group: Vec<Perm>, carrier: FinSet) -> Result<Self> {
        let table = vec![carrier.indices().collect(); group.len()];
        GroupAction::new(group, carrier, table, false)
    }

    pub fn group(&self) -> &[Perm] {
        &self.group
    }

    pub fn carrier(&self) -> &FinSet {
        &self.carrier
    }

    pub fn is_marked_free(&self) -> bool {
        self.free
    }

    pub fn act(&self, g: usize, x: usize) -> usize {
        self.table[g][x]
    }

    pub fn group_index(&self, g: &Perm) -> Option<usize> {
        self.group.iter().position(|h| h == g)
    }

    fn fixed_point(&self) -> Option<(usize, usize)> {
        self.group
            .iter()
            .enumerate()
            .filter(|(_, g)| !g.is_identity())
            .find_map(|(gi, _)| self.carrier.indices().find(|&x| self.table[gi][x] == x).map(|x| (gi, x)))
    }

    /// True iff no non-identity element fixes a point.
    pub fn verify_free(&self) -> bool {
        self.fixed_point().is_none()
    }

    /// Minimal element of the orbit of `x`, for any action.
    pub fn orbit_min(&self, x: usize) -> usize {
        (0..self.group.len()).map(|g| self.table[g][x]).min().expect("nonempty group")
    }

    /// Orbit representative of `x`; requires a verified free action.
    pub fn canonicalize(&self, x: usize) -> Result<usize> {
        if !self.free {
            if let Some((g, y)) = self.fixed_point() {
                return Err(Error::NotFree(format!(
                    "{} fixes {}",
                    self.group[g],
                    self.carrier.label(y)
                )));
            }
        }
        Ok(self.orbit_min(x))
    }

    /// The orbit set, labelled by minimal members, with the quotient map.
    pub fn orbits(&self) -> (FinSet, FinFn) {
        let mins: Vec<usize> = self.carrier.indices().map(|x| self.orbit_min(x)).collect();
        let mut reps = mins.clone();
        reps.sort_unstable();
        reps.dedup();
        let set = FinSet::new(reps.iter().map(|&r| self.carrier.label(r).clone()).collect()).expect("distinct");
        let table = mins.iter().map(|m| reps.binary_search(m).expect("present")).collect();
        let q = FinFn::new(self.carrier.clone(), set.clone(), table).expect("total");
        (set, q)
    }

    /// True iff `f` intertwines this action with `other` (same group list).
    pub fn is_equivariant(&self, f: &FinFn, other: &GroupAction) -> bool {
        self.group == other.group
            && f.src() == &self.carrier
            && f.tgt() == &other.carrier
            && (0..self.group.len())
                .all(|g| self.carrier.indices().all(|x| f.apply(self.act(g, x)) == other.act(g, f.apply(x))))
    }
}

fn perm_of_label(l: &Label) -> Perm {
    let Label::Tuple(xs) = l else { panic!("not a permutation label") };
    let images: Vec<usize> = xs
        .iter()
        .map(|x| match x {
            Label::Int(i) => *i as usize,
            _ => panic!("not a permutation label"),
        })
        .collect();
    Perm::from_one_based(&images).expect("permutation label")
}

/// Outcome of comparing `A/G` with `B/G ×_{D/G} C/G` for a pullback square
/// `A = B ×_D C` of G-sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitPullbackComparison {
    pub orbits_of_pullback: usize,
    pub pullback_of_orbits: usize,
    pub injective: bool,
    pub surjective: bool,
}

impl OrbitPullbackComparison {
    pub fn is_isomorphism(&self) -> bool {
        self.injective && self.surjective
    }
}

/// Forms the pullback of equivariant maps `f: B → D`, `g: C → D` with the
/// diagonal action and compares its orbits with the pullback of orbit sets.
pub fn orbit_pullback_comparison(
    b: &GroupAction,
    c: &GroupAction,
    d: &GroupAction,
    f: &FinFn,
    g: &FinFn,
) -> Result<OrbitPullbackComparison> {
    if !b.is_equivariant(f, d) || !c.is_equivariant(g, d) {
        return Err(Error::structural("maps are not equivariant"));
    }
    let (a_set, p1, p2) = pullback(f, g)?;
    let mut lookup = HashMap::new();
    for x in a_set.indices() {
        lookup.insert((p1.apply(x), p2.apply(x)), x);
    }
    let table = (0..b.group.len())
        .map(|gi| {
            a_set
                .indices()
                .map(|x| lookup[&(b.act(gi, p1.apply(x)), c.act(gi, p2.apply(x)))])
                .collect()
        })
        .collect();
    let a = GroupAction::new(b.group.clone(), a_set, table, false)?;
    let (a_orb, qa) = a.orbits();
    let (b_orb, qb) = b.orbits();
    let (c_orb, qc) = c.orbits();
    let (d_orb, qd) = d.orbits();
    let f_orb = FinFn::new(
        b_orb.clone(),
        d_orb.clone(),
        b_orb.labels().iter().map(|l| qd.apply(f.apply(b.carrier.index_of(l).expect("rep")))).collect(),
    )?;
    let g_orb = FinFn::new(
        c_orb.clone(),
        d_orb,
        c_orb.labels().iter().map(|l| qd.apply(g.apply(c.carrier.index_of(l).expect("rep")))).collect(),
    )?;
    let (pb, _, _) = pullback(&f_orb, &g_orb)?;
    let mut hits = vec![0usize; pb.len()];
    for l in a_orb.labels() {
        let x = a.carrier.index_of(l).expect("rep");
        let pair = Label::pair(
            b_orb.label(qb.apply(p1.apply(x))).clone(),
            c_orb.label(qc.apply(p2.apply(x))).clone(),
        );
        let idx = pb.index_of(&pair).ok_or_else(|| Error::internal("orbit pair outside pullback"))?;
        hits[idx] += 1;
    }
    let _ = qa;
    Ok(OrbitPullbackComparison {
        orbits_of_pullback: a_orb.len(),
        pullback_of_orbits: pb.len(),
        injective: hits.iter().all(|&h| h <= 1),
        surjective: hits.iter().all(|&h| h >= 1),
    })
}
