//! Restricting an action to a subgroup: coset action, branch data and the
//! induced generating vector classes.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_rational::Ratio;
use serde::Serialize;

use crate::budget::Budget;
use crate::equivalence::{Classifier, TopologicalClass};
use crate::error::{Error, Result};
use crate::group::{Elem, FiniteGroup, Isomorphism, Subgroup};
use crate::signature::Signature;
use crate::ske::GeneratingVector;

/// Right multiplication action of `G` on the right cosets `Hg`.
pub struct CosetAction {
    coset_of: Vec<u32>,
    reps: Vec<Elem>,
}

impl CosetAction {
    pub fn new(g: &FiniteGroup, h: &Subgroup) -> CosetAction {
        let mut coset_of = vec![u32::MAX; g.order()];
        let mut reps = Vec::new();
        let members = h.elements();
        for x in g.elements() {
            if coset_of[x as usize] != u32::MAX {
                continue;
            }
            let id = reps.len() as u32;
            reps.push(x);
            for &y in &members {
                coset_of[g.mul(y, x) as usize] = id;
            }
        }
        CosetAction { coset_of, reps }
    }

    pub fn index(&self) -> usize {
        self.reps.len()
    }

    pub fn representative(&self, coset: usize) -> Elem {
        self.reps[coset]
    }

    pub fn coset_of(&self, x: Elem) -> usize {
        self.coset_of[x as usize] as usize
    }

    /// The permutation of cosets induced by `x`.
    pub fn image(&self, g: &FiniteGroup, x: Elem) -> Vec<usize> {
        self.reps.iter().map(|&r| self.coset_of(g.mul(r, x))).collect()
    }

    /// Cycles of `x` on the cosets, each starting at its least coset.
    pub fn cycles(&self, g: &FiniteGroup, x: Elem) -> Vec<Vec<usize>> {
        let img = self.image(g, x);
        let mut seen = vec![false; img.len()];
        let mut out = Vec::new();
        for c in 0..img.len() {
            if seen[c] {
                continue;
            }
            let mut cyc = Vec::new();
            let mut d = c;
            while !seen[d] {
                seen[d] = true;
                cyc.push(d);
                d = img[d];
            }
            out.push(cyc);
        }
        out
    }

    /// Kernel of the action, the core of `H`.
    pub fn kernel(&self, g: &FiniteGroup) -> Vec<Elem> {
        g.elements()
            .filter(|&x| self.image(g, x).iter().enumerate().all(|(i, &j)| i == j))
            .collect()
    }
}

/// A branch point of the restricted action: one cycle of an elliptic entry on the cosets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchPoint {
    /// Index of the elliptic entry of the ambient vector.
    pub source: usize,
    pub coset: usize,
    pub cycle_len: usize,
    pub period: u32,
    /// `g x^k g^-1` for a coset representative `g`, an element of `H`.
    pub generator: Elem,
}

#[derive(Clone, Debug)]
pub struct Restriction {
    pub index: usize,
    pub surface_genus: u32,
    pub induced_signature: Signature,
    /// Branch points with period above 1, sorted by period then source.
    pub branch_points: Vec<BranchPoint>,
    /// Cycle lengths per elliptic entry, including fixed-point-free ones.
    pub cycle_types: Vec<Vec<usize>>,
}

/// Branching data and induced signature of `v` restricted to `h`.
pub fn restrict(v: &GeneratingVector, h: &Subgroup) -> Result<Restriction> {
    let g = v.group();
    let genus = v.surface_genus()?;
    let action = CosetAction::new(g, h);
    let d = action.index();
    let mut points = Vec::new();
    let mut cycle_types = Vec::new();
    for (j, &x) in v.elliptic().iter().enumerate() {
        let m = g.elem_order(x);
        let mut lens = Vec::new();
        for cyc in action.cycles(g, x) {
            let k = cyc.len();
            lens.push(k);
            let period = m / k as u32;
            if period > 1 {
                let rep = action.representative(cyc[0]);
                let gen = g.mul(g.mul(rep, g.pow(x, k as i64)), g.inv(rep));
                debug_assert!(h.contains(gen));
                points.push(BranchPoint { source: j, coset: cyc[0], cycle_len: k, period, generator: gen });
            }
        }
        cycle_types.push(lens);
    }
    points.sort_by_key(|p| (p.period, p.source, p.coset));
    let periods: Vec<u32> = points.iter().map(|p| p.period).collect();
    let orbit_genus = induced_orbit_genus(genus, h.order(), &periods)?;
    // second route: Riemann-Hurwitz for the intermediate cover S/H -> S/G
    let base = v.signature().genus as i64;
    let ramification: i64 = cycle_types.iter().map(|c| d as i64 - c.len() as i64).sum();
    let chi = d as i64 * (2 - 2 * base) - ramification;
    if chi != 2 - 2 * orbit_genus as i64 {
        return Err(Error::InvalidVector("inconsistent branching data".into()));
    }
    Ok(Restriction {
        index: d,
        surface_genus: genus,
        induced_signature: Signature::new(orbit_genus, periods)?,
        branch_points: points,
        cycle_types,
    })
}

/// Solves `2(g-1) = |H| (2(h-1) + sum(1 - 1/m))` for `h`.
fn induced_orbit_genus(genus: u32, order: usize, periods: &[u32]) -> Result<u32> {
    let mut rhs = Ratio::new(2 * (genus as i64 - 1), order as i64);
    for &m in periods {
        rhs -= Ratio::new(m as i64 - 1, m as i64);
    }
    // rhs = 2(h - 1)
    if !rhs.is_integer() || rhs.to_integer() % 2 != 0 || rhs.to_integer() < -2 {
        return Err(Error::NonIntegralGenus);
    }
    Ok((rhs.to_integer() / 2 + 1) as u32)
}

/// The classes an induced action can belong to, as classes of a target
/// classifier isomorphic to the subgroup.
#[derive(Clone, Debug)]
pub struct InducedClasses {
    pub candidates: Vec<TopologicalClass>,
    /// True when the rotation data pins down a single class.
    pub determined: bool,
}

impl InducedClasses {
    pub fn class(&self) -> Option<&TopologicalClass> {
        if self.determined {
            self.candidates.first()
        } else {
            None
        }
    }

    pub fn ids(&self) -> BTreeSet<String> {
        self.candidates.iter().map(|c| c.class_id.clone()).collect()
    }
}

/// Matches branch data against the vectors of `target` (a classifier for a
/// group isomorphic to `H` via `iso`, whose signature has the same type as
/// the induced one).
///
/// Vectors whose elliptic entries have the same multiset of
/// `(period, conjugacy class)` pairs as the branch data are the candidates.
/// When `H` is abelian with orbit genus 0 the entries are the distinguished
/// generators themselves, so the class is read off directly.
pub fn induced_classes_in(
    restriction: &Restriction,
    embedding: &[Elem],
    iso: &Isomorphism,
    target: &Classifier,
    budget: &Budget,
) -> Result<InducedClasses> {
    let t = target.group();
    if !restriction.induced_signature.same_type(target.signature()) {
        return Err(Error::Usage("target signature does not match the induced signature".into()));
    }
    // ambient element -> subgroup index -> target element
    let mut back: BTreeMap<Elem, Elem> = BTreeMap::new();
    for (i, &e) in embedding.iter().enumerate() {
        back.insert(e, i as Elem);
    }
    let gens: Vec<Elem> = restriction
        .branch_points
        .iter()
        .map(|p| back.get(&p.generator).map(|&x| iso.apply(x)))
        .collect::<Option<_>>()
        .ok_or_else(|| Error::NotSubgroup("distinguished generator outside the subgroup".into()))?;
    if t.is_abelian() && restriction.induced_signature.genus == 0 {
        let c = target.class_of(&gens)?;
        return Ok(InducedClasses { candidates: vec![c], determined: true });
    }
    let mut wanted: Vec<(u32, usize)> = gens.iter().map(|&x| (t.elem_order(x), t.class_index(x))).collect();
    wanted.sort_unstable();
    let genus = target.signature().genus as usize;
    let mut found: BTreeMap<String, TopologicalClass> = BTreeMap::new();
    for v in target.vectors(budget)? {
        let mut rot: Vec<(u32, usize)> = v[2 * genus..].iter().map(|&x| (t.elem_order(x), t.class_index(x))).collect();
        rot.sort_unstable();
        if rot == wanted {
            let c = target.class_of(&v)?;
            found.entry(c.class_id.clone()).or_insert(c);
        }
    }
    if found.is_empty() {
        return Err(Error::InvalidVector("no vector matches the branch data".into()));
    }
    let determined = found.len() == 1;
    Ok(InducedClasses { candidates: found.into_values().collect(), determined })
}

/// Full restriction report with the subgroup materialized as its own group.
pub struct InducedAction {
    pub restriction: Restriction,
    pub group: Arc<FiniteGroup>,
    pub embedding: Vec<Elem>,
    pub classes: InducedClasses,
}

pub fn induced_action(v: &GeneratingVector, h: &Subgroup, budget: &Budget) -> Result<InducedAction> {
    let restriction = restrict(v, h)?;
    let (sub, embedding) = v.group().subgroup_group(h.members(), &format!("{} subgroup", v.group().name()))?;
    let group = Arc::new(sub);
    let classifier = Classifier::new(group.clone(), restriction.induced_signature.clone(), budget)?;
    let iso = Isomorphism::identity(group.order());
    let classes = induced_classes_in(&restriction, &embedding, &iso, &classifier, budget)?;
    Ok(InducedAction { restriction, group, embedding, classes })
}

/// Serializable restriction of one vector to one subgroup.
#[derive(Clone, Debug, Serialize)]
pub struct RestrictionReport {
    pub group: String,
    pub subgroup: Vec<String>,
    pub subgroup_order: usize,
    pub index: usize,
    pub vector: crate::ske::VectorRecord,
    pub surface_genus: u32,
    pub induced_signature: Signature,
    pub cycle_types: Vec<Vec<usize>>,
    pub branch_data: Vec<BranchRecord>,
    pub induced_classes: Vec<String>,
    pub determined: bool,
}

impl InducedAction {
    pub fn report(&self, v: &GeneratingVector, h: &Subgroup) -> RestrictionReport {
        let g = v.group();
        RestrictionReport {
            group: g.name().to_string(),
            subgroup: h.gens().iter().map(|&x| g.format_elem(x)).collect(),
            subgroup_order: h.order(),
            index: self.restriction.index,
            vector: v.record(),
            surface_genus: self.restriction.surface_genus,
            induced_signature: self.restriction.induced_signature.clone(),
            cycle_types: self.restriction.cycle_types.clone(),
            branch_data: self.restriction.branch_records(g),
            induced_classes: self.classes.ids().into_iter().collect(),
            determined: self.classes.determined,
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct BranchRecord {
    pub source: usize,
    pub cycle_len: usize,
    pub period: u32,
    pub generator: String,
}

impl Restriction {
    pub fn branch_records(&self, g: &FiniteGroup) -> Vec<BranchRecord> {
        self.branch_points
            .iter()
            .map(|p| BranchRecord {
                source: p.source + 1,
                cycle_len: p.cycle_len,
                period: p.period,
                generator: g.format_elem(p.generator),
            })
            .collect()
    }
}
