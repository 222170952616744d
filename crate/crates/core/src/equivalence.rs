//! Topological equivalence of generating vectors.
//!
//! Two vectors are equivalent when one is carried to the other by a sequence
//! of mapping-class moves followed by an automorphism of the group. Orbits
//! are explored over all period orderings; orbit sizes and representatives
//! only count vectors in the signature's own period order.
//!
//! For orbit genus 0 the moves are the braid moves, which generate the whole
//! mapping class group. For orbit genus at least 1 the move set (twists,
//! handle exchange, a point slide and braids) generates a subgroup that is
//! enough for the cases handled here, but classifications there are relative
//! to this move set.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::Arc;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::group::{Elem, FiniteGroup, IsoSearch, Isomorphism};
use crate::signature::Signature;
use crate::ske::{self, GeneratingVector};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Move {
    /// `(x_j, x_j+1) -> (x_j+1, x_j+1^-1 x_j x_j+1)`, 0-based elliptic position.
    Braid(usize),
    /// `(a_i, b_i) -> (a_i, b_i a_i)`
    TwistA(usize),
    /// `(a_i, b_i) -> (a_i b_i, b_i)`
    TwistB(usize),
    /// Exchanges handles `i` and `i+1`, conjugating the first by the second's commutator.
    HandleSwap(usize),
    /// Slides the first branch point around the last handle:
    /// `(a, b, x) -> (a x, x^-1 b x, x^-1 b x b^-1 x)`.
    Slide,
    Automorphism(Isomorphism),
}

impl Move {
    pub fn apply(&self, g: &FiniteGroup, genus: usize, v: &[Elem]) -> Vec<Elem> {
        let mut out = v.to_vec();
        let e0 = 2 * genus;
        match self {
            Move::Braid(j) => {
                let (x, y) = (v[e0 + j], v[e0 + j + 1]);
                out[e0 + j] = y;
                out[e0 + j + 1] = g.conj(x, y);
            }
            Move::TwistA(i) => {
                out[2 * i + 1] = g.mul(v[2 * i + 1], v[2 * i]);
            }
            Move::TwistB(i) => {
                out[2 * i] = g.mul(v[2 * i], v[2 * i + 1]);
            }
            Move::HandleSwap(i) => {
                let (a1, b1, a2, b2) = (v[2 * i], v[2 * i + 1], v[2 * i + 2], v[2 * i + 3]);
                let k2 = g.commutator(a2, b2);
                // c = k2^-1, and c y c^-1 = conj(y, k2)
                out[2 * i] = a2;
                out[2 * i + 1] = b2;
                out[2 * i + 2] = g.conj(a1, k2);
                out[2 * i + 3] = g.conj(b1, k2);
            }
            Move::Slide => {
                let (a, b, x) = (v[e0 - 2], v[e0 - 1], v[e0]);
                let bx = g.conj(b, x);
                out[e0 - 2] = g.mul(a, x);
                out[e0 - 1] = bx;
                out[e0] = g.mul(g.mul(bx, g.inv(b)), x);
            }
            Move::Automorphism(f) => {
                for x in out.iter_mut() {
                    *x = f.apply(*x);
                }
            }
        }
        out
    }

    pub fn describe(&self, g: &FiniteGroup) -> MoveRecord {
        match self {
            Move::Braid(j) => MoveRecord { kind: "braid", position: Some(*j), images: None },
            Move::TwistA(i) => MoveRecord { kind: "twist_a", position: Some(*i), images: None },
            Move::TwistB(i) => MoveRecord { kind: "twist_b", position: Some(*i), images: None },
            Move::HandleSwap(i) => MoveRecord { kind: "handle_swap", position: Some(*i), images: None },
            Move::Slide => MoveRecord { kind: "slide", position: None, images: None },
            Move::Automorphism(f) => MoveRecord {
                kind: "automorphism",
                position: None,
                images: Some(f.generator_images(g).iter().map(|&x| g.format_elem(x)).collect()),
            },
        }
    }
}

/// Serializable form of a move; automorphisms list the generator images.
#[derive(Clone, Debug, Serialize)]
pub struct MoveRecord {
    pub kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub position: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub images: Option<Vec<String>>,
}

/// The mapping-class moves available for a signature (without automorphisms).
pub fn mapping_class_moves(genus: usize, len: usize) -> Vec<Move> {
    let mut moves: Vec<Move> = (0..len.saturating_sub(1)).map(Move::Braid).collect();
    for i in 0..genus {
        moves.push(Move::TwistA(i));
        moves.push(Move::TwistB(i));
        if i + 1 < genus {
            moves.push(Move::HandleSwap(i));
        }
    }
    if genus > 0 && len > 0 {
        moves.push(Move::Slide);
    }
    moves
}

/// Applies a witness sequence to `v`.
pub fn replay(g: &FiniteGroup, genus: usize, v: &[Elem], moves: &[Move]) -> Vec<Elem> {
    moves.iter().fold(v.to_vec(), |acc, m| m.apply(g, genus, &acc))
}

struct Orbit {
    states: Vec<Vec<Elem>>,
    parent: Vec<(u32, u32)>,
    found: Option<usize>,
}

fn explore(
    g: &FiniteGroup,
    genus: usize,
    start: &[Elem],
    moves: &[Move],
    target: Option<&[Elem]>,
    limit: usize,
) -> Result<Orbit> {
    let mut index: HashMap<Vec<Elem>, u32> = HashMap::new();
    let mut states = vec![start.to_vec()];
    let mut parent = vec![(u32::MAX, u32::MAX)];
    index.insert(start.to_vec(), 0);
    if target == Some(start) {
        return Ok(Orbit { states, parent, found: Some(0) });
    }
    let mut i = 0;
    while i < states.len() {
        for (k, m) in moves.iter().enumerate() {
            let next = m.apply(g, genus, &states[i]);
            if index.contains_key(&next) {
                continue;
            }
            if states.len() >= limit {
                return Err(Error::Budget { what: "orbit size", limit });
            }
            let id = states.len();
            index.insert(next.clone(), id as u32);
            let hit = target == Some(next.as_slice());
            states.push(next);
            parent.push((i as u32, k as u32));
            if hit {
                return Ok(Orbit { states, parent, found: Some(id) });
            }
        }
        i += 1;
    }
    Ok(Orbit { states, parent, found: None })
}

fn path_to(orbit: &Orbit, mut at: usize, moves: &[Move]) -> Vec<Move> {
    let mut out = Vec::new();
    while orbit.parent[at].0 != u32::MAX {
        let (p, k) = orbit.parent[at];
        out.push(moves[k as usize].clone());
        at = p as usize;
    }
    out.reverse();
    out
}

/// One topological class: the least vector of the orbit in the signature's
/// period order, the number of such vectors, and a stable content hash.
#[derive(Clone, Debug)]
pub struct TopologicalClass {
    pub representative: GeneratingVector,
    pub orbit_size: u64,
    pub class_id: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassRecord {
    pub class_id: String,
    pub representative: Vec<String>,
    pub orbit_size: u64,
}

impl TopologicalClass {
    fn new(group: &Arc<FiniteGroup>, signature: &Signature, rep: Vec<Elem>, orbit_size: u64) -> TopologicalClass {
        let strings: Vec<String> = rep.iter().map(|&x| group.format_elem(x)).collect();
        let mut hasher = Sha256::new();
        hasher.update(group.name().as_bytes());
        hasher.update(b"|");
        hasher.update(signature.to_string().as_bytes());
        hasher.update(b"|");
        hasher.update(strings.join(";").as_bytes());
        let class_id = hex::encode(&hasher.finalize()[..8]);
        TopologicalClass {
            representative: GeneratingVector::new_unchecked(group.clone(), signature.clone(), rep),
            orbit_size,
            class_id,
        }
    }

    pub fn record(&self) -> ClassRecord {
        let g = self.representative.group();
        ClassRecord {
            class_id: self.class_id.clone(),
            representative: self.representative.entries().iter().map(|&x| g.format_elem(x)).collect(),
            orbit_size: self.orbit_size,
        }
    }
}

impl PartialEq for TopologicalClass {
    fn eq(&self, other: &Self) -> bool {
        self.representative == other.representative
    }
}

fn automorphism_moves(group: &FiniteGroup, budget: &Budget) -> Result<(Vec<Isomorphism>, Vec<Move>)> {
    let auts = group.automorphisms(budget.max_automorphisms)?;
    let gens = group.automorphism_generators(&auts);
    Ok((auts, gens.into_iter().map(Move::Automorphism).collect()))
}

/// Periods of a raw entry list, read off from element orders.
fn periods_of(g: &FiniteGroup, genus: usize, v: &[Elem]) -> Vec<u32> {
    v[2 * genus..].iter().map(|&x| g.elem_order(x)).collect()
}

/// Classifies the vectors of one signature in one group.
///
/// Abelian groups with orbit genus 0 use a closed form (the class is the
/// automorphism orbit of the multiset of entries), which avoids enumerating
/// every vector. Everything else is classified by exploring orbits.
pub struct Classifier {
    group: Arc<FiniteGroup>,
    signature: Signature,
    kind: Kind,
}

enum Kind {
    Enumerated { class_of: HashMap<Vec<Elem>, usize>, classes: Vec<TopologicalClass> },
    Abelian { auts: Vec<Isomorphism> },
}

impl Classifier {
    pub fn new(group: Arc<FiniteGroup>, signature: Signature, budget: &Budget) -> Result<Classifier> {
        if group.is_abelian() && signature.genus == 0 {
            let auts = group.automorphisms(budget.max_automorphisms)?;
            return Ok(Classifier { group, signature, kind: Kind::Abelian { auts } });
        }
        Classifier::enumerated(group, signature, budget)
    }

    /// Full orbit exploration regardless of the group.
    pub fn enumerated(group: Arc<FiniteGroup>, signature: Signature, budget: &Budget) -> Result<Classifier> {
        let genus = signature.genus as usize;
        let vectors = ske::enumerate_raw(&group, &signature, budget)?;
        let (_, aut_moves) = automorphism_moves(&group, budget)?;
        let mut moves = mapping_class_moves(genus, signature.periods.len());
        moves.extend(aut_moves);
        let mut class_of: HashMap<Vec<Elem>, usize> = HashMap::new();
        let mut raw: Vec<(Vec<Elem>, u64, Vec<Vec<Elem>>)> = Vec::new();
        for v in &vectors {
            if class_of.contains_key(v) {
                continue;
            }
            let orbit = explore(&group, genus, v, &moves, None, budget.max_orbit)?;
            let id = raw.len();
            let mut rep: Option<&Vec<Elem>> = None;
            let mut size = 0u64;
            for s in &orbit.states {
                if periods_of(&group, genus, s) == signature.periods {
                    size += 1;
                    if rep.map_or(true, |r| s < r) {
                        rep = Some(s);
                    }
                }
            }
            let rep = rep.expect("orbit contains its start").clone();
            for s in &orbit.states {
                class_of.insert(s.clone(), id);
            }
            raw.push((rep, size, Vec::new()));
        }
        // order classes by representative
        let mut order: Vec<usize> = (0..raw.len()).collect();
        order.sort_by(|&a, &b| raw[a].0.cmp(&raw[b].0));
        let mut remap = vec![0; raw.len()];
        for (new, &old) in order.iter().enumerate() {
            remap[old] = new;
        }
        for c in class_of.values_mut() {
            *c = remap[*c];
        }
        let classes = order
            .iter()
            .map(|&i| TopologicalClass::new(&group, &signature, raw[i].0.clone(), raw[i].1))
            .collect();
        Ok(Classifier { group, signature, kind: Kind::Enumerated { class_of, classes } })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    /// True when the classification depends on the chosen handle moves.
    pub fn move_set_relative(&self) -> bool {
        self.signature.genus > 0
    }

    /// All classes, sorted by representative.
    pub fn classes(&self, budget: &Budget) -> Result<Vec<TopologicalClass>> {
        match &self.kind {
            Kind::Enumerated { classes, .. } => Ok(classes.clone()),
            Kind::Abelian { .. } => {
                let vectors = ske::enumerate_raw(&self.group, &self.signature, budget)?;
                let mut seen: BTreeMap<Vec<Elem>, TopologicalClass> = BTreeMap::new();
                let mut done: HashSet<Vec<Elem>> = HashSet::new();
                for v in vectors {
                    let key = blockwise_sorted(&self.group, &self.signature, &v);
                    if done.contains(&key) {
                        continue;
                    }
                    let c = self.abelian_class(&v);
                    done.extend(self.abelian_orbit_keys(&v));
                    seen.insert(c.representative.entries().to_vec(), c);
                }
                Ok(seen.into_values().collect())
            }
        }
    }

    /// Every vector of the signature, entries in signature order.
    pub fn vectors(&self, budget: &Budget) -> Result<Vec<Vec<Elem>>> {
        match &self.kind {
            Kind::Enumerated { class_of, .. } => {
                let genus = self.signature.genus as usize;
                let mut out: Vec<Vec<Elem>> = class_of
                    .keys()
                    .filter(|v| periods_of(&self.group, genus, v) == self.signature.periods)
                    .cloned()
                    .collect();
                out.sort_unstable();
                Ok(out)
            }
            Kind::Abelian { .. } => ske::enumerate_raw(&self.group, &self.signature, budget),
        }
    }

    /// The class of a vector given in any period order.
    pub fn class_of(&self, entries: &[Elem]) -> Result<TopologicalClass> {
        let genus = self.signature.genus as usize;
        let mut periods = periods_of(&self.group, genus, entries);
        periods.sort_unstable();
        let valid = entries.len() == self.signature.vector_len()
            && periods == self.signature.sorted().periods
            && ske::relation_product(&self.group, genus, entries) == 0
            && self.group.generates(entries);
        if !valid {
            return Err(Error::InvalidVector(format!("not a vector of signature {}", self.signature)));
        }
        match &self.kind {
            Kind::Enumerated { class_of, classes } => class_of
                .get(entries)
                .map(|&c| classes[c].clone())
                .ok_or_else(|| Error::InvalidVector("vector not found among enumerated orbits".into())),
            Kind::Abelian { .. } => Ok(self.abelian_class(entries)),
        }
    }

    fn abelian_orbit_keys(&self, entries: &[Elem]) -> HashSet<Vec<Elem>> {
        let Kind::Abelian { auts } = &self.kind else { unreachable!() };
        auts.iter()
            .map(|f| {
                let img: Vec<Elem> = entries.iter().map(|&x| f.apply(x)).collect();
                blockwise_sorted(&self.group, &self.signature, &img)
            })
            .collect()
    }

    fn abelian_class(&self, entries: &[Elem]) -> TopologicalClass {
        let keys = self.abelian_orbit_keys(entries);
        let rep = keys.iter().min().unwrap().clone();
        let mut size = 0u64;
        for k in &keys {
            size += arrangements(&self.signature, k);
        }
        TopologicalClass::new(&self.group, &self.signature, rep, size)
    }
}

/// Places the entries of each order, sorted ascending, into the positions of
/// the signature that carry that period.
fn blockwise_sorted(g: &FiniteGroup, s: &Signature, entries: &[Elem]) -> Vec<Elem> {
    let mut by_order: BTreeMap<u32, Vec<Elem>> = BTreeMap::new();
    for &x in entries {
        by_order.entry(g.elem_order(x)).or_default().push(x);
    }
    for v in by_order.values_mut() {
        v.sort_unstable();
        v.reverse();
    }
    s.periods.iter().map(|m| by_order.get_mut(m).and_then(Vec::pop).unwrap_or(Elem::MAX)).collect()
}

/// Number of orderings of a multiset consistent with the period positions.
fn arrangements(s: &Signature, key: &[Elem]) -> u64 {
    let mut blocks: BTreeMap<u32, BTreeMap<Elem, u64>> = BTreeMap::new();
    for (&m, &x) in s.periods.iter().zip(key) {
        *blocks.entry(m).or_default().entry(x).or_default() += 1;
    }
    let fact = |n: u64| (1..=n).product::<u64>();
    blocks
        .values()
        .map(|mult| {
            let total: u64 = mult.values().sum();
            mult.values().fold(fact(total), |acc, &k| acc / fact(k))
        })
        .product()
}

/// All topological classes of `signature` in `group`.
pub fn topological_classes(group: &Arc<FiniteGroup>, signature: &Signature, budget: &Budget) -> Result<Vec<TopologicalClass>> {
    Classifier::enumerated(group.clone(), signature.clone(), budget)?.classes(budget)
}

/// Decides equivalence and returns a witness move sequence taking `a` to `b`.
pub fn are_equivalent(a: &GeneratingVector, b: &GeneratingVector, budget: &Budget) -> Result<Option<Vec<Move>>> {
    if !Arc::ptr_eq(a.group(), b.group()) {
        return Err(Error::Usage("vectors live in different groups".into()));
    }
    if !a.signature().same_type(b.signature()) {
        return Ok(None);
    }
    let g = a.group();
    let genus = a.signature().genus as usize;
    if g.is_abelian() && genus == 0 {
        return Ok(abelian_equivalence(g, a.entries(), b.entries()));
    }
    let (_, aut_moves) = automorphism_moves(g, budget)?;
    let mut moves = mapping_class_moves(genus, a.signature().len());
    moves.extend(aut_moves);
    let orbit = explore(g, genus, a.entries(), &moves, Some(b.entries()), budget.max_orbit)?;
    Ok(orbit.found.map(|at| path_to(&orbit, at, &moves)))
}

/// For abelian groups and orbit genus 0: searches for an automorphism taking
/// the multiset of `a` onto the multiset of `b`, then sorts by swaps.
fn abelian_equivalence(g: &FiniteGroup, a: &[Elem], b: &[Elem]) -> Option<Vec<Move>> {
    let count = |v: &[Elem]| {
        let mut m: BTreeMap<Elem, usize> = BTreeMap::new();
        for &x in v {
            *m.entry(x).or_default() += 1;
        }
        m
    };
    let ma = count(a);
    let mb = count(b);
    let distinct: Vec<Elem> = ma.keys().copied().collect();
    let mut gens = Vec::new();
    let mut span = g.closure(&[]);
    for &x in &distinct {
        if !span.contains(x as usize) {
            gens.push(x);
            span = g.closure(&gens);
        }
    }
    let candidates: Vec<Vec<Elem>> = gens
        .iter()
        .map(|&x| {
            mb.iter()
                .filter(|(&y, &k)| k == ma[&x] && g.elem_order(y) == g.elem_order(x))
                .map(|(&y, _)| y)
                .collect()
        })
        .collect();
    let mut found = None;
    IsoSearch::with_candidates(g, g, gens, candidates).run(|f| {
        let img: Vec<Elem> = a.iter().map(|&x| f.apply(x)).collect();
        if count(&img) == mb {
            found = Some(f.clone());
            return false;
        }
        true
    });
    let f = found?;
    let mut cur: Vec<Elem> = a.iter().map(|&x| f.apply(x)).collect();
    let mut moves = vec![Move::Automorphism(f)];
    // selection sort with adjacent swaps; in an abelian group a braid is a swap
    for i in 0..cur.len() {
        let j = (i..cur.len()).find(|&j| cur[j] == b[i])?;
        for k in (i..j).rev() {
            cur.swap(k, k + 1);
            moves.push(Move::Braid(k));
        }
    }
    Some(moves)
}
