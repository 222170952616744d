//! Generating vectors (surface kernel epimorphisms) and their enumeration.

use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::group::{Elem, FiniteGroup};
use crate::signature::Signature;

/// Images of the canonical generators `a1, b1, ..., ah, bh, x1, ..., xl`.
#[derive(Clone)]
pub struct GeneratingVector {
    group: Arc<FiniteGroup>,
    signature: Signature,
    entries: Vec<Elem>,
}

/// Why a candidate vector fails to define an action.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Length { expected: usize, found: usize },
    Order { position: usize, expected: u32, found: u32 },
    Relation,
    Generation { generated: usize, order: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Length { expected, found } => write!(f, "expected {expected} entries, found {found}"),
            Violation::Order { position, expected, found } => {
                write!(f, "elliptic entry {} has order {found}, expected {expected}", position + 1)
            }
            Violation::Relation => write!(f, "the long relation does not multiply to the identity"),
            Violation::Generation { generated, order } => {
                write!(f, "entries generate a subgroup of order {generated}, not {order}")
            }
        }
    }
}

/// Checks the three conditions: exact elliptic orders, the long relation
/// `[a1,b1]...[ah,bh] x1...xl = 1`, and generation.
pub fn check(group: &FiniteGroup, signature: &Signature, entries: &[Elem]) -> std::result::Result<(), Violation> {
    let h = 2 * signature.genus as usize;
    if entries.len() != signature.vector_len() {
        return Err(Violation::Length { expected: signature.vector_len(), found: entries.len() });
    }
    for (j, (&x, &m)) in entries[h..].iter().zip(&signature.periods).enumerate() {
        let o = group.elem_order(x);
        if o != m {
            return Err(Violation::Order { position: j, expected: m, found: o });
        }
    }
    if relation_product(group, signature.genus as usize, entries) != 0 {
        return Err(Violation::Relation);
    }
    let generated = group.closure(entries).count_ones(..);
    if generated != group.order() {
        return Err(Violation::Generation { generated, order: group.order() });
    }
    Ok(())
}

pub fn is_valid(group: &FiniteGroup, signature: &Signature, entries: &[Elem]) -> bool {
    check(group, signature, entries).is_ok()
}

pub(crate) fn relation_product(group: &FiniteGroup, genus: usize, entries: &[Elem]) -> Elem {
    let mut acc = 0;
    for i in 0..genus {
        acc = group.mul(acc, group.commutator(entries[2 * i], entries[2 * i + 1]));
    }
    for &x in &entries[2 * genus..] {
        acc = group.mul(acc, x);
    }
    acc
}

impl GeneratingVector {
    pub fn new(group: Arc<FiniteGroup>, signature: Signature, entries: Vec<Elem>) -> Result<GeneratingVector> {
        check(&group, &signature, &entries).map_err(|v| Error::InvalidVector(v.to_string()))?;
        Ok(GeneratingVector { group, signature, entries })
    }

    pub(crate) fn new_unchecked(group: Arc<FiniteGroup>, signature: Signature, entries: Vec<Elem>) -> GeneratingVector {
        debug_assert!(is_valid(&group, &signature, &entries));
        GeneratingVector { group, signature, entries }
    }

    /// Builds a vector from element strings (cycle notation or generator
    /// words). The signature is read off from the handle count and the
    /// element orders.
    pub fn parse(group: Arc<FiniteGroup>, handles: &[&str], elliptic: &[&str]) -> Result<GeneratingVector> {
        if handles.len() % 2 != 0 {
            return Err(Error::InvalidVector("handle images come in pairs".into()));
        }
        let mut entries = Vec::new();
        for t in handles.iter().chain(elliptic) {
            entries.push(group.parse_element(t)?);
        }
        let h = handles.len();
        let periods = entries[h..].iter().map(|&x| group.elem_order(x)).collect();
        let signature = Signature::new((h / 2) as u32, periods)?;
        GeneratingVector::new(group, signature, entries)
    }

    /// Like [`GeneratingVector::parse`] with named generators.
    pub fn from_words(group: Arc<FiniteGroup>, names: &[&str], handles: &[&str], elliptic: &[&str]) -> Result<GeneratingVector> {
        let mut entries = Vec::new();
        for t in handles.iter().chain(elliptic) {
            entries.push(group.parse_word(names, t)?);
        }
        let h = handles.len();
        let periods = entries[h..].iter().map(|&x| group.elem_order(x)).collect();
        let signature = Signature::new((h / 2) as u32, periods)?;
        GeneratingVector::new(group, signature, entries)
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn entries(&self) -> &[Elem] {
        &self.entries
    }

    pub fn handles(&self) -> &[Elem] {
        &self.entries[..2 * self.signature.genus as usize]
    }

    pub fn elliptic(&self) -> &[Elem] {
        &self.entries[2 * self.signature.genus as usize..]
    }

    /// Genus of the surface the vector describes.
    pub fn surface_genus(&self) -> Result<u32> {
        self.signature.riemann_hurwitz_genus(self.group.order())
    }

    pub fn record(&self) -> VectorRecord {
        VectorRecord {
            group: self.group.name().to_string(),
            signature: self.signature.to_string(),
            handles: self.handles().iter().map(|&x| self.group.format_elem(x)).collect(),
            elliptic: self.elliptic().iter().map(|&x| self.group.format_elem(x)).collect(),
        }
    }
}

impl PartialEq for GeneratingVector {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.group, &other.group) && self.signature == other.signature && self.entries == other.entries
    }
}

impl fmt::Debug for GeneratingVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for GeneratingVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|&x| self.group.format_elem(x)).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// Serialized form of a vector: cycle strings plus group and signature.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VectorRecord {
    pub group: String,
    pub signature: String,
    pub handles: Vec<String>,
    pub elliptic: Vec<String>,
}

/// All generating vectors of `signature` in `group`, in lexicographic order
/// of element indices. The last elliptic entry is solved from the relation,
/// and partial products that cannot be completed are pruned early.
pub fn enumerate(group: &Arc<FiniteGroup>, signature: &Signature, budget: &Budget) -> Result<Vec<GeneratingVector>> {
    let raw = enumerate_raw(group, signature, budget)?;
    Ok(raw
        .into_iter()
        .map(|e| GeneratingVector::new_unchecked(group.clone(), signature.clone(), e))
        .collect())
}

pub(crate) fn enumerate_raw(group: &FiniteGroup, signature: &Signature, budget: &Budget) -> Result<Vec<Vec<Elem>>> {
    let n = group.order();
    let h = signature.genus as usize;
    let l = signature.periods.len();
    if h == 0 && l < 2 {
        return Ok(Vec::new());
    }
    let by_order: Vec<Vec<Elem>> = signature
        .periods
        .iter()
        .map(|&m| group.elements().filter(|&x| group.elem_order(x) == m).collect())
        .collect();
    if by_order.iter().any(Vec::is_empty) {
        return Ok(Vec::new());
    }
    let set_product = |a: &[Elem], b: &FixedBitSet| -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(n);
        for &x in a {
            for y in b.ones() {
                out.insert(group.mul(x, y as Elem) as usize);
            }
        }
        out
    };
    // suffix[j] = products x_j ... x_l over admissible orders
    let mut suffix: Vec<FixedBitSet> = vec![FixedBitSet::with_capacity(n); l + 1];
    suffix[l].insert(0);
    for j in (0..l).rev() {
        suffix[j] = set_product(&by_order[j], &suffix[j + 1]);
    }
    // handle_suffix[i] = products of commutators i..h times suffix[0]
    let mut commutators: Vec<Elem> = Vec::new();
    {
        let mut seen = vec![false; n];
        for a in group.elements() {
            for b in group.elements() {
                let c = group.commutator(a, b) as usize;
                if !seen[c] {
                    seen[c] = true;
                    commutators.push(c as Elem);
                }
            }
        }
    }
    let mut handle_suffix: Vec<FixedBitSet> = vec![FixedBitSet::with_capacity(n); h + 1];
    handle_suffix[h] = suffix[0].clone();
    for i in (0..h).rev() {
        handle_suffix[i] = set_product(&commutators, &handle_suffix[i + 1]);
    }
    if !handle_suffix[0].contains(0) {
        return Ok(Vec::new());
    }
    let ctx = Ctx {
        group,
        h,
        l,
        by_order: &by_order,
        suffix: &suffix,
        handle_suffix: &handle_suffix,
        count: AtomicUsize::new(0),
        limit: budget.max_vectors,
    };
    let first: Vec<Elem> = if h > 0 {
        group.elements().collect()
    } else {
        by_order[0].iter().copied().filter(|&x| suffix[1].contains(group.inv(x) as usize)).collect()
    };
    let results: Vec<Result<Vec<Vec<Elem>>>> = first
        .par_iter()
        .map(|&x| {
            let mut out = Vec::new();
            let mut cur = Vec::with_capacity(2 * h + l);
            cur.push(x);
            let prod = if h > 0 { 0 } else { x };
            ctx.descend(&mut cur, prod, &mut out)?;
            Ok(out)
        })
        .collect();
    let mut all = Vec::new();
    for r in results {
        all.extend(r?);
    }
    Ok(all)
}

struct Ctx<'a> {
    group: &'a FiniteGroup,
    h: usize,
    l: usize,
    by_order: &'a [Vec<Elem>],
    suffix: &'a [FixedBitSet],
    handle_suffix: &'a [FixedBitSet],
    count: AtomicUsize,
    limit: usize,
}

impl Ctx<'_> {
    /// `cur` holds the entries chosen so far; `prod` is the relation product
    /// of all completed handle pairs and elliptic entries.
    fn descend(&self, cur: &mut Vec<Elem>, prod: Elem, out: &mut Vec<Vec<Elem>>) -> Result<()> {
        let g = self.group;
        let pos = cur.len();
        let hl = 2 * self.h;
        if pos < hl {
            if pos % 2 == 1 {
                // closing a handle pair
                let a = cur[pos - 1];
                for b in g.elements() {
                    let p = g.mul(prod, g.commutator(a, b));
                    let pair = pos / 2 + 1;
                    if !self.handle_suffix[pair].contains(g.inv(p) as usize) {
                        continue;
                    }
                    cur.push(b);
                    if self.l == 0 && pair == self.h {
                        if p == 0 {
                            self.emit(cur, out)?;
                        }
                    } else {
                        self.descend(cur, p, out)?;
                    }
                    cur.pop();
                }
            } else {
                for a in g.elements() {
                    cur.push(a);
                    self.descend(cur, prod, out)?;
                    cur.pop();
                }
            }
            return Ok(());
        }
        let j = pos - hl;
        if j == self.l - 1 {
            let last = g.inv(prod);
            if g.elem_order(last) == self.group_period(j) {
                cur.push(last);
                self.emit(cur, out)?;
                cur.pop();
            }
            return Ok(());
        }
        for &x in &self.by_order[j] {
            let p = g.mul(prod, x);
            if !self.suffix[j + 1].contains(g.inv(p) as usize) {
                continue;
            }
            cur.push(x);
            self.descend(cur, p, out)?;
            cur.pop();
        }
        Ok(())
    }

    fn group_period(&self, j: usize) -> u32 {
        self.group.elem_order(self.by_order[j][0])
    }

    fn emit(&self, cur: &[Elem], out: &mut Vec<Vec<Elem>>) -> Result<()> {
        if !self.group.generates(cur) {
            return Ok(());
        }
        let c = self.count.fetch_add(1, Ordering::Relaxed) + 1;
        if c > self.limit {
            return Err(Error::Budget { what: "generating vectors", limit: self.limit });
        }
        out.push(cur.to_vec());
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(group: &FiniteGroup, s: &Signature) -> Vec<Vec<Elem>> {
        let len = s.vector_len();
        let n = group.order();
        let mut out = Vec::new();
        let mut idx = vec![0usize; len];
        loop {
            let entries: Vec<Elem> = idx.iter().map(|&i| i as Elem).collect();
            if is_valid(group, s, &entries) {
                out.push(entries);
            }
            let mut k = len;
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < n {
                    break;
                }
                idx[k] = 0;
            }
        }
    }

    #[test]
    fn enumeration_matches_brute_force() {
        let cases = [
            ("D4", "0;2,2,2,4"),
            ("C2xC2", "0;2,2,2,2,2"),
            ("C2xC2", "1;2,2"),
            ("C2", "1;2,2,2,2"),
            ("C3", "0;3,3,3,3,3"),
            ("D3", "0;2,2,2,2,3"),
            ("C2xC4", "0;2,2,4,4"),
            ("C2", "2;"),
            ("C6", "0;2,3,6"),
        ];
        for (spec, sig) in cases {
            let g = FiniteGroup::from_spec_arc(spec, 512).unwrap();
            let s: Signature = sig.parse().unwrap();
            let fast: Vec<Vec<Elem>> = enumerate(&g, &s, &Budget::default())
                .unwrap()
                .iter()
                .map(|v| v.entries().to_vec())
                .collect();
            assert_eq!(fast, brute(&g, &s), "{spec} {sig}");
        }
    }

    #[test]
    fn known_vector_is_valid() {
        // C2 x D4 = <t> x <r, s>, vector (t, tsr, s, r)
        let g = FiniteGroup::from_spec_arc("C2xD4", 512).unwrap();
        let names = ["t", "r", "s"];
        let v = GeneratingVector::from_words(g.clone(), &names, &[], &["t", "t*s*r", "s", "r"]).unwrap();
        assert_eq!(v.signature().to_string(), "0;2,2,2,4");
        assert_eq!(v.surface_genus().unwrap(), 3);
        let wrong: Vec<Elem> = ["t", "t*s", "s", "r"].iter().map(|w| g.parse_word(&names, w).unwrap()).collect();
        let s: Signature = "0;2,2,2,4".parse().unwrap();
        assert!(matches!(check(&g, &s, &wrong), Err(Violation::Order { .. }) | Err(Violation::Relation)));
    }

    #[test]
    fn violations_are_specific() {
        let g = FiniteGroup::from_spec("C2xC2", 512).unwrap();
        let s: Signature = "0;2,2,2".parse().unwrap();
        let a = g.gens()[0];
        let b = g.gens()[1];
        let ab = g.mul(a, b);
        assert_eq!(check(&g, &s, &[a, b, ab]), Ok(()));
        assert_eq!(check(&g, &s, &[a, a]), Err(Violation::Length { expected: 3, found: 2 }));
        assert_eq!(check(&g, &s, &[a, b, a]), Err(Violation::Relation));
        let s4: Signature = "0;2,2,2,2".parse().unwrap();
        assert_eq!(check(&g, &s4, &[a, a, a, a]), Err(Violation::Generation { generated: 2, order: 4 }));
        assert!(matches!(check(&g, &s, &[0, b, b]), Err(Violation::Order { position: 0, .. })));
    }

    #[test]
    fn budget_is_enforced() {
        let g = FiniteGroup::from_spec_arc("C2xC2xC2", 512).unwrap();
        let s: Signature = "0;2,2,2,2,2".parse().unwrap();
        let b = Budget { max_vectors: 10, ..Budget::default() };
        assert!(matches!(enumerate(&g, &s, &b), Err(Error::Budget { .. })));
    }
}
