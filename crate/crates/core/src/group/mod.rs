//! Finite permutation groups with a full multiplication table.

mod fingerprint;
mod morphism;
mod spec;
mod subgroups;

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::perm::Perm;

pub use fingerprint::GroupFingerprint;
pub use morphism::{Isomorphism, IsoSearch};
pub use spec::{parse_spec, GroupSpec};
pub use subgroups::{Subgroup, SubgroupClass};

/// Index of an element inside its group. Index 0 is always the identity.
pub type Elem = u16;

#[derive(Clone)]
pub struct FiniteGroup {
    name: String,
    degree: usize,
    elements: Vec<Perm>,
    lookup: HashMap<Perm, Elem>,
    table: Vec<Elem>,
    inverses: Vec<Elem>,
    orders: Vec<u32>,
    gens: Vec<Elem>,
    classes: Vec<Vec<Elem>>,
    class_of: Vec<u32>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup({}, order {})", self.name, self.order())
    }
}

impl FiniteGroup {
    /// Builds the group generated by `gens`. Elements are numbered in
    /// breadth-first order from the identity, so numbering is reproducible.
    pub fn from_generators(name: &str, gens: Vec<Perm>, max_order: usize) -> Result<FiniteGroup> {
        let degree = gens.iter().map(Perm::degree).max().unwrap_or(1).max(1);
        let gens: Vec<Perm> = gens.into_iter().map(|g| g.extend(degree)).collect();
        let mut elements = vec![Perm::identity(degree)];
        let mut lookup = HashMap::new();
        lookup.insert(elements[0].clone(), 0 as Elem);
        // right multiplication by each generator, and the BFS parent of each element
        let mut right: Vec<Vec<Elem>> = Vec::new();
        let mut parent: Vec<(usize, usize)> = vec![(0, usize::MAX)];
        let mut i = 0;
        while i < elements.len() {
            let mut row = Vec::with_capacity(gens.len());
            for (k, g) in gens.iter().enumerate() {
                let p = elements[i].then(g);
                let idx = match lookup.get(&p) {
                    Some(&j) => j,
                    None => {
                        if elements.len() >= max_order || elements.len() >= Elem::MAX as usize {
                            return Err(Error::OrderLimit { order: elements.len() + 1, limit: max_order });
                        }
                        let j = elements.len() as Elem;
                        lookup.insert(p.clone(), j);
                        elements.push(p);
                        parent.push((i, k));
                        j
                    }
                };
                row.push(idx);
            }
            right.push(row);
            i += 1;
        }
        let n = elements.len();
        let mut table = vec![0 as Elem; n * n];
        for a in 0..n {
            table[a * n] = a as Elem;
            for b in 1..n {
                let (p, k) = parent[b];
                let ap = table[a * n + p] as usize;
                table[a * n + b] = right[ap][k];
            }
        }
        let mut inverses = vec![0 as Elem; n];
        for a in 0..n {
            for b in 0..n {
                if table[a * n + b] == 0 {
                    inverses[a] = b as Elem;
                    break;
                }
            }
        }
        let mut orders = vec![1u32; n];
        for a in 1..n {
            let mut x = a;
            let mut k = 1;
            while x != 0 {
                x = table[x * n + a] as usize;
                k += 1;
            }
            orders[a] = k;
        }
        let gen_ids: Vec<Elem> = gens.iter().map(|g| lookup[g]).collect();
        let mut group = FiniteGroup {
            name: name.to_string(),
            degree,
            elements,
            lookup,
            table,
            inverses,
            orders,
            gens: gen_ids,
            classes: Vec::new(),
            class_of: Vec::new(),
        };
        group.compute_classes();
        Ok(group)
    }

    /// Builds the group from a spec string such as `C2xD4`.
    pub fn from_spec(spec: &str, max_order: usize) -> Result<FiniteGroup> {
        let parsed = parse_spec(spec)?;
        parsed.build(max_order)
    }

    pub fn from_spec_arc(spec: &str, max_order: usize) -> Result<Arc<FiniteGroup>> {
        Ok(Arc::new(FiniteGroup::from_spec(spec, max_order)?))
    }

    fn compute_classes(&mut self) {
        let n = self.order();
        let mut class_of = vec![u32::MAX; n];
        let mut classes = Vec::new();
        for a in 0..n {
            if class_of[a] != u32::MAX {
                continue;
            }
            let id = classes.len() as u32;
            let mut members = vec![a as Elem];
            class_of[a] = id;
            let mut i = 0;
            while i < members.len() {
                let x = members[i];
                for &g in &self.gens {
                    let y = self.conj(x, g) as usize;
                    if class_of[y] == u32::MAX {
                        class_of[y] = id;
                        members.push(y as Elem);
                    }
                }
                i += 1;
            }
            members.sort_unstable();
            classes.push(members);
        }
        self.classes = classes;
        self.class_of = class_of;
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: &str) {
        self.name = name.to_string();
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn identity(&self) -> Elem {
        0
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.order() as Elem
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.table[a as usize * self.elements.len() + b as usize]
    }

    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        self.inverses[a as usize]
    }

    /// `g^-1 x g`
    #[inline]
    pub fn conj(&self, x: Elem, g: Elem) -> Elem {
        self.mul(self.mul(self.inv(g), x), g)
    }

    /// `a b a^-1 b^-1`
    pub fn commutator(&self, a: Elem, b: Elem) -> Elem {
        let ab = self.mul(a, b);
        self.mul(self.mul(ab, self.inv(a)), self.inv(b))
    }

    pub fn pow(&self, a: Elem, k: i64) -> Elem {
        let m = self.elem_order(a) as i64;
        let e = k.rem_euclid(m);
        let mut r = 0;
        for _ in 0..e {
            r = self.mul(r, a);
        }
        r
    }

    pub fn product(&self, xs: &[Elem]) -> Elem {
        xs.iter().fold(0, |acc, &x| self.mul(acc, x))
    }

    #[inline]
    pub fn elem_order(&self, a: Elem) -> u32 {
        self.orders[a as usize]
    }

    pub fn perm(&self, a: Elem) -> &Perm {
        &self.elements[a as usize]
    }

    pub fn elem_of_perm(&self, p: &Perm) -> Option<Elem> {
        if p.degree() > self.degree {
            return None;
        }
        self.lookup.get(&p.extend(self.degree)).copied()
    }

    pub fn gens(&self) -> &[Elem] {
        &self.gens
    }

    pub fn is_abelian(&self) -> bool {
        self.gens
            .iter()
            .all(|&a| self.gens.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn commutes(&self, a: Elem, b: Elem) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    pub fn conjugacy_classes(&self) -> &[Vec<Elem>] {
        &self.classes
    }

    pub fn class_index(&self, a: Elem) -> usize {
        self.class_of[a as usize] as usize
    }

    pub fn class_size(&self, a: Elem) -> usize {
        self.classes[self.class_index(a)].len()
    }

    pub fn format_elem(&self, a: Elem) -> String {
        self.perm(a).to_string()
    }

    /// Subgroup generated by `xs`, as a membership bitset.
    pub fn closure(&self, xs: &[Elem]) -> FixedBitSet {
        let mut members = FixedBitSet::with_capacity(self.order());
        members.insert(0);
        let mut list = vec![0 as Elem];
        let gens: Vec<Elem> = xs.iter().copied().filter(|&x| x != 0).collect();
        let mut i = 0;
        while i < list.len() {
            let a = list[i];
            for &g in &gens {
                let b = self.mul(a, g);
                if !members.contains(b as usize) {
                    members.insert(b as usize);
                    list.push(b);
                }
            }
            i += 1;
        }
        members
    }

    pub fn generates(&self, xs: &[Elem]) -> bool {
        self.closure(xs).count_ones(..) == self.order()
    }

    /// A small generating set, chosen greedily from elements of large order.
    pub fn small_generating_set(&self) -> Vec<Elem> {
        let mut all = FixedBitSet::with_capacity(self.order());
        all.insert_range(..);
        small_generating_set(self, &all)
    }

    /// Parses an element given either in cycle notation (`(1,2)(3,4)`) or as a
    /// word in the generators (`g1*g2^-1`, `g3^2`, `e`).
    pub fn parse_element(&self, text: &str) -> Result<Elem> {
        let names: Vec<String> = (1..=self.gens.len()).map(|i| format!("g{i}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        self.parse_word(&refs, text)
    }

    /// Like [`FiniteGroup::parse_element`] but with custom generator names.
    pub fn parse_word(&self, names: &[&str], text: &str) -> Result<Elem> {
        let t = text.trim();
        let bad = || Error::Element(text.to_string());
        if t.starts_with('(') {
            let deg = Perm::max_point(t)?;
            if deg > self.degree {
                return Err(bad());
            }
            let p = Perm::parse_cycles(t, self.degree)?;
            return self.elem_of_perm(&p).ok_or_else(bad);
        }
        if t.is_empty() || t == "e" || t == "1" {
            return Ok(0);
        }
        let mut acc = 0;
        for factor in t.split('*') {
            let factor = factor.trim();
            let (base, exp) = match factor.find('^') {
                Some(k) => (&factor[..k], factor[k + 1..].trim().parse::<i64>().map_err(|_| bad())?),
                None => (factor, 1),
            };
            let base = base.trim();
            let g = if base == "e" {
                0
            } else {
                let k = names.iter().position(|n| *n == base).ok_or_else(bad)?;
                *self.gens.get(k).ok_or_else(bad)?
            };
            acc = self.mul(acc, self.pow(g, exp));
        }
        Ok(acc)
    }

    /// The subgroup `xs` generates, materialized as its own group over the
    /// same permutation domain, together with the embedding into `self`.
    pub fn subgroup_group(&self, members: &FixedBitSet, name: &str) -> Result<(FiniteGroup, Vec<Elem>)> {
        let gens = small_generating_set(self, members);
        let perms: Vec<Perm> = gens.iter().map(|&g| self.perm(g).clone()).collect();
        let sub = FiniteGroup::from_generators(name, perms, self.order().max(1))?;
        let embed: Vec<Elem> = (0..sub.order() as Elem)
            .map(|a| self.elem_of_perm(sub.perm(a)).expect("subgroup element in parent"))
            .collect();
        Ok((sub, embed))
    }
}

pub(crate) fn small_generating_set(g: &FiniteGroup, members: &FixedBitSet) -> Vec<Elem> {
    let mut candidates: Vec<Elem> = members.ones().map(|i| i as Elem).filter(|&i| i != 0).collect();
    candidates.sort_by_key(|&a| (std::cmp::Reverse(g.elem_order(a)), a));
    let target = members.count_ones(..);
    let mut gens = Vec::new();
    let mut current = FixedBitSet::with_capacity(g.order());
    current.insert(0);
    for a in candidates {
        if current.count_ones(..) == target {
            break;
        }
        if current.contains(a as usize) {
            continue;
        }
        gens.push(a);
        current = g.closure(&gens);
    }
    gens
}
