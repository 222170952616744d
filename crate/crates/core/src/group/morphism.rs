//! Isomorphism and automorphism search by backtracking over generator images.

use super::{Elem, FiniteGroup};
use crate::error::{Error, Result};

const UNSET: Elem = Elem::MAX;

/// A bijective homomorphism stored as a full element map.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Isomorphism {
    map: Vec<Elem>,
}

impl Isomorphism {
    pub fn identity(order: usize) -> Isomorphism {
        Isomorphism { map: (0..order as Elem).collect() }
    }

    pub fn from_map(map: Vec<Elem>) -> Isomorphism {
        Isomorphism { map }
    }

    #[inline]
    pub fn apply(&self, a: Elem) -> Elem {
        self.map[a as usize]
    }

    pub fn map(&self) -> &[Elem] {
        &self.map
    }

    pub fn inverse(&self) -> Isomorphism {
        let mut inv = vec![0; self.map.len()];
        for (a, &b) in self.map.iter().enumerate() {
            inv[b as usize] = a as Elem;
        }
        Isomorphism { map: inv }
    }

    /// `self` first, then `other`.
    pub fn then(&self, other: &Isomorphism) -> Isomorphism {
        Isomorphism { map: self.map.iter().map(|&a| other.apply(a)).collect() }
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &a)| i == a as usize)
    }

    /// Images of the source group's stored generators.
    pub fn generator_images(&self, source: &FiniteGroup) -> Vec<Elem> {
        source.gens().iter().map(|&g| self.apply(g)).collect()
    }
}

/// Backtracking search for isomorphisms `a -> b` determined by images of a
/// fixed list of elements generating `a`.
pub struct IsoSearch<'g> {
    a: &'g FiniteGroup,
    b: &'g FiniteGroup,
    gens: Vec<Elem>,
    candidates: Vec<Vec<Elem>>,
}

impl<'g> IsoSearch<'g> {
    /// Generators of `a` are chosen greedily; candidate images must match in
    /// element order and conjugacy class size.
    pub fn new(a: &'g FiniteGroup, b: &'g FiniteGroup) -> IsoSearch<'g> {
        let gens = a.small_generating_set();
        let candidates = gens
            .iter()
            .map(|&g| {
                b.elements()
                    .filter(|&y| b.elem_order(y) == a.elem_order(g) && b.class_size(y) == a.class_size(g))
                    .collect()
            })
            .collect();
        IsoSearch { a, b, gens, candidates }
    }

    /// Search with explicit generators of `a` and explicit candidate images.
    pub fn with_candidates(
        a: &'g FiniteGroup,
        b: &'g FiniteGroup,
        gens: Vec<Elem>,
        candidates: Vec<Vec<Elem>>,
    ) -> IsoSearch<'g> {
        IsoSearch { a, b, gens, candidates }
    }

    fn compatible(&self) -> bool {
        if self.a.order() != self.b.order() {
            return false;
        }
        let hist = |g: &FiniteGroup| {
            let mut h: Vec<(u32, usize)> = g.elements().map(|x| (g.elem_order(x), g.class_size(x))).collect();
            h.sort_unstable();
            h
        };
        hist(self.a) == hist(self.b) && self.a.generates(&self.gens)
    }

    /// Calls `visit` for each isomorphism found; stop early by returning false.
    pub fn run<F: FnMut(&Isomorphism) -> bool>(&self, mut visit: F) {
        if !self.compatible() {
            return;
        }
        let n = self.a.order();
        let mut map = vec![UNSET; n];
        let mut used = vec![false; n];
        map[0] = 0;
        used[0] = true;
        let mut domain: Vec<Elem> = vec![0];
        let mut imgs: Vec<Elem> = Vec::with_capacity(self.gens.len());
        self.descend(0, &mut map, &mut used, &mut domain, &mut imgs, &mut visit);
    }

    fn descend<F: FnMut(&Isomorphism) -> bool>(
        &self,
        depth: usize,
        map: &mut Vec<Elem>,
        used: &mut Vec<bool>,
        domain: &mut Vec<Elem>,
        imgs: &mut Vec<Elem>,
        visit: &mut F,
    ) -> bool {
        if depth == self.gens.len() {
            if domain.len() == self.a.order() {
                return visit(&Isomorphism { map: map.clone() });
            }
            return true;
        }
        let g = self.gens[depth];
        for &y in &self.candidates[depth] {
            // a generator already inside the current domain must agree
            if map[g as usize] != UNSET {
                if map[g as usize] != y {
                    continue;
                }
                imgs.push(y);
                let go = self.descend(depth + 1, map, used, domain, imgs, visit);
                imgs.pop();
                if !go {
                    return false;
                }
                continue;
            }
            if used[y as usize] {
                continue;
            }
            imgs.push(y);
            let mark = domain.len();
            if self.extend(map, used, domain, imgs) {
                let go = self.descend(depth + 1, map, used, domain, imgs, visit);
                if !go {
                    return false;
                }
            }
            for &d in &domain[mark..] {
                used[map[d as usize] as usize] = false;
                map[d as usize] = UNSET;
            }
            domain.truncate(mark);
            imgs.pop();
        }
        true
    }

    /// Extends the partial map to the subgroup generated by the first
    /// `imgs.len()` generators. Returns false on a clash.
    fn extend(&self, map: &mut [Elem], used: &mut [bool], domain: &mut Vec<Elem>, imgs: &[Elem]) -> bool {
        let k = imgs.len();
        let mut i = 0;
        while i < domain.len() {
            let d = domain[i];
            let md = map[d as usize];
            for j in 0..k {
                let e = self.a.mul(d, self.gens[j]);
                let im = self.b.mul(md, imgs[j]);
                let cur = map[e as usize];
                if cur == UNSET {
                    if used[im as usize] {
                        return false;
                    }
                    map[e as usize] = im;
                    used[im as usize] = true;
                    domain.push(e);
                } else if cur != im {
                    return false;
                }
            }
            i += 1;
        }
        true
    }
}

impl FiniteGroup {
    pub fn find_isomorphism(&self, other: &FiniteGroup) -> Option<Isomorphism> {
        let mut found = None;
        IsoSearch::new(self, other).run(|iso| {
            found = Some(iso.clone());
            false
        });
        found
    }

    pub fn is_isomorphic(&self, other: &FiniteGroup) -> bool {
        self.fingerprint() == other.fingerprint() && self.find_isomorphism(other).is_some()
    }

    pub fn isomorphisms(&self, other: &FiniteGroup, limit: usize) -> Result<Vec<Isomorphism>> {
        let mut out = Vec::new();
        let mut over = false;
        IsoSearch::new(self, other).run(|iso| {
            if out.len() >= limit {
                over = true;
                return false;
            }
            out.push(iso.clone());
            true
        });
        if over {
            return Err(Error::Budget { what: "automorphism count", limit });
        }
        Ok(out)
    }

    /// All automorphisms, identity first, the rest in discovery order.
    pub fn automorphisms(&self, limit: usize) -> Result<Vec<Isomorphism>> {
        let mut all = self.isomorphisms(self, limit)?;
        if let Some(p) = all.iter().position(Isomorphism::is_identity) {
            let id = all.remove(p);
            all.insert(0, id);
        }
        Ok(all)
    }

    /// A generating set of the automorphism group, picked from `auts`.
    pub fn automorphism_generators(&self, auts: &[Isomorphism]) -> Vec<Isomorphism> {
        use std::collections::HashSet;
        let mut gens: Vec<Isomorphism> = Vec::new();
        let mut closure: HashSet<Vec<Elem>> = HashSet::new();
        closure.insert(Isomorphism::identity(self.order()).map);
        for a in auts {
            if closure.len() == auts.len() {
                break;
            }
            if closure.contains(&a.map) {
                continue;
            }
            gens.push(a.clone());
            let mut list: Vec<Isomorphism> = closure.iter().map(|m| Isomorphism { map: m.clone() }).collect();
            let mut i = 0;
            while i < list.len() {
                for g in &gens {
                    let c = list[i].then(g);
                    if closure.insert(c.map.clone()) {
                        list.push(c);
                    }
                }
                i += 1;
            }
        }
        gens
    }
}
