use std::collections::{HashMap, HashSet};

use fixedbitset::FixedBitSet;

use super::{small_generating_set, Elem, FiniteGroup};
use crate::error::{Error, Result};

/// A subgroup, living in the element universe of its parent group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    members: FixedBitSet,
    gens: Vec<Elem>,
    order: usize,
}

#[derive(Clone, Debug)]
pub struct SubgroupClass {
    pub representative: Subgroup,
    /// Number of conjugates of the representative.
    pub size: usize,
}

impl Subgroup {
    pub fn generated_by(g: &FiniteGroup, xs: &[Elem]) -> Subgroup {
        let members = g.closure(xs);
        let gens = small_generating_set(g, &members);
        let order = members.count_ones(..);
        Subgroup { members, gens, order }
    }

    /// Checks that `elements` is closed under products and builds the subgroup.
    pub fn from_elements(g: &FiniteGroup, elements: &[Elem]) -> Result<Subgroup> {
        let mut members = FixedBitSet::with_capacity(g.order());
        for &e in elements {
            if e as usize >= g.order() {
                return Err(Error::NotSubgroup(format!("element index {e} out of range")));
            }
            members.insert(e as usize);
        }
        if !members.contains(0) {
            return Err(Error::NotSubgroup("missing identity".into()));
        }
        for a in members.ones() {
            for b in members.ones() {
                if !members.contains(g.mul(a as Elem, b as Elem) as usize) {
                    return Err(Error::NotSubgroup("not closed under multiplication".into()));
                }
            }
        }
        let gens = small_generating_set(g, &members);
        let order = members.count_ones(..);
        Ok(Subgroup { members, gens, order })
    }

    pub fn whole(g: &FiniteGroup) -> Subgroup {
        Subgroup::generated_by(g, g.gens())
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn gens(&self) -> &[Elem] {
        &self.gens
    }

    pub fn contains(&self, x: Elem) -> bool {
        self.members.contains(x as usize)
    }

    pub fn members(&self) -> &FixedBitSet {
        &self.members
    }

    pub fn elements(&self) -> Vec<Elem> {
        self.members.ones().map(|i| i as Elem).collect()
    }

    /// `g^-1 H g`
    pub fn conjugate(&self, grp: &FiniteGroup, by: Elem) -> Subgroup {
        let mut members = FixedBitSet::with_capacity(grp.order());
        for x in self.members.ones() {
            members.insert(grp.conj(x as Elem, by) as usize);
        }
        let gens = self.gens.iter().map(|&x| grp.conj(x, by)).collect();
        Subgroup { members, gens, order: self.order }
    }

    pub fn is_normal(&self, grp: &FiniteGroup) -> bool {
        grp.gens().iter().all(|&g| self.gens.iter().all(|&x| self.contains(grp.conj(x, g))))
    }
}

/// Exhaustive conjugacy test over all elements of the ambient group.
pub fn are_conjugate(g: &FiniteGroup, a: &Subgroup, b: &Subgroup) -> bool {
    if a.order != b.order {
        return false;
    }
    g.elements().any(|x| a.gens.iter().all(|&h| b.contains(g.conj(h, x))))
}

/// Every subgroup of `g`, found by joining cyclic subgroups until nothing new appears.
pub fn all_subgroups(g: &FiniteGroup) -> Vec<Subgroup> {
    let mut seen: HashSet<FixedBitSet> = HashSet::new();
    let mut cyclic_gens = Vec::new();
    let mut list: Vec<(FixedBitSet, Vec<Elem>)> = Vec::new();
    for a in g.elements() {
        let c = g.closure(&[a]);
        if seen.insert(c.clone()) {
            if a != 0 {
                cyclic_gens.push(a);
            }
            list.push((c, if a == 0 { vec![] } else { vec![a] }));
        }
    }
    let mut i = 0;
    while i < list.len() {
        let (members, gens) = list[i].clone();
        for &c in &cyclic_gens {
            if members.contains(c as usize) {
                continue;
            }
            let mut ng = gens.clone();
            ng.push(c);
            let j = g.closure(&ng);
            if seen.insert(j.clone()) {
                list.push((j, ng));
            }
        }
        i += 1;
    }
    let mut out: Vec<Subgroup> = list
        .into_iter()
        .map(|(members, _)| {
            let gens = small_generating_set(g, &members);
            let order = members.count_ones(..);
            Subgroup { members, gens, order }
        })
        .collect();
    out.sort_by(|a, b| a.order.cmp(&b.order).then_with(|| a.elements().cmp(&b.elements())));
    out
}

impl FiniteGroup {
    /// Conjugacy classes of subgroups, ordered by subgroup order and then by
    /// the sorted element list of the representative (the least conjugate).
    pub fn subgroup_classes(&self) -> Vec<SubgroupClass> {
        let subs = all_subgroups(self);
        let index: HashMap<FixedBitSet, usize> =
            subs.iter().enumerate().map(|(i, s)| (s.members.clone(), i)).collect();
        let mut class_of = vec![usize::MAX; subs.len()];
        let mut out = Vec::new();
        for i in 0..subs.len() {
            if class_of[i] != usize::MAX {
                continue;
            }
            let id = out.len();
            class_of[i] = id;
            let mut orbit = vec![i];
            let mut k = 0;
            while k < orbit.len() {
                let s = &subs[orbit[k]];
                for &g in self.gens() {
                    let c = s.conjugate(self, g);
                    let j = index[&c.members];
                    if class_of[j] == usize::MAX {
                        class_of[j] = id;
                        orbit.push(j);
                    }
                }
                k += 1;
            }
            // subs is sorted, so the smallest index is the least conjugate
            let rep = orbit.iter().copied().min().unwrap();
            out.push(SubgroupClass { representative: subs[rep].clone(), size: orbit.len() });
        }
        out
    }

    pub fn are_conjugate(&self, a: &Subgroup, b: &Subgroup) -> bool {
        are_conjugate(self, a, b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count_subgroups_brute(g: &FiniteGroup) -> usize {
        // every subgroup of these small groups needs at most three generators
        let mut seen = HashSet::new();
        for a in g.elements() {
            for b in g.elements() {
                for c in g.elements() {
                    seen.insert(g.closure(&[a, b, c]));
                }
            }
        }
        seen.len()
    }

    #[test]
    fn subgroup_counts_match_small_closures() {
        for spec in ["D4", "C2xC4", "D6", "Perm[(1,2,3,4);(1,2)]", "SD(C4;[3,1])"] {
            let g = FiniteGroup::from_spec(spec, 512).unwrap();
            assert_eq!(all_subgroups(&g).len(), count_subgroups_brute(&g), "{spec}");
        }
    }

    #[test]
    fn known_subgroup_class_counts() {
        // S4 has 11 conjugacy classes of subgroups, D4 has 8
        let s4 = FiniteGroup::from_spec("Perm[(1,2,3,4);(1,2)]", 512).unwrap();
        assert_eq!(s4.subgroup_classes().len(), 11);
        assert_eq!(all_subgroups(&s4).len(), 30);
        let d4 = FiniteGroup::from_spec("D4", 512).unwrap();
        assert_eq!(d4.subgroup_classes().len(), 8);
        assert_eq!(all_subgroups(&d4).len(), 10);
    }

    #[test]
    fn class_sizes_add_up() {
        let g = FiniteGroup::from_spec("Perm[(1,2,3,4,5,6,7);(3,5)(6,7)]", 512).unwrap();
        let classes = g.subgroup_classes();
        let total: usize = classes.iter().map(|c| c.size).sum();
        assert_eq!(total, all_subgroups(&g).len());
        assert_eq!(total, 179);
        assert_eq!(classes.len(), 15);
    }

    #[test]
    fn from_elements_checks_closure() {
        let g = FiniteGroup::from_spec("D4", 512).unwrap();
        let r = g.gens()[0];
        assert!(Subgroup::from_elements(&g, &[0, r]).is_err());
        let c4 = Subgroup::generated_by(&g, &[r]);
        let again = Subgroup::from_elements(&g, &c4.elements()).unwrap();
        assert_eq!(again.order(), 4);
        assert!(again.is_normal(&g));
    }
}
