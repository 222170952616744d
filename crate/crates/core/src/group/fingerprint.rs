use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Elem, FiniteGroup};

/// Cheap isomorphism invariants used to prefilter isomorphism searches and to
/// compare catalog constructions against reference constructions.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupFingerprint {
    pub order: usize,
    pub element_orders: BTreeMap<u32, usize>,
    pub class_sizes: Vec<usize>,
    /// Primary invariants of the abelianization, e.g. `[2, 4]` for `C2xC4`.
    pub abelian_invariants: Vec<u64>,
    pub center_order: usize,
}

fn primes_of(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl FiniteGroup {
    pub fn derived_subgroup(&self) -> fixedbitset::FixedBitSet {
        let mut comms: Vec<Elem> = Vec::new();
        let mut seen = vec![false; self.order()];
        for a in self.elements() {
            for b in self.elements() {
                let c = self.commutator(a, b);
                if !seen[c as usize] {
                    seen[c as usize] = true;
                    comms.push(c);
                }
            }
        }
        self.closure(&comms)
    }

    pub fn center_order(&self) -> usize {
        self.elements().filter(|&a| self.gens().iter().all(|&g| self.commutes(a, g))).count()
    }

    pub fn abelian_invariants(&self) -> Vec<u64> {
        let derived = self.derived_subgroup();
        let dsize = derived.count_ones(..);
        let qorder = (self.order() / dsize) as u64;
        let mut out = Vec::new();
        for p in primes_of(qorder) {
            // s[k] = log_p #{cosets c : c^(p^k) = 1}
            let mut s = vec![0u32];
            let mut pk: i64 = 1;
            loop {
                pk *= p as i64;
                let count = self.elements().filter(|&a| derived.contains(self.pow(a, pk) as usize)).count() / dsize;
                let mut log = 0;
                let mut c = count as u64;
                while c > 1 {
                    c /= p;
                    log += 1;
                }
                if log == *s.last().unwrap() {
                    break;
                }
                s.push(log);
            }
            // number of cyclic factors of exponent >= k is s[k] - s[k-1]
            let ge: Vec<u32> = (1..s.len()).map(|k| s[k] - s[k - 1]).collect();
            for k in 1..=ge.len() {
                let next = if k < ge.len() { ge[k] } else { 0 };
                for _ in 0..(ge[k - 1] - next) {
                    out.push(p.pow(k as u32));
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn fingerprint(&self) -> GroupFingerprint {
        let mut element_orders = BTreeMap::new();
        for a in self.elements() {
            *element_orders.entry(self.elem_order(a)).or_insert(0) += 1;
        }
        let mut class_sizes: Vec<usize> = self.conjugacy_classes().iter().map(Vec::len).collect();
        class_sizes.sort_unstable();
        GroupFingerprint {
            order: self.order(),
            element_orders,
            class_sizes,
            abelian_invariants: self.abelian_invariants(),
            center_order: self.center_order(),
        }
    }
}
