//! Human-readable names for isomorphism types of small groups.

use std::collections::BTreeMap;

use crate::group::FiniteGroup;

/// Invariant factors `d1 | d2 | ...` from prime-power cyclic factors.
pub fn invariant_factors(prime_powers: &[u64]) -> Vec<u64> {
    let mut by_prime: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    for &q in prime_powers {
        if q > 1 {
            by_prime.entry(smallest_prime_factor(q)).or_default().push(q);
        }
    }
    let len = by_prime.values().map(Vec::len).max().unwrap_or(0);
    let mut factors = vec![1u64; len];
    for powers in by_prime.values_mut() {
        powers.sort_unstable_by(|a, b| b.cmp(a));
        for (i, &q) in powers.iter().enumerate() {
            factors[i] *= q;
        }
    }
    factors.sort_unstable();
    factors
}

fn smallest_prime_factor(n: u64) -> u64 {
    (2..=n).find(|p| n % p == 0).unwrap_or(n)
}

/// `C2^2xC4` style name of an abelian group.
pub fn abelian_name(g: &FiniteGroup) -> String {
    let factors = invariant_factors(&g.fingerprint().abelian_invariants);
    if factors.is_empty() {
        return "C1".into();
    }
    let mut parts = Vec::new();
    let mut i = 0;
    while i < factors.len() {
        let mut j = i;
        while j < factors.len() && factors[j] == factors[i] {
            j += 1;
        }
        if j - i == 1 {
            parts.push(format!("C{}", factors[i]));
        } else {
            parts.push(format!("C{}^{}", factors[i], j - i));
        }
        i = j;
    }
    parts.join("x")
}

/// Names groups by comparison with a library of known small groups; extra
/// named groups (for example catalog groups) are consulted first.
pub struct Namer {
    library: Vec<(String, FiniteGroup)>,
}

impl Namer {
    pub fn new(extra: Vec<(String, FiniteGroup)>) -> Namer {
        let mut library = extra;
        let mut add = |name: String, spec: &str| {
            if let Ok(g) = FiniteGroup::from_spec(spec, 512) {
                library.push((name, g));
            }
        };
        for n in 3..=16 {
            add(format!("D{n}"), &format!("D{n}"));
        }
        for n in 2..=8 {
            add(format!("C2xD{n}"), &format!("C2xD{n}"));
        }
        add("Q8".into(), "Perm[(1,2,4,7)(3,6,8,5);(1,3,4,8)(2,5,7,6)]");
        add("A4".into(), "Perm[(1,2,3);(2,3,4)]");
        add("S4".into(), "Perm[(1,2,3,4);(1,2)]");
        add("A5".into(), "Perm[(1,2,3,4,5);(1,2,3)]");
        add("C3xS3".into(), "C3xD3");
        add("C4xS3".into(), "C4xD3");
        add("C2xA4".into(), "C2xPerm[(1,2,3);(2,3,4)]");
        add("C2xS4".into(), "C2xPerm[(1,2,3,4);(1,2)]");
        add("(C4xC2):C2".into(), "Perm[(1,2,3,4)(5,6,7,8);(1,5)(2,6)(3,7)(4,8);(5,7)(6,8)]");
        add("C7:C3".into(), "Perm[(1,2,3,4,5,6,7);(2,3,5)(4,7,6)]");
        add("PSL(3,2)".into(), "Perm[(1,2,3,4,5,6,7);(3,5)(6,7)]");
        Namer { library }
    }

    pub fn name(&self, g: &FiniteGroup) -> String {
        if g.is_abelian() {
            return abelian_name(g);
        }
        let fp = g.fingerprint();
        for (name, h) in &self.library {
            if h.order() == g.order() && h.fingerprint() == fp && h.is_isomorphic(g) {
                return name.clone();
            }
        }
        format!("G{}", g.order())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invariant_factor_examples() {
        assert_eq!(invariant_factors(&[2, 4]), vec![2, 4]);
        assert_eq!(invariant_factors(&[2, 3]), vec![6]);
        assert_eq!(invariant_factors(&[2, 2, 3, 4]), vec![2, 2, 12]);
        assert!(invariant_factors(&[]).is_empty());
    }

    #[test]
    fn names_of_small_groups() {
        let namer = Namer::new(Vec::new());
        let n = |s: &str| namer.name(&FiniteGroup::from_spec(s, 512).unwrap());
        assert_eq!(n("C2xC2xC2"), "C2^3");
        assert_eq!(n("C2xC3"), "C6");
        assert_eq!(n("C4xC2"), "C2xC4");
        assert_eq!(n("SD(C4;[3])"), "D4");
        assert_eq!(n("SD(C4;[3,1])"), "C2xD4");
        assert_eq!(n("Perm[(1,2)(3,4);(1,3);(1,2,3)]"), "S4");
    }
}
