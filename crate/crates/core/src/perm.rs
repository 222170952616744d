use std::fmt;

use crate::error::{Error, Result};

/// A permutation of `0..degree`, stored as its image list.
///
/// Products are read left to right: `a.then(b)` applies `a` first.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Vec<u16>);

impl Perm {
    pub fn identity(degree: usize) -> Perm {
        Perm((0..degree as u16).collect())
    }

    pub fn from_images(images: Vec<u16>) -> Result<Perm> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            let i = i as usize;
            if i >= n || seen[i] {
                return Err(Error::Perm(format!("{images:?}")));
            }
            seen[i] = true;
        }
        Ok(Perm(images))
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[u16] {
        &self.0
    }

    pub fn apply(&self, point: usize) -> usize {
        self.0[point] as usize
    }

    pub fn then(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), other.degree());
        Perm(self.0.iter().map(|&i| other.0[i as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u16; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j as usize] = i as u16;
        }
        Perm(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j as usize)
    }

    /// Pads with fixed points up to `degree`.
    pub fn extend(&self, degree: usize) -> Perm {
        let mut v = self.0.clone();
        for i in v.len()..degree {
            v.push(i as u16);
        }
        Perm(v)
    }

    /// Shifts the moved points by `offset` inside a permutation of `degree` points.
    pub fn shifted(&self, offset: usize, degree: usize) -> Perm {
        let mut v: Vec<u16> = (0..degree as u16).collect();
        for (i, &j) in self.0.iter().enumerate() {
            v[i + offset] = j + offset as u16;
        }
        Perm(v)
    }

    /// Parses disjoint or non-disjoint cycle notation with 1-based points,
    /// e.g. `(1,2,3)(4,5)`. Cycles are composed left to right.
    pub fn parse_cycles(text: &str, degree: usize) -> Result<Perm> {
        let bad = || Error::Perm(text.to_string());
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut result = Perm::identity(degree);
        if s.is_empty() || s == "()" {
            return Ok(result);
        }
        let mut rest = s.as_str();
        while !rest.is_empty() {
            if !rest.starts_with('(') {
                return Err(bad());
            }
            let close = rest.find(')').ok_or_else(bad)?;
            let body = &rest[1..close];
            rest = &rest[close + 1..];
            if body.is_empty() {
                continue;
            }
            let points: Vec<usize> = body
                .split(',')
                .map(|p| p.parse::<usize>().map_err(|_| bad()))
                .collect::<Result<_>>()?;
            let mut cyc: Vec<u16> = (0..degree as u16).collect();
            let mut used = std::collections::HashSet::new();
            for (k, &p) in points.iter().enumerate() {
                if p == 0 || p > degree || !used.insert(p) {
                    return Err(bad());
                }
                let q = points[(k + 1) % points.len()];
                if q == 0 || q > degree {
                    return Err(bad());
                }
                cyc[p - 1] = (q - 1) as u16;
            }
            result = result.then(&Perm(cyc));
        }
        Ok(result)
    }

    /// Largest point (1-based) mentioned in a cycle string.
    pub fn max_point(text: &str) -> Result<usize> {
        let mut max = 0;
        for tok in text.split(|c: char| !c.is_ascii_digit()) {
            if tok.is_empty() {
                continue;
            }
            let v: usize = tok.parse().map_err(|_| Error::Perm(text.to_string()))?;
            max = max.max(v);
        }
        Ok(max)
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.0.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for i in 0..n {
            if seen[i] {
                continue;
            }
            let mut c = Vec::new();
            let mut j = i;
            while !seen[j] {
                seen[j] = true;
                c.push(j);
                j = self.0[j] as usize;
            }
            if c.len() > 1 {
                out.push(c);
            }
        }
        out
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            write!(f, "(")?;
            for (k, p) in c.iter().enumerate() {
                if k > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", p + 1)?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print_round_trip() {
        let p = Perm::parse_cycles("(1,2,3)(5,4)", 5).unwrap();
        assert_eq!(p.to_string(), "(1,2,3)(4,5)");
        assert_eq!(Perm::parse_cycles(&p.to_string(), 5).unwrap(), p);
        assert_eq!(Perm::identity(3).to_string(), "()");
    }

    #[test]
    fn products_apply_left_first() {
        let a = Perm::parse_cycles("(1,2)", 3).unwrap();
        let b = Perm::parse_cycles("(2,3)", 3).unwrap();
        // 1 -> 2 -> 3
        assert_eq!(a.then(&b).apply(0), 2);
        assert_eq!(a.then(&b).to_string(), "(1,3,2)");
        assert!(a.then(&a.inverse()).is_identity());
    }

    #[test]
    fn rejects_garbage() {
        assert!(Perm::parse_cycles("(1,2", 3).is_err());
        assert!(Perm::parse_cycles("(1,1)", 3).is_err());
        assert!(Perm::parse_cycles("(0,1)", 3).is_err());
        assert!(Perm::parse_cycles("(1,4)", 3).is_err());
    }
}
