//! Fuchsian signatures `(h; m1, ..., ml)`.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = Ratio<i64>;

/// Orbit genus plus periods. Periods keep the order they were given in, but
/// two signatures describe the same family when the period multisets agree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Signature {
    pub genus: u32,
    pub periods: Vec<u32>,
}

impl Signature {
    pub fn new(genus: u32, periods: Vec<u32>) -> Result<Signature> {
        if let Some(&p) = periods.iter().find(|&&p| p < 2) {
            return Err(Error::InvalidSignature(format!("period {p} is below 2")));
        }
        Ok(Signature { genus, periods })
    }

    pub fn len(&self) -> usize {
        self.periods.len()
    }

    pub fn is_empty(&self) -> bool {
        self.periods.is_empty()
    }

    /// Number of group elements in a generating vector: `2h + l`.
    pub fn vector_len(&self) -> usize {
        2 * self.genus as usize + self.periods.len()
    }

    /// Same signature with periods sorted ascending.
    pub fn sorted(&self) -> Signature {
        let mut p = self.periods.clone();
        p.sort_unstable();
        Signature { genus: self.genus, periods: p }
    }

    pub fn same_type(&self, other: &Signature) -> bool {
        self.genus == other.genus && self.sorted().periods == other.sorted().periods
    }

    /// `2(h-1) + sum(1 - 1/m_i)`, the normalized hyperbolic area.
    pub fn measure(&self) -> Rational {
        let mut mu = Rational::from_integer(2 * (self.genus as i64 - 1));
        for &m in &self.periods {
            mu += Rational::new(m as i64 - 1, m as i64);
        }
        mu
    }

    pub fn is_hyperbolic(&self) -> bool {
        self.measure() > Rational::from_integer(0)
    }

    /// Complex dimension of the Teichmüller space of the signature.
    pub fn teich_dimension(&self) -> i64 {
        3 * self.genus as i64 - 3 + self.periods.len() as i64
    }

    /// Genus `g` with `2(g-1) = order * measure`.
    pub fn riemann_hurwitz_genus(&self, order: usize) -> Result<u32> {
        let mu = self.measure();
        if mu <= Rational::from_integer(0) {
            return Err(Error::InvalidSignature(format!("({self}) is not hyperbolic")));
        }
        let two_g_minus_two = mu * Rational::from_integer(order as i64);
        if !two_g_minus_two.is_integer() || two_g_minus_two.to_integer() % 2 != 0 {
            return Err(Error::NonIntegralGenus);
        }
        let g = two_g_minus_two.to_integer() / 2 + 1;
        if g < 2 {
            return Err(Error::GenusTooSmall(g));
        }
        Ok(g as u32)
    }

    /// Signatures of Fuchsian groups that always contain a group with this
    /// signature with the same Teichmüller dimension.
    pub fn list_extensions(&self) -> Vec<Extension> {
        let mut out: Vec<Extension> = extension_candidates(self)
            .into_iter()
            .filter(|e| e.outer.is_hyperbolic() && self.is_hyperbolic())
            .filter(|e| e.outer.teich_dimension() == self.teich_dimension())
            .filter(|e| self.measure() == e.outer.measure() * Rational::from_integer(e.index as i64))
            .collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn is_maximal(&self) -> bool {
        self.list_extensions().is_empty()
    }
}

/// An inclusion of Fuchsian signatures with the index of the inclusion.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Extension {
    pub outer: Signature,
    pub index: u32,
    pub normal: bool,
}

fn sig(genus: u32, mut periods: Vec<u32>) -> Signature {
    periods.sort_unstable();
    Signature { genus, periods }
}

fn ext(outer: Signature, index: u32, normal: bool) -> Extension {
    Extension { outer, index, normal }
}

fn extension_candidates(s: &Signature) -> Vec<Extension> {
    let p = s.sorted().periods;
    let mut out = Vec::new();
    match (s.genus, p.as_slice()) {
        (2, []) => out.push(ext(sig(0, vec![2; 6]), 2, true)),
        (1, &[t, u]) if t == u => out.push(ext(sig(0, vec![2, 2, 2, 2, t]), 2, true)),
        (1, &[t]) => out.push(ext(sig(0, vec![2, 2, 2, 2 * t]), 2, true)),
        (0, &[a, b, c, d]) => {
            if a == b && b == c && c == d {
                out.push(ext(sig(0, vec![2, 2, 2, a]), 4, true));
            }
            if a == b && c == d {
                out.push(ext(sig(0, vec![2, 2, a, c]), 2, true));
            }
        }
        (0, &[a, b, c]) => {
            // (t,t,u) in any arrangement
            let pairs = [(a, b, c), (b, c, a), (a, c, b)];
            for (x, y, z) in pairs {
                if x == y {
                    out.push(ext(sig(0, vec![2, x, 2 * z]), 2, true));
                }
            }
            if a == b && b == c {
                out.push(ext(sig(0, vec![3, 3, a]), 3, true));
                out.push(ext(sig(0, vec![2, 3, 2 * a]), 6, true));
            }
            let fixed: [(&[u32], Signature, u32); 7] = [
                (&[7, 7, 7], sig(0, vec![2, 3, 7]), 24),
                (&[2, 7, 7], sig(0, vec![2, 3, 7]), 9),
                (&[3, 3, 7], sig(0, vec![2, 3, 7]), 8),
                (&[4, 8, 8], sig(0, vec![2, 3, 8]), 12),
                (&[3, 8, 8], sig(0, vec![2, 3, 8]), 10),
                (&[9, 9, 9], sig(0, vec![2, 3, 9]), 12),
                (&[4, 4, 5], sig(0, vec![2, 4, 5]), 6),
            ];
            for (inner, outer, index) in fixed {
                if p == inner {
                    out.push(ext(outer, index, false));
                }
            }
            // families in n, sorted periods
            if b == c && c == 4 * a {
                out.push(ext(sig(0, vec![2, 3, 4 * a]), 6, false));
            }
            if b == c && c == 2 * a {
                out.push(ext(sig(0, vec![2, 4, 2 * a]), 4, false));
            }
            for n in [b, c] {
                if sig(0, vec![3, n, 3 * n]).periods == p {
                    out.push(ext(sig(0, vec![2, 3, 3 * n]), 4, false));
                }
                if sig(0, vec![2, n, 2 * n]).periods == p {
                    out.push(ext(sig(0, vec![2, 3, 2 * n]), 3, false));
                }
            }
        }
        _ => {}
    }
    out
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p: Vec<String> = self.periods.iter().map(|m| m.to_string()).collect();
        write!(f, "{};{}", self.genus, p.join(","))
    }
}

impl FromStr for Signature {
    type Err = Error;

    /// Accepts `h;m1,...,ml`, optionally wrapped in parentheses, and the
    /// exponent shorthand `2^4` for repeated periods.
    fn from_str(text: &str) -> Result<Signature> {
        let bad = || Error::SignatureParse(text.to_string());
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let t = t.trim_start_matches('(').trim_end_matches(')');
        let (h, rest) = t.split_once(';').ok_or_else(bad)?;
        let genus: u32 = h.parse().map_err(|_| bad())?;
        let mut periods = Vec::new();
        for item in rest.split(',').filter(|s| !s.is_empty()) {
            let (m, k) = match item.split_once('^') {
                Some((m, k)) => (m, k.parse::<usize>().map_err(|_| bad())?),
                None => (item, 1),
            };
            let m: u32 = m.parse().map_err(|_| bad())?;
            periods.extend(std::iter::repeat(m).take(k));
        }
        Signature::new(genus, periods)
    }
}

impl Serialize for Signature {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Signature {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Signature, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
