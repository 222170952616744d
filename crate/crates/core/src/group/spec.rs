//! The group spec mini-language:
//! `C<n>`, `D<n>` (dihedral of order 2n), `<spec>x<spec>`,
//! `SD(C<n>;[e1,...,ek])` and `Perm[<cycles>;<cycles>;...]`.

use num_integer::Integer;

use super::FiniteGroup;
use crate::error::{Error, Result};
use crate::perm::Perm;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupSpec {
    Cyclic(usize),
    Dihedral(usize),
    Product(Box<GroupSpec>, Box<GroupSpec>),
    /// Cyclic group of order `n` extended by commuting involutions; the i-th
    /// involution conjugates the cyclic generator to its `exps[i]`-th power.
    SemiDirect { n: usize, exps: Vec<usize> },
    Perm(Vec<String>),
}

fn err(spec: &str, reason: &str) -> Error {
    Error::GroupSpec { spec: spec.to_string(), reason: reason.to_string() }
}

pub fn parse_spec(text: &str) -> Result<GroupSpec> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(err(text, "empty spec"));
    }
    // split on top-level 'x'
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            'x' if depth == 0 => {
                parts.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
        if depth < 0 {
            return Err(err(text, "unbalanced brackets"));
        }
    }
    if depth != 0 {
        return Err(err(text, "unbalanced brackets"));
    }
    parts.push(&s[start..]);
    let mut iter = parts.into_iter();
    let mut acc = parse_atom(iter.next().unwrap(), text)?;
    for p in iter {
        acc = GroupSpec::Product(Box::new(acc), Box::new(parse_atom(p, text)?));
    }
    Ok(acc)
}

fn parse_num(s: &str, whole: &str) -> Result<usize> {
    let n: usize = s.parse().map_err(|_| err(whole, &format!("bad number `{s}`")))?;
    if n == 0 {
        return Err(err(whole, "orders must be positive"));
    }
    Ok(n)
}

fn parse_atom(s: &str, whole: &str) -> Result<GroupSpec> {
    if s.is_empty() {
        return Err(err(whole, "empty factor"));
    }
    if let Some(rest) = s.strip_prefix("SD(") {
        let body = rest.strip_suffix(')').ok_or_else(|| err(whole, "SD(...) not closed"))?;
        let (cyc, list) = body.split_once(';').ok_or_else(|| err(whole, "SD needs `;`"))?;
        let n = parse_num(cyc.strip_prefix('C').ok_or_else(|| err(whole, "SD base must be C<n>"))?, whole)?;
        let list = list
            .strip_prefix('[')
            .and_then(|l| l.strip_suffix(']'))
            .ok_or_else(|| err(whole, "SD exponents must be bracketed"))?;
        let mut exps = Vec::new();
        for e in list.split(',').filter(|e| !e.is_empty()) {
            let e: usize = e.parse().map_err(|_| err(whole, &format!("bad exponent `{e}`")))?;
            let e = e % n;
            if n > 1 && e.gcd(&n) != 1 {
                return Err(err(whole, &format!("exponent {e} is not coprime to {n}")));
            }
            if (e * e) % n != 1 % n {
                return Err(err(whole, &format!("exponent {e} does not square to 1 mod {n}")));
            }
            exps.push(e);
        }
        return Ok(GroupSpec::SemiDirect { n, exps });
    }
    if let Some(rest) = s.strip_prefix("Perm[") {
        let body = rest.strip_suffix(']').ok_or_else(|| err(whole, "Perm[...] not closed"))?;
        let gens: Vec<String> = body.split(';').map(str::to_string).collect();
        for g in &gens {
            if !g.chars().all(|c| c.is_ascii_digit() || "(),".contains(c)) {
                return Err(err(whole, &format!("bad cycle string `{g}`")));
            }
        }
        return Ok(GroupSpec::Perm(gens));
    }
    if let Some(n) = s.strip_prefix('C') {
        return Ok(GroupSpec::Cyclic(parse_num(n, whole)?));
    }
    if let Some(n) = s.strip_prefix('D') {
        return Ok(GroupSpec::Dihedral(parse_num(n, whole)?));
    }
    Err(err(whole, &format!("unknown factor `{s}`")))
}

impl GroupSpec {
    /// Order implied by the spec, when it can be read off without building.
    pub fn nominal_order(&self) -> Option<usize> {
        match self {
            GroupSpec::Cyclic(n) => Some(*n),
            GroupSpec::Dihedral(n) => Some(2 * n),
            GroupSpec::Product(a, b) => Some(a.nominal_order()?.checked_mul(b.nominal_order()?)?),
            GroupSpec::SemiDirect { n, exps } => n.checked_mul(1usize.checked_shl(exps.len() as u32)?),
            GroupSpec::Perm(_) => None,
        }
    }

    /// Generating permutations, in the order the spec lists its generators.
    pub fn generators(&self) -> Result<Vec<Perm>> {
        match self {
            GroupSpec::Cyclic(n) => {
                let imgs: Vec<u16> = (0..*n).map(|i| ((i + 1) % n) as u16).collect();
                Ok(vec![Perm::from_images(imgs)?])
            }
            GroupSpec::Dihedral(n) => {
                let n = *n;
                match n {
                    1 => Ok(vec![Perm::identity(2), Perm::parse_cycles("(1,2)", 2)?]),
                    2 => Ok(vec![
                        Perm::parse_cycles("(1,2)(3,4)", 4)?,
                        Perm::parse_cycles("(1,3)(2,4)", 4)?,
                    ]),
                    _ => {
                        let r: Vec<u16> = (0..n).map(|i| ((i + 1) % n) as u16).collect();
                        let s: Vec<u16> = (0..n).map(|i| ((n - i) % n) as u16).collect();
                        Ok(vec![Perm::from_images(r)?, Perm::from_images(s)?])
                    }
                }
            }
            GroupSpec::Product(a, b) => {
                let ga = a.generators()?;
                let gb = b.generators()?;
                let da = ga.iter().map(Perm::degree).max().unwrap_or(1);
                let db = gb.iter().map(Perm::degree).max().unwrap_or(1);
                let deg = da + db;
                let mut out: Vec<Perm> = ga.iter().map(|p| p.shifted(0, deg)).collect();
                out.extend(gb.iter().map(|p| p.shifted(da, deg)));
                Ok(out)
            }
            GroupSpec::SemiDirect { n, exps } => semidirect_regular(*n, exps),
            GroupSpec::Perm(cycles) => {
                let mut deg = 1;
                for c in cycles {
                    deg = deg.max(Perm::max_point(c)?);
                }
                cycles.iter().map(|c| Perm::parse_cycles(c, deg)).collect()
            }
        }
    }

    pub fn build(&self, max_order: usize) -> Result<FiniteGroup> {
        if let Some(n) = self.nominal_order() {
            if n > max_order {
                return Err(Error::OrderLimit { order: n, limit: max_order });
            }
        }
        FiniteGroup::from_generators(&self.to_string(), self.generators()?, max_order)
    }
}

/// Right regular representation of `C_n` extended by commuting involutions.
/// Elements are pairs `(i, v)` with `(i,v)(j,w) = (i + e^v j, v + w)`.
fn semidirect_regular(n: usize, exps: &[usize]) -> Result<Vec<Perm>> {
    let k = exps.len();
    let size = n << k;
    if size > u16::MAX as usize {
        return Err(Error::OrderLimit { order: size, limit: u16::MAX as usize });
    }
    let twist = |v: usize| -> usize {
        let mut e = 1 % n;
        for (bit, &x) in exps.iter().enumerate() {
            if v >> bit & 1 == 1 {
                e = e * x % n;
            }
        }
        e
    };
    let index = |i: usize, v: usize| v * n + i;
    let mul = |(i, v): (usize, usize), (j, w): (usize, usize)| ((i + twist(v) * j) % n, v ^ w);
    let mut gens = vec![(1 % n, 0usize)];
    for bit in 0..k {
        gens.push((0, 1 << bit));
    }
    let mut out = Vec::new();
    for g in gens {
        let mut imgs = vec![0u16; size];
        for v in 0..(1 << k) {
            for i in 0..n {
                let (a, b) = mul((i, v), g);
                imgs[index(i, v)] = index(a, b) as u16;
            }
        }
        out.push(Perm::from_images(imgs)?);
    }
    Ok(out)
}

impl std::fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GroupSpec::Cyclic(n) => write!(f, "C{n}"),
            GroupSpec::Dihedral(n) => write!(f, "D{n}"),
            GroupSpec::Product(a, b) => write!(f, "{a}x{b}"),
            GroupSpec::SemiDirect { n, exps } => {
                let e: Vec<String> = exps.iter().map(|e| e.to_string()).collect();
                write!(f, "SD(C{n};[{}])", e.join(","))
            }
            GroupSpec::Perm(c) => write!(f, "Perm[{}]", c.join(";")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_nested_products() {
        let s = parse_spec("C2xD4").unwrap();
        assert_eq!(s.to_string(), "C2xD4");
        assert_eq!(s.nominal_order(), Some(16));
        let s = parse_spec("C2xPerm[(1,2,3);(1,2)]xSD(C8;[3,5])").unwrap();
        assert_eq!(s.to_string(), "C2xPerm[(1,2,3);(1,2)]xSD(C8;[3,5])");
    }

    #[test]
    fn semidirect_validation() {
        assert!(parse_spec("SD(C8;[2])").is_err());
        assert!(parse_spec("SD(C8;[3])").is_ok());
        assert!(parse_spec("SD(C7;[3])").is_err());
        assert!(parse_spec("SD(C4;[3,1])").is_ok());
        assert!(parse_spec("Q8").is_err());
        assert!(parse_spec("C2x").is_err());
    }

    #[test]
    fn semidirect_relations_hold() {
        let g = FiniteGroup::from_spec("SD(C8;[3,5])", 512).unwrap();
        assert_eq!(g.order(), 32);
        let a = g.gens()[0];
        for (k, e) in [(1usize, 3i64), (2, 5)] {
            let b = g.gens()[k];
            assert_eq!(g.elem_order(b), 2);
            assert_eq!(g.mul(g.mul(b, a), g.inv(b)), g.pow(a, e));
        }
        let b1 = g.gens()[1];
        let b2 = g.gens()[2];
        assert!(g.commutes(b1, b2));
    }

    #[test]
    fn small_dihedrals() {
        assert_eq!(FiniteGroup::from_spec("D1", 512).unwrap().order(), 2);
        let d2 = FiniteGroup::from_spec("D2", 512).unwrap();
        assert_eq!(d2.order(), 4);
        assert!(d2.is_abelian());
        assert_eq!(FiniteGroup::from_spec("C1", 512).unwrap().order(), 1);
    }

    #[test]
    fn spec_order_checked_before_building() {
        let e = FiniteGroup::from_spec("C600", 512).unwrap_err();
        assert_eq!(e, Error::OrderLimit { order: 600, limit: 512 });
    }
}
