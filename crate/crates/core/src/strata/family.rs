//! Infinite families of non-normal strata, checked at concrete parameters.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::budget::Budget;
use crate::equivalence::Classifier;
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Subgroup};
use crate::restriction::{induced_classes_in, restrict};
use crate::signature::Signature;
use crate::ske::GeneratingVector;

use super::detect::{detect, pair_isomorphism, InducedRecord, StratumReport, Target, Verdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// `C2 x D_{g+1}` for odd `g`, `D_g` for even `g`; hyperelliptic Klein-four stratum.
    HyperellipticKlein { g: u32 },
    /// `C_{2(g-1)} : C2^2` for odd `g`; dihedral stratum of signature `(0;2^5)`.
    Dihedral8n { g: u32 },
    /// `C2 x C_{2n}` for odd `n`; cyclic stratum of order `2n`.
    Cyclic2n { n: u32 },
    /// `C_k^n`; coordinate subgroups `C_k^{n-1}`.
    GeneralizedFermat { k: u32, n: u32 },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::HyperellipticKlein { .. } => "hyperelliptic_klein",
            Family::Dihedral8n { .. } => "dihedral_8n",
            Family::Cyclic2n { .. } => "cyclic_2n",
            Family::GeneralizedFermat { .. } => "generalized_fermat",
        }
    }

    pub fn params(&self) -> BTreeMap<String, u32> {
        let mut p = BTreeMap::new();
        match *self {
            Family::HyperellipticKlein { g } | Family::Dihedral8n { g } => {
                p.insert("g".into(), g);
            }
            Family::Cyclic2n { n } => {
                p.insert("n".into(), n);
            }
            Family::GeneralizedFermat { k, n } => {
                p.insert("k".into(), k);
                p.insert("n".into(), n);
            }
        }
        p
    }

    fn check_bounds(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Usage(m));
        match *self {
            Family::HyperellipticKlein { g } if !(3..=12).contains(&g) => bad(format!("g = {g} outside 3..=12")),
            Family::Dihedral8n { g } if !(3..=12).contains(&g) || g % 2 == 0 => bad(format!("g = {g} must be odd in 3..=12")),
            Family::Cyclic2n { n } if !(3..=7).contains(&n) || n % 2 == 0 => bad(format!("n = {n} must be odd in 3..=7")),
            Family::GeneralizedFermat { k, n } if k < 2 || !(4..=7).contains(&n) || (k as u64).pow(n) > 512 => {
                bad(format!("(k, n) = ({k}, {n}) needs k >= 2, 4 <= n <= 7 and k^n <= 512"))
            }
            _ => Ok(()),
        }
    }

    /// Expected ambient genus, induced signature and stratum dimension.
    pub fn expected(&self) -> Expected {
        let (genus, periods, name) = match *self {
            Family::HyperellipticKlein { g } => (g, vec![2; g as usize + 3], "C2^2".to_string()),
            Family::Dihedral8n { g } => (g, vec![2; 5], format!("D{}", 2 * (g - 1))),
            Family::Cyclic2n { n } => {
                let mut p = vec![2, 2];
                p.extend(std::iter::repeat(n).take(n as usize));
                ((n - 1) * (n - 1), p, format!("C{}", 2 * n))
            }
            Family::GeneralizedFermat { k, n } => {
                let kn1 = (k as i64).pow(n - 1);
                let genus = 1 + kn1 * ((n as i64 - 1) * (k as i64 - 1) - 2) / 2;
                let name = if n - 1 == 1 { format!("C{k}") } else { format!("C{k}^{}", n - 1) };
                (genus as u32, vec![k; (k * (n - 1)) as usize], name)
            }
        };
        let signature = Signature { genus: 0, periods };
        Expected { genus, dimension: signature.teich_dimension(), induced_group: name, induced_signature: signature }
    }

    /// Ambient group, vector and the two subgroups of the family.
    pub fn construct(&self, budget: &Budget) -> Result<(GeneratingVector, Subgroup, Subgroup, FiniteGroup)> {
        self.check_bounds()?;
        let build = |spec: &str, name: &str| -> Result<Arc<FiniteGroup>> {
            let mut g = FiniteGroup::from_spec(spec, budget.max_order)?;
            g.set_name(name);
            Ok(Arc::new(g))
        };
        let sub = |g: &FiniteGroup, names: &[&str], words: &[String]| -> Result<Subgroup> {
            let xs = words.iter().map(|w| g.parse_word(names, w)).collect::<Result<Vec<_>>>()?;
            Ok(Subgroup::generated_by(g, &xs))
        };
        let s = |x: &str| x.to_string();
        match *self {
            Family::HyperellipticKlein { g } if g % 2 == 1 => {
                let grp = build(&format!("C2xD{}", g + 1), &format!("C2xD{}", g + 1))?;
                let names = ["t", "r", "s"];
                let v = GeneratingVector::from_words(grp.clone(), &names, &[], &["t", "t*s*r", "s", "r"])?;
                let h1 = sub(&grp, &names, &[s("t"), s("s")])?;
                let h2 = sub(&grp, &names, &[s("t"), format!("r^{}", (g + 1) / 2)])?;
                Ok((v, h1, h2, FiniteGroup::from_spec("C2xC2", 4)?))
            }
            Family::HyperellipticKlein { g } => {
                let grp = build(&format!("D{g}"), &format!("D{g}"))?;
                let names = ["r", "s"];
                let z = format!("r^{}", g / 2);
                let v = GeneratingVector::from_words(grp.clone(), &names, &[], &[&z, &z, "s", "s*r", "r^-1"])?;
                let h1 = sub(&grp, &names, &[s("s"), z.clone()])?;
                let h2 = sub(&grp, &names, &[s("s*r"), z])?;
                Ok((v, h1, h2, FiniteGroup::from_spec("C2xC2", 4)?))
            }
            Family::Dihedral8n { g } => {
                let m = 2 * (g - 1);
                let grp = build(&format!("SD(C{m};[{},{}])", g - 2, g), &format!("C{m}:C2^2"))?;
                let names = ["a", "b", "c"];
                let last = format!("b*c*a^-{g}");
                let v = GeneratingVector::from_words(grp.clone(), &names, &[], &["b", "b*c", "a*b", &last])?;
                let h1 = sub(&grp, &names, &[s("a"), s("b*c")])?;
                let h2 = sub(&grp, &names, &[s("a*c"), s("b")])?;
                Ok((v, h1, h2, FiniteGroup::from_spec(&format!("D{m}"), budget.max_order)?))
            }
            Family::Cyclic2n { n } => {
                let grp = build(&format!("C2xC{}", 2 * n), &format!("C2xC{}", 2 * n))?;
                let names = ["a", "b"];
                let bn = format!("b^{n}");
                let mut elliptic: Vec<&str> = vec!["a", &bn];
                elliptic.extend(std::iter::repeat("b^2").take((n as usize - 1) / 2));
                elliptic.push("a*b");
                let v = GeneratingVector::from_words(grp.clone(), &names, &[], &elliptic)?;
                let h1 = sub(&grp, &names, &[s("b")])?;
                let h2 = sub(&grp, &names, &[s("a*b^2")])?;
                Ok((v, h1, h2, FiniteGroup::from_spec(&format!("C{}", 2 * n), budget.max_order)?))
            }
            Family::GeneralizedFermat { k, n } => {
                let spec = vec![format!("C{k}"); n as usize].join("x");
                let name = format!("C{k}^{n}");
                let grp = build(&spec, &name)?;
                let names: Vec<String> = (1..=n).map(|i| format!("a{i}")).collect();
                let names: Vec<&str> = names.iter().map(String::as_str).collect();
                let last = names.iter().rev().map(|x| format!("{x}^-1")).collect::<Vec<_>>().join("*");
                let mut elliptic: Vec<String> = names.iter().map(|x| x.to_string()).collect();
                elliptic.push(last);
                let e: Vec<&str> = elliptic.iter().map(String::as_str).collect();
                let v = GeneratingVector::from_words(grp.clone(), &names, &[], &e)?;
                let first: Vec<String> = names[..n as usize - 1].iter().map(|x| x.to_string()).collect();
                let rest: Vec<String> = names[1..].iter().map(|x| x.to_string()).collect();
                let h1 = sub(&grp, &names, &first)?;
                let h2 = sub(&grp, &names, &rest)?;
                let target = vec![format!("C{k}"); n as usize - 1].join("x");
                Ok((v, h1, h2, FiniteGroup::from_spec(&target, budget.max_order)?))
            }
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Expected {
    pub genus: u32,
    pub induced_group: String,
    pub induced_signature: Signature,
    pub dimension: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyPair {
    pub first: Vec<String>,
    pub second: Vec<String>,
    pub first_signature: Signature,
    pub second_signature: Signature,
    pub first_classes: Vec<String>,
    pub second_classes: Vec<String>,
    pub determined: bool,
    pub conjugate: bool,
    pub isomorphism: Vec<(String, String)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyReport {
    pub family: String,
    pub params: BTreeMap<String, u32>,
    pub ambient_group: String,
    pub ambient_signature: Signature,
    pub expected: Expected,
    pub pair: FamilyPair,
    pub detect: Vec<StratumReport>,
    pub checks: Vec<Check>,
    pub passed: bool,
}

fn check(name: &str, passed: bool, detail: String) -> Check {
    Check { name: name.into(), passed, detail }
}

/// Builds the family member, restricts to the two named subgroups, compares
/// their induced classes in a common copy of the subgroup type, and runs the
/// detector with that type as target.
pub fn family_check(family: Family, budget: &Budget) -> Result<FamilyReport> {
    let (v, h1, h2, target_group) = family.construct(budget)?;
    let g = v.group().clone();
    let expected = family.expected();
    let mut target_group = target_group;
    target_group.set_name(&expected.induced_group);
    let target = Arc::new(Target::new(&expected.induced_group, Arc::new(target_group)));

    let mut records = Vec::new();
    let mut signatures = Vec::new();
    let mut iso_types = Vec::new();
    for h in [&h1, &h2] {
        let (local, embedding) = g.subgroup_group(h.members(), "subgroup")?;
        let fp = local.fingerprint();
        let restriction = restrict(&v, h)?;
        signatures.push(restriction.induced_signature.clone());
        let Some(to_target) = target.isomorphism_from(&local, &fp) else {
            iso_types.push(format!("order {}", local.order()));
            continue;
        };
        iso_types.push(expected.induced_group.clone());
        let classifier: Arc<Classifier> = target.classifier(&restriction.induced_signature, budget)?;
        let classes = induced_classes_in(&restriction, &embedding, &to_target, &classifier, budget)?;
        records.push(InducedRecord {
            subgroup: h.clone(),
            conjugates: 0,
            target: 0,
            local: Arc::new(local),
            embedding,
            to_target,
            restriction,
            classes,
        });
    }
    let both = records.len() == 2;
    let conjugate = g.are_conjugate(&h1, &h2);
    let determined = both && records.iter().all(|r| r.classes.determined);
    let ids = |i: usize| -> Vec<String> {
        if both {
            records[i].classes.ids().into_iter().collect()
        } else {
            Vec::new()
        }
    };
    let pair = FamilyPair {
        first: h1.gens().iter().map(|&x| g.format_elem(x)).collect(),
        second: h2.gens().iter().map(|&x| g.format_elem(x)).collect(),
        first_signature: signatures[0].clone(),
        second_signature: signatures[1].clone(),
        first_classes: ids(0),
        second_classes: ids(1),
        determined,
        conjugate,
        isomorphism: if both {
            pair_isomorphism(&records[1], &records[0]).into_iter().map(|(a, b)| (g.format_elem(a), g.format_elem(b))).collect()
        } else {
            Vec::new()
        },
    };
    let genus = v.surface_genus()?;
    let reports = detect(&v, Some(&target.group), budget)?;
    let hit = reports.iter().any(|r| {
        r.verdict == Verdict::WitnessFound
            && r.induced.as_ref().map_or(false, |i| i.signature.same_type(&expected.induced_signature))
    });
    let sig1 = &pair.first_signature;
    let checks = vec![
        check(
            "subgroups isomorphic to the target",
            both,
            format!("{} and {}, expected {}", iso_types[0], iso_types[1], expected.induced_group),
        ),
        check("ambient genus", genus == expected.genus, format!("{genus}, expected {}", expected.genus)),
        check(
            "induced signature",
            sig1.same_type(&expected.induced_signature) && pair.second_signature.same_type(&expected.induced_signature),
            format!("({}) and ({}), expected ({})", sig1, pair.second_signature, expected.induced_signature),
        ),
        check(
            "induced genus",
            sig1.riemann_hurwitz_genus(target.group.order()).ok() == Some(expected.genus),
            format!("{:?}", sig1.riemann_hurwitz_genus(target.group.order()).ok()),
        ),
        check(
            "induced classes equal",
            determined && pair.first_classes == pair.second_classes,
            format!("{:?} vs {:?}, determined {determined}", pair.first_classes, pair.second_classes),
        ),
        check("subgroups non-conjugate", !conjugate, format!("conjugate in the ambient group: {conjugate}")),
        check(
            "stratum dimension",
            sig1.teich_dimension() == expected.dimension,
            format!("{}, expected {}", sig1.teich_dimension(), expected.dimension),
        ),
        check("detector finds a witness", hit, format!("{} reports", reports.len())),
    ];
    let passed = checks.iter().all(|c| c.passed);
    Ok(FamilyReport {
        family: family.name().to_string(),
        params: family.params(),
        ambient_group: g.name().to_string(),
        ambient_signature: v.signature().clone(),
        expected,
        pair,
        detect: reports,
        checks,
        passed,
    })
}
