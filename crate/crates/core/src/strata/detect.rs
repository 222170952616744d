//! Witness search: isomorphic, non-conjugate subgroups whose induced actions
//! are topologically equivalent.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use serde::Serialize;

use crate::budget::Budget;
use crate::equivalence::Classifier;
use crate::error::{Error, Result};
use crate::group::{Elem, FiniteGroup, GroupFingerprint, Isomorphism, Subgroup, SubgroupClass};
use crate::restriction::{induced_classes_in, restrict, BranchRecord, InducedClasses, Restriction};
use crate::signature::Signature;
use crate::ske::GeneratingVector;

use super::naming::Namer;

pub const CAVEAT_GENERIC: &str = "non-conjugacy is checked in the ambient group; it carries over to the full automorphism group only where the ambient group is the full automorphism group, as for a generic member of a maximal action";
pub const CAVEAT_CLOSURE: &str = "no witness at this ambient does not make its points normal: the set of non-normal points is closed and can contain surfaces without a witness pair";
pub const CAVEAT_MOVES: &str = "classes with positive orbit genus are relative to the implemented mapping-class moves";
pub const CAVEAT_CANDIDATE: &str = "some induced classes are not pinned down by rotation data; candidate pairs are not evidence";

/// An isomorphism type that induced actions are compared in.
pub struct Target {
    pub name: String,
    pub group: Arc<FiniteGroup>,
    fingerprint: GroupFingerprint,
    /// When set, only induced actions with this signature are compared.
    pub signature: Option<Signature>,
    classifiers: Mutex<HashMap<Signature, Arc<Classifier>>>,
    /// Signatures whose classification exceeded the budget.
    over_budget: Mutex<HashMap<Signature, Error>>,
    labels: HashMap<String, String>,
}

impl Target {
    pub fn new(name: &str, group: Arc<FiniteGroup>) -> Target {
        let fingerprint = group.fingerprint();
        Target {
            name: name.to_string(),
            group,
            fingerprint,
            signature: None,
            classifiers: Mutex::new(HashMap::new()),
            over_budget: Mutex::new(HashMap::new()),
            labels: HashMap::new(),
        }
    }

    /// A target fixed to one signature, reusing an existing classifier.
    pub fn with_classifier(name: &str, classifier: Arc<Classifier>, labels: HashMap<String, String>) -> Target {
        let mut t = Target::new(name, classifier.group().clone());
        let sig = classifier.signature().sorted();
        t.signature = Some(sig.clone());
        t.classifiers.lock().unwrap().insert(sig, classifier);
        t.labels = labels;
        t
    }

    pub fn classifier(&self, signature: &Signature, budget: &Budget) -> Result<Arc<Classifier>> {
        let key = signature.sorted();
        let mut cache = self.classifiers.lock().unwrap();
        if let Some(c) = cache.get(&key) {
            return Ok(c.clone());
        }
        let mut failed = self.over_budget.lock().unwrap();
        if let Some(e) = failed.get(&key) {
            return Err(e.clone());
        }
        match Classifier::new(self.group.clone(), key.clone(), budget) {
            Ok(c) => {
                let c = Arc::new(c);
                cache.insert(key, c.clone());
                Ok(c)
            }
            Err(e @ Error::Budget { .. }) => {
                failed.insert(key, e.clone());
                Err(e)
            }
            Err(e) => Err(e),
        }
    }

    pub fn isomorphism_from(&self, h: &FiniteGroup, h_fingerprint: &GroupFingerprint) -> Option<Isomorphism> {
        if h.order() != self.group.order() || *h_fingerprint != self.fingerprint {
            return None;
        }
        h.find_isomorphism(&self.group)
    }

    pub fn label(&self, class_id: &str) -> Option<String> {
        self.labels.get(class_id).cloned()
    }
}

/// Restriction of one ambient vector to one subgroup class representative,
/// compared in a target group.
pub struct InducedRecord {
    pub subgroup: Subgroup,
    pub conjugates: usize,
    pub target: usize,
    /// Subgroup as a group of its own, its embedding, and the map into the target.
    pub local: Arc<FiniteGroup>,
    pub embedding: Vec<Elem>,
    pub to_target: Isomorphism,
    pub restriction: Restriction,
    pub classes: InducedClasses,
}

/// Proper, non-trivial subgroup classes.
pub fn proper_subgroup_classes(g: &FiniteGroup) -> Vec<SubgroupClass> {
    g.subgroup_classes().into_iter().filter(|c| c.representative.order() > 1 && c.representative.order() < g.order()).collect()
}

/// Induced data for every subgroup class isomorphic to some target. Subgroups
/// whose induced classification exceeds the budget are returned separately
/// with their induced signature.
pub fn induced_records(
    v: &GeneratingVector,
    subgroups: &[SubgroupClass],
    targets: &[Arc<Target>],
    budget: &Budget,
) -> Result<(Vec<InducedRecord>, Vec<(Subgroup, Signature)>)> {
    let g = v.group();
    let mut out = Vec::new();
    let mut skipped = Vec::new();
    for class in subgroups {
        let h = &class.representative;
        let candidates: Vec<usize> = (0..targets.len()).filter(|&t| targets[t].group.order() == h.order()).collect();
        if candidates.is_empty() {
            continue;
        }
        let (local, embedding) = g.subgroup_group(h.members(), "subgroup")?;
        let fp = local.fingerprint();
        let local = Arc::new(local);
        let mut restriction: Option<Restriction> = None;
        for t in candidates {
            let target = &targets[t];
            let Some(iso) = target.isomorphism_from(&local, &fp) else { continue };
            if restriction.is_none() {
                restriction = Some(restrict(v, h)?);
            }
            let r = restriction.as_ref().unwrap();
            if let Some(s) = &target.signature {
                if !s.same_type(&r.induced_signature) {
                    continue;
                }
            }
            let classes = match target
                .classifier(&r.induced_signature, budget)
                .and_then(|c| induced_classes_in(r, &embedding, &iso, &c, budget))
            {
                Ok(c) => c,
                Err(Error::Budget { .. }) => {
                    skipped.push((h.clone(), r.induced_signature.clone()));
                    continue;
                }
                Err(e) => return Err(e),
            };
            out.push(InducedRecord {
                subgroup: h.clone(),
                conjugates: class.size,
                target: t,
                local: local.clone(),
                embedding: embedding.clone(),
                to_target: iso,
                restriction: r.clone(),
                classes,
            });
        }
    }
    Ok((out, skipped))
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq, PartialOrd, Ord)]
pub struct StratumDescriptor {
    pub group: String,
    pub group_spec: Option<String>,
    pub signature: Signature,
    pub class_id: Option<String>,
    pub class_label: Option<String>,
    pub genus: u32,
    pub dimension: i64,
}

impl StratumDescriptor {
    pub fn new(group: &str, order: usize, signature: &Signature) -> Result<StratumDescriptor> {
        Ok(StratumDescriptor {
            group: group.to_string(),
            group_spec: None,
            signature: signature.clone(),
            class_id: None,
            class_label: None,
            genus: signature.riemann_hurwitz_genus(order)?,
            dimension: signature.teich_dimension(),
        })
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct SubgroupRecord {
    pub generators: Vec<String>,
    pub order: usize,
    pub conjugates: usize,
    pub induced_signature: Signature,
    pub branch_data: Vec<BranchRecord>,
    pub induced_classes: Vec<String>,
    pub determined: bool,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct WitnessPair {
    pub first: SubgroupRecord,
    pub second: SubgroupRecord,
    /// Generators of the second subgroup with their images in the first.
    pub isomorphism: Vec<(String, String)>,
    pub shared_class: String,
}

#[derive(Clone, Copy, Debug, Serialize, PartialEq, Eq, PartialOrd, Ord)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    WitnessFound,
    NoWitness,
}

#[derive(Clone, Debug, Serialize)]
pub struct StratumReport {
    pub ambient: StratumDescriptor,
    pub induced: Option<StratumDescriptor>,
    pub verdict: Verdict,
    pub witness_pairs: Vec<WitnessPair>,
    pub candidate_pairs: Vec<WitnessPair>,
    pub subgroups: Vec<SubgroupRecord>,
    pub caveats: Vec<String>,
}

fn subgroup_record(g: &FiniteGroup, r: &InducedRecord) -> SubgroupRecord {
    SubgroupRecord {
        generators: r.subgroup.gens().iter().map(|&x| g.format_elem(x)).collect(),
        order: r.subgroup.order(),
        conjugates: r.conjugates,
        induced_signature: r.restriction.induced_signature.clone(),
        branch_data: r.restriction.branch_records(g),
        induced_classes: r.classes.ids().into_iter().collect(),
        determined: r.classes.determined,
    }
}

/// Isomorphism from the second subgroup onto the first through the target.
pub fn pair_isomorphism(second: &InducedRecord, first: &InducedRecord) -> Vec<(Elem, Elem)> {
    let back: HashMap<Elem, Elem> = second.embedding.iter().enumerate().map(|(i, &e)| (e, i as Elem)).collect();
    let from_target = first.to_target.inverse();
    second
        .subgroup
        .gens()
        .iter()
        .map(|&x| {
            let local = back[&x];
            let img = from_target.apply(second.to_target.apply(local));
            (x, first.embedding[img as usize])
        })
        .collect()
}

fn pair(g: &FiniteGroup, a: &InducedRecord, b: &InducedRecord, class_id: &str) -> WitnessPair {
    WitnessPair {
        first: subgroup_record(g, a),
        second: subgroup_record(g, b),
        isomorphism: pair_isomorphism(b, a).into_iter().map(|(x, y)| (g.format_elem(x), g.format_elem(y))).collect(),
        shared_class: class_id.to_string(),
    }
}

/// Groups records by induced stratum and looks for witness pairs. Records
/// must come from distinct subgroup conjugacy classes.
pub fn build_reports(
    ambient: &StratumDescriptor,
    v: &GeneratingVector,
    records: &[InducedRecord],
    targets: &[Arc<Target>],
    extra_caveats: &[String],
) -> Vec<StratumReport> {
    let g = v.group();
    // (target, signature, class) -> (determined members, undetermined members)
    let mut buckets: BTreeMap<(usize, Signature, String), (Vec<usize>, Vec<usize>)> = BTreeMap::new();
    for (i, r) in records.iter().enumerate() {
        let sig = r.restriction.induced_signature.clone();
        for id in r.classes.ids() {
            let e = buckets.entry((r.target, sig.clone(), id)).or_default();
            if r.classes.determined {
                e.0.push(i);
            } else {
                e.1.push(i);
            }
        }
    }
    let mut reports = Vec::new();
    for ((t, sig, id), (firm, loose)) in buckets {
        let target = &targets[t];
        let mut witness_pairs = Vec::new();
        for (x, &i) in firm.iter().enumerate() {
            for &j in &firm[x + 1..] {
                if !g.are_conjugate(&records[i].subgroup, &records[j].subgroup) {
                    witness_pairs.push(pair(g, &records[i], &records[j], &id));
                }
            }
        }
        let mut candidate_pairs = Vec::new();
        let all: Vec<usize> = firm.iter().chain(loose.iter()).copied().collect();
        for (x, &i) in all.iter().enumerate() {
            for &j in &all[x + 1..] {
                let involves_loose = loose.contains(&i) || loose.contains(&j);
                if involves_loose && !g.are_conjugate(&records[i].subgroup, &records[j].subgroup) {
                    candidate_pairs.push(pair(g, &records[i], &records[j], &id));
                }
            }
        }
        let order = target.group.order();
        let mut induced = StratumDescriptor {
            group: target.name.clone(),
            group_spec: None,
            signature: sig.clone(),
            class_id: Some(id.clone()),
            class_label: target.label(&id),
            genus: ambient.genus,
            dimension: sig.teich_dimension(),
        };
        debug_assert_eq!(sig.riemann_hurwitz_genus(order).ok(), Some(ambient.genus));
        induced.genus = sig.riemann_hurwitz_genus(order).unwrap_or(ambient.genus);
        let verdict = if witness_pairs.is_empty() { Verdict::NoWitness } else { Verdict::WitnessFound };
        let mut caveats: Vec<String> = vec![CAVEAT_GENERIC.to_string()];
        if verdict == Verdict::NoWitness {
            caveats.push(CAVEAT_CLOSURE.to_string());
        }
        if sig.genus > 0 {
            caveats.push(CAVEAT_MOVES.to_string());
        }
        if !candidate_pairs.is_empty() || !loose.is_empty() {
            caveats.push(CAVEAT_CANDIDATE.to_string());
        }
        caveats.extend(extra_caveats.iter().cloned());
        let subgroups = all.iter().map(|&i| subgroup_record(g, &records[i])).collect();
        reports.push(StratumReport {
            ambient: ambient.clone(),
            induced: Some(induced),
            verdict,
            witness_pairs,
            candidate_pairs,
            subgroups,
            caveats,
        });
    }
    reports.sort_by(|a, b| a.induced.cmp(&b.induced));
    reports
}

/// Descriptor of the ambient action, with a class id when classification
/// fits in the budget.
pub fn ambient_descriptor(v: &GeneratingVector, budget: &Budget) -> Result<StratumDescriptor> {
    let g = v.group();
    let mut d = StratumDescriptor::new(g.name(), g.order(), v.signature())?;
    d.signature = v.signature().clone();
    let sorted = v.signature().sorted();
    match Classifier::new(g.clone(), sorted, budget) {
        Ok(c) => d.class_id = Some(c.class_of(v.entries())?.class_id),
        Err(Error::Budget { .. }) => {}
        Err(e) => return Err(e),
    }
    Ok(d)
}

fn skipped_caveat(g: &FiniteGroup, skipped: &[(Subgroup, Signature)]) -> String {
    let list: Vec<String> = skipped
        .iter()
        .map(|(h, s)| {
            let gens: Vec<String> = h.gens().iter().map(|&x| g.format_elem(x)).collect();
            format!("<{}> with ({s})", gens.join(", "))
        })
        .collect();
    format!("{} subgroup classes exceeded the budget and were not compared: {}", skipped.len(), list.join("; "))
}

fn maximality_caveat(s: &Signature) -> Option<String> {
    let ext = s.list_extensions();
    if ext.is_empty() {
        return None;
    }
    let list: Vec<String> = ext.iter().map(|e| format!("({}) index {}", e.outer, e.index)).collect();
    Some(format!("ambient signature is not maximal, extension candidates: {}; the action may extend", list.join(", ")))
}

/// Looks for witness pairs of `v` among subgroups isomorphic to `target`, or
/// among all subgroup isomorphism types when no target is given.
pub fn detect(v: &GeneratingVector, target: Option<&FiniteGroup>, budget: &Budget) -> Result<Vec<StratumReport>> {
    let g = v.group();
    let ambient = ambient_descriptor(v, budget)?;
    let subgroups = proper_subgroup_classes(g);
    let namer = Namer::new(Vec::new());
    let mut targets: Vec<Arc<Target>> = Vec::new();
    match target {
        Some(t) => {
            let name = namer.name(t);
            let mut t = t.clone();
            t.set_name(&name);
            targets.push(Arc::new(Target::new(&name, Arc::new(t))));
        }
        None => {
            // one target per isomorphism type, represented by its first subgroup
            for class in &subgroups {
                let (local, _) = g.subgroup_group(class.representative.members(), "subgroup")?;
                let fp = local.fingerprint();
                if targets.iter().any(|t| t.isomorphism_from(&local, &fp).is_some()) {
                    continue;
                }
                let mut local = local;
                let name = namer.name(&local);
                local.set_name(&name);
                targets.push(Arc::new(Target::new(&name, Arc::new(local))));
            }
        }
    }
    let (records, skipped) = induced_records(v, &subgroups, &targets, budget)?;
    let mut extra: Vec<String> = maximality_caveat(v.signature()).into_iter().collect();
    if !skipped.is_empty() {
        extra.push(skipped_caveat(g, &skipped));
    }
    let mut reports = build_reports(&ambient, v, &records, &targets, &extra);
    if reports.is_empty() {
        let mut caveats = vec![CAVEAT_GENERIC.to_string(), CAVEAT_CLOSURE.to_string()];
        caveats.push("no subgroup of the requested isomorphism type".to_string());
        caveats.extend(extra);
        reports.push(StratumReport {
            ambient,
            induced: None,
            verdict: Verdict::NoWitness,
            witness_pairs: Vec::new(),
            candidate_pairs: Vec::new(),
            subgroups: Vec::new(),
            caveats,
        });
    }
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vector(spec: &str, names: &[&str], elliptic: &[&str]) -> GeneratingVector {
        let mut g = FiniteGroup::from_spec(spec, 512).unwrap();
        g.set_name(spec);
        GeneratingVector::from_words(Arc::new(g), names, &[], elliptic).unwrap()
    }

    #[test]
    fn dihedral_genus_two_has_klein_witness() {
        let v = vector("D4", &["r", "s"], &["s", "s*r", "r^2", "r"]);
        let k = FiniteGroup::from_spec("C2xC2", 512).unwrap();
        let reports = detect(&v, Some(&k), &Budget::default()).unwrap();
        let hits: Vec<_> = reports.iter().filter(|r| r.verdict == Verdict::WitnessFound).collect();
        assert_eq!(hits.len(), 1);
        let induced = hits[0].induced.as_ref().unwrap();
        assert_eq!(induced.signature.to_string(), "0;2,2,2,2,2");
        assert_eq!(induced.genus, 2);
        assert_eq!(hits[0].witness_pairs.len(), 1);
    }

    #[test]
    fn witness_pairs_replay() {
        let v = vector("C2xD4", &["t", "r", "s"], &["t", "t*s*r", "s", "r"]);
        let g = v.group().clone();
        let k = FiniteGroup::from_spec("C2xC2", 512).unwrap();
        for report in detect(&v, Some(&k), &Budget::default()).unwrap() {
            for p in &report.witness_pairs {
                // recompute both induced classes in the first subgroup's own group
                let parse = |s: &String| g.parse_element(s).unwrap();
                let h1 = Subgroup::generated_by(&g, &p.first.generators.iter().map(parse).collect::<Vec<_>>());
                let h2 = Subgroup::generated_by(&g, &p.second.generators.iter().map(parse).collect::<Vec<_>>());
                assert!(!g.are_conjugate(&h1, &h2));
                let mut map: HashMap<Elem, Elem> = HashMap::new();
                for (a, b) in &p.isomorphism {
                    map.insert(parse(a), parse(b));
                }
                let (l1, e1) = g.subgroup_group(h1.members(), "h1").unwrap();
                let l1 = Arc::new(l1);
                let r1 = restrict(&v, &h1).unwrap();
                let r2 = restrict(&v, &h2).unwrap();
                let c = Classifier::new(l1.clone(), r1.induced_signature.sorted(), &Budget::default()).unwrap();
                let id1 = induced_classes_in(&r1, &e1, &Isomorphism::identity(l1.order()), &c, &Budget::default()).unwrap();
                // transport the second restriction's generators with the recorded map
                let img = |x: Elem| -> Elem {
                    // write x as a word in the generators of h2 by closure search
                    let gens: Vec<Elem> = map.keys().copied().collect();
                    let mut reach: HashMap<Elem, Elem> = HashMap::from([(0, 0)]);
                    let mut frontier = vec![0];
                    while let Some(y) = frontier.pop() {
                        for &s in &gens {
                            let z = g.mul(y, s);
                            if !reach.contains_key(&z) {
                                let img = g.mul(reach[&y], map[&s]);
                                reach.insert(z, img);
                                frontier.push(z);
                            }
                        }
                    }
                    reach[&x]
                };
                let mut moved = r2.clone();
                for b in &mut moved.branch_points {
                    b.generator = img(b.generator);
                }
                let id2 = induced_classes_in(&moved, &e1, &Isomorphism::identity(l1.order()), &c, &Budget::default()).unwrap();
                assert!(id1.determined && id2.determined);
                assert_eq!(id1.ids(), id2.ids());
                // the shared class is named in the target group
                let mut kn = k.clone();
                kn.set_name(&report.induced.as_ref().unwrap().group);
                let kc = Classifier::new(Arc::new(kn), r1.induced_signature.sorted(), &Budget::default()).unwrap();
                let to_k = l1.find_isomorphism(&k).unwrap();
                let idk = induced_classes_in(&r1, &e1, &to_k, &kc, &Budget::default()).unwrap();
                assert_eq!(idk.ids().into_iter().next().unwrap(), p.shared_class);
            }
        }
    }
}
