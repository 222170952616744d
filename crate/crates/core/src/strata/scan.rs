//! Exhaustive scan of a genus over the catalog.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::group::SubgroupClass;
use crate::signature::Signature;

use super::catalog::{Catalog, Row};
use super::detect::{
    build_reports, induced_records, proper_subgroup_classes, InducedRecord, StratumDescriptor, StratumReport, Target,
    Verdict, CAVEAT_GENERIC, CAVEAT_MOVES,
};

/// A catalog action: case number plus class.
#[derive(Clone, Debug, Serialize, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ActionRef {
    pub case: u32,
    pub class_label: String,
    pub group: String,
    pub signature: Signature,
    pub class_id: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct StratumSummary {
    pub stratum: ActionRef,
    pub dimension: i64,
    pub flagged: bool,
    /// Ambients with a witness pair for this stratum.
    pub witness_ambients: Vec<ActionRef>,
    /// Ambients whose surfaces lie in the stratum of a witness ambient.
    pub closure_ambients: Vec<ActionRef>,
    /// Ambients with only undetermined candidate pairs.
    pub candidate_ambients: Vec<ActionRef>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TightExtension {
    pub action: ActionRef,
    pub extends_to: ActionRef,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanReport {
    pub genus: u32,
    pub strata: Vec<StratumSummary>,
    /// Classes excluded as strata and ambients because they extend.
    pub extended: Vec<TightExtension>,
    /// Detector reports with a witness, one per (ambient, stratum).
    pub reports: Vec<StratumReport>,
    pub caveats: Vec<String>,
}

impl ScanReport {
    pub fn flagged(&self) -> Vec<&StratumSummary> {
        self.strata.iter().filter(|s| s.flagged).collect()
    }
}

struct Ambient {
    row: usize,
    class: usize,
    records: Vec<InducedRecord>,
}

fn action_ref(rows: &[Row], row: usize, class: usize) -> ActionRef {
    let r = &rows[row];
    ActionRef {
        case: r.entry.case,
        class_label: r.labels[class].clone(),
        group: r.entry.name.clone(),
        signature: r.entry.key_signature(),
        class_id: r.classes[class].class_id.clone(),
    }
}

/// Scans every catalog action of a genus.
///
/// Strata and ambients are the catalog classes that do not tightly extend to
/// another catalog row. A stratum is flagged when some ambient has two
/// non-conjugate subgroups isomorphic to its group with determined induced
/// class equal to it.
pub fn scan_genus(catalog: &Catalog, genus: u32, budget: &Budget) -> Result<ScanReport> {
    let entries = catalog.genus(genus);
    let rows: Vec<Row> = entries.par_iter().map(|e| Row::build(e, budget)).collect::<Result<_>>()?;
    let targets: Vec<Arc<Target>> = rows
        .iter()
        .map(|r| {
            let labels: HashMap<String, String> =
                r.classes.iter().zip(&r.labels).map(|(c, l)| (c.class_id.clone(), l.clone())).collect();
            Arc::new(Target::with_classifier(&r.entry.name, r.classifier.clone(), labels))
        })
        .collect();
    let subgroups: Vec<Vec<SubgroupClass>> = rows.par_iter().map(|r| proper_subgroup_classes(&r.group)).collect();
    let pairs: Vec<(usize, usize)> =
        rows.iter().enumerate().flat_map(|(i, r)| (0..r.classes.len()).map(move |c| (i, c))).collect();
    let ambients: Vec<Ambient> = pairs
        .par_iter()
        .map(|&(row, class)| {
            let v = &rows[row].classes[class].representative;
            let (records, skipped) = induced_records(v, &subgroups[row], &targets, budget)?;
            if !skipped.is_empty() {
                return Err(Error::Budget { what: "induced classification", limit: budget.max_vectors });
            }
            Ok(Ambient { row, class, records })
        })
        .collect::<Result<_>>()?;
    let class_index = |row: usize, id: &str| rows[row].classes.iter().position(|c| c.class_id == id);

    // tight extensions: same dimension, bigger group
    let mut extended = Vec::new();
    let mut not_maximal: BTreeSet<(usize, usize)> = BTreeSet::new();
    for a in &ambients {
        let dim = rows[a.row].entry.signature.teich_dimension();
        for rec in &a.records {
            let x = rec.target;
            let Some(c) = rec.classes.class() else { continue };
            if rows[x].group.order() < rows[a.row].group.order() && rows[x].entry.signature.teich_dimension() == dim {
                let ci = class_index(x, &c.class_id).expect("class of the row");
                if not_maximal.insert((x, ci)) {
                    extended.push(TightExtension {
                        action: action_ref(&rows, x, ci),
                        extends_to: action_ref(&rows, a.row, a.class),
                    });
                }
            }
        }
    }
    extended.sort_by(|a, b| a.action.cmp(&b.action));

    let maximal: Vec<&Ambient> = ambients.iter().filter(|a| !not_maximal.contains(&(a.row, a.class))).collect();
    let mut reports = Vec::new();
    let mut witness: HashMap<(usize, usize), BTreeSet<(usize, usize)>> = HashMap::new();
    let mut candidate: HashMap<(usize, usize), BTreeSet<(usize, usize)>> = HashMap::new();
    // ambient -> strata it induces with a determined class
    let mut contains: HashMap<(usize, usize), BTreeSet<(usize, usize)>> = HashMap::new();
    for a in &maximal {
        let v = &rows[a.row].classes[a.class].representative;
        let records: Vec<InducedRecord> = a
            .records
            .iter()
            .filter(|r| r.classes.ids().iter().any(|id| !not_maximal.contains(&(r.target, class_index(r.target, id).unwrap()))))
            .map(|r| InducedRecord {
                subgroup: r.subgroup.clone(),
                conjugates: r.conjugates,
                target: r.target,
                local: r.local.clone(),
                embedding: r.embedding.clone(),
                to_target: r.to_target.clone(),
                restriction: r.restriction.clone(),
                classes: r.classes.clone(),
            })
            .collect();
        for r in &records {
            if let Some(c) = r.classes.class() {
                contains.entry((a.row, a.class)).or_default().insert((r.target, class_index(r.target, &c.class_id).unwrap()));
            }
        }
        let mut ambient = StratumDescriptor::new(&rows[a.row].entry.name, rows[a.row].group.order(), &rows[a.row].entry.key_signature())?;
        ambient.group_spec = Some(rows[a.row].entry.group.clone());
        ambient.class_id = Some(rows[a.row].classes[a.class].class_id.clone());
        ambient.class_label = Some(rows[a.row].labels[a.class].clone());
        for rep in build_reports(&ambient, v, &records, &targets, &[]) {
            let induced = rep.induced.as_ref().expect("records present");
            let Some(x) = targets.iter().position(|t| t.name == induced.group && t.signature.as_ref() == Some(&induced.signature))
            else {
                continue;
            };
            let ci = class_index(x, induced.class_id.as_deref().unwrap()).unwrap();
            if not_maximal.contains(&(x, ci)) {
                continue;
            }
            if rep.verdict == Verdict::WitnessFound {
                witness.entry((x, ci)).or_default().insert((a.row, a.class));
                reports.push(rep);
            } else if !rep.candidate_pairs.is_empty() {
                candidate.entry((x, ci)).or_default().insert((a.row, a.class));
            }
        }
    }

    let mut strata = Vec::new();
    for (x, row) in rows.iter().enumerate() {
        for ci in 0..row.classes.len() {
            if not_maximal.contains(&(x, ci)) {
                continue;
            }
            let w = witness.get(&(x, ci)).cloned().unwrap_or_default();
            // ambients whose surfaces lie in a witness ambient's stratum
            let mut closure: BTreeSet<(usize, usize)> = BTreeSet::new();
            loop {
                let known: BTreeSet<(usize, usize)> = w.union(&closure).copied().collect();
                let grown: Vec<(usize, usize)> = maximal
                    .iter()
                    .map(|a| (a.row, a.class))
                    .filter(|k| !known.contains(k))
                    .filter(|k| contains.get(k).map_or(false, |s| s.iter().any(|t| known.contains(t))))
                    .collect();
                if grown.is_empty() {
                    break;
                }
                closure.extend(grown);
            }
            let refs = |s: &BTreeSet<(usize, usize)>| -> Vec<ActionRef> {
                let mut v: Vec<ActionRef> = s.iter().map(|&(r, c)| action_ref(&rows, r, c)).collect();
                v.sort();
                v
            };
            strata.push(StratumSummary {
                stratum: action_ref(&rows, x, ci),
                dimension: row.entry.signature.teich_dimension(),
                flagged: !w.is_empty(),
                witness_ambients: refs(&w),
                closure_ambients: refs(&closure),
                candidate_ambients: refs(&candidate.get(&(x, ci)).cloned().unwrap_or_default()),
            });
        }
    }
    strata.sort_by(|a, b| a.stratum.cmp(&b.stratum));
    reports.sort_by(|a, b| (a.induced.clone(), a.ambient.clone()).cmp(&(b.induced.clone(), b.ambient.clone())));
    Ok(ScanReport {
        genus,
        strata,
        extended,
        reports,
        caveats: vec![
            CAVEAT_GENERIC.to_string(),
            CAVEAT_MOVES.to_string(),
            "normality of unflagged strata rests on the catalog listing every full automorphism group of the genus".to_string(),
        ],
    })
}
