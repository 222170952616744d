//! Golden catalog of full automorphism groups in genus 2 and 3.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::equivalence::{Classifier, TopologicalClass};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::signature::Signature;
use crate::ske;

const BUILTIN: &str = include_str!("../../data/catalog.toml");
const VERSION: u32 = 1;

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct NamedClass {
    pub label: String,
    #[serde(default)]
    pub handles: Vec<String>,
    pub elliptic: Vec<String>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct CatalogEntry {
    pub genus: u32,
    pub case: u32,
    pub signature: Signature,
    /// Group spec used for every computation.
    pub group: String,
    /// Display name of the group.
    pub name: String,
    /// Claimed small-group id `(order, index)`.
    pub id: (usize, usize),
    /// Independent construction of the claimed id.
    pub reference: String,
    #[serde(default)]
    pub generator_names: Option<Vec<String>>,
    #[serde(default)]
    pub class_count: Option<usize>,
    #[serde(default)]
    pub classes: Vec<NamedClass>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct Catalog {
    pub version: u32,
    #[serde(rename = "entry")]
    pub entries: Vec<CatalogEntry>,
}

impl Catalog {
    pub fn builtin() -> Catalog {
        Catalog::from_toml(BUILTIN).expect("built-in catalog parses")
    }

    pub fn from_toml(text: &str) -> Result<Catalog> {
        let c: Catalog = toml::from_str(text).map_err(|e| Error::Catalog(e.to_string()))?;
        if c.version != VERSION {
            return Err(Error::Catalog(format!("unsupported catalog version {}", c.version)));
        }
        Ok(c)
    }

    pub fn genus(&self, genus: u32) -> Vec<&CatalogEntry> {
        self.entries.iter().filter(|e| e.genus == genus).collect()
    }

    pub fn entry(&self, genus: u32, case: u32) -> Option<&CatalogEntry> {
        self.entries.iter().find(|e| e.genus == genus && e.case == case)
    }
}

impl CatalogEntry {
    /// Builds the group under its display name.
    pub fn build_group(&self, budget: &Budget) -> Result<Arc<FiniteGroup>> {
        let mut g = FiniteGroup::from_spec(&self.group, budget.max_order)?;
        g.set_name(&self.name);
        Ok(Arc::new(g))
    }

    /// Sorted signature used as the classification key.
    pub fn key_signature(&self) -> Signature {
        self.signature.sorted()
    }

    /// Parses a named class into group elements.
    pub fn parse_class(&self, g: &FiniteGroup, class: &NamedClass) -> Result<Vec<crate::group::Elem>> {
        let names: Vec<&str> = match &self.generator_names {
            Some(n) => n.iter().map(String::as_str).collect(),
            None => return Err(Error::Catalog(format!("case {} names classes without generator names", self.case))),
        };
        class
            .handles
            .iter()
            .chain(class.elliptic.iter())
            .map(|w| g.parse_word(&names, w))
            .collect()
    }
}

/// A catalog row with its classification.
pub struct Row {
    pub entry: CatalogEntry,
    pub group: Arc<FiniteGroup>,
    pub classifier: Arc<Classifier>,
    pub classes: Vec<TopologicalClass>,
    /// Literature label per class, `#k` when unnamed.
    pub labels: Vec<String>,
}

impl Row {
    pub fn build(entry: &CatalogEntry, budget: &Budget) -> Result<Row> {
        let group = entry.build_group(budget)?;
        let classifier = Arc::new(Classifier::new(group.clone(), entry.key_signature(), budget)?);
        let classes = classifier.classes(budget)?;
        let mut labels: Vec<String> = (1..=classes.len()).map(|i| format!("#{i}")).collect();
        for named in &entry.classes {
            let v = entry.parse_class(&group, named)?;
            let c = classifier.class_of(&v).map_err(|e| {
                Error::Catalog(format!("case {} class {}: {e}", entry.case, named.label))
            })?;
            let i = classes.iter().position(|x| x.class_id == c.class_id).expect("class listed");
            labels[i] = named.label.clone();
        }
        Ok(Row { entry: entry.clone(), group, classifier, classes, labels })
    }

    pub fn label_of(&self, class_id: &str) -> Option<&str> {
        self.classes.iter().position(|c| c.class_id == class_id).map(|i| self.labels[i].as_str())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RowCheck {
    pub genus: u32,
    pub case: u32,
    pub group: String,
    pub signature: Signature,
    pub claimed_id: (usize, usize),
    pub riemann_hurwitz_genus: Option<u32>,
    pub order_matches_id: bool,
    pub fingerprint_matches: bool,
    pub isomorphic_to_reference: bool,
    pub vectors: usize,
    pub classes: usize,
    pub class_labels: Vec<String>,
    pub passed: bool,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CatalogReport {
    pub genus: Option<u32>,
    pub rows: Vec<RowCheck>,
    pub passed: bool,
}

/// Checks one entry: Riemann-Hurwitz genus, id against the reference
/// construction, existence of vectors and the number of classes. Genus-2
/// rows must have exactly one class.
pub fn verify_entry(entry: &CatalogEntry, budget: &Budget) -> RowCheck {
    let mut check = RowCheck {
        genus: entry.genus,
        case: entry.case,
        group: entry.name.clone(),
        signature: entry.signature.clone(),
        claimed_id: entry.id,
        riemann_hurwitz_genus: None,
        order_matches_id: false,
        fingerprint_matches: false,
        isomorphic_to_reference: false,
        vectors: 0,
        classes: 0,
        class_labels: Vec::new(),
        passed: false,
        failures: Vec::new(),
    };
    let fail = |check: &mut RowCheck, msg: String| check.failures.push(msg);
    let group = match entry.build_group(budget) {
        Ok(g) => g,
        Err(e) => {
            fail(&mut check, format!("group: {e}"));
            return check;
        }
    };
    match entry.signature.riemann_hurwitz_genus(group.order()) {
        Ok(g) => {
            check.riemann_hurwitz_genus = Some(g);
            if g != entry.genus {
                fail(&mut check, format!("Riemann-Hurwitz genus {g}, expected {}", entry.genus));
            }
        }
        Err(e) => fail(&mut check, format!("Riemann-Hurwitz: {e}")),
    }
    check.order_matches_id = group.order() == entry.id.0;
    if !check.order_matches_id {
        fail(&mut check, format!("order {} does not match id {:?}", group.order(), entry.id));
    }
    match FiniteGroup::from_spec(&entry.reference, budget.max_order) {
        Ok(r) => {
            check.fingerprint_matches = r.fingerprint() == group.fingerprint();
            check.isomorphic_to_reference = check.fingerprint_matches && r.is_isomorphic(&group);
            if !check.isomorphic_to_reference {
                fail(&mut check, "not isomorphic to the reference construction".into());
            }
        }
        Err(e) => fail(&mut check, format!("reference: {e}")),
    }
    if check.failures.is_empty() {
        match ske::enumerate_raw(&group, &entry.key_signature(), budget) {
            Ok(v) => check.vectors = v.len(),
            Err(e) => fail(&mut check, format!("enumeration: {e}")),
        }
        if check.vectors == 0 {
            fail(&mut check, "no generating vector".into());
        }
    }
    if check.failures.is_empty() {
        match Row::build(entry, budget) {
            Ok(row) => {
                check.classes = row.classes.len();
                check.class_labels = row.labels.clone();
                let expected = if entry.genus == 2 { Some(1) } else { entry.class_count };
                if let Some(n) = expected {
                    if n != check.classes {
                        let msg = format!("{} topological classes, expected {n}", check.classes);
                        fail(&mut check, msg);
                    }
                }
            }
            Err(e) => fail(&mut check, format!("classification: {e}")),
        }
    }
    check.passed = check.failures.is_empty();
    check
}

pub fn verify_catalog(catalog: &Catalog, genus: Option<u32>, budget: &Budget) -> CatalogReport {
    use rayon::prelude::*;
    let entries: Vec<&CatalogEntry> = catalog.entries.iter().filter(|e| genus.map_or(true, |g| e.genus == g)).collect();
    let rows: Vec<RowCheck> = entries.par_iter().map(|e| verify_entry(e, budget)).collect();
    let passed = rows.iter().all(|r| r.passed);
    CatalogReport { genus, rows, passed }
}
