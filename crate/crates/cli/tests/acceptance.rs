//! Acceptance criteria. Each test prints one `criterion N: PASS|FAIL` line.
//! Tests share a lock so that the runtime limits are measured without
//! contention from each other.

use std::collections::BTreeSet;
use std::process::Command;
use std::sync::{Arc, Mutex, MutexGuard};
use std::time::{Duration, Instant};

use serde_json::Value;

use equisym_core::equivalence::{are_equivalent, replay, topological_classes, Classifier};
use equisym_core::restriction::{induced_classes_in, restrict};
use equisym_core::signature::Rational;
use equisym_core::strata::{family_check, Catalog, Family, Row};
use equisym_core::{Budget, Elem, FiniteGroup, GeneratingVector, Signature, Subgroup};

static LOCK: Mutex<()> = Mutex::new(());

fn serial() -> MutexGuard<'static, ()> {
    LOCK.lock().unwrap_or_else(|e| e.into_inner())
}

fn report(n: u32, ok: bool, detail: &str) {
    println!("criterion {n}: {} {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {n}: {detail}");
}

fn equisym(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_equisym"))
        .args(args)
        .env_remove("EQUISYM_MAX_ORDER")
        .env_remove("EQUISYM_MAX_VECTORS")
        .env_remove("EQUISYM_MAX_ORBIT")
        .output()
        .unwrap();
    let v = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap_or(-1), v)
}

fn strings(v: &Value) -> Vec<String> {
    v.as_array().unwrap().iter().map(|x| x.as_str().unwrap().to_string()).collect()
}

#[test]
fn criterion_1_genus_two_catalog() {
    let _g = serial();
    let t = Instant::now();
    let (code, v) = equisym(&["catalog-verify", "--genus", "2"]);
    let elapsed = t.elapsed();
    let rows = v["rows"].as_array().cloned().unwrap_or_default();
    let cases: Vec<u64> = rows.iter().map(|r| r["case"].as_u64().unwrap()).collect();
    let one_class = rows.iter().all(|r| r["classes"] == 1 && r["passed"] == true);
    let ok = code == 0 && v["passed"] == true && cases == [5, 11, 14, 15, 20, 21] && one_class && elapsed < Duration::from_secs(10);
    report(1, ok, &format!("rows {cases:?}, one class each {one_class}, {elapsed:.2?}"));
}

#[test]
fn criterion_2_genus_two_scan() {
    let _g = serial();
    let t = Instant::now();
    let (code, v) = equisym(&["scan", "--genus", "2"]);
    let flagged: Vec<&Value> = v["strata"].as_array().unwrap().iter().filter(|s| s["flagged"] == true).collect();
    let flagged_cases: Vec<u64> = flagged.iter().map(|s| s["stratum"]["case"].as_u64().unwrap()).collect();
    let ambients: BTreeSet<u64> = flagged
        .iter()
        .flat_map(|s| {
            let w = s["witness_ambients"].as_array().unwrap().iter();
            w.chain(s["closure_ambients"].as_array().unwrap()).map(|a| a["case"].as_u64().unwrap())
        })
        .collect();

    // GL(2,3) itself: no pair of Klein subgroups with a common induced class
    let gl23 = Catalog::builtin().entry(2, 21).unwrap().group.clone();
    let (_, e) = equisym(&["enumerate", "--group", &gl23, "--signature", "0;2,3,8"]);
    let elliptic = strings(&e["vectors"][0]["elliptic"]).join(";");
    let (dcode, d) = equisym(&["detect", "--group", &gl23, "--elliptic", &elliptic, "--target", "C2xC2"]);
    let reports = d["reports"].as_array().unwrap();
    let no_witness = !reports.is_empty() && reports.iter().all(|r| r["verdict"] == "no_witness");
    let elapsed = t.elapsed();

    let ok = code == 0
        && dcode == 0
        && flagged_cases == [5]
        && ambients == BTreeSet::from([11, 20, 21])
        && no_witness
        && elapsed < Duration::from_secs(30);
    report(2, ok, &format!("flagged {flagged_cases:?}, ambients {ambients:?}, GL(2,3) no witness {no_witness}, {elapsed:.2?}"));
}

#[test]
fn criterion_3_genus_three_scan() {
    let _g = serial();
    let t = Instant::now();
    let (code, v) = equisym(&["scan", "--genus", "3"]);
    let elapsed = t.elapsed();
    let expected: [((u64, &str), (u64, &str)); 7] = [
        ((38, "#1"), (49, "#1")),
        ((20, "#1"), (31, "#1")),
        ((19, "#1"), (32, "#1")),
        ((10, "#1"), (21, "theta1")),
        ((9, "theta1"), (20, "#1")),
        ((9, "theta2"), (19, "#1")),
        ((3, "#1"), (9, "theta2")),
    ];
    let key = |a: &Value| (a["case"].as_u64().unwrap(), a["class_label"].as_str().unwrap().to_string());
    let flagged: Vec<&Value> = v["strata"].as_array().unwrap().iter().filter(|s| s["flagged"] == true).collect();
    let got: BTreeSet<(u64, String)> = flagged.iter().map(|s| key(&s["stratum"])).collect();
    let want: BTreeSet<(u64, String)> = expected.iter().map(|((c, l), _)| (*c, l.to_string())).collect();
    let mut missing = Vec::new();
    for ((c, l), (ac, al)) in expected {
        let s = flagged.iter().find(|s| key(&s["stratum"]) == (c, l.to_string()));
        let has = s.is_some_and(|s| s["witness_ambients"].as_array().unwrap().iter().any(|a| key(a) == (ac, al.to_string())));
        if !has {
            missing.push(format!("{c} {l} <- {ac} {al}"));
        }
    }
    let ok = code == 0 && got == want && missing.is_empty() && elapsed < Duration::from_secs(300);
    report(3, ok, &format!("{} strata flagged, missing witnesses {missing:?}, {elapsed:.2?}", got.len()));
}

#[test]
fn criterion_4_class_counts() {
    let _g = serial();
    let budget = Budget::default();
    let cases = [
        ("C4xC2", "0;2,2,4,4", 3),
        ("C2xC2", "0;2,2,2,2,2,2", 2),
        ("D4", "0;2,2,2,2,2", 1),
        ("D8", "0;2,2,2,2,2", 1),
        ("D12", "0;2,2,2,2,2", 1),
    ];
    let mut wrong = Vec::new();
    for (spec, sig, want) in cases {
        let g = FiniteGroup::from_spec_arc(spec, budget.max_order).unwrap();
        let n = topological_classes(&g, &sig.parse().unwrap(), &budget).unwrap().len();
        if n != want {
            wrong.push(format!("{spec} ({sig}): {n}, expected {want}"));
        }
    }
    report(4, wrong.is_empty(), &format!("{} groups checked, mismatches {wrong:?}", cases.len()));
}

struct Ambient {
    group: Arc<FiniteGroup>,
    names: Vec<String>,
    v: GeneratingVector,
}

impl Ambient {
    fn new(case: u32, elliptic: &[&str]) -> Ambient {
        let e = Catalog::builtin().entry(3, case).unwrap().clone();
        let group = e.build_group(&Budget::default()).unwrap();
        let names = e.generator_names.clone().unwrap();
        let n: Vec<&str> = names.iter().map(String::as_str).collect();
        let v = GeneratingVector::from_words(group.clone(), &n, &[], elliptic).unwrap();
        Ambient { group, names, v }
    }

    fn elem(&self, word: &str) -> Elem {
        let n: Vec<&str> = self.names.iter().map(String::as_str).collect();
        self.group.parse_word(&n, word).unwrap()
    }

    fn subgroup(&self, gens: &[&str]) -> Subgroup {
        let xs: Vec<Elem> = gens.iter().map(|w| self.elem(w)).collect();
        Subgroup::generated_by(&self.group, &xs)
    }

    /// Label of the induced class in `row`, whether it is determined, and
    /// whether the hand-written vector `written` lies in the same class.
    fn label(&self, gens: &[&str], written: &[&str], row: &Row) -> (String, bool, bool) {
        let h = self.subgroup(gens);
        let (local, embedding) = self.group.subgroup_group(h.members(), "H").unwrap();
        let iso = local.find_isomorphism(&row.group).unwrap();
        let r = restrict(&self.v, &h).unwrap();
        let c = induced_classes_in(&r, &embedding, &iso, &row.classifier, &Budget::default()).unwrap();
        let class = &c.candidates[0];
        let to_row = |x: Elem| iso.apply(embedding.iter().position(|&e| e == x).unwrap() as Elem);
        let entries: Vec<Elem> = written.iter().map(|w| to_row(self.elem(w))).collect();
        let periods = entries.iter().map(|&x| row.group.elem_order(x)).collect();
        let w = GeneratingVector::new(row.group.clone(), Signature::new(0, periods).unwrap(), entries).unwrap();
        let same = are_equivalent(&class.representative, &w, &Budget::default()).unwrap().is_some();
        (row.label_of(&class.class_id).unwrap().to_string(), c.determined, same)
    }
}

#[test]
fn criterion_5_restriction_goldens() {
    let _g = serial();
    let row = |case| Row::build(Catalog::builtin().entry(3, case).unwrap(), &Budget::default()).unwrap();
    let (r21, r9) = (row(21), row(9));
    let mut fails = Vec::new();

    let a43 = Ambient::new(43, &["z", "z*x", "x^-1"]);
    let h1 = a43.label(&["x^2", "y"], &["y", "y", "x^2", "x^6"], &r21);
    let h2 = a43.label(&["x*z", "x^4"], &["y", "x^4", "x*z", "x^5*z"], &r21);
    if !(h1.1 && h2.1 && h1.2 && h2.2 && h1.0 != h2.0) {
        fails.push(format!("order 32: {h1:?} {h2:?}"));
    }

    let a31 = Ambient::new(31, &["s", "s*r*t", "t*r^2", "r"]);
    let o = a31.label(&["r", "t"], &["t*r^2", "t*r^2", "r", "r^-1"], &r21);
    if o != ("theta2".into(), true, true) {
        fails.push(format!("C2xD4: {o:?}"));
    }

    let a19 = Ambient::new(19, &["s*r", "s*r", "s", "s*r^2", "r^2"]);
    let k1 = a19.label(&["s", "r^2"], &["s", "s", "s*r^2", "s*r^2", "r^2", "r^2"], &r9);
    let k2 = a19.label(&["s*r", "r^2"], &["s*r", "s*r", "s*r^3", "s*r^3", "r^2", "r^2"], &r9);
    let conj = a19.group.are_conjugate(&a19.subgroup(&["s", "r^2"]), &a19.subgroup(&["s*r", "r^2"]));
    if k1 != ("theta2".into(), true, true) || k2 != k1 || conj {
        fails.push(format!("D4: {k1:?} {k2:?} conjugate {conj}"));
    }

    let a20 = Ambient::new(20, &["x", "x", "y", "y*z", "z"]);
    let labels: Vec<String> = [["x", "y"], ["x", "z"], ["x", "y*z"], ["y", "z"]]
        .iter()
        .map(|gens| {
            let h = a20.subgroup(gens);
            let (local, embedding) = a20.group.subgroup_group(h.members(), "H").unwrap();
            let iso = local.find_isomorphism(&r9.group).unwrap();
            let r = restrict(&a20.v, &h).unwrap();
            let c = induced_classes_in(&r, &embedding, &iso, &r9.classifier, &Budget::default()).unwrap();
            r9.label_of(&c.candidates[0].class_id).unwrap().to_string()
        })
        .collect();
    if labels != ["theta1", "theta1", "theta1", "theta2"] {
        fails.push(format!("C2^3: {labels:?}"));
    }
    report(5, fails.is_empty(), &format!("4 golden restrictions, failures {fails:?}"));
}

/// Expected shape of one family instance.
struct Instance {
    family: Family,
    genus: Option<u32>,
    induced: &'static str,
    dimension: i64,
    limit: Duration,
}

/// Returns a list of violations for one instance.
fn check_instance(i: &Instance) -> Vec<String> {
    let budget = Budget::default();
    let name = format!("{} {:?}", i.family.name(), i.family.params());
    let t = Instant::now();
    let r = match family_check(i.family, &budget) {
        Ok(r) => r,
        Err(e) => return vec![format!("{name}: {e}")],
    };
    let elapsed = t.elapsed();
    let mut bad = Vec::new();
    let (v, _, _, _) = i.family.construct(&budget).unwrap();
    let genus = v.surface_genus().unwrap();
    if let Some(want) = i.genus {
        if genus != want {
            bad.push(format!("{name}: surface genus {genus}, stated {want}"));
        }
    }
    let induced: Signature = i.induced.parse().unwrap();
    let p = &r.pair;
    if !p.first_signature.same_type(&induced) || !p.second_signature.same_type(&induced) {
        bad.push(format!("{name}: induced {} and {}, expected {induced}", p.first_signature, p.second_signature));
    }
    if p.first_classes.is_empty() || p.first_classes != p.second_classes || !p.determined {
        bad.push(format!("{name}: induced classes differ or undetermined"));
    }
    if p.conjugate {
        bad.push(format!("{name}: subgroups are conjugate"));
    }
    if induced.teich_dimension() != i.dimension {
        bad.push(format!("{name}: dimension {}, expected {}", induced.teich_dimension(), i.dimension));
    }
    for c in r.checks.iter().filter(|c| !c.passed) {
        bad.push(format!("{name}: {} ({})", c.name, c.detail));
    }
    if elapsed > i.limit {
        bad.push(format!("{name}: {elapsed:.2?} over {:?}", i.limit));
    }
    bad
}

fn twos(n: usize) -> &'static str {
    Box::leak(format!("0;{}", vec!["2"; n].join(",")).into_boxed_str())
}

#[test]
fn criterion_6_hyperelliptic_klein() {
    let _g = serial();
    let mut bad = Vec::new();
    for g in 3..=6u32 {
        bad.extend(check_instance(&Instance {
            family: Family::HyperellipticKlein { g },
            genus: Some(g),
            induced: twos(g as usize + 3),
            dimension: g as i64,
            limit: Duration::from_secs(60),
        }));
    }
    report(6, bad.is_empty(), &format!("g = 3..6, violations {bad:?}"));
}

#[test]
fn criterion_7_other_families() {
    let _g = serial();
    let limit = Duration::from_secs(120);
    let instances = [
        Instance { family: Family::Dihedral8n { g: 3 }, genus: Some(3), induced: "0;2,2,2,2,2", dimension: 2, limit },
        Instance { family: Family::Dihedral8n { g: 5 }, genus: Some(5), induced: "0;2,2,2,2,2", dimension: 2, limit },
        Instance { family: Family::Cyclic2n { n: 3 }, genus: Some(4), induced: "0;2,2,3,3,3", dimension: 2, limit },
        Instance { family: Family::Cyclic2n { n: 5 }, genus: Some(16), induced: "0;2,2,5,5,5,5,5", dimension: 4, limit },
        Instance { family: Family::GeneralizedFermat { k: 2, n: 4 }, genus: Some(5), induced: "0;2,2,2,2,2,2", dimension: 3, limit },
        Instance { family: Family::GeneralizedFermat { k: 3, n: 4 }, genus: Some(17), induced: "0;3,3,3,3,3,3,3,3,3", dimension: 6, limit },
        Instance { family: Family::GeneralizedFermat { k: 2, n: 5 }, genus: Some(13), induced: "0;2,2,2,2,2,2,2,2", dimension: 5, limit },
    ];
    let mut bad = Vec::new();
    for i in &instances {
        bad.extend(check_instance(i));
    }
    report(7, bad.is_empty(), &format!("{} instances, violations {bad:?}", instances.len()));
}

#[test]
fn criterion_8_property_sweep() {
    let _g = serial();
    let budget = Budget::default();
    let mut violations = Vec::new();
    let mut checked = 0usize;
    let catalog = Catalog::builtin();
    for e in &catalog.entries {
        let row = Row::build(e, &budget).unwrap();
        let g = &row.group;
        let sig = row.entry.key_signature();
        let genus = sig.genus as usize;
        let classifier: &Classifier = &row.classifier;
        let vectors = classifier.vectors(&budget).unwrap();
        let tag = format!("genus {} case {}", e.genus, e.case);

        // Riemann-Hurwitz
        let s = sig.riemann_hurwitz_genus(g.order()).unwrap();
        if Rational::from_integer(2 * (s as i64 - 1)) != sig.measure() * Rational::from_integer(g.order() as i64) || s != e.genus {
            violations.push(format!("{tag}: Riemann-Hurwitz"));
        }

        // classes partition the vectors
        let classes = classifier.classes(&budget).unwrap();
        if classes.iter().map(|c| c.orbit_size).sum::<u64>() as usize != vectors.len() {
            violations.push(format!("{tag}: orbit sizes do not sum to the vector count"));
        }

        let auts = g.automorphisms(budget.max_automorphisms).unwrap();
        let step = (vectors.len() / 8).max(1);
        for (k, x) in vectors.iter().enumerate().step_by(step) {
            checked += 1;
            let id = classifier.class_of(x).unwrap().class_id;
            let f = &auts[k % auts.len()];
            let y: Vec<Elem> = x.iter().map(|&a| f.apply(a)).collect();
            if classifier.class_of(&y).unwrap().class_id != id {
                violations.push(format!("{tag}: class not automorphism invariant"));
            }

            // the equivalence witness replays onto the automorphic image
            let vx = GeneratingVector::new(g.clone(), sig.clone(), x.clone()).unwrap();
            let vy = GeneratingVector::new(g.clone(), sig.clone(), y.clone()).unwrap();
            match are_equivalent(&vx, &vy, &budget).unwrap() {
                Some(ms) if replay(g, genus, x, &ms) == y => {}
                _ => violations.push(format!("{tag}: no replayable witness")),
            }

            // restriction bookkeeping for every subgroup class
            for sc in g.subgroup_classes() {
                let h = &sc.representative;
                let r = restrict(&vx, h).unwrap();
                let d = r.index as i64;
                let ram: i64 = r.cycle_types.iter().map(|c| d - c.len() as i64).sum();
                let euler = 2 - 2 * r.induced_signature.genus as i64 == d * (2 - 2 * genus as i64) - ram;
                let measure = r.induced_signature.measure() * Rational::from_integer(h.order() as i64)
                    == sig.measure() * Rational::from_integer(g.order() as i64);
                let cycles = r.cycle_types.iter().all(|c| c.iter().sum::<usize>() as i64 == d);
                let gens = r.branch_points.iter().all(|p| h.contains(p.generator) && g.elem_order(p.generator) == p.period);
                if !(euler && measure && cycles && gens) {
                    violations.push(format!("{tag}: restriction to order {} subgroup", h.order()));
                }
            }
        }
    }
    report(8, violations.is_empty(), &format!("{checked} vectors swept, violations {violations:?}"));
}
