//! Markdown rendering of the reports.

use std::fmt::Write;

use equisym_core::equivalence::ClassRecord;
use equisym_core::restriction::{BranchRecord, RestrictionReport};
use equisym_core::ske::VectorRecord;
use equisym_core::strata::scan::ActionRef;
use equisym_core::strata::{CatalogReport, FamilyReport, ScanReport, StratumDescriptor, StratumReport};
use equisym_core::Signature;

fn table(out: &mut String, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) {
    let _ = writeln!(out, "| {} |", header.join(" | "));
    let _ = writeln!(out, "|{}", "---|".repeat(header.len()));
    for r in rows {
        let cells: Vec<String> = r.into_iter().map(|c| c.replace('|', "\\|")).collect();
        let _ = writeln!(out, "| {} |", cells.join(" | "));
    }
}

fn vector(v: &VectorRecord) -> String {
    let mut parts = v.handles.clone();
    parts.extend(v.elliptic.iter().cloned());
    format!("[{}]", parts.join(", "))
}

fn action(a: &ActionRef) -> String {
    format!("{} {} {} ({})", a.case, a.class_label, a.group, a.signature)
}

fn descriptor(d: &StratumDescriptor) -> String {
    let label = d.class_label.as_deref().map(|l| format!(" {l}")).unwrap_or_default();
    format!("{}{} ({}), genus {}, dim {}", d.group, label, d.signature, d.genus, d.dimension)
}

fn bullets(out: &mut String, title: &str, items: &[String]) {
    if items.is_empty() {
        return;
    }
    let _ = writeln!(out, "\n{title}:\n");
    for i in items {
        let _ = writeln!(out, "- {i}");
    }
}

pub fn enumerate(group: &str, sig: &Signature, genus: u32, vectors: &[VectorRecord]) -> String {
    let mut out = format!("# Generating vectors of {group} with signature ({sig})\n\nSurface genus {genus}, {} vectors.\n\n", vectors.len());
    table(&mut out, &["#", "vector"], vectors.iter().enumerate().map(|(i, v)| vec![(i + 1).to_string(), vector(v)]));
    out
}

pub fn classes(group: &str, sig: &Signature, classes: &[ClassRecord]) -> String {
    let mut out = format!("# Topological classes of {group} with signature ({sig})\n\n");
    table(
        &mut out,
        &["class", "representative", "orbit size"],
        classes.iter().map(|c| vec![c.class_id.clone(), format!("[{}]", c.representative.join(", ")), c.orbit_size.to_string()]),
    );
    out
}

fn branch_table(out: &mut String, data: &[BranchRecord]) {
    table(
        out,
        &["source", "cycle length", "period", "generator"],
        data.iter().map(|b| vec![b.source.to_string(), b.cycle_len.to_string(), b.period.to_string(), b.generator.clone()]),
    );
}

pub fn restriction(r: &RestrictionReport) -> String {
    let mut out = format!(
        "# Restriction to <{}>\n\nAmbient {} acting by {} on genus {}.\n\nSubgroup order {}, index {}, induced signature ({}).\n\n",
        r.subgroup.join(", "),
        r.group,
        vector(&r.vector),
        r.surface_genus,
        r.subgroup_order,
        r.index,
        r.induced_signature
    );
    branch_table(&mut out, &r.branch_data);
    let state = if r.determined { "determined" } else { "not determined" };
    let _ = writeln!(out, "\nInduced class {state}: {}", r.induced_classes.join(", "));
    out
}

fn stratum_report(out: &mut String, r: &StratumReport) {
    let induced = r.induced.as_ref().map(descriptor).unwrap_or_else(|| "none".into());
    let _ = writeln!(out, "## {}\n\nInduced stratum: {induced}\n\nVerdict: {:?}\n", descriptor(&r.ambient), r.verdict);
    table(
        out,
        &["subgroup", "order", "conjugates", "induced signature", "classes", "determined"],
        r.subgroups.iter().map(|s| {
            vec![
                format!("<{}>", s.generators.join(", ")),
                s.order.to_string(),
                s.conjugates.to_string(),
                s.induced_signature.to_string(),
                s.induced_classes.join(", "),
                s.determined.to_string(),
            ]
        }),
    );
    let pairs = |ps: &[equisym_core::strata::WitnessPair]| -> Vec<String> {
        ps.iter()
            .map(|p| format!("<{}> and <{}> share class {}", p.first.generators.join(", "), p.second.generators.join(", "), p.shared_class))
            .collect()
    };
    bullets(out, "Witness pairs", &pairs(&r.witness_pairs));
    bullets(out, "Candidate pairs", &pairs(&r.candidate_pairs));
    bullets(out, "Caveats", &r.caveats);
    out.push('\n');
}

pub fn detect(v: &VectorRecord, reports: &[StratumReport]) -> String {
    let mut out = format!("# Detection for {} acting by {}\n\n", v.group, vector(v));
    if reports.is_empty() {
        out.push_str("No isomorphic non-conjugate subgroup pairs.\n");
    }
    for r in reports {
        stratum_report(&mut out, r);
    }
    out
}

pub fn scan(r: &ScanReport) -> String {
    let mut out = format!("# Genus {} scan\n\n", r.genus);
    table(
        &mut out,
        &["stratum", "dim", "flagged", "witness ambients", "closure ambients"],
        r.strata.iter().map(|s| {
            vec![
                action(&s.stratum),
                s.dimension.to_string(),
                s.flagged.to_string(),
                s.witness_ambients.iter().map(action).collect::<Vec<_>>().join("; "),
                s.closure_ambients.iter().map(action).collect::<Vec<_>>().join("; "),
            ]
        }),
    );
    let ext: Vec<String> = r.extended.iter().map(|e| format!("{} extends to {}", action(&e.action), action(&e.extends_to))).collect();
    bullets(&mut out, "Extended classes", &ext);
    bullets(&mut out, "Caveats", &r.caveats);
    out
}

pub fn family(r: &FamilyReport) -> String {
    let params: Vec<String> = r.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
    let mut out = format!(
        "# {} ({})\n\nAmbient {} with signature ({}), genus {}.\n\nPair <{}> and <{}>, induced ({}) and ({}).\n\n",
        r.family,
        params.join(", "),
        r.ambient_group,
        r.ambient_signature,
        r.expected.genus,
        r.pair.first.join(", "),
        r.pair.second.join(", "),
        r.pair.first_signature,
        r.pair.second_signature,
    );
    table(
        &mut out,
        &["check", "passed", "detail"],
        r.checks.iter().map(|c| vec![c.name.clone(), c.passed.to_string(), c.detail.clone()]),
    );
    let _ = writeln!(out, "\nPassed: {}", r.passed);
    out
}

pub fn catalog(r: &CatalogReport) -> String {
    let title = r.genus.map(|g| format!("genus {g}")).unwrap_or_else(|| "all genera".into());
    let mut out = format!("# Catalog check, {title}\n\n");
    table(
        &mut out,
        &["genus", "case", "group", "signature", "id", "vectors", "classes", "passed", "failures"],
        r.rows.iter().map(|c| {
            vec![
                c.genus.to_string(),
                c.case.to_string(),
                c.group.clone(),
                c.signature.to_string(),
                format!("({},{})", c.claimed_id.0, c.claimed_id.1),
                c.vectors.to_string(),
                c.classes.to_string(),
                c.passed.to_string(),
                c.failures.join("; "),
            ]
        }),
    );
    let _ = writeln!(out, "\nPassed: {}", r.passed);
    out
}
