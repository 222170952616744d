//! Non-normal equisymmetric strata: the detector, the golden catalog, the
//! genus scans and the infinite families.

pub mod catalog;
pub mod detect;
pub mod family;
pub mod naming;
pub mod scan;

pub use catalog::{verify_catalog, Catalog, CatalogEntry, CatalogReport, Row};
pub use detect::{detect, StratumDescriptor, StratumReport, Verdict, WitnessPair};
pub use family::{family_check, Family, FamilyReport};
pub use scan::{scan_genus, ScanReport, StratumSummary};
