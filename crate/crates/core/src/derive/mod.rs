//! Weight conditions for indecomposable dimension vectors, their regions, and
//! the per-poset tables.

mod algorithm;
mod region;
pub mod render;
mod table;

pub use algorithm::{derive_conditions, derive_unchecked, DerivationTrace, Step};
pub use region::{interior_point, is_region_empty, regions_equivalent, simplify};
pub use table::{
    check_weight, generate_table, reference_corpus, verify_corpus, verify_tables, Corpus, Report,
    RowCheck, Table, TableCheck, TableRow, Verdict,
};
