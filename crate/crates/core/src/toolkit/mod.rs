//! Documents, certificates, generators and DOT export behind the CLI.

mod certificates;
mod documents;
mod dot;
mod generate;

pub use certificates::{reverify, Certificate, CertificateDocument, Provenance};
pub use documents::{
    parse_document, to_canonical_json, CaseDocument, ConflictDocument, FamiliesDocument,
    GraphDocument, InstanceDocument, Terminals, Versioned, SCHEMA_VERSION,
};
pub use dot::export_dot;
pub use generate::{
    gen_complete, gen_planted_bramble_instance, gen_random_digraph, STRENGTH_ROUNDS,
};
