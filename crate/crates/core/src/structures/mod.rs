//! Structure registry, bundle type and checkers.

mod bundle;
mod checks;
mod registry;

pub use bundle::{conventional_arity, AlgebraBundle, Branch, Provenance, Ring};
pub use checks::{
    check_def, check_def_set, check_derivation, check_exponent_laws, check_involution, check_overlap_3lie,
    check_overlap_tbp_bp, check_shifted_agreement, check_structure, check_tbp_consequences, check_text, overall_status,
    predicate_def, Mode, Report,
};
pub use registry::{nary_structure, parse_idl, IdentityDef, Predicate, Registry, StructureDef};
