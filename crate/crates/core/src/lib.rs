//! Annular Khovanov homology over F₂ for tangle diagrams in slice form,
//! with the polynomial invariants, Reshetikhin–Turaev state sums and the
//! Alexander-grading dictionary that accompany it.

pub mod check;
pub mod complex;
pub mod diagram;
pub mod dsl;
pub mod error;
pub mod f2;
pub mod floer;
mod graph;
pub mod invariants;
pub mod laurent;
pub mod realization;
pub mod resolution;
pub mod rt;
pub mod spectral;

pub use complex::{annular_part, build_complex, homology_dims, GradedComplexF2, Grading};
pub use diagram::{braid_closure, Closure, Direction, ItemKind, SliceItem, TangleDiagram};
pub use dsl::{parse_diagram, serialize};
pub use error::{DiagramError, Error, ParseError, Result};
pub use invariants::{jones, sj_statesum, to_skein_form, to_zform};
pub use laurent::{Laurent, LaurentQT};
pub use resolution::{resolve, EnhancedState, FlatDiagram, ResolutionIndex, Sign};
pub use spectral::{spectral_pages, PageTable};
