//! Tilde and hat grid homology of MOY graphs presented by graph grid
//! diagrams.

pub mod combinators;
pub mod complex;
pub mod diagram;
pub mod fixtures;
pub mod gf2;
pub mod homology;
pub mod moves;
pub mod oracle;
pub mod state;

pub use complex::{BigradedComplex, Bigrading, ComplexError};
pub use diagram::{DiagramError, DiagramFile, GridDiagram, Marking, Pos, WeightedDiagram};
pub use homology::{hat_homology, tilde_homology, HomologyError, LaurentPoly, PoincarePolynomial};
pub use state::State;
