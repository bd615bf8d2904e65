//! Exact computation in the Thompson-like groups `V_n(H)`.
//!
//! Elements are tree pairs with leaf labels in a subgroup `H ≤ Sym(n)`.
//! They are turned into strand diagrams, reduced by local graph rewriting,
//! and closed into annular diagrams whose normal forms decide conjugacy.

pub mod error;
pub mod perm;
pub mod tree;
pub mod element;
pub mod io;
pub mod graph;
mod canon;
pub mod diagram;
pub mod rewrite;
pub mod closed;
pub mod census;
pub mod sample;

pub use error::{Error, Result};
pub use perm::{Permutation, SubgroupH};
pub use tree::{Tree, Word};
pub use element::{BranchMap, TreePairElement};
pub use graph::{FreeLoop, Graph, VertexKind};
pub use diagram::{build_diagram, cut_diagram, diagram_equal, StrandDiagram};
pub use rewrite::{Redex, Rule};
pub use closed::{are_conjugate, closed_equal, conjugating_equivalent, is_torsion, ClosedDiagram};
