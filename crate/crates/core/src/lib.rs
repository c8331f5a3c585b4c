//! Parabolic Kazhdan-Lusztig combinatorics for the type `D_n` Weyl group
//! relative to its type `A_{n-1}` parabolic: the Hecke module and its
//! canonical basis, cup and circle diagrams, and decorated tangles.

pub mod circles;
pub mod cups;
pub mod error;
pub mod hecke;
pub mod laurent;
pub mod linalg;
pub mod tangles;
pub mod verify;
pub mod weyl;

pub use circles::{
    brute_force_hom_dim, circle_diagram, dim_endomorphism_algebra, graded_poincare, hom_dim, hom_matrix,
    oriented_basis, poincare_table, CircleColor, ColoredCircleDiagram, OrientedCircleDiagram,
};
pub use cups::{
    cup_diagram, decorated_cup, kl_poly_diagrammatic, orientations_of, Cup, DecoratedCupDiagram, Edge, FullCupDiagram,
    Label, Orientation, Weight,
};
pub use error::{Error, Result};
pub use hecke::{deodhar_product, kl_basis, kl_table, product_along, KLTable, NModElement};
pub use laurent::LaurentPoly;
pub use tangles::{
    act, cell_datum, concat_reduce, generator, representation_matrix, tlhat_basis, CellDatum, DecoratedTangle, Mode,
    Scaled, TLElement, TangleScalarPair,
};
pub use verify::Suite;
pub use weyl::{enumerate_wp, format_word, parse_word, GeneratorIndex, Move, PMSequence, Sign, SymYoungDiagram};
