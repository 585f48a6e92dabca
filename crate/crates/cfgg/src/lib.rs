//! Compilation of crossing-free geometric graphs on a planar point set
//! into a combination DAG, with counting, enumeration, uniform sampling,
//! and linear optimization (including exact enclosed-area extremization)
//! on the compiled graph.
//!
//! Four families are supported: all crossing-free graphs (`cf`),
//! crossing-free spanning trees (`st`), crossing-free spanning cycles
//! (`sc`), and counter-clockwise spanning cycles over directed segments
//! (`dsc`, the carrier for area optimization).

pub mod cgraph;
pub mod compilers;
pub mod gen;
pub mod geometry;
pub mod oracle;
pub mod selftest;
pub mod states;

pub use cgraph::{BigCount, CombinationGraph, QueryError, Sense, Stats};
pub use compilers::{compile, Compilation, Compiled, CompileError};
pub use geometry::{DirSeg, GeometryError, PointSet, Segment};
pub use states::{Family, Signature};
