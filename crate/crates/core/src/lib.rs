//! Exact combinatorial engine for 1-standard pairs.
//!
//! A 1-standard pair is modelled through its boundary zigzag, an ordered chain of
//! rational curves recorded by self-intersection numbers. The crate covers:
//!
//! * [`zigzag`]: types, markings and the standard / almost-standard predicates;
//! * [`dual_graph`]: weighted dual graphs with blow-ups and blow-downs, used as an oracle;
//! * [`moves`]: elementary links I–IV, reversions and fibered modifications;
//! * [`word`]: words of reversions and fibered modifications and their minimal form;
//! * [`fibration_graph`]: the fibration graph, cycle rank and a graph-of-groups scaffold;
//! * [`plane`], [`uvp`], [`family23`]: three explicit surface families over exact fields.
//!
//! Exact arithmetic lives in [`field`] and [`poly`]. No floating point is used anywhere.

pub mod dual_graph;
pub mod error;
pub mod family23;
pub mod fibration_graph;
pub mod field;
pub mod moves;
pub mod plane;
pub mod poly;
pub mod uvp;
pub mod word;
pub mod zigzag;

pub use dual_graph::{CurveNode, DualGraph, NodeId};
pub use error::{Error, Result};
pub use family23::{Family23, Pair23};
pub use fibration_graph::{FibrationGraph, GenerationVerdict};
pub use field::{Field, FieldSpec, PrimeField, Rationals};
pub use moves::{ElementaryLink, Move};
pub use plane::PolyAut;
pub use poly::MPoly;
pub use uvp::{SurfaceUvp, UvpGen};
pub use word::MoveWord;
pub use zigzag::{MarkedZigzag, ZigzagType};
