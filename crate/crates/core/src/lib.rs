//! Logic metagraphs for explaining logical reasoning over passages.
//!
//! The crate covers the data model ([`model`]), S5 canonicalization of
//! modal operator strings ([`modal`]), formula equivalence ([`formula`]),
//! the linearized and JSON formats ([`codec`]), evaluation metrics
//! ([`scorer`]), inter-annotator agreement ([`agreement`]), rule-based
//! operator extraction from dependency parses ([`extractor`]) and corpus
//! utilities ([`dataset`]).

pub mod agreement;
pub mod codec;
pub mod dataset;
pub mod error;
pub mod extractor;
pub mod formula;
pub mod modal;
pub mod model;
pub mod scorer;

pub use error::{Error, Result};
pub use modal::{normalize, reduce_to_degree, semantically_equal, CanonicalPrefix};
pub use model::{
    BinaryOp, CanonicalDegree, EdgeType, Formula, LogicMetagraph, LogicalTriple, MetaEdge,
    ModalPrefix, Operand, Passage, Sentence, UnaryOp, VariableSpan,
};
