//! Root lattices inside E8 and the lattice side of nodal-curve
//! classification on Okamoto-Painleve pairs.

mod closure;
mod diagram;
mod e8;
mod fibers;
mod gram;
mod picard;
mod tables;
mod types;

use thiserror::Error;

pub use closure::{closure_of_rank, in_closure, subsystem_closure};
pub use diagram::{DynkinDiagram, Shape};
pub use e8::{e8_roots, find_embedding, inner, is_positive, simple_roots_of, Root, RootEmbedding};
pub use fibers::{
    complement_types, euler_min, fibered_configs, kodaira_realizations, moduli_dim,
    oguiso_shioda_exclusions, oguiso_shioda_feasible, Feasibility, KodairaFiber, EULER_BOUND,
};
pub use gram::{classify_gram, determinant, Convention, GramMatrix};
pub use picard::{
    integer_kernel, intersect, op_pair_lattice_check, short_vectors, OpPairReport, PicardConfig,
    SectionReport, PIC_RANK,
};
pub use tables::{table2, table3, table4, RowKey, Table, TableRow};
pub use types::{AffineType, Family, RootSystemType, SimpleType};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("invalid type: {0}")]
    InvalidType(String),
    #[error("cannot parse type: {0}")]
    Parse(String),
    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),
    #[error("invalid Gram matrix: {0}")]
    InvalidGram(String),
    #[error("not simply laced: {0}")]
    NotSimplyLaced(String),
    #[error("not an ADE diagram: {0}")]
    NotADE(String),
    #[error("{0} does not embed in E8")]
    NotEmbeddable(String),
    #[error("invalid embedding: {0}")]
    InvalidEmbedding(String),
    #[error("unsupported affine type {0}")]
    UnsupportedType(String),
    #[error("malformed configuration: {0}")]
    MalformedConfig(String),
    #[error("r + s out of range for r = {0}, s = {1}")]
    OutOfRange(i64, i64),
}
