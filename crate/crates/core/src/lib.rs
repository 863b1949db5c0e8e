//! Compound nodal admittance matrices of unbalanced polyphase grids.
//!
//! A grid is a directed graph of polyphase nodes joined by branches with
//! `|P|×|P|` compound impedances, plus one compound shunt admittance per
//! node. From it the crate assembles the nodal admittance matrix `Y`,
//! predicts and measures the rank of `Y` and of its diagonal subblocks,
//! Kron-reduces zero-injection nodes and builds hybrid parameter matrices
//! for arbitrary node partitions.
//!
//! ```
//! use polygrid::admittance::{assemble, rank_report, GridBuilder};
//! use polygrid::linalg::{Complex64, ComplexMatrix};
//!
//! let mut b = GridBuilder::new(1);
//! let a = b.add_node("a")?;
//! let c = b.add_node("b")?;
//! b.add_branch(a, c, ComplexMatrix::scaled_identity(1, Complex64::new(1.0, 1.0)))?;
//! let model = b.build()?;
//!
//! let y = assemble(&model)?;
//! assert_eq!(y.node_count(), 2);
//! let report = rank_report(&model)?;
//! assert_eq!((report.predicted, report.measured), (1, 1));
//! # Ok::<(), polygrid::Error>(())
//! ```

pub mod admittance;
pub mod cli;
pub mod error;
pub mod graph;
pub mod hybrid;
pub mod linalg;
pub mod oracle;
pub mod params;
pub mod random;
pub mod reduction;

pub use admittance::{BlockMatrix, GridBuilder, GridModel, NodalVector};
pub use error::{Error, Result};
pub use graph::{BranchGraph, NodeId};
pub use linalg::{Complex64, ComplexMatrix};
