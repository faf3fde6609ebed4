//! Global correlation functionals on discrete joint distributions.
//!
//! The crate computes total correlation, n-partite information, mutual and
//! conditional mutual information, the sufficiency of deterministic
//! statistics, and maximum-entropy updates of a prior under expectation
//! constraints. Everything works on finite label spaces in nats, and all
//! values are immutable and `Send + Sync`.
//!
//! ```
//! use globcorr::{Axis, JointDistribution, Partition, info};
//!
//! let axes = vec![Axis::indexed("x", 2).unwrap(), Axis::indexed("y", 2).unwrap()];
//! let dist = JointDistribution::new(axes, vec![0.4, 0.1, 0.1, 0.4]).unwrap();
//! let tc = info::total_correlation(&dist);
//! let mi = info::npartite_information(&dist, &Partition::parse("0|1", 2).unwrap()).unwrap();
//! assert_eq!(tc, mi);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod combinatorics;
pub mod dist;
pub mod error;
pub mod exec;
pub mod info;
pub mod io;
pub mod maxent;
pub mod partition;
pub mod random;
pub mod statistic;
pub mod sufficiency;
mod tensor;
pub mod verify;
pub mod watanabe;

pub use dist::{Axis, JointDistribution};
pub use error::{Error, Result};
pub use exec::Execution;
pub use maxent::{MaxEntResult, MomentConstraint, SolverOptions};
pub use partition::Partition;
pub use statistic::Statistic;
pub use watanabe::BranchTree;
