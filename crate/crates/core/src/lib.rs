//! Exact computations in the Macías topology over concrete integral domains.
//!
//! The Macías space of a domain `R` is `R \ {0}` with the topology generated
//! by the basic opens `sigma_k = { s : <k> + <s> = R }`. Over a PID,
//! membership depends only on prime supports, singleton closures are
//! intersections of prime ideals, and two such spaces are homeomorphic
//! exactly when their unit groups and prime sets have equal cardinality.

pub mod cli;
pub mod enumeration;
pub mod error;
pub mod homeo;
pub mod invariants;
pub mod oracle;
pub mod rings;
pub mod topology;

pub use enumeration::{enumerate_elements, height, PrimeClass, Window};
pub use error::{Error, Result};
pub use rings::{Cardinal, Element, RingId};
pub use topology::{ClosureDescriptor, Support};
