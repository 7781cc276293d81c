//! Certified lower and upper bounds on the Shannon OR-capacity of graphs and
//! of categorical products of graph pairs.

pub mod bitset;
pub mod bounds;
pub mod field;
pub mod graph;
pub mod io;
pub mod iso;
pub mod paley;
pub mod props;
pub mod search;
pub mod theta;

pub use bitset::BitSet;
pub use graph::{Graph, GraphError};
