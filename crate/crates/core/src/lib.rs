//! Faulty Trotterized quantum channels, the statistical distances between
//! them and the ideal evolution, and the optimum Trotter number that balances
//! splitting error against gate noise.

pub mod linalg;
pub mod sdp;
pub mod channels;
pub mod exec;
pub mod metrics;
pub mod hamiltonians;
pub mod optimizer;
pub mod experiments;
