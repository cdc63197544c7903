//! Extractable work as an entanglement witness for two- and three-qubit
//! states: density matrices, local projective measurements, work
//! functionals, optimizers over measurement directions, Werner-type
//! thresholds and a shot-level protocol simulator.

pub mod bipartite;
pub mod bloch;
pub mod correlation;
pub mod entropy;
pub mod error;
pub mod measure;
pub mod mermin;
pub mod optimize;
pub mod protocol;
pub mod quadrature;
pub mod state;
pub mod werner;
pub mod work;

pub use bipartite::{xi_bipartite, xi_capital, xi_capital_sphere, xi_capital_tri, GreatCircleAverage};
pub use bloch::{embed, projector, Direction, Projector};
pub use entropy::{binary_entropy, EntropyEstimator};
pub use error::{Error, Result};
pub use measure::{conditional_state, joint_prob};
pub use mermin::{max_mermin, mermin_expectation, mermin_operator, MerminOptimum, MerminSettings};
pub use optimize::{classify_state, optimize_sphere, Classification, Mode, OptimizerConfig, SphereOptimum, StateClass};
pub use protocol::{simulate_bipartite, simulate_tripartite, ProtocolEstimate, Simulation, SimulationConfig};
pub use quadrature::{QuadratureConfig, QuadratureEstimate};
pub use state::{dm_from_pure, ghz_state, mix, product_state, singlet_state, w_state, DensityMatrix, PureState};
pub use werner::{
    find_threshold, format_sig9, table1, werner_state, Criterion, Table, TableConfig, TableRow,
    ThresholdConfig, ThresholdResult, WernerFamily,
};
pub use work::{coupled_frame_work, work_W, work_W_sphere, work_zu, Site, TripartiteWork, WorkReport};
