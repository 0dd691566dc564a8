//! Target sets: concrete interval sets, parametric systems, residue classes and classification.

pub mod catalog;
mod classify;
mod interval;
mod linear;
mod ratio;
mod residue;
mod system;

pub use classify::{
    classify, hard_pair, isolation_witness, unbounded_gap_witness, Classification, Evidence, GapWitness,
    IsolationCandidate, IsolationWitness, Side, TractableBranch, VassGapCandidate,
};
pub use interval::{
    canonical_decomposition, density_at, density_plus_at, CanonicalDecomposition, ConcreteIntervalSet, Interval,
    IntervalList, IntervalType,
};
pub use linear::{column_rank, feasible_nonneg, solve_unique};
pub use ratio::{
    detect_omega_constellation, harbor_chains, harbor_chains_concrete, ratio_boundedness, ratio_matrix, HarborChain, OmegaConstellation,
    Ratio, RatioEntry,
};
pub use residue::{residue_class, residue_split_set, unwrap_modulo_automaton, ResidueKey};
pub use system::{branch, form, params, AffineForm, Bound, Branch, LinearIntervalSystem, Slot};
