//! Pilipović and Gelfand–Shilov spaces: indices, weights and membership tests.

mod classify;
mod fit;
mod hn;
mod lattice;
mod param;
mod profile;
mod stft_fit;
mod weights;

pub use classify::{
    classify, classify_with, criterion_record, parse_criteria, stft_decay_fit, ClassifyOptions, Criterion,
    CriterionRecord, FitSummary, LadderPoint, MembershipVerdict, LADDER, SNAP,
};
pub use fit::{coeff_decay_fit, gs_pointwise_fit, CoeffFit, DecayModel, GrowthFit, GsFit, MIN_SHELLS};
pub use hn::{hn_growth_test, HnRow, HnTable, HN_MAX};
pub use lattice::{lattice_sweep, lattice_table, weighted_sup, write_lattice_csv, Lattice, LatticeNode, LatticeSweep};
pub use param::{default_candidates, parse_space_param, space_compare, Flavor, SpaceIndex, SpaceParam};
pub use profile::{PhaseSample, Profile, TRUST_RATIO};
pub use weights::{
    ln_seq_weight, seq_weight, weight_omega, weight_omega_intro, weight_theta, WeightFamily, WeightSpec,
};
