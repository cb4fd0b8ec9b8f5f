//! Numerical covers of the spiral: grid box counts, localized counts for the
//! Assouad spectrum, two-scale covers for intermediate dimensions and the
//! measures used for the matching lower bound.

mod boxdim;
mod count;
mod grid;
mod intermediate;
mod ladder;
mod local;
mod mass;
mod windows;

pub use boxdim::{box_ladder, estimate_box_dimension, spiral_box_count};
pub use count::{CoverOptions, Window, WindowPolicy, WindowShape};
pub use grid::{grid_box_count, grid_box_count_on, Grid};
pub use intermediate::{
    cost_exponent, cutoff, default_intermediate_ladder, estimate_intermediate_dimension, two_scale_cover,
    two_scale_cover_with, IntermediateEstimate, TurnLengthTable, TwoScaleCover, BISECTION_TOL, MAX_CUTOFF,
};
pub use ladder::{geometric_ladder, CoverLadder, LadderEntry};
pub use local::{estimate_assouad_spectrum, local_cover_count, local_cover_count_at, LocalCover};
pub use mass::{
    mass_distribution_check, mass_distribution_ladder, MassCheckReport, MassDistribution, MassLadderReport,
    SquareWindow, MASS_SLOPE_TOL,
};
pub use windows::{vertical_separation_index, window_indices, WindowIndices};
