//! Checks that run at desk scale: empirical distributions and Monte Carlo
//! tests, nonatomic splitting, the exhaustive search behind the
//! homogeneity contradiction on `[0,1]`, and the rectangle-approximation
//! oracle for joint measurability.

mod empirical;
mod fg;
mod nonatomic;
mod rectangles;
mod thmd;

pub use empirical::{
    empirical_dist, gc_test, hoeffding_bound, homogeneity_mc, homogeneity_row,
    EmpiricalDistribution, GcReport, HomogeneityTable, RowDeviation, SampleMatrix,
};
pub use fg::{fg_impossibility, fg_search, FgReport, FG_MAX_N};
pub use nonatomic::{nonatomic_split, Split};
pub use rectangles::{
    min_rectangle_error, rectangle_error, Rectangle, RectangleFamily, RectangleOptimum,
    EXHAUSTIVE_MAX_RECTS, EXHAUSTIVE_MAX_SIDE,
};
pub use thmd::{overlap_check, thmd_mechanism_check, MechanismIdentity, OverlapWitness};
