//! Spanning lines in k-fuzz graphs, line augmentation and the gradient bound.

mod augment;
mod line;
mod search;

pub use augment::{
    augment_with_line, augmented_ball, verify_gradient_bound, AugmentationReport, AugmentedOracle, GradientBound,
    GradientBoundHarness,
};
pub use line::{
    builtin_spanning_line, check_finite_line, check_line_window, InfiniteLine, LineShape, LineViolation, SpanningLine,
};
pub use search::{
    find_spanning_line, fuzz_adjacency, SearchMethod, SearchOptions, SearchOutcome, EXACT_LIMIT, EXACT_MAX,
};
