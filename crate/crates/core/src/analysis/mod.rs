//! Regression with Dataset × Condition interactions, developmental
//! trajectories, and SVG line charts.

mod chart;
mod ols;
mod trajectory;

pub use chart::{emit_chart, render_svg, ChartOptions, Series};
pub use ols::{
    ols, ols_interaction, t_cdf, two_sided_p, Observation, OlsFit, OlsOptions, RegressionResult,
};
pub use trajectory::{trajectory, TrajectoryRow, TrajectoryTable, SEMANTIC_FIRST_THRESHOLD};
