//! Parameter sweeps over the interaction length.

mod config;
mod output;
mod report;
mod run;

pub use config::{
    parse_complex, parse_config, parse_config_with, Axis, AxisSpec, OracleSpec, SweepConfig, WitnessSelector,
    DEFAULT_AXIS_MAX, DEFAULT_MAX_ORDER, DEFAULT_POINTS,
};
pub use output::{csv_header, csv_string, emit_csv, emit_plotscript, format_f64, plot_script, write_csv};
pub use report::{
    compare_report, compare_scaling, ComparisonReport, ScalingRatio, WitnessComparison, SIGN_THRESHOLD,
};
pub use run::{
    columns, run_sweep, Column, Engine, FailurePolicy, SkippedPoint, SweepOptions, SweepOutput, SweepRow,
};
