//! Instance files, generators and experiment runs.

pub mod experiment;
pub mod generate;
pub mod io;

pub use experiment::{
    run_experiment, run_on, Algorithm, ExperimentConfig, ExperimentError, InstanceSource, RunResult,
};
pub use generate::{generate_instance, Distribution, GenerateError, InstanceSpec};
pub use io::{
    format_points, parse_partition, parse_points, read_partition, read_points, write_json,
    write_points, IoError,
};
