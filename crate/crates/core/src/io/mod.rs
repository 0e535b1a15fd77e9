//! File formats, configuration parsing, reports, the benchmark suite and
//! random instances.

pub mod bench;
pub mod config;
pub mod format;
pub mod random;
pub mod report;

pub use bench::{bench_tensor, format_table, run_bench, BenchCase, BenchRow, BENCH_CASES};
pub use config::{build_problem, parse_exponents, parse_partition, ConfigError, Exponent, ProblemConfig};
pub use format::{
    parse_tensor, parse_tensor_str, read_tensor_file, tensor_to_string, write_tensor, write_tensor_file, FormatError,
};
pub use random::{random_tensor, RandomError};
pub use report::{check_json, result_json, write_trace_csv, SCHEMA_VERSION, TRACE_HEADER};
