//! Oracles, generators, file format and batch runs.

pub mod bench;
pub mod generate;
pub mod io;
pub mod oracle;

pub use bench::{bench, BenchOptions, BenchRecord, BenchTable};
pub use generate::{
    cycle, default_seed, generate, inject_forced, named, random_cubic, random_four_cycles, GeneratorSpec, Kind, Named, WeightSpec,
};
pub use io::{parse, read_instance, serialize, write_instance};
pub use oracle::{exhaustive_forced, held_karp};
