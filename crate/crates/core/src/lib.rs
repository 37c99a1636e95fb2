//! Overhead-free computation: simulators for tape-bounded machine models,
//! compilers between them, and the context-free membership construction.

pub mod cfl;
pub mod editing;
pub mod equiv;
pub mod error;
pub mod format;
pub mod machine;
pub mod of;
pub mod report;
pub mod restart;
pub mod symbol;
pub mod twostack;
pub mod xlate;

pub use error::{Error, Result};
pub use machine::{
    enumerate_language, run, Acceptor, Branch, Budget, Language, Machine, Mode, Prune, PruneStats,
    RunResult, TraceStep, Verdict, Witness,
};
pub use report::{ValidationReport, Violation, ViolationKind};
pub use symbol::{Alphabet, Cell, Move, Sym};
pub use equiv::{check_equivalence, EquivReport, EquivVerdict};
pub use format::{parse_machine_file, print_machine, AnyMachine, Model};
