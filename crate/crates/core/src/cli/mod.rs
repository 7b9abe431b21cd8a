//! Command-line front end: problem assembly, solver dispatch and reports.

mod args;
mod run;

pub use args::{BlurArg, Cli, Command, CommonArgs, DeblurArgs, Method, RandomSpec};
pub use run::{
    bench_csv, blur_operator, cmd_bench, cmd_deblur, cmd_solve, cmd_sylvester, configure_threads, history_csv,
    linear_problem, run, run_method, sylvester_problem, ImageReport, Problem, ProblemInfo, RunRecord, THREADS_ENV,
};

/// Exit status for a finished run.
pub fn exit_code(result: &crate::Result<bool>) -> u8 {
    match result {
        Ok(true) => 0,
        Ok(false) => 2,
        Err(_) => 1,
    }
}
