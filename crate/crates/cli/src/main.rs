//! `errbridge`: check, generate, interpret and test `.eb` interface modules.
//!
//! Exit codes: 0 success, 1 semantic failure, 2 I/O failure, 3 trap.

mod check;
mod config;
mod cxx;
mod failure;
mod gen;
mod run;
mod selftest;
mod source;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use errbridge::codegen::GenOptions;

use config::FileConfig;
use failure::Failure;

#[derive(Debug, Parser)]
#[command(
    name = "errbridge",
    version,
    about = "Bridge throwing functions to C++ error handling"
)]
struct Cli {
    /// Print extra detail (compiler commands, mismatches).
    #[arg(long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Validate a module without generating anything.
    Check { input: PathBuf },
    /// Write the support header, module header and registry file.
    Gen {
        input: PathBuf,
        /// Output directory (default: current directory).
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        gen: GenFlags,
    },
    /// Interpret one function call.
    Run {
        input: PathBuf,
        function: String,
        #[arg(allow_negative_numbers = true)]
        args: Vec<String>,
    },
    /// Generate, compare against goldens, run the differential suite and
    /// compile the headers when a compiler is available.
    Test {
        input: PathBuf,
        /// Working directory for generated files (default: a temporary one).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Directory holding golden copies of the generated files.
        #[arg(long)]
        golden: Option<PathBuf>,
        /// C++ compiler for the compile stages (default: c++).
        #[arg(long)]
        compiler: Option<String>,
        /// ERRBRIDGE_MODULE_PATH passed to child processes.
        #[arg(long)]
        module_path: Option<PathBuf>,
        #[command(flatten)]
        gen: GenFlags,
    },
}

#[derive(Debug, Args)]
struct GenFlags {
    /// C++ namespace for module declarations (default: module name).
    #[arg(long)]
    namespace: Option<String>,
    /// Prefix for generated macros (default: EB).
    #[arg(long)]
    macro_prefix: Option<String>,
    /// File name of the support header (default: errbridge_support.h).
    #[arg(long)]
    support_header: Option<String>,
    /// Emit `// line N` comments pointing at the source.
    #[arg(long)]
    line_comments: bool,
}

impl GenFlags {
    fn options(&self, file: &FileConfig) -> GenOptions {
        let defaults = GenOptions::default();
        GenOptions {
            namespace: self.namespace.clone().or_else(|| file.namespace.clone()),
            support_header_name: self
                .support_header
                .clone()
                .or_else(|| file.support_header.clone())
                .unwrap_or(defaults.support_header_name),
            macro_prefix: self
                .macro_prefix
                .clone()
                .or_else(|| file.macro_prefix.clone())
                .unwrap_or(defaults.macro_prefix),
            emit_line_comments: self.line_comments || file.line_comments.unwrap_or(false),
        }
    }
}

fn dispatch(cli: &Cli, file: &FileConfig) -> Result<(), Failure> {
    let verbose = cli.verbose || file.verbose.unwrap_or(false);
    match &cli.command {
        Command::Check { input } => check::run(input),
        Command::Gen { input, out, gen } => {
            let out = out
                .as_deref()
                .or(file.out.as_deref())
                .unwrap_or(Path::new("."));
            gen::run(input, out, &gen.options(file))
        }
        Command::Run {
            input,
            function,
            args,
        } => run::run(input, function, args),
        Command::Test {
            input,
            out,
            golden,
            compiler,
            module_path,
            gen,
        } => {
            let options = gen.options(file);
            selftest::run(&selftest::TestConfig {
                input,
                workdir: out.as_deref().or(file.out.as_deref()),
                golden: golden.as_deref().or(file.golden.as_deref()),
                compiler: compiler.as_deref().or(file.compiler.as_deref()),
                module_path: module_path.as_deref().or(file.module_path.as_deref()),
                options: &options,
                verbose,
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = std::env::current_dir()
        .map_err(|e| Failure::io("current directory", e))
        .and_then(|dir| FileConfig::load_from(&dir))
        .and_then(|file| dispatch(&cli, &file));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("errbridge: {failure}");
            failure.exit_code()
        }
    }
}
