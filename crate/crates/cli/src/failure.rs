use std::fmt;
use std::process::ExitCode;

/// Why a command stopped, mapped onto the process exit code.
#[derive(Debug)]
pub enum Failure {
    /// Invalid input, failed check or failed test stage: exit 1.
    Semantic(String),
    /// Could not read or write something: exit 2.
    Io(String),
    /// The interpreter trapped: exit 3.
    Trap(String),
}

impl Failure {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            Failure::Semantic(_) => 1,
            Failure::Io(_) => 2,
            Failure::Trap(_) => 3,
        })
    }

    pub fn io(context: impl fmt::Display, err: std::io::Error) -> Self {
        Failure::Io(format!("{context}: {err}"))
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Semantic(m) | Failure::Io(m) => f.write_str(m),
            Failure::Trap(m) => write!(f, "trap: {m}"),
        }
    }
}
