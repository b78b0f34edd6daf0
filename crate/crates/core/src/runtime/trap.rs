use crate::idl::ScalarType;

use super::errors::ErrorHandle;

/// A fatal runtime condition. Never converted into a thrown error.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Trap {
    #[error("integer division by zero in `{function}`")]
    DivisionByZero { function: String },
    #[error("integer overflow in `{function}`")]
    IntegerOverflow { function: String },
    #[error("`{function}` expects {expected} argument(s), got {got}")]
    Arity {
        function: String,
        expected: usize,
        got: usize,
    },
    #[error("argument {index} of `{function}` must be {expected}, got {found}")]
    ArgumentType {
        function: String,
        index: usize,
        expected: ScalarType,
        found: ScalarType,
    },
    #[error("`{function}` reached the end of its body without returning")]
    MissingReturn { function: String },
    #[error("no module with id {0}")]
    UnknownModule(u32),
    #[error("module has no function at index {0}")]
    UnknownFunction(usize),
    #[error("error slot must be null on entry (found handle {0})")]
    ErrorSlotInUse(ErrorHandle),
    #[error("invalid value cell: {0}")]
    BadValueCell(String),
    #[error("release of error handle {0} whose refcount is already zero")]
    DoubleRelease(ErrorHandle),
    #[error("error handle {0} is not live")]
    DeadHandle(ErrorHandle),
    #[error("error enum {0} is not registered")]
    UnregisteredType(String),
    #[error("case index {case_index} out of range for {type_name}")]
    CaseOutOfRange {
        type_name: String,
        case_index: usize,
    },
}
