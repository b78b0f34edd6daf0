//! Error-handling interop toolkit: an interface-definition language for
//! throwing modules, a simulated refcounted-error runtime exposed over a C
//! ABI, a reference model of value-or-error storage, and a generator for
//! dual-mode (exceptions / expected) C++ bridging headers.

pub mod codegen;
pub mod differential;
pub mod expected;
pub mod idl;
pub mod lifetime;
pub mod runtime;
