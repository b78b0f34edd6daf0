//! Reference semantics for the generated `Swift::Error`, `Swift::Optional<T>`
//! and `Swift::Expected<T>`.
//!
//! These types are the oracle the generated C++ is checked against, so they
//! follow the same ownership rules:
//!
//! * [`ErrorModel`] retains on construction and on clone, releases on drop.
//! * [`ExpectedModel::from_error`] adopts one reference; dropping the model
//!   releases it. Queries borrow and never touch refcounts.
//! * Contract violations (`value()` on an error, `get()` on none, a null
//!   error) panic instead of returning garbage.

use std::fmt;
use std::mem;

use crate::runtime::{ErrorHandle, Runtime, TypeId, Value};

/// `Optional<T>`: `some(v)` or `none()`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OptionalModel<T = Value> {
    Some(T),
    None,
}

impl<T: Copy> OptionalModel<T> {
    pub fn some(v: T) -> Self {
        OptionalModel::Some(v)
    }

    pub fn none() -> Self {
        OptionalModel::None
    }

    pub fn is_some(&self) -> bool {
        matches!(self, OptionalModel::Some(_))
    }

    pub fn get(&self) -> T {
        match self {
            OptionalModel::Some(v) => *v,
            OptionalModel::None => panic!("Optional::get() called on none"),
        }
    }
}

/// `Error`: an owning reference to a runtime error box.
pub struct ErrorModel<'rt> {
    rt: &'rt Runtime,
    handle: ErrorHandle,
}

impl<'rt> ErrorModel<'rt> {
    /// Wraps `handle`, taking a new reference of its own.
    pub fn new(rt: &'rt Runtime, handle: ErrorHandle) -> Self {
        rt.retain(handle)
            .unwrap_or_else(|t| panic!("Error constructed from dead handle: {t}"));
        ErrorModel { rt, handle }
    }

    pub fn handle(&self) -> ErrorHandle {
        self.handle
    }

    /// `as<E>()`: the case index when the box is an `E`.
    pub fn cast(&self, target: &TypeId) -> OptionalModel<usize> {
        let r = self
            .rt
            .dyncast(self.handle, target)
            .unwrap_or_else(|t| panic!("{t}"));
        if r.matched {
            OptionalModel::some(r.case_index)
        } else {
            OptionalModel::none()
        }
    }

    pub fn message(&self) -> String {
        self.rt
            .message(self.handle)
            .unwrap_or_else(|t| panic!("{t}"))
    }
}

impl Clone for ErrorModel<'_> {
    fn clone(&self) -> Self {
        ErrorModel::new(self.rt, self.handle)
    }
}

impl Drop for ErrorModel<'_> {
    fn drop(&mut self) {
        if let Err(t) = self.rt.release(self.handle) {
            panic!("Error destructor: {t}");
        }
    }
}

impl fmt::Debug for ErrorModel<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ErrorModel")
            .field("handle", &self.handle)
            .finish()
    }
}

#[derive(Clone, Copy)]
union Slot {
    value: Value,
    error: ErrorHandle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u8)]
enum Discriminator {
    HasValue,
    HasError,
}

/// Storage size of an [`ExpectedModel`], as reported by
/// [`ExpectedModel::storage_footprint`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StorageFootprint {
    /// Bytes of the shared value/error buffer.
    pub buffer: usize,
    /// Bytes of the discriminator.
    pub discriminator: usize,
}

/// `Expected<T>`: a value or an error in one shared buffer, never both.
pub struct ExpectedModel<'rt> {
    rt: &'rt Runtime,
    slot: Slot,
    state: Discriminator,
}

impl<'rt> ExpectedModel<'rt> {
    pub fn from_value(rt: &'rt Runtime, v: Value) -> Self {
        ExpectedModel {
            rt,
            slot: Slot { value: v },
            state: Discriminator::HasValue,
        }
    }

    /// Adopts one reference to `h`.
    pub fn from_error(rt: &'rt Runtime, h: ErrorHandle) -> Self {
        assert!(!h.is_null(), "Expected constructed from a null error");
        assert!(
            rt.refcount(h).is_some(),
            "Expected constructed from dead error handle {h}"
        );
        ExpectedModel {
            rt,
            slot: Slot { error: h },
            state: Discriminator::HasError,
        }
    }

    /// Moves the reference owned by `e` into a new model.
    pub fn from_error_model(e: ErrorModel<'rt>) -> Self {
        let rt = e.rt;
        let h = e.handle;
        mem::forget(e);
        ExpectedModel::from_error(rt, h)
    }

    pub fn has_value(&self) -> bool {
        self.state == Discriminator::HasValue
    }

    pub fn holds_error(&self) -> bool {
        self.state == Discriminator::HasError
    }

    pub fn value(&self) -> Value {
        assert!(self.has_value(), "Expected::value() called on an error");
        // SAFETY: the discriminator says the value member is live.
        unsafe { self.slot.value }
    }

    /// Borrowed: the handle stays owned by this model.
    pub fn error(&self) -> ErrorHandle {
        assert!(self.holds_error(), "Expected::error() called on a value");
        // SAFETY: the discriminator says the error member is live.
        unsafe { self.slot.error }
    }

    pub fn storage_footprint() -> StorageFootprint {
        StorageFootprint {
            buffer: mem::size_of::<Slot>(),
            discriminator: mem::size_of::<Discriminator>(),
        }
    }
}

impl Clone for ExpectedModel<'_> {
    fn clone(&self) -> Self {
        if self.holds_error() {
            let h = self.error();
            self.rt.retain(h).unwrap_or_else(|t| panic!("{t}"));
        }
        ExpectedModel {
            rt: self.rt,
            slot: self.slot,
            state: self.state,
        }
    }
}

impl Drop for ExpectedModel<'_> {
    fn drop(&mut self) {
        if self.holds_error() {
            if let Err(t) = self.rt.release(self.error()) {
                panic!("Expected destructor: {t}");
            }
        }
    }
}

impl fmt::Debug for ExpectedModel<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.has_value() {
            f.debug_tuple("Expected::Value")
                .field(&self.value())
                .finish()
        } else {
            f.debug_tuple("Expected::Error")
                .field(&self.error())
                .finish()
        }
    }
}
