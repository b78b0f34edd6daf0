//! Refcounted error boxes behind opaque 64-bit handles.
//!
//! Handles index a runtime-owned table and are never reused, so a stale
//! handle is always detected instead of aliasing a newer box.

use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicU32, AtomicU64, Ordering};
use std::sync::{Arc, RwLock};

use super::trap::Trap;
use super::type_id::TypeId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
#[repr(transparent)]
pub struct ErrorHandle(pub u64);

impl ErrorHandle {
    pub const NULL: ErrorHandle = ErrorHandle(0);

    pub fn is_null(&self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for ErrorHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Metadata for one error enum: its identity and case names in order.
#[derive(Debug)]
pub struct EnumInfo {
    pub type_id: TypeId,
    pub cases: Vec<String>,
}

#[derive(Debug)]
pub struct ErrorBox {
    refcount: AtomicU32,
    info: Arc<EnumInfo>,
    case_index: usize,
}

impl ErrorBox {
    pub fn type_id(&self) -> &TypeId {
        &self.info.type_id
    }

    pub fn case_index(&self) -> usize {
        self.case_index
    }

    pub fn message(&self) -> &str {
        &self.info.cases[self.case_index]
    }

    pub fn refcount(&self) -> u32 {
        self.refcount.load(Ordering::Acquire)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CastResult {
    pub matched: bool,
    pub case_index: usize,
}

#[derive(Debug)]
pub(crate) struct ErrorTable {
    boxes: RwLock<HashMap<u64, Arc<ErrorBox>>>,
    next: AtomicU64,
    live: AtomicU64,
    allocated: AtomicU64,
}

impl Default for ErrorTable {
    fn default() -> Self {
        ErrorTable {
            boxes: RwLock::default(),
            next: AtomicU64::new(1),
            live: AtomicU64::new(0),
            allocated: AtomicU64::new(0),
        }
    }
}

impl ErrorTable {
    pub fn create(&self, info: Arc<EnumInfo>, case_index: usize) -> Result<ErrorHandle, Trap> {
        if case_index >= info.cases.len() {
            return Err(Trap::CaseOutOfRange {
                type_name: info.type_id.to_string(),
                case_index,
            });
        }
        let id = self.next.fetch_add(1, Ordering::Relaxed);
        let boxed = Arc::new(ErrorBox {
            refcount: AtomicU32::new(1),
            info,
            case_index,
        });
        self.boxes.write().unwrap().insert(id, boxed);
        self.live.fetch_add(1, Ordering::AcqRel);
        self.allocated.fetch_add(1, Ordering::Relaxed);
        Ok(ErrorHandle(id))
    }

    pub fn get(&self, h: ErrorHandle) -> Result<Arc<ErrorBox>, Trap> {
        self.boxes
            .read()
            .unwrap()
            .get(&h.0)
            .cloned()
            .ok_or_else(|| self.dead(h))
    }

    fn dead(&self, h: ErrorHandle) -> Trap {
        if h.0 != 0 && h.0 < self.next.load(Ordering::Relaxed) {
            Trap::DoubleRelease(h)
        } else {
            Trap::DeadHandle(h)
        }
    }

    pub fn retain(&self, h: ErrorHandle) -> Result<ErrorHandle, Trap> {
        if h.is_null() {
            return Ok(h);
        }
        let b = self.get(h).map_err(|_| Trap::DeadHandle(h))?;
        // Resurrecting a box that is mid-destruction would be a use after free.
        b.refcount
            .fetch_update(Ordering::AcqRel, Ordering::Acquire, |rc| {
                (rc > 0).then(|| rc + 1)
            })
            .map_err(|_| Trap::DeadHandle(h))?;
        Ok(h)
    }

    pub fn release(&self, h: ErrorHandle) -> Result<(), Trap> {
        if h.is_null() {
            return Ok(());
        }
        let b = self.get(h)?;
        let prev = b
            .refcount
            .fetch_update(Ordering::AcqRel, Ordering::Acquire, |rc| rc.checked_sub(1))
            .map_err(|_| Trap::DoubleRelease(h))?;
        if prev == 1 {
            self.boxes.write().unwrap().remove(&h.0);
            self.live.fetch_sub(1, Ordering::AcqRel);
        }
        Ok(())
    }

    pub fn live(&self) -> u64 {
        self.live.load(Ordering::Acquire)
    }

    pub fn allocated(&self) -> u64 {
        self.allocated.load(Ordering::Relaxed)
    }
}
