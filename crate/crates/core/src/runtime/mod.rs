//! The simulated foreign runtime.
//!
//! A [`Runtime`] owns loaded modules, the error-enum type registry, and the
//! table of live error boxes. The C ABI in [`ffi`] forwards to one
//! process-wide instance ([`Runtime::global`]); tests can create isolated
//! instances.

pub mod errors;
pub mod ffi;
pub mod interp;
pub mod trap;
pub mod type_id;
pub mod value;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use crate::idl::{deserialize_module, DeserializeError, ValidatedModule};

pub use errors::{CastResult, EnumInfo, ErrorBox, ErrorHandle};
pub use interp::{eval_function, Outcome, ThrownError};
pub use trap::Trap;
pub use type_id::{fnv1a64, TypeId};
pub use value::{EbValue, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModuleId(pub u32);

impl fmt::Display for ModuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error(transparent)]
    Malformed(#[from] DeserializeError),
    #[error("a different module named `{0}` is already loaded")]
    Conflict(String),
}

/// Status of a dispatcher call that did not trap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InvokeStatus {
    Returned = 0,
    Threw = 1,
}

#[derive(Debug)]
struct LoadedModule {
    module: Arc<ValidatedModule>,
    enums: HashMap<String, Arc<EnumInfo>>,
}

#[derive(Debug, Default)]
struct Registry {
    modules: Vec<LoadedModule>,
    by_name: HashMap<String, ModuleId>,
    types: HashMap<u64, Vec<Arc<EnumInfo>>>,
}

#[derive(Debug, Default)]
pub struct Runtime {
    registry: RwLock<Registry>,
    errors: errors::ErrorTable,
}

impl Runtime {
    pub fn new() -> Self {
        Runtime::default()
    }

    /// The instance behind the exported C symbols.
    pub fn global() -> &'static Runtime {
        static GLOBAL: OnceLock<Runtime> = OnceLock::new();
        GLOBAL.get_or_init(Runtime::new)
    }

    /// Loads a canonical serialized module. Loading a structurally identical
    /// module again returns the existing id.
    pub fn load_module(&self, bytes: &[u8]) -> Result<ModuleId, LoadError> {
        let module = deserialize_module(bytes)?;
        self.load_validated(module)
    }

    pub fn load_validated(&self, module: ValidatedModule) -> Result<ModuleId, LoadError> {
        let mut reg = self.registry.write().unwrap();
        let name = module.name.name.clone();
        if let Some(&id) = reg.by_name.get(&name) {
            return if *reg.modules[id.0 as usize].module == module {
                Ok(id)
            } else {
                Err(LoadError::Conflict(name))
            };
        }
        let mut enums = HashMap::new();
        for e in &module.enums {
            let info = Arc::new(EnumInfo {
                type_id: TypeId::new(&name, &e.name.name),
                cases: e.cases.iter().map(|c| c.name.clone()).collect(),
            });
            reg.types
                .entry(info.type_id.hash())
                .or_default()
                .push(info.clone());
            enums.insert(e.name.name.clone(), info);
        }
        let id = ModuleId(reg.modules.len() as u32);
        reg.modules.push(LoadedModule {
            module: Arc::new(module),
            enums,
        });
        reg.by_name.insert(name, id);
        Ok(id)
    }

    pub fn module(&self, id: ModuleId) -> Option<Arc<ValidatedModule>> {
        let reg = self.registry.read().unwrap();
        reg.modules.get(id.0 as usize).map(|m| m.module.clone())
    }

    pub fn module_id(&self, name: &str) -> Option<ModuleId> {
        self.registry.read().unwrap().by_name.get(name).copied()
    }

    /// Looks up a registered enum, resolving hash collisions by full name.
    pub fn lookup_type(&self, target: &TypeId) -> Option<Arc<EnumInfo>> {
        let reg = self.registry.read().unwrap();
        reg.types
            .get(&target.hash())?
            .iter()
            .find(|info| info.type_id == *target)
            .cloned()
    }

    /// The uniform dispatcher. On [`InvokeStatus::Threw`] `out_error` holds
    /// a fresh handle with refcount 1 that the caller must release;
    /// `out_ret` is left untouched.
    pub fn invoke(
        &self,
        module_id: ModuleId,
        fn_index: usize,
        args: &[Value],
        out_error: &mut ErrorHandle,
        out_ret: &mut Value,
    ) -> Result<InvokeStatus, Trap> {
        if !out_error.is_null() {
            return Err(Trap::ErrorSlotInUse(*out_error));
        }
        let (module, enums) = {
            let reg = self.registry.read().unwrap();
            let loaded = reg
                .modules
                .get(module_id.0 as usize)
                .ok_or(Trap::UnknownModule(module_id.0))?;
            (loaded.module.clone(), loaded.enums.clone())
        };
        let func = module
            .functions
            .get(fn_index)
            .ok_or(Trap::UnknownFunction(fn_index))?;
        match eval_function(func, args)? {
            Outcome::Returned(v) => {
                *out_ret = v;
                Ok(InvokeStatus::Returned)
            }
            Outcome::Threw(thrown) => {
                let info = enums
                    .get(&thrown.enum_name)
                    .expect("validated throw names a declared enum")
                    .clone();
                let case_index = info
                    .cases
                    .iter()
                    .position(|c| *c == thrown.case_name)
                    .expect("validated throw names a declared case");
                *out_error = self.errors.create(info, case_index)?;
                Ok(InvokeStatus::Threw)
            }
        }
    }

    /// Allocates a box for `case_index` of a registered enum.
    pub fn new_error(&self, target: &TypeId, case_index: usize) -> Result<ErrorHandle, Trap> {
        let info = self
            .lookup_type(target)
            .ok_or_else(|| Trap::UnregisteredType(target.to_string()))?;
        self.errors.create(info, case_index)
    }

    pub fn retain(&self, h: ErrorHandle) -> Result<ErrorHandle, Trap> {
        self.errors.retain(h)
    }

    pub fn release(&self, h: ErrorHandle) -> Result<(), Trap> {
        self.errors.release(h)
    }

    /// Checks whether the box is an instance of `target`. Never touches the
    /// refcount.
    pub fn dyncast(&self, h: ErrorHandle, target: &TypeId) -> Result<CastResult, Trap> {
        if h.is_null() {
            return Ok(CastResult::default());
        }
        let b = self.errors.get(h).map_err(|_| Trap::DeadHandle(h))?;
        Ok(if b.type_id() == target {
            CastResult {
                matched: true,
                case_index: b.case_index(),
            }
        } else {
            CastResult::default()
        })
    }

    /// Copies the case name into `buf`, truncating to its capacity, and
    /// returns the full length in bytes. Null handle yields 0.
    pub fn message_into(&self, h: ErrorHandle, buf: &mut [u8]) -> Result<usize, Trap> {
        if h.is_null() {
            return Ok(0);
        }
        let b = self.errors.get(h).map_err(|_| Trap::DeadHandle(h))?;
        let msg = b.message().as_bytes();
        let n = msg.len().min(buf.len());
        buf[..n].copy_from_slice(&msg[..n]);
        Ok(msg.len())
    }

    pub fn message(&self, h: ErrorHandle) -> Result<String, Trap> {
        if h.is_null() {
            return Ok(String::new());
        }
        let b = self.errors.get(h).map_err(|_| Trap::DeadHandle(h))?;
        Ok(b.message().to_string())
    }

    /// Inspects a live box.
    pub fn error_box(&self, h: ErrorHandle) -> Result<Arc<ErrorBox>, Trap> {
        self.errors.get(h).map_err(|_| Trap::DeadHandle(h))
    }

    pub fn refcount(&self, h: ErrorHandle) -> Option<u32> {
        self.errors.get(h).ok().map(|b| b.refcount())
    }

    pub fn live_errors(&self) -> u64 {
        self.errors.live()
    }

    pub fn total_allocations(&self) -> u64 {
        self.errors.allocated()
    }

    /// Invokes and converts the result into an [`Outcome`], releasing any
    /// error box. Useful when comparing against [`eval_function`].
    pub fn invoke_outcome(
        &self,
        module_id: ModuleId,
        fn_index: usize,
        args: &[Value],
    ) -> Result<Outcome, Trap> {
        let mut err = ErrorHandle::NULL;
        let mut ret = Value::Unit;
        match self.invoke(module_id, fn_index, args, &mut err, &mut ret)? {
            InvokeStatus::Returned => Ok(Outcome::Returned(ret)),
            InvokeStatus::Threw => {
                let b = self.error_box(err)?;
                let thrown = ThrownError {
                    enum_name: b.type_id().enum_name().to_string(),
                    case_name: b.message().to_string(),
                };
                drop(b);
                self.release(err)?;
                Ok(Outcome::Threw(thrown))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::idl::{compile_source, serialize_module};

    const DIVISION: &str = include_str!("../../tests/fixtures/functions.eb");

    fn division_bytes() -> Vec<u8> {
        serialize_module(&compile_source(DIVISION).unwrap())
    }

    fn div_type() -> TypeId {
        TypeId::new("Functions", "DivByZero")
    }

    fn call(rt: &Runtime, a: i64, b: i64) -> (Result<InvokeStatus, Trap>, ErrorHandle, Value) {
        let mut err = ErrorHandle::NULL;
        let mut ret = Value::Unit;
        let st = rt.invoke(
            ModuleId(0),
            0,
            &[Value::Int(a), Value::Int(b)],
            &mut err,
            &mut ret,
        );
        (st, err, ret)
    }

    #[test]
    fn load_is_idempotent() {
        let rt = Runtime::new();
        let bytes = division_bytes();
        assert_eq!(rt.load_module(&bytes).unwrap(), ModuleId(0));
        assert_eq!(rt.load_module(&bytes).unwrap(), ModuleId(0));
        let other = serialize_module(&compile_source("module Other").unwrap());
        assert_eq!(rt.load_module(&other).unwrap(), ModuleId(1));
        assert!(rt.lookup_type(&div_type()).is_some());
    }

    #[test]
    fn load_conflict_and_malformed() {
        let rt = Runtime::new();
        rt.load_module(&division_bytes()).unwrap();
        let changed = serialize_module(&compile_source("module Functions").unwrap());
        assert!(matches!(
            rt.load_module(&changed),
            Err(LoadError::Conflict(_))
        ));
        assert!(matches!(rt.load_module(b"{"), Err(LoadError::Malformed(_))));
    }

    #[test]
    fn invoke_division() {
        let rt = Runtime::new();
        rt.load_module(&division_bytes()).unwrap();

        let (st, err, _) = call(&rt, 0, 0);
        assert_eq!(st, Ok(InvokeStatus::Threw));
        assert_eq!(rt.refcount(err), Some(1));
        assert_eq!(
            rt.dyncast(err, &div_type()).unwrap(),
            CastResult {
                matched: true,
                case_index: 1
            }
        );
        assert_eq!(rt.message(err).unwrap(), "bothAreZero");
        rt.release(err).unwrap();

        let (st, err, ret) = call(&rt, 4, 2);
        assert_eq!(st, Ok(InvokeStatus::Returned));
        assert!(err.is_null());
        assert_eq!(ret, Value::Float(2.0));

        let (st, err, _) = call(&rt, 1, 0);
        assert_eq!(st, Ok(InvokeStatus::Threw));
        assert_eq!(rt.dyncast(err, &div_type()).unwrap().case_index, 0);
        rt.release(err).unwrap();

        let (_, _, ret) = call(&rt, 7, 2);
        assert_eq!(ret, Value::Float(3.0));
        assert_eq!(rt.live_errors(), 0);
        assert_eq!(rt.total_allocations(), 2);
    }

    #[test]
    fn invoke_preconditions() {
        let rt = Runtime::new();
        rt.load_module(&division_bytes()).unwrap();
        let mut ret = Value::Unit;
        let mut err = ErrorHandle(5);
        assert_eq!(
            rt.invoke(
                ModuleId(0),
                0,
                &[Value::Int(1), Value::Int(1)],
                &mut err,
                &mut ret
            ),
            Err(Trap::ErrorSlotInUse(ErrorHandle(5)))
        );
        let mut err = ErrorHandle::NULL;
        assert_eq!(
            rt.invoke(ModuleId(3), 0, &[], &mut err, &mut ret),
            Err(Trap::UnknownModule(3))
        );
        assert_eq!(
            rt.invoke(ModuleId(0), 1, &[], &mut err, &mut ret),
            Err(Trap::UnknownFunction(1))
        );
        assert!(matches!(
            rt.invoke(ModuleId(0), 0, &[Value::Bool(true)], &mut err, &mut ret),
            Err(Trap::Arity { .. })
        ));
        assert!(err.is_null());
    }

    #[test]
    fn dyncast_other_type_and_null() {
        let rt = Runtime::new();
        rt.load_module(&division_bytes()).unwrap();
        rt.load_module(&serialize_module(
            &compile_source("module Other enum OtherErr : Error { case x }").unwrap(),
        ))
        .unwrap();
        let (_, err, _) = call(&rt, 1, 0);
        let other = TypeId::new("Other", "OtherErr");
        assert!(!rt.dyncast(err, &other).unwrap().matched);
        assert_eq!(rt.refcount(err), Some(1));
        assert!(!rt.dyncast(ErrorHandle::NULL, &div_type()).unwrap().matched);
        // A forged hash with the right names must not match, nor a right
        // hash with wrong names.
        let forged = TypeId::with_hash("Functions", "DivByZero", 1);
        assert!(!rt.dyncast(err, &forged).unwrap().matched);
        rt.release(err).unwrap();
    }

    #[test]
    fn message_buffer_semantics() {
        let rt = Runtime::new();
        rt.load_module(&division_bytes()).unwrap();
        let (_, err, _) = call(&rt, 0, 0);
        let mut buf = [0u8; 32];
        assert_eq!(rt.message_into(err, &mut buf).unwrap(), 11);
        assert_eq!(&buf[..11], b"bothAreZero");
        let mut empty: [u8; 0] = [];
        assert_eq!(rt.message_into(err, &mut empty).unwrap(), 11);
        let mut small = [0u8; 4];
        assert_eq!(rt.message_into(err, &mut small).unwrap(), 11);
        assert_eq!(&small, b"both");
        assert_eq!(rt.message_into(ErrorHandle::NULL, &mut buf).unwrap(), 0);
        rt.release(err).unwrap();
        assert!(rt.message_into(err, &mut buf).is_err());
    }

    #[test]
    fn live_error_accounting() {
        let rt = Runtime::new();
        assert_eq!(rt.live_errors(), 0);
        rt.load_module(&division_bytes()).unwrap();
        let (_, err, _) = call(&rt, 0, 0);
        assert_eq!(rt.live_errors(), 1);
        // retain ×2, release ×3: 1 + 2 - 3 = 0.
        rt.retain(err).unwrap();
        rt.retain(err).unwrap();
        rt.release(err).unwrap();
        rt.release(err).unwrap();
        assert_eq!(rt.live_errors(), 1);
        rt.release(err).unwrap();
        assert_eq!(rt.live_errors(), 0);
        assert_eq!(rt.release(err), Err(Trap::DoubleRelease(err)));
    }

    #[test]
    fn new_error_requires_registration() {
        let rt = Runtime::new();
        assert!(matches!(
            rt.new_error(&div_type(), 0),
            Err(Trap::UnregisteredType(_))
        ));
    }

    #[test]
    fn concurrent_retain_release() {
        let rt = Runtime::new();
        rt.load_module(&division_bytes()).unwrap();
        let (_, err, _) = call(&rt, 0, 0);
        std::thread::scope(|s| {
            for _ in 0..8 {
                s.spawn(|| {
                    for _ in 0..1000 {
                        rt.retain(err).unwrap();
                        assert!(rt.dyncast(err, &div_type()).unwrap().matched);
                        rt.release(err).unwrap();
                    }
                });
            }
        });
        assert_eq!(rt.refcount(err), Some(1));
        rt.release(err).unwrap();
        assert_eq!(rt.live_errors(), 0);
    }

    #[test]
    fn concurrent_invokes() {
        let rt = Runtime::new();
        rt.load_module(&division_bytes()).unwrap();
        std::thread::scope(|s| {
            for t in 0..4i64 {
                let rt = &rt;
                s.spawn(move || {
                    for i in 0..200i64 {
                        let out = rt
                            .invoke_outcome(ModuleId(0), 0, &[Value::Int(i % 3), Value::Int(t)])
                            .unwrap();
                        let module = rt.module(ModuleId(0)).unwrap();
                        let expected = eval_function(
                            &module.functions[0],
                            &[Value::Int(i % 3), Value::Int(t)],
                        )
                        .unwrap();
                        assert_eq!(out, expected);
                    }
                });
            }
        });
        assert_eq!(rt.live_errors(), 0);
    }
}
