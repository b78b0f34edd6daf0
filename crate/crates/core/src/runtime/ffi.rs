//! C ABI over [`Runtime::global`].
//!
//! ```c
//! typedef struct { uint8_t tag; uint8_t payload[8]; } eb_value;   /* 9 bytes, LE payload */
//! typedef struct { uint64_t hash; const char* module_name; const char* enum_name; } eb_type_id;
//! typedef struct { bool matched; uint32_t case_index; } eb_cast_result;
//!
//! int32_t  eb_load_module(const uint8_t* bytes, size_t len, uint32_t* out_module_id);
//! int32_t  eb_invoke(uint32_t module_id, uint32_t fn_index, const eb_value* args, size_t nargs,
//!                    uint64_t* out_error, eb_value* out_ret);
//! uint64_t eb_error_retain(uint64_t handle);
//! void     eb_error_release(uint64_t handle);
//! eb_cast_result eb_error_dyncast(uint64_t handle, const eb_type_id* target);
//! size_t   eb_error_message(uint64_t handle, char* buf, size_t cap);
//! uint64_t eb_live_errors(void);
//! ```
//!
//! `eb_invoke` reports traps as status 2 (with a line on stderr). Lifetime
//! misuse (double release, use of a dead handle) aborts the process.

use std::ffi::{c_char, CStr};
use std::slice;

use super::errors::ErrorHandle;
use super::trap::Trap;
use super::type_id::TypeId;
use super::value::{EbValue, Value};
use super::{InvokeStatus, LoadError, ModuleId, Runtime};

pub const STATUS_RETURNED: i32 = 0;
pub const STATUS_THREW: i32 = 1;
pub const STATUS_TRAP: i32 = 2;

pub const LOAD_OK: i32 = 0;
pub const LOAD_MALFORMED: i32 = 1;
pub const LOAD_CONFLICT: i32 = 2;
pub const LOAD_BAD_ARGUMENT: i32 = 3;

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct EbTypeId {
    pub hash: u64,
    pub module_name: *const c_char,
    pub enum_name: *const c_char,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct EbCastResult {
    pub matched: bool,
    pub case_index: u32,
}

fn report(trap: &Trap) {
    eprintln!("errbridge: trap: {trap}");
}

fn fatal(trap: Trap) -> ! {
    report(&trap);
    std::process::abort()
}

/// # Safety
/// `bytes` must point to `len` readable bytes; `out_module_id` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn eb_load_module(
    bytes: *const u8,
    len: usize,
    out_module_id: *mut u32,
) -> i32 {
    if bytes.is_null() || out_module_id.is_null() {
        return LOAD_BAD_ARGUMENT;
    }
    let data = unsafe { slice::from_raw_parts(bytes, len) };
    match Runtime::global().load_module(data) {
        Ok(ModuleId(id)) => {
            unsafe { *out_module_id = id };
            LOAD_OK
        }
        Err(e @ LoadError::Malformed(_)) => {
            eprintln!("errbridge: {e}");
            LOAD_MALFORMED
        }
        Err(e @ LoadError::Conflict(_)) => {
            eprintln!("errbridge: {e}");
            LOAD_CONFLICT
        }
    }
}

/// # Safety
/// `args` must point to `nargs` cells (or be null when `nargs == 0`);
/// `out_error` and `out_ret` must be writable.
#[no_mangle]
pub unsafe extern "C" fn eb_invoke(
    module_id: u32,
    fn_index: u32,
    args: *const EbValue,
    nargs: usize,
    out_error: *mut u64,
    out_ret: *mut EbValue,
) -> i32 {
    if out_error.is_null() || out_ret.is_null() || (args.is_null() && nargs > 0) {
        report(&Trap::BadValueCell("null pointer argument".into()));
        return STATUS_TRAP;
    }
    let cells = if nargs == 0 {
        &[][..]
    } else {
        unsafe { slice::from_raw_parts(args, nargs) }
    };
    let values: Result<Vec<Value>, Trap> = cells
        .iter()
        .map(|c| Value::try_from(*c).map_err(|e| Trap::BadValueCell(e.to_string())))
        .collect();
    let result = values.and_then(|values| {
        let mut err = ErrorHandle(unsafe { *out_error });
        let mut ret = Value::Unit;
        let status = Runtime::global().invoke(
            ModuleId(module_id),
            fn_index as usize,
            &values,
            &mut err,
            &mut ret,
        )?;
        Ok((status, err, ret))
    });
    match result {
        Ok((InvokeStatus::Returned, _, ret)) => {
            unsafe { *out_ret = EbValue::from(ret) };
            STATUS_RETURNED
        }
        Ok((InvokeStatus::Threw, err, _)) => {
            unsafe { *out_error = err.0 };
            STATUS_THREW
        }
        Err(trap) => {
            report(&trap);
            STATUS_TRAP
        }
    }
}

#[no_mangle]
pub extern "C" fn eb_error_retain(handle: u64) -> u64 {
    match Runtime::global().retain(ErrorHandle(handle)) {
        Ok(h) => h.0,
        Err(trap) => fatal(trap),
    }
}

#[no_mangle]
pub extern "C" fn eb_error_release(handle: u64) {
    if let Err(trap) = Runtime::global().release(ErrorHandle(handle)) {
        fatal(trap)
    }
}

/// # Safety
/// `target` must be null or point to a valid [`EbTypeId`] whose name
/// pointers are NUL-terminated strings.
#[no_mangle]
pub unsafe extern "C" fn eb_error_dyncast(handle: u64, target: *const EbTypeId) -> EbCastResult {
    if target.is_null() {
        return EbCastResult::default();
    }
    let t = unsafe { &*target };
    if t.module_name.is_null() || t.enum_name.is_null() {
        return EbCastResult::default();
    }
    let (module, enum_name) = unsafe {
        (
            CStr::from_ptr(t.module_name).to_string_lossy(),
            CStr::from_ptr(t.enum_name).to_string_lossy(),
        )
    };
    let type_id = TypeId::with_hash(&module, &enum_name, t.hash);
    match Runtime::global().dyncast(ErrorHandle(handle), &type_id) {
        Ok(r) => EbCastResult {
            matched: r.matched,
            case_index: r.case_index as u32,
        },
        Err(trap) => fatal(trap),
    }
}

/// # Safety
/// `buf` must point to `cap` writable bytes (it may be null when `cap == 0`).
#[no_mangle]
pub unsafe extern "C" fn eb_error_message(handle: u64, buf: *mut c_char, cap: usize) -> usize {
    let out: &mut [u8] = if buf.is_null() || cap == 0 {
        &mut []
    } else {
        unsafe { slice::from_raw_parts_mut(buf.cast::<u8>(), cap) }
    };
    match Runtime::global().message_into(ErrorHandle(handle), out) {
        Ok(n) => n,
        Err(trap) => fatal(trap),
    }
}

#[no_mangle]
pub extern "C" fn eb_live_errors() -> u64 {
    Runtime::global().live_errors()
}

// These run against the process-wide runtime; they only ever load the
// division module, so assertions are written relative to counts observed at
// the start of each test.
#[cfg(test)]
mod tests {
    use super::*;
    use crate::idl::{compile_source, serialize_module};
    use std::sync::Mutex;

    static SERIAL: Mutex<()> = Mutex::new(());

    fn load() -> u32 {
        let bytes = serialize_module(
            &compile_source(include_str!("../../tests/fixtures/functions.eb")).unwrap(),
        );
        let mut id = u32::MAX;
        assert_eq!(
            unsafe { eb_load_module(bytes.as_ptr(), bytes.len(), &mut id) },
            LOAD_OK
        );
        id
    }

    fn div(id: u32, a: i64, b: i64) -> (i32, u64, EbValue) {
        let args = [EbValue::from(Value::Int(a)), EbValue::from(Value::Int(b))];
        let mut err = 0u64;
        let mut ret = EbValue::default();
        let st = unsafe { eb_invoke(id, 0, args.as_ptr(), 2, &mut err, &mut ret) };
        (st, err, ret)
    }

    #[test]
    fn division_over_the_abi() {
        let _g = SERIAL.lock().unwrap();
        let id = load();
        assert_eq!(load(), id);
        let base = eb_live_errors();

        let (st, err, ret) = div(id, 4, 2);
        assert_eq!((st, err), (STATUS_RETURNED, 0));
        assert_eq!(Value::try_from(ret).unwrap(), Value::Float(2.0));

        let (st, err, _) = div(id, 0, 0);
        assert_eq!(st, STATUS_THREW);
        assert_ne!(err, 0);
        assert_eq!(eb_live_errors(), base + 1);

        let module = c"Functions";
        let name = c"DivByZero";
        let target = EbTypeId {
            hash: TypeId::new("Functions", "DivByZero").hash(),
            module_name: module.as_ptr(),
            enum_name: name.as_ptr(),
        };
        let r = unsafe { eb_error_dyncast(err, &target) };
        assert_eq!(
            r,
            EbCastResult {
                matched: true,
                case_index: 1
            }
        );
        let other = c"Other";
        let miss = EbTypeId {
            enum_name: other.as_ptr(),
            ..target
        };
        assert!(!unsafe { eb_error_dyncast(err, &miss) }.matched);

        let mut buf = [0 as c_char; 16];
        let n = unsafe { eb_error_message(err, buf.as_mut_ptr(), buf.len()) };
        assert_eq!(n, 11);
        let text: Vec<u8> = buf[..n].iter().map(|&c| c as u8).collect();
        assert_eq!(text, b"bothAreZero");
        assert_eq!(
            unsafe { eb_error_message(err, std::ptr::null_mut(), 0) },
            11
        );
        assert_eq!(
            unsafe { eb_error_message(0, buf.as_mut_ptr(), buf.len()) },
            0
        );

        assert_eq!(eb_error_retain(err), err);
        eb_error_release(err);
        eb_error_release(err);
        assert_eq!(eb_live_errors(), base);

        assert_eq!(eb_error_retain(0), 0);
        eb_error_release(0);
    }

    #[test]
    fn traps_report_status_two() {
        let _g = SERIAL.lock().unwrap();
        let id = load();
        let base = eb_live_errors();
        // Wrong arity.
        let mut err = 0u64;
        let mut ret = EbValue::default();
        let st = unsafe { eb_invoke(id, 0, std::ptr::null(), 0, &mut err, &mut ret) };
        assert_eq!(st, STATUS_TRAP);
        // Non-null error slot.
        let mut err = 9u64;
        let args = [EbValue::from(Value::Int(1)), EbValue::from(Value::Int(1))];
        let st = unsafe { eb_invoke(id, 0, args.as_ptr(), 2, &mut err, &mut ret) };
        assert_eq!(st, STATUS_TRAP);
        // Bad tag.
        let bad = [
            EbValue {
                tag: 7,
                payload: [0; 8],
            },
            EbValue::from(Value::Int(1)),
        ];
        let mut err = 0u64;
        let st = unsafe { eb_invoke(id, 0, bad.as_ptr(), 2, &mut err, &mut ret) };
        assert_eq!(st, STATUS_TRAP);
        assert_eq!(err, 0);
        assert_eq!(eb_live_errors(), base);
    }

    #[test]
    fn malformed_load() {
        let mut id = 0;
        let junk = b"{\"name\":";
        assert_eq!(
            unsafe { eb_load_module(junk.as_ptr(), junk.len(), &mut id) },
            LOAD_MALFORMED
        );
        assert_eq!(
            unsafe { eb_load_module(std::ptr::null(), 0, &mut id) },
            LOAD_BAD_ARGUMENT
        );
    }
}
