//! The support header: runtime ABI declarations plus `Swift::Error`,
//! `Swift::Optional<T>`, `Swift::Expected<T>` and the exceptions mode gate.

use super::GenOptions;

/// `@P@` is replaced by the macro prefix.
const TEMPLATE: &str = r##"// Generated by errbridge. Do not edit.
//
// Support types for bridged error handling. When the translation unit is
// compiled with exceptions, throwing functions return `T` and throw
// `Swift::Error`; with -fno-exceptions they return `Swift::Expected<T>`.
#ifndef @P@_ERRBRIDGE_SUPPORT_H
#define @P@_ERRBRIDGE_SUPPORT_H

#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <new>

extern "C" {

typedef struct eb_value {
  uint8_t tag;
  uint8_t payload[8];
} eb_value;

typedef struct eb_type_id {
  uint64_t hash;
  const char* module_name;
  const char* enum_name;
} eb_type_id;

typedef struct eb_cast_result {
  bool matched;
  uint32_t case_index;
} eb_cast_result;

int32_t eb_load_module(const uint8_t* bytes, size_t len, uint32_t* out_module_id);
int32_t eb_invoke(uint32_t module_id, uint32_t fn_index, const eb_value* args,
                  size_t nargs, uint64_t* out_error, eb_value* out_ret);
uint64_t eb_error_retain(uint64_t handle);
void eb_error_release(uint64_t handle);
eb_cast_result eb_error_dyncast(uint64_t handle, const eb_type_id* target);
size_t eb_error_message(uint64_t handle, char* buf, size_t cap);
uint64_t eb_live_errors(void);

} // extern "C"

namespace Swift {

using Int = int64_t;

namespace _impl {

[[noreturn]] inline void trap(const char* what) noexcept {
  std::fprintf(stderr, "errbridge: %s\n", what);
  std::abort();
}

inline eb_value makeValue(uint8_t tag, uint64_t bits) noexcept {
  eb_value v;
  v.tag = tag;
  for (int i = 0; i < 8; ++i)
    v.payload[i] = static_cast<uint8_t>(bits >> (8 * i));
  return v;
}

inline uint64_t valueBits(const eb_value& v) noexcept {
  uint64_t bits = 0;
  for (int i = 0; i < 8; ++i)
    bits |= static_cast<uint64_t>(v.payload[i]) << (8 * i);
  return bits;
}

inline eb_value makeInt(int64_t x) noexcept {
  return makeValue(1, static_cast<uint64_t>(x));
}

inline eb_value makeFloat(double x) noexcept {
  uint64_t bits;
  std::memcpy(&bits, &x, sizeof bits);
  return makeValue(2, bits);
}

inline eb_value makeBool(bool x) noexcept {
  return makeValue(3, x ? 1 : 0);
}

inline int64_t readInt(const eb_value& v) noexcept {
  if (v.tag != 1)
    trap("dispatcher returned a non-Int value");
  return static_cast<int64_t>(valueBits(v));
}

inline double readFloat(const eb_value& v) noexcept {
  if (v.tag != 2)
    trap("dispatcher returned a non-Float value");
  uint64_t bits = valueBits(v);
  double x;
  std::memcpy(&x, &bits, sizeof x);
  return x;
}

inline bool readBool(const eb_value& v) noexcept {
  if (v.tag != 3)
    trap("dispatcher returned a non-Bool value");
  return valueBits(v) != 0;
}

inline void readUnit(const eb_value& v) noexcept {
  if (v.tag != 0)
    trap("dispatcher returned a value from a Unit function");
}

inline void* toOpaque(uint64_t handle) noexcept {
  return reinterpret_cast<void*>(static_cast<uintptr_t>(handle));
}

inline uint64_t fromOpaque(void* opaque) noexcept {
  return static_cast<uint64_t>(reinterpret_cast<uintptr_t>(opaque));
}

// Reads `<ERRBRIDGE_MODULE_PATH>/<name>.ebm` (or `./<name>.ebm`) and hands
// it to the runtime.
inline uint32_t loadModule(const char* name) noexcept {
  const char* dir = std::getenv("ERRBRIDGE_MODULE_PATH");
  if (dir == nullptr || *dir == '\0')
    dir = ".";
  char path[4096];
  std::snprintf(path, sizeof path, "%s/%s.ebm", dir, name);
  std::FILE* file = std::fopen(path, "rb");
  if (file == nullptr) {
    std::fprintf(stderr, "errbridge: cannot open %s\n", path);
    std::abort();
  }
  std::fseek(file, 0, SEEK_END);
  long size = std::ftell(file);
  std::fseek(file, 0, SEEK_SET);
  if (size < 0)
    trap("cannot size module file");
  uint8_t* bytes = static_cast<uint8_t*>(std::malloc(size > 0 ? static_cast<size_t>(size) : 1));
  if (bytes == nullptr)
    trap("out of memory loading module");
  size_t got = std::fread(bytes, 1, static_cast<size_t>(size), file);
  std::fclose(file);
  uint32_t id = 0;
  int32_t status = eb_load_module(bytes, got, &id);
  std::free(bytes);
  if (status != 0)
    trap("module registry rejected by the runtime");
  return id;
}

// Owns the reference the dispatcher returns through an error slot and drops
// it when the thunk exits, however it exits.
class ErrorSlotGuard {
public:
  explicit ErrorSlotGuard(void** slot) noexcept : slot_(slot) {}
  ~ErrorSlotGuard() {
    if (*slot_ != nullptr)
      eb_error_release(fromOpaque(*slot_));
  }
  ErrorSlotGuard(const ErrorSlotGuard&) = delete;
  ErrorSlotGuard& operator=(const ErrorSlotGuard&) = delete;

private:
  void** slot_;
};

} // namespace _impl

template<class T>
class Optional {
public:
  static Optional some(const T& value) { return Optional(value); }
  static Optional none() noexcept { return Optional(); }

  Optional(const Optional& other) : isSome_(other.isSome_) {
    if (isSome_)
      new (storage_) T(*other.ptr());
  }
  Optional& operator=(const Optional& other) {
    if (this != &other) {
      reset();
      if (other.isSome_) {
        new (storage_) T(*other.ptr());
        isSome_ = true;
      }
    }
    return *this;
  }
  ~Optional() { reset(); }

  bool isSome() const noexcept { return isSome_; }

  T get() const {
    if (!isSome_)
      _impl::trap("Optional::get() called on none");
    return *ptr();
  }

private:
  Optional() noexcept : isSome_(false) {}
  explicit Optional(const T& value) : isSome_(true) { new (storage_) T(value); }

  const T* ptr() const noexcept { return reinterpret_cast<const T*>(storage_); }
  T* ptr() noexcept { return reinterpret_cast<T*>(storage_); }
  void reset() noexcept {
    if (isSome_) {
      ptr()->~T();
      isSome_ = false;
    }
  }

  alignas(T) unsigned char storage_[sizeof(T)];
  bool isSome_;
};

// A bridged error. Construction and copies retain the runtime box;
// destruction releases it.
class Error {
public:
  explicit Error(void* opaque) noexcept : opaque_(opaque) {
    eb_error_retain(_impl::fromOpaque(opaque_));
  }
  Error(const Error& other) noexcept : opaque_(other.opaque_) {
    eb_error_retain(_impl::fromOpaque(opaque_));
  }
  Error(Error&& other) noexcept : opaque_(other.opaque_) { other.opaque_ = nullptr; }
  Error& operator=(const Error& other) noexcept {
    if (this != &other) {
      eb_error_release(_impl::fromOpaque(opaque_));
      opaque_ = other.opaque_;
      eb_error_retain(_impl::fromOpaque(opaque_));
    }
    return *this;
  }
  Error& operator=(Error&& other) noexcept {
    if (this != &other) {
      eb_error_release(_impl::fromOpaque(opaque_));
      opaque_ = other.opaque_;
      other.opaque_ = nullptr;
    }
    return *this;
  }
  ~Error() { eb_error_release(_impl::fromOpaque(opaque_)); }

  void* getOpaquePointer() const noexcept { return opaque_; }

  // Dynamic cast to a generated error enum `E`.
  template<class E>
  Optional<E> as() const {
    eb_cast_result result = eb_error_dyncast(_impl::fromOpaque(opaque_), &E::typeId);
    if (!result.matched)
      return Optional<E>::none();
    return Optional<E>::some(E::fromCaseIndex(result.case_index));
  }

  // Copies the case name into `buf` (truncating) and returns its full length.
  size_t message(char* buf, size_t cap) const noexcept {
    return eb_error_message(_impl::fromOpaque(opaque_), buf, cap);
  }

private:
  void* opaque_;
};

// Holds either a `T` or an `Error`, in one buffer.
template<class T>
class Expected {
public:
  Expected(const T& value) noexcept : hasValue_(true) { new (buffer_) T(value); }
  Expected(const Error& error) noexcept : hasValue_(false) { new (buffer_) Error(error); }
  Expected(Error&& error) noexcept : hasValue_(false) {
    new (buffer_) Error(static_cast<Error&&>(error));
  }
  Expected(const Expected& other) noexcept : hasValue_(other.hasValue_) {
    if (hasValue_)
      new (buffer_) T(*other.valuePtr());
    else
      new (buffer_) Error(*other.errorPtr());
  }
  Expected& operator=(const Expected& other) noexcept {
    if (this != &other) {
      destroy();
      hasValue_ = other.hasValue_;
      if (hasValue_)
        new (buffer_) T(*other.valuePtr());
      else
        new (buffer_) Error(*other.errorPtr());
    }
    return *this;
  }
  ~Expected() { destroy(); }

  bool has_value() const noexcept { return hasValue_; }
  explicit operator bool() const noexcept { return hasValue_; }

  const T& value() const noexcept {
    if (!hasValue_)
      _impl::trap("Expected::value() called on an error");
    return *valuePtr();
  }

  const Error& error() const noexcept {
    if (hasValue_)
      _impl::trap("Expected::error() called on a value");
    return *errorPtr();
  }

private:
  static constexpr size_t kSize = sizeof(T) > sizeof(Error) ? sizeof(T) : sizeof(Error);
  static constexpr size_t kAlign = alignof(T) > alignof(Error) ? alignof(T) : alignof(Error);

  const T* valuePtr() const noexcept { return reinterpret_cast<const T*>(buffer_); }
  const Error* errorPtr() const noexcept { return reinterpret_cast<const Error*>(buffer_); }
  void destroy() noexcept {
    if (hasValue_)
      reinterpret_cast<T*>(buffer_)->~T();
    else
      reinterpret_cast<Error*>(buffer_)->~Error();
  }

  alignas(kAlign) unsigned char buffer_[kSize];
  bool hasValue_;
};

template<>
class Expected<void> {
public:
  Expected() noexcept : hasValue_(true) {}
  Expected(const Error& error) noexcept : hasValue_(false) { new (buffer_) Error(error); }
  Expected(Error&& error) noexcept : hasValue_(false) {
    new (buffer_) Error(static_cast<Error&&>(error));
  }
  Expected(const Expected& other) noexcept : hasValue_(other.hasValue_) {
    if (!hasValue_)
      new (buffer_) Error(*other.errorPtr());
  }
  Expected& operator=(const Expected& other) noexcept {
    if (this != &other) {
      destroy();
      hasValue_ = other.hasValue_;
      if (!hasValue_)
        new (buffer_) Error(*other.errorPtr());
    }
    return *this;
  }
  ~Expected() { destroy(); }

  bool has_value() const noexcept { return hasValue_; }
  explicit operator bool() const noexcept { return hasValue_; }

  void value() const noexcept {
    if (!hasValue_)
      _impl::trap("Expected::value() called on an error");
  }

  const Error& error() const noexcept {
    if (hasValue_)
      _impl::trap("Expected::error() called on a value");
    return *errorPtr();
  }

private:
  const Error* errorPtr() const noexcept { return reinterpret_cast<const Error*>(buffer_); }
  void destroy() noexcept {
    if (!hasValue_)
      reinterpret_cast<Error*>(buffer_)->~Error();
  }

  alignas(Error) unsigned char buffer_[sizeof(Error)];
  bool hasValue_;
};

#ifdef __cpp_exceptions
template<class T>
using ThrowingResult = T;
#define @P@_RETURN_THUNK(T, v) v
#define @P@_RETURN_VOID_THUNK() void()
#else
template<class T>
using ThrowingResult = Swift::Expected<T>;
#define @P@_RETURN_THUNK(T, v) Swift::Expected<T>(v)
#define @P@_RETURN_VOID_THUNK() Swift::Expected<void>()
#endif

} // namespace Swift

#endif // @P@_ERRBRIDGE_SUPPORT_H
"##;

pub fn emit_support_header(options: &GenOptions) -> String {
    TEMPLATE.replace("@P@", &options.macro_prefix)
}
