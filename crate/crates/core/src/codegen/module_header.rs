//! The per-module header: error-enum mirrors and one inline thunk per
//! function.

use std::fmt::Write as _;

use crate::idl::{ErrorEnumDecl, FunctionDecl, ScalarType, Span, ValidatedModule};
use crate::runtime::TypeId;

use super::names::{check_cxx_name, ENUM_MEMBERS, THUNK_LOCALS};
use super::{CodegenError, GenOptions};

fn cxx_type(ty: ScalarType) -> &'static str {
    match ty {
        ScalarType::Int => "Swift::Int",
        ScalarType::Float => "double",
        ScalarType::Bool => "bool",
        ScalarType::Unit => "void",
    }
}

fn pack_fn(ty: ScalarType) -> &'static str {
    match ty {
        ScalarType::Int => "makeInt",
        ScalarType::Float => "makeFloat",
        ScalarType::Bool => "makeBool",
        ScalarType::Unit => unreachable!("unit parameters are rejected by validation"),
    }
}

fn read_fn(ty: ScalarType) -> &'static str {
    match ty {
        ScalarType::Int => "readInt",
        ScalarType::Float => "readFloat",
        ScalarType::Bool => "readBool",
        ScalarType::Unit => "readUnit",
    }
}

/// Rejects any declaration whose name cannot be emitted verbatim.
pub(crate) fn check_names(module: &ValidatedModule) -> Result<(), CodegenError> {
    let enum_err = |name: &str, reason: String| CodegenError::ReservedName {
        kind: "enum",
        name: name.to_string(),
        reason,
    };
    for e in &module.enums {
        let en = e.name.as_str();
        check_cxx_name(en).map_err(|r| enum_err(en, r))?;
        for case in &e.cases {
            let c = case.as_str();
            check_cxx_name(c).map_err(|r| enum_err(en, format!("case `{c}` {r}")))?;
            if ENUM_MEMBERS.contains(&c) || c == en {
                return Err(enum_err(
                    en,
                    format!("case `{c}` collides with a generated member"),
                ));
            }
        }
    }
    for f in &module.functions {
        let fname = f.name.as_str();
        let fn_err = |reason: String| CodegenError::ReservedName {
            kind: "function",
            name: fname.to_string(),
            reason,
        };
        check_cxx_name(fname).map_err(fn_err)?;
        for p in &f.params {
            let pn = p.name.as_str();
            check_cxx_name(pn).map_err(|r| fn_err(format!("parameter `{pn}` {r}")))?;
            if THUNK_LOCALS.contains(&pn) {
                return Err(fn_err(format!(
                    "parameter `{pn}` collides with a generated local"
                )));
            }
            if p.ty == ScalarType::Unit {
                return Err(CodegenError::UnsupportedType {
                    function: fname.to_string(),
                    detail: format!("parameter `{pn}` has type Unit"),
                });
            }
        }
    }
    Ok(())
}

struct Emitter<'a> {
    out: String,
    options: &'a GenOptions,
}

impl Emitter<'_> {
    fn line(&mut self, text: &str) {
        self.out.push_str(text);
        self.out.push('\n');
    }

    fn blank(&mut self) {
        self.out.push('\n');
    }

    fn source_comment(&mut self, span: Span) {
        if self.options.emit_line_comments && span.is_known() {
            let _ = writeln!(self.out, "// line {}", span.line);
        }
    }
}

pub fn emit_module_header(
    module: &ValidatedModule,
    options: &GenOptions,
) -> Result<String, CodegenError> {
    options.validate()?;
    check_names(module)?;
    let module_name = module.name.as_str();
    let ns = options.namespace_for(module);
    let prefix = &options.macro_prefix;
    let guard = format!("{prefix}_MODULE_{module_name}_H");

    let mut em = Emitter {
        out: String::new(),
        options,
    };
    let _ = writeln!(
        em.out,
        "// Generated by errbridge from module {module_name}. Do not edit."
    );
    let _ = writeln!(em.out, "#ifndef {guard}");
    let _ = writeln!(em.out, "#define {guard}");
    em.blank();
    let _ = writeln!(em.out, "#include \"{}\"", options.support_header_name);
    em.blank();
    let _ = writeln!(em.out, "namespace {ns} {{");

    for e in &module.enums {
        em.blank();
        emit_enum(&mut em, module_name, e);
    }

    em.blank();
    em.line("namespace _impl {");
    em.blank();
    em.line("inline uint32_t moduleId() noexcept {");
    let _ = writeln!(
        em.out,
        "  static const uint32_t id = Swift::_impl::loadModule(\"{module_name}\");"
    );
    em.line("  return id;");
    em.line("}");
    for (index, f) in module.functions.iter().enumerate() {
        em.blank();
        emit_call_wrapper(&mut em, index, f);
    }
    em.blank();
    em.line("} // namespace _impl");

    for f in &module.functions {
        em.blank();
        emit_thunk(&mut em, f);
    }

    em.blank();
    let _ = writeln!(em.out, "}} // namespace {ns}");
    em.blank();
    let _ = writeln!(em.out, "#endif // {guard}");
    Ok(em.out)
}

fn emit_enum(em: &mut Emitter<'_>, module_name: &str, e: &ErrorEnumDecl) {
    let name = e.name.as_str();
    let type_id = TypeId::new(module_name, name);
    let count = e.cases.len();
    em.source_comment(e.name.span);
    let _ = writeln!(em.out, "class {name} {{");
    em.line("public:");
    em.line("  enum Cases : int32_t {");
    for (i, case) in e.cases.iter().enumerate() {
        let _ = writeln!(em.out, "    {} = {i},", case.as_str());
    }
    em.line("  };");
    em.blank();
    let _ = writeln!(
        em.out,
        "  static constexpr eb_type_id typeId = {{0x{:016x}ULL, \"{module_name}\", \"{name}\"}};",
        type_id.hash()
    );
    em.blank();
    let _ = writeln!(
        em.out,
        "  explicit {name}(Cases value) noexcept : value_(value) {{}}"
    );
    em.blank();
    let _ = writeln!(
        em.out,
        "  static {name} fromCaseIndex(uint32_t index) noexcept {{"
    );
    let _ = writeln!(em.out, "    if (index >= {count})");
    let _ = writeln!(
        em.out,
        "      Swift::_impl::trap(\"case index out of range for {name}\");"
    );
    let _ = writeln!(em.out, "    return {name}(static_cast<Cases>(index));");
    em.line("  }");
    em.blank();
    em.line("  Cases getCase() const noexcept { return value_; }");
    em.line("  bool operator==(Cases other) const noexcept { return value_ == other; }");
    em.line("  bool operator!=(Cases other) const noexcept { return value_ != other; }");
    let _ = writeln!(
        em.out,
        "  bool operator==(const {name}& other) const noexcept {{ return value_ == other.value_; }}"
    );
    let _ = writeln!(
        em.out,
        "  bool operator!=(const {name}& other) const noexcept {{ return value_ != other.value_; }}"
    );
    em.blank();
    em.line("  const char* messageText() const noexcept {");
    em.line("    switch (value_) {");
    for case in &e.cases {
        let c = case.as_str();
        let _ = writeln!(em.out, "    case {c}:");
        let _ = writeln!(em.out, "      return \"{c}\";");
    }
    em.line("    }");
    em.line("    return \"\";");
    em.line("  }");
    em.blank();
    em.line("  // Prints the case name.");
    em.line("  void getMessage() const noexcept { std::printf(\"%s\\n\", messageText()); }");
    em.blank();
    em.line("private:");
    em.line("  Cases value_;");
    em.line("};");
}

fn emit_call_wrapper(em: &mut Emitter<'_>, index: usize, f: &FunctionDecl) {
    let name = f.name.as_str();
    let ret = cxx_type(f.returns);
    let mut params: Vec<String> = f
        .params
        .iter()
        .enumerate()
        .map(|(i, p)| format!("{} p{i}", cxx_type(p.ty)))
        .collect();
    if f.throws {
        params.push("void** opaqueError".to_string());
    }
    let _ = writeln!(
        em.out,
        "inline {ret} call_{name}({}) noexcept {{",
        params.join(", ")
    );
    let nargs = f.params.len();
    let args_ptr = if nargs == 0 {
        "nullptr"
    } else {
        let packed: Vec<String> = f
            .params
            .iter()
            .enumerate()
            .map(|(i, p)| format!("Swift::_impl::{}(p{i})", pack_fn(p.ty)))
            .collect();
        let _ = writeln!(
            em.out,
            "  const eb_value args[{nargs}] = {{{}}};",
            packed.join(", ")
        );
        "args"
    };
    em.line("  uint64_t error = 0;");
    em.line("  eb_value ret;");
    let _ = writeln!(
        em.out,
        "  int32_t status = eb_invoke(moduleId(), {index}, {args_ptr}, {nargs}, &error, &ret);"
    );
    if f.throws {
        em.line("  if (status == 1) {");
        em.line("    *opaqueError = Swift::_impl::toOpaque(error);");
        if f.returns == ScalarType::Unit {
            em.line("    return;");
        } else {
            let _ = writeln!(em.out, "    return {ret}();");
        }
        em.line("  }");
    }
    em.line("  if (status != 0)");
    let _ = writeln!(em.out, "    Swift::_impl::trap(\"{name} trapped\");");
    if f.returns == ScalarType::Unit {
        em.line("  Swift::_impl::readUnit(ret);");
    } else {
        let _ = writeln!(
            em.out,
            "  return Swift::_impl::{}(ret);",
            read_fn(f.returns)
        );
    }
    em.line("}");
}

fn emit_thunk(em: &mut Emitter<'_>, f: &FunctionDecl) {
    let name = f.name.as_str();
    let ret = cxx_type(f.returns);
    let prefix = em.options.macro_prefix.clone();
    let params: Vec<String> = f
        .params
        .iter()
        .map(|p| format!("{} {}", cxx_type(p.ty), p.name.as_str()))
        .collect();
    let mut args: Vec<String> = f
        .params
        .iter()
        .map(|p| p.name.as_str().to_string())
        .collect();
    em.source_comment(f.name.span);

    if !f.throws {
        let _ = writeln!(
            em.out,
            "inline {ret} {name}({}) noexcept {{",
            params.join(", ")
        );
        let call = format!("_impl::call_{name}({})", args.join(", "));
        if f.returns == ScalarType::Unit {
            let _ = writeln!(em.out, "  {call};");
        } else {
            let _ = writeln!(em.out, "  return {call};");
        }
        em.line("}");
        return;
    }

    args.push("&opaqueError".to_string());
    let call = format!("_impl::call_{name}({})", args.join(", "));
    let _ = writeln!(
        em.out,
        "inline Swift::ThrowingResult<{ret}> {name}({}) {{",
        params.join(", ")
    );
    em.line("  void* opaqueError = nullptr;");
    em.line("  Swift::_impl::ErrorSlotGuard opaqueErrorGuard(&opaqueError);");
    if f.returns == ScalarType::Unit {
        let _ = writeln!(em.out, "  {call};");
    } else {
        let _ = writeln!(em.out, "  auto returnValue = {call};");
    }
    em.line("  if (opaqueError != nullptr)");
    em.line("#ifdef __cpp_exceptions");
    em.line("    throw (Swift::Error(opaqueError));");
    em.line("#else");
    let _ = writeln!(
        em.out,
        "    return {prefix}_RETURN_THUNK({ret}, Swift::Error(opaqueError));"
    );
    em.line("#endif");
    em.blank();
    if f.returns == ScalarType::Unit {
        let _ = writeln!(em.out, "  return {prefix}_RETURN_VOID_THUNK();");
    } else {
        let _ = writeln!(
            em.out,
            "  return {prefix}_RETURN_THUNK({ret}, returnValue);"
        );
    }
    em.line("}");
}
