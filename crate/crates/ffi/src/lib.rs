//! C ABI for `ofa-core`.
//!
//! Every function returns an [`OfaStatus`]. On failure a message is kept per
//! thread and can be read with [`ofa_last_error_message`]. Handles are
//! opaque and must be released with their matching `_free` function.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ofa_core::{compile, decode_utf8, BudgetConfig, CompileOptions, Error, Mode, Ofa};

/// Result code of every call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OfaStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Budget = 4,
    Format = 5,
    ForeignChar = 6,
    Internal = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OfaMode {
    EndPositions = 0,
    Anchored = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct OfaCompileOptions {
    pub mode: OfaMode,
    pub max_lookahead: u32,
    pub max_nodes_per_trie: usize,
    pub dfa_state_cap: usize,
}

/// A compiled automaton.
pub struct OfaAutomaton {
    ofa: Ofa,
}

/// End positions found by [`ofa_find`].
pub struct OfaMatches {
    positions: Vec<usize>,
    chars_read: usize,
    input_len: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(e: &Error) -> OfaStatus {
    match e {
        Error::Parse(_) | Error::ClassMap(_) | Error::PatternList { .. } => OfaStatus::Parse,
        Error::StateCapExceeded { .. } | Error::InvalidBudget(_) => OfaStatus::Budget,
        Error::Format(_) => OfaStatus::Format,
        Error::ForeignChar { .. } => OfaStatus::ForeignChar,
        Error::Decode { .. } => OfaStatus::InvalidUtf8,
        Error::InvalidAutomaton(_) | Error::MissingLookahead(_) | Error::Io(_) => {
            OfaStatus::Internal
        }
    }
}

fn guard(f: impl FnOnce() -> Result<(), (OfaStatus, String)>) -> OfaStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => OfaStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            OfaStatus::Internal
        }
    }
}

fn lib_err(e: Error) -> (OfaStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (OfaStatus, String) {
    (OfaStatus::NullArgument, format!("{what} is null"))
}

/// Message for the last failed call on this thread, or null. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ofa_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

#[no_mangle]
pub extern "C" fn ofa_default_options() -> OfaCompileOptions {
    let b = BudgetConfig::default();
    OfaCompileOptions {
        mode: OfaMode::EndPositions,
        max_lookahead: b.max_lookahead,
        max_nodes_per_trie: b.max_nodes_per_trie,
        dfa_state_cap: b.dfa_state_cap,
    }
}

/// Compiles a NUL-terminated UTF-8 pattern. `options` may be null for the
/// defaults.
#[no_mangle]
pub unsafe extern "C" fn ofa_compile(
    pattern: *const c_char,
    options: *const OfaCompileOptions,
    out: *mut *mut OfaAutomaton,
) -> OfaStatus {
    guard(|| {
        if pattern.is_null() {
            return Err(null("pattern"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let pattern = CStr::from_ptr(pattern)
            .to_str()
            .map_err(|e| (OfaStatus::InvalidUtf8, format!("pattern is not UTF-8: {e}")))?;
        let o = if options.is_null() {
            ofa_default_options()
        } else {
            *options
        };
        let opts = CompileOptions::default()
            .with_mode(match o.mode {
                OfaMode::EndPositions => Mode::EndPositions,
                OfaMode::Anchored => Mode::Anchored,
            })
            .with_budget(BudgetConfig {
                max_lookahead: o.max_lookahead,
                max_nodes_per_trie: o.max_nodes_per_trie,
                dfa_state_cap: o.dfa_state_cap,
            });
        let compiled = compile(pattern, &opts).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(OfaAutomaton { ofa: compiled.ofa }));
        Ok(())
    })
}

/// Loads an automaton from the text format.
#[no_mangle]
pub unsafe extern "C" fn ofa_load(
    text: *const u8,
    len: usize,
    out: *mut *mut OfaAutomaton,
) -> OfaStatus {
    guard(|| {
        if text.is_null() || out.is_null() {
            return Err(null("text or out"));
        }
        let bytes = std::slice::from_raw_parts(text, len);
        let ofa = ofa_core::deserialize_ofa(bytes).map_err(|e| lib_err(e.into()))?;
        *out = Box::into_raw(Box::new(OfaAutomaton { ofa }));
        Ok(())
    })
}

/// Renders the automaton in the text format as a NUL-terminated string.
/// Release it with [`ofa_string_free`].
#[no_mangle]
pub unsafe extern "C" fn ofa_serialize(
    automaton: *const OfaAutomaton,
    out: *mut *mut c_char,
) -> OfaStatus {
    guard(|| {
        let a = automaton.as_ref().ok_or_else(|| null("automaton"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let text =
            CString::new(a.ofa.to_text()).map_err(|e| (OfaStatus::Internal, e.to_string()))?;
        *out = text.into_raw();
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn ofa_automaton_state_count(automaton: *const OfaAutomaton) -> usize {
    automaton.as_ref().map_or(0, |a| a.ofa.state_count())
}

#[no_mangle]
pub unsafe extern "C" fn ofa_automaton_class_count(automaton: *const OfaAutomaton) -> usize {
    automaton.as_ref().map_or(0, |a| a.ofa.class_count())
}

/// Finds every end-of-match position in `len` bytes of UTF-8 input.
/// Positions count code points.
#[no_mangle]
pub unsafe extern "C" fn ofa_find(
    automaton: *const OfaAutomaton,
    input: *const u8,
    len: usize,
    out: *mut *mut OfaMatches,
) -> OfaStatus {
    guard(|| {
        let a = automaton.as_ref().ok_or_else(|| null("automaton"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let bytes: &[u8] = if len == 0 {
            &[]
        } else if input.is_null() {
            return Err(null("input"));
        } else {
            std::slice::from_raw_parts(input, len)
        };
        let text = decode_utf8(bytes).map_err(lib_err)?;
        let report = a.ofa.try_match(&text).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(OfaMatches {
            positions: report.positions,
            chars_read: report.chars_read,
            input_len: text.len(),
        }));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn ofa_matches_len(matches: *const OfaMatches) -> usize {
    matches.as_ref().map_or(0, |m| m.positions.len())
}

/// Pointer to `ofa_matches_len` ascending positions; valid until the
/// handle is freed.
#[no_mangle]
pub unsafe extern "C" fn ofa_matches_positions(matches: *const OfaMatches) -> *const usize {
    matches
        .as_ref()
        .map_or(ptr::null(), |m| m.positions.as_ptr())
}

#[no_mangle]
pub unsafe extern "C" fn ofa_matches_chars_read(matches: *const OfaMatches) -> usize {
    matches.as_ref().map_or(0, |m| m.chars_read)
}

/// Input length in code points.
#[no_mangle]
pub unsafe extern "C" fn ofa_matches_input_len(matches: *const OfaMatches) -> usize {
    matches.as_ref().map_or(0, |m| m.input_len)
}

#[no_mangle]
pub unsafe extern "C" fn ofa_matches_free(matches: *mut OfaMatches) {
    if !matches.is_null() {
        drop(Box::from_raw(matches));
    }
}

#[no_mangle]
pub unsafe extern "C" fn ofa_automaton_free(automaton: *mut OfaAutomaton) {
    if !automaton.is_null() {
        drop(Box::from_raw(automaton));
    }
}

#[no_mangle]
pub unsafe extern "C" fn ofa_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
