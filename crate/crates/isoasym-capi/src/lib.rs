//! C ABI over the isoasym core: opaque family handles, integer status
//! codes, and caller-freed strings. Error detail is kept in a
//! thread-local message reachable through `isoasym_last_error`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use isoasym::config::{build_family, read_config, BuiltFamily};
use isoasym::mesh::{obj_string, tessellate};
use isoasym::presets::{get_preset, Preset, PRESET_IDS};
use isoasym::report::report_to_json;
use isoasym::surface::evaluate_surface;
use isoasym::verify::{verify_family_report, verify_preset, ToleranceSet, VerificationReport};

/// Status codes returned by every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IsoasymStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    UnknownPreset = 3,
    InvalidConfig = 4,
    EvalError = 5,
    BadGrid = 6,
    Panic = 7,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let sanitized = msg.replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(sanitized).unwrap());
}

fn fail(code: IsoasymStatus, msg: &str) -> IsoasymStatus {
    set_error(msg);
    code
}

/// Opaque handle: a surface family plus everything needed to verify it.
pub struct IsoasymFamily {
    inner: FamilyKind,
}

enum FamilyKind {
    Preset(Preset),
    Config(BuiltFamily),
}

impl IsoasymFamily {
    fn family(&self) -> &isoasym::surface::SurfaceFamily {
        match &self.inner {
            FamilyKind::Preset(p) => &p.family,
            FamilyKind::Config(b) => &b.family,
        }
    }

    fn verify(&self, grid: (usize, usize)) -> VerificationReport {
        match &self.inner {
            FamilyKind::Preset(p) => verify_preset(p, grid, &ToleranceSet::default()),
            FamilyKind::Config(b) => verify_family_report(&b.id, &b.family, grid, &b.tolerances),
        }
    }
}

fn guarded(f: impl FnOnce() -> IsoasymStatus) -> IsoasymStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(code) => code,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic in isoasym".into());
            fail(IsoasymStatus::Panic, &msg)
        }
    }
}

unsafe fn cstr<'a>(p: *const c_char) -> Result<&'a str, IsoasymStatus> {
    if p.is_null() {
        return Err(fail(IsoasymStatus::NullArgument, "null string argument"));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(IsoasymStatus::InvalidUtf8, "argument is not valid UTF-8"))
}

fn hand_out(s: String, out: *mut *mut c_char) -> IsoasymStatus {
    let c = match CString::new(s) {
        Ok(c) => c,
        Err(_) => return fail(IsoasymStatus::EvalError, "output contained a NUL byte"),
    };
    unsafe { *out = c.into_raw() };
    IsoasymStatus::Ok
}

/// Build a family handle from a built-in preset id (aliases accepted).
/// On success `*out` owns the handle; free with `isoasym_family_free`.
#[no_mangle]
pub unsafe extern "C" fn isoasym_family_from_preset(
    id: *const c_char,
    out: *mut *mut IsoasymFamily,
) -> IsoasymStatus {
    guarded(|| {
        if out.is_null() {
            return fail(IsoasymStatus::NullArgument, "null out pointer");
        }
        let id = match cstr(id) {
            Ok(s) => s,
            Err(code) => return code,
        };
        match get_preset(id) {
            Ok(p) => {
                *out = Box::into_raw(Box::new(IsoasymFamily { inner: FamilyKind::Preset(p) }));
                IsoasymStatus::Ok
            }
            Err(e) => fail(IsoasymStatus::UnknownPreset, &e.to_string()),
        }
    })
}

/// Build a family handle from a JSON config document (same schema as the
/// CLI's config files).
#[no_mangle]
pub unsafe extern "C" fn isoasym_family_from_config_json(
    json: *const c_char,
    out: *mut *mut IsoasymFamily,
) -> IsoasymStatus {
    guarded(|| {
        if out.is_null() {
            return fail(IsoasymStatus::NullArgument, "null out pointer");
        }
        let text = match cstr(json) {
            Ok(s) => s,
            Err(code) => return code,
        };
        let built = read_config(text)
            .and_then(|cfg| build_family(&cfg));
        match built {
            Ok(b) => {
                *out = Box::into_raw(Box::new(IsoasymFamily { inner: FamilyKind::Config(b) }));
                IsoasymStatus::Ok
            }
            Err(e) => fail(IsoasymStatus::InvalidConfig, &e.to_string()),
        }
    })
}

/// Release a handle. Passing NULL is a no-op.
#[no_mangle]
pub unsafe extern "C" fn isoasym_family_free(fam: *mut IsoasymFamily) {
    if !fam.is_null() {
        drop(Box::from_raw(fam));
    }
}

/// Evaluate the surface at (u, v) into `out_xyz[0..3]`.
#[no_mangle]
pub unsafe extern "C" fn isoasym_family_eval(
    fam: *const IsoasymFamily,
    u: f64,
    v: f64,
    out_xyz: *mut f64,
) -> IsoasymStatus {
    guarded(|| {
        if fam.is_null() || out_xyz.is_null() {
            return fail(IsoasymStatus::NullArgument, "null handle or out pointer");
        }
        match evaluate_surface((*fam).family(), u, v) {
            Ok(q) => {
                let arr = q.as_array();
                std::ptr::copy_nonoverlapping(arr.as_ptr(), out_xyz, 3);
                IsoasymStatus::Ok
            }
            Err(e) => fail(IsoasymStatus::EvalError, &e.to_string()),
        }
    })
}

fn check_grid(nu: usize, nv: usize) -> Result<(), IsoasymStatus> {
    if nu < 2 || nv < 2 {
        return Err(fail(IsoasymStatus::BadGrid, "grid must be at least 2x2"));
    }
    Ok(())
}

/// Run the verification battery on an `nu` x `nv` grid and hand back the
/// JSON report. Free the string with `isoasym_string_free`.
#[no_mangle]
pub unsafe extern "C" fn isoasym_verify_json(
    fam: *const IsoasymFamily,
    nu: usize,
    nv: usize,
    out_json: *mut *mut c_char,
) -> IsoasymStatus {
    guarded(|| {
        if fam.is_null() || out_json.is_null() {
            return fail(IsoasymStatus::NullArgument, "null handle or out pointer");
        }
        if let Err(code) = check_grid(nu, nv) {
            return code;
        }
        hand_out(report_to_json(&(*fam).verify((nu, nv))), out_json)
    })
}

/// Gating verdict only: `*out_pass` is 1 when every gating check passed.
#[no_mangle]
pub unsafe extern "C" fn isoasym_verify_overall(
    fam: *const IsoasymFamily,
    nu: usize,
    nv: usize,
    out_pass: *mut i32,
) -> IsoasymStatus {
    guarded(|| {
        if fam.is_null() || out_pass.is_null() {
            return fail(IsoasymStatus::NullArgument, "null handle or out pointer");
        }
        if let Err(code) = check_grid(nu, nv) {
            return code;
        }
        *out_pass = i32::from((*fam).verify((nu, nv)).overall);
        IsoasymStatus::Ok
    })
}

/// Tessellate on an `nu` x `nv` grid and hand back Wavefront OBJ text.
/// Free the string with `isoasym_string_free`.
#[no_mangle]
pub unsafe extern "C" fn isoasym_mesh_obj(
    fam: *const IsoasymFamily,
    nu: usize,
    nv: usize,
    out_obj: *mut *mut c_char,
) -> IsoasymStatus {
    guarded(|| {
        if fam.is_null() || out_obj.is_null() {
            return fail(IsoasymStatus::NullArgument, "null handle or out pointer");
        }
        if let Err(code) = check_grid(nu, nv) {
            return code;
        }
        match tessellate((*fam).family(), nu, nv) {
            Ok(m) => hand_out(obj_string(&m), out_obj),
            Err(e) => fail(IsoasymStatus::EvalError, &e.to_string()),
        }
    })
}

/// Newline-separated list of preset ids, in the CLI's stable order.
/// Free with `isoasym_string_free`.
#[no_mangle]
pub unsafe extern "C" fn isoasym_preset_ids(out_ids: *mut *mut c_char) -> IsoasymStatus {
    guarded(|| {
        if out_ids.is_null() {
            return fail(IsoasymStatus::NullArgument, "null out pointer");
        }
        hand_out(PRESET_IDS.join("\n"), out_ids)
    })
}

/// Free a string returned by this library. Passing NULL is a no-op.
#[no_mangle]
pub unsafe extern "C" fn isoasym_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the most recent failure on this thread. The pointer stays
/// valid until the next failing call on the same thread; do not free it.
#[no_mangle]
pub unsafe extern "C" fn isoasym_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}
