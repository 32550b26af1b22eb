use std::ffi::{CStr, CString};
use std::ptr;

use tasbench_ffi::*;

fn corpus(name: &str) -> CString {
    let path = format!("{}/../core/corpus/{name}", env!("CARGO_MANIFEST_DIR"));
    CString::new(std::fs::read_to_string(path).unwrap()).unwrap()
}

fn last_error() -> String {
    let p = tasbench_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

unsafe fn parse(text: &CString) -> *mut TasbenchSystem {
    let mut sys = ptr::null_mut();
    assert_eq!(tasbench_system_parse(text.as_ptr(), &mut sys), TasbenchStatus::Ok);
    sys
}

unsafe fn compiled(sys: *const TasbenchSystem) -> *mut TasbenchCompiled {
    let mut cs = ptr::null_mut();
    assert_eq!(tasbench_compile(sys, false, &mut cs), TasbenchStatus::Ok);
    cs
}

#[test]
fn elbow_end_to_end() {
    unsafe {
        let sys = parse(&corpus("elbow.tas"));
        assert_eq!(tasbench_system_tile_count(sys), 4);

        let mut ok = false;
        let mut witness = ptr::null_mut();
        assert_eq!(tasbench_check_local_consistency(sys, 25, &mut ok, &mut witness), TasbenchStatus::Ok);
        assert!(ok);
        assert!(witness.is_null());

        let cs = compiled(sys);
        assert_eq!(tasbench_compiled_entry_count(cs), 1949);
        assert!(tasbench_compiled_table_len(cs) > 0);

        let (mut sel, mut n) = (0u64, 0u64);
        assert_eq!(tasbench_lookup(cs, 15, ptr::null(), &mut sel, &mut n), TasbenchStatus::Ok);
        assert_eq!((sel, n), (0, 1));

        let mut passed = false;
        let mut report = ptr::null_mut();
        assert_eq!(tasbench_verify(cs, 6, &mut passed, &mut report), TasbenchStatus::Ok);
        assert!(passed);
        let text = CStr::from_ptr(report).to_str().unwrap().to_owned();
        assert!(text.lines().any(|l| l == "result pass"));
        tasbench_string_free(report);

        let a = tasbench_compiled_to_text(cs);
        let b = tasbench_compiled_to_text(cs);
        assert_eq!(CStr::from_ptr(a), CStr::from_ptr(b));
        tasbench_string_free(a);
        tasbench_string_free(b);

        tasbench_compiled_free(cs);
        tasbench_system_free(sys);
    }
}

#[test]
fn nondeterministic_selection_follows_bits() {
    unsafe {
        let sys = parse(&corpus("nondet_elbow.tas"));
        let cs = compiled(sys);
        let mut seen = [0u32; 2];
        for v in 0..16u32 {
            let bits = CString::new(format!("{v:04b}")).unwrap();
            let (mut sel, mut n) = (0u64, 0u64);
            assert_eq!(tasbench_lookup(cs, 1948, bits.as_ptr(), &mut sel, &mut n), TasbenchStatus::Ok);
            assert_eq!(n, 2);
            seen[sel as usize] += 1;
        }
        assert_eq!(seen, [8, 8]);
        tasbench_compiled_free(cs);
        tasbench_system_free(sys);
    }
}

#[test]
fn lookup_errors_map_to_codes() {
    unsafe {
        let sys = parse(&corpus("elbow.tas"));
        let cs = compiled(sys);
        let (mut sel, mut n) = (0u64, 0u64);
        assert_eq!(tasbench_lookup(cs, 16, ptr::null(), &mut sel, &mut n), TasbenchStatus::EmptyEntry);
        assert!(last_error().contains("16"));
        assert_eq!(tasbench_lookup(cs, 5000, ptr::null(), &mut sel, &mut n), TasbenchStatus::AddressRange);
        let bad = CString::new("01x").unwrap();
        assert_eq!(tasbench_lookup(cs, 15, bad.as_ptr(), &mut sel, &mut n), TasbenchStatus::InvalidBits);
        assert_eq!(tasbench_lookup(cs, 15, ptr::null(), ptr::null_mut(), &mut n), TasbenchStatus::NullArgument);
        // a successful call clears the message
        assert_eq!(tasbench_lookup(cs, 15, ptr::null(), &mut sel, &mut n), TasbenchStatus::Ok);
        assert!(tasbench_last_error().is_null());
        tasbench_compiled_free(cs);
        tasbench_system_free(sys);
    }
}

#[test]
fn inconsistent_systems() {
    unsafe {
        let sys = parse(&corpus("mismatch.tas"));
        let mut ok = true;
        let mut witness = ptr::null_mut();
        assert_eq!(tasbench_check_local_consistency(sys, 25, &mut ok, &mut witness), TasbenchStatus::Ok);
        assert!(!ok);
        assert!(!witness.is_null());
        tasbench_string_free(witness);

        let mut cs = ptr::null_mut();
        assert_eq!(tasbench_compile(sys, false, &mut cs), TasbenchStatus::NotLocallyConsistent);
        assert!(cs.is_null());
        assert!(!last_error().is_empty());
        tasbench_system_free(sys);
    }
}

#[test]
fn bad_arguments() {
    unsafe {
        let mut sys = ptr::null_mut();
        let text = CString::new("tile A N=x:9 E=-:0 S=-:0 W=-:0\n").unwrap();
        assert_eq!(tasbench_system_parse(text.as_ptr(), &mut sys), TasbenchStatus::Parse);
        assert!(sys.is_null());
        assert_eq!(tasbench_system_parse(ptr::null(), &mut sys), TasbenchStatus::NullArgument);
        let invalid = [0xffu8, 0];
        assert_eq!(tasbench_system_parse(invalid.as_ptr().cast(), &mut sys), TasbenchStatus::InvalidUtf8);

        let mut cs = ptr::null_mut();
        assert_eq!(tasbench_compile(ptr::null(), false, &mut cs), TasbenchStatus::NullArgument);
        assert_eq!(tasbench_system_tile_count(ptr::null()), 0);
        assert_eq!(tasbench_compiled_entry_count(ptr::null()), 0);
        assert!(tasbench_compiled_to_text(ptr::null()).is_null());
        tasbench_system_free(ptr::null_mut());
        tasbench_compiled_free(ptr::null_mut());
        tasbench_string_free(ptr::null_mut());
    }
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/tasbench.h")).unwrap();
    let source = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/src/lib.rs")).unwrap();
    let exports: Vec<&str> = source
        .lines()
        .filter_map(|l| l.split("extern \"C\" fn ").nth(1))
        .map(|rest| rest.split('(').next().unwrap())
        .collect();
    assert!(exports.len() >= 12);
    for name in exports {
        assert!(header.contains(&format!("{name}(")), "{name} missing from header");
    }
    assert!(header.contains("typedef struct TasbenchSystem TasbenchSystem;"));
    assert!(header.contains("TASBENCH_STATUS_OK = 0"));
}
