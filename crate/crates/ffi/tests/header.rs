use std::path::PathBuf;
use std::process::Command;

#[test]
fn header_declares_the_api() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let header = std::fs::read_to_string(dir.join("include/orbitscope.h")).unwrap();
    for name in [
        "os_spec_new",
        "os_spec_free",
        "os_point_new_pair",
        "os_point_free",
        "os_classify",
        "os_levi_signature",
        "os_verify_table_json",
        "os_string_free",
        "os_last_error",
        "OS_STATUS_OK = 0",
    ] {
        assert!(header.contains(name), "missing {name}");
    }
}

#[test]
fn header_compiles_as_c() {
    let Ok(out) = Command::new("cc").arg("--version").output() else {
        eprintln!("no C compiler; skipped");
        return;
    };
    assert!(out.status.success());
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let src = std::env::temp_dir().join(format!("orbitscope_header_{}.c", std::process::id()));
    std::fs::write(
        &src,
        "#include \"orbitscope.h\"\nint main(void) { OsSpec *s = 0; return os_spec_new(OS_FAMILY_SU, 1, &s) == OS_STATUS_OK ? 0 : 1; }\n",
    )
    .unwrap();
    let status = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(dir.join("include"))
        .arg(&src)
        .status()
        .unwrap();
    let _ = std::fs::remove_file(&src);
    assert!(status.success());
}
