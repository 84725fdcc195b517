use std::path::{Path, PathBuf};
use std::process::Command;

fn shared_lib_dir() -> Option<PathBuf> {
    let exe = std::env::current_exe().unwrap();
    let deps = exe.parent()?;
    let found = [deps, deps.parent()?]
        .into_iter()
        .find(|d| d.join("librollup_da_ffi.so").exists())
        .map(Path::to_path_buf);
    found
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("include/rollup_da.h")).unwrap();
    for name in [
        "typedef struct RdaSrs RdaSrs;",
        "RDA_STATUS_BUFFER_TOO_SMALL = 4",
        "rda_srs_setup(",
        "rda_srs_free(",
        "rda_srs_serialize(",
        "rda_srs_deserialize(",
        "rda_pod_prove(",
        "rda_pod_verify(",
        "rda_part_witness(",
        "rda_poe_respond(",
        "rda_poe_verify(",
        "rda_lucky_number(",
        "rda_difficulty_target(",
        "rda_check_nonce(",
        "rda_difficulty_ratio(",
    ] {
        assert!(header.contains(name), "missing {name}");
    }
}

#[test]
fn c_program_links_and_runs() {
    if Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: no C compiler");
        return;
    }
    let lib_dir = shared_lib_dir().expect("cdylib built alongside the test");
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    let tmp = tempfile::tempdir().unwrap();
    let exe = tmp.path().join("roundtrip");
    let status = Command::new("cc")
        .arg(manifest.join("tests/c/roundtrip.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg("-L")
        .arg(&lib_dir)
        .arg(format!("-Wl,-rpath,{}", lib_dir.display()))
        .arg("-lrollup_da_ffi")
        .arg("-o")
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "ok 220 0 1.0\n");
}
