//! Compiles a C program against the generated header and links it with the
//! static library.

use std::path::{Path, PathBuf};
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "kdist.h"

int main(void) {
    KdistOptions *opts = kdist_options_new();
    if (kdist_options_set_tolerance(opts, 1e-4) != KDIST_STATUS_OK) return 10;
    KdistReport rep;
    if (kdist_ksquare_cdf(11, 1199, 1188, 10791, 972, opts, &rep) != KDIST_STATUS_OK) return 11;
    if (rep.value < 0.4338 || rep.value > 0.4340) return 12;
    kdist_options_free(opts);

    double v;
    KdistStatus s = kdist_corr_sampling_cdf(2, 0.1, 0.1, NULL, &v);
    if (s != KDIST_STATUS_DOMAIN) return 13;
    char buf[256];
    size_t n = kdist_last_error_message(buf, sizeof buf);
    if (n == 0 || strlen(buf) != n) return 14;
    printf("%.4f %s\n", rep.value, kdist_status_string(s));
    return 0;
}
"#;

fn profile_dir() -> PathBuf {
    // target/<profile>/deps/<test binary>
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

fn c_compiler() -> String {
    std::env::var("CC").unwrap_or_else(|_| "cc".to_string())
}

#[test]
fn header_compiles_and_links() {
    let include = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    let lib = profile_dir().join("libkdist_ffi.a");
    assert!(
        lib.exists(),
        "static library not found at {}",
        lib.display()
    );

    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("client.c");
    let bin = dir.path().join("client");
    std::fs::write(&src, PROGRAM).unwrap();

    let status = Command::new(c_compiler())
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(&include)
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm"])
        .arg("-o")
        .arg(&bin)
        .status()
        .expect("C compiler runs");
    assert!(status.success());

    let out = Command::new(&bin).output().unwrap();
    assert!(
        out.status.success(),
        "client exited with {:?}",
        out.status.code()
    );
    assert_eq!(
        String::from_utf8_lossy(&out.stdout).trim(),
        "0.4339 domain error"
    );
}
