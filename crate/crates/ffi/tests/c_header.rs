//! Compiles a C client against the generated header and the static library.

use std::path::{Path, PathBuf};
use std::process::Command;

const CLIENT: &str = r#"
#include <math.h>
#include <stdio.h>
#include "framelab.h"

int main(void) {
    const double mb[6] = {0.0, 1.0, -0.8660254037844386, -0.5, 0.8660254037844386, -0.5};
    FlFrame *f = NULL, *p = NULL;
    double dist_sq = 0.0;
    if (fl_frame_new(2, 3, mb, &f) != FL_STATUS_OK) return 1;
    if (fl_frame_closest_parseval(f, &p, &dist_sq) != FL_STATUS_OK) return 2;
    if (fabs(dist_sq - 0.1010205144) > 1e-9) return 3;
    FlFrame *c = NULL;
    if (fl_frame_naimark(f, 1e-10, &c) != FL_STATUS_NOT_PARSEVAL) return 4;
    if (fl_last_error_message() == NULL) return 5;
    printf("%s %.10f\n", fl_version(), dist_sq);
    fl_frame_free(p);
    fl_frame_free(f);
    return 0;
}
"#;

fn target_dir() -> PathBuf {
    // target/<profile>/deps/<test binary>
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(Path::parent).unwrap().to_path_buf()
}

#[test]
fn c_client_links_and_runs() {
    if Command::new("cc").arg("--version").output().is_err() {
        eprintln!("no C compiler; skipped");
        return;
    }
    let lib = target_dir().join("libframelab_ffi.a");
    if !lib.exists() {
        eprintln!("{} not built; skipped", lib.display());
        return;
    }
    let include = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("c_client");
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("client.c");
    let bin = dir.join("client");
    std::fs::write(&src, CLIENT).unwrap();

    let build = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-I"])
        .arg(&include)
        .arg(&src)
        .arg(&lib)
        .args(["-lm", "-lpthread", "-ldl", "-o"])
        .arg(&bin)
        .output()
        .unwrap();
    assert!(build.status.success(), "{}", String::from_utf8_lossy(&build.stderr));
    let run = Command::new(&bin).output().unwrap();
    assert!(run.status.success(), "exit {:?}", run.status.code());
    let stdout = String::from_utf8(run.stdout).unwrap();
    assert!(stdout.ends_with("0.1010205144\n"), "{stdout}");
}
