use std::env;
use std::path::{Path, PathBuf};

/// The LAPACK backend emits `-lcblas`, but this distro ships the C BLAS
/// interface inside libopenblas rather than as a separate libcblas. Alias the
/// name in OUT_DIR so the linker finds it; with `--as-needed` the alias drops
/// out of the runtime dependencies unless CBLAS symbols are actually used.
fn main() {
    let candidates = [
        "/usr/lib/x86_64-linux-gnu/libcblas.so",
        "/usr/lib/libcblas.so",
    ];
    if candidates.iter().any(|p| Path::new(p).exists()) {
        return;
    }

    let sources = [
        "/usr/lib/x86_64-linux-gnu/libopenblas.so",
        "/usr/lib/libopenblas.so",
        "/usr/lib/x86_64-linux-gnu/libblas.so",
    ];
    let Some(source) = sources.iter().find(|p| Path::new(p).exists()) else {
        return;
    };

    let out_dir = PathBuf::from(env::var("OUT_DIR").expect("cargo sets OUT_DIR"));
    let alias = out_dir.join("libcblas.so");
    if !alias.exists() {
        std::os::unix::fs::symlink(source, &alias).expect("create libcblas.so alias");
    }
    println!("cargo:rustc-link-search=native={}", out_dir.display());
}
