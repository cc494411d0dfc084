fn main() {
    // ndarray-linalg is built without a bundled backend; the system
    // OpenBLAS provides both BLAS and LAPACK symbols.
    println!("cargo:rustc-link-lib=dylib=openblas");
}
