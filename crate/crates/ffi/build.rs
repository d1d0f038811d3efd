use std::env;
use std::fs;
use std::path::PathBuf;

fn main() {
    let dir = PathBuf::from(env::var("CARGO_MANIFEST_DIR").expect("cargo sets CARGO_MANIFEST_DIR"));
    println!("cargo:rerun-if-changed=src/lib.rs");
    println!("cargo:rerun-if-changed=cbindgen.toml");
    let config =
        cbindgen::Config::from_file(dir.join("cbindgen.toml")).expect("cbindgen.toml parses");
    let bindings = cbindgen::Builder::new()
        .with_crate(&dir)
        .with_config(config)
        .generate()
        .expect("header generates");
    let mut text = Vec::new();
    bindings.write(&mut text);
    let header = dir.join("include/isobot.h");
    // Only touch the file when it changes so downstream builds stay cached.
    if fs::read(&header).ok().as_deref() != Some(text.as_slice()) {
        fs::create_dir_all(dir.join("include")).expect("include dir");
        fs::write(&header, text).expect("header written");
    }
}
