#![no_main]

use std::sync::OnceLock;

use libfuzzer_sys::fuzz_target;
use pwforms::complex::SimplicialComplex;

fn base() -> &'static SimplicialComplex {
    static BASE: OnceLock<SimplicialComplex> = OnceLock::new();
    BASE.get_or_init(|| {
        pwforms::io::parse_complex(
            r#"{"vertices":["v0","v1","v2"],"simplices":[["v0","v1","v2"]]}"#,
            "fuzz-base",
        )
        .unwrap()
    })
}

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = pwforms::io::parse_piecewise_raw(text, "fuzz", base());
        let _ = pwforms::io::parse_piecewise(text, "fuzz", base());
    }
});
