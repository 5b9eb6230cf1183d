#![no_main]
use libfuzzer_sys::fuzz_target;
use solomon_core::fields::{parse_catalog, parse_catalog_line};

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(Some(f)) = parse_catalog_line(s) {
            // a parsed field must print back to a line describing the same field
            let again = parse_catalog_line(&f.to_catalog_line()).unwrap().unwrap();
            assert_eq!(f, again);
        }
        let _ = parse_catalog(s);
    }
});
