#![no_main]
use libfuzzer_sys::fuzz_target;
use solomon_core::regulators::parse_units;

fuzz_target!(|data: &[u8]| {
    if data.is_empty() {
        return;
    }
    let p = [3u64, 5, 7, 13, 37][data[0] as usize % 5];
    if let Ok(s) = std::str::from_utf8(&data[1..]) {
        if let Ok(rows) = parse_units(s, p) {
            for r in rows {
                let _ = r.decoded(p);
            }
        }
    }
});
