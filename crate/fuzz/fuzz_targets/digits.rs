#![no_main]
use libfuzzer_sys::fuzz_target;
use solomon_core::padic::digits::{decode, encode};

fuzz_target!(|data: &[u8]| {
    if data.is_empty() {
        return;
    }
    let p = [2u64, 3, 5, 7, 31, 37, 101][data[0] as usize % 7];
    if let Ok(s) = std::str::from_utf8(&data[1..]) {
        if let Ok((v, n)) = decode(s, p) {
            assert_eq!(decode(&encode(v, p, n), p).unwrap(), (v, n));
        }
    }
});
