#![no_main]
use libfuzzer_sys::fuzz_target;
use solomon_core::classgrp::{emit_tower_data, parse_tower_data};

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(rows) = parse_tower_data(s) {
            assert_eq!(parse_tower_data(&emit_tower_data(&rows)).unwrap(), rows);
        }
    }
});
