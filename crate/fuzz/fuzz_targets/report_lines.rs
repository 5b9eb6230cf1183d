#![no_main]
use libfuzzer_sys::fuzz_target;
use solomon_core::report::{merge, parse_report_lines};

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(lines) = parse_report_lines(s) {
            let (once, _) = merge(&[lines.clone()]);
            let (twice, summary) = merge(&[lines.clone(), lines]);
            assert_eq!(once, twice);
            assert_eq!(summary.total, twice.len());
        }
    }
});
