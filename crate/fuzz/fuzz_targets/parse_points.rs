#![no_main]

use libfuzzer_sys::fuzz_target;
use lipgraph::io::{parse_points, write_points};

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(v) = parse_points(s) {
            let text = write_points(&v).unwrap();
            assert_eq!(parse_points(&text).unwrap(), v);
        }
    }
});
