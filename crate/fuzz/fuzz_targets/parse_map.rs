#![no_main]

use libfuzzer_sys::fuzz_target;
use lipgraph::io::{parse_map, write_map};

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(v) = parse_map(s) {
            let text = write_map(&v).unwrap();
            assert_eq!(parse_map(&text).unwrap(), v);
        }
    }
});
