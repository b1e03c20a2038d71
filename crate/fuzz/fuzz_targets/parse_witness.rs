#![no_main]

use libfuzzer_sys::fuzz_target;
use lipgraph::io::{parse_witness, write_witness};

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(v) = parse_witness(s) {
            let text = write_witness(&v).unwrap();
            assert_eq!(parse_witness(&text).unwrap(), v);
        }
    }
});
