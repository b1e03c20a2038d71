#![no_main]

use libfuzzer_sys::fuzz_target;
use lipgraph::io::{parse_cube_model, write_cube_model};

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(v) = parse_cube_model(s) {
            let text = write_cube_model(&v).unwrap();
            assert_eq!(parse_cube_model(&text).unwrap(), v);
        }
    }
});
