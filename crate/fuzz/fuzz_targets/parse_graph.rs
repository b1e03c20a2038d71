#![no_main]

use libfuzzer_sys::fuzz_target;
use lipgraph::io::{parse_graph, write_graph};

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(v) = parse_graph(s) {
            let text = write_graph(&v).unwrap();
            assert_eq!(parse_graph(&text).unwrap(), v);
        }
    }
});
