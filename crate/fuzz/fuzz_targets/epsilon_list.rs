#![no_main]

use libfuzzer_sys::fuzz_target;
use pnh_core::exact::parse_rat_list;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(list) = parse_rat_list(s) {
        assert_eq!(list.len(), s.split(',').count());
    }
});
