#![no_main]

use libfuzzer_sys::fuzz_target;
use pnh_core::root_system::{parse_root_spec, RootSystem};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(parts) = parse_root_spec(s) {
        let rank: usize = parts.iter().map(|(_, r)| r).sum();
        if rank <= 8 {
            if let Ok(rs) = RootSystem::from_spec_str(s) {
                assert_eq!(rs.rank(), rank);
            }
        }
    }
});
