#![no_main]

use libfuzzer_sys::fuzz_target;
use pnh_core::export::parse_building_json;
use pnh_core::root_system::RootSystem;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let rs = RootSystem::from_spec_str("A3").expect("A3 builds");
    if let Ok(g) = parse_building_json(&rs, s, 1 << 12) {
        assert!(g.flats().iter().any(|f| f.dim == 3));
    }
});
