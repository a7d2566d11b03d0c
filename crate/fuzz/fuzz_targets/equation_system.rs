#![no_main]
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| orthomorph_fuzz::equation_system(data));
