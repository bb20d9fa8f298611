#![no_main]

use fracdiff::hfunction::HFunctionSpec;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(spec) = text.parse::<HFunctionSpec>() else { return };
    // printing reads back to the same spec
    let back: HFunctionSpec = spec.to_string().parse().expect("printed spec parses");
    assert_eq!(back, spec);
});
