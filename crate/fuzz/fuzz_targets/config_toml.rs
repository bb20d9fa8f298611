#![no_main]

use fracdiff::config::RunConfig;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(config) = RunConfig::from_toml(text) else { return };
    RunConfig::from_toml(&config.to_toml()).expect("serialized config parses");
});
