#![no_main]

use fracdiff::greens::DensityProfile;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(profile) = DensityProfile::read_csv(data) else { return };
    let text = profile.to_csv_string();
    let back = DensityProfile::read_csv(text.as_bytes()).expect("written profile reads back");
    assert_eq!(back.values(), profile.values());
});
