#![no_main]

use fracdiff::solver::SolutionField;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(field) = SolutionField::read_csv(data) else { return };
    let back = SolutionField::read_csv(field.to_csv_string().as_bytes()).expect("written field reads back");
    assert_eq!(back.values(), field.values());
    assert_eq!(back.times(), field.times());
});
