//! Refit the constants registry and print the fits; `--write` replaces
//! `data/constants.json`.

use heisenlab::constants::calibrate::calibrate_all;

fn main() {
    let cal = calibrate_all().expect("calibration runs");
    eprintln!("{}", serde_json::to_string_pretty(&cal).unwrap());
    let reg = cal.to_registry();
    if std::env::args().any(|a| a == "--write") {
        let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/constants.json");
        std::fs::write(path, reg.to_json()).expect("write registry");
        eprintln!("wrote {path}");
    } else {
        print!("{}", reg.to_json());
    }
}
