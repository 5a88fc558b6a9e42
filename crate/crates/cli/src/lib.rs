//! File formats, trace generators, benchmarks and the command-line front
//! end of the moonlight monitor.

pub mod automotive;
pub mod bench;
pub mod cli;
pub mod result;
pub mod sensor;
pub mod trace;

use moonlight_core::script::{load_script, CheckedScript};

pub const SENSOR_SCRIPT: &str = include_str!("../scripts/sensor.mls");
pub const AUTOMOTIVE_SCRIPT: &str = include_str!("../scripts/automotive.mls");

/// The sensor-network requirements.
pub fn sensor_script() -> CheckedScript {
    load_script(SENSOR_SCRIPT).expect("bundled script is valid")
}

/// The transmission requirements.
pub fn automotive_script() -> CheckedScript {
    load_script(AUTOMOTIVE_SCRIPT).expect("bundled script is valid")
}
