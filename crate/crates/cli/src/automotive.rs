//! Synthetic engine-speed / vehicle-speed traces standing in for a
//! simulated automatic transmission.
//!
//! The vehicle speed `v` (mph) follows a first-order lag towards a target
//! that is redrawn every 2 to 8 time units. The engine speed `omega` (RPM)
//! is an idle offset plus `v` times the ratio of a gear chosen from `v`, so
//! it climbs towards 5800 RPM before every upshift. All draws come from
//! ChaCha8 seeded with the `u64` seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::trace::{SignalSection, TraceFile, VarDecl};

pub const SAMPLING: f64 = 0.01;
pub const OMEGA_THRESHOLDS: [f64; 4] = [4500.0, 5000.0, 5200.0, 5500.0];
pub const SPEED_THRESHOLDS: [f64; 4] = [120.0, 160.0, 170.0, 200.0];
pub const HORIZONS: [f64; 4] = [4.0, 8.0, 10.0, 20.0];
pub const LENGTHS: [usize; 2] = [6400, 12800];

const IDLE: f64 = 800.0;
const PEAK: f64 = 5800.0;
const SHIFTS: [f64; 5] = [30.0, 60.0, 100.0, 150.0, 220.0];
const TAU: f64 = 3.0;
const SHIFT_FLOOR: f64 = 3000.0;

/// One benchmark configuration: the thresholds and horizon instantiate the
/// requirement templates, the length and seed select the trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchmarkSpec {
    pub omega_bar: f64,
    pub v_bar: f64,
    pub horizon: f64,
    pub samples: usize,
    pub seed: u64,
}

impl BenchmarkSpec {
    pub fn is_valid(&self) -> bool {
        OMEGA_THRESHOLDS.contains(&self.omega_bar)
            && SPEED_THRESHOLDS.contains(&self.v_bar)
            && HORIZONS.contains(&self.horizon)
            && LENGTHS.contains(&self.samples)
    }
}

/// Linear in `v` within each gear, from the gear's floor up to `PEAK` at
/// the shift point; upshifts drop the engine back to `SHIFT_FLOOR`.
fn engine_speed(v: f64) -> f64 {
    let mut lower = 0.0;
    for top in SHIFTS {
        if v <= top {
            let floor = if lower == 0.0 { IDLE } else { SHIFT_FLOOR };
            return floor + (v - lower) / (top - lower) * (PEAK - floor);
        }
        lower = top;
    }
    PEAK
}

/// `samples` points of `omega` and `v`, `SAMPLING` apart from time 0.
pub fn generate_automotive_trace(samples: usize, seed: u64) -> TraceFile {
    assert!(samples >= 1, "a trace needs at least one sample");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v: f64 = rng.gen_range(0.0..40.0);
    let mut target = rng.gen_range(0.0..220.0);
    let mut until = rng.gen_range(2.0..8.0);
    let alpha = SAMPLING / TAU;
    let mut rows = Vec::with_capacity(samples);
    for i in 0..samples {
        let t = i as f64 * SAMPLING;
        if t >= until {
            target = rng.gen_range(0.0..220.0);
            until = t + rng.gen_range(2.0..8.0);
        }
        v += alpha * (target - v);
        let omega = (engine_speed(v) + rng.gen_range(-20.0..20.0)).clamp(0.0, 6500.0);
        rows.push(vec![omega, v]);
    }
    TraceFile {
        times: (0..samples).map(|i| i as f64 * SAMPLING).collect(),
        locations: None,
        signals: SignalSection {
            schema: vec![
                VarDecl {
                    name: "omega".into(),
                    ty: "real".into(),
                },
                VarDecl {
                    name: "v".into(),
                    ty: "real".into(),
                },
            ],
            values: vec![rows],
        },
        edge_labels: None,
        frames: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn timestamps_follow_the_sampling_rate() {
        let file = generate_automotive_trace(6400, 0);
        assert_eq!(file.times.len(), 6400);
        assert!((file.times[6399] - 63.99).abs() < 1e-9);
        file.into_trace().unwrap();
    }

    #[test]
    fn deterministic_per_seed() {
        assert_eq!(generate_automotive_trace(500, 4), generate_automotive_trace(500, 4));
        assert_ne!(generate_automotive_trace(500, 4), generate_automotive_trace(500, 5));
    }

    #[test]
    fn engine_speed_crosses_the_thresholds() {
        let mut crossings = [0usize; 4];
        for seed in 0..20 {
            let file = generate_automotive_trace(12800, seed);
            let omega: Vec<f64> = file.signals.values[0].iter().map(|r| r[0]).collect();
            for (k, bar) in OMEGA_THRESHOLDS.iter().enumerate() {
                if omega.windows(2).any(|w| (w[0] < *bar) != (w[1] < *bar)) {
                    crossings[k] += 1;
                }
            }
        }
        assert!(crossings.iter().all(|&c| c >= 1), "{crossings:?}");
    }

    #[test]
    fn speed_reaches_the_lower_thresholds() {
        let reached = (0..20).any(|seed| {
            let file = generate_automotive_trace(12800, seed);
            file.signals.values[0].iter().any(|r| r[1] >= SPEED_THRESHOLDS[0])
        });
        assert!(reached);
    }
}
