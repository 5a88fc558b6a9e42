//! Random sensor networks: devices placed uniformly in a square, linked
//! when closer than a radio radius.
//!
//! Generation draws from ChaCha8 seeded with the given `u64`, in this order:
//! positions (x then y per device), a shuffle assigning roles, initial
//! battery and temperature per device, then per step the battery drain and
//! temperature change of each device and, for mobile networks, each
//! device's displacement.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::trace::{FrameSection, SignalSection, TraceFile, VarDecl};

pub const COORDINATOR: f64 = 1.0;
pub const ROUTER: f64 = 2.0;
pub const END_DEVICE: f64 = 3.0;

#[derive(Debug, Clone, PartialEq)]
pub struct SensorParams {
    pub nodes: usize,
    /// Radio range; `None` picks [`calibrated_radius`].
    pub radius: Option<f64>,
    pub side: f64,
    pub steps: usize,
    pub seed: u64,
    /// Devices drift every step, producing one graph per time point.
    pub mobile: bool,
}

impl SensorParams {
    pub fn new(nodes: usize, steps: usize, seed: u64) -> Self {
        SensorParams {
            nodes,
            radius: None,
            side: DEFAULT_SIDE,
            steps,
            seed,
            mobile: false,
        }
    }

    pub fn radius(&self) -> f64 {
        self.radius.unwrap_or_else(|| calibrated_radius(self.nodes, self.side))
    }
}

pub const DEFAULT_SIDE: f64 = 1000.0;

/// Mean out-degree aimed for by [`calibrated_radius`]: 17 at 100 devices and
/// 8 at 1000, interpolated as a power law.
pub fn target_degree(nodes: usize) -> f64 {
    let slope = (8.0f64 / 17.0).log10();
    17.0 * (nodes as f64 / 100.0).powf(slope)
}

/// Probability that two uniform points of the unit square lie within `a`
/// of each other, for `a <= 1`.
fn link_probability(a: f64) -> f64 {
    std::f64::consts::PI * a * a - 8.0 / 3.0 * a.powi(3) + a.powi(4) / 2.0
}

/// The radius whose expected mean degree is [`target_degree`], accounting
/// for the square's border.
pub fn calibrated_radius(nodes: usize, side: f64) -> f64 {
    if nodes < 2 {
        return side / 2.0;
    }
    let p = (target_degree(nodes) / (nodes - 1) as f64).min(0.4);
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..60 {
        let mid = (lo + hi) / 2.0;
        if link_probability(mid) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    side * (lo + hi) / 2.0
}

fn frame(t: f64, positions: &[(f64, f64)], radius: f64) -> FrameSection {
    let mut edges = Vec::new();
    for a in 0..positions.len() {
        for b in a + 1..positions.len() {
            let (dx, dy) = (positions[a].0 - positions[b].0, positions[a].1 - positions[b].1);
            let d = dx.hypot(dy);
            if d <= radius {
                let labels = BTreeMap::from([("dist".to_string(), d), ("hop".to_string(), 1.0)]);
                edges.push((a, b, labels));
            }
        }
    }
    FrameSection {
        t,
        undirected: true,
        edges,
    }
}

/// Device roles: one coordinator, `round(0.2 n)` routers, the rest end
/// devices.
pub fn roles(nodes: usize, rng: &mut impl Rng) -> Vec<f64> {
    let routers = ((nodes as f64 * 0.2).round() as usize).min(nodes.saturating_sub(1));
    let mut roles = vec![END_DEVICE; nodes];
    if nodes > 0 {
        roles[0] = COORDINATOR;
    }
    roles[1..=routers].fill(ROUTER);
    roles.shuffle(rng);
    roles
}

pub fn generate_sensor_network(p: &SensorParams) -> TraceFile {
    assert!(p.nodes >= 1 && p.steps >= 1 && p.side > 0.0, "invalid sensor parameters");
    let radius = p.radius();
    assert!(radius > 0.0, "radius must be positive");
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let n = p.nodes;
    let mut positions: Vec<(f64, f64)> = (0..n)
        .map(|_| (rng.gen_range(0.0..p.side), rng.gen_range(0.0..p.side)))
        .collect();
    let role = roles(n, &mut rng);
    let mut battery: Vec<f64> = (0..n).map(|_| rng.gen_range(0.2..1.0)).collect();
    let mut temperature: Vec<f64> = (0..n).map(|_| rng.gen_range(15.0..30.0)).collect();

    let mut values = vec![Vec::with_capacity(p.steps); n];
    let mut frames = vec![frame(0.0, &positions, radius)];
    for step in 0..p.steps {
        if step > 0 {
            for l in 0..n {
                battery[l] = (battery[l] - rng.gen_range(0.0..0.02)).max(0.0);
                temperature[l] += rng.gen_range(-0.5..0.5);
            }
            if p.mobile {
                let speed = radius / 4.0;
                for pos in &mut positions {
                    pos.0 = (pos.0 + rng.gen_range(-speed..speed)).clamp(0.0, p.side);
                    pos.1 = (pos.1 + rng.gen_range(-speed..speed)).clamp(0.0, p.side);
                }
                frames.push(frame(step as f64, &positions, radius));
            }
        }
        for l in 0..n {
            values[l].push(vec![role[l], battery[l], temperature[l]]);
        }
    }
    TraceFile {
        times: (0..p.steps).map(|s| s as f64).collect(),
        locations: None,
        signals: SignalSection {
            schema: vec![
                VarDecl {
                    name: "nodeType".into(),
                    ty: "int".into(),
                },
                VarDecl {
                    name: "battery".into(),
                    ty: "real".into(),
                },
                VarDecl {
                    name: "temperature".into(),
                    ty: "real".into(),
                },
            ],
            values,
        },
        edge_labels: Some(vec!["dist".into(), "hop".into()]),
        frames: Some(frames),
    }
}
