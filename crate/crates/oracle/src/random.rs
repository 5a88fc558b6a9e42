//! Random small traces and formulas for equivalence testing.
//!
//! Edge lengths and time stamps are small dyadic numbers, so every sum the
//! engine and the oracle form is exact regardless of association order.

use std::sync::Arc;

use moonlight_core::script::ast::{
    Atom, BinTemporalOp, Bound, CmpOp, DistanceExpr, Expr, Formula, IntervalExpr, SpatialOp, TemporalOp,
};
use moonlight_core::signal::{SpatioTemporalSignal, VarSpec, VarType};
use moonlight_core::space::{DynamicSpatialModel, Edge, SpatialModel};
use moonlight_core::time::TimeGrid;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::OracleBudget;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OpKind {
    Until,
    Since,
    Eventually,
    Globally,
    Once,
    Historically,
    Reach,
    Escape,
    Somewhere,
    Everywhere,
}

impl OpKind {
    pub const ALL: [OpKind; 10] = [
        OpKind::Until,
        OpKind::Since,
        OpKind::Eventually,
        OpKind::Globally,
        OpKind::Once,
        OpKind::Historically,
        OpKind::Reach,
        OpKind::Escape,
        OpKind::Somewhere,
        OpKind::Everywhere,
    ];

    pub fn name(self) -> &'static str {
        match self {
            OpKind::Until => "until",
            OpKind::Since => "since",
            OpKind::Eventually => "eventually",
            OpKind::Globally => "globally",
            OpKind::Once => "once",
            OpKind::Historically => "historically",
            OpKind::Reach => "reach",
            OpKind::Escape => "escape",
            OpKind::Somewhere => "somewhere",
            OpKind::Everywhere => "everywhere",
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct GenOptions {
    pub max_locations: usize,
    pub max_times: usize,
    /// Depth of the whole formula, atoms counting as 1.
    pub max_depth: usize,
    pub equality_atoms: bool,
    /// Probability of each ordered pair being an edge.
    pub edge_probability: f64,
}

impl Default for GenOptions {
    fn default() -> Self {
        GenOptions {
            max_locations: 6,
            max_times: 4,
            max_depth: 3,
            equality_atoms: true,
            edge_probability: 0.35,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Instance {
    pub signal: SpatioTemporalSignal,
    pub model: DynamicSpatialModel,
    pub edge_types: Vec<VarSpec>,
    pub formula: Formula,
}

impl Instance {
    /// A budget whose walk cap provably covers every operator in the
    /// formula: simple paths have fewer than `L` edges, and unbounded lower
    /// bounds add at most `lo / min_length` more (all lengths are >= 1).
    pub fn budget(&self) -> OracleBudget {
        OracleBudget {
            max_locations: 6,
            max_time_points: 8,
            max_path_len: (self.signal.locations() + MAX_SPATIAL_LO as usize).max(5),
            max_distance: 16.0,
        }
    }
}

const MAX_SPATIAL_LO: u32 = 2;

pub fn schema() -> Vec<VarSpec> {
    vec![
        VarSpec::new("x", VarType::Real),
        VarSpec::new("y", VarType::Real),
        VarSpec::new("k", VarType::Int),
    ]
}

pub fn edge_types() -> Vec<VarSpec> {
    vec![VarSpec::new("hop", VarType::Int), VarSpec::new("dist", VarType::Real)]
}

pub fn random_signal(rng: &mut impl Rng, n: usize, len: usize) -> SpatioTemporalSignal {
    let mut t = rng.gen_range(0..3) as f64 * 0.5;
    let mut points = Vec::with_capacity(len);
    for _ in 0..len {
        points.push(t);
        t += rng.gen_range(1..4) as f64 * 0.5;
    }
    let values = (0..n)
        .map(|_| {
            (0..len)
                .map(|_| {
                    vec![
                        rng.gen_range(-6..=6) as f64 * 0.5,
                        rng.gen_range(-6..=6) as f64 * 0.5,
                        rng.gen_range(0..4) as f64,
                    ]
                })
                .collect()
        })
        .collect();
    SpatioTemporalSignal::new(TimeGrid::new(points).expect("increasing"), schema(), values).expect("well formed")
}

pub fn random_graph(rng: &mut impl Rng, n: usize, p: f64) -> SpatialModel {
    let labels: Arc<[String]> = edge_types().into_iter().map(|v| v.name).collect();
    let mut edges = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if a != b && rng.gen_bool(p) {
                edges.push(Edge {
                    source: a,
                    target: b,
                    labels: vec![1.0, [1.0, 1.5, 2.0][rng.gen_range(0..3)]],
                });
            }
        }
    }
    SpatialModel::new(n, labels, edges).expect("valid graph")
}

/// One or two frames; the second, if any, starts inside the grid.
pub fn random_model(rng: &mut impl Rng, signal: &SpatioTemporalSignal, p: f64) -> DynamicSpatialModel {
    let n = signal.locations();
    let points = signal.grid().points();
    let mut frames = vec![(points[0], random_graph(rng, n, p))];
    if points.len() > 1 && rng.gen_bool(0.3) {
        let t = points[rng.gen_range(1..points.len())];
        frames.push((t, random_graph(rng, n, p)));
    }
    DynamicSpatialModel::new(frames).expect("ordered frames")
}

pub fn random_instance(rng: &mut impl Rng, root: OpKind, opts: &GenOptions) -> Instance {
    let n = rng.gen_range(1..=opts.max_locations);
    let len = rng.gen_range(1..=opts.max_times);
    let signal = random_signal(rng, n, len);
    let model = random_model(rng, &signal, opts.edge_probability);
    let formula = FormulaGen { opts }.rooted(rng, root, opts.max_depth);
    Instance {
        signal,
        model,
        edge_types: edge_types(),
        formula,
    }
}

struct FormulaGen<'a> {
    opts: &'a GenOptions,
}

fn num(x: f64) -> Expr {
    Expr::Num(x)
}

impl FormulaGen<'_> {
    fn atom(&self, rng: &mut impl Rng) -> Formula {
        let ops: &[CmpOp] = if self.opts.equality_atoms {
            &[CmpOp::Lt, CmpOp::Le, CmpOp::Gt, CmpOp::Ge, CmpOp::Eq, CmpOp::Ne]
        } else {
            &[CmpOp::Lt, CmpOp::Le, CmpOp::Gt, CmpOp::Ge]
        };
        let op = *ops.choose(rng).unwrap();
        let var = ["x", "y", "k"][rng.gen_range(0..3)];
        let lhs = match rng.gen_range(0..4) {
            0 => Expr::bin(moonlight_core::script::ast::ArithOp::Sub, Expr::var("x"), Expr::var("y")),
            _ => Expr::var(var),
        };
        let rhs = if var == "k" { num(rng.gen_range(0..4) as f64) } else { num(rng.gen_range(-4..=4) as f64 * 0.5) };
        Formula::Atom(Atom { op, lhs, rhs })
    }

    fn temporal_interval(&self, rng: &mut impl Rng) -> Option<IntervalExpr> {
        match rng.gen_range(0..4) {
            0 => None,
            1 => Some(IntervalExpr {
                lo: Bound::Num(rng.gen_range(0..4) as f64 * 0.5),
                hi: Bound::Inf,
            }),
            _ => {
                let lo = rng.gen_range(0..4) as f64 * 0.5;
                Some(IntervalExpr::new(lo, lo + rng.gen_range(0..5) as f64 * 0.5))
            }
        }
    }

    fn spatial_interval(&self, rng: &mut impl Rng) -> Option<IntervalExpr> {
        match rng.gen_range(0..4) {
            0 => None,
            1 => Some(IntervalExpr {
                lo: Bound::Num(rng.gen_range(0..=MAX_SPATIAL_LO) as f64),
                hi: Bound::Inf,
            }),
            _ => {
                let lo = rng.gen_range(0..=2) as f64;
                Some(IntervalExpr::new(lo, lo + rng.gen_range(0..=2) as f64 + rng.gen_range(0..2) as f64 * 0.5))
            }
        }
    }

    fn distance(&self, rng: &mut impl Rng) -> Option<DistanceExpr> {
        match rng.gen_range(0..5) {
            0 => None,
            1 => Some(DistanceExpr::Num(1.0)),
            2 | 3 => Some(DistanceExpr::Label("hop".into())),
            _ => Some(DistanceExpr::Label("dist".into())),
        }
    }

    fn any(&self, rng: &mut impl Rng, depth: usize) -> Formula {
        if depth <= 1 || rng.gen_bool(0.3) {
            return self.atom(rng);
        }
        match rng.gen_range(0..4) {
            0 => Formula::not(self.any(rng, depth - 1)),
            1 => Formula::and(self.any(rng, depth - 1), self.any(rng, depth - 1)),
            2 => Formula::or(self.any(rng, depth - 1), self.any(rng, depth - 1)),
            _ => {
                let op = *OpKind::ALL.choose(rng).unwrap();
                self.rooted(rng, op, depth)
            }
        }
    }

    fn rooted(&self, rng: &mut impl Rng, root: OpKind, depth: usize) -> Formula {
        let depth = depth.max(2);
        let sub = |rng: &mut _| self.any(rng, depth - 1);
        match root {
            OpKind::Until | OpKind::Since => {
                let op = if root == OpKind::Until { BinTemporalOp::Until } else { BinTemporalOp::Since };
                let (l, r) = (sub(rng), sub(rng));
                Formula::binary(op, self.temporal_interval(rng), l, r)
            }
            OpKind::Eventually | OpKind::Globally | OpKind::Once | OpKind::Historically => {
                let op = match root {
                    OpKind::Eventually => TemporalOp::Eventually,
                    OpKind::Globally => TemporalOp::Globally,
                    OpKind::Once => TemporalOp::Once,
                    _ => TemporalOp::Historically,
                };
                let arg = sub(rng);
                Formula::temporal(op, self.temporal_interval(rng), arg)
            }
            OpKind::Reach => {
                let (l, r) = (sub(rng), sub(rng));
                Formula::reach(self.distance(rng), self.spatial_interval(rng), l, r)
            }
            OpKind::Escape | OpKind::Somewhere | OpKind::Everywhere => {
                let op = match root {
                    OpKind::Escape => SpatialOp::Escape,
                    OpKind::Somewhere => SpatialOp::Somewhere,
                    _ => SpatialOp::Everywhere,
                };
                let arg = sub(rng);
                Formula::spatial(op, self.distance(rng), self.spatial_interval(rng), arg)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;

    #[test]
    fn instances_respect_limits() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let opts = GenOptions::default();
        for _ in 0..200 {
            for op in OpKind::ALL {
                let inst = random_instance(&mut rng, op, &opts);
                assert!(inst.formula.depth() <= 3, "{}", inst.formula);
                assert!(inst.signal.locations() <= 6);
                assert!(inst.signal.grid().len() <= 4);
            }
        }
    }
}
