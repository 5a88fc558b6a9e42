use std::sync::Arc;

use moonlight_core::domain::DomainKind;
use moonlight_core::engine::{monitor_formula, Trace};
use moonlight_core::script::parse_formula;
use moonlight_core::signal::{SpatioTemporalSignal, VarSpec, VarType};
use moonlight_core::space::{DynamicSpatialModel, Edge, SpatialModel};
use moonlight_core::time::TimeGrid;
use moonlight_oracle::random::{random_instance, GenOptions, Instance, OpKind};
use moonlight_oracle::{oracle_monitor, oracle_monitor_permuted, OracleBudget, OracleError};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn trace(inst: &Instance) -> Trace<'_> {
    Trace {
        signal: &inst.signal,
        model: Some(&inst.model),
        edge_types: Some(&inst.edge_types),
    }
}

#[test]
fn engine_agrees_with_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let opts = GenOptions::default();
    for op in OpKind::ALL {
        for domain in [DomainKind::Boolean, DomainKind::MinMax] {
            for _ in 0..60 {
                let inst = random_instance(&mut rng, op, &opts);
                let (engine, _) = monitor_formula(&inst.formula, &trace(&inst), domain).unwrap();
                let oracle = oracle_monitor(&inst.formula, &trace(&inst), domain, &inst.budget()).unwrap();
                assert_eq!(engine, oracle, "{}", inst.formula);
            }
        }
    }
}

#[test]
fn walk_cap_is_sufficient() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let opts = GenOptions {
        edge_probability: 0.3,
        ..GenOptions::default()
    };
    for op in [OpKind::Reach, OpKind::Escape, OpKind::Somewhere, OpKind::Everywhere] {
        for _ in 0..25 {
            let inst = random_instance(&mut rng, op, &opts);
            let base = inst.budget();
            let raised = OracleBudget {
                max_path_len: base.max_path_len + 2,
                ..base
            };
            let a = oracle_monitor(&inst.formula, &trace(&inst), DomainKind::MinMax, &base).unwrap();
            let b = oracle_monitor(&inst.formula, &trace(&inst), DomainKind::MinMax, &raised).unwrap();
            assert_eq!(a, b, "{}", inst.formula);
        }
    }
}

#[test]
fn unbounded_reach_on_six_nodes_needs_six_edges_at_most() {
    // a directed line, so the only witness walk is the full line
    let labels: Arc<[String]> = vec!["hop".to_string()].into();
    let edges = (1..6)
        .map(|i| Edge {
            source: i - 1,
            target: i,
            labels: vec![1.0],
        })
        .collect();
    let model = DynamicSpatialModel::constant(SpatialModel::new(6, labels, edges).unwrap());
    let values = (0..6).map(|l| vec![vec![if l == 5 { 1.0 } else { 0.0 }]]).collect();
    let signal = SpatioTemporalSignal::new(
        TimeGrid::new(vec![0.0]).unwrap(),
        vec![VarSpec::new("x", VarType::Real)],
        values,
    )
    .unwrap();
    let hop = [VarSpec::new("hop", VarType::Int)];
    let tr = Trace {
        signal: &signal,
        model: Some(&model),
        edge_types: Some(&hop),
    };
    let f = parse_formula("(x < 1) reach (hop) (x > 0)").unwrap();
    let at = |cap| {
        let budget = OracleBudget {
            max_path_len: cap,
            ..OracleBudget::default()
        };
        oracle_monitor(&f, &tr, DomainKind::Boolean, &budget).unwrap()
    };
    assert_eq!(at(6), at(9));
    assert_ne!(at(4), at(6));
    assert_eq!(at(6), monitor_formula(&f, &tr, DomainKind::Boolean).unwrap().0);
}

#[test]
fn enumeration_order_does_not_matter() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let opts = GenOptions::default();
    for op in OpKind::ALL {
        for _ in 0..20 {
            let inst = random_instance(&mut rng, op, &opts);
            let seed = rand::Rng::gen::<u64>(&mut rng);
            let shuffle_rng = std::cell::RefCell::new(ChaCha8Rng::seed_from_u64(seed));
            let shuffle = |v: &mut Vec<usize>| v.shuffle(&mut *shuffle_rng.borrow_mut());
            for domain in [DomainKind::Boolean, DomainKind::MinMax] {
                let plain = oracle_monitor(&inst.formula, &trace(&inst), domain, &inst.budget()).unwrap();
                let shuffled =
                    oracle_monitor_permuted(&inst.formula, &trace(&inst), domain, &inst.budget(), &shuffle).unwrap();
                assert_eq!(plain, shuffled);
            }
        }
    }
}

#[test]
fn degenerate_trace_is_atomic_composition() {
    let signal = SpatioTemporalSignal::new(
        TimeGrid::new(vec![0.0]).unwrap(),
        vec![VarSpec::new("x", VarType::Real)],
        vec![vec![vec![2.0]]],
    )
    .unwrap();
    let model = DynamicSpatialModel::constant(SpatialModel::new(1, Vec::<String>::new(), vec![]).unwrap());
    let tr = Trace {
        signal: &signal,
        model: Some(&model),
        edge_types: None,
    };
    let f = parse_formula("globally [0, 3] {(x > 1) until somewhere (x < 5)} & !once (x >= 3)").unwrap();
    let r = oracle_monitor(&f, &tr, DomainKind::MinMax, &OracleBudget::default()).unwrap();
    // min(min(1, 3), -(-1))
    assert_eq!(r.as_minmax().unwrap(), &[vec![1.0]]);
}

#[test]
fn refuses_instead_of_truncating() {
    let n = 7;
    let values = (0..n).map(|_| vec![vec![0.0]]).collect();
    let signal = SpatioTemporalSignal::new(
        TimeGrid::new(vec![0.0]).unwrap(),
        vec![VarSpec::new("x", VarType::Real)],
        values,
    )
    .unwrap();
    let model = DynamicSpatialModel::constant(SpatialModel::new(n, Vec::<String>::new(), vec![]).unwrap());
    let tr = Trace {
        signal: &signal,
        model: Some(&model),
        edge_types: None,
    };
    let f = parse_formula("somewhere (x > 0)").unwrap();
    assert!(matches!(
        oracle_monitor(&f, &tr, DomainKind::Boolean, &OracleBudget::default()),
        Err(OracleError::Budget(_))
    ));

    let line = SpatialModel::new(
        2,
        vec!["w".to_string()],
        vec![Edge {
            source: 0,
            target: 1,
            labels: vec![0.0],
        }],
    )
    .unwrap();
    let model = DynamicSpatialModel::constant(line);
    let signal = SpatioTemporalSignal::new(
        TimeGrid::new(vec![0.0]).unwrap(),
        vec![VarSpec::new("x", VarType::Real)],
        vec![vec![vec![0.0]], vec![vec![1.0]]],
    )
    .unwrap();
    let tr = Trace {
        signal: &signal,
        model: Some(&model),
        edge_types: None,
    };
    let f = parse_formula("somewhere (w) [0, 1] (x > 0)").unwrap();
    assert!(matches!(
        oracle_monitor(&f, &tr, DomainKind::Boolean, &OracleBudget::default()),
        Err(OracleError::NonPositiveLength { .. })
    ));
    let far = parse_formula("somewhere [0, 100] (x > 0)").unwrap();
    assert!(matches!(
        oracle_monitor(&far, &tr, DomainKind::Boolean, &OracleBudget::default()),
        Err(OracleError::NonPositiveLength { .. }) | Err(OracleError::Budget(_))
    ));
}

#[test]
fn spatial_fixtures_match_engine() {
    let labels: Arc<[String]> = vec!["hop".to_string()].into();
    let model = DynamicSpatialModel::constant(
        SpatialModel::new(
            2,
            labels,
            vec![Edge {
                source: 0,
                target: 1,
                labels: vec![1.0],
            }],
        )
        .unwrap(),
    );
    let signal = SpatioTemporalSignal::new(
        TimeGrid::new(vec![0.0]).unwrap(),
        vec![VarSpec::new("nodeType", VarType::Int)],
        vec![vec![vec![3.0]], vec![vec![2.0]]],
    )
    .unwrap();
    let hop = [VarSpec::new("hop", VarType::Int)];
    let tr = Trace {
        signal: &signal,
        model: Some(&model),
        edge_types: Some(&hop),
    };
    let f = parse_formula("(nodeType == 3) reach (hop) [0, 1] (nodeType == 2)").unwrap();
    let oracle = oracle_monitor(&f, &tr, DomainKind::Boolean, &OracleBudget::default()).unwrap();
    assert_eq!(oracle.as_boolean().unwrap(), &[vec![true], vec![true]]);
    assert_eq!(oracle, monitor_formula(&f, &tr, DomainKind::Boolean).unwrap().0);
}
