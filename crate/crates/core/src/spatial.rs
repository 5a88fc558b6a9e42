//! Spatial operators at one time instant over one graph.
//!
//! `reach` accumulates edge lengths along the walk it follows. `escape`
//! measures the shortest distance between the walk's start and its end.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rayon::prelude::*;
use rustc_hash::FxHashMap;
use thiserror::Error;

use crate::domain::{DistanceDomain, SignalDomain};
use crate::interval::Interval;
use crate::space::SpatialModel;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpatialError {
    #[error("expected {expected} location values, found {found}")]
    IndexMismatch { expected: usize, found: usize },
    #[error("edge {from}->{to} has length {value}, which is not a valid {domain} distance")]
    InvalidLength {
        from: usize,
        to: usize,
        value: f64,
        domain: &'static str,
    },
    #[error("edge label index {0} out of range")]
    UnknownLabel(usize),
}

/// How an edge's length is computed from its labels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LengthSpec {
    /// No distance expression: every edge has length 1.0.
    Unit,
    Label(usize),
    Constant(f64),
}

pub fn edge_length(labels: &[f64], spec: LengthSpec) -> f64 {
    match spec {
        LengthSpec::Unit => 1.0,
        LengthSpec::Label(i) => labels[i],
        LengthSpec::Constant(x) => x,
    }
}

/// Adjacency in both directions with edge lengths in a distance domain.
#[derive(Debug, Clone)]
pub struct LengthGraph<DD: DistanceDomain> {
    succ: Vec<Vec<(usize, DD::Value)>>,
    pred: Vec<Vec<(usize, DD::Value)>>,
    max_length: Option<DD::Value>,
}

impl<DD: DistanceDomain> LengthGraph<DD> {
    pub fn new(model: &SpatialModel, spec: LengthSpec) -> Result<Self, SpatialError> {
        if let LengthSpec::Label(i) = spec {
            if i >= model.label_names().len() {
                return Err(SpatialError::UnknownLabel(i));
            }
        }
        let n = model.size();
        let mut edges = Vec::with_capacity(model.edges().len());
        for e in model.edges() {
            let value = edge_length(&e.labels, spec);
            let w = DD::from_label(value).ok_or(SpatialError::InvalidLength {
                from: e.source,
                to: e.target,
                value,
                domain: std::any::type_name::<DD>().rsplit("::").next().unwrap_or("distance"),
            })?;
            edges.push((e.source, e.target, w));
        }
        Ok(Self::from_edges(n, edges))
    }

    /// Builds from already validated lengths.
    pub fn from_edges(size: usize, edges: impl IntoIterator<Item = (usize, usize, DD::Value)>) -> Self {
        let mut succ = vec![Vec::new(); size];
        let mut pred = vec![Vec::new(); size];
        let mut max_length: Option<DD::Value> = None;
        for (a, b, w) in edges {
            succ[a].push((b, w));
            pred[b].push((a, w));
            if max_length.is_none_or(|m| w > m) {
                max_length = Some(w);
            }
        }
        LengthGraph { succ, pred, max_length }
    }

    pub fn size(&self) -> usize {
        self.succ.len()
    }

    pub fn successors(&self, l: usize) -> &[(usize, DD::Value)] {
        &self.succ[l]
    }

    pub fn edge_count(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }
}

/// All-pairs shortest distances, row-major; unreachable pairs hold the
/// domain's infinity.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix<DD: DistanceDomain> {
    size: usize,
    data: Vec<DD::Value>,
}

impl<DD: DistanceDomain> DistanceMatrix<DD> {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, from: usize, to: usize) -> DD::Value {
        self.data[from * self.size + to]
    }

    pub fn row(&self, from: usize) -> &[DD::Value] {
        &self.data[from * self.size..(from + 1) * self.size]
    }
}

struct Queued<V>(V, usize);

impl<V: PartialOrd> PartialEq for Queued<V> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<V: PartialOrd> Eq for Queued<V> {}

impl<V: PartialOrd> PartialOrd for Queued<V> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<V: PartialOrd> Ord for Queued<V> {
    // reversed so the max-heap pops the nearest entry
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .0
            .partial_cmp(&self.0)
            .unwrap_or(Ordering::Equal)
            .then(other.1.cmp(&self.1))
    }
}

fn dijkstra<DD: DistanceDomain>(g: &LengthGraph<DD>, source: usize, row: &mut [DD::Value]) {
    row.fill(DD::infinity());
    row[source] = DD::zero();
    let mut heap = BinaryHeap::new();
    heap.push(Queued(DD::zero(), source));
    while let Some(Queued(d, x)) = heap.pop() {
        if d > row[x] {
            continue;
        }
        for &(y, w) in &g.succ[x] {
            let nd = DD::accumulate(d, w);
            if nd < row[y] {
                row[y] = nd;
                heap.push(Queued(nd, y));
            }
        }
    }
}

/// One Dijkstra run per source, in parallel: `O(L · E log L)`, cubic in the
/// number of locations on dense graphs.
pub fn shortest_distance_matrix<DD: DistanceDomain>(g: &LengthGraph<DD>) -> DistanceMatrix<DD> {
    let n = g.size();
    let mut data = vec![DD::infinity(); n * n];
    if n > 0 {
        data.par_chunks_mut(n)
            .enumerate()
            .for_each(|(source, row)| dijkstra(g, source, row));
    }
    DistanceMatrix { size: n, data }
}

fn check_len(g_size: usize, len: usize) -> Result<(), SpatialError> {
    if g_size == len {
        Ok(())
    } else {
        Err(SpatialError::IndexMismatch {
            expected: g_size,
            found: len,
        })
    }
}

/// Work done by one reach evaluation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ReachStats {
    /// Relaxation rounds until no value changed.
    pub rounds: usize,
    /// (location, distance) entries materialised.
    pub entries: usize,
}

/// `s1 reach[i] s2` at every location.
pub fn reach<S: SignalDomain, DD: DistanceDomain>(
    g: &LengthGraph<DD>,
    s1: &[S::Value],
    s2: &[S::Value],
    i: &Interval,
) -> Result<Vec<S::Value>, SpatialError> {
    reach_with_stats::<S, DD>(g, s1, s2, i).map(|(v, _)| v)
}

pub fn reach_with_stats<S: SignalDomain, DD: DistanceDomain>(
    g: &LengthGraph<DD>,
    s1: &[S::Value],
    s2: &[S::Value],
    i: &Interval,
) -> Result<(Vec<S::Value>, ReachStats), SpatialError> {
    check_len(g.size(), s1.len())?;
    check_len(g.size(), s2.len())?;
    if i.is_bounded() {
        return Ok(bounded_reach::<S, DD>(g, s1, s2, i.lo(), i.hi()));
    }
    let (u, stats) = unbounded_reach::<S, DD>(g, s1, s2);
    if i.lo() == 0.0 {
        return Ok((u, stats));
    }
    // cut every witness walk at the first point whose length reaches `lo`;
    // that point lies within one edge of `lo`
    let Some(max_w) = g.max_length.map(DD::to_f64).filter(|&w| w > 0.0) else {
        return Ok((vec![S::bottom(); g.size()], stats));
    };
    let (v, more) = bounded_reach::<S, DD>(g, s1, &u, i.lo(), i.lo() + max_w);
    Ok((
        v,
        ReachStats {
            rounds: stats.rounds + more.rounds,
            entries: stats.entries + more.entries,
        },
    ))
}

/// Walk values keyed by accumulated length, settled in increasing length.
///
/// Below `lo` every length is kept separately. From `lo` on, an entry is
/// dropped when another one is no longer and no worse: any extension of the
/// dropped walk applies to the dominating one with a length still inside
/// `[lo, hi]`, because addition of non-negative lengths is monotone.
fn bounded_reach<S: SignalDomain, DD: DistanceDomain>(
    g: &LengthGraph<DD>,
    s1: &[S::Value],
    s2: &[S::Value],
    lo: f64,
    hi: f64,
) -> (Vec<S::Value>, ReachStats) {
    let n = g.size();
    let mut below: Vec<FxHashMap<u64, S::Value>> = vec![FxHashMap::default(); n];
    let mut front: Vec<Vec<(DD::Value, S::Value)>> = vec![Vec::new(); n];
    let mut heap = BinaryHeap::new();
    let mut stats = ReachStats::default();

    for l in 0..n {
        if s2[l] != S::bottom() {
            offer::<S, DD>(&mut below[l], &mut front[l], l, DD::zero(), s2[l], lo, &mut heap);
        }
    }
    let mut level = None;
    while let Some(Pending(d, x, v)) = heap.pop() {
        let live = if DD::to_f64(d) < lo {
            below[x].get(&DD::key(d)) == Some(&v)
        } else {
            front[x].iter().any(|&(d2, v2)| DD::key(d2) == DD::key(d) && v2 == v)
        };
        if !live {
            continue;
        }
        if level != Some(DD::key(d)) {
            level = Some(DD::key(d));
            stats.rounds += 1;
        }
        for &(p, w) in &g.pred[x] {
            let nd = DD::accumulate(w, d);
            if DD::to_f64(nd) > hi {
                continue;
            }
            let nv = S::meet(s1[p], v);
            if nv != S::bottom() {
                offer::<S, DD>(&mut below[p], &mut front[p], p, nd, nv, lo, &mut heap);
            }
        }
    }
    stats.entries = below.iter().map(FxHashMap::len).sum::<usize>() + front.iter().map(Vec::len).sum::<usize>();
    let out = front
        .iter()
        .map(|f| f.iter().fold(S::bottom(), |acc, &(_, v)| S::join(acc, v)))
        .collect();
    (out, stats)
}

fn offer<S: SignalDomain, DD: DistanceDomain>(
    below: &mut FxHashMap<u64, S::Value>,
    front: &mut Vec<(DD::Value, S::Value)>,
    p: usize,
    d: DD::Value,
    v: S::Value,
    lo: f64,
    heap: &mut BinaryHeap<Pending<DD, S>>,
) {
    if DD::to_f64(d) < lo {
        let slot = below.entry(DD::key(d)).or_insert(S::bottom());
        let joined = S::join(*slot, v);
        if joined != *slot {
            *slot = joined;
            heap.push(Pending(d, p, joined));
        }
    } else {
        if front.iter().any(|&(d2, v2)| d2 <= d && S::geq(v2, v)) {
            return;
        }
        front.retain(|&(d2, v2)| !(d <= d2 && S::geq(v, v2)));
        front.push((d, v));
        heap.push(Pending(d, p, v));
    }
}

/// A queued entry, popped shortest first with ties broken by location.
struct Pending<DD: DistanceDomain, S: SignalDomain>(DD::Value, usize, S::Value);

impl<DD: DistanceDomain, S: SignalDomain> PartialEq for Pending<DD, S> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<DD: DistanceDomain, S: SignalDomain> Eq for Pending<DD, S> {}

impl<DD: DistanceDomain, S: SignalDomain> PartialOrd for Pending<DD, S> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<DD: DistanceDomain, S: SignalDomain> Ord for Pending<DD, S> {
    fn cmp(&self, other: &Self) -> Ordering {
        DD::to_f64(other.0)
            .total_cmp(&DD::to_f64(self.0))
            .then(other.1.cmp(&self.1))
    }
}

fn unbounded_reach<S: SignalDomain, DD: DistanceDomain>(
    g: &LengthGraph<DD>,
    s1: &[S::Value],
    s2: &[S::Value],
) -> (Vec<S::Value>, ReachStats) {
    let n = g.size();
    let mut value = s2.to_vec();
    let mut frontier: Vec<usize> = (0..n).filter(|&l| s2[l] != S::bottom()).collect();
    let mut queued = vec![false; n];
    let mut stats = ReachStats::default();
    while !frontier.is_empty() {
        stats.rounds += 1;
        let mut next = Vec::new();
        for &x in &frontier {
            let v = value[x];
            for &(p, _) in &g.pred[x] {
                let joined = S::join(value[p], S::meet(s1[p], v));
                if joined != value[p] {
                    value[p] = joined;
                    if !queued[p] {
                        queued[p] = true;
                        next.push(p);
                    }
                }
            }
        }
        for &p in &next {
            queued[p] = false;
        }
        frontier = next;
    }
    stats.entries = n;
    (value, stats)
}

/// `escape[i] s` at every location, using a precomputed distance matrix.
pub fn escape<S: SignalDomain, DD: DistanceDomain>(
    g: &LengthGraph<DD>,
    dist: &DistanceMatrix<DD>,
    s: &[S::Value],
    i: &Interval,
) -> Result<Vec<S::Value>, SpatialError> {
    let n = g.size();
    check_len(n, s.len())?;
    check_len(n, dist.size())?;
    // for each end point, the best bottleneck value of walks reaching it
    let columns: Vec<Vec<S::Value>> = (0..n)
        .into_par_iter()
        .map(|target| bottleneck_column::<S, DD>(g, s, target))
        .collect();
    Ok((0..n)
        .into_par_iter()
        .map(|l| {
            let row = dist.row(l);
            (0..n)
                .filter(|&t| i.contains(DD::to_f64(row[t])))
                .fold(S::bottom(), |acc, t| S::join(acc, columns[t][l]))
        })
        .collect())
}

fn bottleneck_column<S: SignalDomain, DD: DistanceDomain>(
    g: &LengthGraph<DD>,
    s: &[S::Value],
    target: usize,
) -> Vec<S::Value> {
    let mut col = vec![S::bottom(); g.size()];
    col[target] = s[target];
    if col[target] == S::bottom() {
        return col;
    }
    let mut stack = vec![target];
    while let Some(x) = stack.pop() {
        let v = col[x];
        for &(p, _) in &g.pred[x] {
            let joined = S::join(col[p], S::meet(s[p], v));
            if joined != col[p] {
                col[p] = joined;
                stack.push(p);
            }
        }
    }
    col
}

/// `somewhere[i] s`: reach with a trivially true first argument.
pub fn somewhere<S: SignalDomain, DD: DistanceDomain>(
    g: &LengthGraph<DD>,
    s: &[S::Value],
    i: &Interval,
) -> Result<Vec<S::Value>, SpatialError> {
    let top = vec![S::top(); g.size()];
    reach::<S, DD>(g, &top, s, i)
}

/// `everywhere[i] s`, the dual of [`somewhere`].
pub fn everywhere<S: SignalDomain, DD: DistanceDomain>(
    g: &LengthGraph<DD>,
    s: &[S::Value],
    i: &Interval,
) -> Result<Vec<S::Value>, SpatialError> {
    let neg: Vec<S::Value> = s.iter().map(|&v| S::negation(v)).collect();
    Ok(somewhere::<S, DD>(g, &neg, i)?
        .into_iter()
        .map(S::negation)
        .collect())
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use proptest::prelude::*;

    use super::*;
    use crate::domain::{BooleanDomain as B, HopDistance as Hop, MinMaxDomain as M, RealDistance as Real};
    use crate::space::Edge;

    fn iv(lo: f64, hi: f64) -> Interval {
        Interval::new(lo, hi).unwrap()
    }

    fn labels() -> Arc<[String]> {
        vec!["hop".to_string(), "dist".to_string()].into()
    }

    fn model(n: usize, edges: &[(usize, usize, f64)]) -> SpatialModel {
        SpatialModel::new(
            n,
            labels(),
            edges
                .iter()
                .map(|&(a, b, d)| Edge {
                    source: a,
                    target: b,
                    labels: vec![1.0, d],
                })
                .collect(),
        )
        .unwrap()
    }

    fn hop(m: &SpatialModel) -> LengthGraph<Hop> {
        LengthGraph::new(m, LengthSpec::Label(0)).unwrap()
    }

    fn line(n: usize) -> SpatialModel {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i, 10.0)).collect();
        model(n, &edges)
    }

    #[test]
    fn edge_lengths() {
        let labels = [1.0, 13.7];
        assert_eq!(edge_length(&labels, LengthSpec::Label(0)), 1.0);
        assert_eq!(edge_length(&labels, LengthSpec::Label(1)), 13.7);
        assert_eq!(edge_length(&labels, LengthSpec::Unit), 1.0);
        assert_eq!(edge_length(&labels, LengthSpec::Constant(2.5)), 2.5);
        let m = model(2, &[(0, 1, -1.0)]);
        assert!(matches!(
            LengthGraph::<Real>::new(&m, LengthSpec::Label(1)),
            Err(SpatialError::InvalidLength { from: 0, to: 1, .. })
        ));
        let frac = model(2, &[(0, 1, 1.5)]);
        assert!(LengthGraph::<Hop>::new(&frac, LengthSpec::Label(1)).is_err());
    }

    #[test]
    fn distance_matrices() {
        let d = shortest_distance_matrix(&hop(&model(2, &[(0, 1, 1.0)])));
        assert_eq!(d.row(0), &[0, 1]);
        assert_eq!(d.row(1), &[u64::MAX, 0]);
        let g: LengthGraph<Real> = LengthGraph::new(&line(3), LengthSpec::Label(1)).unwrap();
        let d = shortest_distance_matrix(&g);
        assert_eq!(d.get(0, 2), 20.0);
        assert_eq!(d.get(2, 0), f64::INFINITY);
        let iso = shortest_distance_matrix(&hop(&model(2, &[])));
        assert_eq!(iso.get(0, 1), u64::MAX);
    }

    #[test]
    fn reach_fixtures() {
        let g = hop(&model(2, &[(0, 1, 1.0)]));
        let out = reach::<B, Hop>(&g, &[true, false], &[false, true], &iv(0.0, 1.0)).unwrap();
        assert_eq!(out, vec![true, true]);
        let single = hop(&model(1, &[]));
        assert_eq!(reach::<B, Hop>(&single, &[true], &[true], &iv(2.0, 3.0)).unwrap(), vec![false]);
        assert_eq!(reach::<M, Hop>(&single, &[1.0], &[f64::INFINITY], &iv(0.0, 0.0)).unwrap(), vec![f64::INFINITY]);
    }

    #[test]
    fn escape_fixtures() {
        let g = hop(&line(3));
        let d = shortest_distance_matrix(&g);
        let out = escape::<B, Hop>(&g, &d, &[true; 3], &Interval::new(2.0, f64::INFINITY).unwrap()).unwrap();
        assert_eq!(out, vec![true, false, false]);
        let s = [3.0, -1.0, 2.0];
        assert_eq!(escape::<M, Hop>(&g, &d, &s, &iv(0.0, 0.0)).unwrap(), s.to_vec());
        let single = hop(&model(1, &[]));
        let d1 = shortest_distance_matrix(&single);
        assert_eq!(
            escape::<B, Hop>(&single, &d1, &[true], &Interval::new(1.0, f64::INFINITY).unwrap()).unwrap(),
            vec![false]
        );
    }

    #[test]
    fn derived_fixtures() {
        let ring = hop(&model(4, &[(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (3, 0, 1.0)]));
        assert_eq!(everywhere::<B, Hop>(&ring, &[true; 4], &iv(0.0, 2.0)).unwrap(), vec![true; 4]);
        let s = [-2.0, 5.0, 1.0, -7.0];
        assert_eq!(somewhere::<M, Hop>(&ring, &s, &Interval::unbounded()).unwrap(), vec![5.0; 4]);
        assert_eq!(everywhere::<M, Hop>(&ring, &s, &Interval::unbounded()).unwrap(), vec![-7.0; 4]);
    }

    #[test]
    fn unbounded_lower_bound_on_a_cycle() {
        // walks may wind around the cycle to reach the lower bound
        let ring = hop(&model(3, &[(0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0)]));
        let i = Interval::new(4.0, f64::INFINITY).unwrap();
        let out = reach::<B, Hop>(&ring, &[true; 3], &[true, false, false], &i).unwrap();
        assert_eq!(out, vec![true; 3]);
        let blocked = reach::<B, Hop>(&ring, &[true, true, false], &[true, false, false], &i).unwrap();
        assert_eq!(blocked, vec![false; 3]);
    }

    /// Exhaustive walks from `l` of at most `max_edges` edges.
    fn walks(g: &LengthGraph<Hop>, l: usize, max_edges: usize) -> Vec<Vec<usize>> {
        let mut out = vec![vec![l]];
        let mut i = 0;
        while i < out.len() {
            let w = out[i].clone();
            if w.len() <= max_edges {
                for &(y, _) in g.successors(*w.last().unwrap()) {
                    let mut next = w.clone();
                    next.push(y);
                    out.push(next);
                }
            }
            i += 1;
        }
        out
    }

    fn graph_strategy() -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
        (1usize..6).prop_flat_map(|n| {
            let pairs: Vec<(usize, usize)> = (0..n)
                .flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b)))
                .collect();
            let k = pairs.len();
            (Just(n), prop::sample::subsequence(pairs, 0..=k))
        })
    }

    fn value() -> impl Strategy<Value = f64> {
        prop_oneof![(-3i32..4).prop_map(f64::from), Just(f64::INFINITY), Just(f64::NEG_INFINITY)]
    }

    proptest! {
        #[test]
        fn hop_reach_matches_walk_enumeration(
            (n, edges) in graph_strategy(),
            vals in prop::collection::vec((value(), value()), 6),
            lo in 0u32..3,
            width in prop::option::of(0u32..4),
        ) {
            let g: LengthGraph<Hop> = LengthGraph::from_edges(n, edges.iter().map(|&(a, b)| (a, b, 1)));
            let s1: Vec<f64> = vals[..n].iter().map(|v| v.0).collect();
            let s2: Vec<f64> = vals[..n].iter().map(|v| v.1).collect();
            let i = match width {
                Some(w) => iv(lo as f64, (lo + w) as f64),
                None => Interval::new(lo as f64, f64::INFINITY).unwrap(),
            };
            let cap = match width { Some(w) => (lo + w) as usize, None => lo as usize + n };
            let (out, stats) = reach_with_stats::<M, Hop>(&g, &s1, &s2, &i).unwrap();
            if width.is_none() && lo == 0 {
                prop_assert!(stats.rounds <= n);
            }
            for (l, &got) in out.iter().enumerate() {
                let mut best = f64::NEG_INFINITY;
                for w in walks(&g, l, cap) {
                    let k = w.len() - 1;
                    if i.contains(k as f64) {
                        let prefix = w[..k].iter().fold(f64::INFINITY, |a, &x| a.min(s1[x]));
                        best = best.max(prefix.min(s2[w[k]]));
                    }
                }
                prop_assert_eq!(got, best, "location {}", l);
            }
        }

        #[test]
        fn escape_matches_walk_enumeration(
            (n, edges) in graph_strategy(),
            vals in prop::collection::vec(value(), 6),
            lo in 0u32..4,
            width in prop::option::of(0u32..3),
        ) {
            let g: LengthGraph<Hop> = LengthGraph::from_edges(n, edges.iter().map(|&(a, b)| (a, b, 1)));
            let s = &vals[..n];
            let d = shortest_distance_matrix(&g);
            let i = match width {
                Some(w) => iv(lo as f64, (lo + w) as f64),
                None => Interval::new(lo as f64, f64::INFINITY).unwrap(),
            };
            let out = escape::<M, Hop>(&g, &d, s, &i).unwrap();
            for (l, &got) in out.iter().enumerate() {
                let mut best = f64::NEG_INFINITY;
                for w in walks(&g, l, n) {
                    let end = *w.last().unwrap();
                    if i.contains(d.get(l, end) as f64) {
                        best = best.max(w.iter().fold(f64::INFINITY, |a, &x| a.min(s[x])));
                    }
                }
                prop_assert_eq!(got, best);
            }
        }

        #[test]
        fn relabelling_permutes_outputs(
            (n, edges) in graph_strategy(),
            vals in prop::collection::vec((value(), value()), 6),
            perm in Just((0..6).collect::<Vec<usize>>()).prop_shuffle(),
        ) {
            let perm: Vec<usize> = perm.into_iter().filter(|&p| p < n).collect();
            let g: LengthGraph<Hop> = LengthGraph::from_edges(n, edges.iter().map(|&(a, b)| (a, b, 1)));
            let pg: LengthGraph<Hop> = LengthGraph::from_edges(n, edges.iter().map(|&(a, b)| (perm[a], perm[b], 1)));
            let mut s1 = vec![0.0; n];
            let mut s2 = vec![0.0; n];
            let mut p1 = vec![0.0; n];
            let mut p2 = vec![0.0; n];
            for l in 0..n {
                s1[l] = vals[l].0;
                s2[l] = vals[l].1;
                p1[perm[l]] = vals[l].0;
                p2[perm[l]] = vals[l].1;
            }
            let i = iv(0.0, 2.0);
            let out = reach::<M, Hop>(&g, &s1, &s2, &i).unwrap();
            let pout = reach::<M, Hop>(&pg, &p1, &p2, &i).unwrap();
            let d = shortest_distance_matrix(&g);
            let pd = shortest_distance_matrix(&pg);
            let e = escape::<M, Hop>(&g, &d, &s2, &i).unwrap();
            let pe = escape::<M, Hop>(&pg, &pd, &p2, &i).unwrap();
            for l in 0..n {
                prop_assert_eq!(out[l], pout[perm[l]]);
                prop_assert_eq!(e[l], pe[perm[l]]);
            }
        }
    }
}
