//! Verdict algebras and distance algebras.
//!
//! A [`SignalDomain`] is the lattice a verdict lives in. Two instances are
//! provided: [`BooleanDomain`] (qualitative semantics) and [`MinMaxDomain`]
//! (quantitative robustness over the extended reals). A [`DistanceDomain`]
//! describes how edge lengths accumulate along a path.

use std::fmt;
use std::fmt::Debug;
use std::str::FromStr;

use crate::script::ast::CmpOp;

/// Which verdict algebra a monitor evaluates in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum DomainKind {
    #[default]
    Boolean,
    MinMax,
}

impl DomainKind {
    pub fn keyword(self) -> &'static str {
        match self {
            DomainKind::Boolean => "boolean",
            DomainKind::MinMax => "minmax",
        }
    }
}

impl fmt::Display for DomainKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

impl FromStr for DomainKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "boolean" => Ok(DomainKind::Boolean),
            "minmax" => Ok(DomainKind::MinMax),
            other => Err(format!("unknown domain `{other}` (expected boolean or minmax)")),
        }
    }
}

/// A bounded distributive lattice with an involutive negation.
///
/// `join` and `meet` must be associative, commutative and idempotent,
/// `negation` must be an involution with `negation(top) == bottom`, and the
/// De Morgan laws must hold. All operations select or sign-flip existing
/// values, so results are exact.
pub trait SignalDomain: Copy + Send + Sync + 'static {
    type Value: Copy + PartialEq + Debug + Send + Sync + 'static;

    const KIND: DomainKind;

    fn top() -> Self::Value;
    fn bottom() -> Self::Value;
    fn join(a: Self::Value, b: Self::Value) -> Self::Value;
    fn meet(a: Self::Value, b: Self::Value) -> Self::Value;
    fn negation(a: Self::Value) -> Self::Value;

    /// Interprets `lhs op rhs` for two already evaluated arithmetic operands.
    fn compare(op: CmpOp, lhs: f64, rhs: f64) -> Self::Value;

    /// `a` is at least as large as `b` in the lattice order.
    fn geq(a: Self::Value, b: Self::Value) -> bool {
        Self::join(a, b) == a
    }
}

/// Qualitative semantics: `{false, true}` with or/and/not.
#[derive(Clone, Copy, Debug, Default)]
pub struct BooleanDomain;

impl SignalDomain for BooleanDomain {
    type Value = bool;

    const KIND: DomainKind = DomainKind::Boolean;

    fn top() -> bool {
        true
    }

    fn bottom() -> bool {
        false
    }

    fn join(a: bool, b: bool) -> bool {
        a || b
    }

    fn meet(a: bool, b: bool) -> bool {
        a && b
    }

    fn negation(a: bool) -> bool {
        !a
    }

    fn compare(op: CmpOp, lhs: f64, rhs: f64) -> bool {
        match op {
            CmpOp::Eq => lhs == rhs,
            CmpOp::Ne => lhs != rhs,
            CmpOp::Lt => lhs < rhs,
            CmpOp::Le => lhs <= rhs,
            CmpOp::Gt => lhs > rhs,
            CmpOp::Ge => lhs >= rhs,
        }
    }
}

/// Quantitative (robustness) semantics over the extended reals with max/min
/// and sign flip. Equality atoms are crisp: `+inf` when they hold and `-inf`
/// otherwise.
#[derive(Clone, Copy, Debug, Default)]
pub struct MinMaxDomain;

impl SignalDomain for MinMaxDomain {
    type Value = f64;

    const KIND: DomainKind = DomainKind::MinMax;

    fn top() -> f64 {
        f64::INFINITY
    }

    fn bottom() -> f64 {
        f64::NEG_INFINITY
    }

    fn join(a: f64, b: f64) -> f64 {
        if b > a {
            b
        } else {
            a
        }
    }

    fn meet(a: f64, b: f64) -> f64 {
        if b < a {
            b
        } else {
            a
        }
    }

    fn negation(a: f64) -> f64 {
        -a
    }

    fn compare(op: CmpOp, lhs: f64, rhs: f64) -> f64 {
        match op {
            CmpOp::Gt | CmpOp::Ge => lhs - rhs,
            CmpOp::Lt | CmpOp::Le => rhs - lhs,
            CmpOp::Eq => {
                if lhs == rhs {
                    f64::INFINITY
                } else {
                    f64::NEG_INFINITY
                }
            }
            CmpOp::Ne => {
                if lhs != rhs {
                    f64::INFINITY
                } else {
                    f64::NEG_INFINITY
                }
            }
        }
    }
}

/// How edge lengths combine along a path.
///
/// `accumulate` is associative and monotone: with both operands at or above
/// `zero()` the result is never below either operand.
pub trait DistanceDomain: Copy + Send + Sync + 'static {
    type Value: Copy + PartialOrd + Debug + Send + Sync + 'static;

    fn zero() -> Self::Value;
    /// The distance of an unreachable location.
    fn infinity() -> Self::Value;
    fn accumulate(a: Self::Value, b: Self::Value) -> Self::Value;
    fn to_f64(v: Self::Value) -> f64;
    /// Converts an edge-label value; `None` if it is not a valid length.
    fn from_label(x: f64) -> Option<Self::Value>;
    /// A hashable identity for a finite distance.
    fn key(v: Self::Value) -> u64;
}

/// Integer hop counting.
#[derive(Clone, Copy, Debug, Default)]
pub struct HopDistance;

impl DistanceDomain for HopDistance {
    type Value = u64;

    fn zero() -> u64 {
        0
    }

    fn infinity() -> u64 {
        u64::MAX
    }

    fn accumulate(a: u64, b: u64) -> u64 {
        a.saturating_add(b)
    }

    fn to_f64(v: u64) -> f64 {
        if v == u64::MAX {
            f64::INFINITY
        } else {
            v as f64
        }
    }

    fn from_label(x: f64) -> Option<u64> {
        // 2^53: every integer below is exactly representable
        if x >= 0.0 && x.fract() == 0.0 && x < 9_007_199_254_740_992.0 {
            Some(x as u64)
        } else {
            None
        }
    }

    fn key(v: u64) -> u64 {
        v
    }
}

/// Real edge-weight summation.
#[derive(Clone, Copy, Debug, Default)]
pub struct RealDistance;

impl DistanceDomain for RealDistance {
    type Value = f64;

    fn zero() -> f64 {
        0.0
    }

    fn infinity() -> f64 {
        f64::INFINITY
    }

    fn accumulate(a: f64, b: f64) -> f64 {
        a + b
    }

    fn to_f64(v: f64) -> f64 {
        v
    }

    fn from_label(x: f64) -> Option<f64> {
        // `+ 0.0` folds a negative zero into positive zero
        (x.is_finite() && x >= 0.0).then_some(x + 0.0)
    }

    fn key(v: f64) -> u64 {
        v.to_bits()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ext_real() -> impl Strategy<Value = f64> {
        prop_oneof![
            1 => Just(f64::INFINITY),
            1 => Just(f64::NEG_INFINITY),
            8 => -1.0e6..1.0e6f64,
        ]
    }

    fn laws<D: SignalDomain>(x: D::Value, y: D::Value, z: D::Value) {
        let (j, m, n) = (D::join, D::meet, D::negation);
        assert_eq!(j(x, y), j(y, x));
        assert_eq!(m(x, y), m(y, x));
        assert_eq!(j(j(x, y), z), j(x, j(y, z)));
        assert_eq!(m(m(x, y), z), m(x, m(y, z)));
        assert_eq!(j(x, x), x);
        assert_eq!(m(x, x), x);
        assert_eq!(n(n(x)), x);
        assert_eq!(n(j(x, y)), m(n(x), n(y)));
        assert_eq!(n(m(x, y)), j(n(x), n(y)));
        assert_eq!(j(x, m(x, y)), x);
        assert_eq!(m(x, j(x, y)), x);
        assert_eq!(j(x, D::bottom()), x);
        assert_eq!(m(x, D::top()), x);
        assert_eq!(n(D::top()), D::bottom());
    }

    proptest! {
        #[test]
        fn boolean_laws(x: bool, y: bool, z: bool) {
            laws::<BooleanDomain>(x, y, z);
        }

        #[test]
        fn minmax_laws(x in ext_real(), y in ext_real(), z in ext_real()) {
            laws::<MinMaxDomain>(x, y, z);
        }

        #[test]
        fn distance_accumulate_monotone(a in 0u64..1000, b in 0u64..1000, x in 0.0..1e6f64, y in 0.0..1e6f64) {
            prop_assert!(HopDistance::accumulate(a, b) >= a.max(b));
            prop_assert_eq!(HopDistance::accumulate(HopDistance::zero(), a), a);
            prop_assert!(RealDistance::accumulate(x, y) >= x.max(y));
            prop_assert_eq!(RealDistance::accumulate(RealDistance::zero(), x), x);
        }
    }

    #[test]
    fn minmax_atoms() {
        assert!((MinMaxDomain::compare(CmpOp::Gt, 0.7, 0.5) - 0.2).abs() < 1e-12);
        assert_eq!(MinMaxDomain::compare(CmpOp::Gt, 0.0, 0.0), 0.0);
        assert_eq!(MinMaxDomain::compare(CmpOp::Le, 1.0, 4.0), 3.0);
        assert_eq!(MinMaxDomain::compare(CmpOp::Eq, 3.0, 3.0), f64::INFINITY);
        assert_eq!(MinMaxDomain::compare(CmpOp::Ne, 3.0, 3.0), f64::NEG_INFINITY);
        assert!(BooleanDomain::compare(CmpOp::Eq, 3.0, 3.0));
    }

    #[test]
    fn label_conversion() {
        assert_eq!(HopDistance::from_label(3.0), Some(3));
        assert_eq!(HopDistance::from_label(1.5), None);
        assert_eq!(HopDistance::from_label(-1.0), None);
        assert_eq!(RealDistance::from_label(-0.0).map(f64::to_bits), Some(0.0f64.to_bits()));
        assert_eq!(RealDistance::from_label(-0.5), None);
        assert_eq!(HopDistance::to_f64(HopDistance::infinity()), f64::INFINITY);
    }

    #[test]
    fn domain_keyword_round_trip() {
        for kind in [DomainKind::Boolean, DomainKind::MinMax] {
            assert_eq!(kind.keyword().parse::<DomainKind>().unwrap(), kind);
        }
        assert!("fuzzy".parse::<DomainKind>().is_err());
    }
}
