//! Offline monitoring of spatio-temporal formulas (reach, escape, until,
//! since and their derived forms) over traces of time-varying weighted
//! graphs with per-location signals.
//!
//! ```
//! use moonlight_core::script::{load_script, instantiate_formula, FormulaArgs};
//!
//! let script = load_script("signal { real x; } formula f = globally (x > 0);").unwrap();
//! let f = instantiate_formula(&script, "f", &FormulaArgs::new()).unwrap();
//! assert_eq!(f.to_string(), "globally (x > 0)");
//! ```

pub mod domain;
pub mod engine;
pub mod interval;
pub mod script;
pub mod signal;
pub mod space;
pub mod spatial;
pub mod temporal;
pub mod time;

pub use domain::{BooleanDomain, DistanceDomain, DomainKind, HopDistance, MinMaxDomain, RealDistance, SignalDomain};
pub use interval::Interval;
pub use signal::{MonitorResult, SpatioTemporalSignal, VarSpec, VarType, Verdicts};
pub use space::{DynamicSpatialModel, Edge, SpatialModel};
pub use time::TimeGrid;
pub use engine::{monitor, monitor_with_stats, MonitorError, MonitorRequest, MonitorStats};
