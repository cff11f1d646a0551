//! Self-intersection numbers of closed geodesics on the pair of pants and the
//! punctured torus, computed from Bowen–Series codings, together with the
//! combinatorial k-systoles built on top of them.
//!
//! ```
//! use geolab::{self_intersection, CyclicWord, SurfaceKind};
//!
//! let w = CyclicWord::parse("aaB").unwrap();
//! assert_eq!(self_intersection(SurfaceKind::Pants, &w).unwrap(), 2);
//! ```

pub mod chart;
pub mod intersection;
pub mod oracle;
pub mod render;
pub mod systole;
pub mod verify;
pub mod word;

pub use chart::{compare, linked, Chart, ChartError, EndpointPair, PeriodicWord, SurfaceKind};
pub use intersection::{
    linked_pairs, pair_class, pair_classes, self_intersection, self_intersection_par, upper_bound, IntersectionError,
    LinkedPair, PairClass,
};
pub use oracle::{default_config, standard_config, OracleError, SchottkyConfig};
pub use render::render_svg;
pub use systole::{
    census_of_length, enumerate_classes, sequence, systole, witness, Census, ClassRecord, Family, SystoleError,
    SystoleRecord,
};
pub use verify::{verify, Fault, Report, Status, VerifyConfig};
pub use word::{CyclicWord, Letter, Word, WordError};
