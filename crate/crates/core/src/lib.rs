//! Executable combinatorial topology: polygon words of closed surfaces,
//! permutation-encoded combinatorial maps, map geometries with angle
//! functions, and finite multi-spaces (multi-groups and multi-metric
//! spaces).
//!
//! The geometric and metric parts are generic over the scalar type; the
//! aliases below fix the usual choices (exact rationals for angles and
//! planar incidence, `f64` for metric iteration).

mod dsu;

pub mod comb_map;
pub mod formats;
pub mod map_geometry;
pub mod multi_space;
pub mod scalar;
pub mod surface_word;

pub use comb_map::{CombMap, MapCensus, MapError, SimpleGraph};
pub use scalar::Scalar;
pub use surface_word::{StandardForm, SurfaceWord};

/// Exact rational used wherever a comparison must be decided exactly.
pub type Rational = num_rational::BigRational;

pub type ExactAngle = map_geometry::Angle<Rational>;
pub type ExactMapGeometry = map_geometry::MapGeometry<Rational>;
pub type FloatMapGeometry = map_geometry::MapGeometry<f64>;
pub type ExactSPlane = map_geometry::SPlaneConfig<Rational>;
pub type MultiMetricSpaceF64 = multi_space::MultiMetricSpace<f64>;
pub type AffineSelfMapF64 = multi_space::AffineSelfMap<f64>;
