pub mod class;
pub mod datum;
pub mod json;
pub mod table;

pub use class::{ClassId, ClassMonomial, Divisor, Poly, ZeroPattern};
pub use datum::{
    expand_twisted_power, scalar_curvature, Exceptional, FibrationDatum, Flags, Roles, TestConfigDatum,
    Which,
};
pub use json::{datum_from_value, datum_to_value, load_datum, validate_datum};
pub use table::{expand, monomials, IntersectionTable};
