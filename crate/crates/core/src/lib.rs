//! Exact computation with closed subsets of the circle and the ideal
//! functions that describe C*-subalgebras of an irrational rotation algebra
//! containing the rotation unitary.

pub mod circle_sets;
pub mod diophantine;
pub mod ideal_calculus;

pub use circle_sets::{CirclePoint, CircleSet, Component, SetClass};
pub use diophantine::{Angle, AngleDescriptor, AngleError};
pub use ideal_calculus::{IdealError, IdealFunction, JoinPolicy};
