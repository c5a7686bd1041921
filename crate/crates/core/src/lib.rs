//! Difference sets in finite groups and the triple arrays they produce.

pub mod array;
pub mod catalog;
pub mod designs;
pub mod diffset;
pub mod family;
pub mod format;
pub mod group;
pub mod interchange;
pub mod ring;
pub mod search;

pub use array::{ArrayForm, ArrayVerdict, RowColumnArray, TaParams};
pub use diffset::{DiffSetError, DifferenceSet, DsParams, MultiplierReport, Side, VerifyOptions};
pub use group::{FiniteGroup, GroupElement, GroupError};
pub use ring::GroupRingElement;
