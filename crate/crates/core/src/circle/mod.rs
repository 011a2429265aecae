//! Lifts of circle homeomorphisms: representations, evaluation, composition
//! and certified rotation numbers.

pub mod lift;
pub mod mobius;
pub mod pl;
pub mod rotation;

pub use lift::{compose, evaluate, inverse, power, Amount, LiftHomeo};
pub use mobius::{chart, chart_inv, LiftMobius};
pub use pl::{breakpoint_union, min_difference, LiftPl, PeriodicPl};
pub use rotation::{
    detect_rational_rotation, detect_rational_rotation_with, find_periodic_point, translation_number,
    translation_number_enclosure, Enclosure, PeriodicWitness, TranslationNumber, DEFAULT_THRESHOLD,
};
