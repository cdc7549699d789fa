//! Exact computations with filtrations of free and finite groups, unipotent
//! matrix representations over residue rings, and Massey products over `F_p`.

pub mod appendixlab;
pub mod config;
pub mod error;
pub mod famgroups;
pub mod fingrp;
pub mod freewords;
pub mod linalg;
pub mod massey;
pub mod ncseries;
pub mod residue;
pub mod unimat;

pub use error::{Error, Result};
pub use freewords::{FiltrationKind, Word, WitnessRep};
pub use ncseries::{MultiIndex, NCSeries};
pub use residue::{RingElem, RingSpec};
pub use unimat::{BarUniMat, ConjugationTarget, KXElem, Matrix, UniMat};
