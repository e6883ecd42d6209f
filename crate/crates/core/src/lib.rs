//! Symbolic-dynamics workbench: words, sofic presentations, the even-length
//! coded-system construction, spacing shifts and windowed mixing checks.
//!
//! Every dynamical verdict carries an [`Exactness`](words::Exactness) flag.
//! Negative claims are only ever made from exact language windows.

pub mod automata;
pub mod coded;
pub mod dynamics;
mod error;
pub mod spacing;
pub mod words;

pub use error::{Error, Result};
pub use words::{Alphabet, Block, Exactness, LanguageWindow};
