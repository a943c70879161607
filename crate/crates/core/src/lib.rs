//! Derandomized crossword-game engine, exact solvers and the SAT/QBF
//! reduction compiler.

pub mod facts;
pub mod family;
pub mod io;
pub mod logic;
pub mod model;
pub mod reduction;
pub mod rng;
pub mod rules;
pub mod search;
pub mod sweep;

pub use model::{
    Bag, Board, Cell, Dictionary, GameState, Instance, Mode, Move, Orientation, Placement, Player,
    Rack, Symbol, VariantConfig, Word,
};
pub use rules::{Engine, MoveError, Outcome};
