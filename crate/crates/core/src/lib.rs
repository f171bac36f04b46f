//! Exact computations with the weighted torus algebra, weighted type A and
//! type D modules of the solid torus and (p,1)-cables, their gradings and
//! box tensor products.

pub mod algebra;
pub mod cfa;
pub mod error;
pub mod grading;
pub mod tiling;
pub mod torus;
pub mod tensor;
pub mod typed;
pub mod verify;

pub use algebra::{Basic, Chord, Element, Idempotent, Monomial};
pub use error::{ComputeError, MoveError, ParseError};
pub use torus::{Mode, TorusAlgebra};

/// Render `U^u V^v g` in the text syntax, e.g. `U^2*V*b1`.
pub fn format_term(u: u32, v: u32, g: impl std::fmt::Display) -> String {
    let power = |var: &str, k: u32| match k {
        0 => String::new(),
        1 => format!("{var}*"),
        _ => format!("{var}^{k}*"),
    };
    format!("{}{}{g}", power("U", u), power("V", v))
}
