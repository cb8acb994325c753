//! Synthetic screens with known injected changes.

mod corpus;
mod mutate;
mod render;

pub use corpus::*;
pub use mutate::*;
pub use render::*;
