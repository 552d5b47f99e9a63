pub mod error;
pub mod inner;
pub mod invariance;
pub mod linalg;
pub mod operators;
pub mod series;
pub mod subspaces;
