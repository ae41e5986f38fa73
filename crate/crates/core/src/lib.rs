pub mod crystal;
pub mod error;
pub mod lie;
pub mod matrix;
pub mod poly;
pub mod ratexpr;
pub mod scalar;
