pub mod classic;
pub mod cli;
pub mod fraisse;
#[cfg(test)]
mod invariants;
pub mod symmetry;
pub mod universe;
pub mod verify;
pub mod witnesses;
