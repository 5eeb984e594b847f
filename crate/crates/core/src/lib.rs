pub mod error;
pub mod exec;
pub mod graph;
pub mod mesh;
pub mod plan;
pub mod random;
pub mod rational;
pub mod reeb;
pub mod synth;
pub mod verify;
