pub mod density;
pub mod graph;
pub mod lab;
pub mod matrix;
pub mod separability;
