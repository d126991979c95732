pub mod cli;
pub mod coalgebra;
pub mod comodule;
pub mod complex;
pub mod ez;
pub mod field;
pub mod hopf;
pub mod linalg;
pub mod report;
pub mod tensor;
pub mod simplicial;
pub mod spectral;
pub mod structure;
