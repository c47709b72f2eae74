pub mod field;
pub mod root_datum;
pub mod weights;
pub mod hecke;
pub mod eigen;
pub mod poset;
pub mod classify;
pub mod hecke0;
pub mod oracle;
pub mod cli;
