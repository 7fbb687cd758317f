pub mod conjecture;
pub mod curve;
pub mod field;
pub mod form;
pub mod koszul;
pub mod linalg;
pub mod predict;
pub mod series;
pub mod upoly;
