pub mod algebra;
pub mod klr;
pub mod polyrep;
pub mod rootdata;
pub mod uqrep;
pub mod ucat;
