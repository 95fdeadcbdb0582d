//! Exact computations for nilpotent SL2 Higgs fields on the projective line:
//! binary forms and divisors, Fitting ideals over `Q[t]`, maps between split
//! bundles, nilpotent Higgs fields, fibers of the partial Springer
//! resolution, and the genus-general component census.

pub mod census;
pub mod corpus;
pub mod fitting;
pub mod forms;
pub mod higgs;
pub mod json;
pub mod poly;
pub mod rational;
pub mod selftest;
pub mod sheaves;
pub mod springer;
