//! Poset metrics on finite abelian groups: weight partitions, their Fourier
//! duals, character weight enumerators and the polynomial family they reduce to.

pub mod cyclotomic;
pub mod group;
pub mod partition;
pub mod pi;
pub mod poset;
pub mod ring;
pub mod scheme;
pub mod survey;
pub mod weight;
