//! Toolkit for the Ideal Proof System: algebraic circuits over prime fields,
//! certificate verification, Polynomial Calculus and bounded-depth Frege
//! compilation, Groebner-basis utilities, and propositional encodings of
//! identity-testing axioms.

pub mod circuit;
pub mod cli;
pub mod cnf;
pub mod field;
pub mod frege;
pub mod grobner;
pub mod ips;
pub mod pc;
pub mod poly;
pub mod propenc;
pub mod vnp;
