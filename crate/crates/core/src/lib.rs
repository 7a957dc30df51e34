pub mod checker;
pub mod config;
pub mod ep;
pub mod error;
pub mod group;
pub mod homology;
pub mod homsearch;
pub mod json;
pub mod linalg;
pub mod meataxe;
pub mod module;
pub mod pile;
pub mod selftest;
