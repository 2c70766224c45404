//! Code-switched sentence synthesis from dependency parses.
//!
//! The pipeline reads English sentences parsed into CoNLL-U
//! ([`corpus`]), splits each one into independent clauses and adjuncts
//! ([`segmenter`]), translates segments into a native language
//! ([`translation`]), renders every combination of translated and English
//! segments ([`generator`]) and scores the results with code-mixing
//! metrics ([`metrics`]).

pub mod corpus;
pub mod generator;
pub mod lang;
pub mod metrics;
pub mod segmenter;
pub mod translation;

pub use lang::{Lang, LangCode, TokenTag};
