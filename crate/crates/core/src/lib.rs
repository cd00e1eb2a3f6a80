//! Pasting schemes, the free strict omega-category monad on globular sets,
//! contraction instructions for weak omega-categories, and an engine that
//! builds invertibility witnesses for cells of free weak omega-categories.

// Cells cache their boundaries lazily; hashing and equality never look at the cache.
#![allow(clippy::mutable_key_type)]

pub mod cli;
pub mod gen;
pub mod globular;
pub mod instruction;
pub mod scheme;
pub mod selftest;
pub mod sexpr;
pub mod strict;
pub mod weak;
pub mod witness;
