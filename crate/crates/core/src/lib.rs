//! Core library for `semiset`: a proof checker, realizer-extraction engine and
//! evaluation laboratory for semi-intuitionistic Kripke-Platek set theories.
//!
//! The layers, bottom up:
//!
//! * [`hfs`] — canonical hereditarily finite set values and the Ackermann
//!   well-order used everywhere for least-witness search.
//! * [`syntax`] — the first-order language of membership with an extra unary
//!   predicate `P`: parsing, printing, Δ₀/Σ₁/Π₁ classification, substitution
//!   and Gödel numbering into [`hfs::HFSet`].
//! * [`semantics`] — decidable Δ₀ evaluation over the hereditarily finite
//!   universe relative to an oracle, `Sat` reflection, fuelled Σ₁ witness
//!   search, definable-subset enumeration and finite hierarchy levels.
//! * [`machine`] — indices of Σ₁ partial set functions, fuelled application,
//!   S-m-n, the recursion-theorem operator, composition, and the uniform
//!   selection index.
//! * [`realize`] — the realizability relation, checked exactly where it is
//!   decidable and rank-bounded where it quantifies over the whole universe.
//! * [`kernel`] — natural deduction for IKP / SCS / T plus the machine-checked
//!   corpus derivations.
//! * [`extract`] — proof-to-realizer extraction (oracle-independent).
//! * [`ordinal`] — Cantor-normal-form notations over ω with the formal bases
//!   κ < π, and the set-of-ordinals codecs with least-δ decoding.
//! * [`selftest`] — the acceptance battery behind `semiset selftest`.

pub mod hfs;
pub mod syntax;
pub mod semantics;
pub mod machine;
pub mod realize;
pub mod kernel;
pub mod extract;
pub mod ordinal;
pub mod selftest;
