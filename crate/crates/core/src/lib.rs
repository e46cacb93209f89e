//! Classical simulation and training of residual hybrid quantum-classical
//! neural networks.
//!
//! A network is a stack of layers of quantum perceptrons. Each perceptron is
//! a unitary acting on every qubit of the previous layer plus one fresh
//! output qubit; a layer is the channel obtained by applying its perceptrons
//! in order and tracing out the previous layer. Residual edges add a
//! zero-padded copy of an earlier stage input onto a later stage input, so
//! stage states are no longer unit trace: their trace counts the branches of
//! the residual graph.
//!
//! Modules:
//! - [`qmath`]: dense complex linear algebra over qubit registers.
//! - [`network`]: network description, branch enumeration, feedforward.
//! - [`training`]: cost, parameter matrices, update rule, training loop,
//!   and the two independent gradient oracles.
//! - [`datagen`]: clean and noisy training pairs.

pub mod datagen;
mod error;
pub mod network;
pub mod qmath;
pub mod training;

pub use error::{Error, Result};
