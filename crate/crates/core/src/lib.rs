//! Simulator for linear-layer leakage data-reconstruction attacks on
//! federated learning under secure aggregation.
//!
//! A malicious server plants a small module (conv passthrough + two FC
//! layers) in the model it distributes, then recovers client training
//! images from the aggregate gradient of the first FC layer. The crate
//! simulates the full round trip at desk scale: dataset ingestion or
//! synthesis, per-client model construction, exact analytic
//! forward/backward, pairwise-mask secure aggregation over a
//! fixed-point field, gradient demultiplexing and image reconstruction,
//! and leakage/resource scoring.

pub mod tensors;
