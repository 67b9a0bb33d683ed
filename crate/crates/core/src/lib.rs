//! Spectral flow on a figure-eight quantum graph whose single vertex carries
//! a θ-dependent singular coupling.
//!
//! Pipeline: [`cycle`] turns an angle into a boundary condition, [`spectrum`]
//! finds the eigen-wavenumbers, [`flow`] sweeps a full cycle, continues the
//! branches and reads off the level permutation, and [`web`] approximates
//! the vertex by short edges carrying δ couplings.
//!
//! Everything numeric is generic over [`scalar::Real`] (`f32` or `f64`);
//! the `*64` / `*32` aliases below fix the precision.

pub mod assignment;
pub mod cycle;
pub mod error;
pub mod expr;
pub mod flow;
pub mod linalg;
pub mod roots;
pub mod scalar;
pub mod spectrum;
pub mod web;

pub use cycle::{build_condition, check_self_adjoint, classify_topology, condition_at, eval_ramps, region_of, CycleKind, Region};
pub use error::{Error, Result};
pub use flow::{anholonomy_permutation, detect_crossings, sweep, track_branches, AnholonomyReport};
pub use scalar::Real;
pub use spectrum::{find_spectrum, MetalMean};

pub type CycleParams64 = cycle::CycleParams<f64>;
pub type RampVector64 = cycle::RampVector<f64>;
pub type VertexCondition64 = cycle::VertexCondition<f64>;
pub type Geometry64 = spectrum::Geometry<f64>;
pub type Spectrum64 = spectrum::Spectrum<f64>;
pub type FlowConfig64 = flow::FlowConfig<f64>;
pub type FlowTable64 = flow::FlowTable<f64>;
pub type BranchSet64 = flow::BranchSet<f64>;
pub type WebSpec64 = web::WebSpec<f64>;
pub type ConvergenceReport64 = web::ConvergenceReport<f64>;

pub type CycleParams32 = cycle::CycleParams<f32>;
pub type RampVector32 = cycle::RampVector<f32>;
pub type VertexCondition32 = cycle::VertexCondition<f32>;
pub type Geometry32 = spectrum::Geometry<f32>;
pub type Spectrum32 = spectrum::Spectrum<f32>;
pub type FlowConfig32 = flow::FlowConfig<f32>;
pub type FlowTable32 = flow::FlowTable<f32>;
pub type BranchSet32 = flow::BranchSet<f32>;
pub type WebSpec32 = web::WebSpec<f32>;
pub type ConvergenceReport32 = web::ConvergenceReport<f32>;
