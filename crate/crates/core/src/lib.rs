//! Hyperbolic Poisson–Voronoi laboratory.
//!
//! Builds Voronoi tessellations of Poisson processes on the hyperbolic plane
//! and on the Bolza surface, measures typical-cell statistics against
//! closed-form references, and runs the randomized black/white coloring
//! experiments whose expectations bound the Cheeger constant.

pub mod graphs;
pub mod hypmath;
pub mod isokawa;
pub mod lemmacheck;
pub mod quadrature;
pub mod render;
pub mod sampler;
pub mod stats;
pub mod surface;
pub mod voronoi;
