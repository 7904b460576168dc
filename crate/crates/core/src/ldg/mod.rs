//! Local discontinuous Galerkin discretization in the spot variable.

mod banded;
mod basis;
mod field;
mod forms;
mod implicit;
mod mesh;

pub use banded::{BandMatrix, BandedLu};
pub use basis::Basis;
pub use field::{project_payoff, DGField, DgSpace};
pub use forms::{lax_friedrichs, Diffusion, FluxVariant, LdgOperator};
pub use implicit::{assemble_implicit, diffusion_matrix, ImplicitOperator};
pub use mesh::Mesh;
