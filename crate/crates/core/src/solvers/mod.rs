//! Numeric kernels: exact LP, symmetric eigensolver and the theta SDP.

pub mod eigen;
pub mod simplex;
pub mod theta;

pub use eigen::{jacobi_eigen, max_eigenvalue, min_eigenvalue, SymmetricEigen};
pub use simplex::{feasible_point, maximize, maximize_by_row_generation, simplex_max, LinearConstraint, LpProblem, LpSolution, Relation};
pub use theta::{lovasz_theta, lovasz_theta_with, ThetaOptions, ThetaResult, ACCEPTABLE_GAP, GAP_TARGET, THETA_CAP};
