//! Riemannian geometry of the α-metric on volume-preserving maps of the
//! torus: connection, curvature, and Jacobi fields.

pub mod connection;
pub mod jacobi;

pub use connection::{
    arnold_closed_form, bracket, cal_u, connection_defect, covariant_derivative, curvature_by_composition,
    curvature_op, find_alpha0, flat_covariant, frak_u, m_op, sectional_curvature, Alpha0Search, SignFlip,
    TrigVectorField,
};
pub use jacobi::{jacobi_evolve, JacobiSample, JacobiTrajectory};
