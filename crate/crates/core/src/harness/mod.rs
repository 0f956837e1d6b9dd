//! Finite-horizon stand-ins for the cluster-set statements: the orthonormal
//! observable family, its ellipsoid, clouds of `μ_t` vectors, running maxima,
//! target chasing and the uniform-bound surrogate.

mod basis;
mod chase;
mod cloud;
mod ellipsoid;
mod limsup;
mod uniform;

pub use basis::{make_basis, ObservableBasis};
pub use chase::{chase_target, ChaseSpec, TargetChaseResult};
pub use cloud::{AngularCoverage, CloudPoint, ClusterCloud, Containment};
pub use ellipsoid::{ball_membership, ellipsoid_from, EllipsoidSpec, Membership, MAX_GRAM_CONDITION, MEMBERSHIP_TOLERANCE};
pub use limsup::{running_limsup, LimsupRow};
pub use uniform::{admissible_alpha, uniform_bound_check, uniform_bound_observables, UniformBoundReport, CAUCHY_SCHWARZ_TOLERANCE};
