//! Energy-efficient placement of UAV base stations over elliptical cells.
//!
//! The pipeline groups ground users into non-overlapping elliptical clusters
//! ([`clustering::ellipse_clustering`]), then places one UAV above each
//! cluster with the altitude, beamwidths and transmit power that serve the
//! cell-edge user at the SNR threshold ([`deployment::deploy`]).
//!
//! Modules:
//! - [`geometry`]: minimum-area enclosing ellipses and ellipse predicates.
//! - [`clustering`]: Ward linkage, silhouette, k-means splitting and the
//!   intersection-removal loop.
//! - [`channel`]: air-to-ground link budget.
//! - [`deployment`]: altitude, beam and power per cluster; plan evaluation.
//! - [`scenario`]: Poisson cluster process users and scenario files.
//! - [`baseline`]: circle-packing comparator and a tiny brute-force oracle.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod baseline;
pub mod channel;
pub mod clustering;
pub mod deployment;
pub mod error;
pub mod geometry;
pub mod scenario;

pub mod seed;

pub use channel::{Beam, Environment, EnvironmentKind, RadioConfig};
pub use clustering::{AlgorithmTrace, Cluster, ClusterSet, ClusteringConfig, ClusteringOutcome};
pub use deployment::{AltitudeBounds, DeploymentPlan, PlanMetrics, UavDeployment};
pub use error::{Error, Result};
pub use geometry::{Ellipse, FitConfig, Point2};
pub use scenario::{PcpConfig, Region, Scenario};
