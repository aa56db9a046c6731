//! Multivariate inequality measurement on weighted microdata.
//!
//! The crate estimates copula-based multivariate inverse Lorenz surfaces and
//! the matching multivariate Gini coefficient, evaluates both for parametric
//! copula/margin models, applies and audits inequality-relevant transfers,
//! runs a survey preprocessing pipeline, and compares populations through a
//! dominance partial order.

pub mod copula;
pub mod dataset;
mod error;
pub mod estimator;
pub mod grid;
pub mod ingest;
pub mod lorenz;
pub mod normal;
pub mod numeric;
pub mod quadrature;
pub mod report;
pub mod transfers;

pub use copula::{
    copula_sample, independence_megc, parametric_megc_mc, parametric_megc_quadrature,
    parametric_meilc, parametric_surface, spearman_rho, spearman_to_param, CopulaFamily,
    CopulaModel, Margin,
};
pub use dataset::Dataset;
pub use error::{Error, Result};
pub use estimator::{
    megc, megc_bounds, megc_decomposition, meilc_point, meilc_surface, pseudo_observations,
    GiniDecomposition, MeilcSurface, PseudoObservations,
};
pub use grid::{GridSpec, DEFAULT_GRID_POINTS};
pub use ingest::{
    load_config, load_table, parse_table, preprocess, write_dataset_csv, DropReport,
    OutlierStats, PipelineConfig, RawTable,
};
pub use lorenz::{gini, GiniConvention, LorenzCurve};
pub use report::{
    dominance_graph, export_dot, export_surface, report, weighted_spearman, DominanceGraph,
    InequalityReport, SurfaceFormat,
};
pub use transfers::{
    apply_cit, apply_pdbt, apply_transfer, audit_cim, lorenz_order, parse_transfer_specs,
    DominanceResult, TransferKind, TransferRecord, TransferSpec,
};
