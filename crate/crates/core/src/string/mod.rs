//! Free strings on a flat worldsheet: travelling-wave Clifford spinors, the
//! induced momentum and polymomenta, the energy-momentum tensor, the dilaton
//! and the conserved total polymomentum.

mod config;
mod curve;
mod fields;
mod residual;
mod spec;
mod spinning;
mod state;

pub use config::{FieldGrid, ORDER_H, StringConfig, StringReport};
pub use curve::{total_momentum, total_momentum_products, Curve, CurveNode, DEFAULT_PANELS};
pub use fields::{
    dilaton, dilaton_hessian, energy_momentum, energy_momentum_trace, DilatonConstants, WorldsheetTensor,
};
pub use residual::{
    convergence_order, dilaton_residual, dilaton_wave_residual, polymomentum_divergence, polymomentum_residual,
    trace_residual, wave_residual, wave_residual_order, FdGrid, DEFAULT_ASPECT, DEFAULT_H,
};
pub use spec::{Coef, ModeSpec, ModeSpecJson, DEFAULT_N_MAX};
pub use spinning::{spinning_coordinates, spinning_string, to_spinning_frame};
pub use state::{build_wave_state, raise_spinor, spinor_products, Spinor, WaveState, WORLDSHEET_ETA};
