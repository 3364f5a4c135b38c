//! Memoryless nonlinear Schrödinger channel: conditional density, entropy
//! functionals, capacity bounds and a split-step reference simulator.

pub mod bounds;
pub mod entropy;
pub mod pdf;
pub mod ssf;

pub use bounds::{
    chi_from_table, chi_lower_bound, max_chi_from_table, max_chi_lower_bound, upper_bound,
    upper_objective, ChiBound, ChiInputLaw, InputTable, MaxChi, MncUpperBound, CHI_ORDERS,
    CHI_TIE_BITS,
};
pub use entropy::{cond_entropies, CondEntropies};
pub use pdf::{
    amplitude_pdf, conditional_pdf, fourier_coeff, phase_series, MncPdfParams, PdfValue,
    PhaseSeries,
};
pub use ssf::simulate_ssf;
