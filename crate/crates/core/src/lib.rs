//! Fidelity-based lower bounds on genuine multipartite entanglement (GME)
//! and coherence measures.
//!
//! The workflow mirrors how these bounds are used on experimental data:
//!
//! 1. profile a reference pure state `phi` ([`profile_phi`] /
//!    [`coherence_profile`]), which extracts the largest squared Schmidt
//!    coefficient over all bipartitions (`s1'`) or the largest squared basis
//!    amplitude (`|d_max|^2`);
//! 2. feed a measured fidelity `F = <phi| rho |phi>` to
//!    [`bounds_from_fidelity`] / [`coherence_bounds_from_fidelity`], which
//!    turn the certified ratio `S = max(F / s1', 1)` (resp. `D`) into lower
//!    bounds on four GME measures and three coherence measures.
//!
//! The [`oracle`] module provides independent reference values (exact pure
//! state measures, a GHZ-diagonal closed form, and a randomized convex-roof
//! upper bound) so every bound can be checked against something it must not
//! exceed.
//!
//! ```
//! use fbounds::{states, profile_phi, bounds_from_fidelity};
//!
//! let phi = states::ghz(6).unwrap();
//! let profile = profile_phi(&phi).unwrap();
//! let report = bounds_from_fidelity(0.71, None, &profile).unwrap();
//! assert!(report.cren.value > 0.41);
//! ```

pub mod coherence;
pub mod error;
pub mod gme;
pub mod oracle;
pub mod source;
pub mod states;
pub mod tensor;

pub use coherence::{
    Basis, CoherenceBoundReport, CoherenceProfile, FormationBranch, coherence_bounds_from_fidelity,
    coherence_profile,
};
pub use error::{Error, Result};
pub use gme::{BoundValue, GmeBoundReport, PhiProfile, bounds_from_fidelity, profile_phi};
pub use source::StateInput;
pub use tensor::{Bipartition, DensityOperator, PureState, SchmidtSpectrum};
