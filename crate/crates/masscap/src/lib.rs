//! masscap: a numerical laboratory for mass-capacity inequalities on
//! rotationally symmetric asymptotically flat 3-manifolds.
//!
//! The crate evaluates ADM mass, electrostatic capacity, Willmore energy,
//! Hawking mass, radial harmonic level-set energies, and horn-singularity
//! criteria on three interchangeable metric representations, and certifies
//! each inequality with a signed margin and an equality (rigidity) flag.
//!
//! ```
//! use masscap::prelude::*;
//!
//! let p = Profile::schwarzschild(1.0);
//! let c = capacity_exterior(&p, 2.0).unwrap();
//! assert!((c.value - 1.0).abs() < 1e-8); // horizon capacity equals the mass
//! let r = margin_mass_capacity(&p, 3.0).unwrap();
//! assert!(r.equality); // the rigidity case
//! ```

pub mod capacity;
pub mod convert;
pub mod curvature;
pub mod error;
pub mod harmonic;
pub mod inequality;
pub mod mass;
pub mod numerics;
pub mod profile;
pub mod report;
pub mod singularity;
pub mod smallsphere;
pub mod surface;
pub mod sweep;
pub mod verify;

pub mod prelude {
    pub use crate::capacity::{
        capacity_exterior, capacity_monotonicity_check, limit_capacity, relative_capacity,
        variational_capacity_oracle, CapacityResult,
    };
    pub use crate::convert::convert;
    pub use crate::curvature::{certify_nonneg_scalar, curvature_oracle, scalar_curvature};
    pub use crate::error::{Error, Result};
    pub use crate::harmonic::{exterior_harmonic, two_ended_harmonic, HarmonicProfile};
    pub use crate::inequality::{
        all_slice_reports, margin_capacity_radius, margin_energy_willmore, margin_hawking_chain,
        margin_mass_capacity, margin_mass_energy, mass_lower_bound_thm34,
        neg_schwarzschild_willmore, pmt_witness, InequalityReport, WitnessMode,
    };
    pub use crate::mass::adm_mass;
    pub use crate::profile::{Profile, ProfileSpec};
    pub use crate::singularity::{sandwich_check, GradHBound, HornSpec, Verdict};
    pub use crate::smallsphere::{mass_capacity_expansion_check, willmore_expansion_fit};
    pub use crate::surface::SurfaceSlice;
}
