//! Multi-machine transient-stability toolkit: swing-equation simulation,
//! center-of-inertia reference frames, transient-energy accounting, and the
//! two machine transformations between individual and equivalent machines
//! (energy correction and trajectory correction), together with a two-ball
//! free-fall micro-domain where the real/pseudo distinction is exact.
//!
//! The `examples/` directory is the guided tour, one runnable program per
//! capability:
//!
//! ```bash
//! cargo run --example newton_balls        # real vs pseudo balls, closed form
//! cargo run --example simulate_wscc9     # fault simulation on the bundled system
//! cargo run --example critical_clearing  # equal-area value vs bisection search
//! cargo run --example coi_frames         # reference frames and their identities
//! cargo run --example energy_series      # energies and liberation points
//! cargo run --example ecim_failure       # energy correction: sums hold, motion fails
//! cargo run --example tcim_success       # trajectory correction: everything holds
//! cargo run --example build_wscc9        # regenerate the bundled scenario files
//! ```
//!
//! A typical pipeline: load or build a [`sim::Scenario`], integrate it with
//! [`sim::simulate`], move into the system frame with
//! [`frames::to_reference`], aggregate a [`frames::GroupSpec`] with
//! [`frames::equivalent_machine`] and split it with [`frames::inner_group`],
//! anchor the potential energies with [`energy::PeAnchor`], and hand the
//! energy series to the transformation functions in [`transforms`].

pub mod bundled;
pub mod energy;
pub mod error;
pub mod export;
pub mod frames;
pub mod model;
pub mod newtonian;
pub mod report;
pub mod scenario;
pub mod sim;
pub mod transforms;

pub use error::{Error, Result};
