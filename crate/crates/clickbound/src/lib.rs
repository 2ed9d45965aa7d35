//! Upper bounds on the click probability of a finite-size detector from its
//! vacuum dark-count probability.
//!
//! The model: a massless scalar field in a coherent state built from a
//! smooth, compactly supported smearing profile — a four-dimensional bump
//! of amplitude `α` centred a distance `√2 · r_ratio` down the x¹ axis, in
//! units of the coherent state's own length scale. A detector that clicks
//! with probability at most `p_dark` on the vacuum can click on this state
//! with probability at most
//!
//! ```text
//! p_max = min_ζ ( E_ζ + e^{π²/(2ζ)} √p_dark )²,
//! ```
//!
//! where `E_ζ` is the approximation error of a Gaussian-windowed boost
//! average of width `ζ`. The crate computes this bound end to end:
//!
//! - [`special`]: the bump partition function, Gaussian window kernels, and
//!   the Bessel `J₁` used by the radial Fourier reduction;
//! - [`quad`]: deterministic adaptive Gauss–Legendre quadrature for real
//!   and complex integrands in one and two dimensions;
//! - [`smearing`]: the profile, its radial on-shell Fourier transform
//!   `h(u)`, and the tabulated evaluator the overlap integrals sample;
//! - [`wightman`]: the self-overlap `W0` and boosted overlaps `W(η)`,
//!   cached as validated rapidity tables;
//! - [`bound`]: the approximation error `E_ζ`, the bound itself, and its
//!   minimisation over the window width;
//! - [`oracle`]: independent brute-force quadratures that re-derive the
//!   same quantities with none of the main path's reductions, gating the
//!   derived constants;
//! - [`cli`]: the `curve`, `figure1`, `verify`, and `probe` subcommands
//!   with CSV/JSON/SVG output.
//!
//! All numerics are deterministic: parallelism never changes results, so
//! identical inputs give byte-identical output files.

pub mod bound;
pub mod cli;
mod interp;
pub mod oracle;
pub mod quad;
pub mod smearing;
pub mod special;
mod svg;
pub mod wightman;
