//! Dealiased convolutions computed implicitly: the zero padding that makes a
//! circular convolution linear is never materialized. Each padded transform
//! is split into residue streams of the unpadded length, the streams are
//! multiplied term by term, and one forward pass recombines them — roughly
//! halving memory (and a good share of the work) relative to explicit
//! padding, with work buffers that need not be contiguous with the data.
//!
//! Layering:
//!
//! * [`roots`] — O(√m) tables of the roots of unity that premultiply streams.
//! * [`fft`] — planned 1D complex and real transforms with two engines
//!   (rustfft, and a naive O(N²) DFT that doubles as the root oracle),
//!   plus transform-count instrumentation.
//! * [`implicit1d`] — the 1D building blocks: binary convolutions on the
//!   1/2 rule (complex) and 2/3 rule (centered, Hermitian), ternary
//!   Hermitian convolutions, and the general coprime p/q padding.
//! * [`nd`] — 2D/3D convolutions composed from strided 1D stages, reusing
//!   one set of sub-workspaces across the outer loop.
//! * [`oracles`] — independent reference implementations (direct sums,
//!   explicitly padded FFTs, pruned explicit FFTs) used for validation and
//!   benchmarks; they share no code with the implicit path.

pub mod error;
pub mod fft;
pub mod implicit1d;
pub mod nd;
pub mod oracles;
pub mod roots;

pub use error::{Error, Result};
pub use fft::{Backend, Direction};
pub use implicit1d::{Cconv, Fft0Pad, Fft0tPad, FftPad, Hconv, PqTransform, Tconv};
pub use nd::{
    memory_report, Advection2d, Cconv2, Cconv3, Conv2, Field2D, Field3D, FieldKind, Hconv3,
    MemoryReport, NdKind, Tconv2,
};
