//! Multidimensional dealiased convolutions, composed from the 1D building
//! blocks: an outer implicitly padded transform over x produces residue
//! slabs, every slab is convolved by a reused lower-dimensional convolver,
//! and one outer forward pass recombines. The sub-convolver workspace is
//! shared across the whole outer loop, which is where the memory savings
//! over explicit padding come from.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft::Backend;
use crate::implicit1d::{Cconv, Fft0Pad, Fft0tPad, FftPad, Hconv, Tconv};

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

/// Spectral storage conventions for multidimensional fields.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldKind {
    /// Non-negative wavenumbers only: mx×my (×mz).
    Standard,
    /// x (and y, in 3D) centered, last axis Hermitian: (2mx-1)×my in 2D
    /// with the origin at row mx-1; (2mx-1)×(2my-1)×mz in 3D.
    CenteredHermitian,
    /// x centered on a signed grid of 2mx rows (row 0, wavenumber -mx, is
    /// identically zero), y Hermitian with my+1 columns (column my zero).
    /// Used by the ternary convolution.
    SignedCentered,
}

/// A 2D spectral field in row-major storage.
#[derive(Clone, Debug)]
pub struct Field2D {
    pub data: Vec<Complex64>,
    pub mx: usize,
    pub my: usize,
    pub kind: FieldKind,
}

impl Field2D {
    pub fn zeros(kind: FieldKind, mx: usize, my: usize) -> Self {
        let (rows, cols) = shape2(kind, mx, my);
        Field2D {
            data: vec![zero(); rows * cols],
            mx,
            my,
            kind,
        }
    }

    pub fn rows(&self) -> usize {
        shape2(self.kind, self.mx, self.my).0
    }

    pub fn cols(&self) -> usize {
        shape2(self.kind, self.mx, self.my).1
    }

    pub fn complex_words(&self) -> usize {
        self.data.len()
    }

    #[inline]
    pub fn at(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.cols() + col]
    }

    #[inline]
    pub fn at_mut(&mut self, row: usize, col: usize) -> &mut Complex64 {
        let cols = self.cols();
        &mut self.data[row * cols + col]
    }

    /// For centered kinds: the stored entry for signed wavenumbers (kx, ky),
    /// ky ≥ 0.
    pub fn mode(&self, kx: isize, ky: usize) -> Complex64 {
        let origin = match self.kind {
            FieldKind::Standard => 0,
            FieldKind::CenteredHermitian => self.mx as isize - 1,
            FieldKind::SignedCentered => self.mx as isize,
        };
        self.at((kx + origin) as usize, ky)
    }

    pub fn mode_mut(&mut self, kx: isize, ky: usize) -> &mut Complex64 {
        let origin = match self.kind {
            FieldKind::Standard => 0,
            FieldKind::CenteredHermitian => self.mx as isize - 1,
            FieldKind::SignedCentered => self.mx as isize,
        };
        self.at_mut((kx + origin) as usize, ky)
    }

    /// Make the stored ky = 0 line consistent with an underlying real field:
    /// f(-kx, 0) = conj(f(kx, 0)), real at the origin. For the signed kind
    /// the kx = -mx row and ky = my column are also zeroed.
    pub fn enforce_symmetry(&mut self) {
        match self.kind {
            FieldKind::Standard => {}
            FieldKind::CenteredHermitian => {
                for k in 1..self.mx as isize {
                    let avg = (self.mode(k, 0) + self.mode(-k, 0).conj()) * 0.5;
                    *self.mode_mut(k, 0) = avg;
                    *self.mode_mut(-k, 0) = avg.conj();
                }
                self.mode_mut(0, 0).im = 0.0;
            }
            FieldKind::SignedCentered => {
                let cols = self.cols();
                for x in self.data[..cols].iter_mut() {
                    *x = zero();
                }
                for r in 0..self.rows() {
                    self.data[r * cols + cols - 1] = zero();
                }
                for k in 1..self.mx as isize {
                    let avg = (self.mode(k, 0) + self.mode(-k, 0).conj()) * 0.5;
                    *self.mode_mut(k, 0) = avg;
                    *self.mode_mut(-k, 0) = avg.conj();
                }
                self.mode_mut(0, 0).im = 0.0;
            }
        }
    }

    /// ‖symmetry violation‖₂ / ‖f‖₂ over the constrained entries.
    pub fn symmetry_residual(&self) -> f64 {
        let mut viol = 0.0;
        match self.kind {
            FieldKind::Standard => {}
            FieldKind::CenteredHermitian | FieldKind::SignedCentered => {
                for k in 1..self.mx as isize {
                    viol += (self.mode(k, 0) - self.mode(-k, 0).conj()).norm_sqr();
                }
                viol += self.mode(0, 0).im * self.mode(0, 0).im;
                if self.kind == FieldKind::SignedCentered {
                    let cols = self.cols();
                    viol += self.data[..cols].iter().map(|x| x.norm_sqr()).sum::<f64>();
                    for r in 0..self.rows() {
                        viol += self.data[r * cols + cols - 1].norm_sqr();
                    }
                }
            }
        }
        let norm: f64 = self.data.iter().map(|x| x.norm_sqr()).sum();
        (viol / norm.max(f64::MIN_POSITIVE)).sqrt()
    }
}

fn shape2(kind: FieldKind, mx: usize, my: usize) -> (usize, usize) {
    match kind {
        FieldKind::Standard => (mx, my),
        FieldKind::CenteredHermitian => (2 * mx - 1, my),
        FieldKind::SignedCentered => (2 * mx, my + 1),
    }
}

/// A 3D spectral field, row-major with z contiguous.
#[derive(Clone, Debug)]
pub struct Field3D {
    pub data: Vec<Complex64>,
    pub mx: usize,
    pub my: usize,
    pub mz: usize,
    pub kind: FieldKind,
}

impl Field3D {
    pub fn zeros(kind: FieldKind, mx: usize, my: usize, mz: usize) -> Self {
        let (nx, ny, nz) = shape3(kind, mx, my, mz);
        Field3D {
            data: vec![zero(); nx * ny * nz],
            mx,
            my,
            mz,
            kind,
        }
    }

    pub fn shape(&self) -> (usize, usize, usize) {
        shape3(self.kind, self.mx, self.my, self.mz)
    }

    pub fn complex_words(&self) -> usize {
        self.data.len()
    }

    pub fn mode(&self, kx: isize, ky: isize, kz: usize) -> Complex64 {
        let (_, ny, nz) = self.shape();
        let (ox, oy) = match self.kind {
            FieldKind::Standard => (0, 0),
            _ => (self.mx as isize - 1, self.my as isize - 1),
        };
        self.data[(((kx + ox) as usize * ny) + (ky + oy) as usize) * nz + kz]
    }

    pub fn mode_mut(&mut self, kx: isize, ky: isize, kz: usize) -> &mut Complex64 {
        let (_, ny, nz) = self.shape();
        let (ox, oy) = match self.kind {
            FieldKind::Standard => (0, 0),
            _ => (self.mx as isize - 1, self.my as isize - 1),
        };
        &mut self.data[(((kx + ox) as usize * ny) + (ky + oy) as usize) * nz + kz]
    }

    /// Conjugate-symmetrize the stored kz = 0 plane about the (x, y) origin.
    pub fn enforce_symmetry(&mut self) {
        if self.kind != FieldKind::CenteredHermitian {
            return;
        }
        let (mx, my) = (self.mx as isize, self.my as isize);
        for kx in 0..mx {
            for ky in (1 - my)..my {
                if kx == 0 && ky <= 0 {
                    continue;
                }
                let avg = (self.mode(kx, ky, 0) + self.mode(-kx, -ky, 0).conj()) * 0.5;
                *self.mode_mut(kx, ky, 0) = avg;
                *self.mode_mut(-kx, -ky, 0) = avg.conj();
            }
        }
        self.mode_mut(0, 0, 0).im = 0.0;
    }

    /// ‖symmetry violation‖₂ / ‖f‖₂ on the stored kz = 0 plane.
    pub fn symmetry_residual(&self) -> f64 {
        if self.kind != FieldKind::CenteredHermitian {
            return 0.0;
        }
        let (mx, my) = (self.mx as isize, self.my as isize);
        let mut viol = 0.0;
        for kx in 0..mx {
            for ky in (1 - my)..my {
                if kx == 0 && ky <= 0 {
                    continue;
                }
                viol += (self.mode(kx, ky, 0) - self.mode(-kx, -ky, 0).conj()).norm_sqr();
            }
        }
        viol += self.mode(0, 0, 0).im * self.mode(0, 0, 0).im;
        let norm: f64 = self.data.iter().map(|x| x.norm_sqr()).sum();
        (viol / norm.max(f64::MIN_POSITIVE)).sqrt()
    }
}

fn shape3(kind: FieldKind, mx: usize, my: usize, mz: usize) -> (usize, usize, usize) {
    match kind {
        FieldKind::Standard => (mx, my, mz),
        _ => (2 * mx - 1, 2 * my - 1, mz),
    }
}

fn check_field2(f: &Field2D, kind: FieldKind, mx: usize, my: usize, what: &str) -> Result<()> {
    if f.kind != kind || f.mx != mx || f.my != my {
        return Err(Error::InvalidArgument(format!(
            "{what}: expected {kind:?} field of {mx}×{my} modes"
        )));
    }
    if f.data.len() != f.rows() * f.cols() {
        return Err(Error::SizeMismatch {
            what: "2D field storage",
            expected: f.rows() * f.cols(),
            got: f.data.len(),
        });
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// 2D complex convolution (1/2 rule on both axes).
// ---------------------------------------------------------------------------

/// 2D implicitly dealiased complex convolution of mx×my modes.
/// Workspace: 2·mx·my + 2·my complex words.
pub struct Cconv2 {
    mx: usize,
    my: usize,
    xpad: FftPad,
    row: Cconv,
    u: Vec<Complex64>,
    v: Vec<Complex64>,
    u1: Vec<Complex64>,
    v1: Vec<Complex64>,
}

impl Cconv2 {
    pub fn new(backend: Backend, mx: usize, my: usize) -> Result<Self> {
        Ok(Cconv2 {
            mx,
            my,
            xpad: FftPad::with_width(backend, mx, my)?,
            row: Cconv::new(backend, my)?,
            u: vec![zero(); mx * my],
            v: vec![zero(); mx * my],
            u1: vec![zero(); my],
            v1: vec![zero(); my],
        })
    }

    pub fn workspace_complex_words(&self) -> usize {
        self.u.len() + self.v.len() + self.u1.len() + self.v1.len()
    }

    /// f ← f * g (dealiased). Both inputs are overwritten.
    pub fn convolve(&mut self, f: &mut Field2D, g: &mut Field2D) -> Result<()> {
        check_field2(f, FieldKind::Standard, self.mx, self.my, "cconv2 f")?;
        check_field2(g, FieldKind::Standard, self.mx, self.my, "cconv2 g")?;
        self.convolve_slices(&mut f.data, &mut g.data)
    }

    /// Raw-slice form (row-major mx×my), used when this convolver is the
    /// slab stage of a 3D convolution or when fields are managed elsewhere.
    pub fn convolve_slices(
        &mut self,
        f: &mut [Complex64],
        g: &mut [Complex64],
    ) -> Result<()> {
        let Cconv2 {
            mx,
            my,
            xpad,
            row,
            u,
            v,
            u1,
            v1,
        } = self;
        let (mx, my) = (*mx, *my);
        xpad.backward(f, u)?;
        xpad.backward(g, v)?;
        for x in 0..mx {
            let span = x * my..(x + 1) * my;
            row.convolve(&mut f[span.clone()], &mut g[span.clone()], u1, v1)?;
            row.convolve(&mut u[span.clone()], &mut v[span], u1, v1)?;
        }
        xpad.forward(f, u)
    }
}

// ---------------------------------------------------------------------------
// 2D centered Hermitian convolution (2/3 rule on both axes).
// ---------------------------------------------------------------------------

/// 2D implicitly dealiased centered Hermitian convolution of
/// (2mx-1)×my stored modes; my must be even. Workspace for a single pair:
/// 2(mx+1)·my + my + 2 complex words. With batch > 1 it also carries the
/// 3·my/2-word product accumulator for the shared-transform multi form.
pub struct Conv2 {
    mx: usize,
    my: usize,
    batch: usize,
    xpad: Fft0Pad,
    row: Hconv,
    u: Vec<Complex64>,
    v: Vec<Complex64>,
    u1: Vec<Complex64>,
    v1: Vec<Complex64>,
    acc: Vec<Complex64>,
}

impl Conv2 {
    pub fn new(backend: Backend, mx: usize, my: usize) -> Result<Self> {
        Self::with_batch(backend, mx, my, 1)
    }

    pub fn with_batch(backend: Backend, mx: usize, my: usize, batch: usize) -> Result<Self> {
        if batch == 0 {
            return Err(Error::InvalidArgument("conv2: batch must be ≥ 1".into()));
        }
        let slab = (mx + 1) * my;
        Ok(Conv2 {
            mx,
            my,
            batch,
            xpad: Fft0Pad::with_width(backend, mx, my)?,
            row: Hconv::new(backend, my)?,
            u: vec![zero(); batch * slab],
            v: vec![zero(); batch * slab],
            u1: vec![zero(); my / 2 + 1],
            v1: vec![zero(); my / 2 + 1],
            acc: vec![zero(); if batch > 1 { 3 * (my / 2) } else { 0 }],
        })
    }

    pub fn workspace_complex_words(&self) -> usize {
        self.u.len() + self.v.len() + self.u1.len() + self.v1.len() + self.acc.len()
    }

    /// f ← f * g (dealiased). Both inputs are overwritten.
    pub fn convolve(&mut self, f: &mut Field2D, g: &mut Field2D) -> Result<()> {
        check_field2(f, FieldKind::CenteredHermitian, self.mx, self.my, "conv2 f")?;
        check_field2(g, FieldKind::CenteredHermitian, self.mx, self.my, "conv2 g")?;
        self.convolve_slices(&mut f.data, &mut g.data)
    }

    /// Raw-slice single-pair form; slices are row-major (2mx-1)×my.
    pub fn convolve_slices(
        &mut self,
        f: &mut [Complex64],
        g: &mut [Complex64],
    ) -> Result<()> {
        let Conv2 {
            mx,
            my,
            xpad,
            row,
            u,
            v,
            u1,
            v1,
            ..
        } = self;
        let (mx, my) = (*mx, *my);
        let slab = (mx + 1) * my;
        let (u, v) = (&mut u[..slab], &mut v[..slab]);
        xpad.backward(f, u)?;
        xpad.backward(g, v)?;
        for r in 0..2 * mx - 1 {
            let span = r * my..(r + 1) * my;
            row.convolve(&mut f[span.clone()], &mut g[span], u1, v1)?;
        }
        for r in 0..mx + 1 {
            let span = r * my..(r + 1) * my;
            row.convolve(&mut u[span.clone()], &mut v[span], u1, v1)?;
        }
        xpad.forward(f, u)
    }

    /// fs[0] ← Σ_i fs[i] * gs[i], sharing one set of outer transforms and
    /// accumulating the row products before the forward row transforms.
    /// Requires a convolver built with `with_batch(.., fs.len())` or larger.
    pub fn convolve_multi(&mut self, fs: &mut [&mut Field2D], gs: &mut [&mut Field2D]) -> Result<()> {
        if fs.len() != gs.len() || fs.is_empty() {
            return Err(Error::InvalidArgument(
                "conv2: need equal, nonzero numbers of f and g inputs".into(),
            ));
        }
        if fs.len() > self.batch {
            return Err(Error::InvalidArgument(format!(
                "conv2: batch {} exceeds configured {}",
                fs.len(),
                self.batch
            )));
        }
        for f in fs.iter().chain(gs.iter()) {
            check_field2(f, FieldKind::CenteredHermitian, self.mx, self.my, "conv2 input")?;
        }
        if fs.len() == 1 {
            let (f0, g0) = (&mut *fs[0], &mut *gs[0]);
            return self.convolve_slices(&mut f0.data, &mut g0.data);
        }
        let Conv2 {
            mx,
            my,
            xpad,
            row,
            u,
            v,
            u1,
            v1,
            acc,
            ..
        } = self;
        let (mx, my) = (*mx, *my);
        let slab = (mx + 1) * my;
        for (i, (fi, gi)) in fs.iter_mut().zip(gs.iter_mut()).enumerate() {
            xpad.backward(&mut fi.data, &mut u[i * slab..(i + 1) * slab])?;
            xpad.backward(&mut gi.data, &mut v[i * slab..(i + 1) * slab])?;
        }
        for r in 0..2 * mx - 1 {
            let span = r * my..(r + 1) * my;
            let mut frows: Vec<&mut [Complex64]> =
                fs.iter_mut().map(|f| &mut f.data[span.clone()]).collect();
            let mut grows: Vec<&mut [Complex64]> =
                gs.iter_mut().map(|g| &mut g.data[span.clone()]).collect();
            row.convolve_multi(&mut frows, &mut grows, u1, v1, acc)?;
        }
        for r in 0..mx + 1 {
            let span = r * my..(r + 1) * my;
            let mut urows: Vec<&mut [Complex64]> = u
                .chunks_mut(slab)
                .take(fs.len())
                .map(|c| &mut c[span.clone()])
                .collect();
            let mut vrows: Vec<&mut [Complex64]> = v
                .chunks_mut(slab)
                .take(fs.len())
                .map(|c| &mut c[span.clone()])
                .collect();
            row.convolve_multi(&mut urows, &mut vrows, u1, v1, acc)?;
        }
        xpad.forward(&mut fs[0].data, &mut u[..slab])
    }
}

// ---------------------------------------------------------------------------
// 3D convolutions.
// ---------------------------------------------------------------------------

/// 3D implicitly dealiased complex convolution of mx×my×mz modes.
pub struct Cconv3 {
    mx: usize,
    my: usize,
    mz: usize,
    xpad: FftPad,
    slab: Cconv2,
    u: Vec<Complex64>,
    v: Vec<Complex64>,
}

impl Cconv3 {
    pub fn new(backend: Backend, mx: usize, my: usize, mz: usize) -> Result<Self> {
        Ok(Cconv3 {
            mx,
            my,
            mz,
            xpad: FftPad::with_width(backend, mx, my * mz)?,
            slab: Cconv2::new(backend, my, mz)?,
            u: vec![zero(); mx * my * mz],
            v: vec![zero(); mx * my * mz],
        })
    }

    pub fn workspace_complex_words(&self) -> usize {
        self.u.len() + self.v.len() + self.slab.workspace_complex_words()
    }

    /// f ← f * g (dealiased). Both inputs are overwritten.
    pub fn convolve(&mut self, f: &mut Field3D, g: &mut Field3D) -> Result<()> {
        for (x, what) in [(&*f, "cconv3 f"), (&*g, "cconv3 g")] {
            if x.kind != FieldKind::Standard
                || (x.mx, x.my, x.mz) != (self.mx, self.my, self.mz)
            {
                return Err(Error::InvalidArgument(format!(
                    "{what}: expected Standard field of {}×{}×{} modes",
                    self.mx, self.my, self.mz
                )));
            }
        }
        let Cconv3 {
            mx,
            my,
            mz,
            xpad,
            slab,
            u,
            v,
        } = self;
        let w = *my * *mz;
        xpad.backward(&mut f.data, u)?;
        xpad.backward(&mut g.data, v)?;
        for x in 0..*mx {
            let span = x * w..(x + 1) * w;
            slab.convolve_slices(&mut f.data[span.clone()], &mut g.data[span.clone()])?;
            slab.convolve_slices(&mut u[span.clone()], &mut v[span])?;
        }
        xpad.forward(&mut f.data, u)
    }
}

/// 3D implicitly dealiased centered Hermitian convolution of
/// (2mx-1)×(2my-1)×mz stored modes; mz must be even.
pub struct Hconv3 {
    mx: usize,
    my: usize,
    mz: usize,
    xpad: Fft0Pad,
    slab: Conv2,
    u: Vec<Complex64>,
    v: Vec<Complex64>,
}

impl Hconv3 {
    pub fn new(backend: Backend, mx: usize, my: usize, mz: usize) -> Result<Self> {
        let w = (2 * my - 1) * mz;
        Ok(Hconv3 {
            mx,
            my,
            mz,
            xpad: Fft0Pad::with_width(backend, mx, w)?,
            slab: Conv2::new(backend, my, mz)?,
            u: vec![zero(); (mx + 1) * w],
            v: vec![zero(); (mx + 1) * w],
        })
    }

    pub fn workspace_complex_words(&self) -> usize {
        self.u.len() + self.v.len() + self.slab.workspace_complex_words()
    }

    /// f ← f * g (dealiased). Both inputs are overwritten.
    pub fn convolve(&mut self, f: &mut Field3D, g: &mut Field3D) -> Result<()> {
        for (x, what) in [(&*f, "hconv3 f"), (&*g, "hconv3 g")] {
            if x.kind != FieldKind::CenteredHermitian
                || (x.mx, x.my, x.mz) != (self.mx, self.my, self.mz)
            {
                return Err(Error::InvalidArgument(format!(
                    "{what}: expected CenteredHermitian field of {}×{}×{} modes",
                    self.mx, self.my, self.mz
                )));
            }
        }
        let Hconv3 {
            mx,
            my,
            mz,
            xpad,
            slab,
            u,
            v,
        } = self;
        let w = (2 * *my - 1) * *mz;
        xpad.backward(&mut f.data, u)?;
        xpad.backward(&mut g.data, v)?;
        for x in 0..2 * *mx - 1 {
            let span = x * w..(x + 1) * w;
            slab.convolve_slices(&mut f.data[span.clone()], &mut g.data[span])?;
        }
        for x in 0..*mx + 1 {
            let span = x * w..(x + 1) * w;
            slab.convolve_slices(&mut u[span.clone()], &mut v[span])?;
        }
        xpad.forward(&mut f.data, u)
    }
}

// ---------------------------------------------------------------------------
// 2D centered Hermitian ternary convolution (1/2 rule, doubled padding).
// ---------------------------------------------------------------------------

/// 2D implicitly dealiased ternary convolution of signed-centered
/// 2mx×(my+1) fields (used for cubic nonlinearities such as Z⁴ theories).
pub struct Tconv2 {
    mx: usize,
    my: usize,
    xpad: Fft0tPad,
    row: Tconv,
    u: Vec<Complex64>,
    v: Vec<Complex64>,
    w: Vec<Complex64>,
    u1: Vec<Complex64>,
    v1: Vec<Complex64>,
    w1: Vec<Complex64>,
}

impl Tconv2 {
    pub fn new(backend: Backend, mx: usize, my: usize) -> Result<Self> {
        let words = 2 * mx * (my + 1);
        Ok(Tconv2 {
            mx,
            my,
            xpad: Fft0tPad::with_width(backend, mx, my + 1)?,
            row: Tconv::new(backend, my)?,
            u: vec![zero(); words],
            v: vec![zero(); words],
            w: vec![zero(); words],
            u1: vec![zero(); my + 1],
            v1: vec![zero(); my + 1],
            w1: vec![zero(); my + 1],
        })
    }

    pub fn workspace_complex_words(&self) -> usize {
        self.u.len() + self.v.len() + self.w.len() + self.u1.len() + self.v1.len() + self.w1.len()
    }

    /// f ← f * g * h (dealiased). All inputs are overwritten.
    pub fn convolve(&mut self, f: &mut Field2D, g: &mut Field2D, h: &mut Field2D) -> Result<()> {
        for (x, what) in [(&*f, "tconv2 f"), (&*g, "tconv2 g"), (&*h, "tconv2 h")] {
            check_field2(x, FieldKind::SignedCentered, self.mx, self.my, what)?;
        }
        let Tconv2 {
            mx,
            my,
            xpad,
            row,
            u,
            v,
            w,
            u1,
            v1,
            w1,
        } = self;
        let cols = *my + 1;
        xpad.backward(&mut f.data, u)?;
        xpad.backward(&mut g.data, v)?;
        xpad.backward(&mut h.data, w)?;
        for r in 0..2 * *mx {
            let span = r * cols..(r + 1) * cols;
            row.convolve(
                &mut f.data[span.clone()],
                &mut g.data[span.clone()],
                &mut h.data[span.clone()],
                u1,
                v1,
                w1,
            )?;
            row.convolve(
                &mut u[span.clone()],
                &mut v[span.clone()],
                &mut w[span],
                u1,
                v1,
                w1,
            )?;
        }
        xpad.forward(&mut f.data, u)
    }
}

// ---------------------------------------------------------------------------
// Pseudospectral advection (2D incompressible vorticity nonlinearity).
// ---------------------------------------------------------------------------

/// The dealiased advection term of the 2D vorticity equation: the product
/// sum u·∇ω computed spectrally as two simultaneous centered Hermitian
/// convolutions sharing one set of outer transforms (five x-direction
/// transform passes in total).
pub struct Advection2d {
    mx: usize,
    my: usize,
    conv: Conv2,
    scratch: [Field2D; 4],
}

impl Advection2d {
    pub fn new(backend: Backend, mx: usize, my: usize) -> Result<Self> {
        let z = || Field2D::zeros(FieldKind::CenteredHermitian, mx, my);
        Ok(Advection2d {
            mx,
            my,
            conv: Conv2::with_batch(backend, mx, my, 2)?,
            scratch: [z(), z(), z(), z()],
        })
    }

    /// Returns the spectrum of (u·∇)ω for the vorticity spectrum ω, where
    /// u is the incompressible velocity recovered from ω through the
    /// streamfunction (u = ∇⊥ k⁻²ω in Fourier space). Rejects input whose
    /// stored ky = 0 line is not conjugate-symmetric.
    pub fn compute(&mut self, omega: &Field2D) -> Result<Field2D> {
        check_field2(omega, FieldKind::CenteredHermitian, self.mx, self.my, "vorticity")?;
        if omega.symmetry_residual() > 1e-8 {
            return Err(Error::InvalidArgument(
                "vorticity spectrum is not conjugate-symmetric on its ky = 0 line".into(),
            ));
        }
        let (mx, my) = (self.mx as isize, self.my);
        let [wx, psiy, wy, psix] = &mut self.scratch;
        for kx in (1 - mx)..mx {
            for ky in 0..my {
                let w = omega.mode(kx, ky);
                let (fx, fy) = (kx as f64, ky as f64);
                let k2 = fx * fx + fy * fy;
                let inv = if k2 > 0.0 { 1.0 / k2 } else { 0.0 };
                let i = Complex64::new(0.0, 1.0);
                *wx.mode_mut(kx, ky) = i * fx * w;
                *wy.mode_mut(kx, ky) = i * fy * w;
                *psiy.mode_mut(kx, ky) = i * fy * w * inv;
                *psix.mode_mut(kx, ky) = -(i * fx * w * inv);
            }
        }
        // (∂x ω)(∂y ψ·(-1)... ) — both products accumulate into wx.
        {
            let (a, rest) = self.scratch.split_at_mut(1);
            let (b, rest) = rest.split_at_mut(1);
            let (c, d) = rest.split_at_mut(1);
            self.conv
                .convolve_multi(&mut [&mut a[0], &mut c[0]], &mut [&mut b[0], &mut d[0]])?;
        }
        Ok(self.scratch[0].clone())
    }
}

// ---------------------------------------------------------------------------
// Memory accounting.
// ---------------------------------------------------------------------------

/// The multidimensional convolution kinds with published storage bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NdKind {
    Cconv2,
    Conv2,
    Cconv3,
    Hconv3,
    Tconv2,
}

/// Total complex-word storage (input fields plus convolver workspace) for
/// the implicit path, and for the equivalent explicitly padded pipeline.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MemoryReport {
    pub implicit: u64,
    pub explicit: u64,
}

/// Closed-form storage totals; `mz` is ignored by the 2D kinds. The values
/// are exact integers matched by the actual allocations of the convolvers
/// and fields (see the acceptance tests).
pub fn memory_report(kind: NdKind, mx: u64, my: u64, mz: u64) -> MemoryReport {
    match kind {
        NdKind::Cconv2 => MemoryReport {
            implicit: 4 * mx * my + 2 * my,
            explicit: 8 * mx * my,
        },
        NdKind::Conv2 => MemoryReport {
            implicit: 6 * mx * my + my + 2,
            explicit: 9 * mx * my - 6 * my,
        },
        NdKind::Cconv3 => MemoryReport {
            implicit: 4 * mx * my * mz + 2 * my * mz + 2 * mz,
            explicit: 16 * mx * my * mz,
        },
        NdKind::Hconv3 => MemoryReport {
            // Factored: 6mx(2my-1)mz + 2(my+1)mz + 2(mz/2+1).
            implicit: 12 * mx * my * mz - 6 * mx * mz + 2 * my * mz + 3 * mz + 2,
            explicit: 27 * mx * my * mz,
        },
        NdKind::Tconv2 => MemoryReport {
            implicit: 12 * mx * my + 12 * mx + 3 * my + 3,
            explicit: 24 * mx * my + 12 * mx,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rand_field2(kind: FieldKind, mx: usize, my: usize, seed: u64) -> Field2D {
        let mut f = Field2D::zeros(kind, mx, my);
        fill(&mut f.data, seed);
        f.enforce_symmetry();
        f
    }

    fn fill(data: &mut [Complex64], seed: u64) {
        let mut state = seed.wrapping_mul(0x9E3779B97F4A7C15).wrapping_add(0xDEAD);
        for x in data.iter_mut() {
            let mut next = || {
                state = state
                    .wrapping_mul(6364136223846793005)
                    .wrapping_add(1442695040888963407);
                ((state >> 11) as f64) / ((1u64 << 53) as f64) * 2.0 - 1.0
            };
            *x = c(next(), next());
        }
    }

    fn rel_l2(a: &[Complex64], b: &[Complex64]) -> f64 {
        let num: f64 = a
            .iter()
            .zip(b)
            .map(|(x, y)| (x - y).norm_sqr())
            .sum::<f64>()
            .sqrt();
        let den: f64 = b.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        num / den.max(f64::MIN_POSITIVE)
    }

    #[test]
    fn cconv2_matches_direct_sum() {
        for (mx, my) in [(1, 1), (1, 8), (8, 1), (4, 4), (5, 7), (8, 8)] {
            let mut f = rand_field2(FieldKind::Standard, mx, my, 1);
            let mut g = rand_field2(FieldKind::Standard, mx, my, 2);
            let want = oracles::direct_cconv2(&f.data, &g.data, mx, my, None).unwrap();
            let mut conv = Cconv2::new(Backend::Optimized, mx, my).unwrap();
            conv.convolve(&mut f, &mut g).unwrap();
            assert!(
                rel_l2(&f.data, &want) < 1e-13,
                "cconv2 {mx}×{my}: {}",
                rel_l2(&f.data, &want)
            );
        }
    }

    #[test]
    fn cconv2_dc_only_fields_multiply_like_scalars() {
        let (mx, my) = (4, 4);
        let mut f = Field2D::zeros(FieldKind::Standard, mx, my);
        let mut g = Field2D::zeros(FieldKind::Standard, mx, my);
        f.data[0] = c(3.0, 0.0);
        g.data[0] = c(-2.0, 5.0);
        let mut conv = Cconv2::new(Backend::Optimized, mx, my).unwrap();
        conv.convolve(&mut f, &mut g).unwrap();
        assert!((f.data[0] - c(-6.0, 15.0)).norm() < 1e-13);
        assert!(f.data[1..].iter().all(|x| x.norm() < 1e-13));
    }

    #[test]
    fn cconv2_separable_inputs_give_tensor_products() {
        let (mx, my) = (4, 5);
        let ax = fill_vec(mx, 3);
        let ay = fill_vec(my, 4);
        let bx = fill_vec(mx, 5);
        let by = fill_vec(my, 6);
        let mut f = Field2D::zeros(FieldKind::Standard, mx, my);
        let mut g = Field2D::zeros(FieldKind::Standard, mx, my);
        for x in 0..mx {
            for y in 0..my {
                *f.at_mut(x, y) = ax[x] * ay[y];
                *g.at_mut(x, y) = bx[x] * by[y];
            }
        }
        let cx = oracles::direct_cconv(&ax, &bx, None).unwrap();
        let cy = oracles::direct_cconv(&ay, &by, None).unwrap();
        let mut conv = Cconv2::new(Backend::Optimized, mx, my).unwrap();
        conv.convolve(&mut f, &mut g).unwrap();
        for x in 0..mx {
            for y in 0..my {
                let want = cx[x] * cy[y];
                assert!((f.at(x, y) - want).norm() < 1e-12 * want.norm().max(1.0));
            }
        }
    }

    fn fill_vec(n: usize, seed: u64) -> Vec<Complex64> {
        let mut v = vec![c(0.0, 0.0); n];
        fill(&mut v, seed);
        v
    }

    #[test]
    fn conv2_matches_direct_sum() {
        for (mx, my) in [(2, 2), (3, 4), (4, 4), (2, 8)] {
            let mut f = rand_field2(FieldKind::CenteredHermitian, mx, my, 7);
            let mut g = rand_field2(FieldKind::CenteredHermitian, mx, my, 8);
            let want = oracles::direct_conv2(&f.data, &g.data, mx, my, None).unwrap();
            let mut conv = Conv2::new(Backend::Optimized, mx, my).unwrap();
            conv.convolve(&mut f, &mut g).unwrap();
            assert!(
                rel_l2(&f.data, &want) < 1e-12,
                "conv2 {mx}×{my}: {}",
                rel_l2(&f.data, &want)
            );
        }
    }

    #[test]
    fn conv2_multi_accumulates_pairwise_products() {
        let (mx, my) = (3, 4);
        let mut f1 = rand_field2(FieldKind::CenteredHermitian, mx, my, 9);
        let mut g1 = rand_field2(FieldKind::CenteredHermitian, mx, my, 10);
        let mut f2 = rand_field2(FieldKind::CenteredHermitian, mx, my, 11);
        let mut g2 = rand_field2(FieldKind::CenteredHermitian, mx, my, 12);
        let a = oracles::direct_conv2(&f1.data, &g1.data, mx, my, None).unwrap();
        let b = oracles::direct_conv2(&f2.data, &g2.data, mx, my, None).unwrap();
        let want: Vec<Complex64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        let mut conv = Conv2::with_batch(Backend::Optimized, mx, my, 2).unwrap();
        conv.convolve_multi(&mut [&mut f1, &mut f2], &mut [&mut g1, &mut g2])
            .unwrap();
        assert!(rel_l2(&f1.data, &want) < 1e-12);
    }

    #[test]
    fn conv2_output_keeps_stored_line_symmetry() {
        let (mx, my) = (4, 4);
        let mut f = rand_field2(FieldKind::CenteredHermitian, mx, my, 13);
        let mut g = rand_field2(FieldKind::CenteredHermitian, mx, my, 14);
        let mut conv = Conv2::new(Backend::Optimized, mx, my).unwrap();
        conv.convolve(&mut f, &mut g).unwrap();
        assert!(f.symmetry_residual() < 1e-13);
    }

    #[test]
    fn cconv3_matches_direct_sum() {
        for (mx, my, mz) in [(1, 1, 1), (2, 3, 4), (4, 4, 4), (3, 1, 5)] {
            let mut f = Field3D::zeros(FieldKind::Standard, mx, my, mz);
            let mut g = Field3D::zeros(FieldKind::Standard, mx, my, mz);
            fill(&mut f.data, 15);
            fill(&mut g.data, 16);
            let want = oracles::direct_cconv3(&f.data, &g.data, mx, my, mz, None).unwrap();
            let mut conv = Cconv3::new(Backend::Optimized, mx, my, mz).unwrap();
            conv.convolve(&mut f, &mut g).unwrap();
            assert!(
                rel_l2(&f.data, &want) < 1e-13,
                "cconv3 {mx}×{my}×{mz}: {}",
                rel_l2(&f.data, &want)
            );
        }
    }

    #[test]
    fn hconv3_matches_direct_sum() {
        for (mx, my, mz) in [(2, 2, 2), (3, 2, 4), (2, 3, 2)] {
            let mut f = Field3D::zeros(FieldKind::CenteredHermitian, mx, my, mz);
            let mut g = Field3D::zeros(FieldKind::CenteredHermitian, mx, my, mz);
            fill(&mut f.data, 17);
            fill(&mut g.data, 18);
            f.enforce_symmetry();
            g.enforce_symmetry();
            let want =
                oracles::direct_hconv3(&f.data, &g.data, mx, my, mz, Some(1 << 24)).unwrap();
            let mut conv = Hconv3::new(Backend::Optimized, mx, my, mz).unwrap();
            conv.convolve(&mut f, &mut g).unwrap();
            assert!(
                rel_l2(&f.data, &want) < 1e-12,
                "hconv3 {mx}×{my}×{mz}: {}",
                rel_l2(&f.data, &want)
            );
        }
    }

    #[test]
    fn tconv2_matches_direct_sum() {
        for (mx, my) in [(1, 2), (2, 4), (3, 2)] {
            let mut f = rand_field2(FieldKind::SignedCentered, mx, my, 19);
            let mut g = rand_field2(FieldKind::SignedCentered, mx, my, 20);
            let mut h = rand_field2(FieldKind::SignedCentered, mx, my, 21);
            let want =
                oracles::direct_tconv2(&f.data, &g.data, &h.data, mx, my, Some(1 << 24)).unwrap();
            let mut conv = Tconv2::new(Backend::Optimized, mx, my).unwrap();
            conv.convolve(&mut f, &mut g, &mut h).unwrap();
            assert!(
                rel_l2(&f.data, &want) < 1e-11,
                "tconv2 {mx}×{my}: {}",
                rel_l2(&f.data, &want)
            );
        }
    }

    #[test]
    fn tconv2_reduces_to_1d_when_y_is_dc_only() {
        // Inputs constant in y collapse to the 1D ternary convolution in x.
        let (mx, my) = (3, 2);
        let ax = fill_vec(2 * mx, 22);
        let bx = fill_vec(2 * mx, 23);
        let cx = fill_vec(2 * mx, 24);
        let mut f = Field2D::zeros(FieldKind::SignedCentered, mx, my);
        let mut g = Field2D::zeros(FieldKind::SignedCentered, mx, my);
        let mut h = Field2D::zeros(FieldKind::SignedCentered, mx, my);
        for (field, line) in [(&mut f, &ax), (&mut g, &bx), (&mut h, &cx)] {
            for x in 0..2 * mx {
                *field.at_mut(x, 0) = line[x];
            }
            field.enforce_symmetry();
            // Real-data consistency in x as well: u(-kx) = conj(u(kx)).
            for k in 1..mx as isize {
                let avg = (field.mode(k, 0) + field.mode(-k, 0).conj()) * 0.5;
                *field.mode_mut(k, 0) = avg;
                *field.mode_mut(-k, 0) = avg.conj();
            }
        }
        let want = oracles::direct_tconv2(&f.data, &g.data, &h.data, mx, my, Some(1 << 24)).unwrap();
        let mut conv = Tconv2::new(Backend::Optimized, mx, my).unwrap();
        conv.convolve(&mut f, &mut g, &mut h).unwrap();
        assert!(rel_l2(&f.data, &want) < 1e-12);
        // And the ky > 0 columns of the result stay empty.
        for x in 0..2 * mx {
            for y in 1..=my {
                assert!(f.at(x, y).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn enforce_symmetry_is_idempotent_and_zeroes_residual() {
        let mut f = Field2D::zeros(FieldKind::CenteredHermitian, 5, 3);
        fill(&mut f.data, 25);
        assert!(f.symmetry_residual() > 1e-3);
        f.enforce_symmetry();
        assert!(f.symmetry_residual() < 1e-15);
        let snapshot = f.data.clone();
        f.enforce_symmetry();
        assert_eq!(f.data, snapshot);

        let mut f = Field3D::zeros(FieldKind::CenteredHermitian, 3, 4, 2);
        fill(&mut f.data, 26);
        f.enforce_symmetry();
        assert!(f.symmetry_residual() < 1e-15);
    }

    #[test]
    fn advection_matches_direct_spectral_sum() {
        let (mx, my) = (4, 4);
        let mut omega = rand_field2(FieldKind::CenteredHermitian, mx, my, 27);
        omega.enforce_symmetry();
        let mut adv = Advection2d::new(Backend::Optimized, mx, my).unwrap();
        let got = adv.compute(&omega).unwrap();

        // Independent evaluation of the same bilinear form with the direct
        // oracle: Σ over the two derivative pairs.
        let i = Complex64::new(0.0, 1.0);
        let mut wx = Field2D::zeros(FieldKind::CenteredHermitian, mx, my);
        let mut wy = wx.clone();
        let mut psix = wx.clone();
        let mut psiy = wx.clone();
        for kx in (1 - mx as isize)..mx as isize {
            for ky in 0..my {
                let w = omega.mode(kx, ky);
                let (fx, fy) = (kx as f64, ky as f64);
                let k2 = fx * fx + fy * fy;
                let inv = if k2 > 0.0 { 1.0 / k2 } else { 0.0 };
                *wx.mode_mut(kx, ky) = i * fx * w;
                *wy.mode_mut(kx, ky) = i * fy * w;
                *psiy.mode_mut(kx, ky) = i * fy * w * inv;
                *psix.mode_mut(kx, ky) = -(i * fx * w * inv);
            }
        }
        let a = oracles::direct_conv2(&wx.data, &psiy.data, mx, my, None).unwrap();
        let b = oracles::direct_conv2(&wy.data, &psix.data, mx, my, None).unwrap();
        let want: Vec<Complex64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        assert!(rel_l2(&got.data, &want) < 1e-12);
    }

    #[test]
    fn advection_rejects_asymmetric_input() {
        let (mx, my) = (4, 4);
        let mut omega = Field2D::zeros(FieldKind::CenteredHermitian, mx, my);
        fill(&mut omega.data, 28);
        let mut adv = Advection2d::new(Backend::Optimized, mx, my).unwrap();
        assert!(matches!(
            adv.compute(&omega),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn memory_report_matches_actual_allocation() {
        let be = Backend::Optimized;
        for (mx, my) in [(4usize, 4usize), (8, 6), (2, 2), (16, 8), (6, 10)] {
            let conv = Cconv2::new(be, mx, my).unwrap();
            let fields = 2 * Field2D::zeros(FieldKind::Standard, mx, my).complex_words();
            assert_eq!(
                (fields + conv.workspace_complex_words()) as u64,
                memory_report(NdKind::Cconv2, mx as u64, my as u64, 1).implicit
            );

            let conv = Conv2::new(be, mx, my).unwrap();
            let fields =
                2 * Field2D::zeros(FieldKind::CenteredHermitian, mx, my).complex_words();
            assert_eq!(
                (fields + conv.workspace_complex_words()) as u64,
                memory_report(NdKind::Conv2, mx as u64, my as u64, 1).implicit
            );

            let conv = Tconv2::new(be, mx, my).unwrap();
            let fields = 3 * Field2D::zeros(FieldKind::SignedCentered, mx, my).complex_words();
            assert_eq!(
                (fields + conv.workspace_complex_words()) as u64,
                memory_report(NdKind::Tconv2, mx as u64, my as u64, 1).implicit
            );
        }
        for (mx, my, mz) in [(4usize, 4usize, 4usize), (2, 3, 2), (8, 4, 6), (3, 5, 2), (6, 6, 8)] {
            let conv = Cconv3::new(be, mx, my, mz).unwrap();
            let fields = 2 * Field3D::zeros(FieldKind::Standard, mx, my, mz).complex_words();
            assert_eq!(
                (fields + conv.workspace_complex_words()) as u64,
                memory_report(NdKind::Cconv3, mx as u64, my as u64, mz as u64).implicit
            );

            let conv = Hconv3::new(be, mx, my, mz).unwrap();
            let fields =
                2 * Field3D::zeros(FieldKind::CenteredHermitian, mx, my, mz).complex_words();
            assert_eq!(
                (fields + conv.workspace_complex_words()) as u64,
                memory_report(NdKind::Hconv3, mx as u64, my as u64, mz as u64).implicit
            );
        }
    }

    #[test]
    fn implicit_equals_explicit_and_pruned() {
        let (mx, my) = (8, 8);
        let mut f = rand_field2(FieldKind::Standard, mx, my, 29);
        let mut g = rand_field2(FieldKind::Standard, mx, my, 30);
        let explicit = oracles::explicit_cconv2(&f.data, &g.data, mx, my, Backend::Optimized);
        let pruned = oracles::pruned_cconv2(&f.data, &g.data, mx, my, Backend::Optimized);
        let mut conv = Cconv2::new(Backend::Optimized, mx, my).unwrap();
        conv.convolve(&mut f, &mut g).unwrap();
        assert!(rel_l2(&f.data, &explicit) < 1e-13);
        assert!(rel_l2(&f.data, &pruned) < 1e-13);
    }
}
