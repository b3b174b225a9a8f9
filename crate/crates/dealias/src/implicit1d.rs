//! One-dimensional implicitly padded transforms and convolutions.
//!
//! Instead of zero-padding a spectrum and transforming the enlarged buffer,
//! each backward routine here splits the padded transform into residue
//! streams of the original length and computes them from the unpadded data.
//! The streams come back "scrambled" — deinterleaved rather than in natural
//! order — which is harmless because convolutions only ever multiply them
//! term by term before transforming forward again.
//!
//! Layout contracts (part of the public API, the ND code multiplies in
//! scrambled space):
//!
//! * [`FftPad`]  (1/2 rule, complex): f ← even outputs u_{2ℓ}, u ← odd
//!   outputs u_{2ℓ+1} of the 2m-padded backward transform.
//! * [`Fft0Pad`] (2/3 rule, centered): residue r=0 in f[0..m-1] with the
//!   ℓ=m-1 element parked in u[m], r=1 in f[m-1..2m-2], r=-1 in u[0..m-1].
//! * [`Fft0tPad`] (ternary 1/2 rule, signed centered): f ← r=0 stream,
//!   u ← r=1 stream of the 4m-padded transform, both carrying an implicit
//!   (-1)^ℓ that cancels in ternary products.
//!
//! All backward transforms are unnormalized; each forward routine applies
//! the full 1/N of its padded size.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft::{Backend, Direction, FftPlan, Planner};
use crate::roots::ZetaTable;

/// ζ_3 = e^{2πi/3}.
#[inline]
fn zeta3() -> Complex64 {
    Complex64::new(-0.5, 0.75f64.sqrt())
}

/// ζ_3^{-1} = conj(ζ_3).
#[inline]
fn zeta3_inv() -> Complex64 {
    Complex64::new(-0.5, -(0.75f64.sqrt()))
}

fn ranges_overlap(a: &[Complex64], b: &[Complex64]) -> bool {
    if a.is_empty() || b.is_empty() {
        return false;
    }
    let (a0, a1) = (a.as_ptr() as usize, unsafe { a.as_ptr().add(a.len()) }
        as usize);
    let (b0, b1) = (b.as_ptr() as usize, unsafe { b.as_ptr().add(b.len()) }
        as usize);
    a0 < b1 && b0 < a1
}

fn require_disjoint(a: &[Complex64], b: &[Complex64], what: &'static str) -> Result<()> {
    if ranges_overlap(a, b) {
        return Err(Error::Aliasing(what));
    }
    Ok(())
}

fn require_len(buf: &[Complex64], want: usize, what: &'static str) -> Result<()> {
    if buf.len() != want {
        return Err(Error::SizeMismatch {
            what,
            expected: want,
            got: buf.len(),
        });
    }
    Ok(())
}

/// Implicitly 2m-padded complex transform pair (the 1/2 rule).
///
/// `width > 1` vectorizes the same transform over the columns of row-major
/// data: buffers hold `width` interleaved instances, one per column.
pub struct FftPad {
    m: usize,
    width: usize,
    zeta: ZetaTable,
    backward: FftPlan,
    forward: FftPlan,
}

impl FftPad {
    pub fn new(backend: Backend, m: usize) -> Result<Self> {
        Self::with_width(backend, m, 1)
    }

    pub fn with_width(backend: Backend, m: usize, width: usize) -> Result<Self> {
        if m == 0 || width == 0 {
            return Err(Error::InvalidArgument("fftpad: m, width ≥ 1".into()));
        }
        let planner = Planner::new(backend);
        Ok(FftPad {
            m,
            width,
            zeta: ZetaTable::new(2 * m, m)?,
            backward: planner.c2c_strided(m, Direction::Backward, width, width, 1)?,
            forward: planner.c2c_strided(m, Direction::Forward, width, width, 1)?,
        })
    }

    pub fn size(&self) -> usize {
        self.m
    }

    fn check(&self, f: &[Complex64], u: &[Complex64]) -> Result<()> {
        let n = self.m * self.width;
        require_len(f, n, "fftpad f")?;
        require_len(u, n, "fftpad u")?;
        require_disjoint(f, u, "fftpad f and u must not overlap")
    }

    /// Scrambled 2m-padded backward transform: f ← even stream, u ← odd.
    pub fn backward(&self, f: &mut [Complex64], u: &mut [Complex64]) -> Result<()> {
        self.check(f, u)?;
        let w = self.width;
        for k in 0..self.m {
            let zk = self.zeta.zeta(k);
            for j in 0..w {
                u[k * w + j] = zk * f[k * w + j];
            }
        }
        self.backward.execute(f)?;
        self.backward.execute(u)
    }

    /// Inverse of [`FftPad::backward`], normalized by 1/(2m).
    pub fn forward(&self, f: &mut [Complex64], u: &mut [Complex64]) -> Result<()> {
        self.check(f, u)?;
        let w = self.width;
        self.forward.execute(f)?;
        self.forward.execute(u)?;
        let scale = 1.0 / (2 * self.m) as f64;
        for k in 0..self.m {
            let zk = self.zeta.zeta_conj(k);
            for j in 0..w {
                f[k * w + j] = (f[k * w + j] + zk * u[k * w + j]) * scale;
            }
        }
        Ok(())
    }
}

/// In-place implicitly dealiased convolution on the 1/2 rule, with optional
/// dot-product batching: with M inputs the result is Σ_i f_i * g_i, computed
/// with 4M+2 transforms and no extra storage beyond the two work vectors.
pub struct Cconv {
    m: usize,
    zeta: ZetaTable,
    backward: FftPlan,
    forward: FftPlan,
}

impl Cconv {
    pub fn new(backend: Backend, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidArgument("cconv: m ≥ 1".into()));
        }
        let planner = Planner::new(backend);
        Ok(Cconv {
            m,
            zeta: ZetaTable::new(2 * m, m)?,
            backward: planner.c2c_oop(m, Direction::Backward)?,
            forward: planner.c2c_oop(m, Direction::Forward)?,
        })
    }

    pub fn size(&self) -> usize {
        self.m
    }

    /// f ← f * g (linear convolution of the spectra, modes 0..m-1).
    pub fn convolve(
        &self,
        f: &mut [Complex64],
        g: &mut [Complex64],
        u: &mut [Complex64],
        v: &mut [Complex64],
    ) -> Result<()> {
        self.convolve_multi(&mut [f], &mut [g], u, v)
    }

    /// f_0 ← Σ_i f_i * g_i. All inputs are overwritten.
    pub fn convolve_multi(
        &self,
        fs: &mut [&mut [Complex64]],
        gs: &mut [&mut [Complex64]],
        u: &mut [Complex64],
        v: &mut [Complex64],
    ) -> Result<()> {
        let m = self.m;
        if fs.len() != gs.len() || fs.is_empty() {
            return Err(Error::InvalidArgument(
                "cconv: need equal, nonzero numbers of f and g inputs".into(),
            ));
        }
        require_len(u, m, "cconv u")?;
        require_len(v, m, "cconv v")?;
        require_disjoint(u, v, "cconv u and v must not overlap")?;
        for buf in fs.iter().chain(gs.iter()) {
            require_len(buf, m, "cconv input")?;
            require_disjoint(buf, u, "cconv input aliases u")?;
            require_disjoint(buf, v, "cconv input aliases v")?;
        }

        let (f0s, frest) = fs.split_at_mut(1);
        let (g0s, grest) = gs.split_at_mut(1);
        let f0 = &mut *f0s[0];
        let g0 = &mut *g0s[0];

        // Even residue of the first pair, then premultiply by ζ_{2m}^k and
        // take the odd residue; the spectra are dead afterwards.
        self.backward.execute_oop(f0, u)?;
        self.backward.execute_oop(g0, v)?;
        for k in 0..m {
            u[k] *= v[k];
        }
        for k in 0..m {
            let zk = self.zeta.zeta(k);
            f0[k] *= zk;
            g0[k] *= zk;
        }
        self.backward.execute_oop(f0, v)?;
        self.backward.execute_oop(g0, f0)?;
        for k in 0..m {
            v[k] *= f0[k];
        }

        // Remaining pairs accumulate into u (even) and v (odd), using the
        // first pair's dead spectra as scratch.
        for (fi, gi) in frest.iter_mut().zip(grest.iter_mut()) {
            self.backward.execute_oop(fi, f0)?;
            self.backward.execute_oop(gi, g0)?;
            for k in 0..m {
                u[k] += f0[k] * g0[k];
            }
            for k in 0..m {
                let zk = self.zeta.zeta(k);
                fi[k] *= zk;
                gi[k] *= zk;
            }
            self.backward.execute_oop(fi, f0)?;
            self.backward.execute_oop(gi, g0)?;
            for k in 0..m {
                v[k] += f0[k] * g0[k];
            }
        }

        self.forward.execute_oop(u, f0)?;
        self.forward.execute_oop(v, u)?;
        let scale = 1.0 / (2 * m) as f64;
        for k in 0..m {
            f0[k] = (f0[k] + self.zeta.zeta_conj(k) * u[k]) * scale;
        }
        Ok(())
    }
}

/// Implicitly 3m-padded centered transform pair (the 2/3 rule).
///
/// Data is 2m-1 long with the Fourier origin at index m-1. The auxiliary
/// vector needs m+1 slots: one extra to park the stream element displaced by
/// the overlapping in-place transforms.
pub struct Fft0Pad {
    m: usize,
    width: usize,
    zeta: ZetaTable, // ζ_{3m}^k
    backward: FftPlan,
    forward: FftPlan,
}

impl Fft0Pad {
    pub fn new(backend: Backend, m: usize) -> Result<Self> {
        Self::with_width(backend, m, 1)
    }

    pub fn with_width(backend: Backend, m: usize, width: usize) -> Result<Self> {
        if m < 2 || width == 0 {
            return Err(Error::InvalidArgument(
                "fft0pad: m ≥ 2 (input length 3) and width ≥ 1".into(),
            ));
        }
        let planner = Planner::new(backend);
        Ok(Fft0Pad {
            m,
            width,
            zeta: ZetaTable::new(3 * m, m)?,
            backward: planner.c2c_strided(m, Direction::Backward, width, width, 1)?,
            forward: planner.c2c_strided(m, Direction::Forward, width, width, 1)?,
        })
    }

    pub fn size(&self) -> usize {
        self.m
    }

    fn check(&self, f: &[Complex64], u: &[Complex64]) -> Result<()> {
        let w = self.width;
        require_len(f, (2 * self.m - 1) * w, "fft0pad f")?;
        require_len(u, (self.m + 1) * w, "fft0pad u")?;
        require_disjoint(f, u, "fft0pad f and u must not overlap")
    }

    /// Scrambled 3m-padded centered backward transform.
    pub fn backward(&self, f: &mut [Complex64], u: &mut [Complex64]) -> Result<()> {
        self.check(f, u)?;
        let (m, w) = (self.m, self.width);
        let z3i = zeta3_inv();
        for j in 0..w {
            u[j] = f[(m - 1) * w + j];
        }
        // Descending k lets each iteration read both halves before either is
        // overwritten, so no rolling temporary is needed.
        for k in (1..m).rev() {
            let zk = self.zeta.zeta(k);
            for j in 0..w {
                let pos = f[(m - 1 + k) * w + j]; // U_k
                let neg = f[(k - 1) * w + j]; // U_{k-m}
                let a = zk * (z3i * neg.re + pos.re);
                let b = Complex64::new(0.0, 1.0) * zk * (z3i * neg.im + pos.im);
                f[k * w + j] = pos + neg;
                f[(m - 1 + k) * w + j] = a + b;
                u[k * w + j] = (a - b).conj();
            }
        }
        for j in 0..w {
            f[j] = u[j];
        }
        self.backward.execute(&mut f[..m * w])?;
        for j in 0..w {
            u[m * w + j] = f[(m - 1) * w + j];
            f[(m - 1) * w + j] = u[j];
        }
        self.backward.execute(&mut f[(m - 1) * w..])?;
        self.backward.execute(&mut u[..m * w])
    }

    /// Inverse of [`Fft0Pad::backward`], normalized by 1/(3m).
    pub fn forward(&self, f: &mut [Complex64], u: &mut [Complex64]) -> Result<()> {
        self.check(f, u)?;
        let (m, w) = (self.m, self.width);
        let (z3, z3i) = (zeta3(), zeta3_inv());
        self.forward.execute(&mut f[(m - 1) * w..])?;
        for j in 0..w {
            std::mem::swap(&mut u[m * w + j], &mut f[(m - 1) * w + j]);
        }
        self.forward.execute(&mut f[..m * w])?;
        self.forward.execute(&mut u[..m * w])?;
        for j in 0..w {
            u[m * w + j] = f[j] + u[m * w + j] + u[j];
        }
        for k in 1..m {
            let zk = self.zeta.zeta(k);
            for j in 0..w {
                let fk = f[k * w + j];
                let pos = f[(m - 1 + k) * w + j];
                let neg = u[k * w + j];
                f[(k - 1) * w + j] = fk + z3 * zk.conj() * pos + z3i * zk * neg;
                f[(m - 1 + k) * w + j] = fk + zk.conj() * pos + zk * neg;
            }
        }
        for j in 0..w {
            f[(m - 1) * w + j] = u[m * w + j];
        }
        let scale = 1.0 / (3 * m) as f64;
        for x in f.iter_mut() {
            *x *= scale;
        }
        Ok(())
    }
}

/// Centered Hermitian convolution on the 2/3 rule, m = 2c even.
///
/// The three residue streams are Hermitian, so the term-by-term products run
/// through real transforms of length 2c. The r=1 stream is stored conjugated
/// in reverse order; the (-1)^j it picks up cancels in the products.
pub struct Hconv {
    c: usize,
    zeta: ZetaTable, // ζ_{6c}^k, k < max(c, 1) + 1 via c entries
    crfft: FftPlan,
    crfft_oop: FftPlan,
    rcfft_oop: FftPlan,
}

impl Hconv {
    pub fn new(backend: Backend, m: usize) -> Result<Self> {
        if m == 0 || m % 2 != 0 {
            return Err(Error::InvalidArgument(format!(
                "hconv requires even m = 2c, got {m}"
            )));
        }
        let c = m / 2;
        let planner = Planner::new(backend);
        Ok(Hconv {
            c,
            zeta: ZetaTable::new(6 * c, c.max(1))?,
            crfft: planner.crfft(2 * c)?,
            crfft_oop: planner.crfft_oop(2 * c)?,
            rcfft_oop: planner.rcfft_oop(2 * c)?,
        })
    }

    pub fn size(&self) -> usize {
        2 * self.c
    }

    fn check(&self, f: &[Complex64], u: &[Complex64]) -> Result<()> {
        require_len(f, 2 * self.c, "hconv spectrum")?;
        require_len(u, self.c + 1, "hconv work vector")?;
        require_disjoint(f, u, "hconv spectrum aliases a work vector")
    }

    /// Splits f into the three Hermitian half-streams: w_{k,0} in f[0..c],
    /// w_{k,1} conjugate-reversed in f[c-1..2c-1], w_{k,-1} in u[0..c].
    /// The k=c edge entries are left to the caller (they depend on saved
    /// originals), as is u[c].
    pub fn build(&self, f: &mut [Complex64], u: &mut [Complex64]) -> Result<()> {
        self.check(f, u)?;
        let c = self.c;
        let z3 = zeta3();
        u[0] = f[0];
        for k in (1..c).rev() {
            let rev = f[2 * c - k].conj(); // conj(U_{m-k})
            let zk = self.zeta.zeta_conj(k); // ζ_{6c}^{-k}
            let a = zk * (z3 * rev.re + f[k].re);
            let b = Complex64::new(0.0, -1.0) * zk * (z3 * rev.im + f[k].im);
            f[k] += rev;
            u[k] = a - b;
            f[2 * c - 1 - k] = a + b;
        }
        f[2 * c - 1] = f[0];
        Ok(())
    }

    /// f ← f * g with Hermitian extension U_{-k} = conj(U_k); nine real/
    /// complex transforms of length 2c, seven out of place.
    pub fn convolve(
        &self,
        f: &mut [Complex64],
        g: &mut [Complex64],
        u: &mut [Complex64],
        v: &mut [Complex64],
    ) -> Result<()> {
        self.check(f, u)?;
        self.check(g, v)?;
        self.check(f, v)?;
        self.check(g, u)?;
        require_disjoint(f, g, "hconv f and g must not overlap")?;
        require_disjoint(u, v, "hconv u and v must not overlap")?;
        let c = self.c;
        let sqrt3 = 3f64.sqrt();
        let (z3, z3i) = (zeta3(), zeta3_inv());

        let fc = f[c];
        self.build(f, u)?;
        let cc = f[c];
        f[c] = Complex64::new(2.0 * fc.re, 0.0);
        u[c] = Complex64::new(fc.re + sqrt3 * fc.im, 0.0);
        let gc = g[c];
        self.build(g, v)?;
        let dd = g[c];
        g[c] = Complex64::new(2.0 * gc.re, 0.0);
        v[c] = Complex64::new(gc.re + sqrt3 * gc.im, 0.0);

        // r = -1 product.
        self.crfft.execute(u)?;
        self.crfft.execute(v)?;
        mul_reals(v, u, 2 * c);
        self.rcfft_oop.execute_oop(v, u)?;

        // r = 0 product, result spectrum lands back in f[0..c].
        self.crfft_oop.execute_oop(&f[..c + 1], v)?;
        {
            let (head, _) = f.split_at_mut(c + 1);
            self.crfft_oop.execute_oop(g, head)?;
        }
        mul_reals(v, f, 2 * c);
        self.rcfft_oop.execute_oop(v, f)?;

        let s = f[c - 1];
        let t = f[c];
        f[c - 1] = Complex64::new(fc.re - sqrt3 * fc.im, 0.0);
        f[c] = cc;
        g[c - 1] = Complex64::new(gc.re - sqrt3 * gc.im, 0.0);
        g[c] = dd;

        // r = 1 product (both streams conjugate-reversed; signs cancel).
        self.crfft_oop.execute_oop(&g[c - 1..], v)?;
        {
            let (fs, gs) = (&f[c - 1..], &mut g[c - 1..]);
            self.crfft_oop.execute_oop(fs, gs)?;
        }
        {
            let tail = &mut g[c - 1..];
            mul_reals(tail, v, 2 * c);
        }
        self.rcfft_oop.execute_oop(&g[c - 1..], v)?;

        // Recombine: U_k = F_0(k) + ζ_{6c}^{-k} F_1(k) + ζ_{6c}^{k} F_{-1}(k),
        // with the k > c half recovered from Hermitian symmetry of the
        // product streams.
        if c > 1 {
            f[0] += v[0] + u[0];
        }
        for k in 1..c.saturating_sub(1) {
            let zk = self.zeta.zeta(k);
            let fk = f[k];
            f[k] = fk + zk.conj() * v[k] + zk * u[k];
            f[2 * c - k] =
                fk.conj() + z3i * zk * v[k].conj() + z3 * zk.conj() * u[k].conj();
        }
        let zc1 = self.zeta.zeta(c - 1);
        f[c - 1] = s + zc1.conj() * v[c - 1] + zc1 * u[c - 1];
        f[c] = t - z3 * v[c] - z3i * u[c];
        if c > 1 {
            f[c + 1] = s.conj() + z3i * zc1 * v[c - 1].conj() + z3 * zc1.conj() * u[c - 1].conj();
        }
        let scale = 1.0 / (6 * c) as f64;
        for x in f.iter_mut() {
            *x *= scale;
        }
        Ok(())
    }

    /// f_0 ← Σ_i f_i * g_i. Accumulates the three real product streams in
    /// `acc` (3c complex words holding 6c reals), then transforms each sum
    /// forward once: 6M+3 transforms total.
    pub fn convolve_multi(
        &self,
        fs: &mut [&mut [Complex64]],
        gs: &mut [&mut [Complex64]],
        u: &mut [Complex64],
        v: &mut [Complex64],
        acc: &mut [Complex64],
    ) -> Result<()> {
        let c = self.c;
        if fs.len() != gs.len() || fs.is_empty() {
            return Err(Error::InvalidArgument(
                "hconv: need equal, nonzero numbers of f and g inputs".into(),
            ));
        }
        require_len(acc, 3 * c, "hconv stream accumulator")?;
        require_len(u, c + 1, "hconv work vector")?;
        require_len(v, c + 1, "hconv work vector")?;
        require_disjoint(u, v, "hconv u and v must not overlap")?;
        require_disjoint(acc, u, "hconv accumulator aliases work")?;
        require_disjoint(acc, v, "hconv accumulator aliases work")?;
        let sqrt3 = 3f64.sqrt();
        let (z3, z3i) = (zeta3(), zeta3_inv());

        for x in acc.iter_mut() {
            *x = Complex64::new(0.0, 0.0);
        }
        for (fi, gi) in fs.iter_mut().zip(gs.iter_mut()) {
            self.check(fi, u)?;
            self.check(gi, v)?;
            let fc = fi[c];
            self.build(fi, u)?;
            let cc = fi[c];
            u[c] = Complex64::new(fc.re + sqrt3 * fc.im, 0.0);
            let gc = gi[c];
            self.build(gi, v)?;
            let dd = gi[c];
            v[c] = Complex64::new(gc.re + sqrt3 * gc.im, 0.0);

            self.crfft.execute(u)?;
            self.crfft.execute(v)?;
            accumulate_product(&mut acc[2 * c..], u, v, 2 * c);

            fi[c] = Complex64::new(2.0 * fc.re, 0.0);
            gi[c] = Complex64::new(2.0 * gc.re, 0.0);
            self.crfft_oop.execute_oop(&fi[..c + 1], u)?;
            self.crfft_oop.execute_oop(&gi[..c + 1], v)?;
            accumulate_product(&mut acc[..c], u, v, 2 * c);

            fi[c - 1] = Complex64::new(fc.re - sqrt3 * fc.im, 0.0);
            fi[c] = cc;
            gi[c - 1] = Complex64::new(gc.re - sqrt3 * gc.im, 0.0);
            gi[c] = dd;
            self.crfft_oop.execute_oop(&fi[c - 1..], u)?;
            self.crfft_oop.execute_oop(&gi[c - 1..], v)?;
            accumulate_product(&mut acc[c..2 * c], u, v, 2 * c);
        }

        self.rcfft_oop.execute_oop(&acc[c..2 * c], v)?; // F_1
        self.rcfft_oop.execute_oop(&acc[2 * c..], u)?; // F_{-1}
        let f0 = &mut *fs[0];
        {
            let (head, _) = f0.split_at_mut(c + 1);
            self.rcfft_oop.execute_oop(&acc[..c], head)?; // F_0
        }
        let dc = f0[0] + v[0] + u[0];
        for k in (1..c).rev() {
            let zk = self.zeta.zeta(k);
            let fk = f0[k];
            f0[k] = fk + zk.conj() * v[k] + zk * u[k];
            f0[2 * c - k] =
                fk.conj() + z3i * zk * v[k].conj() + z3 * zk.conj() * u[k].conj();
        }
        f0[0] = dc;
        f0[c] = f0[c] - z3 * v[c] - z3i * u[c];
        let scale = 1.0 / (6 * c) as f64;
        for x in f0.iter_mut() {
            *x *= scale;
        }
        Ok(())
    }
}

/// dst_reals[j] += a_reals[j] * b_reals[j] over n packed reals.
fn accumulate_product(dst: &mut [Complex64], a: &[Complex64], b: &[Complex64], n: usize) {
    let d = crate::fft::as_reals_mut(dst);
    let ar = crate::fft::as_reals(a);
    let br = crate::fft::as_reals(b);
    for j in 0..n {
        d[j] += ar[j] * br[j];
    }
}

/// dst_reals[j] *= src_reals[j] over n packed reals.
fn mul_reals(dst: &mut [Complex64], src: &[Complex64], n: usize) {
    let d = crate::fft::as_reals_mut(dst);
    let s = crate::fft::as_reals(src);
    for j in 0..n {
        d[j] *= s[j];
    }
}

/// Implicitly 4m-padded signed centered transform pair for ternary
/// convolutions. Data is 2m long with the origin at index m and data[0]
/// forced to zero; both stored streams carry an implicit (-1)^ℓ.
pub struct Fft0tPad {
    m: usize,
    width: usize,
    zeta: ZetaTable, // ζ_{4m}^k, k < 2m
    backward: FftPlan,
    forward: FftPlan,
}

impl Fft0tPad {
    pub fn new(backend: Backend, m: usize) -> Result<Self> {
        Self::with_width(backend, m, 1)
    }

    pub fn with_width(backend: Backend, m: usize, width: usize) -> Result<Self> {
        if m == 0 || width == 0 {
            return Err(Error::InvalidArgument("fft0tpad: m, width ≥ 1".into()));
        }
        let planner = Planner::new(backend);
        Ok(Fft0tPad {
            m,
            width,
            zeta: ZetaTable::new(4 * m, 2 * m)?,
            backward: planner.c2c_strided(2 * m, Direction::Backward, width, width, 1)?,
            forward: planner.c2c_strided(2 * m, Direction::Forward, width, width, 1)?,
        })
    }

    pub fn size(&self) -> usize {
        self.m
    }

    fn check(&self, f: &[Complex64], u: &[Complex64]) -> Result<()> {
        let n = 2 * self.m * self.width;
        require_len(f, n, "fft0tpad f")?;
        require_len(u, n, "fft0tpad u")?;
        require_disjoint(f, u, "fft0tpad f and u must not overlap")
    }

    pub fn backward(&self, f: &mut [Complex64], u: &mut [Complex64]) -> Result<()> {
        self.check(f, u)?;
        let (m, w) = (self.m, self.width);
        let minus_i = Complex64::new(0.0, -1.0);
        for j in 0..w {
            f[j] = Complex64::new(0.0, 0.0);
            u[j] = Complex64::new(0.0, 0.0);
        }
        for k in 1..2 * m {
            let zk = minus_i * self.zeta.zeta(k);
            for j in 0..w {
                u[k * w + j] = zk * f[k * w + j];
            }
        }
        self.backward.execute(f)?;
        self.backward.execute(u)
    }

    /// Inverse, normalized by 1/(4m); the k = -m slot is zeroed again.
    pub fn forward(&self, f: &mut [Complex64], u: &mut [Complex64]) -> Result<()> {
        self.check(f, u)?;
        let (m, w) = (self.m, self.width);
        self.forward.execute(f)?;
        self.forward.execute(u)?;
        let scale = 1.0 / (4 * m) as f64;
        let i = Complex64::new(0.0, 1.0);
        for k in 1..2 * m {
            let zk = i * self.zeta.zeta_conj(k);
            for j in 0..w {
                f[k * w + j] = (f[k * w + j] + zk * u[k * w + j]) * scale;
            }
        }
        for j in 0..w {
            f[j] = Complex64::new(0.0, 0.0);
        }
        Ok(())
    }
}

/// Centered Hermitian ternary convolution (the 1/2 rule applied three ways):
/// f ← f * g * h over modes |k| ≤ m-1, stored as m+1 entries with U_m
/// zeroed. Eight real/complex transforms of length 2m, five out of place.
pub struct Tconv {
    m: usize,
    zeta: ZetaTable, // ζ_{4m}^k, k < m
    crfft: FftPlan,
    crfft_oop: FftPlan,
    rcfft_oop: FftPlan,
}

impl Tconv {
    pub fn new(backend: Backend, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidArgument("tconv: m ≥ 1".into()));
        }
        let planner = Planner::new(backend);
        Ok(Tconv {
            m,
            zeta: ZetaTable::new(4 * m, m)?,
            crfft: planner.crfft(2 * m)?,
            crfft_oop: planner.crfft_oop(2 * m)?,
            rcfft_oop: planner.rcfft_oop(2 * m)?,
        })
    }

    pub fn size(&self) -> usize {
        self.m
    }

    #[allow(clippy::too_many_arguments)]
    pub fn convolve(
        &self,
        f: &mut [Complex64],
        g: &mut [Complex64],
        h: &mut [Complex64],
        u: &mut [Complex64],
        v: &mut [Complex64],
        w: &mut [Complex64],
    ) -> Result<()> {
        let m = self.m;
        for (buf, what) in [
            (&*f, "tconv f"),
            (&*g, "tconv g"),
            (&*h, "tconv h"),
            (&*u, "tconv u"),
            (&*v, "tconv v"),
            (&*w, "tconv w"),
        ] {
            require_len(buf, m + 1, what)?;
        }
        let bufs: [&[Complex64]; 6] = [f, g, h, u, v, w];
        for i in 0..6 {
            for j in i + 1..6 {
                require_disjoint(bufs[i], bufs[j], "tconv buffers must be pairwise disjoint")?;
            }
        }

        for k in 0..m {
            let zk = self.zeta.zeta(k);
            u[k] = zk * f[k];
            v[k] = zk * g[k];
            w[k] = zk * h[k];
        }
        let zero = Complex64::new(0.0, 0.0);
        u[m] = zero;
        v[m] = zero;
        w[m] = zero;
        self.crfft.execute(u)?;
        self.crfft.execute(v)?;
        self.crfft.execute(w)?;
        mul_reals(v, u, 2 * m);
        mul_reals(v, w, 2 * m);
        self.rcfft_oop.execute_oop(v, u)?;

        f[m] = zero;
        g[m] = zero;
        h[m] = zero;
        self.crfft_oop.execute_oop(f, v)?;
        self.crfft_oop.execute_oop(g, w)?;
        {
            let (head, _) = f.split_at_mut(m);
            self.crfft_oop.execute_oop(h, head)?;
        }
        mul_reals(v, w, 2 * m);
        mul_reals(v, f, 2 * m);
        self.rcfft_oop.execute_oop(v, f)?;

        let scale = 1.0 / (4 * m) as f64;
        for k in 0..m {
            f[k] = (f[k] + self.zeta.zeta_conj(k) * u[k]) * scale;
        }
        f[m] = zero;
        Ok(())
    }
}

/// General p/q implicit padding: a length-pm spectrum zero-padded to qm,
/// computed as q deinterleaved streams of length m. (p,q) must be coprime
/// with p < q; (1,2) reproduces [`FftPad`]'s streams.
pub struct PqTransform {
    p: usize,
    q: usize,
    m: usize,
    zeta: ZetaTable, // ζ_{qm}^k for all k
    backward: FftPlan,
    forward: FftPlan,
}

fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl PqTransform {
    pub fn new(backend: Backend, p: usize, q: usize, m: usize) -> Result<Self> {
        if p == 0 || q == 0 || m == 0 || p >= q {
            return Err(Error::InvalidArgument(format!(
                "pq transform needs 0 < p < q and m ≥ 1, got p={p}, q={q}, m={m}"
            )));
        }
        if gcd(p, q) != 1 {
            return Err(Error::InvalidArgument(format!(
                "pq transform needs coprime (p, q), got ({p}, {q})"
            )));
        }
        let planner = Planner::new(backend);
        Ok(PqTransform {
            p,
            q,
            m,
            zeta: ZetaTable::new(q * m, q * m)?,
            backward: planner.c2c(m, Direction::Backward)?,
            forward: planner.c2c(m, Direction::Forward)?,
        })
    }

    pub fn input_len(&self) -> usize {
        self.p * self.m
    }

    pub fn streams_len(&self) -> usize {
        self.q * self.m
    }

    /// streams[r·m + ℓ] = u_{qℓ+r} of the qm-padded backward transform.
    pub fn backward(&self, input: &[Complex64], streams: &mut [Complex64]) -> Result<()> {
        require_len(input, self.p * self.m, "pq input")?;
        require_len(streams, self.q * self.m, "pq streams")?;
        let (p, q, m) = (self.p, self.q, self.m);
        for r in 0..q {
            for s in 0..m {
                let mut acc = Complex64::new(0.0, 0.0);
                for t in 0..p {
                    let e = (r * (t * m + s)) % (q * m);
                    acc += self.zeta.zeta(e) * input[t * m + s];
                }
                streams[r * m + s] = acc;
            }
            self.backward.execute(&mut streams[r * m..(r + 1) * m])?;
        }
        Ok(())
    }

    /// Inverse of [`PqTransform::backward`], normalized by 1/(qm).
    pub fn forward(&self, streams: &mut [Complex64], out: &mut [Complex64]) -> Result<()> {
        require_len(streams, self.q * self.m, "pq streams")?;
        require_len(out, self.p * self.m, "pq output")?;
        let (p, q, m) = (self.p, self.q, self.m);
        for r in 0..q {
            self.forward.execute(&mut streams[r * m..(r + 1) * m])?;
        }
        let scale = 1.0 / (q * m) as f64;
        for t in 0..p {
            for s in 0..m {
                let mut acc = Complex64::new(0.0, 0.0);
                for r in 0..q {
                    let e = (r * (t * m + s)) % (q * m);
                    acc += self.zeta.zeta_conj(e) * streams[r * m + s];
                }
                out[t * m + s] = acc * scale;
            }
        }
        Ok(())
    }
}
