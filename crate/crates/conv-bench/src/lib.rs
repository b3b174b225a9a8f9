//! Benchmark and validation harness for the dealiased convolution library.
//! Every benchmark run is re-validated against an independent reference
//! (the direct convolution sum when it fits under the work cap, otherwise
//! the other FFT pipeline) before any timing is reported.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use anyhow::{bail, Result};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dealias::nd::{memory_report, Field2D, Field3D, FieldKind, NdKind};
use dealias::{oracles, Backend, Cconv, Cconv2, Cconv3, Conv2, Hconv, Hconv3, Tconv, Tconv2};

/// Header of the benchmark output table.
pub const HEADER: &str = "kind,method,mx,my,mz,samples,mean_s,sigma_lo_s,sigma_hi_s,error,complex_words";

/// Minimum accumulated time per sample before a mean is trusted.
const MIN_SAMPLE: Duration = Duration::from_millis(10);

/// Relative error beyond which a benchmark run is considered invalid.
pub const VALIDATION_TOLERANCE: f64 = 1e-8;

// ---------------------------------------------------------------------------
// Statistics.
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug)]
pub struct Stats {
    pub mean: f64,
    pub sigma_lo: f64,
    pub sigma_hi: f64,
}

/// Mean with one-sided deviations: σ_lo over samples below the mean and
/// σ_hi over samples above it, each normalized by n/2 - 1. Requires n ≥ 4.
pub fn one_sided_stats(samples: &[f64]) -> Result<Stats> {
    let n = samples.len();
    if n < 4 {
        bail!("one-sided statistics need at least 4 samples, got {n}");
    }
    let mean = samples.iter().sum::<f64>() / n as f64;
    let norm = n as f64 / 2.0 - 1.0;
    let mut lo = 0.0;
    let mut hi = 0.0;
    for &t in samples {
        let d = t - mean;
        if t < mean {
            lo += d * d;
        } else if t > mean {
            hi += d * d;
        }
    }
    Ok(Stats {
        mean,
        sigma_lo: (lo / norm).sqrt(),
        sigma_hi: (hi / norm).sqrt(),
    })
}

/// ‖got - want‖₂ / ‖want‖₂.
pub fn normalized_error(got: &[Complex64], want: &[Complex64]) -> f64 {
    let num: f64 = got
        .iter()
        .zip(want)
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt();
    let den: f64 = want.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    num / den.max(f64::MIN_POSITIVE)
}

// ---------------------------------------------------------------------------
// Problem kinds and methods.
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BenchKind {
    Cconv,
    Hconv,
    Tconv,
    Cconv2,
    Conv2,
    Tconv2,
    Cconv3,
    Hconv3,
}

impl BenchKind {
    pub const ALL: [BenchKind; 8] = [
        BenchKind::Cconv,
        BenchKind::Hconv,
        BenchKind::Tconv,
        BenchKind::Cconv2,
        BenchKind::Conv2,
        BenchKind::Tconv2,
        BenchKind::Cconv3,
        BenchKind::Hconv3,
    ];

    pub fn is_3d(self) -> bool {
        matches!(self, BenchKind::Cconv3 | BenchKind::Hconv3)
    }

    pub fn is_1d(self) -> bool {
        matches!(self, BenchKind::Cconv | BenchKind::Hconv | BenchKind::Tconv)
    }
}

impl fmt::Display for BenchKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            BenchKind::Cconv => "cconv",
            BenchKind::Hconv => "hconv",
            BenchKind::Tconv => "tconv",
            BenchKind::Cconv2 => "cconv2",
            BenchKind::Conv2 => "conv2",
            BenchKind::Tconv2 => "tconv2",
            BenchKind::Cconv3 => "cconv3",
            BenchKind::Hconv3 => "hconv3",
        };
        f.write_str(s)
    }
}

impl FromStr for BenchKind {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "cconv" => BenchKind::Cconv,
            "hconv" => BenchKind::Hconv,
            "tconv" => BenchKind::Tconv,
            "cconv2" => BenchKind::Cconv2,
            "conv2" => BenchKind::Conv2,
            "tconv2" => BenchKind::Tconv2,
            "cconv3" => BenchKind::Cconv3,
            "hconv3" => BenchKind::Hconv3,
            other => bail!("unknown convolution kind '{other}'"),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Implicit,
    Explicit,
    Pruned,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Implicit => "implicit",
            Method::Explicit => "explicit",
            Method::Pruned => "pruned",
        })
    }
}

impl FromStr for Method {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "implicit" => Method::Implicit,
            "explicit" => Method::Explicit,
            "pruned" => Method::Pruned,
            other => bail!("unknown method '{other}'"),
        })
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Dims {
    pub mx: usize,
    pub my: usize,
    pub mz: usize,
}

/// One output row of the benchmark table.
#[derive(Clone, Debug)]
pub struct BenchRow {
    pub kind: BenchKind,
    pub method: Method,
    pub dims: Dims,
    pub samples: usize,
    pub mean_s: f64,
    pub sigma_lo_s: f64,
    pub sigma_hi_s: f64,
    /// Normalized error against the validation reference.
    pub error: f64,
    /// Total complex-word storage of the method at these sizes.
    pub complex_words: u64,
}

impl BenchRow {
    pub fn to_line(&self, sep: char) -> String {
        let d = self.dims;
        format!(
            "{kind}{sep}{method}{sep}{mx}{sep}{my}{sep}{mz}{sep}{n}{sep}{mean:.6e}{sep}{lo:.3e}{sep}{hi:.3e}{sep}{err:.3e}{sep}{words}",
            kind = self.kind,
            method = self.method,
            mx = d.mx,
            my = d.my,
            mz = d.mz,
            n = self.samples,
            mean = self.mean_s,
            lo = self.sigma_lo_s,
            hi = self.sigma_hi_s,
            err = self.error,
            words = self.complex_words,
        )
    }
}

// ---------------------------------------------------------------------------
// Input generation.
// ---------------------------------------------------------------------------

fn rand_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

fn rand_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
    (0..n).map(|_| rand_complex(rng)).collect()
}

fn rand_field2(rng: &mut ChaCha8Rng, kind: FieldKind, mx: usize, my: usize) -> Field2D {
    let mut f = Field2D::zeros(kind, mx, my);
    for x in f.data.iter_mut() {
        *x = rand_complex(rng);
    }
    f.enforce_symmetry();
    f
}

fn rand_field3(rng: &mut ChaCha8Rng, kind: FieldKind, mx: usize, my: usize, mz: usize) -> Field3D {
    let mut f = Field3D::zeros(kind, mx, my, mz);
    for x in f.data.iter_mut() {
        *x = rand_complex(rng);
    }
    f.enforce_symmetry();
    f
}

// ---------------------------------------------------------------------------
// Benchmark cases.
// ---------------------------------------------------------------------------

/// One fully planned problem instance: pristine seeded inputs plus the
/// implicit convolver and its working buffers.
pub struct Case {
    kind: BenchKind,
    dims: Dims,
    backend: Backend,
    inputs: Vec<Vec<Complex64>>,
    work: Vec<Vec<Complex64>>,
    op: Op,
}

enum Op {
    C1(Cconv, Vec<Complex64>, Vec<Complex64>),
    H1(Hconv, Vec<Complex64>, Vec<Complex64>),
    T1(Tconv, Vec<Complex64>, Vec<Complex64>, Vec<Complex64>),
    C2(Cconv2),
    H2(Conv2),
    T2(Tconv2),
    C3(Cconv3),
    H3(Hconv3),
}

impl Case {
    pub fn new(kind: BenchKind, dims: Dims, seed: u64, backend: Backend) -> Result<Case> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let Dims { mx, my, mz } = dims;
        let z = |n: usize| vec![Complex64::new(0.0, 0.0); n];
        let (inputs, op) = match kind {
            BenchKind::Cconv => {
                let m = mx;
                (
                    vec![rand_vec(&mut rng, m), rand_vec(&mut rng, m)],
                    Op::C1(Cconv::new(backend, m)?, z(m), z(m)),
                )
            }
            BenchKind::Hconv => {
                let m = mx;
                let mut f = rand_vec(&mut rng, m);
                let mut g = rand_vec(&mut rng, m);
                f[0].im = 0.0;
                g[0].im = 0.0;
                (
                    vec![f, g],
                    Op::H1(Hconv::new(backend, m)?, z(m / 2 + 1), z(m / 2 + 1)),
                )
            }
            BenchKind::Tconv => {
                let m = mx;
                let mut bufs = Vec::new();
                for _ in 0..3 {
                    let mut x = rand_vec(&mut rng, m + 1);
                    x[0].im = 0.0;
                    x[m] = Complex64::new(0.0, 0.0);
                    bufs.push(x);
                }
                (
                    bufs,
                    Op::T1(Tconv::new(backend, m)?, z(m + 1), z(m + 1), z(m + 1)),
                )
            }
            BenchKind::Cconv2 => (
                vec![
                    rand_field2(&mut rng, FieldKind::Standard, mx, my).data,
                    rand_field2(&mut rng, FieldKind::Standard, mx, my).data,
                ],
                Op::C2(Cconv2::new(backend, mx, my)?),
            ),
            BenchKind::Conv2 => (
                vec![
                    rand_field2(&mut rng, FieldKind::CenteredHermitian, mx, my).data,
                    rand_field2(&mut rng, FieldKind::CenteredHermitian, mx, my).data,
                ],
                Op::H2(Conv2::new(backend, mx, my)?),
            ),
            BenchKind::Tconv2 => (
                vec![
                    rand_field2(&mut rng, FieldKind::SignedCentered, mx, my).data,
                    rand_field2(&mut rng, FieldKind::SignedCentered, mx, my).data,
                    rand_field2(&mut rng, FieldKind::SignedCentered, mx, my).data,
                ],
                Op::T2(Tconv2::new(backend, mx, my)?),
            ),
            BenchKind::Cconv3 => (
                vec![
                    rand_field3(&mut rng, FieldKind::Standard, mx, my, mz).data,
                    rand_field3(&mut rng, FieldKind::Standard, mx, my, mz).data,
                ],
                Op::C3(Cconv3::new(backend, mx, my, mz)?),
            ),
            BenchKind::Hconv3 => (
                vec![
                    rand_field3(&mut rng, FieldKind::CenteredHermitian, mx, my, mz).data,
                    rand_field3(&mut rng, FieldKind::CenteredHermitian, mx, my, mz).data,
                ],
                Op::H3(Hconv3::new(backend, mx, my, mz)?),
            ),
        };
        let work = inputs.clone();
        Ok(Case {
            kind,
            dims,
            backend,
            inputs,
            work,
            op,
        })
    }

    pub fn kind(&self) -> BenchKind {
        self.kind
    }

    fn prepare(&mut self) {
        for (w, i) in self.work.iter_mut().zip(&self.inputs) {
            w.copy_from_slice(i);
        }
    }

    fn execute_implicit(&mut self) -> Result<()> {
        let Dims { mx, my, mz } = self.dims;
        match &mut self.op {
            Op::C1(conv, u, v) => {
                let (f, g) = split2(&mut self.work);
                conv.convolve(f, g, u, v)?;
            }
            Op::H1(conv, u, v) => {
                let (f, g) = split2(&mut self.work);
                conv.convolve(f, g, u, v)?;
            }
            Op::T1(conv, u, v, w) => {
                let (f, rest) = self.work.split_at_mut(1);
                let (g, h) = rest.split_at_mut(1);
                conv.convolve(&mut f[0], &mut g[0], &mut h[0], u, v, w)?;
            }
            Op::C2(conv) => {
                let (f, g) = split2(&mut self.work);
                conv.convolve_slices(f, g)?;
            }
            Op::H2(conv) => {
                let (f, g) = split2(&mut self.work);
                conv.convolve_slices(f, g)?;
            }
            Op::T2(conv) => {
                // Move the buffers into field wrappers without copying.
                let (f, rest) = self.work.split_at_mut(1);
                let (g, h) = rest.split_at_mut(1);
                let kind = FieldKind::SignedCentered;
                let mut ff = take_field2(kind, mx, my, &mut f[0]);
                let mut gf = take_field2(kind, mx, my, &mut g[0]);
                let mut hf = take_field2(kind, mx, my, &mut h[0]);
                let result = conv.convolve(&mut ff, &mut gf, &mut hf);
                f[0] = ff.data;
                g[0] = gf.data;
                h[0] = hf.data;
                result?;
            }
            Op::C3(conv) => {
                let (f, g) = split2(&mut self.work);
                let kind = FieldKind::Standard;
                let mut ff = take_field3(kind, mx, my, mz, f);
                let mut gf = take_field3(kind, mx, my, mz, g);
                let result = conv.convolve(&mut ff, &mut gf);
                *f = ff.data;
                *g = gf.data;
                result?;
            }
            Op::H3(conv) => {
                let (f, g) = split2(&mut self.work);
                let kind = FieldKind::CenteredHermitian;
                let mut ff = take_field3(kind, mx, my, mz, f);
                let mut gf = take_field3(kind, mx, my, mz, g);
                let result = conv.convolve(&mut ff, &mut gf);
                *f = ff.data;
                *g = gf.data;
                result?;
            }
        }
        Ok(())
    }

    fn run_reference(&self, method: Method) -> Result<Vec<Complex64>> {
        let Dims { mx, my, mz } = self.dims;
        let be = self.backend;
        let i = &self.inputs;
        Ok(match (self.kind, method) {
            (BenchKind::Cconv, Method::Explicit) => oracles::explicit_cconv(&i[0], &i[1], be),
            (BenchKind::Hconv, Method::Explicit) => oracles::explicit_hconv(&i[0], &i[1], be),
            (BenchKind::Tconv, Method::Explicit) => {
                oracles::explicit_tconv(&i[0], &i[1], &i[2], be)
            }
            (BenchKind::Cconv2, Method::Explicit) => {
                oracles::explicit_cconv2(&i[0], &i[1], mx, my, be)
            }
            (BenchKind::Cconv2, Method::Pruned) => oracles::pruned_cconv2(&i[0], &i[1], mx, my, be),
            (BenchKind::Conv2, Method::Explicit) => {
                oracles::explicit_conv2(&i[0], &i[1], mx, my, be)
            }
            (BenchKind::Tconv2, Method::Explicit) => {
                oracles::explicit_tconv2(&i[0], &i[1], &i[2], mx, my, be)
            }
            (BenchKind::Cconv3, Method::Explicit) => {
                oracles::explicit_cconv3(&i[0], &i[1], mx, my, mz, be)
            }
            (BenchKind::Cconv3, Method::Pruned) => {
                oracles::pruned_cconv3(&i[0], &i[1], mx, my, mz, be)
            }
            (BenchKind::Hconv3, Method::Explicit) => {
                oracles::explicit_hconv3(&i[0], &i[1], mx, my, mz, be)
            }
            (kind, Method::Pruned) => bail!("no pruned pipeline for kind '{kind}'"),
            (_, Method::Implicit) => unreachable!("implicit handled separately"),
        })
    }

    /// Direct-sum reference, subject to the work cap.
    pub fn direct(&self, cap: Option<u64>) -> dealias::Result<Vec<Complex64>> {
        let Dims { mx, my, mz } = self.dims;
        let i = &self.inputs;
        match self.kind {
            BenchKind::Cconv => oracles::direct_cconv(&i[0], &i[1], cap),
            BenchKind::Hconv => oracles::direct_hconv(&i[0], &i[1], cap),
            BenchKind::Tconv => oracles::direct_tconv(&i[0], &i[1], &i[2], cap),
            BenchKind::Cconv2 => oracles::direct_cconv2(&i[0], &i[1], mx, my, cap),
            BenchKind::Conv2 => oracles::direct_conv2(&i[0], &i[1], mx, my, cap),
            BenchKind::Tconv2 => oracles::direct_tconv2(&i[0], &i[1], &i[2], mx, my, cap),
            BenchKind::Cconv3 => oracles::direct_cconv3(&i[0], &i[1], mx, my, mz, cap),
            BenchKind::Hconv3 => oracles::direct_hconv3(&i[0], &i[1], mx, my, mz, cap),
        }
    }

    /// Run `method` once, untimed, returning the dealiased result.
    pub fn run(&mut self, method: Method) -> Result<Vec<Complex64>> {
        match method {
            Method::Implicit => {
                self.prepare();
                self.execute_implicit()?;
                Ok(self.work[0].clone())
            }
            _ => self.run_reference(method),
        }
    }

    /// Run `method` once and return the compute time, excluding input
    /// restoration (plans are already built by the warm-up run).
    fn timed_run(&mut self, method: Method) -> Result<Duration> {
        match method {
            Method::Implicit => {
                self.prepare();
                let t = Instant::now();
                self.execute_implicit()?;
                Ok(t.elapsed())
            }
            _ => {
                let t = Instant::now();
                self.run_reference(method)?;
                Ok(t.elapsed())
            }
        }
    }

    /// Total complex-word storage (inputs plus workspace) for a method.
    pub fn complex_words(&self, method: Method) -> u64 {
        let Dims { mx, my, mz } = self.dims;
        let (mx64, my64, mz64) = (mx as u64, my as u64, mz as u64);
        let m = mx64;
        match (self.kind, method) {
            (BenchKind::Cconv, Method::Implicit) => 4 * m,
            (BenchKind::Cconv, _) => 4 * m,
            (BenchKind::Hconv, Method::Implicit) => 3 * m + 2,
            (BenchKind::Hconv, _) => 6 * m,
            (BenchKind::Tconv, Method::Implicit) => 6 * (m + 1),
            (BenchKind::Tconv, _) => 12 * m,
            (kind, method) => {
                let nd = match kind {
                    BenchKind::Cconv2 => NdKind::Cconv2,
                    BenchKind::Conv2 => NdKind::Conv2,
                    BenchKind::Tconv2 => NdKind::Tconv2,
                    BenchKind::Cconv3 => NdKind::Cconv3,
                    BenchKind::Hconv3 => NdKind::Hconv3,
                    _ => unreachable!(),
                };
                let report = memory_report(nd, mx64, my64, mz64);
                if method == Method::Implicit {
                    report.implicit
                } else {
                    report.explicit
                }
            }
        }
    }
}

fn split2(bufs: &mut [Vec<Complex64>]) -> (&mut Vec<Complex64>, &mut Vec<Complex64>) {
    let (a, b) = bufs.split_at_mut(1);
    (&mut a[0], &mut b[0])
}

fn take_field2(kind: FieldKind, mx: usize, my: usize, data: &mut Vec<Complex64>) -> Field2D {
    Field2D {
        data: std::mem::take(data),
        mx,
        my,
        kind,
    }
}

fn take_field3(
    kind: FieldKind,
    mx: usize,
    my: usize,
    mz: usize,
    data: &mut Vec<Complex64>,
) -> Field3D {
    Field3D {
        data: std::mem::take(data),
        mx,
        my,
        mz,
        kind,
    }
}

// ---------------------------------------------------------------------------
// Bench driver.
// ---------------------------------------------------------------------------

/// Time one (kind, method) combination. The warm-up run both builds all FFT
/// plans and validates the result against an independent reference; a
/// validation failure is an error (the CLI maps it to exit code 2).
pub fn run_bench(
    kind: BenchKind,
    method: Method,
    dims: Dims,
    samples: usize,
    seed: u64,
    backend: Backend,
    oracle_cap: Option<u64>,
) -> Result<BenchRow> {
    let mut case = Case::new(kind, dims, seed, backend)?;
    let got = case.run(method)?;

    // Validation reference: the direct sum when affordable, otherwise the
    // independent FFT pipeline on the other side of the comparison.
    let reference = match case.direct(oracle_cap) {
        Ok(r) => r,
        Err(dealias::Error::OracleCapExceeded(_)) => match method {
            Method::Implicit => case.run_reference(Method::Explicit)?,
            _ => {
                let mut c = Case::new(kind, dims, seed, backend)?;
                c.run(Method::Implicit)?
            }
        },
        Err(e) => return Err(e.into()),
    };
    let error = normalized_error(&got, &reference);
    if !error.is_finite() || error > VALIDATION_TOLERANCE {
        bail!(
            "validation failed for {kind}/{method} at {}×{}×{}: normalized error {error:.3e}",
            dims.mx,
            dims.my,
            dims.mz
        );
    }

    let mut times = Vec::with_capacity(samples);
    for _ in 0..samples {
        let mut total = Duration::ZERO;
        let mut reps = 0u32;
        while total < MIN_SAMPLE {
            total += case.timed_run(method)?;
            reps += 1;
        }
        times.push(total.as_secs_f64() / reps as f64);
    }
    let stats = one_sided_stats(&times)?;
    Ok(BenchRow {
        kind,
        method,
        dims,
        samples,
        mean_s: stats.mean,
        sigma_lo_s: stats.sigma_lo,
        sigma_hi_s: stats.sigma_hi,
        error,
        complex_words: case.complex_words(method),
    })
}

// ---------------------------------------------------------------------------
// Accuracy sweep.
// ---------------------------------------------------------------------------

/// One accuracy row: implicit and explicit errors at size m against the
/// sharpest available reference (closed-form products for the binary 1D
/// kinds, the direct sum otherwise).
#[derive(Clone, Copy, Debug)]
pub struct AccuracyRow {
    pub m: usize,
    pub error_implicit: f64,
    pub error_explicit: f64,
}

pub fn accuracy_sweep(
    kind: BenchKind,
    sizes: &[usize],
    seed: u64,
    backend: Backend,
) -> Result<Vec<AccuracyRow>> {
    let mut rows = Vec::new();
    for &m in sizes {
        let dims = if kind.is_1d() {
            Dims { mx: m, my: 1, mz: 1 }
        } else if kind.is_3d() {
            Dims { mx: m, my: m, mz: m }
        } else {
            Dims { mx: m, my: m, mz: 1 }
        };
        let (implicit, explicit, reference) = match kind {
            BenchKind::Cconv => exact_binary_case(kind, m, backend)?,
            BenchKind::Hconv => exact_binary_case(kind, m, backend)?,
            _ => {
                let mut case = Case::new(kind, dims, seed, backend)?;
                let implicit = case.run(Method::Implicit)?;
                let explicit = case.run(Method::Explicit)?;
                let reference = match case.direct(None) {
                    Ok(r) => r,
                    Err(dealias::Error::OracleCapExceeded(_)) => explicit.clone(),
                    Err(e) => return Err(e.into()),
                };
                (implicit, explicit, reference)
            }
        };
        rows.push(AccuracyRow {
            m,
            error_implicit: normalized_error(&implicit, &reference),
            error_explicit: normalized_error(&explicit, &reference),
        });
    }
    Ok(rows)
}

/// Closed-form test families for the binary 1D kinds: inputs F·e^{ik} and
/// G·e^{ik} convolve to FG(k+1)e^{ik} (complex) or FG(2m-1-k)e^{ik}
/// (centered Hermitian), exactly.
fn exact_binary_case(
    kind: BenchKind,
    m: usize,
    backend: Backend,
) -> Result<(Vec<Complex64>, Vec<Complex64>, Vec<Complex64>)> {
    let mode = |k: usize| Complex64::from_polar(1.0, k as f64);
    match kind {
        BenchKind::Cconv => {
            let fc = Complex64::new(3f64.sqrt(), 7f64.sqrt());
            let gc = Complex64::new(5f64.sqrt(), 11f64.sqrt());
            let f: Vec<_> = (0..m).map(|k| fc * mode(k)).collect();
            let g: Vec<_> = (0..m).map(|k| gc * mode(k)).collect();
            let exact: Vec<_> = (0..m).map(|k| fc * gc * (k + 1) as f64 * mode(k)).collect();
            let mut fi = f.clone();
            let mut gi = g.clone();
            let conv = Cconv::new(backend, m)?;
            let mut u = vec![Complex64::new(0.0, 0.0); m];
            let mut v = u.clone();
            conv.convolve(&mut fi, &mut gi, &mut u, &mut v)?;
            let explicit = oracles::explicit_cconv(&f, &g, backend);
            Ok((fi, explicit, exact))
        }
        BenchKind::Hconv => {
            let (fc, gc) = (3f64.sqrt(), 5f64.sqrt());
            let f: Vec<_> = (0..m).map(|k| fc * mode(k)).collect();
            let g: Vec<_> = (0..m).map(|k| gc * mode(k)).collect();
            let exact: Vec<_> = (0..m)
                .map(|k| fc * gc * (2 * m - 1 - k) as f64 * mode(k))
                .collect();
            let mut fi = f.clone();
            let mut gi = g.clone();
            let conv = Hconv::new(backend, m)?;
            let mut u = vec![Complex64::new(0.0, 0.0); m / 2 + 1];
            let mut v = u.clone();
            conv.convolve(&mut fi, &mut gi, &mut u, &mut v)?;
            let explicit = oracles::explicit_hconv(&f, &g, backend);
            Ok((fi, explicit, exact))
        }
        _ => unreachable!(),
    }
}
