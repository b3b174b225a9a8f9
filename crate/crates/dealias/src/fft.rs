//! Planned 1D transforms over which the implicit algorithms are written.
//!
//! Two engines sit behind [`FftPlan`]: a naive O(N²) DFT (always available,
//! doubles as the correctness oracle via [`naive_dft`]) and an optimized
//! engine backed by rustfft. Transforms are unnormalized in both directions;
//! the convolution layer applies the 1/N factors.
//!
//! Real transforms pack their real data into the f64 pairs of the complex
//! buffer, FFTW-style: a complex-to-real transform of real length n reads a
//! half-spectrum of n/2+1 complex values and leaves n reals in the first n/2
//! complex slots.

use std::cell::{Cell, RefCell};
use std::collections::HashMap;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Transform sign: backward applies ζ_N^{+jk}, forward ζ_N^{-jk}.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Backward,
    Forward,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Complex,
    /// Half-spectrum to real signal (crfft); backward direction only.
    ComplexToReal,
    /// Real signal to half-spectrum (rcfft); forward direction only.
    RealToComplex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Placement {
    InPlace,
    OutOfPlace,
}

/// Engine selection. `CONV_FFT_BACKEND` ∈ {naive, optimized}, default optimized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Backend {
    Naive,
    #[default]
    Optimized,
}

impl Backend {
    pub fn from_env() -> Self {
        match std::env::var("CONV_FFT_BACKEND").as_deref() {
            Ok("naive") => Backend::Naive,
            _ => Backend::Optimized,
        }
    }
}

/// Full plan descriptor. `stride` is the element distance between successive
/// logical entries of one transform; `dist` the distance between batch members.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PlanSpec {
    pub size: usize,
    pub direction: Direction,
    pub kind: Kind,
    pub placement: Placement,
    pub stride: usize,
    pub count: usize,
    pub dist: usize,
}

impl PlanSpec {
    pub fn simple(size: usize, direction: Direction) -> Self {
        PlanSpec {
            size,
            direction,
            kind: Kind::Complex,
            placement: Placement::InPlace,
            stride: 1,
            count: 1,
            dist: 0,
        }
    }
}

thread_local! {
    static TRANSFORM_COUNT: Cell<u64> = const { Cell::new(0) };
    static TRANSFORM_LOG: RefCell<Option<Vec<usize>>> = const { RefCell::new(None) };
}

/// Number of logical 1D transforms executed on this thread since the last reset.
pub fn transform_count() -> u64 {
    TRANSFORM_COUNT.with(|c| c.get())
}

pub fn reset_transform_count() {
    TRANSFORM_COUNT.with(|c| c.set(0));
}

/// Start recording the logical size of every transform executed on this thread.
pub fn start_transform_log() {
    TRANSFORM_LOG.with(|l| *l.borrow_mut() = Some(Vec::new()));
}

/// Stop recording and return the sizes, in execution order.
pub fn take_transform_log() -> Vec<usize> {
    TRANSFORM_LOG.with(|l| l.borrow_mut().take().unwrap_or_default())
}

fn record_transform(logical_size: usize) {
    TRANSFORM_COUNT.with(|c| c.set(c.get() + 1));
    TRANSFORM_LOG.with(|l| {
        if let Some(log) = l.borrow_mut().as_mut() {
            log.push(logical_size);
        }
    });
}

/// Direct O(N²) evaluation of the unnormalized DFT. This is the root oracle:
/// it shares no code with the planned execution path.
pub fn naive_dft(input: &[Complex64], direction: Direction) -> Vec<Complex64> {
    let n = input.len();
    let sign = match direction {
        Direction::Backward => 1.0,
        Direction::Forward => -1.0,
    };
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for (j, o) in out.iter_mut().enumerate() {
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, x) in input.iter().enumerate() {
            let angle = sign * 2.0 * std::f64::consts::PI * ((j * k) % n) as f64 / n as f64;
            acc += Complex64::from_polar(1.0, angle) * x;
        }
        *o = acc;
    }
    out
}

enum Engine {
    Naive { roots: Vec<Complex64> },
    Rust(Arc<dyn rustfft::Fft<f64>>),
}

impl Engine {
    fn new(backend: Backend, size: usize, direction: Direction) -> Engine {
        match backend {
            Backend::Naive => {
                let sign = match direction {
                    Direction::Backward => 1.0,
                    Direction::Forward => -1.0,
                };
                let roots = (0..size)
                    .map(|k| {
                        Complex64::from_polar(
                            1.0,
                            sign * 2.0 * std::f64::consts::PI * k as f64 / size as f64,
                        )
                    })
                    .collect();
                Engine::Naive { roots }
            }
            Backend::Optimized => {
                // Cache plans per thread so that repeated planner calls
                // (e.g. the per-call planning inside the explicit reference
                // pipelines) cost a map lookup after first use; benchmarks
                // then exclude plan construction once warmed.
                thread_local! {
                    static PLAN_CACHE: RefCell<
                        HashMap<(usize, bool), Arc<dyn rustfft::Fft<f64>>>,
                    > = RefCell::new(HashMap::new());
                }
                let inverse = matches!(direction, Direction::Backward);
                let fft = PLAN_CACHE.with(|cache| {
                    cache
                        .borrow_mut()
                        .entry((size, inverse))
                        .or_insert_with(|| {
                            let mut planner = rustfft::FftPlanner::new();
                            let dir = match direction {
                                Direction::Backward => rustfft::FftDirection::Inverse,
                                Direction::Forward => rustfft::FftDirection::Forward,
                            };
                            planner.plan_fft(size, dir)
                        })
                        .clone()
                });
                Engine::Rust(fft)
            }
        }
    }

    fn scratch_len(&self, size: usize) -> usize {
        match self {
            Engine::Naive { .. } => size,
            Engine::Rust(fft) => fft.get_inplace_scratch_len(),
        }
    }

    fn process(&self, data: &mut [Complex64], scratch: &mut [Complex64]) {
        match self {
            Engine::Naive { roots } => {
                let n = data.len();
                for (j, s) in scratch.iter_mut().enumerate().take(n) {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (k, x) in data.iter().enumerate() {
                        acc += roots[(j * k) % n] * x;
                    }
                    *s = acc;
                }
                data.copy_from_slice(&scratch[..n]);
            }
            Engine::Rust(fft) => fft.process_with_scratch(data, scratch),
        }
    }
}

/// A prepared transform. Planning may allocate; execution does not.
pub struct FftPlan {
    spec: PlanSpec,
    engine: Engine,
    // Gather buffer for strided access plus Hermitian extension space for the
    // real kinds, followed by the engine's own scratch.
    work: RefCell<Vec<Complex64>>,
    complex_size: usize,
}

/// Reinterprets a complex slice as its packed f64 storage.
pub fn as_reals(buf: &[Complex64]) -> &[f64] {
    // Complex<f64> is repr(C): { re: f64, im: f64 }.
    unsafe { std::slice::from_raw_parts(buf.as_ptr() as *const f64, buf.len() * 2) }
}

pub fn as_reals_mut(buf: &mut [Complex64]) -> &mut [f64] {
    unsafe { std::slice::from_raw_parts_mut(buf.as_mut_ptr() as *mut f64, buf.len() * 2) }
}

impl FftPlan {
    pub fn new(backend: Backend, spec: PlanSpec) -> Result<FftPlan> {
        if spec.size == 0 || spec.stride == 0 || spec.count == 0 {
            return Err(Error::UnsupportedPlan(
                "size, stride, and count must be positive".into(),
            ));
        }
        match spec.kind {
            Kind::Complex => {}
            Kind::ComplexToReal => {
                if spec.direction != Direction::Backward {
                    return Err(Error::UnsupportedPlan(
                        "complex-to-real transforms are backward".into(),
                    ));
                }
                if spec.size % 2 != 0 || spec.stride != 1 || spec.count != 1 {
                    return Err(Error::UnsupportedPlan(
                        "real transforms require even size, unit stride, count 1".into(),
                    ));
                }
            }
            Kind::RealToComplex => {
                if spec.direction != Direction::Forward {
                    return Err(Error::UnsupportedPlan(
                        "real-to-complex transforms are forward".into(),
                    ));
                }
                if spec.size % 2 != 0 || spec.stride != 1 || spec.count != 1 {
                    return Err(Error::UnsupportedPlan(
                        "real transforms require even size, unit stride, count 1".into(),
                    ));
                }
            }
        }
        let complex_size = spec.size;
        let engine = Engine::new(backend, complex_size, spec.direction);
        let gather = match spec.kind {
            Kind::Complex => {
                if spec.stride > 1 {
                    complex_size
                } else {
                    0
                }
            }
            // Hermitian extension / complexified signal of length n.
            Kind::ComplexToReal | Kind::RealToComplex => complex_size,
        };
        let work = vec![Complex64::new(0.0, 0.0); gather + engine.scratch_len(complex_size)];
        Ok(FftPlan {
            spec,
            engine,
            work: RefCell::new(work),
            complex_size,
        })
    }

    pub fn spec(&self) -> &PlanSpec {
        &self.spec
    }

    fn required_len(&self) -> usize {
        let last_member = if self.spec.count > 1 {
            (self.spec.count - 1) * self.spec.dist
        } else {
            0
        };
        last_member + (self.spec.size - 1) * self.spec.stride + 1
    }

    /// Executes an in-place plan on `buf`.
    pub fn execute(&self, buf: &mut [Complex64]) -> Result<()> {
        if self.spec.placement != Placement::InPlace {
            return Err(Error::UnsupportedPlan(
                "execute() requires an in-place plan".into(),
            ));
        }
        match self.spec.kind {
            Kind::Complex => {
                if buf.len() < self.required_len() {
                    return Err(Error::SizeMismatch {
                        what: "in-place complex buffer",
                        expected: self.required_len(),
                        got: buf.len(),
                    });
                }
                self.run_complex_inplace(buf);
                Ok(())
            }
            Kind::ComplexToReal => {
                let need = self.spec.size / 2 + 1;
                if buf.len() < need {
                    return Err(Error::SizeMismatch {
                        what: "crfft buffer",
                        expected: need,
                        got: buf.len(),
                    });
                }
                self.run_crfft_inplace(buf);
                Ok(())
            }
            Kind::RealToComplex => {
                let need = self.spec.size / 2 + 1;
                if buf.len() < need {
                    return Err(Error::SizeMismatch {
                        what: "rcfft buffer",
                        expected: need,
                        got: buf.len(),
                    });
                }
                self.run_rcfft_inplace(buf);
                Ok(())
            }
        }
    }

    /// Executes an out-of-place plan from `src` into `dst`.
    pub fn execute_oop(&self, src: &[Complex64], dst: &mut [Complex64]) -> Result<()> {
        if self.spec.placement != Placement::OutOfPlace {
            return Err(Error::UnsupportedPlan(
                "execute_oop() requires an out-of-place plan".into(),
            ));
        }
        match self.spec.kind {
            Kind::Complex => {
                let need = self.required_len();
                if src.len() < need || dst.len() < need {
                    return Err(Error::SizeMismatch {
                        what: "out-of-place complex buffers",
                        expected: need,
                        got: src.len().min(dst.len()),
                    });
                }
                for t in 0..self.spec.count {
                    let base = t * self.spec.dist;
                    if self.spec.stride == 1 {
                        let d = &mut dst[base..base + self.spec.size];
                        d.copy_from_slice(&src[base..base + self.spec.size]);
                        let mut work = self.work.borrow_mut();
                        self.engine.process(d, &mut work);
                    } else {
                        let mut work = self.work.borrow_mut();
                        let (gather, scratch) = work.split_at_mut(self.complex_size);
                        for j in 0..self.spec.size {
                            gather[j] = src[base + j * self.spec.stride];
                        }
                        self.engine.process(gather, scratch);
                        for j in 0..self.spec.size {
                            dst[base + j * self.spec.stride] = gather[j];
                        }
                    }
                    record_transform(self.spec.size);
                }
                Ok(())
            }
            Kind::ComplexToReal => {
                let need = self.spec.size / 2 + 1;
                if src.len() < need || dst.len() < self.spec.size / 2 {
                    return Err(Error::SizeMismatch {
                        what: "crfft buffers",
                        expected: need,
                        got: src.len().min(dst.len()),
                    });
                }
                self.run_crfft(&src[..need], dst);
                Ok(())
            }
            Kind::RealToComplex => {
                let half = self.spec.size / 2;
                if src.len() < half || dst.len() < half + 1 {
                    return Err(Error::SizeMismatch {
                        what: "rcfft buffers",
                        expected: half + 1,
                        got: src.len().min(dst.len()),
                    });
                }
                self.run_rcfft(as_reals(&src[..half]), dst);
                Ok(())
            }
        }
    }

    fn run_complex_inplace(&self, buf: &mut [Complex64]) {
        for t in 0..self.spec.count {
            let base = t * self.spec.dist;
            if self.spec.stride == 1 {
                let mut work = self.work.borrow_mut();
                self.engine
                    .process(&mut buf[base..base + self.spec.size], &mut work);
            } else {
                let mut work = self.work.borrow_mut();
                let (gather, scratch) = work.split_at_mut(self.complex_size);
                for j in 0..self.spec.size {
                    gather[j] = buf[base + j * self.spec.stride];
                }
                self.engine.process(gather, scratch);
                for j in 0..self.spec.size {
                    buf[base + j * self.spec.stride] = gather[j];
                }
            }
            record_transform(self.spec.size);
        }
    }

    // Hermitian-extends a half-spectrum into `full`. Imaginary parts of the
    // DC and Nyquist entries are ignored, as in FFTW.
    fn extend_half_spectrum(n: usize, half: &[Complex64], full: &mut [Complex64]) {
        let c = n / 2;
        full[0] = Complex64::new(half[0].re, 0.0);
        full[c] = Complex64::new(half[c].re, 0.0);
        for k in 1..c {
            full[k] = half[k];
            full[n - k] = half[k].conj();
        }
    }

    // Half-spectrum (n/2+1 complex) -> n reals packed into dst.
    fn run_crfft(&self, half: &[Complex64], dst: &mut [Complex64]) {
        let n = self.spec.size;
        let mut work = self.work.borrow_mut();
        let (full, scratch) = work.split_at_mut(self.complex_size);
        Self::extend_half_spectrum(n, half, full);
        self.engine.process(full, scratch);
        let out = as_reals_mut(dst);
        for j in 0..n {
            out[j] = full[j].re;
        }
        record_transform(n);
    }

    fn run_crfft_inplace(&self, buf: &mut [Complex64]) {
        let n = self.spec.size;
        let mut work = self.work.borrow_mut();
        let (full, scratch) = work.split_at_mut(self.complex_size);
        Self::extend_half_spectrum(n, &buf[..n / 2 + 1], full);
        self.engine.process(full, scratch);
        let out = as_reals_mut(buf);
        for j in 0..n {
            out[j] = full[j].re;
        }
        record_transform(n);
    }

    // n packed reals -> half-spectrum of n/2+1 complex values.
    fn run_rcfft(&self, reals: &[f64], dst: &mut [Complex64]) {
        let n = self.spec.size;
        let mut work = self.work.borrow_mut();
        let (full, scratch) = work.split_at_mut(self.complex_size);
        for j in 0..n {
            full[j] = Complex64::new(reals[j], 0.0);
        }
        self.engine.process(full, scratch);
        dst[..n / 2 + 1].copy_from_slice(&full[..n / 2 + 1]);
        record_transform(n);
    }

    fn run_rcfft_inplace(&self, buf: &mut [Complex64]) {
        let n = self.spec.size;
        let mut work = self.work.borrow_mut();
        let (full, scratch) = work.split_at_mut(self.complex_size);
        {
            let reals = as_reals(&buf[..n / 2]);
            for j in 0..n {
                full[j] = Complex64::new(reals[j], 0.0);
            }
        }
        self.engine.process(full, scratch);
        buf[..n / 2 + 1].copy_from_slice(&full[..n / 2 + 1]);
        record_transform(n);
    }
}

/// Plan factory bound to a backend.
#[derive(Debug, Clone, Copy, Default)]
pub struct Planner {
    pub backend: Backend,
}

impl Planner {
    pub fn new(backend: Backend) -> Self {
        Planner { backend }
    }

    pub fn plan(&self, spec: PlanSpec) -> Result<FftPlan> {
        FftPlan::new(self.backend, spec)
    }

    /// Contiguous single complex transform, in place.
    pub fn c2c(&self, size: usize, direction: Direction) -> Result<FftPlan> {
        self.plan(PlanSpec::simple(size, direction))
    }

    /// Contiguous single complex transform, out of place.
    pub fn c2c_oop(&self, size: usize, direction: Direction) -> Result<FftPlan> {
        self.plan(PlanSpec {
            placement: Placement::OutOfPlace,
            ..PlanSpec::simple(size, direction)
        })
    }

    /// Batched strided complex transform, in place.
    pub fn c2c_strided(
        &self,
        size: usize,
        direction: Direction,
        stride: usize,
        count: usize,
        dist: usize,
    ) -> Result<FftPlan> {
        self.plan(PlanSpec {
            stride,
            count,
            dist,
            ..PlanSpec::simple(size, direction)
        })
    }

    /// Complex-to-real transform of real length n, in place.
    pub fn crfft(&self, n: usize) -> Result<FftPlan> {
        self.plan(PlanSpec {
            kind: Kind::ComplexToReal,
            ..PlanSpec::simple(n, Direction::Backward)
        })
    }

    pub fn crfft_oop(&self, n: usize) -> Result<FftPlan> {
        self.plan(PlanSpec {
            kind: Kind::ComplexToReal,
            placement: Placement::OutOfPlace,
            ..PlanSpec::simple(n, Direction::Backward)
        })
    }

    /// Real-to-complex transform of real length n, in place.
    pub fn rcfft(&self, n: usize) -> Result<FftPlan> {
        self.plan(PlanSpec {
            kind: Kind::RealToComplex,
            ..PlanSpec::simple(n, Direction::Forward)
        })
    }

    pub fn rcfft_oop(&self, n: usize) -> Result<FftPlan> {
        self.plan(PlanSpec {
            kind: Kind::RealToComplex,
            placement: Placement::OutOfPlace,
            ..PlanSpec::simple(n, Direction::Forward)
        })
    }
}
