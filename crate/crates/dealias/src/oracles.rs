//! Reference implementations used as ground truth and benchmark baselines:
//! direct convolution sums, explicitly zero-padded FFT pipelines, and pruned
//! explicit variants. Index arithmetic here is written independently of the
//! implicit path so that agreement between the two is meaningful evidence.
//!
//! Direct sums are O(n²)/O(n³) and guarded by a multiply-add cap
//! ([`DEFAULT_CAP`]) that callers can override; they accumulate with
//! compensated (Kahan) summation to keep oracle error below the error of the
//! paths under test.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft::{Backend, Direction, Planner};

/// Default direct-sum work cap, in multiply-adds.
pub const DEFAULT_CAP: u64 = 1 << 20;

fn check_cap(work: u64, cap: Option<u64>) -> Result<()> {
    let cap = cap.unwrap_or(DEFAULT_CAP);
    if work > cap {
        return Err(Error::OracleCapExceeded(work));
    }
    Ok(())
}

/// Compensated complex accumulator.
#[derive(Clone, Copy, Default)]
struct Kahan {
    sum: Complex64,
    carry: Complex64,
}

impl Kahan {
    #[inline]
    fn add(&mut self, x: Complex64) {
        let y = x - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    #[inline]
    fn value(&self) -> Complex64 {
        self.sum
    }
}

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

// ---------------------------------------------------------------------------
// Direct sums, 1D.
// ---------------------------------------------------------------------------

/// Linear convolution of modes 0..m-1: H_k = Σ_{p=0}^{k} f_p g_{k-p}.
pub fn direct_cconv(f: &[Complex64], g: &[Complex64], cap: Option<u64>) -> Result<Vec<Complex64>> {
    let m = f.len();
    check_cap((m as u64 * (m as u64 + 1)) / 2, cap)?;
    Ok((0..m)
        .map(|k| {
            let mut acc = Kahan::default();
            for p in 0..=k {
                acc.add(f[p] * g[k - p]);
            }
            acc.value()
        })
        .collect())
}

fn herm_ext(x: &[Complex64], k: isize) -> Complex64 {
    let m = x.len() as isize;
    if k >= 0 {
        if k < m {
            x[k as usize]
        } else {
            zero()
        }
    } else if -k < m {
        x[(-k) as usize].conj()
    } else {
        zero()
    }
}

/// Centered Hermitian convolution: H_k = Σ_{p=k-m+1}^{m-1} f_p g_{k-p} with
/// f_{-p} = conj(f_p), for stored k = 0..m-1.
pub fn direct_hconv(f: &[Complex64], g: &[Complex64], cap: Option<u64>) -> Result<Vec<Complex64>> {
    let m = f.len() as isize;
    check_cap((m as u64) * (2 * m as u64), cap)?;
    Ok((0..m)
        .map(|k| {
            let mut acc = Kahan::default();
            for p in (k - m + 1)..m {
                acc.add(herm_ext(f, p) * herm_ext(g, k - p));
            }
            acc.value()
        })
        .collect())
}

fn tern_ext(x: &[Complex64], k: isize, m: isize) -> Complex64 {
    // m+1 stored entries; only |k| ≤ m-1 participate.
    if k.abs() >= m {
        zero()
    } else if k >= 0 {
        x[k as usize]
    } else {
        x[(-k) as usize].conj()
    }
}

/// Centered Hermitian ternary convolution over |p|,|q|,|r| ≤ m-1; inputs and
/// output are m+1 entries with the k=m slot zero.
pub fn direct_tconv(
    f: &[Complex64],
    g: &[Complex64],
    h: &[Complex64],
    cap: Option<u64>,
) -> Result<Vec<Complex64>> {
    let m = (f.len() - 1) as isize;
    check_cap((m as u64) * (2 * m as u64) * (2 * m as u64), cap)?;
    let mut out = vec![zero(); m as usize + 1];
    for (k, o) in out.iter_mut().enumerate().take(m as usize) {
        let k = k as isize;
        let mut acc = Kahan::default();
        for p in (1 - m)..m {
            for q in (1 - m)..m {
                let r = k - p - q;
                if r > -m && r < m {
                    acc.add(tern_ext(f, p, m) * tern_ext(g, q, m) * tern_ext(h, r, m));
                }
            }
        }
        *o = acc.value();
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Direct sums, 2D/3D.
// ---------------------------------------------------------------------------

/// 2D linear convolution over the index box [0,mx)×[0,my), row-major.
pub fn direct_cconv2(
    f: &[Complex64],
    g: &[Complex64],
    mx: usize,
    my: usize,
    cap: Option<u64>,
) -> Result<Vec<Complex64>> {
    let n = (mx * my) as u64;
    check_cap(n * n, cap)?;
    let mut out = vec![zero(); mx * my];
    for kx in 0..mx {
        for ky in 0..my {
            let mut acc = Kahan::default();
            for px in 0..=kx {
                for py in 0..=ky {
                    acc.add(f[px * my + py] * g[(kx - px) * my + (ky - py)]);
                }
            }
            out[kx * my + ky] = acc.value();
        }
    }
    Ok(out)
}

/// Mode lookup for a centered-x, Hermitian-y 2D field stored as
/// (2mx-1)×my with the x origin at row mx-1.
fn herm2_ext(f: &[Complex64], kx: isize, ky: isize, mx: isize, my: isize) -> Complex64 {
    if kx.abs() >= mx || ky.abs() >= my {
        return zero();
    }
    if ky >= 0 {
        f[((kx + mx - 1) * my + ky) as usize]
    } else {
        f[((-kx + mx - 1) * my - ky) as usize].conj()
    }
}

/// Centered Hermitian 2D convolution on the stored (2mx-1)×my domain.
pub fn direct_conv2(
    f: &[Complex64],
    g: &[Complex64],
    mx: usize,
    my: usize,
    cap: Option<u64>,
) -> Result<Vec<Complex64>> {
    let (mxi, myi) = (mx as isize, my as isize);
    let stored = ((2 * mx - 1) * my) as u64;
    let modes = ((2 * mx - 1) * (2 * my - 1)) as u64;
    check_cap(stored * modes, cap)?;
    let mut out = vec![zero(); (2 * mx - 1) * my];
    for kx in (1 - mxi)..mxi {
        for ky in 0..myi {
            let mut acc = Kahan::default();
            for px in (1 - mxi)..mxi {
                for py in (1 - myi)..myi {
                    acc.add(
                        herm2_ext(f, px, py, mxi, myi)
                            * herm2_ext(g, kx - px, ky - py, mxi, myi),
                    );
                }
            }
            out[((kx + mxi - 1) * myi + ky) as usize] = acc.value();
        }
    }
    Ok(out)
}

/// 3D linear convolution over [0,mx)×[0,my)×[0,mz).
pub fn direct_cconv3(
    f: &[Complex64],
    g: &[Complex64],
    mx: usize,
    my: usize,
    mz: usize,
    cap: Option<u64>,
) -> Result<Vec<Complex64>> {
    let n = (mx * my * mz) as u64;
    check_cap(n * n, cap)?;
    let mut out = vec![zero(); mx * my * mz];
    let idx = |x: usize, y: usize, z: usize| (x * my + y) * mz + z;
    for kx in 0..mx {
        for ky in 0..my {
            for kz in 0..mz {
                let mut acc = Kahan::default();
                for px in 0..=kx {
                    for py in 0..=ky {
                        for pz in 0..=kz {
                            acc.add(f[idx(px, py, pz)] * g[idx(kx - px, ky - py, kz - pz)]);
                        }
                    }
                }
                out[idx(kx, ky, kz)] = acc.value();
            }
        }
    }
    Ok(out)
}

/// Mode lookup for centered-x, centered-y, Hermitian-z storage:
/// (2mx-1)×(2my-1)×mz with origins at rows mx-1, my-1.
fn herm3_ext(
    f: &[Complex64],
    kx: isize,
    ky: isize,
    kz: isize,
    mx: isize,
    my: isize,
    mz: isize,
) -> Complex64 {
    if kx.abs() >= mx || ky.abs() >= my || kz.abs() >= mz {
        return zero();
    }
    let at = |x: isize, y: isize, z: isize| {
        (((x + mx - 1) * (2 * my - 1) + (y + my - 1)) * mz + z) as usize
    };
    if kz >= 0 {
        f[at(kx, ky, kz)]
    } else {
        f[at(-kx, -ky, -kz)].conj()
    }
}

/// Centered Hermitian 3D convolution on the stored (2mx-1)×(2my-1)×mz domain.
pub fn direct_hconv3(
    f: &[Complex64],
    g: &[Complex64],
    mx: usize,
    my: usize,
    mz: usize,
    cap: Option<u64>,
) -> Result<Vec<Complex64>> {
    let (mxi, myi, mzi) = (mx as isize, my as isize, mz as isize);
    let stored = ((2 * mx - 1) * (2 * my - 1) * mz) as u64;
    let modes = ((2 * mx - 1) * (2 * my - 1) * (2 * mz - 1)) as u64;
    check_cap(stored * modes, cap)?;
    let mut out = vec![zero(); (2 * mx - 1) * (2 * my - 1) * mz];
    for kx in (1 - mxi)..mxi {
        for ky in (1 - myi)..myi {
            for kz in 0..mzi {
                let mut acc = Kahan::default();
                for px in (1 - mxi)..mxi {
                    for py in (1 - myi)..myi {
                        for pz in (1 - mzi)..mzi {
                            acc.add(
                                herm3_ext(f, px, py, pz, mxi, myi, mzi)
                                    * herm3_ext(g, kx - px, ky - py, kz - pz, mxi, myi, mzi),
                            );
                        }
                    }
                }
                out[(((kx + mxi - 1) * (2 * myi - 1) + (ky + myi - 1)) * mzi + kz) as usize] =
                    acc.value();
            }
        }
    }
    Ok(out)
}

/// Mode lookup for signed-centered-x, Hermitian-y ternary storage:
/// 2mx×(my+1) with the x origin at row mx; |kx| ≤ mx-1, |ky| ≤ my-1.
fn tern2_ext(f: &[Complex64], kx: isize, ky: isize, mx: isize, my: isize) -> Complex64 {
    if kx.abs() >= mx || ky.abs() >= my {
        return zero();
    }
    if ky >= 0 {
        f[((kx + mx) * (my + 1) + ky) as usize]
    } else {
        f[((-kx + mx) * (my + 1) - ky) as usize].conj()
    }
}

/// Centered Hermitian 2D ternary convolution on the 2mx×(my+1) domain.
pub fn direct_tconv2(
    f: &[Complex64],
    g: &[Complex64],
    h: &[Complex64],
    mx: usize,
    my: usize,
    cap: Option<u64>,
) -> Result<Vec<Complex64>> {
    let (mxi, myi) = (mx as isize, my as isize);
    let stored = ((2 * mx - 1) * my) as u64;
    let modes = ((2 * mx - 1) * (2 * my - 1)) as u64;
    check_cap(stored * modes * modes, cap)?;
    let mut out = vec![zero(); 2 * mx * (my + 1)];
    for kx in (1 - mxi)..mxi {
        for ky in 0..myi {
            let mut acc = Kahan::default();
            for px in (1 - mxi)..mxi {
                for py in (1 - myi)..myi {
                    for qx in (1 - mxi)..mxi {
                        for qy in (1 - myi)..myi {
                            let (rx, ry) = (kx - px - qx, ky - py - qy);
                            if rx.abs() < mxi && ry.abs() < myi {
                                acc.add(
                                    tern2_ext(f, px, py, mxi, myi)
                                        * tern2_ext(g, qx, qy, mxi, myi)
                                        * tern2_ext(h, rx, ry, mxi, myi),
                                );
                            }
                        }
                    }
                }
            }
            out[((kx + mxi) * (myi + 1) + ky) as usize] = acc.value();
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Explicit zero-padded pipelines.
// ---------------------------------------------------------------------------

fn fft_rows(buf: &mut [Complex64], rows: usize, cols: usize, dir: Direction, backend: Backend) {
    let plan = Planner::new(backend).c2c(cols, dir).expect("row plan");
    for r in 0..rows {
        plan.execute(&mut buf[r * cols..(r + 1) * cols]).unwrap();
    }
}

fn fft_cols(buf: &mut [Complex64], rows: usize, cols: usize, dir: Direction, backend: Backend) {
    let plan = Planner::new(backend)
        .c2c_strided(rows, dir, cols, cols, 1)
        .expect("column plan");
    plan.execute(buf).unwrap();
}

fn fft_cols_subset(
    buf: &mut [Complex64],
    rows: usize,
    cols: usize,
    keep: usize,
    dir: Direction,
    backend: Backend,
) {
    // Transform only the first `keep` columns (the rest are known zero on the
    // backward side or discarded on the forward side).
    let plan = Planner::new(backend)
        .c2c_strided(rows, dir, cols, keep, 1)
        .expect("pruned column plan");
    plan.execute(buf).unwrap();
}

/// Explicit 1D dealiased convolution of modes 0..m-1 via padding to 2m.
pub fn explicit_cconv(f: &[Complex64], g: &[Complex64], backend: Backend) -> Vec<Complex64> {
    let m = f.len();
    let n = 2 * m;
    let planner = Planner::new(backend);
    let bwd = planner.c2c(n, Direction::Backward).unwrap();
    let fwd = planner.c2c(n, Direction::Forward).unwrap();
    let mut a = vec![zero(); n];
    let mut b = vec![zero(); n];
    a[..m].copy_from_slice(f);
    b[..m].copy_from_slice(g);
    bwd.execute(&mut a).unwrap();
    bwd.execute(&mut b).unwrap();
    for (x, y) in a.iter_mut().zip(&b) {
        *x *= y;
    }
    fwd.execute(&mut a).unwrap();
    let scale = 1.0 / n as f64;
    a[..m].iter().map(|x| x * scale).collect()
}

/// Explicit centered Hermitian convolution: expand the implied negative
/// modes, pad the centered width 2m-1 to 3m, convolve, truncate.
pub fn explicit_hconv(f: &[Complex64], g: &[Complex64], backend: Backend) -> Vec<Complex64> {
    let m = f.len();
    let n = 3 * m;
    let planner = Planner::new(backend);
    let bwd = planner.c2c(n, Direction::Backward).unwrap();
    let fwd = planner.c2c(n, Direction::Forward).unwrap();
    let load = |x: &[Complex64]| {
        let mut buf = vec![zero(); n];
        for k in 0..m as isize {
            buf[k as usize] = herm_ext(x, k);
            if k > 0 {
                buf[n - k as usize] = herm_ext(x, -k);
            }
        }
        buf
    };
    let mut a = load(f);
    let mut b = load(g);
    bwd.execute(&mut a).unwrap();
    bwd.execute(&mut b).unwrap();
    for (x, y) in a.iter_mut().zip(&b) {
        *x *= y;
    }
    fwd.execute(&mut a).unwrap();
    let scale = 1.0 / n as f64;
    a[..m].iter().map(|x| x * scale).collect()
}

/// Explicit centered Hermitian ternary convolution via padding to 4m.
pub fn explicit_tconv(
    f: &[Complex64],
    g: &[Complex64],
    h: &[Complex64],
    backend: Backend,
) -> Vec<Complex64> {
    let m = f.len() - 1;
    let n = 4 * m;
    let planner = Planner::new(backend);
    let bwd = planner.c2c(n, Direction::Backward).unwrap();
    let fwd = planner.c2c(n, Direction::Forward).unwrap();
    let load = |x: &[Complex64]| {
        let mut buf = vec![zero(); n];
        for k in 0..m as isize {
            buf[k as usize] = tern_ext(x, k, m as isize);
            if k > 0 {
                buf[n - k as usize] = tern_ext(x, -k, m as isize);
            }
        }
        buf
    };
    let mut a = load(f);
    let mut b = load(g);
    let mut c = load(h);
    bwd.execute(&mut a).unwrap();
    bwd.execute(&mut b).unwrap();
    bwd.execute(&mut c).unwrap();
    for i in 0..n {
        a[i] *= b[i] * c[i];
    }
    fwd.execute(&mut a).unwrap();
    let scale = 1.0 / n as f64;
    let mut out: Vec<Complex64> = a[..m].iter().map(|x| x * scale).collect();
    out.push(zero());
    out
}

/// Explicit 2D convolution on a 2mx×2my padded grid (8·mx·my complex words
/// of padded storage).
pub fn explicit_cconv2(
    f: &[Complex64],
    g: &[Complex64],
    mx: usize,
    my: usize,
    backend: Backend,
) -> Vec<Complex64> {
    explicit_or_pruned_cconv2(f, g, mx, my, backend, false)
}

/// y-pruned explicit 2D convolution: identical result, but the x-direction
/// transforms over the all-zero columns my ≤ y < 2my are skipped.
pub fn pruned_cconv2(
    f: &[Complex64],
    g: &[Complex64],
    mx: usize,
    my: usize,
    backend: Backend,
) -> Vec<Complex64> {
    explicit_or_pruned_cconv2(f, g, mx, my, backend, true)
}

fn explicit_or_pruned_cconv2(
    f: &[Complex64],
    g: &[Complex64],
    mx: usize,
    my: usize,
    backend: Backend,
    prune: bool,
) -> Vec<Complex64> {
    let (nx, ny) = (2 * mx, 2 * my);
    let mut a = vec![zero(); nx * ny];
    let mut b = vec![zero(); nx * ny];
    for x in 0..mx {
        a[x * ny..x * ny + my].copy_from_slice(&f[x * my..(x + 1) * my]);
        b[x * ny..x * ny + my].copy_from_slice(&g[x * my..(x + 1) * my]);
    }
    for buf in [&mut a, &mut b] {
        if prune {
            fft_cols_subset(buf, nx, ny, my, Direction::Backward, backend);
        } else {
            fft_cols(buf, nx, ny, Direction::Backward, backend);
        }
        fft_rows(buf, nx, ny, Direction::Backward, backend);
    }
    for (x, y) in a.iter_mut().zip(&b) {
        *x *= y;
    }
    fft_rows(&mut a, nx, ny, Direction::Forward, backend);
    if prune {
        fft_cols_subset(&mut a, nx, ny, my, Direction::Forward, backend);
    } else {
        fft_cols(&mut a, nx, ny, Direction::Forward, backend);
    }
    let scale = 1.0 / (nx * ny) as f64;
    let mut out = vec![zero(); mx * my];
    for x in 0..mx {
        for y in 0..my {
            out[x * my + y] = a[x * ny + y] * scale;
        }
    }
    out
}

/// Explicit centered Hermitian 2D convolution on a 3mx×3my grid.
pub fn explicit_conv2(
    f: &[Complex64],
    g: &[Complex64],
    mx: usize,
    my: usize,
    backend: Backend,
) -> Vec<Complex64> {
    let (mxi, myi) = (mx as isize, my as isize);
    let (nx, ny) = (3 * mx, 3 * my);
    let load = |x: &[Complex64]| {
        let mut buf = vec![zero(); nx * ny];
        for kx in (1 - mxi)..mxi {
            for ky in (1 - myi)..myi {
                let i = kx.rem_euclid(nx as isize) as usize;
                let j = ky.rem_euclid(ny as isize) as usize;
                buf[i * ny + j] = herm2_ext(x, kx, ky, mxi, myi);
            }
        }
        buf
    };
    let mut a = load(f);
    let mut b = load(g);
    for buf in [&mut a, &mut b] {
        fft_rows(buf, nx, ny, Direction::Backward, backend);
        fft_cols(buf, nx, ny, Direction::Backward, backend);
    }
    for (x, y) in a.iter_mut().zip(&b) {
        *x *= y;
    }
    fft_cols(&mut a, nx, ny, Direction::Forward, backend);
    fft_rows(&mut a, nx, ny, Direction::Forward, backend);
    let scale = 1.0 / (nx * ny) as f64;
    let mut out = vec![zero(); (2 * mx - 1) * my];
    for kx in (1 - mxi)..mxi {
        for ky in 0..myi {
            let i = kx.rem_euclid(nx as isize) as usize;
            out[((kx + mxi - 1) * myi + ky) as usize] = a[i * ny + ky as usize] * scale;
        }
    }
    out
}

fn fft3(buf: &mut [Complex64], nx: usize, ny: usize, nz: usize, dir: Direction, backend: Backend) {
    // z lines (contiguous), then y (stride nz within each x-slab), then x
    // (stride ny·nz across the whole volume).
    let planner = Planner::new(backend);
    let zp = planner.c2c(nz, dir).unwrap();
    for l in 0..nx * ny {
        zp.execute(&mut buf[l * nz..(l + 1) * nz]).unwrap();
    }
    let yp = planner.c2c_strided(ny, dir, nz, nz, 1).unwrap();
    for x in 0..nx {
        yp.execute(&mut buf[x * ny * nz..(x + 1) * ny * nz]).unwrap();
    }
    let xp = planner.c2c_strided(nx, dir, ny * nz, ny * nz, 1).unwrap();
    xp.execute(buf).unwrap();
}

/// Explicit 3D convolution on a 2mx×2my×2mz grid.
pub fn explicit_cconv3(
    f: &[Complex64],
    g: &[Complex64],
    mx: usize,
    my: usize,
    mz: usize,
    backend: Backend,
) -> Vec<Complex64> {
    explicit_or_pruned_cconv3(f, g, mx, my, mz, backend, false)
}

/// xz-pruned explicit 3D convolution: x and z transforms over all-zero lines
/// are skipped; the result is identical to the explicit pipeline.
pub fn pruned_cconv3(
    f: &[Complex64],
    g: &[Complex64],
    mx: usize,
    my: usize,
    mz: usize,
    backend: Backend,
) -> Vec<Complex64> {
    explicit_or_pruned_cconv3(f, g, mx, my, mz, backend, true)
}

fn explicit_or_pruned_cconv3(
    f: &[Complex64],
    g: &[Complex64],
    mx: usize,
    my: usize,
    mz: usize,
    backend: Backend,
    prune: bool,
) -> Vec<Complex64> {
    let (nx, ny, nz) = (2 * mx, 2 * my, 2 * mz);
    let planner = Planner::new(backend);
    let mut a = vec![zero(); nx * ny * nz];
    let mut b = vec![zero(); nx * ny * nz];
    for x in 0..mx {
        for y in 0..my {
            let src = (x * my + y) * mz;
            let dst = (x * ny + y) * nz;
            a[dst..dst + mz].copy_from_slice(&f[src..src + mz]);
            b[dst..dst + mz].copy_from_slice(&g[src..src + mz]);
        }
    }
    let zp = planner.c2c(nz, Direction::Backward).unwrap();
    let zf = planner.c2c(nz, Direction::Forward).unwrap();
    let yp = planner.c2c_strided(ny, Direction::Backward, nz, nz, 1).unwrap();
    let yf = planner.c2c_strided(ny, Direction::Forward, nz, nz, 1).unwrap();
    let xp = planner
        .c2c_strided(nx, Direction::Backward, ny * nz, ny * nz, 1)
        .unwrap();
    let xf = planner
        .c2c_strided(nx, Direction::Forward, ny * nz, ny * nz, 1)
        .unwrap();

    for buf in [&mut a, &mut b] {
        // z: only lines inside the nonzero (x<mx, y<my) block when pruning.
        for x in 0..if prune { mx } else { nx } {
            for y in 0..if prune { my } else { ny } {
                zp.execute(&mut buf[(x * ny + y) * nz..(x * ny + y + 1) * nz])
                    .unwrap();
            }
        }
        // y: full columns, but only x-slabs with data when pruning.
        for x in 0..if prune { mx } else { nx } {
            yp.execute(&mut buf[x * ny * nz..(x + 1) * ny * nz]).unwrap();
        }
        // x: always full.
        xp.execute(buf).unwrap();
    }
    for (x, y) in a.iter_mut().zip(&b) {
        *x *= y;
    }
    xf.execute(&mut a).unwrap();
    for x in 0..if prune { mx } else { nx } {
        yf.execute(&mut a[x * ny * nz..(x + 1) * ny * nz]).unwrap();
    }
    for x in 0..if prune { mx } else { nx } {
        for y in 0..if prune { my } else { ny } {
            zf.execute(&mut a[(x * ny + y) * nz..(x * ny + y + 1) * nz])
                .unwrap();
        }
    }
    let scale = 1.0 / (nx * ny * nz) as f64;
    let mut out = vec![zero(); mx * my * mz];
    for x in 0..mx {
        for y in 0..my {
            for z in 0..mz {
                out[(x * my + y) * mz + z] = a[(x * ny + y) * nz + z] * scale;
            }
        }
    }
    out
}

/// Explicit centered Hermitian 3D convolution on a 3mx×3my×3mz grid.
pub fn explicit_hconv3(
    f: &[Complex64],
    g: &[Complex64],
    mx: usize,
    my: usize,
    mz: usize,
    backend: Backend,
) -> Vec<Complex64> {
    let (mxi, myi, mzi) = (mx as isize, my as isize, mz as isize);
    let (nx, ny, nz) = (3 * mx, 3 * my, 3 * mz);
    let load = |x: &[Complex64]| {
        let mut buf = vec![zero(); nx * ny * nz];
        for kx in (1 - mxi)..mxi {
            for ky in (1 - myi)..myi {
                for kz in (1 - mzi)..mzi {
                    let i = kx.rem_euclid(nx as isize) as usize;
                    let j = ky.rem_euclid(ny as isize) as usize;
                    let l = kz.rem_euclid(nz as isize) as usize;
                    buf[(i * ny + j) * nz + l] = herm3_ext(x, kx, ky, kz, mxi, myi, mzi);
                }
            }
        }
        buf
    };
    let mut a = load(f);
    let mut b = load(g);
    fft3(&mut a, nx, ny, nz, Direction::Backward, backend);
    fft3(&mut b, nx, ny, nz, Direction::Backward, backend);
    for (x, y) in a.iter_mut().zip(&b) {
        *x *= y;
    }
    fft3(&mut a, nx, ny, nz, Direction::Forward, backend);
    let scale = 1.0 / (nx * ny * nz) as f64;
    let mut out = vec![zero(); (2 * mx - 1) * (2 * my - 1) * mz];
    for kx in (1 - mxi)..mxi {
        for ky in (1 - myi)..myi {
            for kz in 0..mzi {
                let i = kx.rem_euclid(nx as isize) as usize;
                let j = ky.rem_euclid(ny as isize) as usize;
                out[(((kx + mxi - 1) * (2 * myi - 1) + (ky + myi - 1)) * mzi + kz) as usize] =
                    a[(i * ny + j) * nz + kz as usize] * scale;
            }
        }
    }
    out
}

/// Explicit centered Hermitian 2D ternary convolution on a 4mx×4my grid.
pub fn explicit_tconv2(
    f: &[Complex64],
    g: &[Complex64],
    h: &[Complex64],
    mx: usize,
    my: usize,
    backend: Backend,
) -> Vec<Complex64> {
    let (mxi, myi) = (mx as isize, my as isize);
    let (nx, ny) = (4 * mx, 4 * my);
    let load = |x: &[Complex64]| {
        let mut buf = vec![zero(); nx * ny];
        for kx in (1 - mxi)..mxi {
            for ky in (1 - myi)..myi {
                let i = kx.rem_euclid(nx as isize) as usize;
                let j = ky.rem_euclid(ny as isize) as usize;
                buf[i * ny + j] = tern2_ext(x, kx, ky, mxi, myi);
            }
        }
        buf
    };
    let mut a = load(f);
    let mut b = load(g);
    let mut c = load(h);
    for buf in [&mut a, &mut b, &mut c] {
        fft_rows(buf, nx, ny, Direction::Backward, backend);
        fft_cols(buf, nx, ny, Direction::Backward, backend);
    }
    for i in 0..nx * ny {
        a[i] *= b[i] * c[i];
    }
    fft_cols(&mut a, nx, ny, Direction::Forward, backend);
    fft_rows(&mut a, nx, ny, Direction::Forward, backend);
    let scale = 1.0 / (nx * ny) as f64;
    let mut out = vec![zero(); 2 * mx * (my + 1)];
    for kx in (1 - mxi)..mxi {
        for ky in 0..myi {
            let i = kx.rem_euclid(nx as isize) as usize;
            out[((kx + mxi) * (myi + 1) + ky) as usize] = a[i * ny + ky as usize] * scale;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rand_vec(n: usize, seed: u64) -> Vec<Complex64> {
        let mut state = seed.wrapping_mul(0x9E3779B97F4A7C15).wrapping_add(1);
        let mut next = move || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((state >> 11) as f64) / ((1u64 << 53) as f64) * 2.0 - 1.0
        };
        (0..n).map(|_| c(next(), next())).collect()
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
    fn direct_trivia() {
        let one = [c(1.0, 0.0)];
        assert_eq!(direct_cconv(&one, &one, None).unwrap(), vec![c(1.0, 0.0)]);
        let f = [c(3.0, 0.0), c(0.0, 0.0)];
        let g = [c(5.0, 0.0), c(0.0, 0.0)];
        let h = direct_hconv(&f, &g, None).unwrap();
        assert!((h[0] - c(15.0, 0.0)).norm() < 1e-15 && h[1].norm() < 1e-15);
    }

    #[test]
    fn cap_is_enforced_and_overridable() {
        let f = rand_vec(2048, 1);
        assert!(matches!(
            direct_cconv(&f, &f, None),
            Err(Error::OracleCapExceeded(_))
        ));
        assert!(direct_cconv(&f, &f, Some(u64::MAX)).is_ok());
    }

    #[test]
    fn explicit_matches_direct_1d() {
        let m = 16;
        let f = rand_vec(m, 2);
        let g = rand_vec(m, 3);
        let want = direct_cconv(&f, &g, None).unwrap();
        let got = explicit_cconv(&f, &g, Backend::Optimized);
        assert!(rel_l2(&got, &want) < 1e-13);

        let mut f = rand_vec(m, 4);
        let mut g = rand_vec(m, 5);
        f[0].im = 0.0;
        g[0].im = 0.0;
        let want = direct_hconv(&f, &g, None).unwrap();
        let got = explicit_hconv(&f, &g, Backend::Optimized);
        assert!(rel_l2(&got, &want) < 1e-13);

        let m = 8;
        let mut f = rand_vec(m + 1, 6);
        let mut g = rand_vec(m + 1, 7);
        let mut h = rand_vec(m + 1, 8);
        for x in [&mut f, &mut g, &mut h] {
            x[0].im = 0.0;
            x[m] = c(0.0, 0.0);
        }
        let want = direct_tconv(&f, &g, &h, None).unwrap();
        let got = explicit_tconv(&f, &g, &h, Backend::Optimized);
        assert!(rel_l2(&got[..m], &want[..m]) < 1e-12);
    }

    #[test]
    fn explicit_hconv_exact_family() {
        let m = 32;
        let mode = |k: usize| Complex64::from_polar(1.0, k as f64);
        let f: Vec<_> = (0..m).map(|k| 3f64.sqrt() * mode(k)).collect();
        let g: Vec<_> = (0..m).map(|k| 5f64.sqrt() * mode(k)).collect();
        let got = explicit_hconv(&f, &g, Backend::Optimized);
        for (k, x) in got.iter().enumerate() {
            let want = 15f64.sqrt() * (2 * m - 1 - k) as f64 * mode(k);
            assert!((x - want).norm() <= 1e-12 * want.norm(), "k={k}");
        }
    }

    #[test]
    fn pruned_equals_explicit_2d_and_3d() {
        let (mx, my) = (8, 8);
        let f = rand_vec(mx * my, 9);
        let g = rand_vec(mx * my, 10);
        let a = explicit_cconv2(&f, &g, mx, my, Backend::Optimized);
        let b = pruned_cconv2(&f, &g, mx, my, Backend::Optimized);
        assert!(rel_l2(&b, &a) < 1e-15);
        let want = direct_cconv2(&f, &g, mx, my, None).unwrap();
        assert!(rel_l2(&a, &want) < 1e-13);

        let (mx, my, mz) = (4, 3, 2);
        let f = rand_vec(mx * my * mz, 11);
        let g = rand_vec(mx * my * mz, 12);
        let a = explicit_cconv3(&f, &g, mx, my, mz, Backend::Optimized);
        let b = pruned_cconv3(&f, &g, mx, my, mz, Backend::Optimized);
        assert!(rel_l2(&b, &a) < 1e-15);
        let want = direct_cconv3(&f, &g, mx, my, mz, None).unwrap();
        assert!(rel_l2(&a, &want) < 1e-13);
    }

    #[test]
    fn explicit_matches_direct_2d_hermitian_kinds() {
        let (mx, my) = (3, 4);
        let rows = 2 * mx - 1;
        let mut f = rand_vec(rows * my, 13);
        let mut g = rand_vec(rows * my, 14);
        // Symmetrize the stored ky = 0 line so the fields describe real data.
        for buf in [&mut f, &mut g] {
            for k in 1..mx {
                let a = buf[(mx - 1 + k) * my];
                let b = buf[(mx - 1 - k) * my];
                let avg = (a + b.conj()) * 0.5;
                buf[(mx - 1 + k) * my] = avg;
                buf[(mx - 1 - k) * my] = avg.conj();
            }
            buf[(mx - 1) * my].im = 0.0;
        }
        let want = direct_conv2(&f, &g, mx, my, None).unwrap();
        let got = explicit_conv2(&f, &g, mx, my, Backend::Optimized);
        assert!(rel_l2(&got, &want) < 1e-12);
    }

    #[test]
    fn explicit_matches_direct_tconv2() {
        let (mx, my) = (2, 4);
        let n = 2 * mx * (my + 1);
        let mut f = rand_vec(n, 15);
        let mut g = rand_vec(n, 16);
        let mut h = rand_vec(n, 17);
        for buf in [&mut f, &mut g, &mut h] {
            for j in 0..=my {
                buf[j] = c(0.0, 0.0); // kx = -mx row
            }
            for i in 0..2 * mx {
                buf[i * (my + 1) + my] = c(0.0, 0.0); // ky = my column
            }
            for k in 1..mx {
                let a = buf[(mx + k) * (my + 1)];
                let b = buf[(mx - k) * (my + 1)];
                let avg = (a + b.conj()) * 0.5;
                buf[(mx + k) * (my + 1)] = avg;
                buf[(mx - k) * (my + 1)] = avg.conj();
            }
            buf[mx * (my + 1)].im = 0.0;
        }
        let want = direct_tconv2(&f, &g, &h, mx, my, None).unwrap();
        let got = explicit_tconv2(&f, &g, &h, mx, my, Backend::Optimized);
        assert!(rel_l2(&got, &want) < 1e-11);
    }

    #[test]
    fn explicit_matches_direct_hconv3() {
        let (mx, my, mz) = (2, 2, 2);
        let n = (2 * mx - 1) * (2 * my - 1) * mz;
        let mut f = rand_vec(n, 18);
        let mut g = rand_vec(n, 19);
        // Symmetrize the stored kz = 0 plane.
        for buf in [&mut f, &mut g] {
            let rows = 2 * my - 1;
            for jx in 0..2 * mx - 1 {
                for jy in 0..rows {
                    let (rx, ry) = (2 * mx - 2 - jx, rows - 1 - jy);
                    if (jx, jy) < (rx, ry) {
                        let a = buf[(jx * rows + jy) * mz];
                        let b = buf[(rx * rows + ry) * mz];
                        let avg = (a + b.conj()) * 0.5;
                        buf[(jx * rows + jy) * mz] = avg;
                        buf[(rx * rows + ry) * mz] = avg.conj();
                    }
                }
            }
            buf[((mx - 1) * rows + (my - 1)) * mz].im = 0.0;
        }
        let want = direct_hconv3(&f, &g, mx, my, mz, Some(1 << 24)).unwrap();
        let got = explicit_hconv3(&f, &g, mx, my, mz, Backend::Optimized);
        assert!(rel_l2(&got, &want) < 1e-12);
    }
}
