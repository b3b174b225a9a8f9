//! Property-based and structural tests: algebraic identities of the
//! convolutions, determinism under workspace reuse, and tolerance of
//! non-contiguous work buffers.

use num_complex::Complex64;
use proptest::prelude::*;

use dealias::fft::{naive_dft, Direction, Planner};
use dealias::oracles;
use dealias::{Backend, Cconv, Hconv};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn complex_vec(len: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), len).prop_map(|v| {
        v.into_iter().map(|(re, im)| c(re, im)).collect()
    })
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

fn cconv(m: usize, f: &[Complex64], g: &[Complex64]) -> Vec<Complex64> {
    let conv = Cconv::new(Backend::Optimized, m).unwrap();
    let mut fi = f.to_vec();
    let mut gi = g.to_vec();
    let mut u = vec![c(0.0, 0.0); m];
    let mut v = u.clone();
    conv.convolve(&mut fi, &mut gi, &mut u, &mut v).unwrap();
    fi
}

fn hconv(m: usize, f: &[Complex64], g: &[Complex64]) -> Vec<Complex64> {
    let conv = Hconv::new(Backend::Optimized, m).unwrap();
    let mut fi = f.to_vec();
    let mut gi = g.to_vec();
    fi[0].im = 0.0;
    gi[0].im = 0.0;
    let mut u = vec![c(0.0, 0.0); m / 2 + 1];
    let mut v = u.clone();
    conv.convolve(&mut fi, &mut gi, &mut u, &mut v).unwrap();
    fi
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn complex_convolution_matches_direct_sum(
        m in 1usize..33,
        seed in any::<u64>(),
    ) {
        let mut state = seed | 1;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
            ((state >> 11) as f64) / ((1u64 << 53) as f64) * 2.0 - 1.0
        };
        let f: Vec<Complex64> = (0..m).map(|_| c(next(), next())).collect();
        let g: Vec<Complex64> = (0..m).map(|_| c(next(), next())).collect();
        let got = cconv(m, &f, &g);
        let want = oracles::direct_cconv(&f, &g, None).unwrap();
        prop_assert!(rel_l2(&got, &want) < 1e-12);
    }

    #[test]
    fn complex_convolution_is_commutative(f in complex_vec(24), g in complex_vec(24)) {
        let fg = cconv(24, &f, &g);
        let gf = cconv(24, &g, &f);
        prop_assert!(rel_l2(&fg, &gf) < 1e-13);
    }

    #[test]
    fn complex_convolution_is_linear(
        f1 in complex_vec(16),
        f2 in complex_vec(16),
        g in complex_vec(16),
        alpha in -2.0f64..2.0,
    ) {
        let combined: Vec<Complex64> = f1
            .iter()
            .zip(&f2)
            .map(|(a, b)| alpha * a + b)
            .collect();
        let lhs = cconv(16, &combined, &g);
        let r1 = cconv(16, &f1, &g);
        let r2 = cconv(16, &f2, &g);
        let rhs: Vec<Complex64> = r1.iter().zip(&r2).map(|(a, b)| alpha * a + b).collect();
        prop_assert!(rel_l2(&lhs, &rhs) < 1e-12);
    }

    #[test]
    fn hermitian_convolution_is_commutative(f in complex_vec(16), g in complex_vec(16)) {
        let fg = hconv(16, &f, &g);
        let gf = hconv(16, &g, &f);
        prop_assert!(rel_l2(&fg, &gf) < 1e-12);
    }

    #[test]
    fn delta_is_the_convolution_identity(f in complex_vec(20)) {
        let mut delta = vec![c(0.0, 0.0); 20];
        delta[0] = c(1.0, 0.0);
        let got = cconv(20, &f, &delta);
        prop_assert!(rel_l2(&got, &f) < 1e-13);
    }

    #[test]
    fn forward_after_backward_is_identity_for_plain_ffts(f in complex_vec(27)) {
        let spectrum = naive_dft(&f, Direction::Backward);
        let back = naive_dft(&spectrum, Direction::Forward);
        let scaled: Vec<Complex64> = back.iter().map(|x| x / 27.0).collect();
        prop_assert!(rel_l2(&scaled, &f) < 1e-12);
    }
}

#[test]
fn convolver_reuse_is_bit_deterministic() {
    let m = 32;
    let conv = Cconv::new(Backend::Optimized, m).unwrap();
    let f0: Vec<Complex64> = (0..m).map(|k| c(k as f64 * 0.1 - 1.0, 0.3 - k as f64 * 0.05)).collect();
    let g0: Vec<Complex64> = (0..m).map(|k| c((k as f64).sin(), (k as f64).cos())).collect();
    let mut u = vec![c(0.0, 0.0); m];
    let mut v = u.clone();
    let run = |u: &mut Vec<Complex64>, v: &mut Vec<Complex64>| {
        let mut f = f0.clone();
        let mut g = g0.clone();
        conv.convolve(&mut f, &mut g, u, v).unwrap();
        f
    };
    let first = run(&mut u, &mut v);
    // Leave u/v dirty between runs: results must not depend on their
    // previous contents.
    let second = run(&mut u, &mut v);
    assert_eq!(first, second);
}

#[test]
fn work_buffers_need_not_be_contiguous_with_the_data() {
    let m = 16;
    let conv = Cconv::new(Backend::Optimized, m).unwrap();
    let f0: Vec<Complex64> = (0..m).map(|k| c(1.0 / (k + 1) as f64, -0.2)).collect();
    let g0: Vec<Complex64> = (0..m).map(|k| c(0.5, (k as f64).sqrt())).collect();

    let mut f = f0.clone();
    let mut g = g0.clone();
    let mut u = vec![c(0.0, 0.0); m];
    let mut v = vec![c(0.0, 0.0); m];
    conv.convolve(&mut f, &mut g, &mut u, &mut v).unwrap();

    // Same convolution with both work vectors carved out of one arena with
    // a deliberate gap between them.
    let mut arena = vec![c(7.0, 7.0); 3 * m];
    let (ua, rest) = arena.split_at_mut(m);
    let (_gap, va) = rest.split_at_mut(m);
    let mut f2 = f0.clone();
    let mut g2 = g0.clone();
    conv.convolve(&mut f2, &mut g2, ua, va).unwrap();
    assert_eq!(f, f2);
}

#[test]
fn naive_and_optimized_backends_agree() {
    let m = 18;
    let f: Vec<Complex64> = (0..m).map(|k| c((k as f64).cos(), 0.1 * k as f64)).collect();
    let g: Vec<Complex64> = (0..m).map(|k| c(0.3, (k as f64) * 0.2 - 1.0)).collect();
    let run = |backend: Backend| {
        let conv = Cconv::new(backend, m).unwrap();
        let mut fi = f.clone();
        let mut gi = g.clone();
        let mut u = vec![c(0.0, 0.0); m];
        let mut v = u.clone();
        conv.convolve(&mut fi, &mut gi, &mut u, &mut v).unwrap();
        fi
    };
    let naive = run(Backend::Naive);
    let optimized = run(Backend::Optimized);
    assert!(rel_l2(&naive, &optimized) < 1e-12);
}

#[test]
fn strided_plans_transform_each_column_independently() {
    let (n, width) = (8usize, 3usize);
    let planner = Planner::new(Backend::Optimized);
    let plan = planner
        .c2c_strided(n, Direction::Backward, width, width, 1)
        .unwrap();
    let mut data: Vec<Complex64> = (0..n * width)
        .map(|i| c(i as f64 * 0.01, -(i as f64) * 0.02))
        .collect();
    let original = data.clone();
    plan.execute(&mut data).unwrap();
    for col in 0..width {
        let column: Vec<Complex64> = (0..n).map(|r| original[r * width + col]).collect();
        let want = naive_dft(&column, Direction::Backward);
        for r in 0..n {
            assert!((data[r * width + col] - want[r]).norm() < 1e-10);
        }
    }
}
