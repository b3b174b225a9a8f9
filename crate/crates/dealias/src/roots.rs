//! Unit-root tables with O(√m) storage.
//!
//! A `ZetaTable` serves ζ_N^k = exp(2πik/N) for k = 0..m-1 using two short
//! tables H_a = ζ_N^{as} and L_b = ζ_N^b with s = ⌊√m⌋, so a lookup costs a
//! single complex multiply. Entries are evaluated directly from the
//! exponential rather than by a running recursion.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Two-level factorization table for the roots of unity ζ_N^k, k = 0..m-1.
#[derive(Debug, Clone, PartialEq)]
pub struct ZetaTable {
    n: usize,
    m: usize,
    s: usize,
    coarse: Vec<Complex64>,
    fine: Vec<Complex64>,
}

fn unit_root(n: usize, k: usize) -> Complex64 {
    // k = 0 must be exactly 1, and from_polar already guarantees that.
    Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * (k as f64) / (n as f64))
}

impl ZetaTable {
    /// Builds the table serving ζ_N^k for k = 0..m-1. Requires 1 ≤ m ≤ N.
    pub fn new(n: usize, m: usize) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::InvalidArgument(
                "zeta table sizes must be positive".into(),
            ));
        }
        if m > n {
            return Err(Error::InvalidArgument(format!(
                "zeta table: m = {m} exceeds N = {n}"
            )));
        }
        let s = (m as f64).sqrt().floor() as usize;
        let s = s.max(1);
        let coarse_len = m.div_ceil(s);
        let coarse = (0..coarse_len).map(|a| unit_root(n, a * s)).collect();
        let fine = (0..s).map(|b| unit_root(n, b)).collect();
        Ok(Self {
            n,
            m,
            s,
            coarse,
            fine,
        })
    }

    /// Full transform size N the table was built for.
    pub fn transform_size(&self) -> usize {
        self.n
    }

    /// Number of exponents served (k < m).
    pub fn len(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// ζ_N^k via one complex multiply. Panics in debug builds on k ≥ m;
    /// use [`ZetaTable::checked`] for a validating lookup.
    #[inline]
    pub fn zeta(&self, k: usize) -> Complex64 {
        debug_assert!(k < self.m, "zeta exponent {k} out of range (m = {})", self.m);
        self.coarse[k / self.s] * self.fine[k % self.s]
    }

    /// ζ_N^{-k}; negative exponents come from conjugation of unit roots.
    #[inline]
    pub fn zeta_conj(&self, k: usize) -> Complex64 {
        self.zeta(k).conj()
    }

    /// Validating lookup.
    pub fn checked(&self, k: usize) -> Result<Complex64> {
        if k >= self.m {
            return Err(Error::InvalidArgument(format!(
                "zeta exponent {k} out of range (m = {})",
                self.m
            )));
        }
        Ok(self.zeta(k))
    }
}
