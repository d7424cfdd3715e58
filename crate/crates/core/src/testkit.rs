//! Deterministic sample generators for tests and the verification suite.
//!
//! A tiny splitmix64 generator keeps the crate free of RNG dependencies
//! while making every check reproducible from its seed.

use crate::mat::{outer, CMat3, CVec3, C};

/// Deterministic pseudo-random source (splitmix64).
#[derive(Debug, Clone)]
pub struct Rng {
    state: u64,
}

impl Rng {
    pub fn new(seed: u64) -> Self {
        Self { state: seed.wrapping_add(0x9e37_79b9_7f4a_7c15) }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform draw from `[0, 1)`.
    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Uniform draw from `[lo, hi)`.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.unit()
    }

    /// Random normalized ket with complex components.
    pub fn ket(&mut self) -> CVec3<f64> {
        loop {
            let mut v = CVec3::new(
                C::new(self.uniform(-1.0, 1.0), self.uniform(-1.0, 1.0)),
                C::new(self.uniform(-1.0, 1.0), self.uniform(-1.0, 1.0)),
                C::new(self.uniform(-1.0, 1.0), self.uniform(-1.0, 1.0)),
            );
            let n = v.norm();
            if n > 1e-3 {
                let inv = 1.0 / n;
                for a in &mut v.a {
                    *a = a.scale(inv);
                }
                return v;
            }
        }
    }

    /// Random physical density matrix: a mixture of three random pure
    /// states with normalized weights. Hermitian, unit trace and positive
    /// semidefinite by construction.
    pub fn density(&mut self) -> CMat3<f64> {
        let w = [self.unit() + 1e-3, self.unit() + 1e-3, self.unit() + 1e-3];
        let total: f64 = w.iter().sum();
        let mut rho = CMat3::zeros();
        for wk in w {
            let ket = self.ket();
            rho = rho + outer(&ket, &ket).scale_re(wk / total);
        }
        rho.hermitized()
    }

    /// Random Hermitian matrix with unit trace but arbitrary signature.
    pub fn hermitian_unit_trace(&mut self) -> CMat3<f64> {
        let mut m = CMat3::zeros();
        for i in 0..3 {
            for j in 0..3 {
                m.m[i][j] = C::new(self.uniform(-1.0, 1.0), self.uniform(-1.0, 1.0));
            }
        }
        let mut m = m.hermitized();
        let shift = (1.0 - m.trace().re) / 3.0;
        for i in 0..3 {
            m.m[i][i] = m.m[i][i] + C::new(shift, 0.0);
        }
        m
    }
}
