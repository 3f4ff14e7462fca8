//! Test-only oracles, independent of the library's solver.
#![allow(dead_code)]

use ngramsvm_core::SparseVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Dense toy SVM instance.
#[derive(Debug, Clone)]
pub struct Instance {
    pub x: Vec<Vec<f64>>,
    pub y: Vec<f64>,
    pub c: f64,
}

impl Instance {
    pub fn dim(&self) -> usize {
        self.x[0].len()
    }

    pub fn sparse(&self) -> Vec<SparseVector> {
        self.x
            .iter()
            .map(|row| SparseVector::from_dense(row))
            .collect()
    }

    pub fn objective(&self, w: &[f64]) -> f64 {
        let reg: f64 = 0.5 * w.iter().map(|v| v * v).sum::<f64>();
        let loss: f64 = self
            .x
            .iter()
            .zip(&self.y)
            .map(|(xi, yi)| {
                let m: f64 = 1.0 - yi * xi.iter().zip(w).map(|(a, b)| a * b).sum::<f64>();
                if m > 0.0 {
                    m * m
                } else {
                    0.0
                }
            })
            .sum();
        reg + self.c * loss
    }
}

const TERNARY_STEPS: usize = 80;

fn ternary<F: FnMut(f64) -> f64>(mut lo: f64, mut hi: f64, mut f: F) -> (f64, f64) {
    for _ in 0..TERNARY_STEPS {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if f(m1) <= f(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    let x = 0.5 * (lo + hi);
    (x, f(x))
}

/// Minimizes the (convex) primal by nested ternary search, one level per
/// coordinate. Partial minima of a convex function stay convex, so each
/// level is a unimodal 1-D search.
pub fn brute_force_minimize(inst: &Instance) -> Vec<f64> {
    let d = inst.dim();
    assert!((1..=3).contains(&d));
    // |w*|^2 <= 2 f(w*) <= 2 f(0) = 2 C l
    let bound = (2.0 * inst.c * inst.x.len() as f64).sqrt() + 1e-9;
    let mut w = vec![0.0; d];
    fn level(inst: &Instance, w: &mut Vec<f64>, k: usize, bound: f64) -> f64 {
        if k == w.len() {
            return inst.objective(w);
        }
        let (best, val) = ternary(-bound, bound, |v| {
            w[k] = v;
            level(inst, w, k + 1, bound)
        });
        w[k] = best;
        // re-solve inner coordinates at the chosen value
        level(inst, w, k + 1, bound);
        val
    }
    level(inst, &mut w, 0, bound);
    w
}

/// Random instance with `d <= 3` features and `n <= 6` examples.
pub fn random_instance(seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = rng.random_range(1..=3);
    let n = rng.random_range(1..=6);
    let cs = [0.1, 1.0, 10.0];
    let c = cs[rng.random_range(0..3)];
    let x = (0..n)
        .map(|_| {
            (0..d)
                .map(|_| {
                    if rng.random_range(0..4) == 0 {
                        0.0
                    } else {
                        rng.random_range(-1.0..1.0)
                    }
                })
                .collect()
        })
        .collect();
    let y = (0..n)
        .map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 })
        .collect();
    Instance { x, y, c }
}
