//! Fixed benchmark instances shared by the criterion benches.

use nsaa::algorithms::ProximalGradient;
use nsaa::problems::{gen_lasso, LassoInstance, LeastSquares};
use nsaa::prox::L1Norm;

/// Seed used by every fixture.
pub const SEED: u64 = 7;

pub fn lasso(m: usize, n: usize) -> LassoInstance {
    gen_lasso(m, n, 0.01, 1e-4, SEED).expect("valid benchmark sizes")
}

/// ISTA operator with `β = 1/L` on a fresh Lasso instance.
pub fn ista(m: usize, n: usize) -> ProximalGradient<LeastSquares, L1Norm> {
    let inst = lasso(m, n);
    ProximalGradient::new(inst.smooth(), inst.regularizer(), 1.0 / inst.lipschitz())
}
