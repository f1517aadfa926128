use nsaa::algorithms::ProximalGradient;
use nsaa::anderson::safeguarded_step;
use nsaa::harness::initial_point;
use nsaa::manifold::{identification_iter, pattern_of, SignPattern, Symbol};
use nsaa::problems::gen_lasso;
use nsaa::{AaConfig, AaState};
use proptest::prelude::*;

fn patterns() -> impl Strategy<Value = Vec<SignPattern>> {
    let sym = prop_oneof![Just(Symbol::Neg), Just(Symbol::Zero), Just(Symbol::Pos)];
    let pat = prop::collection::vec(sym, 2).prop_map(SignPattern);
    prop::collection::vec(pat, 0..40)
}

proptest! {
    #[test]
    fn larger_window_never_identifies_earlier(ps in patterns(), w in 1usize..12, extra in 0usize..12) {
        let small = identification_iter(&ps, w);
        let large = identification_iter(&ps, w + extra);
        if let Some(l) = large {
            prop_assert!(small.is_some_and(|s| s <= l));
        }
    }

    #[test]
    fn identified_suffix_is_constant(ps in patterns(), w in 1usize..6) {
        if let Some(k) = identification_iter(&ps, w) {
            prop_assert!(ps[k..].iter().all(|p| *p == ps[ps.len() - 1]));
            prop_assert!(ps.len() - k >= w);
            prop_assert!(k == 0 || ps[k - 1] != ps[k]);
        }
    }
}

#[test]
fn converged_lasso_support_within_true_support() {
    let runs = 20;
    let mut contained = 0;
    for seed in 0..runs {
        let inst = gen_lasso(150, 200, 0.1, 1e-4, seed).unwrap();
        let op = ProximalGradient::new(inst.smooth(), inst.regularizer(), 1.0 / inst.lipschitz());
        let cfg = AaConfig::new(10);
        let mut st = AaState::new(&op, initial_point(seed, 200)).unwrap();
        for _ in 0..20_000 {
            if st.residual_norm() <= 1e-10 {
                break;
            }
            safeguarded_step(&op, &mut st, &cfg).unwrap();
        }
        assert!(st.residual_norm() <= 1e-10, "seed {seed} did not converge");
        let pat = pattern_of(st.current_h(), 1e-9, None);
        if pat.support().iter().all(|i| inst.x_true[*i] != 0.0) {
            contained += 1;
        }
    }
    assert!(contained * 10 >= runs * 9, "{contained}/{runs} contained");
}
