use nofdm_core::equalize::{IdConfig, IdEqualizer};
use nofdm_core::icimodel::CorrelationMatrix;
use nofdm_core::{TransformKind, TransformPlan};
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

fn received(n: usize, alpha: f64, sigma: f64, seed: u64) -> (Vec<f64>, Vec<f64>) {
    let plan = TransformPlan::new(TransformKind::Frct, n, alpha).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s: Vec<f64> = (0..n).map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 }).collect();
    let mut x = plan.multiplex(&s).unwrap();
    let noise = Normal::new(0.0, sigma).unwrap();
    for v in &mut x {
        *v += noise.sample(&mut rng);
    }
    (s, plan.demultiplex(&x).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn output_is_fully_decided_and_width_shrinks(seed in any::<u64>(), alpha in 0.6f64..1.0, sigma in 0.0f64..0.4) {
        let n = 64;
        let c = CorrelationMatrix::new(TransformKind::Frct, n, alpha).unwrap();
        let eq = IdEqualizer::new(IdConfig::new(20), &c).unwrap();
        let (_, r) = received(n, alpha, sigma, seed);
        let (out, trace) = eq.equalize(&r).unwrap();
        prop_assert!(out.iter().all(|v| *v == 1.0 || *v == -1.0));
        for w in trace.steps.windows(2) {
            prop_assert!(w[1].d <= w[0].d);
        }
        prop_assert_eq!(trace.steps.len(), 20);
        prop_assert_eq!(trace.steps.last().unwrap().d, 0.0);
        prop_assert!(trace.steps.iter().all(|s| s.undecided <= n));
    }
}

#[test]
fn id_beats_hard_decision_under_moderate_ici() {
    let (n, alpha) = (128, 0.85);
    let c = CorrelationMatrix::new(TransformKind::Frct, n, alpha).unwrap();
    let hard = IdEqualizer::new(IdConfig::new(0), &c).unwrap();
    let id = IdEqualizer::new(IdConfig::new(20), &c).unwrap();
    let (mut e_hard, mut e_id) = (0, 0);
    for seed in 0..200 {
        let (s, r) = received(n, alpha, 0.25, seed);
        let count = |out: &[f64]| out.iter().zip(&s).filter(|(a, b)| a != b).count();
        e_hard += count(&hard.equalize(&r).unwrap().0);
        e_id += count(&id.equalize(&r).unwrap().0);
    }
    assert!(e_id * 2 < e_hard, "id {e_id} vs hard {e_hard}");
}
