//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Run with `cargo test -p nofdm-core --test acceptance`.

use std::sync::OnceLock;
use std::time::Instant;

use nofdm_core::berlab::{
    crossing, estimate_psd, run_ber_sweep, BerPoint, BerSweepResult, Crossing, IciStudy, SweepSpec,
    FEC_LIMIT_7PCT,
};
use nofdm_core::capacity::{capacity_ftn, shannon_limit, CapacityParams};
use nofdm_core::icimodel::CorrelationMatrix;
use nofdm_core::modem::{rate_report, ModemConfig};
use nofdm_core::stats::antipodal_ber;
use nofdm_core::{Execution, TransformKind, TransformPlan};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn exec() -> Execution {
    Execution::with_workers(std::thread::available_parallelism().map_or(1, |n| n.get()))
}

/// BER studies run without cyclic prefix: it is irrelevant in AWGN and
/// would only shift the Eb accounting.
fn ber_base() -> ModemConfig {
    ModemConfig {
        cp_len: 0,
        ..ModemConfig::baseline(1.0)
    }
}

fn sweep(kind: TransformKind, alphas: &[f64], ebn0: &[f64], iterations: &[usize], bits: (u64, u64), min_errors: u64) -> BerSweepResult {
    let spec = SweepSpec {
        alphas: alphas.to_vec(),
        kinds: vec![kind],
        ebn0_db: ebn0.to_vec(),
        iterations: iterations.to_vec(),
        min_bits: bits.0,
        max_bits: bits.1,
        min_errors,
        seed: 2024,
        ..SweepSpec::new(ber_base())
    };
    run_ber_sweep(&spec, exec()).expect("sweep runs")
}

fn point(r: &BerSweepResult, kind: TransformKind, alpha: f64, iterations: usize, ebn0: f64) -> BerPoint {
    *r.get(kind, alpha, iterations, ebn0).expect("grid point present")
}

fn curve_crossing(r: &BerSweepResult, alpha: f64, target: f64) -> Crossing {
    let pts: Vec<(f64, f64)> = r
        .records
        .iter()
        .filter(|p| p.alpha == alpha)
        .map(|p| (p.ebn0_db, p.ber))
        .collect();
    crossing(&pts, target).expect("valid curve")
}

fn fmt_crossing(c: Crossing) -> String {
    match c {
        Crossing::At(x) => format!("{x:.2} dB"),
        Crossing::Floor => "floor".into(),
        Crossing::AllBelow => "all below".into(),
    }
}

/// α ∈ {1, 0.9, 0.8}, I = 20, around the 7% FEC threshold.
fn ber_vs_ebn0() -> &'static BerSweepResult {
    static CELL: OnceLock<BerSweepResult> = OnceLock::new();
    CELL.get_or_init(|| {
        sweep(
            TransformKind::Frct,
            &[1.0, 0.9, 0.8],
            &[3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0],
            &[20],
            (0, 2_000_000),
            500,
        )
    })
}

fn c01_orthogonal_calibration() -> Verdict {
    let t = Instant::now();
    let r = sweep(TransformKind::Frct, &[1.0], &[4.0, 6.0, 8.0], &[0], (1_000_000, 10_000_000), 1000);
    let secs = t.elapsed().as_secs_f64();
    let mut pass = secs < 60.0;
    let mut parts = Vec::new();
    for p in &r.records {
        let q = antipodal_ber(p.ebn0_db);
        let rel = (p.ber - q).abs() / q;
        pass &= rel < 0.10 && p.bits >= 1_000_000;
        parts.push(format!("{} dB: {:.3e} vs Q {:.3e} ({:.1}%, {} bits)", p.ebn0_db, p.ber, q, 100.0 * rel, p.bits));
    }
    verdict(pass, format!("{}; {secs:.1} s", parts.join("; ")))
}

fn c02_alpha_09_matches_orthogonal() -> Verdict {
    let r = ber_vs_ebn0();
    let (a, b) = (curve_crossing(r, 1.0, FEC_LIMIT_7PCT), curve_crossing(r, 0.9, FEC_LIMIT_7PCT));
    let pass = matches!((a, b), (Crossing::At(x), Crossing::At(y)) if (y - x).abs() < 0.5);
    verdict(pass, format!("required Eb/N0 at 3.8e-3: alpha=1 {}, alpha=0.9 {}", fmt_crossing(a), fmt_crossing(b)))
}

fn c03_alpha_08_penalty() -> Verdict {
    let r = ber_vs_ebn0();
    let (a, b) = (curve_crossing(r, 1.0, FEC_LIMIT_7PCT), curve_crossing(r, 0.8, FEC_LIMIT_7PCT));
    let (pass, gap) = match (a, b) {
        (Crossing::At(x), Crossing::At(y)) => ((y - x - 2.0).abs() <= 0.75, format!("{:.2} dB", y - x)),
        _ => (false, "undefined".into()),
    };
    verdict(pass, format!("alpha=1 {}, alpha=0.8 {}, gap {gap} (want 2.0 +/- 0.75)", fmt_crossing(a), fmt_crossing(b)))
}

fn c04_alpha_07_floor() -> Verdict {
    let ebn0: Vec<f64> = (0..=10).map(|i| 2.0 * i as f64).collect();
    let r = sweep(TransformKind::Frct, &[0.7], &ebn0, &[20], (0, 1_000_000), 200);
    let c = curve_crossing(&r, 0.7, 1e-3);
    let low = r.records.iter().map(|p| p.ber).fold(f64::MAX, f64::min);
    verdict(c == Crossing::Floor, format!("target 1e-3 -> {}; lowest BER {low:.3e}", fmt_crossing(c)))
}

fn c05_frct_vs_frht() -> Verdict {
    let pairs = [(0.9, 0.45), (0.8, 0.4), (0.7, 0.35)];
    let ct = sweep(TransformKind::Frct, &[0.9, 0.8, 0.7], &[12.0], &[20], (0, 2_000_000), 200);
    let ht = sweep(TransformKind::Frht, &[0.45, 0.4, 0.35], &[12.0], &[20], (0, 2_000_000), 200);
    let mut pass = true;
    let mut parts = Vec::new();
    for (a, h) in pairs {
        let (p, q) = (point(&ct, TransformKind::Frct, a, 20, 12.0), point(&ht, TransformKind::Frht, h, 20, 12.0));
        let separated = p.ber < q.ber && p.ci_hi < q.ci_lo;
        pass &= separated;
        parts.push(format!("FrCT {a} {:.2e} [{:.2e},{:.2e}] vs FrHT {h} {:.2e} [{:.2e},{:.2e}]", p.ber, p.ci_lo, p.ci_hi, q.ber, q.ci_lo, q.ci_hi));
    }
    let flat = sweep(TransformKind::Frht, &[0.45], &[10.0, 20.0], &[20], (0, 8_000_000), 200);
    let (b10, b20) = (
        point(&flat, TransformKind::Frht, 0.45, 20, 10.0).ber,
        point(&flat, TransformKind::Frht, 0.45, 20, 20.0).ber,
    );
    let flattens = b20 > 0.5 * b10;
    pass &= flattens;
    parts.push(format!("FrHT 0.45 BER(20)/BER(10) = {:.3} (flattening wants > 0.5)", b20 / b10));
    verdict(pass, parts.join("; "))
}

fn c06_iteration_study() -> Verdict {
    let r08 = sweep(TransformKind::Frct, &[0.8], &[20.0], &[5, 20], (0, 4_000_000), 200);
    let (i5, i20) = (point(&r08, TransformKind::Frct, 0.8, 5, 20.0), point(&r08, TransformKind::Frct, 0.8, 20, 20.0));
    let improves = i20.ber < i5.ber && i20.ci_hi < i5.ci_lo;
    let r07 = sweep(TransformKind::Frct, &[0.7], &[20.0], &[20, 40], (0, 4_000_000), 200);
    let (j20, j40) = (point(&r07, TransformKind::Frct, 0.7, 20, 20.0), point(&r07, TransformKind::Frct, 0.7, 40, 20.0));
    let factor = j20.ber / j40.ber;
    let saturates = factor <= 1.5 && factor >= 1.0 / 1.5;
    verdict(
        improves && saturates,
        format!(
            "alpha=0.8 I=5 {:.2e} [{:.2e},{:.2e}] -> I=20 {:.2e} [{:.2e},{:.2e}]; alpha=0.7 I=20 {:.2e} / I=40 {:.2e} = {factor:.2} (want within 1.5)",
            i5.ber, i5.ci_lo, i5.ci_hi, i20.ber, i20.ci_lo, i20.ci_hi, j20.ber, j40.ber
        ),
    )
}

fn c07_ici_mixture_fit() -> Verdict {
    let study = IciStudy::new(&ModemConfig::baseline(0.8), 4096, 7, exec()).expect("ici study");
    verdict(
        study.ks_distance < 0.02,
        format!("4096 symbols x 256: sigma {:.4}, KS {:.4}", study.sigma, study.ks_distance),
    )
}

fn c08_composition() -> Verdict {
    let mut worst: f64 = 0.0;
    for kind in [TransformKind::Frct, TransformKind::Frht] {
        for n in [2, 8, 64, 256] {
            for alpha in [1.0, 0.9, 0.8, 0.7] {
                let c = CorrelationMatrix::new(kind, n, alpha).unwrap();
                let plan = TransformPlan::new(kind, n, alpha).unwrap();
                let composed = plan.composition_matrix();
                for (x, y) in c.entries().iter().zip(&composed) {
                    worst = worst.max((x - y).abs());
                }
                // and through the sample-domain path, one column at a time
                for l in (0..n).step_by((n / 8).max(1)) {
                    let mut e = vec![0.0; n];
                    e[l] = 1.0;
                    let col = plan.demultiplex(&plan.multiplex(&e).unwrap()).unwrap();
                    for (k, v) in col.iter().enumerate() {
                        worst = worst.max((v - c.get(k, l)).abs());
                    }
                }
            }
        }
    }
    verdict(worst < 1e-10, format!("max |C - K^T K| = {worst:.2e}"))
}

fn c09_psd_edges() -> Verdict {
    let edge = |alpha: f64| {
        estimate_psd(&ModemConfig::baseline(alpha), 4, 11, 1024, 0.5)
            .expect("psd")
            .edge_hz(-10.0)
    };
    let e1 = edge(1.0);
    let mut pass = (e1 - 5.0e9).abs() <= 0.2e9;
    let mut parts = vec![format!("alpha=1 {:.3} GHz", e1 / 1e9)];
    for (alpha, want) in [(0.9, 4.5e9), (0.8, 4.0e9), (0.7, 3.5e9)] {
        let e = edge(alpha);
        let ratio = e / e1;
        pass &= (ratio - alpha).abs() <= 0.05 && (e - want).abs() <= 0.2e9;
        parts.push(format!("alpha={alpha} {:.3} GHz (ratio {ratio:.3})", e / 1e9));
    }
    verdict(pass, parts.join("; "))
}

fn c10_rates() -> Verdict {
    let r = rate_report(&ModemConfig::baseline(0.8));
    let gain = r.symbol_rate / r.nyquist_rate;
    let pass = (r.net_bit_rate - 8.70e9).abs() <= 0.01e9 && gain == 1.25;
    verdict(
        pass,
        format!("net rate {:.4} Gb/s (want 8.70 +/- 0.01); symbol/nyquist {gain}", r.net_bit_rate / 1e9),
    )
}

fn c11_capacity() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (mut exact_1, mut exact_08) = (0, 0);
    for _ in 0..1000 {
        let w = 10f64.powf(rng.random_range(0.0..10.0));
        let snr_db = rng.random_range(-10.0..40.0);
        let p = CapacityParams::from_snr_db(w, snr_db, 1.0);
        if capacity_ftn(&p).unwrap() == shannon_limit(&p).unwrap() {
            exact_1 += 1;
        }
        let q = CapacityParams { alpha: 0.8, ..p };
        if capacity_ftn(&q).unwrap() == 1.25 * shannon_limit(&q).unwrap() {
            exact_08 += 1;
        }
    }
    verdict(
        exact_1 == 1000 && exact_08 == 1000,
        format!("alpha=1 equal in {exact_1}/1000 draws; alpha=0.8 equals 1.25x in {exact_08}/1000"),
    )
}

fn c12_determinism() -> Verdict {
    let spec = SweepSpec {
        alphas: vec![1.0, 0.8],
        ebn0_db: vec![4.0, 8.0],
        max_bits: 200_000,
        seed: 31,
        ..SweepSpec::new(ber_base())
    };
    let csv = |e: Execution| {
        nofdm_core::berlab::render(&run_ber_sweep(&spec, e).unwrap(), nofdm_core::berlab::Format::Csv).unwrap()
    };
    let one = csv(Execution::Sequential);
    let again = csv(Execution::Sequential);
    let eight = csv(Execution::with_workers(8));
    verdict(
        one == again && one == eight,
        format!("{} CSV bytes; rerun identical: {}; 8 workers identical: {}", one.len(), one == again, one == eight),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 12] = [
        ("orthogonal calibration", c01_orthogonal_calibration),
        ("alpha=0.9 matches alpha=1 at 3.8e-3", c02_alpha_09_matches_orthogonal),
        ("alpha=0.8 about 2 dB penalty", c03_alpha_08_penalty),
        ("alpha=0.7 floors above 1e-3", c04_alpha_07_floor),
        ("FrCT beats FrHT at equal spacing", c05_frct_vs_frht),
        ("iteration count study", c06_iteration_study),
        ("ICI histogram fits two-Gaussian mixture", c07_ici_mixture_fit),
        ("correlation matrix equals kernel composition", c08_composition),
        ("spectrum edges scale with alpha", c09_psd_edges),
        ("rate accounting", c10_rates),
        ("capacity reductions", c11_capacity),
        ("determinism across workers", c12_determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let v = f();
        if !v.pass {
            failed += 1;
        }
        println!(
            "{} {:02} {name}: {} [{:.1} s]",
            if v.pass { "PASS" } else { "FAIL" },
            i + 1,
            v.detail,
            t.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
