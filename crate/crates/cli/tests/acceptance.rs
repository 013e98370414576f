//! Acceptance suite: one PASS/FAIL line per criterion. Exits nonzero if any
//! criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use multisim_core::experiments::{
    equisimilarity_extents, jaccard_gradient_simplified, run_angle_sweep, run_displacement,
    run_sensitivity, run_strictness, run_width, Experiment, SweepConfig,
};
use multisim_core::neuron::{decision_region, Grid2d, MultisetNeuron};
use multisim_core::simkernel::{
    coincidence, cosine, interiority, power_sharpen, vector_jaccard, FeatureVector, Method,
    SimilarityParams,
};
use multisim_core::stimuli::{gaussian_pattern, scale_intensity, GaussianSpec};
use multisim_core::{build_segmenter, segment, ColorImage, Mask, SeedSample};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    check(elapsed < limit, || {
        format!(
            "took {:.2}s, limit {:.0}s",
            elapsed.as_secs_f64(),
            limit.as_secs_f64()
        )
    })
}

fn fv(v: Vec<f64>) -> FeatureVector {
    FeatureVector::new(v).expect("finite, non-empty")
}

/// Random vector of length `n` in [−10, 10] with about a fifth of the
/// entries set to exactly zero. Never all-zero.
fn random_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n)
            .map(|_| {
                if rng.random_bool(0.2) {
                    0.0
                } else {
                    rng.random_range(-10.0..10.0)
                }
            })
            .collect();
        if v.iter().any(|&a| a != 0.0) {
            return v;
        }
    }
}

fn random_pair(rng: &mut ChaCha8Rng) -> (Vec<f64>, Vec<f64>) {
    let n = rng.random_range(1..=64);
    (random_vec(rng, n), random_vec(rng, n))
}

fn jaccard() -> SimilarityParams {
    SimilarityParams::new(Method::RealJaccard)
}

fn coinc() -> SimilarityParams {
    SimilarityParams::new(Method::Coincidence)
}

fn ac1_identities() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..1000 {
        let n = rng.random_range(1..=64);
        let v = fv(random_vec(&mut rng, n));
        let j = vector_jaccard(&v, &v, &jaccard()).unwrap();
        let i = interiority(&v, &v).unwrap();
        let c = coincidence(&v, &v, &coinc()).unwrap();
        check(j == 1.0 && i == 1.0 && c == 1.0, || {
            format!("self-similarity J={j} I={i} C={c} for {:?}", v.as_slice())
        })?;
    }
    let tol = 1e-12;
    for _ in 0..1000 {
        let (x, y) = random_pair(&mut rng);
        let (x, y) = (fv(x), fv(y));
        let j = vector_jaccard(&x, &y, &jaccard()).unwrap();
        let i = interiority(&x, &y).unwrap();
        let c = coincidence(&x, &y, &coinc()).unwrap();
        check(j.abs() <= 1.0 + tol && c.abs() <= 1.0 + tol, || {
            format!("|J|={j} |C|={c}")
        })?;
        check((-tol..=1.0 + tol).contains(&i), || {
            format!("I={i} outside [0, 1]")
        })?;
        check(j < 0.0 || c <= j + tol, || format!("C={c} > J={j}"))?;
    }
    within(start.elapsed(), Duration::from_secs(1))?;
    Ok(format!(
        "2000 vectors in {:.0} ms",
        start.elapsed().as_secs_f64() * 1e3
    ))
}

fn ac2_invariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let (x, y) = random_pair(&mut rng);
        let base = vector_jaccard(&fv(x.clone()), &fv(y.clone()), &jaccard()).unwrap();
        for k in [0.1, 1.0, 7.3] {
            let kx = fv(x.iter().map(|a| k * a).collect());
            let ky = fv(y.iter().map(|a| k * a).collect());
            let s = vector_jaccard(&kx, &ky, &jaccard()).unwrap();
            worst = worst.max((s - base).abs());
        }
        let mut perm: Vec<usize> = (0..x.len()).collect();
        perm.shuffle(&mut rng);
        let px = fv(perm.iter().map(|&i| x[i]).collect());
        let py = fv(perm.iter().map(|&i| y[i]).collect());
        worst = worst.max((vector_jaccard(&px, &py, &jaccard()).unwrap() - base).abs());
    }
    check(worst <= 1e-12, || format!("max deviation {worst:e}"))?;
    Ok(format!("max deviation {worst:.1e}"))
}

fn naive(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let (mut num, mut den, mut mins, mut sx, mut sy) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for i in 0..x.len() {
        let (a, b) = (x[i], y[i]);
        let lo = a.abs().min(b.abs());
        let same = (a >= 0.0) == (b >= 0.0);
        num += if same { lo } else { -lo };
        den += a.abs().max(b.abs());
        mins += lo;
        sx += a.abs();
        sy += b.abs();
    }
    let j = num / den;
    let i = mins / sx.max(sy);
    (j, i, j * i)
}

fn ac3_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst: f64 = 0.0;
    for _ in 0..10_000 {
        let (x, y) = random_pair(&mut rng);
        let (nj, ni, nc) = naive(&x, &y);
        let (fx, fy) = (fv(x), fv(y));
        let j = vector_jaccard(&fx, &fy, &jaccard()).unwrap();
        let i = interiority(&fx, &fy).unwrap();
        let c = coincidence(&fx, &fy, &coinc()).unwrap();
        worst = worst
            .max((j - nj).abs())
            .max((i - ni).abs())
            .max((c - nc).abs());
    }
    check(worst <= 1e-12, || format!("max deviation {worst:e}"))?;
    Ok(format!("10000 pairs, max deviation {worst:.1e}"))
}

fn ac4_intensity_law() -> Outcome {
    let spec = GaussianSpec::centered(200, 200, 100.0).unwrap();
    let g = gaussian_pattern(200, 200, &spec).unwrap();
    let mut worst: f64 = 0.0;
    for k in [0.25, 0.5, 2.0, 3.0] {
        let kg = scale_intensity(&g, k).unwrap();
        let (a, b) = (kg.features(), g.features());
        let j = vector_jaccard(a, b, &jaccard()).unwrap();
        let c = coincidence(a, b, &coinc()).unwrap();
        let cc = cosine(a, b).unwrap();
        let want = f64::min(k, 1.0) / f64::max(k, 1.0);
        check((j - want).abs() <= 1e-9, || {
            format!("k={k}: J={j}, want {want}")
        })?;
        check((c - j * j).abs() <= 1e-9, || {
            format!("k={k}: C={c}, J²={}", j * j)
        })?;
        check((cc - 1.0).abs() <= 1e-12, || format!("k={k}: cosine={cc}"))?;
        worst = worst.max((j - want).abs()).max((c - j * j).abs());
    }
    Ok(format!(
        "k in {{0.25, 0.5, 2, 3}}, max deviation {worst:.1e}"
    ))
}

fn r_squared(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    sxy * sxy / (sxx * syy)
}

fn ac5_width() -> Outcome {
    let mut cfg = SweepConfig::for_experiment(Experiment::Width);
    cfg.methods = vec![jaccard(), SimilarityParams::new(Method::Interiority)];
    // σ from 5 to 100 px in 0.1 px steps.
    cfg.values = (50..=1000).map(|i| i as f64 / 10.0).collect();
    let t = run_width(&cfg).unwrap();
    let j = t.curve("jaccard");
    let i = t.curve("interiority");

    let mut failures = Vec::new();
    let worst_i = i.iter().map(|v| (v - 1.0).abs()).fold(0.0, f64::max);
    if worst_i > 1e-9 {
        let (at, min_i) = t
            .series("interiority")
            .into_iter()
            .map(|(s, m, _)| (s, m))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        failures.push(format!(
            "interiority departs from 1 by up to {worst_i:.3} (I={min_i:.4} at σ={at})"
        ));
    }
    if !j.windows(2).all(|w| w[1] > w[0]) {
        failures.push("jaccard not increasing".into());
    }
    let r2 = r_squared(&cfg.values, &j);
    if r2 < 0.99 {
        failures.push(format!("jaccard R²={r2:.5}"));
    }
    let end = *j.last().unwrap();
    if (end - 1.0).abs() > 1e-12 {
        failures.push(format!("J(σ=100)={end}"));
    }
    let summary = format!("jaccard R²={r2:.5} over {} widths, J(100)={end}", j.len());
    if failures.is_empty() {
        Ok(summary)
    } else {
        Err(format!("{}; {summary}", failures.join("; ")))
    }
}

fn ac6_displacement() -> Outcome {
    let t = run_displacement(&SweepConfig::for_experiment(Experiment::Displacement)).unwrap();
    for m in t.methods() {
        let v = t.get(0.0, m).unwrap().mean;
        check(v == 1.0, || format!("{m} at displacement 0 is {v}"))?;
    }
    for s in 2..=12 {
        let at = |m| t.get(s as f64, m).unwrap().mean;
        let (c, j, x) = (at("coincidence"), at("jaccard"), at("crosscorr"));
        check(c < j && j < x, || format!("step {s}: C={c} J={j} cos={x}"))?;
    }
    let at = |m| t.get(12.0, m).unwrap().mean;
    Ok(format!(
        "step 12: C={:.4} < J={:.4} < cos={:.4}",
        at("coincidence"),
        at("jaccard"),
        at("crosscorr")
    ))
}

fn ac7_strictness() -> Outcome {
    let ds = [1.0, 3.0, 5.0, 7.0, 9.0, 11.0];
    let mut worst: f64 = 0.0;
    for base in [
        Experiment::Displacement,
        Experiment::Intensity,
        Experiment::Width,
    ] {
        let cfg = SweepConfig::for_experiment(base);
        let t = run_strictness(base, &cfg, &ds).unwrap();
        let labels = t
            .methods()
            .into_iter()
            .map(String::from)
            .collect::<Vec<_>>();
        let d1 = t.curve(&labels[0]);
        let curves: Vec<Vec<f64>> = labels.iter().map(|l| t.curve(l)).collect();
        for (d, curve) in ds.iter().zip(&curves) {
            for (i, &v) in curve.iter().enumerate() {
                let want = power_sharpen(d1[i], *d);
                worst = worst.max((v - want).abs());
            }
        }
        check(worst <= 1e-12, || {
            format!("{base}: deviation from power law {worst:e}")
        })?;
        for i in 0..d1.len() {
            if d1[i] > 0.0 && d1[i] < 1.0 {
                for k in 1..curves.len() {
                    check(curves[k][i] <= curves[k - 1][i], || {
                        format!(
                            "{base}: point {i} increases from D={} to D={}",
                            ds[k - 1],
                            ds[k]
                        )
                    })?;
                }
            }
        }
    }
    Ok(format!("3 sweeps × 6 exponents, max deviation {worst:.1e}"))
}

fn ac8_sensitivity() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let x: Vec<f64> = (0..100).map(|_| rng.random_range(1.0..10.0)).collect();
        let y: Vec<f64> = x.iter().map(|a| a + rng.random_range(0.5..3.0)).collect();
        let (fx, fy) = (fv(x.clone()), fv(y));
        let i = rng.random_range(0..100);
        let h = 1e-6;
        let mut xp = x;
        xp[i] += h;
        let j0 = vector_jaccard(&fx, &fy, &jaccard()).unwrap();
        let j1 = vector_jaccard(&fv(xp), &fy, &jaccard()).unwrap();
        let analytic = jaccard_gradient_simplified(&fy);
        worst = worst.max(((j1 - j0) / h - analytic).abs() / analytic);
    }
    check(worst < 1e-6, || {
        format!("finite-difference relative error {worst:e}")
    })?;

    let cfg = SweepConfig::for_experiment(Experiment::Sensitivity);
    let t = run_sensitivity(&cfg).unwrap();
    for &d in cfg.values.iter().filter(|&&d| d != 0.0) {
        let e = t.get(d, "euclidean").unwrap();
        let j = t.get(d, "jaccard").unwrap();
        check(e.mean > j.mean && e.std > j.std, || {
            format!(
                "δ={d}: euclidean {:.3e}±{:.3e} vs jaccard {:.3e}±{:.3e}",
                e.mean, e.std, j.mean, j.std
            )
        })?;
    }
    within(start.elapsed(), Duration::from_secs(60))?;
    let last = *cfg.values.last().unwrap();
    let (e, j) = (
        t.get(last, "euclidean").unwrap(),
        t.get(last, "jaccard").unwrap(),
    );
    Ok(format!(
        "fd error {worst:.1e}; at δ={last}: euclidean {:.2e} vs jaccard {:.2e}; {:.1}s",
        e.mean,
        j.mean,
        start.elapsed().as_secs_f64()
    ))
}

fn ac9_equisimilarity() -> Outcome {
    let r = fv(vec![1.0, 2.0]);
    for d in [0.3, 0.5, 0.8, 0.95, 0.99] {
        let x = equisimilarity_extents(&r, d).unwrap();
        check((x.e / x.c - d).abs() <= 1e-12, || {
            format!("d={d}: e/c={}", x.e / x.c)
        })?;
        for k in [0.5, 2.0, 7.3] {
            let s = equisimilarity_extents(&fv(vec![k, 2.0 * k]), d).unwrap();
            check(
                (s.c - k * x.c).abs() <= 1e-12 * k && (s.e - k * x.e).abs() <= 1e-12 * k,
                || format!("d={d}, κ={k}: extents do not scale"),
            )?;
        }
    }

    let level = 0.95;
    let ext = equisimilarity_extents(&r, level).unwrap();
    let grid = Grid2d::square(-4.0, 4.0, 161).unwrap();
    let neuron = MultisetNeuron::new(r.clone(), jaccard(), level).unwrap();
    let region = decision_region(&neuron, &grid).unwrap();
    let (col, row) = (grid.col_of(1.0), grid.row_of(2.0));
    let (c0, c1) = region
        .row_run(row, col)
        .ok_or("reference cell does not fire")?;
    let (r0, r1) = region
        .col_run(col, row)
        .ok_or("reference cell does not fire")?;
    let cell = grid.dx();
    let pairs = [
        ("x low", grid.x(c0), 1.0 - ext.e),
        ("x high", grid.x(c1), 1.0 + ext.c),
        ("y low", grid.y(r0), 2.0 - ext.e),
        ("y high", grid.y(r1), 2.0 + ext.c),
    ];
    for (name, got, want) in pairs {
        check((got - want).abs() <= cell, || {
            format!("{name}: grid {got} vs closed form {want}")
        })?;
    }
    Ok(format!(
        "T={level}: x ∈ [{:.2}, {:.2}] vs [{:.4}, {:.4}], y ∈ [{:.2}, {:.2}] vs [{:.4}, {:.4}]",
        grid.x(c0),
        grid.x(c1),
        1.0 - ext.e,
        1.0 + ext.c,
        grid.y(r0),
        grid.y(r1),
        2.0 - ext.e,
        2.0 + ext.c
    ))
}

fn ac10_angles() -> Outcome {
    let mut cfg = SweepConfig::for_experiment(Experiment::Angles);
    let t = run_angle_sweep(&cfg).unwrap();
    let cc = t.series("crosscorr");
    let co = t.series("coincidence");
    for series in [&cc, &co] {
        let peak = series.iter().max_by(|a, b| a.1.total_cmp(&b.1)).unwrap();
        check(
            (peak.0 - std::f64::consts::FRAC_PI_2).abs() < 1e-12 && (peak.1 - 1.0).abs() < 1e-12,
            || format!("peak {} at θ={}", peak.1, peak.0),
        )?;
    }
    for (a, b) in cc.iter().zip(&co) {
        check(a.1 >= b.1 - 1e-12, || {
            format!("θ={}: cosine {} < coincidence {}", a.0, a.1, b.1)
        })?;
    }
    cfg.values = vec![std::f64::consts::FRAC_PI_4];
    let q = run_angle_sweep(&cfg).unwrap();
    let (a, b) = (q.curve("crosscorr")[0], q.curve("coincidence")[0]);
    check(a > b, || format!("π/4: cosine {a} vs coincidence {b}"))?;
    Ok(format!(
        "181 angles; at π/4 cosine {a:.4} > coincidence {b:.4}"
    ))
}

const SIZE: usize = 64;

fn synthetic_image() -> ColorImage {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let pixels = (0..SIZE * SIZE)
        .map(|k| {
            let base = if k % SIZE < SIZE / 2 {
                [0.8, 0.2, 0.2]
            } else {
                [0.2, 0.3, 0.8]
            };
            base.map(|c: f64| (c + 0.1 * (rng.random::<f64>() - 0.5)).clamp(0.0, 1.0))
        })
        .collect();
    ColorImage::new(SIZE, SIZE, pixels).unwrap()
}

/// Labels every pixel by direct comparison with the seed windows.
fn brute_force_mask(img: &ColorImage, seeds: &[SeedSample], threshold: f64) -> Mask {
    let window = |x: usize, y: usize| -> Vec<f64> {
        let mut v = Vec::new();
        for dy in -1isize..=1 {
            for dx in -1isize..=1 {
                let xx = (x as isize + dx).clamp(0, SIZE as isize - 1) as usize;
                let yy = (y as isize + dy).clamp(0, SIZE as isize - 1) as usize;
                v.extend(img.get(xx, yy));
            }
        }
        v
    };
    let templates: Vec<Vec<f64>> = seeds.iter().map(|s| window(s.x, s.y)).collect();
    let mut bits = Vec::with_capacity(SIZE * SIZE);
    for y in 0..SIZE {
        for x in 0..SIZE {
            let w = window(x, y);
            bits.push(templates.iter().any(|t| naive(&w, t).0 >= threshold));
        }
    }
    Mask::new(SIZE, SIZE, bits).unwrap()
}

fn ac11_segmentation() -> Outcome {
    let start = Instant::now();
    let img = synthetic_image();
    let seeds = [
        SeedSample::new(10, 12, 1),
        SeedSample::new(16, 32, 1),
        SeedSample::new(8, 50, 1),
    ];
    let threshold = 0.8;
    let seg_j = build_segmenter(&img, &seeds, jaccard(), threshold).unwrap();
    let mask_j = segment(&img, &seg_j).unwrap();
    let seg_c = build_segmenter(&img, &seeds, coinc(), threshold).unwrap();
    let mask_c = segment(&img, &seg_c).unwrap();

    check(mask_j == brute_force_mask(&img, &seeds, threshold), || {
        "mask differs from brute-force labeling".into()
    })?;
    let in_a = |k: usize| k % SIZE < SIZE / 2;
    let tp = (0..SIZE * SIZE)
        .filter(|&k| mask_j.bits()[k] && in_a(k))
        .count();
    let recall = tp as f64 / (SIZE * SIZE / 2) as f64;
    let precision = tp as f64 / mask_j.count() as f64;
    check(recall >= 0.95 && precision >= 0.95, || {
        format!("recall {recall:.4}, precision {precision:.4}")
    })?;
    check(mask_c.is_subset_of(&mask_j), || {
        "coincidence mask not within jaccard mask".into()
    })?;
    within(start.elapsed(), Duration::from_secs(10))?;
    Ok(format!(
        "recall {recall:.4}, precision {precision:.4}, coincidence {} ⊆ jaccard {} pixels",
        mask_c.count(),
        mask_j.count()
    ))
}

fn ac12_determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let kinds = [
        "displacement",
        "intensity",
        "width",
        "noise",
        "interference",
        "strictness",
        "sensitivity",
        "angles",
    ];
    for kind in kinds {
        let mut outputs = Vec::new();
        // Different thread counts: the output must not depend on scheduling.
        for (run, threads) in ["1", "4"].iter().enumerate() {
            let path = dir.path().join(format!("{kind}-{run}.csv"));
            let status = Command::new(env!("CARGO_BIN_EXE_multisim"))
                .args(["bench", kind, "--seed", "7", "--out"])
                .arg(&path)
                .env("RAYON_NUM_THREADS", threads)
                .status()
                .map_err(|e| e.to_string())?;
            check(status.success(), || format!("{kind}: exit {status}"))?;
            outputs.push(std::fs::read(&path).map_err(|e| e.to_string())?);
        }
        check(outputs[0] == outputs[1], || format!("{kind}: runs differ"))?;
        check(!outputs[0].is_empty(), || format!("{kind}: empty output"))?;
    }
    Ok(format!(
        "{} subcommands byte-identical across runs",
        kinds.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("kernel identities and bounds", ac1_identities),
        ("scale and permutation invariance", ac2_invariance),
        ("naive-loop oracle equivalence", ac3_oracle),
        ("analytic intensity law", ac4_intensity_law),
        ("width sweep", ac5_width),
        ("displacement ordering", ac6_displacement),
        ("strictness exponent", ac7_strictness),
        ("sensitivity to one component", ac8_sensitivity),
        ("equisimilarity extents", ac9_equisimilarity),
        ("angle sweep", ac10_angles),
        ("synthetic segmentation", ac11_segmentation),
        ("bench determinism", ac12_determinism),
    ];
    let mut failed = 0;
    for (n, (name, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("AC{:<2} PASS  {name}: {detail}", n + 1),
            Err(detail) => {
                failed += 1;
                println!("AC{:<2} FAIL  {name}: {detail}", n + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
