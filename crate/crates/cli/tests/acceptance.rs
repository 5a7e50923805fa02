//! Acceptance suite. Runs without the libtest harness so every criterion
//! prints a PASS/FAIL line; the process exits non-zero if any fails.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use grasspack::bounds::{eitff_bound, gerzon_limit, simplex_bound_chordal, simplex_bound_gram, welch_bound};
use grasspack::certify::{certify, is_equichordal, is_equiisoclinic, is_etf, is_tight_fusion_frame, Certificate};
use grasspack::construct::{harmonic_etf, random_frame, regular_simplex, tensor_eitff, DifferenceSet};
use grasspack::linalg::{orthonormalize, singular_values, Field, Mat, C64, DEFAULT_TOL};
use grasspack::metrics::{
    chordal_distance_sq, coherence, cross_gramian, fusion_gram, max_chordal_overlap, max_signed_inner,
    max_spectral_overlap, min_chordal_packing, pairwise_overlaps, principal_angles, projection,
    spectral_distance_sq,
};
use grasspack::optimize::{pack, Criterion, PackConfig, SmoothedObjective};
use grasspack::{FusionFrame, SubspaceBasis};

type Check = Result<String, String>;
type Entry = (&'static str, fn() -> Check);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn simplex_constructor() -> Check {
    for n in 2..=8 {
        let f = e(regular_simplex(n))?;
        let g = fusion_gram(&f);
        let target = -1.0 / (n as f64 - 1.0);
        for j in 0..n {
            for k in 0..n {
                if j != k {
                    let z = g[(j, k)];
                    ensure((z.re - target).abs() <= 1e-12 && z.im.abs() <= 1e-12, || {
                        format!("n = {n}: Gram entry ({j}, {k}) = {z}, expected {target}")
                    })?;
                }
            }
        }
        ensure(e(is_etf(&f, DEFAULT_TOL))?, || format!("n = {n}: not certified as ETF"))?;
        let packing = e(min_chordal_packing(&f))?;
        let bound = e(simplex_bound_chordal(n, n - 1, 1))?;
        ensure((packing - bound).abs() <= 1e-10, || format!("n = {n}: packing {packing} vs bound {bound}"))?;
    }
    Ok("n = 2..8".into())
}

fn harmonic_7_3() -> FusionFrame {
    harmonic_etf(&DifferenceSet::new(7, &[1, 2, 4]).unwrap()).unwrap()
}

fn welch_equality() -> Check {
    let f = harmonic_7_3();
    let coh_sq = e(coherence(&f))?.powi(2);
    let welch = e(welch_bound(7, 3))?;
    ensure((coh_sq - 2.0 / 9.0).abs() <= 1e-12, || format!("coherence^2 = {coh_sq}"))?;
    ensure((coh_sq - welch).abs() <= 1e-12, || format!("welch = {welch}"))?;
    Ok(format!("coherence^2 = {coh_sq:.15}"))
}

fn orthoplex_attainment() -> Check {
    let mut vecs: Vec<Vec<C64>> = (0..3)
        .map(|i| (0..3).map(|r| C64::new(if r == i { 1.0 } else { 0.0 }, 0.0)).collect())
        .collect();
    vecs.extend(harmonic_7_3().bases().iter().map(|b| b.mat().col(0)));
    ensure(vecs.len() == 10, || format!("{} vectors", vecs.len()))?;
    let mut worst: f64 = 0.0;
    let mut pairs = 0;
    for j in 0..vecs.len() {
        for k in j + 1..vecs.len() {
            let ip: C64 = vecs[j].iter().zip(&vecs[k]).map(|(a, b)| a.conj() * b).sum();
            worst = worst.max(ip.norm_sqr());
            pairs += 1;
        }
    }
    ensure(pairs == 45, || format!("{pairs} pairs"))?;
    let gerzon = gerzon_limit(3, Field::Complex);
    ensure(gerzon == 9 && vecs.len() > gerzon, || format!("gerzon = {gerzon}"))?;
    ensure((worst - 1.0 / 3.0).abs() <= 1e-12, || format!("max overlap {worst}"))?;
    Ok(format!("max |<phi_j, phi_k>|^2 = {worst:.15} over 45 pairs"))
}

fn tensor_fixture() -> FusionFrame {
    tensor_eitff(&regular_simplex(3).unwrap(), 2).unwrap()
}

fn tensor_eitff_check() -> Check {
    let f = tensor_fixture();
    ensure((f.d(), f.c(), f.n()) == (4, 2, 3), || "wrong shape".into())?;
    let tight = is_tight_fusion_frame(&f, 1e-10);
    let ec = e(is_equichordal(&f, 1e-10))?;
    let ei = e(is_equiisoclinic(&f, 1e-10))?;
    let bound = e(eitff_bound(3, 4, 2))?;
    ensure(tight.is_tight && (tight.alpha - 1.5).abs() <= 1e-10, || format!("tight {tight:?}"))?;
    ensure(ec.is_equichordal && (ec.beta - 0.5).abs() <= 1e-10, || format!("equichordal {ec:?}"))?;
    ensure(ei.is_equiisoclinic && (ei.sigma_sq - 0.25).abs() <= 1e-10, || format!("equiisoclinic {ei:?}"))?;
    ensure((bound - 0.25).abs() <= 1e-15, || format!("eitff bound {bound}"))?;
    Ok(format!("alpha = {}, beta = {}, sigma^2 = {}", tight.alpha, ec.beta, ei.sigma_sq))
}

fn distance_identities() -> Check {
    let mut count = 0;
    let mut worst: f64 = 0.0;
    let shapes = [(3, 1), (4, 2), (6, 3)];
    for field in [Field::Real, Field::Complex] {
        for (si, &(d, c)) in shapes.iter().enumerate() {
            let pairs = if si == 0 { 34 } else { 33 };
            for p in 0..pairs {
                let seed = 10_000 + 1000 * si as u64 + p as u64 + if field == Field::Complex { 500_000 } else { 0 };
                let f = e(random_frame(field, d, c, 2, seed))?;
                let (a, b) = (f.basis(0), f.basis(1));
                let proj = 0.5 * (&projection(a) - &projection(b)).frobenius_norm_sq();
                let gram = c as f64 - e(cross_gramian(a, b))?.frobenius_norm_sq();
                let sines: f64 = e(principal_angles(a, b))?.thetas.iter().map(|t| t.sin().powi(2)).sum();
                let lib = e(chordal_distance_sq(a, b))?;
                let spread = [proj, gram, sines, lib]
                    .iter()
                    .flat_map(|x| [proj, gram, sines].map(|y| (x - y).abs()))
                    .fold(0.0, f64::max);
                worst = worst.max(spread);
                ensure(spread <= 1e-9, || {
                    format!("{field:?} ({d},{c}) seed {seed}: {proj} {gram} {sines} {lib}")
                })?;
                count += 1;
            }
        }
    }
    ensure(count == 200, || format!("{count} pairs"))?;
    Ok(format!("200 pairs, worst disagreement {worst:.2e}"))
}

fn bound_universality() -> Check {
    let shapes = [(3, 1, 5), (4, 2, 3), (4, 2, 6), (5, 2, 8), (6, 3, 5), (3, 1, 9), (5, 1, 12), (6, 2, 10)];
    let mut min_slack = f64::INFINITY;
    for i in 0..500u64 {
        let field = if i % 2 == 0 { Field::Real } else { Field::Complex };
        let (d, c, n) = shapes[(i as usize / 2) % shapes.len()];
        let f = e(random_frame(field, d, c, n, 20_000 + i))?;
        let gram_slack = e(max_chordal_overlap(&f))? - e(simplex_bound_gram(n, d, c))?;
        let spec_slack = e(max_spectral_overlap(&f))? - e(eitff_bound(n, d, c))?;
        min_slack = min_slack.min(gram_slack).min(spec_slack);
        ensure(gram_slack >= -1e-10 && spec_slack >= -1e-10, || {
            format!("frame {i} ({field:?}, d={d}, c={c}, n={n}): slacks {gram_slack}, {spec_slack}")
        })?;
    }
    let mut min_inner = f64::INFINITY;
    for i in 0..200u64 {
        let d = 2 + (i as usize % 5);
        let n = d + 2 + (i as usize / 5) % 4;
        let f = e(random_frame(Field::Real, d, 1, n, 30_000 + i))?;
        let m = e(max_signed_inner(&f))?;
        min_inner = min_inner.min(m);
        ensure(m >= -1e-10, || format!("set {i} (d={d}, n={n}): max signed inner {m}"))?;
    }
    Ok(format!("500 frames min slack {min_slack:.3e}; 200 sets min max-inner {min_inner:.3e}"))
}

fn timed_pack(d: usize, c: usize, cfg: &PackConfig) -> Result<(f64, Duration), String> {
    let start = Instant::now();
    let r = e(pack(Field::Real, d, c, 3, cfg))?;
    Ok((r.achieved, start.elapsed()))
}

fn optimizer_recovery() -> Check {
    let limit = Duration::from_secs(60);
    let (a1, t1) = timed_pack(2, 1, &PackConfig::default())?;
    let target1 = e(welch_bound(3, 2))? + 1e-4;
    ensure(a1 <= target1 && t1 < limit, || format!("lines: achieved {a1} in {t1:?}"))?;
    let cfg = PackConfig { criterion: Criterion::ChordalOverlap, ..PackConfig::default() };
    let (a2, t2) = timed_pack(4, 2, &cfg)?;
    ensure(a2 <= 0.5 + 1e-3 && t2 < limit, || format!("planes: achieved {a2} in {t2:?}"))?;
    Ok(format!("lines {a1:.10} in {t1:.2?}; planes {a2:.10} in {t2:.2?}"))
}

fn finite_difference(obj: &SmoothedObjective, mats: &[Mat], h: f64) -> Vec<Mat> {
    let mut out = Vec::with_capacity(mats.len());
    for (j, m) in mats.iter().enumerate() {
        let mut g = Mat::zeros(m.rows(), m.cols(), m.field());
        let dirs: &[C64] = match m.field() {
            Field::Real => &[C64::new(1.0, 0.0)],
            Field::Complex => &[C64::new(1.0, 0.0), C64::new(0.0, 1.0)],
        };
        for r in 0..m.rows() {
            for col in 0..m.cols() {
                for &dir in dirs {
                    let eval = |sign: f64| {
                        let mut ms = mats.to_vec();
                        let mut data = ms[j].entries().to_vec();
                        data[r * m.cols() + col] += dir * (sign * h);
                        ms[j] = Mat::from_complex(m.rows(), m.cols(), data, m.field()).unwrap();
                        obj.value(&ms)
                    };
                    g[(r, col)] += dir * ((eval(1.0) - eval(-1.0)) / (2.0 * h));
                }
            }
        }
        out.push(g);
    }
    out
}

fn gradient_check() -> Check {
    let mut worst: f64 = 0.0;
    for i in 0..20u64 {
        let criterion = if i % 2 == 0 { Criterion::ChordalOverlap } else { Criterion::SpectralOverlap };
        let field = if (i / 2) % 2 == 0 { Field::Real } else { Field::Complex };
        let (d, c, n) = [(3, 1, 4), (4, 2, 3), (5, 2, 4)][(i as usize / 4) % 3];
        let obj = PackConfig { criterion, ..PackConfig::default() }.objective();
        let f = e(random_frame(field, d, c, n, 40_000 + i))?;
        let mats: Vec<Mat> = f.bases().iter().map(|b| b.mat().clone()).collect();
        let (_, grad) = obj.value_and_gradient(&mats);
        let fd = finite_difference(&obj, &mats, 1e-6);
        let diff: f64 = fd.iter().zip(&grad).map(|(x, y)| (x - y).frobenius_norm_sq()).sum();
        let norm: f64 = grad.iter().map(Mat::frobenius_norm_sq).sum();
        let rel = (diff / norm).sqrt();
        worst = worst.max(rel);
        ensure(rel < 1e-5, || format!("instance {i} ({criterion:?}, {field:?}): relative error {rel}"))?;
    }
    Ok(format!("20 instances, worst relative error {worst:.2e}"))
}

fn random_unitary(field: Field, n: usize, seed: u64) -> Mat {
    let f = random_frame(field, n, n, 1, seed).unwrap();
    orthonormalize(f.basis(0).mat()).unwrap()
}

fn transform(f: &FusionFrame, seed: u64, left: bool) -> FusionFrame {
    let global = random_unitary(f.field(), f.d(), seed);
    let bases = f
        .bases()
        .iter()
        .enumerate()
        .map(|(j, b)| {
            let m = if left {
                global.matmul(b.mat())
            } else {
                b.mat().matmul(&random_unitary(f.field(), f.c(), seed * 1000 + j as u64))
            };
            SubspaceBasis::new(m).unwrap()
        })
        .collect();
    FusionFrame::new(f.field(), bases).unwrap()
}

/// Every scalar the library reports for a frame, in a fixed order.
fn fingerprint(f: &FusionFrame) -> Result<(Vec<f64>, Vec<bool>), String> {
    let mut xs = Vec::new();
    for p in e(pairwise_overlaps(f))? {
        xs.extend([p.frobenius_sq, p.spectral_sq]);
        let (a, b) = (f.basis(p.j), f.basis(p.k));
        xs.extend(e(principal_angles(a, b))?.thetas);
        xs.extend([e(chordal_distance_sq(a, b))?, e(spectral_distance_sq(a, b))?]);
        xs.extend(e(singular_values(&e(cross_gramian(a, b))?))?);
    }
    xs.extend(e(singular_values(&grasspack::metrics::fusion_frame_operator(f)))?);
    let c: Certificate = e(certify(f, DEFAULT_TOL))?;
    xs.extend([c.tight_residual, c.beta, c.equichordal_deviation, c.sigma_sq, c.equiisoclinic_deviation]);
    xs.extend([c.simplex_gap, c.eitff_gap, c.alpha.unwrap_or(-1.0), c.orthoplex_gap.unwrap_or(-1.0)]);
    let flags = vec![c.is_tight, c.is_equichordal, c.is_equiisoclinic, c.is_ectff, c.is_eitff];
    Ok((xs, flags))
}

fn invariance() -> Check {
    let mut frames = vec![
        regular_simplex(4).unwrap(),
        tensor_fixture(),
        tensor_eitff(&harmonic_7_3(), 2).unwrap(),
        harmonic_7_3(),
    ];
    for (i, (field, d, c, n)) in
        [(Field::Real, 4, 2, 3), (Field::Complex, 5, 2, 6), (Field::Real, 6, 3, 4), (Field::Complex, 3, 1, 5)]
            .into_iter()
            .enumerate()
    {
        frames.push(random_frame(field, d, c, n, 50_000 + i as u64).unwrap());
    }
    let mut worst: f64 = 0.0;
    for (i, f) in frames.iter().enumerate() {
        let (base, base_flags) = fingerprint(f)?;
        for seed in 0..3u64 {
            for left in [false, true] {
                let g = transform(f, 60_000 + 10 * i as u64 + seed, left);
                let (xs, flags) = fingerprint(&g)?;
                ensure(flags == base_flags, || format!("frame {i}: certificate flags changed"))?;
                for (a, b) in base.iter().zip(&xs) {
                    worst = worst.max((a - b).abs());
                }
                ensure(worst <= 1e-10, || format!("frame {i}: drift {worst:.3e} (left = {left})"))?;
            }
        }
    }
    Ok(format!("{} frames, worst drift {worst:.2e}", frames.len()))
}

fn cli(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_grasspack"))
        .args(args)
        .output()
        .expect("cli binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn round_trip(path: &Path, construct_args: &[&str], expected: &FusionFrame) -> Result<(), String> {
    let p = path.to_str().unwrap();
    let mut args = vec!["construct", "--out", p];
    args.extend_from_slice(construct_args);
    let (code, _, err) = cli(&args);
    ensure(code == 0, || format!("construct {construct_args:?} exited {code}: {err}"))?;
    let back = e(grasspack_cli::frame_file::read(path, DEFAULT_TOL))?;
    ensure(&back == expected, || format!("{construct_args:?}: frame changed on disk"))?;
    let direct = e(certify(expected, DEFAULT_TOL))?;
    ensure(e(certify(&back, DEFAULT_TOL))? == direct, || format!("{construct_args:?}: certificate differs"))?;
    let (code, out, err) = cli(&["--format", "json", "certify", p]);
    ensure(code == 0, || format!("certify exited {code}: {err}"))?;
    let want = e(serde_json::to_string(&direct))?;
    ensure(out.trim_end() == want, || format!("{construct_args:?}: cli certificate {out} vs {want}"))
}

fn cli_round_trip() -> Check {
    let dir = e(tempfile::tempdir())?;
    let path = dir.path().join("frame.json");
    for n in 2..=8 {
        let ns = n.to_string();
        round_trip(&path, &["simplex", "--n", &ns], &e(regular_simplex(n))?)?;
    }
    let simplex = dir.path().join("simplex3.json");
    round_trip(&simplex, &["simplex", "--n", "3"], &e(regular_simplex(3))?)?;
    let s = simplex.to_str().unwrap();
    round_trip(&path, &["tensor", s, "--c", "2"], &tensor_fixture())?;

    let good = std::fs::read_to_string(&path).map_err(|e| e.to_string())?;
    let mut value: serde_json::Value = e(serde_json::from_str(&good))?;
    value["bases"][1][0][0] = serde_json::json!(2.0);
    let malformed = [
        ("missing-d", good.replacen("\"d\"", "\"dim\"", 1), "\"d\""),
        ("bad-field", good.replacen("\"R\"", "\"Q\"", 1), "\"field\""),
        ("bad-count", good.replacen("\"n\": 3", "\"n\": 4", 1), "\"bases\""),
        ("non-unit", e(serde_json::to_string(&value))?, "basis 2"),
        ("truncated", good[..good.len() / 2].to_string(), "malformed JSON"),
    ];
    for (name, text, needle) in malformed {
        let bad = dir.path().join(format!("{name}.json"));
        std::fs::write(&bad, text).map_err(|e| e.to_string())?;
        let (code, _, err) = cli(&["certify", bad.to_str().unwrap()]);
        ensure(code == 1, || format!("{name}: exit code {code}"))?;
        ensure(err.contains(needle), || format!("{name}: diagnostic {err:?} lacks {needle}"))?;
    }
    Ok("8 fixtures bit-exact; 5 malformed files rejected".into())
}

fn main() {
    // Ignore libtest flags such as --nocapture or a name filter.
    let criteria: [Entry; 10] = [
        ("simplex constructor", simplex_constructor),
        ("welch equality", welch_equality),
        ("orthoplex attainment", orthoplex_attainment),
        ("tensor EITFF", tensor_eitff_check),
        ("distance identities", distance_identities),
        ("bound universality", bound_universality),
        ("optimizer recovery", optimizer_recovery),
        ("gradient check", gradient_check),
        ("invariance", invariance),
        ("cli round trip", cli_round_trip),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                failures += 1;
                println!("FAIL {:>2} {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failures} failed", criteria.len() - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
