//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use framelab::banach::{analyze_asf, asf_dist, from_hilbert, generate_asf, AsfFamily, DistVariant, PNormSpace};
use framelab::flow::{flow_step, run_flow, tangent_family, FlowConfig};
use framelab::hilbert::{
    closest_equal_norm, closest_parseval, frame_dist, frame_dist_sq, frame_operator, harmonic, naimark_complement,
};
use framelab::lab::{
    estimate_paulsen, generate_instance, nearest_enp_alternating, nearest_enp_asf_search, write_records_csv,
    ExperimentRecord, InstanceKind, InstanceSpec, PenaltySchedule, DEFAULT_CERTIFY_TOL,
};
use framelab::projections::{certify_projection, chordal_distance};
use framelab::spectral::{dot, norm, singular_values};
use framelab::{analyze_frame, Frame, Matrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    (0..len).map(|_| rng.sample(StandardNormal)).collect()
}

/// Orthonormalizes the columns of a Gaussian `rows × cols` matrix by
/// modified Gram-Schmidt; returns the columns.
fn orthonormal_columns(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(cols);
    while basis.len() < cols {
        let mut v = gaussian(rng, rows);
        for _ in 0..2 {
            for b in &basis {
                let c = dot(&v, b);
                v.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
            }
        }
        let r = norm(&v);
        if r > 1e-6 {
            basis.push(v.into_iter().map(|x| x / r).collect());
        }
    }
    basis
}

/// Rows of an `n × d` isometry.
fn random_parseval(rng: &mut ChaCha8Rng, d: usize, n: usize) -> Frame {
    let cols = orthonormal_columns(rng, n, d);
    Frame::new(d, (0..n).map(|j| cols.iter().map(|c| c[j]).collect()).collect()).unwrap()
}

fn random_frame(rng: &mut ChaCha8Rng, d: usize, n: usize) -> Frame {
    Frame::new(d, (0..n).map(|_| gaussian(rng, d)).collect()).unwrap()
}

fn perturbed(rng: &mut ChaCha8Rng, f: &Frame, delta: f64) -> Frame {
    let vectors = f
        .vectors()
        .iter()
        .map(|v| {
            let u = gaussian(rng, v.len());
            let r = norm(&u);
            let radius: f64 = rng.random();
            v.iter().zip(&u).map(|(x, e)| x + delta * radius * e / r).collect()
        })
        .collect();
    Frame::new(f.dim(), vectors).unwrap()
}

fn orthogonal_projection(cols: &[Vec<f64>], d: usize) -> Matrix {
    let mut m = Matrix::zeros(d, d);
    for c in cols {
        m = &m + &Matrix::outer(c, c);
    }
    m
}

// 1. Mercedes-Benz golden values.
fn mercedes_benz() -> Outcome {
    let mb = Frame::mercedes_benz();
    let s = frame_operator(&mb);
    let defect = (&s - &Matrix::identity(2).scale(1.5)).as_slice().iter().fold(0.0_f64, |a, v| a.max(v.abs()));
    ensure(defect <= 1e-14, || format!("S - 1.5 I has entry {defect:e}"))?;

    let (parseval, dist_sq) = closest_parseval(&mb).map_err(|e| e.to_string())?;
    let expected = 3.0 * (1.0 - (2.0_f64 / 3.0).sqrt()).powi(2);
    ensure((dist_sq - expected).abs() <= 1e-9, || format!("dist_sq {dist_sq} vs {expected}"))?;

    let scaled = mb.scaled((2.0_f64 / 3.0).sqrt());
    let dist = frame_dist(&mb, &scaled).map_err(|e| e.to_string())?;
    let exact = 3f64.sqrt() * (1.0 - (2.0_f64 / 3.0).sqrt());
    ensure((dist - exact).abs() <= 1e-9, || format!("frame_dist {dist} vs {exact}"))?;
    ensure((dist - 0.3178372).abs() <= 5e-8, || format!("frame_dist {dist} vs 0.3178372"))?;
    ensure(frame_dist(&parseval, &scaled).unwrap() <= 1e-12, || "closest Parseval frame is not sqrt(2/3) MB".into())?;
    Ok(format!("dist_sq = {dist_sq:.10}, frame_dist = {dist:.10}"))
}

// 2. Closest-Parseval bound on 200 random nearly Parseval frames.
fn closest_parseval_bound() -> Outcome {
    let mut r = rng(2);
    let mut checked = 0;
    let mut quarter_violations = 0;
    let mut worst_ratio: f64 = 0.0;
    while checked < 200 {
        let d = r.random_range(2..=6);
        let n = r.random_range(d..=3 * d);
        let base = random_parseval(&mut r, d, n);
        let frame = match r.random_range(0..3) {
            0 => base.scaled(r.random_range(0.05..1.4)),
            1 => {
                let delta = r.random_range(0.0..0.4);
                perturbed(&mut r, &base, delta)
            }
            _ => random_frame(&mut r, d, n).scaled(1.0 / (n as f64).sqrt()),
        };
        let Some(eps) = analyze_frame(&frame).eps_parseval else { continue };
        checked += 1;
        let (_, dist_sq) = closest_parseval(&frame).map_err(|e| e.to_string())?;
        let df = d as f64;
        let ceiling = df * (2.0 - eps - 2.0 * (1.0 - eps).sqrt());
        ensure(dist_sq <= ceiling + 1e-9, || format!("d={d} n={n} eps={eps}: {dist_sq} > {ceiling}"))?;
        ensure(dist_sq <= df * eps * eps + 1e-9, || format!("d={d} n={n} eps={eps}: {dist_sq} > d eps^2"))?;
        if dist_sq > df * eps * eps / 4.0 {
            quarter_violations += 1;
        }
        if eps > 0.0 {
            worst_ratio = worst_ratio.max(dist_sq / ceiling);
        }
    }
    Ok(format!(
        "200 frames within d(2-eps-2sqrt(1-eps)) and d eps^2 (max ratio {worst_ratio:.4}); d eps^2/4 exceeded on {quarter_violations}/200 (reported only)"
    ))
}

// 3. Optimality against random competitors.
fn optimality() -> Outcome {
    let mut r = rng(3);
    let mut instances = 0;
    for n in 2..=4 {
        for _ in 0..4 {
            let frame = random_frame(&mut r, 2, n);
            if !analyze_frame(&frame).is_frame {
                continue;
            }
            instances += 1;
            let (_, best) = closest_parseval(&frame).map_err(|e| e.to_string())?;
            for _ in 0..2000 {
                let competitor = random_parseval(&mut r, 2, n);
                let d = frame_dist_sq(&frame, &competitor).unwrap();
                ensure(best <= d + 1e-12, || format!("n={n}: Parseval competitor at {d} beats {best}"))?;
            }

            let (_, best_en) = closest_equal_norm(&frame, None).map_err(|e| e.to_string())?;
            let norms: Vec<f64> = frame.vectors().iter().map(|v| norm(v)).collect();
            let mean = norms.iter().sum::<f64>() / n as f64;
            for _ in 0..1000 {
                let c = r.random_range(0.0..2.0 * mean);
                let vectors = (0..n)
                    .map(|_| {
                        let u = gaussian(&mut r, 2);
                        let s = norm(&u);
                        u.iter().map(|x| c * x / s).collect()
                    })
                    .collect();
                let competitor = Frame::new(2, vectors).unwrap();
                let d = frame_dist_sq(&frame, &competitor).unwrap();
                ensure(best_en <= d + 1e-12, || format!("n={n}: equal-norm competitor at {d} beats {best_en}"))?;
            }
            for k in -50..=50 {
                let c = mean * (1.0 + k as f64 / 100.0);
                let (_, d) = closest_equal_norm(&frame, Some(c)).map_err(|e| e.to_string())?;
                ensure(best_en <= d + 1e-12, || format!("radius {c} gives {d} below {best_en}"))?;
            }
        }
    }
    Ok(format!("{instances} instances, 2000 Parseval and 1000 equal-norm competitors each"))
}

// 4. Naimark complement identities.
fn naimark() -> Outcome {
    let mut r = rng(4);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let d = r.random_range(1..=5);
        let n = r.random_range(d + 1..=2 * d + 3);
        let frame = random_parseval(&mut r, d, n);
        let omega = naimark_complement(&frame, 1e-10).map_err(|e| e.to_string())?;
        let sum = &frame.gram() + &omega.gram();
        let gram_defect = (&sum - &Matrix::identity(n)).as_slice().iter().fold(0.0_f64, |a, v| a.max(v.abs()));
        let norm_defect = frame
            .vectors()
            .iter()
            .zip(omega.vectors())
            .map(|(t, w)| (dot(w, w) - (1.0 - dot(t, t))).abs())
            .fold(0.0_f64, f64::max);
        ensure(gram_defect <= 1e-9 && norm_defect <= 1e-9, || {
            format!("d={d} n={n}: Gram defect {gram_defect:e}, norm defect {norm_defect:e}")
        })?;
        worst = worst.max(gram_defect).max(norm_defect);
    }
    Ok(format!("100 frames, worst defect {worst:.2e}"))
}

// 5. Equalization flow on coprime perturbed unit-norm frames.
fn flow() -> Outcome {
    let pairs = [(2, 3), (2, 5), (3, 4), (3, 5), (4, 5), (3, 7), (4, 7), (5, 6), (2, 7), (5, 7)];
    let mut converged = 0;
    let mut total = 0;
    let mut max_iters_used = 0;
    for (d, n) in pairs {
        let base = harmonic(d, n).unwrap().normalized().unwrap();
        for seed in 0..5u64 {
            total += 1;
            let mut r = rng(500 + 10 * seed + n as u64);
            let start = perturbed(&mut r, &base, 0.01).normalized().unwrap();
            let config = FlowConfig::for_len(n);
            let target = n as f64 / d as f64;
            let mut current = start.clone();
            let mut potential = f64::INFINITY;
            let mut done = false;
            for iter in 0..=config.max_iters {
                let s = frame_operator(&current);
                let defect = (&s - &Matrix::identity(d).scale(target)).hs_norm();
                let fp: f64 = s.as_slice().iter().map(|x| x * x).sum();
                ensure(fp <= potential + 1e-10, || {
                    format!("(d,n)=({d},{n}) seed {seed}: potential rose at step {iter}")
                })?;
                potential = fp;
                if defect <= config.stop_defect {
                    done = true;
                    max_iters_used = max_iters_used.max(iter);
                    break;
                }
                let tangents = tangent_family(&current).map_err(|e| e.to_string())?;
                for (w, t) in tangents.vectors.iter().zip(current.vectors()) {
                    let inner = dot(w, t).abs();
                    ensure(inner <= 1e-12, || format!("(d,n)=({d},{n}): <w,t> = {inner:e} at step {iter}"))?;
                }
                let next = flow_step(&current, &config).map_err(|e| e.to_string())?;
                for (a, b) in next.vectors().iter().zip(current.vectors()) {
                    let drift = (norm(a) - norm(b)).abs();
                    ensure(drift <= 1e-12, || format!("(d,n)=({d},{n}): norm drift {drift:e} at step {iter}"))?;
                }
                current = next;
            }
            if done {
                converged += 1;
            }
        }
    }
    ensure(converged >= 48, || format!("only {converged}/{total} instances reached 1e-6"))?;

    for tight in [Frame::mercedes_benz(), harmonic(3, 7).unwrap().normalized().unwrap()] {
        let config = FlowConfig::for_len(tight.len());
        let next = flow_step(&tight, &config).map_err(|e| e.to_string())?;
        ensure(next == tight, || "tight unit-norm frame moved under one step".into())?;
        let (last, trace) = run_flow(&tight, &config).map_err(|e| e.to_string())?;
        ensure(last == tight && trace.final_iter == 0, || "tight unit-norm frame is not a fixed point".into())?;
    }
    Ok(format!("{converged}/{total} converged (slowest {max_iters_used} steps); tight frames fixed"))
}

fn hilbert_grid() -> Vec<InstanceSpec> {
    let mut grid = Vec::new();
    for kind in [InstanceKind::PerturbedEnp, InstanceKind::ScaledEnp] {
        for d in 2..=5 {
            for n in d..=10 {
                for eps in [0.01, 0.05, 0.1, 0.2] {
                    grid.push(InstanceSpec::hilbert(kind, d, n, eps, 6000));
                }
            }
        }
    }
    grid
}

fn csv_text(records: &[ExperimentRecord]) -> String {
    let mut buf = Vec::new();
    write_records_csv(records, &mut buf).unwrap();
    String::from_utf8(buf).unwrap()
}

// 6. Bound ceilings over a Hilbert sweep.
fn ceilings() -> Outcome {
    let est = estimate_paulsen(&hilbert_grid(), 20, DEFAULT_CERTIFY_TOL).map_err(|e| e.to_string())?;
    let certified: Vec<&ExperimentRecord> = est.records.iter().filter(|r| r.certified).collect();
    for r in &certified {
        let v = r.achieved_dist_sq.unwrap();
        ensure(v <= r.bound_hm, || format!("{:?}: {v} > 20 eps d^2 = {}", r.spec, r.bound_hm))?;
        ensure(v <= r.bound_bc, || format!("{:?}: {v} > bound_bc = {}", r.spec, r.bound_bc))?;
    }
    let worst = est.summary.iter().filter_map(|s| s.ratio_hm).fold(0.0, f64::max);
    let below_lower = est.summary.iter().filter(|s| s.ratio_lower_ref.is_some_and(|r| r < 1.0)).count();
    Ok(format!(
        "{}/{} records certified; max dist_sq / 20 eps d^2 = {worst:.2e}; {below_lower}/{} groups below eps^2 d (reported only)",
        certified.len(),
        est.records.len(),
        est.summary.len()
    ))
}

// 7. Hilbert frames as ASFs over l2, and distance variants.
fn banach_reduction() -> Outcome {
    let mut r = rng(7);
    for _ in 0..100 {
        let d = r.random_range(2..=5);
        let n = r.random_range(d..=2 * d + 2);
        let base = random_parseval(&mut r, d, n);
        let delta = r.random_range(0.0..0.3);
        let frame = perturbed(&mut r, &base, delta);
        let h = analyze_frame(&frame);
        let a = analyze_asf(&from_hilbert(&frame), 1e-10);
        let s_defect = (&a.s - &frame_operator(&frame)).hs_norm();
        ensure(s_defect <= 1e-12, || format!("operators differ by {s_defect:e}"))?;
        for (x, y, what) in
            [(h.eps_parseval, a.eps_parseval, "parseval"), (h.eps_equal_norm, a.eps_equal_norm, "equal-norm")]
        {
            match (x, y) {
                (Some(x), Some(y)) => ensure((x - y).abs() <= 1e-10, || format!("{what} eps {x} vs {y}"))?,
                (None, None) => {}
                _ => return Err(format!("{what} eps present on one side only: {x:?} vs {y:?}")),
            }
        }
    }
    for k in 0..1000u64 {
        let p = [1.0, 1.5, 2.0, 3.0, f64::INFINITY][(k % 5) as usize];
        let d = 2 + (k % 4) as usize;
        let space = PNormSpace::new(d, p).unwrap();
        let a = generate_asf(&AsfFamily::Random { space, n: d + 2 }, 2 * k).unwrap();
        let b = generate_asf(&AsfFamily::Random { space, n: d + 2 }, 2 * k + 1).unwrap();
        let default = asf_dist(&a, &b, DistVariant::Default).unwrap();
        let star = asf_dist(&a, &b, DistVariant::Star).unwrap();
        let power = asf_dist(&a, &b, DistVariant::Power(2.0)).unwrap();
        ensure(star <= default + 1e-12, || format!("star {star} > default {default}"))?;
        ensure((power - default).abs() <= 1e-12, || format!("r = 2 distance {power} vs {default}"))?;
    }
    Ok("100 lifted frames agree; star <= default and r = 2 matches default on 1000 pairs".into())
}

// 8. Chordal distance against principal angles.
fn chordal() -> Outcome {
    let mut r = rng(8);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let d = r.random_range(2..=6);
        let m = r.random_range(1..d);
        let a = orthonormal_columns(&mut r, d, m);
        let b = orthonormal_columns(&mut r, d, m);
        let p = certify_projection(&orthogonal_projection(&a, d), true, 1e-10).map_err(|e| e.to_string())?;
        let q = certify_projection(&orthogonal_projection(&b, d), true, 1e-10).map_err(|e| e.to_string())?;
        let pq = chordal_distance(&p, &q, 1e-10).map_err(|e| e.to_string())?;
        let qp = chordal_distance(&q, &p, 1e-10).map_err(|e| e.to_string())?;
        ensure(pq == qp, || format!("asymmetric: {pq} vs {qp}"))?;

        // cos θ_i are the singular values of AᵀB.
        let cross =
            Matrix::from_rows(&a.iter().map(|u| b.iter().map(|v| dot(u, v)).collect::<Vec<_>>()).collect::<Vec<_>>())
                .unwrap();
        let oracle: f64 = singular_values(&cross).iter().map(|c| 1.0 - c.min(1.0).powi(2)).sum();
        let err = (pq * pq - oracle).abs();
        ensure(err <= 1e-9, || format!("d={d} m={m}: {} vs {oracle}", pq * pq))?;
        worst = worst.max(err);
        ensure(chordal_distance(&p, &p, 1e-10).unwrap() == 0.0, || "identical projections at nonzero distance".into())?;
    }
    Ok(format!("200 pairs, worst |chordal^2 - sum sin^2| = {worst:.2e}"))
}

// 9. Banach estimator smoke test.
fn banach_estimator() -> Outcome {
    let mut notes = Vec::new();
    for p in [1.5, 3.0] {
        let est = estimate_paulsen(&[InstanceSpec::asf(2, 4, 0.05, p, 900)], 5, DEFAULT_CERTIFY_TOL)
            .map_err(|e| e.to_string())?;
        let certified = est.records.iter().filter(|r| r.certified).count();
        ensure(certified >= 4, || format!("p={p}: {certified}/5 certified"))?;
        for r in &est.records {
            let (Some(a), Some(b)) = (r.achieved_dist_sq, r.base_dist_sq) else {
                return Err(format!("p={p}: trial without distances: {:?}", r.error));
            };
            ensure(a <= b + 1e-6, || format!("p={p}: {a} exceeds base distance {b}"))?;
        }
        notes.push(format!("p={p}: {certified}/5"));
    }
    let mut worst: f64 = 0.0;
    for seed in 0..5 {
        let inst = generate_instance(&InstanceSpec::asf(2, 4, 0.05, 2.0, 950 + seed)).map_err(|e| e.to_string())?;
        let asf = inst.asf().unwrap();
        let search = nearest_enp_asf_search(asf, DEFAULT_CERTIFY_TOL, 50_000, PenaltySchedule::default())
            .map_err(|e| e.to_string())?;
        ensure(search.certified && search.residual <= 1e-6, || {
            format!("p=2 seed {seed}: residual {}", search.residual)
        })?;
        let frame = Frame::new(2, asf.vectors().to_vec()).unwrap();
        let hilbert = nearest_enp_alternating(&frame, DEFAULT_CERTIFY_TOL, 10_000).map_err(|e| e.to_string())?;
        let gap = (search.dist_sq - hilbert.dist_sq).abs();
        ensure(gap <= 1e-6, || format!("p=2 seed {seed}: {} vs {}", search.dist_sq, hilbert.dist_sq))?;
        worst = worst.max(gap);
    }
    Ok(format!("{}; p=2 agrees with the Hilbert solver to {worst:.2e}", notes.join(", ")))
}

// 10. Determinism of the criterion 6 sweep.
fn determinism() -> Outcome {
    let grid = hilbert_grid();
    let a = csv_text(&estimate_paulsen(&grid, 20, DEFAULT_CERTIFY_TOL).map_err(|e| e.to_string())?.records);
    let b = csv_text(&estimate_paulsen(&grid, 20, DEFAULT_CERTIFY_TOL).map_err(|e| e.to_string())?.records);
    ensure(a == b, || "CSV output differs between identical runs".into())?;
    Ok(format!("{} identical CSV lines", a.lines().count()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("Mercedes-Benz golden values", mercedes_benz),
        ("closest Parseval bound", closest_parseval_bound),
        ("optimality oracles", optimality),
        ("Naimark complement", naimark),
        ("equalization flow", flow),
        ("20 eps d^2 ceiling", ceilings),
        ("Banach reduction", banach_reduction),
        ("chordal oracle", chordal),
        ("Banach estimator", banach_estimator),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let outcome = check();
        let secs = started.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS {name} [{secs:.2}s]: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name} [{secs:.2}s]: {detail}", i + 1);
            }
        }
    }
    if failed == 0 {
        println!("acceptance: all 10 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} criteria failed");
        ExitCode::FAILURE
    }
}
