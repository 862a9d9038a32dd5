//! End-to-end acceptance checks, one line per criterion.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the table.

use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use vantage::bounds::{
    alternating_spec, component_sequence, count_components_radical, galois_numeric_checks, galois_product_expand,
    good_tideman_bound, noga_sign_patterns, radical_warren_bound, verify_noga_family, warren_bound, ScanConfig,
};
use vantage::constructions::{
    build_lower_bound_config, check_d, check_ordering, default_flanking_params, find_good_pair, flanked_agrees,
    flanking_scale, flanking_w_grid, gen_check_orderings, gen_d1_flanking, hat_u_d1, is_good_pair, stabilize,
    theta_crossing, theta_crossing_bisect, theta_ratio, ExtendedX,
};
use vantage::enumeration::{
    arrangement_cells, enumerate_hat_psi, enumerate_psi1_exact, estimate_psi, ParamSource, SamplerSpec,
};
use vantage::geometry::{rank, CandidateSet, Ordering, Point, Side, VantageMultiset};
use vantage::scalar::{compare, int, rat, ComparisonResult, Rational};
use vantage::witnesses::{
    all_orderings, avoids_132_312, gen_vertex_transitive, is_protrusive, verify_six_point,
    witness_by_distance_matrix, witness_d1, PolytopeKind,
};
use vantage::Error;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e2s(e: Error) -> String {
    e.to_string()
}

fn random_rational(rng: &mut ChaCha8Rng, span: i64, den: i64) -> Rational {
    rat(rng.random_range(-span * den..=span * den), den)
}

/// `n` distinct random points with coordinates in `[-span, span] ∩ (1/den)ℤ`.
fn random_set(rng: &mut ChaCha8Rng, n: usize, d: usize, span: i64, den: i64) -> CandidateSet {
    loop {
        let pts: Vec<Point> = (0..n)
            .map(|_| Point::new((0..d).map(|_| random_rational(rng, span, den)).collect()))
            .collect();
        if let Ok(c) = CandidateSet::new(pts) {
            return c;
        }
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    fn rec(k: usize, p: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == p.len() {
            out.push(p.clone());
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            rec(k + 1, p, out);
            p.swap(k, i);
        }
    }
    rec(0, &mut p, &mut out);
    out
}

/// `s(n, r)` read off the rising factorial `x(x+1)…(x+n-1)`.
fn stirling_oracle(n: usize) -> Vec<u128> {
    let mut coeffs = vec![1u128];
    for j in 0..n as u128 {
        let mut next = vec![0u128; coeffs.len() + 1];
        for (i, c) in coeffs.iter().enumerate() {
            next[i + 1] += c;
            next[i] += c * j;
        }
        coeffs = next;
    }
    coeffs
}

fn c1_exact_counts() -> Check {
    for n in 3..=8 {
        let c = CandidateSet::on_line(&(0..n as i64).map(int).collect::<Vec<_>>()).map_err(e2s)?;
        let got = enumerate_psi1_exact(&c).map_err(e2s)?.len();
        ensure(got == 2 * n - 2, || format!("line n={n}: {got} != {}", 2 * n - 2))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut seen = Vec::new();
    for n in 3..=5 {
        let c = random_set(&mut rng, n, 2, 1000, 1);
        let got = enumerate_psi1_exact(&c).map_err(e2s)?.len();
        let row = stirling_oracle(n);
        let oracle: u128 = (0..=2).map(|i| row[n - i]).sum();
        ensure(good_tideman_bound(n, 2) == BigUint::from(oracle), || format!("Stirling mismatch at n={n}"))?;
        ensure(got as u128 == oracle, || format!("planar n={n}: {got} != {oracle}"))?;
        seen.push(got);
    }
    Ok(format!("lines 2n-2 for n=3..8; planar {seen:?}"))
}

fn c2_sampling_agrees() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for inst in 0..20 {
        let n = rng.random_range(2..=5);
        let d = rng.random_range(1..=2);
        let c = random_set(&mut rng, n, d, 10, 1);
        let exact = enumerate_psi1_exact(&c).map_err(e2s)?;
        let sampled = estimate_psi(&c, 1, &SamplerSpec::default(), 100_000, inst);
        let a: Vec<_> = exact.keys().collect();
        let b: Vec<_> = sampled.keys().collect();
        ensure(a == b, || format!("instance {inst} (n={n}, d={d}): exact {} vs sampled {}", a.len(), b.len()))?;
    }
    Ok("20 instances identical".into())
}

fn binom(m: u64, l: u64) -> u128 {
    if l > m {
        return 0;
    }
    (0..l).fold(1u128, |acc, i| acc * (m - i) as u128 / (i + 1) as u128)
}

fn c3_warren() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..25 {
        let (n, m, delta) = (rng.random_range(1..=4u64), rng.random_range(1..=8u64), rng.random_range(1..=4u64));
        let (r, s) = (rng.random_range(2..=4u64), rng.random_range(1..=3u64));
        let sum: u128 = (0..=n).map(|l| (1u128 << l) * binom(m, l)).sum();
        let warren = 2 * (2 * delta as u128).pow(n as u32) * sum;
        let radical = 2 * (2 * (s as u128).pow((r - 2) as u32) * delta as u128).pow(n as u32) * sum;
        ensure(warren_bound(n, m, delta) == BigUint::from(warren), || format!("warren({n},{m},{delta})"))?;
        let got = radical_warren_bound(n, m, delta, r, s).map_err(e2s)?;
        ensure(got == BigUint::from(radical), || format!("radical({n},{m},{delta},{r},{s})"))?;
        let two = radical_warren_bound(n, m, delta, 2, s).map_err(e2s)?;
        ensure(two == warren_bound(n, m, delta), || format!("r=2 reduction at ({n},{m},{delta},{s})"))?;
    }
    Ok("25 tuples match".into())
}

fn c4_noga() -> Check {
    let report = verify_noga_family(8, &rat(1, 5)).map_err(e2s)?;
    ensure(report.passed(), || format!("{} failures, {} undecided", report.failures.len(), report.undecided))?;
    ensure(report.checks == 256 * 8, || format!("{} checks", report.checks))?;
    let patterns = noga_sign_patterns(3, &rat(1, 5)).map_err(e2s)?;
    ensure(patterns.len() == 8, || format!("{} patterns", patterns.len()))?;
    Ok(format!("{} sign checks; 8/8 patterns", report.checks))
}

/// `∏_{t ∈ {0}×[s]^{r-1}} Σ ξᵢ ω^{tᵢ}` evaluated directly.
fn galois_oracle(r: usize, s: usize, xi: &[f64]) -> Complex64 {
    let total = s.pow(r as u32 - 1);
    (0..total)
        .map(|mut code| {
            let mut z = Complex64::new(xi[0], 0.0);
            for x in &xi[1..] {
                let t = code % s;
                code /= s;
                z += Complex64::from_polar(*x, 2.0 * std::f64::consts::PI * t as f64 / s as f64);
            }
            z
        })
        .product()
}

fn c5_galois() -> Check {
    for (r, s) in [(2, 2), (2, 3), (3, 2), (2, 4), (3, 3)] {
        let exp = galois_product_expand(r, s).map_err(e2s)?;
        ensure(exp.exponents_divisible, || format!("({r},{s}) exponent not divisible"))?;
        ensure(exp.integer_coefficients, || format!("({r},{s}) non-integer coefficients"))?;
        ensure(exp.terms.iter().all(|(e, _)| e.iter().all(|k| k % s as u32 == 0)), || format!("({r},{s}) exponents"))?;
        let checks = galois_numeric_checks(&exp, 5 + r as u64 * 10 + s as u64, 10);
        for chk in &checks {
            ensure(chk.agrees, || format!("({r},{s}) numeric disagreement at {:?}", chk.point))?;
            let z = galois_oracle(r, s, &chk.point);
            ensure((z.re - chk.exact).abs() <= chk.tolerance && z.im.abs() <= chk.tolerance, || {
                format!("({r},{s}) oracle {z} vs {}", chk.exact)
            })?;
        }
    }
    Ok("5 (r,s) pairs; 50 numeric points".into())
}

fn c6_components() -> Check {
    let cfg = ScanConfig::default();
    let mut counts = Vec::new();
    for r in 2..=4 {
        let (_, c) = component_sequence(r, &cfg).map_err(e2s)?;
        ensure(c.count == 2 * r - 1, || format!("r={r}: {} components", c.count))?;
        ensure(c.count as u128 <= c.upper_bound, || format!("r={r} exceeds bound"))?;
        counts.push(c.count);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..12 {
        let r = rng.random_range(2..=4);
        let a: Vec<Rational> = (0..r - 1).map(|_| rat(rng.random_range(1..=4000), rng.random_range(1..=8))).collect();
        let spec = alternating_spec(&a).map_err(e2s)?;
        let c = count_components_radical(&spec, &cfg);
        let cap = (1u128 << (r - 1)) + 1;
        ensure(c.count as u128 <= cap, || format!("random spec {a:?}: {} > {cap}", c.count))?;
    }
    Ok(format!("counts {counts:?}; 12 random specs within 2^(r-1)+1"))
}

fn c7_flanking() -> Check {
    let mut got = Vec::new();
    for k in [1u64, 2] {
        let (a, b) = default_flanking_params(2);
        let r = flanking_scale(k, &a, &b);
        let (c1, c2) = gen_d1_flanking(k, &r, &a, &b).map_err(e2s)?;
        let grid = flanking_w_grid(&a, &b).iter().map(|(w1, w2)| hat_u_d1(k, &r, w1, w2)).collect();
        let cat = enumerate_hat_psi(&c1, &c2, k, ParamSource::List(grid));
        ensure(cat.len() >= 16, || format!("k={k}: {} hat orderings", cat.len()))?;
        got.push(cat.len());
    }
    Ok(format!("distinct hat orderings {got:?} >= 16"))
}

fn c8_composition() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut scales = Vec::new();
    while scales.len() < 10 {
        let k = rng.random_range(1..=2u64);
        let n = rng.random_range(2..=4);
        let center = random_set(&mut rng, n, 1, 20, 4);
        let v = VantageMultiset::from_points(
            (0..k).map(|_| Point::scalar(random_rational(&mut rng, 25, 3))).collect(),
        )
        .map_err(e2s)?;
        match rank(&center, &v) {
            Ok(_) => {}
            Err(Error::Tie { .. }) => continue,
            Err(e) => return Err(e2s(e)),
        }
        let (a, b) = default_flanking_params(2);
        let r = flanking_scale(k, &a, &b);
        let (c1, c2) = gen_d1_flanking(k, &r, &a, &b).map_err(e2s)?;
        let grid = flanking_w_grid(&a, &b);
        let (w1, w2) = &grid[rng.random_range(0..grid.len())];
        let u = hat_u_d1(k, &r, w1, w2);
        let pts = center.points().to_vec();
        let stable = stabilize(int(1), |big_r| flanked_agrees(&pts, Some(&v), &c1, &c2, &u, big_r)).map_err(e2s)?;
        for step in 0..3 {
            let at = &stable * int(1 << step);
            ensure(flanked_agrees(&pts, Some(&v), &c1, &c2, &u, &at).map_err(e2s)?, || format!("disagrees at R={at}"))?;
        }
        scales.push(stable);
    }
    let max = scales.iter().max().unwrap();
    Ok(format!("10 instances stable; largest starting R = {max}"))
}

fn c9_theta() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let tol = rat(1, 1_000_000_000);
    for _ in 0..100 {
        let b2 = rat(rng.random_range(1..=400), rng.random_range(1..=20));
        let a2 = &b2 * rat(rng.random_range(101..=900), 100);
        let hi = &a2 / &b2;
        let q = Rational::from_integer(rng.random_range(1..=9).into());
        let t = rat(rng.random_range(1..=999), 1000);
        let p = &q * (int(1) + (&hi - int(1)) * t);
        let x = match theta_crossing(&a2, &b2, &p, &q).map_err(e2s)? {
            ExtendedX::Finite(x) => x,
            other => return Err(format!("unexpected crossing {other:?}")),
        };
        let (lo, up) = theta_crossing_bisect(&a2, &b2, &p, &q, &rat(1, 10_000_000_000)).map_err(e2s)?;
        let enc = x.enclose(128);
        ensure(enc.lo_rational() >= &lo - &tol && enc.hi_rational() <= &up + &tol, || {
            format!("closed form {} outside bisection [{lo}, {up}]", x.to_f64())
        })?;
        let mut xs: Vec<Rational> = (0..5).map(|_| random_rational(&mut rng, 50, 7)).collect();
        xs.sort();
        xs.dedup();
        let vals: Vec<_> = xs
            .iter()
            .map(|x| theta_ratio(&a2, &b2, &ExtendedX::Finite(vantage::constructions::SignedSqrt::from_rational(x))))
            .collect::<Result<_, _>>()
            .map_err(e2s)?;
        for w in vals.windows(2) {
            let ordered = [256u32, 1024].iter().any(|&bits| match (w[0].enclose(bits), w[1].enclose(bits)) {
                (Ok(l), Ok(r)) => l.certainly_lt(&r),
                _ => false,
            });
            ensure(ordered, || "theta ratio not increasing".into())?;
        }
        let neg = theta_ratio(&a2, &b2, &ExtendedX::NegInf).map_err(e2s)?.as_rational();
        let pos = theta_ratio(&a2, &b2, &ExtendedX::PosInf).map_err(e2s)?.as_rational();
        ensure(neg == Some(int(1)) && pos == Some(hi.clone()), || "endpoint values".into())?;
    }
    Ok("100 draws".into())
}

fn c10_good_pairs() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let (mut good, mut total, mut emitted) = (0, 0, 0);
    for inst in 0..10u64 {
        let c = random_set(&mut rng, 3, 2, 20, 1);
        let pts = c.points().to_vec();
        for _ in 0..20 {
            let v1 = Point::new(vec![random_rational(&mut rng, 30, 97), random_rational(&mut rng, 30, 89)]);
            let v2 = Point::new(vec![random_rational(&mut rng, 30, 83), random_rational(&mut rng, 30, 79)]);
            total += 1;
            if is_good_pair(&v1, &v2, &pts).map_err(e2s)?.good {
                good += 1;
            }
        }
        let (_, cells) = arrangement_cells(&c).map_err(e2s)?;
        let (v1, v2, _) = find_good_pair(&pts, &cells[0].sample, &cells[1].sample, inst, 256)
            .map_err(e2s)?
            .ok_or_else(|| format!("instance {inst}: no good pair"))?;
        let got = gen_check_orderings(&pts, &v1, &v2).map_err(e2s)?;
        ensure(got.catalog.len() >= got.gamma, || format!("{} < Γ = {}", got.catalog.len(), got.gamma))?;
        for (ordering, cfg) in &got.catalog.entries {
            ensure(&check_ordering(cfg, &pts, &pts).map_err(e2s)? == ordering, || "ordering not reproduced".into())?;
        }
        for e in &got.xi {
            let holds = got.catalog.entries.values().any(|cfg| {
                let chain = [
                    check_d(cfg, &pts[e.c2], Side::One),
                    check_d(cfg, &pts[e.c4], Side::Two),
                    check_d(cfg, &pts[e.c3], Side::Two),
                    check_d(cfg, &pts[e.c1], Side::One),
                ];
                let chain: Vec<_> = chain.into_iter().flatten().collect();
                chain.len() == 4 && chain.windows(2).all(|w| compare(&w[0], &w[1]) == ComparisonResult::Less)
            });
            ensure(holds, || format!("no certified chain for ({}, {}, {}, {})", e.c1, e.c2, e.c3, e.c4))?;
        }
        emitted += got.catalog.len();
    }
    let freq = good as f64 / total as f64;
    ensure(freq >= 0.5, || format!("good-pair frequency {freq:.2}"))?;
    Ok(format!("good frequency {good}/{total}; {emitted} verified check orderings"))
}

fn c11_d1() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut verified = 0usize;
    for n in 2..=8 {
        let c = random_set(&mut rng, n, 1, 50, 7);
        let mut protrusive = 0;
        for perm in permutations(n) {
            let o = Ordering::new(perm);
            if is_protrusive(&c, &o) {
                protrusive += 1;
                let cert = witness_d1(&c, &o).map_err(e2s)?;
                ensure(cert.verified && rank(&c, &cert.vantage).map_err(e2s)? == o, || format!("n={n}: {o} not verified"))?;
            } else {
                ensure(matches!(witness_d1(&c, &o), Err(Error::NotProtrusive)), || format!("n={n}: {o} not rejected"))?;
            }
        }
        ensure(protrusive == 1 << (n - 1), || format!("n={n}: {protrusive} protrusive"))?;
        verified += protrusive;
    }
    for n in 1..=6 {
        let c = random_set(&mut rng, n, 1, 50, 7);
        let mut by_coord: Vec<usize> = (0..n).collect();
        by_coord.sort_by(|&a, &b| c.point(a).coord(0).cmp(c.point(b).coord(0)));
        let mut pos = vec![0; n];
        for (rank_pos, &i) in by_coord.iter().enumerate() {
            pos[i] = rank_pos;
        }
        for perm in permutations(n) {
            let o = Ordering::new(perm.clone());
            let positions: Vec<usize> = perm.iter().map(|&i| pos[i]).collect();
            ensure(avoids_132_312(&positions) == is_protrusive(&c, &o), || format!("pattern test differs on {o}"))?;
        }
    }
    Ok(format!("{verified} protrusive orderings verified for n=2..8"))
}

fn c12_distance_matrix() -> Check {
    let square = CandidateSet::from_ints(&[&[0, 0], &[1, 0], &[1, 1], &[0, 1]]).map_err(e2s)?;
    let pentagon = gen_vertex_transitive(&PolytopeKind::RegularPolygon(5)).map_err(e2s)?;
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut pent_orders: Vec<Ordering> = Vec::new();
    while pent_orders.len() < 10 {
        let mut p: Vec<usize> = (0..5).collect();
        p.shuffle(&mut rng);
        let o = Ordering::new(p);
        if !pent_orders.contains(&o) {
            pent_orders.push(o);
        }
    }
    let mut worst_gap = 0.0f64;
    for (c, orders) in [(&square, all_orderings(4)), (&pentagon, pent_orders)] {
        for o in orders {
            let w = witness_by_distance_matrix(c, &o, vantage::scalar::DEFAULT_PRECISION_CAP).map_err(e2s)?;
            ensure(w.certificate.verified, || format!("{o} not verified"))?;
            ensure(rank(c, &w.certificate.vantage).map_err(e2s)? == o, || format!("{o} re-rank differs"))?;
            ensure(
                w.certificate.vantage.entries().iter().all(|(p, _)| c.points().contains(p)),
                || format!("{o}: vantage point outside C"),
            )?;
            worst_gap = worst_gap.max(vantage::Interval::from_rational(&w.rounding_gap).hi());
        }
    }
    Ok(format!("24 square + 10 pentagon orderings; worst rounding gap {worst_gap:.4}"))
}

fn c13_six_point() -> Check {
    let r = verify_six_point(&rat(1, 50), &rat(5, 2)).map_err(e2s)?;
    ensure(r.grid_side == 251, || format!("grid side {}", r.grid_side))?;
    ensure(r.grid_min[0] > 0.35, || format!("grid minimum {:?}", r.grid_min))?;
    ensure(r.bound > 0.26, || format!("bound {}", r.bound))?;
    ensure(r.pass, || r.failure.clone().unwrap_or_default())?;
    Ok(format!("251² cells, grid min lo {:.5}, bound {:.5}", r.grid_min[0], r.bound))
}

fn c14_growth() -> Check {
    let mut pts = Vec::new();
    for n in 4..=12 {
        let cfg = build_lower_bound_config(1, 1, n).map_err(e2s)?;
        let size = cfg.catalog.len();
        for (o, v) in &cfg.catalog.entries {
            ensure(&rank(&cfg.candidates, v).map_err(e2s)? == o, || format!("n={n}: catalog entry does not re-rank"))?;
        }
        pts.push(((n as f64).ln(), (size as f64).ln()));
    }
    let m = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (sx / m, sy / m);
    let num: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = pts.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
    let slope = num / den;
    ensure((1.8..=2.2).contains(&slope), || format!("slope {slope:.3}"))?;
    Ok(format!("log-log slope {slope:.3}"))
}

#[test]
fn acceptance() {
    let criteria: [(&str, u64, fn() -> Check); 14] = [
        ("exact psi_1 counts", 10, c1_exact_counts),
        ("sampling agrees with exact", 60, c2_sampling_agrees),
        ("Warren calculators", 5, c3_warren),
        ("alternating radical sign patterns", 60, c4_noga),
        ("Galois product expansion", 30, c5_galois),
        ("radical components", 120, c6_components),
        ("flanking hat orderings", 60, c7_flanking),
        ("flanked composition stabilizes", 120, c8_composition),
        ("theta crossings", 30, c9_theta),
        ("good pairs and check orderings", 120, c10_good_pairs),
        ("d=1 protrusive witnesses", 120, c11_d1),
        ("distance-matrix witnesses", 60, c12_distance_matrix),
        ("six-point verification", 60, c13_six_point),
        ("lower-bound growth", 120, c14_growth),
    ];
    let mut failed = Vec::new();
    for (i, (name, budget, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = f();
        let took = start.elapsed();
        let in_time = took <= Duration::from_secs(*budget);
        let (status, detail) = match &result {
            Ok(d) if in_time => ("PASS", d.clone()),
            Ok(d) => ("FAIL", format!("{d}; over the {budget} s budget")),
            Err(e) => ("FAIL", e.clone()),
        };
        println!("criterion {:>2} {status} {name} [{:.2} s / {budget} s]: {detail}", i + 1, took.as_secs_f64());
        if status == "FAIL" {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
