use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use vantage::bounds::{
    galois_numeric_checks, galois_product_expand, good_tideman_bound, main_theorem_exponent, noga_sign_patterns,
    radical_warren_bound, stirling_first_unsigned, verify_noga_family, warren_bound,
};
use vantage::constructions::{
    build_flanked, build_lower_bound_config, default_flanking_params, find_good_pair, flanked_agrees, flanking_scale,
    flanking_w_grid, gen_check_orderings, gen_d1_flanking, generic_base_points, hat_ordering, hat_u_d1, stabilize,
    HatConfig,
};
use vantage::enumeration::{
    arrangement_cells, enumerate_hat_psi, enumerate_psi1_exact, enumerate_psi_k_d1_exact, estimate_psi, Catalog,
    OrderingCatalog, ParamSource, SamplerSpec,
};
use vantage::geometry::{distance_sums, rank_with, CandidateSet, Ordering, Point};
use vantage::io::{catalog_csv_summary, catalog_jsonl, parse_candidate_set, parse_multiset};
use vantage::scalar::{format_rational, parse_rational, Rational};
use vantage::witnesses::{
    all_orderings, is_protrusive, verify_six_point, witness_affine_independent, witness_by_distance_matrix, witness_d1, witness_small,
};
use vantage::Error;

use crate::output::{read, CliResult, Output};
use crate::{svg, usage, Cli, Command, Construct, Formula, Global, Plot, Verify, WitnessKind};

pub fn dispatch(cli: &Cli) -> CliResult<Output> {
    let g = &cli.global;
    match &cli.command {
        Command::Rank { points, multiset } => rank(g, points, multiset),
        Command::Enum { points, k } => enumerate(points, *k),
        Command::Estimate { points, k } => estimate(g, points, *k),
        Command::Bounds {
            formula,
            n,
            d,
            m,
            delta,
            r,
            s,
            k,
        } => bounds(*formula, &Params { n: *n, d: *d, m: *m, delta: *delta, r: *r, s: *s, k: *k }),
        Command::Construct(c) => construct(g, c),
        Command::Witness { kind, points, ordering } => witness(g, *kind, points, ordering),
        Command::Unwitnessed { points, max_k } => unwitnessed(g, points, *max_k),
        Command::Verify(v) => verify(g, v),
        Command::Plot(p) => plot(p),
    }
}

fn load_points(path: &Path) -> CliResult<CandidateSet> {
    Ok(parse_candidate_set(&read(path)?)?)
}

fn rational_arg(name: &str, text: &str) -> CliResult<Rational> {
    parse_rational(text).map_err(|e| usage(format!("--{name}: {e}")))
}

fn rank(g: &Global, points: &Path, multiset: &Path) -> CliResult<Output> {
    let c = load_points(points)?;
    let v = parse_multiset(&read(multiset)?)?;
    if v.dim() != c.dim() {
        return Err(Error::DimensionMismatch { expected: c.dim(), found: v.dim() }.into());
    }
    let out = match rank_with(&c, &v, g.precision_cap) {
        Ok(o) => {
            let sums: Vec<f64> = distance_sums(&c, &v)?.iter().map(|s| s.to_f64()).collect();
            Output::json(json!({ "ordering": o, "sums": sums }))
        }
        Err(Error::Tie { i, j }) => Output::json(json!({ "tie": [i, j] })).code(1),
        Err(e) => return Err(e.into()),
    };
    Ok(out.inputs(&[points, multiset]))
}

fn catalog_output(c: &CandidateSet, cat: &OrderingCatalog, extra: serde_json::Value) -> Output {
    let mut body = json!({
        "n": c.len(),
        "dim": c.dim(),
        "count": cat.len(),
        "trials": cat.trials,
        "ties_skipped": cat.ties_skipped,
        "undecided_skipped": cat.undecided_skipped,
        "orderings": cat.keys().collect::<Vec<_>>(),
    });
    if let (Some(b), Some(e)) = (body.as_object_mut(), extra.as_object()) {
        b.extend(e.clone());
    }
    Output {
        json: body,
        jsonl: Some(catalog_jsonl(cat)),
        csv: Some(catalog_csv_summary(cat)),
        ..Default::default()
    }
}

fn enumerate(points: &Path, k: usize) -> CliResult<Output> {
    let c = load_points(points)?;
    let cat = match k {
        0 => return Err(usage("k must be at least 1")),
        1 => enumerate_psi1_exact(&c)?,
        _ => enumerate_psi_k_d1_exact(&c, k)?,
    };
    Ok(catalog_output(&c, &cat, json!({ "k": k, "method": "exact" })).inputs(&[points]))
}

fn estimate(g: &Global, points: &Path, k: usize) -> CliResult<Output> {
    if g.trials == 0 || k == 0 {
        return Err(usage("trials and k must be positive"));
    }
    let c = load_points(points)?;
    let cat = estimate_psi(&c, k, &SamplerSpec::default(), g.trials, g.seed);
    Ok(catalog_output(&c, &cat, json!({ "k": k, "method": "sampled", "seed": g.seed })).inputs(&[points]))
}

struct Params {
    n: Option<u64>,
    d: Option<u64>,
    m: Option<u64>,
    delta: Option<u64>,
    r: Option<u64>,
    s: Option<u64>,
    k: Option<u64>,
}

fn bounds(formula: Formula, p: &Params) -> CliResult<Output> {
    let need = |name: &str, v: Option<u64>| v.ok_or_else(|| usage(format!("--{name} is required")));
    let small = |name: &str, v: Option<u64>| -> CliResult<usize> {
        let v = need(name, v)?;
        usize::try_from(v).ok().filter(|&v| v <= 10_000).ok_or_else(|| usage(format!("--{name} is too large")))
    };
    let (name, params, value): (&str, Vec<(&str, u64)>, String) = match formula {
        Formula::GoodTideman => {
            let (n, d) = (small("n", p.n)?, small("d", p.d)?);
            ("good-tideman", vec![("n", n as u64), ("d", d as u64)], good_tideman_bound(n, d).to_string())
        }
        Formula::Stirling => {
            let (n, r) = (small("n", p.n)?, small("r", p.r)?);
            ("stirling", vec![("n", n as u64), ("r", r as u64)], stirling_first_unsigned(n, r)?.to_string())
        }
        Formula::Warren => {
            let (n, m, delta) = (need("n", p.n)?, need("m", p.m)?, need("delta", p.delta)?);
            ("warren", vec![("n", n), ("m", m), ("delta", delta)], warren_bound(n, m, delta).to_string())
        }
        Formula::RadicalWarren => {
            let (n, m, delta, r, s) = (need("n", p.n)?, need("m", p.m)?, need("delta", p.delta)?, need("r", p.r)?, need("s", p.s)?);
            (
                "radical-warren",
                vec![("n", n), ("m", m), ("delta", delta), ("r", r), ("s", s)],
                radical_warren_bound(n, m, delta, r, s)?.to_string(),
            )
        }
        Formula::Exponent => {
            let (d, k) = (need("d", p.d)?, need("k", p.k)?);
            ("exponent", vec![("d", d), ("k", k)], main_theorem_exponent(d, k)?.to_string())
        }
    };
    let joined: Vec<String> = params.iter().map(|(k, v)| format!("{k}={v}")).collect();
    let map: serde_json::Map<String, serde_json::Value> = params.iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
    Ok(Output {
        json: json!({ "formula": name, "parameters": map, "value": value }),
        csv: Some(format!("formula,parameters,value\n{name},{},{value}\n", joined.join(";"))),
        ..Default::default()
    })
}

fn tagged_catalog_output<W: serde::Serialize>(cat: &Catalog<vantage::geometry::TaggedOrdering, W>, body: serde_json::Value) -> Output {
    Output {
        json: body,
        jsonl: Some(catalog_jsonl(cat)),
        csv: Some(catalog_csv_summary(cat)),
        ..Default::default()
    }
}

fn d1_flank_parts(k: u64, m: usize) -> CliResult<(Rational, Vec<Point>, Vec<Point>, Vec<HatConfig>)> {
    if k == 0 || m == 0 || m > 8 {
        return Err(usage("need k >= 1 and 1 <= m <= 8"));
    }
    let (a, b) = default_flanking_params(m);
    let r = flanking_scale(k, &a, &b);
    let (c1, c2) = gen_d1_flanking(k, &r, &a, &b)?;
    let grid = flanking_w_grid(&a, &b).iter().map(|(w1, w2)| hat_u_d1(k, &r, w1, w2)).collect();
    Ok((r, c1, c2, grid))
}

fn construct(g: &Global, c: &Construct) -> CliResult<Output> {
    match c {
        Construct::D1Flank { k, m } => {
            let (r, c1, c2, grid) = d1_flank_parts(*k, *m)?;
            let trials = grid.len();
            let cat = enumerate_hat_psi(&c1, &c2, *k, ParamSource::List(grid));
            let target = (*m as u64).pow(4);
            let body = json!({
                "k": k, "m": m, "r": format_rational(&r),
                "flank_one": c1, "flank_two": c2,
                "grid_size": trials, "distinct": cat.len(), "target": target,
            });
            let code = if cat.len() as u64 >= target { 0 } else { 1 };
            Ok(tagged_catalog_output(&cat, body).code(code))
        }
        Construct::Flanked { n, k, m, instances } => {
            if *n == 0 || *n > 6 || *instances == 0 {
                return Err(usage("need 1 <= n <= 6 and at least one instance"));
            }
            let center = generic_base_points(1, *n);
            let center_set = CandidateSet::new(center.clone())?;
            let center_cat = enumerate_psi_k_d1_exact(&center_set, *k)?;
            let witnesses: Vec<_> = center_cat.entries.values().cloned().collect();
            let (_, c1, c2, grid) = d1_flank_parts(*k as u64, *m)?;
            let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
            let mut rows = Vec::new();
            let mut all_ok = true;
            for i in 0..*instances {
                let v = &witnesses[rng.random_range(0..witnesses.len())];
                let u = &grid[rng.random_range(0..grid.len())];
                let hat = hat_ordering(u, &c1, &c2)?;
                let sigma = vantage::geometry::rank(&center_set, v)?;
                let stable = stabilize(Rational::from_integer(1.into()), |r| flanked_agrees(&center, Some(v), &c1, &c2, u, r));
                all_ok &= stable.is_ok();
                rows.push(json!({
                    "instance": i,
                    "center_ordering": sigma,
                    "hat_ordering": hat.to_string(),
                    "stable_from": stable.as_ref().ok().map(format_rational),
                    "error": stable.err().map(|e| e.to_string()),
                }));
            }
            Ok(Output::json(json!({ "n": n, "k": k, "m": m, "seed": g.seed, "instances": rows })).code(if all_ok { 0 } else { 1 }))
        }
        Construct::CheckOrderings { points } => {
            let set = load_points(points)?;
            let pts = set.points().to_vec();
            let (_, cells) = arrangement_cells(&set)?;
            let mut found = None;
            'outer: for (i, a) in cells.iter().enumerate() {
                for (j, b) in cells.iter().enumerate() {
                    if i != j {
                        if let Some(pair) = find_good_pair(&pts, &a.sample, &b.sample, g.seed ^ (i as u64) << 32 ^ j as u64, 256)? {
                            found = Some(pair);
                            break 'outer;
                        }
                    }
                }
            }
            let Some((v1, v2, _)) = found else {
                return Err(Error::NotApplicable("no good vantage pair found".into()).into());
            };
            let got = gen_check_orderings(&pts, &v1, &v2)?;
            let body = json!({
                "v1": v1, "v2": v2, "gamma": got.gamma, "xi": got.xi.len(), "distinct": got.catalog.len(),
            });
            Ok(tagged_catalog_output(&got.catalog, body).inputs(&[points]))
        }
        Construct::LowerBound { d, k, n } => {
            let cfg = build_lower_bound_config(*d, *k, *n)?;
            let body = json!({
                "dim": cfg.dim, "k": cfg.k, "n": cfg.candidates.len(),
                "candidates": cfg.candidates, "layers": cfg.layers, "catalog_size": cfg.catalog.len(),
            });
            Ok(Output {
                json: body,
                jsonl: Some(catalog_jsonl(&cfg.catalog)),
                csv: Some(catalog_csv_summary(&cfg.catalog)),
                ..Default::default()
            })
        }
    }
}

fn parse_ordering(text: &str, n: usize) -> CliResult<Ordering> {
    let perm: Vec<usize> = text
        .split(',')
        .map(|s| s.trim().parse::<usize>().map_err(|e| usage(format!("--ordering: {e}"))))
        .collect::<CliResult<_>>()?;
    let o = Ordering::new(perm);
    if o.len() != n || !o.is_permutation() {
        return Err(usage(format!("--ordering must be a permutation of 0..{n}")));
    }
    Ok(o)
}

fn witness(g: &Global, kind: WitnessKind, points: &Path, ordering: &str) -> CliResult<Output> {
    let c = load_points(points)?;
    let o = parse_ordering(ordering, c.len())?;
    let out = match kind {
        WitnessKind::D1 => Output::json(witness_d1(&c, &o)?),
        WitnessKind::Distmatrix => Output::json(witness_by_distance_matrix(&c, &o, g.precision_cap)?),
        WitnessKind::Affine => Output::json(witness_affine_independent(&c, &o)?),
        WitnessKind::Four => Output::json(witness_small(&c, &o)?),
    };
    Ok(out.inputs(&[points]))
}

fn unwitnessed(g: &Global, points: &Path, max_k: usize) -> CliResult<Output> {
    let c = load_points(points)?;
    if c.len() > 8 || max_k == 0 {
        return Err(usage("need at most 8 points and --max-k >= 1"));
    }
    let mut open: Vec<Ordering> = all_orderings(c.len()).into_iter().filter(|o| is_protrusive(&c, o)).collect();
    let protrusive = open.len();
    open.retain(|o| {
        let by_construction = match c.dim() {
            1 => witness_d1(&c, o),
            _ if c.len() <= 4 => witness_small(&c, o),
            _ => witness_by_distance_matrix(&c, o, g.precision_cap).map(|w| w.certificate),
        };
        !by_construction.is_ok_and(|w| w.verified)
    });
    let after_constructions = open.len();
    let mut sampled = Vec::new();
    for k in 1..=max_k {
        if open.is_empty() {
            break;
        }
        let cat = estimate_psi(&c, k, &SamplerSpec::default(), g.trials, g.seed.wrapping_add(k as u64));
        open.retain(|o| !cat.entries.contains_key(o));
        sampled.push(json!({ "k": k, "found": cat.len(), "still_open": open.len() }));
    }
    let body = json!({
        "n": c.len(), "protrusive": protrusive, "open_after_constructions": after_constructions,
        "sampling": sampled, "unwitnessed": open,
    });
    Ok(Output::json(body).inputs(&[points]))
}

fn verify(g: &Global, v: &Verify) -> CliResult<Output> {
    match v {
        Verify::Sixpoint { far_threshold } => {
            let step = rational_arg("grid-step", &g.grid_step)?;
            let far = rational_arg("far-threshold", far_threshold)?;
            let report = verify_six_point(&step, &far)?;
            let code = if report.pass { 0 } else { 1 };
            Ok(Output::json(report).code(code))
        }
        Verify::Noga { len, delta, m } => {
            let delta = rational_arg("delta", delta)?;
            let family = verify_noga_family(*len, &delta)?;
            let patterns = noga_sign_patterns(*m, &delta)?;
            let expected = 1usize << m;
            let pass = family.passed() && patterns.len() == expected;
            Ok(Output::json(json!({
                "family": family, "passed": family.passed(),
                "m": m, "patterns": patterns.len(), "expected_patterns": expected, "pass": pass,
            }))
            .code(if pass { 0 } else { 1 }))
        }
        Verify::Galois { r, s, points } => {
            let exp = galois_product_expand(*r, *s)?;
            let checks = galois_numeric_checks(&exp, g.seed, *points);
            let pass = exp.verified() && checks.iter().all(|c| c.agrees);
            Ok(Output::json(json!({
                "r": r, "s": s, "factors": exp.factors, "terms": exp.terms.len(), "degree": exp.degree(),
                "exponents_divisible": exp.exponents_divisible, "integer_coefficients": exp.integer_coefficients,
                "numeric": checks, "pass": pass, "expansion": exp,
            }))
            .code(if pass { 0 } else { 1 }))
        }
    }
}

fn plot(p: &Plot) -> CliResult<Output> {
    let (svg, inputs): (String, Vec<&Path>) = match p {
        Plot::Sixpoint => (svg::six_point(), vec![]),
        Plot::Points { points } => (svg::points(&load_points(points)?)?, vec![points]),
        Plot::Bisectors { points } => (svg::bisectors(&load_points(points)?)?, vec![points]),
        Plot::Flanked { n, k, m } => {
            if *n == 0 || *n > 16 {
                return Err(usage("need 1 <= n <= 16"));
            }
            let center = generic_base_points(1, *n);
            let (_, c1, c2, _) = d1_flank_parts(*k, *m)?;
            let mut r = Rational::from_integer(16.into());
            let set = loop {
                match build_flanked(&center, &c1, &c2, &r) {
                    Ok(s) => break s,
                    Err(Error::Degenerate(_)) if r < vantage::constructions::ladder_cap() => r *= Rational::from_integer(2.into()),
                    Err(e) => return Err(e.into()),
                }
            };
            (svg::flanked(&set, [center.len(), c1.len(), c2.len()])?, vec![])
        }
    };
    Ok(Output {
        svg: Some(svg),
        ..Default::default()
    }
    .inputs(&inputs))
}
