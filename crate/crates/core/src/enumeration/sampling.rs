//! Seeded Monte-Carlo search for orderings.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::constructions::{check_ordering, hat_ordering, CheckConfig, HatConfig};
use crate::enumeration::psi1::rank_single;
use crate::enumeration::{Catalog, OrderingCatalog};
use crate::error::Error;
use crate::geometry::{rank, CandidateSet, Ordering, Point, TaggedOrdering, VantageMultiset};
use crate::scalar::rational::from_f64;
use crate::scalar::Interval;

/// Mixture used to draw vantage points. Scales are relative to the diameter
/// of the candidates; each draw picks one component uniformly.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplerSpec {
    /// Half-widths of uniform boxes around the centroid.
    pub box_scales: Vec<f64>,
    /// Standard deviations of Gaussians centered at a random candidate.
    pub gaussian_scales: Vec<f64>,
    /// Standard deviation of small perturbations of a random candidate.
    pub near_scale: f64,
    /// Standard deviations of Gaussians centered at a random vertex of the
    /// bisector arrangement, where the smallest cells sit. Used in one and
    /// two dimensions.
    pub vertex_scales: Vec<f64>,
}

impl Default for SamplerSpec {
    fn default() -> Self {
        SamplerSpec {
            box_scales: vec![1.0, 10.0, 100.0],
            gaussian_scales: vec![0.1, 1.0, 10.0],
            near_scale: 1e-3,
            vertex_scales: vec![1e-6, 1e-4, 1e-2],
        }
    }
}

/// Where parameters come from: seeded sampling or an explicit list.
#[derive(Debug, Clone)]
pub enum ParamSource<P> {
    Sample {
        trials: u64,
        seed: u64,
        spec: SamplerSpec,
    },
    List(Vec<P>),
}

/// Geometry of the candidates that the sampler is scaled to.
struct Frame {
    centers: Vec<Vec<f64>>,
    centroid: Vec<f64>,
    diam: f64,
    vertices: Vec<Vec<f64>>,
}

const MAX_VERTICES: usize = 100_000;

/// Bisector hyperplanes `a·x = b` of candidate pairs and, for `d ≤ 2`,
/// the points where `d` of them meet.
fn arrangement_vertices(centers: &[Vec<f64>], dim: usize) -> Vec<Vec<f64>> {
    let mut planes = Vec::new();
    for (i, p) in centers.iter().enumerate() {
        for q in &centers[i + 1..] {
            let a: Vec<f64> = q.iter().zip(p).map(|(y, x)| 2.0 * (y - x)).collect();
            let b = q.iter().map(|y| y * y).sum::<f64>() - p.iter().map(|x| x * x).sum::<f64>();
            planes.push((a, b));
        }
    }
    match dim {
        1 => planes.iter().filter(|(a, _)| a[0] != 0.0).map(|(a, b)| vec![b / a[0]]).collect(),
        2 => {
            let mut out = Vec::new();
            for (i, (a, b)) in planes.iter().enumerate() {
                for (c, e) in &planes[i + 1..] {
                    let det = a[0] * c[1] - a[1] * c[0];
                    let scale = (a[0].hypot(a[1]) * c[0].hypot(c[1])).max(f64::MIN_POSITIVE);
                    if det.abs() > 1e-12 * scale && out.len() < MAX_VERTICES {
                        out.push(vec![(b * c[1] - a[1] * e) / det, (a[0] * e - b * c[0]) / det]);
                    }
                }
            }
            out
        }
        _ => Vec::new(),
    }
}

impl Frame {
    fn new(points: &[&Point], dim: usize) -> Self {
        let centers: Vec<Vec<f64>> = points.iter().map(|p| p.to_f64()).collect();
        let mut centroid = vec![0.0; dim];
        for c in &centers {
            for (a, b) in centroid.iter_mut().zip(c) {
                *a += b / centers.len() as f64;
            }
        }
        let mut diam = 0.0f64;
        for a in &centers {
            for b in &centers {
                let d: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt();
                diam = diam.max(d);
            }
        }
        if !(diam > 0.0) {
            diam = 1.0;
        }
        if centers.is_empty() {
            return Frame {
                centers: vec![vec![0.0; dim]],
                centroid,
                diam,
                vertices: Vec::new(),
            };
        }
        let vertices = arrangement_vertices(&centers, dim);
        Frame {
            centers,
            centroid,
            diam,
            vertices,
        }
    }
}

fn draw(spec: &SamplerSpec, frame: &Frame, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let nb = spec.box_scales.len();
    let ng = spec.gaussian_scales.len();
    let nv = if frame.vertices.is_empty() { 0 } else { spec.vertex_scales.len() };
    let comp = rng.random_range(0..nb + ng + 1 + nv);
    if comp > nb + ng {
        let sigma = spec.vertex_scales[comp - nb - ng - 1] * frame.diam;
        let center = &frame.vertices[rng.random_range(0..frame.vertices.len())];
        center
            .iter()
            .map(|c| {
                let z: f64 = StandardNormal.sample(rng);
                c + sigma * z
            })
            .collect()
    } else if comp < nb {
        let h = spec.box_scales[comp] * frame.diam;
        frame.centroid.iter().map(|c| c + rng.random_range(-h..h)).collect()
    } else {
        let sigma = if comp < nb + ng {
            spec.gaussian_scales[comp - nb]
        } else {
            spec.near_scale
        } * frame.diam;
        let center = &frame.centers[rng.random_range(0..frame.centers.len())];
        center
            .iter()
            .map(|c| {
                let z: f64 = StandardNormal.sample(rng);
                c + sigma * z
            })
            .collect()
    }
}

/// One point drawn from the mixture, as an exact rational point.
pub fn sample_point(spec: &SamplerSpec, points: &[&Point], dim: usize, rng: &mut ChaCha8Rng) -> Point {
    let frame = Frame::new(points, dim);
    to_point(&draw(spec, &frame, rng))
}

fn to_point(x: &[f64]) -> Point {
    Point::new(x.iter().map(|&v| from_f64(v)).collect())
}

enum Outcome<K, W> {
    Found(K, W),
    Tie,
    Undecided,
}

struct Partial<K, W> {
    found: BTreeMap<K, (u64, W)>,
    ties: u64,
    undecided: u64,
}

impl<K: Ord, W> Partial<K, W> {
    fn new() -> Self {
        Partial {
            found: BTreeMap::new(),
            ties: 0,
            undecided: 0,
        }
    }

    fn add(&mut self, trial: u64, key: K, w: W) {
        match self.found.get(&key) {
            Some((t, _)) if *t <= trial => {}
            _ => {
                self.found.insert(key, (trial, w));
            }
        }
    }

    fn merge(mut self, other: Self) -> Self {
        self.ties += other.ties;
        self.undecided += other.undecided;
        for (k, (t, w)) in other.found {
            self.add(t, k, w);
        }
        self
    }
}

fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Runs `trials` independent draws in parallel. The result does not depend
/// on scheduling: each trial has its own stream and, for repeated keys, the
/// lowest trial index wins.
fn run_trials<K, W, F>(trials: u64, seed: u64, f: F) -> Catalog<K, W>
where
    K: Ord + Send,
    W: Send,
    F: Fn(&mut ChaCha8Rng) -> Outcome<K, W> + Sync,
{
    let partial = (0..trials)
        .into_par_iter()
        .fold(Partial::new, |mut acc, t| {
            let mut rng = trial_rng(seed, t);
            match f(&mut rng) {
                Outcome::Found(k, w) => acc.add(t, k, w),
                Outcome::Tie => acc.ties += 1,
                Outcome::Undecided => acc.undecided += 1,
            }
            acc
        })
        .reduce(Partial::new, Partial::merge);
    Catalog {
        entries: partial.found.into_iter().map(|(k, (_, w))| (k, w)).collect(),
        trials,
        ties_skipped: partial.ties,
        undecided_skipped: partial.undecided,
    }
}

fn classify<K, W>(r: crate::Result<K>, w: W) -> Outcome<K, W> {
    match r {
        Ok(k) => Outcome::Found(k, w),
        Err(Error::Tie { .. }) => Outcome::Tie,
        Err(_) => Outcome::Undecided,
    }
}

/// Order by distance sums from interval enclosures, or `None` when two
/// enclosures overlap. The draws are exactly representable, so the only
/// rounding is in the candidates and the arithmetic, both enclosed. A
/// single vantage point is ranked by squared distance.
fn rank_f64(boxes: &[Vec<Interval>], xs: &[Vec<f64>]) -> Option<Ordering> {
    let sq = |p: &[Interval], x: &[f64]| {
        p.iter()
            .zip(x)
            .fold(Interval::point(0.0), |acc, (c, &v)| acc + (*c - Interval::point(v)).square())
    };
    let d: Vec<Interval> = match xs {
        [x] => boxes.iter().map(|p| sq(p, x)).collect(),
        _ => boxes
            .iter()
            .map(|p| {
                xs.iter().try_fold(Interval::point(0.0), |acc, x| Some(acc + sq(p, x).sqrt().ok()?))
            })
            .collect::<Option<_>>()?,
    };
    let mut idx: Vec<usize> = (0..d.len()).collect();
    idx.sort_by(|&a, &b| d[a].mid().total_cmp(&d[b].mid()));
    idx.windows(2)
        .all(|w| d[w[0]].certainly_lt(&d[w[1]]))
        .then(|| Ordering::new(idx))
}

/// Orderings of `c` found by sampling `k`-point vantage multisets. Never
/// reports an ordering outside `Ψ_k(C)`, and is deterministic for a seed.
pub fn estimate_psi(c: &CandidateSet, k: usize, spec: &SamplerSpec, trials: u64, seed: u64) -> OrderingCatalog {
    let refs: Vec<&Point> = c.points().iter().collect();
    let frame = Frame::new(&refs, c.dim());
    let boxes: Vec<Vec<Interval>> = c
        .points()
        .iter()
        .map(|p| p.coords().iter().map(Interval::from_rational).collect())
        .collect();
    run_trials(trials, seed, |rng| {
        let raw: Vec<Vec<f64>> = (0..k.max(1)).map(|_| draw(spec, &frame, rng)).collect();
        if let Some(o) = rank_f64(&boxes, &raw) {
            let pts = raw.iter().map(|x| to_point(x)).collect();
            return Outcome::Found(o, VantageMultiset::from_points(pts).expect("nonempty, same dimension"));
        }
        let pts: Vec<Point> = raw.iter().map(|x| to_point(x)).collect();
        if k == 1 {
            let v = &pts[0];
            return match rank_single(c, v) {
                Some(o) => Outcome::Found(o, VantageMultiset::single(v.clone())),
                None => Outcome::Tie,
            };
        }
        let v = VantageMultiset::from_points(pts).expect("nonempty, same dimension");
        let r: crate::Result<Ordering> = rank(c, &v);
        classify(r, v)
    })
}

fn list_catalog<P, K, F>(params: Vec<P>, f: F) -> Catalog<K, P>
where
    P: Send + Sync + Clone,
    K: Ord + Send,
    F: Fn(&P) -> crate::Result<K> + Sync,
{
    let n = params.len() as u64;
    let results: Vec<Outcome<K, P>> = params.par_iter().map(|p| classify(f(p), p.clone())).collect();
    let mut cat = Catalog {
        trials: n,
        ..Catalog::default()
    };
    for r in results {
        match r {
            Outcome::Found(k, w) => {
                cat.insert(k, w);
            }
            Outcome::Tie => cat.ties_skipped += 1,
            Outcome::Undecided => cat.undecided_skipped += 1,
        }
    }
    cat
}

/// Tagged orderings of `c1 ⊔ c2` under the hat distance functions.
pub fn enumerate_hat_psi(
    c1: &[Point],
    c2: &[Point],
    k: u64,
    source: ParamSource<HatConfig>,
) -> Catalog<TaggedOrdering, HatConfig> {
    match source {
        ParamSource::List(list) => list_catalog(list, |u| hat_ordering(u, c1, c2)),
        ParamSource::Sample { trials, seed, spec } => {
            let dim = c1.iter().chain(c2).next().map_or(1, Point::dim);
            let refs: Vec<&Point> = c1.iter().chain(c2).collect();
            let frame = Frame::new(&refs, dim);
            run_trials(trials, seed, |rng| {
                let u = HatConfig {
                    k,
                    u1: to_point(&draw(&spec, &frame, rng)),
                    u2: to_point(&draw(&spec, &frame, rng)),
                };
                classify(hat_ordering(&u, c1, c2), u)
            })
        }
    }
}

/// Tagged orderings of `c1 ⊔ c2` under the check distance functions.
pub fn enumerate_check_psi(
    c1: &[Point],
    c2: &[Point],
    source: ParamSource<CheckConfig>,
) -> Catalog<TaggedOrdering, CheckConfig> {
    match source {
        ParamSource::List(list) => list_catalog(list, |v| check_ordering(v, c1, c2)),
        ParamSource::Sample { trials, seed, spec } => {
            let dim = c1.iter().chain(c2).next().map_or(1, Point::dim);
            let refs: Vec<&Point> = c1.iter().chain(c2).collect();
            let frame = Frame::new(&refs, dim);
            run_trials(trials, seed, |rng| {
                let v1 = to_point(&draw(&spec, &frame, rng));
                let v2 = to_point(&draw(&spec, &frame, rng));
                let xs = &spec.gaussian_scales;
                let scale = if xs.is_empty() { 1.0 } else { xs[rng.random_range(0..xs.len())] };
                let z: f64 = StandardNormal.sample(rng);
                let x = from_f64(z * scale * frame.diam);
                let y = from_f64(10f64.powf(rng.random_range(-4.0..4.0)) / frame.diam);
                let cfg = CheckConfig { v1, v2, x, y };
                classify(check_ordering(&cfg, c1, c2), cfg)
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumeration::{enumerate_psi1_exact, verify_catalog};
    use crate::scalar::int;

    #[test]
    fn zero_trials_is_empty() {
        let c = CandidateSet::from_ints(&[&[0], &[1]]).unwrap();
        let cat = estimate_psi(&c, 1, &SamplerSpec::default(), 0, 1);
        assert!(cat.is_empty());
    }

    #[test]
    fn collinear_three_found_exactly() {
        let c = CandidateSet::from_ints(&[&[0], &[1], &[2]]).unwrap();
        let cat = estimate_psi(&c, 1, &SamplerSpec::default(), 10_000, 7);
        let exact = enumerate_psi1_exact(&c).unwrap();
        assert_eq!(cat.keys().collect::<Vec<_>>(), exact.keys().collect::<Vec<_>>());
        verify_catalog(&c, &cat).unwrap();
    }

    #[test]
    fn deterministic_per_seed() {
        let c = CandidateSet::from_ints(&[&[0, 0], &[3, 1], &[1, 4], &[-1, 2]]).unwrap();
        let a = estimate_psi(&c, 2, &SamplerSpec::default(), 2_000, 42);
        let b = estimate_psi(&c, 2, &SamplerSpec::default(), 2_000, 42);
        assert_eq!(a, b);
        verify_catalog(&c, &a).unwrap();
    }

    #[test]
    fn hat_singletons_give_both_interleavings() {
        let c1 = vec![Point::scalar(int(0))];
        let c2 = vec![Point::scalar(int(0))];
        let cat = enumerate_hat_psi(
            &c1,
            &c2,
            1,
            ParamSource::Sample {
                trials: 2_000,
                seed: 3,
                spec: SamplerSpec::default(),
            },
        );
        assert_eq!(cat.len(), 2);
    }

    #[test]
    fn check_singletons_give_both_orders() {
        let c = vec![Point::scalar(int(0))];
        let cat = enumerate_check_psi(
            &c,
            &c,
            ParamSource::Sample {
                trials: 2_000,
                seed: 5,
                spec: SamplerSpec::default(),
            },
        );
        assert_eq!(cat.len(), 2);
    }
}
