//! The acceptance checks, runnable from tests and from the command line.
//!
//! Each check returns a [`Criterion`] with a one-line verdict. Graphs and
//! regularity flags for the default configurations are built once and shared.

use std::collections::HashSet;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{HeightVector, PointConfig, Rational};
use crate::flipgraph::FlipGraph;
use crate::graph::{self, UNREACHED};
use crate::hypertri::{cross_section, hypertri_diameters, reduced_cross_section, stable_vertices};
use crate::oracle::commutation_class_count;
use crate::regularity::{classify, classify_all};
use crate::secondary::{diameter_report, opposite_isomorphism, potential, potential_value, skeleton, vert_k};
use crate::secondary::{SkeletonMode, Threshold};
use crate::subset::Subset;
use crate::tiling::{Extreme, Tiling};
use crate::{binomial, formulas};

#[derive(Clone, Debug)]
pub struct Criterion {
    pub id: u8,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl Criterion {
    pub fn line(&self) -> String {
        format!(
            "[{}] {:>2} {} ({:.1}s): {}",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.elapsed.as_secs_f64(),
            self.detail
        )
    }
}

#[derive(Clone, Debug)]
pub struct AuditOptions {
    pub seed: u64,
    /// Maximal chains sampled per `n` for the census check.
    pub chains: usize,
    /// Random (reference, edge, level) triples for the `n = 6` potential check.
    pub potential_samples: usize,
    /// Random generic height vectors per `n`.
    pub heights: usize,
    /// Include the `n = 7` enumeration.
    pub with_n7: bool,
}

impl Default for AuditOptions {
    fn default() -> Self {
        AuditOptions {
            seed: 2024,
            chains: 1000,
            potential_samples: 100_000,
            heights: 100,
            with_n7: true,
        }
    }
}

pub const NAMES: [&str; 12] = [
    "sigma_k diameters",
    "sigma_k + sigma_(k-1) diameters",
    "hypertriangulation diameters over all tilings",
    "enumeration counts vs commutation classes",
    "potential changes by at most one per flip",
    "maximal chain level censuses",
    "regular tilings lie on regular maximal chains",
    "regularity soundness",
    "strong separation and path fixtures",
    "opposite duality of sigma_k skeletons",
    "opposite pair at distance one in sigma_1",
    "vert_k transport",
];

/// Graphs and regularity flags for `a_i = i`, built on first use.
#[derive(Default)]
pub struct Fixtures {
    graphs: [OnceLock<(PointConfig, FlipGraph, Vec<bool>)>; 7],
}

impl Fixtures {
    pub fn new() -> Self {
        Self::default()
    }

    /// Standard configuration, its flip graph and regularity flags, `2 ≤ n ≤ 6`.
    pub fn get(&self, n: usize) -> &(PointConfig, FlipGraph, Vec<bool>) {
        self.graphs[n].get_or_init(|| {
            let c = PointConfig::standard(n).expect("n ≥ 2");
            let g = FlipGraph::enumerate(&c, 8).expect("n ≤ 8");
            let r = classify_all(&g, &c);
            (c, g, r)
        })
    }
}

pub fn run_all(opts: &AuditOptions) -> Vec<Criterion> {
    let fx = Fixtures::new();
    (1..=12).map(|id| run(id, opts, &fx)).collect()
}

pub fn run(id: u8, opts: &AuditOptions, fx: &Fixtures) -> Criterion {
    let start = Instant::now();
    let (pass, detail) = match id {
        1 => sigma_diameters(fx, SkeletonMode::SigmaK),
        2 => sigma_diameters(fx, SkeletonMode::SigmaKPlusPrev),
        3 => hypertri_check(fx),
        4 => counts(fx, opts),
        5 => lipschitz(fx, opts),
        6 => chain_census(fx, opts),
        7 => regular_chains(fx),
        8 => regularity_soundness(opts),
        9 => separation_fixtures(fx),
        10 => duality(fx),
        11 => remark_pair(fx),
        12 => vertk_transport(fx),
        _ => (false, format!("no criterion {id}")),
    };
    Criterion {
        id,
        name: NAMES.get(id as usize - 1).copied().unwrap_or("unknown"),
        pass,
        detail,
        elapsed: start.elapsed(),
    }
}

fn sigma_diameters(fx: &Fixtures, mode: SkeletonMode) -> (bool, String) {
    let mut ok = true;
    let mut parts = Vec::new();
    for n in 4..=6 {
        let (_, g, r) = fx.get(n);
        let mut row = Vec::new();
        for k in 1..=n - 2 {
            let d = skeleton(g, k, mode, Some(r)).and_then(|s| s.diameter().map(|d| d.value));
            let want = mode.formula(n, k);
            match d {
                Ok(d) => {
                    ok &= d as i64 == want;
                    row.push(format!("{d}/{want}"));
                }
                Err(e) => {
                    ok = false;
                    row.push(format!("error {e}"));
                }
            }
        }
        parts.push(format!("n={n}: {}", row.join(" ")));
    }
    (ok, format!("diameter/formula by k; {}", parts.join("; ")))
}

fn hypertri_check(fx: &Fixtures) -> (bool, String) {
    let mut ok = true;
    let mut parts = Vec::new();
    for n in 4..=6 {
        let (_, g, _) = fx.get(n);
        let mut row = Vec::new();
        for k in 1..=n - 2 {
            match hypertri_diameters(g, k) {
                Ok(rep) => {
                    ok &= rep.all_ok();
                    row.push(format!(
                        "{}/{} {}/{}{}",
                        rep.lifting.diameter,
                        rep.lifting.formula,
                        rep.reduced.diameter,
                        rep.reduced.formula,
                        if rep.all_ok() { "" } else { " (structure check failed)" }
                    ));
                }
                Err(e) => {
                    ok = false;
                    row.push(format!("error {e}"));
                }
            }
        }
        parts.push(format!("n={n}: {}", row.join(", ")));
    }
    (ok, format!("lifting and reduced diameter/formula by k; {}", parts.join("; ")))
}

fn counts(fx: &Fixtures, opts: &AuditOptions) -> (bool, String) {
    let mut ok = true;
    let mut parts = Vec::new();
    for (n, want) in [(3, 2), (4, 8), (5, 62), (6, 908)] {
        let got = fx.get(n).1.len();
        let oracle = commutation_class_count(n);
        ok &= got == want && oracle == want;
        parts.push(format!("n={n}: {got} (oracle {oracle})"));
    }
    if opts.with_n7 {
        let start = Instant::now();
        let c = PointConfig::standard(7).expect("valid");
        match FlipGraph::enumerate(&c, 8) {
            Ok(g) => {
                let secs = start.elapsed().as_secs_f64();
                let oracle = commutation_class_count(7);
                ok &= g.len() == 24_698 && oracle == 24_698 && secs < 600.0;
                parts.push(format!("n=7: {} in {secs:.1}s (oracle {oracle})", g.len()));
            }
            Err(e) => {
                ok = false;
                parts.push(format!("n=7: {e}"));
            }
        }
    }
    (ok, parts.join("; "))
}

fn lipschitz(fx: &Fixtures, opts: &AuditOptions) -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let (_, g5, _) = fx.get(5);
    let mut ok = true;
    let mut worst = 0;
    let refs: Vec<u32> = (0..10).map(|_| rng.gen_range(0..g5.len() as u32)).collect();
    for &r in &refs {
        for k in 1..=3 {
            let rep = potential(g5, r, k, Threshold::Definition);
            ok &= rep.max_edge_delta == 1;
            worst = worst.max(rep.max_edge_delta);
        }
    }
    let (_, g6, _) = fx.get(6);
    let mut worst6 = 0;
    for _ in 0..opts.potential_samples {
        let r = rng.gen_range(0..g6.len() as u32);
        let u = rng.gen_range(0..g6.len() as u32);
        let k = rng.gen_range(1..=4);
        let edges = g6.edges(u);
        let e = edges[rng.gen_range(0..edges.len())];
        let reference = g6.tiling(r);
        let d = potential_value(reference, g6.tiling(u), k, Threshold::Definition, false)
            - potential_value(reference, g6.tiling(e.to), k, Threshold::Definition, false);
        worst6 = worst6.max(d.abs());
    }
    ok &= worst6 <= 1;
    (
        ok,
        format!(
            "n=5: max |dP| = {worst} over references {refs:?}, k = 1..3; n=6: max |dP| = {worst6} over {} sampled edges",
            opts.potential_samples
        ),
    )
}

fn chain_census(fx: &Fixtures, opts: &AuditOptions) -> (bool, String) {
    let mut ok = true;
    let mut parts = Vec::new();
    for n in [5, 6] {
        let (_, g, _) = fx.get(n);
        let want: Vec<usize> = (1..=n - 2).map(|k| formulas::chain_level_count(n, k) as usize).collect();
        let mut stuck = 0;
        let mut wrong = 0;
        for i in 0..opts.chains {
            match g.sample_chain(opts.seed.wrapping_add(i as u64)) {
                Ok(chain) => {
                    let census = chain.level_census(n);
                    if census != want || census.iter().sum::<usize>() != binomial(n, 3) {
                        wrong += 1;
                    }
                }
                Err(_) => stuck += 1,
            }
        }
        ok &= stuck == 0 && wrong == 0 && opts.chains >= 1000;
        parts.push(format!("n={n}: {} chains, census {want:?}, {wrong} off, {stuck} stuck", opts.chains));
    }
    (ok, parts.join("; "))
}

fn regular_chains(fx: &Fixtures) -> (bool, String) {
    let (_, g, r) = fx.get(5);
    let total = binomial(5, 3) as u32;
    let adj = g.adjacency_where(|u, e| r[u as usize] && r[e.to as usize]);
    let from_min = graph::bfs_distances(&adj, g.min_id());
    let from_max = graph::bfs_distances(&adj, g.max_id());
    let mut ok = true;
    let mut regular = 0;
    for v in 0..g.len() as u32 {
        if !r[v as usize] {
            continue;
        }
        regular += 1;
        let (a, b) = (from_min[v as usize], from_max[v as usize]);
        ok &= a != UNREACHED && b != UNREACHED && a + b == total;
        let chain = g.max_chain_through(v, Some(r));
        ok &= chain.is_some_and(|c| c.len() == total as usize && c.nodes.iter().all(|&x| r[x as usize]));
    }
    (ok, format!("n=5: {regular} regular tilings, each on an all-regular chain of length {total}"))
}

fn random_generic_heights(config: &PointConfig, rng: &mut ChaCha8Rng) -> HeightVector {
    loop {
        let h = HeightVector(
            (0..config.n())
                .map(|_| Rational::from_integer(BigInt::from(rng.gen_range(-1_000_000i64..=1_000_000))))
                .collect(),
        );
        if config.is_generic_height(&h) {
            return h;
        }
    }
}

fn regularity_soundness(opts: &AuditOptions) -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x5eed);
    let mut ok = true;
    let mut failures = 0;
    for n in 4..=7 {
        let c = PointConfig::standard(n).expect("valid");
        for _ in 0..opts.heights {
            let h = random_generic_heights(&c, &mut rng);
            let t = Tiling::from_heights(&c, &h).expect("generic");
            let cert = classify(&c, &t);
            let reproduced = cert
                .witness
                .as_ref()
                .is_some_and(|w| Tiling::from_heights(&c, w).as_ref() == Ok(&t));
            if !(cert.regular && reproduced) {
                failures += 1;
            }
        }
    }
    for n in 2..=7 {
        let c = PointConfig::standard(n).expect("valid");
        for which in [Extreme::Min, Extreme::Max] {
            ok &= classify(&c, &Tiling::extremal(&c, which)).regular;
        }
    }
    ok &= failures == 0;
    (
        ok,
        format!(
            "{} random heights per n = 4..7, {failures} not reproduced; T_min, T_max regular for n = 2..7: {ok}",
            opts.heights
        ),
    )
}

fn s(labels: &[usize]) -> Subset {
    Subset::from_labels(labels.iter().copied())
}

/// The tilings of `g` whose level-`k` cross-section is exactly `path`.
pub fn tilings_with_path(g: &FlipGraph, k: usize, path: &[Subset]) -> Vec<u32> {
    (0..g.len() as u32)
        .filter(|&v| cross_section(g.tiling(v), k).is_ok_and(|p| p.vertices == path))
        .collect()
}

fn separation_fixtures(fx: &Fixtures) -> (bool, String) {
    let mut ok = true;
    let mut notes = Vec::new();
    for n in 2..=5 {
        let (_, g, _) = fx.get(n);
        let all = g.tilings().iter().all(|t| {
            let v = t.vertices();
            v.iter()
                .enumerate()
                .all(|(i, a)| v[i + 1..].iter().all(|b| a.strongly_separated(*b)))
        });
        ok &= all;
    }
    notes.push(format!("V(T) pairwise separated for n <= 5: {ok}"));

    let (_, g4, _) = fx.get(4);
    let bad = [s(&[1, 2]), s(&[1, 3]), s(&[1, 4]), s(&[2, 4]), s(&[3, 4])];
    let hits = tilings_with_path(g4, 2, &bad).len();
    ok &= hits == 0;
    notes.push(format!("12-13-14-24-34 occurs {hits} times"));
    let lifting = [s(&[1, 2]), s(&[1, 3]), s(&[1, 4]), s(&[3, 4])];
    let hits = tilings_with_path(g4, 2, &lifting).len();
    ok &= hits > 0;
    notes.push(format!("12-13-14-34 occurs {hits} times"));

    let (fixture_ok, fixture_note) = reduced_fixture();
    ok &= fixture_ok;
    notes.push(fixture_note);
    (ok, notes.join("; "))
}

fn compact(path: &[Subset]) -> String {
    path.iter()
        .map(|x| x.labels().iter().map(|l| l.to_string()).collect::<String>())
        .collect::<Vec<_>>()
        .join("-")
}

/// Points −2..2, tilings whose level-2 path is 12-13-34-35-45: the reduced
/// path of their 1-class is expected to drop {3,5}. Also reports what the
/// mirrored construction (2-class, level 2) keeps, for comparison.
pub fn reduced_fixture() -> (bool, String) {
    let c = PointConfig::new((-2..=2).map(|i| Rational::from_integer(BigInt::from(i))).collect()).expect("valid");
    let g = FlipGraph::enumerate(&c, 8).expect("n = 5");
    let full = [s(&[1, 2]), s(&[1, 3]), s(&[3, 4]), s(&[3, 5]), s(&[4, 5])];
    let want = vec![s(&[1, 2]), s(&[1, 3]), s(&[3, 4]), s(&[4, 5])];
    let nodes = tilings_with_path(&g, 2, &full);
    let mut reduced: Vec<Vec<Subset>> = Vec::new();
    let mut mirrored: Vec<Vec<Subset>> = Vec::new();
    for &v in &nodes {
        if let Ok(p) = reduced_cross_section(&g, v, 1) {
            if !reduced.contains(&p.vertices) {
                reduced.push(p.vertices);
            }
        }
        if let Ok(p) = stable_vertices(&g, v, 2, 2) {
            if !mirrored.contains(&p) {
                mirrored.push(p);
            }
        }
    }
    let ok = !nodes.is_empty() && reduced.iter().any(|p| *p == want);
    let show = |list: &[Vec<Subset>]| list.iter().map(|p| compact(p)).collect::<Vec<_>>().join(" | ");
    (
        ok,
        format!(
            "{} tilings with level-2 path 12-13-34-35-45; reduced path {} (expected {}); mirrored construction gives {}",
            nodes.len(),
            show(&reduced),
            compact(&want),
            show(&mirrored)
        ),
    )
}

fn duality(fx: &Fixtures) -> (bool, String) {
    let mut ok = true;
    let mut checked = 0;
    for n in 3..=6 {
        let (_, g, r) = fx.get(n);
        for k in 1..=n - 2 {
            let a = skeleton(g, k, SkeletonMode::SigmaK, Some(r));
            let b = skeleton(g, n - 1 - k, SkeletonMode::SigmaK, Some(r));
            match (a, b) {
                (Ok(a), Ok(b)) => {
                    let iso = opposite_isomorphism(g, &a, &b)
                        && a.diameter().map(|d| d.value) == b.diameter().map(|d| d.value);
                    ok &= iso;
                    checked += 1;
                }
                _ => ok = false,
            }
        }
    }
    (ok, format!("{checked} (n, k) pairs for n = 3..6, class bijection via opposite"))
}

fn remark_pair(fx: &Fixtures) -> (bool, String) {
    let (_, g, r) = fx.get(5);
    let Ok(sk) = skeleton(g, 1, SkeletonMode::SigmaK, Some(r)) else {
        return (false, "no sigma_1 skeleton".into());
    };
    let mut found = None;
    let mut pairs = 0;
    for v in 0..g.len() as u32 {
        let w = g.opposite_id(v);
        if v > w || !r[v as usize] || !r[w as usize] {
            continue;
        }
        let (Some(a), Some(b)) = (sk.partition.class_of(v), sk.partition.class_of(w)) else {
            continue;
        };
        if sk.adjacency[a as usize].contains(&b) {
            pairs += 1;
            found.get_or_insert((v, w));
        }
    }
    match found {
        Some((v, w)) => (
            true,
            format!(
                "{pairs} opposite pairs adjacent in sigma_1, e.g. nodes {v} and {w} (hamming {})",
                (g.key(v) ^ g.key(w)).count_ones()
            ),
        ),
        None => (false, "no opposite pair has adjacent sigma_1 classes".into()),
    }
}

fn vertk_transport(fx: &Fixtures) -> (bool, String) {
    let (c, g, r) = fx.get(5);
    let mut ok = true;
    let mut violations = 0;
    let vectors: Vec<Vec<Vec<Rational>>> = g.tilings().iter().map(|t| (0..=3).map(|k| vert_k(c, t, k)).collect()).collect();
    for u in 0..g.len() {
        for e in g.edges(u as u32) {
            for k in 0..=3 {
                let changed = vectors[u][k] != vectors[e.to as usize][k];
                if changed != (e.level as usize == k) {
                    violations += 1;
                }
            }
        }
    }
    ok &= violations == 0;
    let mut counts = Vec::new();
    for k in 1..=3 {
        let distinct: HashSet<&Vec<Rational>> = (0..g.len()).filter(|&v| r[v]).map(|v| &vectors[v][k]).collect();
        let classes = skeleton(g, k, SkeletonMode::SigmaK, Some(r)).map(|s| s.class_count()).unwrap_or(0);
        let rep = diameter_report(g, c, r, k).map(|d| d.vertk_distinct_ok).unwrap_or(false);
        ok &= distinct.len() == classes && rep;
        counts.push(format!("k={k}: {}/{classes}", distinct.len()));
    }
    (
        ok,
        format!(
            "n=5: {violations} edge violations; distinct vert_k / sigma_k classes {}",
            counts.join(", ")
        ),
    )
}
