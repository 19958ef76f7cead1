use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

use crate::eig::interval::{dyadic_owned, rational};
use crate::eig::vector::{eigenvector_estimate, Target, SCALE_BITS};
use crate::eig::{Interval, Spectrum};
use crate::graph::{bipartiteness, count_walks, diameter, distances_and_diameter, is_connected, Diameter, Graph};

use super::{decide_cached, hyp, BoundError, BoundVerdict, CheckId, Hypothesis, Relation, TolerancePolicy};

fn int(x: i64) -> BigRational {
    BigRational::from_integer(x.into())
}

/// `k / (mu^(2D) n)` for an enclosure `mu` with positive lower end.
fn inverse_power_rhs(mu: &Interval, two_d: u32, n: usize, k: i64) -> Interval {
    let denom = mu.pow(two_d).scale(&int(n as i64));
    denom
        .recip()
        .expect("spectral radius of a graph with an edge is at least 1")
        .scale(&int(k))
}

fn connected_diameter(g: &Graph) -> Option<u32> {
    diameter(g).finite()
}

/// `H` on the vertex set of `G`, validated as a proper edge subset.
fn normalized_subgraph(g: &Graph, h: &Graph) -> Result<Graph, BoundError> {
    if h.order() > g.order() {
        return Err(BoundError::NotSubgraph);
    }
    let h = if h.order() < g.order() {
        h.padded(g.order())
    } else {
        h.clone()
    };
    if !h.is_edge_subset_of(g) {
        return Err(BoundError::NotSubgraph);
    }
    if h == *g {
        return Err(BoundError::NotProperSubgraph);
    }
    Ok(h)
}

/// `mu(G) - mu(H) > 1 / (mu^(2D) n)`, plus the doubled right-hand side when `H` is connected.
pub fn check_subgraph_gap(g: &Graph, h: &Graph, policy: &TolerancePolicy) -> Result<Vec<BoundVerdict>, BoundError> {
    let h = normalized_subgraph(g, h)?;
    let d = connected_diameter(g);
    let sg = d.map(|_| Spectrum::with_config(g, &policy.eig));
    Ok(subgraph_gap(sg.as_ref(), d, &h, policy))
}

/// [`check_subgraph_gap`] for every maximal proper subgraph `G - e`, sharing the
/// work on `G`. Edges come in [`Graph::edges`] order.
pub fn check_edge_deletions(g: &Graph, policy: &TolerancePolicy) -> Vec<((usize, usize), Vec<BoundVerdict>)> {
    let d = connected_diameter(g);
    let sg = d.map(|_| Spectrum::with_config(g, &policy.eig));
    g.edges()
        .map(|(u, v)| ((u, v), subgraph_gap(sg.as_ref(), d, &g.without_edge(u, v), policy)))
        .collect()
}

fn subgraph_gap(sg: Option<&Spectrum>, d: Option<u32>, h: &Graph, policy: &TolerancePolicy) -> Vec<BoundVerdict> {
    let h_connected = is_connected(h);
    let base = vec![hyp("G_connected", d.is_some()), hyp("H_proper_subgraph", true)];
    let (Some(d), Some(sg)) = (d, sg) else {
        return vec![
            BoundVerdict::skipped(CheckId::T1, Relation::Gt, base.clone()),
            BoundVerdict::skipped(CheckId::T1aStrong, Relation::Gt, base),
        ];
    };
    let n = h.order();
    let sh = Spectrum::with_config(h, &policy.eig);
    let run = |k: i64| {
        let params = [2 * d as i64, n as i64, k];
        decide_cached(
            policy,
            Relation::Gt,
            "subgraph_gap",
            &[sg.charpoly(), sh.charpoly()],
            &params,
            |b| {
                let mu = sg.largest(b).interval();
                let lhs = &mu - &sh.largest(b).interval();
                (lhs, inverse_power_rhs(&mu, 2 * d, n, k))
            },
        )
    };
    let (lhs, rhs, bits) = run(1);
    let mut out = vec![BoundVerdict::decided(
        CheckId::T1,
        Relation::Gt,
        base.clone(),
        lhs,
        rhs,
        bits,
    )];
    let mut strong_hyps = base;
    strong_hyps.push(hyp("H_connected", h_connected));
    if h_connected {
        let (lhs, rhs, bits) = run(2);
        out.push(BoundVerdict::decided(
            CheckId::T1aStrong,
            Relation::Gt,
            strong_hyps,
            lhs,
            rhs,
            bits,
        ));
    } else {
        out.push(BoundVerdict::skipped(CheckId::T1aStrong, Relation::Gt, strong_hyps));
    }
    out
}

/// `mu(G) + mu_min(G) > 2 / (mu^(2D) n)` for connected nonbipartite `G`.
pub fn check_nonbipartite_gap(g: &Graph, policy: &TolerancePolicy) -> BoundVerdict {
    let d = connected_diameter(g);
    let nonbip = !bipartiteness(g).is_bipartite();
    let hyps = vec![hyp("G_connected", d.is_some()), hyp("G_nonbipartite", nonbip)];
    let (Some(d), true) = (d, nonbip) else {
        return BoundVerdict::skipped(CheckId::T2, Relation::Gt, hyps);
    };
    let s = Spectrum::with_config(g, &policy.eig);
    let params = [2 * d as i64, g.order() as i64];
    let (lhs, rhs, bits) = decide_cached(
        policy,
        Relation::Gt,
        "nonbipartite_gap",
        &[s.charpoly()],
        &params,
        |b| {
            let mu = s.largest(b).interval();
            (
                &mu + &s.smallest(b).interval(),
                inverse_power_rhs(&mu, 2 * d, g.order(), 2),
            )
        },
    );
    BoundVerdict::decided(CheckId::T2, Relation::Gt, hyps, lhs, rhs, bits)
}

/// Regular variants: `mu(G) - mu(H) > 1 / (n (D + 1))` when `h` is given, and
/// `mu(G) + mu_min(G) > 2 / (n (2D + 1))`.
pub fn check_regular_variants(
    g: &Graph,
    h: Option<&Graph>,
    policy: &TolerancePolicy,
) -> Result<Vec<BoundVerdict>, BoundError> {
    let h = h.map(|h| normalized_subgraph(g, h)).transpose()?;
    let d = connected_diameter(g);
    let regular = is_regular(g);
    let nonbip = !bipartiteness(g).is_bipartite();
    let n = g.order() as i64;
    let s = (d.is_some() && regular).then(|| Spectrum::with_config(g, &policy.eig));
    let mut out = Vec::new();
    if let Some(h) = h {
        out.push(regular_subgraph_gap(s.as_ref(), d, regular, &h, policy));
    }
    let hyps = vec![
        hyp("G_connected", d.is_some()),
        hyp("G_regular", regular),
        hyp("G_nonbipartite", nonbip),
    ];
    match (d, &s, nonbip) {
        (Some(d), Some(s), true) => {
            let rhs = Interval::point(rational(2, n * (2 * d as i64 + 1)));
            let (lhs, rhs, bits) = decide_cached(
                policy,
                Relation::Gt,
                "regular_nonbipartite_gap",
                &[s.charpoly()],
                &[n, d as i64],
                |b| (&s.largest(b).interval() + &s.smallest(b).interval(), rhs.clone()),
            );
            out.push(BoundVerdict::decided(CheckId::T21, Relation::Gt, hyps, lhs, rhs, bits));
        }
        _ => out.push(BoundVerdict::skipped(CheckId::T21, Relation::Gt, hyps)),
    }
    Ok(out)
}

/// The `T11` verdict of [`check_regular_variants`] for every `G - e`, sharing
/// the work on `G`. Edges come in [`Graph::edges`] order.
pub fn check_regular_edge_deletions(g: &Graph, policy: &TolerancePolicy) -> Vec<((usize, usize), BoundVerdict)> {
    let d = connected_diameter(g);
    let regular = is_regular(g);
    let s = (d.is_some() && regular).then(|| Spectrum::with_config(g, &policy.eig));
    g.edges()
        .map(|(u, v)| {
            (
                (u, v),
                regular_subgraph_gap(s.as_ref(), d, regular, &g.without_edge(u, v), policy),
            )
        })
        .collect()
}

fn is_regular(g: &Graph) -> bool {
    let degrees = g.degrees();
    degrees.iter().all(|&x| x == degrees[0])
}

/// `s` is the spectrum of `G`, present when `G` is connected and regular.
fn regular_subgraph_gap(
    s: Option<&Spectrum>,
    d: Option<u32>,
    regular: bool,
    h: &Graph,
    policy: &TolerancePolicy,
) -> BoundVerdict {
    let hyps = vec![
        hyp("G_connected", d.is_some()),
        hyp("G_regular", regular),
        hyp("H_proper_subgraph", true),
    ];
    let (Some(d), Some(s)) = (d, s) else {
        return BoundVerdict::skipped(CheckId::T11, Relation::Gt, hyps);
    };
    let n = h.order() as i64;
    let sh = Spectrum::with_config(h, &policy.eig);
    let rhs = Interval::point(rational(1, n * (d as i64 + 1)));
    let (lhs, rhs, bits) = decide_cached(
        policy,
        Relation::Gt,
        "regular_subgraph_gap",
        &[s.charpoly(), sh.charpoly()],
        &[n, d as i64],
        |b| (&s.largest(b).interval() - &sh.largest(b).interval(), rhs.clone()),
    );
    BoundVerdict::decided(CheckId::T11, Relation::Gt, hyps, lhs, rhs, bits)
}

/// `Delta + mu_min > 1/(n(D+1)) + 1/(mu^(2D) n)` and the degree-gap bound
/// `Delta - mu > (n Delta - 2m) / (n (D (n Delta - 2m) + 1))`.
pub fn check_theorem4(g: &Graph, policy: &TolerancePolicy) -> Vec<BoundVerdict> {
    let d = connected_diameter(g);
    let degrees = g.degrees();
    let regular = degrees.iter().all(|&x| x == degrees[0]);
    let nonbip = !bipartiteness(g).is_bipartite();
    let n = g.order() as i64;
    let delta = *degrees.iter().max().unwrap() as i64;
    let m = g.edge_count() as i64;
    let s = Spectrum::with_config(g, &policy.eig);
    let mut out = Vec::new();
    let hyps = vec![
        hyp("G_connected", d.is_some()),
        hyp("G_nonregular", !regular),
        hyp("G_nonbipartite", nonbip),
    ];
    match (d, !regular && nonbip) {
        (Some(d), true) => {
            let fixed = rational(1, n * (d as i64 + 1));
            let params = [n, d as i64, delta];
            let (lhs, rhs, bits) = decide_cached(policy, Relation::Gt, "theorem4", &[s.charpoly()], &params, |b| {
                let mu = s.largest(b).interval();
                let lhs = &Interval::from_int(delta) + &s.smallest(b).interval();
                let rhs = &Interval::point(fixed.clone()) + &inverse_power_rhs(&mu, 2 * d, n as usize, 1);
                (lhs, rhs)
            });
            out.push(BoundVerdict::decided(CheckId::T4, Relation::Gt, hyps, lhs, rhs, bits));
        }
        _ => out.push(BoundVerdict::skipped(CheckId::T4, Relation::Gt, hyps)),
    }
    let hyps = vec![hyp("G_connected", d.is_some()), hyp("G_nonregular", !regular)];
    match (d, !regular) {
        (Some(d), true) => {
            let excess = n * delta - 2 * m;
            let rhs = Interval::point(rational(excess, n * (d as i64 * excess + 1)));
            let params = [n, d as i64, delta, m];
            let (lhs, rhs, bits) = decide_cached(policy, Relation::Gt, "degree_gap", &[s.charpoly()], &params, |b| {
                (&Interval::from_int(delta) - &s.largest(b).interval(), rhs.clone())
            });
            out.push(BoundVerdict::decided(CheckId::Cgn, Relation::Gt, hyps, lhs, rhs, bits));
        }
        _ => out.push(BoundVerdict::skipped(CheckId::Cgn, Relation::Gt, hyps)),
    }
    out
}

/// Eigenvalue brackets used by the eigenvector checks.
const VECTOR_BITS: u32 = 48;

/// Ratio bound for the Perron vector, `x_i mu^dist(i,j) >= x_j` for all pairs, and
/// `x_min mu^(n-1) >= x_max`.
///
/// Both sides are reported in the scale of the certified integer vector
/// divided by `2^SCALE_BITS`. A pair `(i, j)` where `i` is a leaf adjacent to `j`
/// satisfies the bound with equality by the eigen-equation `mu x_i = x_j`; such
/// pairs are counted as exact and left out of the numerical comparison.
pub fn check_eigenvector_ratio(g: &Graph, policy: &TolerancePolicy) -> Vec<BoundVerdict> {
    let n = g.order();
    let (dist, diam) = distances_and_diameter(g);
    let connected = diam != Diameter::Disconnected;
    let hyps = vec![hyp("G_connected", connected)];
    if !connected {
        return vec![
            BoundVerdict::skipped(CheckId::P1, Relation::Ge, hyps.clone()),
            BoundVerdict::skipped(CheckId::P1MinMax, Relation::Ge, hyps),
        ];
    }
    let one = Interval::from_int(1);
    if n <= 2 {
        // K1 and K2: the Perron vector is constant and mu^(n-1) = 1.
        let exact = |id| {
            BoundVerdict::decided(id, Relation::Ge, hyps.clone(), one.clone(), one.clone(), 0)
                .note("exact: constant Perron vector")
        };
        return vec![exact(CheckId::P1), exact(CheckId::P1MinMax)];
    }
    let spec = Spectrum::with_config(g, &policy.eig);
    let est = eigenvector_estimate(&spec, Target::Largest);
    let Some(e) = est.scaled_error_ceil() else {
        let why = "Perron vector not certified at the precision cap";
        return vec![
            undecided(CheckId::P1, hyps.clone(), why),
            undecided(CheckId::P1MinMax, hyps, why),
        ];
    };
    let bracket = spec.largest(VECTOR_BITS);
    let q = bracket.bits;
    let (m_lo, m_hi) = (bracket.mantissa.clone(), &bracket.mantissa + 1);
    let z = &est.scaled;
    let side = |lo: BigInt, hi: BigInt, shift: usize| {
        let s = (shift + SCALE_BITS as usize) as u64;
        Interval::new(dyadic_owned(lo, s), dyadic_owned(hi, s))
    };
    let mu_f = spec.approximate_eigenvalues()[n - 1];
    let dmax = diam.finite().unwrap().max(n as u32 - 1) as usize;
    let pows_lo: Vec<BigInt> = std::iter::successors(Some(BigInt::one()), |p| Some(p * &m_lo))
        .take(dmax + 1)
        .collect();
    let pows_hi: Vec<BigInt> = std::iter::successors(Some(BigInt::one()), |p| Some(p * &m_hi))
        .take(dmax + 1)
        .collect();
    let pair_sides = |i: usize, j: usize, dd: usize| {
        let lhs = side(
            (&z[i] - &e) * &pows_lo[dd],
            (&z[i] + &e) * &pows_hi[dd],
            q as usize * dd,
        );
        let rhs = side(&z[j] - &e, &z[j] + &e, 0);
        (lhs, rhs)
    };

    // P1: pick the binding pair: first certified violation, else first
    // undecided pair, else the pair with the smallest estimated slack.
    let mut exact_pairs = 0usize;
    let mut worst: Option<(u8, f64, usize, usize, usize)> = None;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let dd = dist.get(i, j).unwrap() as usize;
            if dd == 1 && g.degree(i) == 1 {
                exact_pairs += 1;
                continue;
            }
            let shift = q as usize * dd;
            let holds = (&z[i] - &e) * &pows_lo[dd] >= (&z[j] + &e) << shift;
            let fails = (&z[i] + &e) * &pows_hi[dd] < (&z[j] - &e) << shift;
            let rank = if fails {
                0
            } else if !holds {
                1
            } else {
                2
            };
            let slack = z[i].to_f64().unwrap() * mu_f.powi(dd as i32) / z[j].to_f64().unwrap();
            let better = match worst {
                None => true,
                Some((r, s, ..)) => rank < r || (rank == r && rank == 2 && slack < s),
            };
            if better {
                worst = Some((rank, slack, i, j, dd));
            }
        }
    }
    let p1 = match worst {
        None => BoundVerdict::decided(CheckId::P1, Relation::Ge, hyps.clone(), one.clone(), one.clone(), q),
        Some((_, _, i, j, dd)) => {
            let (lhs, rhs) = pair_sides(i, j, dd);
            BoundVerdict::decided(CheckId::P1, Relation::Ge, hyps.clone(), lhs, rhs, q)
                .note(format!("binding pair ({i}, {j}) at distance {dd}"))
        }
    }
    .note(format!("{exact_pairs} leaf pairs exact by the eigen-equation"))
    .note(format!("entrywise error {:.3e}", est.entrywise_error));

    let imin = (0..n).min_by(|&a, &b| z[a].cmp(&z[b])).unwrap();
    let imax = (0..n).max_by(|&a, &b| z[a].cmp(&z[b])).unwrap();
    let (lhs, rhs) = pair_sides(imin, imax, n - 1);
    let minmax = BoundVerdict::decided(CheckId::P1MinMax, Relation::Ge, hyps, lhs, rhs, q)
        .note(format!("x_min at {imin}, x_max at {imax}"));
    vec![p1, minmax]
}

fn undecided(id: CheckId, hyps: Vec<Hypothesis>, why: &str) -> BoundVerdict {
    BoundVerdict {
        check_id: id,
        lhs: None,
        rhs: None,
        relation: Relation::Ge,
        verdict: super::Verdict::Undecided,
        hypotheses: hyps,
        precision_bits: 0,
        notes: vec![why.to_string()],
    }
}

/// `mu^D > n / sqrt 3`, `w_D + w_(D+1) >= n^2` and `mu^(D-1) + mu^D >= n`.
pub fn check_diameter_power(g: &Graph, policy: &TolerancePolicy) -> Vec<BoundVerdict> {
    let n = g.order();
    let d = connected_diameter(g);
    let hyps = vec![hyp("G_connected", d.is_some()), hyp("n_at_least_3", n >= 3)];
    let (Some(d), true) = (d, n >= 3) else {
        return vec![
            BoundVerdict::skipped(CheckId::P2, Relation::Gt, hyps.clone()),
            BoundVerdict::skipped(CheckId::Walk, Relation::Ge, hyps.clone()),
            BoundVerdict::skipped(CheckId::P2PowerSum, Relation::Ge, hyps),
        ];
    };
    let s = Spectrum::with_config(g, &policy.eig);
    let n_sq = int((n * n) as i64);
    let params = [n as i64, d as i64];
    let (lhs, rhs, bits) = decide_cached(policy, Relation::Gt, "diameter_power", &[s.charpoly()], &params, |b| {
        let rhs = Interval::point(&n_sq / int(3)).sqrt(b + 8);
        (s.largest(b).interval().pow(d), rhs)
    });
    let p2 = BoundVerdict::decided(CheckId::P2, Relation::Gt, hyps.clone(), lhs, rhs, bits);

    let walks = count_walks(g, d as usize) + count_walks(g, d as usize + 1);
    let walk = BoundVerdict::decided(
        CheckId::Walk,
        Relation::Ge,
        hyps.clone(),
        Interval::from_bigint(walks.into()),
        Interval::point(n_sq.clone()),
        0,
    );

    let (lhs, rhs, bits) = decide_cached(
        policy,
        Relation::Ge,
        "diameter_power_sum",
        &[s.charpoly()],
        &params,
        |b| {
            let mu = s.largest(b).interval();
            (&mu.pow(d - 1) + &mu.pow(d), Interval::from_int(n as i64))
        },
    );
    let power_sum = BoundVerdict::decided(CheckId::P2PowerSum, Relation::Ge, hyps, lhs, rhs, bits);
    vec![p2, walk, power_sum]
}

/// Outcome of the bipartite/nonbipartite symmetry test on one graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SachsOutcome {
    pub bipartite: bool,
    /// Enclosure of `mu + mu_min`.
    pub sum: Interval,
    /// Bipartite: `|mu + mu_min|` within the combined widths. Nonbipartite:
    /// `mu + mu_min > 0` certified.
    pub consistent: bool,
    pub precision_bits: u32,
}

/// For connected `G`: bipartite iff `mu = -mu_min`, otherwise `mu + mu_min > 0`.
pub fn sachs_dichotomy(g: &Graph, policy: &TolerancePolicy) -> SachsOutcome {
    let bipartite = bipartiteness(g).is_bipartite();
    let s = Spectrum::with_config(g, &policy.eig);
    let mut bits = policy.initial_bits.min(policy.cap());
    loop {
        let (mu, mu_min) = (s.largest(bits).interval(), s.smallest(bits).interval());
        let sum = &mu + &mu_min;
        let consistent = if bipartite {
            sum.magnitude() <= mu.width() + mu_min.width()
        } else {
            sum.lo().is_positive()
        };
        if consistent || bipartite || bits >= policy.cap() {
            return SachsOutcome {
                bipartite,
                sum,
                consistent,
                precision_bits: bits,
            };
        }
        bits = (bits * 2).min(policy.cap());
    }
}
