use std::path::PathBuf;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_rational::BigRational;
use rayon::prelude::*;

use crate::bounds::{
    check_diameter_power, check_edge_deletions, check_eigenvector_ratio, check_nonbipartite_gap,
    check_regular_edge_deletions, check_regular_variants, check_theorem4, edge_deletion_distance_lemma, hyp,
    BoundError, BoundVerdict, CheckId, Relation, TolerancePolicy,
};
use crate::constructions::{build_theorem2_construction, build_theorem3_construction, ConstructionReport};
use crate::graph::{enumerate_connected, Graph};

use super::corpus::read_corpus;
use super::record::{Outcome, RunRecord};
use super::HarnessError;

/// Graphs per parallel batch; outcomes are handed to the sink batch by batch.
const CHUNK: usize = 2048;

/// Where the graphs of a sweep come from.
#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    /// Every labeled connected graph on `n` vertices, in edge-mask order.
    Enumerate(usize),
    /// Newline-delimited graph6 file.
    Corpus(PathBuf),
    Graphs(Vec<Graph>),
    /// Triangle/`K_{k,k}` instances for every `(k, D)`, `k` outermost.
    Theorem2Grid {
        ks: Vec<usize>,
        ds: Vec<u32>,
    },
    /// `K_{r,r}`/`K_s` instances for every `(n, eps)`.
    Theorem3 {
        instances: Vec<(usize, BigRational)>,
    },
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SweepStats {
    pub graphs: usize,
    pub outcomes: usize,
}

/// Comma-separated check ids, or `all` for every per-graph check.
pub fn parse_checks(text: &str) -> Result<Vec<CheckId>, BoundError> {
    if text.trim().eq_ignore_ascii_case("all") {
        return Ok(CheckId::ALL.to_vec());
    }
    let mut out: Vec<CheckId> = text
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse())
        .collect::<Result<_, _>>()?;
    out.sort();
    out.dedup();
    Ok(out)
}

/// Runs `checks` over `source`, passing outcomes to `sink` in input order:
/// by graph index, then by check group, then by edge.
///
/// Every (graph, check) pair yields one outcome; per-edge checks (`T1`,
/// `T1a_strong`, `T11`, `DIST_LEMMA`) yield one per edge. Construction sources
/// yield one `THM2`/`THM3` outcome per instance and ignore `checks`.
pub fn run_sweep(
    source: &Source,
    checks: &[CheckId],
    policy: &TolerancePolicy,
    threads: Option<usize>,
    mut sink: impl FnMut(Outcome),
) -> Result<SweepStats, HarnessError> {
    let pool = match threads {
        Some(t) => Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(t.max(1))
                .build()
                .map_err(|e| HarnessError::Threads(e.to_string()))?,
        ),
        None => None,
    };
    let install = |f: &(dyn Fn() -> Vec<Vec<Outcome>> + Sync)| match &pool {
        Some(p) => p.install(f),
        None => f(),
    };
    let mut stats = SweepStats::default();
    let mut emit = |batch: Vec<Vec<Outcome>>, stats: &mut SweepStats| {
        for outs in batch {
            stats.graphs += 1;
            stats.outcomes += outs.len();
            outs.into_iter().for_each(&mut sink);
        }
    };
    match source {
        Source::Theorem2Grid { ks, ds } => {
            let items: Vec<(usize, u32)> = ks.iter().flat_map(|&k| ds.iter().map(move |&d| (k, d))).collect();
            let batch = install(&|| {
                items
                    .par_iter()
                    .enumerate()
                    .map(|(i, &(k, d))| {
                        construction_outcome(i, CheckId::Thm2, format!("thm2:k={k},D={d}"), || {
                            build_theorem2_construction(k, d, policy)
                        })
                    })
                    .collect()
            });
            emit(batch, &mut stats);
        }
        Source::Theorem3 { instances } => {
            let batch = install(&|| {
                instances
                    .par_iter()
                    .enumerate()
                    .map(|(i, (n, eps))| {
                        construction_outcome(i, CheckId::Thm3, format!("thm3:n={n},eps={eps}"), || {
                            build_theorem3_construction(*n, eps, policy)
                        })
                    })
                    .collect()
            });
            emit(batch, &mut stats);
        }
        graphs => {
            if checks.is_empty() {
                return Err(HarnessError::NoChecks);
            }
            let iter: Box<dyn Iterator<Item = Graph>> = match graphs {
                Source::Enumerate(n) => Box::new(enumerate_connected(*n)?),
                Source::Corpus(path) => Box::new(read_corpus(path)?.into_iter()),
                Source::Graphs(gs) => Box::new(gs.clone().into_iter()),
                _ => unreachable!(),
            };
            let mut chunk = Vec::with_capacity(CHUNK);
            let mut base = 0;
            let mut flush = |chunk: &mut Vec<Graph>, base: &mut usize, stats: &mut SweepStats| {
                let start = *base;
                let batch = install(&|| {
                    chunk
                        .par_iter()
                        .enumerate()
                        .map(|(i, g)| evaluate_graph(start + i, g, checks, policy))
                        .collect()
                });
                *base += chunk.len();
                chunk.clear();
                emit(batch, stats);
            };
            for g in iter {
                chunk.push(g);
                if chunk.len() == CHUNK {
                    flush(&mut chunk, &mut base, &mut stats);
                }
            }
            flush(&mut chunk, &mut base, &mut stats);
        }
    }
    Ok(stats)
}

/// [`run_sweep`] collected into records.
pub fn collect_records(
    source: &Source,
    checks: &[CheckId],
    policy: &TolerancePolicy,
    threads: Option<usize>,
) -> Result<Vec<RunRecord>, HarnessError> {
    let mut out = Vec::new();
    run_sweep(source, checks, policy, threads, |o| out.push(o.record()))?;
    Ok(out)
}

fn evaluate_graph(index: usize, g: &Graph, checks: &[CheckId], policy: &TolerancePolicy) -> Vec<Outcome> {
    let id: Arc<str> = g.to_graph6().into();
    let want = |c: CheckId| checks.contains(&c);
    let mut out = Vec::new();
    let mut push = |verdicts: Vec<BoundVerdict>, edge: Option<(usize, usize)>, wall_time: Duration| {
        for verdict in verdicts.into_iter().filter(|v| want(v.check_id)) {
            out.push(Outcome {
                index,
                graph_id: id.clone(),
                graph6: id.clone(),
                edge,
                verdict,
                wall_time,
            });
        }
    };
    let timed = |f: &mut dyn FnMut() -> Vec<BoundVerdict>| {
        let t = Instant::now();
        let v = f();
        (v, t.elapsed())
    };

    if want(CheckId::T1) || want(CheckId::T1aStrong) {
        let t = Instant::now();
        let all = check_edge_deletions(g, policy);
        let each = t.elapsed() / all.len().max(1) as u32;
        for (edge, verdicts) in all {
            push(verdicts, Some(edge), each);
        }
    }
    if want(CheckId::T11) {
        let t = Instant::now();
        let all = check_regular_edge_deletions(g, policy);
        let each = t.elapsed() / all.len().max(1) as u32;
        for (edge, verdict) in all {
            push(vec![verdict], Some(edge), each);
        }
    }
    if want(CheckId::T2) {
        let (vs, dt) = timed(&mut || vec![check_nonbipartite_gap(g, policy)]);
        push(vs, None, dt);
    }
    if want(CheckId::T21) {
        let (vs, dt) = timed(&mut || check_regular_variants(g, None, policy).expect("no subgraph given"));
        push(vs, None, dt);
    }
    if want(CheckId::T4) || want(CheckId::Cgn) {
        let (vs, dt) = timed(&mut || check_theorem4(g, policy));
        push(vs, None, dt);
    }
    if want(CheckId::P1) || want(CheckId::P1MinMax) {
        let (vs, dt) = timed(&mut || check_eigenvector_ratio(g, policy));
        push(vs, None, dt);
    }
    if want(CheckId::P2) || want(CheckId::Walk) || want(CheckId::P2PowerSum) {
        let (vs, dt) = timed(&mut || check_diameter_power(g, policy));
        push(vs, None, dt);
    }
    if want(CheckId::DistLemma) {
        for (u, v) in g.edges() {
            let (vs, dt) = timed(&mut || vec![edge_deletion_distance_lemma(g, (u, v)).expect("edge of G")]);
            push(vs, Some((u, v)), dt);
        }
    }
    out
}

fn construction_outcome(
    index: usize,
    check_id: CheckId,
    label: String,
    build: impl FnOnce() -> Result<ConstructionReport, crate::constructions::ConstructionError>,
) -> Vec<Outcome> {
    let t = Instant::now();
    let built = build();
    let wall_time = t.elapsed();
    let (graph6, verdict) = match built {
        Ok(r) => return vec![construction_outcome_of(index, check_id, &r, wall_time)],
        Err(e) => {
            let mut v = BoundVerdict::skipped(check_id, Relation::Lt, vec![hyp("parameters_valid", false)]);
            v.notes.push(e.to_string());
            (String::new(), v)
        }
    };
    vec![Outcome {
        index,
        graph_id: label.into(),
        graph6: graph6.into(),
        edge: None,
        verdict,
        wall_time,
    }]
}

/// Outcome of an already built construction, labeled by the report.
pub fn construction_outcome_of(
    index: usize,
    check_id: CheckId,
    r: &ConstructionReport,
    wall_time: Duration,
) -> Outcome {
    let graph6: Arc<str> = r.graph.to_graph6().into();
    Outcome {
        index,
        graph_id: r.label.as_str().into(),
        graph6,
        edge: None,
        verdict: construction_verdict(check_id, r),
        wall_time,
    }
}

/// Collapses a construction report into one verdict: the gap upper bound
/// supplies the two sides, the overall verdict covers every claim.
fn construction_verdict(check_id: CheckId, r: &ConstructionReport) -> BoundVerdict {
    let gap = r.claim("GAP_UPPER");
    let mut notes: Vec<String> = r
        .claims
        .iter()
        .map(|c| format!("{}: {}", c.name, c.verdict.as_str()))
        .collect();
    if let Some(v) = &r.gap_check {
        notes.push(format!("{} on the instance: {}", v.check_id, v.verdict.as_str()));
    }
    notes.extend(r.notes.iter().cloned());
    BoundVerdict {
        check_id,
        lhs: gap.map(|c| c.lhs.clone()),
        rhs: gap.map(|c| c.rhs.clone()),
        relation: Relation::Lt,
        verdict: r.overall(),
        hypotheses: vec![hyp("parameters_valid", true)],
        precision_bits: r.claims.iter().map(|c| c.precision_bits).max().unwrap_or(0),
        notes,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::Verdict;
    use crate::eig::interval::rational;
    use crate::graph::{generate, Family};

    #[test]
    fn check_lists() {
        assert_eq!(parse_checks("all").unwrap().len(), CheckId::ALL.len());
        assert_eq!(parse_checks("t2, T1,T2").unwrap(), vec![CheckId::T1, CheckId::T2]);
        assert!(parse_checks("T9").is_err());
    }

    #[test]
    fn enumerate_five_t1() {
        let mut count = 0;
        let mut worst = Verdict::Holds;
        let stats = run_sweep(
            &Source::Enumerate(5),
            &[CheckId::T1],
            &TolerancePolicy::default(),
            Some(1),
            |o| {
                count += 1;
                if o.verdict.verdict != Verdict::Holds {
                    worst = o.verdict.verdict;
                }
            },
        )
        .unwrap();
        let edges: usize = enumerate_connected(5).unwrap().map(|g| g.edge_count()).sum();
        assert_eq!(stats.graphs, 728);
        assert_eq!((count, stats.outcomes), (edges, edges));
        assert_eq!(worst, Verdict::Holds);
    }

    #[test]
    fn small_corpus_t2() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.g6");
        let gs = [
            generate(Family::Cycle(5)).unwrap(),
            generate(Family::CompleteBipartite(2, 3)).unwrap(),
            generate(Family::Complete(4)).unwrap(),
        ];
        std::fs::write(&path, gs.iter().map(|g| g.to_graph6() + "\n").collect::<String>()).unwrap();
        let recs = collect_records(&Source::Corpus(path), &[CheckId::T2], &TolerancePolicy::default(), None).unwrap();
        let verdicts: Vec<_> = recs.iter().map(|r| r.verdict).collect();
        assert_eq!(verdicts, [Verdict::Holds, Verdict::Skipped, Verdict::Holds]);
        assert_eq!(recs.iter().map(|r| r.index).collect::<Vec<_>>(), [0, 1, 2]);
        assert!(recs[1].hypothesis_report.contains("G_nonbipartite=no"));
    }

    #[test]
    fn theorem2_grid_records() {
        let src = Source::Theorem2Grid {
            ks: vec![3, 4],
            ds: vec![4, 6],
        };
        let recs = collect_records(&src, &[], &TolerancePolicy::default(), Some(2)).unwrap();
        assert_eq!(recs.len(), 4);
        assert!(
            recs.iter().all(|r| r.verdict == Verdict::Holds && r.check_id == "THM2"),
            "{recs:#?}"
        );
        assert_eq!(recs[1].graph_id, "thm2:k=3,D=6");
        let bad = Source::Theorem2Grid {
            ks: vec![2],
            ds: vec![4],
        };
        let recs = collect_records(&bad, &[], &TolerancePolicy::default(), None).unwrap();
        assert_eq!(recs[0].verdict, Verdict::Skipped);
        let t3 = Source::Theorem3 {
            instances: vec![(50, rational(3, 50))],
        };
        let recs = collect_records(&t3, &[], &TolerancePolicy::default(), None).unwrap();
        assert_eq!(recs[0].graph_id, "thm3:n=50,eps=3/50");
    }

    #[test]
    fn per_edge_and_per_graph_counts() {
        let paw = Graph::from_edges(4, &[(0, 1), (1, 2), (0, 2), (2, 3)]).unwrap();
        let recs = collect_records(
            &Source::Graphs(vec![paw]),
            &CheckId::ALL,
            &TolerancePolicy::default(),
            None,
        )
        .unwrap();
        let n = |id: &str| recs.iter().filter(|r| r.check_id == id).count();
        for id in ["T1", "T1a_strong", "T11", "DIST_LEMMA"] {
            assert_eq!(n(id), 4, "{id}");
        }
        for id in [
            "T2",
            "T21",
            "T4",
            "CGN",
            "P1",
            "P1_MINMAX",
            "P2",
            "WALK",
            "P2_POWER_SUM",
        ] {
            assert_eq!(n(id), 1, "{id}");
        }
        assert!(recs
            .iter()
            .all(|r| r.verdict != Verdict::Fails && r.verdict != Verdict::Undecided));
        assert!(matches!(
            collect_records(&Source::Enumerate(3), &[], &TolerancePolicy::default(), None),
            Err(HarnessError::NoChecks)
        ));
        assert!(matches!(
            collect_records(&Source::Enumerate(9), &[CheckId::T2], &TolerancePolicy::default(), None),
            Err(HarnessError::Graph(_))
        ));
    }

    #[test]
    fn deterministic_up_to_timing() {
        let src = Source::Enumerate(4);
        let policy = TolerancePolicy::default();
        let a = collect_records(&src, &CheckId::ALL, &policy, Some(1)).unwrap();
        let b = collect_records(&src, &CheckId::ALL, &policy, Some(3)).unwrap();
        let strip = |v: &[RunRecord]| v.iter().map(RunRecord::without_timing).collect::<Vec<_>>();
        assert_eq!(strip(&a), strip(&b));
    }
}
