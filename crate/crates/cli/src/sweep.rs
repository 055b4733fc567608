//! Cross-formula sweep over all `Y(n,q)` up to a bound.

use std::collections::BTreeMap;
use std::fmt;

use cqs_core::{
    brute_force_presolutions, component_table, Error, Int, NormalForm, SingularityReport,
};
use num_integer::Integer;
use num_traits::ToPrimitive;
use rayon::prelude::*;

/// Largest `n` for which the ray-subset oracle runs.
pub const ORACLE_MAX_N: u64 = 20;

/// Ray cap handed to the oracle. Nothing up to `ORACLE_MAX_N` comes close.
pub const ORACLE_MAX_RAYS: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepConfig {
    pub max_n: u64,
    pub oracle: bool,
    /// Worker threads; `None` lets rayon decide.
    pub jobs: Option<usize>,
}

/// One mismatch, reproducible as `(n q k-chain)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Failure {
    pub n: u64,
    pub q: u64,
    pub chain: String,
    pub message: String,
}

impl Failure {
    pub fn repro(&self) -> String {
        format!("({} {} {})", self.n, self.q, self.chain)
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.repro(), self.message)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SweepSummary {
    pub singularities: usize,
    pub components: usize,
    pub max_components: usize,
    /// First `(n, q)` attaining `max_components`.
    pub max_at: Option<(u64, u64)>,
    pub oracle_singularities: usize,
    pub oracle_fans: usize,
    pub duality_pairs: usize,
    /// Sorted by `(n, q, chain)`.
    pub failures: Vec<Failure>,
    /// Component count per `(n, q)`.
    pub counts: BTreeMap<(u64, u64), usize>,
}

impl SweepSummary {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Every coprime `(n, q)` with `2 <= n <= max_n` and `0 < q < n - 1`.
pub fn pairs(max_n: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    for n in 2..=max_n {
        for q in 1..n.saturating_sub(1) {
            if n.gcd(&q) == 1 {
                out.push((n, q));
            }
        }
    }
    out
}

struct Outcome {
    n: u64,
    q: u64,
    report: Option<SingularityReport>,
    oracle_fans: Option<usize>,
    failures: Vec<Failure>,
}

fn failure(n: u64, q: u64, e: &Error) -> Failure {
    let chain = match e {
        Error::Consistency { chain, .. } => chain.clone(),
        _ => "-".to_string(),
    };
    Failure {
        n,
        q,
        chain,
        message: e.to_string(),
    }
}

fn check_one(n: u64, q: u64, oracle: bool) -> Outcome {
    let mut out = Outcome {
        n,
        q,
        report: None,
        oracle_fans: None,
        failures: Vec::new(),
    };
    let report = match NormalForm::from_nq(n, q).and_then(|nf| component_table(&nf)) {
        Ok(r) => r,
        Err(e) => {
            out.failures.push(failure(n, q, &e));
            return out;
        }
    };
    if oracle && n <= ORACLE_MAX_N {
        match brute_force_presolutions(&report.nf, ORACLE_MAX_RAYS) {
            Ok(found) => {
                let mut expected: Vec<_> = report.components.iter().map(|c| c.fan.rays.clone()).collect();
                expected.sort();
                let got: Vec<_> = found.iter().map(|f| f.rays.clone()).collect();
                if got != expected {
                    out.failures.push(Failure {
                        n,
                        q,
                        chain: "-".into(),
                        message: format!(
                            "oracle found {} P-resolutions, chains give {}",
                            got.len(),
                            expected.len()
                        ),
                    });
                } else {
                    out.oracle_fans = Some(got.len());
                }
            }
            Err(e) => out.failures.push(failure(n, q, &e)),
        }
    }
    out.report = Some(report);
    out
}

/// Multiset of `(milnor, dim)` over the components.
fn invariant_multiset(r: &SingularityReport) -> Vec<(Int, Int)> {
    let mut v: Vec<_> = r
        .components
        .iter()
        .map(|c| (c.milnor_toric.clone(), c.dim_toric.clone()))
        .collect();
    v.sort();
    v
}

fn check_duality(outcomes: &[Outcome], summary: &mut SweepSummary) {
    let by_pair: BTreeMap<(u64, u64), &SingularityReport> = outcomes
        .iter()
        .filter_map(|o| o.report.as_ref().map(|r| ((o.n, o.q), r)))
        .collect();
    for (&(n, q), r) in &by_pair {
        let Some(dq) = r.nf.dual_q.to_u64() else { continue };
        if dq < q {
            continue;
        }
        let Some(d) = by_pair.get(&(n, dq)) else {
            continue;
        };
        summary.duality_pairs += 1;
        let mut chains: Vec<_> = r.components.iter().map(|c| c.k_chain.reversed()).collect();
        chains.sort();
        let dual_chains: Vec<_> = d.components.iter().map(|c| c.k_chain.clone()).collect();
        if invariant_multiset(r) != invariant_multiset(d) || chains != dual_chains {
            summary.failures.push(Failure {
                n,
                q,
                chain: "-".into(),
                message: format!("components differ from the dual Y({n},{dq})"),
            });
        }
    }
}

pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepSummary, rayon::ThreadPoolBuildError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = cfg.jobs {
        builder = builder.num_threads(j);
    }
    let pool = builder.build()?;
    let work = pairs(cfg.max_n);
    // `collect` keeps input order, so the merge below is schedule independent.
    let outcomes: Vec<Outcome> =
        pool.install(|| work.par_iter().map(|&(n, q)| check_one(n, q, cfg.oracle)).collect());

    let mut summary = SweepSummary::default();
    for o in &outcomes {
        summary.failures.extend(o.failures.iter().cloned());
        if let Some(fans) = o.oracle_fans {
            summary.oracle_singularities += 1;
            summary.oracle_fans += fans;
        }
        let Some(r) = &o.report else { continue };
        let k = r.components.len();
        summary.singularities += 1;
        summary.components += k;
        summary.counts.insert((o.n, o.q), k);
        if k > summary.max_components {
            summary.max_components = k;
            summary.max_at = Some((o.n, o.q));
        }
    }
    check_duality(&outcomes, &mut summary);
    summary.failures.sort();
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_ranges() {
        assert!(pairs(2).is_empty());
        assert_eq!(pairs(5), vec![(3, 1), (4, 1), (5, 1), (5, 2), (5, 3)]);
    }

    #[test]
    fn small_sweep_is_clean() {
        let s = run_sweep(&SweepConfig { max_n: 18, oracle: false, jobs: Some(2) }).unwrap();
        assert!(s.ok(), "{:?}", s.failures);
        assert_eq!(s.counts[&(18, 11)], 3);
        assert_eq!(s.counts[&(4, 1)], 2);
    }

    #[test]
    fn repro_line() {
        let f = Failure { n: 18, q: 11, chain: "(1,3,1,2)".into(), message: "x".into() };
        assert_eq!(f.repro(), "(18 11 (1,3,1,2))");
    }
}
