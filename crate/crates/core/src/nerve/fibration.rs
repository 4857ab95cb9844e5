//! Bounded check that `Nf` has the right lifting property against the
//! cubical `J_n'`.

use std::ops::ControlFlow;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use super::filling::{check_filler, fill, BoxSpec, Filler, OpenBoxProblem};
use super::BoxShape;
use crate::error::{Error, Result};
use crate::graph::hom::{find_hom, full_domain, hom_search, singleton, HomOptions};
use crate::graph::GraphMap;
use crate::lifting::{GeneratingSet, GeneratingSetName};

#[derive(Clone, Debug, Serialize)]
pub struct FibrationCheck {
    pub n: usize,
    /// Largest support of the problems posed.
    pub support: usize,
    /// Fillers are searched up to `support + slack`.
    pub slack: usize,
    /// Problems per member and support tried exhaustively before sampling.
    pub problem_budget: u64,
    /// Random problems per member and support once enumeration is cut off.
    pub samples: usize,
    pub seed: u64,
    /// Node budget of each filler search.
    pub node_budget: Option<u64>,
}

impl Default for FibrationCheck {
    fn default() -> Self {
        FibrationCheck {
            n: 1,
            support: 2,
            slack: 2,
            problem_budget: 2_000,
            samples: 200,
            seed: 0,
            node_budget: Some(200_000),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MemberStats {
    pub member: String,
    pub support: usize,
    pub problems: u64,
    pub exhaustive: bool,
    /// Largest support a filler needed.
    pub max_filler_support: usize,
}

#[derive(Clone, Debug)]
pub enum FibrationVerdict {
    YesOnTestedRange {
        problems: u64,
        exhaustive: bool,
    },
    /// A square with no filler up to the support cap; `certain` when no
    /// filler exists at any support.
    Counterexample {
        problem: Box<OpenBoxProblem>,
        certain: bool,
    },
    Inconclusive {
        problems: u64,
        reason: String,
    },
}

impl FibrationVerdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, FibrationVerdict::YesOnTestedRange { .. })
    }

    pub fn is_counterexample(&self) -> bool {
        matches!(self, FibrationVerdict::Counterexample { .. })
    }
}

pub struct FibrationReport {
    pub verdict: FibrationVerdict,
    pub members: Vec<MemberStats>,
}

impl FibrationReport {
    pub fn to_json(&self, f: &GraphMap) -> Value {
        let verdict = match &self.verdict {
            FibrationVerdict::YesOnTestedRange { problems, exhaustive } => {
                json!({"result": "yes_on_tested_range", "problems": problems, "exhaustive": exhaustive})
            }
            FibrationVerdict::Counterexample { problem, certain } => json!({
                "result": "counterexample",
                "certain": certain,
                "problem": problem.to_json(f.source(), f.target()),
            }),
            FibrationVerdict::Inconclusive { problems, reason } => {
                json!({"result": "inconclusive", "problems": problems, "reason": reason})
            }
        };
        json!({"verdict": verdict, "members": self.members})
    }
}

enum Outcome {
    Ok,
    Counter(OpenBoxProblem, bool),
    Budget(String),
}

struct Run<'a> {
    f: &'a GraphMap,
    cap: usize,
    node_budget: Option<u64>,
    problems: u64,
    max_support: usize,
}

impl Run<'_> {
    fn check(&mut self, p: OpenBoxProblem) -> Result<Outcome> {
        self.problems += 1;
        match fill(&p, self.f, self.cap, self.node_budget) {
            Ok(Filler::Found(c)) => {
                if !check_filler(&p, self.f, &c) {
                    return Err(Error::Internal(format!("filler for {} fails verification", p.spec.label())));
                }
                self.max_support = self.max_support.max(c.support());
                Ok(Outcome::Ok)
            }
            Ok(Filler::NotFound { certain }) => Ok(Outcome::Counter(p, certain)),
            Err(Error::BudgetExceeded(m)) => Ok(Outcome::Budget(m)),
            Err(e) => Err(e),
        }
    }
}

fn assemble(spec: BoxSpec, support: usize, rim: &[usize], base: &[usize], phi: &[u32], b: &[u32]) -> OpenBoxProblem {
    let len = BoxShape::new(spec.dim, support).len();
    let mut top = vec![None; len];
    let mut bottom = vec![None; len];
    for (&p, &v) in rim.iter().zip(phi) {
        top[p] = Some(v);
    }
    for (&p, &v) in base.iter().zip(b) {
        bottom[p] = Some(v);
    }
    OpenBoxProblem {
        spec,
        support,
        top,
        bottom,
    }
}

/// Poses the lifting problems of `J_n'` against `Nf` with input support
/// `≤ support`: exhaustively while within `problem_budget`, then by seeded
/// sampling. Never claims more than the tested range.
pub fn is_graph_n_fibration_bounded(f: &GraphMap, opts: &FibrationCheck) -> Result<FibrationReport> {
    let set = GeneratingSet::build(GeneratingSetName::JNPrimeCubical, opts.n, None)?;
    let (x, y) = (f.source(), f.target());
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut stats = Vec::new();
    let mut total = 0u64;
    let mut all_exhaustive = true;
    let mut budget_note: Option<String> = None;
    // drawing a base under a rim can be as hard as filling; a cut search
    // only costs coverage
    let hom_opts = HomOptions {
        node_budget: opts.node_budget,
    };
    for member in &set.members {
        let spec = BoxSpec::from_member(member)?;
        for m in 0..=opts.support {
            let shape = BoxShape::new(spec.dim, m);
            let grid = shape.graph();
            let rim = spec.rim_points(m);
            let base = spec.base_points(m);
            let rim_graph = grid.induced(&rim.iter().map(|&i| i as u32).collect::<Vec<_>>());
            let base_graph = grid.induced(&base.iter().map(|&i| i as u32).collect::<Vec<_>>());
            // position of each rim point inside `base`
            let rim_in_base: Vec<Option<usize>> = {
                let mut pos = vec![None; shape.len()];
                for (k, &p) in rim.iter().enumerate() {
                    pos[p] = Some(k);
                }
                base.iter().map(|&p| pos[p]).collect()
            };
            let base_domains = |phi: &[u32]| -> Vec<u128> {
                rim_in_base
                    .iter()
                    .map(|r| match r {
                        Some(k) => singleton(f.apply(phi[*k])),
                        None => full_domain(y.n()),
                    })
                    .collect()
            };
            let mut run = Run {
                f,
                cap: opts.support + opts.slack,
                node_budget: opts.node_budget,
                problems: 0,
                max_support: 0,
            };
            let mut found: Option<Outcome> = None;
            let mut cut = false;
            let mut err = None;
            let enumerated = hom_search(&rim_graph, x, None, &hom_opts, None, |phi| {
                let r = hom_search(&base_graph, y, Some(base_domains(phi)), &hom_opts, None, |b| {
                    if run.problems >= opts.problem_budget {
                        cut = true;
                        return ControlFlow::Break(());
                    }
                    match run.check(assemble(spec, m, &rim, &base, phi, b)) {
                        Ok(Outcome::Ok) => ControlFlow::Continue(()),
                        Ok(o) => {
                            found = Some(o);
                            ControlFlow::Break(())
                        }
                        Err(e) => {
                            err = Some(e);
                            ControlFlow::Break(())
                        }
                    }
                });
                match r {
                    Err(Error::BudgetExceeded(_)) => cut = true,
                    Err(e) => err = Some(e),
                    Ok(_) => {}
                }
                if cut || found.is_some() || err.is_some() {
                    ControlFlow::Break(())
                } else {
                    ControlFlow::Continue(())
                }
            });
            match enumerated {
                Err(Error::BudgetExceeded(_)) => cut = true,
                Err(e) => return Err(e),
                Ok(_) => {}
            }
            if let Some(e) = err {
                return Err(e);
            }
            if cut {
                all_exhaustive = false;
                let mut attempts = 0;
                let mut drawn = 0;
                while drawn < opts.samples && attempts < 20 * opts.samples && found.is_none() {
                    attempts += 1;
                    let phi = match find_hom(&rim_graph, x, None, &hom_opts, Some(&mut rng)) {
                        Ok(Some(phi)) => phi,
                        Ok(None) => break,
                        Err(Error::BudgetExceeded(_)) => continue,
                        Err(e) => return Err(e),
                    };
                    let b = match find_hom(&base_graph, y, Some(base_domains(&phi)), &hom_opts, Some(&mut rng)) {
                        Ok(Some(b)) => b,
                        Ok(None) | Err(Error::BudgetExceeded(_)) => continue,
                        Err(e) => return Err(e),
                    };
                    drawn += 1;
                    match run.check(assemble(spec, m, &rim, &base, &phi, &b))? {
                        Outcome::Ok => {}
                        o => found = Some(o),
                    }
                }
            }
            total += run.problems;
            stats.push(MemberStats {
                member: spec.label(),
                support: m,
                problems: run.problems,
                exhaustive: !cut,
                max_filler_support: run.max_support,
            });
            match found {
                Some(Outcome::Counter(p, certain)) => {
                    return Ok(FibrationReport {
                        verdict: FibrationVerdict::Counterexample {
                            problem: Box::new(p),
                            certain,
                        },
                        members: stats,
                    })
                }
                Some(Outcome::Budget(msg)) => {
                    budget_note.get_or_insert(format!("{} at support {m}: {msg}", spec.label()));
                }
                _ => {}
            }
        }
    }
    let verdict = match budget_note {
        Some(reason) => FibrationVerdict::Inconclusive { problems: total, reason },
        None => FibrationVerdict::YesOnTestedRange {
            problems: total,
            exhaustive: all_exhaustive,
        },
    };
    Ok(FibrationReport { verdict, members: stats })
}
