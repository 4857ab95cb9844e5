use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use serde_json::{json, Value};

use ntype::graph::{self, graph_from_json, graph_map_from_json, graph_to_json, Graph, GraphMap};
use ntype::lifting::{has_rlp, GeneratingSet, GeneratingSetName};
use ntype::nerve::{is_graph_n_fibration_bounded, nerve_fragment, FibrationCheck, FibrationVerdict};
use ntype::pi1::{a1_presentation, path_homotopic_bounded, psi_comparison, DiscretePath, PathHomotopy, PsiBounds};
use ntype::presheaf::json::{map_from_json, presheaf_from_json, presheaf_to_json, site_of};
use ntype::presheaf::product::geometric_product;
use ntype::presheaf::standard::representable;
use ntype::presheaf::triangulate::triangulate;
use ntype::presheaf::FinitePresheaf;
use ntype::site::{Cube, Simplex, Site, SiteKind};
use ntype::skeleta::{coskeleton, skeleton, verify_skeletal_identities, IdentityReport};

use crate::config::{RunConfig, DEFAULT_SLACK};
use crate::{Command, Report, Verdict};

fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let v = serde_json::from_str(&text).map_err(ntype::Error::from).with_context(|| format!("parsing {}", path.display()))?;
    Ok(v)
}

fn read_graph(path: &Path) -> Result<Arc<Graph>> {
    let g = graph_from_json(&read_json(path)?).with_context(|| format!("reading graph {}", path.display()))?;
    Ok(Arc::new(g))
}

fn read_graph_map(path: &Path) -> Result<GraphMap> {
    graph_map_from_json(&read_json(path)?).with_context(|| format!("reading graph map {}", path.display()))
}

fn read_presheaf<S: Site>(v: &Value) -> Result<Arc<FinitePresheaf<S>>> {
    Ok(Arc::new(presheaf_from_json::<S>(v)?))
}

/// Reports print `ℤ` as `Z` so that plain terminals and scripts see ASCII.
fn ascii_group(s: &str) -> String {
    s.replace('ℤ', "Z").replace('⊕', "+")
}

fn verdict_str(v: Verdict) -> &'static str {
    match v {
        Verdict::Yes => "yes",
        Verdict::No => "no",
        Verdict::Inconclusive => "inconclusive",
    }
}

pub fn run(cmd: &Command, cfg: &RunConfig) -> Result<Report> {
    match cmd {
        Command::VerifyIdentities { site, n, kmax } => {
            let n = cfg.n(*n);
            let sites = match site.as_str() {
                "both" => vec![SiteKind::Cubical, SiteKind::Simplicial],
                s => vec![s.parse::<SiteKind>()?],
            };
            identities(&sites, n, kmax.unwrap_or(n + 3))
        }
        Command::CheckRlp {
            set,
            n,
            map,
            kmax,
            trunc_dim,
        } => {
            let n = cfg.n(*n);
            let d = cfg.generating_trunc(*trunc_dim, n)?;
            let v = read_json(map)?;
            let site = site_of(v.get("source").unwrap_or(&Value::Null))?;
            let name = GeneratingSetName::from_short(set, site)?;
            let set = GeneratingSet::build(name, n, name.is_infinite().then_some(kmax.unwrap_or(d)))?;
            match site {
                SiteKind::Cubical => check_rlp::<Cube>(&v, &set, d),
                SiteKind::Simplicial => check_rlp::<Simplex>(&v, &set, d),
            }
        }
        Command::Cosk { input, n, out_dim } => {
            let v = read_json(input)?;
            let n = cfg.n(*n);
            match site_of(&v)? {
                SiteKind::Cubical => cosk::<Cube>(&v, n, *out_dim),
                SiteKind::Simplicial => cosk::<Simplex>(&v, n, *out_dim),
            }
        }
        Command::Sk { input, n } => {
            let v = read_json(input)?;
            let n = cfg.n(*n);
            match site_of(&v)? {
                SiteKind::Cubical => sk::<Cube>(&v, n),
                SiteKind::Simplicial => sk::<Simplex>(&v, n),
            }
        }
        Command::Triangulate { input } => {
            let x = read_presheaf::<Cube>(&read_json(input)?)?;
            let t = triangulate(&x)?;
            Ok(presheaf_report("triangulation", &t.presheaf))
        }
        Command::GeometricProduct { left, right, trunc_dim } => {
            let x = read_presheaf::<Cube>(&read_json(left)?)?;
            let y = read_presheaf::<Cube>(&read_json(right)?)?;
            let d = trunc_dim.unwrap_or(x.trunc_dim().max(y.trunc_dim()));
            let p = geometric_product(&x, &y, d)?;
            Ok(presheaf_report("geometric product", &p.presheaf))
        }
        Command::Pi0 { graph } => {
            let g = read_graph(graph)?;
            let c = graph::pi0(&g);
            let classes: Vec<Vec<&str>> = c.classes.iter().map(|cl| cl.iter().map(|&v| g.label(v)).collect()).collect();
            let k = classes.len();
            let mut human = format!("{k} component{}\n", if k == 1 { "" } else { "s" });
            for cl in &classes {
                let _ = writeln!(human, "  {{{}}}", cl.join(", "));
            }
            Ok(Report {
                human,
                json: json!({"components": k, "classes": classes}),
                verdict: Verdict::Yes,
            })
        }
        Command::BoxProduct { left, right } => {
            let p = graph::box_product(&*read_graph(left)?, &*read_graph(right)?);
            Ok(graph_report(&p))
        }
        Command::Pullback { f, g } => {
            let p = graph::pullback(&read_graph_map(f)?, &read_graph_map(g)?)?;
            Ok(graph_report(&p.graph))
        }
        Command::A1 { graph, base } => {
            let g = read_graph(graph)?;
            let b = match base {
                Some(l) => g.vertex(l).ok_or_else(|| ntype::Error::Graph(format!("{l} is not a vertex")))?,
                None if g.n() > 0 => 0,
                None => bail!(ntype::Error::Graph("the graph has no vertices".into())),
            };
            let p = a1_presentation(&g, b)?;
            let (gens, rels) = p.simplified();
            let ab = ascii_group(&p.abelianization().to_string());
            let human = format!(
                "generators: {}, relators: {}, abelianization: {ab}\nsimplified: generators: {gens}, relators: {}\n",
                p.generators.len(),
                p.relators.len(),
                rels.len()
            );
            Ok(Report {
                human,
                json: p.to_json(),
                verdict: Verdict::Yes,
            })
        }
        Command::PathsHomotopic {
            graph,
            p1,
            p2,
            support,
            max_steps,
        } => {
            let g = read_graph(graph)?;
            let parse = |s: &str| -> Result<DiscretePath> {
                let labels: Vec<&str> = s.split(',').map(str::trim).filter(|l| !l.is_empty()).collect();
                Ok(DiscretePath::from_labels(g.clone(), &labels)?)
            };
            let (a, b) = (parse(p1)?, parse(p2)?);
            let support = support.unwrap_or(a.len().max(b.len()));
            let h = path_homotopic_bounded(&a, &b, support, cfg.max_steps(*max_steps))?;
            let (verdict, human, detail) = match &h {
                PathHomotopy::Yes(layers) => (
                    Verdict::Yes,
                    format!("homotopic: yes ({} steps)\n", layers.len() - 1),
                    json!({"steps": layers.len() - 1, "layers": layers.iter().map(|l| l.iter().map(|&v| g.label(v)).collect::<Vec<_>>()).collect::<Vec<_>>()}),
                ),
                PathHomotopy::NoExhausted => (
                    Verdict::No,
                    format!("homotopic: no (every path within window {support} visited)\n"),
                    json!({"exhausted": true}),
                ),
                PathHomotopy::Inconclusive(r) => (Verdict::Inconclusive, format!("homotopic: inconclusive ({r})\n"), json!({"reason": r})),
            };
            Ok(Report {
                human,
                json: json!({"result": verdict_str(verdict), "support": support, "detail": detail}),
                verdict,
            })
        }
        Command::CheckGraphFibration {
            n,
            map,
            support,
            slack,
            seed,
        } => {
            let f = read_graph_map(map)?;
            let opts = FibrationCheck {
                n: cfg.n(*n),
                support: cfg.support(*support),
                slack: cfg.slack(*slack, DEFAULT_SLACK),
                seed: cfg.seed(*seed),
                ..FibrationCheck::default()
            };
            let r = is_graph_n_fibration_bounded(&f, &opts)?;
            let (verdict, human) = match &r.verdict {
                FibrationVerdict::YesOnTestedRange { problems, exhaustive } => (
                    Verdict::Yes,
                    format!(
                        "fibration: yes on tested range ({problems} problems, {})\n",
                        if *exhaustive { "exhaustive" } else { "sampled" }
                    ),
                ),
                FibrationVerdict::Counterexample { problem, certain } => (
                    Verdict::No,
                    format!(
                        "fibration: counterexample at {} (support {}, {})\n",
                        problem.spec.label(),
                        problem.support,
                        if *certain { "no filler at any support" } else { "no filler within the cap" }
                    ),
                ),
                FibrationVerdict::Inconclusive { problems, reason } => {
                    (Verdict::Inconclusive, format!("fibration: inconclusive after {problems} problems ({reason})\n"))
                }
            };
            let mut human = human;
            for m in &r.members {
                let _ = writeln!(
                    human,
                    "  {:<24} support {}  problems {:>6}  {}  filler support <= {}",
                    m.member,
                    m.support,
                    m.problems,
                    if m.exhaustive { "exhaustive" } else { "sampled   " },
                    m.max_filler_support
                );
            }
            Ok(Report {
                human,
                json: r.to_json(&f),
                verdict,
            })
        }
        Command::PsiCheck { f, g, slack, seed } => {
            let (f, g) = (read_graph_map(f)?, read_graph_map(g)?);
            let defaults = PsiBounds::default();
            let bounds = PsiBounds {
                slack: cfg.slack(*slack, defaults.slack),
                seed: cfg.seed(*seed),
                max_steps: cfg.max_steps.unwrap_or(defaults.max_steps),
                ..defaults
            };
            let r = psi_comparison(&f, &g, &bounds)?;
            let undecided = r.pi0.bijective.is_none()
                || r.groups.iter().any(|c| c.agree.is_none())
                || r.fullness.iter().chain(&r.faithfulness).any(|s| !s.is_pass());
            let verdict = if !r.ok() {
                Verdict::No
            } else if undecided {
                Verdict::Inconclusive
            } else {
                Verdict::Yes
            };
            let opt = |b: Option<bool>| b.map_or("undecided", |b| if b { "yes" } else { "no" });
            let mut human = format!(
                "pullback components: {}, groupoid pullback components: {}, pi0 bijective: {}\n",
                r.pi0.pullback_components,
                r.pi0.groupoid_components.map_or("unknown".to_string(), |c| c.to_string()),
                opt(r.pi0.bijective)
            );
            for c in &r.groups {
                let _ = writeln!(
                    human,
                    "  base {}: pullback {}, product {}, agree: {}",
                    c.base,
                    ascii_group(&c.pullback),
                    c.product.as_deref().map_or("unknown".to_string(), ascii_group),
                    opt(c.agree)
                );
            }
            let passed = |s: &[ntype::pi1::Sample]| s.iter().filter(|s| s.is_pass()).count();
            let _ = writeln!(
                human,
                "fullness samples: {}/{}, faithfulness samples: {}/{}",
                passed(&r.fullness),
                r.fullness.len(),
                passed(&r.faithfulness),
                r.faithfulness.len()
            );
            let _ = writeln!(human, "verdict: {}", verdict_str(verdict));
            Ok(Report {
                human,
                json: r.to_json(),
                verdict,
            })
        }
        Command::NerveStats {
            graph,
            dim,
            support,
            cell_budget,
        } => {
            let g = read_graph(graph)?;
            let m = cfg.support(*support);
            let nf = nerve_fragment(&g, *dim, m, cfg.cell_budget(*cell_budget))?;
            let cubes = nf.counts();
            let nondeg = nf.presheaf.nondegenerate_counts();
            let mut human = format!("nerve fragment: dimension <= {dim}, support <= {m}\n");
            for (k, (c, nd)) in cubes.iter().zip(&nondeg).enumerate() {
                let _ = writeln!(human, "  dim {k}: {c} cubes, {nd} nondegenerate");
            }
            Ok(Report {
                human,
                json: json!({"dim": dim, "support": m, "cubes": cubes, "nondegenerate": nondeg}),
                verdict: Verdict::Yes,
            })
        }
        Command::Selftest { n } => selftest(cfg.n(*n)),
    }
}

fn graph_report(g: &Graph) -> Report {
    Report {
        human: format!("{} vertices, {} edges\n{}\n", g.n(), g.num_edges(), graph_to_json(g)),
        json: graph_to_json(g),
        verdict: Verdict::Yes,
    }
}

fn presheaf_report<S: Site>(what: &str, x: &FinitePresheaf<S>) -> Report {
    let doc = presheaf_to_json(x);
    Report {
        human: format!(
            "{what}: {} set truncated at {}, nondegenerate cells per dimension {:?}\n{doc}\n",
            S::KIND,
            x.trunc_dim(),
            x.nondegenerate_counts()
        ),
        json: doc,
        verdict: Verdict::Yes,
    }
}

fn identity_table(report: &IdentityReport) -> String {
    let mut out = String::new();
    for c in &report.cases {
        let _ = writeln!(
            out,
            "{:<10} n={} k={}  {:<28} {:<34} {}",
            c.site.to_string(),
            c.n,
            c.k,
            c.member,
            c.expected,
            if c.passed { "PASS" } else { "FAIL" }
        );
    }
    out
}

fn identities(sites: &[SiteKind], n: usize, kmax: usize) -> Result<Report> {
    let mut all = IdentityReport::default();
    for &s in sites {
        all.cases.extend(verify_skeletal_identities(s, n, kmax)?.cases);
    }
    let failed = all.failures().count();
    let mut human = identity_table(&all);
    let _ = writeln!(human, "{} cases, {failed} failed", all.cases.len());
    Ok(Report {
        human,
        json: json!({"cases": all.cases, "failed": failed}),
        verdict: if failed == 0 { Verdict::Yes } else { Verdict::No },
    })
}

fn check_rlp<S: Site>(v: &Value, set: &GeneratingSet, d: usize) -> Result<Report> {
    let f = map_from_json::<S>(v)?;
    if f.source().trunc_dim() < d {
        bail!(ntype::Error::TruncationTooLow {
            needed: d,
            available: f.source().trunc_dim()
        });
    }
    let r = has_rlp(&f, set)?;
    let mut human = format!(
        "{:?} (n = {}, {} members): {} after {} squares\n",
        set.name,
        set.n,
        set.members.len(),
        if r.holds { "has the lifting property" } else { "fails" },
        r.squares
    );
    if let Some((member, square)) = &r.counterexample {
        let _ = writeln!(human, "counterexample against {member}:\n{}", square.to_json());
    }
    Ok(Report {
        human,
        json: r.to_json(),
        verdict: if r.holds { Verdict::Yes } else { Verdict::No },
    })
}

fn cosk<S: Site>(v: &Value, n: usize, out_dim: Option<usize>) -> Result<Report> {
    let x = read_presheaf::<S>(v)?;
    let c = coskeleton(&x, n, out_dim.unwrap_or(x.trunc_dim()))?;
    Ok(presheaf_report(&format!("cosk_{n}"), &c.presheaf))
}

fn sk<S: Site>(v: &Value, n: usize) -> Result<Report> {
    let x = read_presheaf::<S>(v)?;
    let counit = skeleton(&x, n)?;
    Ok(presheaf_report(&format!("sk_{n}"), counit.source()))
}

/// Units `X -> cosk_n X` are bijective through dimension `n`.
fn cosk_units<S: Site>(n: usize) -> Result<bool> {
    for k in 0..=n + 2 {
        let x = Arc::new(representable::<S>(k, n + 1)?);
        let c = coskeleton(&x, n, n + 1)?;
        if !(0..=n).all(|d| c.unit.is_bijective_on(d)) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn selftest(n: usize) -> Result<Report> {
    let mut checks: Vec<(String, bool)> = Vec::new();
    for s in [SiteKind::Cubical, SiteKind::Simplicial] {
        let r = verify_skeletal_identities(s, n, n + 3)?;
        for c in &r.cases {
            checks.push((format!("{} n={} k={} {}: {}", c.site, c.n, c.k, c.member, c.expected), c.passed));
        }
    }
    checks.push((format!("cubical cosk_{n} unit on representables"), cosk_units::<Cube>(n)?));
    checks.push((format!("simplicial cosk_{n} unit on representables"), cosk_units::<Simplex>(n)?));

    let c3 = Arc::new(graph::cycle(3)?);
    let c4 = Arc::new(graph::cycle(4)?);
    let c5 = Arc::new(graph::cycle(5)?);
    checks.push(("A1(C3) trivial".into(), a1_presentation(&c3, 0)?.abelianization().is_trivial()));
    checks.push(("A1(C4) trivial".into(), a1_presentation(&c4, 0)?.abelianization().is_trivial()));
    let ab5 = a1_presentation(&c5, 0)?.abelianization().clone();
    checks.push(("A1(C5) abelianizes to Z".into(), ab5.rank == 1 && ab5.torsion.is_empty()));
    checks.push(("pi0(C3 + C5) = 2".into(), graph::pi0(&c3.disjoint_union(&c5)).classes.len() == 2));
    let i1 = Arc::new(graph::interval(1));
    let bp = graph::box_product(&i1, &i1);
    checks.push(("I1 box I1 is C4".into(), graph::find_graph_isomorphism(&bp, &c4).is_some()));
    let nf = nerve_fragment(&i1, 2, 1, 1_000_000)?;
    checks.push(("nerve of I1 satisfies the cubical identities".into(), nf.presheaf.check_relations(2).is_ok()));

    let failed = checks.iter().filter(|c| !c.1).count();
    let mut human = String::new();
    for (name, ok) in &checks {
        let _ = writeln!(human, "{} {name}", if *ok { "PASS" } else { "FAIL" });
    }
    let _ = writeln!(human, "{} checks, {failed} failed", checks.len());
    Ok(Report {
        human,
        json: json!({
            "n": n,
            "checks": checks.iter().map(|(name, ok)| json!({"check": name, "passed": ok})).collect::<Vec<_>>(),
            "failed": failed,
        }),
        verdict: if failed == 0 { Verdict::Yes } else { Verdict::No },
    })
}
