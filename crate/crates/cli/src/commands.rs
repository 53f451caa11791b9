use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use cfn5::capacity::compute_capacity_with;
use cfn5::construct::{appendix_seed, build_appendix_snark, template_odd_cycle, APPENDIX_SPLIT};
use cfn5::flow::format::{read_capacity_graph, write_capacity_graph};
use cfn5::flow::{decide_faithful_with, CapacityGraph, Guards};
use cfn5::graph::{read_graph6, write_graph6, GeneralisedEdge, Multigraph};
use cfn5::si5::{named, Atom, AtomSet, Si5Set};
use cfn5::wheels::{predicate_cfn5, rim_mask, scan, CertStatus, EdgeMask, WheelTemplate};

/// What a command produced; this is exactly what the cache stores.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub exit: i32,
    /// Files to write, by name relative to the command's output directory.
    pub files: Vec<(String, String)>,
    pub certificate: Option<String>,
    /// Extra record fields such as the decision and engine statistics.
    pub meta: Vec<(String, String)>,
}

impl Outcome {
    fn new(stdout: String, exit: i32) -> Self {
        Outcome {
            stdout,
            exit,
            files: Vec::new(),
            certificate: None,
            meta: Vec::new(),
        }
    }

    fn meta(mut self, k: &str, v: impl ToString) -> Self {
        self.meta.push((k.to_string(), v.to_string()));
        self
    }
}

pub struct Input {
    pub cg: CapacityGraph,
    pub terminals: Option<(String, String)>,
    /// Canonical text used for cache keys.
    pub canonical: String,
}

/// Reads a capacity-graph file (first record `cg 1`) or graph6, which is
/// given capacity (1,4) on every edge.
pub fn read_input(path: &Path) -> Result<Input> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let first = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty())
        .unwrap_or("");
    let (cg, terminals) = if first.split_whitespace().next() == Some("cg") {
        let f =
            read_capacity_graph(&text).with_context(|| format!("parsing {}", path.display()))?;
        (f.graph, f.terminals)
    } else {
        let g =
            read_graph6(first).with_context(|| format!("parsing {} as graph6", path.display()))?;
        (CapacityGraph::uniform(g, named("(1,4)")), None)
    };
    let t = terminals.as_ref().map(|(x, y)| (x.as_str(), y.as_str()));
    let canonical = write_capacity_graph(&cg, t);
    Ok(Input {
        cg,
        terminals,
        canonical,
    })
}

fn word(feasible: bool) -> &'static str {
    if feasible {
        "feasible"
    } else {
        "infeasible"
    }
}

pub fn decide(
    input: &Input,
    guards: Guards,
    certificate: bool,
    porcelain: bool,
) -> Result<Outcome> {
    let start = Instant::now();
    let (decision, stats) = decide_faithful_with(&input.cg, guards)?;
    let elapsed = start.elapsed().as_micros();
    let feasible = decision.is_feasible();
    let cert = decision.certificate().map(|f| f.to_certificate());
    let mut out = String::new();
    if porcelain {
        writeln!(
            out,
            "decide\t{}\t{}\t{}\t{}",
            word(feasible),
            input.cg.graph().edge_count(),
            stats.nodes,
            stats.circulation_calls
        )?;
    } else {
        writeln!(out, "{}", if feasible { "Feasible" } else { "Infeasible" })?;
        writeln!(
            out,
            "edges {}, search nodes {}, circulation calls {}",
            input.cg.graph().edge_count(),
            stats.nodes,
            stats.circulation_calls
        )?;
    }
    if certificate {
        if let Some(c) = &cert {
            out.push_str(c);
        }
    }
    let mut o = Outcome::new(out, if feasible { 0 } else { 1 });
    o.certificate = cert;
    Ok(o.meta("command", "decide")
        .meta("decision", word(feasible))
        .meta("elapsed_us", elapsed)
        .meta("nodes", stats.nodes)
        .meta("circulation_calls", stats.circulation_calls))
}

pub fn nz5(input: &Input, guards: Guards, certificate: bool, porcelain: bool) -> Result<Outcome> {
    let g = input.cg.graph().clone();
    let nonzero = AtomSet::from_atoms((1..5).map(Atom::Point));
    let uniform = Input {
        cg: CapacityGraph::uniform(g, nonzero),
        terminals: None,
        canonical: String::new(),
    };
    let mut o = decide(&uniform, guards, certificate, porcelain)?;
    if porcelain {
        o.stdout = o.stdout.replacen("decide\t", "nz5\t", 1);
    }
    o.meta[0].1 = "nz5".into();
    Ok(o)
}

pub fn capacity(input: &Input, guards: Guards, porcelain: bool) -> Result<Outcome> {
    let (x, y) = input
        .terminals
        .clone()
        .context("capacity needs a terminal line \"t x y\" in a capacity-graph file")?;
    let ge = GeneralisedEdge::new(input.cg.graph().clone(), &x, &y)?;
    let start = Instant::now();
    let res = compute_capacity_with(&ge, guards)?;
    let set = res.set.to_string();
    let out = if porcelain {
        format!("capacity\t{set}\n")
    } else {
        format!("{set}\n")
    };
    Ok(Outcome::new(out, 0)
        .meta("command", "capacity")
        .meta("decision", &set)
        .meta("elapsed_us", start.elapsed().as_micros()))
}

/// `rim`, a hexadecimal mask `0x..`, or a decimal mask.
pub fn parse_mask(n: usize, text: &str) -> Result<EdgeMask> {
    if text == "rim" {
        return Ok(rim_mask(n));
    }
    let parsed = match text.strip_prefix("0x") {
        Some(hex) => EdgeMask::from_str_radix(hex, 16),
        None => text.parse(),
    };
    parsed.with_context(|| format!("bad edge mask {text:?}"))
}

pub fn predicate(n: usize, j: &str, a: &str, porcelain: bool) -> Result<Outcome> {
    let mask = parse_mask(n, j)?;
    let set: Si5Set = a.parse().with_context(|| format!("bad set {a:?}"))?;
    let wt = WheelTemplate::new(n, mask, set)?;
    let holds = predicate_cfn5(&wt);
    let out = if porcelain {
        format!("predicate\t{n}\t{mask:#x}\t{set}\t{holds}\n")
    } else {
        format!("Phi_c >= 5: {holds}\n")
    };
    Ok(Outcome::new(out, 0)
        .meta("command", "predicate")
        .meta("decision", holds))
}

pub fn scan_report(n_max: usize, jobs: usize, guards: Guards, porcelain: bool) -> Result<Outcome> {
    if n_max < 3 {
        bail!("scan needs n_max >= 3");
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build()?;
    let start = Instant::now();
    let records = pool.install(|| scan(n_max, guards))?;
    let elapsed = start.elapsed();
    let disagreements = records.iter().filter(|r| !r.agrees()).count();
    let verified = records
        .iter()
        .filter(|r| r.cert == CertStatus::Verified)
        .count();
    let failed = records
        .iter()
        .filter(|r| r.cert == CertStatus::Failed)
        .count();
    let report: String = records.iter().map(|r| r.to_line() + "\n").collect();
    let mut out = String::new();
    if porcelain {
        out.push_str(&report);
    } else {
        writeln!(
            out,
            "{} instances, {} agreements, {} disagreements",
            records.len(),
            records.len() - disagreements,
            disagreements
        )?;
        writeln!(out, "{verified} certificates verified, {failed} failed")?;
        writeln!(out, "elapsed {:.3} s", elapsed.as_secs_f64())?;
        for r in records.iter().filter(|r| !r.agrees()) {
            writeln!(out, "disagreement: {}", r.to_line())?;
        }
    }
    let ok = disagreements == 0 && failed == 0;
    let mut o = Outcome::new(out, if ok { 0 } else { 1 })
        .meta("command", "scan")
        .meta("decision", format!("{disagreements} disagreements"))
        .meta("elapsed_us", elapsed.as_micros());
    o.files.push(("scan.tsv".into(), report));
    Ok(o)
}

fn snark_lines(g: &Multigraph) -> Result<Vec<(&'static str, String)>> {
    let cubic = g.is_cubic();
    let mut rows = vec![
        ("vertices", g.vertex_count().to_string()),
        ("edges", g.edge_count().to_string()),
        ("cubic", cubic.to_string()),
        (
            "girth",
            g.girth().map_or("none".to_string(), |x| x.to_string()),
        ),
    ];
    if cubic {
        rows.push((
            "cyclically_4_edge_connected",
            g.cyclic_edge_connectivity_at_least(4)?.to_string(),
        ));
        rows.push(("3_edge_colourable", g.chromatic_index_3()?.to_string()));
    }
    rows.push(("snark", g.is_snark().to_string()));
    Ok(rows)
}

fn render_rows(tag: &str, rows: &[(&str, String)], porcelain: bool) -> String {
    if porcelain {
        let vals: Vec<&str> = rows.iter().map(|(_, v)| v.as_str()).collect();
        format!("{tag}\t{}\n", vals.join("\t"))
    } else {
        rows.iter().map(|(k, v)| format!("{k}: {v}\n")).collect()
    }
}

pub fn check_snark(input: &Input, porcelain: bool) -> Result<Outcome> {
    let g = input.cg.graph();
    let rows = snark_lines(g)?;
    let snark = g.is_snark();
    Ok(Outcome::new(
        render_rows("check-snark", &rows, porcelain),
        if snark { 0 } else { 1 },
    )
    .meta("command", "check-snark")
    .meta("decision", snark))
}

pub fn build_appendix(porcelain: bool) -> Result<Outcome> {
    let (template, _) = appendix_seed()?;
    let g = build_appendix_snark()?;
    let g6 = write_graph6(&g)?;
    let mut rows = snark_lines(&g)?;
    rows.push(("template", "infeasible".into()));
    rows.push((
        "split",
        format!("{},{}", APPENDIX_SPLIT.0[0], APPENDIX_SPLIT.0[1]),
    ));
    let report = render_rows("build", &rows, false);
    let mut out = render_rows("build", &rows, porcelain);
    if !porcelain {
        writeln!(out, "graph6: {g6}")?;
    }
    let ok = g.is_snark();
    let mut o = Outcome::new(out, if ok { 0 } else { 1 })
        .meta("command", "build appendix")
        .meta("decision", if ok { "snark" } else { "not a snark" });
    o.files.push(("appendix.g6".into(), format!("{g6}\n")));
    o.files.push(("appendix.report".into(), report));
    o.files.push((
        "appendix-template.cg".into(),
        write_capacity_graph(template.capacity_graph(), None),
    ));
    Ok(o)
}

/// An odd-cycle template on a graph file; the cycle lists vertex labels.
pub fn build_template(
    input: &Input,
    cycle: &[String],
    set: &str,
    porcelain: bool,
) -> Result<Outcome> {
    let g = input.cg.graph();
    let vertices = cycle
        .iter()
        .map(|l| g.vertex(l).with_context(|| format!("unknown vertex {l:?}")))
        .collect::<Result<Vec<_>>>()?;
    let set: Si5Set = set.parse().with_context(|| format!("bad set {set:?}"))?;
    let t = template_odd_cycle(g, &vertices, set).context("template")?;
    let text = write_capacity_graph(t.capacity_graph(), None);
    let out = if porcelain {
        "build\ttemplate\tinfeasible\n".to_string()
    } else {
        text.clone()
    };
    let mut o = Outcome::new(out, 0)
        .meta("command", "build template")
        .meta("decision", "infeasible");
    o.files.push(("template.cg".into(), text));
    Ok(o)
}
