use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use fmlat::counting::{fm_count, LatticeSummary, SurfaceKind};
use fmlat::fqf::gauss_sum;
use fmlat::isometry::default_binary_bound;
use fmlat::rational::frac_string;
use fmlat::scenario::{canonicalize, parse_manifest, Params};
use fmlat::{
    binary_genus_scan, discriminant_form, discriminant_group, fqf_automorphisms, is_surjective_on_discriminant,
    lattice_isometries, nikulin_check, parse_lattice_expr, run_batch, run_scenario, twisted_partner_check, Error,
    GHodgeSpec, Lattice,
};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "fmlat", version, about = "Integral lattices, discriminant forms and Fourier-Mukai partner counts")]
struct Cli {
    /// Emit canonical JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Invariants of a lattice expression such as `U(2)+E8(-2)+<-4>`.
    Lattice {
        expr: String,
        /// Show the discriminant group and form.
        #[arg(long)]
        disc: bool,
        /// Enumerate O(A_L) and test surjectivity of O(L) -> O(A_L).
        #[arg(long)]
        aut: bool,
    },
    /// Check Nikulin's uniqueness/surjectivity conditions.
    Nikulin { expr: String },
    /// Classify even binary lattices of a given determinant.
    GenusScan {
        #[arg(long, allow_hyphen_values = true)]
        det: i64,
        #[arg(long)]
        bound: i64,
        #[arg(long, default_value_t = 10)]
        transform_bound: i64,
    },
    /// Count Fourier-Mukai partners from NS and T.
    Count {
        kind: Kind,
        #[arg(long)]
        ns: String,
        #[arg(long = "t")]
        transcendental: String,
        /// trivial, plus_minus or cyclic:m
        #[arg(long, default_value = "plus_minus")]
        ghodge: String,
        /// Explicit genus representatives, used when no certificate settles the genus.
        #[arg(long = "genus-rep")]
        genus_rep: Vec<String>,
    },
    /// Twisted-partner lower bound for a transcendental lattice.
    Twisted { expr: String },
    /// Run a named scenario.
    Scenario {
        id: String,
        /// Parameters as key=value.
        #[arg(long = "param", value_parser = parse_kv)]
        params: Vec<(String, String)>,
    },
    /// Run a JSON manifest `[{"id": ..., "params": {...}}, ...]`.
    Batch { file: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    K3,
    Abelian,
}

fn parse_kv(s: &str) -> Result<(String, String), String> {
    s.split_once('=')
        .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
        .ok_or_else(|| format!("expected key=value, got {s:?}"))
}

struct Output {
    json: Value,
    text: String,
}

fn lattice_cmd(expr: &str, disc: bool, aut: bool) -> anyhow::Result<Output> {
    let l = parse_lattice_expr(expr)?;
    let inv = l.basic_invariants();
    let mut json = json!({
        "expression": expr,
        "lattice": l,
        "rank": inv.rank,
        "det": inv.det,
        "signature": l.signature().pair(),
        "even": inv.even,
    });
    let mut text = String::new();
    writeln!(text, "{}", l.describe())?;
    writeln!(text, "  rank {}  det {}  signature {:?}  {}", inv.rank, inv.det, l.signature().pair(), if inv.even { "even" } else { "odd" })?;
    if disc {
        let group = discriminant_group(&l)?;
        writeln!(text, "  A_L = {}", group_name(&group.cyclic_orders))?;
        json["discriminant_group"] = serde_json::to_value(&group)?;
        if l.is_even() {
            let q = discriminant_form(&l)?;
            let (qs, bs) = q.generator_values();
            writeln!(text, "  q on generators: [{}]", qs.iter().map(frac_string).collect::<Vec<_>>().join(", "))?;
            for row in &bs {
                writeln!(text, "  b: [{}]", row.iter().map(frac_string).collect::<Vec<_>>().join(", "))?;
            }
            json["discriminant_form"] = serde_json::to_value(&q)?;
            match gauss_sum(&q) {
                Ok(g) => {
                    writeln!(text, "  Gauss-Milgram signature {} mod 8", g.residue)?;
                    json["gauss_milgram"] = json!(g.residue);
                }
                Err(e) if e.is_inconclusive() => writeln!(text, "  Gauss-Milgram: {e}")?,
                Err(e) => return Err(e.into()),
            }
        } else {
            writeln!(text, "  (odd lattice: b_L only)")?;
        }
    }
    if aut {
        let q = discriminant_form(&l)?;
        let group = fqf_automorphisms(&q)?;
        writeln!(text, "  |O(A_L)| = {}", group.order())?;
        json["automorphism_group_order"] = json!(group.order());
        json["automorphisms"] = serde_json::to_value(&group.elements)?;
        match lattice_isometries(&l, default_binary_bound(l.gram())) {
            Ok(iso) => {
                writeln!(text, "  |O(L)| found = {} ({}; {})", iso.order(), if iso.complete { "complete" } else { "incomplete" }, iso.method)?;
                json["isometries"] = serde_json::to_value(&iso)?;
            }
            Err(Error::Unsupported(msg)) => writeln!(text, "  O(L): {msg}")?,
            Err(e) => return Err(e.into()),
        }
        let s = is_surjective_on_discriminant(&l)?;
        writeln!(text, "  O(L) -> O(A_L): {:?} (image {} of {})", s.status, s.image_order, s.target_order)?;
        json["surjectivity"] = serde_json::to_value(&s)?;
    }
    Ok(Output { json, text })
}

fn group_name(orders: &[u64]) -> String {
    if orders.is_empty() {
        return "0".into();
    }
    let mut counts: BTreeMap<u64, usize> = BTreeMap::new();
    for &d in orders {
        *counts.entry(d).or_default() += 1;
    }
    counts
        .into_iter()
        .map(|(d, k)| if k == 1 { format!("Z/{d}") } else { format!("(Z/{d})^{k}") })
        .collect::<Vec<_>>()
        .join(" + ")
}

fn nikulin_cmd(expr: &str) -> anyhow::Result<Output> {
    let r = nikulin_check(&parse_lattice_expr(expr)?)?;
    let mut text = format!("{}\n", r.lattice.description);
    for c in &r.condition_a {
        writeln!(text, "  (a) p = {}: rank {} >= l_p + 2 = {}: {}", c.p, c.rank_t, c.l_p + 2, c.holds)?;
    }
    if r.condition_a.is_empty() {
        writeln!(text, "  (a) vacuous: no odd primes divide det")?;
    }
    let b = &r.condition_b;
    match b.holds {
        None => writeln!(text, "  (b) vacuous: rank > l_2 = {}", b.l_2)?,
        Some(h) => writeln!(text, "  (b) rank = l_2 = {}: component {}: {h}", b.l_2, b.component.as_deref().unwrap_or("none"))?,
    }
    writeln!(
        text,
        "  conclusion: {}",
        if r.hypotheses_hold { "unique in genus, O(T) -> O(A_T) surjective" } else { "hypotheses fail" }
    )?;
    Ok(Output { json: serde_json::to_value(&r)?, text })
}

fn genus_scan_cmd(det: i64, bound: i64, transform_bound: i64) -> anyhow::Result<Output> {
    let scan = binary_genus_scan(det, bound, transform_bound)?;
    let mut text = format!("det {det}: {} candidates, {} classes\n", scan.candidates, scan.classes.len());
    for (i, c) in scan.classes.iter().enumerate() {
        writeln!(
            text,
            "  [{i}] {:?}  signature {:?}  A = {}  members {}{}",
            c.representative.to_rows(),
            c.signature,
            group_name(c.discriminant_form.orders()),
            c.members.len(),
            if c.possibly_equal_to.is_empty() {
                String::new()
            } else {
                format!("  possibly equal to {:?} (increase bound)", c.possibly_equal_to)
            }
        )?;
    }
    writeln!(text, "  {}", scan.caveat)?;
    Ok(Output { json: serde_json::to_value(&scan)?, text })
}

fn count_cmd(kind: Kind, ns: &str, t: &str, ghodge: &str, reps: &[String]) -> anyhow::Result<Output> {
    let ns = parse_lattice_expr(ns)?;
    let t = parse_lattice_expr(t)?;
    let g = GHodgeSpec::parse(ghodge)?;
    let reps: Vec<Lattice> = reps.iter().map(|r| parse_lattice_expr(r)).collect::<Result<_, _>>()?;
    let kind = match kind {
        Kind::K3 => SurfaceKind::K3,
        Kind::Abelian => SurfaceKind::Abelian,
    };
    let r = fm_count(kind, &ns, &t, &g, (!reps.is_empty()).then_some(reps.as_slice()))?;
    let mut text = format!("total {}  ({})\n", r.total, r.interpretation);
    writeln!(text, "  shortcut: {}", r.shortcut)?;
    writeln!(text, "  genus: {}", r.genus_certificate)?;
    for rep in &r.genus_reps {
        writeln!(text, "    {} -> {} ({})", rep.lattice.description, rep.count, rep.method)?;
    }
    for c in &r.certificates {
        writeln!(text, "  * {c}")?;
    }
    Ok(Output { json: serde_json::to_value(&r)?, text })
}

fn twisted_cmd(expr: &str) -> anyhow::Result<Output> {
    let r = twisted_partner_check(&parse_lattice_expr(expr)?)?;
    let text = format!(
        "order-2 elements {} (killed by 2: {}), Hodge bound {}, twisted partner exists: {}\n",
        r.order2_count, r.order_dividing_2_count, r.hodge_bound, r.partner_exists
    );
    Ok(Output { json: serde_json::to_value(&r)?, text })
}

fn params_from(kv: &[(String, String)]) -> Params {
    kv.iter()
        .map(|(k, v)| {
            let value = v.parse::<i64>().map(Value::from).unwrap_or_else(|_| Value::from(v.clone()));
            (k.clone(), value)
        })
        .collect()
}

fn scenario_text(r: &fmlat::ScenarioReport) -> anyhow::Result<String> {
    let mut text = format!(
        "{}: partner count {}  {}\n",
        r.scenario_id, r.conclusion.partner_count_bound, r.conclusion.partner_set_description
    );
    let show = |s: &Option<LatticeSummary>| s.as_ref().map_or("-".to_string(), |l| l.description.clone());
    writeln!(text, "  NS: {}", show(&r.ns))?;
    for c in &r.certificates {
        writeln!(text, "  - [{}] {}", c.step, c.detail)?;
    }
    for n in &r.notes {
        writeln!(text, "  note: {n}")?;
    }
    Ok(text)
}

fn scenario_cmd(id: &str, kv: &[(String, String)]) -> anyhow::Result<Output> {
    let r = run_scenario(id, &params_from(kv))?;
    Ok(Output { json: r.to_json_value(), text: scenario_text(&r)? })
}

fn batch_cmd(file: &PathBuf) -> anyhow::Result<Output> {
    let text = std::fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
    let entries = parse_manifest(&text)?;
    let results = run_batch(&entries);
    let mut out = String::new();
    for e in &results {
        match (&e.report, &e.error) {
            (Some(r), _) => write!(out, "[{}] {}", e.index, scenario_text(r)?)?,
            (None, Some(err)) => writeln!(out, "[{}] {}: error: {err}", e.index, e.id)?,
            (None, None) => unreachable!(),
        }
    }
    Ok(Output { json: serde_json::to_value(&results)?, text: out })
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(e) if e.is_inconclusive() => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Lattice { expr, disc, aut } => lattice_cmd(expr, *disc, *aut),
        Command::Nikulin { expr } => nikulin_cmd(expr),
        Command::GenusScan { det, bound, transform_bound } => genus_scan_cmd(*det, *bound, *transform_bound),
        Command::Count { kind, ns, transcendental, ghodge, genus_rep } => {
            count_cmd(*kind, ns, transcendental, ghodge, genus_rep)
        }
        Command::Twisted { expr } => twisted_cmd(expr),
        Command::Scenario { id, params } => scenario_cmd(id, params),
        Command::Batch { file } => batch_cmd(file),
    };
    match result {
        Ok(out) => {
            let body = if cli.json {
                serde_json::to_string_pretty(&canonicalize(out.json)).expect("json values serialize") + "\n"
            } else {
                out.text
            };
            // A closed pipe (e.g. `| head`) is not an error worth reporting.
            let _ = std::io::stdout().lock().write_all(body.as_bytes());
            ExitCode::SUCCESS
        }
        Err(e) => {
            let code = exit_code(&e);
            if cli.json {
                println!("{}", json!({ "error": format!("{e:#}"), "exit_code": code }));
            } else {
                eprintln!("error: {e:#}");
            }
            ExitCode::from(code)
        }
    }
}
