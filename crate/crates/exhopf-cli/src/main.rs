//! Command-line front end for the exhopf library.

mod input;
mod matrix;
mod output;

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use exhopf::bst::{full_table, verify_lemma22, Strategy};
use exhopf::ffpoly::{Polynomial, PrimeField};
use exhopf::fixtures;
use exhopf::groebner::buchberger;
use exhopf::hopf::{build_model, CoproductSource, HopfModel};
use exhopf::liedata::{profile, theta_set, Group, PAIRS};
use exhopf::steenrod::SteenrodContext;
use exhopf::symfun::{assemble_schur, schur_expansion, stable_rank, wu_formula, SymContext};
use serde_json::json;

use crate::output::{render_sections, Format, Output, Section};

#[derive(Parser)]
#[command(name = "exhopf", version, about = "Exact mod-p cohomology computations for exceptional Lie groups")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Worker threads (defaults to the number of cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Write the report to this file instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Also run the slow weight-ring cross-checks for every pair.
    #[arg(long, global = true)]
    deep: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct PairArgs {
    #[arg(long, value_parser = parse_group)]
    group: Group,
    #[arg(long)]
    prime: u32,
}

impl PairArgs {
    fn check(self) -> Result<(Group, u32)> {
        if !PAIRS.contains(&(self.group, self.prime)) {
            bail!("unsupported pair ({}, {})", self.group, self.prime);
        }
        Ok((self.group, self.prime))
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Dump {
    Profile,
    Theta,
    ThetaRestricted,
    Chern,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Weight,
    Chern,
}

#[derive(Subcommand)]
enum Command {
    /// Wu formula for P^k c_m.
    Wu {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        m: u32,
        /// Compare with the closed forms and the Schur expansion.
        #[arg(long)]
        check_prop51: bool,
    },
    /// Degree data and generating polynomials of a pair.
    Data {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, value_enum)]
        dump: Dump,
    },
    /// Truncated Groebner basis of the polynomials in a file.
    Gb {
        /// Ring as `P:var[:weight],...`, e.g. `3:c2,c3,c4`.
        #[arg(long)]
        ring: String,
        #[arg(long)]
        gens: PathBuf,
        #[arg(long)]
        truncate: u32,
    },
    /// Normal forms of the polynomials on standard input.
    Nf {
        #[arg(long)]
        ring: String,
        /// File of ideal generators.
        #[arg(long)]
        against: PathBuf,
        /// Truncation weight; defaults to the largest input weight.
        #[arg(long)]
        truncate: Option<u32>,
    },
    /// Reduced power P^k of each polynomial in a file.
    Steenrod {
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long)]
        p: u32,
        #[arg(long)]
        k: u32,
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Structure constants b_{s,t}.
    Bst {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, requires = "t")]
        s: Option<u32>,
        #[arg(long, requires = "s")]
        t: Option<u32>,
        /// method1, method2 or both.
        #[arg(long)]
        strategy: Option<String>,
    },
    /// Compare computed structure constants with the asserted list.
    Lemma22 {
        #[arg(long, value_parser = parse_group, requires = "prime")]
        group: Option<Group>,
        #[arg(long, requires = "group")]
        prime: Option<u32>,
        /// Every supported pair (the default without --group).
        #[arg(long)]
        all: bool,
    },
    /// Finite Hopf-algebra model of a pair.
    Hopf {
        #[command(flatten)]
        pair: PairArgs,
        #[command(flatten)]
        action: HopfAction,
    },
    /// Full reproduction matrix.
    All {
        /// Comma-separated pairs such as `G2:2,E8:5`.
        #[arg(long)]
        pairs: Option<String>,
        /// Store the per-pair reports as golden files.
        #[arg(long, conflicts_with = "check_golden")]
        write_golden: bool,
        /// Compare the per-pair reports with the golden files.
        #[arg(long)]
        check_golden: bool,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct HopfAction {
    /// Run the consistency suite.
    #[arg(long)]
    check: bool,
    /// Reduced coproduct of the odd generator of this degree.
    #[arg(long)]
    coproduct: Option<u32>,
    /// The ζ-generators and their Bocksteins.
    #[arg(long)]
    zeta: bool,
    /// Generators, Bocksteins, reduced powers and coproducts.
    #[arg(long)]
    dump: bool,
}

fn parse_group(s: &str) -> Result<Group, String> {
    s.parse::<Group>().map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let out = match dispatch(&cli) {
        Ok(out) => out,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    if let Err(e) = out.emit(cli.format, cli.output.as_deref()) {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    match out.failure {
        Some(name) => {
            eprintln!("FAIL: {name}");
            ExitCode::from(1)
        }
        None => ExitCode::SUCCESS,
    }
}

fn dispatch(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::Wu { p, k, m, check_prop51 } => wu(*p, *k, *m, *check_prop51),
        Command::Data { pair, dump } => data(pair.check()?, *dump),
        Command::Gb { ring, gens, truncate } => gb(ring, gens, *truncate),
        Command::Nf { ring, against, truncate } => nf(ring, against, *truncate),
        Command::Steenrod { mode, p, k, input } => steenrod(*mode, *p, *k, input),
        Command::Bst { pair, s, t, strategy } => bst(pair.check()?, s.zip(*t), strategy.as_deref(), cli.deep),
        Command::Lemma22 { group, prime, all } => {
            let pairs = match (group, prime, all) {
                (Some(g), Some(p), false) => vec![PairArgs { group: *g, prime: *p }.check()?],
                (None, None, _) => PAIRS.to_vec(),
                _ => bail!("use either --group/--prime or --all"),
            };
            lemma22(&pairs, cli.deep)
        }
        Command::Hopf { pair, action } => hopf(pair.check()?, action, cli.deep),
        Command::All { pairs, write_golden, check_golden } => {
            all(&input::pairs(pairs.as_deref())?, *write_golden, *check_golden, cli.deep)
        }
    }
}

fn wu(p: u32, k: u32, m: u32, check: bool) -> Result<Output> {
    let f = wu_formula(p, k, m)?;
    let mut text = format!("P^{k} c{m} = {}\n", f.render());
    let mut body = json!({ "p": p, "k": k, "m": m, "polynomial": f.render() });
    if !check {
        return Ok(Output::new("wu", body, text));
    }
    let mut sections = Vec::new();
    match fixtures::wu_closed_form(p, k, m)? {
        Some(closed) => {
            let fails = if closed == f { vec![] } else { vec![format!("closed form {}", closed.render())] };
            sections.push(Section::new("closed form", fails));
        }
        None => sections.push(Section::info("closed form", vec!["no closed form for this (p, k)".into()])),
    }
    let expansion = schur_expansion(p, k, m)?;
    let ctx = SymContext::new(p, stable_rank(p, k, m))?;
    let fails = if assemble_schur(&expansion, &ctx) == f { vec![] } else { vec!["Schur sum differs".into()] };
    sections.push(Section::new("schur expansion", fails));
    if let (Some(printed), Some(from)) = (fixtures::schur_printed(p, k, m), fixtures::schur_printed_min_m(p, k)) {
        if m >= from {
            let mut got = expansion.clone();
            got.sort();
            let fails = if got == printed {
                vec![]
            } else {
                let only: Vec<String> = printed.iter().filter(|t| !got.contains(t)).map(|(l, c)| format!("{l}: {c}")).collect();
                vec![format!("printed terms not reproduced: {}", only.join(", "))]
            };
            sections.push(Section::new("printed schur coefficients", fails));
        }
    }
    text.push_str(&render_sections(&sections));
    let failure = sections.iter().find(|s| !s.pass).map(|s| s.name.clone());
    body["checks"] = serde_json::to_value(&sections)?;
    body["schur"] = expansion.iter().map(|(l, c)| json!([l.to_string(), c])).collect();
    Ok(Output::new("wu", body, text).with_failure(failure))
}

fn data((group, p): (Group, u32), dump: Dump) -> Result<Output> {
    let header = json!({ "group": group.name(), "prime": p });
    let (what, body, text) = match dump {
        Dump::Profile => {
            let prof = profile(group, p)?;
            let k: serde_json::Map<String, serde_json::Value> = prof.k.iter().map(|(t, k)| (t.to_string(), json!(k))).collect();
            let text = format!(
                "{group} p={p}: rank {}, dim {}\nr = {:?}\ne = {:?}\nk = {:?}\ndimension count = {}\n",
                prof.rank, prof.dim, prof.r, prof.e, prof.k, prof.dimension_count()
            );
            let body = json!({ "rank": prof.rank, "dim": prof.dim, "r": prof.r, "e": prof.e, "k": k,
                               "dimension_count": prof.dimension_count() });
            ("profile", body, text)
        }
        Dump::Theta | Dump::ThetaRestricted => {
            let set = theta_set(group, p)?;
            let restricted = matches!(dump, Dump::ThetaRestricted);
            let mut entries = serde_json::Map::new();
            let mut text = String::new();
            for s in set.degrees() {
                let f = if restricted { set.theta_restricted(s)? } else { set.theta_c(s)? };
                text.push_str(&format!("θ{s} = {}\n", f.render()));
                entries.insert(s.to_string(), json!(f.render()));
            }
            (if restricted { "theta-restricted" } else { "theta" }, json!({ "theta": entries }), text)
        }
        Dump::Chern => {
            let set = theta_set(group, p)?;
            let n = group.bundle_rank().with_context(|| format!("{group} has no Chern classes"))?;
            let classes: Vec<String> = (0..=n).map(|k| set.chern(k).render()).collect();
            let text = classes.iter().enumerate().map(|(k, c)| format!("c{k} = {c}\n")).collect();
            ("chern", json!({ "chern": classes }), text)
        }
    };
    let mut body = body;
    body.as_object_mut().unwrap().extend(header.as_object().unwrap().clone());
    body["dump"] = json!(what);
    Ok(Output::new("data", body, text))
}

fn gb(ring: &str, gens: &std::path::Path, d: u32) -> Result<Output> {
    let ring = input::ring_spec(ring)?;
    let gens = input::read_polys(gens, &ring)?;
    let basis = buchberger(&ring, &gens, d)?;
    let rendered: Vec<String> = basis.basis().iter().map(Polynomial::render).collect();
    let text = rendered.iter().map(|b| format!("{b}\n")).collect();
    Ok(Output::new("gb", json!({ "truncation": d, "basis": rendered }), text))
}

fn nf(ring: &str, against: &std::path::Path, d: Option<u32>) -> Result<Output> {
    let ring = input::ring_spec(ring)?;
    let gens = input::read_polys(against, &ring)?;
    let mut stdin = String::new();
    std::io::stdin().read_to_string(&mut stdin)?;
    let polys = input::parse_polys(&stdin, &ring)?;
    let d = d.unwrap_or_else(|| polys.iter().filter_map(Polynomial::max_weight).max().unwrap_or(0));
    let basis = buchberger(&ring, &gens, d)?;
    let mut rendered = Vec::new();
    for f in &polys {
        rendered.push(basis.remainder(f)?.render());
    }
    let text = rendered.iter().map(|r| format!("{r}\n")).collect();
    Ok(Output::new("nf", json!({ "truncation": d, "remainders": rendered }), text))
}

fn steenrod(mode: Mode, p: u32, k: u32, path: &std::path::Path) -> Result<Output> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let chern = matches!(mode, Mode::Chern);
    let ring = input::infer_ring(&text, p, chern)?;
    let ctx = if chern { SteenrodContext::abstract_chern(&ring)? } else { SteenrodContext::weight_ring(&ring)? };
    let mut results = Vec::new();
    for f in input::parse_polys(&text, &ring)? {
        results.push(json!({ "input": f.render(), "output": ctx.power(k, &f)?.render() }));
    }
    let out = results.iter().map(|r| format!("P^{k}({}) = {}\n", r["input"].as_str().unwrap(), r["output"].as_str().unwrap())).collect();
    let mode_name = if chern { "chern" } else { "weight" };
    Ok(Output::new("steenrod", json!({ "mode": mode_name, "p": p, "k": k, "results": results }), out))
}

fn parse_strategy(name: Option<&str>, deep: bool) -> Result<Strategy> {
    Ok(match name {
        Some(s) => s.parse()?,
        None => matrix::strategy(deep),
    })
}

/// Weight-ring runs on the two largest groups take hours.
fn gate(group: Group, strategy: Strategy, deep: bool) -> Result<()> {
    if strategy != Strategy::Method2 && matches!(group, Group::E7 | Group::E8) && !deep {
        bail!("strategy {strategy} on {group} runs for hours; pass --deep to allow it");
    }
    Ok(())
}

fn bst((group, p): (Group, u32), st: Option<(u32, u32)>, strategy: Option<&str>, deep: bool) -> Result<Output> {
    let strategy = parse_strategy(strategy, deep)?;
    gate(group, strategy, deep)?;
    let table = full_table(group, p, strategy)?;
    let field = PrimeField::new(p)?;
    let entries: Vec<_> = table
        .entries
        .iter()
        .filter(|e| st.is_none_or(|(s, t)| e.s == s && e.t == t))
        .collect();
    if let (Some((s, t)), true) = (st, entries.is_empty()) {
        bail!("({s}, {t}) is not an admissible pair for {group} at p={p}");
    }
    let json_entries: Vec<_> = entries
        .iter()
        .map(|e| json!({ "s": e.s, "t": e.t, "k": e.k, "b": field.signed(e.value), "method": e.method.name() }))
        .collect();
    let text = entries
        .iter()
        .map(|e| format!("b_{{{},{}}} = {:>2}   (P^{}, {})\n", e.s, e.t, field.signed(e.value), e.k, e.method.name()))
        .collect();
    let body = json!({ "group": group.name(), "prime": p, "strategy": strategy.to_string(), "entries": json_entries });
    Ok(Output::new("bst", body, text))
}

fn lemma22(pairs: &[(Group, u32)], deep: bool) -> Result<Output> {
    use rayon::prelude::*;
    let strategy = matrix::strategy(deep);
    let reports = pairs.par_iter().map(|&(g, p)| Ok(verify_lemma22(g, p, strategy)?)).collect::<Result<Vec<_>>>()?;
    let mut text = String::new();
    let mut json_pairs = Vec::new();
    let mut failure = None;
    for rep in &reports {
        let field = PrimeField::new(rep.p)?;
        let nonzero = rep.table.nonzero();
        let label = format!("{} p={}", rep.group, rep.p);
        text.push_str(&format!("{} {label}: {} nonzero entries\n", if rep.pass() { "PASS" } else { "FAIL" }, nonzero.len()));
        let mut details = Vec::new();
        for &(s, t, want, got) in &rep.wrong {
            details.push(format!("b_{{{s},{t}}} = {}, printed {}", field.signed(got), field.signed(want)));
        }
        for &(s, t, b) in &rep.unexpected {
            details.push(format!("b_{{{s},{t}}} = {}, not on the printed list", field.signed(b)));
        }
        for d in &details {
            text.push_str(&format!("    {d}\n"));
        }
        if !rep.pass() && failure.is_none() {
            failure = Some(label);
        }
        let nz: Vec<_> = nonzero.iter().map(|&(s, t, b)| json!([s, t, field.signed(b)])).collect();
        json_pairs.push(json!({ "group": rep.group.name(), "prime": rep.p, "pass": rep.pass(), "nonzero": nz, "details": details }));
    }
    let body = json!({ "strategy": strategy.to_string(), "pairs": json_pairs });
    Ok(Output::new("lemma22", body, text).with_failure(failure))
}

fn model_for(group: Group, p: u32, deep: bool) -> Result<HopfModel> {
    let table = full_table(group, p, matrix::strategy(deep))?;
    Ok(build_model(group, p, &table)?)
}

fn hopf((group, p): (Group, u32), action: &HopfAction, deep: bool) -> Result<Output> {
    let model = model_for(group, p, deep)?;
    let header = json!({ "group": group.name(), "prime": p });
    let mut out = if action.check {
        let sections: Vec<Section> = model
            .check_suite()?
            .into_iter()
            .map(|it| {
                let details = if it.detail.is_empty() { vec![] } else { vec![it.detail] };
                Section { name: it.name, pass: it.pass, details }
            })
            .collect();
        let failure = sections.iter().find(|s| !s.pass).map(|s| s.name.clone());
        let text = render_sections(&sections);
        Output::new("hopf", json!({ "action": "check", "checks": sections }), text).with_failure(failure)
    } else if let Some(deg) = action.coproduct {
        let table = model.derive_coproducts()?;
        let value = table.odd.get(&deg).with_context(|| format!("α{deg} is not a generator of {group} at p={p}"))?;
        let source = match table.source[&deg] {
            CoproductSource::Listed => "printed".to_string(),
            CoproductSource::Power { from, k } => format!("P^{k} α{from}"),
        };
        let printed = model.listed_coproducts().get(&deg).map(|t| model.render_tensor(t));
        let constraints = model.default_constraints(&table, deg)?;
        let solved = match model.solve_coproduct(&table, deg, &constraints) {
            Ok(sol) => model.render_tensor(&sol.value),
            Err(e) => e.to_string(),
        };
        let rendered = model.render_tensor(value);
        let mut text = format!("φ(α{deg}) = {rendered}\n  source: {source}\n  solver: {solved}\n");
        if let Some(pr) = &printed {
            text.push_str(&format!("  printed: {pr}\n"));
        }
        let body = json!({ "action": "coproduct", "degree": deg, "reduced_coproduct": rendered,
                           "source": source, "solver": solved, "printed": printed });
        Output::new("hopf", body, text)
    } else if action.zeta {
        let mut text = String::new();
        let mut entries = Vec::new();
        for (deg, z) in model.zeta_basis()? {
            let d = model.bockstein(&z);
            text.push_str(&format!("ζ{deg} = {}   δζ{deg} = {}\n", model.render(&z), model.render(&d)));
            entries.push(json!({ "degree": deg, "zeta": model.render(&z), "bockstein": model.render(&d) }));
        }
        Output::new("hopf", json!({ "action": "zeta", "zeta": entries }), text)
    } else {
        dump_model(&model)?
    };
    out.json.as_object_mut().unwrap().extend(header.as_object().unwrap().clone());
    Ok(out)
}

fn dump_model(model: &HopfModel) -> Result<Output> {
    let field = model.field();
    let table = model.derive_coproducts()?;
    let gens: Vec<String> = model.generators().into_iter().map(|(n, _)| n).collect();
    let mut text = format!("dimension {}\ngenerators {}\n", model.dim(), gens.join(" "));
    let mut bockstein = serde_json::Map::new();
    for deg in model.odd_degrees() {
        let b = model.render(model.bockstein_entry(deg)?);
        text.push_str(&format!("δα{deg} = {b}\n"));
        bockstein.insert(deg.to_string(), json!(b));
    }
    let mut powers = Vec::new();
    for (k, from, to, b) in model.power_entries() {
        let b = field.signed(b);
        text.push_str(&format!("P^{k} α{from} = {b} α{to}\n"));
        powers.push(json!({ "k": k, "from": from, "to": to, "b": b }));
    }
    let mut coproducts = serde_json::Map::new();
    for (deg, t) in &table.odd {
        let r = model.render_tensor(t);
        text.push_str(&format!("φ(α{deg}) = {r}\n"));
        coproducts.insert(deg.to_string(), json!(r));
    }
    let body = json!({ "action": "dump", "dimension": model.dim(), "generators": gens,
                       "bockstein": bockstein, "powers": powers, "reduced_coproducts": coproducts,
                       "graded_dimension": model.graded_dimension() });
    Ok(Output::new("hopf", body, text))
}

fn all(pairs: &[(Group, u32)], write_golden: bool, check_golden: bool, deep: bool) -> Result<Output> {
    let reports = matrix::run(pairs, deep)?;
    let mut text: String = reports.iter().map(|r| r.text()).collect::<Vec<_>>().join("\n");
    let mut failure = reports
        .iter()
        .find_map(|r| r.sections.iter().find(|s| !s.pass).map(|s| format!("{}: {}", r.label(), s.name)));
    let dir = matrix::fixture_dir();
    let mut golden = json!(null);
    if write_golden {
        matrix::write_golden(&dir, &reports)?;
        golden = json!({ "written": dir.display().to_string() });
    }
    if check_golden {
        let differs = matrix::check_golden(&dir, &reports)?;
        text.push_str(&format!("\ngolden files: {}\n", if differs.is_empty() { "match".to_string() } else { format!("differ for {}", differs.join(", ")) }));
        if let Some(first) = differs.first() {
            failure.get_or_insert_with(|| format!("{first}: golden file"));
        }
        golden = json!({ "differs": differs });
    }
    let summary: Vec<String> = reports.iter().map(|r| format!("{} {}", if r.pass { "PASS" } else { "FAIL" }, r.label())).collect();
    text.push_str(&format!("\n{}\n", summary.join("\n")));
    let body = json!({ "pass": failure.is_none(), "pairs": reports, "golden": golden });
    Ok(Output::new("all", body, text).with_failure(failure))
}
