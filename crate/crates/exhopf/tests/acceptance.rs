//! End-to-end acceptance report: one PASS/FAIL line per criterion.
//!
//! The target runs without the libtest harness so the report is always
//! printed. It exits nonzero only when a computation errors out; criterion
//! outcomes are reported, not asserted, and known discrepancies with the
//! printed values show up as FAIL lines with their details.

use std::collections::BTreeMap;
use std::error::Error;
use std::sync::Arc;
use std::time::Instant;

use exhopf::bst::{verify_lemma22, BstTable, Lemma22Report, Strategy};
use exhopf::ffpoly::{Polynomial, PrimeField};
use exhopf::fixtures;
use exhopf::hopf::{build_model, CheckItem, HopfModel};
use exhopf::liedata::{chern_substitution, profile, theta_set, Group, PAIRS};
use exhopf::steenrod::verify_case1;
use exhopf::symfun::{assemble_schur, schur_expansion, stable_rank, wu_formula, SymContext};
use rayon::prelude::*;

type Res<T> = Result<T, Box<dyn Error + Send + Sync>>;

struct Outcome {
    pass: bool,
    details: Vec<String>,
}

impl Outcome {
    fn from_failures(details: Vec<String>) -> Self {
        Outcome { pass: details.is_empty(), details }
    }
}

fn report(n: u32, title: &str, started: Instant, outcome: &Outcome) {
    let verdict = if outcome.pass { "PASS" } else { "FAIL" };
    println!("criterion {n}: {verdict}  {title} ({:.1}s)", started.elapsed().as_secs_f64());
    for d in &outcome.details {
        println!("    {d}");
    }
}

fn wu_fixtures() -> Res<Outcome> {
    let cases: Vec<(u32, u32, u32)> = [(2, 4), (3, 3), (5, 1)]
        .iter()
        .flat_map(|&(p, kmax)| (1..=kmax).flat_map(move |k| (1..=8).map(move |m| (p, k, m))))
        .collect();
    let fails = cases
        .par_iter()
        .map(|&(p, k, m)| -> Res<Option<String>> {
            let closed = fixtures::wu_closed_form(p, k, m)?.ok_or("no closed form")?;
            Ok((closed != wu_formula(p, k, m)?).then(|| format!("p={p} k={k} m={m}")))
        })
        .collect::<Res<Vec<_>>>()?;
    Ok(Outcome::from_failures(fails.into_iter().flatten().collect()))
}

fn schur_fixtures() -> Res<Outcome> {
    let mut fails = Vec::new();
    for (p, k) in [(3, 1), (3, 2), (3, 3), (5, 1)] {
        for m in 1..=8 {
            let expansion = schur_expansion(p, k, m)?;
            let ctx = SymContext::new(p, stable_rank(p, k, m))?;
            if assemble_schur(&expansion, &ctx) != wu_formula(p, k, m)? {
                fails.push(format!("p={p} k={k} m={m}: Schur sum differs from Wu formula"));
            }
        }
        let from = fixtures::schur_printed_min_m(p, k).ok_or("no printed list")?;
        for m in from..=8 {
            let mut got = schur_expansion(p, k, m)?;
            got.retain(|(_, c)| *c != 0);
            got.sort();
            let printed = fixtures::schur_printed(p, k, m).ok_or("no printed list")?;
            if got != printed {
                let only_got: Vec<_> = got.iter().filter(|t| !printed.contains(t)).collect();
                let only_printed: Vec<_> = printed.iter().filter(|t| !got.contains(t)).collect();
                fails.push(format!(
                    "p={p} k={k} m={m}: computed-only {only_got:?}, printed-only {only_printed:?}"
                ));
            }
        }
    }
    Ok(Outcome::from_failures(fails))
}

/// Chern classes from the product of `1 + t_i`, independent of the library's
/// elementary symmetric functions.
fn chern_by_product(group: Group, p: u32) -> Res<Vec<Polynomial>> {
    let forms = chern_substitution(group, p)?;
    let ring = forms[0].ring().clone();
    let mut total = Polynomial::one(&ring);
    for t in &forms {
        total = &total * &(&Polynomial::one(&ring) + t);
    }
    Ok((0..=forms.len() as u32).map(|k| total.component(k)).collect())
}

fn data_layer() -> Res<Outcome> {
    let mut fails = Vec::new();
    for (g, r) in [(Group::F4, 1), (Group::E6, 2), (Group::E7, 2), (Group::E8, 2)] {
        let c = chern_by_product(g, 5)?;
        let w = Polynomial::named(c[1].ring(), &format!("w{r}"));
        if c[1] != w.scale(3) {
            fails.push(format!("{g}: c1 = {}", c[1].render()));
        }
    }
    for (g, p) in PAIRS {
        let prof = profile(g, p)?;
        if prof.dimension_count() != g.dim() {
            fails.push(format!("{g} p={p}: dimension count {} != {}", prof.dimension_count(), g.dim()));
        }
    }
    let per_pair = PAIRS
        .par_iter()
        .map(|&(g, p)| -> Res<Vec<String>> {
            let mut fails = Vec::new();
            let set = theta_set(g, p)?;
            if set.degrees() != set.profile().r {
                fails.push(format!("{g} p={p}: degrees {:?}", set.degrees()));
            }
            let chern = if g == Group::G2 { None } else { Some(chern_by_product(g, p)?) };
            if let Some(chern) = &chern {
                for (k, c) in chern.iter().enumerate() {
                    if set.chern(k as u32) != *c {
                        fails.push(format!("{g} p={p}: c{k} differs from the product expansion"));
                    }
                }
            }
            for s in set.degrees() {
                if set.theta_c(s)?.homogeneous_weight() != Some(s) {
                    fails.push(format!("{g} p={p}: θ{s} is not homogeneous of weight {s}"));
                }
                if set.theta_omega(s).homogeneous_weight() != Some(s) {
                    fails.push(format!("{g} p={p}: expanded θ{s} is not homogeneous of weight {s}"));
                }
                if g == Group::G2 {
                    continue;
                }
                let ring = set.restricted_ring().ok_or("missing restricted ring")?;
                let r = g.distinguished_weight().ok_or("missing distinguished weight")?;
                let name = format!("w{r}");
                let restricted = set.theta_c(s)?.transfer(ring, &[(name.as_str(), Polynomial::zero(ring))])?;
                if *set.theta_restricted(s)? != restricted {
                    fails.push(format!("{g} p={p}: restricted θ{s} differs from w{r} = 0"));
                }
                if set.theta_restricted(s)?.homogeneous_weight().is_some_and(|w| w != s) {
                    fails.push(format!("{g} p={p}: restricted θ{s} has the wrong weight"));
                }
            }
            Ok(fails)
        })
        .collect::<Res<Vec<_>>>()?;
    fails.extend(per_pair.into_iter().flatten());
    for s in fixtures::e8_5_restricted_mismatches()? {
        fails.push(format!("E8 p=5: restricted θ{s} differs from the printed value"));
    }
    Ok(Outcome::from_failures(fails))
}

fn lemma22(reports: &BTreeMap<(Group, u32), Lemma22Report>) -> Res<Outcome> {
    let mut fails = Vec::new();
    for ((g, p), rep) in reports {
        let field = PrimeField::new(*p)?;
        for &(s, t, want, got) in &rep.wrong {
            let (want, got) = (field.signed(want), field.signed(got));
            fails.push(format!("{g} p={p}: b_{{{s},{t}}} = {got}, printed {want}"));
        }
        for &(s, t, b) in &rep.unexpected {
            let b = field.signed(b);
            fails.push(format!("{g} p={p}: b_{{{s},{t}}} = {b}, not on the printed list"));
        }
    }
    let cross: Vec<(Group, u32)> = PAIRS
        .iter()
        .copied()
        .filter(|(g, _)| matches!(g, Group::G2 | Group::F4 | Group::E6))
        .collect();
    let cross_fails = cross
        .par_iter()
        .map(|&(g, p)| -> Res<Option<String>> {
            Ok(match verify_lemma22(g, p, Strategy::Both) {
                Ok(rep) => {
                    let default = &reports[&(g, p)].table;
                    let same = rep.table.entries.iter().all(|e| default.get(e.s, e.t).map(|d| d.value) == Some(e.value));
                    (!same).then(|| format!("{g} p={p}: cross-check table differs from the default table"))
                }
                Err(e) => Some(format!("{g} p={p}: cross-check: {e}")),
            })
        })
        .collect::<Res<Vec<_>>>()?;
    fails.extend(cross_fails.into_iter().flatten());
    Ok(Outcome::from_failures(fails))
}

fn case1() -> Res<Outcome> {
    let mut fails = Vec::new();
    for g in [Group::E6, Group::E7, Group::E8] {
        let rep = verify_case1(g, 2)?;
        if !rep.residual_p1.is_zero() {
            fails.push(format!("{g}: P^1 θ8 identity leaves {} terms", rep.residual_p1.len()));
        }
        if !rep.residual_p4.is_zero() {
            fails.push(format!("{g}: P^4 θ5 identity leaves {} terms", rep.residual_p4.len()));
        }
    }
    Ok(Outcome::from_failures(fails))
}

fn method2_identities() -> Res<Outcome> {
    let mut fails = Vec::new();
    for (s, repair) in fixtures::e8_5_power_identity_sign_repairs()? {
        match repair {
            Some(flips) if flips.is_empty() => {}
            Some(flips) => {
                let names: Vec<String> = flips.iter().map(|j| format!("θ{j}")).collect();
                fails.push(format!("P^1 θ{s}: holds after changing the sign of the {} coefficient(s)", names.join(", ")));
            }
            None => fails.push(format!("P^1 θ{s}: fails for every choice of signs")),
        }
    }
    Ok(Outcome::from_failures(fails))
}

const COPRODUCT_CHECKS: [&str; 5] = [
    "coproduct routes agree",
    "printed coproducts reproduced",
    "coassociativity",
    "coproduct commutes with bockstein",
    "coproduct commutes with operations",
];

fn hopf_suite(suites: &BTreeMap<(Group, u32), (Arc<HopfModel>, Vec<CheckItem>)>) -> Outcome {
    let mut fails = Vec::new();
    for ((g, p), (_, items)) in suites {
        for it in items.iter().filter(|it| !it.pass) {
            fails.push(format!("{g} p={p}: {}: {}", it.name, it.detail));
        }
    }
    Outcome::from_failures(fails)
}

fn solver(suites: &BTreeMap<(Group, u32), (Arc<HopfModel>, Vec<CheckItem>)>) -> Res<Outcome> {
    let mut fails = Vec::new();
    for (g, p, deg) in [(Group::E8, 2, 15), (Group::E8, 3, 15), (Group::E8, 3, 35)] {
        let model = &suites[&(g, p)].0;
        let table = model.derive_coproducts()?;
        let constraints = model.default_constraints(&table, deg)?;
        let printed = model.listed_coproducts().get(&deg).cloned().ok_or("no printed coproduct")?;
        match model.solve_coproduct(&table, deg, &constraints) {
            Ok(sol) if sol.value == printed => {}
            Ok(sol) => fails.push(format!("{g} p={p} α{deg}: solved {}", model.render_tensor(&sol.value))),
            Err(e) => fails.push(format!("{g} p={p} α{deg}: {e}")),
        }
    }
    for ((g, p), (_, items)) in suites {
        for it in items.iter().filter(|it| !it.pass && COPRODUCT_CHECKS.contains(&it.name.as_str())) {
            fails.push(format!("{g} p={p}: {}: {}", it.name, it.detail));
        }
    }
    Ok(Outcome::from_failures(fails))
}

fn main() -> Res<()> {
    let t = Instant::now();
    report(1, "Wu formulas equal the closed forms", t, &wu_fixtures()?);

    let t = Instant::now();
    report(2, "Schur expansions and printed Schur coefficients", t, &schur_fixtures()?);

    let t = Instant::now();
    report(3, "data-layer identities", t, &data_layer()?);

    let t = Instant::now();
    let reports: BTreeMap<(Group, u32), Lemma22Report> = PAIRS
        .par_iter()
        .map(|&(g, p)| Ok(((g, p), verify_lemma22(g, p, Strategy::Method2)?)))
        .collect::<Res<_>>()?;
    report(4, "structure constants b_{s,t} for all ten pairs", t, &lemma22(&reports)?);

    let t = Instant::now();
    report(5, "weight-ring identities for θ9 at p = 2", t, &case1()?);

    let t = Instant::now();
    report(6, "restricted reductions for (E8, 5)", t, &method2_identities()?);

    let t = Instant::now();
    let tables: BTreeMap<(Group, u32), &BstTable> = reports.iter().map(|(k, r)| (*k, &r.table)).collect();
    let suites: BTreeMap<(Group, u32), (Arc<HopfModel>, Vec<CheckItem>)> = PAIRS
        .par_iter()
        .map(|&(g, p)| {
            let model = Arc::new(build_model(g, p, tables[&(g, p)])?);
            let items = model.check_suite()?;
            Ok(((g, p), (model, items)))
        })
        .collect::<Res<_>>()?;
    for ((g, p), (model, _)) in &suites {
        println!("    {g} p={p}: model dimension {}", model.dim());
    }
    report(7, "Hopf model suite for all ten pairs", t, &hopf_suite(&suites));

    let t = Instant::now();
    report(8, "coproduct solver and coproduct compatibilities", t, &solver(&suites)?);
    Ok(())
}
