//! The reproduction matrix: one report per pair, with golden files.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use exhopf::bst::{verify_lemma22, Strategy};
use exhopf::ffpoly::{Polynomial, PrimeField};
use exhopf::fixtures;
use exhopf::hopf::{build_model, HopfError, HopfModel};
use exhopf::liedata::{profile, theta_set, Group};
use rayon::prelude::*;
use serde::Serialize;

use crate::output::{render_sections, Section, SCHEMA};

/// Report for one pair.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct PairReport {
    pub schema: u32,
    pub group: String,
    pub prime: u32,
    pub pass: bool,
    pub sections: Vec<Section>,
}

impl PairReport {
    pub fn label(&self) -> String {
        format!("{} p={}", self.group, self.prime)
    }

    pub fn text(&self) -> String {
        format!("== {} ==\n{}", self.label(), render_sections(&self.sections))
    }
}

/// Worked cases the solver must reproduce uniquely.
const WORKED: [(Group, u32, u32); 3] = [(Group::E8, 2, 15), (Group::E8, 3, 15), (Group::E8, 3, 35)];

pub fn strategy(deep: bool) -> Strategy {
    if deep {
        Strategy::Both
    } else {
        Strategy::Method2
    }
}

fn theta_consistency(group: Group, p: u32) -> Result<Section> {
    let mut fails = Vec::new();
    let prof = profile(group, p)?;
    if prof.dimension_count() != group.dim() {
        fails.push(format!("dimension count {} != {}", prof.dimension_count(), group.dim()));
    }
    let set = theta_set(group, p)?;
    if set.degrees() != prof.r {
        fails.push(format!("generator weights {:?} != {:?}", set.degrees(), prof.r));
    }
    for s in set.degrees() {
        if set.theta_c(s)?.homogeneous_weight() != Some(s) {
            fails.push(format!("θ{s} is not homogeneous of weight {s}"));
        }
        if let (Some(ring), Some(r)) = (set.restricted_ring(), group.distinguished_weight()) {
            let name = format!("w{r}");
            let direct = set.theta_c(s)?.transfer(ring, &[(name.as_str(), Polynomial::zero(ring))])?;
            if *set.theta_restricted(s)? != direct {
                fails.push(format!("restricted θ{s} differs from w{r} = 0"));
            }
        }
    }
    Ok(Section::new("theta consistency", fails))
}

fn restriction_fixtures(group: Group, p: u32) -> Result<Vec<Section>> {
    if (group, p) != (Group::E8, 5) {
        return Ok(Vec::new());
    }
    let values = fixtures::e8_5_restricted_mismatches()?
        .into_iter()
        .map(|s| format!("restricted θ{s} differs from the printed value"))
        .collect();
    let mut fails = Vec::new();
    for (s, repair) in fixtures::e8_5_power_identity_sign_repairs()? {
        match repair {
            Some(flips) if flips.is_empty() => {}
            Some(flips) => fails.push(format!("P^1 θ{s}: holds after changing the sign of the coefficients of θ{flips:?}")),
            None => fails.push(format!("P^1 θ{s}: fails for every choice of signs")),
        }
    }
    Ok(vec![Section::new("printed restricted generators", values), Section::new("printed restricted reductions", fails)])
}

fn solver_section(model: &HopfModel) -> Result<Section> {
    let table = model.derive_coproducts()?;
    let mut fails = Vec::new();
    let mut notes = Vec::new();
    for (deg, printed) in model.listed_coproducts() {
        let worked = WORKED.contains(&(model.group(), model.p(), deg));
        let constraints = model.default_constraints(&table, deg)?;
        match model.solve_coproduct(&table, deg, &constraints) {
            Ok(sol) if sol.value == printed => notes.push(format!("α{deg}: unique, matches")),
            Ok(sol) => fails.push(format!("α{deg}: solved {}", model.render_tensor(&sol.value))),
            Err(HopfError::Underdetermined { dim, .. }) if !worked => {
                notes.push(format!("α{deg}: underdetermined (dimension {dim})"))
            }
            Err(e) => fails.push(format!("α{deg}: {e}")),
        }
    }
    Ok(if fails.is_empty() { Section::info("coproduct solver", notes) } else { Section::new("coproduct solver", fails) })
}

/// Runs every section for one pair.
pub fn pair_report(group: Group, p: u32, deep: bool) -> Result<PairReport> {
    let mut sections = vec![theta_consistency(group, p)?];
    sections.extend(restriction_fixtures(group, p)?);

    let rep = verify_lemma22(group, p, strategy(deep))?;
    let field = PrimeField::new(p)?;
    let mut fails = Vec::new();
    for &(s, t, want, got) in &rep.wrong {
        fails.push(format!("b_{{{s},{t}}} = {}, printed {}", field.signed(got), field.signed(want)));
    }
    for &(s, t, b) in &rep.unexpected {
        fails.push(format!("b_{{{s},{t}}} = {}, not on the printed list", field.signed(b)));
    }
    sections.push(Section::new("structure constants", fails));

    let model = build_model(group, p, &rep.table)?;
    for item in model.check_suite()? {
        let details = if item.pass || item.detail.is_empty() { Vec::new() } else { vec![item.detail] };
        sections.push(Section { name: format!("hopf: {}", item.name), pass: item.pass, details });
    }
    sections.push(solver_section(&model)?);

    Ok(PairReport {
        schema: SCHEMA,
        group: group.name().to_string(),
        prime: p,
        pass: sections.iter().all(|s| s.pass),
        sections,
    })
}

/// Reports for all `pairs`, computed in parallel and returned in order.
pub fn run(pairs: &[(Group, u32)], deep: bool) -> Result<Vec<PairReport>> {
    pairs.par_iter().map(|&(g, p)| pair_report(g, p, deep)).collect()
}

/// Directory holding golden reports: `$EXHOPF_FIXTURES`, else `fixtures`.
pub fn fixture_dir() -> PathBuf {
    std::env::var_os("EXHOPF_FIXTURES").map(PathBuf::from).unwrap_or_else(|| PathBuf::from("fixtures"))
}

fn golden_path(dir: &Path, report: &PairReport) -> PathBuf {
    dir.join(format!("{}_{}.json", report.group.to_lowercase(), report.prime))
}

pub fn write_golden(dir: &Path, reports: &[PairReport]) -> Result<()> {
    fs::create_dir_all(dir)?;
    for r in reports {
        let mut text = serde_json::to_string_pretty(r)?;
        text.push('\n');
        fs::write(golden_path(dir, r), text)?;
    }
    Ok(())
}

/// Labels of pairs whose report differs from the stored golden file.
pub fn check_golden(dir: &Path, reports: &[PairReport]) -> Result<Vec<String>> {
    let mut out = Vec::new();
    for r in reports {
        let path = golden_path(dir, r);
        let text = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
        let stored: serde_json::Value = serde_json::from_str(&text)?;
        if stored != serde_json::to_value(r)? {
            out.push(r.label());
        }
    }
    Ok(out)
}
