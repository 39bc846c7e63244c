//! Structure constants `b_{s,t}` with `P^k θ_s = b_{s,t} θ_t` modulo the
//! ideal of the lower-degree generators.
//!
//! Method I works in the full weight ring. Method II works in the restricted
//! Chern ring after killing the distinguished weight, which is far cheaper but
//! blind to generators that restrict to zero; those are handled in the weight
//! ring and tagged `Case1`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;
use thiserror::Error;

use crate::ffpoly::Coeff;
use crate::groebner::{buchberger, solve_linear_coefficient, GroebnerBasis, GroebnerError};
use crate::liedata::{profile, theta_set, DataError, Group, GroupProfile};
use crate::steenrod::{weight_one_power, SteenrodContext, SteenrodError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BstError {
    #[error("({s}, {t}) is not a pair with t - s a positive multiple of p - 1")]
    NotAdmissible { s: u32, t: u32 },
    #[error("the generator of weight {t} restricts to zero; use the weight ring")]
    Case1Required { s: u32, t: u32 },
    #[error("{0} has no restricted Chern ring")]
    NoChernLayer(Group),
    #[error("methods disagree at ({s}, {t}): {first} vs {second}")]
    Mismatch { s: u32, t: u32, first: Coeff, second: Coeff },
    #[error("unknown strategy {0:?}")]
    UnknownStrategy(String),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error(transparent)]
    Steenrod(#[from] SteenrodError),
    #[error(transparent)]
    Data(#[from] DataError),
}

/// How an entry was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    MethodI,
    MethodII,
    Case1,
    InstabilityZero,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::MethodI => "method1",
            Method::MethodII => "method2",
            Method::Case1 => "case1",
            Method::InstabilityZero => "instability-zero",
        }
    }
}

/// Which engines `full_table` runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Strategy {
    /// Weight ring only.
    Method1,
    /// Restricted ring, with the weight ring for `G2` and for generators
    /// that restrict to zero.
    #[default]
    Method2,
    /// Both engines wherever both apply; disagreement is an error.
    Both,
}

impl FromStr for Strategy {
    type Err = BstError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "method1" => Ok(Strategy::Method1),
            "method2" => Ok(Strategy::Method2),
            "both" | "both-and-compare" => Ok(Strategy::Both),
            _ => Err(BstError::UnknownStrategy(s.to_string())),
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Method1 => "method1",
            Strategy::Method2 => "method2",
            Strategy::Both => "both",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BstEntry {
    pub s: u32,
    pub t: u32,
    pub k: u32,
    pub value: Coeff,
    pub method: Method,
}

#[derive(Debug, Clone)]
pub struct BstTable {
    pub profile: GroupProfile,
    pub entries: Vec<BstEntry>,
}

impl BstTable {
    pub fn get(&self, s: u32, t: u32) -> Option<&BstEntry> {
        self.entries.iter().find(|e| e.s == s && e.t == t)
    }

    /// Nonzero entries as `(s, t, b)`.
    pub fn nonzero(&self) -> Vec<(u32, u32, Coeff)> {
        self.entries.iter().filter(|e| e.value != 0).map(|e| (e.s, e.t, e.value)).collect()
    }
}

fn step(group: Group, p: u32, s: u32, t: u32) -> Result<u32, BstError> {
    let prof = profile(group, p)?;
    prof.step_pairs()
        .into_iter()
        .find(|&(a, b, _)| a == s && b == t)
        .map(|(_, _, k)| k)
        .ok_or(BstError::NotAdmissible { s, t })
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Engine {
    Weight,
    Restricted,
}

type BasisKey = (Group, u32, u32, Engine);

fn basis_for(group: Group, p: u32, t: u32, engine: Engine) -> Result<Arc<GroebnerBasis>, BstError> {
    static CACHE: OnceLock<Mutex<HashMap<BasisKey, Arc<GroebnerBasis>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let key = (group, p, t, engine);
    if let Some(gb) = cache.lock().unwrap().get(&key) {
        return Ok(gb.clone());
    }
    let set = theta_set(group, p)?;
    let lower: Vec<u32> = set.degrees().into_iter().filter(|&j| j < t).collect();
    let gb = match engine {
        Engine::Weight => {
            let gens: Vec<_> = lower.iter().map(|&j| set.theta_omega(j).clone()).collect();
            buchberger(set.weight_ring(), &gens, t)?
        }
        Engine::Restricted => {
            let ring = set.restricted_ring().ok_or(BstError::NoChernLayer(group))?;
            let gens: Vec<_> = lower
                .iter()
                .map(|&j| set.theta_restricted(j).cloned())
                .collect::<Result<_, _>>()?;
            buchberger(ring, &gens, t)?
        }
    };
    let gb = Arc::new(gb);
    Ok(cache.lock().unwrap().entry(key).or_insert(gb).clone())
}

/// `b_{s,t}` by reduction in the full weight ring.
pub fn compute_bst_method1(group: Group, p: u32, s: u32, t: u32) -> Result<Coeff, BstError> {
    let k = step(group, p, s, t)?;
    if k >= s {
        return Ok(0);
    }
    let set = theta_set(group, p)?;
    let lhs = weight_one_power(k, set.theta_omega(s));
    let gb = basis_for(group, p, t, Engine::Weight)?;
    Ok(solve_linear_coefficient(&lhs, set.theta_omega(t), &gb)?)
}

/// `b_{s,t}` by reduction in the restricted Chern ring.
pub fn compute_bst_method2(group: Group, p: u32, s: u32, t: u32) -> Result<Coeff, BstError> {
    let k = step(group, p, s, t)?;
    if k >= s {
        return Ok(0);
    }
    let set = theta_set(group, p)?;
    let ring = set.restricted_ring().ok_or(BstError::NoChernLayer(group))?;
    let pivot = set.theta_restricted(t)?;
    if pivot.is_zero() {
        return Err(BstError::Case1Required { s, t });
    }
    let ctx = restricted_context(group, p, ring)?;
    let lhs = ctx.power(k, set.theta_restricted(s)?)?;
    let gb = basis_for(group, p, t, Engine::Restricted)?;
    Ok(solve_linear_coefficient(&lhs, pivot, &gb)?)
}

fn restricted_context(
    group: Group,
    p: u32,
    ring: &Arc<crate::ffpoly::RingContext>,
) -> Result<Arc<SteenrodContext>, BstError> {
    static CACHE: OnceLock<Mutex<HashMap<(Group, u32), Arc<SteenrodContext>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(c) = cache.lock().unwrap().get(&(group, p)) {
        return Ok(c.clone());
    }
    let ctx = Arc::new(SteenrodContext::abstract_chern(ring)?);
    Ok(cache.lock().unwrap().entry((group, p)).or_insert(ctx).clone())
}

fn entry(group: Group, p: u32, s: u32, t: u32, k: u32, strategy: Strategy) -> Result<BstEntry, BstError> {
    let done = |value, method| Ok(BstEntry { s, t, k, value, method });
    if k >= s {
        return done(0, Method::InstabilityZero);
    }
    let weight_only = group == Group::G2 || strategy == Strategy::Method1;
    if weight_only {
        return done(compute_bst_method1(group, p, s, t)?, Method::MethodI);
    }
    match compute_bst_method2(group, p, s, t) {
        Ok(b) => {
            if strategy == Strategy::Both {
                let a = compute_bst_method1(group, p, s, t)?;
                if a != b {
                    return Err(BstError::Mismatch { s, t, first: a, second: b });
                }
            }
            done(b, Method::MethodII)
        }
        Err(BstError::Case1Required { .. }) => done(compute_bst_method1(group, p, s, t)?, Method::Case1),
        // the restricted pivot can fall into the restricted ideal even
        // though the unrestricted one does not
        Err(BstError::Groebner(GroebnerError::Ambiguous)) => {
            done(compute_bst_method1(group, p, s, t)?, Method::MethodI)
        }
        Err(e) => Err(e),
    }
}

/// Every pair `(s, t)` of the profile with its constant.
pub fn full_table(group: Group, p: u32, strategy: Strategy) -> Result<BstTable, BstError> {
    let prof = profile(group, p)?;
    let set = theta_set(group, p)?;
    if strategy != Strategy::Method2 || group == Group::G2 {
        // expand the weight-ring generators once, in parallel
        set.degrees().par_iter().for_each(|&s| {
            set.theta_omega(s);
        });
    }
    let entries = prof
        .step_pairs()
        .par_iter()
        .map(|&(s, t, k)| entry(group, p, s, t, k, strategy))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(BstTable { profile: prof, entries })
}

/// The nonzero constants asserted for `(group, p)`, as `(s, t, b)`.
pub fn expected_nonzero(group: Group, p: u32) -> Vec<(u32, u32, Coeff)> {
    use Group::*;
    let mut out: Vec<(u32, u32, Coeff)> = Vec::new();
    let mut add = |groups: &[Group], pairs: &[(u32, u32)], b: Coeff| {
        if groups.contains(&group) {
            out.extend(pairs.iter().map(|&(s, t)| (s, t, b)));
        }
    };
    match p {
        2 => {
            add(&[G2, F4, E6, E7, E8], &[(2, 3)], 1);
            add(&[F4, E6, E7, E8], &[(8, 12)], 1);
            add(&[E6, E7, E8], &[(3, 5), (5, 9), (8, 9)], 1);
            add(&[E7, E8], &[(12, 14)], 1);
            add(&[E8], &[(12, 15), (14, 15)], 1);
        }
        3 => {
            add(&[F4, E6, E7, E8], &[(2, 4)], 1);
            add(&[F4, E6, E7], &[(6, 8)], 1);
            add(&[E7, E8], &[(4, 10), (8, 14), (8, 10)], 1);
            add(&[E7], &[(6, 10)], 2);
            add(&[E8], &[(18, 20), (14, 20), (18, 24)], 1);
        }
        5 => add(&[E8], &[(2, 6), (8, 12), (14, 18), (20, 24)], 1),
        _ => {}
    }
    out.sort_unstable();
    out
}

/// Comparison of a computed table with the asserted nonzero list.
#[derive(Debug, Clone)]
pub struct Lemma22Report {
    pub group: Group,
    pub p: u32,
    pub table: BstTable,
    /// Asserted nonzero entries that computed to a different value.
    pub wrong: Vec<(u32, u32, Coeff, Coeff)>,
    /// Nonzero entries not on the asserted list.
    pub unexpected: Vec<(u32, u32, Coeff)>,
}

impl Lemma22Report {
    pub fn pass(&self) -> bool {
        self.wrong.is_empty() && self.unexpected.is_empty()
    }
}

/// Computes the full table with `strategy` and compares it with the
/// asserted list.
pub fn verify_lemma22(group: Group, p: u32, strategy: Strategy) -> Result<Lemma22Report, BstError> {
    let table = full_table(group, p, strategy)?;
    let expected = expected_nonzero(group, p);
    let got: BTreeMap<(u32, u32), Coeff> = table.entries.iter().map(|e| ((e.s, e.t), e.value)).collect();
    let wrong = expected
        .iter()
        .filter_map(|&(s, t, b)| {
            let v = got.get(&(s, t)).copied().unwrap_or(0);
            (v != b).then_some((s, t, b, v))
        })
        .collect();
    let unexpected = table
        .nonzero()
        .into_iter()
        .filter(|&(s, t, _)| !expected.iter().any(|&(a, b, _)| a == s && b == t))
        .collect();
    Ok(Lemma22Report { group, p, table, wrong, unexpected })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g2_single_entry() {
        assert_eq!(compute_bst_method1(Group::G2, 2, 2, 3), Ok(1));
        let rep = verify_lemma22(Group::G2, 2, Strategy::Method2).unwrap();
        assert!(rep.pass());
        assert_eq!(rep.table.nonzero(), vec![(2, 3, 1)]);
    }

    #[test]
    fn instability_short_circuit() {
        let table = full_table(Group::F4, 2, Strategy::Method2).unwrap();
        let e = table.get(2, 8).unwrap();
        assert_eq!((e.k, e.value, e.method), (6, 0, Method::InstabilityZero));
        assert_eq!(compute_bst_method1(Group::F4, 2, 2, 8), Ok(0));
    }

    #[test]
    fn rejects_inadmissible_pairs() {
        assert_eq!(compute_bst_method1(Group::F4, 3, 2, 5), Err(BstError::NotAdmissible { s: 2, t: 5 }));
        assert!(matches!(compute_bst_method2(Group::G2, 2, 2, 3), Err(BstError::NoChernLayer(_))));
    }

    #[test]
    fn case1_is_detected() {
        assert_eq!(compute_bst_method2(Group::E7, 2, 8, 9), Err(BstError::Case1Required { s: 8, t: 9 }));
        let table = full_table(Group::E6, 2, Strategy::Method2).unwrap();
        let e = table.get(8, 9).unwrap();
        assert_eq!((e.value, e.method), (1, Method::Case1));
    }

    #[test]
    fn expected_lists_are_sorted_and_sized() {
        assert_eq!(expected_nonzero(Group::E7, 3).len(), 6);
        assert_eq!(expected_nonzero(Group::E8, 2).len(), 8);
        assert!(expected_nonzero(Group::E8, 2).windows(2).all(|w| w[0] < w[1]));
    }
}
