//! Static data for the ten exceptional pairs `(G, p)` with `p`-torsion.
//!
//! Holds the degree profiles, the Chern classes of the torus bundle in terms
//! of fundamental weights, and the generating polynomials of the kernel of
//! the characteristic map in three presentations: mixed (`w_r` and Chern
//! classes), fully expanded in the weights, and restricted to `w_r = 0`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use rustc_hash::FxHashMap;
use thiserror::Error;

use crate::ffpoly::{weight_ring, PolyError, Polynomial, PrimeField, RingContext};

/// The five exceptional compact Lie groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Group {
    G2,
    F4,
    E6,
    E7,
    E8,
}

impl Group {
    pub const ALL: [Group; 5] = [Group::G2, Group::F4, Group::E6, Group::E7, Group::E8];

    pub fn name(self) -> &'static str {
        match self {
            Group::G2 => "G2",
            Group::F4 => "F4",
            Group::E6 => "E6",
            Group::E7 => "E7",
            Group::E8 => "E8",
        }
    }

    /// Rank of the maximal torus.
    pub fn rank(self) -> usize {
        match self {
            Group::G2 => 2,
            Group::F4 => 4,
            Group::E6 => 6,
            Group::E7 => 7,
            Group::E8 => 8,
        }
    }

    pub fn dim(self) -> u32 {
        match self {
            Group::G2 => 14,
            Group::F4 => 52,
            Group::E6 => 78,
            Group::E7 => 133,
            Group::E8 => 248,
        }
    }

    /// Complex dimension of the torus bundle whose Chern classes are used;
    /// `None` for `G2`, whose generators are given in the weights directly.
    pub fn bundle_rank(self) -> Option<u32> {
        match self {
            Group::G2 => None,
            Group::F4 => Some(6),
            g => Some(g.rank() as u32),
        }
    }

    /// Index `r` of the weight `w_r` killed by the circle bundle.
    pub fn distinguished_weight(self) -> Option<usize> {
        match self {
            Group::G2 => None,
            Group::F4 => Some(1),
            _ => Some(2),
        }
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Group {
    type Err = DataError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Group::ALL
            .into_iter()
            .find(|g| g.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| DataError::UnknownGroup(s.to_string()))
    }
}

/// The supported pairs, in table order.
pub const PAIRS: [(Group, u32); 10] = [
    (Group::G2, 2),
    (Group::F4, 2),
    (Group::E6, 2),
    (Group::E7, 2),
    (Group::E8, 2),
    (Group::F4, 3),
    (Group::E6, 3),
    (Group::E7, 3),
    (Group::E8, 3),
    (Group::E8, 5),
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DataError {
    #[error("unsupported pair ({0}, {1})")]
    UnsupportedPair(Group, u32),
    #[error("{0} has no Chern layer")]
    NoChernLayer(Group),
    #[error("Chern class c{k} out of range for {group}")]
    OutOfRange { group: Group, k: u32 },
    #[error("unknown group {0:?}")]
    UnknownGroup(String),
    #[error("{0} is not a generator degree")]
    UnknownDegree(u32),
    #[error("data file {file}, line {line}: {source}")]
    Parse { file: &'static str, line: usize, source: PolyError },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Degree data of one pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupProfile {
    pub group: Group,
    pub rank: usize,
    pub dim: u32,
    pub p: u32,
    /// Weights `s` of the generating polynomials.
    pub r: Vec<u32>,
    /// Weights `t` of the truncated even generators.
    pub e: Vec<u32>,
    /// Truncation heights `k_t`.
    pub k: BTreeMap<u32, u32>,
    pub distinguished_weight: Option<usize>,
}

impl GroupProfile {
    /// `sum (2s-1) + sum 2(k_t-1)t`, which equals `dim` for every pair.
    pub fn dimension_count(&self) -> u32 {
        let odd: u32 = self.r.iter().map(|s| 2 * s - 1).sum();
        let even: u32 = self.k.iter().map(|(t, k)| 2 * (k - 1) * t).sum();
        odd + even
    }

    /// Pairs `(s, t)` in `r x r` with `t - s` a positive multiple of `p - 1`,
    /// together with that multiple.
    pub fn step_pairs(&self) -> Vec<(u32, u32, u32)> {
        let q = self.p - 1;
        let mut out = Vec::new();
        for &s in &self.r {
            for &t in &self.r {
                if t > s && (t - s) % q == 0 {
                    out.push((s, t, (t - s) / q));
                }
            }
        }
        out
    }
}

/// Profile of a supported pair.
pub fn profile(group: Group, p: u32) -> Result<GroupProfile, DataError> {
    use Group::*;
    let (r, k): (&[u32], &[(u32, u32)]) = match (group, p) {
        (G2, 2) => (&[2, 3], &[(3, 2)]),
        (F4, 2) => (&[2, 3, 8, 12], &[(3, 2)]),
        (E6, 2) => (&[2, 3, 5, 8, 9, 12], &[(3, 2)]),
        (E7, 2) => (&[2, 3, 5, 8, 9, 12, 14], &[(3, 2), (5, 2), (9, 2)]),
        (E8, 2) => (&[2, 3, 5, 8, 9, 12, 14, 15], &[(3, 8), (5, 4), (9, 2), (15, 2)]),
        (F4, 3) => (&[2, 4, 6, 8], &[(4, 3)]),
        (E6, 3) => (&[2, 4, 5, 6, 8, 9], &[(4, 3)]),
        (E7, 3) => (&[2, 4, 6, 8, 10, 14, 18], &[(4, 3)]),
        (E8, 3) => (&[2, 4, 8, 10, 14, 18, 20, 24], &[(4, 3), (10, 3)]),
        (E8, 5) => (&[2, 6, 8, 12, 14, 18, 20, 24], &[(6, 5)]),
        _ => return Err(DataError::UnsupportedPair(group, p)),
    };
    Ok(GroupProfile {
        group,
        rank: group.rank(),
        dim: group.dim(),
        p,
        r: r.to_vec(),
        e: k.iter().map(|&(t, _)| t).collect(),
        k: k.iter().copied().collect(),
        distinguished_weight: group.distinguished_weight(),
    })
}

/// The linear forms `t_1, .., t_N` in the weights whose elementary symmetric
/// functions are the Chern classes of the torus bundle.
pub fn chern_substitution(group: Group, p: u32) -> Result<Vec<Polynomial>, DataError> {
    let n = group.rank();
    let ring = weight_ring(p, n)?;
    let w = |i: usize| Polynomial::named(&ring, &format!("w{i}"));
    let forms = match group {
        Group::G2 => return Err(DataError::NoChernLayer(group)),
        Group::F4 => vec![
            w(4),
            &w(3) - &w(4),
            &w(2) - &w(3),
            &(&w(1) - &w(2)) + &w(3),
            &(&w(1) - &w(3)) + &w(4),
            &w(1) - &w(4),
        ],
        _ => {
            let mut v = vec![w(n)];
            for i in 2..=n - 3 {
                v.push(&w(n + 1 - i) - &w(n + 2 - i));
            }
            v.push(&(&w(3) - &w(4)) + &w(2));
            v.push(&(&w(1) - &w(3)) + &w(2));
            v.push(&w(2) - &w(1));
            v
        }
    };
    Ok(forms)
}

/// All Chern classes `c_0..c_N` of the torus bundle, in the weight ring.
pub fn chern_classes(group: Group, p: u32) -> Result<Vec<Polynomial>, DataError> {
    let forms = chern_substitution(group, p)?;
    let ring = forms[0].ring().clone();
    let mut total = vec![Polynomial::one(&ring)];
    for t in &forms {
        let mut next = total.clone();
        next.push(Polynomial::zero(&ring));
        for k in 1..next.len() {
            next[k] = &next[k] + &(&total[k - 1] * t);
        }
        total = next;
    }
    Ok(total)
}

/// The Chern class `c_k` of the torus bundle, in the weight ring.
pub fn chern_poly(group: Group, p: u32, k: u32) -> Result<Polynomial, DataError> {
    let all = chern_classes(group, p)?;
    all.get(k as usize).cloned().ok_or(DataError::OutOfRange { group, k })
}

const SOURCES: [(&str, &str); 8] = [
    ("g2_2.txt", include_str!("../data/theta/g2_2.txt")),
    ("f4_2.txt", include_str!("../data/theta/f4_2.txt")),
    ("e8_2.txt", include_str!("../data/theta/e8_2.txt")),
    ("f4_3.txt", include_str!("../data/theta/f4_3.txt")),
    ("e6_3.txt", include_str!("../data/theta/e6_3.txt")),
    ("e7_3.txt", include_str!("../data/theta/e7_3.txt")),
    ("e8_3.txt", include_str!("../data/theta/e8_3.txt")),
    ("e8_5.txt", include_str!("../data/theta/e8_5.txt")),
];

/// Transcribed source files as `(name, contents)`.
pub fn data_sources() -> &'static [(&'static str, &'static str)] {
    &SOURCES
}

fn source(name: &str) -> (&'static str, &'static str) {
    *SOURCES.iter().find(|(n, _)| *n == name).expect("bundled data file")
}

/// Parses `s: poly` records; indented lines continue the previous record.
fn parse_table(
    file: &'static str,
    text: &str,
    ring: &Arc<RingContext>,
) -> Result<BTreeMap<u32, Polynomial>, DataError> {
    let mut records: Vec<(usize, u32, String)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        let bad = |msg: &str| DataError::Parse {
            file,
            line: i + 1,
            source: PolyError::Syntax { pos: 0, msg: msg.to_string() },
        };
        if raw.starts_with(char::is_whitespace) {
            let last = records.last_mut().ok_or_else(|| bad("continuation without record"))?;
            last.2.push(' ');
            last.2.push_str(line.trim());
        } else {
            let (head, body) = line.split_once(':').ok_or_else(|| bad("missing ':'"))?;
            let s = head.trim().parse().map_err(|_| bad("bad degree"))?;
            records.push((i + 1, s, body.trim().to_string()));
        }
    }
    let mut out = BTreeMap::new();
    for (line, s, body) in records {
        let f = Polynomial::parse(&body, ring).map_err(|source| DataError::Parse { file, line, source })?;
        out.insert(s, f);
    }
    Ok(out)
}

/// Generating polynomials of one pair in all presentations.
pub struct ThetaSet {
    profile: GroupProfile,
    weight_ring: Arc<RingContext>,
    mixed_ring: Arc<RingContext>,
    restricted_ring: Option<Arc<RingContext>>,
    chern: Vec<Polynomial>,
    theta_c: BTreeMap<u32, Polynomial>,
    theta_restricted: BTreeMap<u32, Polynomial>,
    theta_omega: BTreeMap<u32, OnceLock<Polynomial>>,
}

impl fmt::Debug for ThetaSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ThetaSet")
            .field("group", &self.profile.group)
            .field("p", &self.profile.p)
            .finish_non_exhaustive()
    }
}

impl ThetaSet {
    fn build(group: Group, p: u32) -> Result<Self, DataError> {
        let profile = profile(group, p)?;
        let weight_ring = weight_ring(p, group.rank())?;
        let field = PrimeField::new(p)?;
        let Some(n) = group.bundle_rank() else {
            let (file, text) = source("g2_2.txt");
            let theta_c = parse_table(file, text, &weight_ring)?;
            let theta_omega = theta_c.iter().map(|(&s, f)| (s, OnceLock::from(f.clone()))).collect();
            return Ok(ThetaSet {
                profile,
                mixed_ring: weight_ring.clone(),
                weight_ring,
                restricted_ring: None,
                chern: Vec::new(),
                theta_c,
                theta_restricted: BTreeMap::new(),
                theta_omega,
            });
        };
        let r = group.distinguished_weight().unwrap();
        let chern_vars = |lo: u32| (lo..=n).map(|k| (format!("c{k}"), k));
        let mut mixed_vars = vec![(format!("w{r}"), 1)];
        mixed_vars.extend(chern_vars(2));
        let mixed_ring = RingContext::new(field, mixed_vars)?;
        let restricted_ring = RingContext::new(field, chern_vars(2).collect())?;

        let file = match (group, p) {
            (Group::F4, 2) => "f4_2.txt",
            (_, 2) => "e8_2.txt",
            (Group::F4, 3) => "f4_3.txt",
            (Group::E6, 3) => "e6_3.txt",
            (Group::E7, 3) => "e7_3.txt",
            (Group::E8, 3) => "e8_3.txt",
            _ => "e8_5.txt",
        };
        let (file, text) = source(file);
        let theta_c = if p == 2 && group != Group::E8 && group != Group::F4 {
            let e8_vars: Vec<(String, u32)> = std::iter::once(("w2".to_string(), 1)).chain((2..=8).map(|k| (format!("c{k}"), k))).collect();
            let e8_ring = RingContext::new(field, e8_vars)?;
            let full = parse_table(file, text, &e8_ring)?;
            let zero = Polynomial::zero(&mixed_ring);
            let kill: Vec<(String, Polynomial)> = (n + 1..=8).map(|k| (format!("c{k}"), zero.clone())).collect();
            let kill: Vec<(&str, Polynomial)> = kill.iter().map(|(s, f)| (s.as_str(), f.clone())).collect();
            let mut out = BTreeMap::new();
            for (s, f) in full {
                if profile.r.contains(&s) {
                    out.insert(s, f.transfer(&mixed_ring, &kill)?);
                }
            }
            out
        } else {
            parse_table(file, text, &mixed_ring)?
        };
        let chern = chern_classes(group, p)?;
        let theta_restricted = theta_c
            .iter()
            .map(|(&s, f)| Ok((s, kappa(f, &restricted_ring, r)?)))
            .collect::<Result<_, DataError>>()?;
        let theta_omega = theta_c.keys().map(|&s| (s, OnceLock::new())).collect();
        Ok(ThetaSet {
            profile,
            weight_ring,
            mixed_ring,
            restricted_ring: Some(restricted_ring),
            chern,
            theta_c,
            theta_restricted,
            theta_omega,
        })
    }

    pub fn group(&self) -> Group {
        self.profile.group
    }

    pub fn p(&self) -> u32 {
        self.profile.p
    }

    pub fn profile(&self) -> &GroupProfile {
        &self.profile
    }

    /// `F_p[w1..wn]`.
    pub fn weight_ring(&self) -> &Arc<RingContext> {
        &self.weight_ring
    }

    /// `F_p[w_r, c_2..c_N]`; the weight ring itself for `G2`.
    pub fn mixed_ring(&self) -> &Arc<RingContext> {
        &self.mixed_ring
    }

    /// `F_p[c_2..c_N]`; `None` for `G2`.
    pub fn restricted_ring(&self) -> Option<&Arc<RingContext>> {
        self.restricted_ring.as_ref()
    }

    /// Chern class `c_k` in the weight ring; zero above the bundle rank.
    pub fn chern(&self, k: u32) -> Polynomial {
        self.chern.get(k as usize).cloned().unwrap_or_else(|| Polynomial::zero(&self.weight_ring))
    }

    /// Generator of weight `s` as transcribed, in the mixed ring.
    pub fn theta_c(&self, s: u32) -> Result<&Polynomial, DataError> {
        self.theta_c.get(&s).ok_or(DataError::UnknownDegree(s))
    }

    /// Generator of weight `s` with `w_r = 0`, in the restricted ring.
    pub fn theta_restricted(&self, s: u32) -> Result<&Polynomial, DataError> {
        self.theta_restricted.get(&s).ok_or(DataError::UnknownDegree(s))
    }

    /// Generator of weight `s` expanded in the weights; computed on first use.
    ///
    /// Panics if `s` is not a generator degree of this pair.
    pub fn theta_omega(&self, s: u32) -> &Polynomial {
        let cell = self.theta_omega.get(&s).unwrap_or_else(|| panic!("no generator of weight {s}"));
        cell.get_or_init(|| self.expand(&self.theta_c[&s]).expect("mixed presentation expands"))
    }

    /// Substitutes the Chern classes into a mixed-ring polynomial.
    pub fn expand(&self, f: &Polynomial) -> Result<Polynomial, DataError> {
        if RingContext::same(f.ring(), &self.weight_ring) {
            return Ok(f.clone());
        }
        let images: Vec<Option<Polynomial>> = self
            .mixed_ring
            .vars()
            .iter()
            .map(|v| match v.name.strip_prefix('c') {
                Some(k) => Some(self.chern(k.parse().unwrap())),
                None => Some(Polynomial::named(&self.weight_ring, &v.name)),
            })
            .collect();
        Ok(f.substitute(&self.weight_ring, &images)?)
    }

    /// Applies the circle-bundle restriction to a mixed-ring polynomial.
    pub fn restrict(&self, f: &Polynomial) -> Result<Polynomial, DataError> {
        let ring = self.restricted_ring.as_ref().ok_or(DataError::NoChernLayer(self.group()))?;
        kappa(f, ring, self.group().distinguished_weight().unwrap())
    }

    /// Generator degrees in increasing order.
    pub fn degrees(&self) -> Vec<u32> {
        self.theta_c.keys().copied().collect()
    }
}

fn kappa(f: &Polynomial, target: &Arc<RingContext>, r: usize) -> Result<Polynomial, DataError> {
    let name = format!("w{r}");
    Ok(f.transfer(target, &[(name.as_str(), Polynomial::zero(target))])?)
}

/// Cached generating set of a supported pair.
pub fn theta_set(group: Group, p: u32) -> Result<Arc<ThetaSet>, DataError> {
    static CACHE: OnceLock<Mutex<FxHashMap<(Group, u32), Arc<ThetaSet>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(set) = cache.lock().unwrap().get(&(group, p)) {
        return Ok(set.clone());
    }
    let built = Arc::new(ThetaSet::build(group, p)?);
    Ok(cache.lock().unwrap().entry((group, p)).or_insert(built).clone())
}

/// Restriction `w_r -> 0` of a mixed-ring polynomial of `group`.
pub fn restrict_kappa(f: &Polynomial, group: Group) -> Result<Polynomial, DataError> {
    if group == Group::G2 {
        return Err(DataError::NoChernLayer(group));
    }
    theta_set(group, f.ring().p())?.restrict(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profiles_satisfy_dimension_count() {
        for (g, p) in PAIRS {
            let prof = profile(g, p).unwrap();
            assert_eq!(prof.dimension_count(), g.dim(), "{g} at {p}");
            assert!(prof.e.iter().all(|t| prof.r.contains(t)));
        }
        assert!(profile(Group::G2, 3).is_err());
    }

    #[test]
    fn first_chern_class() {
        for (g, r) in [(Group::F4, 1), (Group::E6, 2), (Group::E7, 2), (Group::E8, 2)] {
            let c1 = chern_poly(g, 5, 1).unwrap();
            let w = Polynomial::named(c1.ring(), &format!("w{r}"));
            assert_eq!(c1, w.scale(3), "{g}");
        }
        let forms = chern_substitution(Group::F4, 3).unwrap();
        assert_eq!((&forms[0] + &forms[1]).render(), "w3");
        assert!(chern_substitution(Group::G2, 2).is_err());
        assert!(chern_poly(Group::F4, 2, 7).is_err());
    }

    #[test]
    fn top_chern_class_of_f4_is_the_product() {
        let forms = chern_substitution(Group::F4, 3).unwrap();
        let mut prod = Polynomial::one(forms[0].ring());
        for t in &forms {
            prod = &prod * t;
        }
        assert_eq!(chern_poly(Group::F4, 3, 6).unwrap(), prod);
    }

    #[test]
    fn derived_tables_drop_degrees() {
        let e6 = theta_set(Group::E6, 2).unwrap();
        assert_eq!(e6.degrees(), vec![2, 3, 5, 8, 9, 12]);
        let e7 = theta_set(Group::E7, 2).unwrap();
        assert_eq!(e7.degrees(), vec![2, 3, 5, 8, 9, 12, 14]);
        assert_eq!(e7.theta_c(8).unwrap().render(), "c4^2+w2^2*c6+w2^3*c5+w2^8");
    }

    #[test]
    fn sets_are_homogeneous() {
        for (g, p) in PAIRS {
            let set = theta_set(g, p).unwrap();
            assert_eq!(set.degrees(), set.profile().r);
            for s in set.degrees() {
                assert_eq!(set.theta_c(s).unwrap().homogeneous_weight(), Some(s), "{g} {p} {s}");
            }
        }
    }

    #[test]
    fn restriction_drops_distinguished_weight() {
        let set = theta_set(Group::E8, 5).unwrap();
        assert_eq!(set.theta_restricted(2).unwrap().render(), "-c2");
        let r = set.mixed_ring();
        let f = Polynomial::parse("w2^7*c8", r).unwrap();
        assert!(restrict_kappa(&f, Group::E8).unwrap().is_zero());
    }

    #[test]
    fn g2_needs_no_expansion() {
        let set = theta_set(Group::G2, 2).unwrap();
        assert_eq!(set.theta_omega(3).render(), "w2^3");
        assert!(set.restricted_ring().is_none());
    }
}
