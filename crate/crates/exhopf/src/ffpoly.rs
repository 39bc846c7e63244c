//! Prime fields and sparse graded polynomial rings over them.
//!
//! Monomials are dense exponent vectors; polynomials keep their terms sorted
//! in descending monomial order so that iteration and rendering are
//! deterministic.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rustc_hash::FxHashMap;
use thiserror::Error;

/// Largest number of variables a ring may declare.
pub const MAX_VARS: usize = 16;

/// A field element, always a canonical residue in `0..p`.
pub type Coeff = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("{0} is not a prime below 256")]
    NotPrime(u32),
    #[error("polynomials belong to different rings")]
    RingMismatch,
    #[error("ring declares {0} variables; at most {MAX_VARS} are supported")]
    TooManyVariables(usize),
    #[error("duplicate variable name `{0}`")]
    DuplicateVariable(String),
    #[error("variable `{0}` must have positive weight")]
    BadWeight(String),
    #[error("precedence is not a permutation of the variables")]
    BadPrecedence,
    #[error("variable `{0}` has no image")]
    UnmappedVariable(String),
    #[error("image of `{0}` is not homogeneous of the variable's weight")]
    InhomogeneousImage(String),
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable `{name}` at {pos}")]
    UnknownVariable { name: String, pos: usize },
    #[error("exponent overflow")]
    ExponentOverflow,
}

pub type Result<T> = std::result::Result<T, PolyError>;

/// The field of residues modulo a small prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self> {
        let prime = (2..256).contains(&p) && (2..p).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d));
        if prime {
            Ok(PrimeField { p })
        } else {
            Err(PolyError::NotPrime(p))
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn reduce(&self, v: i64) -> Coeff {
        v.rem_euclid(self.p as i64) as Coeff
    }

    pub fn add(&self, a: Coeff, b: Coeff) -> Coeff {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    pub fn sub(&self, a: Coeff, b: Coeff) -> Coeff {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    pub fn neg(&self, a: Coeff) -> Coeff {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    pub fn mul(&self, a: Coeff, b: Coeff) -> Coeff {
        (a * b) % self.p
    }

    pub fn pow(&self, a: Coeff, mut e: u64) -> Coeff {
        let mut base = a % self.p;
        let mut acc = 1 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self, a: Coeff) -> Coeff {
        assert!(!a.is_multiple_of(self.p), "inverse of zero in F_{}", self.p);
        self.pow(a, (self.p - 2) as u64)
    }

    pub fn div(&self, a: Coeff, b: Coeff) -> Coeff {
        self.mul(a, self.inv(b))
    }

    /// Representative in `(-p/2, p/2]`, used for human-facing output.
    pub fn signed(&self, a: Coeff) -> i64 {
        let a = a as i64;
        let p = self.p as i64;
        if a > p / 2 {
            a - p
        } else {
            a
        }
    }
}

/// A named ring variable with its weight (half the topological degree).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Variable {
    pub name: String,
    pub weight: u32,
}

/// An exponent vector. Entries past the ring's variable count stay zero.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    exps: [u16; MAX_VARS],
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let last = self.exps.iter().rposition(|&e| e != 0).map_or(0, |i| i + 1);
        write!(f, "{:?}", &self.exps[..last])
    }
}

impl Default for Monomial {
    fn default() -> Self {
        Monomial::one()
    }
}

impl Monomial {
    pub fn one() -> Self {
        Monomial { exps: [0; MAX_VARS] }
    }

    pub fn from_exponents(exps: &[u16]) -> Self {
        assert!(exps.len() <= MAX_VARS);
        let mut m = Monomial::one();
        m.exps[..exps.len()].copy_from_slice(exps);
        m
    }

    pub fn var(i: usize, e: u16) -> Self {
        let mut m = Monomial::one();
        m.exps[i] = e;
        m
    }

    pub fn exp(&self, i: usize) -> u16 {
        self.exps[i]
    }

    pub fn set_exp(&mut self, i: usize, e: u16) {
        self.exps[i] = e;
    }

    pub fn exponents(&self, nvars: usize) -> &[u16] {
        &self.exps[..nvars]
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn total_degree(&self) -> u32 {
        self.exps.iter().map(|&e| e as u32).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = *self;
        for (a, b) in out.exps.iter_mut().zip(other.exps.iter()) {
            *a = a.checked_add(*b).expect("exponent overflow");
        }
        out
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(other.exps.iter()).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        let mut out = *other;
        for (a, b) in out.exps.iter_mut().zip(self.exps.iter()) {
            *a -= *b;
        }
        out
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let mut out = *self;
        for (a, b) in out.exps.iter_mut().zip(other.exps.iter()) {
            *a = (*a).max(*b);
        }
        out
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(other.exps.iter()).all(|(a, b)| *a == 0 || *b == 0)
    }
}

/// Sort key whose lexicographic order is the ring's monomial order.
pub type OrderKey = [u16; MAX_VARS + 1];

/// Graded reverse lexicographic order on weighted degree.
///
/// `precedence` lists variable indices from the lowest to the highest
/// variable. Ties in weight are broken by the lowest variable: the monomial
/// with the smaller exponent there is the larger one.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonomialOrder {
    precedence: Vec<usize>,
}

impl MonomialOrder {
    pub fn precedence(&self) -> &[usize] {
        &self.precedence
    }
}

/// Coefficient field, variables and monomial order of a polynomial ring.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RingContext {
    field: PrimeField,
    vars: Vec<Variable>,
    order: MonomialOrder,
}

impl RingContext {
    pub fn new<S: Into<String>>(field: PrimeField, vars: Vec<(S, u32)>) -> Result<Arc<Self>> {
        let n = vars.len();
        Self::with_precedence(field, vars, (0..n).collect())
    }

    pub fn with_precedence<S: Into<String>>(
        field: PrimeField,
        vars: Vec<(S, u32)>,
        precedence: Vec<usize>,
    ) -> Result<Arc<Self>> {
        let vars: Vec<Variable> = vars
            .into_iter()
            .map(|(name, weight)| Variable { name: name.into(), weight })
            .collect();
        if vars.len() > MAX_VARS {
            return Err(PolyError::TooManyVariables(vars.len()));
        }
        for (i, v) in vars.iter().enumerate() {
            if v.weight == 0 {
                return Err(PolyError::BadWeight(v.name.clone()));
            }
            if vars[..i].iter().any(|w| w.name == v.name) {
                return Err(PolyError::DuplicateVariable(v.name.clone()));
            }
        }
        let mut seen = precedence.clone();
        seen.sort_unstable();
        if seen != (0..vars.len()).collect::<Vec<_>>() {
            return Err(PolyError::BadPrecedence);
        }
        Ok(Arc::new(RingContext { field, vars, order: MonomialOrder { precedence } }))
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn p(&self) -> u32 {
        self.field.p
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn vars(&self) -> &[Variable] {
        &self.vars
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }

    pub fn weight(&self, m: &Monomial) -> u32 {
        self.vars.iter().enumerate().map(|(i, v)| v.weight * m.exps[i] as u32).sum()
    }

    pub fn key(&self, m: &Monomial) -> OrderKey {
        let mut k = [u16::MAX; MAX_VARS + 1];
        k[0] = self.weight(m) as u16;
        for (j, &i) in self.order.precedence.iter().enumerate() {
            k[j + 1] = u16::MAX - m.exps[i];
        }
        k
    }

    pub fn from_key(&self, k: &OrderKey) -> Monomial {
        let mut m = Monomial::one();
        for (j, &i) in self.order.precedence.iter().enumerate() {
            m.exps[i] = u16::MAX - k[j + 1];
        }
        m
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        let wa = self.weight(a);
        let wb = self.weight(b);
        if wa != wb {
            return wa.cmp(&wb);
        }
        for &i in &self.order.precedence {
            if a.exps[i] != b.exps[i] {
                return b.exps[i].cmp(&a.exps[i]);
            }
        }
        Ordering::Equal
    }

    pub fn same(a: &Arc<RingContext>, b: &Arc<RingContext>) -> bool {
        Arc::ptr_eq(a, b) || **a == **b
    }

    pub fn render_monomial(&self, m: &Monomial) -> String {
        let mut parts = Vec::new();
        for (i, v) in self.vars.iter().enumerate() {
            match m.exps[i] {
                0 => {}
                1 => parts.push(v.name.clone()),
                e => parts.push(format!("{}^{}", v.name, e)),
            }
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

/// A polynomial with terms in descending monomial order and no zero
/// coefficients.
#[derive(Clone)]
pub struct Polynomial {
    ring: Arc<RingContext>,
    terms: Vec<(Monomial, Coeff)>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        RingContext::same(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({})", self.render())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl Polynomial {
    pub fn zero(ring: &Arc<RingContext>) -> Self {
        Polynomial { ring: ring.clone(), terms: Vec::new() }
    }

    pub fn one(ring: &Arc<RingContext>) -> Self {
        Self::constant(ring, 1)
    }

    pub fn constant(ring: &Arc<RingContext>, c: i64) -> Self {
        Self::monomial(ring, Monomial::one(), ring.field.reduce(c))
    }

    pub fn var(ring: &Arc<RingContext>, i: usize) -> Self {
        assert!(i < ring.nvars());
        Self::monomial(ring, Monomial::var(i, 1), 1)
    }

    /// The variable with the given name; panics if the ring lacks it.
    pub fn named(ring: &Arc<RingContext>, name: &str) -> Self {
        let i = ring.var_index(name).unwrap_or_else(|| panic!("no variable {name}"));
        Self::var(ring, i)
    }

    pub fn monomial(ring: &Arc<RingContext>, m: Monomial, c: Coeff) -> Self {
        let c = c % ring.p();
        let terms = if c == 0 { Vec::new() } else { vec![(m, c)] };
        Polynomial { ring: ring.clone(), terms }
    }

    /// Builds a polynomial from arbitrary terms, combining duplicates.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, Coeff)>>(ring: &Arc<RingContext>, it: I) -> Self {
        let f = ring.field;
        let mut acc: FxHashMap<Monomial, Coeff> = FxHashMap::default();
        for (m, c) in it {
            let e = acc.entry(m).or_insert(0);
            *e = f.add(*e, c % f.p);
        }
        Self::from_map(ring, acc)
    }

    fn from_map(ring: &Arc<RingContext>, acc: FxHashMap<Monomial, Coeff>) -> Self {
        let mut terms: Vec<(Monomial, Coeff)> = acc.into_iter().filter(|&(_, c)| c != 0).collect();
        terms.sort_unstable_by_key(|(m, _)| std::cmp::Reverse(ring.key(m)));
        Polynomial { ring: ring.clone(), terms }
    }

    /// Wraps terms already sorted descending and free of zeros.
    pub(crate) fn from_sorted(ring: &Arc<RingContext>, terms: Vec<(Monomial, Coeff)>) -> Self {
        debug_assert!(terms.windows(2).all(|w| ring.cmp(&w[0].0, &w[1].0) == Ordering::Greater));
        debug_assert!(terms.iter().all(|&(_, c)| c != 0 && c < ring.p()));
        Polynomial { ring: ring.clone(), terms }
    }

    pub fn ring(&self) -> &Arc<RingContext> {
        &self.ring
    }

    pub fn field(&self) -> PrimeField {
        self.ring.field
    }

    pub fn terms(&self) -> &[(Monomial, Coeff)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading(&self) -> Option<&(Monomial, Coeff)> {
        self.terms.first()
    }

    pub fn coeff(&self, m: &Monomial) -> Coeff {
        self.terms.iter().find(|(t, _)| t == m).map_or(0, |&(_, c)| c)
    }

    /// Weight of the leading monomial, or `None` for zero.
    pub fn max_weight(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| self.ring.weight(m)).max()
    }

    /// The common weight of all terms; `None` if inhomogeneous or zero.
    pub fn homogeneous_weight(&self) -> Option<u32> {
        let mut it = self.terms.iter().map(|(m, _)| self.ring.weight(m));
        let w = it.next()?;
        it.all(|x| x == w).then_some(w)
    }

    /// True for zero and for polynomials whose terms share a weight.
    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.homogeneous_weight().is_some()
    }

    /// The weight-`d` component.
    pub fn component(&self, d: u32) -> Polynomial {
        let terms = self.terms.iter().filter(|(m, _)| self.ring.weight(m) == d).cloned().collect();
        Polynomial { ring: self.ring.clone(), terms }
    }

    fn check_ring(&self, other: &Polynomial) -> Result<()> {
        if RingContext::same(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(PolyError::RingMismatch)
        }
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        Ok(self.add_scaled(other, 1))
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        Ok(self.add_scaled(other, self.ring.p() - 1))
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        Ok(self.mul_unchecked(other))
    }

    /// `self + c * other` by merging the two sorted term lists.
    pub fn add_scaled(&self, other: &Polynomial, c: Coeff) -> Polynomial {
        assert!(RingContext::same(&self.ring, &other.ring), "ring mismatch");
        let f = self.ring.field;
        let c = c % f.p;
        if c == 0 || other.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let a = &self.terms;
        let b = &other.terms;
        while i < a.len() && j < b.len() {
            match self.ring.cmp(&a[i].0, &b[j].0) {
                Ordering::Greater => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Less => {
                    out.push((b[j].0, f.mul(c, b[j].1)));
                    j += 1;
                }
                Ordering::Equal => {
                    let s = f.add(a[i].1, f.mul(c, b[j].1));
                    if s != 0 {
                        out.push((a[i].0, s));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend(b[j..].iter().map(|&(m, x)| (m, f.mul(c, x))));
        Polynomial { ring: self.ring.clone(), terms: out }
    }

    pub fn scale(&self, c: Coeff) -> Polynomial {
        let f = self.ring.field;
        let c = c % f.p;
        if c == 0 {
            return Polynomial::zero(&self.ring);
        }
        let terms = self.terms.iter().map(|&(m, x)| (m, f.mul(c, x))).collect();
        Polynomial { ring: self.ring.clone(), terms }
    }

    pub fn neg(&self) -> Polynomial {
        self.scale(self.ring.p() - 1)
    }

    /// Multiplies by the term `c * m`; order is preserved by compatibility.
    pub fn mul_term(&self, m: &Monomial, c: Coeff) -> Polynomial {
        let f = self.ring.field;
        let c = c % f.p;
        if c == 0 {
            return Polynomial::zero(&self.ring);
        }
        let terms = self.terms.iter().map(|&(t, x)| (t.mul(m), f.mul(c, x))).collect();
        Polynomial { ring: self.ring.clone(), terms }
    }

    fn mul_unchecked(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        if other.terms.len() == 1 {
            return self.mul_term(&other.terms[0].0, other.terms[0].1);
        }
        if self.terms.len() == 1 {
            return other.mul_term(&self.terms[0].0, self.terms[0].1);
        }
        let f = self.ring.field;
        let mut acc: FxHashMap<Monomial, Coeff> = FxHashMap::default();
        acc.reserve(self.terms.len().max(other.terms.len()) * 2);
        for &(ma, ca) in &self.terms {
            for &(mb, cb) in &other.terms {
                let e = acc.entry(ma.mul(&mb)).or_insert(0);
                *e = (*e + ca * cb) % f.p;
            }
        }
        Self::from_map(&self.ring, acc)
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::one(&self.ring);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Ring homomorphism sending variable `i` to `images[i]`.
    ///
    /// Every variable occurring in `self` needs an image, and each image
    /// must be zero or homogeneous of the variable's weight.
    pub fn substitute(&self, target: &Arc<RingContext>, images: &[Option<Polynomial>]) -> Result<Polynomial> {
        let n = self.ring.nvars();
        for (i, v) in self.ring.vars.iter().enumerate() {
            let used = self.terms.iter().any(|(m, _)| m.exps[i] > 0);
            match images.get(i).and_then(|x| x.as_ref()) {
                None if used => return Err(PolyError::UnmappedVariable(v.name.clone())),
                None => {}
                Some(img) => {
                    if !RingContext::same(img.ring(), target) {
                        return Err(PolyError::RingMismatch);
                    }
                    if !img.is_zero() && img.homogeneous_weight() != Some(v.weight) {
                        return Err(PolyError::InhomogeneousImage(v.name.clone()));
                    }
                }
            }
        }
        let mut powers: Vec<Vec<Polynomial>> = vec![Vec::new(); n];
        let mut get_pow = |i: usize, e: usize| -> Polynomial {
            let img = images[i].as_ref().unwrap();
            let cache = &mut powers[i];
            if cache.is_empty() {
                cache.push(Polynomial::one(target));
            }
            while cache.len() <= e {
                let next = &cache[cache.len() - 1] * img;
                cache.push(next);
            }
            cache[e].clone()
        };
        let mut acc: FxHashMap<Monomial, Coeff> = FxHashMap::default();
        let f = target.field;
        for &(m, c) in &self.terms {
            let mut term = Polynomial::constant(target, c as i64);
            for i in 0..n {
                let e = m.exps[i] as usize;
                if e > 0 {
                    term = &term * &get_pow(i, e);
                    if term.is_zero() {
                        break;
                    }
                }
            }
            for (tm, tc) in term.terms {
                let e = acc.entry(tm).or_insert(0);
                *e = f.add(*e, tc);
            }
        }
        Ok(Self::from_map(target, acc))
    }

    /// Moves `self` into `target`, matching variables by name.
    ///
    /// `overrides` replaces chosen variables by polynomials in `target`; any
    /// other variable must exist in `target` under the same name.
    pub fn transfer(&self, target: &Arc<RingContext>, overrides: &[(&str, Polynomial)]) -> Result<Polynomial> {
        let images: Vec<Option<Polynomial>> = self
            .ring
            .vars
            .iter()
            .map(|v| {
                if let Some((_, img)) = overrides.iter().find(|(n, _)| *n == v.name) {
                    Some(img.clone())
                } else {
                    target.var_index(&v.name).map(|j| Polynomial::var(target, j))
                }
            })
            .collect();
        self.substitute(target, &images)
    }

    /// Applies `g` to every term and sums the results.
    pub fn map_terms<F: FnMut(&Monomial, Coeff) -> Polynomial>(&self, target: &Arc<RingContext>, mut g: F) -> Polynomial {
        let f = target.field;
        let mut acc: FxHashMap<Monomial, Coeff> = FxHashMap::default();
        for (m, c) in &self.terms {
            for &(tm, tc) in g(m, *c).terms() {
                let e = acc.entry(tm).or_insert(0);
                *e = f.add(*e, tc);
            }
        }
        Self::from_map(target, acc)
    }

    pub fn make_monic(&self) -> Polynomial {
        match self.leading() {
            None => self.clone(),
            Some(&(_, c)) => self.scale(self.ring.field.inv(c)),
        }
    }

    pub fn parse(text: &str, ring: &Arc<RingContext>) -> Result<Polynomial> {
        Parser { src: text.as_bytes(), pos: 0, ring }.poly()
    }

    /// Canonical text form: descending terms, unit coefficients omitted and
    /// `p - 1` written as a minus sign when `p > 2`.
    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let p = self.ring.p();
        let mut out = String::new();
        for (idx, &(m, c)) in self.terms.iter().enumerate() {
            let negative = p > 2 && c == p - 1;
            let mag = if negative { 1 } else { c };
            if negative {
                out.push('-');
            } else if idx > 0 {
                out.push('+');
            }
            if m.is_one() {
                out.push_str(&mag.to_string());
            } else {
                if mag != 1 {
                    out.push_str(&format!("{mag}*"));
                }
                out.push_str(&self.ring.render_monomial(&m));
            }
        }
        out
    }

    /// Terms keyed by rendered monomial, with signed coefficients.
    pub fn signed_terms(&self) -> Vec<(String, i64)> {
        self.terms.iter().map(|(m, c)| (self.ring.render_monomial(m), self.ring.field.signed(*c))).collect()
    }

    /// Terms grouped by weight, ascending.
    pub fn components(&self) -> BTreeMap<u32, Polynomial> {
        let mut out: BTreeMap<u32, Vec<(Monomial, Coeff)>> = BTreeMap::new();
        for &(m, c) in &self.terms {
            out.entry(self.ring.weight(&m)).or_default().push((m, c));
        }
        out.into_iter().map(|(w, t)| (w, Polynomial { ring: self.ring.clone(), terms: t })).collect()
    }
}

impl<'a> std::ops::Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &'a Polynomial) -> Polynomial {
        self.add_scaled(rhs, 1)
    }
}

impl<'a> std::ops::Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &'a Polynomial) -> Polynomial {
        self.add_scaled(rhs, self.ring.p() - 1)
    }
}

impl<'a> std::ops::Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &'a Polynomial) -> Polynomial {
        assert!(RingContext::same(&self.ring, &rhs.ring), "ring mismatch");
        self.mul_unchecked(rhs)
    }
}

impl std::ops::Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::neg(self)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    ring: &'a Arc<RingContext>,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(PolyError::Syntax { pos: self.pos, msg: msg.to_string() })
    }

    fn uint(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected integer");
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        s.parse::<u64>().or_else(|_| {
            self.pos = start;
            self.err("integer too large")
        })
    }

    fn poly(&mut self) -> Result<Polynomial> {
        let mut acc = Polynomial::zero(self.ring);
        let mut negative = false;
        if self.peek() == Some(b'-') {
            self.pos += 1;
            negative = true;
        }
        loop {
            let t = self.term()?;
            acc = if negative { &acc - &t } else { &acc + &t };
            match self.peek() {
                None => return Ok(acc),
                Some(b'+') => negative = false,
                Some(b'-') => negative = true,
                Some(_) => return self.err("expected `+`, `-` or end of input"),
            }
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let field = self.ring.field;
        let mut coeff: Coeff = 1;
        let mut mono = Monomial::one();
        let mut first = true;
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                coeff = (self.uint()? % field.p as u64) as Coeff;
                first = false;
            }
            Some(c) if c.is_ascii_alphabetic() => {}
            Some(_) => return self.err("expected coefficient or variable"),
            None => return self.err("unexpected end of input"),
        }
        loop {
            if first {
                first = false;
            } else if self.peek() == Some(b'*') {
                self.pos += 1;
            } else {
                break;
            }
            let (i, e) = self.factor()?;
            let cur = mono.exp(i) as u64 + e;
            if cur > u16::MAX as u64 {
                return Err(PolyError::ExponentOverflow);
            }
            mono.set_exp(i, cur as u16);
        }
        Ok(Polynomial::monomial(self.ring, mono, coeff))
    }

    fn factor(&mut self) -> Result<(usize, u64)> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphabetic() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected variable");
        }
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        let i = self
            .ring
            .var_index(name)
            .ok_or_else(|| PolyError::UnknownVariable { name: name.to_string(), pos: start })?;
        let mut e = 1;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            e = self.uint()?;
        }
        Ok((i, e))
    }
}

/// Ring `F_p[w1..wn]` with every variable of weight one.
pub fn weight_ring(p: u32, n: usize) -> Result<Arc<RingContext>> {
    let field = PrimeField::new(p)?;
    RingContext::new(field, (1..=n).map(|i| (format!("w{i}"), 1)).collect())
}

/// Ring `F_p[c_lo..c_hi]` with `c_k` of weight `k`.
pub fn chern_ring(p: u32, lo: u32, hi: u32) -> Result<Arc<RingContext>> {
    let field = PrimeField::new(p)?;
    RingContext::new(field, (lo..=hi).map(|k| (format!("c{k}"), k)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(p: u32) -> Arc<RingContext> {
        weight_ring(p, 2).unwrap()
    }

    #[test]
    fn field_rejects_composites() {
        assert!(PrimeField::new(4).is_err());
        assert!(PrimeField::new(1).is_err());
        assert!(PrimeField::new(257).is_err());
        assert!(PrimeField::new(251).is_ok());
        let f = PrimeField::new(5).unwrap();
        assert_eq!(f.inv(2), 3);
        assert_eq!(f.reduce(-1), 4);
        assert_eq!(f.signed(3), -2);
    }

    #[test]
    fn additive_inverse_and_char_two() {
        let r = ring(3);
        let w = Polynomial::parse("w2^3", &r).unwrap();
        assert!((&w + &w.scale(2)).is_zero());
        let r2 = ring(2);
        let f = Polynomial::parse("w1^2*w2", &r2).unwrap();
        assert!((&f + &f).is_zero());
    }

    #[test]
    fn ring_mismatch_is_an_error() {
        let a = Polynomial::parse("w1", &ring(2)).unwrap();
        let b = Polynomial::parse("w1", &ring(3)).unwrap();
        assert_eq!(a.try_add(&b), Err(PolyError::RingMismatch));
        assert_eq!(a.try_mul(&b), Err(PolyError::RingMismatch));
    }

    #[test]
    fn order_is_graded_then_reverse_lex() {
        let r = weight_ring(2, 3).unwrap();
        let p = Polynomial::parse("w1^2+w1*w2+w2^2+w3+w1*w3", &r).unwrap();
        assert_eq!(p.render(), "w2^2+w1*w3+w1*w2+w1^2+w3");
    }

    #[test]
    fn parse_render_examples() {
        let r = chern_ring(2, 2, 8).unwrap();
        let f = Polynomial::parse("c6^2+c4^3", &r).unwrap();
        assert_eq!(f.homogeneous_weight(), Some(12));
        assert_eq!(Polynomial::parse(&f.render(), &r).unwrap(), f);
        assert!(Polynomial::parse("0", &r).unwrap().is_zero());
        let r5 = chern_ring(5, 2, 8).unwrap();
        let g = Polynomial::parse("-2*c3^2 - c6", &r5).unwrap();
        assert_eq!(g.render(), "-c6+3*c3^2");
    }

    #[test]
    fn parse_errors_carry_position() {
        let r = chern_ring(3, 2, 4).unwrap();
        match Polynomial::parse("c2+c9", &r) {
            Err(PolyError::UnknownVariable { name, pos }) => {
                assert_eq!(name, "c9");
                assert_eq!(pos, 3);
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(Polynomial::parse("c2+*c3", &r), Err(PolyError::Syntax { pos: 3, .. })));
        assert!(matches!(Polynomial::parse("c2 c3", &r), Err(PolyError::Syntax { .. })));
    }

    #[test]
    fn substitution_checks_images() {
        let src = chern_ring(2, 2, 3).unwrap();
        let dst = weight_ring(2, 2).unwrap();
        let f = Polynomial::parse("c2*c3", &src).unwrap();
        let w1 = Polynomial::named(&dst, "w1");
        let bad = vec![Some(w1.clone()), None];
        assert_eq!(f.substitute(&dst, &bad), Err(PolyError::InhomogeneousImage("c2".into())));
        let unmapped = vec![Some(w1.pow(2)), None];
        assert_eq!(f.substitute(&dst, &unmapped), Err(PolyError::UnmappedVariable("c3".into())));
        let ok = vec![Some(w1.pow(2)), Some(Polynomial::zero(&dst))];
        assert!(f.substitute(&dst, &ok).unwrap().is_zero());
    }

    #[test]
    fn times_theta_two() {
        let r = ring(2);
        let theta2 = Polynomial::parse("w1^2+w1*w2+w2^2", &r).unwrap();
        let w1 = Polynomial::named(&r, "w1");
        let expect = Polynomial::parse("w1^3+w1^2*w2+w1*w2^2", &r).unwrap();
        assert_eq!(&w1 * &theta2, expect);
    }
}
