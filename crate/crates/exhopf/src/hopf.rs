//! Finite Hopf-algebra models of `H*(G; F_p)`.
//!
//! The algebra is `F_p[x_2t]/(x_2t^k_t) ⊗ Δ(α_2s-1)`. The model carries a
//! product, the Bockstein, reduced powers (Steenrod squares at `p = 2`) and
//! the coproduct. It also holds the coproduct solver and a self-check suite.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Mutex;

use rustc_hash::FxHashMap;
use thiserror::Error;

use crate::bst::BstTable;
use crate::ffpoly::{Coeff, PrimeField};
use crate::liedata::{DataError, Group, GroupProfile};

/// Maximum number of even generators in any supported pair.
pub const MAX_EVEN: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HopfError {
    #[error(transparent)]
    Data(#[from] DataError),
    #[error("model table mismatch: {0}")]
    Mismatch(String),
    #[error("no generator of degree {0}")]
    UnknownGenerator(u32),
    #[error("cannot parse `{text}`: {msg}")]
    Parse { text: String, msg: String },
    #[error("generators neither listed nor reachable: {0:?}")]
    UnreachableGenerator(Vec<u32>),
    #[error("coproduct system for degree {0} has no solution")]
    Inconsistent(u32),
    #[error("coproduct system for degree {degree} leaves a {dim}-dimensional solution space")]
    Underdetermined { degree: u32, dim: usize },
    #[error("{consistent} actions on even generators are consistent; expected exactly one")]
    EvenAction { consistent: usize },
    #[error("operation requires p = 2")]
    NotCharacteristicTwo,
}

pub type Result<T> = std::result::Result<T, HopfError>;

/// A basis monomial `x^r α_S`: exponents of the even generators and a bitmask
/// of odd generators, both in model order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Basis {
    pub x: [u8; MAX_EVEN],
    pub odd: u16,
}

impl Basis {
    pub const ONE: Basis = Basis { x: [0; MAX_EVEN], odd: 0 };

    fn is_odd(&self) -> bool {
        self.odd.count_ones() % 2 == 1
    }
}

/// A linear combination of basis monomials.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Element {
    terms: BTreeMap<Basis, Coeff>,
}

impl Element {
    pub fn zero() -> Self {
        Element::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<Basis, Coeff> {
        &self.terms
    }

    fn add_term(&mut self, f: PrimeField, b: Basis, c: Coeff) {
        if c == 0 {
            return;
        }
        let slot = self.terms.entry(b).or_insert(0);
        *slot = f.add(*slot, c);
        if *slot == 0 {
            self.terms.remove(&b);
        }
    }

    fn add_scaled(&mut self, f: PrimeField, other: &Element, c: Coeff) {
        for (&b, &v) in &other.terms {
            self.add_term(f, b, f.mul(v, c));
        }
    }
}

/// An element of the `N`-fold tensor power of the model.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Tensor<const N: usize> {
    terms: BTreeMap<[Basis; N], Coeff>,
}

pub type Tensor2 = Tensor<2>;
pub type Tensor3 = Tensor<3>;

impl<const N: usize> Tensor<N> {
    pub fn zero() -> Self {
        Tensor { terms: BTreeMap::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<[Basis; N], Coeff> {
        &self.terms
    }

    fn add_term(&mut self, f: PrimeField, k: [Basis; N], c: Coeff) {
        if c == 0 {
            return;
        }
        let slot = self.terms.entry(k).or_insert(0);
        *slot = f.add(*slot, c);
        if *slot == 0 {
            self.terms.remove(&k);
        }
    }

    fn add_scaled(&mut self, f: PrimeField, other: &Tensor<N>, c: Coeff) {
        for (&k, &v) in &other.terms {
            self.add_term(f, k, f.mul(v, c));
        }
    }
}

/// Where the coproduct of an odd generator came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoproductSource {
    /// Taken from the printed table.
    Listed,
    /// `α = b⁻¹ P^k α_from`, propagated through the Cartan formula.
    Power { from: u32, k: u32 },
}

/// Reduced coproducts of all generators, plus the full coproducts of the
/// even generators.
#[derive(Debug, Clone)]
pub struct CoproductTable {
    /// Reduced coproduct of each odd generator, keyed by degree.
    pub odd: BTreeMap<u32, Tensor2>,
    pub source: BTreeMap<u32, CoproductSource>,
    /// Full coproduct of each even generator, keyed by degree.
    pub even: BTreeMap<u32, Tensor2>,
    /// Routes that disagree with the chosen value: `(degree, from, k)`.
    pub conflicts: Vec<(u32, u32, u32)>,
    cache: std::sync::Arc<Mutex<FxHashMap<Basis, Tensor2>>>,
}

/// One line of [`HopfModel::check_suite`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckItem {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

/// A linear constraint on an unknown reduced coproduct `φ(α)`.
#[derive(Debug, Clone)]
pub enum Constraint {
    /// `(δ⊗1 + 1⊗δ) φ(α) = φ(δα)`.
    Bockstein,
    /// `P^k` on tensors applied to `φ(α)` equals the given tensor
    /// (at `p = 2`, `P^k` is `Sq^2k`).
    Power { k: u32, target: Tensor2 },
}

/// The unique solution of a coproduct system.
#[derive(Debug, Clone)]
pub struct Solution {
    pub ansatz: Vec<(Basis, u32)>,
    pub coefficients: Vec<Coeff>,
    pub value: Tensor2,
}

/// The model of one `(G, p)`.
pub struct HopfModel {
    profile: GroupProfile,
    field: PrimeField,
    /// `(t, k_t)` of each even generator `x_2t`.
    even: Vec<(u32, u32)>,
    /// Weight `s` of each odd generator `α_2s-1`.
    odd: Vec<u32>,
    squares: Vec<Element>,
    bockstein: Vec<Element>,
    /// `(k, i) -> (j, b)`: `P^k α_i = b α_j`.
    powers: BTreeMap<(u32, usize), (usize, Coeff)>,
    listed: BTreeMap<usize, Tensor2>,
    /// At `p = 2`, `x_2t = α_i² + rest`: `(i, rest)` per even generator.
    square_roots: Vec<(usize, Element)>,
    /// At odd `p`, `P^k x_2t` for `0 < k < t`: `(k, i) -> value`.
    even_powers: BTreeMap<(u32, usize), Element>,
    op_cache: Mutex<FxHashMap<(u32, Basis), Element>>,
}

type Scope = &'static [Group];
const ALL: Scope = &[Group::G2, Group::F4, Group::E6, Group::E7, Group::E8];
const E78: Scope = &[Group::E7, Group::E8];
const E7: Scope = &[Group::E7];
const E8: Scope = &[Group::E8];
const NOT_G2: Scope = &[Group::F4, Group::E6, Group::E7, Group::E8];

/// Bockstein of odd generators: `(p, groups, degree, value)`.
const BOCKSTEIN: &[(u32, Scope, u32, &str)] = &[
    (2, ALL, 5, "x6"),
    (2, E78, 9, "x10"),
    (2, E78, 17, "x18"),
    (2, E78, 15, "x6*x10"),
    (2, E78, 27, "x10*x18"),
    (2, E7, 23, "x6*x18"),
    (2, E8, 23, "x6*x18+x6^4"),
    (2, E8, 29, "x30+x6^2*x18"),
    (3, NOT_G2, 7, "-x8"),
    (3, NOT_G2, 15, "-x8^2"),
    (3, E8, 19, "x20"),
    (3, E8, 27, "-x8*x20"),
    (3, E8, 35, "x8^2*x20"),
    (3, E8, 39, "x20^2"),
    (3, E8, 47, "x8*x20^2"),
    (5, E8, 11, "-x12"),
    (5, E8, 23, "-x12^2"),
    (5, E8, 35, "x12^3"),
    (5, E8, 47, "2*x12^4"),
];

/// Nonzero squares of odd generators at `p = 2`.
const SQUARES: &[(Scope, u32, &str)] = &[
    (ALL, 3, "x6"),
    (E78, 5, "x10"),
    (E78, 9, "x18"),
    (E8, 15, "x30+x6^2*x18"),
];

/// Printed reduced coproducts. Entries naming a degree the group lacks are
/// skipped.
const COPRODUCTS: &[(u32, Scope, u32, &str)] = &[
    (2, ALL, 3, "0"),
    (2, &[Group::F4], 15, "0"),
    (2, &[Group::E6], 15, "x6|a9"),
    (2, E7, 15, "x10|a5+x6|a9"),
    (2, E8, 15, "x10|a5+x6|a9+x6^2|a3"),
    (3, NOT_G2, 3, "0"),
    (3, NOT_G2, 7, "0"),
    (3, NOT_G2, 9, "0"),
    (3, NOT_G2, 17, "0"),
    (3, NOT_G2, 19, "0"),
    (3, &[Group::F4, Group::E6, Group::E7], 11, "-x8|a3"),
    (3, E8, 15, "-x8|a7"),
    (3, E7, 35, "x8|a27+x8^2|a19"),
    (3, E8, 35, "x8|a27+x8^2|a19+x8*x20|a7-x20|a15"),
    (5, E8, 3, "0"),
    (5, E8, 15, "2*x12|a3"),
    (5, E8, 27, "2*x12|a15+2*x12^2|a3"),
    (5, E8, 39, "3*x12|a27+3*x12^2|a15+2*x12^3|a3"),
];

/// Exceptions to `ζ = α`: `(p, groups, degree, ζ)`.
const ZETA: &[(u32, Scope, u32, &str)] = &[
    (2, E78, 15, "a15+x6*a9"),
    (2, E78, 27, "a27+x10*a17"),
    (2, E7, 23, "a23+x6*a17"),
    (2, E8, 23, "a23+x6*a17+x6^3*a5"),
    (2, E8, 29, "a29+x6^2*a17"),
    (3, NOT_G2, 15, "a15-x8*a7"),
    (3, E78, 35, "a35+x8*a27"),
    (3, E8, 19, "-a19"),
    (3, E8, 27, "a27+x8*a19"),
    (3, E8, 39, "a39-x20*a19"),
    (3, E8, 47, "a47-x8*a39"),
    (5, E8, 15, "3*a15"),
    (5, E8, 23, "3*a23+2*x12*a11"),
    (5, E8, 35, "-a35-x12^2*a11"),
    (5, E8, 47, "3*a47+x12^3*a11"),
];

/// Sq¹ of odd generators written through squares of generators, at `p = 2`.
const SQ1_AS_SQUARES: &[(Scope, u32, &str)] = &[
    (E78, 15, "a3*a3*a5*a5"),
    (E78, 27, "a5*a5*a9*a9"),
    (E7, 23, "a3*a3*a9*a9"),
    (E8, 23, "a3*a3*a9*a9+a3*a3*a3*a3*a3*a3*a3*a3"),
    (E8, 29, "a15*a15"),
];

/// Squares of ζ-generators at `p = 2`.
const ZETA_SQUARES: &[(Scope, u32, &str)] = &[
    (ALL, 3, "x6"),
    (E78, 5, "x10"),
    (E78, 9, "x18"),
    (E8, 15, "x30"),
    (E8, 23, "x6^6*x10"),
];

fn scoped<T: Copy>(rows: &[(u32, Scope, u32, T)], g: Group, p: u32) -> Vec<(u32, T)> {
    rows.iter()
        .filter(|r| r.0 == p && r.1.contains(&g))
        .map(|r| (r.2, r.3))
        .collect()
}

/// Builds the model of `(G, p)` with reduced powers taken from `bst`.
pub fn build_model(group: Group, p: u32, bst: &BstTable) -> Result<HopfModel> {
    let profile = crate::liedata::profile(group, p)?;
    if bst.profile.group != group || bst.profile.p != p {
        return Err(HopfError::Mismatch(format!(
            "b-table is for ({}, {})",
            bst.profile.group, bst.profile.p
        )));
    }
    let field = PrimeField::new(p).map_err(DataError::from)?;
    let even: Vec<(u32, u32)> = profile.k.iter().map(|(&t, &k)| (t, k)).collect();
    let odd = profile.r.clone();
    let mut model = HopfModel {
        profile,
        field,
        even,
        odd,
        squares: Vec::new(),
        bockstein: Vec::new(),
        powers: BTreeMap::new(),
        listed: BTreeMap::new(),
        square_roots: Vec::new(),
        even_powers: BTreeMap::new(),
        op_cache: Mutex::new(FxHashMap::default()),
    };
    let n = model.odd.len();

    model.bockstein = vec![Element::zero(); n];
    for (deg, text) in scoped(BOCKSTEIN, group, p) {
        let i = model.odd_index(deg)?;
        model.bockstein[i] = model.parse(text)?;
    }

    for e in &bst.entries {
        if e.value == 0 {
            continue;
        }
        let i = model.odd.iter().position(|&s| s == e.s).expect("b-table weight");
        let j = model.odd.iter().position(|&s| s == e.t).expect("b-table weight");
        model.powers.insert((e.k, i), (j, e.value));
    }

    if p == 2 {
        model.squares = vec![Element::zero(); n];
        for &(scope, deg, text) in SQUARES {
            if scope.contains(&group) {
                let i = model.odd_index(deg)?;
                model.squares[i] = model.parse(text)?;
            }
        }
        for ti in 0..model.even.len() {
            let t = model.even[ti].0;
            let i = model.odd_index(t)?;
            let mut rest = model.squares[i].clone();
            let xb = model.gen_x(ti);
            if rest.terms.get(&xb) != Some(&1) {
                return Err(HopfError::Mismatch(format!("x{} is not a square", 2 * t)));
            }
            rest.terms.remove(&xb);
            model.square_roots.push((i, rest));
        }
    }

    for (deg, text) in scoped(COPRODUCTS, group, p) {
        if let Ok(i) = model.odd_index(deg) {
            let t = model.parse_tensor(text)?;
            model.listed.insert(i, t);
        }
    }
    if p != 2 {
        model.derive_even_action()?;
    }
    Ok(model)
}

impl HopfModel {
    pub fn group(&self) -> Group {
        self.profile.group
    }

    pub fn p(&self) -> u32 {
        self.field.p()
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn profile(&self) -> &GroupProfile {
        &self.profile
    }

    /// Degrees of the odd generators.
    pub fn odd_degrees(&self) -> Vec<u32> {
        self.odd.iter().map(|s| 2 * s - 1).collect()
    }

    /// `(degree, k_t)` of the even generators.
    pub fn even_degrees(&self) -> Vec<(u32, u32)> {
        self.even.iter().map(|&(t, k)| (2 * t, k)).collect()
    }

    pub fn dim(&self) -> usize {
        self.even.iter().map(|&(_, k)| k as usize).product::<usize>() << self.odd.len()
    }

    /// All basis monomials in ascending order.
    pub fn basis(&self) -> Vec<Basis> {
        let mut xs = vec![[0u8; MAX_EVEN]];
        for (i, &(_, k)) in self.even.iter().enumerate() {
            let mut next = Vec::new();
            for v in &xs {
                for e in 0..k {
                    let mut w = *v;
                    w[i] = e as u8;
                    next.push(w);
                }
            }
            xs = next;
        }
        let mut out = Vec::with_capacity(self.dim());
        for x in xs {
            for odd in 0..(1u16 << self.odd.len()) {
                out.push(Basis { x, odd });
            }
        }
        out.sort();
        out
    }

    pub fn degree(&self, b: &Basis) -> u32 {
        let ev: u32 = self.even.iter().enumerate().map(|(i, &(t, _))| 2 * t * b.x[i] as u32).sum();
        let od: u32 = (0..self.odd.len())
            .filter(|i| b.odd >> i & 1 == 1)
            .map(|i| 2 * self.odd[i] - 1)
            .sum();
        ev + od
    }

    /// Graded dimensions from a basis census, indexed by degree.
    pub fn graded_dimension(&self) -> Vec<u64> {
        let mut out = vec![0u64; self.profile.dim as usize + 1];
        for b in self.basis() {
            out[self.degree(&b) as usize] += 1;
        }
        out
    }

    /// Graded dimensions from the product formula.
    pub fn poincare_series(&self) -> Vec<u64> {
        let mut poly = vec![1u64];
        let mul = |poly: &[u64], factor: &[(usize, u64)]| {
            let top = factor.iter().map(|f| f.0).max().unwrap_or(0);
            let mut out = vec![0u64; poly.len() + top];
            for (i, &a) in poly.iter().enumerate() {
                for &(d, c) in factor {
                    out[i + d] += a * c;
                }
            }
            out
        };
        for &s in &self.odd {
            poly = mul(&poly, &[(0, 1), ((2 * s - 1) as usize, 1)]);
        }
        for &(t, k) in &self.even {
            let f: Vec<(usize, u64)> = (0..k).map(|e| ((2 * t * e) as usize, 1)).collect();
            poly = mul(&poly, &f);
        }
        poly
    }

    fn odd_index(&self, deg: u32) -> Result<usize> {
        self.odd
            .iter()
            .position(|&s| 2 * s - 1 == deg)
            .ok_or(HopfError::UnknownGenerator(deg))
    }

    fn even_index(&self, deg: u32) -> Result<usize> {
        self.even
            .iter()
            .position(|&(t, _)| 2 * t == deg)
            .ok_or(HopfError::UnknownGenerator(deg))
    }

    fn gen_x(&self, i: usize) -> Basis {
        let mut b = Basis::ONE;
        b.x[i] = 1;
        b
    }

    fn gen_alpha(&self, i: usize) -> Basis {
        Basis { x: [0; MAX_EVEN], odd: 1 << i }
    }

    fn single(&self, b: Basis) -> Element {
        let mut e = Element::zero();
        e.add_term(self.field, b, 1);
        e
    }

    pub fn one(&self) -> Element {
        self.single(Basis::ONE)
    }

    /// The even generator of the given degree.
    pub fn x(&self, deg: u32) -> Result<Element> {
        Ok(self.single(self.gen_x(self.even_index(deg)?)))
    }

    /// The odd generator of the given degree.
    pub fn alpha(&self, deg: u32) -> Result<Element> {
        Ok(self.single(self.gen_alpha(self.odd_index(deg)?)))
    }

    pub fn add(&self, a: &Element, b: &Element) -> Element {
        let mut out = a.clone();
        out.add_scaled(self.field, b, 1);
        out
    }

    pub fn sub(&self, a: &Element, b: &Element) -> Element {
        let mut out = a.clone();
        out.add_scaled(self.field, b, self.field.neg(1));
        out
    }

    pub fn scale(&self, a: &Element, c: Coeff) -> Element {
        let mut out = Element::zero();
        out.add_scaled(self.field, a, c % self.p());
        out
    }

    /// Product of two basis monomials.
    fn mul_basis(&self, a: &Basis, b: &Basis) -> Element {
        let mut x = [0u8; MAX_EVEN];
        for i in 0..self.even.len() {
            let e = a.x[i] as u32 + b.x[i] as u32;
            if e >= self.even[i].1 {
                return Element::zero();
            }
            x[i] = e as u8;
        }
        let common = a.odd & b.odd;
        if self.p() != 2 {
            if common != 0 {
                return Element::zero();
            }
            let mut inversions = 0u32;
            for i in 0..self.odd.len() {
                if a.odd >> i & 1 == 1 {
                    inversions += (b.odd & ((1u16 << i) - 1)).count_ones();
                }
            }
            let c = if inversions.is_multiple_of(2) { 1 } else { self.field.neg(1) };
            let mut out = Element::zero();
            out.add_term(self.field, Basis { x, odd: a.odd | b.odd }, c);
            return out;
        }
        let mut out = self.single(Basis { x, odd: a.odd ^ b.odd });
        for i in 0..self.odd.len() {
            if common >> i & 1 == 1 {
                out = self.multiply(&out, &self.squares[i]);
                if out.is_zero() {
                    break;
                }
            }
        }
        out
    }

    /// Graded-commutative product, with squares rewritten at `p = 2`.
    pub fn multiply(&self, a: &Element, b: &Element) -> Element {
        let mut out = Element::zero();
        for (ba, &ca) in &a.terms {
            for (bb, &cb) in &b.terms {
                let prod = self.mul_basis(ba, bb);
                out.add_scaled(self.field, &prod, self.field.mul(ca, cb));
            }
        }
        out
    }

    pub fn power(&self, a: &Element, e: u32) -> Element {
        let mut out = self.one();
        for _ in 0..e {
            out = self.multiply(&out, a);
        }
        out
    }

    /// Bockstein, extended as a derivation.
    pub fn bockstein(&self, a: &Element) -> Element {
        let mut out = Element::zero();
        for (b, &c) in &a.terms {
            let xpart = self.single(Basis { x: b.x, odd: 0 });
            let mut passed = 0;
            for i in 0..self.odd.len() {
                if b.odd >> i & 1 == 0 {
                    continue;
                }
                let rest = Basis { x: [0; MAX_EVEN], odd: b.odd & !(1 << i) };
                let term = self.multiply(&self.multiply(&xpart, &self.bockstein[i]), &self.single(rest));
                let sign = if passed % 2 == 0 { c } else { self.field.neg(c) };
                out.add_scaled(self.field, &term, sign);
                passed += 1;
            }
        }
        out
    }

    /// The operation of index `n` on a generator: `Sq^n` at `p = 2`, `P^n`
    /// otherwise.
    fn op_generator(&self, n: u32, b: &Basis) -> Element {
        if n == 0 {
            return self.single(*b);
        }
        let p = self.p();
        if b.odd != 0 {
            let i = b.odd.trailing_zeros() as usize;
            let image = |k: u32| match self.powers.get(&(k, i)) {
                _ if k == 0 => self.single(*b),
                Some(&(j, c)) => self.scale(&self.single(self.gen_alpha(j)), c),
                None => Element::zero(),
            };
            if p != 2 {
                return image(n);
            }
            if n > 2 * self.odd[i] - 1 {
                return Element::zero();
            }
            return if n.is_multiple_of(2) { image(n / 2) } else { self.bockstein(&image(n / 2)) };
        }
        let i = b.x.iter().position(|&e| e > 0).expect("generator");
        let t = self.even[i].0;
        if p != 2 {
            return if n == t {
                self.power(&self.single(*b), p)
            } else {
                self.even_powers.get(&(n, i)).cloned().unwrap_or_default()
            };
        }
        if n % 2 == 1 {
            return Element::zero();
        }
        let (root, rest) = &self.square_roots[i];
        let half = self.op_generator(n / 2, &self.gen_alpha(*root));
        let sq = self.multiply(&half, &half);
        self.sub(&sq, &self.op(n, rest))
    }

    fn op_basis(&self, n: u32, b: &Basis) -> Element {
        if n == 0 {
            return self.single(*b);
        }
        if let Some(v) = self.op_cache.lock().unwrap().get(&(n, *b)) {
            return v.clone();
        }
        let (g, rest) = if let Some(i) = b.x.iter().position(|&e| e > 0) {
            let mut r = *b;
            r.x[i] -= 1;
            (self.gen_x(i), r)
        } else if b.odd != 0 {
            let i = b.odd.trailing_zeros() as usize;
            (self.gen_alpha(i), Basis { x: b.x, odd: b.odd & !(1 << i) })
        } else {
            return Element::zero();
        };
        let mut out = Element::zero();
        for j in 0..=n {
            let left = self.op_generator(j, &g);
            if left.is_zero() {
                continue;
            }
            let right = self.op_basis(n - j, &rest);
            if right.is_zero() {
                continue;
            }
            out.add_scaled(self.field, &self.multiply(&left, &right), 1);
        }
        self.op_cache.lock().unwrap().insert((n, *b), out.clone());
        out
    }

    fn op(&self, n: u32, a: &Element) -> Element {
        let mut out = Element::zero();
        for (b, &c) in &a.terms {
            out.add_scaled(self.field, &self.op_basis(n, b), c);
        }
        out
    }

    /// `P^k`; at `p = 2` this is `Sq^2k`.
    pub fn reduced_power(&self, k: u32, a: &Element) -> Element {
        if self.p() == 2 {
            self.op(2 * k, a)
        } else {
            self.op(k, a)
        }
    }

    /// `Sq^n` at `p = 2`.
    pub fn sq(&self, n: u32, a: &Element) -> Result<Element> {
        if self.p() != 2 {
            return Err(HopfError::NotCharacteristicTwo);
        }
        Ok(self.op(n, a))
    }

    /// Largest operation index that can act nontrivially in degree `deg`.
    fn op_bound(&self, deg: u32) -> u32 {
        if self.p() == 2 {
            deg
        } else {
            deg / 2
        }
    }

    /// Step of the operation index in [`Constraint::Power`] and `reduced_power`.
    fn op_index(&self, k: u32) -> u32 {
        if self.p() == 2 {
            2 * k
        } else {
            k
        }
    }

    // ---- tensors ----

    pub fn tensor(&self, a: &Element, b: &Element) -> Tensor2 {
        let mut out = Tensor2::zero();
        for (&x, &cx) in &a.terms {
            for (&y, &cy) in &b.terms {
                out.add_term(self.field, [x, y], self.field.mul(cx, cy));
            }
        }
        out
    }

    pub fn tensor_add(&self, a: &Tensor2, b: &Tensor2) -> Tensor2 {
        let mut out = a.clone();
        out.add_scaled(self.field, b, 1);
        out
    }

    pub fn tensor_sub<const N: usize>(&self, a: &Tensor<N>, b: &Tensor<N>) -> Tensor<N> {
        let mut out = a.clone();
        out.add_scaled(self.field, b, self.field.neg(1));
        out
    }

    pub fn tensor_scale<const N: usize>(&self, a: &Tensor<N>, c: Coeff) -> Tensor<N> {
        let mut out = Tensor::<N>::zero();
        out.add_scaled(self.field, a, c % self.p());
        out
    }

    /// Product in the tensor power with the Koszul sign.
    pub fn tensor_mul<const N: usize>(&self, a: &Tensor<N>, b: &Tensor<N>) -> Tensor<N> {
        let mut out = Tensor::<N>::zero();
        for (ka, &ca) in &a.terms {
            for (kb, &cb) in &b.terms {
                let mut swaps = 0;
                for i in 0..N {
                    for j in 0..i {
                        if ka[i].is_odd() && kb[j].is_odd() {
                            swaps += 1;
                        }
                    }
                }
                let mut c = self.field.mul(ca, cb);
                if swaps % 2 == 1 {
                    c = self.field.neg(c);
                }
                let mut partial: Vec<([Basis; N], Coeff)> = vec![([Basis::ONE; N], c)];
                for i in 0..N {
                    let prod = self.mul_basis(&ka[i], &kb[i]);
                    let mut next = Vec::new();
                    for (k, c) in &partial {
                        for (&b, &v) in &prod.terms {
                            let mut k2 = *k;
                            k2[i] = b;
                            next.push((k2, self.field.mul(*c, v)));
                        }
                    }
                    partial = next;
                }
                for (k, c) in partial {
                    out.add_term(self.field, k, c);
                }
            }
        }
        out
    }

    /// `(δ⊗1 + 1⊗δ)` with the Koszul sign.
    pub fn tensor_bockstein(&self, t: &Tensor2) -> Tensor2 {
        let mut out = Tensor2::zero();
        for (&[a, b], &c) in &t.terms {
            let da = self.bockstein(&self.single(a));
            out.add_scaled(self.field, &self.tensor(&da, &self.single(b)), c);
            let db = self.bockstein(&self.single(b));
            let sign = if a.is_odd() { self.field.neg(c) } else { c };
            out.add_scaled(self.field, &self.tensor(&self.single(a), &db), sign);
        }
        out
    }

    /// `Σ op_i ⊗ op_j` over `i + j = n`.
    fn tensor_op(&self, n: u32, t: &Tensor2) -> Tensor2 {
        let mut out = Tensor2::zero();
        for (&[a, b], &c) in &t.terms {
            for i in 0..=n {
                let left = self.op_basis(i, &a);
                if left.is_zero() {
                    continue;
                }
                let right = self.op_basis(n - i, &b);
                out.add_scaled(self.field, &self.tensor(&left, &right), c);
            }
        }
        out
    }

    /// `Σ P^i ⊗ P^j` over `i + j = k`; at `p = 2` the full Cartan sum of
    /// `Sq^2k`.
    pub fn tensor_reduced_power(&self, k: u32, t: &Tensor2) -> Tensor2 {
        self.tensor_op(self.op_index(k), t)
    }

    // ---- coproduct ----

    fn primitive(&self, b: Basis) -> Tensor2 {
        let mut t = Tensor2::zero();
        t.add_term(self.field, [b, Basis::ONE], 1);
        t.add_term(self.field, [Basis::ONE, b], 1);
        t
    }

    /// Full coproduct of an element.
    pub fn coproduct(&self, table: &CoproductTable, a: &Element) -> Tensor2 {
        let mut out = Tensor2::zero();
        for (b, &c) in &a.terms {
            out.add_scaled(self.field, &self.coproduct_basis(table, b), c);
        }
        out
    }

    /// Reduced coproduct `μ*(a) - a⊗1 - 1⊗a`.
    pub fn reduced_coproduct(&self, table: &CoproductTable, a: &Element) -> Tensor2 {
        let mut out = self.coproduct(table, a);
        out.add_scaled(self.field, &self.tensor(a, &self.one()), self.field.neg(1));
        out.add_scaled(self.field, &self.tensor(&self.one(), a), self.field.neg(1));
        out
    }

    fn coproduct_basis(&self, table: &CoproductTable, b: &Basis) -> Tensor2 {
        if let Some(v) = table.cache.lock().unwrap().get(b) {
            return v.clone();
        }
        let mut out = Tensor2::zero();
        out.add_term(self.field, [Basis::ONE; 2], 1);
        for i in 0..self.even.len() {
            if b.x[i] == 0 {
                continue;
            }
            let g = &table.even[&(2 * self.even[i].0)];
            for _ in 0..b.x[i] {
                out = self.tensor_mul(&out, g);
            }
        }
        for i in 0..self.odd.len() {
            if b.odd >> i & 1 == 1 {
                let deg = 2 * self.odd[i] - 1;
                let g = self.tensor_add(&self.primitive(self.gen_alpha(i)), &table.odd[&deg]);
                out = self.tensor_mul(&out, &g);
            }
        }
        table.cache.lock().unwrap().insert(*b, out.clone());
        out
    }

    /// Applies the coproduct to the first or last factor.
    fn coproduct_on(&self, table: &CoproductTable, t: &Tensor2, left: bool) -> Tensor3 {
        let mut out = Tensor3::zero();
        for (&[a, b], &c) in &t.terms {
            let inner = self.coproduct_basis(table, if left { &a } else { &b });
            for (&[u, v], &d) in &inner.terms {
                let key = if left { [u, v, b] } else { [a, u, v] };
                out.add_term(self.field, key, self.field.mul(c, d));
            }
        }
        out
    }

    /// Reduced coproducts of all odd generators and full coproducts of the
    /// even generators.
    pub fn derive_coproducts(&self) -> Result<CoproductTable> {
        let mut odd: BTreeMap<u32, Tensor2> = BTreeMap::new();
        let mut source = BTreeMap::new();
        let mut conflicts = Vec::new();
        let mut missing = Vec::new();
        for i in 0..self.odd.len() {
            let deg = 2 * self.odd[i] - 1;
            let routes = self.routes_into(i);
            let mut chosen = self.listed.get(&i).map(|t| (t.clone(), CoproductSource::Listed));
            for &(from, k, b) in &routes {
                let from_deg = 2 * self.odd[from] - 1;
                let Some(phi) = odd.get(&from_deg) else { continue };
                let value = self.tensor_scale(&self.tensor_reduced_power(k, phi), self.field.inv(b));
                match &chosen {
                    None => chosen = Some((value, CoproductSource::Power { from: from_deg, k })),
                    Some((v, _)) if *v != value => conflicts.push((deg, from_deg, k)),
                    _ => {}
                }
            }
            match chosen {
                Some((v, s)) => {
                    odd.insert(deg, v);
                    source.insert(deg, s);
                }
                None => missing.push(deg),
            }
        }
        if !missing.is_empty() {
            return Err(HopfError::UnreachableGenerator(missing));
        }
        let mut table = CoproductTable {
            odd,
            source,
            even: BTreeMap::new(),
            conflicts,
            cache: Default::default(),
        };
        for i in 0..self.even.len() {
            let t = self.even[i].0;
            let value = self.even_coproduct(&table, i, t)?;
            table.even.insert(2 * t, value);
            table.cache.lock().unwrap().clear();
        }
        Ok(table)
    }

    /// `x_2t` from `δα_2t-1 = c x_2t + rest`, using lower even generators.
    fn even_coproduct(&self, table: &CoproductTable, i: usize, t: u32) -> Result<Tensor2> {
        let j = self.odd_index(2 * t - 1)?;
        let xb = self.gen_x(i);
        let mut rest = self.bockstein[j].clone();
        let c = rest.terms.remove(&xb).ok_or_else(|| {
            HopfError::Mismatch(format!("δα{} does not involve x{}", 2 * t - 1, 2 * t))
        })?;
        let mu_alpha =
            self.tensor_add(&self.primitive(self.gen_alpha(j)), &table.odd[&(2 * t - 1)]);
        let mut value = self.tensor_bockstein(&mu_alpha);
        value.add_scaled(self.field, &self.coproduct(table, &rest), self.field.neg(1));
        Ok(self.tensor_scale(&value, self.field.inv(c)))
    }

    /// `(from, k, b)` with `P^k α_from = b α_i`.
    fn routes_into(&self, i: usize) -> Vec<(usize, u32, Coeff)> {
        self.powers
            .iter()
            .filter(|(_, &(j, _))| j == i)
            .map(|(&(k, from), &(_, b))| (from, k, b))
            .collect()
    }

    /// Odd degrees whose derived coproduct depends on the given one.
    fn dependents(&self, table: &CoproductTable, deg: u32) -> BTreeSet<u32> {
        let mut out = BTreeSet::from([deg]);
        for (&d, src) in &table.source {
            if let CoproductSource::Power { from, .. } = src {
                if out.contains(from) {
                    out.insert(d);
                }
            }
        }
        out
    }

    /// Bockstein compatibility plus every `P^k α = b α_t` whose target has a
    /// coproduct obtainable without `α`.
    pub fn default_constraints(&self, table: &CoproductTable, deg: u32) -> Result<Vec<Constraint>> {
        let i = self.odd_index(deg)?;
        let tainted = self.dependents(table, deg);
        let mut out = vec![Constraint::Bockstein];
        for (&(k, from), &(j, b)) in &self.powers {
            if from != i {
                continue;
            }
            let target_deg = 2 * self.odd[j] - 1;
            let alternative = if !tainted.contains(&target_deg) {
                Some(table.odd[&target_deg].clone())
            } else {
                self.routes_into(j).into_iter().find_map(|(f, k2, b2)| {
                    let fd = 2 * self.odd[f] - 1;
                    (!tainted.contains(&fd)).then(|| {
                        self.tensor_scale(
                            &self.tensor_reduced_power(k2, &table.odd[&fd]),
                            self.field.inv(b2),
                        )
                    })
                })
            };
            if let Some(target) = alternative {
                out.push(Constraint::Power { k, target: self.tensor_scale(&target, b) });
            }
        }
        Ok(out)
    }

    /// Ansatz terms `g ⊗ α_j` of the given total odd degree, with `g` a
    /// nonconstant even monomial, in ascending order.
    fn ansatz(&self, deg: u32) -> Vec<(Basis, u32)> {
        let mut out = Vec::new();
        for b in self.basis() {
            if b.odd != 0 || b == Basis::ONE {
                continue;
            }
            let d = self.degree(&b);
            for (j, &s) in self.odd.iter().enumerate() {
                if d + 2 * s - 1 == deg {
                    out.push((b, j as u32));
                }
            }
        }
        out
    }

    /// Solves for `φ(α)` from the given constraints; lower-degree data comes
    /// from `table`.
    pub fn solve_coproduct(
        &self,
        table: &CoproductTable,
        deg: u32,
        constraints: &[Constraint],
    ) -> Result<Solution> {
        let i = self.odd_index(deg)?;
        let ansatz = self.ansatz(deg);
        let terms: Vec<Tensor2> = ansatz
            .iter()
            .map(|&(g, j)| {
                let mut t = Tensor2::zero();
                t.add_term(self.field, [g, self.gen_alpha(j as usize)], 1);
                t
            })
            .collect();
        let mut columns: Vec<Tensor2> = vec![Tensor2::zero(); terms.len()];
        let mut rhs = Tensor2::zero();
        let mut offset = 0u32;
        let tag = |t: &Tensor2, off: u32| -> Tensor2 {
            let mut out = Tensor2::zero();
            for (&[a, b], &c) in &t.terms {
                let mut a2 = a;
                a2.odd |= (off as u16) << 12;
                out.terms.insert([a2, b], c);
            }
            out
        };
        for con in constraints {
            let (apply, target): (Box<dyn Fn(&Tensor2) -> Tensor2>, Tensor2) = match con {
                Constraint::Bockstein => {
                    let delta = &self.bockstein[i];
                    (Box::new(|t| self.tensor_bockstein(t)), self.reduced_coproduct(table, delta))
                }
                Constraint::Power { k, target } => {
                    let k = *k;
                    (Box::new(move |t| self.tensor_reduced_power(k, t)), target.clone())
                }
            };
            for (col, t) in columns.iter_mut().zip(&terms) {
                col.add_scaled(self.field, &tag(&apply(t), offset), 1);
            }
            rhs.add_scaled(self.field, &tag(&target, offset), 1);
            offset += 1;
        }
        let coefficients = self.solve_linear(&columns, &rhs, deg)?;
        let mut value = Tensor2::zero();
        for (t, &c) in terms.iter().zip(&coefficients) {
            value.add_scaled(self.field, t, c);
        }
        Ok(Solution { ansatz, coefficients, value })
    }

    fn solve_linear(&self, columns: &[Tensor2], rhs: &Tensor2, deg: u32) -> Result<Vec<Coeff>> {
        let f = self.field;
        let mut keys: BTreeSet<[Basis; 2]> = rhs.terms.keys().copied().collect();
        for c in columns {
            keys.extend(c.terms.keys().copied());
        }
        let n = columns.len();
        let mut rows: Vec<Vec<Coeff>> = keys
            .iter()
            .map(|k| {
                let mut row: Vec<Coeff> = columns.iter().map(|c| *c.terms.get(k).unwrap_or(&0)).collect();
                row.push(*rhs.terms.get(k).unwrap_or(&0));
                row
            })
            .collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..n {
            let Some(pr) = (r..rows.len()).find(|&i| rows[i][col] != 0) else { continue };
            rows.swap(r, pr);
            let inv = f.inv(rows[r][col]);
            for v in rows[r].iter_mut() {
                *v = f.mul(*v, inv);
            }
            for i in 0..rows.len() {
                if i != r && rows[i][col] != 0 {
                    let m = rows[i][col];
                    for c2 in 0..=n {
                        let sub = f.mul(m, rows[r][c2]);
                        rows[i][c2] = f.sub(rows[i][c2], sub);
                    }
                }
            }
            pivots.push(col);
            r += 1;
        }
        if rows[r..].iter().any(|row| row[n] != 0) {
            return Err(HopfError::Inconsistent(deg));
        }
        if pivots.len() < n {
            return Err(HopfError::Underdetermined { degree: deg, dim: n - pivots.len() });
        }
        Ok((0..n).map(|i| rows[i][n]).collect())
    }

    // ---- transcribed auxiliary data ----

    /// The ζ-generators, keyed by degree; `ζ = α` unless listed.
    pub fn zeta_basis(&self) -> Result<BTreeMap<u32, Element>> {
        let mut out = BTreeMap::new();
        for (i, &s) in self.odd.iter().enumerate() {
            out.insert(2 * s - 1, self.single(self.gen_alpha(i)));
        }
        for (deg, text) in scoped(ZETA, self.group(), self.p()) {
            out.insert(deg, self.parse(text)?);
        }
        Ok(out)
    }

    /// The stored Bockstein of the odd generator of degree `deg`.
    pub fn bockstein_entry(&self, deg: u32) -> Result<&Element> {
        Ok(&self.bockstein[self.odd_index(deg)?])
    }

    /// The stored square of the odd generator of degree `deg` (`p = 2`).
    pub fn square_entry(&self, deg: u32) -> Result<&Element> {
        if self.p() != 2 {
            return Err(HopfError::NotCharacteristicTwo);
        }
        Ok(&self.squares[self.odd_index(deg)?])
    }

    /// Printed reduced coproducts, keyed by degree.
    pub fn listed_coproducts(&self) -> BTreeMap<u32, Tensor2> {
        self.listed.iter().map(|(&i, t)| (2 * self.odd[i] - 1, t.clone())).collect()
    }

    /// Nonzero reduced powers on odd generators as `(k, from, to, b)` degrees.
    pub fn power_entries(&self) -> Vec<(u32, u32, u32, Coeff)> {
        self.powers
            .iter()
            .map(|(&(k, i), &(j, b))| (k, 2 * self.odd[i] - 1, 2 * self.odd[j] - 1, b))
            .collect()
    }


    /// Free coefficients of `P^k x_2t` at odd `p`: `(k, i, monomial)` for
    /// every even monomial of the right degree with `0 < k < t`.
    pub fn even_power_unknowns(&self) -> Vec<(u32, usize, Basis)> {
        let mut out = Vec::new();
        if self.p() == 2 {
            return out;
        }
        let monomials: Vec<Basis> = self.basis().into_iter().filter(|b| b.odd == 0).collect();
        for (i, &(t, _)) in self.even.iter().enumerate() {
            for k in 1..t {
                let deg = 2 * t + 2 * k * (self.p() - 1);
                for b in &monomials {
                    if self.degree(b) == deg {
                        out.push((k, i, *b));
                    }
                }
            }
        }
        out
    }

    /// Replaces the action of reduced powers on even generators.
    pub fn set_even_powers(&mut self, values: BTreeMap<(u32, usize), Element>) {
        self.even_powers = values;
        self.op_cache.lock().unwrap().clear();
    }

    /// `P^k x_2t` entries with `0 < k < t` as `(k, degree of x, value)`.
    pub fn even_power_entries(&self) -> Vec<(u32, u32, Element)> {
        self.even_powers
            .iter()
            .map(|(&(k, i), v)| (k, 2 * self.even[i].0, v.clone()))
            .collect()
    }

    /// Adem relations `P^a P^b` with `a < pb`, checked on even monomials.
    pub fn adem_failures_on_even(&self) -> Vec<String> {
        let p = self.p();
        if p == 2 {
            return Vec::new();
        }
        let f = self.field;
        let top = self.profile.dim;
        let mut out = Vec::new();
        for b in self.basis().into_iter().filter(|b| b.odd == 0) {
            let e = self.single(b);
            let deg = self.degree(&b);
            let q = 2 * (p - 1);
            for bb in 1..=deg / 2 {
                for a in 1..p * bb {
                    if deg + q * (a + bb) > top {
                        break;
                    }
                    let lhs = self.op(a, &self.op(bb, &e));
                    let mut rhs = Element::zero();
                    for j in 0..=a / p {
                        let c = binomial_mod((p - 1) * (bb - j) - 1, a - p * j, p);
                        let c = if (a + j) % 2 == 1 { f.neg(c) } else { c };
                        if c != 0 {
                            rhs.add_scaled(f, &self.op(a + bb - j, &self.op(j, &e)), c);
                        }
                    }
                    if lhs != rhs {
                        out.push(format!("P^{a}P^{bb} {}", self.render(&e)));
                    }
                }
            }
        }
        out
    }

    // ---- checks ----

    fn operation_failures(&self, table: &CoproductTable) -> Vec<String> {
        let mut fails = Vec::new();
        for (name, g) in &self.generators() {
            let deg = self.degree(g.terms.keys().next().unwrap());
            for n in 1..=self.op_bound(deg) {
                let lhs = self.coproduct(table, &self.op(n, g));
                let rhs = self.tensor_op(n, &self.coproduct(table, g));
                if lhs != rhs {
                    let op = if self.p() == 2 { "Sq" } else { "P" };
                    fails.push(format!("{op}^{n} {name}"));
                }
            }
        }
        fails
    }

    /// Fixes `P^k x_2t` for `0 < k < t` at odd `p` as the unique assignment
    /// satisfying the Adem relations on the even subalgebra, with coproduct
    /// routes that agree and a coproduct commuting with every `P^k`.
    fn derive_even_action(&mut self) -> Result<()> {
        let unknowns = self.even_power_unknowns();
        let p = self.p();
        let mut found = Vec::new();
        let total = (p as u64).pow(unknowns.len() as u32);
        for code in 0..total {
            let mut values: BTreeMap<(u32, usize), Element> = BTreeMap::new();
            let mut c = code;
            for &(k, i, b) in &unknowns {
                let v = (c % p as u64) as Coeff;
                c /= p as u64;
                if v != 0 {
                    values.entry((k, i)).or_default().add_term(self.field, b, v);
                }
            }
            self.set_even_powers(values.clone());
            if !self.adem_failures_on_even().is_empty() {
                continue;
            }
            let Ok(table) = self.derive_coproducts() else { continue };
            if table.conflicts.is_empty() && self.operation_failures(&table).is_empty() {
                found.push(values);
            }
        }
        if found.len() != 1 {
            return Err(HopfError::EvenAction { consistent: found.len() });
        }
        self.set_even_powers(found.pop().unwrap());
        Ok(())
    }


    /// Runs every structural check on the model.
    pub fn check_suite(&self) -> Result<Vec<CheckItem>> {
        let mut items = Vec::new();
        let mut push = |name: &str, failures: Vec<String>| {
            let pass = failures.is_empty();
            let detail = if pass { String::new() } else { failures.join("; ") };
            items.push(CheckItem { name: name.to_string(), pass, detail });
        };
        let basis = self.basis();
        let gens = self.generators();

        let fails: Vec<String> = basis
            .iter()
            .filter(|b| !self.bockstein(&self.bockstein(&self.single(**b))).is_zero())
            .map(|b| self.render(&self.single(*b)))
            .collect();
        push("bockstein squares to zero", fails);

        let census = self.graded_dimension();
        let series = self.poincare_series();
        let mut fails = Vec::new();
        if census != series {
            fails.push("census differs from product formula".into());
        }
        if census.iter().sum::<u64>() as usize != self.dim() {
            fails.push("total dimension".into());
        }
        push("graded dimension", fails);

        let table = match self.derive_coproducts() {
            Ok(t) => t,
            Err(e) => {
                push("coproduct derivation", vec![e.to_string()]);
                return Ok(items);
            }
        };
        let fails: Vec<String> = table
            .conflicts
            .iter()
            .map(|(d, f, k)| format!("α{d} via P^{k} α{f}"))
            .collect();
        push("coproduct routes agree", fails);

        let fails: Vec<String> = self
            .listed_coproducts()
            .into_iter()
            .filter(|(d, t)| table.odd[d] != *t)
            .map(|(d, _)| format!("α{d}"))
            .collect();
        push("printed coproducts reproduced", fails);

        let mut fails = Vec::new();
        for (name, g) in &gens {
            let mu = self.coproduct(&table, g);
            let left = self.coproduct_on(&table, &mu, true);
            let right = self.coproduct_on(&table, &mu, false);
            if left != right {
                fails.push(name.clone());
            }
        }
        push("coassociativity", fails);

        let mut fails = Vec::new();
        for (name, g) in &gens {
            let lhs = self.coproduct(&table, &self.bockstein(g));
            let rhs = self.tensor_bockstein(&self.coproduct(&table, g));
            if lhs != rhs {
                fails.push(name.clone());
            }
        }
        push("coproduct commutes with bockstein", fails);

        let fails = self.operation_failures(&table);
        push("coproduct commutes with operations", fails);

        let mut fails = Vec::new();
        if self.p() == 2 {
            for b in &basis {
                let e = self.single(*b);
                let sq1 = self.op(1, &e);
                let lhs = self.op(2, &self.op(2, &e));
                let rhs = self.op(3, &sq1);
                if lhs != rhs || self.op(1, &self.op(2, &e)) != self.op(3, &e) {
                    fails.push(self.render(&e));
                }
            }
        } else {
            let two = self.field.reduce(2);
            for b in &basis {
                let e = self.single(*b);
                let lhs = self.op(1, &self.op(1, &e));
                let rhs = self.scale(&self.op(2, &e), two);
                if lhs != rhs {
                    fails.push(self.render(&e));
                }
            }
        }
        push("adem relation", fails);
        if self.p() != 2 {
            push("adem relations on even generators", self.adem_failures_on_even());
        }

        let zeta = self.zeta_basis()?;
        let mut fails = Vec::new();
        for (&deg, z) in &zeta {
            let s = deg.div_ceil(2);
            let expected = match self.even_index(2 * s) {
                Ok(_) => self.scale(&self.x(2 * s)?, self.field.neg(1)),
                Err(_) => Element::zero(),
            };
            if self.bockstein(z) != expected {
                fails.push(format!("ζ{deg}"));
            }
        }
        push("zeta bockstein", fails);

        if self.p() == 2 {
            let mut fails = Vec::new();
            for (i, &s) in self.odd.iter().enumerate() {
                let a = self.single(self.gen_alpha(i));
                let derived = self.bockstein(&self.reduced_power(s - 1, &a));
                if derived != self.squares[i] {
                    fails.push(format!("α{}", 2 * s - 1));
                }
                if self.multiply(&a, &a) != self.squares[i] {
                    fails.push(format!("α{} product", 2 * s - 1));
                }
            }
            push("squares from bockstein of top power", fails);

            let mut fails = Vec::new();
            for &(scope, deg, text) in ZETA_SQUARES {
                if scope.contains(&self.group()) {
                    let z = &zeta[&deg];
                    if self.multiply(z, z) != self.parse(text)? {
                        fails.push(format!("ζ{deg}"));
                    }
                }
            }
            push("zeta squares", fails);

            let mut fails = Vec::new();
            for &(scope, deg, text) in SQ1_AS_SQUARES {
                if scope.contains(&self.group()) && self.bockstein(&self.alpha(deg)?) != self.parse(text)? {
                    fails.push(format!("Sq1 α{deg}"));
                }
            }
            push("sq1 through squares", fails);

            let mut fails = Vec::new();
            for i in 0..self.odd.len() {
                let a = self.single(self.gen_alpha(i));
                let mu = self.coproduct(&table, &a);
                if self.tensor_mul(&mu, &mu) != self.coproduct(&table, &self.squares[i]) {
                    fails.push(format!("α{}", 2 * self.odd[i] - 1));
                }
            }
            push("coproduct respects squares", fails);
        }
        Ok(items)
    }

    /// All generators with their names, even first.
    pub fn generators(&self) -> Vec<(String, Element)> {
        let mut out = Vec::new();
        for (i, &(t, _)) in self.even.iter().enumerate() {
            out.push((format!("x{}", 2 * t), self.single(self.gen_x(i))));
        }
        for (i, &s) in self.odd.iter().enumerate() {
            out.push((format!("a{}", 2 * s - 1), self.single(self.gen_alpha(i))));
        }
        out
    }

    // ---- text form ----

    /// Parses sums of products such as `2*x6^2*a3*a5 - x12`. Odd factors are
    /// multiplied in the order written.
    pub fn parse(&self, text: &str) -> Result<Element> {
        let err = |msg: &str| HopfError::Parse { text: text.to_string(), msg: msg.to_string() };
        let mut out = Element::zero();
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact == "0" {
            return Ok(out);
        }
        for (sign, term) in split_terms(&compact).map_err(|m| err(&m))? {
            let mut acc = self.one();
            let mut coeff: i64 = sign;
            for factor in term.split('*') {
                if factor.is_empty() {
                    return Err(err("empty factor"));
                }
                if let Ok(n) = factor.parse::<i64>() {
                    coeff *= n;
                    continue;
                }
                let (base, exp) = match factor.split_once('^') {
                    Some((b, e)) => (b, e.parse::<u32>().map_err(|_| err("bad exponent"))?),
                    None => (factor, 1),
                };
                let deg: u32 = base.get(1..).and_then(|d| d.parse().ok()).ok_or_else(|| err("bad generator"))?;
                let g = match base.as_bytes()[0] {
                    b'x' => self.x(deg)?,
                    b'a' => self.alpha(deg)?,
                    _ => return Err(err("generators are x<deg> or a<deg>")),
                };
                acc = self.multiply(&acc, &self.power(&g, exp));
            }
            out.add_scaled(self.field, &acc, self.field.reduce(coeff));
        }
        Ok(out)
    }

    /// Parses tensors written `left|right`, e.g. `x10|a5 + 2*x6|a9`.
    pub fn parse_tensor(&self, text: &str) -> Result<Tensor2> {
        let err = |msg: &str| HopfError::Parse { text: text.to_string(), msg: msg.to_string() };
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut out = Tensor2::zero();
        if compact == "0" {
            return Ok(out);
        }
        for (sign, term) in split_terms(&compact).map_err(|m| err(&m))? {
            let (l, r) = term.split_once('|').ok_or_else(|| err("missing `|`"))?;
            let left = self.parse(l)?;
            let right = self.parse(r)?;
            let c = if sign < 0 { self.field.neg(1) } else { 1 };
            out.add_scaled(self.field, &self.tensor(&left, &right), c);
        }
        Ok(out)
    }

    fn render_basis(&self, b: &Basis) -> String {
        let mut parts = Vec::new();
        for (i, &(t, _)) in self.even.iter().enumerate() {
            match b.x[i] {
                0 => {}
                1 => parts.push(format!("x{}", 2 * t)),
                e => parts.push(format!("x{}^{e}", 2 * t)),
            }
        }
        for (i, &s) in self.odd.iter().enumerate() {
            if b.odd >> i & 1 == 1 {
                parts.push(format!("a{}", 2 * s - 1));
            }
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    fn render_terms<'a>(&self, terms: impl Iterator<Item = (String, Coeff)>) -> String {
        let mut out = String::new();
        for (body, c) in terms {
            let v = self.field.signed(c);
            let (neg, mag) = (v < 0, v.unsigned_abs());
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if mag != 1 {
                out.push_str(&format!("{mag}*"));
            }
            out.push_str(&body);
        }
        if out.is_empty() {
            "0".into()
        } else {
            out
        }
    }

    /// Text form in ascending basis order.
    pub fn render(&self, a: &Element) -> String {
        self.render_terms(a.terms.iter().map(|(b, &c)| (self.render_basis(b), c)))
    }

    /// Text form of a tensor, factors separated by `|`.
    pub fn render_tensor(&self, t: &Tensor2) -> String {
        self.render_terms(
            t.terms
                .iter()
                .map(|([a, b], &c)| (format!("{}|{}", self.render_basis(a), self.render_basis(b)), c)),
        )
    }
}

impl fmt::Debug for HopfModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HopfModel({}, {})", self.group(), self.p())
    }
}

/// `C(n, k) mod p` by Lucas' theorem.
fn binomial_mod(mut n: u32, mut k: u32, p: u32) -> Coeff {
    let mut acc: u64 = 1;
    while k > 0 {
        let (nd, kd) = (n % p, k % p);
        if kd > nd {
            return 0;
        }
        let mut c: u64 = 1;
        for i in 0..kd {
            c = c * (nd - i) as u64 / (i + 1) as u64;
        }
        acc = acc * c % p as u64;
        n /= p;
        k /= p;
    }
    acc as Coeff
}

/// Splits `a+b-c` into signed terms, ignoring signs inside no brackets.
fn split_terms(s: &str) -> std::result::Result<Vec<(i64, &str)>, String> {
    let mut out = Vec::new();
    let mut sign = 1;
    let mut start = 0;
    let bytes = s.as_bytes();
    let mut i = 0;
    if bytes.first() == Some(&b'-') {
        sign = -1;
        start = 1;
        i = 1;
    } else if bytes.first() == Some(&b'+') {
        start = 1;
        i = 1;
    }
    while i <= bytes.len() {
        if i == bytes.len() || bytes[i] == b'+' || bytes[i] == b'-' {
            let term = &s[start..i];
            if term.is_empty() {
                return Err("empty term".into());
            }
            out.push((sign, term));
            if i < bytes.len() {
                sign = if bytes[i] == b'-' { -1 } else { 1 };
            }
            start = i + 1;
        }
        i += 1;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bst::{full_table, Strategy};

    fn model(g: Group, p: u32) -> HopfModel {
        let table = full_table(g, p, Strategy::Method2).unwrap();
        build_model(g, p, &table).unwrap()
    }

    #[test]
    fn dimensions() {
        assert_eq!(model(Group::E8, 5).dim(), 1280);
        assert_eq!(model(Group::E8, 2).dim(), (1 << 8) * 8 * 4 * 2 * 2);
        assert_eq!(model(Group::G2, 2).dim(), 8);
    }

    #[test]
    fn products_and_signs() {
        let m = model(Group::E8, 2);
        let a15 = m.alpha(15).unwrap();
        assert_eq!(m.render(&m.multiply(&a15, &a15)), m.render(&m.parse("x30+x6^2*x18").unwrap()));
        let m = model(Group::F4, 3);
        let (a3, a7) = (m.alpha(3).unwrap(), m.alpha(7).unwrap());
        assert!(m.multiply(&a7, &a7).is_zero());
        let ab = m.multiply(&a3, &a7);
        let ba = m.multiply(&a7, &a3);
        assert_eq!(m.add(&ab, &ba), Element::zero());
    }

    #[test]
    fn bockstein_values() {
        let m = model(Group::E8, 3);
        let d = m.bockstein(&m.alpha(35).unwrap());
        assert_eq!(d, m.parse("x8^2*x20").unwrap());
        assert!(m.bockstein(&m.one()).is_zero());
    }

    #[test]
    fn parse_round_trip() {
        let m = model(Group::E8, 5);
        let e = m.parse("3*x12^2*a3*a11 - a47").unwrap();
        assert_eq!(m.parse(&m.render(&e)).unwrap(), e);
        let t = m.parse_tensor("3*x12|a27+3*x12^2|a15+2*x12^3|a3").unwrap();
        assert_eq!(m.parse_tensor(&m.render_tensor(&t)).unwrap(), t);
    }

    #[test]
    fn g2_suite() {
        let m = model(Group::G2, 2);
        for item in m.check_suite().unwrap() {
            assert!(item.pass, "{}: {}", item.name, item.detail);
        }
    }
}
