//! Symmetric functions over F_p: elementary and Schur bases, Kostka numbers,
//! and generated Wu formulas for reduced powers of Chern classes.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::ffpoly::{chern_ring, Coeff, Monomial, PolyError, Polynomial, PrimeField, RingContext};
use crate::steenrod::weight_one_power;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymError {
    #[error("index {k} out of range 0..={n}")]
    OutOfRange { k: u32, n: u32 },
    #[error("polynomial is not symmetric")]
    NotSymmetric,
    #[error("partitions of different sizes: {0} and {1}")]
    SizeMismatch(u32, u32),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// A weakly decreasing list of positive parts.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    pub fn new(mut parts: Vec<u32>) -> Self {
        parts.retain(|&x| x > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    /// Builds a partition from `(part, multiplicity)` pairs.
    pub fn from_multiplicities(spec: &[(u32, u32)]) -> Self {
        let mut parts = Vec::new();
        for &(part, mult) in spec {
            parts.extend(std::iter::repeat_n(part, mult as usize));
        }
        Partition::new(parts)
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn size(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn conjugate(&self) -> Partition {
        let first = self.parts.first().copied().unwrap_or(0);
        let parts = (1..=first).map(|j| self.parts.iter().filter(|&&x| x >= j).count() as u32).collect();
        Partition { parts }
    }

    /// Dominance order: `self ⊵ other`.
    pub fn dominates(&self, other: &Partition) -> bool {
        let (mut a, mut b) = (0u32, 0u32);
        for i in 0..self.len().max(other.len()) {
            a += self.parts.get(i).copied().unwrap_or(0);
            b += other.parts.get(i).copied().unwrap_or(0);
            if a < b {
                return false;
            }
        }
        true
    }

    /// All partitions of `n`, in decreasing lexicographic order.
    pub fn all(n: u32) -> Vec<Partition> {
        fn rec(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if rest == 0 {
                out.push(Partition { parts: cur.clone() });
                return;
            }
            for first in (1..=rest.min(max)).rev() {
                cur.push(first);
                rec(rest - first, first, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, n, &mut Vec::new(), &mut out);
        out
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut groups: Vec<(u32, u32)> = Vec::new();
        for &x in self.parts.iter().rev() {
            match groups.last_mut() {
                Some((v, m)) if *v == x => *m += 1,
                _ => groups.push((x, 1)),
            }
        }
        let body: Vec<String> = groups
            .iter()
            .map(|&(v, m)| if m == 1 { v.to_string() } else { format!("{v}^{m}") })
            .collect();
        write!(f, "({})", body.join(","))
    }
}

/// `n` degree-one variables `t1..tn` and the Chern ring `c1..cn`.
pub struct SymContext {
    n: u32,
    t_ring: Arc<RingContext>,
    c_ring: Arc<RingContext>,
}

impl SymContext {
    pub fn new(p: u32, n: u32) -> Result<Self, SymError> {
        let field = PrimeField::new(p)?;
        let t_ring = RingContext::new(field, (1..=n).map(|i| (format!("t{i}"), 1)).collect())?;
        let c_ring = chern_ring(p, 1, n)?;
        Ok(SymContext { n, t_ring, c_ring })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn p(&self) -> u32 {
        self.t_ring.p()
    }

    pub fn t_ring(&self) -> &Arc<RingContext> {
        &self.t_ring
    }

    pub fn c_ring(&self) -> &Arc<RingContext> {
        &self.c_ring
    }

    /// `c_k` in the Chern ring, with `c_0 = 1` and zero outside `0..=n`.
    pub fn c(&self, k: i64) -> Polynomial {
        if k == 0 {
            Polynomial::one(&self.c_ring)
        } else if k < 0 || k > self.n as i64 {
            Polynomial::zero(&self.c_ring)
        } else {
            Polynomial::var(&self.c_ring, (k - 1) as usize)
        }
    }
}

/// The `k`-th elementary symmetric polynomial in `t1..tn`.
pub fn elementary(k: u32, ctx: &SymContext) -> Result<Polynomial, SymError> {
    if k > ctx.n {
        return Err(SymError::OutOfRange { k, n: ctx.n });
    }
    let n = ctx.n as usize;
    let mut terms = Vec::new();
    let mut subset: Vec<usize> = (0..k as usize).collect();
    loop {
        let mut m = Monomial::one();
        for &i in &subset {
            m.set_exp(i, 1);
        }
        terms.push((m, 1));
        // next k-subset in lexicographic order
        let mut i = k as usize;
        loop {
            if i == 0 {
                return Ok(Polynomial::from_terms(&ctx.t_ring, terms));
            }
            i -= 1;
            if subset[i] < n - (k as usize - i) {
                subset[i] += 1;
                for j in i + 1..k as usize {
                    subset[j] = subset[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// A symmetric polynomial in the monomial basis: partition -> coefficient.
type MBasis = BTreeMap<Vec<u32>, Coeff>;

fn factorial(n: u32) -> u128 {
    (1..=n as u128).product()
}

fn orbit_size(exps: &[u16]) -> u128 {
    let mut counts: HashMap<u16, u32> = HashMap::new();
    for &e in exps {
        *counts.entry(e).or_default() += 1;
    }
    counts.values().fold(factorial(exps.len() as u32), |acc, &m| acc / factorial(m))
}

fn to_mbasis(f: &Polynomial, n: usize) -> Result<MBasis, SymError> {
    let mut groups: BTreeMap<Vec<u32>, (Coeff, u128)> = BTreeMap::new();
    for (m, c) in f.terms() {
        let mut lam: Vec<u32> = m.exponents(n).iter().map(|&e| e as u32).collect();
        lam.sort_unstable_by(|a, b| b.cmp(a));
        lam.retain(|&x| x > 0);
        let entry = groups.entry(lam).or_insert((*c, 0));
        if entry.0 != *c {
            return Err(SymError::NotSymmetric);
        }
        entry.1 += 1;
    }
    let mut out = MBasis::new();
    for (lam, (c, count)) in groups {
        let mut exps: Vec<u16> = lam.iter().map(|&x| x as u16).collect();
        exps.resize(n, 0);
        if orbit_size(&exps) != count {
            return Err(SymError::NotSymmetric);
        }
        out.insert(lam, c);
    }
    Ok(out)
}

/// Multiplicity groups of a vector padded with zeros to length `n`.
fn groups(lam: &[u32], n: usize) -> Vec<(u32, usize)> {
    let mut out: Vec<(u32, usize)> = Vec::new();
    let zeros = n - lam.len();
    for &x in lam {
        match out.last_mut() {
            Some((v, m)) if *v == x => *m += 1,
            _ => out.push((x, 1)),
        }
    }
    if zeros > 0 {
        out.push((0, zeros));
    }
    out
}

/// Distributes `j` unit increments (or decrements) over multiplicity groups.
fn distributions(sizes: &[usize], j: usize) -> Vec<Vec<usize>> {
    fn rec(sizes: &[usize], j: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if sizes.is_empty() {
            if j == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let rest: usize = sizes[1..].iter().sum();
        for a in j.saturating_sub(rest)..=sizes[0].min(j) {
            cur.push(a);
            rec(&sizes[1..], j - a, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(sizes, j, &mut Vec::new(), &mut out);
    out
}

fn sorted_desc(mut v: Vec<u32>) -> Vec<u32> {
    v.sort_unstable_by(|a, b| b.cmp(a));
    v
}

/// Coefficient of `m_nu` in `m_lam * e_j` with `n` variables.
fn strip_count(lam: &[u32], nu: &[u32], j: usize, n: usize) -> u64 {
    let target = sorted_desc(lam.to_vec());
    let g = groups(nu, n);
    let sizes: Vec<usize> = g.iter().map(|x| x.1).collect();
    let mut total = 0u64;
    for d in distributions(&sizes, j) {
        let mut rest = Vec::with_capacity(n);
        let mut ok = true;
        let mut ways = 1u64;
        for ((v, size), &take) in g.iter().zip(&d) {
            if take > 0 && *v == 0 {
                ok = false;
                break;
            }
            ways *= binomial(*size as u64, take as u64);
            rest.extend(std::iter::repeat_n(v.saturating_sub(1), take));
            rest.extend(std::iter::repeat_n(*v, size - take));
        }
        if !ok {
            continue;
        }
        let mut rest = sorted_desc(rest);
        rest.retain(|&x| x > 0);
        if rest == target {
            total += ways;
        }
    }
    total
}

fn mul_by_elementary(f: &MBasis, j: u32, n: usize, field: PrimeField) -> MBasis {
    let mut out = MBasis::new();
    if j as usize > n {
        return out;
    }
    for (lam, &c) in f {
        if lam.len() > n {
            continue;
        }
        let g = groups(lam, n);
        let sizes: Vec<usize> = g.iter().map(|x| x.1).collect();
        let mut seen = Vec::new();
        for d in distributions(&sizes, j as usize) {
            let mut nu = Vec::with_capacity(n);
            for ((v, size), &add) in g.iter().zip(&d) {
                nu.extend(std::iter::repeat_n(v + 1, add));
                nu.extend(std::iter::repeat_n(*v, size - add));
            }
            let mut nu = sorted_desc(nu);
            nu.retain(|&x| x > 0);
            if seen.contains(&nu) {
                continue;
            }
            let k = strip_count(lam, &nu, j as usize, n);
            seen.push(nu.clone());
            let k = (k % field.p() as u64) as Coeff;
            if k != 0 {
                let e = out.entry(nu).or_insert(0);
                *e = field.add(*e, field.mul(k, c));
            }
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

/// Memoized monomial-basis expansions of products of elementary functions.
struct ElementaryProducts {
    n: usize,
    field: PrimeField,
    cache: HashMap<Vec<u32>, MBasis>,
}

impl ElementaryProducts {
    fn expand(&mut self, nu: &[u32]) -> MBasis {
        if let Some(v) = self.cache.get(nu) {
            return v.clone();
        }
        let out = match nu.split_last() {
            None => MBasis::from([(Vec::new(), 1)]),
            Some((&last, init)) => {
                let base = self.expand(init);
                mul_by_elementary(&base, last, self.n, self.field)
            }
        };
        self.cache.insert(nu.to_vec(), out.clone());
        out
    }
}

fn mbasis_to_elementary(mut f: MBasis, ctx: &SymContext) -> Result<Polynomial, SymError> {
    let n = ctx.n as usize;
    let field = ctx.t_ring.field();
    let mut products = ElementaryProducts { n, field, cache: HashMap::new() };
    let mut terms = Vec::new();
    while let Some((lam, c)) = f.iter().next_back().map(|(l, c)| (l.clone(), *c)) {
        if lam.len() > n {
            return Err(SymError::NotSymmetric);
        }
        // e_{lam'} has leading monomial m_lam with coefficient one
        let conj = Partition::new(lam.clone()).conjugate();
        let mut ascending = conj.parts().to_vec();
        ascending.reverse();
        let expansion = products.expand(&ascending);
        if expansion.get(&lam).copied() != Some(1) {
            return Err(SymError::NotSymmetric);
        }
        for (mu, d) in expansion {
            let e = f.entry(mu).or_insert(0);
            *e = field.sub(*e, field.mul(c, d));
        }
        f.retain(|_, x| *x != 0);
        let mut m = Monomial::one();
        for &part in conj.parts() {
            let i = part as usize - 1;
            m.set_exp(i, m.exp(i) + 1);
        }
        terms.push((m, c));
    }
    Ok(Polynomial::from_terms(&ctx.c_ring, terms))
}

/// Expresses a symmetric polynomial in `t1..tn` through `c_k = e_k(t)`.
///
/// Works in the monomial basis: the lexicographically largest `m_lam` is
/// cancelled by the product `e_{lam'}`, which has it as leading term.
pub fn rewrite_in_elementary(f: &Polynomial, ctx: &SymContext) -> Result<Polynomial, SymError> {
    if !RingContext::same(f.ring(), &ctx.t_ring) {
        return Err(SymError::Poly(PolyError::RingMismatch));
    }
    let m = to_mbasis(f, ctx.n as usize)?;
    mbasis_to_elementary(m, ctx)
}

/// Schur polynomial `s_lam` as the determinant `det(c_{lam'_i - i + j})`.
pub fn schur_giambelli(lam: &Partition, ctx: &SymContext) -> Polynomial {
    let conj = lam.conjugate();
    let size = conj.len();
    let entry = |i: usize, j: usize| ctx.c(conj.parts()[i] as i64 - i as i64 + j as i64);
    // Laplace expansion along rows, memoized on the set of used columns
    let mut memo: HashMap<(usize, u64), Polynomial> = HashMap::new();
    fn det(
        row: usize,
        used: u64,
        size: usize,
        entry: &dyn Fn(usize, usize) -> Polynomial,
        memo: &mut HashMap<(usize, u64), Polynomial>,
        ring: &Arc<RingContext>,
    ) -> Polynomial {
        if row == size {
            return Polynomial::one(ring);
        }
        if let Some(v) = memo.get(&(row, used)) {
            return v.clone();
        }
        let mut acc = Polynomial::zero(ring);
        let mut sign_pos = true;
        for col in 0..size {
            if used & (1 << col) != 0 {
                continue;
            }
            let a = entry(row, col);
            if !a.is_zero() {
                let minor = det(row + 1, used | (1 << col), size, entry, memo, ring);
                let term = &a * &minor;
                acc = if sign_pos { &acc + &term } else { &acc - &term };
            }
            sign_pos = !sign_pos;
        }
        memo.insert((row, used), acc.clone());
        acc
    }
    det(0, 0, size, &entry, &mut memo, &ctx.c_ring)
}

/// Number of semistandard tableaux of shape `lam` and content `mu`.
pub fn kostka(lam: &Partition, mu: &Partition) -> u64 {
    if lam.size() != mu.size() {
        return 0;
    }
    let outer = lam.parts().to_vec();
    let mut memo: HashMap<(Vec<u32>, usize), u64> = HashMap::new();
    count_fillings(vec![0; outer.len()], 0, mu.parts(), &outer, &mut memo)
}

/// Shapes obtained from `cur` by adding a horizontal strip of `size` boxes
/// inside `outer`.
fn horizontal_strips(cur: &[u32], outer: &[u32], size: u32) -> Vec<Vec<u32>> {
    fn rec(row: usize, left: u32, cur: &[u32], outer: &[u32], acc: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if row == cur.len() {
            if left == 0 {
                out.push(acc.clone());
            }
            return;
        }
        let lo = cur[row];
        let hi = if row == 0 { outer[0] } else { outer[row].min(cur[row - 1]) };
        for v in lo..=hi.max(lo) {
            if v - lo > left {
                break;
            }
            acc.push(v);
            rec(row + 1, left - (v - lo), cur, outer, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, size, cur, outer, &mut Vec::new(), &mut out);
    out
}

fn count_fillings(
    cur: Vec<u32>,
    idx: usize,
    mu: &[u32],
    outer: &[u32],
    memo: &mut HashMap<(Vec<u32>, usize), u64>,
) -> u64 {
    if idx == mu.len() {
        return u64::from(cur == outer);
    }
    if let Some(&v) = memo.get(&(cur.clone(), idx)) {
        return v;
    }
    let total = horizontal_strips(&cur, outer, mu[idx])
        .into_iter()
        .map(|next| count_fillings(next, idx + 1, mu, outer, memo))
        .sum();
    memo.insert((cur, idx), total);
    total
}

/// Kostka matrix of partitions of `n` (rows: shapes, columns: contents) and
/// its exact inverse, both indexed by `Partition::all(n)`.
pub struct KostkaTable {
    pub partitions: Vec<Partition>,
    pub matrix: Vec<Vec<i64>>,
    pub inverse: Vec<Vec<i64>>,
}

impl KostkaTable {
    pub fn new(n: u32) -> Self {
        let partitions = Partition::all(n);
        let size = partitions.len();
        let matrix: Vec<Vec<i64>> = partitions
            .iter()
            .map(|lam| partitions.iter().map(|mu| kostka(lam, mu) as i64).collect())
            .collect();
        let inverse = invert_exact(&matrix);
        assert_eq!(inverse.len(), size);
        KostkaTable { partitions, matrix, inverse }
    }

    pub fn index(&self, lam: &Partition) -> Option<usize> {
        self.partitions.iter().position(|x| x == lam)
    }
}

/// Gauss-Jordan inversion over the rationals; the result must be integral.
fn invert_exact(m: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<BigRational> = row.iter().map(|&x| BigRational::from_integer(x.into())).collect();
            r.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero()).expect("singular Kostka matrix");
        a.swap(col, piv);
        let inv = a[col][col].recip();
        for x in a[col].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let factor = a[r][col].clone();
                for c in 0..2 * n {
                    let delta = &factor * &a[col][c];
                    a[r][c] = &a[r][c] - &delta;
                }
            }
        }
    }
    a.into_iter()
        .map(|row| {
            row[n..]
                .iter()
                .map(|x| {
                    assert!(x.is_integer(), "non-integral inverse Kostka entry");
                    x.to_integer().to_i64().expect("inverse Kostka entry out of range")
                })
                .collect()
        })
        .collect()
}

static KOSTKA_CACHE: Mutex<Option<HashMap<u32, Arc<KostkaTable>>>> = Mutex::new(None);

/// Shared Kostka table for partitions of `n`, built once.
pub fn kostka_table(n: u32) -> Arc<KostkaTable> {
    if let Some(t) = KOSTKA_CACHE.lock().unwrap().get_or_insert_with(HashMap::new).get(&n) {
        return t.clone();
    }
    let table = Arc::new(KostkaTable::new(n));
    KOSTKA_CACHE.lock().unwrap().get_or_insert_with(HashMap::new).entry(n).or_insert(table).clone()
}

/// Entry `(mu, lam)` of the inverse Kostka matrix.
pub fn kostka_inverse(mu: &Partition, lam: &Partition) -> Result<i64, SymError> {
    if mu.size() != lam.size() {
        return Err(SymError::SizeMismatch(mu.size(), lam.size()));
    }
    let t = kostka_table(mu.size());
    let i = t.index(mu).unwrap();
    let j = t.index(lam).unwrap();
    Ok(t.inverse[i][j])
}

/// `P^k(c_m)` in `c1..cn` for the given `n`; Chern classes above `n` vanish.
pub fn wu_formula_in(k: u32, m: u32, ctx: &SymContext) -> Result<Polynomial, SymError> {
    if m > ctx.n {
        return Ok(Polynomial::zero(&ctx.c_ring));
    }
    let e = elementary(m, ctx)?;
    let image = weight_one_power(k, &e);
    rewrite_in_elementary(&image, ctx)
}

/// Smallest variable count for which the Wu formula is stable.
pub fn stable_rank(p: u32, k: u32, m: u32) -> u32 {
    (m + k * (p - 1)).max(1)
}

/// The mod-p Wu formula for `P^k(c_m)`, generated from `P(t) = t + t^p`.
pub fn wu_formula(p: u32, k: u32, m: u32) -> Result<Polynomial, SymError> {
    let ctx = SymContext::new(p, stable_rank(p, k, m))?;
    wu_formula_in(k, m, &ctx)
}

/// Schur expansion `Σ K^{-1}_{mu,lam} s_lam` of `P^k(c_m)` with
/// `mu = (p^k, 1^{m-k})`, as a list of nonzero coefficients mod p.
pub fn schur_expansion(p: u32, k: u32, m: u32) -> Result<Vec<(Partition, Coeff)>, SymError> {
    let field = PrimeField::new(p)?;
    if k > m {
        return Ok(Vec::new());
    }
    let mu = Partition::from_multiplicities(&[(p, k), (1, m - k)]);
    let t = kostka_table(mu.size());
    let i = t.index(&mu).unwrap();
    Ok(t.partitions
        .iter()
        .zip(&t.inverse[i])
        .filter_map(|(lam, &v)| {
            let c = field.reduce(v);
            (c != 0).then(|| (lam.clone(), c))
        })
        .collect())
}

/// Assembles a Schur expansion into the Chern ring via Giambelli.
pub fn assemble_schur(terms: &[(Partition, Coeff)], ctx: &SymContext) -> Polynomial {
    let mut acc = Polynomial::zero(&ctx.c_ring);
    for (lam, c) in terms {
        acc = acc.add_scaled(&schur_giambelli(lam, ctx), *c);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn elementary_small_cases() {
        let ctx = SymContext::new(3, 3).unwrap();
        assert_eq!(elementary(0, &ctx).unwrap(), Polynomial::one(ctx.t_ring()));
        assert_eq!(elementary(3, &ctx).unwrap(), Polynomial::parse("t1*t2*t3", ctx.t_ring()).unwrap());
        assert_eq!(
            elementary(2, &ctx).unwrap(),
            Polynomial::parse("t1*t2+t1*t3+t2*t3", ctx.t_ring()).unwrap()
        );
        assert!(matches!(elementary(4, &ctx), Err(SymError::OutOfRange { .. })));
    }

    #[test]
    fn conjugation_and_listing() {
        let lam = Partition::new(vec![3, 1, 1]);
        assert_eq!(lam.conjugate(), Partition::new(vec![3, 1, 1]));
        assert_eq!(Partition::new(vec![4, 2]).conjugate(), Partition::new(vec![2, 2, 1, 1]));
        assert_eq!(Partition::all(5).len(), 7);
        assert_eq!(Partition::all(14).len(), 135);
        assert_eq!(format!("{}", Partition::from_multiplicities(&[(1, 3), (3, 2)])), "(1^3,3^2)");
    }

    #[test]
    fn rewrite_identifies_elementaries() {
        let ctx = SymContext::new(5, 4).unwrap();
        for k in 1..=4 {
            let e = elementary(k, &ctx).unwrap();
            assert_eq!(rewrite_in_elementary(&e, &ctx).unwrap(), ctx.c(k as i64));
        }
    }

    /// `m_mu` in `t1..tn` by enumerating the distinct rearrangements of `mu`.
    fn monomial_symmetric(mu: &Partition, ctx: &SymContext) -> Polynomial {
        let n = ctx.n() as usize;
        let mut padded: Vec<u16> = mu.parts().iter().map(|&x| x as u16).collect();
        padded.resize(n, 0);
        let mut seen = std::collections::BTreeSet::new();
        fn perms(rest: &mut Vec<u16>, cur: &mut Vec<u16>, out: &mut std::collections::BTreeSet<Vec<u16>>) {
            if rest.is_empty() {
                out.insert(cur.clone());
                return;
            }
            for i in 0..rest.len() {
                let x = rest.remove(i);
                cur.push(x);
                perms(rest, cur, out);
                cur.pop();
                rest.insert(i, x);
            }
        }
        perms(&mut padded, &mut Vec::new(), &mut seen);
        Polynomial::from_terms(ctx.t_ring(), seen.iter().map(|e| (Monomial::from_exponents(e), 1)))
    }

    #[test]
    fn giambelli_matches_kostka_expansion() {
        let ctx = SymContext::new(5, 5).unwrap();
        for size in 1..=5 {
            for lam in Partition::all(size) {
                let mut via_kostka = Polynomial::zero(ctx.t_ring());
                for mu in Partition::all(size) {
                    let k = kostka(&lam, &mu) % 5;
                    via_kostka = via_kostka.add_scaled(&monomial_symmetric(&mu, &ctx), k as Coeff);
                }
                let expected = rewrite_in_elementary(&via_kostka, &ctx).unwrap();
                assert_eq!(schur_giambelli(&lam, &ctx), expected, "{lam}");
            }
        }
    }

    #[test]
    fn rewrite_rejects_asymmetric_input() {
        let ctx = SymContext::new(3, 3).unwrap();
        let f = Polynomial::parse("t1^2+t2^2", ctx.t_ring()).unwrap();
        assert_eq!(rewrite_in_elementary(&f, &ctx), Err(SymError::NotSymmetric));
        let g = Polynomial::parse("t1^2+2*t2^2+t3^2", ctx.t_ring()).unwrap();
        assert_eq!(rewrite_in_elementary(&g, &ctx), Err(SymError::NotSymmetric));
    }

    #[test]
    fn small_kostka_numbers() {
        let p = |v: Vec<u32>| Partition::new(v);
        assert_eq!(kostka(&p(vec![2, 1]), &p(vec![1, 1, 1])), 2);
        assert_eq!(kostka(&p(vec![3, 2]), &p(vec![2, 2, 1])), 2);
        assert_eq!(kostka(&p(vec![2, 2]), &p(vec![3, 1])), 0);
        assert_eq!(kostka(&p(vec![3, 2, 1]), &p(vec![1; 6])), 16);
    }

    #[test]
    fn kostka_inverse_is_unitriangular() {
        for n in 1..=6 {
            let t = kostka_table(n);
            for (i, lam) in t.partitions.iter().enumerate() {
                assert_eq!(t.inverse[i][i], 1);
                for (j, mu) in t.partitions.iter().enumerate() {
                    if t.inverse[i][j] != 0 {
                        assert!(lam.dominates(mu));
                    }
                }
            }
        }
        let a = Partition::new(vec![2]);
        let b = Partition::new(vec![1]);
        assert!(matches!(kostka_inverse(&a, &b), Err(SymError::SizeMismatch(2, 1))));
    }

    #[test]
    fn wu_trivial_power() {
        for p in [2, 3, 5] {
            for m in 1..=4 {
                let ctx = SymContext::new(p, m).unwrap();
                assert_eq!(wu_formula(p, 0, m).unwrap(), ctx.c(m as i64));
            }
        }
    }
}
