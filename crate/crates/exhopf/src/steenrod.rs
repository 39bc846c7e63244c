//! Reduced power operations on polynomial rings.
//!
//! Mode A acts on a ring generated in weight one through the multiplicative
//! total operation `w -> w + w^p`. Mode B acts on an abstract Chern ring
//! `F_p[c_2, .., c_n]` (with `c_1 = 0`) through generated Wu formulas and the
//! Cartan formula.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_integer::binomial;
use thiserror::Error;

use crate::ffpoly::{Coeff, Monomial, PolyError, Polynomial, RingContext};
use crate::liedata::{self, DataError, Group};
use crate::symfun::{wu_formula_in, SymContext, SymError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SteenrodError {
    #[error("operation needs the {0} mode")]
    WrongMode(&'static str),
    #[error("input is not homogeneous")]
    Inhomogeneous,
    #[error("ring is not a valid {0} ring")]
    BadRing(&'static str),
    #[error("case 1 identities concern p = 2 and E6, E7, E8; got {0:?} at p = {1}")]
    WrongPair(Group, u32),
    #[error(transparent)]
    Sym(#[from] SymError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Data(#[from] DataError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    WeightRing,
    AbstractChern,
}

/// `P^k` on a ring whose variables all have weight one.
///
/// On `w^e` the operation is the degree-`k` part of `(w + w^p)^e`, extended
/// multiplicatively across variables.
pub fn weight_one_power(k: u32, f: &Polynomial) -> Polynomial {
    let ring = f.ring().clone();
    let field = ring.field();
    let p = field.p();
    let n = ring.nvars();
    let mut binom: HashMap<(u16, u32), Coeff> = HashMap::new();
    let mut choose = |e: u16, j: u32| -> Coeff {
        *binom
            .entry((e, j))
            .or_insert_with(|| (binomial(e as u64, j as u64) % p as u64) as Coeff)
    };
    let mut out: Vec<(Monomial, Coeff)> = Vec::new();
    for &(m, c) in f.terms() {
        if m.total_degree() < k {
            continue;
        }
        // distribute k over the variables present in m
        let support: Vec<usize> = (0..n).filter(|&i| m.exp(i) > 0).collect();
        let mut stack: Vec<(usize, u32, Monomial, Coeff)> = vec![(0, k, m, c)];
        while let Some((idx, left, mono, coeff)) = stack.pop() {
            if idx == support.len() {
                if left == 0 {
                    out.push((mono, coeff));
                }
                continue;
            }
            let i = support[idx];
            let e = m.exp(i);
            let rest: u32 = support[idx + 1..].iter().map(|&v| m.exp(v) as u32).sum();
            let lo = left.saturating_sub(rest);
            for j in lo..=left.min(e as u32) {
                let b = choose(e, j);
                if b == 0 {
                    continue;
                }
                let mut next = mono;
                next.set_exp(i, e + (j * (p - 1)) as u16);
                stack.push((idx + 1, left - j, next, field.mul(coeff, b)));
            }
        }
    }
    Polynomial::from_terms(&ring, out)
}

struct ChernAction {
    sym: SymContext,
    /// ring variable index -> Chern index m
    index: Vec<u32>,
    wu: Mutex<HashMap<(u32, u32), Polynomial>>,
    monomials: Mutex<HashMap<(Monomial, u32), Polynomial>>,
}

/// A ring together with the Steenrod action used on it.
pub struct SteenrodContext {
    mode: Mode,
    ring: Arc<RingContext>,
    chern: Option<ChernAction>,
}

impl SteenrodContext {
    /// Mode A: every variable must have weight one.
    pub fn weight_ring(ring: &Arc<RingContext>) -> Result<Self, SteenrodError> {
        if ring.vars().iter().any(|v| v.weight != 1) {
            return Err(SteenrodError::BadRing("weight"));
        }
        Ok(SteenrodContext { mode: Mode::WeightRing, ring: ring.clone(), chern: None })
    }

    /// Mode B on `F_p[c_2..c_n]`; variable names must be `c<m>` of weight `m`
    /// with `m >= 2`, and `n` is the largest index.
    pub fn abstract_chern(ring: &Arc<RingContext>) -> Result<Self, SteenrodError> {
        let mut index = Vec::new();
        for v in ring.vars() {
            let m: u32 = v
                .name
                .strip_prefix('c')
                .and_then(|s| s.parse().ok())
                .ok_or(SteenrodError::BadRing("Chern"))?;
            if m < 2 || m != v.weight {
                return Err(SteenrodError::BadRing("Chern"));
            }
            index.push(m);
        }
        let n = index.iter().copied().max().unwrap_or(1);
        let sym = SymContext::new(ring.p(), n)?;
        let chern = ChernAction {
            sym,
            index,
            wu: Mutex::new(HashMap::new()),
            monomials: Mutex::new(HashMap::new()),
        };
        Ok(SteenrodContext { mode: Mode::AbstractChern, ring: ring.clone(), chern: Some(chern) })
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn ring(&self) -> &Arc<RingContext> {
        &self.ring
    }

    pub fn p(&self) -> u32 {
        self.ring.p()
    }

    /// The full (inhomogeneous) total operation; mode A only.
    pub fn total_steenrod(&self, f: &Polynomial) -> Result<Polynomial, SteenrodError> {
        if self.mode != Mode::WeightRing {
            return Err(SteenrodError::WrongMode("weight-ring"));
        }
        self.check_ring(f)?;
        let top = f.terms().iter().map(|(m, _)| m.total_degree()).max().unwrap_or(0);
        let mut acc = Polynomial::zero(&self.ring);
        for k in 0..=top {
            acc = &acc + &weight_one_power(k, f);
        }
        Ok(acc)
    }

    fn check_ring(&self, f: &Polynomial) -> Result<(), SteenrodError> {
        if RingContext::same(f.ring(), &self.ring) {
            Ok(())
        } else {
            Err(SteenrodError::Poly(PolyError::RingMismatch))
        }
    }

    /// `P^k f` for homogeneous `f`.
    pub fn power(&self, k: u32, f: &Polynomial) -> Result<Polynomial, SteenrodError> {
        self.check_ring(f)?;
        if !f.is_homogeneous() {
            return Err(SteenrodError::Inhomogeneous);
        }
        match self.mode {
            Mode::WeightRing => Ok(weight_one_power(k, f)),
            Mode::AbstractChern => {
                let ring = self.ring.clone();
                let mut err = None;
                let out = f.map_terms(&ring, |m, c| match self.power_monomial(k, m) {
                    Ok(v) => v.scale(c),
                    Err(e) => {
                        err = Some(e);
                        Polynomial::zero(&ring)
                    }
                });
                match err {
                    Some(e) => Err(e),
                    None => Ok(out),
                }
            }
        }
    }

    /// Wu formula for `P^k c_m` moved into this ring (`c_1 = 0`).
    pub fn wu(&self, k: u32, m: u32) -> Result<Polynomial, SteenrodError> {
        let chern = self.chern.as_ref().ok_or(SteenrodError::WrongMode("abstract Chern"))?;
        if let Some(v) = chern.wu.lock().unwrap().get(&(k, m)) {
            return Ok(v.clone());
        }
        let raw = wu_formula_in(k, m, &chern.sym)?;
        let zero = Polynomial::zero(&self.ring);
        let overrides: Vec<(String, Polynomial)> = (1..=chern.sym.n())
            .filter(|j| !chern.index.contains(j))
            .map(|j| (format!("c{j}"), zero.clone()))
            .collect();
        let refs: Vec<(&str, Polynomial)> = overrides.iter().map(|(n, f)| (n.as_str(), f.clone())).collect();
        let moved = raw.transfer(&self.ring, &refs)?;
        chern.wu.lock().unwrap().insert((k, m), moved.clone());
        Ok(moved)
    }

    fn power_monomial(&self, k: u32, m: &Monomial) -> Result<Polynomial, SteenrodError> {
        let chern = self.chern.as_ref().unwrap();
        if k == 0 {
            return Ok(Polynomial::monomial(&self.ring, *m, 1));
        }
        if self.ring.weight(m) < k {
            return Ok(Polynomial::zero(&self.ring));
        }
        if let Some(v) = chern.monomials.lock().unwrap().get(&(*m, k)) {
            return Ok(v.clone());
        }
        let i = (0..self.ring.nvars()).find(|&i| m.exp(i) > 0).expect("nonconstant monomial");
        let cm = chern.index[i];
        let mut rest = *m;
        rest.set_exp(i, m.exp(i) - 1);
        let mut acc = Polynomial::zero(&self.ring);
        for j in 0..=k.min(cm) {
            let left = if j == 0 { Polynomial::var(&self.ring, i) } else { self.wu(j, cm)? };
            if left.is_zero() {
                continue;
            }
            let right = self.power_monomial(k - j, &rest)?;
            acc = &acc + &(&left * &right);
        }
        chern.monomials.lock().unwrap().insert((*m, k), acc.clone());
        Ok(acc)
    }
}

/// Outcome of the two weight-ring identities behind the case `t = 9`, `p = 2`.
#[derive(Debug, Clone)]
pub struct Case1Report {
    /// `P^1 θ_8 - θ_9 - w_2^4 θ_5`
    pub residual_p1: Polynomial,
    /// `P^4 θ_5 - θ_9 - c_4 θ_5 - (w_2^2 c_4 + c_6) θ_3 - (w_2^2 c_5 + c_7) θ_2`
    pub residual_p4: Polynomial,
}

impl Case1Report {
    pub fn holds(&self) -> bool {
        self.residual_p1.is_zero() && self.residual_p4.is_zero()
    }
}

/// Checks both identities term by term in the weight ring of `group`.
pub fn verify_case1(group: Group, p: u32) -> Result<Case1Report, SteenrodError> {
    if p != 2 || !matches!(group, Group::E6 | Group::E7 | Group::E8) {
        return Err(SteenrodError::WrongPair(group, p));
    }
    let set = liedata::theta_set(group, p)?;
    let ring = set.weight_ring().clone();
    let ctx = SteenrodContext::weight_ring(&ring)?;
    let th = |s: u32| set.theta_omega(s).clone();
    let c = |k: u32| set.chern(k);
    let w2 = Polynomial::named(&ring, "w2");
    let w2sq = w2.pow(2);

    let lhs1 = ctx.power(1, &th(8))?;
    let residual_p1 = &(&lhs1 - &th(9)) - &(&w2.pow(4) * &th(5));

    let lhs4 = ctx.power(4, &th(5))?;
    let mut r = &lhs4 - &th(9);
    r = &r - &(&c(4) * &th(5));
    r = &r - &(&(&(&w2sq * &c(4)) + &c(6)) * &th(3));
    r = &r - &(&(&(&w2sq * &c(5)) + &c(7)) * &th(2));
    Ok(Case1Report { residual_p1, residual_p4: r })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffpoly::{chern_ring, weight_ring};

    #[test]
    fn total_operation_on_generators() {
        let r = weight_ring(2, 2).unwrap();
        let ctx = SteenrodContext::weight_ring(&r).unwrap();
        let w = Polynomial::named(&r, "w1");
        assert_eq!(ctx.total_steenrod(&w).unwrap(), Polynomial::parse("w1+w1^2", &r).unwrap());
        let f = Polynomial::parse("w1*w2", &r).unwrap();
        assert_eq!(
            ctx.total_steenrod(&f).unwrap(),
            Polynomial::parse("w1*w2+w1^2*w2+w1*w2^2+w1^2*w2^2", &r).unwrap()
        );
        let theta2 = Polynomial::parse("w1^2+w1*w2+w2^2", &r).unwrap();
        assert_eq!(
            ctx.total_steenrod(&theta2).unwrap().component(3),
            Polynomial::parse("w1^2*w2+w1*w2^2", &r).unwrap()
        );
    }

    #[test]
    fn instability_on_weight_one() {
        for p in [2, 3, 5] {
            let r = weight_ring(p, 1).unwrap();
            let ctx = SteenrodContext::weight_ring(&r).unwrap();
            let w = Polynomial::named(&r, "w1");
            assert_eq!(ctx.power(1, &w).unwrap(), w.pow(p));
            assert!(ctx.power(2, &w).unwrap().is_zero());
        }
    }

    #[test]
    fn modes_reject_each_other() {
        let r = chern_ring(3, 2, 4).unwrap();
        assert!(SteenrodContext::weight_ring(&r).is_err());
        let ctx = SteenrodContext::abstract_chern(&r).unwrap();
        let f = Polynomial::parse("c2", &r).unwrap();
        assert_eq!(ctx.total_steenrod(&f), Err(SteenrodError::WrongMode("weight-ring")));
        let g = Polynomial::parse("c2+c3", &r).unwrap();
        assert_eq!(ctx.power(1, &g), Err(SteenrodError::Inhomogeneous));
    }

    #[test]
    fn restricted_wu_formula_at_five() {
        // P^1 c_m = (m+4)c_{m+4} - 2c_2c_{m+2} + 2c_3c_{m+1} + (2c_2^2 + c_4)c_m
        let r = chern_ring(5, 2, 8).unwrap();
        let ctx = SteenrodContext::abstract_chern(&r).unwrap();
        let c = |k: u32| if k <= 8 { Polynomial::named(&r, &format!("c{k}")) } else { Polynomial::zero(&r) };
        for m in 2..=8u32 {
            let mut expect = c(m + 4).scale((m + 4) % 5);
            expect = &expect - &(&c(2) * &c(m + 2)).scale(2);
            expect = &expect + &(&c(3) * &c(m + 1)).scale(2);
            expect = &expect + &(&(&c(2).pow(2).scale(2) + &c(4)) * &c(m));
            assert_eq!(ctx.wu(1, m).unwrap(), expect, "m = {m}");
        }
    }

    #[test]
    fn case1_needs_p_two() {
        assert!(matches!(verify_case1(Group::E8, 3), Err(SteenrodError::WrongPair(Group::E8, 3))));
        assert!(matches!(verify_case1(Group::F4, 2), Err(SteenrodError::WrongPair(..))));
    }
}
