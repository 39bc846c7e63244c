//! Weight-truncated Buchberger algorithm for homogeneous ideals over `F_p`.
//!
//! Every ideal handled here is generated by homogeneous polynomials, so a
//! basis complete up to weight `d` decides membership for all polynomials of
//! weight at most `d`.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use thiserror::Error;

use crate::ffpoly::{Coeff, Monomial, OrderKey, Polynomial, RingContext};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroebnerError {
    #[error("generator {0} is not homogeneous")]
    Inhomogeneous(usize),
    #[error("polynomial lives in a different ring")]
    RingMismatch,
    #[error("weight {weight} exceeds the truncation weight {limit}")]
    WeightExceeded { weight: u32, limit: u32 },
    #[error("no coefficient makes the remainder vanish")]
    NoSolution,
    #[error("pivot lies in the ideal; the coefficient is not determined")]
    Ambiguous,
}

/// A reduced Groebner basis complete up to `truncation` in weight.
#[derive(Debug, Clone)]
pub struct GroebnerBasis {
    ring: Arc<RingContext>,
    generators: Vec<Polynomial>,
    truncation: u32,
    basis: Vec<Polynomial>,
}

/// Outcome of a division: `f = sum quotients[i] * basis[i] + remainder`.
#[derive(Debug, Clone)]
pub struct ReductionResult {
    pub remainder: Polynomial,
    pub quotients: Vec<Polynomial>,
}

impl GroebnerBasis {
    pub fn ring(&self) -> &Arc<RingContext> {
        &self.ring
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    /// Monic, inter-reduced basis elements in ascending leading-term order.
    pub fn basis(&self) -> &[Polynomial] {
        &self.basis
    }

    fn check(&self, f: &Polynomial) -> Result<(), GroebnerError> {
        if !RingContext::same(f.ring(), &self.ring) {
            return Err(GroebnerError::RingMismatch);
        }
        if let Some(w) = f.max_weight() {
            if w > self.truncation {
                return Err(GroebnerError::WeightExceeded { weight: w, limit: self.truncation });
            }
        }
        Ok(())
    }

    /// Full division with quotients.
    pub fn normal_form(&self, f: &Polynomial) -> Result<ReductionResult, GroebnerError> {
        self.check(f)?;
        let mut quotients: Vec<Vec<(Monomial, Coeff)>> = vec![Vec::new(); self.basis.len()];
        let remainder = reduce(&self.ring, f, &self.basis, Some(&mut quotients));
        let quotients = quotients.into_iter().map(|q| Polynomial::from_terms(&self.ring, q)).collect();
        Ok(ReductionResult { remainder, quotients })
    }

    /// Remainder only.
    pub fn remainder(&self, f: &Polynomial) -> Result<Polynomial, GroebnerError> {
        self.check(f)?;
        Ok(reduce(&self.ring, f, &self.basis, None))
    }
}

/// Divides `f` by `basis`, always using the first basis element whose leading
/// monomial divides the current leading monomial.
fn reduce(
    ring: &Arc<RingContext>,
    f: &Polynomial,
    basis: &[Polynomial],
    mut quotients: Option<&mut Vec<Vec<(Monomial, Coeff)>>>,
) -> Polynomial {
    let field = ring.field();
    let mut work: BTreeMap<OrderKey, Coeff> = f.terms().iter().map(|(m, c)| (ring.key(m), *c)).collect();
    let mut rem: Vec<(Monomial, Coeff)> = Vec::new();
    let leads: Vec<(Monomial, Coeff)> = basis.iter().map(|g| *g.leading().expect("nonzero basis element")).collect();
    while let Some((key, c)) = work.pop_last() {
        let m = ring.from_key(&key);
        match leads.iter().position(|(lm, _)| lm.divides(&m)) {
            None => rem.push((m, c)),
            Some(i) => {
                let (lm, lc) = leads[i];
                let q = lm.quotient_of(&m);
                let a = field.div(c, lc);
                if let Some(qs) = quotients.as_deref_mut() {
                    qs[i].push((q, a));
                }
                let na = field.neg(a);
                for &(gm, gc) in &basis[i].terms()[1..] {
                    let k = ring.key(&gm.mul(&q));
                    let v = field.mul(na, gc);
                    let e = work.entry(k).or_insert(0);
                    *e = field.add(*e, v);
                    if *e == 0 {
                        work.remove(&k);
                    }
                }
            }
        }
    }
    Polynomial::from_sorted(ring, rem)
}

fn s_polynomial(f: &Polynomial, g: &Polynomial) -> Polynomial {
    let field = f.field();
    let (fm, fc) = *f.leading().unwrap();
    let (gm, gc) = *g.leading().unwrap();
    let l = fm.lcm(&gm);
    let a = f.mul_term(&fm.quotient_of(&l), field.inv(fc));
    let b = g.mul_term(&gm.quotient_of(&l), field.inv(gc));
    &a - &b
}

/// Computes a reduced basis of the ideal of `gens` complete up to weight `d`.
///
/// Pairs are processed by increasing weight of their lcm, pairs above `d`
/// are discarded, and the coprime and chain criteria skip useless pairs.
pub fn buchberger(ring: &Arc<RingContext>, gens: &[Polynomial], d: u32) -> Result<GroebnerBasis, GroebnerError> {
    for (i, g) in gens.iter().enumerate() {
        if !RingContext::same(g.ring(), ring) {
            return Err(GroebnerError::RingMismatch);
        }
        if !g.is_homogeneous() {
            return Err(GroebnerError::Inhomogeneous(i));
        }
    }
    let mut pending_gens: BTreeMap<u32, Vec<Polynomial>> = BTreeMap::new();
    for g in gens {
        if let Some(w) = g.homogeneous_weight() {
            if w <= d {
                pending_gens.entry(w).or_default().push(g.clone());
            }
        }
    }
    let mut basis: Vec<Polynomial> = Vec::new();
    // pending pairs keyed by (lcm weight, j, i) with i < j
    let mut pairs: BTreeSet<(u32, usize, usize)> = BTreeSet::new();
    let mut weight = 0;
    loop {
        let next_pair = pairs.iter().next().map(|p| p.0);
        let next_gen = pending_gens.keys().next().copied();
        let w = match (next_pair, next_gen) {
            (None, None) => break,
            (Some(a), Some(b)) => a.min(b),
            (Some(a), None) => a,
            (None, Some(b)) => b,
        };
        debug_assert!(w >= weight);
        weight = w;
        let mut candidates: Vec<Polynomial> = Vec::new();
        while let Some(&(pw, j, i)) = pairs.iter().next() {
            if pw != w {
                break;
            }
            pairs.remove(&(pw, j, i));
            let (mi, mj) = (basis[i].leading().unwrap().0, basis[j].leading().unwrap().0);
            let l = mi.lcm(&mj);
            let chain = (0..basis.len()).any(|k| {
                k != i
                    && k != j
                    && basis[k].leading().unwrap().0.divides(&l)
                    && !pairs.contains(&pair_key(ring, &basis, i, k))
                    && !pairs.contains(&pair_key(ring, &basis, j, k))
            });
            if !chain {
                candidates.push(s_polynomial(&basis[i], &basis[j]));
            }
        }
        if let Some(gs) = pending_gens.remove(&w) {
            candidates.extend(gs);
        }
        for c in candidates {
            let r = reduce(ring, &c, &basis, None);
            if r.is_zero() {
                continue;
            }
            let r = r.make_monic();
            let new = basis.len();
            let lm = r.leading().unwrap().0;
            basis.push(r);
            for i in 0..new {
                let li = basis[i].leading().unwrap().0;
                if li.is_coprime(&lm) {
                    continue;
                }
                let pw = ring.weight(&li.lcm(&lm));
                if pw <= d {
                    pairs.insert((pw, new, i));
                }
            }
        }
    }
    Ok(GroebnerBasis { ring: ring.clone(), generators: gens.to_vec(), truncation: d, basis: inter_reduce(ring, basis) })
}

fn pair_key(ring: &Arc<RingContext>, basis: &[Polynomial], a: usize, b: usize) -> (u32, usize, usize) {
    let (i, j) = if a < b { (a, b) } else { (b, a) };
    let l = basis[i].leading().unwrap().0.lcm(&basis[j].leading().unwrap().0);
    (ring.weight(&l), j, i)
}

fn inter_reduce(ring: &Arc<RingContext>, basis: Vec<Polynomial>) -> Vec<Polynomial> {
    let mut minimal: Vec<Polynomial> = Vec::new();
    for (i, g) in basis.iter().enumerate() {
        let lm = g.leading().unwrap().0;
        let redundant = basis.iter().enumerate().any(|(j, h)| {
            let hm = h.leading().unwrap().0;
            j != i && hm.divides(&lm) && (hm != lm || j < i)
        });
        if !redundant {
            minimal.push(g.clone());
        }
    }
    minimal.sort_by_key(|g| ring.key(&g.leading().unwrap().0));
    let mut out = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let (lead, rest) = (minimal[i].leading().copied().unwrap(), &minimal[i].terms()[1..]);
        let others: Vec<Polynomial> =
            minimal.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, g)| g.clone()).collect();
        let tail = reduce(ring, &Polynomial::from_sorted(ring, rest.to_vec()), &others, None);
        let head = Polynomial::monomial(ring, lead.0, lead.1);
        out.push((&head + &tail).make_monic());
    }
    out
}

/// The unique `a` with `lhs - a * pivot` reducing to zero.
pub fn solve_linear_coefficient(
    lhs: &Polynomial,
    pivot: &Polynomial,
    gb: &GroebnerBasis,
) -> Result<Coeff, GroebnerError> {
    let rl = gb.remainder(lhs)?;
    let rp = gb.remainder(pivot)?;
    let Some(&(m, c)) = rp.leading() else {
        return Err(if rl.is_zero() { GroebnerError::Ambiguous } else { GroebnerError::NoSolution });
    };
    let field = rp.field();
    let a = field.div(rl.coeff(&m), c);
    if rl == rp.scale(a) {
        Ok(a)
    } else {
        Err(GroebnerError::NoSolution)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffpoly::weight_ring;

    #[test]
    fn principal_monomial_ideal() {
        let r = weight_ring(2, 2).unwrap();
        let x = Polynomial::named(&r, "w1");
        let gb = buchberger(&r, std::slice::from_ref(&x), 4).unwrap();
        assert_eq!(gb.basis(), std::slice::from_ref(&x));
        let f = Polynomial::parse("w1^2*w2+w1*w2^2", &r).unwrap();
        assert!(gb.remainder(&(&x * &f)).unwrap().is_zero());
    }

    #[test]
    fn empty_ideal_is_identity() {
        let r = weight_ring(3, 2).unwrap();
        let gb = buchberger(&r, &[], 5).unwrap();
        let f = Polynomial::parse("w1^3-w2^3", &r).unwrap();
        assert_eq!(gb.remainder(&f).unwrap(), f);
    }

    #[test]
    fn division_identity_holds() {
        let r = weight_ring(3, 3).unwrap();
        let gens = [
            Polynomial::parse("w1^2+w2*w3", &r).unwrap(),
            Polynomial::parse("w2^2-w1*w3", &r).unwrap(),
        ];
        let gb = buchberger(&r, &gens, 6).unwrap();
        let f = Polynomial::parse("w1^4+w1*w2*w3^2-w3^4+w1^2*w2^2", &r).unwrap();
        let res = gb.normal_form(&f).unwrap();
        let mut back = res.remainder.clone();
        for (q, g) in res.quotients.iter().zip(gb.basis()) {
            back = &back + &(q * g);
        }
        assert_eq!(back, f);
        for g in &gens {
            assert!(gb.remainder(g).unwrap().is_zero());
        }
    }

    #[test]
    fn rejects_bad_input() {
        let r = weight_ring(2, 2).unwrap();
        let f = Polynomial::parse("w1+w2^2", &r).unwrap();
        assert_eq!(buchberger(&r, &[f], 3).unwrap_err(), GroebnerError::Inhomogeneous(0));
        let gb = buchberger(&r, &[], 2).unwrap();
        let g = Polynomial::parse("w1^3", &r).unwrap();
        assert!(matches!(gb.remainder(&g), Err(GroebnerError::WeightExceeded { .. })));
    }

    #[test]
    fn coefficient_solver() {
        let r = weight_ring(2, 2).unwrap();
        let theta2 = Polynomial::parse("w1^2+w1*w2+w2^2", &r).unwrap();
        let theta3 = Polynomial::parse("w2^3", &r).unwrap();
        let gb = buchberger(&r, std::slice::from_ref(&theta2), 3).unwrap();
        let lhs = Polynomial::parse("w1^2*w2+w1*w2^2", &r).unwrap();
        assert_eq!(solve_linear_coefficient(&lhs, &theta3, &gb), Ok(1));
        assert_eq!(solve_linear_coefficient(&Polynomial::zero(&r), &theta3, &gb), Ok(0));
        let inside = &Polynomial::named(&r, "w1") * &theta2;
        assert_eq!(solve_linear_coefficient(&inside, &inside, &gb), Err(GroebnerError::Ambiguous));
        let w13 = Polynomial::parse("w1^3", &r).unwrap();
        let w1w2 = Polynomial::parse("w1^2*w2", &r).unwrap();
        let empty = buchberger(&r, &[], 3).unwrap();
        assert_eq!(solve_linear_coefficient(&w13, &w1w2, &empty), Err(GroebnerError::NoSolution));
    }
}
