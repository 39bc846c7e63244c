//! Printed reference values used as fixtures: closed-form Wu formulas,
//! Schur expansions of reduced powers of Chern classes, and the `(E8, 5)`
//! restricted generators with their reduced-power identities.

use crate::ffpoly::{Coeff, PolyError, Polynomial, PrimeField};
use crate::liedata::{theta_set, DataError, Group};
use crate::steenrod::SteenrodContext;
use crate::symfun::{stable_rank, Partition, SymContext, SymError};

/// Closed form of `P^k c_m` in `c1..cn`, `n = stable_rank(p, k, m)`.
/// Covers `p = 2` (`k <= 4`), `p = 3` (`k <= 3`) and `p = 5` (`k = 1`).
pub fn wu_closed_form(p: u32, k: u32, m: u32) -> Result<Option<Polynomial>, SymError> {
    let ctx = SymContext::new(p, stable_rank(p, k, m))?;
    let m = m as i64;
    let term = |coef: i64, idx: &[i64]| -> Polynomial {
        let mut acc = Polynomial::constant(ctx.c_ring(), coef);
        for &i in idx {
            acc = &acc * &ctx.c(i);
        }
        acc
    };
    let sum = |terms: Vec<Polynomial>| -> Polynomial {
        terms.iter().fold(Polynomial::zero(ctx.c_ring()), |a, t| &a + t)
    };
    let out = match (p, k) {
        (2, r) if r <= 4 => {
            let r = r as i64;
            sum((0..=r).map(|t| term(gen_binomial(r - m, t), &[r - t, m + t])).collect())
        }
        (3, 1) => sum(vec![
            term(m + 2, &[m + 2]),
            term(-1, &[1, m + 1]),
            term(1, &[1, 1, m]),
            term(1, &[2, m]),
        ]),
        (3, 2) => sum(vec![
            term(1, &[2, 2, m]),
            term(1, &[1, 3, m]),
            term(-1, &[4, m]),
            term(-1, &[1, 2, m + 1]),
            term(m + 1, &[1, 1, m + 2]),
            term(m - 1, &[2, m + 2]),
            term(-(m + 1), &[1, m + 3]),
            term((m * m + 3 * m + 2) / 2, &[m + 4]),
        ]),
        (3, 3) => sum(vec![
            term(1, &[3, 3, m]),
            term(1, &[2, 4, m]),
            term(-1, &[1, 5, m]),
            term(1, &[6, m]),
            term(-1, &[2, 3, m + 1]),
            term(1, &[5, m + 1]),
            term(m, &[2, 2, m + 2]),
            term(1 + m, &[1, 3, m + 2]),
            term(-(1 + m), &[4, m + 2]),
            term(-m, &[1, 2, m + 3]),
            term(-1, &[3, m + 3]),
            term((m * m + m) / 2, &[1, 1, m + 4]),
            term(-m * m, &[2, m + 4]),
            term(-(m * m + m) / 2, &[1, m + 5]),
            term((m * m * m + 3 * m * m + 2 * m - 6) / 6, &[m + 6]),
        ]),
        (5, 1) => sum(vec![
            term(m + 4, &[m + 4]),
            term(-1, &[1, m + 3]),
            term(1, &[1, 1, m + 2]),
            term(-2, &[2, m + 2]),
            term(-1, &[1, 1, 1, m + 1]),
            term(-2, &[1, 2, m + 1]),
            term(2, &[3, m + 1]),
            term(1, &[1, 1, 1, 1, m]),
            term(1, &[1, 1, 2, m]),
            term(2, &[2, 2, m]),
            term(-1, &[1, 3, m]),
            term(1, &[4, m]),
        ]),
        _ => return Ok(None),
    };
    Ok(Some(out))
}

/// `n (n-1) ... (n-t+1) / t!` for any integer `n`.
fn gen_binomial(n: i64, t: i64) -> i64 {
    let mut num: i64 = 1;
    let mut den: i64 = 1;
    for i in 0..t {
        num *= n - i;
        den *= i + 1;
    }
    num / den
}

/// One printed Schur term: coefficient as a function of `m`, the offset of
/// the number of parts equal to 1 from `m`, and the counts of parts 2..5.
type SchurRow = (fn(i64) -> i64, i64, [i64; 4]);

const SCHUR_P3_K1: &[SchurRow] = &[
    (|m| m, 2, [0, 0, 0, 0]),
    (|_| 1, -1, [0, 1, 0, 0]),
    (|_| -1, 0, [1, 0, 0, 0]),
    (|_| -1, -2, [2, 0, 0, 0]),
];

const SCHUR_P3_K2: &[SchurRow] = &[
    (|_| 1, -2, [0, 2, 0, 0]),
    (|m| m - 1, 1, [0, 1, 0, 0]),
    (|_| -1, -1, [1, 1, 0, 0]),
    (|_| -1, -3, [2, 1, 0, 0]),
    (|m| m * (m - 1) / 2, 4, [0, 0, 0, 0]),
    (|m| -(m - 1), 2, [1, 0, 0, 0]),
    (|m| -(m - 2), 0, [2, 0, 0, 0]),
    (|_| 2, -2, [3, 0, 0, 0]),
    (|_| 1, -4, [4, 0, 0, 0]),
];

const SCHUR_P3_K3: &[SchurRow] = &[
    (|_| 1, -3, [0, 3, 0, 0]),
    (|m| m - 2, 0, [0, 2, 0, 0]),
    (|_| -1, -2, [1, 2, 0, 0]),
    (|_| -1, -4, [2, 2, 0, 0]),
    (|m| (m - 1) * (m - 2) / 2, 3, [0, 1, 0, 0]),
    (|m| -(m - 2), 1, [1, 1, 0, 0]),
    (|m| -(m - 3), -1, [2, 1, 0, 0]),
    (|_| 2, -3, [3, 1, 0, 0]),
    (|_| 1, -5, [4, 1, 0, 0]),
    (|m| m * (m - 1) * (m - 2) / 6, 6, [0, 0, 0, 0]),
    (|m| -(m - 1) * (m - 2) / 2, 4, [1, 0, 0, 0]),
    (|m| -(m - 2) * (m - 3) / 2, 2, [2, 0, 0, 0]),
    (|m| 2 * m - 5, 0, [3, 0, 0, 0]),
    (|m| m - 5, -2, [4, 0, 0, 0]),
    (|_| -3, -4, [5, 0, 0, 0]),
    (|_| -1, -6, [6, 0, 0, 0]),
];

const SCHUR_P5_K1: &[SchurRow] = &[
    (|m| m, 4, [0, 0, 0, 0]),
    (|_| 1, -1, [0, 0, 0, 1]),
    (|_| -1, 0, [0, 0, 1, 0]),
    (|_| -1, -2, [1, 0, 1, 0]),
    (|_| 1, 1, [0, 1, 0, 0]),
    (|_| 1, -1, [1, 1, 0, 0]),
    (|_| 1, -3, [2, 1, 0, 0]),
    (|_| -1, 3, [1, 0, 0, 0]),
    (|_| -1, 0, [2, 0, 0, 0]),
    (|_| -1, -2, [3, 0, 0, 0]),
    (|_| -1, -4, [4, 0, 0, 0]),
];

fn schur_rows(p: u32, k: u32) -> Option<&'static [SchurRow]> {
    match (p, k) {
        (3, 1) => Some(SCHUR_P3_K1),
        (3, 2) => Some(SCHUR_P3_K2),
        (3, 3) => Some(SCHUR_P3_K3),
        (5, 1) => Some(SCHUR_P5_K1),
        _ => None,
    }
}

/// Smallest `m` for which every printed partition has a nonnegative number
/// of parts equal to 1; the printed lists are generic in `m` from there on.
pub fn schur_printed_min_m(p: u32, k: u32) -> Option<u32> {
    let rows = schur_rows(p, k)?;
    Some(rows.iter().map(|(_, ones, _)| (-ones).max(0) as u32).max().unwrap_or(0).max(k))
}

/// Printed Schur expansion of `P^k c_m` (`p = 3`, `k <= 3`; `p = 5`, `k = 1`),
/// reduced mod `p`, zero terms and terms with a negative part count dropped,
/// sorted by partition.
pub fn schur_printed(p: u32, k: u32, m: u32) -> Option<Vec<(Partition, Coeff)>> {
    let rows = schur_rows(p, k)?;
    let field = PrimeField::new(p).ok()?;
    let m = m as i64;
    let mut out = Vec::new();
    for (coef, ones, counts) in rows {
        let c = field.reduce(coef(m));
        let ones = m + ones;
        if c == 0 || ones < 0 || counts.iter().any(|&n| n < 0) {
            continue;
        }
        let mut spec = vec![(1, ones as u32)];
        spec.extend(counts.iter().enumerate().map(|(i, &n)| (i as u32 + 2, n as u32)));
        out.push((Partition::from_multiplicities(&spec), c));
    }
    out.sort();
    Some(out)
}

/// Restricted generators of `(E8, 5)` as printed, by weight.
pub const E8_5_RESTRICTED: [(u32, &str); 8] = [
    (2, "-c2"),
    (6, "-c6-2*c3^2"),
    (8, "-c8-c3*c5-c4^2"),
    (12, "-2*c5*c7+2*c6^2-c3*c4*c5+c3^4"),
    (14, "-c3^2*c8+c7^2+2*c3*c4*c7+c4^2*c6+c4*c5^2+c3^2*c4^2"),
    (18, "-2*c3*c7*c8-c3^2*c4*c8+c4*c7^2+c3^2*c5*c7-2*c3*c4^2*c7+2*c3*c4*c5*c6-c3*c5^3"),
    (20, "c4^3*c8+2*c3^4*c8+c3^2*c7^2+c3^3*c4*c7-2*c5^4+2*c3*c4^3*c5+2*c4^5"),
    (24, "2*c3*c5*c8^2+c3*c6*c7*c8-2*c5^2*c6*c8+c3^4*c4*c8"),
];

/// Printed `P^1` identities on restricted generators of `(E8, 5)`:
/// `P^1 θ_s = Σ coefficient · θ_j`, given as `(s, [(coefficient, j)])`.
pub const E8_5_POWER_IDENTITIES: [(u32, &[(&str, u32)]); 4] = [
    (2, &[("1", 6), ("c4-2*c2^2", 2)]),
    (
        8,
        &[
            ("1", 12),
            ("-c2^2+2*c4", 8),
            ("-2*c3^2+2*c6", 6),
            ("2*c2*c8+2*c3*c7-c4*c6+2*c5^2", 2),
        ],
    ),
    (
        14,
        &[
            ("1", 18),
            ("-(c2^2*c3^2+c2*c8+c3^2*c4+2*c3*c7-c4*c6+2*c5^2)", 8),
            ("2*c4^3", 6),
            (
                "-(c2*c3^3*c5-c2*c3^2*c4^2+2*c2*c3*c4*c7+c2*c4^2*c6+c2*c4*c5^2-c2*c7^2\
                 +c3^2*c4*c6+c3*c4^2*c5+c3*c6*c7-c4^2*c8+2*c4*c5*c7+c4*c6^2-2*c5^2*c6+c8^2)",
                2,
            ),
        ],
    ),
    (
        20,
        &[
            ("1", 24),
            ("c6", 18),
            ("c3^2*c4-c3*c7-c4*c6+2*c5^2", 14),
            ("-(-c3*c4*c5+c4^3-2*c4*c8+c5*c7)", 12),
            ("-(c2*c4^2*c6+2*c3*c5*c8+c4^2*c8-c4*c5*c7+c4*c6^2)", 8),
            (
                "-(c2^2*c7^2+c2*c3*c6*c7+2*c3^3*c4*c5+c3^2*c4^3+2*c3^2*c5*c7-c3*c4*c5*c6-c3*c7*c8\
                 +c4^2*c5^2-2*c5^2*c8+2*c5*c6*c7)",
                6,
            ),
            (
                "-(-2*c2*c4^3*c8-c2*c5^4+c2*c6*c7^2-c3^3*c5*c8-c3^2*c4*c5*c7+c3*c4^3*c7-c3*c4^2*c5*c6\
                 +c3*c5*c7^2+c3*c6^2*c7+c4^4*c6+c4^3*c5^2+c5^3*c7)",
                2,
            ),
        ],
    ),
];

#[derive(Debug, thiserror::Error)]
pub enum FixtureError {
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Steenrod(#[from] crate::steenrod::SteenrodError),
}

/// Parses a fixture polynomial, expanding one level of `-( ... )`.
fn parse_signed(text: &str, ring: &std::sync::Arc<crate::ffpoly::RingContext>) -> Result<Polynomial, PolyError> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    match compact.strip_prefix("-(").and_then(|s| s.strip_suffix(')')) {
        Some(inner) => Ok(Polynomial::parse(inner, ring)?.neg()),
        None => Polynomial::parse(&compact, ring),
    }
}

/// Weights whose computed restricted generator differs from the printed one.
pub fn e8_5_restricted_mismatches() -> Result<Vec<u32>, FixtureError> {
    let set = theta_set(Group::E8, 5)?;
    let ring = set.restricted_ring().expect("E8 has a Chern layer");
    let mut out = Vec::new();
    for (s, text) in E8_5_RESTRICTED {
        if *set.theta_restricted(s)? != parse_signed(text, ring)? {
            out.push(s);
        }
    }
    Ok(out)
}

/// For each printed `P^1` identity, the weights `j` whose coefficient must
/// change sign for the identity to hold on the computed restricted
/// generators. An empty list means the identity holds as printed; `None`
/// means no choice of signs makes it hold.
pub fn e8_5_power_identity_sign_repairs() -> Result<Vec<(u32, Option<Vec<u32>>)>, FixtureError> {
    let set = theta_set(Group::E8, 5)?;
    let ring = set.restricted_ring().expect("E8 has a Chern layer");
    let ctx = SteenrodContext::abstract_chern(ring)?;
    let mut out = Vec::new();
    for (s, rhs) in E8_5_POWER_IDENTITIES {
        let lhs = ctx.power(1, set.theta_restricted(s)?)?;
        let mut terms = Vec::new();
        for (coef, j) in rhs {
            terms.push((*j, &parse_signed(coef, ring)? * set.theta_restricted(*j)?));
        }
        let repair = (0..1u32 << terms.len()).find_map(|mask| {
            let total = terms.iter().enumerate().fold(Polynomial::zero(ring), |acc, (i, (_, t))| {
                if mask >> i & 1 == 1 {
                    &acc - t
                } else {
                    &acc + t
                }
            });
            (total == lhs).then(|| {
                let flips = terms.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1);
                flips.map(|(_, (j, _))| *j).collect::<Vec<_>>()
            })
        });
        out.push((s, repair));
    }
    Ok(out)
}

/// Weights `s` whose printed `P^1` identity fails on the computed restricted
/// generators.
pub fn e8_5_power_identity_failures() -> Result<Vec<u32>, FixtureError> {
    Ok(e8_5_power_identity_sign_repairs()?
        .into_iter()
        .filter(|(_, r)| r.as_deref() != Some(&[]))
        .map(|(s, _)| s)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generalized_binomial() {
        assert_eq!(gen_binomial(-2, 3), -4);
        assert_eq!(gen_binomial(5, 2), 10);
        assert_eq!(gen_binomial(3, 0), 1);
    }

    #[test]
    fn closed_forms_match_wu() {
        for (p, kmax) in [(2, 4), (3, 3), (5, 1)] {
            for k in 1..=kmax {
                for m in 1..=8 {
                    let closed = wu_closed_form(p, k, m).unwrap().unwrap();
                    assert_eq!(closed, crate::symfun::wu_formula(p, k, m).unwrap(), "p={p} k={k} m={m}");
                }
            }
        }
    }

    #[test]
    fn printed_schur_matches_at_p3() {
        for k in 1..=3 {
            for m in schur_printed_min_m(3, k).unwrap()..=8 {
                let mut got = crate::symfun::schur_expansion(3, k, m).unwrap();
                got.retain(|(_, c)| *c != 0);
                got.sort();
                assert_eq!(got, schur_printed(3, k, m).unwrap(), "k={k} m={m}");
            }
        }
    }

    #[test]
    fn printed_schur_at_p5_differs_by_one_misprinted_part() {
        for m in schur_printed_min_m(5, 1).unwrap()..=8 {
            let mut got = crate::symfun::schur_expansion(5, 1, m).unwrap();
            got.retain(|(_, c)| *c != 0);
            let printed = schur_printed(5, 1, m).unwrap();
            let wrong = Partition::from_multiplicities(&[(1, m + 3), (2, 1)]);
            let right = Partition::from_multiplicities(&[(1, m + 2), (2, 1)]);
            let mut fixed: Vec<_> = printed
                .into_iter()
                .map(|(l, c)| if l == wrong { (right.clone(), c) } else { (l, c) })
                .collect();
            fixed.sort();
            got.sort();
            assert_eq!(got, fixed, "m={m}");
        }
    }

    #[test]
    fn e8_5_restricted_generators_match() {
        assert_eq!(e8_5_restricted_mismatches().unwrap(), Vec::<u32>::new());
    }

    #[test]
    fn e8_5_identities_hold_up_to_lower_signs() {
        let repairs = e8_5_power_identity_sign_repairs().unwrap();
        let expected = vec![
            (2, Some(vec![2])),
            (8, Some(vec![2])),
            (14, Some(vec![8, 6])),
            (20, Some(vec![12, 8, 6])),
        ];
        assert_eq!(repairs, expected);
    }
}
