//! Parsing of ring specifications, pair lists and polynomial files.

use std::fs;
use std::path::Path;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use exhopf::ffpoly::{chern_ring, weight_ring, Polynomial, PrimeField, RingContext};
use exhopf::liedata::{Group, PAIRS};

/// Parses `P:var[:weight],var[:weight],...`. A variable `c<k>` defaults to
/// weight `k`; every other variable to weight 1.
pub fn ring_spec(spec: &str) -> Result<Arc<RingContext>> {
    let (p, vars) = spec.split_once(':').ok_or_else(|| anyhow!("ring spec needs the form P:vars"))?;
    let p: u32 = p.trim().parse().context("ring prime")?;
    let mut out = Vec::new();
    for item in vars.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (name, weight) = match item.split_once(':') {
            Some((n, w)) => (n.to_string(), w.parse::<u32>().with_context(|| format!("weight of {n}"))?),
            None => {
                let w = item.strip_prefix('c').and_then(|k| k.parse().ok()).unwrap_or(1);
                (item.to_string(), w)
            }
        };
        out.push((name, weight));
    }
    if out.is_empty() {
        bail!("ring spec lists no variables");
    }
    Ok(RingContext::new(PrimeField::new(p)?, out)?)
}

/// Parses `G2:2,E8:5`; an empty list means all supported pairs.
pub fn pairs(spec: Option<&str>) -> Result<Vec<(Group, u32)>> {
    let Some(spec) = spec else { return Ok(PAIRS.to_vec()) };
    let mut out = Vec::new();
    for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (g, p) = item.split_once(':').ok_or_else(|| anyhow!("pair {item:?} needs the form G:p"))?;
        let pair = (g.parse::<Group>()?, p.parse::<u32>().with_context(|| format!("prime in {item:?}"))?);
        if !PAIRS.contains(&pair) {
            bail!("unsupported pair {item}");
        }
        if !out.contains(&pair) {
            out.push(pair);
        }
    }
    out.sort_by_key(|pair| PAIRS.iter().position(|q| q == pair));
    Ok(out)
}

/// Non-empty lines of `text` that are not `#` comments.
pub fn poly_lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'))
}

pub fn read_polys(path: &Path, ring: &Arc<RingContext>) -> Result<Vec<Polynomial>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_polys(&text, ring)
}

pub fn parse_polys(text: &str, ring: &Arc<RingContext>) -> Result<Vec<Polynomial>> {
    poly_lines(text)
        .map(|l| Polynomial::parse(l, ring).with_context(|| format!("parsing {l:?}")))
        .collect()
}

/// Ring for a Steenrod computation: `w1..wn` in weight mode, `c2..cn` in
/// Chern mode, with `n` the largest index appearing in `text`.
pub fn infer_ring(text: &str, p: u32, chern: bool) -> Result<Arc<RingContext>> {
    let letter = if chern { 'c' } else { 'w' };
    let mut top = 0u32;
    let chars: Vec<char> = text.chars().collect();
    for (i, &ch) in chars.iter().enumerate() {
        if ch == letter && (i == 0 || !chars[i - 1].is_ascii_alphanumeric()) {
            let digits: String = chars[i + 1..].iter().take_while(|c| c.is_ascii_digit()).collect();
            if let Ok(k) = digits.parse::<u32>() {
                top = top.max(k);
            }
        }
    }
    if chern {
        Ok(chern_ring(p, 2, top.max(2))?)
    } else {
        Ok(weight_ring(p, top.max(1) as usize)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_specs() {
        let r = ring_spec("3:c2,c3,w1:1,z:4").unwrap();
        let w: Vec<u32> = r.vars().iter().map(|v| v.weight).collect();
        assert_eq!(w, vec![2, 3, 1, 4]);
        assert!(ring_spec("3").is_err());
        assert!(ring_spec("4:w1").is_err());
    }

    #[test]
    fn pair_lists() {
        assert_eq!(pairs(Some("E8:5, g2:2")).unwrap(), vec![(Group::G2, 2), (Group::E8, 5)]);
        assert_eq!(pairs(None).unwrap().len(), 10);
        assert!(pairs(Some("G2:3")).is_err());
    }

    #[test]
    fn inferred_rings() {
        let r = infer_ring("w1*w3+w2", 2, false).unwrap();
        assert_eq!(r.nvars(), 3);
        let r = infer_ring("c2*c5", 5, true).unwrap();
        assert_eq!(r.nvars(), 4);
    }
}
