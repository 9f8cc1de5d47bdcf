//! Metric contraction, ε-pair expansion and the Riemann/Ricci/Weyl
//! conversions.
//!
//! Ricci convention: `R_{ab} = R^c_{acb}`.

use std::collections::HashSet;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{Factor, Index, MetricContext, TensorKind, TensorMonomial, TensorPolynomial};
use crate::error::{InvarError, Result};

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Removes metric factors by relabelling the index they contract with;
/// a trace `g^a_a` becomes the dimension.
pub fn contract_metric(m: &TensorMonomial, ctx: &MetricContext) -> TensorMonomial {
    let mut m = m.clone();
    let mut kept: Vec<Factor> = Vec::new();
    while let Some(k) = m.factors.iter().position(|f| f.kind == TensorKind::Metric) {
        let g = m.factors.remove(k);
        let (x, y) = (&g.indices[0], &g.indices[1]);
        if x.label == y.label {
            m.coeff *= q(ctx.dimension as i64);
            continue;
        }
        let mut absorbed = false;
        for (from, to) in [(x, y), (y, x)] {
            let slot = m
                .factors
                .iter_mut()
                .chain(kept.iter_mut())
                .flat_map(|f| f.indices.iter_mut())
                .find(|i| i.label == from.label);
            if let Some(slot) = slot {
                *slot = to.clone();
                absorbed = true;
                break;
            }
        }
        if !absorbed {
            kept.push(g);
        }
    }
    m.factors.extend(kept);
    m.sort_factors();
    m
}

fn contract_metric_poly(p: &TensorPolynomial, ctx: &MetricContext) -> TensorPolynomial {
    p.monomials().map(|m| contract_metric(&m, ctx)).collect()
}

/// Replaces every factor for which `f` returns an expansion by that sum and
/// multiplies out. Labels are shared across factors, so no renaming happens.
fn expand_factors(
    m: &TensorMonomial,
    mut f: impl FnMut(&Factor) -> Option<Vec<(BigRational, Vec<Factor>)>>,
) -> TensorPolynomial {
    let mut partial: Vec<(BigRational, Vec<Factor>)> = vec![(m.coeff.clone(), Vec::new())];
    for factor in &m.factors {
        let choices = f(factor).unwrap_or_else(|| vec![(BigRational::one(), vec![factor.clone()])]);
        let mut next = Vec::with_capacity(partial.len() * choices.len());
        for (c, fs) in &partial {
            for (c2, fs2) in &choices {
                let mut all = fs.clone();
                all.extend(fs2.iter().cloned());
                next.push((c * c2, all));
            }
        }
        partial = next;
    }
    partial
        .into_iter()
        .map(|(coeff, mut factors)| {
            factors.sort_by_key(|f| f.kind);
            TensorMonomial {
                coeff,
                sigma: m.sigma,
                factors,
            }
        })
        .collect()
}

/// Fresh labels not used in `m`.
struct Fresh {
    used: HashSet<String>,
    next: usize,
}

impl Fresh {
    fn new(m: &TensorMonomial) -> Self {
        Self {
            used: m.label_counts().keys().map(|s| s.to_string()).collect(),
            next: 0,
        }
    }

    fn take(&mut self) -> String {
        loop {
            self.next += 1;
            let cand = format!("z{}", self.next);
            if self.used.insert(cand.clone()) {
                return cand;
            }
        }
    }
}

fn internal_pair(f: &Factor) -> Option<(usize, usize)> {
    for i in 0..f.indices.len() {
        for j in i + 1..f.indices.len() {
            if f.indices[i].label == f.indices[j].label {
                return Some((i, j));
            }
        }
    }
    None
}

/// One self-contraction step on a factor: `None` if the factor has no
/// internal contraction, `Some(None)` if it vanishes.
fn trace_factor(f: &Factor) -> Option<Option<(i64, Factor)>> {
    let (i, j) = internal_pair(f)?;
    let idx = &f.indices;
    Some(match f.kind {
        TensorKind::Riemann => {
            let (sign, a, b) = match (i, j) {
                (0, 2) => (1, 1, 3),
                (1, 3) => (1, 0, 2),
                (0, 3) => (-1, 1, 2),
                (1, 2) => (-1, 0, 3),
                _ => return Some(None),
            };
            Some((
                sign,
                Factor::new(TensorKind::Ricci, vec![idx[a].clone(), idx[b].clone()]),
            ))
        }
        TensorKind::Ricci => Some((1, Factor::new(TensorKind::RicciScalar, Vec::new()))),
        TensorKind::Weyl | TensorKind::Epsilon => None,
        TensorKind::Metric | TensorKind::RicciScalar => return None,
    })
}

/// Rewrites self-contracted Riemann factors as Ricci and Ricci traces as the
/// scalar curvature.
pub fn riemann_to_ricci(p: &TensorPolynomial) -> TensorPolynomial {
    let mut out = TensorPolynomial::zero();
    'terms: for mut m in p.monomials() {
        loop {
            let mut changed = false;
            for k in 0..m.factors.len() {
                match trace_factor(&m.factors[k]) {
                    None => {}
                    Some(None) => continue 'terms,
                    Some(Some((sign, f))) => {
                        m.coeff *= q(sign);
                        m.factors[k] = f;
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        m.sort_factors();
        out.add_monomial(m);
    }
    out
}

/// Expresses Ricci and the scalar curvature as traces of Riemann.
pub fn ricci_to_riemann(p: &TensorPolynomial) -> TensorPolynomial {
    p.monomials()
        .map(|m| {
            let mut fresh = Fresh::new(&m);
            let mut m = m.clone();
            for f in &mut m.factors {
                match f.kind {
                    TensorKind::Ricci => {
                        let c = fresh.take();
                        let (x, y) = (f.indices[0].clone(), f.indices[1].clone());
                        *f = Factor::new(TensorKind::Riemann, vec![Index::up(c.clone()), x, Index::down(c), y]);
                    }
                    TensorKind::RicciScalar => {
                        let (c, d) = (fresh.take(), fresh.take());
                        *f = Factor::new(
                            TensorKind::Riemann,
                            vec![
                                Index::up(c.clone()),
                                Index::up(d.clone()),
                                Index::down(c),
                                Index::down(d),
                            ],
                        );
                    }
                    _ => {}
                }
            }
            m.sort_factors();
            m
        })
        .collect()
}

/// The trace part `g∧Ric` and `g∧g` terms of the Weyl decomposition of a
/// rank-4 factor with indices `a b c d`, scaled by `s`:
/// `s/(d-2) (g_ac R_bd - g_ad R_bc - g_bc R_ad + g_bd R_ac)
///  - s R/((d-1)(d-2)) (g_ac g_bd - g_ad g_bc)`.
fn trace_terms(idx: &[Index], s: i64, dim: u32) -> Vec<(BigRational, Vec<Factor>)> {
    let g = |i: usize, j: usize| Factor::new(TensorKind::Metric, vec![idx[i].clone(), idx[j].clone()]);
    let ric = |i: usize, j: usize| Factor::new(TensorKind::Ricci, vec![idx[i].clone(), idx[j].clone()]);
    let scalar = Factor::new(TensorKind::RicciScalar, Vec::new());
    let d = dim as i64;
    let c1 = BigRational::new(s.into(), (d - 2).into());
    let c2 = BigRational::new((-s).into(), ((d - 1) * (d - 2)).into());
    vec![
        (c1.clone(), vec![g(0, 2), ric(1, 3)]),
        (-c1.clone(), vec![g(0, 3), ric(1, 2)]),
        (-c1.clone(), vec![g(1, 2), ric(0, 3)]),
        (c1, vec![g(1, 3), ric(0, 2)]),
        (c2.clone(), vec![g(0, 2), g(1, 3), scalar.clone()]),
        (-c2, vec![g(0, 3), g(1, 2), scalar]),
    ]
}

fn check_dimension(ctx: &MetricContext) -> Result<()> {
    if ctx.dimension < 3 {
        Err(InvarError::Dimension(ctx.dimension))
    } else {
        Ok(())
    }
}

/// `R_abcd = C_abcd + (Ricci and scalar trace terms)`.
pub fn riemann_to_weyl(p: &TensorPolynomial, ctx: &MetricContext) -> Result<TensorPolynomial> {
    check_dimension(ctx)?;
    let expanded = p.flat_map(|m| {
        Ok::<_, InvarError>(expand_factors(&m, |f| {
            (f.kind == TensorKind::Riemann).then(|| {
                let mut v = vec![(
                    BigRational::one(),
                    vec![Factor::new(TensorKind::Weyl, f.indices.clone())],
                )];
                v.extend(trace_terms(&f.indices, 1, ctx.dimension));
                v
            })
        }))
    })?;
    Ok(riemann_to_ricci(&contract_metric_poly(&expanded, ctx)))
}

/// `C_abcd = R_abcd - (Ricci and scalar trace terms)`.
pub fn weyl_to_riemann(p: &TensorPolynomial, ctx: &MetricContext) -> Result<TensorPolynomial> {
    check_dimension(ctx)?;
    let expanded = p.flat_map(|m| {
        Ok::<_, InvarError>(expand_factors(&m, |f| {
            (f.kind == TensorKind::Weyl).then(|| {
                let mut v = vec![(
                    BigRational::one(),
                    vec![Factor::new(TensorKind::Riemann, f.indices.clone())],
                )];
                v.extend(trace_terms(&f.indices, -1, ctx.dimension));
                v
            })
        }))
    })?;
    Ok(riemann_to_ricci(&contract_metric_poly(&expanded, ctx)))
}

/// All permutations of `0..n` with their parity (`true` = odd).
pub(crate) fn permutations(n: usize) -> Vec<(Vec<usize>, bool)> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], odd: bool, out: &mut Vec<(Vec<usize>, bool)>) {
        let n = used.len();
        if prefix.len() == n {
            out.push((prefix.clone(), odd));
            return;
        }
        for x in 0..n {
            if !used[x] {
                // Inversions contributed by placing x after the prefix.
                let inv = prefix.iter().filter(|&&y| y > x).count();
                used[x] = true;
                prefix.push(x);
                rec(prefix, used, odd ^ (inv % 2 == 1), out);
                prefix.pop();
                used[x] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], false, &mut out);
    out
}

/// Replaces pairs of ε factors by `σ` times the determinant of metrics until
/// at most one ε remains.
pub fn expand_epsilon_pairs(p: &TensorPolynomial, ctx: &MetricContext) -> Result<TensorPolynomial> {
    let perms = permutations(4);
    let mut out = TensorPolynomial::zero();
    let mut work: Vec<TensorMonomial> = p.monomials().collect();
    while let Some(m) = work.pop() {
        let eps: Vec<usize> = (0..m.factors.len())
            .filter(|&k| m.factors[k].kind == TensorKind::Epsilon)
            .collect();
        if eps.is_empty() {
            out.add_monomial(m);
            continue;
        }
        if ctx.dimension != 4 {
            return Err(InvarError::Dimension(ctx.dimension));
        }
        if eps.len() == 1 {
            out.add_monomial(m);
            continue;
        }
        let e1 = m.factors[eps[0]].indices.clone();
        let e2 = m.factors[eps[1]].indices.clone();
        let rest: Vec<Factor> = m
            .factors
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != eps[0] && *k != eps[1])
            .map(|(_, f)| f.clone())
            .collect();
        for (pi, odd) in &perms {
            let mut factors = rest.clone();
            for i in 0..4 {
                factors.push(Factor::new(TensorKind::Metric, vec![e1[i].clone(), e2[pi[i]].clone()]));
            }
            let term = TensorMonomial {
                coeff: if *odd { -m.coeff.clone() } else { m.coeff.clone() },
                sigma: !m.sigma,
                factors,
            };
            let term = contract_metric(&term, ctx);
            if !term.coeff.is_zero() {
                work.push(term);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{parse_expression, Canonicalizer};

    fn ctx() -> MetricContext {
        MetricContext::default()
    }

    #[test]
    fn metric_trace_is_dimension() {
        let m = TensorMonomial::new(
            BigRational::one(),
            vec![Factor::new(TensorKind::Metric, vec![Index::up("a"), Index::down("a")])],
        );
        let c = contract_metric(&m, &ctx());
        assert!(c.factors.is_empty());
        assert_eq!(c.coeff, q(4));
    }

    #[test]
    fn metric_chain_collapses() {
        let p = parse_expression("g[a,b]*g[-b,-c]*g[c,d]*R[-a,-d]").unwrap();
        let m = contract_metric(&p.monomials().next().unwrap(), &ctx());
        assert_eq!(m.factors.len(), 1);
        assert_eq!(m.factors[0].kind, TensorKind::Ricci);
        assert_eq!(m.factors[0].indices[0].label, m.factors[0].indices[1].label);
    }

    #[test]
    fn riemann_trace_becomes_scalar() {
        let p = parse_expression("R[a,b,-a,-b]").unwrap();
        assert_eq!(riemann_to_ricci(&p).to_string(), "R");
        let p = parse_expression("R[a,b,-b,-a]").unwrap();
        assert_eq!(riemann_to_ricci(&p).to_string(), "-R");
        let p = parse_expression("R[a,-a,b,-b]").unwrap();
        assert!(riemann_to_ricci(&p).is_zero());
    }

    #[test]
    fn epsilon_square() {
        let p = parse_expression("epsilon[a,b,c,d]*epsilon[-a,-b,-c,-d]").unwrap();
        assert_eq!(expand_epsilon_pairs(&p, &ctx()).unwrap().to_string(), "24*sig");
    }

    #[test]
    fn weyl_square_and_round_trip() {
        let can = Canonicalizer::new();
        let p = parse_expression("C[a,b,c,d]*C[-a,-b,-c,-d]").unwrap();
        let r = can
            .canonicalize_polynomial(&weyl_to_riemann(&p, &ctx()).unwrap())
            .unwrap();
        let expected = parse_expression("R[a,b,c,d]*R[-a,-b,-c,-d] - 2*R[a,b]*R[-a,-b] + 1/3*R*R").unwrap();
        assert_eq!(r, can.canonicalize_polynomial(&expected).unwrap());
        let back = riemann_to_weyl(&r, &ctx()).unwrap();
        let again = weyl_to_riemann(&back, &ctx()).unwrap();
        assert_eq!(can.canonicalize_polynomial(&again).unwrap(), r);
    }

    #[test]
    fn permutation_parities() {
        let perms = permutations(4);
        assert_eq!(perms.len(), 24);
        assert_eq!(perms.iter().filter(|(_, odd)| *odd).count(), 12);
        let (p, odd) = &perms[1];
        assert_eq!(p, &vec![0, 1, 3, 2]);
        assert!(*odd);
    }
}
