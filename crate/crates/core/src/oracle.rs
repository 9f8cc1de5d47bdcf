//! Numerical oracle: evaluates scalar contractions on random integer
//! curvature tensors in an orthonormal frame.
//!
//! A random pair-symmetric bivector matrix `B` is projected onto the space of
//! algebraic curvature tensors, `R' = 3B − (B_abcd + B_acdb + B_adbc)`, which
//! keeps every component an integer; the true tensor is `R'/3`. Ricci, scalar
//! curvature and Weyl components are derived from it with their own integer
//! scale factors, and contractions are carried out in `i128` with overflow
//! checks. Results are exact rationals.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

use crate::error::{InvarError, Result};
use crate::tensor::{Configuration, MetricContext, TensorKind, TensorMonomial, TensorPolynomial};

/// Dense all-lower-index component array over its open labels.
#[derive(Clone, Debug)]
struct Dense {
    labels: Vec<usize>,
    data: Vec<i128>,
}

/// A scalar contraction network: each factor lists one label per slot and
/// every label occurs exactly twice.
#[derive(Clone, Debug)]
pub struct Network {
    pub factors: Vec<(TensorKind, Vec<usize>)>,
    pub labels: usize,
}

impl Network {
    pub fn from_configuration(c: &Configuration) -> Self {
        let mut factors = Vec::with_capacity(c.kinds.len());
        let mut slot = 0;
        for &k in &c.kinds {
            let labels = c.names[slot..slot + k.rank()]
                .iter()
                .map(|&x| (x / 2) as usize)
                .collect();
            factors.push((k, labels));
            slot += k.rank();
        }
        Self {
            factors,
            labels: c.names.len() / 2,
        }
    }

    pub fn from_monomial(m: &TensorMonomial) -> Result<Self> {
        let mut ids: HashMap<&str, usize> = HashMap::new();
        let mut counts: Vec<usize> = Vec::new();
        let mut factors = Vec::with_capacity(m.factors.len());
        for f in &m.factors {
            let mut labels = Vec::with_capacity(f.indices.len());
            for i in &f.indices {
                let next = ids.len();
                let id = *ids.entry(i.label.as_str()).or_insert(next);
                if id == counts.len() {
                    counts.push(0);
                }
                counts[id] += 1;
                labels.push(id);
            }
            factors.push((f.kind, labels));
        }
        if let Some((label, _)) = ids.iter().find(|(_, &id)| counts[id] != 2) {
            return Err(InvarError::FreeIndex(label.to_string()));
        }
        Ok(Self {
            factors,
            labels: ids.len(),
        })
    }
}

/// Random curvature data in a fixed frame.
#[derive(Clone, Debug)]
pub struct ComponentOracle {
    ctx: MetricContext,
    d: usize,
    eta: Vec<i128>,
    riemann: Vec<i128>,
    weyl: Vec<i128>,
    ricci: Vec<i128>,
    scalar: i128,
    epsilon: Vec<i128>,
    metric: Vec<i128>,
}

impl ComponentOracle {
    /// Random curvature with bivector-matrix entries in `[-bound, bound]`.
    pub fn random<R: Rng + ?Sized>(ctx: MetricContext, bound: i64, rng: &mut R) -> Result<Self> {
        let d = ctx.dimension as usize;
        if !(2..=8).contains(&d) {
            return Err(InvarError::Dimension(ctx.dimension));
        }
        let pairs: Vec<(usize, usize)> = (0..d).flat_map(|a| (a + 1..d).map(move |b| (a, b))).collect();
        let np = pairs.len();
        let mut m = vec![0i128; np * np];
        for i in 0..np {
            for j in i..np {
                let v = rng.gen_range(-bound..=bound) as i128;
                m[i * np + j] = v;
                m[j * np + i] = v;
            }
        }
        let pair_index = |a: usize, b: usize| -> Option<(usize, i128)> {
            if a == b {
                return None;
            }
            let (x, y, s) = if a < b { (a, b, 1) } else { (b, a, -1) };
            pairs.iter().position(|&p| p == (x, y)).map(|k| (k, s))
        };
        let idx4 = |a: usize, b: usize, c: usize, e: usize| ((a * d + b) * d + c) * d + e;
        let mut bt = vec![0i128; d.pow(4)];
        for a in 0..d {
            for b in 0..d {
                for c in 0..d {
                    for e in 0..d {
                        if let (Some((i, s)), Some((j, t))) = (pair_index(a, b), pair_index(c, e)) {
                            bt[idx4(a, b, c, e)] = s * t * m[i * np + j];
                        }
                    }
                }
            }
        }
        let mut riemann = vec![0i128; d.pow(4)];
        for a in 0..d {
            for b in 0..d {
                for c in 0..d {
                    for e in 0..d {
                        riemann[idx4(a, b, c, e)] = 3 * bt[idx4(a, b, c, e)]
                            - (bt[idx4(a, b, c, e)] + bt[idx4(a, c, e, b)] + bt[idx4(a, e, b, c)]);
                    }
                }
            }
        }
        let eta: Vec<i128> = (0..d).map(|i| if ctx.sigma < 0 && i == 0 { -1 } else { 1 }).collect();
        let mut ricci = vec![0i128; d * d];
        for a in 0..d {
            for b in 0..d {
                ricci[a * d + b] = (0..d).map(|c| eta[c] * riemann[idx4(c, a, c, b)]).sum();
            }
        }
        let scalar: i128 = (0..d).map(|a| eta[a] * ricci[a * d + a]).sum();
        let metric: Vec<i128> = (0..d * d)
            .map(|k| if k / d == k % d { eta[k / d] } else { 0 })
            .collect();
        let mut weyl = vec![0i128; d.pow(4)];
        if d >= 3 {
            let (d1, d2) = ((d - 1) as i128, (d - 2) as i128);
            let g = |a: usize, b: usize| metric[a * d + b];
            let ric = |a: usize, b: usize| ricci[a * d + b];
            for a in 0..d {
                for b in 0..d {
                    for c in 0..d {
                        for e in 0..d {
                            weyl[idx4(a, b, c, e)] = d1 * d2 * riemann[idx4(a, b, c, e)]
                                - d1 * (g(a, c) * ric(b, e) - g(a, e) * ric(b, c) - g(b, c) * ric(a, e)
                                    + g(b, e) * ric(a, c))
                                + scalar * (g(a, c) * g(b, e) - g(a, e) * g(b, c));
                        }
                    }
                }
            }
        }
        let mut epsilon = vec![0i128; d.pow(4)];
        if d == 4 {
            for (perm, odd) in crate::tensor::permutations(4) {
                epsilon[idx4(perm[0], perm[1], perm[2], perm[3])] = if odd { -1 } else { 1 };
            }
        }
        Ok(Self {
            ctx,
            d,
            eta,
            riemann,
            weyl,
            ricci,
            scalar,
            epsilon,
            metric,
        })
    }

    pub fn context(&self) -> MetricContext {
        self.ctx
    }

    /// Metric component g_{ab}.
    pub fn metric_component(&self, a: usize, b: usize) -> i128 {
        self.metric[a * self.d + b]
    }

    /// Levi-Civita component with all indices down, or all up when `upper`.
    pub fn epsilon_component(&self, idx: [usize; 4], upper: bool) -> Result<i128> {
        let comps = self.components(TensorKind::Epsilon)?;
        let d = self.d;
        let v = comps[((idx[0] * d + idx[1]) * d + idx[2]) * d + idx[3]];
        Ok(if upper {
            v * idx.iter().map(|&i| self.eta[i]).product::<i128>()
        } else {
            v
        })
    }

    /// Integer scale of the stored components relative to the true ones.
    fn scale(&self, kind: TensorKind) -> i64 {
        let d = self.d as i64;
        match kind {
            TensorKind::Riemann | TensorKind::Ricci | TensorKind::RicciScalar => 3,
            TensorKind::Weyl => 3 * (d - 1) * (d - 2),
            TensorKind::Epsilon | TensorKind::Metric => 1,
        }
    }

    fn components(&self, kind: TensorKind) -> Result<&[i128]> {
        Ok(match kind {
            TensorKind::Riemann => &self.riemann,
            TensorKind::Weyl => {
                if self.d < 3 {
                    return Err(InvarError::Dimension(self.ctx.dimension));
                }
                &self.weyl
            }
            TensorKind::Ricci => &self.ricci,
            TensorKind::RicciScalar => std::slice::from_ref(&self.scalar),
            TensorKind::Epsilon => {
                if self.d != 4 {
                    return Err(InvarError::Dimension(self.ctx.dimension));
                }
                &self.epsilon
            }
            TensorKind::Metric => &self.metric,
        })
    }

    /// Dense tensor of one factor with internal traces already taken.
    fn factor_tensor(&self, kind: TensorKind, labels: &[usize]) -> Result<Dense> {
        let comps = self.components(kind)?;
        let d = self.d;
        let mut open: Vec<usize> = Vec::new();
        for &l in labels {
            if labels.iter().filter(|&&x| x == l).count() == 1 && !open.contains(&l) {
                open.push(l);
            }
        }
        let traced: Vec<usize> = {
            let mut t: Vec<usize> = labels.iter().copied().filter(|l| !open.contains(l)).collect();
            t.sort_unstable();
            t.dedup();
            t
        };
        let size = d.pow(open.len() as u32);
        let tsize = d.pow(traced.len() as u32);
        let mut data = vec![0i128; size];
        let mut value_of = vec![0usize; labels.iter().max().map_or(0, |m| m + 1)];
        for (oi, slot) in data.iter_mut().enumerate() {
            decode(oi, d, &open, &mut value_of);
            let mut acc = 0i128;
            for ti in 0..tsize {
                decode(ti, d, &traced, &mut value_of);
                let w: i128 = traced.iter().map(|&l| self.eta[value_of[l]]).product();
                let lin = labels.iter().fold(0usize, |acc, &l| acc * d + value_of[l]);
                acc = acc.checked_add(w * comps[lin]).ok_or(InvarError::Overflow)?;
            }
            *slot = acc;
        }
        Ok(Dense { labels: open, data })
    }

    fn contract(&self, a: &Dense, b: &Dense) -> Result<Dense> {
        let d = self.d;
        let shared: Vec<usize> = a.labels.iter().copied().filter(|l| b.labels.contains(l)).collect();
        let out: Vec<usize> = a
            .labels
            .iter()
            .chain(b.labels.iter())
            .copied()
            .filter(|l| !shared.contains(l))
            .collect();
        let nlabels = a.labels.iter().chain(b.labels.iter()).max().map_or(0, |m| m + 1);
        let mut value_of = vec![0usize; nlabels];
        let ssize = d.pow(shared.len() as u32);
        let mut data = vec![0i128; d.pow(out.len() as u32)];
        let lin = |t: &Dense, v: &[usize]| t.labels.iter().fold(0usize, |acc, &l| acc * d + v[l]);
        for (oi, slot) in data.iter_mut().enumerate() {
            decode(oi, d, &out, &mut value_of);
            let mut acc = 0i128;
            for si in 0..ssize {
                decode(si, d, &shared, &mut value_of);
                let x = a.data[lin(a, &value_of)];
                if x == 0 {
                    continue;
                }
                let y = b.data[lin(b, &value_of)];
                if y == 0 {
                    continue;
                }
                let w: i128 = shared.iter().map(|&l| self.eta[value_of[l]]).product();
                let t = x.checked_mul(y).ok_or(InvarError::Overflow)?;
                acc = acc.checked_add(w * t).ok_or(InvarError::Overflow)?;
            }
            *slot = acc;
        }
        Ok(Dense { labels: out, data })
    }

    /// Integer value of a network on the stored (scaled) components.
    fn network_value(&self, net: &Network) -> Result<i128> {
        let mut pool: Vec<Dense> = net
            .factors
            .iter()
            .map(|(k, l)| self.factor_tensor(*k, l))
            .collect::<Result<_>>()?;
        let mut scalar = 1i128;
        loop {
            let mut k = 0;
            while k < pool.len() {
                if pool[k].labels.is_empty() {
                    scalar = scalar.checked_mul(pool[k].data[0]).ok_or(InvarError::Overflow)?;
                    pool.swap_remove(k);
                } else {
                    k += 1;
                }
            }
            if pool.is_empty() || scalar == 0 {
                return Ok(if pool.is_empty() { scalar } else { 0 });
            }
            let mut best: Option<(usize, usize, usize)> = None;
            for i in 0..pool.len() {
                for j in i + 1..pool.len() {
                    let shared = pool[i].labels.iter().filter(|l| pool[j].labels.contains(l)).count();
                    if shared == 0 {
                        continue;
                    }
                    let rank = pool[i].labels.len() + pool[j].labels.len() - 2 * shared;
                    let cost = rank * 8 + (pool[i].labels.len() + pool[j].labels.len());
                    if best.is_none_or(|b| cost < b.2) {
                        best = Some((i, j, cost));
                    }
                }
            }
            let (i, j, _) = best.ok_or_else(|| InvarError::FreeIndex("dangling label".into()))?;
            let b = pool.swap_remove(j);
            let a = pool.swap_remove(i);
            pool.push(self.contract(&a, &b)?);
        }
    }

    fn network_denominator(&self, net: &Network) -> BigInt {
        net.factors
            .iter()
            .fold(BigInt::one(), |acc, (k, _)| acc * BigInt::from(self.scale(*k)))
    }

    /// Exact value of a contraction network.
    pub fn evaluate_network(&self, net: &Network) -> Result<BigRational> {
        let v = self.network_value(net)?;
        Ok(BigRational::new(BigInt::from(v), self.network_denominator(net)))
    }

    /// Exact value by summing over every index assignment. Intended for
    /// small networks.
    pub fn evaluate_network_naive(&self, net: &Network) -> Result<BigRational> {
        let d = self.d;
        let comps: Vec<&[i128]> = net
            .factors
            .iter()
            .map(|(k, _)| self.components(*k))
            .collect::<Result<_>>()?;
        let all: Vec<usize> = (0..net.labels).collect();
        let mut value_of = vec![0usize; net.labels];
        let mut total = 0i128;
        for idx in 0..d.pow(net.labels as u32) {
            decode(idx, d, &all, &mut value_of);
            let mut term: i128 = value_of.iter().map(|&v| self.eta[v]).product();
            for ((_, labels), c) in net.factors.iter().zip(&comps) {
                let lin = labels.iter().fold(0usize, |acc, &l| acc * d + value_of[l]);
                term = term.checked_mul(c[lin]).ok_or(InvarError::Overflow)?;
                if term == 0 {
                    break;
                }
            }
            total = total.checked_add(term).ok_or(InvarError::Overflow)?;
        }
        Ok(BigRational::new(BigInt::from(total), self.network_denominator(net)))
    }

    pub fn evaluate_configuration(&self, c: &Configuration) -> Result<BigRational> {
        self.evaluate_network(&Network::from_configuration(c))
    }

    pub fn evaluate_monomial(&self, m: &TensorMonomial) -> Result<BigRational> {
        let mut v = self.evaluate_network(&Network::from_monomial(m)?)? * &m.coeff;
        if m.sigma && self.ctx.sigma < 0 {
            v = -v;
        }
        Ok(v)
    }

    pub fn evaluate(&self, p: &TensorPolynomial) -> Result<BigRational> {
        p.monomials()
            .try_fold(BigRational::zero(), |acc, m| Ok(acc + self.evaluate_monomial(&m)?))
    }
}

/// Writes the base-`d` digits of `k` into `value_of[labels[..]]`, most
/// significant first.
fn decode(mut k: usize, d: usize, labels: &[usize], value_of: &mut [usize]) {
    for &l in labels.iter().rev() {
        value_of[l] = k % d;
        k /= d;
    }
}
