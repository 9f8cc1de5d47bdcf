//! The simplification pipeline: tensor expressions are turned into
//! polynomials in database invariants, reduced by the syzygies up to a
//! level, and rendered back as tensor expressions.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::database::SyzygyDatabase;
use crate::error::{InvarError, Result};
use crate::invariant::{InvariantKind, InvariantMonomial, InvariantPolynomial};
use crate::oracle::ComponentOracle;
use crate::tensor::{
    contract_metric, expand_epsilon_pairs, parse_expression, ricci_to_riemann, riemann_to_ricci, weyl_to_riemann,
    Configuration, MetricContext, TensorKind, TensorMonomial, TensorPolynomial,
};

/// 1 = permutation symmetries, 2 = + cyclic identity, 3 = + dimensionally
/// dependent identities, 4 = + signature identities.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SimplificationLevel(u8);

impl SimplificationLevel {
    pub const PERMUTATION: Self = Self(1);
    pub const CYCLIC: Self = Self(2);
    pub const DIMENSION: Self = Self(3);
    pub const SIGNATURE: Self = Self(4);

    pub fn new(level: u8) -> Result<Self> {
        if (1..=4).contains(&level) {
            Ok(Self(level))
        } else {
            Err(InvarError::Level(level))
        }
    }

    pub fn get(self) -> u8 {
        self.0
    }
}

impl Default for SimplificationLevel {
    fn default() -> Self {
        Self::SIGNATURE
    }
}

impl fmt::Display for SimplificationLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for SimplificationLevel {
    type Err = InvarError;

    fn from_str(s: &str) -> Result<Self> {
        let n: u8 = s.trim().parse().map_err(|_| InvarError::Level(0))?;
        Self::new(n)
    }
}

/// How simplified expressions are written.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum OutputForm {
    /// Database ids, `I[n,r]` and `D[n,r]`.
    Invariants,
    /// Products of Riemann tensors and at most one ε.
    Riemann,
    /// Riemann form with traces written as Ricci and the scalar curvature.
    #[default]
    Ricci,
}

impl FromStr for OutputForm {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "inv" => Ok(Self::Invariants),
            "riemann" => Ok(Self::Riemann),
            "ricci" => Ok(Self::Ricci),
            _ => Err(format!("unknown output form `{s}` (expected inv, riemann or ricci)")),
        }
    }
}

/// A tensor expression split into its database part and the canonicalized
/// monomials beyond the database.
#[derive(Clone, Debug, Default)]
pub struct Conversion {
    pub invariants: InvariantPolynomial,
    pub residual: TensorPolynomial,
    pub warnings: Vec<String>,
}

/// Result of [`Simplifier::riemann_simplify`].
#[derive(Clone, Debug)]
pub struct Simplified {
    pub invariants: InvariantPolynomial,
    /// Riemann form of `invariants` plus the residual monomials.
    pub riemann: TensorPolynomial,
    pub residual: TensorPolynomial,
    pub warnings: Vec<String>,
}

impl Simplified {
    pub fn is_zero(&self) -> bool {
        self.riemann.is_zero()
    }

    pub fn tensor(&self, form: OutputForm) -> TensorPolynomial {
        match form {
            OutputForm::Ricci => tidy(&riemann_to_ricci(&self.riemann)),
            _ => tidy(&self.riemann),
        }
    }

    pub fn render(&self, form: OutputForm) -> String {
        match form {
            OutputForm::Invariants => {
                if self.residual.is_zero() {
                    self.invariants.to_string()
                } else if self.invariants.is_zero() {
                    self.residual.to_string()
                } else {
                    let rest = self.residual.to_string();
                    match rest.strip_prefix('-') {
                        Some(r) => format!("{} - {r}", self.invariants),
                        None => format!("{} + {rest}", self.invariants),
                    }
                }
            }
            _ => self.tensor(form).to_string(),
        }
    }
}

/// Presentation order: scalar curvature, Ricci, Riemann and Weyl, ε last,
/// with dummies renamed in order of appearance.
pub fn tidy(p: &TensorPolynomial) -> TensorPolynomial {
    let rank = |k: TensorKind| match k {
        TensorKind::RicciScalar => 0,
        TensorKind::Ricci => 1,
        TensorKind::Riemann | TensorKind::Weyl => 2,
        TensorKind::Metric => 3,
        TensorKind::Epsilon => 4,
    };
    p.monomials()
        .map(|mut m| {
            m.factors.sort_by_key(|f| rank(f.kind));
            m.normalize_labels();
            m
        })
        .collect()
}

/// Evaluates `a - b` on `trials` random curvature tensors for both signs of
/// the metric determinant; true when every value is exactly zero.
pub fn certify_identity(
    a: &TensorPolynomial,
    b: &TensorPolynomial,
    dimension: u32,
    trials: usize,
    seed: u64,
) -> Result<bool> {
    let mut diff = a.clone();
    diff.add(&b.scale(&-BigRational::one()));
    if diff.is_zero() {
        return Ok(true);
    }
    for t in 0..trials {
        for sigma in [-1i8, 1] {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(t as u64);
            let oracle = ComponentOracle::random(MetricContext { dimension, sigma }, 9, &mut rng)?;
            if !oracle.evaluate(&diff)?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Read-only view of a database that runs the pipeline.
pub struct Simplifier<'a> {
    db: &'a SyzygyDatabase,
}

impl<'a> Simplifier<'a> {
    pub fn new(db: &'a SyzygyDatabase) -> Self {
        Self { db }
    }

    pub fn database(&self) -> &'a SyzygyDatabase {
        self.db
    }

    fn context(&self) -> MetricContext {
        MetricContext {
            dimension: self.db.dimension,
            ..MetricContext::default()
        }
    }

    /// Rewrites metrics, Weyl, Ricci and ε pairs so that every monomial is a
    /// product of Riemann tensors and at most one ε.
    pub fn to_riemann_only(&self, p: &TensorPolynomial) -> Result<TensorPolynomial> {
        let ctx = self.context();
        let p: TensorPolynomial = p.monomials().map(|m| contract_metric(&m, &ctx)).collect();
        let p = if p.monomials().any(|m| m.count(TensorKind::Weyl) > 0) {
            weyl_to_riemann(&p, &ctx)?
        } else {
            p
        };
        let p = ricci_to_riemann(&p);
        let p = expand_epsilon_pairs(&p, &ctx)?;
        Ok(p.monomials().map(|m| contract_metric(&m, &ctx)).collect())
    }

    /// Identifies every monomial with a database invariant. Monomials of a
    /// degree beyond the database are kept canonicalized in `residual`.
    pub fn convert(&self, p: &TensorPolynomial) -> Result<Conversion> {
        let mut out = Conversion::default();
        let canon = self.db.canonicalizer();
        for m in self.to_riemann_only(p)?.monomials() {
            let sigma = m.sigma;
            if m.factors.is_empty() {
                out.invariants
                    .add_term(InvariantMonomial::one().with_sigma(sigma), m.coeff.clone());
                continue;
            }
            let c = Configuration::from_monomial(&m)?;
            let form = canon.canonicalize(&c);
            if form.zero {
                continue;
            }
            let kind = if c.epsilon_count() == 1 {
                InvariantKind::D
            } else {
                InvariantKind::I
            };
            let degree = c.degree() as u16;
            if self.db.transversal(kind, degree).is_none() {
                out.warnings.push(format!(
                    "degree-{degree} {} monomial is beyond the database ({kind} up to degree {}); left canonicalized",
                    if kind == InvariantKind::I { "non-dual" } else { "dual" },
                    self.db.max_degree(kind)
                ));
                let coeff = if form.negative {
                    -m.coeff.clone()
                } else {
                    m.coeff.clone()
                };
                out.residual.add_monomial(form.config.to_monomial(coeff, sigma));
                continue;
            }
            if let Some((neg, id)) = self.db.identify(&c)? {
                let coeff = if neg { -m.coeff.clone() } else { m.coeff.clone() };
                out.invariants
                    .add_term(InvariantMonomial::from_ids(vec![id], sigma), coeff);
            }
        }
        out.warnings.sort();
        out.warnings.dedup();
        Ok(out)
    }

    /// Strict conversion: fails if any monomial lies beyond the database.
    pub fn riemann_to_inv(&self, p: &TensorPolynomial) -> Result<InvariantPolynomial> {
        let conv = self.convert(p)?;
        if let Some(m) = conv.residual.monomials().next() {
            return Err(InvarError::OutOfRange(m.to_string()));
        }
        Ok(conv.invariants)
    }

    /// Riemann expression of an invariant polynomial; products of ids become
    /// products of their configurations.
    pub fn inv_to_riemann(&self, q: &InvariantPolynomial) -> Result<TensorPolynomial> {
        let mut out = TensorPolynomial::zero();
        for (m, c) in q.terms() {
            let parts = m
                .ids()
                .iter()
                .map(|&id| self.db.configuration(id).cloned())
                .collect::<Result<Vec<_>>>()?;
            let mono = if parts.is_empty() {
                TensorMonomial {
                    sigma: m.sigma,
                    ..TensorMonomial::constant(c.clone())
                }
            } else {
                Configuration::concat(&parts).to_monomial(c.clone(), m.sigma)
            };
            out.add_monomial(mono);
        }
        Ok(out)
    }

    /// Normal form of an invariant polynomial at a level.
    pub fn inv_simplify(
        &self,
        q: &InvariantPolynomial,
        level: SimplificationLevel,
    ) -> Result<(InvariantPolynomial, Vec<String>)> {
        self.db.normal_form(q, level.get())
    }

    /// Full pipeline on a tensor polynomial.
    pub fn riemann_simplify(&self, p: &TensorPolynomial, level: SimplificationLevel) -> Result<Simplified> {
        if level.get() > self.db.max_simplification_level() {
            return Err(InvarError::Level(level.get()));
        }
        let conv = self.convert(p)?;
        let (invariants, mut warnings) = self.inv_simplify(&conv.invariants, level)?;
        let mut riemann = self.inv_to_riemann(&invariants)?;
        riemann.add(&conv.residual);
        warnings.extend(conv.warnings);
        Ok(Simplified {
            invariants,
            riemann,
            residual: conv.residual,
            warnings,
        })
    }

    /// Parses and simplifies.
    pub fn simplify_text(&self, text: &str, level: SimplificationLevel) -> Result<Simplified> {
        self.riemann_simplify(&parse_expression(text)?, level)
    }
}
