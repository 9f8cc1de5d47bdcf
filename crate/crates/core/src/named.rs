//! Named invariants: the 25 independent invariants of dimension 4 under
//! their conventional labels, and the NK basis.
//!
//! Conventional labels such as `I_{3,1}` follow the catalogue numbering,
//! which need not agree with the ranks of a database built here. Labels are
//! resolved by canonicalizing the Riemann expression of each row.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::Signed;

use crate::error::{InvarError, Result};
use crate::invariant::InvariantKind::{D, I};
use crate::invariant::{InvariantId, InvariantKind, InvariantMonomial, InvariantPolynomial};
use crate::simplify::{certify_identity, tidy, SimplificationLevel, Simplifier};
use crate::tensor::{parse_expression, riemann_to_ricci, TensorPolynomial};

/// One catalogued invariant: a Riemann-only expression and the same
/// expression with traces written as Ricci tensors.
#[derive(Clone, Copy, Debug)]
pub struct NamedRow {
    pub label: InvariantId,
    pub riemann: &'static str,
    pub ricci: &'static str,
}

const fn row(kind: InvariantKind, degree: u16, rank: u32, riemann: &'static str, ricci: &'static str) -> NamedRow {
    NamedRow {
        label: InvariantId { degree, kind, rank },
        riemann,
        ricci,
    }
}

/// The independent invariants of dimension 4 up to degree 7 (non-dual) and
/// 5 (dual).
pub const NAMED_BASIS: [NamedRow; 25] = [
    row(I, 1, 1, "R[a,b,-a,-b]", "R"),
    row(I, 2, 1, "R[a,b,-a,c]*R[-b,d,-c,-d]", "R[a,b]*R[-a,-b]"),
    row(I, 2, 2, "R[a,b,c,d]*R[-a,-b,-c,-d]", "R[a,b,c,d]*R[-a,-b,-c,-d]"),
    row(
        D,
        2,
        2,
        "R[a,b,c,d]*R[-a,-b,e,f]*epsilon[-c,-d,-e,-f]",
        "R[a,b,c,d]*R[-a,-b,e,f]*epsilon[-c,-d,-e,-f]",
    ),
    row(
        I,
        3,
        1,
        "R[a,b,-a,c]*R[-b,d,-d,e]*R[-c,f,-e,-f]",
        "-R[a,b]*R[-a,c]*R[-b,-c]",
    ),
    row(
        I,
        3,
        2,
        "R[a,b,-a,c]*R[-b,d,-c,e]*R[-d,f,-e,-f]",
        "R[a,b]*R[c,d]*R[-a,-c,-b,-d]",
    ),
    row(
        D,
        3,
        2,
        "R[a,b,-a,c]*R[-b,d,e,f]*R[-d,g,-g,h]*epsilon[-c,-e,-f,-h]",
        "-R[a,b]*R[c,d]*R[-a,-c,e,f]*epsilon[-b,-d,-e,-f]",
    ),
    row(
        I,
        3,
        5,
        "R[a,b,c,d]*R[-a,-b,e,f]*R[-c,-d,-e,-f]",
        "R[a,b,c,d]*R[-a,-b,e,f]*R[-c,-d,-e,-f]",
    ),
    row(
        D,
        3,
        13,
        "R[a,b,c,d]*R[-a,-b,e,f]*R[-c,-d,g,h]*epsilon[-e,-f,-g,-h]",
        "R[a,b,c,d]*R[-a,-b,e,f]*R[-c,-d,g,h]*epsilon[-e,-f,-g,-h]",
    ),
    row(
        I,
        4,
        1,
        "R[a,b,-a,c]*R[-b,d,-d,e]*R[-c,f,-f,g]*R[-e,h,-g,-h]",
        "R[a,b]*R[-a,c]*R[-b,d]*R[-c,-d]",
    ),
    row(
        I,
        4,
        5,
        "R[a,b,-a,c]*R[-b,d,e,f]*R[-c,g,-e,-f]*R[-d,h,-g,-h]",
        "R[a,b]*R[c,d]*R[-a,-c,e,f]*R[-b,-d,-e,-f]",
    ),
    row(
        I,
        4,
        7,
        "R[a,b,-a,c]*R[-b,d,-c,e]*R[-d,f,-e,g]*R[-f,h,-g,-h]",
        "R[a,b]*R[c,d]*R[-a,e,-b,f]*R[-c,-e,-d,-f]",
    ),
    row(
        D,
        4,
        7,
        "R[a,b,-a,c]*R[-b,d,-c,e]*R[-d,f,g,h]*R[-f,i,-i,j]*epsilon[-e,-g,-h,-j]",
        "-R[a,b]*R[c,d]*R[-a,e,-b,f]*R[-c,-e,g,h]*epsilon[-d,-f,-g,-h]",
    ),
    row(
        I,
        5,
        2,
        "R[a,b,-a,c]*R[-b,d,-c,e]*R[-d,f,-f,g]*R[-e,h,-h,i]*R[-g,j,-i,-j]",
        "R[a,b]*R[-a,c]*R[-b,d]*R[e,f]*R[-c,-e,-d,-f]",
    ),
    row(
        D,
        5,
        2,
        "R[a,b,-a,c]*R[-b,d,-d,e]*R[-c,f,-f,g]*R[-e,h,i,j]*R[-h,k,-k,l]*epsilon[-g,-i,-j,-l]",
        "-R[a,b]*R[-a,c]*R[-b,d]*R[e,f]*R[-c,-e,g,h]*epsilon[-d,-f,-g,-h]",
    ),
    row(
        I,
        5,
        8,
        "R[a,b,-a,c]*R[-b,d,-c,e]*R[-d,f,-e,g]*R[-f,h,-h,i]*R[-g,j,-i,-j]",
        "-R[a,b]*R[-a,c]*R[d,e]*R[-b,f,-c,g]*R[-d,-f,-e,-g]",
    ),
    row(
        I,
        5,
        33,
        "R[a,b,-a,c]*R[-b,d,-c,e]*R[-d,f,g,h]*R[-e,i,-g,-h]*R[-f,j,-i,-j]",
        "R[a,b]*R[c,d]*R[-a,e,-b,f]*R[-c,-e,g,h]*R[-d,-f,-g,-h]",
    ),
    row(
        D,
        5,
        76,
        "R[a,b,-a,c]*R[-b,d,-c,e]*R[-d,f,-e,g]*R[-f,h,i,j]*R[-h,k,-k,l]*epsilon[-g,-i,-j,-l]",
        "-R[a,b]*R[c,d]*R[-a,e,-b,f]*R[-c,g,h,i]*R[-e,-g,-f,j]*epsilon[-d,-h,-i,-j]",
    ),
    row(
        I,
        6,
        6,
        "R[a,b,-a,c]*R[-b,d,-d,e]*R[-c,f,-f,g]*R[-e,h,i,j]*R[-g,k,-i,-j]*R[-h,l,-k,-l]",
        "R[a,b]*R[-a,c]*R[-b,d]*R[e,f]*R[-c,-e,g,h]*R[-d,-f,-g,-h]",
    ),
    row(
        I,
        6,
        8,
        "R[a,b,-a,c]*R[-b,d,-c,e]*R[-d,f,-e,g]*R[-f,h,-h,i]*R[-g,j,-j,k]*R[-i,l,-k,-l]",
        "R[a,b]*R[-a,c]*R[-b,d]*R[e,f]*R[-c,g,-d,h]*R[-e,-g,-f,-h]",
    ),
    row(
        I,
        6,
        47,
        "R[a,b,-a,c]*R[-b,d,-d,e]*R[-c,f,-e,g]*R[-f,h,i,j]*R[-g,k,-i,-j]*R[-h,l,-k,-l]",
        "-R[a,b]*R[-a,c]*R[d,e]*R[-b,f,-c,g]*R[-d,-f,h,i]*R[-e,-g,-h,-i]",
    ),
    row(
        I,
        6,
        242,
        "R[a,b,-a,c]*R[-b,d,-c,e]*R[-d,f,g,h]*R[-e,i,-g,-h]*R[-f,j,-i,k]*R[-j,l,-k,-l]",
        "R[a,b]*R[c,d]*R[-a,e,-b,f]*R[-c,g,-d,h]*R[-e,-g,i,j]*R[-f,-h,-i,-j]",
    ),
    row(
        I,
        7,
        14,
        "R[a,b,-a,c]*R[-b,d,-d,e]*R[-c,f,-e,g]*R[-f,h,-g,i]*R[-h,j,-j,k]*R[-i,l,-l,m]*R[-k,n,-m,-n]",
        "-R[a,b]*R[-a,c]*R[-b,d]*R[e,f]*R[-e,g]*R[-c,h,-d,i]*R[-f,-h,-g,-i]",
    ),
    row(
        I,
        7,
        55,
        "R[a,b,-a,c]*R[-b,d,-d,e]*R[-c,f,-f,g]*R[-e,h,-g,i]*R[-h,j,k,l]*R[-i,m,-k,-l]*R[-j,n,-m,-n]",
        "R[a,b]*R[-a,c]*R[-b,d]*R[e,f]*R[-c,g,-d,h]*R[-e,-g,i,j]*R[-f,-h,-i,-j]",
    ),
    row(
        I,
        7,
        391,
        "R[a,b,-a,c]*R[-b,d,-c,e]*R[-d,f,g,h]*R[-e,i,-g,-h]*R[-f,j,-i,k]*R[-j,l,-l,m]*R[-k,n,-m,-n]",
        "-R[a,b]*R[-a,c]*R[d,e]*R[-b,f,-c,g]*R[-d,h,-e,i]*R[-f,-h,j,k]*R[-g,-i,-j,-k]",
    ),
];

/// A catalogued row resolved against a database.
#[derive(Clone, Debug)]
pub struct ResolvedRow {
    pub row: NamedRow,
    /// Signed database invariant of the Riemann expression.
    pub riemann: InvariantPolynomial,
    /// Signed database invariant of the Ricci expression.
    pub ricci: InvariantPolynomial,
}

impl ResolvedRow {
    /// Database id, if the Riemann expression is a single invariant.
    pub fn id(&self) -> Option<InvariantId> {
        let (m, _) = self.riemann.terms().next()?;
        (self.riemann.len() == 1).then(|| m.as_single()).flatten()
    }

    /// Both expressions give the same signed invariant.
    pub fn consistent(&self) -> bool {
        !self.riemann.is_zero() && self.riemann == self.ricci
    }
}

/// Resolves every catalogued row whose degree fits the database.
pub fn resolve_named(s: &Simplifier) -> Result<Vec<ResolvedRow>> {
    let db = s.database();
    let mut out = Vec::new();
    for row in NAMED_BASIS {
        if row.label.degree > db.max_degree(row.label.kind) {
            continue;
        }
        out.push(ResolvedRow {
            row,
            riemann: s.riemann_to_inv(&parse_expression(row.riemann)?)?,
            ricci: s.riemann_to_inv(&parse_expression(row.ricci)?)?,
        });
    }
    Ok(out)
}

/// Rewrites a polynomial written in conventional labels into database ids.
pub fn relabel(p: &InvariantPolynomial, rows: &[ResolvedRow]) -> Result<InvariantPolynomial> {
    let map: BTreeMap<InvariantId, &InvariantPolynomial> = rows.iter().map(|r| (r.row.label, &r.riemann)).collect();
    let mut out = InvariantPolynomial::zero();
    for (m, c) in p.terms() {
        let mut acc = InvariantPolynomial::term(InvariantMonomial::one().with_sigma(m.sigma), c.clone());
        for id in m.ids() {
            let image = map
                .get(id)
                .ok_or_else(|| InvarError::OutOfRange(format!("label {id}")))?;
            acc = acc.mul(image);
        }
        out.add(&acc);
    }
    Ok(out)
}

/// One element of the computed basis.
#[derive(Clone, Debug)]
pub struct BasisEntry {
    pub id: InvariantId,
    pub riemann: TensorPolynomial,
    pub ricci: TensorPolynomial,
    /// Conventional label with the relative sign, when one resolves to `id`.
    pub label: Option<(bool, InvariantId)>,
}

/// Connected invariants that survive all relations, degree by degree, with
/// their Riemann and Ricci forms.
pub fn independent_basis_table(s: &Simplifier) -> Result<Vec<BasisEntry>> {
    let db = s.database();
    let level = db.max_simplification_level();
    let named = resolve_named(s)?;
    let mut out = Vec::new();
    for kind in [I, D] {
        for n in 1..=db.max_degree(kind) {
            for id in db.atoms(kind, n) {
                let unit = InvariantPolynomial::id(id);
                let (nf, _) = db.normal_form(&unit, level)?;
                if nf != unit {
                    continue;
                }
                let riemann = s.inv_to_riemann(&unit)?;
                let label = named.iter().find(|r| r.id() == Some(id)).map(|r| {
                    let (_, c) = r.riemann.terms().next().unwrap();
                    (c.is_negative(), r.row.label)
                });
                out.push(BasisEntry {
                    id,
                    ricci: tidy(&riemann_to_ricci(&riemann)),
                    riemann: tidy(&riemann),
                    label,
                });
            }
        }
    }
    out.sort_by_key(|e| (e.id.degree, e.id.kind, e.id.rank));
    Ok(out)
}

/// The fourteen NK invariants.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NkName {
    I1,
    I2,
    I3,
    I4,
    J1,
    J2,
    J3,
    J4,
    K1,
    K2,
    K3,
    K4,
    K5,
    K6,
}

impl NkName {
    pub const ALL: [NkName; 14] = [
        NkName::I1,
        NkName::I2,
        NkName::I3,
        NkName::I4,
        NkName::J1,
        NkName::J2,
        NkName::J3,
        NkName::J4,
        NkName::K1,
        NkName::K2,
        NkName::K3,
        NkName::K4,
        NkName::K5,
        NkName::K6,
    ];

    /// Degree in the curvature.
    pub fn degree(self) -> u16 {
        use NkName::*;
        match self {
            I1 => 1,
            I2 | J1 => 2,
            I3 | J2 | K1 => 3,
            I4 | J3 | K2 => 4,
            J4 | K3 | K4 => 5,
            K5 => 6,
            K6 => 7,
        }
    }

    /// Defining expression in Ricci and Weyl tensors.
    pub fn definition(self) -> &'static str {
        use NkName::*;
        match self {
            I1 => "R",
            I2 => "R[a,b]*R[-a,-b]",
            I3 => "R[a,b]*R[-a,c]*R[-b,-c]",
            I4 => "R[a,b]*R[-a,c]*R[-b,d]*R[-c,-d]",
            J1 => "W[a,b,c,d]*W[-a,-b,-c,-d]",
            J2 => "W[a,b,c,d]*W[-a,-b,e,f]*W[-c,-d,-e,-f]",
            J3 => {
                "W[a,b,c,d]*W[-a,-b,e,f]*W[-c,-d,g,h]*W[-e,-f,-g,-h] \
                 - 1/4*W[a,b,c,d]*W[-a,-b,-c,-d]*W[e,f,g,h]*W[-e,-f,-g,-h]"
            }
            J4 => {
                "W[a,b,c,d]*W[e,f,g,h]*W[-a,-b,-e,-f]*W[-c,-d,i,j]*W[-g,-h,-i,-j] \
                 - 5/12*W[a,b,c,d]*W[-a,-b,-c,-d]*W[e,f,g,h]*W[-e,-f,i,j]*W[-g,-h,-i,-j]"
            }
            K1 => "R[a,b]*R[c,d]*W[-a,-c,-b,-d]",
            K2 => "R[a,b]*R[c,d]*W[-a,-c,e,f]*W[-b,-d,-e,-f]",
            K3 => {
                "R[a,b]*R[c,d]*W[-a,-c,e,f]*W[-b,-d,g,h]*W[-e,-f,-g,-h] \
                 - 1/4*W[i,j,k,l]*W[-i,-j,-k,-l]*R[a,b]*R[c,d]*W[-a,-c,-b,-d] \
                 + 1/12*(R[m,n]*R[-m,-n] - R*R)*W[a,b,c,d]*W[-a,-b,e,f]*W[-c,-d,-e,-f]"
            }
            K4 => "R[a,b]*R[-a,c]*R[d,e]*R[-d,f]*W[-b,-e,-c,-f]",
            K5 => "R[a,b]*R[-a,c]*R[d,e]*R[-d,f]*W[-b,-e,g,h]*W[-c,-f,-g,-h]",
            K6 => {
                "R[a,b]*R[-a,c]*R[d,e]*R[-d,f]*W[-b,-e,g,h]*W[-c,-f,i,j]*W[-g,-h,-i,-j] \
                 - 1/4*W[k,l,m,n]*W[-k,-l,-m,-n]*R[a,b]*R[-a,c]*R[d,e]*R[-d,f]*W[-b,-e,-c,-f] \
                 + 1/12*(R[o,p]*R[-o,q]*R[-p,r]*R[-q,-r] - R[o,p]*R[-o,-p]*R[q,r]*R[-q,-r])\
                 *W[a,b,c,d]*W[-a,-b,e,f]*W[-c,-d,-e,-f]"
            }
        }
    }

    /// Reference expansion in conventional labels. Kept for comparison only;
    /// expansions are always recomputed.
    pub fn reference_expansion(self) -> &'static str {
        use NkName::*;
        match self {
            I1 => "I[1,1]",
            I2 => "I[2,1]",
            I3 => "-I[3,1]",
            I4 => "I[4,1]",
            J1 => "I[2,2] - 2*I[2,1] + 1/3*I[1,1]*I[1,1]",
            J2 => {
                "I[3,5] - 6*I[3,2] + 6*I[3,1] - 1/2*I[1,1]*I[2,1] + 7*I[1,1]*I[2,1] \
                 - 17/18*I[1,1]*I[1,1]*I[1,1]"
            }
            J3 => "1/16*sig*D[2,2]*D[2,2]",
            J4 => {
                "5/48*sig*D[2,2]*D[3,13] + 5/24*sig*D[2,2]*D[3,2] \
                 - 5/96*sig*D[2,2]*D[2,2]*I[1,1]"
            }
            K1 => "I[3,2] - I[3,1] - 7/6*I[1,1]*I[2,1] + 1/6*I[1,1]*I[1,1]*I[1,1]",
            K2 => {
                "I[4,5] + 2*I[4,1] - 4/3*I[1,1]*I[3,2] - 3*I[1,1]*I[3,1] - I[2,1]*I[2,1] \
                 + 41/18*I[1,1]*I[1,1]*I[2,1] - 5/18*I[1,1]*I[1,1]*I[1,1]*I[1,1]"
            }
            K3 => "-1/16*sig*D[2,2]*D[3,2]",
            K4 => {
                "-2*I[5,2] - 7/6*I[1,1]*I[4,1] + 1/2*I[2,1]*I[3,2] + 1/2*I[1,1]*I[1,1]*I[3,2] \
                 - 1/6*I[2,1]*I[3,1] + 11/6*I[1,1]*I[1,1]*I[3,1] + 2/3*I[1,1]*I[2,1]*I[2,1] \
                 - 4/3*I[1,1]*I[1,1]*I[1,1]*I[2,1] + 1/6*I[1,1]*I[1,1]*I[1,1]*I[1,1]*I[1,1]"
            }
            K5 => {
                "-2*I[6,6] - 4/3*I[1,1]*I[5,2] + 1/2*I[2,1]*I[4,5] + 1/2*I[1,1]*I[1,1]*I[4,5] \
                 + 1/2*I[2,1]*I[4,1] - 1/4*I[2,2]*I[4,1] - 13/18*I[1,1]*I[1,1]*I[4,1] \
                 - 13/18*I[1,1]*I[1,1]*I[1,1]*I[3,1] + 1/3*I[1,1]*I[2,1]*I[3,2] \
                 - 1/3*I[1,1]*I[1,1]*I[1,1]*I[3,2] - 2/3*I[3,1]*I[3,2] + 1/3*I[3,1]*I[3,1] \
                 - 1/6*I[1,1]*I[2,2]*I[3,1] + 7/9*I[1,1]*I[2,1]*I[3,1] + 1/8*I[2,1]*I[2,1]*I[2,2] \
                 - 1/24*I[1,1]*I[1,1]*I[1,1]*I[1,1]*I[2,2] - 1/4*I[2,1]*I[2,1]*I[2,1] \
                 + 7/18*I[1,1]*I[1,1]*I[2,1]*I[2,1] + 1/36*I[1,1]*I[1,1]*I[1,1]*I[1,1]*I[1,1]*I[1,1] \
                 - 2/9*I[1,1]*I[1,1]*I[1,1]*I[1,1]*I[2,1]"
            }
            K6 => {
                "1/8*sig*D[2,2]*D[5,2] - 1/32*sig*D[2,2]*D[3,2]*I[1,1]*I[1,1] \
                 - 1/32*sig*D[2,2]*D[3,2]*I[2,1]"
            }
        }
    }
}

impl fmt::Display for NkName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for NkName {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        NkName::ALL
            .into_iter()
            .find(|n| n.to_string().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| format!("unknown invariant `{s}` (expected I1..I4, J1..J4, K1..K6)"))
    }
}

/// Computed expansion of an NK invariant.
#[derive(Clone, Debug)]
pub struct NkExpansion {
    pub name: NkName,
    /// Normal form of the defining expression in database ids.
    pub expansion: InvariantPolynomial,
    /// Reference expansion mapped to database ids and reduced, when all its
    /// labels fit the database.
    pub reference: Option<InvariantPolynomial>,
}

impl NkExpansion {
    /// `expansion - reference`, zero when they agree.
    pub fn discrepancy(&self) -> Option<InvariantPolynomial> {
        self.reference.as_ref().map(|r| self.expansion.sub(r))
    }

    /// Checks the expansion against the defining expression on random
    /// curvature tensors.
    pub fn certify(&self, s: &Simplifier, trials: usize, seed: u64) -> Result<bool> {
        self.certify_polynomial(s, &self.expansion, trials, seed)
    }

    /// Same check for the reference expansion; `None` when it does not fit
    /// the database.
    pub fn certify_reference(&self, s: &Simplifier, trials: usize, seed: u64) -> Result<Option<bool>> {
        self.reference
            .as_ref()
            .map(|r| self.certify_polynomial(s, r, trials, seed))
            .transpose()
    }

    fn certify_polynomial(&self, s: &Simplifier, p: &InvariantPolynomial, trials: usize, seed: u64) -> Result<bool> {
        let definition = parse_expression(self.name.definition())?;
        certify_identity(&definition, &s.inv_to_riemann(p)?, s.database().dimension, trials, seed)
    }
}

/// Runs the defining expression through the pipeline at the highest level
/// of the database.
pub fn nk_expand(s: &Simplifier, name: NkName) -> Result<NkExpansion> {
    let db = s.database();
    if name.degree() > db.max_degree(I) {
        return Err(InvarError::OutOfRange(format!("{name} (degree {})", name.degree())));
    }
    let level = SimplificationLevel::new(db.max_simplification_level())?;
    let inv = s.riemann_to_inv(&parse_expression(name.definition())?)?;
    let (expansion, _) = s.inv_simplify(&inv, level)?;
    let rows = resolve_named(s)?;
    let listed: InvariantPolynomial = name.reference_expansion().parse()?;
    let reference = match relabel(&listed, &rows) {
        Ok(p) => Some(s.inv_simplify(&p, level)?.0),
        Err(InvarError::OutOfRange(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(NkExpansion {
        name,
        expansion,
        reference,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::small_db;

    #[test]
    fn named_rows_agree_in_both_columns() {
        let s = Simplifier::new(small_db());
        let rows = resolve_named(&s).unwrap();
        assert_eq!(rows.len(), 7);
        for r in &rows {
            assert!(r.consistent(), "{}", r.row.label);
            assert!(r.id().is_some());
        }
    }

    #[test]
    fn computed_basis_spans_the_named_rows() {
        let s = Simplifier::new(small_db());
        let table = independent_basis_table(&s).unwrap();
        assert_eq!(table.len(), 7);
        assert_eq!(table.iter().filter(|e| e.id.kind == D).count(), 1);
        for e in &table {
            let back = s.riemann_to_inv(&e.ricci).unwrap();
            assert_eq!(back, InvariantPolynomial::id(e.id));
        }
    }

    #[test]
    fn low_degree_expansions_certify() {
        let s = Simplifier::new(small_db());
        for name in [NkName::I1, NkName::I2, NkName::I3, NkName::J1, NkName::J2, NkName::K1] {
            let e = nk_expand(&s, name).unwrap();
            assert!(e.certify(&s, 2, 3).unwrap(), "{name}");
        }
        assert!(matches!(nk_expand(&s, NkName::K2), Err(InvarError::OutOfRange(_))));
    }

    #[test]
    fn reference_j2_has_a_wrong_term() {
        let s = Simplifier::new(small_db());
        let e = nk_expand(&s, NkName::J2).unwrap();
        assert_eq!(e.certify_reference(&s, 2, 3).unwrap(), Some(false));
        let rows = resolve_named(&s).unwrap();
        let corrected: InvariantPolynomial = "I[3,5] - 6*I[3,2] + 6*I[3,1] - 1/2*I[1,1]*I[2,2] \
             + 7*I[1,1]*I[2,1] - 17/18*I[1,1]*I[1,1]*I[1,1]"
            .parse()
            .unwrap();
        let corrected = relabel(&corrected, &rows).unwrap();
        let level = SimplificationLevel::SIGNATURE;
        assert_eq!(s.inv_simplify(&corrected, level).unwrap().0, e.expansion);
    }

    #[test]
    fn names_parse() {
        assert_eq!("k3".parse::<NkName>().unwrap(), NkName::K3);
        assert!("K7".parse::<NkName>().is_err());
        assert_eq!(NkName::ALL.len(), 14);
    }
}
