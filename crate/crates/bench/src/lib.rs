//! Fixtures shared by the benchmarks.

use invar_core::database::SyzygyDatabase;
use invar_core::named::NAMED_BASIS;
use invar_core::relations::BuildOptions;
use invar_core::tensor::{parse_expression, Configuration};

/// Expressions simplified by the pipeline benchmark; all fit a database with
/// non-duals through degree 3 and duals through degree 2.
pub const SIMPLIFY_INPUTS: [&str; 4] = [
    "R[a,b,c,d]*R[-a,-c,-b,-d] - 1/2*R[a,b,c,d]*R[-a,-b,-c,-d]",
    "R[a,b]*R[-b,c]*R[-c,-a] + R[a,b,c,d]*R[-a,-b,e,f]*R[-c,-d,-e,-f]",
    "W[a,b,c,d]*W[-a,-b,-c,-d] - R[a,b,c,d]*R[-a,-b,-c,-d] + 2*R[a,b]*R[-a,-b]",
    "epsilon[a,b,c,d]*R[-a,-b,e,f]*R[-c,-d,-e,-f]",
];

/// Configurations of the catalogued degree-7 non-dual invariants.
pub fn degree_seven_configurations() -> Vec<Configuration> {
    NAMED_BASIS
        .iter()
        .filter(|r| r.label.degree == 7)
        .map(|r| {
            let p = parse_expression(r.riemann).expect("catalogue entry parses");
            let m = p.monomials().next().expect("single monomial");
            Configuration::from_monomial(&m).expect("scalar monomial")
        })
        .collect()
}

/// Database with non-duals through degree 3 and duals through degree 2.
pub fn small_database() -> SyzygyDatabase {
    SyzygyDatabase::build(&BuildOptions {
        max_degree_i: 3,
        max_degree_d: 2,
        ..BuildOptions::default()
    })
    .expect("database builds")
}
