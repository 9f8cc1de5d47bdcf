//! End-to-end acceptance checks. Each test prints one `criterion N:` line
//! with its outcome before asserting.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};
use std::time::{Duration, Instant};

use invar_core::database::SyzygyDatabase;
use invar_core::enumerate::{enumerate_transversal, kinds_for, EnumerateOptions, Mode};
use invar_core::invariant::{InvariantKind, InvariantMonomial, InvariantPolynomial};
use invar_core::named::{independent_basis_table, nk_expand, resolve_named, NkName, NAMED_BASIS};
use invar_core::oracle::ComponentOracle;
use invar_core::permgroup::{brute_force_double_coset_rep, canonical_double_coset_rep, PermGroup, SignedPermutation};
use invar_core::relations::{signature_relations, BuildOptions, RelLevel};
use invar_core::simplify::{SimplificationLevel, Simplifier};
use invar_core::tensor::{parse_expression, Canonicalizer, Configuration, MetricContext, TensorKind, TensorPolynomial};
use invar_core::InvarError;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use InvariantKind::{D, I};

fn report(n: u32, ok: bool, detail: impl AsRef<str>) {
    println!(
        "criterion {n}: {} {}",
        if ok { "PASS" } else { "FAIL" },
        detail.as_ref()
    );
}

fn build(max_i: u16, max_d: u16, level: RelLevel) -> SyzygyDatabase {
    SyzygyDatabase::build(&BuildOptions {
        max_degree_i: max_i,
        max_degree_d: max_d,
        max_level: level,
        ..BuildOptions::default()
    })
    .unwrap()
}

/// Non-duals through degree 5 and duals through degree 4, all levels.
fn desk() -> &'static SyzygyDatabase {
    static DB: OnceLock<SyzygyDatabase> = OnceLock::new();
    DB.get_or_init(|| build(5, 4, RelLevel::D))
}

/// Duals through degree 5, needed for the two-term ε expression.
fn dual5() -> &'static SyzygyDatabase {
    static DB: OnceLock<SyzygyDatabase> = OnceLock::new();
    DB.get_or_init(|| build(5, 5, RelLevel::D))
}

/// Non-duals through degree 6 with cyclic relations only.
fn sextic() -> &'static SyzygyDatabase {
    static DB: OnceLock<SyzygyDatabase> = OnceLock::new();
    DB.get_or_init(|| build(6, 3, RelLevel::B))
}

fn counts(db: &SyzygyDatabase, kind: InvariantKind, through: u16, level: u8) -> Vec<usize> {
    (1..=through)
        .map(|n| db.independent_count(kind, n, level).unwrap())
        .collect()
}

fn check_level(n: u32, level: u8, i: &[usize], d: &[usize]) {
    let db = desk();
    let (gi, gd) = (counts(db, I, 5, level), counts(db, D, 4, level));
    let ok = gi == i && gd == d;
    report(n, ok, format!("level {level}: I {gi:?}, D {gd:?}"));
    assert_eq!(gi, i);
    assert_eq!(gd, d);
}

#[test]
fn criterion_01_exhaustive_transversal_counts() {
    let can = Canonicalizer::new();
    let start = Instant::now();
    let opts = EnumerateOptions::with_mode(Mode::Exhaustive);
    let i: Vec<usize> = (1..=4)
        .map(|n| enumerate_transversal(&can, I, n, &opts).unwrap().len())
        .collect();
    let d: Vec<usize> = (1..=3)
        .map(|n| enumerate_transversal(&can, D, n, &opts).unwrap().len())
        .collect();
    let elapsed = start.elapsed();
    let ok = i == [1, 4, 13, 57] && d == [1, 5, 35] && elapsed < Duration::from_secs(120);
    report(1, ok, format!("I {i:?}, D {d:?} in {:.1}s", elapsed.as_secs_f64()));
    assert!(ok);
}

#[test]
fn criterion_02_randomized_transversal_counts() {
    let can = Canonicalizer::new();
    let start = Instant::now();
    let opts = EnumerateOptions {
        seed: 1,
        ..EnumerateOptions::with_mode(Mode::Random)
    };
    let i5 = enumerate_transversal(&can, I, 5, &opts).unwrap();
    let d4 = enumerate_transversal(&can, D, 4, &opts).unwrap();
    let elapsed = start.elapsed();
    let ok = i5.len() == 288 && d4.len() == 288 && elapsed < Duration::from_secs(600);
    report(
        2,
        ok,
        format!(
            "I5 {} ({} samples), D4 {} ({} samples) in {:.1}s",
            i5.len(),
            i5.samples,
            d4.len(),
            d4.samples,
            elapsed.as_secs_f64()
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_03_connected_counts() {
    let db = desk();
    let conn = |kind, through: u16| -> Vec<usize> {
        (1..=through)
            .map(|n| db.transversal(kind, n).unwrap().irreducible_count())
            .collect::<Vec<_>>()
    };
    let (ci, cd) = (conn(I, 5), conn(D, 4));
    assert_eq!(ci, [1, 3, 9, 38, 204]);
    assert_eq!(cd, [1, 4, 27, 232]);
    check_level(3, 1, &[1, 3, 9, 38, 204], &[1, 4, 27, 232]);
}

#[test]
fn criterion_04_cyclic_reduction() {
    check_level(4, 2, &[1, 2, 5, 15, 54], &[0, 1, 6, 40]);
}

#[test]
fn criterion_05_dimensional_reduction() {
    check_level(5, 3, &[1, 2, 3, 4, 5], &[0, 1, 2, 1]);
}

#[test]
fn criterion_06_signature_reduction() {
    check_level(6, 4, &[1, 2, 3, 3, 3], &[0, 1, 2, 1]);
}

/// Evaluates `p` on random curvature for both signs of the metric
/// determinant and reports whether it always vanishes.
fn vanishes(db: &SyzygyDatabase, p: &InvariantPolynomial, trials: u64, seed: u64) -> bool {
    for sigma in [-1, 1] {
        for t in 0..trials {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(t);
            let oracle = ComponentOracle::random(MetricContext { dimension: 4, sigma }, 9, &mut rng).unwrap();
            if !db.evaluate(p, &oracle, &mut HashMap::new()).unwrap().is_zero() {
                return false;
            }
        }
    }
    true
}

#[test]
fn criterion_07_named_identities() {
    let two_term = "epsilon[a,b,c,d]*R[-a,-b,e,f]*R[-c,-e,-f,g]*R[-d,h,i,j]*R[-g,-i]*R[-h,-j] \
        + 1/8*(epsilon[a,b,c,d]*R[-a,-b,e,f]*R[-c,-d,-e,-f])*(R[g,h,i,j]*R[-g,-i]*R[-h,-j])";
    let s5 = Simplifier::new(dual5());
    let mut two_term_ok = true;
    for level in 1..=4u8 {
        let out = s5
            .simplify_text(two_term, SimplificationLevel::new(level).unwrap())
            .unwrap();
        println!(
            "  two-term expression at level {level}: {}",
            out.render(Default::default())
        );
        if level >= 3 {
            two_term_ok &= out.is_zero();
        }
    }

    let s = Simplifier::new(desk());
    let d1 = s
        .simplify_text("epsilon[a,b,c,d]*R[-a,-b,-c,-d]", SimplificationLevel::CYCLIC)
        .unwrap();
    let d1_ok = d1.is_zero();

    let db6 = sextic();
    let s6 = Simplifier::new(db6);
    let d32 = s6
        .riemann_to_inv(&parse_expression("-R[a,b]*R[c,d]*R[-a,-c,e,f]*epsilon[-b,-d,-e,-f]").unwrap())
        .unwrap();
    let d32_id = d32.ids()[0];
    let square = InvariantMonomial::from_ids(vec![d32_id, d32_id], true);
    let relations = signature_relations(&db6.lookup(), 3, 3).unwrap();
    let relation = relations.iter().find(|r| !r.coefficient(&square).is_zero());
    let mut sig_ok = false;
    if let Some(r) = relation {
        let lead = r.coefficient(&square);
        let mut rhs: Vec<BigRational> = r
            .terms()
            .filter(|(m, _)| **m != square)
            .map(|(m, c)| {
                assert_eq!(m.ids().len(), 1);
                assert_eq!(m.ids()[0].degree, 6);
                -c / &lead
            })
            .collect();
        rhs.sort();
        let int = |k: i64| BigRational::from_integer(BigInt::from(k));
        sig_ok = rhs == [int(4), int(4), int(16)] && vanishes(db6, r, 3, 11);
        println!("  signature relation: {r}");
    }
    let ok = two_term_ok && d1_ok && sig_ok;
    report(
        7,
        ok,
        format!("two-term expression vanishes: {two_term_ok}, degree-1 dual vanishes: {d1_ok}, sigma D32^2 relation: {sig_ok}"),
    );
    assert!(ok);
}

#[test]
fn criterion_08_oracle_certification() {
    let mut db = build(5, 4, RelLevel::D);
    let rep = db.certify(3, 2026).unwrap();
    let ok = rep.all_certified() && rep.checked == db.syzygy_count();
    report(
        8,
        ok,
        format!(
            "{} syzygies on {} tensors, {} failures",
            rep.checked,
            rep.samples,
            rep.failures.len()
        ),
    );
    assert!(ok, "{:?}", rep.failures);
}

#[test]
fn criterion_09_named_table_cross_check() {
    let s = Simplifier::new(desk());
    let rows = resolve_named(&s).unwrap();
    let bad: Vec<String> = rows
        .iter()
        .filter(|r| !r.consistent())
        .map(|r| r.row.label.to_string())
        .collect();
    let table = independent_basis_table(&s).unwrap();
    let ok = bad.is_empty() && rows.iter().all(|r| r.id().is_some());
    report(
        9,
        ok,
        format!(
            "{} rows resolved, {} inconsistent, {} basis entries",
            rows.len(),
            bad.len(),
            table.len()
        ),
    );
    for r in &rows {
        println!("  {} -> {}", r.row.label, r.riemann);
    }
    assert!(ok, "{bad:?}");
}

#[test]
fn criterion_10_nk_expansions() {
    let s = Simplifier::new(desk());
    let mut certified = Vec::new();
    let mut out_of_range = Vec::new();
    let mut failures = Vec::new();
    for name in NkName::ALL {
        match nk_expand(&s, name) {
            Ok(e) => {
                if e.certify(&s, 3, 5).unwrap() {
                    certified.push(name);
                } else {
                    failures.push(name);
                }
                match e.certify_reference(&s, 3, 5).unwrap() {
                    Some(false) => println!(
                        "  {name}: reference expansion differs by {}; derived {}",
                        e.discrepancy().unwrap(),
                        e.expansion
                    ),
                    Some(true) => println!("  {name}: reference expansion agrees"),
                    None => println!("  {name}: reference expansion outside the database"),
                }
            }
            Err(InvarError::OutOfRange(what)) => out_of_range.push(what),
            Err(e) => panic!("{name}: {e}"),
        }
    }
    let ok = failures.is_empty() && certified.len() >= 7;
    report(
        10,
        ok,
        format!(
            "{} certified {:?}, beyond the database: {:?}",
            certified.len(),
            certified.iter().map(ToString::to_string).collect::<Vec<_>>(),
            out_of_range
        ),
    );
    assert!(ok, "{failures:?}");
}

/// A random full contraction of the given factors.
fn random_configuration(kinds: Vec<TensorKind>, rng: &mut impl Rng) -> Configuration {
    let slots: usize = kinds.iter().map(|k| k.rank()).sum();
    let mut order: Vec<usize> = (0..slots).collect();
    order.shuffle(rng);
    let mut names = vec![0u16; slots];
    for (k, pair) in order.chunks(2).enumerate() {
        names[pair[0]] = 2 * k as u16;
        names[pair[1]] = 2 * k as u16 + 1;
    }
    Configuration::new(kinds, names)
}

#[test]
fn criterion_11_degree_seven_canonicalization() {
    let mut worst = Duration::ZERO;
    let mut count = 0;
    let mut check = |c: &Configuration| {
        let can = Canonicalizer::new();
        let start = Instant::now();
        let f = can.canonicalize(c);
        worst = worst.max(start.elapsed());
        count += 1;
        f
    };
    for row in NAMED_BASIS.iter().filter(|r| r.label.degree == 7) {
        let p = parse_expression(row.riemann).unwrap();
        let m = p.monomials().next().unwrap();
        let f = check(&Configuration::from_monomial(&m).unwrap());
        assert!(!f.zero, "{}", row.label);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        check(&random_configuration(kinds_for(I, 7), &mut rng));
    }
    let ok = worst < Duration::from_secs(1);
    report(
        11,
        ok,
        format!(
            "{count} degree-7 monomials, slowest {:.1} ms",
            worst.as_secs_f64() * 1e3
        ),
    );
    assert!(ok);
}

fn random_element(elements: &[SignedPermutation], rng: &mut impl Rng) -> SignedPermutation {
    elements[rng.gen_range(0..elements.len())].clone()
}

/// Slot group, dummy group and their element lists for one factor shape.
type GroupCache = (
    Arc<PermGroup>,
    PermGroup,
    Vec<SignedPermutation>,
    Vec<SignedPermutation>,
);

fn coset_fuzz(samples: usize, brute_samples_deg3: usize) -> (usize, usize, Vec<String>) {
    let can = Canonicalizer::new();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let shapes: Vec<Vec<TensorKind>> = vec![
        kinds_for(I, 1),
        kinds_for(I, 2),
        kinds_for(I, 3),
        kinds_for(D, 1),
        kinds_for(D, 2),
    ];
    let mut groups: HashMap<usize, GroupCache> = HashMap::new();
    let mut failures = Vec::new();
    let mut brute = 0;
    let mut deg3_brute = 0;
    for k in 0..samples {
        let shape = k % shapes.len();
        let c = random_configuration(shapes[shape].clone(), &mut rng);
        let (g, s, d) = can.coset_problem(&c);
        let (s, d, se, de) = groups
            .entry(shape)
            .or_insert_with(|| {
                let (se, de) = (s.elements(), d.elements());
                (s, d, se, de)
            })
            .clone();
        let rep = canonical_double_coset_rep(&g, &s, &d).unwrap();
        let moved = random_element(&de, &mut rng)
            .compose(&g)
            .unwrap()
            .compose(&random_element(&se, &mut rng))
            .unwrap();
        if canonical_double_coset_rep(&moved, &s, &d).unwrap() != rep {
            failures.push(format!("invariance {:?}", c.names));
        }
        if let invar_core::permgroup::CosetRep::Rep(r) = &rep {
            if canonical_double_coset_rep(r, &s, &d).unwrap() != rep {
                failures.push(format!("idempotence {:?}", c.names));
            }
        }
        let small = se.len() * de.len() <= 100_000;
        if small || deg3_brute < brute_samples_deg3 {
            if !small {
                deg3_brute += 1;
            }
            brute += 1;
            if brute_force_double_coset_rep(&g, &s, &d) != rep {
                failures.push(format!("brute force {:?}", c.names));
            }
        }
    }
    (samples, brute, failures)
}

#[test]
fn criterion_12_property_suites() {
    let (fuzzed, brute, coset_failures) = coset_fuzz(10_000, 2);
    println!(
        "  coset fuzz: {fuzzed} configurations, {brute} brute-force cross-checks, {} failures",
        coset_failures.len()
    );

    let mut runner = TestRunner::new(Config {
        cases: 2000,
        failure_persistence: None,
        ..Config::default()
    });
    let kinds = prop::sample::select(vec![
        TensorKind::Riemann,
        TensorKind::Weyl,
        TensorKind::Ricci,
        TensorKind::RicciScalar,
        TensorKind::Metric,
        TensorKind::Epsilon,
    ]);
    let term = (
        prop::collection::vec(kinds, 0..5),
        any::<u64>(),
        -50i64..50,
        1i64..12,
        any::<bool>(),
    );
    let parse_round_trip = runner.run(&prop::collection::vec(term, 1..4), |terms| {
        let mut p = TensorPolynomial::zero();
        for (kinds, seed, num, den, sigma) in terms {
            let c = random_configuration(kinds, &mut ChaCha8Rng::seed_from_u64(seed));
            let coeff = BigRational::new(num.into(), den.into());
            p.add_monomial(c.to_monomial(coeff, sigma));
        }
        let text = p.to_string();
        let back = parse_expression(&text).map_err(|e| TestCaseError::fail(format!("{text}: {e}")))?;
        prop_assert_eq!(back, p, "{}", text);
        Ok(())
    });
    let garbage = runner.run(&"[a-zR\\[\\],\\-*+/()0-9 ^]{0,40}", |s| {
        let _ = parse_expression(&s);
        Ok(())
    });
    println!("  parser round trip: {parse_round_trip:?}, arbitrary input: {garbage:?}");

    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut eps_failures = 0;
    for t in 0..1000 {
        let sigma = if t % 2 == 0 { -1 } else { 1 };
        let oracle = ComponentOracle::random(MetricContext { dimension: 4, sigma }, 3, &mut rng).unwrap();
        let mut a = [0usize; 4];
        let mut b = [0usize; 4];
        for k in 0..4 {
            a[k] = rng.gen_range(0..4);
            b[k] = rng.gen_range(0..4);
        }
        // Mostly permutations, so that most samples are nonzero.
        if rng.gen_bool(0.7) {
            let mut p = [0usize, 1, 2, 3];
            p.shuffle(&mut rng);
            a = p;
            p.shuffle(&mut rng);
            b = p;
        }
        let lhs = oracle.epsilon_component(a, true).unwrap() * oracle.epsilon_component(b, false).unwrap();
        let delta: Vec<Vec<i128>> = (0..4)
            .map(|i| (0..4).map(|j| (a[i] == b[j]) as i128).collect())
            .collect();
        if lhs != sigma as i128 * det4(&delta) {
            eps_failures += 1;
        }
    }
    println!("  epsilon-delta identity: 1000 index tuples, {eps_failures} failures");

    let ok = coset_failures.is_empty() && parse_round_trip.is_ok() && garbage.is_ok() && eps_failures == 0;
    report(
        12,
        ok,
        format!(
            "coset {} failures, parser {}, epsilon-delta {} failures",
            coset_failures.len(),
            if parse_round_trip.is_ok() && garbage.is_ok() {
                "ok"
            } else {
                "failed"
            },
            eps_failures
        ),
    );
    assert!(ok, "{coset_failures:?}");
}

/// Determinant by cofactor expansion along the first row.
fn det4(m: &[Vec<i128>]) -> i128 {
    if m.len() == 1 {
        return m[0][0];
    }
    (0..m.len())
        .map(|j| {
            let minor: Vec<Vec<i128>> = m[1..]
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|&(k, _)| k != j)
                        .map(|(_, &v)| v)
                        .collect()
                })
                .collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            sign * m[0][j] * det4(&minor)
        })
        .sum()
}

#[test]
fn determinant_helper() {
    let id: Vec<Vec<i128>> = (0..4).map(|i| (0..4).map(|j| (i == j) as i128).collect()).collect();
    assert_eq!(det4(&id), 1);
    let swap = vec![vec![0, 1], vec![1, 0]];
    assert_eq!(det4(&swap), -1);
}
