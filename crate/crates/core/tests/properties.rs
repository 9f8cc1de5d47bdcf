use std::collections::BTreeSet;
use std::sync::OnceLock;

use invar_core::database::SyzygyDatabase;
use invar_core::enumerate::{enumerate_transversal, kinds_for, EnumerateOptions, Mode};
use invar_core::invariant::{InvariantId, InvariantKind, InvariantMonomial, InvariantPolynomial};
use invar_core::named::NAMED_BASIS;
use invar_core::oracle::{ComponentOracle, Network};
use invar_core::relations::BuildOptions;
use invar_core::simplify::{certify_identity, SimplificationLevel, Simplifier};
use invar_core::tensor::{parse_expression, riemann_to_ricci, Canonicalizer, Configuration, MetricContext, TensorKind};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use InvariantKind::{D, I};

fn small() -> &'static SyzygyDatabase {
    static DB: OnceLock<SyzygyDatabase> = OnceLock::new();
    DB.get_or_init(build_small)
}

fn build_small() -> SyzygyDatabase {
    SyzygyDatabase::build(&BuildOptions {
        max_degree_i: 3,
        max_degree_d: 2,
        ..BuildOptions::default()
    })
    .unwrap()
}

fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn random_configuration(kinds: Vec<TensorKind>, seed: u64) -> Configuration {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let slots: usize = kinds.iter().map(|k| k.rank()).sum();
    let mut order: Vec<usize> = (0..slots).collect();
    order.shuffle(&mut rng);
    let mut names = vec![0u16; slots];
    for (k, pair) in order.chunks(2).enumerate() {
        names[pair[0]] = 2 * k as u16;
        names[pair[1]] = 2 * k as u16 + 1;
    }
    Configuration::new(kinds, names)
}

fn oracle(seed: u64, sigma: i8) -> ComponentOracle {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    ComponentOracle::random(MetricContext { dimension: 4, sigma }, 5, &mut rng).unwrap()
}

/// Factor shapes of scalar monomials up to degree 3 with at most one ε.
fn shape() -> impl Strategy<Value = Vec<TensorKind>> {
    prop::sample::select(vec![
        kinds_for(I, 1),
        kinds_for(I, 2),
        kinds_for(I, 3),
        kinds_for(D, 1),
        kinds_for(D, 2),
        vec![TensorKind::Riemann, TensorKind::Ricci, TensorKind::Ricci],
        vec![TensorKind::Weyl, TensorKind::Weyl],
        vec![
            TensorKind::Epsilon,
            TensorKind::Weyl,
            TensorKind::Ricci,
            TensorKind::Ricci,
        ],
    ])
}

/// A random scalar polynomial in Riemann and its traces, of degree at most 3
/// and at most 2 for duals.
fn expression() -> impl Strategy<Value = String> {
    let shapes = prop::sample::select(vec![
        kinds_for(I, 1),
        kinds_for(I, 2),
        kinds_for(I, 3),
        kinds_for(D, 1),
        kinds_for(D, 2),
        vec![TensorKind::Riemann, TensorKind::Ricci, TensorKind::Ricci],
        vec![TensorKind::Weyl, TensorKind::Weyl],
        vec![TensorKind::Epsilon, TensorKind::Weyl, TensorKind::Ricci],
    ]);
    let term = (shapes, any::<u64>(), -9i64..10, 1i64..5);
    prop::collection::vec(term, 1..4).prop_map(|terms| {
        terms
            .into_iter()
            .map(|(kinds, seed, n, d)| {
                let m = random_configuration(kinds, seed).to_monomial(rational(n, d), false);
                format!("({})", m)
            })
            .collect::<Vec<_>>()
            .join(" + ")
    })
}

fn eval(o: &ComponentOracle, factors: Vec<(TensorKind, Vec<usize>)>, labels: usize) -> BigRational {
    o.evaluate_network(&Network { factors, labels }).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn evaluation_ignores_dummy_names_and_factor_order(kinds in shape(), seed in any::<u64>(), o in 0u64..4) {
        let net = Network::from_configuration(&random_configuration(kinds, seed));
        let o = oracle(o, -1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 1);
        let mut rename: Vec<usize> = (0..net.labels).collect();
        rename.shuffle(&mut rng);
        let mut factors: Vec<_> = net.factors.iter().map(|(k, l)| (*k, l.iter().map(|&x| rename[x]).collect())).collect();
        factors.shuffle(&mut rng);
        prop_assert_eq!(eval(&o, factors, net.labels), o.evaluate_network(&net).unwrap());
    }

    #[test]
    fn slot_generators_act_with_their_sign(kinds in shape(), seed in any::<u64>(), pick in any::<prop::sample::Index>()) {
        let net = Network::from_configuration(&random_configuration(kinds, seed));
        let o = oracle(seed, 1);
        let base = o.evaluate_network(&net).unwrap();
        let f = pick.index(net.factors.len());
        let (kind, labels) = &net.factors[f];
        for g in kind.slot_generators() {
            let mut factors = net.factors.clone();
            factors[f].1 = g.images().iter().map(|&i| labels[i as usize]).collect();
            let expected = if g.sign() < 0 { -base.clone() } else { base.clone() };
            prop_assert_eq!(eval(&o, factors, net.labels), expected);
        }
    }

    #[test]
    fn cyclic_identity_holds_on_every_riemann_factor(kinds in shape(), seed in any::<u64>()) {
        let net = Network::from_configuration(&random_configuration(kinds, seed));
        let o = oracle(seed, -1);
        for (f, (kind, l)) in net.factors.iter().enumerate() {
            if *kind != TensorKind::Riemann && *kind != TensorKind::Weyl {
                continue;
            }
            let mut total = BigRational::zero();
            for p in [[0, 1, 2, 3], [0, 2, 3, 1], [0, 3, 1, 2]] {
                let mut factors = net.factors.clone();
                factors[f].1 = p.iter().map(|&i| l[i]).collect();
                total += eval(&o, factors, net.labels);
            }
            prop_assert!(total.is_zero());
        }
    }

    #[test]
    fn antisymmetrizing_five_slots_vanishes(n in 2usize..=3, seed in any::<u64>()) {
        let net = Network::from_configuration(&random_configuration(kinds_for(I, n), seed));
        let o = oracle(seed, -1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut slots: Vec<(usize, usize)> = net.factors.iter().enumerate().flat_map(|(f, (_, l))| (0..l.len()).map(move |s| (f, s))).collect();
        slots.shuffle(&mut rng);
        slots.truncate(5);
        let original: Vec<usize> = slots.iter().map(|&(f, s)| net.factors[f].1[s]).collect();
        let mut total = BigRational::zero();
        for perm in permutations(5) {
            let mut factors = net.factors.clone();
            for (k, &(f, s)) in slots.iter().enumerate() {
                factors[f].1[s] = original[perm[k]];
            }
            let v = eval(&o, factors, net.labels);
            if parity(&perm) { total -= v } else { total += v }
        }
        prop_assert!(total.is_zero());
    }

    #[test]
    fn canonical_form_is_invariant_under_relabelling(kinds in shape(), seed in any::<u64>()) {
        let c = random_configuration(kinds, seed);
        let can = Canonicalizer::new();
        let m = c.to_monomial(BigRational::one(), false);
        let mut renamed = m.clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut labels: Vec<String> = m.label_counts().keys().map(|s| s.to_string()).collect();
        labels.sort();
        let mut target = labels.clone();
        target.shuffle(&mut rng);
        for f in &mut renamed.factors {
            for i in &mut f.indices {
                let k = labels.iter().position(|l| *l == i.label).unwrap();
                i.label = format!("x{}", target[k]);
            }
        }
        renamed.factors.shuffle(&mut rng);
        prop_assert_eq!(can.canonicalize_monomial(&m).unwrap(), can.canonicalize_monomial(&renamed).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn simplification_is_certified_idempotent_and_linear(text in expression(), level in 1u8..=4, n in -5i64..6, d in 1i64..4) {
        let s = Simplifier::new(small());
        let level = SimplificationLevel::new(level).unwrap();
        let input = parse_expression(&text).unwrap();
        let out = s.riemann_simplify(&input, level).unwrap();
        prop_assert!(out.residual.is_zero());
        prop_assert!(certify_identity(&input, &out.riemann, 4, 2, 9).unwrap());
        let again = s.riemann_simplify(&out.riemann, level).unwrap();
        prop_assert_eq!(&again.invariants, &out.invariants);
        let c = rational(n, d);
        let scaled = s.riemann_simplify(&input.scale(&c), level).unwrap();
        prop_assert_eq!(scaled.invariants, out.invariants.scale(&c));
    }

    #[test]
    fn invariants_round_trip_through_tensors(terms in prop::collection::vec((any::<prop::sample::Index>(), -4i64..5), 1..5)) {
        let db = small();
        let ids: Vec<InvariantId> = db.transversals().flat_map(|t| t.ids().collect::<Vec<_>>()).collect();
        let mut q = InvariantPolynomial::zero();
        for (pick, c) in terms {
            q.add_term(InvariantMonomial::single(ids[pick.index(ids.len())]), rational(c, 3));
        }
        let s = Simplifier::new(db);
        let back = s.riemann_to_inv(&s.inv_to_riemann(&q).unwrap()).unwrap();
        prop_assert_eq!(back, q);
    }

    #[test]
    fn adding_syzygies_leaves_normal_forms_unchanged(picks in prop::collection::vec((any::<prop::sample::Index>(), -4i64..5), 1..5), level in 2u8..=4) {
        let db = small();
        let syz: Vec<_> = db.syzygies().filter(|s| s.level.simplification_level() <= level).collect();
        let ids: Vec<InvariantId> = db.transversals().flat_map(|t| t.ids().collect::<Vec<_>>()).collect();
        let mut p = InvariantPolynomial::zero();
        for (k, (pick, c)) in picks.iter().enumerate() {
            p.add_term(InvariantMonomial::single(ids[pick.index(ids.len())]), rational(*c, 1 + k as i64));
        }
        let (base, _) = db.normal_form(&p, level).unwrap();
        let mut q = p.clone();
        for (pick, c) in &picks {
            let s = syz[pick.index(syz.len())];
            q.add_scaled(&s.relation(), &rational(*c, 1));
        }
        let (nf, _) = db.normal_form(&q, level).unwrap();
        prop_assert_eq!(&nf, &base);
        prop_assert_eq!(db.normal_form(&base, level).unwrap().0, base);
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for k in 0..n {
            let mut q = p.clone();
            q.insert(k, n - 1);
            out.push(q);
        }
    }
    out
}

fn parity(p: &[usize]) -> bool {
    let mut odd = false;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            odd ^= p[i] > p[j];
        }
    }
    odd
}

#[test]
fn bases_shrink_with_the_level() {
    let db = small();
    for (kind, top) in [(I, 3), (D, 2)] {
        for n in 1..=top {
            let t = db.transversal(kind, n).unwrap();
            let connected: BTreeSet<InvariantId> = t.ids().filter(|i| !t.is_product_reducible(i.rank)).collect();
            let atoms: BTreeSet<InvariantId> = db.atoms(kind, n).into_iter().collect();
            assert!(atoms.is_subset(&connected));
            let basis = |level| -> BTreeSet<String> {
                db.basis_monomials(kind, n, level)
                    .unwrap()
                    .iter()
                    .map(|m| m.to_string())
                    .collect()
            };
            let (c, d) = (basis(3), basis(4));
            assert!(d.is_subset(&c), "{kind:?} {n}");
            for m in db.basis_monomials(kind, n, 3).unwrap() {
                assert!(m.ids().iter().all(|id| db.atoms(id.kind, id.degree).contains(id)));
            }
        }
    }
}

#[test]
fn rebuilding_is_byte_identical() {
    assert_eq!(build_small().to_text(), small().to_text());
}

#[test]
fn transversals_are_sound() {
    let can = Canonicalizer::new();
    for (kind, n) in [(I, 3), (D, 2)] {
        let t = enumerate_transversal(&can, kind, n, &EnumerateOptions::with_mode(Mode::Exhaustive)).unwrap();
        let mut seen = BTreeSet::new();
        for id in t.ids() {
            let c = t.get(id.rank).unwrap().config.clone();
            let f = can.canonicalize(&c);
            assert!(!f.zero && !f.negative);
            assert_eq!(f.config, c);
            assert!(seen.insert(c));
        }
    }
}

#[test]
fn ricci_column_matches_the_riemann_column() {
    let can = Canonicalizer::new();
    for row in NAMED_BASIS {
        let riemann = riemann_to_ricci(&parse_expression(row.riemann).unwrap());
        let ricci = parse_expression(row.ricci).unwrap();
        assert_eq!(
            can.canonicalize_polynomial(&riemann).unwrap(),
            can.canonicalize_polynomial(&ricci).unwrap(),
            "{}",
            row.label
        );
    }
}
