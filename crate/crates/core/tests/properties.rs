//! Property tests for the algebraic and numerical invariants.

use std::sync::Arc;

use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};

use spunbook::algebra::{self, AbelianGroupPresentation, IntMatrix};
use spunbook::contactcheck::{self, CollarFamily, GridSpec, LoopShape};
use spunbook::embedder::{self, EmbeddingTarget};
use spunbook::handle5;
use spunbook::lefschetz::{self, LefschetzDescriptor, Preset, VanishingCycle};
use spunbook::mcg::{self, Sign, TwistLetter, TwistWord};
use spunbook::obstruct::{self, CohomologyElement, PullbackMap, TargetConstraint};
use spunbook::openbook::{self, OpenBookDescriptor};
use spunbook::spin::{self, QuadraticForm};
use spunbook::surface::{self, mod2_class, standard_registry, CurveRegistry};

const SEED: u64 = 0xb00c_5eed;

fn config(cases: u32) -> Config {
    println!("proptest seed {SEED:#x}, {cases} cases");
    Config { cases, rng_seed: RngSeed::Fixed(SEED), failure_persistence: None, ..Config::default() }
}

fn registry(g: usize) -> Arc<CurveRegistry> {
    Arc::new(standard_registry(g).unwrap())
}

fn matrix() -> impl Strategy<Value = IntMatrix> {
    (1..=5usize, 1..=5usize).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(-5i128..=5, c), r).prop_map(|rows| IntMatrix::from_rows(rows).unwrap())
    })
}

/// Letters as (curve index, sign) resolved against the genus's registry.
fn word(genus: usize, max_len: usize) -> impl Strategy<Value = TwistWord> {
    let r = registry(genus);
    let n = r.len();
    prop::collection::vec((0..n, any::<bool>()), 0..=max_len).prop_map(move |raw| {
        let names: Vec<String> = r.iter().map(|c| c.name().to_string()).collect();
        let letters = raw
            .into_iter()
            .map(|(i, pos)| TwistLetter::new(names[i].clone(), if pos { Sign::Positive } else { Sign::Negative }))
            .collect();
        TwistWord::new(r.clone(), letters).unwrap()
    })
}

fn h1(w: &TwistWord) -> AbelianGroupPresentation {
    openbook::first_homology(&OpenBookDescriptor::new(w.clone(), None)).unwrap()
}

proptest! {
    #![proptest_config(config(256))]

    #[test]
    fn smith_decomposition_is_exact(m in matrix()) {
        let s = algebra::smith_normal_form(&m).unwrap();
        prop_assert_eq!(s.u.mul(&m).unwrap().mul(&s.v).unwrap(), s.d.clone());
        prop_assert_eq!(s.u.determinant().unwrap().abs(), 1);
        prop_assert_eq!(s.v.determinant().unwrap().abs(), 1);
        let f = s.invariant_factors();
        prop_assert!(f.iter().all(|&x| x >= 0));
        for w in f.windows(2) {
            prop_assert!(w[1] == 0 || (w[0] != 0 && w[1] % w[0] == 0), "chain broken: {:?}", f);
        }
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                if i != j {
                    prop_assert_eq!(s.d[(i, j)], 0);
                }
            }
        }
    }

    #[test]
    fn cokernel_order_is_determinant(m in (1..=5usize).prop_flat_map(|n| {
        prop::collection::vec(prop::collection::vec(-5i128..=5, n), n)
    })) {
        let m = IntMatrix::from_rows(m).unwrap();
        let det = m.determinant().unwrap();
        prop_assume!(det != 0);
        prop_assert_eq!(algebra::cokernel_presentation(&m).unwrap().order(), Some(det.abs()));
    }

    #[test]
    fn pairing_is_antisymmetric_and_bilinear(
        x in prop::collection::vec(-4i64..=4, 6),
        y in prop::collection::vec(-4i64..=4, 6),
        z in prop::collection::vec(-4i64..=4, 6),
        a in -3i64..=3,
    ) {
        let p = |u: &[i64], v: &[i64]| surface::pairing_vectors(u, v).unwrap();
        prop_assert_eq!(p(&x, &y), -p(&y, &x));
        let ax_plus_z: Vec<i64> = x.iter().zip(&z).map(|(u, v)| a * u + v).collect();
        prop_assert_eq!(p(&ax_plus_z, &y), a * p(&x, &y) + p(&z, &y));
    }

    #[test]
    fn word_action_is_symplectic(w in (1..=4usize).prop_flat_map(|g| word(g, 50))) {
        prop_assert!(mcg::is_symplectic(&mcg::word_action(&w).unwrap()).unwrap());
    }

    #[test]
    fn word_action_is_a_homomorphism(w1 in word(3, 20), w2 in word(3, 20)) {
        let joined = w1.concat(&w2).unwrap();
        let a1 = mcg::word_action(&w1).unwrap();
        let a2 = mcg::word_action(&w2).unwrap();
        prop_assert_eq!(mcg::word_action(&joined).unwrap(), a2.mul(&a1).unwrap());
        prop_assert_eq!(mcg::word_action(&w1.inverse()).unwrap().mul(&a1).unwrap(), IntMatrix::identity(6));
    }

    #[test]
    fn homology_is_conjugation_and_rotation_invariant(w in word(3, 25), v in word(3, 12), k in 0usize..25) {
        let h = h1(&w);
        prop_assert_eq!(h1(&w.conjugate_by(&v).unwrap()), h.clone());
        prop_assert_eq!(h1(&w.rotate_left(k)), h);
    }

    #[test]
    fn arf_is_preserved(w in word(3, 30), bits in 0u64..64) {
        let q = QuadraticForm::from_bits(3, bits);
        let p = spin::pushforward(&q, &w).unwrap();
        prop_assert_eq!(p.arf(), q.arf());
    }

    #[test]
    fn pushforward_composes(w1 in word(2, 10), w2 in word(2, 10), bits in 0u64..16) {
        let q = QuadraticForm::from_bits(2, bits);
        let step = spin::pushforward(&spin::pushforward(&q, &w1).unwrap(), &w2).unwrap();
        prop_assert_eq!(spin::pushforward(&q, &w1.concat(&w2).unwrap()).unwrap(), step);
    }

    #[test]
    fn euler_characteristic_counts_cycles(g in 1..=5usize, picks in prop::collection::vec((0usize..64, any::<bool>()), 0..20)) {
        let r = registry(g);
        let names: Vec<String> = r.iter().map(|c| c.name().to_string()).collect();
        let cycles: Vec<VanishingCycle> = picks
            .iter()
            .map(|&(i, achiral)| {
                let name = names[i % names.len()].clone();
                if achiral { VanishingCycle::achiral(name) } else { VanishingCycle::ordinary(name) }
            })
            .collect();
        let n = cycles.len() as i64;
        let l = LefschetzDescriptor::new(r, cycles, "random", "X", "dX").unwrap();
        prop_assert_eq!(lefschetz::euler_characteristic(&l), 1 - 2 * g as i64 + n);
    }
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn certificates_round_trip(target_idx in 0usize..4, g in 3..=4usize, raw in prop::collection::vec((0usize..64, any::<bool>()), 0..=30)) {
        let target = EmbeddingTarget::ALL[target_idx];
        let fibration = lefschetz::preset(target.preset(), g).unwrap();
        let letters = raw
            .iter()
            .map(|&(i, pos)| {
                let c = &fibration.cycles()[i % fibration.cycles().len()];
                TwistLetter::new(c.curve.clone(), if pos { Sign::Positive } else { Sign::Negative })
            })
            .collect();
        let ob = OpenBookDescriptor::new(TwistWord::new(fibration.registry().clone(), letters).unwrap(), None);
        let cert = embedder::certify(&ob, target).unwrap();
        let report = embedder::verify(&cert);
        prop_assert!(report.passed(), "{}", report);
        let replayed = embedder::replay_path(&cert.target_fibration, &cert.path).unwrap();
        prop_assert_eq!(mcg::word_action(&replayed).unwrap(), mcg::word_action(ob.word()).unwrap());
    }

    #[test]
    fn enlarging_a_word_never_adds_targets(w in word(3, 12), extra in word(3, 4)) {
        let before = embedder::applicable_targets(&OpenBookDescriptor::new(w.clone(), None)).targets();
        let after = embedder::applicable_targets(&OpenBookDescriptor::new(w.concat(&extra).unwrap(), None)).targets();
        prop_assert!(after.iter().all(|t| before.contains(t)), "{:?} -> {:?}", before, after);
    }

    #[test]
    fn pullback_closure(
        src_free in 0usize..=2, src_tor in prop::collection::vec(2i128..=4, 0..=2),
        tgt_free in 0usize..=2, tgt_tor in prop::collection::vec(2i128..=4, 0..=2),
        entries in prop::collection::vec(-6i128..=6, 16),
        x in prop::collection::vec(-9i128..=9, 4),
    ) {
        let chain = |ms: &[i128]| ms.iter().scan(1, |acc, m| { *acc *= m; Some(*acc) }).collect::<Vec<_>>();
        let src = AbelianGroupPresentation::new(src_free, chain(&src_tor)).unwrap();
        let tgt = AbelianGroupPresentation::new(tgt_free, chain(&tgt_tor)).unwrap();
        let (n_src, n_tgt) = (src.generator_count(), tgt.generator_count());
        prop_assume!(n_src > 0 && n_tgt > 0);
        // Columns for torsion generators are scaled into the d-torsion of the target.
        let rows: Vec<Vec<i128>> = (0..n_tgt)
            .map(|i| {
                (0..n_src)
                    .map(|j| {
                        let e = entries[(i * n_src + j) % entries.len()];
                        let (d, t) = (src.modulus(j), tgt.modulus(i));
                        match (d, t) {
                            (0, _) => e,
                            (_, 0) => 0,
                            (d, t) => e * (t / algebra::gcd(d, t)),
                        }
                    })
                    .collect()
            })
            .collect();
        let e = PullbackMap::new(src.clone(), tgt.clone(), IntMatrix::from_rows(rows).unwrap()).unwrap();
        let xs = CohomologyElement::new(src.clone(), x[..n_src].to_vec()).unwrap();
        let image = e.apply(&xs).unwrap();
        prop_assert!(obstruct::pullback_condition(&xs, &e, &image).unwrap());
        prop_assert!(obstruct::pullback_condition(&CohomologyElement::zero(src), &e, &CohomologyElement::zero(tgt)).unwrap());
    }

    #[test]
    fn target_constraint_divides(witnesses in prop::collection::vec(-200i128..=200, 1..4)) {
        match obstruct::s2s3_target_constraint(&witnesses) {
            TargetConstraint::Inconclusive => prop_assert!(witnesses.iter().all(|&w| w == 0)),
            TargetConstraint::Admissible(ks) => {
                for k in &ks {
                    prop_assert!(*k != 0);
                    prop_assert!(witnesses.iter().all(|w| w % (2 * k) == 0));
                }
                // Complete: every k with 2k dividing all witnesses is listed.
                for k in 1..=100i128 {
                    if witnesses.iter().all(|w| w % (2 * k) == 0) {
                        prop_assert!(ks.contains(&k) && ks.contains(&-k));
                    }
                }
            }
        }
    }

    #[test]
    fn s2s3_ledgers_verify(o in prop::collection::vec(-1000i64..=1000, 0..=10)) {
        let l = handle5::build_s2s3_ledger(o.len(), &o).unwrap();
        prop_assert!(handle5::verify_ledger(&l).passed());
        let negated: Vec<i64> = o.iter().map(|x| -x).collect();
        prop_assert_eq!(l.corrections(), negated);
    }
}

/// Exhaustive over torsion groups of order ≤ 64, every element and `n ≤ 4`.
#[test]
fn divisibility_closure_small_groups() {
    fn chains(order_left: i128, last: i128, prefix: &mut Vec<i128>, out: &mut Vec<Vec<i128>>) {
        out.push(prefix.clone());
        let mut d = last;
        while d <= order_left {
            if d % last == 0 {
                prefix.push(d);
                chains(order_left / d, d, prefix, out);
                prefix.pop();
            }
            d += 1;
        }
    }
    let mut all = Vec::new();
    chains(64, 2, &mut Vec::new(), &mut all);
    let mut checked = 0;
    for torsion in all {
        for free in 0..=1 {
            let g = AbelianGroupPresentation::new(free, torsion.clone()).unwrap();
            let order: i128 = torsion.iter().product();
            for idx in 0..order {
                let mut rem = idx;
                let mut x: Vec<i128> = vec![3; free];
                for &d in &torsion {
                    x.push(rem % d);
                    rem /= d;
                }
                for n in 1..=4 {
                    let nx: Vec<i128> = x.iter().map(|c| c * n).collect();
                    assert!(algebra::solve_divisibility(&g, &nx, n).unwrap(), "{g}: {x:?} times {n}");
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 1000);
}

#[test]
fn default_registry_pairings() {
    for g in 1..=8 {
        let r = standard_registry(g).unwrap();
        for j in 1..=2 * g {
            for k in 1..=2 * g {
                let p = surface::pairing(r.gamma(j).unwrap(), r.gamma(k).unwrap()).unwrap();
                if j.abs_diff(k) == 1 {
                    assert_eq!(p.abs(), 1, "g={g} <gamma{j}, gamma{k}>");
                } else {
                    assert_eq!(p, 0, "g={g} <gamma{j}, gamma{k}>");
                }
            }
        }
        if g >= 3 {
            let m = |k: usize| mod2_class(r.gamma(k).unwrap());
            assert_eq!(m(2 * g + 2), m(1).add(&m(3)).add(&m(5)));
        }
    }
}

#[test]
fn fix_iff_exhaustive_over_basis_classes() {
    for g in 1..=3 {
        let surface = standard_registry(g).unwrap().surface();
        let mut r = CurveRegistry::empty(surface);
        for bits in 1..(1u64 << (2 * g)) {
            let v: Vec<i64> = (0..2 * g).map(|i| (bits >> i & 1) as i64).collect();
            r.register_vector(&format!("c{bits}"), v).unwrap();
        }
        let r = Arc::new(r);
        for q in QuadraticForm::all(g) {
            for c in r.iter() {
                let w = TwistWord::new(r.clone(), vec![TwistLetter::positive(c.name())]).unwrap();
                let fixed = spin::pushforward(&q, &w).unwrap() == q;
                assert_eq!(fixed, q.evaluate_class(c).unwrap() == 1, "g={g} q={q} c={}", c.name());
            }
        }
    }
}

#[test]
fn arf_preserved_exhaustively_on_generators() {
    for g in 1..=2 {
        let r = registry(g);
        for q in QuadraticForm::all(g) {
            for c in r.iter() {
                for sign in [Sign::Positive, Sign::Negative] {
                    let w = TwistWord::new(r.clone(), vec![TwistLetter::new(c.name(), sign)]).unwrap();
                    assert_eq!(spin::pushforward(&q, &w).unwrap().arf(), q.arf());
                }
            }
        }
    }
}

#[test]
fn disk_boundary_is_a_homology_sphere() {
    for g in 1..=3 {
        let l = lefschetz::preset(Preset::Disk, g).unwrap();
        assert!(openbook::first_homology(&lefschetz::boundary_open_book(&l)).unwrap().is_trivial());
    }
}

#[test]
fn ledgers_for_all_small_genera() {
    for g in 0..=10 {
        let s5 = handle5::build_s5_ledger(g);
        assert!(handle5::verify_ledger(&s5).passed());
        assert_eq!(s5.final_residue, ["H0", "H5"]);
        let all: Vec<String> = s5.entries.iter().map(|e| e.id.clone()).collect();
        assert_eq!(s5.signed_count(&all), 0);
    }
}

#[test]
fn collar_refinement_is_stable_on_bundled_families() {
    let grid = GridSpec::default();
    for name in CollarFamily::NAMES {
        let f = CollarFamily::named(name).unwrap();
        let coarse = contactcheck::collar_min_k(&f.sample(&grid).unwrap(), &grid).unwrap();
        let fine_grid = grid.refined();
        let fine = contactcheck::collar_min_k(&f.sample(&fine_grid).unwrap(), &fine_grid).unwrap();
        let drift = (coarse.k_star - fine.k_star).abs() / fine.k_star;
        assert!(drift < 0.01, "{name}: {} vs {}", coarse.k_star, fine.k_star);
        assert!(coarse.coefficient_disagreement <= coarse.coefficient_tolerance);
    }
}

#[test]
fn collar_k_star_shrinks_with_length() {
    let grid = GridSpec::default();
    for name in CollarFamily::NAMES {
        let base = CollarFamily::named(name).unwrap();
        let ks: Vec<f64> = [0.5, 1.0, 1.5, 2.0, 3.0, 5.0]
            .iter()
            .map(|&l| {
                let f = base.with_length(l);
                contactcheck::collar_min_k(&f.sample(&grid).unwrap(), &grid).unwrap().k_star
            })
            .collect();
        for w in ks.windows(2) {
            assert!(w[1] <= w[0], "{name}: {ks:?}");
        }
    }
}

proptest! {
    #![proptest_config(config(24))]

    /// Random circles inside the unit disk: closed form and finite differences agree.
    #[test]
    fn collar_agreement_on_random_circles(
        cx in -0.3f64..0.3, cy in -0.3f64..0.3, radius in 0.05f64..0.6,
        bx in -0.5f64..0.5, by in -0.5f64..0.5,
    ) {
        let f = CollarFamily {
            base_loop: LoopShape::Circle { center: [cx, cy], radius, turns: 1 },
            basepoint: [bx, by],
            ..CollarFamily::circle()
        };
        let grid = GridSpec::default();
        let r = contactcheck::collar_min_k(&f.sample(&grid).unwrap(), &grid).unwrap();
        prop_assert!(r.coefficient_disagreement <= r.coefficient_tolerance);
        let p = contactcheck::verify_form_positive(r.k_star, &f.sample(&grid).unwrap(), &grid).unwrap();
        prop_assert!(p.passed);
    }
}
