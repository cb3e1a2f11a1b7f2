//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line
//! (run with `--nocapture` to see the lines for passing criteria).
//!
//! Every tolerance here is exact equality over the rationals; randomized
//! instances use a fixed-seed generator so runs are reproducible.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use conformal_core::*;

fn s(x: i64) -> Scalar {
    Scalar::from_int(x)
}

fn rand_scalar(rng: &mut StdRng) -> Scalar {
    Scalar::ratio(rng.gen_range(-9..=9), rng.gen_range(1..=9))
}

fn rand_nonzero_scalar(rng: &mut StdRng) -> Scalar {
    loop {
        let v = rand_scalar(rng);
        if !v.is_zero() {
            return v;
        }
    }
}

/// Random `∂`-polynomial of degree at most `deg`.
fn rand_del_poly(rng: &mut StdRng, deg: u32) -> MPoly {
    let mut p = MPoly::zero();
    for d in 0..=deg {
        if rng.gen_bool(0.7) {
            p = &p + &MPoly::monomial([d, 0, 0], rand_scalar(rng));
        }
    }
    p
}

/// Random single-generator element `f(∂) J^deg_{E_ij}`.
fn rand_unit_element(rng: &mut StdRng, n: usize, deg: u32, coeff_deg: u32) -> GcElement {
    let i = rng.gen_range(0..n);
    let j = rng.gen_range(0..n);
    let mut coeff = rand_del_poly(rng, coeff_deg);
    if coeff.is_zero() {
        coeff = MPoly::one();
    }
    GcElement::single(n, deg, i, j, coeff).unwrap()
}

/// Random element with terms at every degree up to `max_deg`.
fn rand_element(rng: &mut StdRng, n: usize, max_deg: u32, coeff_deg: u32) -> GcElement {
    let mut g = GcElement::zero(n);
    for deg in 0..=max_deg {
        for _ in 0..2 {
            g = g.add(&rand_unit_element(rng, n, deg, coeff_deg)).unwrap();
        }
    }
    g
}

fn rand_invertible(rng: &mut StdRng, n: usize) -> PolyMatrix {
    loop {
        let grid: Vec<Vec<Scalar>> = (0..n)
            .map(|_| (0..n).map(|_| s(rng.gen_range(-4..=4))).collect())
            .collect();
        let m = PolyMatrix::from_scalar_grid(&grid).unwrap();
        if !m.determinant().unwrap().is_zero() {
            return m;
        }
    }
}

fn conjugate(w: &PolyMatrix, a: &PolyMatrix) -> PolyMatrix {
    &(w * a) * &w.inverse().unwrap()
}

fn report(idx: u32, name: &str, start: Instant, budget: Option<Duration>) {
    let elapsed = start.elapsed();
    println!("acceptance {idx:02} {name}: PASS ({elapsed:.2?})");
    if let Some(b) = budget {
        assert!(
            elapsed < b,
            "acceptance {idx:02} {name}: FAIL — runtime {elapsed:.2?} over the {b:?} budget"
        );
    }
}

/// Criterion 1: Skew-symmetry and Jacobi hold exactly on randomized instances over
/// matrix-unit generators, degrees up to 3, coefficient degree up to 2,
/// N in {1,2,3}; at least 500 instances in under 30 s.
#[test]
fn acceptance_01_algebra_axioms() {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(0xA1);
    let mut instances = 0u32;

    // exhaustive unit pairs for N in {1,2}, degrees 0..=3
    for n in [1usize, 2] {
        let mut gens = Vec::new();
        for deg in 0..=3u32 {
            for i in 0..n {
                for j in 0..n {
                    gens.push((deg, i, j));
                }
            }
        }
        for &(dm, i1, j1) in &gens {
            for &(dn, i2, j2) in &gens {
                let a = GcElement::single(n, dm, i1, j1, rand_del_poly(&mut rng, 2))
                    .unwrap();
                let b = GcElement::single(n, dn, i2, j2, rand_del_poly(&mut rng, 2))
                    .unwrap();
                assert_eq!(
                    check_skew_symmetry(&a, &b).unwrap(),
                    None,
                    "acceptance 01: FAIL — skew-symmetry violated"
                );
                instances += 1;
            }
        }
    }
    // random pairs in gc_3
    for _ in 0..120 {
        let (da, db) = (rng.gen_range(0..=3), rng.gen_range(0..=3));
        let a = rand_unit_element(&mut rng, 3, da, 2);
        let b = rand_unit_element(&mut rng, 3, db, 2);
        assert_eq!(check_skew_symmetry(&a, &b).unwrap(), None);
        instances += 1;
    }
    // random Jacobi triples, including full multi-term elements
    for n in [1usize, 2, 3] {
        for _ in 0..40 {
            let (da, db, dc) = (
                rng.gen_range(0..=3),
                rng.gen_range(0..=3),
                rng.gen_range(0..=3),
            );
            let a = rand_unit_element(&mut rng, n, da, 2);
            let b = rand_unit_element(&mut rng, n, db, 2);
            let c = rand_unit_element(&mut rng, n, dc, 2);
            assert_eq!(
                check_jacobi(&a, &b, &c).unwrap(),
                None,
                "acceptance 01: FAIL — Jacobi violated"
            );
            instances += 1;
        }
    }
    for _ in 0..10 {
        let a = rand_element(&mut rng, 2, 3, 2);
        let b = rand_element(&mut rng, 2, 3, 2);
        let c = rand_element(&mut rng, 2, 3, 2);
        assert_eq!(check_jacobi(&a, &b, &c).unwrap(), None);
        assert_eq!(check_skew_symmetry(&a, &b).unwrap(), None);
        instances += 2;
    }
    assert!(instances >= 500, "only {instances} instances run");
    report(1, "algebra axioms", start, Some(Duration::from_secs(30)));
}

/// Criterion 2: `(a∂+b)J^0 + J^1` is Virasoro for 100 random rational pairs, and adding
/// any nonzero `εJ^2` breaks it in all 100 perturbed cases. Under 5 s.
#[test]
fn acceptance_02_gc1_virasoro_family() {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(0xA2);
    for _ in 0..100 {
        let a = rand_scalar(&mut rng);
        let b = rand_scalar(&mut rng);
        let l = make_gc1_virasoro(&a, &b);
        assert!(
            is_virasoro(&l).is_virasoro,
            "acceptance 02: FAIL — L_{{{a},{b}}} not Virasoro"
        );
        let eps = rand_nonzero_scalar(&mut rng);
        let perturbed = l
            .add(
                &GcElement::single(1, 2, 0, 0, MPoly::constant(eps.clone())).unwrap(),
            )
            .unwrap();
        assert!(
            !is_virasoro(&perturbed).is_virasoro,
            "acceptance 02: FAIL — {eps}·J^2 perturbation stayed Virasoro"
        );
    }
    report(2, "gc_1 Virasoro family", start, Some(Duration::from_secs(5)));
}

/// Criterion 3: The `gc_3` fixtures `T₃`, `T₄` (with the data `A₁=B₁=E₁₁+E₂₁`,
/// `A₂=B₂=−E₂₁+E₂₂`, `C=D₂=E₃₃`, `a₂=b₂=1`) verify as non-standard Virasoro
/// elements of degree two. Under 1 s.
#[test]
fn acceptance_03_gc3_fixtures() {
    let start = Instant::now();
    let unit = |i, j| PolyMatrix::unit(3, i, j);
    let m1 = &unit(0, 0) + &unit(1, 0); // E11+E21
    let m2 = &unit(1, 1) - &unit(1, 0); // −E21+E22
    let tail = GcElement::term(3, 2, unit(2, 2)).unwrap(); // J^2_{E33}

    // T3 = J^1_{I3} + J^0_{M1} + (∂+1)J^0_{M2} + J^2_{E33}
    let t3 = GcElement::term(3, 1, PolyMatrix::identity(3))
        .unwrap()
        .add(
            &GcElement::term(
                3,
                0,
                &m1 + &m2.scale_poly(&MPoly::linear_in_del(&s(1), &s(1))),
            )
            .unwrap(),
        )
        .unwrap()
        .add(&tail)
        .unwrap();
    // T4 = J^1_{I3} + ∂J^0_{M1} + (∂+1)J^0_{M2} + J^2_{E33}
    let t4 = GcElement::term(3, 1, PolyMatrix::identity(3))
        .unwrap()
        .add(
            &GcElement::term(
                3,
                0,
                &m1.scale_poly(&MPoly::del())
                    + &m2.scale_poly(&MPoly::linear_in_del(&s(1), &s(1))),
            )
            .unwrap(),
        )
        .unwrap()
        .add(&tail)
        .unwrap();

    for (name, t) in [("T3", &t3), ("T4", &t4)] {
        let cert = certify(t);
        assert_eq!(cert.degree, Some(2), "acceptance 03: FAIL — {name} degree");
        assert!(
            cert.is_virasoro,
            "acceptance 03: FAIL — {name} is not a Virasoro element: the residual \
             [{name} λ {name}] − (∂+2λ){name} = {} is nonzero (supported on the E33 \
             corner where C·D₂·C = E₃₃ ≠ 0); see README, section \"Build and test\"",
            cert.residual
        );
        assert_eq!(
            cert.is_standard,
            Some(false),
            "acceptance 03: FAIL — {name} standardness"
        );
    }
    report(3, "gc_3 fixtures", start, Some(Duration::from_secs(1)));
}

/// Criterion 4: Grid classification: the degree-one grids over N=1, {−1,0,1}, deg ≤ 1
/// and N=2, {0,1}, deg 0 produce zero counterexamples. Under 5 min.
#[test]
fn acceptance_04_grid_classification() {
    let start = Instant::now();
    let r1 = classify_deg1_grid(1, &[s(-1), s(0), s(1)], 1);
    assert!(
        r1.counterexamples.is_empty(),
        "acceptance 04: FAIL — N=1 grid found {} counterexamples",
        r1.counterexamples.len()
    );
    assert_eq!(r1.candidates, 81);
    let r2 = classify_deg1_grid(2, &[s(0), s(1)], 0);
    assert!(
        r2.counterexamples.is_empty(),
        "acceptance 04: FAIL — N=2 grid found {} counterexamples",
        r2.counterexamples.len()
    );
    assert_eq!(r2.candidates, 256);
    assert!(r1.virasoro_found > 0 && r2.virasoro_found > 0);
    report(4, "grid classification", start, Some(Duration::from_secs(300)));
}

/// Rank-`r` idempotent of `M_n` conjugated by `w`.
fn rand_idempotent(n: usize, r: usize, w: &PolyMatrix) -> PolyMatrix {
    let mut d = PolyMatrix::zeros(n, n);
    for i in 0..r {
        d[(i, i)] = MPoly::one();
    }
    conjugate(w, &d)
}

fn rand_matrix(rng: &mut StdRng, n: usize) -> PolyMatrix {
    let grid: Vec<Vec<Scalar>> = (0..n)
        .map(|_| (0..n).map(|_| s(rng.gen_range(-3..=3))).collect())
        .collect();
    PolyMatrix::from_scalar_grid(&grid).unwrap()
}

/// Criterion 5: Constructor soundness over at least 50 randomized valid parameter sets:
/// every output passes the Virasoro test exactly; non-standard constructions
/// fail the standardness test. Under 30 s.
#[test]
fn acceptance_05_constructor_soundness() {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(0xA5);
    let mut sets = 0u32;

    // make_standard_deg1: random idempotent, arbitrary mixer
    for _ in 0..20 {
        let n = rng.gen_range(2..=3);
        let rank = rng.gen_range(1..=n);
        let w = rand_invertible(&mut rng, n);
        let a_mat = rand_idempotent(n, rank, &w);
        let b_mat = rand_matrix(&mut rng, n);
        let form = if rng.gen_bool(0.5) {
            StandardDeg1Form::One
        } else {
            StandardDeg1Form::Two
        };
        let a = rand_scalar(&mut rng);
        let b = rand_scalar(&mut rng);
        let l = make_standard_deg1(form, &a, Some(&b), &a_mat, &b_mat).unwrap();
        let cert = certify(&l);
        assert!(cert.is_virasoro, "acceptance 05: FAIL — deg-1 constructor");
        assert_eq!(cert.is_standard, Some(true));
        sets += 1;
    }

    // make_standard_higher: B_i = X − A·X·A annihilates around A
    for _ in 0..15 {
        let n = rng.gen_range(2..=3);
        let rank = rng.gen_range(1..n);
        let w = rand_invertible(&mut rng, n);
        let a_mat = rand_idempotent(n, rank, &w);
        let mut terms = Vec::new();
        let mut deg = 2;
        for _ in 0..rng.gen_range(1..=2) {
            let x = rand_matrix(&mut rng, n);
            let b_i = &x - &(&(&a_mat * &x) * &a_mat);
            terms.push((deg, rand_nonzero_scalar(&mut rng), b_i));
            deg += rng.gen_range(1..=2);
        }
        let l = make_standard_higher(&a_mat, &terms).unwrap();
        let cert = certify(&l);
        assert!(cert.is_virasoro, "acceptance 05: FAIL — higher constructor");
        assert_eq!(cert.is_standard, Some(true));
        sets += 1;
    }

    // make_nonstandard T1/T2 in gc_2..3, T3/T4 in gc_4..5
    for round in 0..20 {
        let kind = match round % 4 {
            0 => NonStandardKind::T1,
            1 => NonStandardKind::T2,
            2 => NonStandardKind::T3,
            _ => NonStandardKind::T4,
        };
        let with_tail = matches!(kind, NonStandardKind::T3 | NonStandardKind::T4);
        let n = if with_tail {
            rng.gen_range(4..=5)
        } else {
            rng.gen_range(2..=3)
        };
        let w = rand_invertible(&mut rng, n);
        // orthogonal rank-one idempotents E11, E22 (and E33 for the tail)
        let a1 = conjugate(&w, &PolyMatrix::unit(n, 0, 0));
        let a2 = conjugate(&w, &PolyMatrix::unit(n, 1, 1));
        // mixers with nonzero, non-proportional A_i B_i A_i
        let (b1, b2) = loop {
            let b1 = rand_matrix(&mut rng, n);
            let b2 = rand_matrix(&mut rng, n);
            let m1 = &(&a1 * &b1) * &a1;
            let m2 = &(&a2 * &b2) * &a2;
            if m1.is_zero() || m2.is_zero() {
                continue;
            }
            break (b1, b2);
        };
        let a_scalar = rand_scalar(&mut rng);
        let blocks = vec![
            NsBlock {
                a: a_scalar.clone(),
                idempotent: a1,
                mixer: b1,
            },
            NsBlock {
                a: &a_scalar + &rand_nonzero_scalar(&mut rng),
                idempotent: a2,
                mixer: b2,
            },
        ];
        let tail = with_tail.then(|| {
            let c = conjugate(&w, &PolyMatrix::unit(n, 2, 2));
            let mut terms = Vec::new();
            for (offset, _) in [(3usize, ()), (4, ())].iter().take(n - 3) {
                terms.push((
                    rand_nonzero_scalar(&mut rng),
                    conjugate(&w, &PolyMatrix::unit(n, 2, *offset)),
                ));
            }
            NsTail {
                idempotent: c,
                terms,
            }
        });
        let l = make_nonstandard(kind, &blocks, tail.as_ref()).unwrap();
        let cert = certify(&l);
        assert!(
            cert.is_virasoro,
            "acceptance 05: FAIL — non-standard constructor output not Virasoro"
        );
        assert_eq!(
            cert.is_standard,
            Some(false),
            "acceptance 05: FAIL — non-standard constructor output is standard"
        );
        sets += 1;
    }
    assert!(sets >= 50, "only {sets} parameter sets");
    report(5, "constructor soundness", start, Some(Duration::from_secs(30)));
}

/// Criterion 6: Duals: `dual(M_{Δ,α}) = M_{1−Δ,−α}` table-exactly for 20 random pairs;
/// `dual(standard(α)) = dual-family(α)` for n ≤ 4, N ≤ 3; dual∘dual is the
/// identity on all recipes. Under 10 s.
#[test]
fn acceptance_06_duals() {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(0xA6);
    for _ in 0..20 {
        let delta = rand_scalar(&mut rng);
        let alpha = rand_scalar(&mut rng);
        let m = ConformalModule::vir_module(delta.clone(), alpha.clone());
        let d = dual_module(&m, 0).unwrap();
        let expected =
            ConformalModule::vir_module(Scalar::one() - &delta, -&alpha);
        assert!(
            d.tables_equal(&expected, 0).unwrap(),
            "acceptance 06: FAIL — vir dual mismatch at ({delta},{alpha})"
        );
    }
    for n in 1..=3usize {
        let alpha = rand_scalar(&mut rng);
        let std_m = ConformalModule::gc_standard(n, alpha.clone());
        let d = dual_module(&std_m, 4).unwrap();
        assert!(
            d.tables_equal(&ConformalModule::gc_dual(n, alpha), 4).unwrap(),
            "acceptance 06: FAIL — standard dual mismatch at N={n}"
        );
    }
    // involution across every recipe kind
    let recipes: Vec<ConformalModule> = vec![
        ConformalModule::vir_module(rand_scalar(&mut rng), rand_scalar(&mut rng)),
        ConformalModule::hv_module(
            rand_scalar(&mut rng),
            rand_scalar(&mut rng),
            rand_scalar(&mut rng),
        ),
        ConformalModule::gc_standard(2, rand_scalar(&mut rng)),
        ConformalModule::gc_dual(3, rand_scalar(&mut rng)),
        ConformalModule::direct_sum(vec![
            ConformalModule::gc_standard(2, rand_scalar(&mut rng)),
            ConformalModule::gc_dual(2, rand_scalar(&mut rng)),
        ])
        .unwrap(),
        ConformalModule::direct_sum(vec![
            ConformalModule::gc_standard(2, s(1)),
            ConformalModule::gc_standard(2, s(1)),
        ])
        .unwrap()
        .basis_change(rand_invertible(&mut rng, 4))
        .unwrap(),
    ];
    for m in &recipes {
        let dd = dual_module(&dual_module(m, 4).unwrap(), 4).unwrap();
        assert!(
            dd.tables_equal(m, 4).unwrap(),
            "acceptance 06: FAIL — dual∘dual is not the identity"
        );
    }
    report(6, "conformal duals", start, Some(Duration::from_secs(10)));
}

/// Criterion 7: The partition relations have exactly the solutions {(1,1), (0,−1)}.
#[test]
fn acceptance_07_partition_relations() {
    let start = Instant::now();
    let sols = solve_partition_relations();
    assert_eq!(
        sols,
        vec![(s(0), s(-1)), (s(1), s(1))],
        "acceptance 07: FAIL — solution set is {sols:?}"
    );
    report(7, "partition relations", start, None);
}

/// Criterion 8: The three combinatorial identities hold exactly for 0 ≤ n ≤ 10. Under 1 s.
#[test]
fn acceptance_08_combinatorial_identities() {
    let start = Instant::now();
    for n in 0..=10 {
        for which in [
            CombinatorialFormula::Telescope,
            CombinatorialFormula::TailShifted,
            CombinatorialFormula::TailPlain,
        ] {
            assert!(
                combinatorial_identity(which, n),
                "acceptance 08: FAIL — {which:?} at n = {n}"
            );
        }
    }
    report(8, "combinatorial identities", start, Some(Duration::from_secs(1)));
}

/// Criterion 9: Restricting along the canonical element `Π(L_{a,b})` on the standard
/// module is regular with every weight `1−a` and shift `b`, for 20 random
/// pairs. Under 5 s.
#[test]
fn acceptance_09_canonical_restriction() {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(0xA9);
    for round in 0..20 {
        let n = 1 + (round % 3) as usize;
        let a = rand_scalar(&mut rng);
        let b = rand_scalar(&mut rng);
        let m = ConformalModule::gc_standard(n, s(0));
        let report = check_regular(
            &m,
            &VirasoroSpec::Canonical {
                a: a.clone(),
                b: b.clone(),
            },
        )
        .unwrap();
        assert!(report.regular, "acceptance 09: FAIL — not regular");
        assert_eq!(report.weights.len(), n);
        for (delta, alpha) in &report.weights {
            assert_eq!(
                (delta, alpha),
                (&(Scalar::one() - &a), &b),
                "acceptance 09: FAIL — weight ({delta},{alpha}) at (a,b)=({a},{b})"
            );
        }
        // and the restricted module passes the Virasoro module axioms
        let g = canonical_embed(&make_gc1_virasoro(&a, &b), n).unwrap();
        let v = restrict_to_virasoro(&g, &m).unwrap();
        assert!(check_module_axioms(&v, 0).unwrap().is_empty());
    }
    report(9, "canonical restriction", start, Some(Duration::from_secs(5)));
}

/// Builds a random list of summand specs and the scrambled module; returns
/// (module, expected sorted summands).
fn random_scrambled_gc1(
    rng: &mut StdRng,
    max_summands: usize,
) -> (ConformalModule, Vec<(String, Scalar)>) {
    let count = rng.gen_range(1..=max_summands);
    let shift_pool: Vec<Scalar> = (0..3).map(|_| rand_scalar(rng)).collect();
    let mut parts = Vec::new();
    let mut expected = Vec::new();
    for _ in 0..count {
        let alpha = shift_pool[rng.gen_range(0..shift_pool.len())].clone();
        if rng.gen_bool(0.5) {
            parts.push(ConformalModule::gc_standard(1, alpha.clone()));
            expected.push(("standard".to_string(), alpha));
        } else {
            parts.push(ConformalModule::gc_dual(1, alpha.clone()));
            expected.push(("dual".to_string(), alpha));
        }
    }
    let m = ConformalModule::direct_sum(parts).unwrap();
    let k = m.rank();

    // group equal (kind, alpha) positions into isotypic blocks
    let mut blocks: BTreeMap<(String, String), Vec<usize>> = BTreeMap::new();
    for (i, (kind, alpha)) in expected.iter().enumerate() {
        blocks
            .entry((kind.clone(), alpha.to_string()))
            .or_default()
            .push(i);
    }
    // block-diagonal scramble followed by a random permutation
    let mut u = PolyMatrix::zeros(k, k);
    for indices in blocks.values() {
        let b = rand_invertible(rng, indices.len());
        for (r, &ir) in indices.iter().enumerate() {
            for (c, &ic) in indices.iter().enumerate() {
                u[(ir, ic)] = b[(r, c)].clone();
            }
        }
    }
    let mut perm: Vec<usize> = (0..k).collect();
    for i in (1..k).rev() {
        perm.swap(i, rng.gen_range(0..=i));
    }
    let mut p = PolyMatrix::zeros(k, k);
    for (new, &old) in perm.iter().enumerate() {
        p[(old, new)] = MPoly::one();
    }
    let scrambled = m.basis_change(&u * &p).unwrap();
    expected.sort();
    (scrambled, expected)
}

fn summand_multiset(report: &DecompositionReport) -> Vec<(String, Scalar)> {
    let mut out = Vec::new();
    for sm in &report.summands {
        let kind = match sm.kind {
            SummandKind::Standard => "standard",
            SummandKind::Dual => "dual",
        };
        for _ in 0..sm.multiplicity {
            out.push((kind.to_string(), sm.alpha.clone()));
        }
    }
    out.sort();
    out
}

/// Criterion 10: gc_1 round-trip: 50 random direct sums of up to 5 standard/dual
/// summands with random shifts, scrambled by regularity-preserving constant
/// changes, decompose back to the exact summand multiset with a verified
/// basis change for n ≤ 4. Under 1 min.
#[test]
fn acceptance_10_gc1_round_trip() {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(0xA10);
    let pairs = [
        ((s(0), s(0)), (s(1), s(0))),
        ((s(1), s(0)), (s(2), Scalar::ratio(-1, 2))),
        ((s(-1), Scalar::ratio(1, 3)), (s(0), s(0))),
    ];
    for round in 0..50 {
        let (m, expected) = random_scrambled_gc1(&mut rng, 5);
        let ((a1, b1), (a2, b2)) = &pairs[round % pairs.len()];
        let report = decompose_gc1(&m, (a1, b1), (a2, b2), 4).unwrap_or_else(|e| {
            panic!("acceptance 10: FAIL — round {round}: {e}")
        });
        assert_eq!(
            summand_multiset(&report),
            expected,
            "acceptance 10: FAIL — summand multiset mismatch in round {round}"
        );
        // the conjugation property is re-verified here explicitly
        let u = &report.basis_change;
        let u_inv = u.inverse().unwrap();
        let canonical: Vec<ConformalModule> = report
            .summands
            .iter()
            .flat_map(|sm| {
                std::iter::repeat_with(move || match sm.kind {
                    SummandKind::Standard => ConformalModule::gc_standard(1, sm.alpha.clone()),
                    SummandKind::Dual => ConformalModule::gc_dual(1, sm.alpha.clone()),
                })
                .take(sm.multiplicity)
            })
            .collect();
        let canonical = ConformalModule::direct_sum(canonical).unwrap();
        for n in 0..=4u32 {
            let f = m.act_key(&GenKey::GcUnit(n, 0, 0)).unwrap();
            let expected_f = canonical.act_key(&GenKey::GcUnit(n, 0, 0)).unwrap();
            assert_eq!(
                &(&u_inv * &f) * u,
                expected_f,
                "acceptance 10: FAIL — conjugated table differs at n={n}"
            );
        }
    }
    report(10, "gc_1 round-trip", start, Some(Duration::from_secs(60)));
}

/// Criterion 11: gc_N round-trip with multiplicities: for N in {2,3} and
/// multiplicities up to 2, isotypic-block scrambles decompose back to the
/// exact multiplicities and shifts, with all similarity residuals
/// `Φ(E_ij)P − P(I_m⊗E_ij)` equal to zero. Under 2 min.
#[test]
fn acceptance_11_gcn_round_trip() {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(0xA11);
    for n in [2usize, 3] {
        for (m_std, m_dual) in [(1usize, 1usize), (2, 1), (1, 2), (2, 2)] {
            let alpha = rand_scalar(&mut rng);
            let alpha_dual = loop {
                let x = rand_scalar(&mut rng);
                if x != alpha {
                    break x;
                }
            };
            let mut parts = Vec::new();
            for _ in 0..m_std {
                parts.push(ConformalModule::gc_standard(n, alpha.clone()));
            }
            for _ in 0..m_dual {
                parts.push(ConformalModule::gc_dual(n, alpha_dual.clone()));
            }
            let base = ConformalModule::direct_sum(parts).unwrap();
            // scramble inside each isotypic block
            let k = base.rank();
            let std_size = m_std * n;
            let mut u = PolyMatrix::zeros(k, k);
            let b1 = rand_invertible(&mut rng, std_size);
            let b2 = rand_invertible(&mut rng, k - std_size);
            for r in 0..std_size {
                for c in 0..std_size {
                    u[(r, c)] = b1[(r, c)].clone();
                }
            }
            for r in 0..(k - std_size) {
                for c in 0..(k - std_size) {
                    u[(std_size + r, std_size + c)] = b2[(r, c)].clone();
                }
            }
            let scrambled = base.basis_change(u).unwrap();

            let report =
                decompose_gcn(&scrambled, (&s(0), &s(0)), (&s(1), &s(0)), 4).unwrap_or_else(
                    |e| panic!("acceptance 11: FAIL — N={n} ({m_std},{m_dual}): {e}"),
                );
            let mut expected = vec![
                ("standard".to_string(), alpha.clone(), m_std),
                ("dual".to_string(), alpha_dual.clone(), m_dual),
            ];
            expected.sort();
            let mut got: Vec<(String, Scalar, usize)> = report
                .summands
                .iter()
                .map(|sm| {
                    (
                        match sm.kind {
                            SummandKind::Standard => "standard".to_string(),
                            SummandKind::Dual => "dual".to_string(),
                        },
                        sm.alpha.clone(),
                        sm.multiplicity,
                    )
                })
                .collect();
            got.sort();
            assert_eq!(got, expected, "acceptance 11: FAIL — summands at N={n}");

            // rebuild the standard-block map from the scrambled action and
            // check the similarity residuals directly
            let std_indices: Vec<usize> = (0..std_size).collect();
            let mut values = BTreeMap::new();
            for i in 0..n {
                for j in 0..n {
                    let f0 = scrambled.act_gc(0, &PolyMatrix::unit(n, i, j)).unwrap();
                    values.insert((i, j), f0.submatrix(&std_indices, &std_indices));
                }
            }
            let phi = PhiMap::new(n, PhiKind::Homomorphism, values).unwrap();
            phi.check_multiplicative().unwrap();
            let p = skolem_noether_similarity(&phi).unwrap();
            for r in similarity_residuals(&phi, &p).unwrap() {
                assert!(
                    r.is_zero(),
                    "acceptance 11: FAIL — nonzero similarity residual at N={n}"
                );
            }
        }
    }
    report(11, "gc_N round-trip", start, Some(Duration::from_secs(120)));
}

/// Criterion 12: Module axioms hold for every recipe family at cutoff 4 and N ≤ 3, and
/// a deliberately corrupted table fails with a witness naming the offending
/// pair. Under 1 min.
#[test]
fn acceptance_12_module_axioms() {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(0xA12);
    let modules: Vec<(String, ConformalModule, u32)> = vec![
        (
            "vir".into(),
            ConformalModule::vir_module(rand_scalar(&mut rng), rand_scalar(&mut rng)),
            4,
        ),
        (
            "hv".into(),
            ConformalModule::hv_module(
                rand_scalar(&mut rng),
                rand_scalar(&mut rng),
                rand_scalar(&mut rng),
            ),
            4,
        ),
        ("gc_standard N=1".into(), ConformalModule::gc_standard(1, rand_scalar(&mut rng)), 4),
        ("gc_standard N=2".into(), ConformalModule::gc_standard(2, rand_scalar(&mut rng)), 4),
        ("gc_standard N=3".into(), ConformalModule::gc_standard(3, rand_scalar(&mut rng)), 4),
        ("gc_dual N=1".into(), ConformalModule::gc_dual(1, rand_scalar(&mut rng)), 4),
        ("gc_dual N=2".into(), ConformalModule::gc_dual(2, rand_scalar(&mut rng)), 4),
        ("gc_dual N=3".into(), ConformalModule::gc_dual(3, rand_scalar(&mut rng)), 4),
        (
            "direct_sum N=3".into(),
            ConformalModule::direct_sum(vec![
                ConformalModule::gc_standard(3, rand_scalar(&mut rng)),
                ConformalModule::gc_dual(3, rand_scalar(&mut rng)),
            ])
            .unwrap(),
            4,
        ),
        (
            "basis_change N=2".into(),
            ConformalModule::gc_standard(2, rand_scalar(&mut rng))
                .basis_change(rand_invertible(&mut rng, 2))
                .unwrap(),
            4,
        ),
        (
            "basis_change N=3".into(),
            ConformalModule::gc_dual(3, rand_scalar(&mut rng))
                .basis_change(rand_invertible(&mut rng, 3))
                .unwrap(),
            4,
        ),
    ];
    for (name, m, nmax) in &modules {
        let witnesses = check_module_axioms(m, *nmax).unwrap();
        assert!(
            witnesses.is_empty(),
            "acceptance 12: FAIL — {name} violates the axioms: {:?} vs {:?} at ({}, {})",
            witnesses[0].left,
            witnesses[0].right,
            witnesses[0].m,
            witnesses[0].n
        );
    }

    // corrupted explicit table: perturb the degree-2 action of E11
    let base = ConformalModule::gc_standard(2, s(0)).materialize(8).unwrap();
    let spec = ModuleSpec::from_module(&base);
    let RecipeSpec::Explicit {
        rank,
        n_max,
        mut tables,
    } = spec.recipe
    else {
        unreachable!()
    };
    for t in &mut tables {
        if t.n == Some(2) && t.i == Some(1) && t.j == Some(1) {
            t.matrix[0][0] = &t.matrix[0][0] + &MPoly::lambda();
        }
    }
    let corrupted = ModuleSpec {
        algebra: "gc".into(),
        n: Some(2),
        recipe: RecipeSpec::Explicit {
            rank,
            n_max,
            tables,
        },
        basis_change: None,
    }
    .to_module()
    .unwrap();
    let witnesses = check_module_axioms(&corrupted, 4).unwrap();
    assert!(
        !witnesses.is_empty(),
        "acceptance 12: FAIL — corrupted table passed the axioms"
    );
    assert!(
        witnesses.iter().any(|w| (w.m == 2 || w.n == 2)
            && (w.left.contains("E11") || w.right.contains("E11"))),
        "acceptance 12: FAIL — no witness names the corrupted generator"
    );
    report(12, "module axioms", start, Some(Duration::from_secs(60)));
}
