mod common;

use std::cmp::Ordering;
use std::collections::HashSet;

use proptest::prelude::*;
use ramsey_core::boolmat::{self, enumerate_ba, enumerate_oba, PermutationMatrix};
use ramsey_core::ffmat::{self, enumerate_full_rank, enumerate_grassmannian, rcef_decompose, tau, PrimeFieldMatrix};
use ramsey_core::orders::{self, compare_antilex, compose_epi, enumerate_epi, FieldOrder, FinMap, LinearOrder, RigidSurjection};

const BUDGET: usize = 1 << 22;

#[test]
fn epi_counts_match_stirling() {
    for n in 1..=7 {
        let mut total = 0;
        for k in 1..=n {
            let c = enumerate_epi(n, k).len() as u64;
            assert_eq!(c, common::stirling2(n, k), "n={n} k={k}");
            total += c;
        }
        assert_eq!(total, common::bell(n));
    }
}

#[test]
fn composition_is_associative_with_identity() {
    for n in 1..=5 {
        for m in 1..=n {
            for l in 1..=m {
                let fs = enumerate_epi(n, m);
                let gs = enumerate_epi(m, l);
                for f in &fs {
                    assert_eq!(&compose_epi(f, &RigidSurjection::identity(m)).unwrap(), f);
                    assert_eq!(&compose_epi(&RigidSurjection::identity(n), f).unwrap(), f);
                    for g in &gs {
                        let fg = compose_epi(f, g).unwrap();
                        assert!(orders::is_rigid_surjection(fg.map(), l));
                        for k in 1..=l {
                            for h in enumerate_epi(l, k) {
                                let left = compose_epi(&fg, &h).unwrap();
                                let right = compose_epi(f, &compose_epi(g, &h).unwrap()).unwrap();
                                assert_eq!(left, right);
                            }
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn double_tetris_lowers_by_two() {
    for n in 1..=5 {
        for k in 2..=3u32 {
            for v in orders::enumerate_fin(k, n) {
                let f = FinMap::new(k, v.clone()).unwrap();
                let tt = orders::tetris(&orders::tetris(&f).unwrap()).unwrap();
                let expect: Vec<u32> = v.iter().map(|&x| x.saturating_sub(2)).collect();
                assert_eq!(tt.values(), &expect[..]);
            }
        }
    }
}

fn all_vectors(p: u32, k: usize) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..k {
        out = out.into_iter().flat_map(|v| (0..p).map(move |a| [v.clone(), vec![a]].concat())).collect();
    }
    out
}

#[test]
fn antilex_is_a_total_order() {
    for (p, k) in [(2u32, 3usize), (3, 2)] {
        let order = FieldOrder::natural(p);
        let vs = all_vectors(p, k);
        let cmp = |a: &Vec<u32>, b: &Vec<u32>| compare_antilex(a, b, &order).unwrap();
        for a in &vs {
            for b in &vs {
                assert_eq!(cmp(a, b), cmp(b, a).reverse());
                assert_eq!(cmp(a, b) == Ordering::Equal, a == b);
                for c in &vs {
                    if cmp(a, b) != Ordering::Greater && cmp(b, c) != Ordering::Greater {
                        assert_ne!(cmp(a, c), Ordering::Greater);
                    }
                }
            }
        }
        // the listed labels follow the comparison
        let lo = LinearOrder::antilex(&order, k);
        let labels = lo.labels().unwrap();
        assert!(labels.windows(2).all(|w| cmp(&w[0], &w[1]) == Ordering::Less));
    }
}

fn all_gl(p: u32, k: usize) -> Vec<PrimeFieldMatrix> {
    enumerate_full_rank(p, k, k, BUDGET).unwrap()
}

#[test]
fn decomposition_is_sound_and_unique() {
    for p in [2u32, 3] {
        for k in 1..=3usize {
            let gl = all_gl(p, k);
            for n in k..=4usize {
                if p == 3 && k == 3 {
                    continue; // covered by the Grassmannian reduction below
                }
                for a in enumerate_full_rank(p, n, k, BUDGET).unwrap() {
                    let d = rcef_decompose(&a).unwrap();
                    assert_eq!(a.mul(d.tau.matrix()).unwrap(), d.red);
                    assert!(d.red.is_rcef());
                    let hits = gl.iter().filter(|g| a.mul(g).unwrap().is_rcef()).count();
                    assert_eq!(hits, 1, "{a:?}");
                }
            }
        }
    }
}

#[test]
fn uniqueness_via_grassmannian_for_large_gl() {
    // Every A is R·G with R the RCEF of its column space; τ(A) is unique iff
    // R·Γ is RCEF only for Γ = Id.
    let (p, k) = (3u32, 3usize);
    let gl = all_gl(p, k);
    let id = PrimeFieldMatrix::identity(p, k).unwrap();
    for n in k..=4 {
        let reps = enumerate_grassmannian(p, k, n, BUDGET).unwrap();
        let reps_set: HashSet<_> = reps.iter().cloned().collect();
        for r in &reps {
            for g in &gl {
                assert_eq!(r.mul(g).unwrap().is_rcef(), g == &id);
            }
        }
        for a in enumerate_full_rank(p, n, k, BUDGET).unwrap() {
            let d = rcef_decompose(&a).unwrap();
            assert!(reps_set.contains(&d.red));
            assert_eq!(a.mul(d.tau.matrix()).unwrap(), d.red);
        }
    }
}

#[test]
fn tau_is_right_equivariant() {
    let p = 2;
    for k in 1..=2usize {
        let gl = all_gl(p, k);
        for n in k..=4 {
            for a in enumerate_full_rank(p, n, k, BUDGET).unwrap() {
                let d = rcef_decompose(&a).unwrap();
                for g in &gl {
                    let ag = a.mul(g).unwrap();
                    let dg = rcef_decompose(&ag).unwrap();
                    assert_eq!(dg.red, d.red);
                    let ginv = g.inverse().unwrap();
                    assert_eq!(dg.tau.matrix(), &ginv.mul(d.tau.matrix()).unwrap());
                }
            }
        }
    }
}

#[test]
fn tau_ignores_rcef_left_factors() {
    for p in [2u32, 3] {
        for n in 1..=4usize {
            for m in 1..=n.min(3) {
                let rs = enumerate_grassmannian(p, m, n, BUDGET).unwrap();
                for k in 1..=m.min(2) {
                    let as_ = enumerate_full_rank(p, m, k, BUDGET).unwrap();
                    for r in &rs {
                        for a in &as_ {
                            assert_eq!(tau(&r.mul(a).unwrap()).unwrap(), tau(a).unwrap());
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn echelon_idempotence() {
    for a in enumerate_full_rank(3, 3, 2, BUDGET).unwrap() {
        let r = a.rref();
        assert_eq!(r.rref(), r);
        let d = rcef_decompose(&a).unwrap();
        let again = rcef_decompose(&d.red).unwrap();
        assert_eq!(again.red, d.red);
        assert_eq!(again.tau.matrix(), &PrimeFieldMatrix::identity(3, 2).unwrap());
    }
}

#[test]
fn phi_is_a_bijection_onto_rcef() {
    let p = 2;
    for k in 1..=2usize {
        let codomain = LinearOrder::antilex(&FieldOrder::natural(p), k);
        for n in 1..=4usize {
            let size = (p as usize).pow(k as u32);
            let images: Vec<PrimeFieldMatrix> =
                enumerate_epi(n, size).iter().map(|f| ffmat::phi(f, &codomain, p, k).unwrap()).collect();
            let distinct: HashSet<_> = images.iter().cloned().collect();
            assert_eq!(distinct.len(), images.len());
            let target: HashSet<_> = enumerate_full_rank(p, n, k, BUDGET).unwrap().into_iter().filter(|m| m.is_rcef()).collect();
            // the images are RCEF matrices that additionally contain every vector of F^k as a row
            for m in &distinct {
                assert!(target.contains(m), "{m:?}");
            }
            let expected: HashSet<_> = target
                .iter()
                .filter(|m| {
                    let rows: HashSet<Vec<u32>> = m.to_rows().into_iter().collect();
                    rows.len() == size && orders::is_rigid_surjection(&row_ranks(m, &codomain), size)
                })
                .cloned()
                .collect();
            assert_eq!(distinct, expected, "n={n} k={k}");
        }
    }
}

fn row_ranks(m: &PrimeFieldMatrix, codomain: &LinearOrder) -> Vec<u32> {
    m.to_rows().iter().map(|r| codomain.position(r).unwrap() as u32).collect()
}

#[test]
fn rref_characterization_agrees() {
    let p = 2;
    for k in 1..=2usize {
        for n in k..=4usize {
            for at in enumerate_full_rank(p, n, k, BUDGET).unwrap() {
                let a = at.transpose();
                let (lhs, rhs) = ffmat::rref_characterization(&a).unwrap();
                assert_eq!(lhs, rhs, "{a:?}");
            }
        }
    }
}

#[test]
fn grassmannian_counts() {
    for p in [2u32, 3] {
        for n in 1..=5usize {
            for k in 1..=n {
                let reps = enumerate_grassmannian(p, k, n, BUDGET).unwrap();
                assert_eq!(reps.len().to_string(), common::gaussian_oracle(p, k, n).to_string());
                assert!(reps.iter().all(|r| r.is_rcef() && r.rank() == k));
            }
        }
    }
}

#[test]
fn boolean_round_trip_and_counts() {
    for n in 1..=6 {
        for k in 1..=3.min(n) {
            let epis = enumerate_epi(n, k);
            for f in &epis {
                assert_eq!(&boolmat::boolean_to_epi(&boolmat::epi_to_boolean(f)).unwrap(), f);
            }
            let oba = enumerate_oba(n, k).len() as u64;
            let ba = enumerate_ba(n, k).len() as u64;
            assert_eq!(oba, common::stirling2(n, k));
            assert_eq!(ba, common::factorial(k) * oba);
        }
    }
}

#[test]
fn pi_is_the_unique_sorting_permutation() {
    for n in 1..=5 {
        for k in 1..=3.min(n) {
            let perms = PermutationMatrix::all(k);
            for b in enumerate_ba(n, k) {
                let good: Vec<&PermutationMatrix> = perms.iter().filter(|s| b.permute(s).unwrap().is_oba()).collect();
                assert_eq!(good.len(), 1);
                assert_eq!(good[0], &boolmat::pi(&b));
            }
        }
    }
}

fn matrix_strategy(p: u32, rows: usize, cols: usize) -> impl Strategy<Value = PrimeFieldMatrix> {
    proptest::collection::vec(0..p, rows * cols).prop_map(move |e| PrimeFieldMatrix::new(p, rows, cols, e).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn prop_decomposition_on_larger_matrices(a in (prop_oneof![Just(2u32), Just(3), Just(5)], 3usize..=7, 1usize..=3)
        .prop_flat_map(|(p, n, k)| matrix_strategy(p, n, k.min(n))))
    {
        prop_assume!(a.has_full_column_rank());
        let d = rcef_decompose(&a).unwrap();
        prop_assert_eq!(a.mul(d.tau.matrix()).unwrap(), d.red.clone());
        prop_assert!(d.red.is_rcef());
        prop_assert_eq!(d.red.transpose(), d.red.transpose().rref());
    }

    #[test]
    fn prop_tau2_reconstructs(a in (prop_oneof![Just(2u32), Just(3)], 1usize..=5).prop_flat_map(|(p, n)| matrix_strategy(p, n, n))) {
        prop_assume!(a.rank() > 0);
        let t = ffmat::tau2(&a).unwrap();
        prop_assert_eq!(t.a0.mul(t.gamma.matrix()).unwrap().mul(&t.a1.transpose()).unwrap(), a.clone());
        prop_assert!(t.a0.is_rcef() && t.a1.is_rcef());
        prop_assert_eq!(t.gamma.size(), a.rank());
    }

    #[test]
    fn prop_epi_compose_stays_rigid(n in 1usize..=7, seed in any::<u64>()) {
        let mut r = common::rng(seed);
        use rand::Rng;
        let m = r.random_range(1..=n);
        let l = r.random_range(1..=m);
        let fs = enumerate_epi(n, m);
        let gs = enumerate_epi(m, l);
        let f = &fs[r.random_range(0..fs.len())];
        let g = &gs[r.random_range(0..gs.len())];
        let c = compose_epi(f, g).unwrap();
        prop_assert!(orders::is_rigid_surjection(c.map(), l));
        prop_assert_eq!(c.map().to_vec(), f.map().iter().map(|&x| g.map()[x as usize]).collect::<Vec<_>>());
    }
}
