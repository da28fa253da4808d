//! Acceptance suite: one PASS/FAIL line per criterion, with pinned limits.
//! Every comparison is exact; the only tolerance is the wall-clock limit.

mod common;

use std::collections::HashSet;
use std::panic::{self, AssertUnwindSafe};
use std::time::Instant;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::Rng;
use ramsey_core::boolmat::{enumerate_ba, enumerate_oba};
use ramsey_core::colorsearch::{self, instance, min_n, verify_witness, Family, SearchConfig, Status};
use ramsey_core::ffmat::{self, enumerate_full_rank, enumerate_grassmannian, rcef_decompose, tau, PrimeFieldMatrix};
use ramsey_core::linalg::{self, QMatrix};
use ramsey_core::metricfree::{self, FiniteMetricSpace, FreeVector};
use ramsey_core::normgeo::{
    alpha, amalgam, bm_upper, bound_dim_h, bound_n_infty, dim_h_parameters, eps_net, gap_metric, omega, op_norm, sandwich,
    shell_witness, BmEffort, NetMode, PolyhedralSpace,
};
use ramsey_core::orders::enumerate_epi;
use ramsey_core::rational::{int, ratio, Rational};

/// Minimal `n` for the Gowers instance `(k=1, m=2, r=2)`, fixed at first derivation.
const GOWERS_MIN_N: usize = 5;

const BUDGET: usize = 1 << 22;

type Check = fn() -> Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

// 1: echelon factorisation suite

fn gl(p: u32, k: usize) -> Vec<PrimeFieldMatrix> {
    enumerate_full_rank(p, k, k, BUDGET).unwrap()
}

fn criterion_1() -> Result<String, String> {
    let mut matrices = 0usize;
    let mut gl_checks = 0usize;
    let mut rng = common::rng(1);
    for p in [2u32, 3] {
        for k in 1..=3usize {
            let group = gl(p, k);
            let id = PrimeFieldMatrix::identity(p, k).unwrap();
            for n in k..=4usize {
                let all = enumerate_full_rank(p, n, k, BUDGET).unwrap();
                let full_gl_per_matrix = all.len() * group.len() <= 4_000_000;
                let reps: HashSet<PrimeFieldMatrix> = enumerate_grassmannian(p, k, n, BUDGET).unwrap().into_iter().collect();
                if !full_gl_per_matrix {
                    // every A is R·G for an RCEF R; uniqueness reduces to R·Γ RCEF iff Γ = Id
                    for r in &reps {
                        for g in &group {
                            gl_checks += 1;
                            ensure(r.mul(g).unwrap().is_rcef() == (g == &id), || format!("R·Γ uniqueness fails for R={r:?}"))?;
                        }
                    }
                }
                for a in &all {
                    matrices += 1;
                    let d = rcef_decompose(a).unwrap();
                    ensure(a.mul(d.tau.matrix()).unwrap() == d.red && d.red.is_rcef(), || format!("A·τ not RCEF for {a:?}"))?;
                    ensure(reps.contains(&d.red), || format!("red({a:?}) is not the RCEF of its column space"))?;
                    let gammas: Vec<&PrimeFieldMatrix> = if full_gl_per_matrix {
                        let hits = group.iter().filter(|g| a.mul(g).unwrap().is_rcef()).count();
                        gl_checks += group.len();
                        ensure(hits == 1, || format!("{hits} GL elements put {a:?} in RCEF"))?;
                        group.iter().collect()
                    } else {
                        (0..4).map(|_| &group[rng.random_range(0..group.len())]).collect()
                    };
                    for g in gammas {
                        let dg = rcef_decompose(&a.mul(g).unwrap()).unwrap();
                        ensure(dg.red == d.red, || format!("red(AΓ) != red(A) for {a:?}"))?;
                        let expect = g.inverse().unwrap().mul(d.tau.matrix()).unwrap();
                        ensure(dg.tau.matrix() == &expect, || format!("τ(AΓ) != Γ⁻¹τ(A) for {a:?}"))?;
                    }
                }
            }
        }
    }
    let mut left = 0usize;
    for p in [2u32, 3] {
        for n in 1..=4usize {
            for m in 1..=n.min(3) {
                let rs = enumerate_grassmannian(p, m, n, BUDGET).unwrap();
                for k in 1..=m {
                    for a in enumerate_full_rank(p, m, k, BUDGET).unwrap() {
                        let ta = tau(&a).unwrap();
                        for r in &rs {
                            left += 1;
                            ensure(tau(&r.mul(&a).unwrap()).unwrap() == ta, || format!("τ(RA) != τ(A) for R={r:?}, A={a:?}"))?;
                        }
                    }
                }
            }
        }
    }
    Ok(format!("{matrices} matrices, {gl_checks} GL uniqueness checks, {left} left-RCEF checks, 0 mismatches"))
}

// 2: Φ/RREF characterisation

fn criterion_2() -> Result<String, String> {
    let mut checked = 0;
    let mut rref = 0;
    for k in 1..=2usize {
        for n in k..=4usize {
            for at in enumerate_full_rank(2, n, k, BUDGET).unwrap() {
                let a = at.transpose();
                let (lhs, rhs) = ffmat::rref_characterization(&a).map_err(|e| e.to_string())?;
                ensure(lhs == rhs, || format!("predicates disagree on {a:?}"))?;
                checked += 1;
                rref += usize::from(lhs);
            }
        }
    }
    Ok(format!("{checked} full-rank matrices ({rref} in RREF), 0 discrepancies"))
}

// 3: counting identities

fn criterion_3() -> Result<String, String> {
    let mut cases = 0;
    for n in 1..=6usize {
        for k in 1..=3.min(n) {
            let s = common::stirling2(n, k);
            let epi = enumerate_epi(n, k).len() as u64;
            let oba = enumerate_oba(n, k).len() as u64;
            let ba = enumerate_ba(n, k).len() as u64;
            ensure(epi == s && oba == s, || format!("n={n} k={k}: epi {epi}, oba {oba}, Stirling {s}"))?;
            ensure(ba == common::factorial(k) * s, || format!("n={n} k={k}: ba {ba} != {}!·{s}", k))?;
            cases += 1;
        }
    }
    for p in [2u32, 3] {
        for n in 1..=5usize {
            for k in 1..=n {
                let got = enumerate_grassmannian(p, k, n, BUDGET).unwrap().len();
                let want = common::gaussian_oracle(p, k, n);
                ensure(BigUint::from(got) == want, || format!("|Gr({k},F_{p}^{n})| = {got}, oracle {want}"))?;
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} exact counts"))
}

// 4: Fano milestone

fn criterion_4() -> Result<String, String> {
    let fam = Family::Glr { p: 2, k: 1, m: 2, r: 2 };
    let rep = min_n(&fam, 6, &SearchConfig::default()).map_err(|e| e.to_string())?;
    ensure(rep.min_n == Some(3), || format!("min_n = {:?}", rep.min_n))?;
    let two = rep.steps.iter().find(|s| s.n == 2).ok_or("no step at n = 2")?;
    let w = two.outcome.witness.clone().ok_or("no witness at n = 2")?;
    let p2 = instance(&fam, 2).unwrap();
    ensure(two.outcome.status == Status::BadColoringFound && verify_witness(&p2, &w), || "n = 2 witness invalid".into())?;
    ensure(common::naive_bad_coloring(&p2).is_some(), || "oracle finds no bad colouring at n = 2".into())?;
    let p3 = instance(&fam, 3).unwrap();
    ensure(p3.ground_size() == 7, || format!("ground {} at n = 3", p3.ground_size()))?;
    ensure(common::naive_bad_coloring(&p3).is_none(), || "oracle finds a bad colouring at n = 3".into())?;
    Ok(format!("min_n = 3, witness {w:?} at n = 2, 2^7 oracle agrees at n = 3"))
}

// 5: solver against naive enumeration

fn fixture_families() -> Vec<Family> {
    let mut out = Vec::new();
    for kr in 1..=3 {
        for ks in kr..=4 {
            out.push(Family::Drt { kr, ks, r: 2 });
        }
    }
    for p in [2u32, 3] {
        for k in 1..=2 {
            for m in k..=3 {
                out.push(Family::Glr { p, k, m, r: 2 });
                out.push(Family::FfFactor { p, k, m, r: 2 });
            }
        }
    }
    for k in 1..=2 {
        for m in k..=3 {
            out.push(Family::BoolFactor { k, m, r: 2 });
        }
    }
    for k in 1..=2 {
        for m in 1..=3 {
            out.push(Family::Gowers { k, m, r: 2 });
        }
    }
    out
}

fn criterion_5() -> Result<String, String> {
    let mut instances = 0;
    let mut bad = 0;
    for fam in fixture_families() {
        for n in fam.min_size()..=fam.min_size() + 6 {
            let Ok(p) = instance(&fam, n) else { continue };
            if p.ground_size() > 20 {
                // ground sets grow with n
                break;
            }
            if p.ground_size() == 0 {
                continue;
            }
            let solver = colorsearch::exists_bad_coloring(&p);
            let oracle = common::naive_bad_coloring(&p);
            ensure(solver.status != Status::BudgetExhausted, || format!("{} ran out of budget", p.family))?;
            let found = solver.status == Status::BadColoringFound;
            ensure(found == oracle.is_some(), || format!("{}: solver {found}, oracle {}", p.family, oracle.is_some()))?;
            if let Some(w) = &solver.witness {
                ensure(verify_witness(&p, w), || format!("{}: invalid witness", p.family))?;
            }
            instances += 1;
            bad += usize::from(found);
        }
    }
    Ok(format!("{instances} instances with ground <= 20 ({bad} with bad colourings), all agree"))
}

// 6: Gowers FIN_1

fn criterion_6() -> Result<String, String> {
    let fam = Family::Gowers { k: 1, m: 2, r: 2 };
    let rep = min_n(&fam, GOWERS_MIN_N + 1, &SearchConfig::default()).map_err(|e| e.to_string())?;
    ensure(rep.min_n == Some(GOWERS_MIN_N), || format!("solver min_n = {:?}, fixture {GOWERS_MIN_N}", rep.min_n))?;
    let at = instance(&fam, GOWERS_MIN_N).unwrap();
    let below = instance(&fam, GOWERS_MIN_N - 1).unwrap();
    ensure(common::naive_bad_coloring(&at).is_none(), || format!("oracle finds a bad colouring at n = {GOWERS_MIN_N}"))?;
    let w = common::naive_bad_coloring(&below).ok_or_else(|| format!("oracle finds none at n = {}", GOWERS_MIN_N - 1))?;
    ensure(verify_witness(&below, &w), || "oracle witness rejected".into())?;
    Ok(format!(
        "min_n = {GOWERS_MIN_N}; oracle confirms at n = {GOWERS_MIN_N} (2^{} colourings) and n = {}",
        at.ground_size() - 1,
        GOWERS_MIN_N - 1
    ))
}

// 7: normed-geometry exactness

fn criterion_7() -> Result<String, String> {
    let mut rng = common::rng(7);
    for i in 0..100 {
        let k = 1 + i % 3;
        let n = common::random_space(&mut rng, k);
        let (p, q, s) = (common::random_space(&mut rng, k), common::random_space(&mut rng, k), common::random_space(&mut rng, k));
        let e = |x: ramsey_core::normgeo::GeoError| x.to_string();
        // ω
        ensure(omega(&p, &p).map_err(e)?.is_zero(), || format!("instance {i}: ω(P,P) != 0"))?;
        let pq = omega(&p, &q).map_err(e)?.arg;
        ensure(pq == omega(&q, &p).map_err(e)?.arg, || format!("instance {i}: ω not symmetric"))?;
        ensure(omega(&p, &s).map_err(e)?.arg <= &pq * omega(&q, &s).map_err(e)?.arg, || format!("instance {i}: ω triangle"))?;
        // α
        ensure(alpha(&n, &p, &p).map_err(e)?.is_zero(), || format!("instance {i}: α(P,P) != 0"))?;
        let apq = alpha(&n, &p, &q).map_err(e)?;
        ensure(apq == alpha(&n, &q, &p).map_err(e)?, || format!("instance {i}: α not symmetric"))?;
        ensure(alpha(&n, &p, &s).map_err(e)? <= &apq + alpha(&n, &q, &s).map_err(e)?, || format!("instance {i}: α triangle"))?;
        // sandwich
        let sw = sandwich(&n, &p, &q).map_err(e)?;
        ensure(sw.holds(), || format!("instance {i}: sandwich fails {sw:?}"))?;
        // Λ on subspaces of a random Z
        let kz = 2 + i % 2;
        let dim = 1 + i % (kz - 1);
        let z = common::random_space(&mut rng, kz);
        let mut sub = || linalg::transpose(&common::random_injective(&mut rng, kz, dim));
        let (u, v, w) = (sub(), sub(), sub());
        ensure(gap_metric(&u, &u, &z).map_err(e)?.is_zero(), || format!("instance {i}: Λ(U,U) != 0"))?;
        let uv = gap_metric(&u, &v, &z).map_err(e)?;
        ensure(uv == gap_metric(&v, &u, &z).map_err(e)?, || format!("instance {i}: Λ not symmetric"))?;
        ensure(gap_metric(&u, &w, &z).map_err(e)? <= &uv + gap_metric(&v, &w, &z).map_err(e)?, || format!("instance {i}: Λ triangle"))?;
    }
    let bm = bm_upper(&PolyhedralSpace::ell_one(2), &PolyhedralSpace::ell_inf(2), &BmEffort::default()).map_err(|e| e.to_string())?;
    ensure(bm.value.arg.is_one(), || format!("bm_upper(ℓ1², ℓ∞²) = log {}", bm.value.arg))?;
    Ok(format!("100 instances, axioms and sandwich exact; bm_upper(l1^2, l_inf^2) = 0 via {}", bm.source))
}

// 8: amalgam contract

fn criterion_8() -> Result<String, String> {
    let mut rng = common::rng(8);
    let mut max_dim_z = 0;
    for i in 0..50 {
        let a = rng.random_range(1..=3);
        let b = rng.random_range(a..=3);
        let x = common::random_space(&mut rng, a);
        let y = common::random_space(&mut rng, b);
        let t = common::random_injective(&mut rng, b, a);
        let norm = op_norm(&t, &x, &y).map_err(|e| e.to_string())?;
        let t = linalg::scale(&t, &norm.recip());
        let am = amalgam(&x, &y, &t, None).map_err(|e| format!("instance {i}: {e}"))?;
        let check = am.check().map_err(|e| e.to_string())?;
        ensure(check.i_isometric == Some(true) && check.j_isometric == Some(true), || format!("instance {i}: not isometric"))?;
        ensure(am.defect <= am.bound, || format!("instance {i}: defect {} > bound {}", am.defect, am.bound))?;
        ensure(check.dim_z <= a * b, || format!("instance {i}: dim Z = {} > {a}·{b}", check.dim_z))?;
        max_dim_z = max_dim_z.max(check.dim_z);
    }
    Ok(format!("50 instances, I and J isometric, defect <= ‖T‖‖T⁻¹‖ − 1, max dim Z = {max_dim_z}"))
}

// 9: ε-net bounds

fn criterion_9() -> Result<String, String> {
    let mut rng = common::rng(9);
    let mut sizes = Vec::new();
    for (name, x) in [("l_inf^2", PolyhedralSpace::ell_inf(2)), ("l1^2", PolyhedralSpace::ell_one(2))] {
        for eps in [int(1), ratio(1, 2)] {
            let e = |err: ramsey_core::normgeo::GeoError| err.to_string();
            let ball = eps_net(&x, &eps, &NetMode::BallGreedy { radius: int(1), seed: vec![] }).map_err(e)?;
            let vol = (int(1) + int(2) / &eps).pow(2);
            ensure(Rational::from_integer(ball.points.len().into()) <= vol, || format!("{name}: {} > {vol}", ball.points.len()))?;
            for (i, a) in ball.points.iter().enumerate() {
                for b in &ball.points[i + 1..] {
                    ensure(x.norm(&linalg::vsub(a, b)) >= eps, || format!("{name}: net not separated"))?;
                }
            }
            let shell = eps_net(&x, &eps, &NetMode::Shell).map_err(e)?;
            ensure(shell.within_bound, || format!("{name}: shell net {} over its bound", shell.points.len()))?;
            for _ in 0..10_000 {
                let den = [3, 7, 16, 50][rng.random_range(0..4)];
                let p: Vec<Rational> = common::random_ball_point(&mut rng, &x, &int(1), den);
                if p.iter().all(Rational::is_zero) {
                    continue;
                }
                let y = shell_witness(&x, &shell, &p).ok_or_else(|| format!("{name}, eps {eps}: no shell witness for {p:?}"))?;
                ensure(x.norm(y) < x.norm(&p) && x.norm(&linalg::vsub(&p, y)) < eps, || "shell witness fails".into())?;
                let near = ball.points.iter().map(|a| x.norm(&linalg::vsub(a, &p))).min().unwrap();
                ensure(near < ball.certified_radius, || format!("{name}: ball net misses {p:?}"))?;
            }
            sizes.push(format!("{name}/eps={eps}: ball {} <= {vol}, shell {}", ball.points.len(), shell.points.len()));
        }
    }
    Ok(sizes.join("; "))
}

// 10: free-space suite

fn criterion_10() -> Result<String, String> {
    let mut rng = common::rng(10);
    let mut pairs = 0;
    for i in 0..20 {
        let n = 2 + i % 5;
        let m = common::random_metric(&mut rng, n);
        let e = |x: metricfree::MetricError| x.to_string();
        for x in 0..n {
            for y in x + 1..n {
                let v = FreeVector::new(&m, m.molecule(x, y)).map_err(e)?;
                let f = metricfree::free_norm(&m, &v).map_err(e)?;
                ensure(&f.value == m.dist(x, y), || format!("space {i}: ‖δ_{x} − δ_{y}‖ = {} != {}", f.value, m.dist(x, y)))?;
                ensure(f.primal == f.dual, || format!("space {i}: primal {} != dual {}", f.primal, f.dual))?;
                pairs += 1;
            }
        }
        for _ in 0..3 {
            let v = FreeVector::new(&m, (0..n - 1).map(|_| ratio(rng.random_range(-5..=5), 2)).collect()).map_err(e)?;
            let f = metricfree::free_norm(&m, &v).map_err(e)?;
            ensure(f.primal == f.dual, || format!("space {i}: duality gap on a random vector"))?;
        }
        // embed a random subset back into the space
        let size = rng.random_range(1..=n).max(2);
        let mut pts: Vec<usize> = (0..n).collect();
        for j in (1..n).rev() {
            pts.swap(j, rng.random_range(0..=j));
        }
        pts.truncate(size);
        let d: QMatrix = pts.iter().map(|&a| pts.iter().map(|&b| m.dist(a, b).clone()).collect()).collect();
        let sub = FiniteMetricSpace::new(d, None).map_err(e)?;
        let ext = metricfree::extend_embedding(&sub, &m, &pts).map_err(e)?;
        let norm = ext.map.norm().map_err(|x| x.to_string())?;
        let inv = ext.map.inv_norm().map_err(|x| x.to_string())?;
        ensure(norm.is_one() && inv == Some(Rational::one()), || format!("space {i}: extension has ‖T‖ = {norm}, ‖T⁻¹‖ = {inv:?}"))?;
    }
    Ok(format!("20 spaces, {pairs} molecules exact, primal = dual, extensions isometric"))
}

// 11: bound calculator

fn criterion_11() -> Result<String, String> {
    let b = bound_n_infty(1, &BigUint::from(2u32), 2, &int(1)).map_err(|e| e.to_string())?;
    ensure(b.to_string() == "GR(5, 20, 2)", || format!("n_inf(1,2,2,1) = {b}"))?;
    // the printed formula, evaluated directly
    let (eps_num, eps_den) = (1u32, 1u32);
    let a = (10 * eps_den + 3 * eps_num) / eps_num; // (10+3ε)/ε = 13
    let base = eps_den + 8 * (5 * eps_den + eps_num) / eps_num; // 1+8(5+ε)/ε = 49
    let d = BigUint::from(a);
    let m = BigUint::from(a) + BigUint::from(a) * BigUint::from(base);
    let net = BigUint::from(1u32 + 4 * 4 * eps_den / eps_num).pow(13); // (1+4/(ε/4))^d with d = 13
    let mut falling = BigUint::one();
    let mut j = m.clone();
    for _ in 0..13 {
        falling *= &j;
        j -= 1u32;
    }
    let second = &net * BigUint::from(2u32).pow(13) * falling;
    let params = dim_h_parameters(1, 1, 2, &int(1)).map_err(|e| e.to_string())?;
    ensure(params.d == d && params.m == m, || format!("d, m = {}, {} (expected {d}, {m})", params.d, params.m))?;
    ensure(params.n.d == net && params.n.m == second, || format!("n = {} disagrees with the direct evaluation", params.n))?;
    let h = bound_dim_h(1, 1, &int(1), &second).map_err(|e| e.to_string())?;
    ensure(h.value.as_ref() == Some(&second), || "dim H bound with base 1 should equal n".into())?;
    let h2 = bound_dim_h(2, 1, &int(1), &BigUint::one()).map_err(|e| e.to_string())?;
    ensure(h2.value == Some(BigUint::from(2u32).pow(base * base)), || "2^(49^2) mismatch".into())?;
    Ok(format!("GR(5, 20, 2); dim H <= n = GR(17^13, <{} digits>, 2), no overflow", second.to_string().len()))
}

fn main() {
    let criteria: [(u8, &str, f64, Check); 11] = [
        (1, "echelon factorization suite", 30.0, criterion_1),
        (2, "Phi/RREF characterization", 10.0, criterion_2),
        (3, "counting identities", 10.0, criterion_3),
        (4, "Fano milestone", 5.0, criterion_4),
        (5, "solver vs naive enumeration", 60.0, criterion_5),
        (6, "Gowers FIN_1 minimal n", 300.0, criterion_6),
        (7, "normed-geometry exactness", 300.0, criterion_7),
        (8, "amalgam contract", 300.0, criterion_8),
        (9, "eps-net bounds", 300.0, criterion_9),
        (10, "free-space suite", 300.0, criterion_10),
        (11, "bound calculator", 10.0, criterion_11),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (id, name, limit, check) in criteria {
        let start = Instant::now();
        let result = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let secs = start.elapsed().as_secs_f64();
        let (ok, detail) = match result {
            Ok(d) if secs <= limit => (true, d),
            Ok(d) => (false, format!("{d}; over the time limit")),
            Err(e) => (false, e),
        };
        failed += usize::from(!ok);
        println!("criterion {id:>2} {}: {name}: {detail} ({secs:.2}s, limit {limit}s)", if ok { "PASS" } else { "FAIL" });
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
