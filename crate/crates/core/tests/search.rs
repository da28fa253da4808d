mod common;

use proptest::prelude::*;
use ramsey_core::colorsearch::{
    exists_bad_coloring, exists_bad_coloring_with, verify_witness, Budget, ColoringProblem, CopyDescriptor, SearchConfig,
    Status,
};

/// Each copy is a row of labels: 0 leaves the element out, `i > 0` puts it in fiber `i`.
fn problem_strategy(max_ground: usize, max_r: usize) -> impl Strategy<Value = ColoringProblem> {
    (1..=max_ground, 1..=max_r).prop_flat_map(|(g, r)| {
        proptest::collection::vec(proptest::collection::vec(0u8..=3, g), 0..=8).prop_map(move |rows| {
            let copies = rows
                .iter()
                .map(|labels| {
                    let fibers: Vec<Vec<usize>> = (1..=3u8)
                        .map(|f| labels.iter().enumerate().filter(|(_, &l)| l == f).map(|(i, _)| i).collect::<Vec<_>>())
                        .filter(|f| !f.is_empty())
                        .collect();
                    if fibers.len() == 1 {
                        CopyDescriptor::Plain(fibers.into_iter().next().unwrap())
                    } else {
                        CopyDescriptor::Fibered(fibers)
                    }
                })
                .collect();
            ColoringProblem::new("random", (0..g as u32).map(|i| vec![i]).collect(), copies, r).unwrap()
        })
    })
}

fn parallel(jobs: usize) -> SearchConfig {
    SearchConfig { budget: Budget { max_nodes: 1 << 30, max_seconds: 600.0 }, jobs }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn witnesses_are_sound(p in problem_strategy(12, 3)) {
        let out = exists_bad_coloring(&p);
        match out.status {
            Status::BadColoringFound => {
                let w = out.witness.unwrap();
                prop_assert!(verify_witness(&p, &w));
                // replay by hand: every copy has a fiber using two colours
                for c in &p.copies {
                    prop_assert!(c.fibers().iter().any(|f| f.iter().any(|&e| w[e] != w[f[0]])));
                }
            }
            Status::NoBadColoring => prop_assert!(out.witness.is_none()),
            Status::BudgetExhausted => prop_assert!(false, "tiny problem ran out of budget"),
        }
    }

    #[test]
    fn two_colours_match_the_naive_oracle(p in problem_strategy(14, 2).prop_map(|mut p| { p.r = 2; p })) {
        let found = exists_bad_coloring(&p).status == Status::BadColoringFound;
        prop_assert_eq!(found, common::naive_bad_coloring(&p).is_some());
    }

    #[test]
    fn parallelism_does_not_change_the_answer(p in problem_strategy(12, 3)) {
        let one = exists_bad_coloring_with(&p, &parallel(1));
        let four = exists_bad_coloring_with(&p, &parallel(4));
        prop_assert_eq!(one.status, four.status);
        prop_assert_eq!(one.witness, four.witness);
    }

    #[test]
    fn more_colours_never_help(p in problem_strategy(10, 2)) {
        if exists_bad_coloring(&p).status == Status::BadColoringFound {
            let mut q = p.clone();
            q.r += 1;
            prop_assert_eq!(exists_bad_coloring(&q).status, Status::BadColoringFound);
        }
    }
}

#[test]
fn oracle_sanity() {
    let tri = ColoringProblem::new("t", vec![vec![0], vec![1], vec![2]], vec![CopyDescriptor::Plain(vec![0, 1, 2])], 2).unwrap();
    assert_eq!(common::naive_bad_coloring(&tri), Some(vec![0, 1, 0]));
    let fib = ColoringProblem::new(
        "f",
        vec![vec![0], vec![1]],
        vec![CopyDescriptor::Fibered(vec![vec![0], vec![1]])],
        2,
    )
    .unwrap();
    assert_eq!(common::naive_bad_coloring(&fib), None);
}
