use std::collections::BTreeMap;

use qcl::allocator::{AllocationProblem, SaParams, Solver};
use qcl::confidence_fn::{components_to_json, parse_components};
use qcl::experiments::{read_csv, run_rq1, write_csv, Rq1Config};
use qcl::fault_tree::{failure_prob, parse_ft, random_ft, reliability_fn, translate};
use qcl::proof::{check_proof, ProofTree};
use qcl::{Confidence, FaultTree};

const COMPONENTS: &str = r#"{
    "A": {"fn": {"builtin": "exponential", "base": 0.99, "shift": 1}},
    "B": {"fn": {"builtin": "coverage", "n": 50, "r0": 5}, "spent": 2},
    "C": {"fn": {"builtin": "random_testing", "p": 0.05, "r0": 1}},
    "D": {"fn": {"op": "min", "args": [{"op": "const", "value": 1},
                                       {"op": "mul", "args": [{"op": "const", "value": 0.1}, {"op": "var"}]}]}}
}"#;

fn paired_or() -> FaultTree {
    FaultTree::and(vec![
        FaultTree::or(vec![FaultTree::basic("A"), FaultTree::basic("B")]),
        FaultTree::or(vec![FaultTree::basic("C"), FaultTree::basic("D")]),
    ])
}

#[test]
fn fault_tree_json_round_trip() {
    for seed in 0..20 {
        let ft = random_ft(7, seed);
        let text = serde_json::to_string(&ft).unwrap();
        assert_eq!(parse_ft(&text).unwrap(), ft);
    }
}

#[test]
fn components_json_round_trip() {
    let comps = parse_components(COMPONENTS).unwrap();
    let again = parse_components(&components_to_json(&comps).to_string()).unwrap();
    assert_eq!(comps, again);
    assert_eq!(comps.iter().map(|c| c.name.as_str()).collect::<Vec<_>>(), ["A", "B", "C", "D"]);
}

#[test]
fn translated_proof_survives_serialization_and_matches_polynomial() {
    let ft = paired_or();
    let conf: BTreeMap<String, Confidence> = [("A", 0.6), ("B", 0.7), ("C", 0.8), ("D", 0.9)]
        .into_iter()
        .map(|(k, t)| (k.to_string(), Confidence::new(t, 1.0 - t).unwrap()))
        .collect();
    let tree = translate(&ft, &conf).unwrap();
    let text = serde_json::to_string(&tree).unwrap();
    let back: ProofTree = serde_json::from_str(&text).unwrap();
    assert!(check_proof(&back).is_ok());
    let t = back.conclusion().confidence.t();
    let r: BTreeMap<String, f64> = conf.iter().map(|(k, c)| (k.clone(), c.t())).collect();
    assert!((t - reliability_fn(&ft).eval(&r).unwrap()).abs() < 1e-12);
    let q: BTreeMap<String, f64> = r.iter().map(|(k, v)| (k.clone(), 1.0 - v)).collect();
    assert!((t - (1.0 - failure_prob(&ft, &q).unwrap())).abs() < 1e-12);
}

#[test]
fn every_solver_respects_budget_and_baseline() {
    let problem = AllocationProblem::new(paired_or(), parse_components(COMPONENTS).unwrap(), 20.0).unwrap();
    let solvers = [
        Solver::Sa { params: SaParams::default(), seed: 9 },
        Solver::Grid { step: 0.5 },
        Solver::Uniform,
        Solver::Proportional,
    ];
    let base = problem.baseline().unwrap();
    for solver in solvers {
        let res = solver.solve(&problem).unwrap();
        assert!((res.total() - 20.0).abs() < 1e-9, "{:?}", solver.strategy());
        assert!(res.split.values().all(|&x| x >= 0.0));
        assert!(res.predicted_after >= base);
        assert!((problem.objective(&res.split).unwrap() - res.predicted_after).abs() < 1e-12);
        let json = serde_json::to_string(&res).unwrap();
        assert_eq!(serde_json::from_str::<qcl::AllocationResult>(&json).unwrap(), res);
    }
}

#[test]
fn rq1_csv_round_trip() {
    let cfg: Rq1Config = serde_json::from_str(
        r#"{"n_fts": 2, "n_sps": 2, "sp_range": [100, 300], "budgets": [1, 10], "seed": 5, "sa": {"iterations": 200}}"#,
    )
    .unwrap();
    let rows = run_rq1(&cfg).unwrap();
    assert_eq!(rows.len(), 6);
    let mut buf = Vec::new();
    write_csv(&rows, &mut buf).unwrap();
    let back = read_csv(std::str::from_utf8(&buf).unwrap()).unwrap();
    assert_eq!(back.len(), rows.len());
    for (a, b) in rows.iter().zip(&back) {
        assert_eq!((a.budget, a.strategy, a.n_instances), (b.budget, b.strategy, b.n_instances));
        assert!((a.score - b.score).abs() <= 1e-8 * a.score.abs());
    }
}
