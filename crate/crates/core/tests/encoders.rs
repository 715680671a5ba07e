//! Encodings against brute force over Boolean assignments and geometric search.

use num_traits::ToPrimitive;
use omt_core::arith::{int, DeltaRational, Rational};
use omt_core::ast::Formula;
use omt_core::encoders::{
    encode_lgdp, encode_maxsmt, encode_pb, gen_jobshop_jobs, gen_strip_rects, jobshop_model, pb_to_maxsmt, strip_packing_model,
};
use omt_core::omt::{omt_inline, optimize, Ext, OmtConfig, OmtProblem, Outcome, Schema, Strategy};
use omt_testkit::{gen, oracle};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn solve(p: &OmtProblem) -> Option<Rational> {
    match optimize(p, &OmtConfig::new(Schema::Inline, Strategy::Binary)).unwrap().outcome {
        Outcome::Optimum { value, .. } => {
            assert_eq!(value.delta, int(0));
            Some(value.real)
        }
        Outcome::Unsat => None,
        other => panic!("unexpected {:?}", other),
    }
}

#[test]
fn pb_encoding_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for i in 0..80 {
        let o = gen::random_pb(&mut rng, false);
        assert_eq!(solve(&encode_pb(&o).unwrap()), oracle::pb_brute(&o), "instance {}: {:?}", i, o);
    }
}

#[test]
fn pb_encoding_fixes_each_term_per_assignment() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..10 {
        let o = gen::random_pb(&mut rng, false);
        let p = encode_pb(&o).unwrap();
        let n = o.terms.len();
        for mask in 0u32..1 << n {
            let mut fixed = vec![p.formula.clone()];
            let mut sum = int(0);
            for (k, (x, a)) in o.terms.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    fixed.push(Formula::prop(x));
                    sum += a;
                } else {
                    fixed.push(Formula::not(Formula::prop(x)));
                }
            }
            let restricted = OmtProblem::new(Formula::and(fixed.clone()), &p.cost);
            let constraint_ok = oracle::pb_brute(&omt_core::encoders::PbObjective {
                terms: vec![],
                constraint: Formula::and(fixed[1..].iter().cloned().chain([o.constraint.clone()]).collect()),
            })
            .is_some();
            let got = solve(&restricted);
            if constraint_ok {
                assert_eq!(got, Some(sum));
            } else {
                assert_eq!(got, None);
            }
        }
    }
}

#[test]
fn maxsmt_encoding_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for i in 0..80 {
        let m = gen::random_maxsmt(&mut rng);
        let enc = encode_maxsmt(&m).unwrap();
        let got = solve(&enc.problem);
        assert_eq!(got, oracle::maxsmt_brute(&m), "instance {}: {:?}", i, m);
        if got.is_some() {
            let r = omt_inline(&enc.problem, Strategy::Linear).unwrap();
            if let Outcome::Optimum { model, value } = &r.outcome {
                let kept = enc.satisfied(model);
                let lost: Rational = (0..m.soft.len()).filter(|j| !kept.contains(j)).map(|j| m.soft[j].1.clone()).sum();
                assert_eq!(lost, value.real);
            }
        }
    }
}

#[test]
fn pb_to_maxsmt_round_trip_keeps_optimum() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    for _ in 0..60 {
        let o = gen::random_pb(&mut rng, true);
        let direct = solve(&encode_pb(&o).unwrap());
        let back = encode_maxsmt(&pb_to_maxsmt(&o).unwrap()).unwrap();
        assert_eq!(solve(&back.problem), direct);
    }
}

fn as_i64(r: &Rational) -> i64 {
    r.to_integer().to_i64().unwrap()
}

#[test]
fn strip_packing_matches_geometric_search() {
    for n in 1..=4 {
        for seed in 0..4 {
            let height = int(3);
            let rects = gen_strip_rects(n, &height, seed);
            let enc = encode_lgdp(&strip_packing_model(&rects, &height)).unwrap();
            let r = omt_inline(&enc.problem, Strategy::Binary).unwrap();
            let ints: Vec<(i64, i64)> = rects.iter().map(|(w, h)| (as_i64(w), as_i64(h))).collect();
            let want = oracle::strip_brute(&ints, 3);
            assert_eq!(r.outcome.ext(), Some(Ext::Finite(DeltaRational::from_rational(int(want)))), "rects {:?}", ints);
            if let Outcome::Optimum { model, .. } = &r.outcome {
                for chosen in enc.decode(model).chosen {
                    assert_eq!(chosen.len(), 1);
                }
            }
        }
    }
}

#[test]
fn jobshop_matches_exhaustive_ordering() {
    for jobs in 1..=3 {
        for machines in 1..=2 {
            for seed in 0..3 {
                let js = gen_jobshop_jobs(jobs, machines, seed);
                let enc = encode_lgdp(&jobshop_model(&js)).unwrap();
                let r = omt_inline(&enc.problem, Strategy::Linear).unwrap();
                let ints: Vec<Vec<(usize, i64)>> = js.iter().map(|j| j.iter().map(|(m, d)| (*m, as_i64(d))).collect()).collect();
                assert_eq!(r.outcome.ext(), Some(Ext::Finite(DeltaRational::from_rational(int(oracle::jobshop_brute(&ints))))), "jobs {:?}", ints);
            }
        }
    }
}
