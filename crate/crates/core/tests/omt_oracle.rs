//! Optimizer results against exhaustive enumeration.

use omt_core::omt::{certify, optimize, omt_dtc, Ext, OmtConfig, Schema, Strategy};
use omt_testkit::{gen, oracle};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn configs() -> Vec<OmtConfig> {
    vec![
        OmtConfig::new(Schema::Offline, Strategy::Linear),
        OmtConfig::new(Schema::Offline, Strategy::Binary),
        OmtConfig::new(Schema::Inline, Strategy::Linear),
        OmtConfig::new(Schema::Inline, Strategy::Binary),
        OmtConfig::new(Schema::Inline, Strategy::Adaptive),
    ]
}

#[test]
fn arithmetic_instances_match_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for i in 0..120 {
        let p = gen::random_omt(&mut rng);
        let want = oracle::omt_oracle(&p);
        for cfg in configs() {
            let r = optimize(&p, &cfg).unwrap();
            assert_eq!(r.outcome.ext(), Some(want.clone()), "instance {} under {:?}/{:?}: {:?}", i, cfg.schema, cfg.strategy, p.formula);
        }
        if let Ext::Finite(v) = &want {
            let r = optimize(&p, &OmtConfig::new(Schema::Inline, Strategy::Linear)).unwrap();
            assert!(certify::certify(&p, &r).unwrap().passed(), "instance {} value {}", i, v);
        }
    }
}

#[test]
fn combined_instances_match_arrangement_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for i in 0..60 {
        let p = gen::random_euf_omt(&mut rng);
        let want = oracle::dtc_oracle(&p);
        for strategy in [Strategy::Linear, Strategy::Binary, Strategy::Adaptive] {
            let r = omt_dtc(&p, strategy).unwrap();
            assert_eq!(r.outcome.ext(), Some(want.clone()), "instance {} under {:?}: {:?}", i, strategy, p.formula);
        }
    }
}

#[test]
fn dispatch_table_matches_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for i in 0..100 {
        let mu = gen::random_edi(&mut rng);
        let want = oracle::dispatch_oracle(&mu, gen::COST);
        assert_eq!(omt_core::omt::dtc::mincost_of_assignment(&mu, gen::COST), want, "assignment {}: {:?}", i, mu);
    }
}
