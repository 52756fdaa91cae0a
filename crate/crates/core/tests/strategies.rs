use proptest::prelude::*;

use ramseylab::adversaries::{verify_instance, PainterPolicy, VerifyOptions};
use ramseylab::game::{Color, WitnessKind};
use ramseylab::strategies::{instantiate, run_strategy, OutcomeKind, StrategyParams, STRATEGY_IDS};

/// Small valid parameters for every registered id.
fn small_params(id: &str) -> StrategyParams {
    let p = StrategyParams::k(2);
    match id {
        "extend-pair" => p.with_n(3),
        "join-paths" => p.with_m(3).with_n(3),
        "close-cycle-chord" => p.with_n(7),
        "star-extend" => p.with_n(2),
        "star-extend-by" => p.with_t(2),
        "star-join" => p.with_m(2).with_n(2),
        "star-cycle" => p.with_n(9),
        "composite:path-join" => p.with_m(2).with_n(2),
        "composite:cycle-join" => p.with_m(2).with_n(2),
        "composite:path-cycle-sandwich" => p.with_n(5),
        "composite:star-join" => p.with_m(1).with_n(2),
        "composite:star-cycle-join" => p.with_m(1).with_n(3),
        "composite:star-cycle-sandwich" => p.with_n(4),
        other => panic!("no parameters for {other}"),
    }
}

fn opts() -> VerifyOptions {
    VerifyOptions {
        enum_cap: u64::MAX,
        ..VerifyOptions::default()
    }
}

#[test]
fn every_strategy_holds_against_every_painter() {
    for id in STRATEGY_IDS {
        let inst = instantiate(id, &small_params(id)).unwrap();
        let r = verify_instance(&inst, None, opts()).unwrap();
        assert!(r.pass, "{id}: {:?} {:?}", r.failure, r.counterexample);
        assert!(r.worst_rounds <= inst.budget);
        assert!(r.leaves > 0);
    }
}

#[test]
fn one_round_short_is_caught() {
    let mut tight = 0;
    for id in ["extend-pair", "join-paths", "star-extend", "star-cycle", "composite:path-join"] {
        let inst = instantiate(id, &small_params(id)).unwrap();
        let r = verify_instance(&inst, Some(inst.budget - 1), opts()).unwrap();
        let full = verify_instance(&inst, None, opts()).unwrap();
        if full.worst_rounds == inst.budget {
            tight += 1;
            assert!(!r.pass, "{id}");
            assert!(r.counterexample.is_some());
        } else {
            assert!(r.pass, "{id}");
        }
    }
    assert!(tight > 0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_painters_lose_within_budget(idx in 0..STRATEGY_IDS.len(), seed in any::<u64>()) {
        let id = STRATEGY_IDS[idx];
        let inst = instantiate(id, &small_params(id)).unwrap();
        let mut s = inst.strategy.clone();
        let out = run_strategy(inst.seed.clone(), s.as_mut(), &PainterPolicy::RandomSeeded(seed), inst.budget).unwrap();
        prop_assert!(out.rounds_used <= inst.budget);
        out.witness.validate(out.final_state.board()).unwrap();
        let (color, size) = match out.result {
            OutcomeKind::RedWin => (Color::Red, inst.target.red.size()),
            OutcomeKind::BlueWin => (Color::Blue, inst.target.blue.size()),
        };
        prop_assert_eq!(out.witness.kind.color(), color);
        prop_assert_eq!(out.witness.size(), size);

        let mut again = inst.strategy.clone();
        let replay = run_strategy(inst.seed.clone(), again.as_mut(), &PainterPolicy::RandomSeeded(seed), inst.budget).unwrap();
        prop_assert_eq!(replay.final_state.transcript(), out.final_state.transcript());
    }
}

#[test]
fn constant_painters() {
    let inst = instantiate("extend-pair", &StrategyParams::k(3).with_n(4)).unwrap();
    let mut s = inst.strategy.clone();
    let out = run_strategy(inst.seed.clone(), s.as_mut(), &PainterPolicy::AllBlue, inst.budget).unwrap();
    assert_eq!(out.witness.kind, WitnessKind::BluePath);
    let mut s = inst.strategy.clone();
    let out = run_strategy(inst.seed.clone(), s.as_mut(), &PainterPolicy::AllRed, inst.budget).unwrap();
    assert_eq!(out.witness.kind, WitnessKind::RedPath);

    let inst = instantiate("star-extend", &StrategyParams::k(3).with_n(3)).unwrap();
    let mut s = inst.strategy.clone();
    let out = run_strategy(inst.seed.clone(), s.as_mut(), &PainterPolicy::AllRed, inst.budget).unwrap();
    assert_eq!(out.witness.kind, WitnessKind::RedStar);
    assert_eq!(out.rounds_used, 3);
}
