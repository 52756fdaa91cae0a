use proptest::prelude::*;

use ramseylab::game::{BlueTarget, RedTarget, TargetSpec};
use ramseylab::sequences::{
    check_almost_subadditive, check_eventually_almost_subadditive, check_subadditive, limit_estimate,
    parse_rational, parse_sequence, SequenceError, SequenceWindow, Q,
};
use ramseylab::solver::{solve, SolveLimits};

fn q(n: i128) -> Q {
    Q::from_integer(n)
}

fn window(len: usize, f: impl Fn(i128) -> i128) -> SequenceWindow {
    SequenceWindow::from_fn(len, |n| q(f(n as i128))).unwrap()
}

fn ceil_five_quarters(n: i128) -> i128 {
    (5 * (n - 1) + 3).div_euclid(4)
}

#[test]
fn subadditive_examples() {
    assert!(check_subadditive(&window(40, |n| 2 * n)).pass);
    let r = check_subadditive(&window(40, |n| n * n));
    let v = r.violation.unwrap();
    assert_eq!((v.m, v.n, v.lhs, v.rhs), (1, 1, q(4), q(2)));

    let r = check_subadditive(&window(40, ceil_five_quarters));
    let mut first = None;
    'outer: for m in 1..40i128 {
        for n in 1..=40 - m {
            if ceil_five_quarters(m + n) > ceil_five_quarters(m) + ceil_five_quarters(n) {
                first = Some((m as usize, n as usize));
                break 'outer;
            }
        }
    }
    assert_eq!(r.violation.map(|v| (v.m, v.n)), first);
}

#[test]
fn almost_subadditive_examples() {
    assert!(check_almost_subadditive(&window(50, |n| 2 * n + 3)).pass);
    let w = window(60, ceil_five_quarters).with_slack(q(15));
    let r = check_almost_subadditive(&w);
    assert!(r.pass && !r.vacuous);

    let w = window(30, |n| n * n).with_slack(q(5));
    let v = check_almost_subadditive(&w).violation.unwrap();
    assert!(v.lhs > v.rhs);
    assert!(v.n <= 2 * v.m && v.m <= 2 * v.n);
    assert_eq!(v.lhs, q(((v.m + v.n) * (v.m + v.n)) as i128));
}

#[test]
fn eventual_examples() {
    let w = window(30, |n| n * n * n).with_threshold(15);
    let r = check_eventually_almost_subadditive(&w);
    assert!(r.pass && r.vacuous);
    assert_eq!(r.pairs_checked, 0);

    for (c, t) in [(0, 0), (3, 2), (10, 7)] {
        let w = window(40, |n| 2 * n).with_slack(q(c)).with_threshold(t);
        assert!(check_eventually_almost_subadditive(&w).pass);
    }

    let values: Vec<Q> = (1..=6)
        .map(|n| {
            let t = TargetSpec::new(RedTarget::Path(2), BlueTarget::Path(n)).unwrap();
            q(solve(t, SolveLimits::new(8)).unwrap().value.unwrap() as i128)
        })
        .collect();
    assert_eq!(values, (0..6).map(q).collect::<Vec<_>>());
    let w = SequenceWindow::new(values).unwrap().with_slack(q(10)).with_threshold(1);
    let r = check_eventually_almost_subadditive(&w);
    assert!(r.pass && !r.vacuous);
}

#[test]
fn limit_examples() {
    assert_eq!(limit_estimate(&window(10, |n| 2 * n)).unwrap().upper, q(2));
    let e = limit_estimate(&window(100, |n| 2 * n + 5)).unwrap();
    assert_eq!((e.upper, e.upper_at), (Q::new(41, 20), 100));
    assert!(e.finite_window);

    let w = window(200, ceil_five_quarters).with_slack(q(15));
    let e = limit_estimate(&w).unwrap();
    assert!(e.upper >= Q::new(5, 4));
    let oracle = (1..=200i128).map(|n| Q::new(ceil_five_quarters(n) + 15, n)).min().unwrap();
    assert_eq!(e.upper, oracle);

    assert_eq!(
        limit_estimate(&window(10, |n| n * n)),
        Err(SequenceError::PrerequisiteFailed { m: 1, n: 1 })
    );
}

#[test]
fn parsing() {
    assert_eq!(parse_rational(" 7/2 ").unwrap(), Q::new(7, 2));
    assert!(parse_rational("1/0").is_err());
    assert_eq!(parse_sequence(r#"[1, "3/2", 2]"#).unwrap(), vec![q(1), Q::new(3, 2), q(2)]);
    assert_eq!(parse_sequence("n,a\n1,4\n2,5\n").unwrap(), vec![q(4), q(5)]);
    assert!(matches!(parse_sequence("1,4\n3,5\n"), Err(SequenceError::BadIndex { .. })));
}

proptest! {
    #[test]
    fn slack_only_helps(values in prop::collection::vec(1i128..100, 1..30), c in 0i128..20) {
        let w = SequenceWindow::new(values.iter().map(|&v| q(v)).collect()).unwrap();
        let tight = check_almost_subadditive(&w.clone().with_slack(q(c)));
        let loose = check_almost_subadditive(&w.with_slack(q(c + 1)));
        prop_assert!(!tight.pass || loose.pass);
    }

    #[test]
    fn linear_windows(c in 1i128..5, slack in 0i128..30, len in 1usize..60) {
        let w = window(len, |n| c * n).with_slack(q(slack));
        prop_assert!(check_subadditive(&w).pass);
        let e = limit_estimate(&w).unwrap();
        prop_assert_eq!(e.upper, q(c) + Q::new(slack, len as i128));
    }
}
