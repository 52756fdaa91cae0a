use proptest::prelude::*;

use ramseylab::game::{
    transcript_lines, BlueTarget, Color, Edge, GameError, GameHeader, GameState, RedTarget, RoundRecord,
    TargetSpec, Terminal,
};

fn arb_target() -> impl Strategy<Value = TargetSpec> {
    let red = prop_oneof![(1usize..5).prop_map(RedTarget::Path), (1usize..4).prop_map(RedTarget::Star)];
    let blue = prop_oneof![(1usize..6).prop_map(BlueTarget::Path), (3usize..6).prop_map(BlueTarget::Cycle)];
    (red, blue).prop_map(|(r, b)| TargetSpec::new(r, b).unwrap())
}

fn arb_moves() -> impl Strategy<Value = Vec<(u32, u32, bool)>> {
    prop::collection::vec((0u32..7, 0u32..7, any::<bool>()), 0..30)
}

fn color(red: bool) -> Color {
    if red {
        Color::Red
    } else {
        Color::Blue
    }
}

proptest! {
    #[test]
    fn engine_invariants(t in arb_target(), moves in arb_moves()) {
        let mut g = GameState::new(t);
        let mut played = 0;
        for (u, v, red) in moves {
            let Ok(e) = Edge::new(u, v) else {
                prop_assert_eq!(u, v);
                continue;
            };
            let before = g.board().color_of(e);
            if g.is_over() {
                prop_assert_eq!(g.play_edge(e, color(red)), Err(GameError::GameOver));
                continue;
            }
            let mv = g.play_edge(e, color(red)).unwrap();
            played += 1;
            prop_assert_eq!(g.round(), played);
            prop_assert_eq!(mv.repeated, before.is_some());
            prop_assert_eq!(mv.color, before.unwrap_or(color(red)));
            prop_assert_eq!(g.board().color_of(e), Some(mv.color));
            match g.terminal() {
                Some(term) => {
                    let w = term.witness();
                    w.validate(g.board()).unwrap();
                    prop_assert_eq!(w.kind.color(), term.color());
                    let want = match term {
                        Terminal::RedWin(_) => t.red.size(),
                        Terminal::BlueWin(_) => t.blue.size(),
                    };
                    prop_assert_eq!(w.size(), want);
                }
                None => prop_assert!(t.detect(g.board()).is_none()),
            }
        }
        prop_assert_eq!(g.transcript().len(), g.round());
    }

    #[test]
    fn transcript_round_trips(t in arb_target(), moves in arb_moves(), seed in 0usize..4) {
        let mut g = GameState::new(t);
        if seed > 0 {
            g.seed_blue_path(seed).unwrap();
        }
        for (u, v, red) in moves {
            if let Ok(e) = Edge::new(u, v) {
                if g.play_edge(e, color(red)).is_err() {
                    break;
                }
            }
        }
        let text = transcript_lines(&g);
        let mut lines = text.lines();
        let header: GameHeader = serde_json::from_str(lines.next().unwrap()).unwrap();
        prop_assert_eq!(header.target, t);
        prop_assert_eq!(header.seeded.len(), seed.saturating_sub(1));
        let rounds: Vec<RoundRecord> = lines.map(|l| serde_json::from_str(l).unwrap()).collect();
        prop_assert_eq!(rounds.len(), g.round());
        for (i, (r, m)) in rounds.iter().zip(g.transcript()).enumerate() {
            prop_assert_eq!(r.round, i + 1);
            prop_assert_eq!(r.edge, m.edge);
            prop_assert!(r.edge.lo() < r.edge.hi());
            prop_assert_eq!(r.color, m.color);
            prop_assert_eq!(r.repeat, m.repeated);
        }
    }
}

#[test]
fn wire_format_field_names() {
    let t = TargetSpec::new(RedTarget::Star(2), BlueTarget::Cycle(4)).unwrap();
    let mut g = GameState::new(t);
    g.play_edge(Edge::new(3, 1).unwrap(), Color::Blue).unwrap();
    g.play_edge(Edge::new(1, 3).unwrap(), Color::Red).unwrap();
    let text = transcript_lines(&g);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        r#"{"target":{"red":{"kind":"star","size":2},"blue":{"kind":"cycle","size":4}},"seeded":[]}"#
    );
    assert_eq!(lines[1], r#"{"round":1,"edge":[1,3],"color":"blue","repeat":false}"#);
    assert_eq!(lines[2], r#"{"round":2,"edge":[1,3],"color":"blue","repeat":true}"#);
}

#[test]
fn fresh_vertices_are_lazy() {
    let t = TargetSpec::new(RedTarget::Path(3), BlueTarget::Path(3)).unwrap();
    let mut g = GameState::new(t);
    let a = g.fresh_vertex();
    let b = g.fresh_vertex();
    assert_ne!(a, b);
    assert_eq!(g.board().touched_count(), 0);
    g.play_edge(Edge::new(a, b).unwrap(), Color::Red).unwrap();
    let c = g.fresh_vertex();
    assert!(c > a.max(b));
}
