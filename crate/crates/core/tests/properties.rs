use proptest::prelude::*;

use babylon::codec::{display_state, ShapeDescriptor};
use babylon::game::{Color, StackId};
use babylon::strategy::bob::{even_hill_reply, lemma3_reply, lemma4_reply};
use babylon::strategy::{alice_move, bob_move, classify_winner, GameConfig, PhaseMemory};
use babylon::{format_move, format_state, parse_move, parse_state, GameState, Move, Player, Solver, Style};

fn arb_state(max_colors: usize) -> impl Strategy<Value = GameState> {
    (1..=max_colors).prop_flat_map(|colors| {
        prop::collection::vec((0..colors as u8, 1u32..=5), 1..=9).prop_map(move |stacks| {
            GameState::from_stacks(colors, stacks.into_iter().map(|(c, h)| StackId::new(Color(c), h))).unwrap()
        })
    })
}

/// Small enough for the solver in any color count.
fn arb_solvable() -> impl Strategy<Value = GameState> {
    (1..=4usize).prop_flat_map(|colors| {
        prop::collection::vec((0..colors as u8, 1u32..=2), 1..=7).prop_map(move |stacks| {
            GameState::from_stacks(colors, stacks.into_iter().map(|(c, h)| StackId::new(Color(c), h))).unwrap()
        })
    })
}

fn arb_two_color(max_stacks: usize) -> impl Strategy<Value = GameState> {
    prop::collection::vec((0..2u8, 1u32..=4), 1..=max_stacks).prop_map(|stacks| {
        GameState::from_stacks(2, stacks.into_iter().map(|(c, h)| StackId::new(Color(c), h))).unwrap()
    })
}

fn reflect_move(mv: &Move) -> Move {
    let flip = |s: StackId| StackId::new(s.color.other(), s.height);
    Move::new(flip(mv.source), flip(mv.destination))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn moves_keep_chips_and_remove_one_stack(state in arb_state(4)) {
        for mv in state.legal_moves() {
            let next = state.apply(&mv).unwrap();
            prop_assert_eq!(next.total_chips(), state.total_chips());
            prop_assert_eq!(next.stack_count() + 1, state.stack_count());
            prop_assert_eq!(next.mover(), state.mover().opponent());
        }
    }

    #[test]
    fn random_pairs_agree_with_the_legal_list(
        state in arb_state(3),
        pairs in prop::collection::vec((0..3u8, 1u32..=6, 0..3u8, 1u32..=6), 1..30),
    ) {
        let legal = state.legal_moves();
        for (c1, h1, c2, h2) in pairs {
            let (a, b) = (StackId::new(Color(c1), h1), StackId::new(Color(c2), h2));
            let mv = Move::new(a, b);
            let present = if a == b { state.count(a) >= 2 } else { state.count(a) >= 1 && state.count(b) >= 1 };
            let clause = c1 == c2 || h1 == h2;
            let expected = (c1 as usize) < state.color_count() && (c2 as usize) < state.color_count() && present && clause;
            prop_assert_eq!(legal.contains(&mv), expected, "{}", mv);
            prop_assert_eq!(state.is_legal(&mv), expected);
            prop_assert_eq!(state.check_move(&mv).is_ok(), expected);
        }
    }

    #[test]
    fn playouts_shrink_and_alternate(counts in prop::collection::vec(1u32..=5, 1..=4), picks in prop::collection::vec(any::<prop::sample::Index>(), 30)) {
        let mut state = GameState::initial(&counts).unwrap();
        let n = state.total_chips();
        let mut moves = 0;
        for pick in picks {
            let legal = state.legal_moves();
            if legal.is_empty() {
                break;
            }
            let next = state.apply(pick.get(&legal)).unwrap();
            prop_assert!(next.stack_count() < state.stack_count());
            prop_assert_ne!(next.mover(), state.mover());
            state = next;
            moves += 1;
        }
        prop_assert!(moves < n);
        if state.is_terminal() && counts.len() == 2 {
            prop_assert!(state.stack_count() <= 2);
        }
    }

    #[test]
    fn relabelling_colors_changes_nothing(state in arb_solvable(), seed in any::<prop::sample::Index>()) {
        let perms = babylon::game::permutations(state.color_count());
        let perm = seed.get(&perms);
        let relabelled = state.permute_colors(perm);
        prop_assert_eq!(relabelled.canonical_key(), state.canonical_key());
        let solver = Solver::new();
        prop_assert_eq!(solver.solve(&relabelled).unwrap(), solver.solve(&state).unwrap());
    }

    #[test]
    fn solver_is_consistent_with_its_successors(state in arb_solvable()) {
        let solver = Solver::new();
        let mover_wins = solver.solve(&state).unwrap().winner == state.mover();
        let some_move_wins = state
            .legal_moves()
            .iter()
            .any(|m| {
                let next = state.apply(m).unwrap();
                solver.solve(&next).unwrap().winner != next.mover()
            });
        prop_assert_eq!(mover_wins, some_move_wins);
        prop_assert_eq!(solver.optimal_moves(&state).unwrap().is_empty(), !mover_wins);
    }

    #[test]
    fn both_state_grammars_round_trip(state in arb_state(4)) {
        let generic = format_state(&state, Style::Generic).unwrap();
        prop_assert_eq!(parse_state(&generic).unwrap(), state.clone());
        if state.color_count() == 2 {
            let shape = format_state(&state, Style::Shape).unwrap();
            prop_assert_eq!(parse_state(&shape).unwrap(), state.clone());
            let d = ShapeDescriptor::of(&state).unwrap();
            prop_assert_eq!(d.to_state().unwrap(), state.clone());
        }
        prop_assert_eq!(parse_state(&display_state(&state)).unwrap(), state.clone());
        for mv in state.legal_moves() {
            prop_assert_eq!(parse_move(&format_move(&mv)).unwrap(), mv);
        }
    }

    #[test]
    fn start_shape_notation(p in 1u32..30, q in 1u32..30) {
        prop_assert_eq!(parse_state(&format!("<{p},{q};;>")).unwrap(), GameState::two_color(p, q).unwrap());
    }

    #[test]
    fn even_hill_replies_are_one_of_six_transforms(
        j in 4u32..=9, k in 4u32..=9, u in 1u32..=4, v in 1u32..=4, pick in any::<prop::sample::Index>(),
    ) {
        prop_assume!((j + k) % 2 == 0);
        let prev = ShapeDescriptor { j, k, red_hills: vec![2 * u], blue_hills: vec![2 * v] }.to_state().unwrap();
        let legal = prev.legal_moves();
        let alice = pick.get(&legal);
        let d = even_hill_reply(&prev, alice).unwrap();
        prop_assert!(!d.fallback_used);
        let after = prev.apply(alice).unwrap().apply(&d.mv).unwrap();
        let s = ShapeDescriptor::of(&after).unwrap();
        let (h, b) = (2 * u, 2 * v);
        let shape = |j2: u32, k2: u32, r: u32, bl: u32| ShapeDescriptor { j: j2, k: k2, red_hills: vec![r], blue_hills: vec![bl] };
        let allowed = [
            shape(j - 2, k, h + 2, b),
            shape(j, k - 2, h, b + 2),
            shape(j - 1, k - 1, h + 2, b),
            shape(j - 1, k - 1, h, b + 2),
            shape(j - 2, k, 2, b + h),
            shape(j, k - 2, h + b, 2),
        ];
        prop_assert!(allowed.contains(&s), "{} after {} then {}", s, alice, d.mv);

        // swapping colors in the input swaps them in the reply
        let mirrored = even_hill_reply(&prev.reflect(), &reflect_move(alice)).unwrap();
        prop_assert_eq!(mirrored.rule_tag, d.rule_tag);
        prop_assert_eq!(mirrored.mv, reflect_move(&d.mv));
    }

    #[test]
    fn shape_replies_commute_with_color_swaps(
        three in any::<bool>(), k in 2u32..=7, u in 1u32..=4, v in 1u32..=4, pick in any::<prop::sample::Index>(),
    ) {
        let j = if three { 3 } else { 2 };
        // with j == k both orientations read as the lemma's shape and either may be chosen
        prop_assume!((j + k) % 2 == 0 && j != k);
        let prev = ShapeDescriptor { j, k, red_hills: vec![2 * u], blue_hills: vec![2 * v] }.to_state().unwrap();
        let legal = prev.legal_moves();
        let alice = pick.get(&legal);
        let reply = if three { lemma4_reply } else { lemma3_reply };
        if let (Ok(d), Ok(m)) = (reply(&prev, alice), reply(&prev.reflect(), &reflect_move(alice))) {
            prop_assert_eq!(m.rule_tag, d.rule_tag);
            prop_assert_eq!(m.mv, reflect_move(&d.mv));
        }
    }

    #[test]
    fn bob_never_loses_a_random_line(
        (p, q) in (4u32..=8).prop_flat_map(|p| (Just(p), (p..=16 - p).prop_filter("even", move |q| (p + q) % 2 == 0))),
        picks in prop::collection::vec(any::<prop::sample::Index>(), 16),
    ) {
        let solver = Solver::new();
        let mut memory = PhaseMemory::new(GameConfig::new(p, q).unwrap()).unwrap();
        for pick in picks {
            let legal = memory.position.legal_moves();
            prop_assert!(!legal.is_empty() || memory.position.mover() == Player::First);
            if legal.is_empty() {
                return Ok(());
            }
            let alice = pick.get(&legal);
            let (d, next) = bob_move(&solver, &memory, alice).unwrap();
            let again = bob_move(&solver, &memory, alice).unwrap();
            prop_assert_eq!(again.0, d);
            let after = memory.position.apply(alice).unwrap();
            prop_assert!(after.is_legal(&d.mv));
            prop_assert!(solver.is_safe(&next.position).unwrap(), "{}", display_state(&next.position));
            memory = next;
        }
        prop_assert!(memory.position.is_terminal());
    }

    #[test]
    fn alice_wins_every_random_line_with_few_minority_chips(
        p in 1u32..=2, q in 2u32..=11, picks in prop::collection::vec(any::<prop::sample::Index>(), 14),
    ) {
        let solver = Solver::new();
        let config = GameConfig::new(p, q).unwrap();
        let mut state = config.initial_state();
        for pick in picks {
            if state.is_terminal() {
                break;
            }
            let d = alice_move(&solver, &state, config).unwrap();
            prop_assert!(!d.fallback_used);
            state = state.apply(&d.mv).unwrap();
            let legal = state.legal_moves();
            if legal.is_empty() {
                break;
            }
            state = state.apply(pick.get(&legal)).unwrap();
        }
        prop_assert!(state.is_terminal());
        // the player who cannot move is Bob
        prop_assert_eq!(state.mover(), Player::Second);
    }

    #[test]
    fn classification_matches_solver(p in 1u32..=7, q in 1u32..=9) {
        let (p, q) = (p.min(q), p.max(q));
        let c = classify_winner(GameConfig::new(p, q).unwrap());
        prop_assert_eq!(Solver::new().solve(&GameState::two_color(p, q).unwrap()).unwrap().winner, c.winner);
    }
}

#[test]
fn small_two_color_states_parse_from_every_shape() {
    let mut runner = proptest::test_runner::TestRunner::default();
    runner
        .run(&arb_two_color(8), |s| {
            let shape = format_state(&s, Style::Shape).unwrap();
            prop_assert!(shape.starts_with('<'));
            Ok(())
        })
        .unwrap();
}
