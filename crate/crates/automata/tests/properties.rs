//! Cross-checks of the compilation pipeline against brute-force oracles:
//! direct NFA simulation, exhaustive enumeration, and a table-filling
//! distinguishability check independent of the minimizer.

use rgi_automata::randgen::{random_dfa, random_regex, SplitMix64};
use rgi_automata::{compile_nfa, Alphabet, Dfa};

/// All strings over `symbols` tokens up to `max_len`, length-then-lex.
fn all_strings(symbols: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    let mut frontier = vec![vec![]];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for prefix in &frontier {
            for sym in 0..symbols {
                let mut s = prefix.clone();
                s.push(sym);
                next.push(s);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Moore-style table filling: rounds of marking distinguishable state pairs.
/// Returns the round at which each pair was marked (None = indistinguishable).
#[allow(clippy::needless_range_loop)]
fn distinguishability_table(dfa: &Dfa) -> Vec<Vec<Option<usize>>> {
    let n = dfa.state_count();
    let mut marked: Vec<Vec<Option<usize>>> = vec![vec![None; n]; n];
    for i in 0..n {
        for j in 0..n {
            if dfa.is_accepting(i) != dfa.is_accepting(j) {
                marked[i][j] = Some(0);
            }
        }
    }
    let mut round = 0;
    loop {
        round += 1;
        let mut changed = false;
        for i in 0..n {
            for j in 0..n {
                if i == j || marked[i][j].is_some() {
                    continue;
                }
                for sym in 0..dfa.alphabet().len() {
                    let ti = dfa.transition(i, sym).unwrap();
                    let tj = dfa.transition(j, sym).unwrap();
                    if marked[ti][tj].is_some() {
                        marked[i][j] = Some(round);
                        changed = true;
                        break;
                    }
                }
            }
        }
        if !changed {
            return marked;
        }
    }
}

#[test]
fn compiled_dfa_agrees_with_nfa_simulation() {
    let mut rng = SplitMix64::new(0x5eed);
    for case in 0..60 {
        let symbols = 2 + (case % 2);
        let (pattern, regex) = random_regex(&mut rng, symbols, 3);
        let nfa = compile_nfa(&regex);
        let dfa = nfa.determinize().unwrap();
        for string in all_strings(symbols, 8) {
            assert_eq!(
                dfa.accepts_indices(&string),
                nfa.simulate(&string),
                "pattern {pattern} disagrees on {string:?}"
            );
        }
    }
}

#[test]
fn minimize_preserves_language_of_random_dfas() {
    let mut rng = SplitMix64::new(0xda7a);
    for case in 0..120 {
        let symbols = 2 + (case % 2);
        let dfa = random_dfa(&mut rng, 8, symbols, true).complete();
        let min = dfa.minimize().unwrap();
        assert_eq!(
            dfa.equivalent(&min).unwrap(),
            None,
            "minimization changed the language of {dfa:?}"
        );
        assert!(min.state_count() <= dfa.state_count());
    }
}

#[test]
#[allow(clippy::needless_range_loop)]
fn minimized_dfas_have_pairwise_distinguishable_states() {
    let mut rng = SplitMix64::new(0xd15c);
    for case in 0..120 {
        let symbols = 2 + (case % 2);
        let min = random_dfa(&mut rng, 8, symbols, true)
            .complete()
            .minimize()
            .unwrap();
        let table = distinguishability_table(&min);
        let n = min.state_count();
        for i in 0..n {
            for j in (i + 1)..n {
                let round =
                    table[i][j].unwrap_or_else(|| panic!("states {i} and {j} indistinguishable"));
                // a distinguishing string of length < state count exists
                assert!(round < n);
            }
        }
    }
}

#[test]
fn complete_preserves_language() {
    let mut rng = SplitMix64::new(0xc0de);
    for _ in 0..80 {
        let dfa = random_dfa(&mut rng, 8, 2, true);
        let total = dfa.complete();
        for string in all_strings(2, 7) {
            assert_eq!(dfa.accepts_indices(&string), total.accepts_indices(&string));
        }
    }
}

#[test]
fn equivalence_agrees_with_brute_force_and_is_symmetric() {
    let mut rng = SplitMix64::new(0xeeee);
    for _ in 0..60 {
        let a = random_dfa(&mut rng, 6, 2, false);
        let b = random_dfa(&mut rng, 6, 2, false);
        let forward = a.equivalent(&b).unwrap();
        let backward = b.equivalent(&a).unwrap();
        assert_eq!(forward.is_some(), backward.is_some());
        assert_eq!(forward, backward);

        // brute force: first differing string in length-lex order, up to 8
        let brute = all_strings(2, 8)
            .into_iter()
            .find(|s| a.accepts_indices(s) != b.accepts_indices(s));
        match (&forward, &brute) {
            (Some(w), Some(expected)) => {
                assert_eq!(w, expected, "counterexample must be shortest-then-lex");
            }
            (Some(w), None) => {
                // a genuine difference longer than the brute-force horizon
                assert!(w.len() > 8);
                assert_ne!(a.accepts_indices(w), b.accepts_indices(w));
            }
            (None, Some(expected)) => {
                panic!("missed difference {expected:?}");
            }
            (None, None) => {}
        }
    }
}

#[test]
fn subset_construction_keeps_sink_last() {
    let alphabet = Alphabet::new(["0", "1"]).unwrap();
    let regex = rgi_automata::parse_regex("(01)*", &alphabet).unwrap();
    let dfa = compile_nfa(&regex).determinize().unwrap();
    let sink = dfa.state_count() - 1;
    assert!(!dfa.is_accepting(sink));
    for sym in 0..2 {
        assert_eq!(dfa.transition(sink, sym), Some(sink));
    }
}
