use proptest::prelude::*;

use shiftlab_core::automata::{
    coprime_cycles, determinize, determinize_from_full, fisher_cover, flower, language_window, periodic_blocks,
    synchronizing_word, Edge, LabeledGraph,
};
use shiftlab_core::dynamics::mod_embedding;
use shiftlab_core::words::{difference_set, factors, gcd, thue_morse_prefix, Alphabet, Block};

fn block() -> impl Strategy<Value = Block> {
    "[01]{0,16}".prop_map(|s| Block::from(s.as_str()))
}

fn generators() -> impl Strategy<Value = Vec<Block>> {
    prop::collection::vec("[01]{1,5}".prop_map(|s| Block::from(s.as_str())), 1..4)
}

/// Irreducible binary graphs on up to four vertices.
fn irreducible_graph() -> impl Strategy<Value = LabeledGraph> {
    (1usize..=4)
        .prop_flat_map(|n| (Just(n), prop::collection::vec((0..n, 0..n, 0u8..2), n..=8)))
        .prop_map(|(n, raw)| {
            let names = (0..n).map(|i| format!("v{i}")).collect();
            let edges = raw
                .into_iter()
                .map(|(src, dst, l)| Edge {
                    src,
                    dst,
                    label: b'0' + l,
                })
                .collect();
            LabeledGraph::new(Alphabet::binary(), names, edges).unwrap()
        })
        .prop_filter("irreducible", |g| g.is_irreducible())
}

/// Vertices where paths labeled `w` end, by direct simulation on the graph.
fn path_ends(g: &LabeledGraph, w: &Block) -> Vec<usize> {
    let mut cur: Vec<bool> = vec![true; g.vertex_count()];
    for &a in w.as_bytes() {
        let mut next = vec![false; g.vertex_count()];
        for e in g.edges() {
            if cur[e.src] && e.label == a {
                next[e.dst] = true;
            }
        }
        cur = next;
    }
    (0..g.vertex_count()).filter(|&v| cur[v]).collect()
}

/// `reach[x][y]`: some path labeled `w` runs from `x` to `y`.
fn label_relation(g: &LabeledGraph, w: &Block) -> Vec<Vec<bool>> {
    let n = g.vertex_count();
    (0..n)
        .map(|x| {
            let mut cur = vec![false; n];
            cur[x] = true;
            for &a in w.as_bytes() {
                let mut next = vec![false; n];
                for e in g.edges() {
                    if cur[e.src] && e.label == a {
                        next[e.dst] = true;
                    }
                }
                cur = next;
            }
            cur
        })
        .collect()
}

fn compose(a: &[Vec<bool>], b: &[Vec<bool>]) -> Vec<Vec<bool>> {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).any(|k| a[i][k] && b[k][j])).collect())
        .collect()
}

proptest! {
    #[test]
    fn thue_morse_halves(n in 1usize..600) {
        let long = thue_morse_prefix(2 * n);
        let short = thue_morse_prefix(n);
        for i in 0..n {
            prop_assert_eq!(long.get(2 * i), short.get(i));
            prop_assert_ne!(long.get(2 * i + 1), short.get(i));
        }
    }

    #[test]
    fn difference_set_ignores_reversal(u in block()) {
        prop_assert_eq!(difference_set(&u), difference_set(&u.reversed()));
    }

    #[test]
    fn factors_closed_and_order_free(mut srcs in prop::collection::vec(block(), 1..4), l in 0usize..6) {
        let a = Alphabet::binary();
        let w1 = factors(&a, &srcs, l);
        srcs.reverse();
        let w2 = factors(&a, &srcs, l);
        prop_assert!(w1.is_factor_closed());
        prop_assert_eq!(w1.to_text(), w2.to_text());
    }

    #[test]
    fn flower_period_is_length_gcd(gens in generators()) {
        let g = flower(&Alphabet::binary(), &gens).unwrap();
        let want = gens.iter().fold(0, |acc, b| gcd(acc, b.len()));
        prop_assert_eq!(g.period().unwrap(), want);
    }

    #[test]
    fn fisher_cover_keeps_language(g in irreducible_graph()) {
        let f = fisher_cover(&g).unwrap();
        for l in 0..=8 {
            prop_assert_eq!(language_window(&g, l), language_window(&f, l));
        }
    }

    #[test]
    fn coprime_cycles_iff_period_one(g in irreducible_graph()) {
        let w = coprime_cycles(&g).unwrap();
        prop_assert_eq!(w.is_some(), g.period().unwrap() == 1);
        if let Some(w) = w {
            prop_assert!(g.is_closed_walk(&w.first.edges) && g.is_closed_walk(&w.second.edges));
            let (a, b) = w.lengths();
            prop_assert_eq!(gcd(a, b), 1);
        }
    }

    #[test]
    fn periodic_reports_reverify(g in irreducible_graph()) {
        let p = g.period().unwrap();
        let cover = determinize(&g);
        for o in periodic_blocks(&cover, 6) {
            let pw = o.block.repeat(o.exponent);
            prop_assert_eq!(cover.run(o.state, &pw), Some(o.state));
            // Some power of the block labels a closed walk, of length divisible by p.
            let step = label_relation(&g, &o.block);
            let mut power = step.clone();
            let mut found = false;
            for k in 1..=g.vertex_count() {
                if (0..g.vertex_count()).any(|v| power[v][v]) {
                    prop_assert_eq!((k * o.block.len()) % p, 0);
                    found = true;
                    break;
                }
                power = compose(&power, &step);
            }
            prop_assert!(found, "{} has no closed walk", o.block);
        }
    }

    #[test]
    fn synchronizing_words_focus(g in irreducible_graph()) {
        let f = fisher_cover(&g).unwrap();
        let cover = determinize_from_full(&f);
        if let Some(w) = synchronizing_word(&cover, cover.len()) {
            prop_assert_eq!(path_ends(&f, &w).len(), 1);
        }
    }

    #[test]
    fn embeddings_reverify(gens in generators(), u in "[01]{1,4}") {
        let u = Block::from(u.as_str());
        if let Ok(e) = mod_embedding(&gens, &u, 12) {
            prop_assert!(e.verify(&gens, &u));
        }
    }
}
