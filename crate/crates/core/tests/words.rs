use fiberatlas_core::word::{glue, int_rank, matrices, normalize, Letter, QuadraticWord};
use proptest::prelude::*;

/// Every arrangement of `a_1^{+-1}, ..., a_n^{+-1}`.
fn all_words(n: usize) -> Vec<QuadraticWord> {
    let tokens: Vec<Letter> =
        (1..=n).flat_map(|k| [Letter { index: k, sign: 1 }, Letter { index: k, sign: -1 }]).collect();
    let mut out = Vec::new();
    let mut used = vec![false; 2 * n];
    let mut cur = Vec::new();
    fn rec(tokens: &[Letter], used: &mut [bool], cur: &mut Vec<Letter>, out: &mut Vec<QuadraticWord>) {
        if cur.len() == tokens.len() {
            out.push(QuadraticWord::from_letters(cur.clone()).unwrap());
            return;
        }
        for i in 0..tokens.len() {
            if !used[i] {
                used[i] = true;
                cur.push(tokens[i]);
                rec(tokens, used, cur, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    rec(&tokens, &mut used, &mut cur, &mut out);
    out
}

/// Vertex classes by flood fill over the side identifications.
fn punctures(word: &QuadraticWord) -> usize {
    let m = 2 * word.n();
    let letters = word.letters();
    let mut adj = vec![Vec::new(); m];
    for j in 0..m {
        let p = (0..m).find(|&p| p != j && letters[p].index == letters[j].index).unwrap();
        // side j runs v_j -> v_{j+1}; its partner runs the other way
        adj[j].push((p + 1) % m);
        adj[(j + 1) % m].push(p);
    }
    let mut seen = vec![false; m];
    let mut classes = 0;
    for s in 0..m {
        if seen[s] {
            continue;
        }
        classes += 1;
        let mut stack = vec![s];
        seen[s] = true;
        while let Some(v) = stack.pop() {
            for &u in &adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
    }
    classes
}

/// Whether the two occurrences of `k` separate those of `l` on the circle.
fn interlaced(word: &QuadraticWord, k: usize, l: usize) -> bool {
    let pos = |x: usize| -> Vec<usize> {
        word.letters().iter().enumerate().filter(|(_, t)| t.index == x).map(|(i, _)| i).collect()
    };
    let (a, b) = (pos(k), pos(l));
    let inside = |p: usize| a[0] < p && p < a[1];
    inside(b[0]) != inside(b[1])
}

fn check(word: &QuadraticWord) {
    let n = word.n();
    let surf = glue(word);
    let data = matrices(word);
    let s = punctures(word);
    assert_eq!(surf.s, s, "{}", word.to_text());
    // Euler characteristic of one face, n edges, s vertices
    assert_eq!(2 * surf.g, n + 1 - s, "{}", word.to_text());
    for k in 0..n {
        for l in 0..n {
            assert_eq!(data.phi[k][l], -data.phi[l][k]);
            assert_eq!(data.phi[k][l] != 0, interlaced(word, k + 1, l + 1), "{} phi[{k}][{l}]", word.to_text());
            assert!(data.phi[k][l].abs() <= 1);
        }
    }
    assert_eq!(int_rank(&data.phi), 2 * surf.g);
    // the boundary word sums to zero: A_{2n} plus the last letter is A_1 = 0
    let last = word.letters()[2 * n - 1];
    let mut end = data.a[2 * n - 1].clone();
    end[last.index - 1] += last.sign as i64;
    assert!(end.iter().all(|&c| c == 0));
    let once = normalize(word);
    assert_eq!(normalize(&once), once);
    let again = glue(&once);
    assert!(again.tree_ok);
    assert_eq!((again.g, again.s), (surf.g, surf.s));
}

#[test]
fn named_words() {
    for (text, gs) in [("aA", (0, 2)), ("abAB", (1, 1)), ("abcABC", (1, 2)), ("abcdABCD", (2, 1))] {
        let s = glue(&QuadraticWord::parse(text).unwrap());
        assert_eq!((s.g, s.s), gs, "{text}");
    }
}

#[test]
fn exhaustive_up_to_four_letters() {
    let mut count = 0;
    for n in 1..=4 {
        for w in all_words(n) {
            check(&w);
            count += 1;
        }
    }
    assert_eq!(count, 2 + 24 + 720 + 40320);
}

fn random_word() -> impl Strategy<Value = QuadraticWord> {
    (1usize..=8)
        .prop_flat_map(|n| {
            let tokens: Vec<Letter> =
                (1..=n).flat_map(|k| [Letter { index: k, sign: 1 }, Letter { index: k, sign: -1 }]).collect();
            Just(tokens).prop_shuffle()
        })
        .prop_map(|t| QuadraticWord::from_letters(t).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn random_words(w in random_word()) {
        check(&w);
    }

    #[test]
    fn text_round_trip(w in random_word()) {
        prop_assert_eq!(QuadraticWord::parse(&w.to_text()).unwrap(), w);
    }
}
