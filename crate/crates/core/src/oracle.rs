//! Commutation classes of reduced words for the longest permutation of `S_n`.
//!
//! Rhombic tilings of the `2n`-gon are in bijection with these classes, so
//! their number is an independent check on the flip-graph enumeration. Nothing
//! here touches tilings: words are sequences of adjacent transpositions
//! `s_0, .., s_{n-2}`, classes are represented by their lexicographically
//! smallest word, and new classes are found by braid moves.

use std::collections::{HashSet, VecDeque};

/// `s_0 (s_1 s_0) (s_2 s_1 s_0) ...`, a reduced word for the longest element.
pub fn longest_word(n: usize) -> Vec<u8> {
    let mut w = Vec::new();
    for top in 0..n.saturating_sub(1) {
        for s in (0..=top).rev() {
            w.push(s as u8);
        }
    }
    w
}

/// Applies the word to the identity permutation, swapping positions `s, s+1`.
pub fn apply_word(n: usize, word: &[u8]) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    for &s in word {
        perm.swap(s as usize, s as usize + 1);
    }
    perm
}

pub fn inversions(perm: &[usize]) -> usize {
    let mut count = 0;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                count += 1;
            }
        }
    }
    count
}

/// True iff `word` is a reduced word of the longest permutation.
pub fn is_longest_reduced(n: usize, word: &[u8]) -> bool {
    let perm = apply_word(n, word);
    word.len() == n * n.saturating_sub(1) / 2 && perm.iter().rev().copied().eq(0..n)
}

#[inline]
fn commute(a: u8, b: u8) -> bool {
    a.abs_diff(b) >= 2
}

// Heap order of a word: `below[j]` has bit `i` iff i < j and position i must
// precede position j in every word of the commutation class.
fn heap_below(word: &[u8]) -> Vec<u64> {
    assert!(word.len() <= 64);
    let mut below = vec![0u64; word.len()];
    for j in 0..word.len() {
        for i in 0..j {
            if !commute(word[i], word[j]) {
                below[j] |= below[i] | 1 << i;
            }
        }
    }
    below
}

/// Lexicographically smallest word in the commutation class of `word`.
pub fn canonical(word: &[u8]) -> Vec<u8> {
    let below = heap_below(word);
    let mut placed = 0u64;
    let mut out = Vec::with_capacity(word.len());
    for _ in 0..word.len() {
        let pick = (0..word.len())
            .filter(|&i| placed >> i & 1 == 0 && below[i] & !placed == 0)
            .min_by_key(|&i| (word[i], i))
            .expect("a heap always has a minimal element");
        placed |= 1 << pick;
        out.push(word[pick]);
    }
    out
}

/// All words reachable from the class of `word` by one braid move, each
/// reduced to canonical form.
fn braid_neighbors(word: &[u8]) -> Vec<Vec<u8>> {
    let len = word.len();
    let below = heap_below(word);
    let mut above = vec![0u64; len];
    for j in 0..len {
        let mut bits = below[j];
        while bits != 0 {
            let i = bits.trailing_zeros() as usize;
            above[i] |= 1 << j;
            bits &= bits - 1;
        }
    }
    let mut out = Vec::new();
    for a in 0..len {
        for c in a + 1..len {
            if word[a] != word[c] || above[a] >> c & 1 == 0 {
                continue;
            }
            let between = above[a] & below[c];
            if between.count_ones() != 1 {
                continue;
            }
            let b = between.trailing_zeros() as usize;
            if word[b].abs_diff(word[a]) != 1 {
                continue;
            }
            // a linear extension with a, b, c consecutive: first everything
            // before c that is not above a, then a b c, then the rest
            let mut next = Vec::with_capacity(len);
            let mut rest = Vec::new();
            for i in 0..len {
                if i == a || i == b || i == c {
                    continue;
                }
                if i < c && above[a] >> i & 1 == 0 {
                    next.push(word[i]);
                } else {
                    rest.push(word[i]);
                }
            }
            next.extend([word[b], word[a], word[b]]);
            next.extend(rest);
            out.push(canonical(&next));
        }
    }
    out
}

/// Number of commutation classes of reduced words of the longest element of
/// `S_n`, by breadth-first search over classes.
pub fn commutation_class_count(n: usize) -> usize {
    commutation_classes(n).len()
}

pub fn commutation_classes(n: usize) -> Vec<Vec<u8>> {
    let start = canonical(&longest_word(n));
    let mut seen: HashSet<Vec<u8>> = HashSet::from([start.clone()]);
    let mut order = vec![start.clone()];
    let mut queue = VecDeque::from([start]);
    while let Some(w) = queue.pop_front() {
        for next in braid_neighbors(&w) {
            if seen.insert(next.clone()) {
                order.push(next.clone());
                queue.push_back(next);
            }
        }
    }
    order
}

/// Every reduced word of the longest element, by closing under braid and
/// commutation moves. Only for small `n`: there are 292,864 words at `n = 6`.
pub fn all_reduced_words(n: usize) -> Vec<Vec<u8>> {
    let start = longest_word(n);
    let mut seen: HashSet<Vec<u8>> = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some(w) = queue.pop_front() {
        let mut push = |v: Vec<u8>| {
            if seen.insert(v.clone()) {
                queue.push_back(v);
            }
        };
        for i in 0..w.len().saturating_sub(1) {
            if commute(w[i], w[i + 1]) {
                let mut v = w.clone();
                v.swap(i, i + 1);
                push(v);
            }
        }
        for i in 0..w.len().saturating_sub(2) {
            if w[i] == w[i + 2] && w[i].abs_diff(w[i + 1]) == 1 {
                let mut v = w.clone();
                v[i] = w[i + 1];
                v[i + 1] = w[i];
                v[i + 2] = w[i + 1];
                push(v);
            }
        }
    }
    let mut words: Vec<Vec<u8>> = seen.into_iter().collect();
    words.sort();
    words
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn longest_word_is_reduced() {
        for n in 1..=8 {
            let w = longest_word(n);
            assert!(is_longest_reduced(n, &w), "n = {n}");
            assert_eq!(inversions(&apply_word(n, &w)), w.len());
        }
        assert!(!is_longest_reduced(3, &[0, 0, 1]));
    }

    #[test]
    fn canonical_is_class_invariant() {
        // 0 2 commute: both orders are one class
        assert_eq!(canonical(&[2, 0, 1]), canonical(&[0, 2, 1]));
        assert_eq!(canonical(&[2, 0, 1]), vec![0, 2, 1]);
        assert_ne!(canonical(&[0, 1, 0]), canonical(&[1, 0, 1]));
    }

    #[test]
    fn small_class_counts() {
        assert_eq!(commutation_class_count(1), 1);
        assert_eq!(commutation_class_count(2), 1);
        assert_eq!(commutation_class_count(3), 2);
        assert_eq!(commutation_class_count(4), 8);
        assert_eq!(commutation_class_count(5), 62);
    }

    #[test]
    fn brute_force_word_closure_agrees() {
        for n in 2..=5 {
            let words = all_reduced_words(n);
            assert!(words.iter().all(|w| is_longest_reduced(n, w)));
            let classes: HashSet<Vec<u8>> = words.iter().map(|w| canonical(w)).collect();
            assert_eq!(classes.len(), commutation_class_count(n), "n = {n}");
        }
        assert_eq!(all_reduced_words(4).len(), 16);
        assert_eq!(all_reduced_words(5).len(), 768);
    }
}
