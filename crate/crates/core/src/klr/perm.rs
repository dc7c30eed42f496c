//! Permutations of strands as seen from the top of a diagram.
//!
//! A permutation is stored as `t` with `t[p]` the bottom position of the strand
//! that ends at top position `p`. Stacking `psi_k` on top swaps `t[k]` and `t[k+1]`.

pub type Perm = Vec<usize>;

pub fn identity(n: usize) -> Perm {
    (0..n).collect()
}

pub fn is_identity(t: &[usize]) -> bool {
    t.iter().enumerate().all(|(p, &x)| p == x)
}

/// Stacks `psi_k` on top.
pub fn apply_top(t: &[usize], k: usize) -> Perm {
    let mut t = t.to_vec();
    t.swap(k, k + 1);
    t
}

/// True when stacking `psi_k` on top lengthens the permutation.
pub fn lengthens(t: &[usize], k: usize) -> bool {
    t[k] < t[k + 1]
}

pub fn length(t: &[usize]) -> usize {
    let mut l = 0;
    for a in 0..t.len() {
        for b in a + 1..t.len() {
            if t[a] > t[b] {
                l += 1;
            }
        }
    }
    l
}

pub fn left_descents(t: &[usize]) -> impl Iterator<Item = usize> + '_ {
    (0..t.len().saturating_sub(1)).filter(move |&k| t[k] > t[k + 1])
}

pub fn min_left_descent(t: &[usize]) -> Option<usize> {
    left_descents(t).next()
}

/// Lexicographically least reduced word, top letter first.
pub fn canonical_word(t: &[usize]) -> Vec<usize> {
    let mut t = t.to_vec();
    let mut out = Vec::new();
    while let Some(c) = min_left_descent(&t) {
        out.push(c);
        t.swap(c, c + 1);
    }
    out
}

/// Permutation of a word of crossings listed top to bottom.
pub fn perm_of_word(n: usize, letters: &[usize]) -> Perm {
    let mut t = identity(n);
    for &k in letters.iter().rev() {
        t.swap(k, k + 1);
    }
    t
}

pub fn is_reduced(n: usize, letters: &[usize]) -> bool {
    length(&perm_of_word(n, letters)) == letters.len()
}

/// Labels read along the top, given the labels `word` along the bottom.
pub fn top_word(t: &[usize], word: &[usize]) -> Vec<usize> {
    t.iter().map(|&b| word[b]).collect()
}

/// Top position of each bottom strand.
pub fn inverse(t: &[usize]) -> Perm {
    let mut inv = vec![0; t.len()];
    for (p, &b) in t.iter().enumerate() {
        inv[b] = p;
    }
    inv
}

/// All permutations of `n` strands in lexicographic order.
pub fn all_perms(n: usize) -> Vec<Perm> {
    let mut out = Vec::new();
    let mut cur = identity(n);
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_words_are_reduced_and_least() {
        for t in all_perms(4) {
            let w = canonical_word(&t);
            assert_eq!(perm_of_word(4, &w), t);
            assert_eq!(w.len(), length(&t));
        }
        assert_eq!(all_perms(4).len(), 24);
        // longest element of S3: both 010 and 101 are reduced; 010 is least
        assert_eq!(canonical_word(&[2, 1, 0]), vec![0, 1, 0]);
    }

    #[test]
    fn top_labels_follow_strands() {
        let t = perm_of_word(2, &[0]);
        assert_eq!(top_word(&t, &[7, 9]), vec![9, 7]);
        assert!(lengthens(&identity(2), 0));
        assert!(!lengthens(&t, 0));
    }
}
