//! Suffix array construction (SA-IS) and BWT derivation.
//!
//! Texts are rank sequences terminated by the unique, smallest sentinel
//! rank 0. With such a terminator the lexicographic order of cyclic
//! rotations equals suffix order, so the suffix array is all we need to
//! derive the last column of the sorted rotation matrix.

use crate::error::{Error, Result};

const EMPTY: u32 = u32::MAX;

/// Suffix array with 1-based text positions, sentinel suffix first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuffixArray {
    sa: Vec<u32>,
}

impl SuffixArray {
    /// 1-based suffix positions in lexicographic order.
    pub fn positions(&self) -> &[u32] {
        &self.sa
    }

    pub fn len(&self) -> usize {
        self.sa.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sa.is_empty()
    }
}

/// Check that `ranks` is terminated by exactly one sentinel (rank 0).
fn validate_sentinel(ranks: &[u8]) -> Result<()> {
    match ranks.last() {
        Some(0) => {}
        _ => return Err(Error::SentinelMissing),
    }
    if let Some(p) = ranks[..ranks.len() - 1].iter().position(|&r| r == 0) {
        return Err(Error::SentinelNotUnique { position: p + 1 });
    }
    Ok(())
}

/// Suffix array of a sentinel-terminated rank sequence, by induced sorting.
pub fn build_suffix_array(ranks: &[u8]) -> Result<SuffixArray> {
    validate_sentinel(ranks)?;
    let s: Vec<u32> = ranks.iter().map(|&r| r as u32).collect();
    let sigma = *s.iter().max().unwrap() as usize + 1;
    let mut sa = sa_is(&s, sigma);
    for p in sa.iter_mut() {
        *p += 1;
    }
    Ok(SuffixArray { sa })
}

/// Last column of the sorted rotation matrix: `L[i] = text[sa[i] - 1]`, with
/// the sentinel standing in when `sa[i] = 1`.
pub fn bwt_from_sa(ranks: &[u8], sa: &SuffixArray) -> Vec<u8> {
    debug_assert_eq!(ranks.len(), sa.len());
    sa.positions()
        .iter()
        .map(|&p| {
            if p == 1 {
                ranks[ranks.len() - 1] // the sentinel itself
            } else {
                ranks[p as usize - 2]
            }
        })
        .collect()
}

/// Reverse the non-sentinel prefix, keeping the sentinel terminal.
pub fn reverse_text(ranks: &[u8]) -> Result<Vec<u8>> {
    validate_sentinel(ranks)?;
    let n = ranks.len();
    let mut out = ranks[..n - 1].to_vec();
    out.reverse();
    out.push(0);
    Ok(out)
}

/// SA-IS over a sequence whose last element is the unique minimum.
fn sa_is(s: &[u32], sigma: usize) -> Vec<u32> {
    let n = s.len();
    match n {
        0 => return Vec::new(),
        1 => return vec![0],
        2 => return vec![1, 0],
        _ => {}
    }

    // Suffix types: S if strictly smaller than its right neighbour suffix.
    let mut is_s = vec![false; n];
    is_s[n - 1] = true;
    for i in (0..n - 1).rev() {
        is_s[i] = s[i] < s[i + 1] || (s[i] == s[i + 1] && is_s[i + 1]);
    }
    let is_lms = |i: usize| i > 0 && is_s[i] && !is_s[i - 1];

    let mut sizes = vec![0u32; sigma];
    for &c in s {
        sizes[c as usize] += 1;
    }

    let mut sa = vec![EMPTY; n];

    // Pass 1: drop LMS suffixes at their bucket tails, then induce.
    let mut tails = bucket_tails(&sizes);
    for i in (1..n).rev() {
        if is_lms(i) {
            let c = s[i] as usize;
            tails[c] -= 1;
            sa[tails[c] as usize] = i as u32;
        }
    }
    induce(&mut sa, s, &is_s, &sizes);

    // Name the now-sorted LMS substrings.
    let lms_positions: Vec<u32> = (1..n).filter(|&i| is_lms(i)).map(|i| i as u32).collect();
    let num_lms = lms_positions.len();
    let mut name_of = vec![EMPTY; n];
    let mut name = 0u32;
    let mut prev = EMPTY;
    for &p in sa.iter() {
        let p = p as usize;
        if !is_lms(p) {
            continue;
        }
        if prev != EMPTY && !lms_substrings_equal(s, &is_s, prev as usize, p, &is_lms) {
            name += 1;
        }
        name_of[p] = name;
        prev = p as u32;
    }
    let num_names = name as usize + 1;

    let reduced: Vec<u32> = lms_positions.iter().map(|&p| name_of[p as usize]).collect();
    let reduced_sa = if num_names == num_lms {
        // All names distinct: the reduced suffix array is the inverse permutation.
        let mut rsa = vec![0u32; num_lms];
        for (i, &nm) in reduced.iter().enumerate() {
            rsa[nm as usize] = i as u32;
        }
        rsa
    } else {
        sa_is(&reduced, num_names)
    };

    // Pass 2: place LMS suffixes in their true order and induce again.
    sa.fill(EMPTY);
    let mut tails = bucket_tails(&sizes);
    for &ri in reduced_sa.iter().rev() {
        let p = lms_positions[ri as usize];
        let c = s[p as usize] as usize;
        tails[c] -= 1;
        sa[tails[c] as usize] = p;
    }
    induce(&mut sa, s, &is_s, &sizes);
    sa
}

fn bucket_heads(sizes: &[u32]) -> Vec<u32> {
    let mut heads = Vec::with_capacity(sizes.len());
    let mut acc = 0u32;
    for &sz in sizes {
        heads.push(acc);
        acc += sz;
    }
    heads
}

fn bucket_tails(sizes: &[u32]) -> Vec<u32> {
    let mut tails = Vec::with_capacity(sizes.len());
    let mut acc = 0u32;
    for &sz in sizes {
        acc += sz;
        tails.push(acc);
    }
    tails
}

/// Induce L-suffixes left-to-right from bucket heads, then S-suffixes
/// right-to-left from bucket tails.
fn induce(sa: &mut [u32], s: &[u32], is_s: &[bool], sizes: &[u32]) {
    let n = s.len();
    let mut heads = bucket_heads(sizes);
    for i in 0..n {
        let j = sa[i];
        if j != EMPTY && j > 0 {
            let j1 = j as usize - 1;
            if !is_s[j1] {
                let c = s[j1] as usize;
                sa[heads[c] as usize] = j1 as u32;
                heads[c] += 1;
            }
        }
    }
    let mut tails = bucket_tails(sizes);
    for i in (0..n).rev() {
        let j = sa[i];
        if j != EMPTY && j > 0 {
            let j1 = j as usize - 1;
            if is_s[j1] {
                let c = s[j1] as usize;
                tails[c] -= 1;
                sa[tails[c] as usize] = j1 as u32;
            }
        }
    }
}

fn lms_substrings_equal(
    s: &[u32],
    is_s: &[bool],
    a: usize,
    b: usize,
    is_lms: &impl Fn(usize) -> bool,
) -> bool {
    if s[a] != s[b] || is_s[a] != is_s[b] {
        return false;
    }
    let mut d = 1;
    loop {
        let a_lms = is_lms(a + d);
        let b_lms = is_lms(b + d);
        if a_lms && b_lms {
            return true;
        }
        if a_lms != b_lms || s[a + d] != s[b + d] || is_s[a + d] != is_s[b + d] {
            return false;
        }
        d += 1;
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::alphabet::Alphabet;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    /// Naive oracle: sort all suffixes by direct comparison. 1-based.
    pub(crate) fn naive_suffix_array(ranks: &[u8]) -> Vec<u32> {
        let mut sa: Vec<u32> = (1..=ranks.len() as u32).collect();
        sa.sort_by(|&a, &b| ranks[a as usize - 1..].cmp(&ranks[b as usize - 1..]));
        sa
    }

    /// Naive oracle: last column of the sorted rotation matrix.
    pub(crate) fn rotation_matrix_last_column(ranks: &[u8]) -> Vec<u8> {
        let n = ranks.len();
        let mut rows: Vec<Vec<u8>> = (0..n)
            .map(|i| {
                let mut r = ranks[i..].to_vec();
                r.extend_from_slice(&ranks[..i]);
                r
            })
            .collect();
        rows.sort();
        rows.iter().map(|r| r[n - 1]).collect()
    }

    pub(crate) fn mississippi_ranks() -> Vec<u8> {
        let a = Alphabet::with_sentinel(b"imps").unwrap();
        let mut r = a.ranks_of(b"mississippi").unwrap();
        r.push(0);
        r
    }

    #[test]
    fn two_char_text() {
        let sa = build_suffix_array(&[1, 0]).unwrap();
        assert_eq!(sa.positions(), &[2, 1]);
    }

    #[test]
    fn sentinel_validation() {
        assert!(matches!(build_suffix_array(&[1, 2]), Err(Error::SentinelMissing)));
        assert!(matches!(
            build_suffix_array(&[1, 0, 2, 0]),
            Err(Error::SentinelNotUnique { position: 2 })
        ));
    }

    #[test]
    fn mississippi_suffix_order_and_bwt() {
        let ranks = mississippi_ranks();
        let sa = build_suffix_array(&ranks).unwrap();
        assert_eq!(sa.positions(), naive_suffix_array(&ranks).as_slice());
        assert_eq!(sa.positions()[0], 12); // sentinel suffix first
        let bwt = bwt_from_sa(&ranks, &sa);
        // L = "ipssm$pissii"
        let a = Alphabet::with_sentinel(b"imps").unwrap();
        let l: Vec<u8> = bwt.iter().map(|&r| a.symbol_of(r).unwrap()).collect();
        assert_eq!(l, b"ipssm$pissii");
        assert_eq!(bwt, rotation_matrix_last_column(&ranks));
    }

    #[test]
    fn reverse_keeps_sentinel_terminal() {
        // "miss$" -> "ssim$"
        let a = Alphabet::with_sentinel(b"ims").unwrap();
        let mut r = a.ranks_of(b"miss").unwrap();
        r.push(0);
        let rev = reverse_text(&r).unwrap();
        let shown: Vec<u8> = rev.iter().map(|&x| a.symbol_of(x).unwrap()).collect();
        assert_eq!(shown, b"ssim$");
        assert_eq!(reverse_text(&rev).unwrap(), r);

        let m = mississippi_ranks();
        let am = Alphabet::with_sentinel(b"imps").unwrap();
        let rev: Vec<u8> =
            reverse_text(&m).unwrap().iter().map(|&x| am.symbol_of(x).unwrap()).collect();
        assert_eq!(rev, b"ippississim$");
    }

    #[test]
    fn random_texts_match_naive_sort() {
        let mut rng = StdRng::seed_from_u64(7);
        for case in 0..300 {
            let sigma = [2usize, 3, 5, 11, 17, 27][case % 6];
            let n = rng.gen_range(1..=256);
            let mut ranks: Vec<u8> =
                (0..n).map(|_| rng.gen_range(1..=sigma as u8)).collect();
            ranks.push(0);
            let sa = build_suffix_array(&ranks).unwrap();
            assert_eq!(sa.positions(), naive_suffix_array(&ranks).as_slice());
            let bwt = bwt_from_sa(&ranks, &sa);
            assert_eq!(bwt, rotation_matrix_last_column(&ranks));
        }
    }
}
