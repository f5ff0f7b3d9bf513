//! Dense ranking of game states.
//!
//! Sorted cop multisets over `v = 2n` vertices are ranked through the
//! combinatorial number system: a multiset `x_0 <= ... <= x_{c-1}` maps to
//! the strictly increasing tuple `y_i = x_i + i` whose colex rank is
//! `sum C(y_i, i+1)`. A full state then packs as
//! `(multiset_rank * v + robber) * 2 + side`.

use crate::game::Side;

/// Precomputed binomial table `C(i, j)` for `i <= max_n`, `j <= max_k`.
pub struct Binomials {
    cols: usize,
    table: Vec<u64>,
}

impl Binomials {
    pub fn new(max_n: usize, max_k: usize) -> Self {
        let cols = max_k + 1;
        let mut table = vec![0u64; (max_n + 1) * cols];
        for i in 0..=max_n {
            table[i * cols] = 1;
            for j in 1..=max_k.min(i) {
                table[i * cols + j] = table[(i - 1) * cols + j - 1] + table[(i - 1) * cols + j];
            }
        }
        Binomials { cols, table }
    }

    #[inline]
    pub fn c(&self, n: usize, k: usize) -> u64 {
        if k >= self.cols || n * self.cols >= self.table.len() {
            return 0;
        }
        self.table[n * self.cols + k]
    }
}

/// Ranking context for the game on `v = 2n` vertices with `c` cops.
pub struct StateSpace {
    pub v: u32,
    pub c: u32,
    binom: Binomials,
    pub multisets: u64,
    pub states: u64,
}

impl StateSpace {
    pub fn new(v: u32, c: u32) -> Self {
        assert!((1..=4).contains(&c), "1..=4 cops supported");
        let binom = Binomials::new(v as usize + c as usize, c as usize + 1);
        let multisets = binom.c(v as usize + c as usize - 1, c as usize);
        let states = multisets * v as u64 * 2;
        StateSpace {
            v,
            c,
            binom,
            multisets,
            states,
        }
    }

    /// Rank of a sorted cop multiset in `[0, multisets)`.
    #[inline]
    pub fn rank_multiset(&self, cops: &[u32]) -> u64 {
        debug_assert_eq!(cops.len(), self.c as usize);
        debug_assert!(cops.windows(2).all(|w| w[0] <= w[1]));
        let mut rank = 0u64;
        for (i, &x) in cops.iter().enumerate() {
            rank += self.binom.c(x as usize + i, i + 1);
        }
        rank
    }

    /// Inverse of [`Self::rank_multiset`]; writes the sorted multiset into `out`.
    pub fn unrank_multiset(&self, mut rank: u64, out: &mut [u32]) {
        debug_assert_eq!(out.len(), self.c as usize);
        let mut upper = self.v as usize + self.c as usize - 1;
        for i in (0..self.c as usize).rev() {
            let mut y = upper;
            while self.binom.c(y, i + 1) > rank {
                y -= 1;
            }
            rank -= self.binom.c(y, i + 1);
            out[i] = (y - i) as u32;
            upper = y;
        }
    }

    #[inline]
    pub fn side_bit(side: Side) -> u64 {
        match side {
            Side::Cops => 0,
            Side::Robber => 1,
        }
    }

    #[inline]
    pub fn rank_state(&self, cops: &[u32], robber: u32, side: Side) -> u64 {
        self.rank_from_parts(self.rank_multiset(cops), robber, Self::side_bit(side))
    }

    #[inline]
    pub fn rank_from_parts(&self, mrank: u64, robber: u32, side_bit: u64) -> u64 {
        (mrank * self.v as u64 + robber as u64) * 2 + side_bit
    }

    pub fn unrank_state(&self, rank: u64, cops: &mut [u32]) -> (u32, Side) {
        let side = if rank & 1 == 0 {
            Side::Cops
        } else {
            Side::Robber
        };
        let rest = rank >> 1;
        let robber = (rest % self.v as u64) as u32;
        self.unrank_multiset(rest / self.v as u64, cops);
        (robber, side)
    }
}

/// Visits every sorted size-`c` multiset over `[0, v)` in ascending
/// lexicographic order.
pub fn for_each_multiset(v: u32, c: usize, mut f: impl FnMut(&[u32])) {
    let mut x = vec![0u32; c];
    loop {
        f(&x);
        let mut i = c as i64 - 1;
        while i >= 0 && x[i as usize] == v - 1 {
            i -= 1;
        }
        if i < 0 {
            return;
        }
        let next = x[i as usize] + 1;
        for slot in &mut x[i as usize..] {
            *slot = next;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_values() {
        let b = Binomials::new(60, 5);
        assert_eq!(b.c(0, 0), 1);
        assert_eq!(b.c(5, 2), 10);
        assert_eq!(b.c(58, 3), 30856);
        assert_eq!(b.c(59, 4), 455126);
        assert_eq!(b.c(3, 5), 0);
    }

    #[test]
    fn multiset_counts_match_targets() {
        assert_eq!(StateSpace::new(10, 3).multisets, 220);
        assert_eq!(StateSpace::new(56, 3).multisets, 30856);
        assert_eq!(StateSpace::new(56, 4).multisets, 455126);
        assert_eq!(StateSpace::new(56, 3).states, 3_455_872);
        assert_eq!(StateSpace::new(56, 4).states, 50_974_112);
    }

    #[test]
    fn multiset_roundtrip_exhaustive() {
        for c in 1..=3u32 {
            let sp = StateSpace::new(10, c);
            let mut out = vec![0u32; c as usize];
            let mut seen = std::collections::HashSet::new();
            for rank in 0..sp.multisets {
                sp.unrank_multiset(rank, &mut out);
                assert!(out.windows(2).all(|w| w[0] <= w[1]), "sorted");
                assert!(out.iter().all(|&x| x < 10), "in range");
                assert_eq!(sp.rank_multiset(&out), rank);
                assert!(seen.insert(out.clone()));
            }
            assert_eq!(seen.len() as u64, sp.multisets);
        }
    }

    #[test]
    fn state_rank_roundtrip() {
        let sp = StateSpace::new(20, 2);
        let mut cops = [0u32; 2];
        for rank in 0..sp.states {
            let (robber, side) = sp.unrank_state(rank, &mut cops);
            assert_eq!(sp.rank_state(&cops, robber, side), rank);
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn multiset_rank_roundtrips(
                v in 6u32..85,
                c in 1usize..5,
                raw in proptest::collection::vec(0u32..85, 4),
            ) {
                let mut m: Vec<u32> = raw[..c].iter().map(|&x| x % v).collect();
                m.sort_unstable();
                let sp = StateSpace::new(v, c as u32);
                let rank = sp.rank_multiset(&m);
                prop_assert!(rank < sp.multisets);
                let mut out = vec![0u32; c];
                sp.unrank_multiset(rank, &mut out);
                prop_assert_eq!(out, m);
            }

            #[test]
            fn state_ranks_stay_in_range(
                v in 6u32..85,
                c in 1usize..5,
                raw in proptest::collection::vec(0u32..85, 4),
                robber in 0u32..85,
                side in proptest::bool::ANY,
            ) {
                let mut m: Vec<u32> = raw[..c].iter().map(|&x| x % v).collect();
                m.sort_unstable();
                let sp = StateSpace::new(v, c as u32);
                let side = if side { Side::Robber } else { Side::Cops };
                let rank = sp.rank_state(&m, robber % v, side);
                prop_assert!(rank < sp.states);
                let mut out = vec![0u32; c];
                let (r2, s2) = sp.unrank_state(rank, &mut out);
                prop_assert_eq!(r2, robber % v);
                prop_assert_eq!(s2, side);
                prop_assert_eq!(out, m);
            }
        }
    }

    #[test]
    fn multiset_enumeration_is_complete_and_ordered() {
        let sp = StateSpace::new(9, 3);
        let mut prev: Option<Vec<u32>> = None;
        let mut count = 0u64;
        for_each_multiset(9, 3, |m| {
            if let Some(p) = &prev {
                assert!(p.as_slice() < m, "ascending order");
            }
            assert!(m.windows(2).all(|w| w[0] <= w[1]));
            prev = Some(m.to_vec());
            count += 1;
        });
        assert_eq!(count, sp.multisets);
    }
}
