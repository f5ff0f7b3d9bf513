//! Dihedral canonicalization of game states.
//!
//! Rotations and the reflection both preserve each ring, so the robber's
//! ring is orbit-invariant and exactly two of the `2n` group elements move
//! the robber to index 0 of its ring: the rotation by `-j`, and the
//! reflection composed with the rotation by `j`. The canonical
//! representative is the lexicographically smaller of those two images
//! (only the cop multisets differ; robber and side agree by construction).

use crate::game::GameState;
use crate::graph::{GPGraph, Vertex};

/// Canonicalizes `(cops, robber)` under the dihedral action; writes the
/// canonical sorted cop multiset into `out` and returns the canonical
/// robber id (0 for outer, n for inner).
#[inline]
pub(crate) fn canonical_ids(n: u32, cops: &[u32], robber: u32, out: &mut [u32; 4]) -> u32 {
    let c = cops.len();
    let (base, j) = if robber < n {
        (0, robber)
    } else {
        (n, robber - n)
    };
    let mut c1 = [0u32; 4];
    let mut c2 = [0u32; 4];
    for (i, &x) in cops.iter().enumerate() {
        let (xb, xi) = if x < n { (0, x) } else { (n, x - n) };
        let mut r1 = xi + n - j; // rotate by -j
        if r1 >= n {
            r1 -= n;
        }
        let mut r2 = j + n - xi; // reflect, then rotate by +j
        if r2 >= n {
            r2 -= n;
        }
        c1[i] = xb + r1;
        c2[i] = xb + r2;
    }
    c1[..c].sort_unstable();
    c2[..c].sort_unstable();
    if c1[..c] <= c2[..c] {
        out[..c].copy_from_slice(&c1[..c]);
    } else {
        out[..c].copy_from_slice(&c2[..c]);
    }
    base
}

/// The lexicographically least state in the orbit of `s` under the 2n
/// dihedral maps applied to all pieces, ordering states by (robber, cops).
pub fn canonicalize(g: &GPGraph, s: &GameState) -> GameState {
    let n = g.n();
    let ids = s.cop_ids(n);
    let mut out = [0u32; 4];
    let robber = canonical_ids(n, &ids, s.robber.id(n), &mut out);
    let cops = out[..ids.len()]
        .iter()
        .map(|&id| Vertex::from_id(id, n))
        .collect();
    GameState::new(n, cops, Vertex::from_id(robber, n), s.to_move).expect("same cop count")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::Side;
    use crate::graph::{reflect, rotate};

    fn apply_all(g: &GPGraph, s: &GameState, t: i64, refl: bool) -> GameState {
        let n = g.n();
        let map = |v: Vertex| {
            let v = if refl { reflect(v, n) } else { v };
            rotate(v, t, n)
        };
        GameState::new(
            n,
            s.cops().iter().copied().map(map).collect(),
            map(s.robber),
            s.to_move,
        )
        .unwrap()
    }

    #[test]
    fn idempotent_and_orbit_constant() {
        let g = GPGraph::new(28, 8).unwrap();
        let s = GameState::new(
            28,
            vec![
                Vertex::outer(3, 28),
                Vertex::inner(17, 28),
                Vertex::outer(20, 28),
            ],
            Vertex::inner(5, 28),
            Side::Robber,
        )
        .unwrap();
        let canon = canonicalize(&g, &s);
        assert_eq!(canonicalize(&g, &canon), canon);
        for t in 0..28 {
            for refl in [false, true] {
                let image = apply_all(&g, &s, t, refl);
                assert_eq!(canonicalize(&g, &image), canon);
            }
        }
    }

    #[test]
    fn orbit_sizes_divide_group_order() {
        let g = GPGraph::new(14, 4).unwrap();
        for seed in 0..40u32 {
            let cops = vec![
                Vertex::from_id(seed % 28, 14),
                Vertex::from_id((seed * 5 + 3) % 28, 14),
            ];
            let s = GameState::new(14, cops, Vertex::from_id((seed * 11) % 28, 14), Side::Cops)
                .unwrap();
            let mut orbit = std::collections::HashSet::new();
            for t in 0..14 {
                for refl in [false, true] {
                    orbit.insert(apply_all(&g, &s, t, refl).display());
                }
            }
            assert_eq!(
                28 % orbit.len(),
                0,
                "orbit size {} must divide 2n",
                orbit.len()
            );
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn idempotent_and_invariant_on_random_states(
                cops in proptest::collection::vec(0u32..56, 1..=4),
                robber in 0u32..56,
                t in 0i64..28,
                refl in proptest::bool::ANY,
            ) {
                let g = GPGraph::new(28, 8).unwrap();
                let s = GameState::new(
                    28,
                    cops.iter().map(|&c| Vertex::from_id(c, 28)).collect(),
                    Vertex::from_id(robber, 28),
                    Side::Robber,
                )
                .unwrap();
                let canon = canonicalize(&g, &s);
                prop_assert_eq!(canonicalize(&g, &canon), canon.clone());
                let image = apply_all(&g, &s, t, refl);
                prop_assert_eq!(canonicalize(&g, &image), canon);
            }
        }
    }

    #[test]
    fn canonical_robber_sits_at_index_zero() {
        let g = GPGraph::new(28, 8).unwrap();
        let s = GameState::new(
            28,
            vec![Vertex::outer(9, 28), Vertex::inner(2, 28)],
            Vertex::outer(13, 28),
            Side::Cops,
        )
        .unwrap();
        let canon = canonicalize(&g, &s);
        assert_eq!(canon.robber.index, 0);
        assert_eq!(canon.robber.ring, s.robber.ring);
        assert_eq!(canon.to_move, s.to_move);
    }
}
