//! Retrograde fixed-point sweep.
//!
//! Backward BFS from the capture states, level-synchronous: processing the
//! states that flipped at distance `d` flips their not-yet-won predecessors
//! at `d + 1`. Cops-to-move states flip on first touch (they need one
//! winning successor); robber-to-move states flip when their last escape
//! disappears, tracked by per-state out-degree counters without symmetry,
//! and by re-checking the four successors against the level-`d` visibility
//! threshold under symmetry, where orbit stabilizers would make counter
//! decrements double-count. Both give tables and distances independent of
//! worker count: the set of states at distance <= d is fixed at every
//! phase boundary.

use std::sync::atomic::{AtomicU16, AtomicU8, Ordering};

use crate::game::for_each_cop_move;
use crate::graph::GPGraph;

use super::canon::canonical_ids;
use super::rank::{for_each_multiset, StateSpace};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

pub(crate) const UNSET: u16 = u16::MAX;

pub(crate) const SIDE_COPS: u64 = 0;
pub(crate) const SIDE_ROBBER: u64 = 1;

#[inline]
fn pack(cops: &[u32], robber: u32, side_bit: u64) -> u64 {
    let mut w = 0u64;
    for (i, &c) in cops.iter().enumerate() {
        w |= (c as u64) << (7 * i);
    }
    w | (robber as u64) << 28 | side_bit << 35
}

#[inline]
fn unpack(w: u64, c: usize) -> ([u32; 4], u32, u64) {
    let mut cops = [0u32; 4];
    for (i, slot) in cops.iter_mut().enumerate().take(c) {
        *slot = ((w >> (7 * i)) & 0x7f) as u32;
    }
    (cops, ((w >> 28) & 0x7f) as u32, (w >> 35) & 1)
}

pub(crate) struct SweepOutput {
    /// Capture distance per state rank; `UNSET` marks robber wins.
    pub dist: Vec<u16>,
    /// Deepest flip level reached.
    pub levels: u32,
}

struct Engine<'g> {
    g: &'g GPGraph,
    sp: StateSpace,
    n: u32,
    v: u32,
    c: usize,
    sym: bool,
    parallel: bool,
    dist: Vec<AtomicU16>,
    /// Remaining unflipped successors per robber-to-move state (no-symmetry
    /// mode only), indexed by `multiset_rank * v + robber`.
    counters: Vec<AtomicU8>,
}

/// Runs the backward induction for the `c`-cop game on `g`.
pub(crate) fn run(g: &GPGraph, c: usize, sym: bool, parallel: bool) -> SweepOutput {
    let v = g.order();
    let sp = StateSpace::new(v, c as u32);
    let states = sp.states as usize;
    let counters = if sym {
        Vec::new()
    } else {
        filled_atomic_u8((sp.multisets * v as u64) as usize, 4)
    };
    let engine = Engine {
        g,
        n: g.n(),
        v,
        c,
        sym,
        parallel,
        dist: filled_atomic_u16(states, UNSET),
        counters,
        sp,
    };

    let mut frontier = engine.capture_states();
    let mut level: u16 = 0;
    let mut levels = 0u32;
    while !frontier.is_empty() {
        let next = engine.expand(&frontier, level);
        if !next.is_empty() {
            levels = level as u32 + 1;
        }
        level += 1;
        assert!(level < UNSET - 1, "capture distance overflow");
        frontier = next;
    }
    SweepOutput {
        dist: atomic_u16_into_plain(engine.dist),
        levels,
    }
}

impl Engine<'_> {
    /// Every state with a cop on the robber, both sides to move. With
    /// symmetry only canonical representatives are seeded.
    fn capture_states(&self) -> Vec<u64> {
        let mut out = Vec::new();
        let mut canon = [0u32; 4];
        for_each_multiset(self.v, self.c, |cops| {
            if self.sym {
                // Robber pinned to index 0 of its ring; canonical iff the
                // cop multiset beats its reflection.
                let r0 = canonical_ids(self.n, cops, 0, &mut canon);
                debug_assert_eq!(r0, 0);
                if canon[..self.c] != cops[..] {
                    return;
                }
                for robber in [0, self.n] {
                    if cops.contains(&robber) {
                        for side in [SIDE_COPS, SIDE_ROBBER] {
                            let rank = self.rank(cops, robber, side);
                            self.dist[rank as usize].store(0, Ordering::Relaxed);
                            out.push(pack(cops, robber, side));
                        }
                    }
                }
            } else {
                let mut prev = u32::MAX;
                for &robber in cops {
                    if robber == prev {
                        continue;
                    }
                    prev = robber;
                    for side in [SIDE_COPS, SIDE_ROBBER] {
                        let rank = self.rank(cops, robber, side);
                        self.dist[rank as usize].store(0, Ordering::Relaxed);
                        out.push(pack(cops, robber, side));
                    }
                }
            }
        });
        out
    }

    fn expand(&self, frontier: &[u64], level: u16) -> Vec<u64> {
        #[cfg(feature = "parallel")]
        if self.parallel && frontier.len() >= 512 {
            return frontier
                .par_chunks(1024)
                .flat_map_iter(|chunk| {
                    let mut out = Vec::with_capacity(chunk.len());
                    for &s in chunk {
                        self.process(s, level, &mut out);
                    }
                    out
                })
                .collect();
        }
        let mut out = Vec::with_capacity(frontier.len() + 16);
        for &s in frontier {
            self.process(s, level, &mut out);
        }
        out
    }

    #[inline]
    fn rank(&self, cops: &[u32], robber: u32, side_bit: u64) -> u64 {
        self.sp
            .rank_from_parts(self.sp.rank_multiset(cops), robber, side_bit)
    }

    #[inline]
    fn try_flip(&self, rank: u64, value: u16) -> bool {
        self.dist[rank as usize]
            .compare_exchange(UNSET, value, Ordering::Relaxed, Ordering::Relaxed)
            .is_ok()
    }

    fn process(&self, s: u64, level: u16, out: &mut Vec<u64>) {
        let (cops, robber, side_bit) = unpack(s, self.c);
        let cops = &cops[..self.c];
        if side_bit == SIDE_ROBBER {
            // Predecessors are cops-to-move states one cop move away; the
            // stay-or-step relation is its own reverse.
            let mut scratch = [0u32; 4];
            for_each_cop_move(self.g, cops, &mut scratch[..self.c], 0, &mut |pred| {
                self.touch_cop_state(pred, robber, level, out);
            });
        } else {
            self.touch_robber_state(cops, robber, level, out);
            for &rp in self.g.neighbours_of_id(robber) {
                self.touch_robber_state(cops, rp, level, out);
            }
        }
    }

    /// Cops-to-move predecessor: wins as soon as any successor does.
    #[inline]
    fn touch_cop_state(&self, cops: &[u32], robber: u32, level: u16, out: &mut Vec<u64>) {
        let mut canon = [0u32; 4];
        let (cops, robber) = if self.sym {
            let r = canonical_ids(self.n, cops, robber, &mut canon);
            (&canon[..self.c], r)
        } else {
            (cops, robber)
        };
        let rank = self.rank(cops, robber, SIDE_COPS);
        if self.try_flip(rank, level + 1) {
            out.push(pack(cops, robber, SIDE_COPS));
        }
    }

    /// Robber-to-move predecessor: wins for the cops once all four of its
    /// moves do.
    #[inline]
    fn touch_robber_state(&self, cops: &[u32], robber: u32, level: u16, out: &mut Vec<u64>) {
        if self.sym {
            let mut canon = [0u32; 4];
            let r = canonical_ids(self.n, cops, robber, &mut canon);
            let ccops = &canon[..self.c];
            let rank = self.rank(ccops, r, SIDE_ROBBER);
            if self.dist[rank as usize].load(Ordering::Relaxed) <= level {
                return;
            }
            if self.all_successors_won(ccops, r, level) && self.try_flip(rank, level + 1) {
                out.push(pack(ccops, r, SIDE_ROBBER));
            }
        } else {
            let mrank = self.sp.rank_multiset(cops);
            let rank = self.sp.rank_from_parts(mrank, robber, SIDE_ROBBER);
            if self.dist[rank as usize].load(Ordering::Relaxed) != UNSET {
                return; // capture state seeded at level 0
            }
            let sub = (mrank * self.v as u64 + robber as u64) as usize;
            if self.counters[sub].fetch_sub(1, Ordering::Relaxed) == 1 {
                let flipped = self.try_flip(rank, level + 1);
                debug_assert!(flipped, "final decrement must flip");
                out.push(pack(cops, robber, SIDE_ROBBER));
            }
        }
    }

    /// All four robber moves land in states already won at distance <= level.
    /// Flips from the current phase sit at level + 1 and stay invisible,
    /// which keeps the result deterministic.
    #[inline]
    fn all_successors_won(&self, cops: &[u32], robber: u32, level: u16) -> bool {
        let mut canon = [0u32; 4];
        let mut check = |r2: u32| {
            let r = canonical_ids(self.n, cops, r2, &mut canon);
            let rank = self.rank(&canon[..self.c], r, SIDE_COPS);
            self.dist[rank as usize].load(Ordering::Relaxed) <= level
        };
        if !check(robber) {
            return false;
        }
        self.g.neighbours_of_id(robber).iter().all(|&r2| check(r2))
    }
}

fn filled_atomic_u16(len: usize, value: u16) -> Vec<AtomicU16> {
    // memset-fast fill, then reinterpret: AtomicU16 is layout-compatible.
    let mut v = std::mem::ManuallyDrop::new(vec![value; len]);
    unsafe { Vec::from_raw_parts(v.as_mut_ptr() as *mut AtomicU16, v.len(), v.capacity()) }
}

fn filled_atomic_u8(len: usize, value: u8) -> Vec<AtomicU8> {
    let mut v = std::mem::ManuallyDrop::new(vec![value; len]);
    unsafe { Vec::from_raw_parts(v.as_mut_ptr() as *mut AtomicU8, v.len(), v.capacity()) }
}

fn atomic_u16_into_plain(v: Vec<AtomicU16>) -> Vec<u16> {
    let mut v = std::mem::ManuallyDrop::new(v);
    unsafe { Vec::from_raw_parts(v.as_mut_ptr() as *mut u16, v.len(), v.capacity()) }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pack_roundtrip() {
        for c in 1..=4usize {
            let cops: Vec<u32> = (0..c as u32).map(|i| 10 + 13 * i).collect();
            let w = pack(&cops, 83, SIDE_ROBBER);
            let (got, robber, side) = unpack(w, c);
            assert_eq!(&got[..c], cops.as_slice());
            assert_eq!(robber, 83);
            assert_eq!(side, SIDE_ROBBER);
        }
    }
}
