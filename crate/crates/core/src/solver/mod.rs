//! Exact retrograde-analysis solver for the c-cop game.
//!
//! States are ranked densely (sorted cop multiset via the combinatorial
//! number system, then robber and side), win flags live in a bit array and
//! capture distances in an optional `u16` array. With dihedral symmetry
//! only orbit representatives are populated; queries canonicalize first and
//! answer exactly as a symmetry-off table would.

pub mod canon;
pub mod policy;
pub mod rank;
mod sweep;
mod table;

use std::time::Instant;

use serde::Serialize;

use crate::game::{GameState, Side};
use crate::graph::{GPGraph, Vertex};
use crate::{Error, Result};

use canon::canonical_ids;
pub use canon::canonicalize;
use rank::{for_each_multiset, StateSpace};
use sweep::UNSET;

/// Which symmetry reduction the solver applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Symmetry {
    None,
    Dihedral,
}

/// Solver configuration.
#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub symmetry: Symmetry,
    /// Worker count; 0 means available parallelism. The result is
    /// bit-identical for every setting.
    pub threads: usize,
    /// Keep the capture-distance array in the finished table.
    pub distances: bool,
    /// Refuse to solve rather than exceed this allocation estimate.
    pub budget_bytes: u64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            symmetry: Symmetry::Dihedral,
            threads: 0,
            distances: false,
            budget_bytes: 8 << 30,
        }
    }
}

/// Summary of one solve run.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SolveStats {
    pub states: u64,
    /// Populated cop-win entries (orbit representatives under symmetry).
    pub copwin_states: u64,
    /// Backward-induction iterations (frontier levels) to the fixed point.
    pub levels: u32,
    pub solve_ms: u64,
    pub threads: usize,
}

/// The solved game: cop-win flags (and optionally capture distances) for
/// every state of the `c`-cop game on `GP(n, k)`.
pub struct WinTable {
    pub n: u32,
    pub k: u32,
    pub c: u32,
    pub symmetry: Symmetry,
    sp: StateSpace,
    bits: Vec<u64>,
    dist: Option<Vec<u16>>,
    pub stats: SolveStats,
}

impl WinTable {
    pub fn states(&self) -> u64 {
        self.sp.states
    }

    pub fn has_distances(&self) -> bool {
        self.dist.is_some()
    }

    #[inline]
    fn rank_of(&self, cops: &[u32], robber: u32, side: Side) -> u64 {
        match self.symmetry {
            Symmetry::None => self.sp.rank_state(cops, robber, side),
            Symmetry::Dihedral => {
                let mut out = [0u32; 4];
                let r = canonical_ids(self.n, cops, robber, &mut out);
                self.sp.rank_state(&out[..cops.len()], r, side)
            }
        }
    }

    /// Cop-win flag for a state given by sorted cop ids.
    #[inline]
    pub fn copwin_ids(&self, cops: &[u32], robber: u32, side: Side) -> bool {
        let rank = self.rank_of(cops, robber, side);
        (self.bits[(rank >> 6) as usize] >> (rank & 63)) & 1 == 1
    }

    /// Capture distance in plies; `u16::MAX` for robber-win states. `None`
    /// when the table was solved without distances.
    #[inline]
    pub fn distance_ids(&self, cops: &[u32], robber: u32, side: Side) -> Option<u16> {
        let dist = self.dist.as_ref()?;
        Some(dist[self.rank_of(cops, robber, side) as usize])
    }

    pub fn copwin(&self, s: &GameState) -> bool {
        self.copwin_ids(&s.cop_ids(self.n), s.robber.id(self.n), s.to_move)
    }

    pub fn capture_distance(&self, s: &GameState) -> Option<u16> {
        self.distance_ids(&s.cop_ids(self.n), s.robber.id(self.n), s.to_move)
    }

    /// FNV-1a over the bit array and the distance array if present; used by
    /// the determinism checks and the cache file.
    pub fn checksum(&self) -> u64 {
        let mut h = table::Fnv::new();
        for w in &self.bits {
            h.write_u64(*w);
        }
        if let Some(dist) = &self.dist {
            for d in dist {
                h.write_u16(*d);
            }
        }
        h.finish()
    }
}

fn estimate_bytes(sp: &StateSpace, symmetry: Symmetry) -> u64 {
    let dist = 2 * sp.states;
    let bits = sp.states / 8 + 8;
    let counters = match symmetry {
        Symmetry::None => sp.multisets * sp.v as u64,
        Symmetry::Dihedral => 0,
    };
    // frontier slack: packed u64 per flipped state, two levels live at once
    let frontier = sp.states / 4;
    dist + bits + counters + frontier
}

fn effective_threads(requested: usize) -> usize {
    if requested != 0 {
        return requested;
    }
    #[cfg(feature = "parallel")]
    {
        std::thread::available_parallelism()
            .map(|p| p.get())
            .unwrap_or(1)
    }
    #[cfg(not(feature = "parallel"))]
    {
        1
    }
}

#[cfg(feature = "parallel")]
fn run_in_pool<T: Send>(threads: usize, job: impl FnOnce() -> T + Send) -> Result<T> {
    if threads <= 1 {
        return Ok(job());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Param(format!("thread pool: {e}")))?;
    Ok(pool.install(job))
}

#[cfg(not(feature = "parallel"))]
fn run_in_pool<T: Send>(_threads: usize, job: impl FnOnce() -> T + Send) -> Result<T> {
    Ok(job())
}

/// Solves the `c`-cop game on `g` by backward induction: captures are cop
/// wins; a cops-to-move state wins iff some cop move reaches a win; a
/// robber-to-move state wins iff all four robber moves do.
pub fn solve(g: &GPGraph, c: u32, opts: &SolveOptions) -> Result<WinTable> {
    if !(1..=4).contains(&c) {
        return Err(Error::Param(format!("cop count must be 1..=4, got {c}")));
    }
    let sp = StateSpace::new(g.order(), c);
    let required = estimate_bytes(&sp, opts.symmetry);
    if required > opts.budget_bytes {
        return Err(Error::Budget {
            required,
            budget: opts.budget_bytes,
        });
    }

    let threads = effective_threads(opts.threads);
    let sym = matches!(opts.symmetry, Symmetry::Dihedral);
    let t0 = Instant::now();
    let out = run_in_pool(threads, || sweep::run(g, c as usize, sym, threads > 1))?;
    let solve_ms = t0.elapsed().as_millis() as u64;

    let mut bits = vec![0u64; (sp.states as usize).div_ceil(64)];
    let mut copwin_states = 0u64;
    for (i, &d) in out.dist.iter().enumerate() {
        if d != UNSET {
            bits[i >> 6] |= 1 << (i & 63);
            copwin_states += 1;
        }
    }

    Ok(WinTable {
        n: g.n(),
        k: g.k(),
        c,
        symmetry: opts.symmetry,
        bits,
        dist: opts.distances.then_some(out.dist),
        stats: SolveStats {
            states: sp.states,
            copwin_states,
            levels: out.levels,
            solve_ms,
            threads,
        },
        sp,
    })
}

/// The lexicographically least winning cop placement, if one exists: a
/// multiset `P` such that every robber placement off `P` is a cop win with
/// the cops to move.
pub fn winning_placement(g: &GPGraph, t: &WinTable) -> Option<Vec<Vertex>> {
    let v = g.order();
    let n = g.n();
    let mut found: Option<Vec<u32>> = None;
    for_each_multiset(v, t.c as usize, |cops| {
        if found.is_some() {
            return;
        }
        let ok = (0..v).all(|r| cops.contains(&r) || t.copwin_ids(cops, r, Side::Cops));
        if ok {
            found = Some(cops.to_vec());
        }
    });
    found.map(|ids| ids.into_iter().map(|id| Vertex::from_id(id, n)).collect())
}

/// Whether `c` cops win the placement game on `g`.
pub fn cops_win_game(g: &GPGraph, c: u32, opts: &SolveOptions) -> Result<bool> {
    let t = solve(g, c, opts)?;
    Ok(winning_placement(g, &t).is_some())
}

/// Outcome of a cop-number search.
#[derive(Debug, Clone, Serialize)]
pub struct CopNumber {
    pub value: u32,
    /// True when the value 4 came from the known general upper bound
    /// instead of an exact 4-cop solve.
    pub assumed_upper_bound: bool,
    pub levels: Vec<CopSearchLevel>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CopSearchLevel {
    pub c: u32,
    pub cops_win: bool,
    pub states: u64,
    pub copwin_states: u64,
    pub iterations: u32,
    pub solve_ms: u64,
}

/// Least `c <= max_c` winning the placement game. With `assume_upper_4`,
/// refuting 1..=3 cops settles the answer as 4 without the 4-cop solve.
pub fn cop_number(
    g: &GPGraph,
    max_c: u32,
    assume_upper_4: bool,
    opts: &SolveOptions,
) -> Result<CopNumber> {
    if max_c > 4 {
        return Err(Error::Param(format!("max cop count is 4, got {max_c}")));
    }
    let mut levels = Vec::new();
    for c in 1..=max_c {
        if c == 4 && assume_upper_4 {
            return Ok(CopNumber {
                value: 4,
                assumed_upper_bound: true,
                levels,
            });
        }
        let t = solve(g, c, opts)?;
        let win = winning_placement(g, &t).is_some();
        levels.push(CopSearchLevel {
            c,
            cops_win: win,
            states: t.stats.states,
            copwin_states: t.stats.copwin_states,
            iterations: t.stats.levels,
            solve_ms: t.stats.solve_ms,
        });
        if win {
            return Ok(CopNumber {
                value: c,
                assumed_upper_bound: false,
                levels,
            });
        }
    }
    Err(Error::ExceedsMax { max: max_c })
}

/// Re-applies the backward-induction operator to every state and checks
/// that nothing changes; with distances present, also checks the Bellman
/// equations (cops minimize, robber maximizes, captures are 0). Exhaustive,
/// so meant for small state spaces.
pub fn verify_fixed_point(g: &GPGraph, t: &WinTable) -> bool {
    let v = g.order();
    let c = t.c as usize;
    let mut ok = true;
    let mut scratch = [0u32; 4];
    for_each_multiset(v, c, |cops| {
        if !ok {
            return;
        }
        for r in 0..v {
            let capture = cops.contains(&r);
            // Robber to move: loses iff every move loses.
            let mut all_win = true;
            let mut max_d = 0u16;
            let succ = |r2: u32, all_win: &mut bool, max_d: &mut u16| {
                let w = t.copwin_ids(cops, r2, Side::Cops);
                *all_win &= w;
                if let Some(d) = t.distance_ids(cops, r2, Side::Cops) {
                    *max_d = (*max_d).max(d);
                }
            };
            succ(r, &mut all_win, &mut max_d);
            for &r2 in g.neighbours_of_id(r) {
                succ(r2, &mut all_win, &mut max_d);
            }
            let expect_robber = capture || all_win;
            if t.copwin_ids(cops, r, Side::Robber) != expect_robber {
                ok = false;
                return;
            }
            // Cops to move: win iff some move wins.
            let mut any_win = false;
            let mut min_d = UNSET;
            crate::game::for_each_cop_move(g, cops, &mut scratch[..c], 0, &mut |m| {
                if t.copwin_ids(m, r, Side::Robber) {
                    any_win = true;
                }
                if let Some(d) = t.distance_ids(m, r, Side::Robber) {
                    min_d = min_d.min(d);
                }
            });
            let expect_cops = capture || any_win;
            if t.copwin_ids(cops, r, Side::Cops) != expect_cops {
                ok = false;
                return;
            }
            if t.has_distances() {
                let dr = t.distance_ids(cops, r, Side::Robber).unwrap();
                let dc = t.distance_ids(cops, r, Side::Cops).unwrap();
                let want_r = if capture {
                    0
                } else if expect_robber {
                    max_d + 1
                } else {
                    UNSET
                };
                let want_c = if capture {
                    0
                } else if expect_cops {
                    min_d + 1
                } else {
                    UNSET
                };
                if dr != want_r || dc != want_c {
                    ok = false;
                    return;
                }
            }
        }
    });
    ok
}
