//! Move selection on top of a solved table, plus the simple cop policies
//! used as sparring partners in the robustness checks.

use rand::Rng;

use crate::game::{cop_moves, GameState, Side};
use crate::graph::{GPGraph, Vertex};
use crate::{Error, Result};

use super::sweep::UNSET;
use super::WinTable;

/// Optimal cop move: from a cop-win state, minimize the capture distance of
/// the successor (ties to the lexicographically least multiset). From a
/// lost state no move helps, so the cops apply greedy pressure instead:
/// minimize the distance sum to the robber, same tie-break.
pub fn optimal_cop_move(g: &GPGraph, t: &WinTable, s: &GameState) -> Result<Vec<Vertex>> {
    if s.to_move != Side::Cops {
        return Err(Error::Turn {
            expected: Side::Cops,
        });
    }
    if !t.has_distances() {
        return Err(Error::Param(
            "optimal cop play needs a table solved with distances".into(),
        ));
    }
    let n = g.n();
    let r = s.robber.id(n);
    let candidates = cop_moves(g, s)?;
    let mut best: Option<(u16, &Vec<Vertex>)> = None;
    for cand in &candidates {
        let ids: Vec<u32> = cand.iter().map(|v| v.id(n)).collect();
        let d = t.distance_ids(&ids, r, Side::Robber).unwrap();
        if best.is_none_or(|(bd, _)| d < bd) {
            best = Some((d, cand));
        }
    }
    let (best_d, _) = best.expect("cop always has moves");
    if best_d != UNSET {
        // candidates are lex-sorted, so the first minimum is the tie-break.
        return Ok(best.unwrap().1.clone());
    }
    let row = g.distance_row(r);
    let mut fallback: Option<(u32, &Vec<Vertex>)> = None;
    for cand in &candidates {
        let pressure = cand.iter().map(|v| row[v.id(n) as usize] as u32).sum();
        if fallback.is_none_or(|(bp, _)| pressure < bp) {
            fallback = Some((pressure, cand));
        }
    }
    Ok(fallback.unwrap().1.clone())
}

/// Optimal robber move: the lowest-id option keeping the game outside the
/// cop-win region, else the option maximizing the capture distance.
pub fn optimal_robber_move(g: &GPGraph, t: &WinTable, s: &GameState) -> Result<Vertex> {
    if s.to_move != Side::Robber {
        return Err(Error::Turn {
            expected: Side::Robber,
        });
    }
    let n = g.n();
    let cops = s.cop_ids(n);
    let mut options = vec![s.robber];
    options.extend(g.neighbours_of(s.robber));
    options.sort_by_key(|v| v.id(n));
    if let Some(&escape) = options
        .iter()
        .find(|v| !t.copwin_ids(&cops, v.id(n), Side::Cops))
    {
        return Ok(escape);
    }
    if !t.has_distances() {
        return Err(Error::Param(
            "stalling from lost states needs capture distances".into(),
        ));
    }
    let mut best = options[0];
    let mut best_d = 0u16;
    for &opt in &options {
        let d = t.distance_ids(&cops, opt.id(n), Side::Cops).unwrap();
        if d > best_d {
            best_d = d;
            best = opt;
        }
    }
    Ok(best)
}

/// Greedy pressure without a table: each cop independently steps to the
/// option closest to the robber, lowest id on ties.
pub fn greedy_cop_move(g: &GPGraph, s: &GameState) -> Result<Vec<Vertex>> {
    if s.to_move != Side::Cops {
        return Err(Error::Turn {
            expected: Side::Cops,
        });
    }
    let n = g.n();
    let row = g.distance_row(s.robber.id(n));
    let mut out = Vec::with_capacity(s.cops().len());
    for cop in s.cops() {
        let id = cop.id(n);
        let mut best = id;
        for &opt in g.neighbours_of_id(id) {
            if row[opt as usize] < row[best as usize]
                || (row[opt as usize] == row[best as usize] && opt < best)
            {
                best = opt;
            }
        }
        out.push(Vertex::from_id(best, n));
    }
    out.sort_by_key(|v| v.id(n));
    Ok(out)
}

/// Each cop picks uniformly among staying and its three steps.
pub fn random_cop_move(g: &GPGraph, s: &GameState, rng: &mut impl Rng) -> Result<Vec<Vertex>> {
    if s.to_move != Side::Cops {
        return Err(Error::Turn {
            expected: Side::Cops,
        });
    }
    let n = g.n();
    let mut out = Vec::with_capacity(s.cops().len());
    for cop in s.cops() {
        let id = cop.id(n);
        let pick = rng.gen_range(0..4u8);
        let next = if pick == 0 {
            id
        } else {
            g.neighbours_of_id(id)[pick as usize - 1]
        };
        out.push(Vertex::from_id(next, n));
    }
    out.sort_by_key(|v| v.id(n));
    Ok(out)
}
