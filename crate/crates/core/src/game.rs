//! Rules of the pursuit game: states, legal moves (including passing),
//! capture and the trapped predicate.
//!
//! Conventions fixed here: cops may co-occupy a vertex, passing is legal for
//! both sides, and co-location after any move is a capture (including the
//! robber stepping onto a cop).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::graph::{GPGraph, Vertex};
use crate::{Error, Result};

/// Whose turn it is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Side {
    Cops,
    Robber,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Cops => Side::Robber,
            Side::Robber => Side::Cops,
        }
    }
}

/// A full game position: the cop multiset (sorted by canonical id), the
/// robber's vertex and the side to move.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GameState {
    cops: Vec<Vertex>,
    pub robber: Vertex,
    pub to_move: Side,
}

impl GameState {
    /// Builds a state, sorting the cops into multiset canonical form.
    /// Requires between 1 and 4 cops.
    pub fn new(n: u32, mut cops: Vec<Vertex>, robber: Vertex, to_move: Side) -> Result<Self> {
        if cops.is_empty() || cops.len() > 4 {
            return Err(Error::Param(format!("need 1..=4 cops, got {}", cops.len())));
        }
        cops.sort_by_key(|v| v.id(n));
        Ok(GameState {
            cops,
            robber,
            to_move,
        })
    }

    #[inline]
    pub fn cops(&self) -> &[Vertex] {
        &self.cops
    }

    pub fn cop_ids(&self, n: u32) -> Vec<u32> {
        self.cops.iter().map(|v| v.id(n)).collect()
    }

    /// Human-readable form, e.g. `cops=a0,a5,b3 robber=a6 turn=R`.
    pub fn display(&self) -> String {
        let cops: Vec<String> = self.cops.iter().map(|v| v.to_string()).collect();
        let turn = match self.to_move {
            Side::Cops => "C",
            Side::Robber => "R",
        };
        format!(
            "cops={} robber={} turn={}",
            cops.join(","),
            self.robber,
            turn
        )
    }
}

impl fmt::Display for GameState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display())
    }
}

impl FromStr for GameState {
    type Err = Error;

    /// Parses the `cops=a0,a5,b3 robber=a6 turn=R` form. The cop order in
    /// the input is irrelevant; the parsed state is sorted. Uses n = 2^31
    /// as a neutral modulus, so indices must already be reduced.
    fn from_str(s: &str) -> Result<Self> {
        let mut cops = None;
        let mut robber = None;
        let mut turn = None;
        for field in s.split_whitespace() {
            if let Some(list) = field.strip_prefix("cops=") {
                cops = Some(
                    list.split(',')
                        .map(|t| t.parse::<Vertex>())
                        .collect::<Result<Vec<_>>>()?,
                );
            } else if let Some(v) = field.strip_prefix("robber=") {
                robber = Some(v.parse::<Vertex>()?);
            } else if let Some(t) = field.strip_prefix("turn=") {
                turn = Some(match t {
                    "C" => Side::Cops,
                    "R" => Side::Robber,
                    _ => return Err(Error::Param(format!("turn must be C or R, got {t:?}"))),
                });
            } else {
                return Err(Error::Param(format!("unrecognised field {field:?}")));
            }
        }
        match (cops, robber, turn) {
            (Some(c), Some(r), Some(t)) => GameState::new(u32::MAX / 2, c, r, t),
            _ => Err(Error::Param(
                "state needs cops=, robber= and turn= fields".into(),
            )),
        }
    }
}

/// JSON-friendly mirror of [`GameState`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GameStateJson {
    pub cops: Vec<String>,
    pub robber: String,
    pub turn: String,
}

impl From<&GameState> for GameStateJson {
    fn from(s: &GameState) -> Self {
        GameStateJson {
            cops: s.cops.iter().map(|v| v.to_string()).collect(),
            robber: s.robber.to_string(),
            turn: match s.to_move {
                Side::Cops => "C".into(),
                Side::Robber => "R".into(),
            },
        }
    }
}

/// The robber's move options: stay put or step to one of the 3 neighbours.
pub fn robber_moves(g: &GPGraph, s: &GameState) -> Result<Vec<Vertex>> {
    if s.to_move != Side::Robber {
        return Err(Error::Turn {
            expected: Side::Robber,
        });
    }
    let mut out = vec![s.robber];
    out.extend(g.neighbours_of(s.robber));
    Ok(out)
}

/// All cop move multisets: each cop independently stays or steps to one of
/// its 3 neighbours; results are sorted multisets, deduplicated, in
/// ascending lexicographic order.
pub fn cop_moves(g: &GPGraph, s: &GameState) -> Result<Vec<Vec<Vertex>>> {
    if s.to_move != Side::Cops {
        return Err(Error::Turn {
            expected: Side::Cops,
        });
    }
    let n = g.n();
    let ids = s.cop_ids(n);
    let mut out: Vec<Vec<u32>> = Vec::new();
    let mut scratch = vec![0u32; ids.len()];
    for_each_cop_move(g, &ids, &mut scratch, 0, &mut |m| out.push(m.to_vec()));
    out.sort_unstable();
    out.dedup();
    Ok(out
        .into_iter()
        .map(|m| m.into_iter().map(|id| Vertex::from_id(id, n)).collect())
        .collect())
}

/// Visits every raw stay-or-step combination (4^c of them, not
/// deduplicated), each sorted ascending.
pub(crate) fn for_each_cop_move(
    g: &GPGraph,
    ids: &[u32],
    scratch: &mut [u32],
    depth: usize,
    visit: &mut impl FnMut(&[u32]),
) {
    if depth == ids.len() {
        let mut m = [0u32; 4];
        let m = &mut m[..ids.len()];
        m.copy_from_slice(&scratch[..ids.len()]);
        m.sort_unstable();
        visit(m);
        return;
    }
    let nb = g.neighbours_of_id(ids[depth]);
    for opt in [ids[depth], nb[0], nb[1], nb[2]] {
        scratch[depth] = opt;
        for_each_cop_move(g, ids, scratch, depth + 1, visit);
    }
}

/// True iff a cop stands on the robber's vertex.
pub fn is_capture(s: &GameState) -> bool {
    s.cops.contains(&s.robber)
}

/// The trapped predicate: every neighbour `v` of the robber has a cop on or
/// adjacent to `v` (regardless of turn), or, on the cops' turn only, some
/// cop is adjacent to the robber.
pub fn is_trapped(g: &GPGraph, s: &GameState) -> bool {
    let n = g.n();
    let cops = s.cop_ids(n);
    is_trapped_ids(g, &cops, s.robber.id(n), s.to_move == Side::Cops)
}

/// Id-level trapped check shared with the verification sweeps.
#[inline]
pub(crate) fn is_trapped_ids(g: &GPGraph, cops: &[u32], robber: u32, cops_turn: bool) -> bool {
    if cops_turn {
        let row = g.distance_row(robber);
        if cops.iter().any(|&c| row[c as usize] == 1) {
            return true;
        }
    }
    g.neighbours_of_id(robber).iter().all(|&v| {
        let row = g.distance_row(v);
        cops.iter().any(|&c| row[c as usize] <= 1)
    })
}

/// An 8-slot bundle from one robber-neighbour `v` through one fixed further
/// neighbour (the gate): `v`, the gate, the gate's 2 children and their 4
/// children, following the distance-4 tree shape.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Branch {
    pub anchor: Vertex,
    pub gate: Vertex,
    /// `members[0]` = anchor, `members[1]` = gate, `members[2..4]` the two
    /// depth-3 slots (ascending id), `members[4..8]` their children.
    pub members: [Vertex; 8],
}

impl Branch {
    pub fn member_ids(&self, n: u32) -> [u32; 8] {
        self.members.map(|v| v.id(n))
    }
}

/// The two branches hanging off robber-neighbour `v`, one per neighbour of
/// `v` other than the robber, ordered by gate id. Family graphs only.
pub fn branches_of(g: &GPGraph, r: Vertex, v: Vertex) -> Result<(Branch, Branch)> {
    g.require_family()?;
    if !g.adjacent(r, v) {
        return Err(Error::Param(format!(
            "{v} is not adjacent to robber vertex {r}"
        )));
    }
    let n = g.n();
    let (b0, b1) = branch_pair_ids(g, r.id(n), v.id(n));
    Ok((branch_from_ids(&b0, n), branch_from_ids(&b1, n)))
}

fn branch_from_ids(ids: &[u32; 8], n: u32) -> Branch {
    let members = ids.map(|id| Vertex::from_id(id, n));
    Branch {
        anchor: members[0],
        gate: members[1],
        members,
    }
}

/// Id-level branch expansion; `v` must be adjacent to `r`. Returns the two
/// 8-slot bundles ordered by gate id.
#[inline]
pub(crate) fn branch_pair_ids(g: &GPGraph, r: u32, v: u32) -> ([u32; 8], [u32; 8]) {
    let mut gates = [0u32; 2];
    let mut gi = 0;
    for &w in g.neighbours_of_id(v) {
        if w != r {
            gates[gi] = w;
            gi += 1;
        }
    }
    debug_assert_eq!(gi, 2);
    (branch_ids(g, r, v, gates[0]), branch_ids(g, r, v, gates[1]))
}

#[inline]
fn branch_ids(g: &GPGraph, _r: u32, v: u32, gate: u32) -> [u32; 8] {
    let mut out = [0u32; 8];
    out[0] = v;
    out[1] = gate;
    let mut di = 2;
    for &x in g.neighbours_of_id(gate) {
        if x != v {
            out[di] = x;
            di += 1;
        }
    }
    debug_assert_eq!(di, 4);
    // out[2] < out[3] already: neighbour lists are ascending and we filtered one.
    let mut yi = 4;
    for d in 2..4 {
        let x = out[d];
        for &y in g.neighbours_of_id(x) {
            if y != gate {
                out[yi] = y;
                yi += 1;
            }
        }
    }
    debug_assert_eq!(yi, 8);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Vertex;

    fn a(i: i64, n: u32) -> Vertex {
        Vertex::outer(i, n)
    }

    fn b(i: i64, n: u32) -> Vertex {
        Vertex::inner(i, n)
    }

    fn state(g: &GPGraph, cops: Vec<Vertex>, robber: Vertex, to_move: Side) -> GameState {
        GameState::new(g.n(), cops, robber, to_move).unwrap()
    }

    #[test]
    fn robber_move_options() {
        let g = GPGraph::new(28, 8).unwrap();
        let s = state(&g, vec![a(10, 28)], a(0, 28), Side::Robber);
        let mut moves = robber_moves(&g, &s).unwrap();
        moves.sort_by_key(|v| v.id(28));
        assert_eq!(moves, vec![a(0, 28), a(1, 28), a(27, 28), b(0, 28)]);

        let g = GPGraph::new(5, 2).unwrap();
        let s = state(&g, vec![a(2, 5)], b(0, 5), Side::Robber);
        let mut moves = robber_moves(&g, &s).unwrap();
        moves.sort_by_key(|v| v.id(5));
        assert_eq!(moves, vec![a(0, 5), b(0, 5), b(2, 5), b(3, 5)]);

        let s = state(&g, vec![a(2, 5)], b(0, 5), Side::Cops);
        assert!(matches!(robber_moves(&g, &s), Err(Error::Turn { .. })));
    }

    #[test]
    fn cop_move_counts() {
        let g = GPGraph::new(5, 2).unwrap();
        let s = state(&g, vec![a(0, 5)], b(2, 5), Side::Cops);
        assert_eq!(cop_moves(&g, &s).unwrap().len(), 4);

        let s = state(&g, vec![a(0, 5), a(0, 5)], b(2, 5), Side::Cops);
        // multiset of 2 choices from 4 options: C(5,2) = 10
        assert_eq!(cop_moves(&g, &s).unwrap().len(), 10);

        let g = GPGraph::new(28, 8).unwrap();
        let s = state(
            &g,
            vec![a(0, 28), a(1, 28), a(2, 28)],
            b(10, 28),
            Side::Cops,
        );
        let moves = cop_moves(&g, &s).unwrap();
        assert!(moves.len() <= 64);
        // deterministic and sorted
        assert_eq!(moves, cop_moves(&g, &s).unwrap());
        for m in &moves {
            let ids: Vec<u32> = m.iter().map(|v| v.id(28)).collect();
            assert!(ids.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn capture_check() {
        let g = GPGraph::new(28, 8).unwrap();
        let s = state(
            &g,
            vec![a(0, 28), a(5, 28), b(3, 28)],
            a(5, 28),
            Side::Robber,
        );
        assert!(is_capture(&s));
        let s = state(
            &g,
            vec![a(0, 28), a(5, 28), b(3, 28)],
            a(6, 28),
            Side::Robber,
        );
        assert!(!is_capture(&s));
        let s = state(&g, vec![b(2, 28)], b(2, 28), Side::Cops);
        assert!(is_capture(&s));
    }

    #[test]
    fn trapped_examples() {
        let g = GPGraph::new(28, 8).unwrap();
        // Cops exactly on the robber's three neighbours.
        let s = state(
            &g,
            vec![a(1, 28), a(27, 28), b(0, 28)],
            a(0, 28),
            Side::Robber,
        );
        assert!(is_trapped(&g, &s));
        // All cops far away.
        let s = state(
            &g,
            vec![a(14, 28), a(13, 28), b(14, 28)],
            a(0, 28),
            Side::Robber,
        );
        assert!(!is_trapped(&g, &s));
        // One cop adjacent to each neighbour.
        let s = state(
            &g,
            vec![b(1, 28), b(27, 28), b(8, 28)],
            a(0, 28),
            Side::Robber,
        );
        assert!(is_trapped(&g, &s));
        // Adjacency clause only counts on the cops' turn.
        let s = state(
            &g,
            vec![b(0, 28), a(14, 28), a(13, 28)],
            a(0, 28),
            Side::Robber,
        );
        assert!(!is_trapped(&g, &s));
        let s = state(
            &g,
            vec![b(0, 28), a(14, 28), a(13, 28)],
            a(0, 28),
            Side::Cops,
        );
        assert!(is_trapped(&g, &s));
    }

    #[test]
    fn trapped_monotone_under_more_cops() {
        let g = GPGraph::new(28, 8).unwrap();
        let base = vec![b(1, 28), b(27, 28), b(8, 28)];
        let s = state(&g, base.clone(), a(0, 28), Side::Robber);
        assert!(is_trapped(&g, &s));
        for extra in 0..56 {
            let mut cops = base.clone();
            cops.push(Vertex::from_id(extra, 28));
            let s = state(&g, cops, a(0, 28), Side::Robber);
            assert!(is_trapped(&g, &s));
        }
    }

    #[test]
    fn branch_structure_gp28() {
        let g = GPGraph::new(28, 8).unwrap();
        let (b1, b2) = branches_of(&g, a(0, 28), a(1, 28)).unwrap();
        assert_eq!(b1.gate, a(2, 28));
        assert_eq!(b2.gate, b(1, 28));
        assert_eq!(b1.members[2..4], [a(3, 28), b(2, 28)]);
        assert_eq!(b1.members.len(), 8);
        assert_eq!(b2.members.len(), 8);

        let (b1, b2) = branches_of(&g, a(0, 28), b(0, 28)).unwrap();
        assert_eq!(b1.gate, b(8, 28));
        assert_eq!(b2.gate, b(20, 28));
    }

    #[test]
    fn branches_intersect_only_in_anchor_to_depth3() {
        for (n, k) in [(28, 8), (35, 10), (35, 15), (42, 6), (42, 12), (42, 18)] {
            let g = GPGraph::new(n, k).unwrap();
            for r in 0..g.order() {
                let rv = Vertex::from_id(r, n);
                for v in g.neighbours_of(rv) {
                    let (b1, b2) = branches_of(&g, rv, v).unwrap();
                    for x in &b1.members[..4] {
                        for y in &b2.members[..4] {
                            if x == y {
                                assert_eq!(*x, v, "GP({n},{k}): shallow overlap not the anchor");
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn branches_require_family() {
        let g = GPGraph::new(5, 2).unwrap();
        assert!(matches!(
            branches_of(&g, a(0, 5), a(1, 5)),
            Err(Error::Family { .. })
        ));
    }

    #[test]
    fn state_text_roundtrip() {
        let g = GPGraph::new(28, 8).unwrap();
        let s = state(
            &g,
            vec![b(3, 28), a(0, 28), a(5, 28)],
            a(6, 28),
            Side::Robber,
        );
        assert_eq!(s.display(), "cops=a0,a5,b3 robber=a6 turn=R");
        let back: GameState = s.display().parse().unwrap();
        assert_eq!(back.display(), s.display());
    }
}
