//! The constructive robber side: case classification of robber-to-move
//! positions, the safe-move rule, the opening placement rule, and the
//! verification sweeps that check the classification's structure
//! exhaustively or by sampling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::game::{branch_pair_ids, for_each_cop_move, is_trapped_ids, Branch, GameState, Side};
use crate::graph::{GPGraph, Ring, Vertex};
use crate::solver::rank::StateSpace;
use crate::{Error, Result};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Classification of a robber-to-move position by cop proximity and branch
/// coverage. Precedence is fixed as Trapped > Case2 > Case1 > Case3 so the
/// label is a function of the state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CaseLabel {
    /// The robber is trapped.
    TrappedState,
    /// Some neighbour `anchor` of the robber has one branch without any cop
    /// and no cop within distance 2 of the robber on its other branch.
    Case1 {
        anchor: Vertex,
        clear_branch: Branch,
    },
    /// Every cop is at distance 3 or more from the robber.
    Case2,
    /// Every neighbour either has a cop within distance 2 of the robber on
    /// its branches, or a cop on each of its branches. Never observed
    /// untrapped on family graphs.
    Case3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum LabelId {
    Trapped,
    Case1 { anchor: u32, gate: u32 },
    Case2,
    Case3,
}

pub(crate) struct EvalOutcome {
    pub label: LabelId,
    /// `Some(m)` iff the Case-3 condition holds, where `m` in 1..=3 counts
    /// the neighbours with a cop within distance 2 on their branches
    /// (subcases A, B, C of the impossibility analysis).
    pub case3_subcase: Option<u8>,
}

/// Single pass over the robber's three neighbours computing the label and
/// the independent Case-3 condition.
pub(crate) fn evaluate_ids(g: &GPGraph, cops: &[u32], r: u32) -> EvalOutcome {
    let trapped = is_trapped_ids(g, cops, r, false);
    let row_r = g.distance_row(r);
    let far = cops.iter().all(|&c| row_r[c as usize] >= 3);

    let mut witness: Option<(u32, u32)> = None;
    let mut covered_or_near = true;
    let mut near_count = 0u8;
    for &v in g.neighbours_of_id(r) {
        let (b1, b2) = branch_pair_ids(g, r, v);
        let (mut free1, mut free2) = (true, true);
        let (mut near1, mut near2) = (false, false);
        for &c in cops {
            let close = row_r[c as usize] <= 2;
            if b1.contains(&c) {
                free1 = false;
                near1 |= close;
            }
            if b2.contains(&c) {
                free2 = false;
                near2 |= close;
            }
        }
        if witness.is_none() {
            if free1 && !near2 {
                witness = Some((v, b1[1]));
            } else if free2 && !near1 {
                witness = Some((v, b2[1]));
            }
        }
        if near1 || near2 {
            near_count += 1;
        } else if free1 || free2 {
            covered_or_near = false;
        }
    }

    let label = if trapped {
        LabelId::Trapped
    } else if far {
        LabelId::Case2
    } else if let Some((anchor, gate)) = witness {
        LabelId::Case1 { anchor, gate }
    } else {
        LabelId::Case3
    };
    let case3_subcase = (covered_or_near && near_count >= 1).then_some(near_count);
    EvalOutcome {
        label,
        case3_subcase,
    }
}

/// Classifies a robber-to-move state on a family graph.
pub fn classify(g: &GPGraph, s: &GameState) -> Result<CaseLabel> {
    if s.to_move != Side::Robber {
        return Err(Error::Turn {
            expected: Side::Robber,
        });
    }
    g.require_family()?;
    let n = g.n();
    let cops = s.cop_ids(n);
    let r = s.robber.id(n);
    Ok(match evaluate_ids(g, &cops, r).label {
        LabelId::Trapped => CaseLabel::TrappedState,
        LabelId::Case2 => CaseLabel::Case2,
        LabelId::Case3 => CaseLabel::Case3,
        LabelId::Case1 { anchor, gate } => {
            let anchor = Vertex::from_id(anchor, n);
            let (b1, b2) = crate::game::branches_of(g, s.robber, anchor)?;
            let clear_branch = if b1.gate.id(n) == gate { b1 } else { b2 };
            CaseLabel::Case1 {
                anchor,
                clear_branch,
            }
        }
    })
}

/// The fixed Case-2 preference: outer robber steps forward along the outer
/// cycle, inner robber steps `+k` along its inner cycle.
fn case2_preference(g: &GPGraph, robber: Vertex) -> Vertex {
    let n = g.n();
    match robber.ring {
        Ring::Outer => Vertex::outer(robber.index as i64 + 1, n),
        Ring::Inner => Vertex::inner(robber.index as i64 + g.k() as i64, n),
    }
}

/// Picks the robber's move: the Case-1 witness anchor, or the fixed Case-2
/// preference. Errors on trapped states, and surfaces (never patches) the
/// contradiction of an untrapped Case-3 state.
pub fn safe_move(g: &GPGraph, s: &GameState) -> Result<Vertex> {
    if s.to_move != Side::Robber {
        return Err(Error::Turn {
            expected: Side::Robber,
        });
    }
    g.require_family()?;
    let n = g.n();
    let cops = s.cop_ids(n);
    let r = s.robber.id(n);
    match evaluate_ids(g, &cops, r).label {
        LabelId::Trapped => Err(Error::Trapped),
        LabelId::Case1 { anchor, .. } => Ok(Vertex::from_id(anchor, n)),
        LabelId::Case2 => Ok(case2_preference(g, s.robber)),
        LabelId::Case3 => Err(Error::Strategy(s.display())),
    }
}

/// Vertices where the robber cannot start: on a cop, or trapped the moment
/// it places (the cops move next, so the adjacency clause is live).
pub fn initial_trapped_set(g: &GPGraph, cops: &[Vertex]) -> Result<Vec<Vertex>> {
    if cops.len() != 3 {
        return Err(Error::Param(format!(
            "initial trapped set is defined for 3 cops, got {}",
            cops.len()
        )));
    }
    let n = g.n();
    let cop_ids: Vec<u32> = cops.iter().map(|v| v.id(n)).collect();
    let mut out = Vec::new();
    for w in 0..g.order() {
        if cop_ids.contains(&w) || is_trapped_ids(g, &cop_ids, w, true) {
            out.push(Vertex::from_id(w, n));
        }
    }
    Ok(out)
}

/// The robber's opening choice: the lowest-id vertex that no cop can reach
/// or trap on the cops' first move. This is the placement-turn analogue of
/// the safe-move guarantee: the cops move once between the robber placing
/// and its first turn, so excluding only the statically trapped vertices
/// would not be enough. The excluded region contains
/// [`initial_trapped_set`], and on family graphs a choice always exists.
pub fn initial_placement(g: &GPGraph, cops: &[Vertex]) -> Result<Vertex> {
    g.require_family()?;
    if cops.len() != 3 {
        return Err(Error::Param(format!(
            "placement is defined for 3 cops, got {}",
            cops.len()
        )));
    }
    let n = g.n();
    let cop_ids: Vec<u32> = cops.iter().map(|v| v.id(n)).collect();
    let mut scratch = [0u32; 4];
    'candidates: for w in 0..g.order() {
        let row = g.distance_row(w);
        // A cop within distance 1 either already shares the vertex or can
        // capture outright on the first move.
        if cop_ids.iter().any(|&c| row[c as usize] <= 1) {
            continue;
        }
        let mut trappable = false;
        for_each_cop_move(g, &cop_ids, &mut scratch[..3], 0, &mut |reply| {
            if !trappable && is_trapped_ids(g, reply, w, false) {
                trappable = true;
            }
        });
        if trappable {
            continue 'candidates;
        }
        return Ok(Vertex::from_id(w, n));
    }
    Err(Error::Strategy(
        "every vertex is capturable or trappable at placement".into(),
    ))
}

/// How much of the state space a verification sweep covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scope {
    /// Every 3-cop robber-to-move state.
    Exhaustive,
    /// `count` states drawn uniformly (multiset rank and robber vertex),
    /// reproducible from `seed`.
    Sample { count: u64, seed: u64 },
}

impl Scope {
    fn describe(&self) -> String {
        match self {
            Scope::Exhaustive => "exhaustive".into(),
            Scope::Sample { count, seed } => format!("sample:{count}:seed={seed}"),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, Serialize, PartialEq, Eq)]
pub struct CaseCounts {
    pub case1: u64,
    pub case2: u64,
    pub case3: u64,
    pub trapped: u64,
}

#[derive(Debug, Clone, Copy, Default, Serialize, PartialEq, Eq)]
pub struct SubcaseCounts {
    pub a: u64,
    pub b: u64,
    pub c: u64,
}

/// Outcome of the Case-3 impossibility sweep.
#[derive(Debug, Clone, Serialize)]
pub struct Lemma1Report {
    pub n: u32,
    pub k: u32,
    pub cops: u32,
    pub scope: String,
    pub states_checked: u64,
    pub case_counts: CaseCounts,
    /// States satisfying the Case-3 condition (all of them must be trapped).
    pub case3_condition_states: u64,
    pub subcase_counts: SubcaseCounts,
    pub violation_count: u64,
    /// Up to 32 offending states in display form.
    pub violations: Vec<String>,
}

impl Lemma1Report {
    pub fn passed(&self) -> bool {
        self.violation_count == 0
    }
}

#[derive(Default)]
struct Lemma1Partial {
    checked: u64,
    counts: CaseCounts,
    cond_states: u64,
    subcases: SubcaseCounts,
    violations: Vec<String>,
}

impl Lemma1Partial {
    fn absorb(&mut self, o: Lemma1Partial) {
        self.checked += o.checked;
        self.counts.case1 += o.counts.case1;
        self.counts.case2 += o.counts.case2;
        self.counts.case3 += o.counts.case3;
        self.counts.trapped += o.counts.trapped;
        self.cond_states += o.cond_states;
        self.subcases.a += o.subcases.a;
        self.subcases.b += o.subcases.b;
        self.subcases.c += o.subcases.c;
        self.violations.extend(o.violations);
    }

    fn record(&mut self, g: &GPGraph, cops: &[u32], r: u32) {
        self.checked += 1;
        let eval = evaluate_ids(g, cops, r);
        let trapped = matches!(eval.label, LabelId::Trapped);
        match eval.label {
            LabelId::Trapped => self.counts.trapped += 1,
            LabelId::Case1 { .. } => self.counts.case1 += 1,
            LabelId::Case2 => self.counts.case2 += 1,
            LabelId::Case3 => self.counts.case3 += 1,
        }
        if let Some(m) = eval.case3_subcase {
            self.cond_states += 1;
            match m {
                1 => self.subcases.a += 1,
                2 => self.subcases.b += 1,
                _ => self.subcases.c += 1,
            }
        }
        // Lemma violation: the Case-3 condition without being trapped, or a
        // state no case covers (the label falls through to Case3).
        let cond_violation = eval.case3_subcase.is_some() && !trapped;
        if cond_violation || matches!(eval.label, LabelId::Case3) {
            self.violations.push(display_ids(g, cops, r));
        }
    }
}

fn display_ids(g: &GPGraph, cops: &[u32], r: u32) -> String {
    let n = g.n();
    let cops: Vec<Vertex> = cops.iter().map(|&c| Vertex::from_id(c, n)).collect();
    GameState::new(n, cops, Vertex::from_id(r, n), Side::Robber)
        .expect("valid state")
        .display()
}

fn warm_distance_rows(g: &GPGraph) {
    for v in 0..g.order() {
        g.distance_row(v);
    }
}

/// Runs a job over `0..v` and folds the results in index order, so the
/// aggregate is identical however many workers run.
fn partitioned<T: Send>(v: u32, job: impl Fn(u32) -> T + Sync + Send) -> Vec<T> {
    #[cfg(feature = "parallel")]
    {
        (0..v).into_par_iter().map(job).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..v).map(job).collect()
    }
}

fn sweep<P: Default + Send>(
    g: &GPGraph,
    scope: Scope,
    record: impl Fn(&mut P, &GPGraph, &[u32], u32) + Sync,
) -> Vec<P> {
    let v = g.order();
    match scope {
        Scope::Exhaustive => partitioned(v, |c0| {
            let mut part = P::default();
            for c1 in c0..v {
                for c2 in c1..v {
                    let cops = [c0, c1, c2];
                    for r in 0..v {
                        if r == c0 || r == c1 || r == c2 {
                            continue;
                        }
                        record(&mut part, g, &cops, r);
                    }
                }
            }
            part
        }),
        Scope::Sample { count, seed } => {
            let sp = StateSpace::new(v, 3);
            let chunk = 1u64 << 14;
            let chunks = count.div_ceil(chunk);
            partitioned(chunks as u32, |i| {
                let mut part = P::default();
                let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64));
                let draws = chunk.min(count - i as u64 * chunk);
                let mut cops = [0u32; 3];
                for _ in 0..draws {
                    let mrank = rng.gen_range(0..sp.multisets);
                    sp.unrank_multiset(mrank, &mut cops);
                    let r = rng.gen_range(0..v);
                    if cops.contains(&r) {
                        continue;
                    }
                    record(&mut part, g, &cops, r);
                }
                part
            })
        }
    }
}

/// Sweeps robber-to-move 3-cop states asserting the Case-3 condition only
/// occurs trapped. Family graphs only.
pub fn verify_lemma1(g: &GPGraph, scope: Scope) -> Result<Lemma1Report> {
    g.require_family()?;
    warm_distance_rows(g);

    let mut total = Lemma1Partial::default();
    for p in sweep::<Lemma1Partial>(g, scope, |part, g, cops, r| part.record(g, cops, r)) {
        total.absorb(p);
    }

    total.violations.sort();
    let violation_count = total.violations.len() as u64;
    total.violations.truncate(32);
    Ok(Lemma1Report {
        n: g.n(),
        k: g.k(),
        cops: 3,
        scope: scope.describe(),
        states_checked: total.checked,
        case_counts: total.counts,
        case3_condition_states: total.cond_states,
        subcase_counts: total.subcases,
        violation_count,
        violations: total.violations,
    })
}

/// Outcome of the safe-move sweep: for every untrapped robber-to-move state
/// the chosen move must be legal, uncapturable on the reply, and leave the
/// robber untrapped after every cop reply.
#[derive(Debug, Clone, Serialize)]
pub struct Lemma2Report {
    pub n: u32,
    pub k: u32,
    pub cops: u32,
    pub scope: String,
    pub states_checked: u64,
    /// States where no safe move exists (untrapped Case 3).
    pub unclassified: u64,
    /// Moves with a cop within distance 1 before the reply.
    pub capturable: u64,
    /// Moves some cop reply turns into a trapped position.
    pub trapped_after_reply: u64,
    pub violation_count: u64,
    pub violations: Vec<String>,
}

impl Lemma2Report {
    pub fn passed(&self) -> bool {
        self.violation_count == 0
    }
}

#[derive(Default)]
struct Lemma2Partial {
    checked: u64,
    unclassified: u64,
    capturable: u64,
    trapped_after_reply: u64,
    violations: Vec<String>,
}

impl Lemma2Partial {
    fn absorb(&mut self, o: Lemma2Partial) {
        self.checked += o.checked;
        self.unclassified += o.unclassified;
        self.capturable += o.capturable;
        self.trapped_after_reply += o.trapped_after_reply;
        self.violations.extend(o.violations);
    }

    fn record(&mut self, g: &GPGraph, cops: &[u32], r: u32) {
        let eval = evaluate_ids(g, cops, r);
        let m = match eval.label {
            LabelId::Trapped => return,
            LabelId::Case1 { anchor, .. } => anchor,
            LabelId::Case2 => {
                let n = g.n();
                case2_preference(g, Vertex::from_id(r, n)).id(n)
            }
            LabelId::Case3 => {
                self.checked += 1;
                self.unclassified += 1;
                self.violations
                    .push(format!("{} -> no safe move", display_ids(g, cops, r)));
                return;
            }
        };
        self.checked += 1;
        debug_assert!(g.adjacent_ids(r, m), "safe move must be a legal step");
        let row_m = g.distance_row(m);
        if cops.iter().any(|&c| row_m[c as usize] <= 1) {
            self.capturable += 1;
            let mv = Vertex::from_id(m, g.n());
            self.violations
                .push(format!("{} -> {mv}: capturable", display_ids(g, cops, r)));
            return;
        }
        let mut scratch = [0u32; 4];
        let mut bad = false;
        for_each_cop_move(g, cops, &mut scratch[..cops.len()], 0, &mut |reply| {
            if !bad && is_trapped_ids(g, reply, m, false) {
                bad = true;
            }
        });
        if bad {
            self.trapped_after_reply += 1;
            let mv = Vertex::from_id(m, g.n());
            self.violations.push(format!(
                "{} -> {mv}: trapped after reply",
                display_ids(g, cops, r)
            ));
        }
    }
}

/// Sweeps untrapped robber-to-move 3-cop states checking the safe-move
/// guarantees. Family graphs only.
pub fn verify_lemma2(g: &GPGraph, scope: Scope) -> Result<Lemma2Report> {
    g.require_family()?;
    warm_distance_rows(g);

    let mut total = Lemma2Partial::default();
    for p in sweep::<Lemma2Partial>(g, scope, |part, g, cops, r| part.record(g, cops, r)) {
        total.absorb(p);
    }

    total.violations.sort();
    let violation_count = total.violations.len() as u64;
    total.violations.truncate(32);
    Ok(Lemma2Report {
        n: g.n(),
        k: g.k(),
        cops: 3,
        scope: scope.describe(),
        states_checked: total.checked,
        unclassified: total.unclassified,
        capturable: total.capturable,
        trapped_after_reply: total.trapped_after_reply,
        violation_count,
        violations: total.violations,
    })
}
