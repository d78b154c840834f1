//! Cobordism moves, slice movies, the slice obstruction battery and a
//! bounded search for ribbon movies.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use rustc_hash::{FxHashMap, FxHashSet};
use smallvec::SmallVec;

use crate::based_matrix::{algebraic_genus, based_matrix};
use crate::error::{Error, Result};
use crate::gauss::{Endpoint, GaussDiagram, Position, UPolynomial};
use crate::moves::{
    apply_move, canonical_key, diagram_key, find_moves, reduce_link, walk_r3_orbit, MoveKind, MoveSite,
};

/// Resects the skeleton at `p` and `q` and reconnects respecting
/// orientation. Two points of one circle split it into the arc from `p`
/// to `q` (kept in place) and the arc from `q` back to `p` (inserted right
/// after it); points on different circles merge them into one circle,
/// placed at the lower index, reading the first circle from its point and
/// then the second from its point. A crossing-free circle has a single
/// position, and a saddle there with itself buds off a new empty circle.
pub fn saddle(d: &GaussDiagram, p: Position, q: Position) -> Result<GaussDiagram> {
    let lens = d.component_lengths();
    for x in [p, q] {
        let len = *lens.get(x.component).ok_or(Error::PositionOutOfRange {
            component: x.component,
            position: x.gap,
            len: 0,
        })?;
        if x.gap >= len.max(1) {
            return Err(Error::PositionOutOfRange {
                component: x.component,
                position: x.gap,
                len,
            });
        }
    }
    if p == q && lens[p.component] > 0 {
        return Err(Error::DegenerateSaddle);
    }
    let comps: Vec<&[Endpoint]> = (0..lens.len())
        .map(|c| {
            let s = d.component_start(c);
            &d.slots()[s..s + lens[c]]
        })
        .collect();
    let mut out: Vec<Vec<Endpoint>> = Vec::with_capacity(lens.len() + 1);
    if p.component == q.component {
        let c = p.component;
        let (a, b) = (p.gap.min(q.gap), p.gap.max(q.gap));
        let s = comps[c];
        for (i, comp) in comps.iter().enumerate() {
            if i == c {
                out.push(s[a..b].to_vec());
                out.push(s[b..].iter().chain(&s[..a]).copied().collect());
            } else {
                out.push(comp.to_vec());
            }
        }
    } else {
        let (lo, hi) = if p.component < q.component { (p, q) } else { (q, p) };
        let rot = |x: Position| -> Vec<Endpoint> {
            let s = comps[x.component];
            s[x.gap.min(s.len())..].iter().chain(&s[..x.gap.min(s.len())]).copied().collect()
        };
        // read the circle of `p` first
        let merged: Vec<Endpoint> = rot(p).into_iter().chain(rot(q)).collect();
        for (i, comp) in comps.iter().enumerate() {
            if i == lo.component {
                out.push(merged.clone());
            } else if i != hi.component {
                out.push(comp.to_vec());
            }
        }
    }
    let comp_len = out.iter().map(|c| c.len()).collect();
    let raw: Vec<Endpoint> = out.into_iter().flatten().collect();
    Ok(GaussDiagram::from_raw(comp_len, &raw))
}

/// Adds a crossing-free circle as the last component.
pub fn birth(d: &GaussDiagram) -> GaussDiagram {
    let mut lens = d.component_lengths().to_vec();
    lens.push(0);
    GaussDiagram::from_raw(lens, d.slots())
}

/// Removes a crossing-free circle.
pub fn death(d: &GaussDiagram, component: usize) -> Result<GaussDiagram> {
    let lens = d.component_lengths();
    match lens.get(component) {
        Some(0) if lens.len() > 1 => {
            let mut lens = lens.to_vec();
            lens.remove(component);
            Ok(GaussDiagram::from_raw(lens, d.slots()))
        }
        _ => Err(Error::ReplayFailed {
            step: 0,
            msg: format!("component {component} is not a removable crossing-free circle"),
        }),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SliceStep {
    Move(MoveSite),
    Saddle(Position, Position),
    Birth,
    Death(usize),
}

impl fmt::Display for SliceStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        match self {
            SliceStep::Move(m) => {
                let kind = match m.kind {
                    MoveKind::R1Remove => "r1",
                    MoveKind::R2Remove => "r2",
                    MoveKind::R3 => "r3",
                };
                write!(f, "{kind} {}", list(&m.arrows))?;
                if !m.slots.is_empty() {
                    write!(f, " @{}", list(&m.slots))?;
                }
                Ok(())
            }
            SliceStep::Saddle(p, q) => write!(f, "saddle {}:{} {}:{}", p.component, p.gap, q.component, q.gap),
            SliceStep::Birth => write!(f, "birth"),
            SliceStep::Death(c) => write!(f, "death {c}"),
        }
    }
}

impl FromStr for SliceStep {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::MalformedLine { line: 0, msg: format!("bad movie step {s:?}") };
        let nums = |t: &str| -> Result<SmallVec<[usize; 3]>> {
            t.split(',').map(|x| x.trim().parse::<usize>().map_err(|_| bad())).collect()
        };
        let pos = |t: &str| -> Result<Position> {
            let (c, g) = t.split_once(':').ok_or_else(bad)?;
            Ok(Position {
                component: c.parse().map_err(|_| bad())?,
                gap: g.parse().map_err(|_| bad())?,
            })
        };
        let toks: Vec<&str> = s.split_whitespace().collect();
        match toks.as_slice() {
            ["birth"] => Ok(SliceStep::Birth),
            ["death", c] => Ok(SliceStep::Death(c.parse().map_err(|_| bad())?)),
            ["saddle", p, q] => Ok(SliceStep::Saddle(pos(p)?, pos(q)?)),
            [kind @ ("r1" | "r2"), arrows] => Ok(SliceStep::Move(MoveSite {
                kind: if *kind == "r1" { MoveKind::R1Remove } else { MoveKind::R2Remove },
                arrows: nums(arrows)?,
                slots: SmallVec::new(),
            })),
            ["r3", arrows, slots] => Ok(SliceStep::Move(MoveSite {
                kind: MoveKind::R3,
                arrows: nums(arrows)?,
                slots: nums(slots.strip_prefix('@').ok_or_else(bad)?)?,
            })),
            _ => Err(bad()),
        }
    }
}

/// A cobordism from `start` to the crossing-free unknot. A concordance
/// to the unknot has `#saddles = #births + #deaths`; capping the final
/// circle with a disk makes it a slice movie.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceMovie {
    pub start: GaussDiagram,
    pub steps: Vec<SliceStep>,
}

impl SliceMovie {
    pub fn saddles(&self) -> usize {
        self.steps.iter().filter(|s| matches!(s, SliceStep::Saddle(..))).count()
    }

    pub fn births(&self) -> usize {
        self.steps.iter().filter(|s| matches!(s, SliceStep::Birth)).count()
    }

    pub fn deaths(&self) -> usize {
        self.steps.iter().filter(|s| matches!(s, SliceStep::Death(_))).count()
    }

    /// Ribbon movies use saddles and deaths only.
    pub fn is_ribbon(&self) -> bool {
        self.births() == 0
    }

    /// Replays every step, checking legality, the count identity and that
    /// the movie ends at the crossing-free unknot.
    pub fn replay(&self) -> Result<GaussDiagram> {
        let mut cur = self.start.clone();
        for (i, step) in self.steps.iter().enumerate() {
            let fail = |e: Error| Error::ReplayFailed { step: i, msg: e.to_string() };
            cur = match step {
                SliceStep::Move(m) => apply_move(&cur, m).map_err(fail)?,
                SliceStep::Saddle(p, q) => saddle(&cur, *p, *q).map_err(fail)?,
                SliceStep::Birth => birth(&cur),
                SliceStep::Death(c) => death(&cur, *c).map_err(fail)?,
            };
        }
        let end = self.steps.len();
        if cur != GaussDiagram::unknot() {
            return Err(Error::ReplayFailed { step: end, msg: format!("movie ends at {cur}, not the unknot") });
        }
        if self.saddles() != self.births() + self.deaths() {
            return Err(Error::ReplayFailed { step: end, msg: "saddle count differs from births plus deaths".into() });
        }
        Ok(cur)
    }

    /// Line-per-step text log: the start diagram, then one step per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("start {}\n", self.start);
        for s in &self.steps {
            out.push_str(&s.to_string());
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<SliceMovie> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, first) = lines.next().ok_or(Error::MalformedLine { line: 1, msg: "empty movie".into() })?;
        let code = first
            .trim()
            .strip_prefix("start")
            .ok_or(Error::MalformedLine { line: 1, msg: "expected `start <gauss code>`".into() })?;
        let start = GaussDiagram::parse(code.trim())?;
        let mut steps = Vec::new();
        for (i, l) in lines {
            steps.push(l.trim().parse::<SliceStep>().map_err(|e| match e {
                Error::MalformedLine { msg, .. } => Error::MalformedLine { line: i + 1, msg },
                e => e,
            })?);
        }
        Ok(SliceMovie { start, steps })
    }
}

/// Why a knot cannot be slice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Obstruction {
    UPolynomial(UPolynomial),
    AlgebraicGenus(usize),
    Covering { r: u32, covering: GaussDiagram, reason: Box<Obstruction> },
}

impl fmt::Display for Obstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Obstruction::UPolynomial(u) => write!(f, "u-polynomial {u} is nonzero"),
            Obstruction::AlgebraicGenus(g) => write!(f, "algebraic genus {g} is positive"),
            Obstruction::Covering { r, covering, reason } => {
                write!(f, "{r}-covering {covering} is not slice: {reason}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SliceStatus {
    Slice { movie: SliceMovie, ribbon: bool },
    NotSlice(Obstruction),
    Unknown,
}

impl SliceStatus {
    /// Short tag used in tables: `slice`, `ribbon`, `not_slice`, `unknown`.
    pub fn tag(&self) -> &'static str {
        match self {
            SliceStatus::Slice { ribbon: true, .. } => "ribbon",
            SliceStatus::Slice { .. } => "slice",
            SliceStatus::NotSlice(_) => "not_slice",
            SliceStatus::Unknown => "unknown",
        }
    }
}

/// Default covering recursion depth.
pub const DEFAULT_COVERING_DEPTH: u32 = 2;

/// Runs the obstruction battery on a knot: nonzero u-polynomial, positive
/// algebraic genus, or (recursively, up to `depth`) an obstructed covering.
/// Returns `NotSlice` or `Unknown`.
pub fn slice_obstructions(d: &GaussDiagram, depth: u32) -> Result<SliceStatus> {
    d.require_knot()?;
    Ok(match obstruction(d, depth) {
        Some(o) => SliceStatus::NotSlice(o),
        None => SliceStatus::Unknown,
    })
}

fn obstruction(d: &GaussDiagram, depth: u32) -> Option<Obstruction> {
    let m = reduce_link(d, usize::MAX).0;
    if m.n_arrows() == 0 {
        return None;
    }
    let u = m.u_polynomial();
    if !u.is_zero() {
        return Some(Obstruction::UPolynomial(u));
    }
    let g = algebraic_genus(&based_matrix(&m).expect("knot"));
    if g > 0 {
        return Some(Obstruction::AlgebraicGenus(g));
    }
    if depth == 0 {
        return None;
    }
    let key = canonical_key(&m).expect("knot");
    for r in 2..=m.n_arrows() as u32 {
        let cov = m.covering(r);
        if cov.n_arrows() == m.n_arrows() {
            continue;
        }
        let cm = reduce_link(&cov, usize::MAX).0;
        if cm.n_arrows() == 0 || canonical_key(&cm).ok() == Some(key.clone()) {
            continue;
        }
        if let Some(reason) = obstruction(&cm, depth - 1) {
            return Some(Obstruction::Covering { r, covering: cm, reason: Box::new(reason) });
        }
    }
    None
}

/// Limits for [`slice_search`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_saddles: usize,
    pub max_states: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { max_saddles: 2, max_states: 100_000 }
    }
}

/// Reduces a link and kills its free crossing-free circles (keeping one
/// circle), recording the steps.
fn tidy(d: &GaussDiagram, steps: &mut Vec<SliceStep>) -> GaussDiagram {
    let (mut cur, moves) = reduce_link(d, 2_000);
    steps.extend(moves.into_iter().map(SliceStep::Move));
    loop {
        let lens = cur.component_lengths();
        if lens.len() <= 1 {
            return cur;
        }
        match lens.iter().position(|&l| l == 0) {
            Some(c) => {
                cur = death(&cur, c).expect("empty circle");
                steps.push(SliceStep::Death(c));
            }
            None => return cur,
        }
    }
}

/// R3 orbit of a knot diagram with, for each member, the moves reaching
/// it from `d`.
fn orbit_with_paths(d: &GaussDiagram, cap: usize) -> Vec<(GaussDiagram, Vec<SliceStep>)> {
    let mut seen: FxHashSet<GaussDiagram> = FxHashSet::default();
    let mut out = Vec::new();
    let mut queue = VecDeque::from([(d.clone(), Vec::new())]);
    seen.insert(d.clone());
    while let Some((cur, path)) = queue.pop_front() {
        for site in find_moves(&cur).into_iter().filter(|m| m.kind == MoveKind::R3) {
            let nb = apply_move(&cur, &site).expect("site just found");
            if seen.len() < cap && seen.insert(nb.clone()) {
                let mut p: Vec<SliceStep> = path.clone();
                p.push(SliceStep::Move(site));
                queue.push_back((nb, p));
            }
        }
        out.push((cur, path));
    }
    out
}

/// Searches for a ribbon movie: saddles interleaved with monotone
/// reduction and deaths of free crossing-free circles, best-first by total
/// crossings then component count. Every R3 variant of the current
/// diagram is tried as a saddle site. Returns `Slice` or `Unknown`.
pub fn slice_search(d: &GaussDiagram, budget: SearchBudget) -> Result<SliceStatus> {
    d.require_knot()?;
    let mut steps = Vec::new();
    let start = tidy(d, &mut steps);
    let done = |x: &GaussDiagram| x.n_arrows() == 0 && x.n_components() == 1;
    let finish = |steps: Vec<SliceStep>| {
        let movie = SliceMovie { start: d.clone(), steps };
        debug_assert!(movie.replay().is_ok(), "search emits replayable movies");
        SliceStatus::Slice { ribbon: movie.is_ribbon(), movie }
    };
    if done(&start) {
        return Ok(finish(steps));
    }
    // frontier entries: (crossings, components, saddles, diagram, steps)
    let mut frontier: std::collections::BTreeMap<(usize, usize, usize), Vec<(GaussDiagram, Vec<SliceStep>)>> =
        Default::default();
    let mut seen: FxHashMap<GaussDiagram, usize> = FxHashMap::default();
    frontier.entry((start.n_arrows(), start.n_components(), 0)).or_default().push((start.clone(), steps));
    seen.insert(start, 0);
    let mut explored = 0usize;
    while let Some(mut entry) = frontier.first_entry() {
        let (_, _, saddles) = *entry.key();
        let (cur, path) = entry.get_mut().pop().unwrap();
        if entry.get().is_empty() {
            entry.remove();
        }
        if saddles >= budget.max_saddles {
            continue;
        }
        let variants = if cur.is_knot() { orbit_with_paths(&cur, 500) } else { vec![(cur.clone(), Vec::new())] };
        for (v, vpath) in variants {
            let lens = v.component_lengths().to_vec();
            for c in 0..lens.len() {
                for a in 0..lens[c] {
                    for b in a + 1..lens[c] {
                        explored += 1;
                        if explored > budget.max_states {
                            return Ok(SliceStatus::Unknown);
                        }
                        let p = Position { component: c, gap: a };
                        let q = Position { component: c, gap: b };
                        let split = saddle(&v, p, q)?;
                        let mut s: Vec<SliceStep> = path.clone();
                        s.extend(vpath.iter().cloned());
                        s.push(SliceStep::Saddle(p, q));
                        let next = tidy(&split, &mut s);
                        if done(&next) {
                            return Ok(finish(s));
                        }
                        let sad = saddles + 1;
                        if seen.get(&next).map_or(true, |&k| sad < k) {
                            seen.insert(next.clone(), sad);
                            frontier.entry((next.n_arrows(), next.n_components(), sad)).or_default().push((next, s));
                        }
                    }
                }
            }
        }
    }
    Ok(SliceStatus::Unknown)
}

/// Obstructions first, then the search.
pub fn slice_status(d: &GaussDiagram, budget: SearchBudget) -> Result<SliceStatus> {
    match slice_obstructions(d, DEFAULT_COVERING_DEPTH)? {
        SliceStatus::Unknown => slice_search(d, budget),
        s => Ok(s),
    }
}

/// Whether some member of the R3 orbit of the reduced diagram equals its
/// own reversed mirror up to rotation. `false` only means none was found
/// among those diagrams.
pub fn strongly_ribbon_check(d: &GaussDiagram) -> Result<bool> {
    d.require_knot()?;
    let m = reduce_link(d, usize::MAX).0;
    let mut found = false;
    walk_r3_orbit(&m, |x, k| {
        found = diagram_key(&x.reverse().mirror()) == *k;
        !found
    });
    Ok(found)
}
