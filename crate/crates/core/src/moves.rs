//! Flat Reidemeister moves, monotone reduction, R3 orbits and canonical keys.
//!
//! Only crossing-removing R1/R2 moves and the crossing-preserving R3 move
//! are ever needed: a diagram is minimal exactly when no member of its R3
//! orbit admits an R1 or R2 removal.

use std::cmp::Ordering;
use std::collections::VecDeque;
use std::fmt;

use rustc_hash::FxHashSet;
use smallvec::{smallvec, SmallVec};

use crate::error::{Error, Result};
use crate::gauss::{Endpoint, GaussDiagram, OuMatching};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MoveKind {
    R1Remove,
    R2Remove,
    R3,
}

/// A place where a move applies.
///
/// `slots` holds, for R3, the first slot of each of the three adjacent
/// pairs (the pair is that slot and its successor); for removals it is
/// empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MoveSite {
    pub kind: MoveKind,
    pub arrows: SmallVec<[usize; 3]>,
    pub slots: SmallVec<[usize; 3]>,
}

/// Canonical name of a knot diagram set: the least `(ou_word, matching)`
/// pair, compared word first. Keys of different crossing numbers order by
/// crossing number.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CanonicalKey {
    // 2n word bytes (0 = O, 1 = U) followed by n matching entries.
    bytes: SmallVec<[u8; 36]>,
}

impl CanonicalKey {
    pub fn empty() -> Self {
        CanonicalKey {
            bytes: SmallVec::new(),
        }
    }

    pub fn crossings(&self) -> usize {
        self.bytes.len() / 3
    }

    pub fn ou_word(&self) -> String {
        let n = self.crossings();
        self.bytes[..2 * n]
            .iter()
            .map(|&b| if b == 0 { 'O' } else { 'U' })
            .collect()
    }

    pub fn matching(&self) -> Vec<u32> {
        let n = self.crossings();
        self.bytes[2 * n..].iter().map(|&b| b as u32).collect()
    }

    pub fn to_ou_matching(&self) -> OuMatching {
        OuMatching {
            word: self.ou_word(),
            matching: self.matching(),
        }
    }

    pub fn from_ou_matching(m: &OuMatching) -> Result<Self> {
        let d = GaussDiagram::from_ou_matching(m)?;
        Ok(diagram_key(&d))
    }

    /// The diagram in the rotation that realises this key.
    pub fn diagram(&self) -> GaussDiagram {
        GaussDiagram::from_ou_matching(&self.to_ou_matching())
            .expect("canonical keys always encode valid diagrams")
    }
}

impl Ord for CanonicalKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.bytes
            .len()
            .cmp(&other.bytes.len())
            .then_with(|| self.bytes.cmp(&other.bytes))
    }
}

impl PartialOrd for CanonicalKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalKey({})", self.to_ou_matching())
    }
}

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_ou_matching())
    }
}

/// Least `(word, matching)` over all skeleton rotations of a knot diagram.
pub fn diagram_key(d: &GaussDiagram) -> CanonicalKey {
    debug_assert!(d.is_knot());
    let slots = d.slots();
    let len = slots.len();
    let n = len / 2;
    if n == 0 {
        return CanonicalKey::empty();
    }
    // Least rotation of the OU word, compared as bit strings.
    let word: SmallVec<[u8; 32]> = slots.iter().map(|e| e.head as u8).collect();
    let word_less = |r: usize, s: usize| -> Ordering {
        for i in 0..len {
            let a = word[(r + i) % len];
            let b = word[(s + i) % len];
            if a != b {
                return a.cmp(&b);
            }
        }
        Ordering::Equal
    };
    let mut best_rots: SmallVec<[usize; 8]> = smallvec![0];
    for r in 1..len {
        match word_less(r, best_rots[0]) {
            Ordering::Less => {
                best_rots.clear();
                best_rots.push(r);
            }
            Ordering::Equal => best_rots.push(r),
            Ordering::Greater => {}
        }
    }
    let mut best: Option<SmallVec<[u8; 36]>> = None;
    let mut onum: SmallVec<[u8; 16]> = smallvec![0; n];
    let mut cand: SmallVec<[u8; 36]> = SmallVec::with_capacity(3 * n);
    for &r in &best_rots {
        cand.clear();
        let mut o = 0u8;
        for i in 0..len {
            let e = slots[(r + i) % len];
            cand.push(e.head as u8);
            if !e.head {
                o += 1;
                onum[e.arrow] = o;
            }
        }
        for i in 0..len {
            let e = slots[(r + i) % len];
            if e.head {
                cand.push(onum[e.arrow]);
            }
        }
        if best.as_ref().map_or(true, |b| cand < *b) {
            best = Some(cand.clone());
        }
    }
    CanonicalKey {
        bytes: best.unwrap(),
    }
}

/// The diagram rotated into the position realising its key.
pub fn canonical_rotation(d: &GaussDiagram) -> GaussDiagram {
    if d.is_knot() {
        diagram_key(d).diagram()
    } else {
        d.clone()
    }
}

fn r1_arrow(d: &GaussDiagram, arrow: usize) -> bool {
    let a = d.arrow(arrow);
    d.next(a.tail) == a.head || d.next(a.head) == a.tail
}

/// R2 partner test for the adjacent pair starting at `i`: returns the two
/// arrows if their far ends form another adjacent pair.
fn r2_at(d: &GaussDiagram, i: usize) -> Option<(usize, usize)> {
    let j = d.next(i);
    if j == i {
        return None;
    }
    let x = d.slot(i);
    let y = d.slot(j);
    if x.arrow == y.arrow || x.head == y.head {
        return None;
    }
    let ox = d.partner(i);
    let oy = d.partner(j);
    if d.next(ox) == oy || d.next(oy) == ox {
        Some((x.arrow.min(y.arrow), x.arrow.max(y.arrow)))
    } else {
        None
    }
}

/// True if an R1 or R2 removal applies.
pub fn has_reducing_site(d: &GaussDiagram) -> bool {
    (0..d.n_arrows()).any(|a| r1_arrow(d, a)) || (0..d.n_slots()).any(|i| r2_at(d, i).is_some())
}

fn first_reducing_site(d: &GaussDiagram) -> Option<MoveSite> {
    if let Some(a) = (0..d.n_arrows()).find(|&a| r1_arrow(d, a)) {
        return Some(MoveSite {
            kind: MoveKind::R1Remove,
            arrows: smallvec![a],
            slots: SmallVec::new(),
        });
    }
    (0..d.n_slots()).find_map(|i| {
        r2_at(d, i).map(|(a, b)| MoveSite {
            kind: MoveKind::R2Remove,
            arrows: smallvec![a, b],
            slots: SmallVec::new(),
        })
    })
}

/// Pair partner of `s` within a candidate R3 site, given the three pair
/// starts.
fn pair_partner(d: &GaussDiagram, starts: &[usize; 3], s: usize) -> Option<usize> {
    for &p in starts {
        let q = d.next(p);
        if p == s {
            return Some(q);
        }
        if q == s {
            return Some(p);
        }
    }
    None
}

/// Validates the R3 site with the given pair starts: the six slots are
/// distinct, carry three arrows each meeting the other two, and the local
/// orientation pattern is realisable (every arrow index is unchanged by
/// swapping the pairs).
fn r3_valid(d: &GaussDiagram, starts: &[usize; 3]) -> Option<[usize; 3]> {
    let mut slots: SmallVec<[usize; 6]> = SmallVec::new();
    for &p in starts {
        let q = d.next(p);
        if q == p || d.next(q) == p {
            // components of length < 3 have no well-defined pair order
            return None;
        }
        slots.push(p);
        slots.push(q);
    }
    let mut sorted = slots.clone();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    let mut arrows: SmallVec<[usize; 6]> = slots.iter().map(|&s| d.slot(s).arrow).collect();
    for k in 0..3 {
        if arrows[2 * k] == arrows[2 * k + 1] {
            return None;
        }
    }
    arrows.sort_unstable();
    if !(arrows[0] == arrows[1] && arrows[2] == arrows[3] && arrows[4] == arrows[5]) {
        return None;
    }
    let ids = [arrows[0], arrows[2], arrows[4]];
    if ids[0] == ids[1] || ids[1] == ids[2] {
        return None;
    }
    let c = |s: usize| if d.slot(s).head { -1i32 } else { 1 };
    for &a in &ids {
        let arr = d.arrow(a);
        let x = pair_partner(d, starts, arr.tail)?;
        let y = pair_partner(d, starts, arr.head)?;
        let in_x = x == d.next(arr.tail);
        let in_y = y == d.prev(arr.head);
        let delta = c(x) * (1 - 2 * in_x as i32) + c(y) * (1 - 2 * in_y as i32);
        if delta != 0 {
            return None;
        }
    }
    Some(ids)
}

fn r3_sites(d: &GaussDiagram) -> Vec<MoveSite> {
    let mut seen: FxHashSet<[usize; 3]> = FxHashSet::default();
    let mut out = Vec::new();
    for i in 0..d.n_slots() {
        let j = d.next(i);
        if j == i {
            continue;
        }
        let x = d.slot(i).arrow;
        let y = d.slot(j).arrow;
        if x == y {
            continue;
        }
        let ox = d.partner(i);
        let oy = d.partner(j);
        for q in [d.prev(ox), d.next(ox)] {
            let z = d.slot(q).arrow;
            if z == x || z == y || q == i || q == j {
                continue;
            }
            let oz = d.partner(q);
            let p3 = if d.next(oy) == oz {
                oy
            } else if d.next(oz) == oy {
                oz
            } else {
                continue;
            };
            let p2 = if d.next(ox) == q { ox } else { q };
            let mut starts = [i, p2, p3];
            starts.sort_unstable();
            if !seen.insert(starts) {
                continue;
            }
            if let Some(ids) = r3_valid(d, &starts) {
                out.push(MoveSite {
                    kind: MoveKind::R3,
                    arrows: SmallVec::from_slice(&ids),
                    slots: SmallVec::from_slice(&starts),
                });
            }
        }
    }
    out
}

/// All R1/R2 removal sites and all R3 sites of `d`.
pub fn find_moves(d: &GaussDiagram) -> Vec<MoveSite> {
    let mut out = Vec::new();
    for a in 0..d.n_arrows() {
        if r1_arrow(d, a) {
            out.push(MoveSite {
                kind: MoveKind::R1Remove,
                arrows: smallvec![a],
                slots: SmallVec::new(),
            });
        }
    }
    let mut pairs = FxHashSet::default();
    for i in 0..d.n_slots() {
        if let Some(p) = r2_at(d, i) {
            if pairs.insert(p) {
                out.push(MoveSite {
                    kind: MoveKind::R2Remove,
                    arrows: smallvec![p.0, p.1],
                    slots: SmallVec::new(),
                });
            }
        }
    }
    out.extend(r3_sites(d));
    out
}

/// Applies a site, checking that it still applies to `d`.
pub fn apply_move(d: &GaussDiagram, site: &MoveSite) -> Result<GaussDiagram> {
    let stale = || Error::StaleSite(format!("{site:?}"));
    if site.arrows.iter().any(|&a| a >= d.n_arrows()) {
        return Err(stale());
    }
    match site.kind {
        MoveKind::R1Remove => {
            let a = *site.arrows.first().ok_or_else(stale)?;
            if site.arrows.len() != 1 || !r1_arrow(d, a) {
                return Err(stale());
            }
            Ok(d.retain_arrows(|x| x != a))
        }
        MoveKind::R2Remove => {
            if site.arrows.len() != 2 {
                return Err(stale());
            }
            let (a, b) = (site.arrows[0].min(site.arrows[1]), site.arrows[0].max(site.arrows[1]));
            let ok = (0..d.n_slots()).any(|i| r2_at(d, i) == Some((a, b)));
            if !ok {
                return Err(stale());
            }
            Ok(d.retain_arrows(|x| x != a && x != b))
        }
        MoveKind::R3 => {
            if site.slots.len() != 3 || site.slots.iter().any(|&s| s >= d.n_slots()) {
                return Err(stale());
            }
            let starts = [site.slots[0], site.slots[1], site.slots[2]];
            let ids = r3_valid(d, &starts).ok_or_else(stale)?;
            let mut want = site.arrows.to_vec();
            want.sort_unstable();
            if want != ids {
                return Err(stale());
            }
            Ok(apply_r3_unchecked(d, &starts))
        }
    }
}

fn apply_r3_unchecked(d: &GaussDiagram, starts: &[usize; 3]) -> GaussDiagram {
    let mut raw: Vec<Endpoint> = d.slots().to_vec();
    for &p in starts {
        raw.swap(p, d.next(p));
    }
    GaussDiagram::from_raw(d.component_lengths().to_vec(), &raw)
}

/// R3 neighbours of `d` (one per site).
pub fn r3_neighbours(d: &GaussDiagram) -> Vec<GaussDiagram> {
    r3_sites(d)
        .iter()
        .map(|s| apply_r3_unchecked(d, &[s.slots[0], s.slots[1], s.slots[2]]))
        .collect()
}

/// Breadth-first walk of the R3 orbit of a knot diagram. `visit` receives
/// each member once (identified up to rotation) with its key and may stop
/// the walk by returning `false`. Returns `false` if stopped early.
pub fn walk_r3_orbit(
    d: &GaussDiagram,
    mut visit: impl FnMut(&GaussDiagram, &CanonicalKey) -> bool,
) -> bool {
    let mut seen: FxHashSet<CanonicalKey> = FxHashSet::default();
    let mut queue = VecDeque::new();
    let k = diagram_key(d);
    seen.insert(k.clone());
    if !visit(d, &k) {
        return false;
    }
    queue.push_back(d.clone());
    while let Some(cur) = queue.pop_front() {
        for nb in r3_neighbours(&cur) {
            let k = diagram_key(&nb);
            if seen.insert(k.clone()) {
                if !visit(&nb, &k) {
                    return false;
                }
                queue.push_back(nb);
            }
        }
    }
    true
}

/// The R3 orbit of a knot diagram, each member in canonical rotation,
/// sorted by key.
pub fn r3_orbit(d: &GaussDiagram) -> Vec<GaussDiagram> {
    let mut keys = Vec::new();
    walk_r3_orbit(d, |_, k| {
        keys.push(k.clone());
        true
    });
    keys.sort();
    keys.iter().map(|k| k.diagram()).collect()
}

/// Keys of the R3 orbit members, sorted.
pub fn r3_orbit_keys(d: &GaussDiagram) -> Vec<CanonicalKey> {
    let mut keys = Vec::new();
    walk_r3_orbit(d, |_, k| {
        keys.push(k.clone());
        true
    });
    keys.sort();
    keys
}

/// Finds an orbit member with an R1/R2 site, if any.
fn reducible_orbit_member(d: &GaussDiagram) -> Option<GaussDiagram> {
    let mut found = None;
    walk_r3_orbit(d, |m, _| {
        if has_reducing_site(m) {
            found = Some(m.clone());
            false
        } else {
            true
        }
    });
    found
}

/// Monotone reduction to a minimal-crossing diagram, returned in canonical
/// rotation. Also accepts links, in which case the R3 search is done on
/// raw diagrams (see [`reduce_link`]).
pub fn reduce_monotone(d: &GaussDiagram) -> GaussDiagram {
    if !d.is_knot() {
        return reduce_link(d, usize::MAX).0;
    }
    let mut cur = d.clone();
    loop {
        if let Some(site) = first_reducing_site(&cur) {
            cur = apply_move(&cur, &site).expect("site just found");
            continue;
        }
        match reducible_orbit_member(&cur) {
            Some(m) => cur = m,
            None => return canonical_rotation(&cur),
        }
    }
}

/// The sequence of moves used by [`reduce_monotone`], applied in order.
pub fn reduction_moves(d: &GaussDiagram) -> (GaussDiagram, Vec<MoveSite>) {
    let mut cur = d.clone();
    let mut steps = Vec::new();
    loop {
        if let Some(site) = first_reducing_site(&cur) {
            cur = apply_move(&cur, &site).expect("site just found");
            steps.push(site);
            continue;
        }
        match r3_path_to_reducible(&cur, usize::MAX) {
            Some(path) => {
                for site in path {
                    cur = apply_move(&cur, &site).expect("path replays");
                    steps.push(site);
                }
            }
            None => return (cur, steps),
        }
    }
}

/// Breadth-first search through raw R3 neighbours for a diagram with an
/// R1/R2 site; returns the R3 sites leading there. Works for links.
fn r3_path_to_reducible(d: &GaussDiagram, cap: usize) -> Option<Vec<MoveSite>> {
    let mut parent: rustc_hash::FxHashMap<GaussDiagram, Option<(GaussDiagram, MoveSite)>> =
        rustc_hash::FxHashMap::default();
    parent.insert(d.clone(), None);
    let mut queue = VecDeque::from([d.clone()]);
    let mut target = None;
    'bfs: while let Some(cur) = queue.pop_front() {
        if has_reducing_site(&cur) {
            target = Some(cur);
            break;
        }
        for site in r3_sites(&cur) {
            let nb = apply_r3_unchecked(&cur, &[site.slots[0], site.slots[1], site.slots[2]]);
            if !parent.contains_key(&nb) {
                if parent.len() >= cap {
                    break 'bfs;
                }
                parent.insert(nb.clone(), Some((cur.clone(), site)));
                queue.push_back(nb);
            }
        }
    }
    let mut node = target?;
    let mut path = Vec::new();
    while let Some(Some((prev, site))) = parent.get(&node) {
        path.push(site.clone());
        node = prev.clone();
    }
    path.reverse();
    Some(path)
}

/// Monotone reduction that works for any number of components. R3
/// orbits are explored on raw diagrams, visiting at most `orbit_cap`
/// diagrams per exploration. Returns the reduced diagram and the moves
/// applied.
pub fn reduce_link(d: &GaussDiagram, orbit_cap: usize) -> (GaussDiagram, Vec<MoveSite>) {
    let mut cur = d.clone();
    let mut steps = Vec::new();
    loop {
        if let Some(site) = first_reducing_site(&cur) {
            cur = apply_move(&cur, &site).expect("site just found");
            steps.push(site);
            continue;
        }
        match r3_path_to_reducible(&cur, orbit_cap) {
            Some(path) if !path.is_empty() => {
                for site in path {
                    cur = apply_move(&cur, &site).expect("path replays");
                    steps.push(site);
                }
            }
            _ => return (cur, steps),
        }
    }
}

/// Whether `d` is a minimal-crossing diagram.
pub fn is_minimal(d: &GaussDiagram) -> bool {
    if d.is_knot() {
        reducible_orbit_member(d).is_none()
    } else {
        r3_path_to_reducible(d, usize::MAX).is_none()
    }
}

/// Key of the flat knot of `d`: least key over the R3 orbit of a minimal
/// diagram.
pub fn canonical_key(d: &GaussDiagram) -> Result<CanonicalKey> {
    d.require_knot()?;
    let m = reduce_monotone(d);
    Ok(orbit_min_key(&m))
}

/// Least key over the R3 orbit of `d` (no reduction).
pub fn orbit_min_key(d: &GaussDiagram) -> CanonicalKey {
    let mut best: Option<CanonicalKey> = None;
    walk_r3_orbit(d, |_, k| {
        if best.as_ref().map_or(true, |b| k < b) {
            best = Some(k.clone());
        }
        true
    });
    best.unwrap()
}

pub fn same_flat_knot(d1: &GaussDiagram, d2: &GaussDiagram) -> Result<bool> {
    let a = reduce_monotone(d1);
    let b = reduce_monotone(d2);
    if a.n_arrows() != b.n_arrows() {
        return Ok(false);
    }
    Ok(canonical_key(&a)? == canonical_key(&b)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SymmetryType {
    Chiral,
    Reversible,
    PlusAchiral,
    MinusAchiral,
    FullyAchiral,
}

impl SymmetryType {
    /// Table letter: c, r, +, -, a.
    pub fn letter(self) -> char {
        match self {
            SymmetryType::Chiral => 'c',
            SymmetryType::Reversible => 'r',
            SymmetryType::PlusAchiral => '+',
            SymmetryType::MinusAchiral => '-',
            SymmetryType::FullyAchiral => 'a',
        }
    }

    pub fn from_letter(c: char) -> Option<Self> {
        Some(match c {
            'c' => SymmetryType::Chiral,
            'r' => SymmetryType::Reversible,
            '+' => SymmetryType::PlusAchiral,
            '-' => SymmetryType::MinusAchiral,
            'a' => SymmetryType::FullyAchiral,
            _ => return None,
        })
    }

    /// Classifies from the three equalities `α = −α`, `α = α*`, `α = −α*`.
    pub fn from_equalities(reverse: bool, mirror: bool, reverse_mirror: bool) -> Self {
        match (reverse, mirror, reverse_mirror) {
            (true, true, _) | (_, true, true) | (true, _, true) => SymmetryType::FullyAchiral,
            (true, false, false) => SymmetryType::Reversible,
            (false, true, false) => SymmetryType::PlusAchiral,
            (false, false, true) => SymmetryType::MinusAchiral,
            (false, false, false) => SymmetryType::Chiral,
        }
    }

    /// Classifies from the sibling keys `[α, −α, α*, −α*]`.
    pub fn from_keys(keys: &[CanonicalKey; 4]) -> Self {
        Self::from_equalities(keys[0] == keys[1], keys[0] == keys[2], keys[0] == keys[3])
    }
}

impl fmt::Display for SymmetryType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SymmetryType::Chiral => "chiral",
            SymmetryType::Reversible => "reversible",
            SymmetryType::PlusAchiral => "plus_achiral",
            SymmetryType::MinusAchiral => "minus_achiral",
            SymmetryType::FullyAchiral => "fully_achiral",
        };
        f.write_str(s)
    }
}

/// Keys of the four siblings `[α, −α, α*, −α*]` of a minimal diagram.
pub fn sibling_keys(minimal: &GaussDiagram) -> [CanonicalKey; 4] {
    let mut best: [Option<CanonicalKey>; 4] = Default::default();
    walk_r3_orbit(minimal, |m, k| {
        let ks = [
            k.clone(),
            diagram_key(&m.reverse()),
            diagram_key(&m.mirror()),
            diagram_key(&m.reverse().mirror()),
        ];
        for (b, k) in best.iter_mut().zip(ks) {
            if b.as_ref().map_or(true, |x| k < *x) {
                *b = Some(k);
            }
        }
        true
    });
    best.map(|k| k.unwrap())
}

pub fn symmetry_type(d: &GaussDiagram) -> Result<SymmetryType> {
    d.require_knot()?;
    let m = reduce_monotone(d);
    let [a, r, s, rs] = sibling_keys(&m);
    Ok(SymmetryType::from_equalities(a == r, a == s, a == rs))
}
