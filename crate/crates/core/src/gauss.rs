//! Flat Gauss diagrams.
//!
//! A diagram is a disjoint union of oriented skeleton circles carrying `2n`
//! endpoint slots, joined in pairs by `n` arrows. Slots are stored
//! component by component in skeleton order starting from an explicit
//! slot 0, so two diagrams compare equal only if they agree slot for slot.
//! Arrows are always numbered by first appearance, which makes the stored
//! form independent of how the input labelled them.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One arrow end sitting in a skeleton slot.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Endpoint {
    pub arrow: usize,
    pub head: bool,
}

/// Slot positions of an arrow's tail and head.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Arrow {
    pub tail: usize,
    pub head: usize,
}

/// A point on the skeleton between two consecutive slots: `gap` is the
/// offset of the slot that follows it within `component`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Position {
    pub component: usize,
    pub gap: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Symmetry {
    Reverse,
    Mirror,
    ReverseMirror,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GaussDiagram {
    comp_len: Vec<usize>,
    slots: Vec<Endpoint>,
    arrows: Vec<Arrow>,
}

impl Default for GaussDiagram {
    fn default() -> Self {
        Self::unknot()
    }
}

impl GaussDiagram {
    /// The crossing-free unknot.
    pub fn unknot() -> Self {
        Self::unlink(1)
    }

    /// `k` crossing-free circles.
    pub fn unlink(k: usize) -> Self {
        GaussDiagram {
            comp_len: vec![0; k],
            slots: Vec::new(),
            arrows: Vec::new(),
        }
    }

    /// Builds a diagram from per-component slot sequences of
    /// `(label, is_head)`. Labels may be arbitrary; each must occur once as
    /// a tail and once as a head.
    pub fn from_components<L>(components: &[Vec<(L, bool)>]) -> Result<Self>
    where
        L: Copy + Ord + Into<u64>,
    {
        let mut ids: BTreeMap<L, usize> = BTreeMap::new();
        let mut comp_len = Vec::with_capacity(components.len().max(1));
        let mut slots = Vec::new();
        let mut tails: Vec<Option<usize>> = Vec::new();
        let mut heads: Vec<Option<usize>> = Vec::new();
        for comp in components {
            comp_len.push(comp.len());
            for &(label, head) in comp {
                let next = ids.len();
                let id = *ids.entry(label).or_insert(next);
                if id == tails.len() {
                    tails.push(None);
                    heads.push(None);
                }
                let pos = slots.len();
                let cell = if head { &mut heads[id] } else { &mut tails[id] };
                if cell.is_some() {
                    return Err(Error::UnbalancedLabel(label.into()));
                }
                *cell = Some(pos);
                slots.push(Endpoint { arrow: id, head });
            }
        }
        if comp_len.is_empty() {
            comp_len.push(0);
        }
        let mut arrows = Vec::with_capacity(tails.len());
        for (label, &id) in &ids {
            match (tails[id], heads[id]) {
                (Some(tail), Some(head)) => {
                    if arrows.len() <= id {
                        arrows.resize(id + 1, Arrow { tail: 0, head: 0 });
                    }
                    arrows[id] = Arrow { tail, head };
                }
                _ => return Err(Error::UnbalancedLabel((*label).into())),
            }
        }
        Ok(GaussDiagram {
            comp_len,
            slots,
            arrows,
        })
    }

    /// Internal constructor for slot sequences whose arrow ids are already
    /// valid (each id used once as tail and once as head) but possibly not
    /// numbered by first appearance.
    pub(crate) fn from_raw(comp_len: Vec<usize>, raw: &[Endpoint]) -> Self {
        let n = raw.len() / 2;
        let mut relabel = vec![usize::MAX; raw.iter().map(|e| e.arrow + 1).max().unwrap_or(0)];
        let mut next = 0;
        let mut slots = Vec::with_capacity(raw.len());
        let mut arrows = vec![Arrow { tail: 0, head: 0 }; n];
        for (pos, e) in raw.iter().enumerate() {
            if relabel[e.arrow] == usize::MAX {
                relabel[e.arrow] = next;
                next += 1;
            }
            let id = relabel[e.arrow];
            if e.head {
                arrows[id].head = pos;
            } else {
                arrows[id].tail = pos;
            }
            slots.push(Endpoint { arrow: id, head: e.head });
        }
        debug_assert_eq!(next, n);
        debug_assert_eq!(comp_len.iter().sum::<usize>(), raw.len());
        GaussDiagram {
            comp_len,
            slots,
            arrows,
        }
    }

    pub fn n_arrows(&self) -> usize {
        self.arrows.len()
    }

    /// Crossing number of this diagram.
    pub fn crossings(&self) -> usize {
        self.arrows.len()
    }

    pub fn n_slots(&self) -> usize {
        self.slots.len()
    }

    pub fn n_components(&self) -> usize {
        self.comp_len.len()
    }

    pub fn is_knot(&self) -> bool {
        self.comp_len.len() == 1
    }

    pub fn component_lengths(&self) -> &[usize] {
        &self.comp_len
    }

    pub fn slots(&self) -> &[Endpoint] {
        &self.slots
    }

    pub fn slot(&self, pos: usize) -> Endpoint {
        self.slots[pos]
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow(&self, id: usize) -> Arrow {
        self.arrows[id]
    }

    pub fn require_knot(&self) -> Result<()> {
        if self.is_knot() {
            Ok(())
        } else {
            Err(Error::NotAKnot(self.n_components()))
        }
    }

    /// First global slot index of a component.
    pub fn component_start(&self, c: usize) -> usize {
        self.comp_len[..c].iter().sum()
    }

    pub fn component_of(&self, pos: usize) -> usize {
        let mut start = 0;
        for (c, &len) in self.comp_len.iter().enumerate() {
            if pos < start + len {
                return c;
            }
            start += len;
        }
        panic!("slot {pos} out of range");
    }

    /// Slot bounds `(start, len)` of the component holding `pos`.
    fn bounds(&self, pos: usize) -> (usize, usize) {
        let mut start = 0;
        for &len in &self.comp_len {
            if pos < start + len {
                return (start, len);
            }
            start += len;
        }
        panic!("slot {pos} out of range");
    }

    /// Next slot along the skeleton orientation.
    pub fn next(&self, pos: usize) -> usize {
        if self.comp_len.len() == 1 {
            let n = self.slots.len();
            return if pos + 1 == n { 0 } else { pos + 1 };
        }
        let (start, len) = self.bounds(pos);
        start + (pos - start + 1) % len
    }

    /// Previous slot along the skeleton orientation.
    pub fn prev(&self, pos: usize) -> usize {
        if self.comp_len.len() == 1 {
            let n = self.slots.len();
            return if pos == 0 { n - 1 } else { pos - 1 };
        }
        let (start, len) = self.bounds(pos);
        start + (pos - start + len - 1) % len
    }

    /// Slot holding the other end of the arrow at `pos`.
    pub fn partner(&self, pos: usize) -> usize {
        let e = self.slots[pos];
        let a = self.arrows[e.arrow];
        if e.head {
            a.tail
        } else {
            a.head
        }
    }

    /// `O`/`U` word of a single-component diagram.
    pub fn ou_word(&self) -> String {
        self.slots
            .iter()
            .map(|e| if e.head { 'U' } else { 'O' })
            .collect()
    }

    /// Parses the Gauss-code text format: `O<k>`/`U<k>` tokens, components
    /// separated by `;`. Whitespace is ignored; the empty string is the
    /// crossing-free unknot.
    pub fn parse(text: &str) -> Result<Self> {
        let mut components: Vec<Vec<(u64, bool)>> = vec![Vec::new()];
        let bytes = text.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            let b = bytes[i];
            match b {
                b' ' | b'\t' | b'\n' | b'\r' | b',' => i += 1,
                b';' => {
                    components.push(Vec::new());
                    i += 1;
                }
                b'O' | b'o' | b'U' | b'u' => {
                    let head = matches!(b, b'U' | b'u');
                    let start = i;
                    i += 1;
                    let digits = i;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    if digits == i {
                        return Err(Error::MalformedToken {
                            pos: start,
                            msg: "expected a label after O/U".into(),
                        });
                    }
                    let label: u64 = text[digits..i].parse().map_err(|_| Error::MalformedToken {
                        pos: start,
                        msg: "label out of range".into(),
                    })?;
                    if label == 0 {
                        return Err(Error::MalformedToken {
                            pos: start,
                            msg: "labels are 1-based".into(),
                        });
                    }
                    components.last_mut().unwrap().push((label, head));
                }
                _ => {
                    return Err(Error::MalformedToken {
                        pos: i,
                        msg: format!("unexpected character {:?}", b as char),
                    })
                }
            }
        }
        Self::from_components(&components)
    }

    /// Serializes to the Gauss-code text format with labels numbered by
    /// first appearance.
    pub fn to_gauss_code(&self) -> String {
        let mut out = String::with_capacity(self.slots.len() * 3);
        let mut pos = 0;
        for (c, &len) in self.comp_len.iter().enumerate() {
            if c > 0 {
                out.push(';');
            }
            for e in &self.slots[pos..pos + len] {
                out.push(if e.head { 'U' } else { 'O' });
                out.push_str(&(e.arrow + 1).to_string());
            }
            pos += len;
        }
        out
    }

    /// Rotates a single-component diagram so that old slot `k` becomes
    /// slot 0.
    pub fn rotated(&self, k: usize) -> Self {
        debug_assert!(self.is_knot());
        let n = self.slots.len();
        if n == 0 {
            return self.clone();
        }
        let raw: Vec<Endpoint> = (0..n).map(|i| self.slots[(i + k) % n]).collect();
        Self::from_raw(self.comp_len.clone(), &raw)
    }

    /// Reverses the skeleton orientation of every component.
    pub fn reverse(&self) -> Self {
        let mut raw = Vec::with_capacity(self.slots.len());
        let mut start = 0;
        for &len in &self.comp_len {
            raw.extend(self.slots[start..start + len].iter().rev());
            start += len;
        }
        Self::from_raw(self.comp_len.clone(), &raw)
    }

    /// Reverses every arrow.
    pub fn mirror(&self) -> Self {
        let raw: Vec<Endpoint> = self
            .slots
            .iter()
            .map(|e| Endpoint {
                arrow: e.arrow,
                head: !e.head,
            })
            .collect();
        Self::from_raw(self.comp_len.clone(), &raw)
    }

    pub fn symmetry_transform(&self, kind: Symmetry) -> Self {
        match kind {
            Symmetry::Reverse => self.reverse(),
            Symmetry::Mirror => self.mirror(),
            Symmetry::ReverseMirror => self.reverse().mirror(),
        }
    }

    /// Arrow indices `n(e)`: tails minus heads on the open arc from the tail
    /// of `e` to its head. Arrows joining two different components have no
    /// such arc and report 0.
    pub fn arrow_indices(&self) -> Vec<i32> {
        let mut out = vec![0; self.arrows.len()];
        let mut start = 0;
        for &len in &self.comp_len {
            // prefix[k] = signed count over slots start..start+k
            let mut prefix = Vec::with_capacity(len + 1);
            prefix.push(0i32);
            for e in &self.slots[start..start + len] {
                let last = *prefix.last().unwrap();
                prefix.push(last + if e.head { -1 } else { 1 });
            }
            let total = prefix[len];
            for (off, e) in self.slots[start..start + len].iter().enumerate() {
                if e.head {
                    continue;
                }
                let a = self.arrows[e.arrow];
                if a.head < start || a.head >= start + len {
                    continue;
                }
                let t = off;
                let h = a.head - start;
                out[e.arrow] = if t < h {
                    prefix[h] - prefix[t + 1]
                } else {
                    (total - prefix[t + 1]) + prefix[h]
                };
            }
            start += len;
        }
        out
    }

    /// True iff every arrow index is divisible by `p` (for `p = 0`: every
    /// index is zero). `p = 0` is almost classicality, `p = 2`
    /// checkerboard colorability.
    pub fn mod_p_numberable(&self, p: u32) -> bool {
        self.arrow_indices().iter().all(|&n| {
            if p == 0 {
                n == 0
            } else {
                n.rem_euclid(p as i32) == 0
            }
        })
    }

    pub fn is_almost_classical(&self) -> bool {
        self.mod_p_numberable(0)
    }

    pub fn is_checkerboard_colorable(&self) -> bool {
        self.mod_p_numberable(2)
    }

    pub fn u_polynomial(&self) -> UPolynomial {
        let mut coeffs = BTreeMap::new();
        for n in self.arrow_indices() {
            if n != 0 {
                *coeffs.entry(n.unsigned_abs()).or_insert(0) += n.signum() as i64;
            }
        }
        coeffs.retain(|_, c| *c != 0);
        UPolynomial { coeffs }
    }

    /// Sub-diagram keeping exactly the arrows whose index (in `self`) is
    /// divisible by `r`.
    pub fn covering(&self, r: u32) -> Self {
        assert!(r > 0, "covering degree must be positive");
        let idx = self.arrow_indices();
        self.retain_arrows(|a| idx[a].rem_euclid(r as i32) == 0)
    }

    /// Deletes every arrow for which `keep` is false.
    pub fn retain_arrows(&self, keep: impl Fn(usize) -> bool) -> Self {
        let mut comp_len = Vec::with_capacity(self.comp_len.len());
        let mut raw = Vec::with_capacity(self.slots.len());
        let mut start = 0;
        for &len in &self.comp_len {
            let before = raw.len();
            raw.extend(
                self.slots[start..start + len]
                    .iter()
                    .filter(|e| keep(e.arrow))
                    .copied(),
            );
            comp_len.push(raw.len() - before);
            start += len;
        }
        Self::from_raw(comp_len, &raw)
    }

    /// The `m`-strand parallel cable. Each parallel copy is pushed to the
    /// left of the original strand; parallel `i` of the tail strand meets
    /// the parallels of the head strand in decreasing order, parallel `j`
    /// of the head strand meets those of the tail strand in increasing
    /// order, and every crossing keeps the direction of its parent arrow.
    /// Components are ordered `(original component, parallel index)`.
    pub fn cable(&self, m: usize) -> Self {
        assert!(m > 0, "cable needs at least one strand");
        if m == 1 {
            return self.clone();
        }
        let id = |a: usize, i: usize, j: usize| (a * m + i) * m + j;
        let mut comp_len = Vec::with_capacity(self.comp_len.len() * m);
        let mut raw = Vec::with_capacity(self.slots.len() * m * m);
        let mut start = 0;
        for &len in &self.comp_len {
            for k in 0..m {
                comp_len.push(len * m);
                for e in &self.slots[start..start + len] {
                    if e.head {
                        for i in 0..m {
                            raw.push(Endpoint {
                                arrow: id(e.arrow, i, k),
                                head: true,
                            });
                        }
                    } else {
                        for j in (0..m).rev() {
                            raw.push(Endpoint {
                                arrow: id(e.arrow, k, j),
                                head: false,
                            });
                        }
                    }
                }
            }
            start += len;
        }
        Self::from_raw(comp_len, &raw)
    }

    /// Connected sum of two knot diagrams spliced at the gaps before slot
    /// `gap1` of `d1` and slot `gap2` of `d2`.
    pub fn connected_sum(d1: &Self, gap1: usize, d2: &Self, gap2: usize) -> Result<Self> {
        d1.require_knot()?;
        d2.require_knot()?;
        for (d, g) in [(d1, gap1), (d2, gap2)] {
            if g >= d.n_slots().max(1) {
                return Err(Error::PositionOutOfRange {
                    component: 0,
                    position: g,
                    len: d.n_slots(),
                });
            }
        }
        let offset = d1.n_arrows();
        let n1 = d1.n_slots();
        let n2 = d2.n_slots();
        let mut raw = Vec::with_capacity(n1 + n2);
        raw.extend((0..n1).map(|i| d1.slots[(i + gap1) % n1]));
        raw.extend((0..n2).map(|i| {
            let e = d2.slots[(i + gap2) % n2];
            Endpoint {
                arrow: e.arrow + offset,
                head: e.head,
            }
        }));
        Ok(Self::from_raw(vec![n1 + n2], &raw))
    }

    /// Whether some rotation of the OU word is `OUOU...OU`. The empty word
    /// counts as alternating.
    pub fn is_alternating_pattern(&self) -> bool {
        let n = self.slots.len();
        (0..n.min(2).max(1)).any(|r| {
            (0..n).all(|i| self.slots[(i + r) % n].head == (i % 2 == 1))
        })
    }

    /// Encodes the OU word and matching at a given rotation.
    pub fn ou_matching(&self) -> Result<OuMatching> {
        self.require_knot()?;
        let key = crate::moves::diagram_key(self);
        Ok(key.to_ou_matching())
    }

    pub fn from_ou_matching(m: &OuMatching) -> Result<Self> {
        let word: Vec<bool> = m
            .word
            .chars()
            .map(|c| match c {
                'O' => Ok(false),
                'U' => Ok(true),
                _ => Err(Error::MalformedMatching(format!("bad letter {c:?}"))),
            })
            .collect::<Result<_>>()?;
        let n = m.matching.len();
        let n_o = word.iter().filter(|h| !**h).count();
        if word.len() != 2 * n || n_o != n {
            return Err(Error::MalformedMatching(
                "word must contain n O's and n U's for an n-entry matching".into(),
            ));
        }
        let mut seen = vec![false; n];
        for &x in &m.matching {
            if x == 0 || x as usize > n || seen[x as usize - 1] {
                return Err(Error::MalformedMatching("matching is not a permutation".into()));
            }
            seen[x as usize - 1] = true;
        }
        // arrow id = O-number - 1
        let mut raw = Vec::with_capacity(2 * n);
        let mut o = 0;
        let mut u = 0;
        for &head in &word {
            if head {
                raw.push(Endpoint {
                    arrow: m.matching[u] as usize - 1,
                    head: true,
                });
                u += 1;
            } else {
                raw.push(Endpoint {
                    arrow: o,
                    head: false,
                });
                o += 1;
            }
        }
        Ok(Self::from_raw(vec![2 * n], &raw))
    }
}

impl fmt::Display for GaussDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_gauss_code())
    }
}

impl std::str::FromStr for GaussDiagram {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

/// OU word plus matching. `matching[i]` is the 1-based number of the `O`
/// joined to the `i`-th `U`, both counted along the skeleton from slot 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OuMatching {
    pub word: String,
    pub matching: Vec<u32>,
}

impl fmt::Display for OuMatching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m: Vec<String> = self.matching.iter().map(|x| x.to_string()).collect();
        write!(f, "{} [{}]", self.word, m.join(" "))
    }
}

impl std::str::FromStr for OuMatching {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let open = s
            .find('[')
            .ok_or_else(|| Error::MalformedMatching("missing '['".into()))?;
        let close = s
            .rfind(']')
            .filter(|&c| c > open)
            .ok_or_else(|| Error::MalformedMatching("missing ']'".into()))?;
        let word = s[..open].trim().to_string();
        let matching = s[open + 1..close]
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<u32>()
                    .map_err(|_| Error::MalformedMatching(format!("bad entry {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(OuMatching { word, matching })
    }
}

/// Sparse integer polynomial in `t` without constant term.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct UPolynomial {
    pub coeffs: BTreeMap<u32, i64>,
}

impl UPolynomial {
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn negated(&self) -> Self {
        UPolynomial {
            coeffs: self.coeffs.iter().map(|(&d, &c)| (d, -c)).collect(),
        }
    }
}

impl fmt::Display for UPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<(i64, String)> = self
            .coeffs
            .iter()
            .rev()
            .map(|(&d, &c)| {
                let mono = if d == 1 { "t".to_string() } else { format!("t^{d}") };
                (c, mono)
            })
            .collect();
        f.write_str(&crate::polynomials::format_terms(&terms))
    }
}
