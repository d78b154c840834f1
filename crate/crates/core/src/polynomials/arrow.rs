//! The flat arrow polynomial: a state sum over oriented and disoriented
//! smoothings in which every state loop carries a cusp variable `K_i`.

use rustc_hash::FxHashMap;
use smallvec::SmallVec;

use crate::gauss::GaussDiagram;
use crate::polynomials::poly::{Monomial, Poly};

/// Ports at a crossing: the incoming and outgoing half of the strand
/// through each endpoint slot.
fn port(slot: usize, out: bool) -> usize {
    2 * slot + out as usize
}

/// Smoothing arcs of an arrow `(t, h)` as `(port, port, weight)`, weight
/// counted traversing from the first port to the second. Oriented
/// smoothings join each incoming half to the other strand's outgoing half;
/// disoriented ones join the two incoming halves (a sink, `+1` from the
/// tail side) and the two outgoing halves (a source, `−1` from the tail
/// side).
fn smoothing_arcs(t: usize, h: usize, disoriented: bool) -> [(usize, usize, i64); 2] {
    if disoriented {
        [(port(t, false), port(h, false), 1), (port(t, true), port(h, true), -1)]
    } else {
        [(port(t, false), port(h, true), 0), (port(h, false), port(t, true), 0)]
    }
}

/// One loop of a smoothed state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateLoop {
    /// Signed cusp total along the loop (even).
    pub cusps: i64,
    /// Skeleton edges traversed an odd number of times (edge `p` runs from
    /// slot `p` to the next slot); only filled for diagrams with at most
    /// 128 slots.
    pub edges: u128,
}

/// Traces the loops of the state `bits` (bit `e` set = arrow `e` smoothed
/// disorientedly). Components without arrows contribute one loop each.
pub fn state_loops(d: &GaussDiagram, bits: &[bool]) -> Vec<StateLoop> {
    let len = d.n_slots();
    let mut smooth = vec![(usize::MAX, 0i64); 2 * len];
    for (e, a) in d.arrows().iter().enumerate() {
        for (x, y, w) in smoothing_arcs(a.tail, a.head, bits[e]) {
            smooth[x] = (y, w);
            smooth[y] = (x, -w);
        }
    }
    let track_edges = len <= 128;
    let mut seen = vec![false; 2 * len];
    let mut loops = Vec::new();
    for start in 0..2 * len {
        if seen[start] {
            continue;
        }
        let mut cusps = 0i64;
        let mut edges = 0u128;
        let mut p = start;
        loop {
            seen[p] = true;
            // skeleton edge from this port to its neighbour
            let slot = p / 2;
            let (q, edge) = if p % 2 == 1 {
                (port(d.next(slot), false), slot)
            } else {
                let pr = d.prev(slot);
                (port(pr, true), pr)
            };
            if track_edges {
                edges ^= 1 << edge;
            }
            seen[q] = true;
            let (r, w) = smooth[q];
            cusps += w;
            p = r;
            if p == start {
                break;
            }
        }
        assert!(cusps % 2 == 0, "cusp totals on a state loop are even");
        loops.push(StateLoop { cusps, edges });
    }
    let empties = d.component_lengths().iter().filter(|&&l| l == 0).count();
    loops.extend((0..empties).map(|_| StateLoop { cusps: 0, edges: 0 }));
    loops
}

/// `K_{|m|/2}` as a monomial (`K_0 = 1`); variable `i − 1` is `K_i`.
fn cusp_monomial(m: i64) -> Monomial {
    let k = (m.abs() / 2) as usize;
    if k == 0 {
        Monomial::one()
    } else {
        Monomial::var(k - 1, 1)
    }
}

/// The state sum by direct enumeration of all `2^n` states.
pub fn arrow_polynomial_by_states(d: &GaussDiagram) -> Poly {
    let n = d.n_arrows();
    assert!(n < 32, "direct enumeration is limited to small diagrams");
    let mut total = Poly::zero();
    let mut bits = vec![false; n];
    for s in 0u64..(1 << n) {
        for (e, b) in bits.iter_mut().enumerate() {
            *b = s >> e & 1 == 1;
        }
        let loops = state_loops(d, &bits);
        let mut m = Monomial::one();
        for l in &loops {
            m = m.mul(&cusp_monomial(l.cusps));
        }
        total.add_term(m, (-2i128).pow(loops.len() as u32 - 1));
    }
    total
}

/// Open path in the frontier: its two end edges and the cusp weight read
/// from the first end to the second.
type Frontier = SmallVec<[(u16, u16, i16); 12]>;

/// Order in which crossings are absorbed. From every possible first
/// crossing, greedily take the one with most edges into the processed
/// region; keep the run whose frontier stays narrowest.
fn crossing_order(d: &GaussDiagram) -> Vec<usize> {
    let n = d.n_arrows();
    let mut best: Option<((usize, usize), Vec<usize>)> = None;
    for first in 0..n {
        let order = greedy_order(d, first);
        let cost = frontier_cost(d, &order);
        if best.as_ref().map_or(true, |(bc, _)| cost < *bc) {
            best = Some((cost, order));
        }
    }
    best.map(|(_, o)| o).unwrap_or_default()
}

fn greedy_order(d: &GaussDiagram, first: usize) -> Vec<usize> {
    let n = d.n_arrows();
    let owner = |slot: usize| d.slot(slot).arrow;
    let mut done = vec![false; n];
    let mut order = Vec::with_capacity(n);
    done[first] = true;
    order.push(first);
    for _ in 1..n {
        let mut best = None;
        for c in (0..n).filter(|&c| !done[c]) {
            let a = d.arrow(c);
            let mut score = 0i32;
            for s in [a.tail, a.head] {
                for o in [d.prev(s), d.next(s)] {
                    let oc = owner(o);
                    score += if oc == c { 0 } else if done[oc] { 1 } else { -1 };
                }
            }
            if best.map_or(true, |(bs, _)| score > bs) {
                best = Some((score, c));
            }
        }
        let c = best.unwrap().1;
        done[c] = true;
        order.push(c);
    }
    order
}

/// Widest frontier along `order`, then the total width, as a cost.
fn frontier_cost(d: &GaussDiagram, order: &[usize]) -> (usize, usize) {
    let mut done = vec![false; d.n_arrows()];
    let (mut widest, mut total) = (0, 0);
    for &c in order {
        done[c] = true;
        let width = (0..d.n_slots())
            .filter(|&p| done[d.slot(p).arrow] != done[d.slot(d.next(p)).arrow])
            .count();
        widest = widest.max(width);
        total += width;
    }
    (widest, total)
}

/// Small multigraph used to absorb one crossing into a frontier state.
/// Link `k` yields half-links `2k` (forward, weight `w`) and `2k + 1`.
#[derive(Default)]
struct LocalGraph {
    nodes: SmallVec<[u16; 16]>,
    inc: SmallVec<[SmallVec<[usize; 2]>; 20]>,
    ends: SmallVec<[(usize, usize, i64); 24]>,
}

impl LocalGraph {
    fn new() -> Self {
        let mut g = LocalGraph::default();
        for _ in 0..4 {
            g.inc.push(SmallVec::new());
        }
        g
    }

    fn edge_node(&mut self, e: u16) -> usize {
        match self.nodes.iter().position(|&x| x == e) {
            Some(i) => 4 + i,
            None => {
                self.nodes.push(e);
                self.inc.push(SmallVec::new());
                3 + self.nodes.len()
            }
        }
    }

    fn link(&mut self, x: usize, y: usize, w: i64) {
        let k = self.ends.len() / 2;
        self.ends.push((x, y, w));
        self.ends.push((y, x, -w));
        self.inc[x].push(2 * k);
        self.inc[y].push(2 * k + 1);
    }

    /// Follows half-links from `h` until reaching a degree-one node or
    /// returning to `h`; returns the end node and accumulated weight.
    fn walk(&self, h0: usize, used: &mut [bool]) -> (usize, i64) {
        let mut h = h0;
        let mut w = 0i64;
        loop {
            used[h / 2] = true;
            let (_, to, hw) = self.ends[h];
            w += hw;
            let back = h ^ 1;
            match self.inc[to].iter().copied().find(|&x| x != back) {
                Some(nh) if nh != h0 && self.inc[to].len() == 2 => h = nh,
                _ => return (to, w),
            }
        }
    }
}

/// Per-frontier accumulator of the crossing sweep.
trait SweepValue: Clone {
    /// The value after closing loops with the given cusp totals, or `None`
    /// if the state no longer contributes.
    fn close(&self, cusps: &[i64]) -> Option<Self>;
    fn add(&mut self, other: Self);
    fn is_zero(&self) -> bool;
}

impl SweepValue for Poly {
    fn close(&self, cusps: &[i64]) -> Option<Self> {
        let mut factor = Monomial::one();
        for &w in cusps {
            factor = factor.mul(&cusp_monomial(w));
        }
        Some(self * &Poly::monomial(factor, (-2i128).pow(cusps.len() as u32)))
    }

    fn add(&mut self, other: Self) {
        *self = &*self + &other;
    }

    fn is_zero(&self) -> bool {
        Poly::is_zero(self)
    }
}

/// Coefficient of the K-free monomial: a loop with nonzero cusp total
/// contributes a `K_i` factor, which no later loop can cancel.
impl SweepValue for i128 {
    fn close(&self, cusps: &[i64]) -> Option<Self> {
        if cusps.iter().any(|&w| w != 0) {
            return None;
        }
        Some(checked(self.checked_mul((-2i128).pow(cusps.len() as u32))))
    }

    fn add(&mut self, other: Self) {
        *self = checked(self.checked_add(other));
    }

    fn is_zero(&self) -> bool {
        *self == 0
    }
}

fn checked(v: Option<i128>) -> i128 {
    v.expect("arrow polynomial coefficient overflow")
}

/// Sweeps crossings, tracking how the partial state connects the skeleton
/// edges on the frontier. Every closed loop contributes `−2·K_{|m|/2}`;
/// the result still carries the extra factor `−2` of the last loop.
fn sweep<V: SweepValue>(d: &GaussDiagram, unit: V) -> Option<V> {
    let empties = d.component_lengths().iter().filter(|&&l| l == 0).count();
    let mut states: FxHashMap<Frontier, V> = FxHashMap::default();
    states.insert(Frontier::new(), unit.close(&vec![0; empties])?);
    let owner = |slot: usize| d.slot(slot).arrow;
    for c in crossing_order(d) {
        let a = d.arrow(c);
        let local_port = |p: usize| -> usize { (if p / 2 == a.tail { 0 } else { 2 }) + p % 2 };
        let mut edges: SmallVec<[usize; 4]> = SmallVec::new();
        for e in [d.prev(a.tail), a.tail, d.prev(a.head), a.head] {
            if !edges.contains(&e) {
                edges.push(e);
            }
        }
        let mut next_states: FxHashMap<Frontier, V> = FxHashMap::default();
        for (fr, value) in &states {
            for dis in [false, true] {
                let mut g = LocalGraph::new();
                for &(x, y, w) in fr.iter() {
                    let (ix, iy) = (g.edge_node(x), g.edge_node(y));
                    g.link(ix, iy, w as i64);
                }
                for &e in &edges {
                    let (s0, s1) = (e, d.next(e));
                    let (p0, p1) = (port(s0, true), port(s1, false));
                    match (owner(s0) == c, owner(s1) == c) {
                        (true, true) => g.link(local_port(p0), local_port(p1), 0),
                        (c0, _) => {
                            let p = if c0 { p0 } else { p1 };
                            let ie = g.edge_node(e as u16);
                            g.link(local_port(p), ie, 0);
                        }
                    }
                }
                for (x, y, w) in smoothing_arcs(a.tail, a.head, dis) {
                    g.link(local_port(x), local_port(y), w);
                }
                let mut used: SmallVec<[bool; 24]> = SmallVec::from_elem(false, g.ends.len() / 2);
                let mut out = Frontier::new();
                for v in 4..g.inc.len() {
                    if g.inc[v].len() != 1 || used[g.inc[v][0] / 2] {
                        continue;
                    }
                    let (end, w) = g.walk(g.inc[v][0], &mut used);
                    let (x, y) = (g.nodes[v - 4], g.nodes[end - 4]);
                    out.push(if x < y { (x, y, w as i16) } else { (y, x, -w as i16) });
                }
                let mut cusps: SmallVec<[i64; 4]> = SmallVec::new();
                for k in 0..used.len() {
                    if !used[k] {
                        let (_, w) = g.walk(2 * k, &mut used);
                        assert!(w % 2 == 0, "cusp totals on a state loop are even");
                        cusps.push(w);
                    }
                }
                let Some(v) = value.close(&cusps) else { continue };
                out.sort_unstable();
                match next_states.get_mut(&out) {
                    Some(q) => q.add(v),
                    None => {
                        next_states.insert(out, v);
                    }
                }
            }
        }
        next_states.retain(|_, v| !v.is_zero());
        states = next_states;
    }
    let total = states.remove(&Frontier::new());
    debug_assert!(states.is_empty());
    total
}

/// The unnormalized arrow polynomial `A(D) = Σ_S (−2)^{|S|−1} ⟨S⟩`.
pub fn arrow_polynomial_raw(d: &GaussDiagram) -> Poly {
    let total = sweep(d, Poly::constant(1)).unwrap_or_default();
    total.div_exact(-2).expect("at least one state loop")
}

/// `Ā(D) = (−1)^{cr} A(D)`, or the raw sum when `normalize` is false.
pub fn arrow_polynomial(d: &GaussDiagram, normalize: bool) -> Poly {
    let p = arrow_polynomial_raw(d);
    if normalize && d.n_arrows() % 2 == 1 {
        -&p
    } else {
        p
    }
}

/// Constant (K-free) part of the arrow polynomial.
pub fn arrow_constant_term(d: &GaussDiagram, normalize: bool) -> i128 {
    let raw = sweep(d, 1i128).unwrap_or(0);
    assert!(raw % 2 == 0, "at least one state loop");
    let c = raw / -2;
    if normalize && d.n_arrows() % 2 == 1 {
        -c
    } else {
        c
    }
}

/// Text form with variables `K1, K2, ...`.
pub fn format_arrow(p: &Poly) -> String {
    p.format_with(&|i| format!("K{}", i + 1), &[], &[])
}

pub fn parse_arrow(text: &str) -> crate::Result<Poly> {
    Poly::parse_with(text, &|s| s.strip_prefix('K')?.parse::<usize>().ok()?.checked_sub(1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gd(s: &str) -> GaussDiagram {
        GaussDiagram::parse(s).unwrap()
    }

    #[test]
    fn unknot_and_unlink() {
        assert_eq!(format_arrow(&arrow_polynomial(&GaussDiagram::unknot(), true)), "1");
        assert_eq!(format_arrow(&arrow_polynomial(&GaussDiagram::unlink(2), true)), "-2");
        assert_eq!(format_arrow(&arrow_polynomial_by_states(&GaussDiagram::unlink(3))), "4");
    }

    #[test]
    fn sweep_matches_direct_enumeration() {
        for code in [
            "O1U2O3U1O2U3",
            "O1O2O3O4O5U1U2U3U5U4",
            "O1U2U1O2",
            "O1O2U2U1",
            "O1U1",
            "O1O2O3U1U2U3",
            "O1O2U1O3U2U3",
        ] {
            let d = gd(code);
            assert_eq!(arrow_polynomial_raw(&d), arrow_polynomial_by_states(&d), "{code}");
            let c = d.cable(2);
            assert_eq!(arrow_polynomial_raw(&c), arrow_polynomial_by_states(&c), "cable {code}");
        }
    }

    #[test]
    fn kinks_and_bigons_are_invisible_after_normalization() {
        let u = GaussDiagram::unknot();
        for code in ["O1U1", "U1O1", "O1U2U1O2", "O1O2U2U1"] {
            assert_eq!(arrow_polynomial(&gd(code), true), arrow_polynomial(&u, true), "{code}");
        }
    }

    #[test]
    fn constant_term_sweep_matches_full_polynomial() {
        for code in ["O1O2O3U1U3U2", "O1O2O3O4U1U3U4U2", "O1U2O3U1O2U3", "O1O2U1O3U2U3"] {
            let d = GaussDiagram::parse(code).unwrap();
            for e in [d.clone(), d.cable(2), GaussDiagram::unlink(3)] {
                for normalize in [false, true] {
                    assert_eq!(
                        arrow_constant_term(&e, normalize),
                        arrow_polynomial(&e, normalize).constant_term(),
                        "{code}"
                    );
                }
            }
        }
    }

    #[test]
    fn text_round_trip() {
        let p = parse_arrow("2*K1^2 - K2").unwrap();
        assert_eq!(format_arrow(&p), "2*K1^2 - K2");
    }
}
