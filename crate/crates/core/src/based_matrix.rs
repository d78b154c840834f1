//! Based matrices: construction from diagrams, primitive reduction, the φ
//! invariant, characteristic polynomials and the algebraic genus.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::gauss::{Endpoint, GaussDiagram, Symmetry};
use crate::polynomials::poly::{Monomial, Poly};
use crate::surface::{arrow_loop, core_loop, CarterSurface};

/// Skew-symmetric integer matrix whose row and column 0 belong to the core
/// element `s`; rows `1..` are arrows (or reduced generators).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BasedMatrix {
    pub rows: Vec<Vec<i64>>,
}

impl BasedMatrix {
    pub fn new(rows: Vec<Vec<i64>>) -> Self {
        let m = BasedMatrix { rows };
        debug_assert!(m.is_skew());
        m
    }

    pub fn trivial() -> Self {
        BasedMatrix { rows: vec![vec![0]] }
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.rows[i][j]
    }

    pub fn is_skew(&self) -> bool {
        let n = self.size();
        self.rows.iter().all(|r| r.len() == n)
            && (0..n).all(|i| (0..n).all(|j| self.rows[i][j] == -self.rows[j][i]))
    }

    pub fn is_trivial(&self) -> bool {
        self.size() == 1
    }

    /// Keeps the core and the listed generators, in that order.
    pub fn submatrix(&self, keep: &[usize]) -> BasedMatrix {
        let idx: Vec<usize> = std::iter::once(0).chain(keep.iter().copied()).collect();
        BasedMatrix {
            rows: idx
                .iter()
                .map(|&i| idx.iter().map(|&j| self.rows[i][j]).collect())
                .collect(),
        }
    }
}

impl fmt::Display for BasedMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            let cells: Vec<String> = r.iter().map(|x| format!("{x:>3}")).collect();
            write!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

/// Based matrix of a knot diagram: intersection numbers of the core and
/// the arrow loops `e+`, arrows in diagram order. Entry `(i, j)` is the
/// pairing of loop `i` with loop `j`, so `(e, 0)` is the index `n(e)`.
pub fn based_matrix(d: &GaussDiagram) -> Result<BasedMatrix> {
    d.require_knot()?;
    let s = CarterSurface::new(d);
    let loops: Vec<_> = std::iter::once(core_loop(d, 0))
        .chain((0..d.n_arrows()).map(|e| arrow_loop(d, e)))
        .collect();
    let n = loops.len();
    let mut rows = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let v = s.intersection_pairing(&loops[i], &loops[j])?;
            rows[i][j] = v;
            rows[j][i] = -v;
        }
    }
    Ok(BasedMatrix::new(rows))
}

/// Based matrix from the chord combinatorics alone: with `e+` the open arc
/// from the tail of `e` to its head,
/// `b(e,f) = Σ_c ([t_c∈e+][h_c∈f+] − [h_c∈e+][t_c∈f+]) + [h_e∈f+] − [t_e∈f+]`
/// and `b(e, s) = n(e)`.
pub fn based_matrix_combinatorial(d: &GaussDiagram) -> Result<BasedMatrix> {
    d.require_knot()?;
    let n = d.n_arrows();
    let len = d.n_slots();
    let arcs: Vec<Vec<bool>> = d
        .arrows()
        .iter()
        .map(|a| {
            let mut v = vec![false; len];
            let mut p = d.next(a.tail);
            while p != a.head {
                v[p] = true;
                p = d.next(p);
            }
            v
        })
        .collect();
    let idx = d.arrow_indices();
    let mut rows = vec![vec![0i64; n + 1]; n + 1];
    for e in 0..n {
        rows[e + 1][0] = idx[e] as i64;
        rows[0][e + 1] = -(idx[e] as i64);
        for f in 0..n {
            if e == f {
                continue;
            }
            let (xe, xf) = (&arcs[e], &arcs[f]);
            let mut b = 0i64;
            for c in d.arrows() {
                b += (xe[c.tail] && xf[c.head]) as i64 - (xe[c.head] && xf[c.tail]) as i64;
            }
            let ae = d.arrow(e);
            b += xf[ae.head] as i64 - xf[ae.tail] as i64;
            rows[e + 1][f + 1] = b;
        }
    }
    Ok(BasedMatrix::new(rows))
}

/// Why a generator was removed during primitive reduction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reduction {
    Annihilating(usize),
    Core(usize),
    Complementary(usize, usize),
}

/// One reduction step on the current generator list (indices into `t`),
/// annihilating elements first, then core elements, then the
/// lexicographically least complementary pair.
fn reduction_step(t: &BasedMatrix, gens: &[usize]) -> Option<Reduction> {
    let full: Vec<usize> = std::iter::once(0).chain(gens.iter().copied()).collect();
    let b = |x: usize, y: usize| t.rows[x][y];
    if let Some(&x) = gens.iter().find(|&&x| full.iter().all(|&y| b(x, y) == 0)) {
        return Some(Reduction::Annihilating(x));
    }
    if let Some(&x) = gens.iter().find(|&&x| full.iter().all(|&y| b(x, y) == b(0, y))) {
        return Some(Reduction::Core(x));
    }
    for (i, &x) in gens.iter().enumerate() {
        for &y in &gens[i + 1..] {
            if full.iter().all(|&z| b(x, z) + b(y, z) == b(0, z)) {
                return Some(Reduction::Complementary(x, y));
            }
        }
    }
    None
}

/// Removes annihilating, core and complementary elements until none
/// remain; returns the primitive matrix and the surviving generators.
pub fn primitive_reduce_with_gens(t: &BasedMatrix) -> (BasedMatrix, Vec<usize>) {
    let mut gens: Vec<usize> = (1..t.size()).collect();
    while let Some(step) = reduction_step(t, &gens) {
        match step {
            Reduction::Annihilating(x) | Reduction::Core(x) => gens.retain(|&g| g != x),
            Reduction::Complementary(x, y) => gens.retain(|&g| g != x && g != y),
        }
    }
    (t.submatrix(&gens), gens)
}

pub fn primitive_reduce(t: &BasedMatrix) -> BasedMatrix {
    primitive_reduce_with_gens(t).0
}

pub fn is_primitive(t: &BasedMatrix) -> bool {
    let gens: Vec<usize> = (1..t.size()).collect();
    reduction_step(t, &gens).is_none()
}

/// Entries below the diagonal read column by column.
pub fn phi_reading(t: &BasedMatrix) -> Vec<i64> {
    let n = t.size();
    let mut out = Vec::with_capacity(n * (n - 1) / 2);
    for j in 0..n {
        for i in j + 1..n {
            out.push(t.rows[i][j]);
        }
    }
    out
}

/// Lexicographically least reading over all orderings of the generators.
/// The first column forces the generators into increasing order of
/// `b(x, s)`, so only orderings within blocks of equal first-column value
/// are searched, with branch-and-bound on the partial reading.
pub fn phi_of_matrix(t: &BasedMatrix) -> Vec<i64> {
    let m = t.size() - 1;
    if m == 0 {
        return Vec::new();
    }
    let mut gens: Vec<usize> = (1..=m).collect();
    gens.sort_by_key(|&g| t.rows[g][0]);
    let col0: Vec<i64> = gens.iter().map(|&g| t.rows[g][0]).collect();
    let mut best: Option<Vec<i64>> = None;
    // Positions are filled in order; once positions 0..k are fixed, the
    // entries (i, j) with j < i < k are known. Compare them in reading
    // order restricted to known ones only when the whole prefix of the
    // reading is known: the reading's column j needs all rows > j, so we
    // simply evaluate complete orderings but prune on column 0 structure.
    let mut order: Vec<usize> = Vec::with_capacity(m);
    let mut used = vec![false; m + 1];
    fn rec(
        t: &BasedMatrix,
        col0: &[i64],
        order: &mut Vec<usize>,
        used: &mut [bool],
        best: &mut Option<Vec<i64>>,
    ) {
        let m = col0.len();
        if order.len() == m {
            let full: Vec<usize> = std::iter::once(0).chain(order.iter().copied()).collect();
            let mut v = Vec::with_capacity(m * (m + 1) / 2);
            for j in 0..=m {
                for i in j + 1..=m {
                    v.push(t.rows[full[i]][full[j]]);
                }
            }
            if best.as_ref().map_or(true, |b| v < *b) {
                *best = Some(v);
            }
            return;
        }
        let want = col0[order.len()];
        for g in 1..=m {
            if !used[g] && t.rows[g][0] == want {
                used[g] = true;
                order.push(g);
                rec(t, col0, order, used, best);
                order.pop();
                used[g] = false;
            }
        }
    }
    rec(t, &col0, &mut order, &mut used, &mut best);
    best.unwrap()
}

/// φ of a knot diagram: least reading of its primitive based matrix.
pub fn phi_invariant(d: &GaussDiagram) -> Result<Vec<i64>> {
    Ok(phi_of_matrix(&primitive_reduce(&based_matrix(d)?)))
}

/// φ up to symmetry: the least φ over the four siblings `α, −α, α*, −α*`.
/// Unlike [`phi_invariant`] this does not depend on which sibling `d` is.
pub fn phi_up_to_symmetry(d: &GaussDiagram) -> Result<Vec<i64>> {
    let mut best = phi_invariant(d)?;
    for kind in [Symmetry::Reverse, Symmetry::Mirror, Symmetry::ReverseMirror] {
        best = best.min(phi_invariant(&d.symmetry_transform(kind))?);
    }
    Ok(best)
}

/// Characteristic polynomial `det(tI − A)` (variable index 0 is `t`), by
/// the Faddeev–LeVerrier recursion with exact integer division.
pub fn char_poly(a: &[Vec<i64>]) -> Poly {
    let n = a.len();
    let a: Vec<Vec<i128>> = a.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mul = |x: &Vec<Vec<i128>>, y: &Vec<Vec<i128>>| -> Vec<Vec<i128>> {
        let mut r = vec![vec![0i128; n]; n];
        for i in 0..n {
            for k in 0..n {
                if x[i][k] == 0 {
                    continue;
                }
                for j in 0..n {
                    r[i][j] = r[i][j]
                        .checked_add(x[i][k].checked_mul(y[k][j]).expect("overflow"))
                        .expect("overflow");
                }
            }
        }
        r
    };
    // c[k] is the coefficient of t^(n-k)
    let mut c = vec![0i128; n + 1];
    c[0] = 1;
    let mut m = vec![vec![0i128; n]; n]; // M_0 = 0
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{k-1} I
        let mut mk = mul(&a, &m);
        for (i, row) in mk.iter_mut().enumerate() {
            row[i] += c[k - 1];
        }
        let am = mul(&a, &mk);
        let tr: i128 = (0..n).map(|i| am[i][i]).sum();
        assert_eq!(tr % k as i128, 0, "Faddeev–LeVerrier division must be exact");
        c[k] = -tr / k as i128;
        m = mk;
    }
    let mut p = Poly::zero();
    for (k, &ck) in c.iter().enumerate() {
        p.add_term(Monomial::var(0, (n - k) as u16), ck);
    }
    p
}

/// Inner and outer characteristic polynomials `p = det(tI − T̂)` (core
/// row and column removed) and `P = det(tI − T)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharPolyPair {
    pub inner: Poly,
    pub outer: Poly,
}

pub fn characteristic_polynomials(t: &BasedMatrix) -> CharPolyPair {
    let inner_rows: Vec<Vec<i64>> = t.rows[1..].iter().map(|r| r[1..].to_vec()).collect();
    CharPolyPair {
        inner: char_poly(&inner_rows),
        outer: char_poly(&t.rows),
    }
}

pub fn format_t_poly(p: &Poly) -> String {
    p.format_with(&|_| "t".to_string(), &[0], &[0])
}

/// Rank over the rationals via fraction-free (Bareiss) elimination.
pub fn integer_rank(a: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<i128>> = a.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut rank = 0;
    let mut prev = 1i128;
    for col in 0..cols {
        let Some(p) = (rank..rows).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(rank, p);
        for r in rank + 1..rows {
            for c in col + 1..cols {
                let v = m[rank][col]
                    .checked_mul(m[r][c])
                    .and_then(|x| x.checked_sub(m[r][col].checked_mul(m[rank][c])?))
                    .expect("rank overflow");
                m[r][c] = v / prev;
            }
            m[r][col] = 0;
        }
        prev = m[rank][col];
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Partition of the generators `1..=n` into blocks of size one or two.
pub type Filling = Vec<Vec<usize>>;

/// Calls `f` on every filling of `1..=n`, in canonical order (each block
/// starts with the least unassigned generator).
pub fn for_each_filling(n: usize, mut f: impl FnMut(&Filling)) {
    fn rec(free: &mut Vec<usize>, cur: &mut Filling, f: &mut dyn FnMut(&Filling)) {
        if free.is_empty() {
            f(cur);
            return;
        }
        let x = free.remove(0);
        cur.push(vec![x]);
        rec(free, cur, f);
        cur.pop();
        for i in 0..free.len() {
            let y = free.remove(i);
            cur.push(vec![x, y]);
            rec(free, cur, f);
            cur.pop();
            free.insert(i, y);
        }
        free.insert(0, x);
    }
    let mut free: Vec<usize> = (1..=n).collect();
    rec(&mut free, &mut Vec::new(), &mut f);
}

/// The matrix of a filling: each block becomes one generator whose row is
/// the sum of its members' rows; the core row is kept.
pub fn filled_matrix(t: &BasedMatrix, filling: &Filling) -> Vec<Vec<i64>> {
    let blocks: Vec<Vec<usize>> = std::iter::once(vec![0]).chain(filling.iter().cloned()).collect();
    blocks
        .iter()
        .map(|a| {
            blocks
                .iter()
                .map(|b| a.iter().flat_map(|&x| b.iter().map(move |&y| (x, y))).map(|(x, y)| t.rows[x][y]).sum())
                .collect()
        })
        .collect()
}

/// Half the least rank over all fillings, with a filling attaining it.
pub fn algebraic_genus_with_witness(t: &BasedMatrix) -> (usize, Filling) {
    let n = t.size() - 1;
    let mut best = usize::MAX;
    let mut witness = Vec::new();
    for_each_filling(n, |fl| {
        if best == 0 {
            return;
        }
        let r = integer_rank(&filled_matrix(t, fl));
        if r < best {
            best = r;
            witness = fl.clone();
        }
    });
    debug_assert!(best % 2 == 0, "skew-symmetric ranks are even");
    (best / 2, witness)
}

pub fn algebraic_genus(t: &BasedMatrix) -> usize {
    algebraic_genus_with_witness(t).0
}

/// Finds a knot diagram realizing `t`: returns the diagram and, for each
/// of its arrows (in diagram order), the row of `t` it corresponds to.
/// Slots are placed one at a time, opening a new arrow or closing an open
/// one; a row is chosen for an arrow when it closes. Once two arrows are
/// closed their entry is fixed (unplaced slots lie outside every closed
/// arc or inside every wrapped one), so mismatches prune early. With
/// `ordered`, row `i` must be the `i`-th arrow to appear.
pub fn realize(t: &BasedMatrix, ordered: bool) -> Option<(GaussDiagram, Vec<usize>)> {
    let n = t.size() - 1;
    if n == 0 {
        return Some((GaussDiagram::unknot(), Vec::new()));
    }
    if !t.is_skew() {
        return None;
    }
    const NONE: usize = usize::MAX;
    struct State<'a> {
        t: &'a BasedMatrix,
        n: usize,
        slots: Vec<Endpoint>,
        first: Vec<usize>,
        second: Vec<usize>,
        label: Vec<usize>,
        used: Vec<bool>,
        closed: Vec<usize>,
        opened: usize,
        ordered: bool,
    }
    impl State<'_> {
        fn tail(&self, c: usize) -> usize {
            if self.slots[self.first[c]].head { self.second[c] } else { self.first[c] }
        }
        fn head(&self, c: usize) -> usize {
            if self.slots[self.first[c]].head { self.first[c] } else { self.second[c] }
        }
        /// Indicator of the arc `e+` at `slot` (`NONE` = any unplaced slot).
        fn arc_at(&self, e: usize, slot: usize) -> i64 {
            let (a, b) = (self.first[e], self.second[e]);
            let tail_first = !self.slots[a].head;
            let inside = slot != NONE && slot > a && slot < b;
            match (tail_first, inside) {
                (true, x) => x as i64,
                (false, x) => (!x && slot != a && slot != b) as i64,
            }
        }
        fn check(&self, e: usize) -> bool {
            let len = self.slots.len();
            let typ = |p: usize| if self.slots[p].head { -1 } else { 1 };
            // unplaced slots carry the opposite of the placed type total and
            // lie inside the arc exactly when it wraps
            let placed: i64 = (0..len).map(typ).sum();
            let idx: i64 = (0..len).map(|p| self.arc_at(e, p) * typ(p)).sum::<i64>()
                - self.arc_at(e, NONE) * placed;
            if idx != self.t.rows[self.label[e]][0] {
                return false;
            }
            for &f in &self.closed {
                if f == e {
                    continue;
                }
                for (x, y) in [(e, f), (f, e)] {
                    let mut b = 0i64;
                    for c in 0..self.opened {
                        let (tc, hc) = if self.second[c] == NONE {
                            if self.slots[self.first[c]].head { (NONE, self.first[c]) } else { (self.first[c], NONE) }
                        } else {
                            (self.tail(c), self.head(c))
                        };
                        b += self.arc_at(x, tc) * self.arc_at(y, hc) - self.arc_at(x, hc) * self.arc_at(y, tc);
                    }
                    b += self.arc_at(y, self.head(x)) - self.arc_at(y, self.tail(x));
                    if b != self.t.rows[self.label[x]][self.label[y]] {
                        return false;
                    }
                }
            }
            true
        }
        fn rec(&mut self) -> bool {
            let len = 2 * self.n;
            let pos = self.slots.len();
            if pos == len {
                return true;
            }
            let open: Vec<usize> = (0..self.opened).filter(|&e| self.second[e] == NONE).collect();
            for &e in &open {
                let head = !self.slots[self.first[e]].head;
                self.slots.push(Endpoint { arrow: e, head });
                self.second[e] = pos;
                self.closed.push(e);
                let rows: Vec<usize> = if self.ordered {
                    vec![e + 1]
                } else {
                    (1..=self.n).filter(|&r| !self.used[r]).collect()
                };
                for r in rows {
                    self.label[e] = r;
                    self.used[r] = true;
                    if self.check(e) && self.rec() {
                        return true;
                    }
                    self.used[r] = false;
                }
                self.closed.pop();
                self.second[e] = NONE;
                self.slots.pop();
            }
            if self.opened < self.n && len - pos > open.len() + 1 {
                let e = self.opened;
                for head in [false, true] {
                    self.slots.push(Endpoint { arrow: e, head });
                    self.first[e] = pos;
                    self.opened += 1;
                    if self.rec() {
                        return true;
                    }
                    self.opened -= 1;
                    self.first[e] = NONE;
                    self.slots.pop();
                }
            }
            false
        }
    }
    let mut st = State {
        t,
        n,
        slots: Vec::with_capacity(2 * n),
        first: vec![NONE; n],
        second: vec![NONE; n],
        label: vec![0; n],
        used: vec![false; n + 1],
        closed: Vec::new(),
        opened: 0,
        ordered,
    };
    if !st.rec() {
        return None;
    }
    let d = GaussDiagram::from_raw(vec![2 * n], &st.slots);
    Some((d, st.label))
}

/// Whether `d`'s based matrix equals `t` after relabelling rows by `rows`.
pub fn matches_with_labels(d: &GaussDiagram, rows: &[usize], t: &BasedMatrix) -> bool {
    let Ok(m) = based_matrix(d) else { return false };
    if m.size() != t.size() {
        return false;
    }
    let lab = |i: usize| if i == 0 { 0 } else { rows[i - 1] };
    (0..m.size()).all(|i| (0..m.size()).all(|j| m.rows[i][j] == t.rows[lab(i)][lab(j)]))
}
