//! Enumeration of minimal diagrams and grouping into sibling classes.

use rustc_hash::FxHashSet;

use crate::gauss::{Endpoint, GaussDiagram};
use crate::moves::{diagram_key, has_reducing_site, walk_r3_orbit, CanonicalKey, SymmetryType};

/// Which knots to enumerate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClassFilter {
    All,
    Checkerboard,
    AlmostClassical,
}

impl ClassFilter {
    pub fn accepts(self, d: &GaussDiagram) -> bool {
        match self {
            ClassFilter::All => true,
            ClassFilter::Checkerboard => d.is_checkerboard_colorable(),
            ClassFilter::AlmostClassical => d.is_almost_classical(),
        }
    }

    /// Name prefix used in the table ("", "cc", "ac").
    pub fn prefix(self) -> &'static str {
        match self {
            ClassFilter::All => "",
            ClassFilter::Checkerboard => "cc",
            ClassFilter::AlmostClassical => "ac",
        }
    }
}

/// One flat knot up to symmetry: the sibling class `{α, −α, α*, −α*}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KnotClass {
    /// Least key among the four siblings; the table sort key.
    pub key: CanonicalKey,
    /// Minimal diagram of the least sibling, in key rotation.
    pub diagram: GaussDiagram,
    /// Orbit keys of `[α, −α, α*, −α*]` with `α` the stored sibling.
    pub sibling_keys: [CanonicalKey; 4],
    pub symmetry: SymmetryType,
}

impl KnotClass {
    pub fn crossings(&self) -> usize {
        self.diagram.n_arrows()
    }
}

/// All length-`2n` words with `n` O's and `n` U's that are least among
/// their cyclic rotations (O < U), in lexicographic order. Words are
/// returned as `false` = O, `true` = U.
pub fn lyndon_words(n: usize) -> Vec<Vec<bool>> {
    fn rec(word: &mut Vec<bool>, o: usize, u: usize, out: &mut Vec<Vec<bool>>) {
        if o == 0 && u == 0 {
            if is_least_rotation(word) {
                out.push(word.clone());
            }
            return;
        }
        // Any least rotation of a non-empty balanced word starts with O
        // and ends with U, so prune early.
        if o > 0 {
            word.push(false);
            rec(word, o - 1, u, out);
            word.pop();
        }
        if u > 0 && !word.is_empty() {
            word.push(true);
            rec(word, o, u - 1, out);
            word.pop();
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(2 * n), n, n, &mut out);
    out
}

pub fn word_string(word: &[bool]) -> String {
    word.iter().map(|&h| if h { 'U' } else { 'O' }).collect()
}

fn is_least_rotation(w: &[bool]) -> bool {
    let n = w.len();
    (1..n).all(|r| {
        for i in 0..n {
            let a = w[i];
            let b = w[(i + r) % n];
            if a != b {
                return !a;
            }
        }
        true
    })
}

/// Advances to the next permutation in lexicographic order.
fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Deduplicating collector of minimal R3 orbits and their siblings.
struct Collector {
    seen: FxHashSet<CanonicalKey>,
    classes: Vec<KnotClass>,
}

impl Collector {
    fn new() -> Self {
        Collector {
            seen: FxHashSet::default(),
            classes: Vec::new(),
        }
    }

    fn offer(&mut self, d: &GaussDiagram) {
        if has_reducing_site(d) {
            return;
        }
        if self.seen.contains(&diagram_key(d)) {
            return;
        }
        let mut members = Vec::new();
        let mut minimal = true;
        walk_r3_orbit(d, |m, k| {
            if minimal && has_reducing_site(m) {
                minimal = false;
            }
            members.push((m.clone(), k.clone()));
            true
        });
        let mut best: [Option<CanonicalKey>; 4] = Default::default();
        for (m, k) in &members {
            let r = m.reverse();
            let ks = [
                k.clone(),
                diagram_key(&r),
                diagram_key(&m.mirror()),
                diagram_key(&r.mirror()),
            ];
            for (b, k) in best.iter_mut().zip(ks) {
                if b.as_ref().map_or(true, |x| k < *x) {
                    *b = Some(k.clone());
                }
                self.seen.insert(k);
            }
        }
        if !minimal {
            return;
        }
        let keys = best.map(|k| k.unwrap());
        let least = (0..4).min_by(|&a, &b| keys[a].cmp(&keys[b])).unwrap();
        // Re-express the sibling keys relative to the least sibling: the
        // siblings form the Klein four-group, so index xor permutes them.
        let sibling_keys: [CanonicalKey; 4] =
            std::array::from_fn(|i| keys[i ^ least].clone());
        let symmetry = SymmetryType::from_equalities(
            sibling_keys[0] == sibling_keys[1],
            sibling_keys[0] == sibling_keys[2],
            sibling_keys[0] == sibling_keys[3],
        );
        self.classes.push(KnotClass {
            key: sibling_keys[0].clone(),
            diagram: sibling_keys[0].diagram(),
            sibling_keys,
            symmetry,
        });
    }

    fn finish(mut self) -> Vec<KnotClass> {
        self.classes.sort_by(|a, b| a.key.cmp(&b.key));
        self.classes
    }
}

/// Every flat knot with exactly `n` crossings passing `filter`, sorted by
/// class key. The general path runs over all Lyndon words and matchings;
/// the checkerboard and almost classical paths generate only diagrams
/// whose arrows join slots of opposite parity (every index even) and
/// filter on the predicate.
pub fn enumerate_knots(n: usize, filter: ClassFilter) -> Vec<KnotClass> {
    if n == 0 {
        let u = GaussDiagram::unknot();
        let k = CanonicalKey::empty();
        return vec![KnotClass {
            key: k.clone(),
            diagram: u,
            sibling_keys: [k.clone(), k.clone(), k.clone(), k],
            symmetry: SymmetryType::FullyAchiral,
        }];
    }
    match filter {
        ClassFilter::All => enumerate_by_words(n, filter),
        _ => enumerate_by_parity(n, filter),
    }
}

/// Full enumeration over Lyndon words, keeping knots passing `filter`.
pub fn enumerate_by_words(n: usize, filter: ClassFilter) -> Vec<KnotClass> {
    let mut col = Collector::new();
    let mut raw = vec![Endpoint { arrow: 0, head: false }; 2 * n];
    for word in lyndon_words(n) {
        let mut perm: Vec<usize> = (0..n).collect();
        loop {
            let (mut o, mut u) = (0, 0);
            for (slot, &head) in raw.iter_mut().zip(&word) {
                *slot = if head {
                    u += 1;
                    Endpoint { arrow: perm[u - 1], head: true }
                } else {
                    o += 1;
                    Endpoint { arrow: o - 1, head: false }
                };
            }
            let d = GaussDiagram::from_raw(vec![2 * n], &raw);
            if filter.accepts(&d) {
                col.offer(&d);
            }
            if !next_permutation(&mut perm) {
                break;
            }
        }
    }
    col.finish()
}

/// Enumeration restricted to diagrams with all indices even: arrow `k`
/// joins even slot `2k` to an odd slot, in either direction.
pub fn enumerate_by_parity(n: usize, filter: ClassFilter) -> Vec<KnotClass> {
    let mut col = Collector::new();
    let len = 2 * n;
    let mut raw = vec![Endpoint { arrow: 0, head: false }; len];
    let mut perm: Vec<usize> = (0..n).collect();
    let mut idx = vec![0i32; n];
    loop {
        // Skip matchings with an arrow between cyclically adjacent slots:
        // such diagrams always admit an R1 removal.
        let adjacent = perm.iter().enumerate().any(|(k, &j)| {
            let e = 2 * k;
            let o = 2 * j + 1;
            o == e + 1 || (e == 0 && o == len - 1) || o + 1 == e
        });
        if !adjacent {
            for dirs in 0u32..(1 << n) {
                for k in 0..n {
                    let flip = dirs >> k & 1 == 1;
                    raw[2 * k] = Endpoint { arrow: k, head: flip };
                    raw[2 * perm[k] + 1] = Endpoint { arrow: k, head: !flip };
                }
                if filter == ClassFilter::AlmostClassical && !all_indices_zero(&raw, &mut idx) {
                    continue;
                }
                let d = GaussDiagram::from_raw(vec![len], &raw);
                if filter.accepts(&d) {
                    col.offer(&d);
                }
            }
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    col.finish()
}

/// Fast almost-classical test on a raw single-circle slot sequence.
fn all_indices_zero(raw: &[Endpoint], after_tail: &mut [i32]) -> bool {
    // With prefix sums S, the index of an arrow is S(h) - S(t+1) taken
    // cyclically; it vanishes iff S(t+1) == S(h) (mod the total, which is 0).
    let mut s = 0i32;
    let mut at_head = [0i32; 64];
    for e in raw {
        if e.head {
            at_head[e.arrow] = s;
            s -= 1;
        } else {
            s += 1;
            after_tail[e.arrow] = s;
        }
    }
    after_tail.iter().zip(&at_head).all(|(a, h)| a == h)
}
