//! The Carter surface of a diagram as a ribbon graph.
//!
//! Vertices are crossings, edges are the skeleton arcs (edge `p` runs from
//! slot `p` to the next slot), and a crossing-free circle gets a dummy
//! vertex carrying one loop edge. Half-edge `2e` starts edge `e` and
//! `2e + 1` ends it. At the crossing of an arrow with tail slot `t` and
//! head slot `h` the counter-clockwise rotation is
//! `(in(t), in(h), out(t), out(h))`: the head strand crosses the tail
//! strand from its right to its left.

use crate::error::{Error, Result};
use crate::gauss::GaussDiagram;
use crate::gf2::Echelon;

/// A homology class in `H_1(Σ; Z/2)`, as coordinates in the surface's
/// fixed basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct HomClass {
    pub bits: u64,
    pub dim: usize,
}

impl HomClass {
    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    pub fn add(self, other: HomClass) -> HomClass {
        debug_assert_eq!(self.dim, other.dim);
        HomClass {
            bits: self.bits ^ other.bits,
            dim: self.dim,
        }
    }
}

/// One passage of a loop through a vertex: it arrives along half-edge
/// `inn` and leaves along half-edge `out`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Corner {
    pub vertex: usize,
    pub inn: usize,
    pub out: usize,
}

/// A closed walk given by its cyclic sequence of vertex passages. The walk
/// runs from each corner's `out` half-edge along that edge to the next
/// corner's `inn` half-edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Loop {
    pub corners: Vec<Corner>,
}

#[derive(Clone, Debug)]
pub struct CarterSurface {
    pub n_vertices: usize,
    pub n_edges: usize,
    pub n_faces: usize,
    /// Total genus (sum over connected pieces).
    pub genus: usize,
    pub n_pieces: usize,
    /// Faces as cyclic lists of half-edges leaving their vertex.
    pub faces: Vec<Vec<usize>>,
    /// Vertex of each half-edge.
    pub he_vertex: Vec<usize>,
    /// Position (0..4, or 0..2 for dummy vertices) in the vertex rotation.
    pub he_angle: Vec<usize>,
    rotation: Vec<Vec<usize>>,
    boundaries: Echelon,
    classes: Echelon,
    pub core_class: HomClass,
    pub core_edges: u128,
}

fn in_he(d: &GaussDiagram, p: usize) -> usize {
    2 * d.prev(p) + 1
}

fn out_he(p: usize) -> usize {
    2 * p
}

impl CarterSurface {
    pub fn new(d: &GaussDiagram) -> Self {
        let n = d.n_arrows();
        let empties: Vec<usize> = d
            .component_lengths()
            .iter()
            .enumerate()
            .filter(|(_, &l)| l == 0)
            .map(|(c, _)| c)
            .collect();
        let n_edges = 2 * n + empties.len();
        assert!(n_edges <= 128, "edge bitsets hold at most 128 edges");
        let n_vertices = n + empties.len();
        let mut he_vertex = vec![0; 2 * n_edges];
        let mut he_angle = vec![0; 2 * n_edges];
        let mut rotation = Vec::with_capacity(n_vertices);
        for (c, a) in d.arrows().iter().enumerate() {
            let rot = vec![in_he(d, a.tail), in_he(d, a.head), out_he(a.tail), out_he(a.head)];
            for (k, &h) in rot.iter().enumerate() {
                he_vertex[h] = c;
                he_angle[h] = k;
            }
            rotation.push(rot);
        }
        for (i, _) in empties.iter().enumerate() {
            let e = 2 * n + i;
            let v = n + i;
            let rot = vec![2 * e + 1, 2 * e];
            for (k, &h) in rot.iter().enumerate() {
                he_vertex[h] = v;
                he_angle[h] = k;
            }
            rotation.push(rot);
        }
        let succ = |h: usize| -> usize {
            let rot = &rotation[he_vertex[h]];
            rot[(he_angle[h] + 1) % rot.len()]
        };
        // faces
        let mut seen = vec![false; 2 * n_edges];
        let mut faces = Vec::new();
        let mut boundaries = Echelon::new();
        for start in 0..2 * n_edges {
            if seen[start] {
                continue;
            }
            let mut face = Vec::new();
            let mut edges = 0u128;
            let mut h = start;
            while !seen[h] {
                seen[h] = true;
                face.push(h);
                edges ^= 1u128 << (h / 2);
                h = succ(h ^ 1);
            }
            boundaries.insert(edges);
            faces.push(face);
        }
        // connected pieces via union-find on vertices
        let mut parent: Vec<usize> = (0..n_vertices).collect();
        fn find(p: &mut Vec<usize>, x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let nx = p[y];
                p[y] = r;
                y = nx;
            }
            r
        }
        let mut tree_edges = vec![false; n_edges];
        for e in 0..n_edges {
            let a = find(&mut parent, he_vertex[2 * e]);
            let b = find(&mut parent, he_vertex[2 * e + 1]);
            if a != b {
                parent[a] = b;
                tree_edges[e] = true;
            }
        }
        let n_pieces = (0..n_vertices)
            .filter(|&v| find(&mut parent, v) == v)
            .count();
        let chi = n_vertices as isize - n_edges as isize + faces.len() as isize;
        let twice_genus = 2 * n_pieces as isize - chi;
        assert!(twice_genus >= 0 && twice_genus % 2 == 0, "Euler characteristic parity");
        let genus = (twice_genus / 2) as usize;

        // H1 basis: fundamental cycles of a spanning forest, kept when
        // independent of the face boundaries.
        let mut classes = boundaries.clone();
        let mut dim = 0;
        for e in 0..n_edges {
            if tree_edges[e] {
                continue;
            }
            let cyc = fundamental_cycle(e, &he_vertex, &tree_edges, n_vertices);
            if classes.insert_tagged(cyc, 1u64 << dim) {
                dim += 1;
            }
        }
        assert_eq!(dim, 2 * genus, "homology dimension must equal 2g");
        assert!(dim <= 64, "homology classes hold at most 64 coordinates");

        let core_edges = (0..n_edges).fold(0u128, |acc, e| acc ^ (1u128 << e));
        let mut s = CarterSurface {
            n_vertices,
            n_edges,
            n_faces: faces.len(),
            genus,
            n_pieces,
            faces,
            he_vertex,
            he_angle,
            rotation,
            boundaries,
            classes,
            core_class: HomClass::default(),
            core_edges,
        };
        s.core_class = s.edge_class(core_edges).expect("the skeleton is closed");
        s
    }

    pub fn euler_characteristic(&self) -> isize {
        self.n_vertices as isize - self.n_edges as isize + self.n_faces as isize
    }

    pub fn h1_dim(&self) -> usize {
        2 * self.genus
    }

    /// Boundary of an edge set mod 2: true if every vertex has even degree.
    fn is_cycle(&self, edges: u128) -> bool {
        let mut deg = vec![0u8; self.n_vertices];
        for e in 0..self.n_edges {
            if edges >> e & 1 == 1 {
                deg[self.he_vertex[2 * e]] ^= 1;
                deg[self.he_vertex[2 * e + 1]] ^= 1;
            }
        }
        deg.iter().all(|&x| x == 0)
    }

    /// Class of a mod-2 edge cycle.
    pub fn edge_class(&self, edges: u128) -> Result<HomClass> {
        if !self.is_cycle(edges) {
            return Err(Error::OpenWalk("edge set has odd-degree vertices".into()));
        }
        let (res, tag) = self.classes.reduce_tagged(edges, 0);
        debug_assert_eq!(res, 0);
        Ok(HomClass {
            bits: tag,
            dim: self.h1_dim(),
        })
    }

    /// Whether a mod-2 cycle is a sum of face boundaries.
    pub fn is_null_homologous(&self, edges: u128) -> bool {
        self.boundaries.contains(edges)
    }

    /// The face-boundary subspace.
    pub fn boundary_space(&self) -> &Echelon {
        &self.boundaries
    }

    /// Mod-2 edge set of a loop, checking that it closes up.
    pub fn loop_edges(&self, l: &Loop) -> Result<u128> {
        let k = l.corners.len();
        let mut edges = 0u128;
        for i in 0..k {
            let c = l.corners[i];
            let nx = l.corners[(i + 1) % k];
            if self.he_vertex.get(c.inn) != Some(&c.vertex)
                || self.he_vertex.get(c.out) != Some(&c.vertex)
            {
                return Err(Error::OpenWalk(format!("corner {i} not at its vertex")));
            }
            if c.out ^ 1 != nx.inn {
                return Err(Error::OpenWalk(format!("corner {i} does not lead to the next")));
            }
            edges ^= 1u128 << (c.out / 2);
        }
        Ok(edges)
    }

    pub fn loop_class(&self, l: &Loop) -> Result<HomClass> {
        self.edge_class(self.loop_edges(l)?)
    }

    /// Signed intersection number of two loops. Loop `a` is pushed off to
    /// its left; at every vertex its chord is compared with each passage of
    /// `b`.
    pub fn intersection_pairing(&self, a: &Loop, b: &Loop) -> Result<i64> {
        self.loop_edges(a)?;
        self.loop_edges(b)?;
        let mut total = 0i64;
        for ca in &a.corners {
            let deg = self.rotation[ca.vertex].len() * 4;
            let a1 = (self.he_angle[ca.inn] * 4 + deg - 1) % deg;
            let a2 = (self.he_angle[ca.out] * 4 + 1) % deg;
            for cb in b.corners.iter().filter(|c| c.vertex == ca.vertex) {
                let b1 = self.he_angle[cb.inn] * 4;
                let b2 = self.he_angle[cb.out] * 4;
                let in_arc = |x: usize, from: usize, to: usize| {
                    let span = (to + deg - from) % deg;
                    let off = (x + deg - from) % deg;
                    off > 0 && off < span
                };
                if in_arc(b1, a1, a2) && in_arc(b2, a2, a1) {
                    total += 1;
                } else if in_arc(b1, a2, a1) && in_arc(b2, a1, a2) {
                    total -= 1;
                }
            }
        }
        Ok(total)
    }
}

fn fundamental_cycle(e: usize, he_vertex: &[usize], tree: &[bool], n_vertices: usize) -> u128 {
    // BFS in the forest from one end of e to the other
    let n_edges = tree.len();
    let (s, t) = (he_vertex[2 * e], he_vertex[2 * e + 1]);
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n_vertices];
    for f in 0..n_edges {
        if tree[f] {
            let (u, v) = (he_vertex[2 * f], he_vertex[2 * f + 1]);
            adj[u].push((v, f));
            adj[v].push((u, f));
        }
    }
    let mut via = vec![None; n_vertices];
    let mut visited = vec![false; n_vertices];
    let mut queue = std::collections::VecDeque::from([s]);
    visited[s] = true;
    while let Some(u) = queue.pop_front() {
        for &(v, f) in &adj[u] {
            if !visited[v] {
                visited[v] = true;
                via[v] = Some((u, f));
                queue.push_back(v);
            }
        }
    }
    let mut cyc = 1u128 << e;
    let mut x = t;
    while let Some((u, f)) = via[x] {
        cyc ^= 1u128 << f;
        x = u;
    }
    cyc
}

/// The skeleton loop of component `c` (straight through every crossing).
pub fn core_loop(d: &GaussDiagram, c: usize) -> Loop {
    let start = d.component_start(c);
    let len = d.component_lengths()[c];
    if len == 0 {
        let i = d.component_lengths()[..c].iter().filter(|&&l| l == 0).count();
        let e = 2 * d.n_arrows() + i;
        return Loop {
            corners: vec![Corner {
                vertex: d.n_arrows() + i,
                inn: 2 * e + 1,
                out: 2 * e,
            }],
        };
    }
    let corners = (start..start + len)
        .map(|p| Corner {
            vertex: d.slot(p).arrow,
            inn: in_he(d, p),
            out: out_he(p),
        })
        .collect();
    Loop { corners }
}

/// The loop `e+`: from the crossing of arrow `e` along the skeleton from
/// its tail to its head, turning at the crossing back onto the tail strand.
pub fn arrow_loop(d: &GaussDiagram, e: usize) -> Loop {
    let a = d.arrow(e);
    let mut corners = vec![Corner {
        vertex: e,
        inn: in_he(d, a.head),
        out: out_he(a.tail),
    }];
    let mut p = d.next(a.tail);
    while p != a.head {
        corners.push(Corner {
            vertex: d.slot(p).arrow,
            inn: in_he(d, p),
            out: out_he(p),
        });
        p = d.next(p);
    }
    Loop { corners }
}

pub fn carter_surface(d: &GaussDiagram) -> CarterSurface {
    CarterSurface::new(d)
}
