//! The flat Jones–Krushkal polynomial: a state sum over smoothings on the
//! Carter surface, weighted by the GF(2) homology of the state loops.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::gauss::GaussDiagram;
use crate::gf2;
use crate::polynomials::arrow::state_loops;
use crate::polynomials::poly::{Monomial, Poly};
use crate::surface::CarterSurface;

/// Variable indices: `z` is 0, `w` is 1.
pub const Z: usize = 0;
pub const W: usize = 1;

/// Homological data of one state.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StateEvaluation {
    pub loops: usize,
    /// Rank of the span of the loop classes.
    pub r: usize,
    /// `loops − r`.
    pub k: usize,
    /// Number of homologically nontrivial loops.
    pub m: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JkResult {
    pub j: Poly,
    pub j_normalized: Poly,
    pub j_enhanced: Poly,
    pub j_enhanced_normalized: Poly,
    pub genus: usize,
    pub core_trivial: bool,
}

/// Serializable text form of a [`JkResult`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JkText {
    pub j: String,
    pub j_normalized: String,
    pub j_enhanced: String,
    pub j_enhanced_normalized: String,
}

pub fn state_evaluation(d: &GaussDiagram, s: &CarterSurface, bits: &[bool]) -> Result<StateEvaluation> {
    let loops = state_loops(d, bits);
    let mut classes = Vec::with_capacity(loops.len());
    for l in &loops {
        classes.push(s.edge_class(l.edges)?.bits as u128);
    }
    let r = gf2::rank(&classes);
    let m = classes.iter().filter(|&&c| c != 0).count();
    Ok(StateEvaluation { loops: loops.len(), r, k: loops.len() - r, m })
}

/// All four Jones–Krushkal polynomials of a knot diagram. The diagram
/// must be minimal so that its Carter surface has minimal genus; this is
/// the caller's responsibility.
pub fn jones_krushkal(d: &GaussDiagram) -> Result<JkResult> {
    d.require_knot()?;
    let n = d.n_arrows();
    assert!(n <= 24, "Jones–Krushkal state sum is limited to 24 crossings");
    let s = CarterSurface::new(d);
    let sign: i128 = if n % 2 == 1 { -1 } else { 1 };
    let mut j = Poly::zero();
    let mut jen = Poly::zero();
    let mut bits = vec![false; n];
    for state in 0u32..(1 << n) {
        for (e, b) in bits.iter_mut().enumerate() {
            *b = state >> e & 1 == 1;
        }
        let ev = state_evaluation(d, &s, &bits)?;
        debug_assert!(ev.r <= ev.m && ev.m <= ev.loops);
        let c = sign * (-2i128).pow(ev.k as u32);
        let zr = Monomial::var(Z, ev.r as u16);
        j.add_term(zr.clone(), c);
        jen.add_term(zr.mul(&Monomial::var(W, ev.m as u16)), c);
    }
    let core_trivial = s.core_class.is_zero();
    let divide = |p: &Poly| -> Poly {
        let q = if core_trivial { p.div_exact(-2) } else { p.div_var_power(Z, 1) };
        q.expect("Jones–Krushkal polynomial must be divisible by its normalizing factor")
    };
    Ok(JkResult {
        j_normalized: divide(&j),
        j_enhanced_normalized: divide(&jen),
        j,
        j_enhanced: jen,
        genus: s.genus,
        core_trivial,
    })
}

/// Text form in `z` and `w`: terms by decreasing power of `z`, then of `w`.
pub fn format_jk(p: &Poly) -> String {
    p.format_with(&|i| if i == Z { "z".into() } else { "w".into() }, &[Z, W], &[W, Z])
}

pub fn parse_jk(text: &str) -> Result<Poly> {
    Poly::parse_with(text, &|s| match s {
        "z" => Some(Z),
        "w" => Some(W),
        _ => None,
    })
}

impl JkResult {
    pub fn to_text(&self) -> JkText {
        JkText {
            j: format_jk(&self.j),
            j_normalized: format_jk(&self.j_normalized),
            j_enhanced: format_jk(&self.j_enhanced),
            j_enhanced_normalized: format_jk(&self.j_enhanced_normalized),
        }
    }
}
