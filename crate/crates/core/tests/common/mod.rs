//! Diagram generators shared by the integration tests.

#![allow(dead_code)]

use flatknot::GaussDiagram;
use proptest::prelude::*;

/// Gauss code of a knot diagram with `n` arrows: `perm` orders the `2n`
/// arrow endpoints along the skeleton (endpoint `2e` is the tail of arrow
/// `e`, `2e + 1` its head).
pub fn code_from_order(order: &[usize]) -> String {
    order
        .iter()
        .map(|&x| format!("{}{}", if x % 2 == 0 { "O" } else { "U" }, x / 2 + 1))
        .collect()
}

/// A uniformly random knot diagram with `lo..=hi` arrows.
pub fn diagram(lo: usize, hi: usize) -> impl Strategy<Value = GaussDiagram> {
    (lo..=hi)
        .prop_flat_map(|n| Just((0..2 * n).collect::<Vec<usize>>()).prop_shuffle())
        .prop_map(|order| GaussDiagram::parse(&code_from_order(&order)).unwrap())
}

/// Every knot diagram with `n` arrows, up to relabelling: perfect
/// matchings of the `2n` slots with both orientations of each arrow.
pub fn all_diagrams(n: usize) -> Vec<GaussDiagram> {
    fn matchings(free: &[usize], cur: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        let Some((&a, rest)) = free.split_first() else {
            out.push(cur.clone());
            return;
        };
        for i in 0..rest.len() {
            let mut others = rest.to_vec();
            let b = others.remove(i);
            cur.push((a, b));
            matchings(&others, cur, out);
            cur.pop();
        }
    }
    let mut ms = Vec::new();
    matchings(&(0..2 * n).collect::<Vec<_>>(), &mut Vec::new(), &mut ms);
    let mut out = Vec::new();
    for m in &ms {
        for bits in 0..1u32 << n {
            let mut order = vec![0; 2 * n];
            for (e, &(p, q)) in m.iter().enumerate() {
                let (t, h) = if bits >> e & 1 == 0 { (p, q) } else { (q, p) };
                order[t] = 2 * e;
                order[h] = 2 * e + 1;
            }
            out.push(GaussDiagram::parse(&code_from_order(&order)).unwrap());
        }
    }
    out
}
