//! State-sum polynomial invariants and the shared sparse polynomial text
//! form.

pub mod arrow;
pub mod jk;
pub mod poly;

/// Joins `(coefficient, monomial)` terms into `a*m + b*m - c`. An empty
/// monomial denotes the constant term; an empty list prints `0`.
pub fn format_terms(terms: &[(i64, String)]) -> String {
    let mut out = String::new();
    for (c, mono) in terms.iter().filter(|(c, _)| *c != 0) {
        let mag = c.unsigned_abs();
        if out.is_empty() {
            if *c < 0 {
                out.push('-');
            }
        } else {
            out.push_str(if *c < 0 { " - " } else { " + " });
        }
        if mono.is_empty() {
            out.push_str(&mag.to_string());
        } else if mag == 1 {
            out.push_str(mono);
        } else {
            out.push_str(&format!("{mag}*{mono}"));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}
