//! Sparse multivariate integer polynomials.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Exponent vector with trailing zeros trimmed, so equal monomials compare
/// equal regardless of how many variables were in scope.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub SmallVec<[u16; 4]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn var(i: usize, e: u16) -> Self {
        let mut v: SmallVec<[u16; 4]> = SmallVec::from_elem(0, i + 1);
        v[i] = e;
        Monomial(v).trimmed()
    }

    fn trimmed(mut self) -> Self {
        while self.0.last() == Some(&0) {
            self.0.pop();
        }
        self
    }

    pub fn exponent(&self, i: usize) -> u16 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let n = self.0.len().max(other.0.len());
        let v = (0..n).map(|i| self.exponent(i) + other.exponent(i)).collect();
        Monomial(v).trimmed()
    }
}

/// Integer polynomial in variables `x_0, x_1, ...`; coefficients are
/// `i128` with overflow checked on every operation.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    terms: BTreeMap<Monomial, i128>,
}

fn checked(v: Option<i128>) -> i128 {
    v.expect("polynomial coefficient overflow")
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn constant(c: i128) -> Self {
        let mut p = Poly::zero();
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn monomial(m: Monomial, c: i128) -> Self {
        let mut p = Poly::zero();
        p.add_term(m, c);
        p
    }

    pub fn var(i: usize) -> Self {
        Poly::monomial(Monomial::var(i, 1), 1)
    }

    pub fn add_term(&mut self, m: Monomial, c: i128) {
        if c == 0 {
            return;
        }
        match self.terms.entry(m) {
            Entry::Occupied(mut o) => {
                let v = checked(o.get().checked_add(c));
                if v == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = v;
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, i128)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> i128 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    pub fn constant_term(&self) -> i128 {
        self.coeff(&Monomial::one())
    }

    pub fn scale(&self, k: i128) -> Poly {
        let mut p = Poly::zero();
        for (m, c) in self.terms() {
            p.add_term(m.clone(), checked(c.checked_mul(k)));
        }
        p
    }

    /// Substitutes integer values for all variables.
    pub fn eval(&self, values: impl Fn(usize) -> i128) -> i128 {
        let mut total = 0i128;
        for (m, c) in self.terms() {
            let mut t = c;
            for (i, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    t = checked(t.checked_mul(values(i)));
                }
            }
            total = checked(total.checked_add(t));
        }
        total
    }

    /// Highest exponent of variable `i`.
    pub fn degree_in(&self, i: usize) -> u16 {
        self.terms.keys().map(|m| m.exponent(i)).max().unwrap_or(0)
    }

    /// Exact division by `x_i^k`; `None` if some term has a lower power.
    pub fn div_var_power(&self, i: usize, k: u16) -> Option<Poly> {
        let mut p = Poly::zero();
        for (m, c) in self.terms() {
            if m.exponent(i) < k {
                return None;
            }
            let mut v = m.0.clone();
            v[i] -= k;
            p.add_term(Monomial(v).trimmed(), c);
        }
        Some(p)
    }

    /// Exact division of every coefficient by `k`.
    pub fn div_exact(&self, k: i128) -> Option<Poly> {
        let mut p = Poly::zero();
        for (m, c) in self.terms() {
            if c % k != 0 {
                return None;
            }
            p.add_term(m.clone(), c / k);
        }
        Some(p)
    }

    /// Exact division by the univariate linear polynomial `x_i + a`.
    /// Works on the polynomial viewed in `x_i` with coefficients in the
    /// other variables.
    pub fn div_linear(&self, i: usize, a: i128) -> Option<Poly> {
        // group terms by the remaining monomial
        let mut groups: BTreeMap<Monomial, BTreeMap<u16, i128>> = BTreeMap::new();
        for (m, c) in self.terms() {
            let mut rest = m.0.clone();
            let e = m.exponent(i);
            if (i) < rest.len() {
                rest[i] = 0;
            }
            groups
                .entry(Monomial(rest).trimmed())
                .or_default()
                .insert(e, c);
        }
        let mut out = Poly::zero();
        for (rest, coeffs) in groups {
            // synthetic division by (x + a) from the top degree down
            let top = *coeffs.keys().max().unwrap();
            let mut carry = 0i128;
            for e in (0..=top).rev() {
                let c = coeffs.get(&e).copied().unwrap_or(0);
                let cur = checked(c.checked_sub(checked(carry.checked_mul(a))));
                if e == 0 {
                    if cur != 0 {
                        return None;
                    }
                } else {
                    out.add_term(rest.mul(&Monomial::var(i, e - 1)), cur);
                    carry = cur;
                }
            }
        }
        Some(out)
    }

    /// Text form with variable names from `name`; terms are ordered by
    /// decreasing exponent vector with variables compared in the order
    /// `order`, and monomials print their variables in `print_order`.
    pub fn format_with(&self, name: &dyn Fn(usize) -> String, order: &[usize], print_order: &[usize]) -> String {
        let mut terms: Vec<(&Monomial, i128)> = self.terms().collect();
        let sort_key = |m: &Monomial| -> Vec<u16> {
            let mut k: Vec<u16> = order.iter().map(|&i| m.exponent(i)).collect();
            k.extend((0..m.0.len()).filter(|i| !order.contains(i)).map(|i| m.exponent(i)));
            k
        };
        terms.sort_by(|a, b| sort_key(b.0).cmp(&sort_key(a.0)));
        let mut out = String::new();
        for (m, c) in terms {
            let mag = c.unsigned_abs();
            if out.is_empty() {
                if c < 0 {
                    out.push('-');
                }
            } else {
                out.push_str(if c < 0 { " - " } else { " + " });
            }
            let mut vars: Vec<usize> = print_order.iter().copied().filter(|&i| m.exponent(i) > 0).collect();
            vars.extend((0..m.0.len()).filter(|i| !print_order.contains(i) && m.exponent(*i) > 0));
            let mono: Vec<String> = vars
                .iter()
                .map(|&i| {
                    let e = m.exponent(i);
                    if e == 1 {
                        name(i)
                    } else {
                        format!("{}^{}", name(i), e)
                    }
                })
                .collect();
            let mono = mono.join("*");
            if mono.is_empty() {
                out.push_str(&mag.to_string());
            } else if mag == 1 {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{mag}*{mono}"));
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    /// Parses the sparse text form; `var` maps a variable name to its index.
    pub fn parse_with(text: &str, var: &dyn Fn(&str) -> Option<usize>) -> Result<Poly> {
        let bad = || Error::MalformedPolynomial(text.to_string());
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(bad());
        }
        let mut p = Poly::zero();
        let bytes = s.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            let mut sign = 1i128;
            if bytes[i] == b'+' || bytes[i] == b'-' {
                if bytes[i] == b'-' {
                    sign = -1;
                }
                i += 1;
            } else if i != 0 {
                return Err(bad());
            }
            let start = i;
            while i < bytes.len() && bytes[i] != b'+' && bytes[i] != b'-' {
                i += 1;
            }
            let term = &s[start..i];
            if term.is_empty() {
                return Err(bad());
            }
            let mut coeff = 1i128;
            let mut mono = Monomial::one();
            for (k, factor) in term.split('*').enumerate() {
                if factor.is_empty() {
                    return Err(bad());
                }
                if factor.chars().all(|c| c.is_ascii_digit()) {
                    if k != 0 {
                        return Err(bad());
                    }
                    coeff = factor.parse().map_err(|_| bad())?;
                    continue;
                }
                let (name, exp) = match factor.split_once('^') {
                    Some((n, e)) => (n, e.parse::<u16>().map_err(|_| bad())?),
                    None => (factor, 1),
                };
                let idx = var(name).ok_or_else(bad)?;
                mono = mono.mul(&Monomial::var(idx, exp));
            }
            p.add_term(mono, sign * coeff);
        }
        Ok(p)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut p = self.clone();
        for (m, c) in rhs.terms() {
            p.add_term(m.clone(), c);
        }
        p
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(-1)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut p = Poly::zero();
        for (a, ca) in self.terms() {
            for (b, cb) in rhs.terms() {
                p.add_term(a.mul(b), checked(ca.checked_mul(cb)));
            }
        }
        p
    }
}
