//! Invariant computation for records and distinguishing reports.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use crate::based_matrix::{
    algebraic_genus, based_matrix, characteristic_polynomials, format_t_poly, phi_invariant,
    phi_of_matrix, primitive_reduce,
};
use crate::error::{Error, Result};
use crate::gauss::GaussDiagram;
use crate::moves::diagram_key;
use crate::polynomials::arrow::{arrow_constant_term, arrow_polynomial, format_arrow};
use crate::polynomials::jk::{format_jk, jones_krushkal};
use crate::slice::{slice_status, SearchBudget};
use crate::surface::carter_surface;

use super::enumerate::KnotClass;
use super::record::{KnotRecord, Table};

/// Which optional invariants to compute.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct InvariantOptions {
    pub algebraic_genus: bool,
    pub cable2: bool,
    pub cable3: bool,
    pub jk: bool,
    /// Run the slice obstructions and search with this budget.
    pub slice: Option<SearchBudget>,
}

impl InvariantOptions {
    /// Every optional invariant except the 3-strand cable constant and
    /// the slice search.
    pub fn standard() -> Self {
        InvariantOptions { algebraic_genus: true, cable2: true, cable3: false, jk: true, slice: None }
    }
}

/// Builds the record of a minimal knot diagram with the cheap invariants
/// and the optional ones selected by `opts`.
pub fn record_for_diagram(
    name: &str,
    d: &GaussDiagram,
    symmetry_type: char,
    opts: &InvariantOptions,
) -> Result<KnotRecord> {
    let key = diagram_key(d);
    let t = based_matrix(d)?;
    let prim = primitive_reduce(&t);
    let cp = characteristic_polynomials(&prim);
    let mut rec = KnotRecord {
        name: name.to_string(),
        crossings: d.n_arrows(),
        gauss_code: key.diagram().to_gauss_code(),
        ou_word: key.ou_word(),
        matching: key.matching(),
        genus: carter_surface(d).genus,
        symmetry_type,
        checkerboard: d.is_checkerboard_colorable(),
        almost_classical: d.is_almost_classical(),
        u_poly: d.u_polynomial().to_string(),
        phi: phi_of_matrix(&prim),
        based_matrix: t,
        primitive_based_matrix: prim,
        inner_char: format_t_poly(&cp.inner),
        outer_char: format_t_poly(&cp.outer),
        algebraic_genus: None,
        arrow_poly: format_arrow(&arrow_polynomial(d, true)),
        arrow_cable2: None,
        arrow_cable3_const: None,
        jk: None,
        jk_normalized: None,
        jk_enhanced: None,
        slice_status: None,
    };
    fill_invariants(&mut rec, opts)?;
    Ok(rec)
}

pub fn record_for_class(name: &str, class: &KnotClass, opts: &InvariantOptions) -> Result<KnotRecord> {
    record_for_diagram(name, &class.diagram, class.symmetry.letter(), opts)
}

/// Computes the optional invariants requested by `opts` that the record
/// does not have yet.
pub fn fill_invariants(rec: &mut KnotRecord, opts: &InvariantOptions) -> Result<()> {
    let d = rec.diagram()?;
    if opts.algebraic_genus && rec.algebraic_genus.is_none() {
        rec.algebraic_genus = Some(algebraic_genus(&rec.based_matrix));
    }
    if opts.cable2 && rec.arrow_cable2.is_none() {
        rec.arrow_cable2 = Some(format_arrow(&arrow_polynomial(&d.cable(2), true)));
    }
    if opts.cable3 && rec.arrow_cable3_const.is_none() {
        let c = arrow_constant_term(&d.cable(3), true);
        rec.arrow_cable3_const = Some(i64::try_from(c).expect("cable constant fits in i64"));
    }
    if opts.jk && rec.jk.is_none() {
        let r = jones_krushkal(&d)?;
        rec.jk = Some(format_jk(&r.j));
        rec.jk_normalized = Some(format_jk(&r.j_normalized));
        rec.jk_enhanced = Some(format_jk(&r.j_enhanced));
    }
    if let Some(budget) = opts.slice {
        if rec.slice_status.is_none() {
            rec.slice_status = Some(slice_status(&d, budget)?.tag().to_string());
        }
    }
    Ok(())
}

/// An invariant usable in a distinguishing battery.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Invariant {
    /// The φ-invariant (equivalently the primitive based matrix).
    Phi,
    UPoly,
    CharPoly,
    AlgebraicGenus,
    Arrow,
    Arrow2,
    Arrow3,
    Jk,
    JkNormalized,
    JkEnhanced,
}

impl Invariant {
    pub const ALL: [Invariant; 10] = [
        Invariant::Phi,
        Invariant::UPoly,
        Invariant::CharPoly,
        Invariant::AlgebraicGenus,
        Invariant::Arrow,
        Invariant::Arrow2,
        Invariant::Arrow3,
        Invariant::Jk,
        Invariant::JkNormalized,
        Invariant::JkEnhanced,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Invariant::Phi => "phi",
            Invariant::UPoly => "u",
            Invariant::CharPoly => "charpoly",
            Invariant::AlgebraicGenus => "alg_genus",
            Invariant::Arrow => "arrow",
            Invariant::Arrow2 => "arrow2",
            Invariant::Arrow3 => "arrow3",
            Invariant::Jk => "jk",
            Invariant::JkNormalized => "jk_normalized",
            Invariant::JkEnhanced => "jk_en",
        }
    }

    /// The record column backing this invariant.
    pub fn column(self) -> &'static str {
        match self {
            Invariant::Phi => "phi",
            Invariant::UPoly => "u_poly",
            Invariant::CharPoly => "inner_char",
            Invariant::AlgebraicGenus => "algebraic_genus",
            Invariant::Arrow => "arrow_poly",
            Invariant::Arrow2 => "arrow_cable2",
            Invariant::Arrow3 => "arrow_cable3_const",
            Invariant::Jk => "jk",
            Invariant::JkNormalized => "jk_normalized",
            Invariant::JkEnhanced => "jk_enhanced",
        }
    }

    /// Relative cost, used to order lazy evaluation.
    fn cost(self) -> u8 {
        match self {
            Invariant::Phi | Invariant::UPoly | Invariant::CharPoly | Invariant::Arrow => 0,
            Invariant::AlgebraicGenus => 1,
            Invariant::Jk | Invariant::JkNormalized | Invariant::JkEnhanced => 2,
            Invariant::Arrow2 => 3,
            Invariant::Arrow3 => 4,
        }
    }

    /// Options that compute the column of this invariant.
    fn options(self) -> InvariantOptions {
        let mut o = InvariantOptions::default();
        match self {
            Invariant::AlgebraicGenus => o.algebraic_genus = true,
            Invariant::Arrow2 => o.cable2 = true,
            Invariant::Arrow3 => o.cable3 = true,
            Invariant::Jk | Invariant::JkNormalized | Invariant::JkEnhanced => o.jk = true,
            _ => {}
        }
        o
    }

    /// The value of this invariant for the knot type of `rec`, closed
    /// under the four symmetry siblings: the knot type of a record is the
    /// sibling class, so two records are told apart only if their sets of
    /// sibling values differ. Invariants that are equal on all siblings
    /// are read from the record; the others are recomputed on the sibling
    /// diagrams.
    fn fingerprint(self, rec: &KnotRecord) -> Result<String> {
        let missing = || Error::MissingInvariant(self.column().to_string());
        let siblings = || -> Result<[GaussDiagram; 4]> {
            let d = rec.diagram()?;
            let r = d.reverse();
            Ok([d.mirror(), r.mirror(), r, d])
        };
        let closed = |f: &dyn Fn(&GaussDiagram) -> Result<String>| -> Result<String> {
            let mut vals = siblings()?.iter().map(f).collect::<Result<Vec<_>>>()?;
            vals.sort();
            vals.dedup();
            Ok(vals.join(" | "))
        };
        match self {
            Invariant::Phi => closed(&|d| Ok(format!("{:?}", phi_invariant(d)?))),
            Invariant::UPoly => closed(&|d| Ok(d.u_polynomial().to_string())),
            Invariant::CharPoly => closed(&|d| {
                let cp = characteristic_polynomials(&primitive_reduce(&based_matrix(d)?));
                Ok(format!("{}; {}", format_t_poly(&cp.inner), format_t_poly(&cp.outer)))
            }),
            Invariant::AlgebraicGenus => rec.algebraic_genus.map(|g| g.to_string()).ok_or_else(missing),
            Invariant::Arrow => Ok(rec.arrow_poly.clone()),
            Invariant::Arrow2 => rec.arrow_cable2.clone().ok_or_else(missing),
            Invariant::Arrow3 => rec.arrow_cable3_const.map(|c| c.to_string()).ok_or_else(missing),
            Invariant::Jk => rec.jk.clone().ok_or_else(missing),
            Invariant::JkNormalized => rec.jk_normalized.clone().ok_or_else(missing),
            Invariant::JkEnhanced => rec.jk_enhanced.clone().ok_or_else(missing),
        }
    }
}

impl fmt::Display for Invariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Invariant {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let s = s.trim();
        let alias = match s {
            "A" | "arrow_poly" => Some(Invariant::Arrow),
            "cable2" | "arrow_cable2" => Some(Invariant::Arrow2),
            "cable3" | "arrow_cable3_const" => Some(Invariant::Arrow3),
            "jk_enhanced" | "jken" => Some(Invariant::JkEnhanced),
            "jkn" => Some(Invariant::JkNormalized),
            "u_poly" => Some(Invariant::UPoly),
            "algebraic_genus" | "ga" => Some(Invariant::AlgebraicGenus),
            _ => None,
        };
        alias
            .or_else(|| Invariant::ALL.into_iter().find(|i| i.name() == s))
            .ok_or_else(|| format!("unknown invariant `{s}`"))
    }
}

/// Parses a comma-separated battery such as `phi,arrow2,jk_en`.
pub fn parse_battery(text: &str) -> std::result::Result<Vec<Invariant>, String> {
    text.split(',').filter(|s| !s.trim().is_empty()).map(str::parse).collect()
}

/// Result of [`distinguish_report`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DistinguishReport {
    /// Number of non-distinguished records per crossing number, with an
    /// entry (possibly 0) for every crossing number present in the table.
    pub counts: BTreeMap<usize, usize>,
    /// Classes of records sharing the whole battery tuple, as names.
    pub groups: Vec<Vec<String>>,
}

impl DistinguishReport {
    /// True if the two named records are in one group.
    pub fn together(&self, a: &str, b: &str) -> bool {
        self.groups.iter().any(|g| g.iter().any(|x| x == a) && g.iter().any(|x| x == b))
    }
}

/// Counts, per crossing number, the records that share their entire
/// battery tuple with some other record of at most their crossing number.
/// The unknot is not a table record and takes no part in the comparison.
/// Symmetry siblings count as one knot type.
/// Every battery column must be present in every record.
pub fn distinguish_report(table: &Table, battery: &[Invariant]) -> Result<DistinguishReport> {
    distinguish_impl(table, battery)
}

/// Like [`distinguish_report`] but computes missing battery columns on
/// the fly, only for records still colliding on the cheaper invariants,
/// and stores them in the table.
pub fn distinguish_lazy(table: &mut Table, battery: &[Invariant]) -> Result<DistinguishReport> {
    let mut order = battery.to_vec();
    order.sort_by_key(|i| (i.cost(), *i));
    order.dedup();
    let mut groups: Vec<Vec<usize>> = vec![(0..table.records.len()).collect()];
    for inv in &order {
        let opts = inv.options();
        let mut next = Vec::new();
        for g in groups {
            let mut by: HashMap<String, Vec<usize>> = HashMap::new();
            for m in g {
                let rec = &mut table.records[m];
                fill_invariants(rec, &opts)?;
                by.entry(inv.fingerprint(rec)?).or_default().push(m);
            }
            next.extend(by.into_values().filter(|v| v.len() > 1));
        }
        groups = next;
    }
    Ok(report_from_groups(table, groups))
}

fn distinguish_impl(table: &Table, battery: &[Invariant]) -> Result<DistinguishReport> {
    let mut by: HashMap<Vec<String>, Vec<usize>> = HashMap::new();
    for (m, rec) in table.records.iter().enumerate() {
        let key = battery.iter().map(|inv| inv.fingerprint(rec)).collect::<Result<Vec<_>>>()?;
        by.entry(key).or_default().push(m);
    }
    let groups = by.into_values().filter(|v| v.len() > 1).collect();
    Ok(report_from_groups(table, groups))
}

fn report_from_groups(table: &Table, groups: Vec<Vec<usize>>) -> DistinguishReport {
    let mut counts: BTreeMap<usize, usize> = table.counts().keys().map(|&n| (n, 0)).collect();
    let crossings = |i: &usize| table.records[*i].crossings;
    let mut named = Vec::new();
    for mut g in groups {
        for m in &g {
            let n = crossings(m);
            if g.iter().filter(|x| crossings(x) <= n).count() > 1 {
                *counts.entry(n).or_insert(0) += 1;
            }
        }
        g.sort_unstable();
        named.push(g.iter().map(|&i| table.records[i].name.clone()).collect::<Vec<_>>());
    }
    named.sort();
    DistinguishReport { counts, groups: named }
}
