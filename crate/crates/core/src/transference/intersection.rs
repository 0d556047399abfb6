use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::Result;
use crate::qpow::rat_string;

use super::sets::{AlphaIndex, FlaggedSet, SetFamily};

/// A failed inclusion, located at one cell.
#[derive(Debug, Clone, Serialize)]
pub struct Violation {
    pub check: String,
    pub indices: Vec<String>,
    /// Digits of the witness cell, in hex.
    pub cell: String,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct PropertyReport {
    pub property: String,
    pub alphas: usize,
    pub pairs_tested: u64,
    /// Pairs whose sets actually meet, or share `q`.
    pub nontrivial_pairs: u64,
    pub same_q_pairs: u64,
    pub violations: Vec<Violation>,
    pub ambiguous_cells: u64,
    pub constants: BTreeMap<String, String>,
}

impl PropertyReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check `I(a) cap I(a') subset H(a - a')` for every pair, at `psi_omega(t)`.
/// Pairs with `q = q'` must have disjoint sets.
pub fn verify_intersection(fam: &SetFamily) -> Result<PropertyReport> {
    let w = fam.cfg.omega.clone();
    let alphas = fam.enum_alphas()?;
    let sets: Vec<(&AlphaIndex, FlaggedSet)> = alphas
        .iter()
        .map(|a| (a, fam.build_i_set(a, &w)))
        .filter(|(_, s)| !s.certain.is_empty() || !s.ambiguous.is_empty())
        .collect();
    let grid = &fam.cells.grid;
    let mut report = PropertyReport {
        property: "intersection".into(),
        alphas: alphas.len(),
        pairs_tested: (alphas.len() as u64) * (alphas.len().saturating_sub(1) as u64) / 2,
        nontrivial_pairs: 0,
        same_q_pairs: 0,
        violations: Vec::new(),
        ambiguous_cells: 0,
        constants: BTreeMap::new(),
    };
    report.constants.insert("omega".into(), rat_string(&w));
    report.constants.insert("threshold_deg".into(), fam.threshold(&w).to_string());
    report.constants.insert("t".into(), fam.cfg.t.to_string());
    report.constants.insert("resolution".into(), fam.cfg.res.to_string());
    report.ambiguous_cells = sets.iter().map(|(_, s)| s.ambiguous.len() as u64).sum();
    for (i, (a, sa)) in sets.iter().enumerate() {
        for (b, sb) in &sets[i + 1..] {
            let both = sa.certain.intersection(&sb.certain);
            let maybe = sa.certain.union(&sa.ambiguous).intersection(&sb.certain.union(&sb.ambiguous));
            let indices = vec![a.to_string(), b.to_string()];
            if a.q == b.q {
                report.same_q_pairs += 1;
                report.nontrivial_pairs += 1;
                if let Some(&c) = both.cells.iter().next() {
                    report.violations.push(Violation {
                        check: "same_q_disjoint".into(),
                        indices,
                        cell: grid.word(c),
                        detail: "sets with equal q meet".into(),
                    });
                }
                continue;
            }
            if maybe.is_empty() {
                continue;
            }
            report.nontrivial_pairs += 1;
            let (dp, dq) = a.sub(b);
            let h = fam.level_set(&both, &dp, &dq, false, fam.threshold(&w));
            report.ambiguous_cells += h.ambiguous.len() as u64;
            let outside = both.difference(&h.certain).difference(&h.ambiguous);
            if let Some(&c) = outside.cells.iter().next() {
                report.violations.push(Violation {
                    check: "inclusion".into(),
                    indices,
                    cell: grid.word(c),
                    detail: format!("{} cells of the intersection lie outside H", outside.len()),
                });
            }
        }
    }
    Ok(report)
}
