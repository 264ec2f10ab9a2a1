use num_traits::Zero;

use super::quotient::{build_cone, wmult_closed_quotient, BlowupKind, BlowupSpec, CyclicQuotient};
use super::subvariety::{wmult_closed_subvariety, SubvarietyModel};
use super::terminal::{mori_basis, wmult_closed_terminal, MoriCase, TerminalModel};
use super::Model;
use crate::error::Result;
use crate::lattice::{
    default_start, families_period, graded_slice_families, leading_coefficient, wmult_analytic,
    BasisFamily, FamilyTally, WeightTally,
};
use crate::rational::{fmt_rat, int, Rat};

/// Closed form, extraction and analytic density for one model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WmultReport {
    pub model: String,
    pub blowup: String,
    pub dimension: u32,
    /// Absent when no closed form applies to the chosen blow-up.
    pub closed: Option<Rat>,
    pub extracted: Rat,
    pub analytic: Rat,
    /// Extraction with the overlap family left in (models with an overlap).
    pub extracted_without_dedupe: Option<Rat>,
    pub period: u64,
    pub start: i64,
    pub notes: Vec<String>,
}

impl WmultReport {
    /// All available values coincide exactly.
    pub fn agrees(&self) -> bool {
        self.extracted == self.analytic
            && self.closed.as_ref().is_none_or(|c| c == &self.extracted)
            && self
                .extracted_without_dedupe
                .as_ref()
                .is_none_or(|v| v == &self.extracted)
    }
}

pub fn verify_quotient(q: &CyclicQuotient, blowup: &BlowupSpec) -> Result<WmultReport> {
    let cone = build_cone(q, blowup)?;
    let period = cone.default_period()?;
    let start = default_start(period);
    let n = q.dim() as u32;
    let tally = WeightTally::new(
        &cone,
        0,
        &Rat::zero(),
        &int(start + (n as i64 + 1) * period as i64),
    )?;
    let extracted = leading_coefficient(|h| tally.count_below(h), n, period, start)?;
    let mut notes = Vec::new();
    let closed = match blowup.kind {
        BlowupKind::Uniform => match wmult_closed_quotient(q) {
            Ok(v) => Some(v),
            Err(e) => {
                notes.push(format!("closed form not applicable: {e}"));
                None
            }
        },
        BlowupKind::Kawamata => {
            notes.push("no closed form for the Kawamata blow-up; see kawamata bounds".into());
            None
        }
        BlowupKind::Custom => None,
    };
    Ok(WmultReport {
        model: q.to_string(),
        blowup: blowup.to_string(),
        dimension: n,
        closed,
        extracted,
        analytic: wmult_analytic(&cone),
        extracted_without_dedupe: None,
        period,
        start,
        notes,
    })
}

fn extract_families(
    families: &[BasisFamily],
    overlap: Option<&BasisFamily>,
    dim: u32,
) -> Result<(Rat, Option<Rat>, u64, i64)> {
    let period = families_period(families, overlap)?;
    let start = default_start(period);
    let top = int(start + (dim as i64 + 1) * period as i64);
    let tally = FamilyTally::new(families, overlap, &top)?;
    let extracted = leading_coefficient(|h| tally.count_below(h), dim, period, start)?;
    let without = match overlap {
        Some(_) => {
            let loose = FamilyTally::new(families, None, &top)?;
            Some(leading_coefficient(
                |h| loose.count_below(h),
                dim,
                period,
                start,
            )?)
        }
        None => None,
    };
    Ok((extracted, without, period, start))
}

/// Sum of full-dimensional family densities, minus a full-dimensional overlap.
fn analytic_families(families: &[BasisFamily], overlap: Option<&BasisFamily>, dim: usize) -> Rat {
    let total: Rat = families
        .iter()
        .filter(|f| f.dim() == dim)
        .map(BasisFamily::analytic_contribution)
        .sum();
    match overlap {
        Some(o) if o.dim() == dim => total - o.analytic_contribution(),
        _ => total,
    }
}

pub fn verify_terminal(m: &TerminalModel) -> Result<WmultReport> {
    let (families, overlap) = mori_basis(m)?;
    let (extracted, without, period, start) = extract_families(&families, overlap.as_ref(), 3)?;
    let mut notes = Vec::new();
    match m.case() {
        MoriCase::CA { .. } => notes.push(
            "pure z,u monomials lie in both families; counted once via the overlap family".into(),
        ),
        MoriCase::CAx2 => {
            let at_one = graded_slice_families(&families, overlap.as_ref(), &int(1))?;
            notes.push(format!(
                "graded piece at h=1 from the basis is {at_one}; the quadratic h^2/2 + 3h/2 + 1 gives 3 there"
            ));
        }
        _ => {}
    }
    Ok(WmultReport {
        model: m.to_string(),
        blowup: "unit weights (1,1,1,1)".into(),
        dimension: 3,
        closed: Some(wmult_closed_terminal(m)),
        extracted,
        analytic: analytic_families(&families, overlap.as_ref(), 3),
        extracted_without_dedupe: without,
        period,
        start,
        notes,
    })
}

pub fn verify_subvariety(s: &SubvarietyModel) -> Result<WmultReport> {
    let (families, overlap) = s.basis()?;
    let dim = s.kind().dim();
    let (extracted, without, period, start) =
        extract_families(&families, overlap.as_ref(), dim as u32)?;
    let w = fmt_rat(&s.weight());
    Ok(WmultReport {
        model: s.to_string(),
        blowup: format!("weights ({w},{w},{w})"),
        dimension: dim as u32,
        closed: Some(wmult_closed_subvariety(s)),
        extracted,
        analytic: analytic_families(&families, overlap.as_ref(), dim),
        extracted_without_dedupe: without,
        period,
        start,
        notes: Vec::new(),
    })
}

/// Quotients default to the uniform blow-up; other models ignore `blowup`.
pub fn verify_wmult(model: &Model, blowup: Option<&BlowupSpec>) -> Result<WmultReport> {
    match model {
        Model::Quotient(q) => match blowup {
            Some(b) => verify_quotient(q, b),
            None => verify_quotient(q, &BlowupSpec::uniform(q)),
        },
        Model::Terminal(m) => verify_terminal(m),
        Model::Subvariety(s) => verify_subvariety(s),
    }
}
