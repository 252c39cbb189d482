//! Compatibility of the conjugate DD orderings on B3 with the two orderings of
//! the Klein bottle group, across the gluing σ2 ↦ y⁻¹, Δ² ↦ y⁻¹x².
//!
//! The quantifier over the peripheral subgroup is infinite; the check runs
//! over a finite (k, l) grid that hits every sign class (l > 0, l = 0 with
//! k of either sign, l < 0). The argument only depends on those classes.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::braid3::{
    conj_sign, restricted_order_type, BraidError, BraidWord, PeripheralElement, PeripheralOrderType,
    Sign3,
};
use crate::fpgroup::{coset_enumerate, Presentation};
use crate::klein::{k_sign, klein_fill, KleinElement, KleinFilling, KleinOrderingId, KleinPeripheral};
use crate::slopes::Slope;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CompatError {
    #[error("grid bound must be at least 1")]
    InvalidBound,
    #[error(transparent)]
    Braid(#[from] BraidError),
}

/// φ(σ2^k Δ^{2l}) = y^{-k}(y⁻¹x²)^l = x^{2l} y^{-k-l}, using that x² is central.
pub fn phi_peripheral(pe: PeripheralElement) -> KleinElement {
    KleinElement::new(2 * pe.l, -pe.k - pe.l)
}

/// Preimage under φ when `g` lies in the image ⟨y, x²⟩.
pub fn phi_preimage(g: KleinElement) -> Option<PeripheralElement> {
    if g.a % 2 != 0 {
        return None;
    }
    let l = g.a / 2;
    Some(PeripheralElement::new(-g.b - l, l))
}

/// O2 when γ does not commute with σ2, O1 when it does.
pub fn choose_klein_ordering(gamma: &BraidWord) -> KleinOrderingId {
    match restricted_order_type(gamma) {
        PeripheralOrderType::PosK => KleinOrderingId::O2,
        PeripheralOrderType::NegK => KleinOrderingId::O1,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridFailure {
    pub k: i64,
    pub l: i64,
    pub braid_sign: Sign3,
    pub klein_sign: Sign3,
}

/// Grid cells per sign class of σ2^k Δ^{2l}, positive or not.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignClasses {
    pub l_positive: usize,
    pub l_zero_k_positive: usize,
    pub l_zero_k_negative: usize,
    pub l_negative: usize,
}

impl SignClasses {
    pub fn all_hit(&self) -> bool {
        self.l_positive > 0 && self.l_zero_k_positive > 0 && self.l_zero_k_negative > 0 && self.l_negative > 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompatReport {
    pub conjugator: BraidWord,
    pub ordering: KleinOrderingId,
    /// True when the ordering was imposed instead of chosen from γ.
    pub forced: bool,
    pub grid_bound: i64,
    pub cells: usize,
    pub positive_cells: usize,
    pub classes: SignClasses,
    pub failures: Vec<GridFailure>,
    pub evidence: String,
}

impl CompatReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks that every γ-conjugate-positive σ2^k Δ^{2l} on the grid maps to a
/// positive element of the chosen Klein ordering.
pub fn verify_compatibility(gamma: &BraidWord, grid_bound: i64) -> Result<CompatReport, CompatError> {
    let ord = choose_klein_ordering(gamma);
    let mut report = verify_with_ordering(gamma, grid_bound, ord)?;
    report.forced = false;
    Ok(report)
}

/// As [`verify_compatibility`] but with the Klein ordering imposed.
pub fn verify_with_ordering(
    gamma: &BraidWord,
    grid_bound: i64,
    ord: KleinOrderingId,
) -> Result<CompatReport, CompatError> {
    if grid_bound < 1 {
        return Err(CompatError::InvalidBound);
    }
    let mut cells = 0;
    let mut positive_cells = 0;
    let mut classes = SignClasses::default();
    let mut failures = Vec::new();
    for l in -grid_bound..=grid_bound {
        for k in -grid_bound..=grid_bound {
            if (k, l) == (0, 0) {
                continue;
            }
            cells += 1;
            let pe = PeripheralElement::new(k, l);
            match (l.signum(), k.signum()) {
                (1, _) => classes.l_positive += 1,
                (-1, _) => classes.l_negative += 1,
                (_, 1) => classes.l_zero_k_positive += 1,
                _ => classes.l_zero_k_negative += 1,
            }
            let braid_sign = conj_sign(&pe.to_word(), gamma)?;
            if braid_sign != Sign3::Positive {
                continue;
            }
            positive_cells += 1;
            let klein_sign = k_sign(phi_peripheral(pe), ord);
            if klein_sign != Sign3::Positive {
                failures.push(GridFailure {
                    k,
                    l,
                    braid_sign,
                    klein_sign,
                });
            }
        }
    }
    let evidence = format!(
        "{positive_cells} of {cells} cells positive under γ = {:?}; {} map to negatives of {ord:?}",
        gamma.to_string(),
        failures.len()
    );
    Ok(CompatReport {
        conjugator: gamma.clone(),
        ordering: ord,
        forced: true,
        grid_bound,
        cells,
        positive_cells,
        classes,
        failures,
        evidence,
    })
}

/// Klein slopes y^m x^{2n} with |m|, |n| <= bound, one per unoriented slope.
pub fn klein_slopes_up_to(bound: i64) -> Vec<KleinPeripheral> {
    let mut out: Vec<KleinPeripheral> = (-bound..=bound)
        .flat_map(|m| (-bound..=bound).map(move |n| (m, n)))
        .filter(|&(m, n)| num_integer::gcd(m, n) == 1)
        .map(|(m, n)| KleinPeripheral::new(m, n).normalized())
        .collect();
    out.sort_by_key(|s| (s.m.abs().max(s.n.abs()), s.m, s.n));
    out.dedup();
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonApplicabilityReport {
    pub klein_bound: i64,
    pub klein_fillings: Vec<KleinFilling>,
    pub lo_klein_slopes: Vec<KleinPeripheral>,
    /// φ⁻¹ of the unique left-orderable Klein slope, as σ2^k Δ^{2l}.
    pub pulled_back: Option<PeripheralElement>,
    /// The same class as a slope in the trefoil's (μ, λ) basis, λ = Δ²σ2⁻⁶.
    pub pulled_back_slope: Option<Slope>,
    /// Index of the normal closure of σ2 in B3, if enumeration closed.
    pub braid_quotient_index: Option<usize>,
    pub slope_rule_applicable: bool,
    pub conclusion: String,
}

/// Why the slope-gluing criterion cannot certify the trefoil/twisted I-bundle
/// union: the Klein side has a single left-orderable slope, it pulls back to
/// the trefoil meridian, and B3/⟨⟨σ2⟩⟩ is trivial.
pub fn nonapplicability_report() -> NonApplicabilityReport {
    const KLEIN_BOUND: i64 = 5;
    let klein_fillings: Vec<KleinFilling> = klein_slopes_up_to(KLEIN_BOUND)
        .into_iter()
        .map(|s| klein_fill(s).expect("primitive by construction"))
        .collect();
    let lo_klein_slopes: Vec<KleinPeripheral> = klein_fillings
        .iter()
        .filter(|f| f.class.is_lo())
        .map(|f| f.slope)
        .collect();
    let pulled_back = match lo_klein_slopes.as_slice() {
        [only] => phi_preimage(only.element()),
        _ => None,
    };
    // σ2^k Δ^{2l} = μ^{k+6l} λ^l
    let pulled_back_slope = pulled_back.and_then(|pe| Slope::new(pe.k + 6 * pe.l, pe.l).ok());
    let b3 = Presentation::braid_group();
    let s2 = b3.parse_word("s2").expect("generator of B3");
    let braid_quotient_index = coset_enumerate(&b3.with_relator(s2), &[], 1000).index();
    let slope_rule_applicable =
        !(pulled_back_slope == Some(Slope::MERIDIAN) && braid_quotient_index == Some(1));
    let conclusion = if slope_rule_applicable {
        "slope-gluing criterion not ruled out".to_string()
    } else {
        "slope-gluing criterion inapplicable: the only left-orderable Klein slope glues to the \
         trefoil meridian, whose filling has trivial group; normal-family compatibility verified separately"
            .to_string()
    };
    NonApplicabilityReport {
        klein_bound: KLEIN_BOUND,
        klein_fillings,
        lo_klein_slopes,
        pulled_back,
        pulled_back_slope,
        braid_quotient_index,
        slope_rule_applicable,
        conclusion,
    }
}
