//! Seifert pieces, splice trees and left-orderable slopes.
//!
//! Knowledge about which Dehn fillings have left-orderable fundamental group
//! is an ordered rule table. Every verdict names the rule that produced it and
//! carries an evidence string, so a certificate can be audited and re-derived.
//!
//! A splice tree is a forest whose nodes are knot exteriors in integer
//! homology spheres and whose edges glue boundary tori. Certificates follow
//! the induction on the number of gluing tori: cut a leaf edge, certify one
//! side's closed filling, and match a left-orderable slope across the torus.

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::slopes::{apply_gluing, union_homology_order, GluingMatrix, Slope};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeifertError {
    #[error("multiplicities {0:?} are not pairwise coprime")]
    NotCoprime(Vec<u64>),
    #[error("multiplicities must be at least 1")]
    ZeroMultiplicity,
    #[error("product of multiplicities {0:?} is too large")]
    ProductTooLarge(Vec<u64>),
    #[error("T({0},{1}) is not a torus knot: need coprime r, s >= 2")]
    InvalidTorusKnot(u64, u64),
    #[error("rule inapplicable: {0}")]
    RuleInapplicable(String),
    #[error("duplicate node id {0:?}")]
    DuplicateNode(String),
    #[error("edge {0} refers to unknown node {1:?}")]
    UnknownNode(usize, String),
    #[error("edge {edge}: node {node:?} has no boundary at fiber {fiber:?}")]
    BadBoundary {
        edge: usize,
        node: String,
        fiber: Option<usize>,
    },
    #[error("boundary at fiber {fiber:?} of node {node:?} is glued more than once")]
    BoundaryReused { node: String, fiber: Option<usize> },
    #[error("edge {0} closes a cycle; splice graphs of homology spheres are forests")]
    Cycle(usize),
    #[error("edge {edge} glues to a manifold with |H1| = {order}, expected 1")]
    NotHomologySphere { edge: usize, order: u64 },
    #[error("{0} nodes have unspecified chirality; at most {1} can be searched")]
    TooManyUnspecified(usize, usize),
    #[error("invalid Heegaard Floer parameters: {0}")]
    InvalidParams(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Chirality {
    Positive,
    Negative,
}

impl Chirality {
    pub fn sign(self) -> i64 {
        match self {
            Chirality::Positive => 1,
            Chirality::Negative => -1,
        }
    }

    pub fn mirror(self) -> Self {
        match self {
            Chirality::Positive => Chirality::Negative,
            Chirality::Negative => Chirality::Positive,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Chirality::Positive => "positive",
            Chirality::Negative => "negative",
        }
    }
}

/// Σ(a1, ..., an) for pairwise coprime multiplicities; entries equal to 1
/// are regular fibres kept as padding.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct BrieskornZHS {
    multiplicities: Vec<u64>,
}

impl BrieskornZHS {
    pub fn new(multiplicities: Vec<u64>) -> Result<Self, SeifertError> {
        if multiplicities.contains(&0) {
            return Err(SeifertError::ZeroMultiplicity);
        }
        for (i, a) in multiplicities.iter().enumerate() {
            for b in &multiplicities[i + 1..] {
                if a.gcd(b) != 1 {
                    return Err(SeifertError::NotCoprime(multiplicities));
                }
            }
        }
        let fits = multiplicities
            .iter()
            .try_fold(1i64, |acc, &a| i64::try_from(a).ok().and_then(|a| acc.checked_mul(a)))
            .is_some();
        if !fits {
            return Err(SeifertError::ProductTooLarge(multiplicities));
        }
        Ok(BrieskornZHS { multiplicities })
    }

    pub fn poincare() -> Self {
        BrieskornZHS {
            multiplicities: vec![2, 3, 5],
        }
    }

    pub fn multiplicities(&self) -> &[u64] {
        &self.multiplicities
    }

    /// Exceptional multiplicities, ascending.
    pub fn nontrivial(&self) -> Vec<u64> {
        let mut v: Vec<u64> = self.multiplicities.iter().copied().filter(|&a| a > 1).collect();
        v.sort_unstable();
        v
    }
}

impl TryFrom<Vec<u64>> for BrieskornZHS {
    type Error = SeifertError;

    fn try_from(v: Vec<u64>) -> Result<Self, Self::Error> {
        BrieskornZHS::new(v)
    }
}

impl From<BrieskornZHS> for Vec<u64> {
    fn from(z: BrieskornZHS) -> Self {
        z.multiplicities
    }
}

impl fmt::Display for BrieskornZHS {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.multiplicities.iter().map(u64::to_string).collect();
        write!(f, "Σ({})", parts.join(","))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Exceptional {
    S3,
    Poincare,
    Other,
}

pub fn recognize_exceptional(z: &BrieskornZHS) -> Exceptional {
    let nt = z.nontrivial();
    if nt.len() < 3 {
        Exceptional::S3
    } else if nt == [2, 3, 5] {
        Exceptional::Poincare
    } else {
        Exceptional::Other
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LoStatus {
    #[serde(rename = "LO")]
    Lo,
    #[serde(rename = "NotLO")]
    NotLo,
    Unknown,
}

impl fmt::Display for LoStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LoStatus::Lo => "LO",
            LoStatus::NotLo => "NotLO",
            LoStatus::Unknown => "Unknown",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LoRule {
    B1Rule,
    #[serde(rename = "ZHSClassification")]
    ZhsClassification,
    LSpaceInterval,
    UserAsserted,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LOSlopeVerdict {
    pub status: LoStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rule: Option<LoRule>,
    pub evidence: String,
}

impl LOSlopeVerdict {
    fn ruled(status: LoStatus, rule: LoRule, evidence: String) -> Self {
        LOSlopeVerdict {
            status,
            rule: Some(rule),
            evidence,
        }
    }

    fn unknown(evidence: String) -> Self {
        LOSlopeVerdict {
            status: LoStatus::Unknown,
            rule: None,
            evidence,
        }
    }

    pub fn is_lo(&self) -> bool {
        self.status == LoStatus::Lo
    }
}

/// Homology spheres with non-left-orderable group are exactly S³ and Σ(2,3,5)
/// among Seifert fibred ones; the trivial group counts as not left-orderable.
pub fn zhs_lo_status(z: &BrieskornZHS) -> LOSlopeVerdict {
    let (status, why) = match recognize_exceptional(z) {
        Exceptional::S3 => (LoStatus::NotLo, "is S³, whose group is trivial"),
        Exceptional::Poincare => (LoStatus::NotLo, "is the Poincaré sphere, with finite group"),
        Exceptional::Other => (
            LoStatus::Lo,
            "is a Seifert homology sphere other than S³ and Σ(2,3,5)",
        ),
    };
    LOSlopeVerdict::ruled(status, LoRule::ZhsClassification, format!("{z} {why}"))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TorusKnotPiece {
    pub r: u64,
    pub s: u64,
    pub chirality: Chirality,
}

impl TorusKnotPiece {
    pub fn new(r: u64, s: u64, chirality: Chirality) -> Result<Self, SeifertError> {
        if r < 2 || s < 2 || r.gcd(&s) != 1 || r.checked_mul(s).is_none_or(|p| p > i64::MAX as u64) {
            return Err(SeifertError::InvalidTorusKnot(r, s));
        }
        Ok(TorusKnotPiece { r, s, chirality })
    }

    pub fn trefoil(chirality: Chirality) -> Self {
        TorusKnotPiece {
            r: 2,
            s: 3,
            chirality,
        }
    }

    /// 2g - 1 = rs - r - s for the positive knot.
    pub fn lspace_threshold(&self) -> i64 {
        (self.r * self.s - self.r - self.s) as i64
    }

    fn as_fiber(&self) -> (BrieskornZHS, usize) {
        (
            BrieskornZHS {
                multiplicities: vec![self.r, self.s, 1],
            },
            2,
        )
    }
}

impl fmt::Display for TorusKnotPiece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T({},{}) {}", self.r, self.s, self.chirality.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum SurgeryResult {
    /// At least three exceptional fibres.
    Seifert { multiplicities: Vec<u64> },
    /// At most two exceptional fibres: a lens space, S³ or S²×S¹.
    Lens { h1_order: u64 },
    Reducible,
}

/// Filling of the exterior of fibre `fiber` of Σ(a) along α.
///
/// On the fibre's boundary the regular fibre is the curve c·μ + a_i·λ with
/// c = ±∏_{j≠i} a_j (sign by chirality), so the filled fibre has
/// multiplicity |p·a_i - q·c|.
pub fn fiber_surgery(
    z: &BrieskornZHS,
    fiber: usize,
    chirality: Chirality,
    alpha: Slope,
) -> SurgeryResult {
    let a_i = z.multiplicities[fiber] as i128;
    let others: Vec<u64> = z
        .multiplicities
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != fiber)
        .map(|(_, &a)| a)
        .collect();
    let c: i128 = others.iter().map(|&a| a as i128).product::<i128>() * chirality.sign() as i128;
    let m = (alpha.p() as i128 * a_i - alpha.q() as i128 * c).unsigned_abs();
    let nontrivial_others = others.iter().filter(|&&a| a > 1).count();
    let h1_order = alpha.p().unsigned_abs();
    if m == 0 {
        return if nontrivial_others >= 2 {
            SurgeryResult::Reducible
        } else {
            SurgeryResult::Lens { h1_order }
        };
    }
    let mut multiplicities: Vec<u64> = others.into_iter().filter(|&a| a > 1).collect();
    if m > 1 {
        multiplicities.push(u64::try_from(m).unwrap_or(u64::MAX));
    }
    multiplicities.sort_unstable();
    if multiplicities.len() <= 2 {
        SurgeryResult::Lens { h1_order }
    } else {
        SurgeryResult::Seifert { multiplicities }
    }
}

/// Moser's classification of surgeries on torus knots: {r, s, |p - q·r·s|}.
pub fn moser_surgery(k: &TorusKnotPiece, alpha: Slope) -> SurgeryResult {
    let (z, fiber) = k.as_fiber();
    fiber_surgery(&z, fiber, k.chirality, alpha)
}

/// Positive torus knot surgeries are L-spaces exactly for p/q >= rs - r - s;
/// for Seifert fibred fillings L-space and non-left-orderable coincide.
/// Negative knots use p/q ↦ -p/q.
pub fn torus_knot_lspace_verdict(
    k: &TorusKnotPiece,
    alpha: Slope,
) -> Result<LOSlopeVerdict, SeifertError> {
    if moser_surgery(k, alpha) == SurgeryResult::Reducible {
        return Err(SeifertError::RuleInapplicable(format!(
            "{alpha} surgery on T({},{}) is reducible",
            k.r, k.s
        )));
    }
    let normalized = match k.chirality {
        Chirality::Positive => alpha,
        Chirality::Negative => alpha.mirror(),
    };
    let bound = k.lspace_threshold();
    let lspace = normalized.cmp_integer(bound) != std::cmp::Ordering::Less;
    let (status, relation, what) = if lspace {
        (LoStatus::NotLo, ">=", "an L-space")
    } else {
        (LoStatus::Lo, "<", "not an L-space")
    };
    let framed = if k.chirality == Chirality::Negative {
        format!(" (mirrored to {normalized})")
    } else {
        String::new()
    };
    Ok(LOSlopeVerdict::ruled(
        status,
        LoRule::LSpaceInterval,
        format!(
            "{alpha} on {k}{framed}: {normalized} {relation} {bound} = rs - r - s, so the filling is {what}"
        ),
    ))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssertedSlope {
    pub slope: Slope,
    pub status: LoStatus,
}

/// A piece whose filling verdicts are supplied by the caller.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct UserPiece {
    #[serde(default)]
    pub asserted: Vec<AssertedSlope>,
    /// The longitudinal filling is prime; enables the Betti number rule.
    #[serde(default)]
    pub zero_filling_prime: bool,
}

impl UserPiece {
    pub fn asserted(&self, alpha: Slope) -> Option<LoStatus> {
        self.asserted
            .iter()
            .find(|a| a.slope == alpha && a.status != LoStatus::Unknown)
            .map(|a| a.status)
    }
}

/// A knot exterior in an integer homology sphere, framed by its meridian and
/// null-homologous longitude.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KnotExterior {
    Torus(TorusKnotPiece),
    Fiber {
        zhs: BrieskornZHS,
        fiber: usize,
        chirality: Chirality,
    },
    User(UserPiece),
}

impl KnotExterior {
    /// A regular fibre of Σ(r, s) = S³ is the torus knot T(r, s).
    fn torus_knot(&self) -> Option<TorusKnotPiece> {
        match self {
            KnotExterior::Torus(k) => Some(*k),
            KnotExterior::Fiber {
                zhs,
                fiber,
                chirality,
            } => {
                let others: Vec<u64> = zhs
                    .multiplicities
                    .iter()
                    .enumerate()
                    .filter(|&(j, &a)| j != *fiber && a > 1)
                    .map(|(_, &a)| a)
                    .collect();
                (zhs.multiplicities[*fiber] == 1 && others.len() == 2)
                    .then(|| TorusKnotPiece::new(others[0], others[1], *chirality).ok())
                    .flatten()
            }
            KnotExterior::User(_) => None,
        }
    }

    fn surgery(&self, alpha: Slope) -> Option<SurgeryResult> {
        match self {
            KnotExterior::Torus(k) => Some(moser_surgery(k, alpha)),
            KnotExterior::Fiber {
                zhs,
                fiber,
                chirality,
            } => Some(fiber_surgery(zhs, *fiber, *chirality, alpha)),
            KnotExterior::User(_) => None,
        }
    }

    fn describe(&self) -> String {
        match self {
            KnotExterior::Torus(k) => k.to_string(),
            KnotExterior::Fiber {
                zhs,
                fiber,
                chirality,
            } => format!("fibre {fiber} of {zhs} {}", chirality.as_str()),
            KnotExterior::User(_) => "user piece".to_string(),
        }
    }
}

/// First applicable rule wins: B1Rule, ZHSClassification, LSpaceInterval,
/// UserAsserted; otherwise Unknown.
pub fn slope_lo_verdict(ext: &KnotExterior, alpha: Slope) -> LOSlopeVerdict {
    let name = ext.describe();
    if alpha.p() == 0 {
        match ext {
            KnotExterior::Torus(_) | KnotExterior::Fiber { .. } => {
                return LOSlopeVerdict::ruled(
                    LoStatus::Lo,
                    LoRule::B1Rule,
                    format!(
                        "0-filling of {name} is Seifert fibred with b1 = 1, hence prime (Heil), and its group surjects onto Z"
                    ),
                )
            }
            KnotExterior::User(u) if u.zero_filling_prime => {
                return LOSlopeVerdict::ruled(
                    LoStatus::Lo,
                    LoRule::B1Rule,
                    "0-filling has b1 = 1 and is prime by caller flag; its group surjects onto Z".to_string(),
                )
            }
            KnotExterior::User(_) => {}
        }
    }
    if alpha.p().abs() == 1 {
        match ext.surgery(alpha) {
            Some(SurgeryResult::Lens { .. }) => {
                return LOSlopeVerdict::ruled(
                    LoStatus::NotLo,
                    LoRule::ZhsClassification,
                    format!("{alpha}-filling of {name} is S³, whose group is trivial"),
                )
            }
            Some(SurgeryResult::Seifert { multiplicities }) => {
                if let Ok(z) = BrieskornZHS::new(multiplicities) {
                    let v = zhs_lo_status(&z);
                    return LOSlopeVerdict {
                        evidence: format!("{alpha}-filling of {name}: {}", v.evidence),
                        ..v
                    };
                }
            }
            Some(SurgeryResult::Reducible) | None => {}
        }
    }
    if let Some(k) = ext.torus_knot() {
        if let Ok(v) = torus_knot_lspace_verdict(&k, alpha) {
            return v;
        }
    }
    if let KnotExterior::User(u) = ext {
        if let Some(status) = u.asserted(alpha) {
            return LOSlopeVerdict::ruled(
                status,
                LoRule::UserAsserted,
                format!("caller asserts the {alpha}-filling is {status}"),
            );
        }
    }
    LOSlopeVerdict::unknown(format!("no rule decides the {alpha}-filling of {name}"))
}

/// Normalized slopes with |p|, |q| <= bound, ordered by max(|p|, |q|), then p, then q.
pub fn slopes_up_to(bound: u64) -> Vec<Slope> {
    let n = bound as i64;
    let mut out: Vec<Slope> = (0..=n)
        .flat_map(|q| (-n..=n).map(move |p| (p, q)))
        .filter_map(|(p, q)| Slope::new(p, q).ok())
        .filter(|s| s.q() > 0 || *s == Slope::MERIDIAN)
        .collect();
    out.sort_by_key(|s| (s.p().abs().max(s.q()), s.p(), s.q()));
    out.dedup();
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Piece {
    /// Exterior of T(r, s) in S³; one boundary.
    TorusKnot {
        r: u64,
        s: u64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        chirality: Option<Chirality>,
    },
    /// Exterior of some fibres of Σ(a); edges pick the removed fibre by index.
    BrieskornKnot {
        multiplicities: BrieskornZHS,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        chirality: Option<Chirality>,
    },
    /// One boundary, verdicts supplied by the caller.
    User(UserPiece),
}

impl Piece {
    fn chirality(&self) -> Option<Chirality> {
        match self {
            Piece::TorusKnot { chirality, .. } | Piece::BrieskornKnot { chirality, .. } => *chirality,
            Piece::User(_) => None,
        }
    }

    fn has_chirality(&self) -> bool {
        !matches!(self, Piece::User(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Node {
    pub id: String,
    #[serde(flatten)]
    pub piece: Piece,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeEnd {
    pub node: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fiber: Option<usize>,
}

impl EdgeEnd {
    pub fn new(node: &str) -> Self {
        EdgeEnd {
            node: node.to_string(),
            fiber: None,
        }
    }

    pub fn fiber(node: &str, fiber: usize) -> Self {
        EdgeEnd {
            node: node.to_string(),
            fiber: Some(fiber),
        }
    }
}

fn splice_matrix() -> GluingMatrix {
    GluingMatrix::SPLICE
}

/// Glues the boundary at `a` to the boundary at `b`; `matrix` takes the
/// (μ, λ) framing at `a` into the framing at `b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub a: EdgeEnd,
    pub b: EdgeEnd,
    #[serde(default = "splice_matrix")]
    pub matrix: GluingMatrix,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpliceTree {
    #[serde(default)]
    pub nodes: Vec<Node>,
    #[serde(default)]
    pub edges: Vec<Edge>,
}

impl SpliceTree {
    /// Two positive trefoil exteriors spliced meridian to longitude.
    pub fn double_trefoil() -> Self {
        let trefoil = |id: &str| Node {
            id: id.to_string(),
            piece: Piece::TorusKnot {
                r: 2,
                s: 3,
                chirality: Some(Chirality::Positive),
            },
        };
        SpliceTree {
            nodes: vec![trefoil("K1"), trefoil("K2")],
            edges: vec![Edge {
                a: EdgeEnd::new("K1"),
                b: EdgeEnd::new("K2"),
                matrix: GluingMatrix::SPLICE,
            }],
        }
    }

    pub fn node_index(&self, id: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n.id == id)
    }

    fn end_index(&self, end: &EdgeEnd) -> usize {
        self.node_index(&end.node).expect("validated tree")
    }

    /// Checks ids, boundaries, acyclicity and |H1| = 1 across every edge.
    pub fn validate(&self) -> Result<(), SeifertError> {
        let mut seen = BTreeSet::new();
        for n in &self.nodes {
            if !seen.insert(n.id.as_str()) {
                return Err(SeifertError::DuplicateNode(n.id.clone()));
            }
            if let Piece::TorusKnot { r, s, .. } = n.piece {
                TorusKnotPiece::new(r, s, Chirality::Positive)?;
            }
        }
        let mut used = BTreeSet::new();
        let mut parent: Vec<usize> = (0..self.nodes.len()).collect();
        for (i, e) in self.edges.iter().enumerate() {
            let mut ends = [0usize; 2];
            for (slot, end) in [&e.a, &e.b].into_iter().enumerate() {
                let v = self
                    .node_index(&end.node)
                    .ok_or_else(|| SeifertError::UnknownNode(i, end.node.clone()))?;
                let ok = match (&self.nodes[v].piece, end.fiber) {
                    (Piece::BrieskornKnot { multiplicities, .. }, Some(f)) => {
                        f < multiplicities.multiplicities().len()
                    }
                    (Piece::TorusKnot { .. } | Piece::User(_), None) => true,
                    _ => false,
                };
                if !ok {
                    return Err(SeifertError::BadBoundary {
                        edge: i,
                        node: end.node.clone(),
                        fiber: end.fiber,
                    });
                }
                if !used.insert((v, end.fiber)) {
                    return Err(SeifertError::BoundaryReused {
                        node: end.node.clone(),
                        fiber: end.fiber,
                    });
                }
                ends[slot] = v;
            }
            let (ra, rb) = (find(&mut parent, ends[0]), find(&mut parent, ends[1]));
            if ra == rb {
                return Err(SeifertError::Cycle(i));
            }
            parent[ra] = rb;
            let order = union_homology_order(e.matrix, Slope::LONGITUDE, Slope::LONGITUDE);
            if order != 1 {
                return Err(SeifertError::NotHomologySphere { edge: i, order });
            }
        }
        Ok(())
    }

    /// Node indices of each connected component, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut parent: Vec<usize> = (0..self.nodes.len()).collect();
        for e in &self.edges {
            let (a, b) = (self.end_index(&e.a), self.end_index(&e.b));
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for v in 0..self.nodes.len() {
            let r = find(&mut parent, v);
            groups.entry(r).or_default().push(v);
        }
        groups.into_values().collect()
    }

    /// Disjoint union of two trees plus a splice edge between the given
    /// boundaries.
    pub fn splice(&self, other: &SpliceTree, a: EdgeEnd, b: EdgeEnd) -> Result<Self, SeifertError> {
        let mut out = self.clone();
        out.nodes.extend(other.nodes.iter().cloned());
        out.edges.extend(other.edges.iter().cloned());
        out.edges.push(Edge {
            a,
            b,
            matrix: GluingMatrix::SPLICE,
        });
        out.validate()?;
        Ok(out)
    }
}

fn find(parent: &mut [usize], v: usize) -> usize {
    let mut r = v;
    while parent[r] != r {
        r = parent[r];
    }
    let mut c = v;
    while parent[c] != r {
        let next = parent[c];
        parent[c] = r;
        c = next;
    }
    r
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComponentStatus {
    Lo,
    NotLo,
    /// S³: a trivial free factor.
    Trivial,
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GluingBranch {
    /// One side's closed filling is left-orderable and the other side's
    /// longitude is a left-orderable slope.
    SpliceRule,
    /// A slope found by bounded search, left-orderable on both sides.
    SlopePair,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "by", rename_all = "snake_case")]
pub enum SideEvidence {
    Piece { verdict: LOSlopeVerdict },
    /// The slope is the meridian and the side's closed filling is certified.
    ClosedFilling { certificate: Box<ComponentCertificate> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SideWitness {
    pub nodes: Vec<String>,
    /// The node whose boundary meets the cut torus.
    pub boundary: String,
    /// In the framing of `boundary`.
    pub slope: Slope,
    pub evidence: SideEvidence,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum Proof {
    ClosedPiece {
        node: String,
        verdict: LOSlopeVerdict,
    },
    Gluing {
        edge: usize,
        branch: GluingBranch,
        side1: SideWitness,
        side2: SideWitness,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentCertificate {
    pub nodes: Vec<String>,
    pub status: ComponentStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub proof: Option<Proof>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub status: LoStatus,
    pub search_bound: u64,
    pub components: Vec<ComponentCertificate>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub chirality_assumptions: BTreeMap<String, Chirality>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub hypotheses: Vec<String>,
}

impl Certificate {
    /// (edge, slope on side 1, slope on side 2) for every gluing step, outermost first.
    pub fn edge_pairs(&self) -> Vec<(usize, Slope, Slope)> {
        fn walk(c: &ComponentCertificate, out: &mut Vec<(usize, Slope, Slope)>) {
            if let Some(Proof::Gluing {
                edge, side1, side2, ..
            }) = &c.proof
            {
                out.push((*edge, side1.slope, side2.slope));
                for side in [side1, side2] {
                    if let SideEvidence::ClosedFilling { certificate } = &side.evidence {
                        walk(certificate, out);
                    }
                }
            }
        }
        let mut out = Vec::new();
        for c in &self.components {
            walk(c, &mut out);
        }
        out
    }
}

/// Free product rule: the group is left-orderable iff every nontrivial
/// factor is, and the trivial group is not.
fn combine(statuses: impl IntoIterator<Item = ComponentStatus>) -> LoStatus {
    let mut any_lo = false;
    let mut any_unknown = false;
    for s in statuses {
        match s {
            ComponentStatus::NotLo => return LoStatus::NotLo,
            ComponentStatus::Unknown => any_unknown = true,
            ComponentStatus::Lo => any_lo = true,
            ComponentStatus::Trivial => {}
        }
    }
    if any_unknown {
        LoStatus::Unknown
    } else if any_lo {
        LoStatus::Lo
    } else {
        LoStatus::NotLo
    }
}

type SubTree = (BTreeSet<usize>, BTreeSet<usize>);
type MemoKey = (Vec<usize>, Vec<usize>);

struct Ctx<'a> {
    tree: &'a SpliceTree,
    chirality: Vec<Chirality>,
    bound: u64,
    /// Keyed by (sorted nodes, sorted edges) of a subtree.
    memo: RefCell<HashMap<MemoKey, ComponentCertificate>>,
}

impl<'a> Ctx<'a> {
    fn new(tree: &'a SpliceTree, chirality: Vec<Chirality>, bound: u64) -> Self {
        Ctx {
            tree,
            chirality,
            bound,
            memo: RefCell::new(HashMap::new()),
        }
    }

    fn id(&self, v: usize) -> String {
        self.tree.nodes[v].id.clone()
    }

    fn ids(&self, nodes: &BTreeSet<usize>) -> Vec<String> {
        nodes.iter().map(|&v| self.id(v)).collect()
    }

    fn ends(&self, e: usize) -> (usize, usize) {
        let edge = &self.tree.edges[e];
        (self.tree.end_index(&edge.a), self.tree.end_index(&edge.b))
    }

    fn degree(&self, v: usize, edges: &BTreeSet<usize>) -> usize {
        edges
            .iter()
            .filter(|&&e| {
                let (a, b) = self.ends(e);
                a == v || b == v
            })
            .count()
    }

    fn exterior(&self, v: usize, e: usize) -> KnotExterior {
        let edge = &self.tree.edges[e];
        let end = if self.tree.end_index(&edge.a) == v {
            &edge.a
        } else {
            &edge.b
        };
        match &self.tree.nodes[v].piece {
            Piece::TorusKnot { r, s, .. } => KnotExterior::Torus(TorusKnotPiece {
                r: *r,
                s: *s,
                chirality: self.chirality[v],
            }),
            Piece::BrieskornKnot { multiplicities, .. } => KnotExterior::Fiber {
                zhs: multiplicities.clone(),
                fiber: end.fiber.expect("validated tree"),
                chirality: self.chirality[v],
            },
            Piece::User(u) => KnotExterior::User(u.clone()),
        }
    }

    fn closed(&self, v: usize) -> (ComponentStatus, LOSlopeVerdict) {
        match &self.tree.nodes[v].piece {
            Piece::TorusKnot { r, s, .. } => (
                ComponentStatus::Trivial,
                LOSlopeVerdict::ruled(
                    LoStatus::NotLo,
                    LoRule::ZhsClassification,
                    format!("meridian filling of T({r},{s}) is S³, whose group is trivial"),
                ),
            ),
            Piece::BrieskornKnot { multiplicities, .. } => {
                let status = match recognize_exceptional(multiplicities) {
                    Exceptional::S3 => ComponentStatus::Trivial,
                    Exceptional::Poincare => ComponentStatus::NotLo,
                    Exceptional::Other => ComponentStatus::Lo,
                };
                (status, zhs_lo_status(multiplicities))
            }
            Piece::User(u) => {
                let v = slope_lo_verdict(&KnotExterior::User(u.clone()), Slope::MERIDIAN);
                let status = match v.status {
                    LoStatus::Lo => ComponentStatus::Lo,
                    LoStatus::NotLo => ComponentStatus::NotLo,
                    LoStatus::Unknown => ComponentStatus::Unknown,
                };
                (status, v)
            }
        }
    }

    /// Splits a subtree along edge `e` into the side containing its `a`
    /// endpoint and the side containing its `b` endpoint.
    fn split(&self, nodes: &BTreeSet<usize>, edges: &BTreeSet<usize>, e: usize) -> (SubTree, SubTree) {
        let (a, _) = self.ends(e);
        let rest: BTreeSet<usize> = edges.iter().copied().filter(|&x| x != e).collect();
        let mut side_a = BTreeSet::from([a]);
        let mut stack = vec![a];
        while let Some(v) = stack.pop() {
            for &x in &rest {
                let (p, q) = self.ends(x);
                let other = if p == v {
                    q
                } else if q == v {
                    p
                } else {
                    continue;
                };
                if side_a.insert(other) {
                    stack.push(other);
                }
            }
        }
        let side_b: BTreeSet<usize> = nodes.difference(&side_a).copied().collect();
        let edges_of = |side: &BTreeSet<usize>| -> BTreeSet<usize> {
            rest.iter()
                .copied()
                .filter(|&x| side.contains(&self.ends(x).0))
                .collect()
        };
        let ea = edges_of(&side_a);
        let eb = edges_of(&side_b);
        ((side_a, ea), (side_b, eb))
    }

    fn certify(&self, nodes: &BTreeSet<usize>, edges: &BTreeSet<usize>) -> ComponentCertificate {
        let key = (
            nodes.iter().copied().collect::<Vec<_>>(),
            edges.iter().copied().collect::<Vec<_>>(),
        );
        if let Some(c) = self.memo.borrow().get(&key) {
            return c.clone();
        }
        let cert = self.certify_uncached(nodes, edges);
        self.memo.borrow_mut().insert(key, cert.clone());
        cert
    }

    fn certify_uncached(&self, nodes: &BTreeSet<usize>, edges: &BTreeSet<usize>) -> ComponentCertificate {
        let ids = self.ids(nodes);
        if edges.is_empty() {
            let v = *nodes.iter().next().expect("nonempty component");
            let (status, verdict) = self.closed(v);
            return ComponentCertificate {
                nodes: ids,
                status,
                proof: Some(Proof::ClosedPiece {
                    node: self.id(v),
                    verdict,
                }),
                notes: Vec::new(),
            };
        }
        let mut notes = Vec::new();
        for &e in edges {
            let (a, b) = self.ends(e);
            if self.degree(a, edges) != 1 && self.degree(b, edges) != 1 {
                continue;
            }
            match self.try_edge(nodes, edges, e) {
                Ok(proof) => {
                    return ComponentCertificate {
                        nodes: ids,
                        status: ComponentStatus::Lo,
                        proof: Some(proof),
                        notes: Vec::new(),
                    }
                }
                Err(mut why) => notes.append(&mut why),
            }
        }
        ComponentCertificate {
            nodes: ids,
            status: ComponentStatus::Unknown,
            proof: None,
            notes,
        }
    }

    /// Gluing matrix from the side containing `from` to the other side of edge `e`.
    fn oriented(&self, e: usize, from: usize) -> GluingMatrix {
        let m = self.tree.edges[e].matrix;
        if self.ends(e).0 == from {
            m
        } else {
            m.inverse()
        }
    }

    fn try_edge(&self, nodes: &BTreeSet<usize>, edges: &BTreeSet<usize>, e: usize) -> Result<Proof, Vec<String>> {
        let (a, b) = self.ends(e);
        let (side_a, side_b) = self.split(nodes, edges, e);
        let mut why = Vec::new();
        for ((s1, v1), (s2, v2)) in [((&side_b, b), (&side_a, a)), ((&side_a, a), (&side_b, b))] {
            if s2.0.len() != 1 {
                continue;
            }
            match self.try_splice_rule(e, (s1, v1), (s2, v2)) {
                Ok(p) => return Ok(p),
                Err(w) => why.push(w),
            }
        }
        if side_a.0.len() == 1 && side_b.0.len() == 1 {
            let f = self.oriented(e, a);
            let (xa, xb) = (self.exterior(a, e), self.exterior(b, e));
            for alpha in slopes_up_to(self.bound) {
                let va = slope_lo_verdict(&xa, alpha);
                if !va.is_lo() {
                    continue;
                }
                let image = apply_gluing(f, alpha);
                let vb = slope_lo_verdict(&xb, image);
                if vb.is_lo() {
                    return Ok(Proof::Gluing {
                        edge: e,
                        branch: GluingBranch::SlopePair,
                        side1: SideWitness {
                            nodes: self.ids(&side_a.0),
                            boundary: self.id(a),
                            slope: alpha,
                            evidence: SideEvidence::Piece { verdict: va },
                        },
                        side2: SideWitness {
                            nodes: self.ids(&side_b.0),
                            boundary: self.id(b),
                            slope: image,
                            evidence: SideEvidence::Piece { verdict: vb },
                        },
                    });
                }
            }
            why.push(format!(
                "edge {e}: no slope with |p|, |q| <= {} is left-orderable on both sides",
                self.bound
            ));
        } else {
            why.push(format!(
                "edge {e}: slope search needs single-piece sides"
            ));
        }
        Err(why)
    }

    fn try_splice_rule(&self, e: usize, (s1, v1): (&SubTree, usize), (s2, v2): (&SubTree, usize)) -> Result<Proof, String> {
        let f = self.oriented(e, v1);
        let alpha = apply_gluing(f.inverse(), Slope::LONGITUDE);
        let v_long = slope_lo_verdict(&self.exterior(v2, e), Slope::LONGITUDE);
        if !v_long.is_lo() {
            return Err(format!(
                "edge {e}: longitude of {} is not a certified left-orderable slope",
                self.id(v2)
            ));
        }
        let evidence1 = if s1.0.len() == 1 {
            let v = slope_lo_verdict(&self.exterior(v1, e), alpha);
            if !v.is_lo() {
                return Err(format!(
                    "edge {e}: {alpha}-filling of {} is {}",
                    self.id(v1),
                    v.status
                ));
            }
            SideEvidence::Piece { verdict: v }
        } else {
            if alpha != Slope::MERIDIAN {
                return Err(format!(
                    "edge {e}: preferred meridian {alpha} of {} is not the piece meridian",
                    self.id(v1)
                ));
            }
            let sub = self.certify(&s1.0, &s1.1);
            if sub.status != ComponentStatus::Lo {
                return Err(format!(
                    "edge {e}: closed filling of {:?} is not certified left-orderable",
                    sub.nodes
                ));
            }
            SideEvidence::ClosedFilling {
                certificate: Box::new(sub),
            }
        };
        Ok(Proof::Gluing {
            edge: e,
            branch: GluingBranch::SpliceRule,
            side1: SideWitness {
                nodes: self.ids(&s1.0),
                boundary: self.id(v1),
                slope: alpha,
                evidence: evidence1,
            },
            side2: SideWitness {
                nodes: self.ids(&s2.0),
                boundary: self.id(v2),
                slope: Slope::LONGITUDE,
                evidence: SideEvidence::Piece { verdict: v_long },
            },
        })
    }

    fn component_sets(&self, comp: &[usize]) -> SubTree {
        let nodes: BTreeSet<usize> = comp.iter().copied().collect();
        let edges = (0..self.tree.edges.len())
            .filter(|&e| nodes.contains(&self.ends(e).0))
            .collect();
        (nodes, edges)
    }
}

const MAX_UNSPECIFIED: usize = 10;

fn unspecified_nodes(tree: &SpliceTree) -> Vec<usize> {
    let glued: BTreeSet<&str> = tree
        .edges
        .iter()
        .flat_map(|e| [e.a.node.as_str(), e.b.node.as_str()])
        .collect();
    (0..tree.nodes.len())
        .filter(|&v| {
            let n = &tree.nodes[v];
            n.piece.has_chirality() && n.piece.chirality().is_none() && glued.contains(n.id.as_str())
        })
        .collect()
}

fn hypotheses(components: &[ComponentCertificate], assumptions: &BTreeMap<String, Chirality>) -> Vec<String> {
    fn walk(c: &ComponentCertificate, out: &mut BTreeSet<String>) {
        let Some(Proof::Gluing { side1, side2, .. }) = &c.proof else {
            return;
        };
        for side in [side1, side2] {
            match &side.evidence {
                SideEvidence::Piece { verdict } if verdict.rule == Some(LoRule::B1Rule) => {
                    out.insert(format!("0-filling of {} is prime", side.boundary));
                }
                SideEvidence::Piece { .. } => {}
                SideEvidence::ClosedFilling { certificate } => {
                    out.insert(format!(
                        "closed filling of {:?} is irreducible; JSJ minimality after filling not checked",
                        certificate.nodes
                    ));
                    walk(certificate, out);
                }
            }
        }
    }
    let mut out = BTreeSet::new();
    for c in components {
        walk(c, &mut out);
    }
    for (id, c) in assumptions {
        out.insert(format!("{id} assumed {} chirality", c.as_str()));
    }
    out.into_iter().collect()
}

/// Searches for a left-orderability certificate, trying slopes with
/// |p|, |q| <= `bound` where a slope search is needed. Components are
/// certified independently. Pieces of unspecified chirality are tried in
/// every assignment, all positive first, and the assignment used is recorded.
pub fn certificate_search(tree: &SpliceTree, bound: u64) -> Result<Certificate, SeifertError> {
    tree.validate()?;
    let free = unspecified_nodes(tree);
    if free.len() > MAX_UNSPECIFIED {
        return Err(SeifertError::TooManyUnspecified(free.len(), MAX_UNSPECIFIED));
    }
    let mut first: Option<Certificate> = None;
    for mask in 0u32..(1 << free.len()) {
        let mut chirality: Vec<Chirality> = tree
            .nodes
            .iter()
            .map(|n| n.piece.chirality().unwrap_or(Chirality::Positive))
            .collect();
        let mut assumptions = BTreeMap::new();
        for (bit, &v) in free.iter().enumerate() {
            if mask & (1 << bit) != 0 {
                chirality[v] = Chirality::Negative;
            }
            assumptions.insert(tree.nodes[v].id.clone(), chirality[v]);
        }
        let ctx = Ctx::new(tree, chirality, bound);
        let components: Vec<ComponentCertificate> = tree
            .components()
            .iter()
            .map(|comp| {
                let (nodes, edges) = ctx.component_sets(comp);
                ctx.certify(&nodes, &edges)
            })
            .collect();
        let status = combine(components.iter().map(|c| c.status));
        let cert = Certificate {
            status,
            search_bound: bound,
            hypotheses: hypotheses(&components, &assumptions),
            components,
            chirality_assumptions: assumptions,
        };
        if status == LoStatus::Lo {
            return Ok(cert);
        }
        first.get_or_insert(cert);
    }
    Ok(first.expect("at least one assignment"))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub valid: bool,
    pub checks: usize,
    pub failures: Vec<String>,
}

struct Verifier<'a> {
    ctx: Ctx<'a>,
    checks: usize,
    failures: Vec<String>,
}

impl Verifier<'_> {
    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) -> bool {
        self.checks += 1;
        if !ok {
            self.failures.push(msg());
        }
        ok
    }

    fn same_nodes(&self, claimed: &[String], actual: &BTreeSet<usize>) -> bool {
        let claimed_set: BTreeSet<String> = claimed.iter().cloned().collect();
        claimed_set.len() == claimed.len() && claimed_set == self.ctx.ids(actual).into_iter().collect()
    }

    fn component(&mut self, nodes: &BTreeSet<usize>, edges: &BTreeSet<usize>, c: &ComponentCertificate) {
        let ids = c.nodes.clone();
        if !self.check(self.same_nodes(&c.nodes, nodes), || {
            format!("component {ids:?} does not match the tree")
        }) {
            return;
        }
        match &c.proof {
            None => {
                self.check(c.status == ComponentStatus::Unknown, || {
                    format!("component {ids:?} claims {:?} without proof", c.status)
                });
            }
            Some(Proof::ClosedPiece { node, verdict }) => {
                let single = edges.is_empty() && nodes.len() == 1;
                if !self.check(single && self.ctx.id(*nodes.iter().next().unwrap()) == *node, || {
                    format!("closed-piece proof for {ids:?} needs a single unglued node {node:?}")
                }) {
                    return;
                }
                let (status, v) = self.ctx.closed(*nodes.iter().next().unwrap());
                self.check(status == c.status && v.status == verdict.status, || {
                    format!("closed filling of {node} re-derives as {:?}/{}", status, v.status)
                });
            }
            Some(Proof::Gluing {
                edge,
                branch,
                side1,
                side2,
            }) => {
                self.check(c.status == ComponentStatus::Lo, || {
                    format!("gluing proof for {ids:?} must conclude lo")
                });
                self.gluing(nodes, edges, *edge, *branch, side1, side2);
            }
        }
    }

    fn gluing(
        &mut self,
        nodes: &BTreeSet<usize>,
        edges: &BTreeSet<usize>,
        e: usize,
        branch: GluingBranch,
        side1: &SideWitness,
        side2: &SideWitness,
    ) {
        if !self.check(edges.contains(&e), || format!("edge {e} is not in the component")) {
            return;
        }
        let (a, b) = self.ctx.ends(e);
        let (sa, sb) = self.ctx.split(nodes, edges, e);
        let (s1, v1, s2, v2) = if self.same_nodes(&side1.nodes, &sa.0) {
            (sa, a, sb, b)
        } else {
            (sb, b, sa, a)
        };
        if !self.check(
            self.same_nodes(&side1.nodes, &s1.0)
                && self.same_nodes(&side2.nodes, &s2.0)
                && side1.boundary == self.ctx.id(v1)
                && side2.boundary == self.ctx.id(v2),
            || format!("edge {e}: sides do not match the cut"),
        ) {
            return;
        }
        let f = self.ctx.oriented(e, v1);
        self.check(apply_gluing(f, side1.slope) == side2.slope, || {
            format!(
                "edge {e}: {} does not glue to {} (it maps to {})",
                side1.slope,
                side2.slope,
                apply_gluing(f, side1.slope)
            )
        });
        match branch {
            GluingBranch::SpliceRule => {
                self.check(side2.slope == Slope::LONGITUDE, || {
                    format!("edge {e}: splice rule needs the longitude on {}", side2.boundary)
                });
            }
            GluingBranch::SlopePair => {
                let both_pieces = matches!(side1.evidence, SideEvidence::Piece { .. })
                    && matches!(side2.evidence, SideEvidence::Piece { .. });
                self.check(both_pieces, || format!("edge {e}: slope pair needs piece verdicts"));
            }
        }
        self.side(e, &s1, v1, side1);
        self.side(e, &s2, v2, side2);
    }

    fn side(&mut self, e: usize, s: &SubTree, v: usize, w: &SideWitness) {
        match &w.evidence {
            SideEvidence::Piece { verdict } => {
                if !self.check(s.0.len() == 1, || {
                    format!("edge {e}: piece verdict on multi-piece side {:?}", w.nodes)
                }) {
                    return;
                }
                let again = slope_lo_verdict(&self.ctx.exterior(v, e), w.slope);
                self.check(again.is_lo() && again.status == verdict.status && again.rule == verdict.rule, || {
                    format!(
                        "edge {e}: {}-filling of {} re-derives as {} ({})",
                        w.slope, w.boundary, again.status, again.evidence
                    )
                });
            }
            SideEvidence::ClosedFilling { certificate } => {
                self.check(w.slope == Slope::MERIDIAN, || {
                    format!("edge {e}: closed filling of {:?} must use the meridian", w.nodes)
                });
                self.check(certificate.status == ComponentStatus::Lo, || {
                    format!("edge {e}: closed filling of {:?} is not claimed lo", w.nodes)
                });
                self.component(&s.0, &s.1, certificate);
            }
        }
    }
}

/// Re-derives every verdict, slope image and homology condition in `cert`.
pub fn verify_certificate(tree: &SpliceTree, cert: &Certificate) -> VerificationReport {
    let fail = |msg: String| VerificationReport {
        valid: false,
        checks: 1,
        failures: vec![msg],
    };
    if let Err(e) = tree.validate() {
        return fail(format!("tree: {e}"));
    }
    let mut chirality = Vec::with_capacity(tree.nodes.len());
    let free: BTreeSet<usize> = unspecified_nodes(tree).into_iter().collect();
    for (v, n) in tree.nodes.iter().enumerate() {
        let assumed = cert.chirality_assumptions.get(&n.id).copied();
        let c = match (n.piece.chirality(), assumed) {
            (Some(c), None) => c,
            (None, Some(c)) => c,
            (None, None) if !free.contains(&v) => Chirality::Positive,
            (None, None) => return fail(format!("chirality of {} is neither given nor assumed", n.id)),
            (Some(_), Some(_)) => return fail(format!("chirality of {} is fixed by the tree", n.id)),
        };
        chirality.push(c);
    }
    if let Some(stray) = cert
        .chirality_assumptions
        .keys()
        .find(|id| tree.node_index(id).is_none())
    {
        return fail(format!("assumption for unknown node {stray:?}"));
    }
    let mut ver = Verifier {
        ctx: Ctx::new(tree, chirality, cert.search_bound),
        checks: 0,
        failures: Vec::new(),
    };
    let comps = tree.components();
    ver.check(comps.len() == cert.components.len(), || {
        format!(
            "tree has {} components, certificate has {}",
            comps.len(),
            cert.components.len()
        )
    });
    for comp in &comps {
        let (nodes, edges) = ver.ctx.component_sets(comp);
        match cert.components.iter().find(|c| ver.same_nodes(&c.nodes, &nodes)) {
            Some(c) => ver.component(&nodes, &edges, c),
            None => {
                let ids = ver.ctx.ids(&nodes);
                ver.check(false, || format!("no certificate for component {ids:?}"));
            }
        }
    }
    let status = combine(cert.components.iter().map(|c| c.status));
    ver.check(status == cert.status, || {
        format!("overall status re-derives as {status}, certificate says {}", cert.status)
    });
    VerificationReport {
        valid: ver.failures.is_empty(),
        checks: ver.checks,
        failures: ver.failures,
    }
}

/// Inputs to the rank formula for rational surgery on a knot in an L-space.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HFParams {
    pub p: i64,
    pub q: i64,
    pub nu: i64,
    #[serde(default)]
    pub as_ranks: Vec<i64>,
}

/// rk HF(M(p/q)) = p + 2·max{0, (2ν - 1)q - p} + q·Σ(rk A_s - 1),
/// with |p| + q·Σ(rk A_s - 1) when ν = 0.
pub fn hf_surgery_rank(params: &HFParams) -> Result<u64, SeifertError> {
    let HFParams { p, q, nu, as_ranks } = params;
    if *q <= 0 {
        return Err(SeifertError::InvalidParams(format!("q = {q} must be positive")));
    }
    if *nu < 0 {
        return Err(SeifertError::InvalidParams(format!("nu = {nu} must be nonnegative")));
    }
    if let Some(r) = as_ranks.iter().find(|&&r| r < 1) {
        return Err(SeifertError::InvalidParams(format!("rank {r} must be at least 1")));
    }
    let (p, q, nu) = (*p as i128, *q as i128, *nu as i128);
    let excess: i128 = as_ranks.iter().map(|&r| r as i128 - 1).sum::<i128>() * q;
    let rank = if nu == 0 {
        p.abs() + excess
    } else {
        p + 2 * ((2 * nu - 1) * q - p).max(0) + excess
    };
    u64::try_from(rank).map_err(|_| SeifertError::InvalidParams("rank overflows u64".to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(p: i64, q: i64) -> Slope {
        Slope::new(p, q).unwrap()
    }

    fn z(m: &[u64]) -> BrieskornZHS {
        BrieskornZHS::new(m.to_vec()).unwrap()
    }

    const POS: TorusKnotPiece = TorusKnotPiece {
        r: 2,
        s: 3,
        chirality: Chirality::Positive,
    };

    #[test]
    fn recognition() {
        assert_eq!(recognize_exceptional(&z(&[2, 3, 5])), Exceptional::Poincare);
        assert_eq!(recognize_exceptional(&z(&[5, 1, 3, 2])), Exceptional::Poincare);
        assert_eq!(recognize_exceptional(&z(&[1, 1])), Exceptional::S3);
        assert_eq!(recognize_exceptional(&z(&[2, 3, 7])), Exceptional::Other);
        assert_eq!(
            BrieskornZHS::new(vec![2, 4, 5]),
            Err(SeifertError::NotCoprime(vec![2, 4, 5]))
        );
        assert_eq!(BrieskornZHS::new(vec![0]), Err(SeifertError::ZeroMultiplicity));
    }

    #[test]
    fn zhs_status() {
        assert_eq!(zhs_lo_status(&z(&[2, 3, 5])).status, LoStatus::NotLo);
        assert_eq!(zhs_lo_status(&z(&[2, 3, 7])).status, LoStatus::Lo);
        assert_eq!(zhs_lo_status(&z(&[1])).status, LoStatus::NotLo);
        assert_eq!(zhs_lo_status(&z(&[1])).rule, Some(LoRule::ZhsClassification));
    }

    #[test]
    fn moser_examples() {
        assert_eq!(
            moser_surgery(&POS, s(1, 1)),
            SurgeryResult::Seifert {
                multiplicities: vec![2, 3, 5]
            }
        );
        assert_eq!(moser_surgery(&POS, s(6, 1)), SurgeryResult::Reducible);
        assert_eq!(moser_surgery(&POS, s(5, 1)), SurgeryResult::Lens { h1_order: 5 });
        assert_eq!(moser_surgery(&POS, Slope::MERIDIAN), SurgeryResult::Lens { h1_order: 1 });
        let neg = TorusKnotPiece::trefoil(Chirality::Negative);
        assert_eq!(moser_surgery(&neg, s(-6, 1)), SurgeryResult::Reducible);
        assert_eq!(
            moser_surgery(&neg, s(-1, 1)),
            SurgeryResult::Seifert {
                multiplicities: vec![2, 3, 5]
            }
        );
    }

    #[test]
    fn lspace_examples() {
        let v = torus_knot_lspace_verdict(&POS, s(-1, 1)).unwrap();
        assert_eq!((v.status, v.rule), (LoStatus::Lo, Some(LoRule::LSpaceInterval)));
        assert_eq!(torus_knot_lspace_verdict(&POS, s(1, 1)).unwrap().status, LoStatus::NotLo);
        assert_eq!(torus_knot_lspace_verdict(&POS, s(1, 2)).unwrap().status, LoStatus::Lo);
        assert_eq!(torus_knot_lspace_verdict(&POS, Slope::MERIDIAN).unwrap().status, LoStatus::NotLo);
        assert!(matches!(
            torus_knot_lspace_verdict(&POS, s(6, 1)),
            Err(SeifertError::RuleInapplicable(_))
        ));
    }

    #[test]
    fn dispatcher_examples() {
        let pos = KnotExterior::Torus(POS);
        let v = slope_lo_verdict(&pos, Slope::LONGITUDE);
        assert_eq!((v.status, v.rule), (LoStatus::Lo, Some(LoRule::B1Rule)));
        let v = slope_lo_verdict(&pos, s(1, 1));
        assert_eq!((v.status, v.rule), (LoStatus::NotLo, Some(LoRule::ZhsClassification)));
        let neg = KnotExterior::Torus(TorusKnotPiece::trefoil(Chirality::Negative));
        assert_eq!(slope_lo_verdict(&neg, s(1, -1)).status, LoStatus::NotLo);
        assert_eq!(slope_lo_verdict(&pos, s(1, -1)).status, LoStatus::Lo);
        // reducible filling falls through every rule
        assert_eq!(slope_lo_verdict(&pos, s(6, 1)).status, LoStatus::Unknown);
        assert_eq!(slope_lo_verdict(&pos, s(7, 1)).rule, Some(LoRule::LSpaceInterval));

        let user = KnotExterior::User(UserPiece {
            asserted: vec![AssertedSlope {
                slope: Slope::MERIDIAN,
                status: LoStatus::Lo,
            }],
            zero_filling_prime: false,
        });
        let v = slope_lo_verdict(&user, Slope::MERIDIAN);
        assert_eq!((v.status, v.rule), (LoStatus::Lo, Some(LoRule::UserAsserted)));
        assert_eq!(slope_lo_verdict(&user, Slope::LONGITUDE).status, LoStatus::Unknown);
    }

    #[test]
    fn singular_fibre_surgery() {
        // meridian filling restores the sphere
        let sigma = z(&[2, 3, 7]);
        assert_eq!(
            fiber_surgery(&sigma, 2, Chirality::Positive, Slope::MERIDIAN),
            SurgeryResult::Seifert {
                multiplicities: vec![2, 3, 7]
            }
        );
        // a regular fibre of Σ(2,3) is the trefoil
        let ext = KnotExterior::Fiber {
            zhs: z(&[2, 3, 1]),
            fiber: 2,
            chirality: Chirality::Positive,
        };
        for alpha in slopes_up_to(4) {
            assert_eq!(
                slope_lo_verdict(&ext, alpha).status,
                slope_lo_verdict(&KnotExterior::Torus(POS), alpha).status,
                "{alpha}"
            );
        }
    }

    #[test]
    fn slope_order() {
        let v = slopes_up_to(1);
        assert_eq!(v, vec![s(-1, 1), s(0, 1), s(1, 0), s(1, 1)]);
        assert_eq!(slopes_up_to(3).len(), 4 + 4 + 8);
    }

    #[test]
    fn double_trefoil_certificate() {
        let tree = SpliceTree::double_trefoil();
        let cert = certificate_search(&tree, 3).unwrap();
        assert_eq!(cert.status, LoStatus::Lo);
        assert_eq!(cert.edge_pairs(), vec![(0, s(-1, 1), s(-1, 1))]);
        assert!(verify_certificate(&tree, &cert).valid);

        let mut tampered = cert.clone();
        if let Some(Proof::Gluing { side1, .. }) = &mut tampered.components[0].proof {
            side1.slope = s(1, 1);
        }
        let report = verify_certificate(&tree, &tampered);
        assert!(!report.valid);
        assert!(!report.failures.is_empty());
    }

    #[test]
    fn splice_rule_with_user_piece() {
        let tree = SpliceTree {
            nodes: vec![
                Node {
                    id: "T".into(),
                    piece: Piece::TorusKnot {
                        r: 2,
                        s: 3,
                        chirality: Some(Chirality::Positive),
                    },
                },
                Node {
                    id: "U".into(),
                    piece: Piece::User(UserPiece {
                        asserted: vec![AssertedSlope {
                            slope: Slope::MERIDIAN,
                            status: LoStatus::Lo,
                        }],
                        zero_filling_prime: false,
                    }),
                },
            ],
            edges: vec![Edge {
                a: EdgeEnd::new("T"),
                b: EdgeEnd::new("U"),
                matrix: GluingMatrix::SPLICE,
            }],
        };
        let cert = certificate_search(&tree, 3).unwrap();
        assert_eq!(cert.status, LoStatus::Lo);
        let Some(Proof::Gluing { branch, side1, side2, .. }) = &cert.components[0].proof else {
            panic!("expected a gluing proof");
        };
        assert_eq!(*branch, GluingBranch::SpliceRule);
        assert_eq!((side1.boundary.as_str(), side1.slope), ("U", Slope::MERIDIAN));
        assert_eq!((side2.boundary.as_str(), side2.slope), ("T", Slope::LONGITUDE));
        assert!(verify_certificate(&tree, &cert).valid);
    }

    #[test]
    fn closed_pieces_and_free_products() {
        let node = |id: &str, m: &[u64]| Node {
            id: id.into(),
            piece: Piece::BrieskornKnot {
                multiplicities: z(m),
                chirality: None,
            },
        };
        let poincare = SpliceTree {
            nodes: vec![node("P", &[2, 3, 5])],
            edges: vec![],
        };
        let cert = certificate_search(&poincare, 3).unwrap();
        assert_eq!(cert.status, LoStatus::NotLo);
        assert!(verify_certificate(&poincare, &cert).valid);

        let forest = SpliceTree {
            nodes: vec![node("A", &[2, 3, 7]), node("S", &[1])],
            edges: vec![],
        };
        let cert = certificate_search(&forest, 3).unwrap();
        assert_eq!(cert.status, LoStatus::Lo);
        assert_eq!(cert.components[1].status, ComponentStatus::Trivial);

        let empty = SpliceTree::default();
        let cert = certificate_search(&empty, 3).unwrap();
        assert!(cert.components.is_empty());
        assert!(verify_certificate(&empty, &cert).valid);
    }

    #[test]
    fn three_piece_tree_uses_induction() {
        // trefoil -- Σ(2,3,7) with two fibres removed -- trefoil
        let trefoil = |id: &str| Node {
            id: id.into(),
            piece: Piece::TorusKnot {
                r: 2,
                s: 3,
                chirality: Some(Chirality::Positive),
            },
        };
        let tree = SpliceTree {
            nodes: vec![
                trefoil("L"),
                Node {
                    id: "M".into(),
                    piece: Piece::BrieskornKnot {
                        multiplicities: z(&[2, 3, 7]),
                        chirality: Some(Chirality::Positive),
                    },
                },
                trefoil("R"),
            ],
            edges: vec![
                Edge {
                    a: EdgeEnd::new("L"),
                    b: EdgeEnd::fiber("M", 0),
                    matrix: GluingMatrix::SPLICE,
                },
                Edge {
                    a: EdgeEnd::fiber("M", 1),
                    b: EdgeEnd::new("R"),
                    matrix: GluingMatrix::SPLICE,
                },
            ],
        };
        let cert = certificate_search(&tree, 3).unwrap();
        assert_eq!(cert.status, LoStatus::Lo);
        assert!(cert.edge_pairs().len() >= 2);
        assert!(cert.hypotheses.iter().any(|h| h.contains("JSJ")));
        let report = verify_certificate(&tree, &cert);
        assert!(report.valid, "{:?}", report.failures);
    }

    #[test]
    fn unspecified_chirality_is_recorded() {
        let mut tree = SpliceTree::double_trefoil();
        for n in &mut tree.nodes {
            if let Piece::TorusKnot { chirality, .. } = &mut n.piece {
                *chirality = None;
            }
        }
        let cert = certificate_search(&tree, 3).unwrap();
        assert_eq!(cert.status, LoStatus::Lo);
        assert_eq!(cert.chirality_assumptions.len(), 2);
        assert!(cert.chirality_assumptions.values().all(|&c| c == Chirality::Positive));
        assert!(verify_certificate(&tree, &cert).valid);
        let mut stripped = cert.clone();
        stripped.chirality_assumptions.clear();
        assert!(!verify_certificate(&tree, &stripped).valid);
    }

    #[test]
    fn tree_validation() {
        let mut t = SpliceTree::double_trefoil();
        t.edges[0].matrix = GluingMatrix::IDENTITY;
        assert_eq!(t.validate(), Err(SeifertError::NotHomologySphere { edge: 0, order: 0 }));
        let mut t = SpliceTree::double_trefoil();
        t.edges.push(t.edges[0].clone());
        assert!(matches!(t.validate(), Err(SeifertError::BoundaryReused { .. })));
        let mut t = SpliceTree::double_trefoil();
        t.edges[0].b = EdgeEnd::new("K9");
        assert_eq!(t.validate(), Err(SeifertError::UnknownNode(0, "K9".into())));
        let mut t = SpliceTree::double_trefoil();
        t.nodes[1].id = "K1".into();
        assert_eq!(t.validate(), Err(SeifertError::DuplicateNode("K1".into())));
    }

    #[test]
    fn splice_of_trees_is_a_homology_sphere() {
        let mut left = SpliceTree::double_trefoil();
        left.edges.clear();
        left.nodes.truncate(1);
        let mut right = left.clone();
        right.nodes[0].id = "K2".into();
        let joined = left.splice(&right, EdgeEnd::new("K1"), EdgeEnd::new("K2")).unwrap();
        assert_eq!(joined, SpliceTree::double_trefoil());
    }

    #[test]
    fn tree_json_round_trip() {
        let tree = SpliceTree::double_trefoil();
        let text = serde_json::to_string(&tree).unwrap();
        assert!(text.contains("\"kind\":\"torus_knot\""));
        let back: SpliceTree = serde_json::from_str(&text).unwrap();
        assert_eq!(back, tree);
        let cert = certificate_search(&tree, 3).unwrap();
        let text = serde_json::to_string(&cert).unwrap();
        let back: Certificate = serde_json::from_str(&text).unwrap();
        assert_eq!(back, cert);
    }

    #[test]
    fn hf_examples() {
        let hf = |p, q, nu, r: &[i64]| {
            hf_surgery_rank(&HFParams {
                p,
                q,
                nu,
                as_ranks: r.to_vec(),
            })
        };
        assert_eq!(hf(-3, 1, 1, &[1, 1, 1]), Ok(5));
        assert_eq!(hf(7, 1, 1, &[1, 1]), Ok(7));
        assert_eq!(hf(5, 2, 0, &[3]), Ok(9));
        assert!(hf(1, 0, 0, &[]).is_err());
        assert!(hf(1, 1, -1, &[]).is_err());
        assert!(hf(1, 1, 0, &[0]).is_err());
    }
}
