use std::cmp::Ordering;
use std::fs;

use anyhow::{anyhow, bail, Context, Result};
use num_traits::Signed;
use orderable::alexander::branched_cover_order;
use orderable::braid3::{commutes_with_sigma2, conj_sign, dd_compare, dd_sign, delta_floor, handle_reduce_with_cap};
use orderable::compat::{nonapplicability_report, verify_compatibility, verify_with_ordering};
use orderable::fpgroup::{abelianization, amalgam, coset_enumerate, dehn_fill, AbelianInvariants, CosetOutcome, Presentation};
use orderable::klein::{k_conjugate_ordering, k_sign, klein_fill, KleinOrderingId, KleinPeripheral};
use orderable::sampling::WordSampler;
use orderable::seifert::{certificate_search, hf_surgery_rank, verify_certificate, Certificate, HFParams, LoStatus, SpliceTree};
use orderable::slopes::{apply_gluing, intersection_number, splice_framing, union_homology_order};
use orderable::{BraidWord, GluingMatrix, IntLaurentPoly, KleinElement, Slope};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

use crate::*;

const DD: &str = "Dubrovina-Dubrovin positive cone of B3";
const HANDLE: &str = "Dehornoy handle reduction";
const KLEIN_ORDERS: &str = "left orderings of the Klein bottle group";
const SNF: &str = "Smith normal form";
const TODD_COXETER: &str = "Todd-Coxeter coset enumeration";
const FOX: &str = "Fox formula: |H1| is the product of |Δ(ζ)| over nontrivial n-th roots of unity";
const SPLICE: &str = "slope gluing criterion for left-orderability of graph manifolds";
const FREE_PRODUCT: &str = "a free product is left-orderable iff each nontrivial factor is";
const HF: &str = "rational surgery formula for Heegaard Floer rank";

fn ok(payload: Value, text: String, citations: Vec<&'static str>) -> Output {
    Output { status: Status::Ok, payload, text, citations }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("payload types serialize")
}

fn braid(s: &str) -> Result<BraidWord> {
    s.parse().with_context(|| format!("bad braid word {s:?}"))
}

fn slope(s: &str) -> Result<Slope> {
    s.parse().with_context(|| format!("bad slope {s:?}"))
}

fn read_json<T: DeserializeOwned>(path: &str) -> Result<T> {
    let raw = fs::read_to_string(path).with_context(|| format!("cannot read {path}"))?;
    serde_json::from_str(&raw).with_context(|| format!("cannot parse {path}"))
}

fn klein_ord(o: KleinOrd) -> KleinOrderingId {
    match o {
        KleinOrd::O1 => KleinOrderingId::O1,
        KleinOrd::O2 => KleinOrderingId::O2,
    }
}

fn ordering_name(o: Ordering) -> &'static str {
    match o {
        Ordering::Less => "less",
        Ordering::Equal => "equal",
        Ordering::Greater => "greater",
    }
}

pub fn run(cmd: &Command) -> Result<Output> {
    match cmd {
        Command::Braid(c) => run_braid(c),
        Command::Klein(c) => run_klein(c),
        Command::Slope(c) => run_slope(c),
        Command::Group(c) => run_group(c),
        Command::Splice(c) => run_splice(c),
        Command::Hf(HfCmd::Rank(a)) => run_hf(a),
        Command::Cover(CoverCmd::Order { poly, n }) => run_cover(poly, *n),
        Command::Verify(c) => run_verify(c),
    }
}

fn run_braid(cmd: &BraidCmd) -> Result<Output> {
    Ok(match cmd {
        BraidCmd::Sign { word, conjugator } => {
            let w = braid(word)?;
            let (sign, payload) = match conjugator {
                Some(g) => {
                    let g = braid(g)?;
                    let s = conj_sign(&w, &g)?;
                    (s, json!({ "sign": s, "conjugator": g }))
                }
                None => {
                    let s = dd_sign(&w)?;
                    (s, json!({ "sign": s }))
                }
            };
            ok(payload, sign.to_string(), vec![DD, HANDLE])
        }
        BraidCmd::Compare { left, right } => {
            let o = dd_compare(&braid(left)?, &braid(right)?)?;
            let name = ordering_name(o);
            ok(json!({ "order": name }), name.into(), vec![DD, HANDLE])
        }
        BraidCmd::Reduce { word, cap } => {
            let r = handle_reduce_with_cap(&braid(word)?, *cap)?;
            let text = if r.is_empty() { "(trivial)".to_string() } else { r.to_string() };
            ok(json!({ "reduced": r, "trivial": r.is_empty() }), text, vec![HANDLE])
        }
        BraidCmd::Floor { word } => {
            let m = delta_floor(&braid(word)?)?;
            ok(json!({ "floor": m }), m.to_string(), vec![DD, "Malyutin bounds on Δ² powers"])
        }
    })
}

fn run_klein(cmd: &KleinCmd) -> Result<Output> {
    Ok(match cmd {
        KleinCmd::Fill { m, n } => {
            let f = klein_fill(KleinPeripheral::new(*m, *n))?;
            let text = format!("y^{m} x^(2*{n}): {:?}, H1 = {}", f.class, abelian_text(&f.abelianization));
            ok(to_value(&f), text, vec![KLEIN_ORDERS, SNF, TODD_COXETER])
        }
        KleinCmd::Sign { element, ordering, conjugator } => {
            let h: KleinElement = element.parse()?;
            let mut ord = klein_ord(*ordering);
            if let Some(g) = conjugator {
                let g: KleinElement = g.parse()?;
                ord = k_conjugate_ordering(g, ord);
            }
            let s = k_sign(h, ord);
            ok(json!({ "sign": s, "ordering": ord }), s.to_string(), vec![KLEIN_ORDERS])
        }
    })
}

fn run_slope(cmd: &SlopeCmd) -> Result<Output> {
    Ok(match cmd {
        SlopeCmd::Delta { alpha, beta } => {
            let d = intersection_number(slope(alpha)?, slope(beta)?);
            ok(json!({ "delta": d }), d.to_string(), vec![])
        }
        SlopeCmd::Glue { matrix, slope: s } => {
            let entries: Vec<i64> = matrix
                .split(',')
                .map(|e| e.trim().parse::<i64>())
                .collect::<Result<_, _>>()
                .with_context(|| format!("bad matrix {matrix:?}"))?;
            let entries: [i64; 4] = entries
                .try_into()
                .map_err(|_| anyhow!("matrix needs four entries, got {matrix:?}"))?;
            let f = GluingMatrix::from_row_major(entries)?;
            let alpha = slope(s)?;
            let image = apply_gluing(f, alpha);
            let order = union_homology_order(f, Slope::LONGITUDE, Slope::LONGITUDE);
            let meridians = splice_framing(f, Slope::LONGITUDE, Slope::LONGITUDE);
            let payload = json!({
                "matrix": f,
                "slope": alpha,
                "image": image,
                "union_homology_order": order,
                "meridians": meridians,
            });
            ok(payload, format!("{alpha} -> {image}"), vec![])
        }
    })
}

fn parse_pair(p1: &Presentation, p2: &Presentation, pair: &str) -> Result<(orderable::fpgroup::Word, orderable::fpgroup::Word)> {
    let (u, v) = pair
        .split_once('=')
        .ok_or_else(|| anyhow!("pair {pair:?} must look like \"u=v\""))?;
    Ok((p1.parse_word(u.trim())?, p2.parse_word(v.trim())?))
}

/// Z^r + Z/t1 + ... in text output, 0 for the trivial group.
fn abelian_text(ab: &AbelianInvariants) -> String {
    let mut parts: Vec<String> = match ab.free_rank {
        0 => vec![],
        1 => vec!["Z".into()],
        r => vec![format!("Z^{r}")],
    };
    parts.extend(ab.torsion.iter().map(|t| format!("Z/{t}")));
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

fn presentation_output(p: &Presentation) -> Output {
    let ab = abelianization(p);
    let text = format!("{}\nH1: {}", serde_json::to_string(p).expect("serializable"), abelian_text(&ab));
    ok(json!({ "presentation": p, "abelianization": ab }), text, vec![SNF])
}

fn run_group(cmd: &GroupCmd) -> Result<Output> {
    Ok(match cmd {
        GroupCmd::Abelianize { file } => {
            let p: Presentation = read_json(file)?;
            let ab = abelianization(&p);
            ok(to_value(&ab), abelian_text(&ab), vec![SNF])
        }
        GroupCmd::Fill { file, mu, lambda, slope: s } => {
            let p: Presentation = read_json(file)?;
            let filled = dehn_fill(&p, &p.parse_word(mu)?, &p.parse_word(lambda)?, slope(s)?);
            presentation_output(&filled)
        }
        GroupCmd::Amalgam { left, right, pairs } => {
            let p1: Presentation = read_json(left)?;
            let p2: Presentation = read_json(right)?;
            let pairs = pairs
                .iter()
                .map(|s| parse_pair(&p1, &p2, s))
                .collect::<Result<Vec<_>>>()?;
            presentation_output(&amalgam(&p1, &p2, &pairs)?)
        }
        GroupCmd::Enumerate { file, subgroup, max_cosets, table } => {
            let p: Presentation = read_json(file)?;
            let h = subgroup
                .iter()
                .map(|w| p.parse_word(w))
                .collect::<Result<Vec<_>, _>>()?;
            let outcome = coset_enumerate(&p, &h, *max_cosets);
            let cites = vec![TODD_COXETER];
            match &outcome {
                CosetOutcome::Index { index, table: t } => {
                    let mut payload = json!({ "result": "index", "index": index });
                    if *table {
                        payload["table"] = to_value(t);
                    }
                    ok(payload, format!("index {index}"), cites)
                }
                CosetOutcome::Inconclusive { cosets_defined } => Output {
                    status: Status::Unknown,
                    payload: to_value(&outcome),
                    text: format!("inconclusive after {cosets_defined} cosets"),
                    citations: cites,
                },
            }
        }
    })
}

fn run_splice(cmd: &SpliceCmd) -> Result<Output> {
    let cites = vec![SPLICE, FREE_PRODUCT];
    Ok(match cmd {
        SpliceCmd::Cert { tree, bound } => {
            let tree: SpliceTree = read_json(tree)?;
            let cert = certificate_search(&tree, *bound)?;
            let status = if cert.status == LoStatus::Unknown { Status::Unknown } else { Status::Ok };
            let mut text = format!("{:?} (slope bound {})", cert.status, cert.search_bound);
            for (edge, a, b) in cert.edge_pairs() {
                text.push_str(&format!("\nedge {edge}: {a} / {b}"));
            }
            Output { status, payload: to_value(&cert), text, citations: cites }
        }
        SpliceCmd::Verify { tree, certificate } => {
            let tree: SpliceTree = read_json(tree)?;
            let cert: Certificate = read_json(certificate)?;
            let report = verify_certificate(&tree, &cert);
            let status = if report.valid { Status::Ok } else { Status::Failed };
            let text = if report.valid {
                format!("valid ({} checks)", report.checks)
            } else {
                format!("invalid: {}", report.failures.join("; "))
            };
            Output { status, payload: to_value(&report), text, citations: cites }
        }
    })
}

fn run_hf(a: &HfArgs) -> Result<Output> {
    let params = HFParams { p: a.p, q: a.q, nu: a.nu, as_ranks: a.ranks.clone() };
    let rank = hf_surgery_rank(&params)?;
    let h1 = a.p.unsigned_abs();
    let payload = json!({ "rank": rank, "h1_order": h1, "l_space": rank == h1 });
    Ok(ok(payload, rank.to_string(), vec![HF]))
}

fn run_cover(poly: &str, n: i64) -> Result<Output> {
    let delta: IntLaurentPoly = poly.parse()?;
    let order = branched_cover_order(&delta, n)?;
    let mut payload = json!({ "order": order });
    let mut text = order.to_string();
    if n % 2 == 0 {
        // ζ = -1 is an n-th root of unity, so |Δ(-1)| divides the product
        let det = delta.eval_unit(true).abs();
        let note = format!("n is even: the determinant |Δ(-1)| = {det} divides the order");
        payload["determinant"] = json!(det.to_string().parse::<u64>().ok());
        payload["note"] = json!(note);
        text.push_str(&format!("\nnote: {note}"));
    }
    Ok(ok(payload, text, vec![FOX]))
}

#[derive(Serialize)]
struct CompatFailure {
    conjugator: BraidWord,
    failures: Vec<orderable::compat::GridFailure>,
}

fn run_verify(cmd: &VerifyCmd) -> Result<Output> {
    match cmd {
        VerifyCmd::Compatibility { seed, samples, grid, max_len } => {
            if *grid < 1 {
                bail!("--grid must be at least 1");
            }
            let gammas = WordSampler::new(*seed).conjugators(*samples, *max_len);
            let mut failed = Vec::new();
            let (mut case1, mut case2, mut positive_cells) = (0, 0, 0);
            for g in &gammas {
                let r = verify_compatibility(g, *grid)?;
                if commutes_with_sigma2(g) {
                    case2 += 1;
                } else {
                    case1 += 1;
                }
                positive_cells += r.positive_cells;
                if !r.passed() || !r.classes.all_hit() {
                    failed.push(CompatFailure { conjugator: g.clone(), failures: r.failures });
                }
            }
            let sigma1 = BraidWord::sigma1_pow(1);
            let control = verify_with_ordering(&sigma1, *grid, KleinOrderingId::O1)?;
            let control_caught = !control.passed();
            let passed = failed.is_empty() && control_caught;
            let payload = json!({
                "seed": seed,
                "samples": samples,
                "grid_bound": grid,
                "noncommuting_conjugators": case1,
                "commuting_conjugators": case2,
                "positive_cells_checked": positive_cells,
                "failed_conjugators": to_value(&failed),
                "wrong_ordering_control": {
                    "conjugator": sigma1,
                    "ordering": KleinOrderingId::O1,
                    "failures": control.failures.len(),
                },
                "passed": passed,
            });
            let text = format!(
                "{} conjugators ({case1} not commuting with σ2, {case2} commuting), grid ±{grid}: {}\n\
                 wrong-ordering control: {} failures",
                samples,
                if failed.is_empty() { "no failures".to_string() } else { format!("{} failed", failed.len()) },
                control.failures.len()
            );
            Ok(Output {
                status: if passed { Status::Ok } else { Status::Failed },
                payload,
                text,
                citations: vec![DD, KLEIN_ORDERS, HANDLE],
            })
        }
        VerifyCmd::Nonapplicability => {
            let r = nonapplicability_report();
            Ok(ok(to_value(&r), r.conclusion.clone(), vec![SPLICE, KLEIN_ORDERS, TODD_COXETER]))
        }
    }
}
