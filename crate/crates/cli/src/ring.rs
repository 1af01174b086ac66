use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use starreg::exactalg::Matrix;
use starreg::starring::{
    catalog_ring, is_projection, is_star_regular_finite, is_star_regular_matrix, left_projection, rickart_inverse,
    right_projection, unique_relative_inverse, verify_finite_ring, verify_star_ring, FiniteRing, MatrixRing,
    RegularityClause, RegularityMode, RegularityVerdict, StarRing, StarRingReport, RING_CATALOG,
};

use crate::descriptor::{self, matrix_json, Owned, Ring};
use crate::report::Report;
use crate::{CliError, Config};

fn axioms(report: &mut Report, axioms: &StarRingReport) {
    let list: Vec<Value> = axioms
        .axioms
        .iter()
        .map(|a| json!({"name": a.name, "passed": a.passed, "exhaustive": a.exhaustive, "witness": a.witness}))
        .collect();
    report.set("axioms", list);
    for a in axioms.failed() {
        report.line(format!("axiom failed: {} at {:?}", a.name, a.witness.clone().unwrap_or_default()));
    }
    report.check("star-ring axioms", axioms.passed());
}

fn mode_json(m: &RegularityMode) -> Value {
    match m {
        RegularityMode::Exhaustive => json!("exhaustive"),
        RegularityMode::Structural(_) => json!("structural"),
        RegularityMode::Sampled { samples } => json!({"sampled": samples}),
    }
}

fn verdict<E>(report: &mut Report, v: &RegularityVerdict<E>, show: impl Fn(&E) -> (Value, String)) {
    report.check("star-regular", v.star_regular);
    report.set("regularity_mode", mode_json(&v.mode));
    if let Some(clause) = v.failed {
        let name = match clause {
            RegularityClause::Regularity => "regularity",
            RegularityClause::ProperInvolution => "proper involution",
        };
        report.set("failed_clause", name);
        report.line(format!("failed clause: {name}"));
    }
    if let Some(w) = &v.witness {
        let (value, text) = show(w);
        report.set("witness", value);
        report.line(format!("witness: {text}"));
    }
}

/// Projections, relative inverses and their identities at one element.
fn rickart_at<R: StarRing>(r: &R, x: &R::Elem, q: &R::Elem) -> Result<(), String> {
    let (l, p) = (left_projection(r, x).map_err(|e| e.to_string())?, right_projection(r, x).map_err(|e| e.to_string())?);
    if !is_projection(r, &l) || !is_projection(r, &p) {
        return Err("l(x) or r(x) is not a projection".into());
    }
    if r.mul(&l, x) != *x || r.mul(x, &p) != *x {
        return Err("l(x)·x = x = x·r(x) fails".into());
    }
    if r.mul(x, q) != l || r.mul(q, x) != p || r.mul(&p, q) != *q || r.mul(q, &l) != *q {
        return Err("x·q = l(x), q·x = r(x), r(x)·q = q = q·l(x) fails".into());
    }
    if rickart_inverse(r, q).map_err(|e| e.to_string())? != *x {
        return Err("the relative inverse is not an involution".into());
    }
    Ok(())
}

fn finite(cfg: &Config, r: &FiniteRing) -> Result<Report, CliError> {
    let mut report = Report::new("ring check");
    report.set("ring", r.name());
    report.set("elements", r.size());
    report.line(format!("ring: {} ({} elements)", r.name(), r.size()));
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    axioms(&mut report, &verify_finite_ring(r, cfg.samples(), &mut rng));
    let v = is_star_regular_finite(r, cfg.budget()).map_err(|e| CliError::input("--budget-elements", e.to_string()))?;
    verdict(&mut report, &v, |w| (r.element_json(*w), r.describe(w)));
    if !v.star_regular {
        report.line("rickart: skipped");
        return Ok(report);
    }
    if r.size() as usize > cfg.budget() {
        report.line("rickart: skipped (carrier above the budget)");
        return Ok(report);
    }
    let mut failure = None;
    for x in r.carrier() {
        let outcome = unique_relative_inverse(r, x).map_err(|e| e.to_string()).and_then(|q| rickart_at(r, &x, &q));
        if let Err(e) = outcome {
            failure = Some((x, e));
            break;
        }
    }
    report.set("rickart_checked", r.size());
    report.check("rickart", failure.is_none());
    if let Some((x, e)) = failure {
        report.fail(format!("rickart: {e}"), Some(r.element_json(x)));
    }
    Ok(report)
}

fn infinite(cfg: &Config, m: &MatrixRing) -> Result<Report, CliError> {
    let mut report = Report::new("ring check");
    report.set("ring", format!("M_{}", m.n()));
    report.line(format!("ring: {}x{} matrices over an infinite field", m.n(), m.n()));
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    axioms(&mut report, &verify_star_ring(m, cfg.samples(), &mut rng));
    let v = is_star_regular_matrix(m, cfg.samples(), &mut rng).map_err(|e| CliError::input("ring", e.to_string()))?;
    verdict(&mut report, &v, |w: &Matrix| (matrix_json(w), w.to_string()));
    if !v.star_regular {
        report.line("rickart: skipped");
        return Ok(report);
    }
    let mut failure = None;
    for _ in 0..cfg.samples() {
        let x = m.random_element(&mut rng);
        let outcome = rickart_inverse(m, &x).map_err(|e| e.to_string()).and_then(|q| rickart_at(m, &x, &q));
        if let Err(e) = outcome {
            failure = Some((x, e));
            break;
        }
    }
    report.set("rickart_checked", cfg.samples());
    report.check("rickart", failure.is_none());
    if let Some((x, e)) = failure {
        report.fail(format!("rickart: {e}"), Some(matrix_json(&x)));
    }
    Ok(report)
}

pub fn check(cfg: &Config, input: &str) -> Result<Report, CliError> {
    let doc = Owned::read(input)?;
    match descriptor::ring(doc.root())? {
        Ring::Finite(r) => finite(cfg, &r),
        Ring::Matrix(m) => infinite(cfg, &m),
    }
}

pub fn catalog() -> Result<Report, CliError> {
    let mut report = Report::new("catalog list");
    let mut entries = Vec::new();
    for e in RING_CATALOG {
        let size = catalog_ring(e.name).map(|r| r.size()).map_err(|err| CliError::input(e.name, err.to_string()))?;
        report.line(format!("{:<14} {:>6}  {}", e.name, size, e.description));
        entries.push(json!({"name": e.name, "elements": size, "description": e.description, "star_regular": e.star_regular}));
    }
    report.set("rings", entries);
    Ok(report)
}
