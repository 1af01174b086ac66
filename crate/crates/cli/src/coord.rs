use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use starreg::coord::{
    adjoint_candidates, adjoint_checks, coefficient_ring, decomposition_system_of_frame, epsilon_adjoint_identities,
    induced_system, ring_adjoint_checks, verify_decomposition_system, verify_eta, verify_matrix_ring, verify_rho,
    verify_theta, CoordError, Elem, Eta, ModuleBackend, RingCheck, RingModule, Sublattice,
};
use starreg::exactalg::Matrix;
use starreg::frames::{stabilize_frame, verify_frame, Frame, Level};
use starreg::latcore::{principal_right_ideal_lattice, LatticeContext};
use starreg::starring::{FiniteRing, StarRing};
use starreg::subspace::{InnerProductSpace, Subspace};

use crate::descriptor::{self, Context, Node, Owned};
use crate::frame::{context_of, lattice_frame, space_frame};
use crate::report::Report;
use crate::{CliError, Config};

/// Contract violations of the input objects fail the report (exit 1);
/// anything else is invalid input (exit 2).
pub fn absorb(report: &mut Report, origin: &str, e: CoordError) -> Result<(), CliError> {
    match e {
        CoordError::StarPreservationFailed { witness } => {
            report.fail(format!("involution not preserved at r = {witness}"), Some(json!(witness)));
            Ok(())
        }
        CoordError::SummandsNotOrthogonal
        | CoordError::IncompatibleRestrictions(_)
        | CoordError::NotAStarHomomorphism(_)
        | CoordError::FrameImageNotStable
        | CoordError::ConditionFailed(_)
        | CoordError::NotAComplement(_)
        | CoordError::Frame(_) => {
            report.fail(e.to_string(), None);
            Ok(())
        }
        other => Err(CliError::input(origin, other.to_string())),
    }
}

fn ring_check_json(c: &RingCheck) -> Value {
    json!({
        "mode": serde_json::to_value(c.mode).expect("mode serializes"),
        "members": c.members,
        "contains_zero": c.contains_zero,
        "contains_identity": c.contains_identity,
        "closed_under_add": c.closed_under_add,
        "closed_under_compose": c.closed_under_compose,
        "closed_under_neg": c.closed_under_neg,
    })
}

/// A frame that passes the stable level, stabilizing it when needed.
fn stable<L: LatticeContext>(l: &L, frame: Frame<L::Elem>, report: &mut Report) -> Result<Frame<L::Elem>, CoordError> {
    if verify_frame(l, &frame, Level::Stable).passed() {
        return Ok(frame);
    }
    report.line("frame is not stable; axes and complements derived");
    Ok(stabilize_frame(l, &frame)?)
}

fn theta_in<B: ModuleBackend>(cfg: &Config, b: &B, frame: Frame<Elem<B>>, report: &mut Report) -> Result<(), CoordError> {
    let frame = stable(b.lattice(), frame, report)?;
    let ds = decomposition_system_of_frame(b, &frame, Sublattice::Full)?;
    let dsr = verify_decomposition_system(b, &ds);
    let failures: Vec<Value> = dsr.failures.iter().map(|f| json!({"condition": f.condition, "indices": f.indices})).collect();
    for f in &dsr.failures {
        report.line(format!("condition {} fails at {:?}", f.condition, f.indices));
    }
    report.set("system_failures", failures);
    report.check("decomposition system", dsr.passed());
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let t = verify_theta(b, &ds, cfg.samples(), &mut rng)?;
    report.set("theta", serde_json::to_value(&t).expect("report serializes"));
    report.line(format!("theta: {} elements checked, {}", t.checked, t.mode));
    if let Some(w) = &t.witness {
        report.line(format!("theta witness: {w}"));
    }
    report.check("theta isomorphism", t.passed());
    let c = coefficient_ring(b, &ds, cfg.samples(), &mut rng)?;
    report.set("coefficient_ring", ring_check_json(&c));
    report.line(format!("coefficient ring: {} members", c.members));
    report.check("coefficient ring closed", c.passed());
    let m = verify_matrix_ring(b, &ds, cfg.samples(), &mut rng);
    report.set("matrix_ring", ring_check_json(&m));
    report.check("matrix ring closed", m.passed());
    Ok(())
}

pub fn theta(cfg: &Config, input: &str) -> Result<Report, CliError> {
    let doc = Owned::read(input)?;
    let root = doc.root();
    let (ctx, _) = context_of(cfg, root)?;
    let mut report = Report::new("coord theta");
    let outcome = match &ctx {
        Context::Ring(r, ideals) => {
            let f = lattice_frame(root, &ideals.lattice, Some((r, ideals)))?.0;
            theta_in(cfg, &RingModule::new(r, ideals), f, &mut report)
        }
        Context::Space(v) => theta_in(cfg, v, space_frame(root, v)?.0, &mut report),
        Context::Lattice(_) => return Err(root.err("coordinatization needs a ring or a space context")),
    };
    if let Err(e) = outcome {
        absorb(&mut report, input, e)?;
    }
    Ok(report)
}

fn run_eta<B: ModuleBackend, B2: ModuleBackend>(
    cfg: &Config,
    eta: &Eta<'_, B, B2>,
    rho: bool,
    report: &mut Report,
) -> Result<(), CoordError> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    if rho {
        let r = verify_rho(eta, cfg.samples(), &mut rng)?;
        report.set("rho", serde_json::to_value(&r).expect("report serializes"));
        report.line(format!("rho: {} elements checked, {}", r.hom.checked, r.hom.mode));
        report.check("ring embedding", r.hom.passed());
        report.check("involution preserved", true);
    } else {
        let r = verify_eta(eta, cfg.samples(), &mut rng)?;
        report.set("eta", serde_json::to_value(&r).expect("report serializes"));
        report.line(format!("eta: {} elements checked, {}", r.checked, r.mode));
        report.check("ring embedding", r.passed());
    }
    Ok(())
}

fn identity<B: ModuleBackend>(cfg: &Config, b: &B, frame: Frame<Elem<B>>, rho: bool, report: &mut Report) -> Result<(), CoordError> {
    let frame = stable(b.lattice(), frame, report)?;
    let ds = decomposition_system_of_frame(b, &frame, Sublattice::Full)?;
    let eta = Eta::new(b, &ds, b, &ds, |x: &Elem<B>| x.clone())?;
    run_eta(cfg, &eta, rho, report)
}

fn transformed(v: &InnerProductSpace, t: &Matrix, u: &Subspace) -> Subspace {
    let images: Vec<_> = u.vectors().iter().map(|x| t.apply(x).expect("vector of the space")).collect();
    v.span(&images).expect("vectors of the space")
}

/// `ι` given under `"iota"`: `"identity"` (default), `"columns"` (ring
/// contexts: `xR ↦` column space of `x`), or `{"transform": T}` (space contexts: `U ↦ TU`).
pub fn eta(cfg: &Config, input: &str, rho: bool) -> Result<Report, CliError> {
    let doc = Owned::read(input)?;
    let mut report = Report::new(if rho { "coord rho" } else { "coord eta" });
    eta_in(cfg, doc.root(), input, rho, &mut report)?;
    Ok(report)
}

pub fn eta_in(cfg: &Config, root: Node<'_>, origin: &str, rho: bool, report: &mut Report) -> Result<(), CliError> {
    let (ctx, _) = context_of(cfg, root)?;
    let iota = root.opt("iota", |n| Ok(n.v.clone()))?.unwrap_or(json!("identity"));
    report.set("iota", iota.clone());
    report.set("samples", cfg.samples);
    let outcome = match (&ctx, &iota) {
        (Context::Ring(r, ideals), Value::String(s)) if s == "identity" => {
            let f = lattice_frame(root, &ideals.lattice, Some((r, ideals)))?.0;
            identity(cfg, &RingModule::new(r, ideals), f, rho, report)
        }
        (Context::Space(v), Value::String(s)) if s == "identity" => identity(cfg, v, space_frame(root, v)?.0, rho, report),
        (Context::Ring(r, ideals), Value::String(s)) if s == "columns" => {
            let m = r.matrix_ring().ok_or_else(|| root.err("\"columns\" needs a matrix ring"))?;
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let v = InnerProductSpace::new(m.form().clone(), cfg.samples(), &mut rng);
            let b = RingModule::new(r, ideals);
            let f = lattice_frame(root, &ideals.lattice, Some((r, ideals)))?.0;
            let iota = |t: &u32| v.image(&r.decode_matrix(ideals.generators[*t as usize]).expect("matrix element"));
            (|| {
                let frame = stable(&ideals.lattice, f, report)?;
                let ds = decomposition_system_of_frame(&b, &frame, Sublattice::Full)?;
                let ds2 = induced_system(&v, ds.frame.map(iota), Sublattice::Full)?;
                let eta = Eta::new(&b, &ds, &v, &ds2, iota)?;
                run_eta(cfg, &eta, rho, report)
            })()
        }
        (Context::Space(v), Value::Object(_)) => {
            let t = root.at("iota", |n| n.at("transform", |m| descriptor::matrix(v.field(), m, v.dim(), v.dim())))?;
            if t.rank() != v.dim() {
                return Err(root.err("the transform must be invertible"));
            }
            let f = space_frame(root, v)?.0;
            let iota = |u: &Subspace| transformed(v, &t, u);
            (|| {
                let frame = stable(v, f, report)?;
                let ds = decomposition_system_of_frame(v, &frame, Sublattice::Full)?;
                let ds2 = induced_system(v, ds.frame.map(iota), Sublattice::Full)?;
                let eta = Eta::new(v, &ds, v, &ds2, iota)?;
                run_eta(cfg, &eta, rho, report)
            })()
        }
        (Context::Lattice(_), _) => return Err(root.err("coordinatization needs a ring or a space context")),
        _ => return Err(root.err(format!("unsupported iota {iota} for this context"))),
    };
    if let Err(e) = outcome {
        absorb(report, origin, e)?;
    }
    Ok(())
}

fn space_adjoint(cfg: &Config, root: Node<'_>, report: &mut Report) -> Result<Result<(), CoordError>, CliError> {
    let v = root.at("space", |n| descriptor::space(n, cfg.samples(), cfg.seed))?;
    let ui = root.at("ui", |n| descriptor::subspace(&v, n))?;
    let uj = root.at("uj", |n| descriptor::subspace(&v, n))?;
    let f = root.at("f", |n| descriptor::matrix(v.field(), n, v.dim(), v.dim()))?;
    let g = match root.opt("g", |n| descriptor::matrix(v.field(), n, v.dim(), v.dim()))? {
        Some(g) => g,
        None => {
            let h = v.form().ok_or_else(|| root.err("the space has no form"))?;
            h.adjoint(&f).map_err(|e| root.err(e.to_string()))?
        }
    };
    Ok((|| {
        let verdicts = adjoint_checks(&v, &ui, &uj, &f, &g)?;
        report.set("verdicts", serde_json::to_value(verdicts).expect("verdicts serialize"));
        report.line(format!("pointwise adjoint: {}", verdicts.pointwise));
        report.line(format!("graphs orthogonal: {}", verdicts.graph));
        report.check("routes agree", verdicts.agree());
        if let Some(c) = adjoint_candidates(&v, &ui, &uj, &f)? {
            report.set("adjoint_candidates", c.len());
            report.line(format!("maps passing the graph test: {}", c.len()));
            report.check("adjoint unique", c.len() <= 1);
        }
        Ok(())
    })())
}

fn ring_adjoint(cfg: &Config, root: Node<'_>, report: &mut Report) -> Result<Result<(), CoordError>, CliError> {
    let r: FiniteRing = root.at("ring", |n| descriptor::ring(n)?.finite(n))?;
    let ideals = principal_right_ideal_lattice(&r, cfg.budget()).map_err(|e| root.err(e.to_string()))?;
    let m = RingModule::new(&r, &ideals);
    let ei = root.at("ei", |n| descriptor::element(&r, n))?;
    let ej = root.at("ej", |n| descriptor::element(&r, n))?;
    let corner = |x: u32, y: u32| r.carrier().filter(|&c| r.mul3(&x, &c, &y) == c).collect::<Vec<_>>();
    let a_list = match root.opt("a", |n| descriptor::element(&r, n))? {
        Some(a) => vec![a],
        None => corner(ei, ej),
    };
    let b_list = match root.opt("b", |n| descriptor::element(&r, n))? {
        Some(b) => vec![b],
        None => corner(ej, ei),
    };
    Ok((|| {
        let (mut pairs, mut related, mut disagreement) = (0usize, 0usize, None);
        let mut last = None;
        for &a in &a_list {
            for &b in &b_list {
                let v = ring_adjoint_checks(&m, ei, ej, a, b)?;
                pairs += 1;
                related += usize::from(v.star_relation);
                if !v.agree() && disagreement.is_none() {
                    disagreement = Some(json!([r.element_json(a), r.element_json(b)]));
                }
                last = Some(v);
            }
        }
        report.set("pairs", pairs);
        report.set("adjoint_pairs", related);
        report.line(format!("pairs checked: {pairs}, with a = b*: {related}"));
        if pairs == 1 {
            report.set("verdicts", serde_json::to_value(last.expect("one pair")).expect("verdicts serialize"));
        }
        report.check("routes agree", disagreement.is_none());
        if let Some(w) = disagreement {
            report.fail("ring-side routes disagree", Some(w));
        }
        Ok(())
    })())
}

fn frame_adjoint(cfg: &Config, root: Node<'_>, report: &mut Report) -> Result<Result<(), CoordError>, CliError> {
    let (ctx, _) = context_of(cfg, root)?;
    let Context::Space(v) = &ctx else {
        return Err(root.err("the adjoint identities of a frame need a space context"));
    };
    let frame = space_frame(root, v)?.0;
    Ok((|| {
        let frame = stable(v, frame, report)?;
        let ds = decomposition_system_of_frame(v, &frame, Sublattice::Full)?;
        let failures = epsilon_adjoint_identities(v, &ds)?;
        report.set("identity_failures", failures.iter().map(|(k, i)| json!([k, i])).collect::<Vec<_>>());
        for (k, i) in &failures {
            report.line(format!("eps*_{k}{i} after eps*_{i}{k} is not the projection onto U_{i}"));
        }
        report.check("epsilon adjoint identities", failures.is_empty());
        Ok(())
    })())
}

/// `{"space", "ui", "uj", "f", "g"?}`, `{"ring", "ei", "ej", "a"?, "b"?}` or a frame file.
pub fn adjoint(cfg: &Config, input: &str) -> Result<Report, CliError> {
    let doc = Owned::read(input)?;
    let root = doc.root();
    let mut report = Report::new("coord adjoint");
    let outcome = if root.has("context") {
        frame_adjoint(cfg, root, &mut report)?
    } else if root.has("ring") {
        ring_adjoint(cfg, root, &mut report)?
    } else if root.has("space") {
        space_adjoint(cfg, root, &mut report)?
    } else {
        return Err(root.err("expected a \"space\", \"ring\" or \"context\" key"));
    };
    if let Err(e) = outcome {
        absorb(&mut report, input, e)?;
    }
    Ok(report)
}
