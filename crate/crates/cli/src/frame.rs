use serde_json::{json, Value};

use starreg::frames::{
    canonical_frame, find_frame, lift_frame, orthogonalize_frame, stabilize_frame, verify_frame, Frame, FrameReport, Level,
};
use starreg::latcore::{quotient_hom, FiniteLattice, IdealLattice, LatticeContext};
use starreg::starring::FiniteRing;
use starreg::subspace::{InnerProductSpace, Subspace};

use crate::descriptor::{self, frame_json, subspace_json, Context, Node, Owned};
use crate::report::Report;
use crate::{CliError, Config};

/// Context of a frame file (under `"context"`) or of a bare context file.
pub fn context_of(cfg: &Config, root: Node<'_>) -> Result<(Context, Value), CliError> {
    let (b, s, seed) = (cfg.budget(), cfg.samples(), cfg.seed);
    if root.has("context") {
        return root.at("context", |c| Ok((descriptor::context(c, b, s, seed)?, c.v.clone())));
    }
    let ctx = descriptor::context(root, b, s, seed)?;
    let echo: serde_json::Map<String, Value> = ["lattice", "ring", "space"]
        .into_iter()
        .filter_map(|k| root.v.get(k).map(|v| (k.to_string(), v.clone())))
        .collect();
    Ok((ctx, Value::Object(echo)))
}

pub fn lattice_frame(
    root: Node<'_>,
    l: &FiniteLattice,
    ring: Option<(&FiniteRing, &IdealLattice)>,
) -> Result<(Frame<u32>, Option<Level>), CliError> {
    descriptor::frame(root, &|n| descriptor::lattice_handle(l, ring, n))
}

pub fn space_frame(root: Node<'_>, v: &InnerProductSpace) -> Result<(Frame<Subspace>, Option<Level>), CliError> {
    descriptor::frame(root, &|n| descriptor::subspace(v, n))
}

pub fn index_json(x: &u32) -> Value {
    json!(x)
}

pub fn space_json(u: &Subspace) -> Value {
    subspace_json(u)
}

/// Put the frame's fields at the top level, so a JSON report is itself a frame file.
fn emit<E: Clone>(report: &mut Report, frame: &Frame<E>, level: Option<Level>, context: &Value, handle: &dyn Fn(&E) -> Value) {
    if let Value::Object(m) = frame_json(frame, level, handle) {
        for (k, v) in m {
            report.set(&k, v);
        }
    }
    report.set("context", context.clone());
    report.line(format!("format: ({},{})", frame.n, frame.k));
    for line in &frame.log {
        report.line(format!("  {line}"));
    }
}

fn clauses(report: &mut Report, r: &FrameReport) {
    report.set("clause_failures", serde_json::to_value(&r.failures).expect("failures serialize"));
    for f in &r.failures {
        report.line(format!("clause {} fails at {:?}", f.clause, f.indices));
    }
    report.check(&format!("{} frame", r.level), r.passed());
}

fn verify_in<L: LatticeContext>(l: &L, frame: &Frame<L::Elem>, level: Level) -> Report {
    let mut report = Report::new("frame verify");
    report.set("level", level.name());
    report.line(format!("format: ({},{}), level {level}", frame.n, frame.k));
    clauses(&mut report, &verify_frame(l, frame, level));
    report
}

pub fn verify(cfg: &Config, input: &str, flag: Option<Level>) -> Result<Report, CliError> {
    let doc = Owned::read(input)?;
    let root = doc.root();
    let (ctx, _) = context_of(cfg, root)?;
    let pick = |declared: Option<Level>| flag.or(declared).unwrap_or(Level::Basic);
    Ok(match &ctx {
        Context::Lattice(l) => {
            let (f, d) = lattice_frame(root, l, None)?;
            verify_in(l, &f, pick(d))
        }
        Context::Ring(r, ideals) => {
            let (f, d) = lattice_frame(root, &ideals.lattice, Some((r, ideals)))?;
            verify_in(&ideals.lattice, &f, pick(d))
        }
        Context::Space(v) => {
            let (f, d) = space_frame(root, v)?;
            verify_in(v, &f, pick(d))
        }
    })
}

fn found<E: Clone>(command: &str, frame: Option<Frame<E>>, n: usize, k: usize, context: &Value, handle: &dyn Fn(&E) -> Value) -> Report {
    let mut report = Report::new(command);
    match frame {
        Some(f) => emit(&mut report, &f, Some(Level::Basic), context, handle),
        None => report.fail(format!("no ({n},{k})-frame found"), None),
    }
    report
}

pub fn find(cfg: &Config, input: &str, n: usize, k: usize) -> Result<Report, CliError> {
    if n == 0 {
        return Err(CliError::input("--n", "n must be positive"));
    }
    let doc = Owned::read(input)?;
    let (ctx, echo) = context_of(cfg, doc.root())?;
    Ok(match &ctx {
        Context::Lattice(l) => found("frame find", find_frame(l, n, k), n, k, &echo, &index_json),
        Context::Ring(_, ideals) => found("frame find", find_frame(&ideals.lattice, n, k), n, k, &echo, &index_json),
        Context::Space(v) => {
            let f = canonical_frame(v, n, k).or_else(|| find_frame(v, n, k));
            found("frame find", f, n, k, &echo, &space_json)
        }
    })
}

fn stabilize_in<L: LatticeContext>(l: &L, frame: &Frame<L::Elem>, context: &Value, handle: &dyn Fn(&L::Elem) -> Value) -> Report {
    let mut report = Report::new("frame stabilize");
    match stabilize_frame(l, frame) {
        Ok(s) => {
            let level = if l.is_mol() && verify_frame(l, &s, Level::StableOrthogonal).passed() {
                Level::StableOrthogonal
            } else {
                Level::Stable
            };
            emit(&mut report, &s, Some(level), context, handle);
            clauses(&mut report, &verify_frame(l, &s, level));
        }
        Err(e) => report.fail(e.to_string(), None),
    }
    report
}

pub fn stabilize(cfg: &Config, input: &str) -> Result<Report, CliError> {
    let doc = Owned::read(input)?;
    let root = doc.root();
    let (ctx, echo) = context_of(cfg, root)?;
    Ok(match &ctx {
        Context::Lattice(l) => stabilize_in(l, &lattice_frame(root, l, None)?.0, &echo, &index_json),
        Context::Ring(r, ideals) => {
            let f = lattice_frame(root, &ideals.lattice, Some((r, ideals)))?.0;
            stabilize_in(&ideals.lattice, &f, &echo, &index_json)
        }
        Context::Space(v) => stabilize_in(v, &space_frame(root, v)?.0, &echo, &space_json),
    })
}

fn orthogonalize_in<L: LatticeContext>(
    l: &L,
    frame: &Frame<L::Elem>,
    context: &Value,
    handle: &dyn Fn(&L::Elem) -> Value,
) -> Report {
    let mut report = Report::new("frame orthogonalize");
    match orthogonalize_frame(l, frame) {
        Ok(o) => {
            emit(&mut report, &o.frame, Some(Level::Orthogonal), context, handle);
            report.set("origin", o.origin.clone());
            report.set("images", o.images.iter().map(handle).collect::<Vec<_>>());
            report.line(format!("tails: {} -> {}", frame.k, o.frame.k));
            clauses(&mut report, &verify_frame(l, &o.frame, Level::Orthogonal));
            let lead = (0..frame.n).all(|i| o.frame.a[i] == frame.a[i]);
            report.check("leading part unchanged", lead);
            let within = o.images.iter().all(|x| l.leq(x, &frame.a[0]));
            report.check("tail images below a_0", within);
        }
        Err(e) => report.fail(e.to_string(), None),
    }
    report
}

pub fn orthogonalize(cfg: &Config, input: &str) -> Result<Report, CliError> {
    let doc = Owned::read(input)?;
    let root = doc.root();
    let (ctx, echo) = context_of(cfg, root)?;
    Ok(match &ctx {
        Context::Lattice(l) => orthogonalize_in(l, &lattice_frame(root, l, None)?.0, &echo, &index_json),
        Context::Ring(r, ideals) => {
            let f = lattice_frame(root, &ideals.lattice, Some((r, ideals)))?.0;
            orthogonalize_in(&ideals.lattice, &f, &echo, &index_json)
        }
        Context::Space(v) => orthogonalize_in(v, &space_frame(root, v)?.0, &echo, &space_json),
    })
}

/// `{"ring": …, "ideal": …, "frame": {…}}`: the frame lives in the lattice of
/// `R/I`, with handles given as indices there or as `{"generator": x}` for `x ∈ R`.
pub fn lift(cfg: &Config, input: &str, level: Level) -> Result<Report, CliError> {
    let doc = Owned::read(input)?;
    let root = doc.root();
    let r = root.at("ring", |n| descriptor::ring(n)?.finite(n))?;
    let ideal = root.at("ideal", |n| descriptor::ideal(&r, n))?;
    let (src, _, tgt, f) = quotient_hom(&r, &ideal, cfg.budget()).map_err(|e| root.err(e.to_string()))?;
    let handle = |n: Node<'_>| -> Result<u32, CliError> {
        if n.has("generator") {
            return n.at("generator", |g| Ok(f.apply(src.element(descriptor::element(&r, g)?))));
        }
        descriptor::lattice_handle(&tgt.lattice, None, n)
    };
    let (phi, _) = root.at("frame", |n| descriptor::frame(n, &handle))?;

    let mut report = Report::new("frame lift");
    report.line(format!("R = {} ({} elements), |I| = {}", r.name(), r.size(), ideal.len()));
    report.line(format!("L(R): {} elements, L(R/I): {} elements", src.size(), tgt.size()));
    report.set("level", level.name());
    match lift_frame(&src.lattice, &tgt.lattice, &f, &phi, level) {
        Ok(lifted) => {
            report.set("lifted", frame_json(&lifted.frame, Some(level), &index_json));
            report.set("section_top", lifted.section_top);
            report.set("restriction_surjective", lifted.restriction_surjective);
            report.line(format!("section [0, {}]", src.lattice.label(lifted.section_top)));
            clauses(&mut report, &lifted.report);
            report.check("image matches", lifted.image_matches);
        }
        Err(e) => report.fail(e.to_string(), None),
    }
    Ok(report)
}
