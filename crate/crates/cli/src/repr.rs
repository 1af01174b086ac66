use serde_json::{json, Value};

use starreg::coord::{extend_ideal_representation, ExtensionReport};
use starreg::exactalg::Matrix;
use starreg::starring::FiniteRing;
use starreg::subspace::InnerProductSpace;

use crate::coord::{absorb, eta_in};
use crate::descriptor::{self, Node, Owned};
use crate::report::Report;
use crate::{CliError, Config};

type Rep<'a> = Box<dyn Fn(u32) -> Matrix + 'a>;

fn matrix_dim(r: &FiniteRing) -> Option<usize> {
    r.matrix_ring().map(|m| m.n())
}

/// `{"kind": "matrix"}` (a matrix ring acting on its column space),
/// `{"kind": "factor", "index": i}` (one matrix factor of a product) or
/// `{"kind": "blocks"}` (every factor of a product, block diagonally).
fn varrho<'a>(r: &'a FiniteRing, v: &InnerProductSpace, node: Node<'_>) -> Result<Rep<'a>, CliError> {
    let field = v.field().clone();
    let same_field = |f: &FiniteRing| f.matrix_ring().is_some_and(|m| *m.field() == field);
    let need = |want: usize| {
        if want == v.dim() {
            Ok(())
        } else {
            Err(node.err(format!("the representation acts on dimension {want}, the space has {}", v.dim())))
        }
    };
    match node.str_at("kind")? {
        "matrix" => {
            let n = matrix_dim(r).filter(|_| same_field(r)).ok_or_else(|| node.err("needs a matrix ring over the space's field"))?;
            need(n)?;
            Ok(Box::new(move |x| r.decode_matrix(x).expect("matrix element")))
        }
        "factor" => {
            let i = node.at("index", |n| n.usize())?;
            let factors = r.factors().ok_or_else(|| node.err("needs a product ring"))?;
            let f = factors.get(i).ok_or_else(|| node.err(format!("no factor {i}")))?;
            let n = matrix_dim(f).filter(|_| same_field(f)).ok_or_else(|| node.err("the factor is not a matrix ring over the space's field"))?;
            need(n)?;
            Ok(Box::new(move |x| f.decode_matrix(r.components(x).expect("product element")[i]).expect("matrix element")))
        }
        "blocks" => {
            let factors = r.factors().ok_or_else(|| node.err("needs a product ring"))?;
            let dims = factors
                .iter()
                .map(|f| matrix_dim(f).filter(|_| same_field(f)))
                .collect::<Option<Vec<usize>>>()
                .ok_or_else(|| node.err("every factor must be a matrix ring over the space's field"))?;
            need(dims.iter().sum())?;
            Ok(Box::new(move |x| {
                let comps = r.components(x).expect("product element");
                let mut out = Matrix::zeros(&field, dims.iter().sum(), dims.iter().sum());
                let mut at = 0;
                for ((f, &c), &d) in factors.iter().zip(&comps).zip(&dims) {
                    let m = f.decode_matrix(c).expect("matrix element");
                    for a in 0..d {
                        for b in 0..d {
                            out.set(at + a, at + b, m.get(a, b).clone());
                        }
                    }
                    at += d;
                }
                out
            }))
        }
        other => Err(node.err(format!("unknown representation kind {other:?}"))),
    }
}

fn extension_verdicts(r: &FiniteRing, rep: &ExtensionReport) -> Value {
    let mut v = serde_json::to_value(rep).expect("report serializes");
    v["kernel_witness_element"] = rep.kernel_witness.map(|w| r.element_json(w)).unwrap_or(Value::Null);
    v
}

fn explicit(cfg: &Config, root: Node<'_>, origin: &str, report: &mut Report) -> Result<(), CliError> {
    let r = root.at("ring", |n| descriptor::ring(n)?.finite(n))?;
    let ideal = root.at("ideal", |n| descriptor::ideal(&r, n))?;
    let v = root.at("space", |n| descriptor::space(n, cfg.samples(), cfg.seed))?;
    let rep = root.at("varrho", |n| varrho(&r, &v, n))?;
    for key in ["ring", "ideal", "space", "varrho"] {
        report.set(key, root.v[key].clone());
    }
    report.set("map", "explicit");
    report.set("samples", cfg.samples);
    report.line(format!("R = {} ({} elements), |I| = {}", r.name(), r.size(), ideal.len()));
    match extend_ideal_representation(&r, &ideal, &v, &*rep) {
        Ok(ext) => {
            let e = &ext.report;
            report.set("verdicts", extension_verdicts(&r, e));
            report.line(format!("dim U = {}, dim V = {}", e.dim_u, e.dim_v));
            report.check("*-representation", e.is_representation());
            report.line(format!("faithful: {}", e.faithful));
            if let Some(w) = e.kernel_witness {
                report.line(format!("kernel witness: {}", r.element_json(w)));
            }
            report.line(format!("varrho faithful: {}", e.varrho_faithful));
            report.line(format!("left action on I injective: {}", e.left_action_injective));
            report.check("faithfulness criterion agrees", e.criterion_agrees);
            Ok(())
        }
        Err(e) => absorb(report, origin, e),
    }
}

pub fn extend(cfg: &Config, input: &str) -> Result<Report, CliError> {
    let doc = Owned::read(input)?;
    let mut report = Report::new("repr extend");
    explicit(cfg, doc.root(), input, &mut report)?;
    Ok(report)
}

/// Recompute a representation file, with its recorded samples and seed,
/// and compare against its recorded verdicts when present.
pub fn verify(cfg: &Config, input: &str) -> Result<Report, CliError> {
    let doc = Owned::read(input)?;
    let root = doc.root();
    let mut cfg = cfg.clone();
    if let Some(s) = root.opt("samples", |n| n.u64())? {
        cfg.samples = s.max(1);
    }
    if let Some(s) = root.opt("seed", |n| n.u64())? {
        cfg.seed = s;
    }
    let mut report = Report::new("repr verify");
    let fresh = match root.str_at("map")? {
        "explicit" => {
            explicit(&cfg, root, input, &mut report)?;
            report.get("verdicts").cloned()
        }
        "theta-eta" => {
            root.at("frame", |f| eta_in(&cfg, f, input, true, &mut report))?;
            report.set("map", "theta-eta");
            report.set("frame", root.v["frame"].clone());
            report.set("samples", cfg.samples);
            let verdicts = report.get("rho").cloned();
            if let Some(v) = &verdicts {
                report.set("verdicts", v.clone());
            }
            verdicts
        }
        other => return Err(root.err(format!("unknown map {other:?}, expected \"explicit\" or \"theta-eta\""))),
    };
    if let Some(recorded) = root.v.get("verdicts").filter(|v| !v.is_null()) {
        let same = fresh.as_ref() == Some(recorded);
        report.check("matches recorded verdicts", same);
        if !same {
            report.set("recorded_verdicts", recorded.clone());
        }
    }
    report.set("seed_used", json!(cfg.seed));
    Ok(report)
}
