use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use starreg::latcore::{
    principal_left_ideal_lattice, principal_right_ideal_lattice, star_duality, verify_lattice_axioms, verify_mol,
    AxiomReport, FiniteLattice, IdealLattice, LatticeContext, CONGRUENCE_BOUND,
};
use starreg::starring::FiniteRing;

use crate::descriptor::{self, Node, Owned};
use crate::report::Report;
use crate::{CliError, Config};

fn ideal_lattice(cfg: &Config, node: Node<'_>) -> Result<(FiniteRing, IdealLattice), CliError> {
    let r = descriptor::ring(node)?.finite(node)?;
    let ideals = principal_right_ideal_lattice(&r, cfg.budget()).map_err(|e| node.err(e.to_string()))?;
    Ok((r, ideals))
}

pub fn build(cfg: &Config, input: &str) -> Result<Report, CliError> {
    let doc = Owned::read(input)?;
    let (r, ideals) = ideal_lattice(cfg, doc.root())?;
    let l = &ideals.lattice;
    let mut report = Report::new("lattice build");
    report.line(format!("ring: {} ({} elements)", r.name(), r.size()));
    report.line(format!("principal right ideals: {}, height {}", l.size(), l.height()));
    report.line(format!("orthocomplemented: {}", l.ortho_map().is_some()));
    for a in l.carrier() {
        report.line(format!("  {a}: {} ({} elements)", l.label(a), ideals.sets[a as usize].len()));
    }
    report.set("lattice", l.to_json());
    report.set("generators", ideals.generators.iter().map(|&x| r.element_json(x)).collect::<Vec<_>>());
    report.set("projections", ideals.projections.as_ref().map(|p| p.iter().map(|&e| r.element_json(e)).collect::<Vec<_>>()));
    report.dot = Some(l.to_dot(r.name()));
    Ok(report)
}

fn axiom(report: &mut Report, a: &AxiomReport) -> Value {
    report.line(format!(
        "{}: {}{}",
        a.name,
        a.passed,
        a.witness.as_ref().map(|w| format!(" at {}", w.join(", "))).unwrap_or_default()
    ));
    json!({"name": a.name, "passed": a.passed, "exhaustive": a.exhaustive, "witness": a.witness})
}

pub fn check(cfg: &Config, input: &str) -> Result<Report, CliError> {
    let doc = Owned::read(input)?;
    let root = doc.root();
    let mut report = Report::new("lattice check");
    let mut ring = None;
    let lattice = if root.has("elements") {
        FiniteLattice::from_json(root.v).map_err(|e| root.err(e.to_string()))?
    } else if root.has("lattice") {
        root.at("lattice", |l| FiniteLattice::from_json(l.v).map_err(|e| l.err(e.to_string())))?
    } else {
        let (r, ideals) = if root.has("ring") { root.at("ring", |n| ideal_lattice(cfg, n))? } else { ideal_lattice(cfg, root)? };
        let l = ideals.lattice.clone();
        ring = Some((r, ideals));
        l
    };
    report.line(format!("elements: {}, height {}", lattice.size(), lattice.height()));
    report.set("elements", lattice.size());
    report.set("height", lattice.height());

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let axioms = verify_lattice_axioms(&lattice, cfg.samples(), &mut rng);
    let list: Vec<Value> =
        [&axioms.modular, &axioms.complemented, &axioms.relatively_complemented].into_iter().map(|a| axiom(&mut report, a)).collect();
    report.set("lattice_axioms", list);
    report.check("complemented modular", axioms.is_cml());

    if lattice.ortho_map().is_some() {
        let mol = verify_mol(&lattice, cfg.samples(), &mut rng).map_err(|e| root.err(e.to_string()))?;
        let list: Vec<Value> = mol.axioms.iter().map(|a| axiom(&mut report, a)).collect();
        report.set("ortho_axioms", list);
        report.check("modular ortholattice", mol.passed());
    } else {
        report.set("ortho_axioms", Value::Null);
        report.line("orthocomplement: none");
    }

    if lattice.size() <= CONGRUENCE_BOUND {
        let simple = lattice.is_simple().map_err(|e| root.err(e.to_string()))?;
        let lower = lattice.lower_intervals_simple().map_err(|e| root.err(e.to_string()))?;
        report.set("simple", simple);
        report.set("lower_intervals_simple", lower.is_none());
        report.line(format!("simple: {simple}"));
        match lower {
            None => report.line("every [0, a] simple: true"),
            Some(a) => report.line(format!("every [0, a] simple: false, first failure at {}", lattice.label(a))),
        }
    } else {
        report.line(format!("simplicity: skipped (more than {CONGRUENCE_BOUND} elements)"));
    }

    if let Some((r, right)) = &ring {
        let left = principal_left_ideal_lattice(r, cfg.budget()).map_err(|e| root.err(e.to_string()))?;
        let d = star_duality(r, right, &left);
        report.set(
            "duality",
            json!({
                "star_isomorphism": d.star_isomorphism,
                "annihilator_anti_isomorphism": d.annihilator_anti_isomorphism,
                "annihilator_is_ortho_of_star": d.annihilator_is_ortho_of_star,
                "witness": d.witness,
            }),
        );
        report.check("left/right duality", d.passed());
    }
    report.dot = Some(lattice.to_dot("lattice"));
    Ok(report)
}
