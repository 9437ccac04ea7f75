use std::fmt::Write as _;

use abmod::format::{self, family_to_json, form_to_json, matrix_to_json, module_to_json, morphism_to_json};
use abmod::forms::{classify_self_adjoint, hermitianize, uncurry, FormVerdict, SesquilinearForm};
use abmod::saito::{check_all, default_normalization, extract_pairings, find_duality, symmetrize_delta, AxiomReport};
use abmod::structure::{composition_series, is_regular, krull_schmidt, Regularity};
use abmod::{are_isomorphic, solve_hom, ABModule, ABMorphism, Error, HomBasis, IsoVerdict, Result, Scalar};
use serde_json::{json, Value};

use crate::{input, render, Command, GlobalOpts};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    No,
    Error,
    Inconclusive,
}

impl Status {
    pub fn code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::No => 1,
            Status::Error => 2,
            Status::Inconclusive => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::No => "no",
            Status::Error => "error",
            Status::Inconclusive => "inconclusive",
        }
    }

    pub fn from_error(e: &Error) -> Self {
        match e {
            Error::Inconclusive(_) => Status::Inconclusive,
            _ => Status::Error,
        }
    }
}

pub struct Outcome {
    pub status: Status,
    pub human: String,
    pub json: Value,
    pub certified: Option<bool>,
    pub precision: Option<usize>,
}

impl Outcome {
    fn module(e: &ABModule) -> Self {
        Outcome {
            status: Status::Ok,
            human: render::module(e),
            json: module_to_json(e),
            certified: None,
            precision: Some(e.precision()),
        }
    }
}

pub fn run(cmd: &Command, opts: &GlobalOpts) -> Result<Outcome> {
    let load = |p: &str| input::module(p, opts);
    match cmd {
        Command::Validate { file } => validate(&load(file)?),
        Command::Show { file } => Ok(Outcome::module(&load(file)?)),
        Command::Dual { file } => Ok(Outcome::module(&load(file)?.dual())),
        Command::Adjoint { file } => Ok(Outcome::module(&load(file)?.adjoint())),
        Command::Conjugate { file } => Ok(Outcome::module(&load(file)?.conjugate())),
        Command::Tensor { left, right } => Ok(Outcome::module(&load(left)?.tensor(&load(right)?)?)),
        Command::Sum { files } => {
            let parts = files.iter().map(|f| load(f)).collect::<Result<Vec<_>>>()?;
            Ok(Outcome::module(&ABModule::direct_sum_all(&parts)?))
        }
        Command::Homs { domain, codomain } => homs(&load(domain)?, &load(codomain)?),
        Command::Endos { file } => {
            let e = load(file)?;
            homs(&e, &e)
        }
        Command::Isomorphic { left, right } => isomorphic(&load(left)?, &load(right)?, opts),
        Command::Decompose { file } => decompose(&load(file)?, opts),
        Command::CompSeries { file } => comp_series(&load(file)?),
        Command::Regular { file, max_steps } => regular(&load(file)?, *max_steps),
        Command::Forms { file } => forms(&load(file)?),
        Command::Hermitianize { file } => hermitianize_cmd(&load(file)?, opts),
        Command::Classify { file } => classify(&load(file)?, opts),
        Command::SaitoExtract {
            file,
            delta,
            normalization,
        } => {
            let delta: Scalar = delta.parse()?;
            let norm = match normalization {
                Some(n) => n.parse()?,
                None => default_normalization(&delta),
            };
            saito_extract(&load(file)?, &delta, &norm, opts)
        }
        Command::SaitoCheck { file, module } => {
            let (f, e) = input::family(file, module.as_deref(), opts)?;
            Ok(axiom_outcome(
                &check_all(&f, &e),
                json!({"family": family_to_json(&f, Some(&e))}),
                f.precision(),
            ))
        }
        Command::SaitoSymmetrize { file, module } => {
            let (f, e) = input::family(file, module.as_deref(), opts)?;
            saito_symmetrize(&f, &e)
        }
    }
}

fn validate(e: &ABModule) -> Result<Outcome> {
    let r = e.validate();
    let mut human = format!(
        "{}: rank {}, precision {}\n",
        if r.passed { "valid" } else { "invalid" },
        e.rank(),
        r.effective_precision
    );
    for j in &r.failures {
        let _ = writeln!(human, "  commutation relation fails on {}", e.labels()[*j]);
    }
    Ok(Outcome {
        status: if r.passed { Status::Ok } else { Status::No },
        human,
        json: json!({
            "passed": r.passed,
            "rank": e.rank(),
            "effective_precision": r.effective_precision,
            "failures": r.failures.iter().map(|&j| e.labels()[j].clone()).collect::<Vec<_>>(),
        }),
        certified: Some(true),
        precision: Some(r.effective_precision),
    })
}

fn hom_json(h: &HomBasis, e: &ABModule, f: &ABModule) -> Value {
    json!({
        "dimension": h.dim,
        "precision": h.precision,
        "stable": h.stable,
        "resonance_bound": h.resonance_bound,
        "domain": module_to_json(e),
        "codomain": module_to_json(f),
        "generators": h.morphisms.iter().map(|m| matrix_to_json(m.matrix())).collect::<Vec<_>>(),
    })
}

fn homs(e: &ABModule, f: &ABModule) -> Result<Outcome> {
    let h = solve_hom(e, f)?;
    let mut human = format!(
        "dimension {} at precision {} ({})\n",
        h.dim,
        h.precision,
        if h.stable { "stable" } else { "not certified stable" }
    );
    for (k, m) in h.morphisms.iter().enumerate() {
        let _ = writeln!(human, "generator {}:", k + 1);
        human.push_str(&render::matrix(m.matrix(), "  "));
    }
    Ok(Outcome {
        status: if h.stable { Status::Ok } else { Status::Inconclusive },
        json: hom_json(&h, e, f),
        human,
        certified: Some(h.stable),
        precision: Some(h.precision),
    })
}

fn isomorphic(e: &ABModule, f: &ABModule, opts: &GlobalOpts) -> Result<Outcome> {
    let p = e.precision().min(f.precision());
    let (e, f) = (e.truncate(p), f.truncate(p));
    Ok(match are_isomorphic(&e, &f, opts.trials, opts.seed)? {
        IsoVerdict::Yes(w) => Outcome {
            status: Status::Ok,
            human: format!(
                "yes\nwitness at precision {}:\n{}",
                w.precision(),
                render::matrix(w.matrix(), "  ")
            ),
            json: json!({"verdict": "yes", "witness": morphism_to_json(&w)}),
            certified: Some(true),
            precision: Some(w.precision()),
        },
        IsoVerdict::No { certified } => Outcome {
            status: if certified { Status::No } else { Status::Inconclusive },
            human: format!("no{}\n", if certified { "" } else { " (not certified)" }),
            json: json!({"verdict": "no", "certified": certified}),
            certified: Some(certified),
            precision: Some(p),
        },
        IsoVerdict::Inconclusive(msg) => Outcome {
            status: Status::Inconclusive,
            human: format!("inconclusive: {msg}\n"),
            json: json!({"verdict": "inconclusive", "reason": msg}),
            certified: Some(false),
            precision: Some(p),
        },
    })
}

fn decompose(e: &ABModule, opts: &GlobalOpts) -> Result<Outcome> {
    let r = krull_schmidt(e, opts.trials, opts.seed)?;
    let mut human = format!(
        "{} indecomposable summand(s) in {} class(es) at precision {}{}\n",
        r.blocks.len(),
        r.factors.len(),
        r.precision,
        if r.certified { "" } else { " (not certified)" }
    );
    for (k, f) in r.factors.iter().enumerate() {
        let _ = writeln!(
            human,
            "class {}: rank {}, multiplicity {}{}",
            k + 1,
            f.module.rank(),
            f.multiplicity,
            if f.certified_indecomposable {
                ""
            } else {
                ", indecomposability not certified"
            }
        );
        for rel in f.module.relations() {
            let _ = writeln!(human, "  {rel}");
        }
    }
    for n in &r.notes {
        let _ = writeln!(human, "note: {n}");
    }
    let factors: Vec<Value> = r
        .factors
        .iter()
        .map(|f| {
            json!({
                "module": module_to_json(&f.module),
                "multiplicity": f.multiplicity,
                "blocks": f.blocks,
                "certified_indecomposable": f.certified_indecomposable,
            })
        })
        .collect();
    Ok(Outcome {
        status: if r.certified { Status::Ok } else { Status::Inconclusive },
        human,
        json: json!({
            "factors": factors,
            "blocks": r.blocks.iter().map(module_to_json).collect::<Vec<_>>(),
            "witness": morphism_to_json(&r.witness),
            "certified": r.certified,
            "notes": r.notes,
        }),
        certified: Some(r.certified),
        precision: Some(r.precision),
    })
}

fn comp_series(e: &ABModule) -> Result<Outcome> {
    let steps = composition_series(e)?;
    let exps: Vec<String> = steps.iter().map(|s| s.exponent.to_string()).collect();
    let last = steps.last().map_or(e.precision(), |s| s.precision);
    Ok(Outcome {
        status: Status::Ok,
        human: format!("exponents: {}\n", exps.join(", ")),
        json: json!({
            "exponents": exps,
            "steps": steps.iter().map(|s| json!({
                "exponent": s.exponent.to_string(),
                "monomial": s.monomial.coords.iter().map(format::series_to_json).collect::<Vec<_>>(),
                "precision": s.precision,
            })).collect::<Vec<_>>(),
        }),
        certified: None,
        precision: Some(last),
    })
}

fn regular(e: &ABModule, max_steps: Option<usize>) -> Result<Outcome> {
    let cap = max_steps.unwrap_or(e.rank() * e.precision());
    Ok(match is_regular(e, cap) {
        Regularity::Regular(s) => {
            let chi = s.residue().char_poly();
            let (roots, rest) = chi.gaussian_rational_roots();
            let mut eig: Vec<String> = Vec::new();
            for r in &roots {
                for _ in 0..chi.root_multiplicity(r) {
                    eig.push(r.to_string());
                }
            }
            let mut human = format!("regular: saturated after {} step(s), shift {}\n", s.steps, s.shift);
            let _ = writeln!(human, "residue eigenvalues: {}", eig.join(", "));
            if rest > 0 {
                let _ = writeln!(human, "({rest} eigenvalue(s) outside Q(i))");
            }
            human.push_str("simple-pole presentation:\n");
            for rel in s.presentation.relations() {
                let _ = writeln!(human, "  {rel}");
            }
            Outcome {
                status: Status::Ok,
                human,
                json: json!({
                    "verdict": "regular",
                    "steps": s.steps,
                    "shift": s.shift,
                    "lattice": matrix_to_json(&s.lattice),
                    "saturation": module_to_json(&s.presentation),
                    "residue_eigenvalues": eig,
                }),
                certified: Some(true),
                precision: Some(s.presentation.precision()),
            }
        }
        Regularity::NotRegular { steps } => Outcome {
            status: Status::No,
            human: format!("not regular: no saturation within {steps} steps\n"),
            json: json!({"verdict": "not_regular", "steps": steps}),
            certified: Some(false),
            precision: Some(e.precision()),
        },
        Regularity::Inconclusive(msg) => Outcome {
            status: Status::Inconclusive,
            human: format!("inconclusive: {msg}\n"),
            json: json!({"verdict": "inconclusive", "reason": msg}),
            certified: Some(false),
            precision: Some(e.precision()),
        },
    })
}

fn forms(e: &ABModule) -> Result<Outcome> {
    let h = solve_hom(e, &e.adjoint())?;
    let fs: Vec<SesquilinearForm> = h.morphisms.iter().map(uncurry).collect::<Result<_>>()?;
    let mut human = format!(
        "{} independent form(s) at precision {}{}\n",
        fs.len(),
        h.precision,
        if h.stable { "" } else { " (not certified stable)" }
    );
    for (k, f) in fs.iter().enumerate() {
        let _ = writeln!(
            human,
            "form {}: {}, {}",
            k + 1,
            f.hermitian_type().name(),
            if f.is_nondegenerate() {
                "nondegenerate"
            } else {
                "degenerate"
            }
        );
        human.push_str(&render::matrix(&f.pairing, "  "));
    }
    Ok(Outcome {
        status: if h.stable { Status::Ok } else { Status::Inconclusive },
        human,
        json: json!({"forms": fs.iter().map(form_to_json).collect::<Vec<_>>(), "stable": h.stable}),
        certified: Some(h.stable),
        precision: Some(h.precision),
    })
}

fn verdict_json(v: &FormVerdict) -> Value {
    json!({
        "kind": v.kind.name(),
        "hermitian": v.hermitian.as_ref().map(form_to_json),
        "antihermitian": v.antihermitian.as_ref().map(form_to_json),
        "certified": v.certified,
        "notes": v.notes,
    })
}

fn hermitianize_cmd(e: &ABModule, opts: &GlobalOpts) -> Result<Outcome> {
    let v = match hermitianize(e, opts.trials, opts.seed) {
        Ok(v) => v,
        Err(Error::NotSelfAdjoint) => {
            return Ok(Outcome {
                status: Status::No,
                human: "not self-adjoint: no nondegenerate sesquilinear form\n".into(),
                json: json!({"kind": "none", "self_adjoint": false}),
                certified: Some(true),
                precision: None,
            })
        }
        Err(e) => return Err(e),
    };
    let mut human = format!("{}\n", v.kind.name());
    for (label, f) in [("hermitian", &v.hermitian), ("antihermitian", &v.antihermitian)] {
        if let Some(f) = f {
            let _ = writeln!(human, "{label} witness:");
            human.push_str(&render::matrix(&f.pairing, "  "));
        }
    }
    for n in &v.notes {
        let _ = writeln!(human, "note: {n}");
    }
    let status = match v.kind {
        abmod::forms::VerdictKind::Neither => Status::No,
        _ if !v.certified => Status::Inconclusive,
        _ => Status::Ok,
    };
    Ok(Outcome {
        status,
        human,
        json: verdict_json(&v),
        certified: Some(v.certified),
        precision: Some(v.precision),
    })
}

fn classify(e: &ABModule, opts: &GlobalOpts) -> Result<Outcome> {
    let r = classify_self_adjoint(e, opts.trials, opts.seed)?;
    let fac = &r.decomposition.factors;
    let mut human = format!(
        "{}{}\n",
        if r.module_is_self_adjoint {
            "self-adjoint"
        } else {
            "not self-adjoint"
        },
        if r.certified { "" } else { " (not certified)" }
    );
    for s in &r.self_adjoint {
        let kind = match &s.verdict {
            Ok(v) => v.kind.name().to_string(),
            Err(m) => format!("error: {m}"),
        };
        let _ = writeln!(
            human,
            "self-adjoint class {} (rank {}, multiplicity {}): {kind}",
            s.class + 1,
            fac[s.class].module.rank(),
            s.multiplicity
        );
    }
    for p in &r.pairs {
        let _ = writeln!(
            human,
            "adjoint pair: class {} (multiplicity {}) with class {} (multiplicity {})",
            p.class + 1,
            p.multiplicity,
            p.adjoint_class + 1,
            p.adjoint_multiplicity
        );
    }
    for u in &r.unmatched {
        let _ = writeln!(human, "class {} has no adjoint partner", u + 1);
    }
    for n in &r.notes {
        let _ = writeln!(human, "note: {n}");
    }
    let json = json!({
        "self_adjoint": r.module_is_self_adjoint,
        "classes": fac.iter().map(|f| json!({
            "module": module_to_json(&f.module),
            "multiplicity": f.multiplicity,
        })).collect::<Vec<_>>(),
        "self_adjoint_classes": r.self_adjoint.iter().map(|s| json!({
            "class": s.class,
            "multiplicity": s.multiplicity,
            "verdict": match &s.verdict { Ok(v) => verdict_json(v), Err(m) => json!({"error": m}) },
        })).collect::<Vec<_>>(),
        "pairs": r.pairs.iter().map(|p| json!({
            "class": p.class,
            "adjoint_class": p.adjoint_class,
            "multiplicity": p.multiplicity,
            "adjoint_multiplicity": p.adjoint_multiplicity,
        })).collect::<Vec<_>>(),
        "unmatched": r.unmatched,
        "notes": r.notes,
    });
    Ok(Outcome {
        status: if !r.certified {
            Status::Inconclusive
        } else if r.module_is_self_adjoint {
            Status::Ok
        } else {
            Status::No
        },
        human,
        json,
        certified: Some(r.certified),
        precision: Some(r.decomposition.precision),
    })
}

fn saito_extract(e: &ABModule, delta: &Scalar, norm: &Scalar, opts: &GlobalOpts) -> Result<Outcome> {
    let m = match find_duality(e, delta, opts.trials, opts.seed) {
        Ok(m) => m,
        Err(Error::NotIsomorphism) => {
            return Ok(Outcome {
                status: Status::No,
                human: format!("no isomorphism onto the {delta}-dual\n"),
                json: json!({"isomorphism": false}),
                certified: Some(true),
                precision: None,
            })
        }
        Err(err) => return Err(err),
    };
    let f = extract_pairings(&m, delta, norm)?;
    let mut human = format!(
        "delta {}, normalization {}, precision {}\n",
        f.delta,
        f.normalization,
        f.precision()
    );
    human.push_str("S =\n");
    human.push_str(&render::matrix(&f.s, "  "));
    Ok(Outcome {
        status: Status::Ok,
        human,
        json: family_to_json(&f, Some(m.domain())),
        certified: Some(true),
        precision: Some(f.precision()),
    })
}

fn axiom_table(reports: &[AxiomReport]) -> String {
    let mut out = String::new();
    for r in reports {
        let _ = write!(out, "{:<12} {}", r.axiom, if r.passed { "pass" } else { "FAIL" });
        if let Some(f) = &r.failure {
            let _ = write!(
                out,
                "  (k = {}, basis pair ({}, {}): {})",
                f.k,
                f.i + 1,
                f.j + 1,
                f.detail
            );
        }
        out.push('\n');
        if let Some(n) = &r.note {
            let _ = writeln!(out, "{:<12} note: {n}", "");
        }
    }
    out
}

fn reports_json(reports: &[AxiomReport]) -> Value {
    Value::Array(
        reports
            .iter()
            .map(|r| {
                json!({
                    "axiom": r.axiom,
                    "passed": r.passed,
                    "checked_levels": r.checked_levels,
                    "failure": r.failure.as_ref().map(|f| json!({"k": f.k, "i": f.i, "j": f.j, "detail": f.detail})),
                    "note": r.note,
                })
            })
            .collect(),
    )
}

fn axiom_outcome(reports: &[AxiomReport], mut extra: Value, precision: usize) -> Outcome {
    let all = reports.iter().all(|r| r.passed);
    extra["axioms"] = reports_json(reports);
    Outcome {
        status: if all { Status::Ok } else { Status::No },
        human: axiom_table(reports),
        json: extra,
        certified: Some(true),
        precision: Some(precision),
    }
}

fn saito_symmetrize(f: &abmod::saito::PairingFamily, e: &ABModule) -> Result<Outcome> {
    let p = f.precision().min(e.precision());
    let e = e.truncate(p);
    let m = ABMorphism::checked(e.clone(), e.delta_dual(&f.delta), f.s.truncate(p))?;
    let sym = symmetrize_delta(&m, &f.delta, &f.normalization)?;
    let mut out = axiom_outcome(
        &sym.reports,
        json!({
            "family": family_to_json(&sym.family, Some(&e)),
            "morphism": morphism_to_json(&sym.morphism),
            "constant_term_unchanged": sym.constant_term_unchanged,
        }),
        sym.family.precision(),
    );
    let mut human = String::from("symmetrized S =\n");
    human.push_str(&render::matrix(&sym.family.s, "  "));
    if sym.constant_term_unchanged {
        human.push_str("constant term unchanged\n");
    }
    human.push_str(&out.human);
    out.human = human;
    Ok(out)
}
