use std::collections::BTreeMap;

use serde_json::{json, Value};

use dkl_core::circles::{brute_force_hom_dim, hom_matrix, poincare_table};
use dkl_core::tangles::ideal_elements;
use dkl_core::verify;
use dkl_core::{
    cell_datum, circle_diagram, cup_diagram, decorated_cup, enumerate_wp, format_word, generator, hom_dim, kl_basis,
    kl_poly_diagrammatic, kl_table, orientations_of, parse_word, representation_matrix, tlhat_basis,
    DecoratedCupDiagram, DecoratedTangle, GeneratorIndex, LaurentPoly, PMSequence, Scaled, TLElement,
};

use crate::output::{Outcome, UsageError};
use crate::{Cli, Command, ElementV, ElementW, ElementX, RenderKind, TlCommand};

type CmdResult = Result<Outcome, UsageError>;

/// Largest ranks for commands that enumerate everything.
const MAX_ENUMERATE: usize = 16;
const MAX_TABLE: usize = 10;
const MAX_PAIRS: usize = 8;
const MAX_TANGLES: usize = 7;

pub fn run(cli: &Cli) -> CmdResult {
    match &cli.command {
        Command::Wp => wp(rank(cli, MAX_ENUMERATE)?),
        Command::Word(w) => word(rank(cli, usize::MAX)?, w),
        Command::Klpoly { v, w } => klpoly(cli, v, w),
        Command::Klbasis(w) => klbasis(cli, w),
        Command::Cup(w) => cup(rank(cli, usize::MAX)?, w),
        Command::Homdim { w, x } => homdim(cli, w, x),
        Command::Poincare => poincare(cli),
        Command::Tl { command } => tl(cli, command),
        Command::Render { kind } => render(cli, kind),
        Command::Verify { suite } => {
            let n = rank(cli, usize::MAX)?;
            let report = verify::run(*suite, n)?;
            Ok(Outcome::new(report.render_text(), json!(report)).failed_if(!report.passed()))
        }
    }
}

fn rank(cli: &Cli, max: usize) -> Result<usize, UsageError> {
    let n = cli.n.ok_or_else(|| UsageError::new("missing rank: pass -n <N>"))?;
    if n == 0 {
        return Err(dkl_core::Error::ZeroRank.into());
    }
    if n > max {
        return Err(UsageError::new(format!(
            "n = {n} is too large for this command (at most {max})"
        )));
    }
    Ok(n)
}

fn element(n: usize, seq: (&str, &Option<String>), word: (&str, &Option<String>)) -> Result<PMSequence, UsageError> {
    match (seq.1, word.1) {
        (Some(_), Some(_)) => Err(UsageError::new(format!(
            "give either {} or {}, not both",
            seq.0, word.0
        ))),
        (None, None) => Err(UsageError::new(format!(
            "missing element: pass {} <SIGNS> or {} <WORD>",
            seq.0, word.0
        ))),
        (Some(s), None) => PMSequence::parse_with_rank(s, n).map_err(|e| UsageError::from_input(seq.0, s, e)),
        (None, Some(r)) => {
            let letters = parse_word(r, n).map_err(|e| UsageError::from_input(word.0, r, e))?;
            PMSequence::from_word(n, &letters).map_err(|e| UsageError::from_input(word.0, r, e))
        }
    }
}

fn elem_w(n: usize, a: &ElementW) -> Result<PMSequence, UsageError> {
    element(n, ("-w", &a.w), ("-r", &a.word))
}

fn elem_v(n: usize, a: &ElementV) -> Result<PMSequence, UsageError> {
    element(n, ("-v", &a.v), ("--v-word", &a.v_word))
}

fn elem_x(n: usize, a: &ElementX) -> Result<PMSequence, UsageError> {
    element(n, ("-x", &a.x), ("--x-word", &a.x_word))
}

fn gen_index(n: usize, i: usize) -> Result<GeneratorIndex, UsageError> {
    Ok(GeneratorIndex::new(i, n)?)
}

fn word_json(w: &PMSequence) -> Value {
    json!(w.reduced_word().iter().map(|i| i.get()).collect::<Vec<_>>())
}

fn poly_json(p: &LaurentPoly) -> Value {
    json!({"text": p.to_string(), "terms": p})
}

fn wp(n: usize) -> CmdResult {
    let all = enumerate_wp(n)?;
    let width = n.max(1) + 2;
    let mut text = format!("{:<width$}  {:>6}  word\n", "w", "length");
    for w in &all {
        text.push_str(&format!(
            "{:<width$}  {:>6}  {}\n",
            w.to_string(),
            w.length(),
            format_word(&w.reduced_word())
        ));
    }
    let elements: Vec<Value> = all
        .iter()
        .map(|w| json!({"w": w, "length": w.length(), "word": word_json(w)}))
        .collect();
    Ok(Outcome::new(text, json!({"n": n, "elements": elements})))
}

fn young_ascii(w: &PMSequence) -> String {
    let y = w.young_diagram();
    let lines: Vec<String> = y
        .rows()
        .iter()
        .map(|&len| "[]".repeat(len))
        .filter(|l| !l.is_empty())
        .collect();
    if lines.is_empty() {
        "(empty)".to_string()
    } else {
        lines.join("\n")
    }
}

fn word(n: usize, a: &ElementW) -> CmdResult {
    let w = elem_w(n, a)?;
    let y = w.young_diagram();
    let text = format!(
        "w      = {w}\nlength = {}\nword   = {}\nrows   = {:?}",
        w.length(),
        format_word(&w.reduced_word()),
        y.rows()
    );
    let json = json!({"n": n, "w": w, "length": w.length(), "word": word_json(&w), "young_rows": y.rows()});
    Ok(Outcome::new(text, json).with_ascii(young_ascii(&w)))
}

fn klpoly(cli: &Cli, v: &ElementV, w: &ElementW) -> CmdResult {
    let n = rank(cli, usize::MAX)?;
    let (v, w) = (elem_v(n, v)?, elem_w(n, w)?);
    let p = kl_poly_diagrammatic(&v, &w);
    let mut json = json!({"n": n, "v": v, "w": w, "poly": poly_json(&p)});
    let mut text = p.to_string();
    let mut bad = false;
    if cli.oracle {
        let n = rank(cli, MAX_TABLE)?;
        let h = kl_table(n)?.entry(&v, &w);
        bad = h != p;
        text.push_str(&format!(
            "\nrecursion: {h} ({})",
            if bad { "MISMATCH" } else { "agree" }
        ));
        json["oracle"] = json!({"recursion": poly_json(&h), "agree": !bad});
    }
    Ok(Outcome::new(text, json).failed_if(bad))
}

fn klbasis(cli: &Cli, a: &ElementW) -> CmdResult {
    if a.w.is_none() && a.word.is_none() {
        return kl_table_dump(rank(cli, MAX_TABLE)?);
    }
    let n = rank(cli, MAX_ENUMERATE)?;
    let w = elem_w(n, a)?;
    let mut terms: Vec<(PMSequence, LaurentPoly)> = orientations_of(&w)
        .into_iter()
        .map(|(v, cl)| (v, LaurentPoly::monomial(1, (cl / 2) as i64)))
        .collect();
    terms.sort_by(|a, b| b.0.length().cmp(&a.0.length()).then(a.0.cmp(&b.0)));
    let mut text = basis_text(terms.iter().cloned());
    let mut json = json!({
        "n": n,
        "w": w,
        "terms": terms.iter().map(|(v, p)| json!({"v": v, "poly": poly_json(p)})).collect::<Vec<_>>(),
    });
    let mut bad = false;
    if cli.oracle {
        rank(cli, MAX_TABLE)?;
        let algebraic: BTreeMap<PMSequence, LaurentPoly> =
            kl_basis(&w).terms().map(|(v, p)| (v.clone(), p.clone())).collect();
        let diagrammatic: BTreeMap<PMSequence, LaurentPoly> = terms.into_iter().collect();
        bad = algebraic != diagrammatic;
        text.push_str(&format!("\nrecursion: {}", if bad { "MISMATCH" } else { "agree" }));
        json["oracle"] = json!({"agree": !bad});
    }
    Ok(Outcome::new(text, json).failed_if(bad))
}

fn basis_text(terms: impl Iterator<Item = (PMSequence, LaurentPoly)>) -> String {
    let shown: Vec<String> = terms
        .map(|(v, p)| {
            if p.is_one() {
                format!("N({v})")
            } else {
                format!("{p} N({v})")
            }
        })
        .collect();
    shown.join(" + ")
}

fn kl_table_dump(n: usize) -> CmdResult {
    let table = kl_table(n)?;
    let mut text = String::new();
    for w in table.order() {
        let terms = table.row(w).terms().map(|(v, p)| (v.clone(), p.clone()));
        text.push_str(&format!("C({w}) = {}\n", basis_text(terms)));
    }
    Ok(Outcome::new(text, json!(table.to_json())))
}

fn cup(n: usize, a: &ElementW) -> CmdResult {
    let w = elem_w(n, a)?;
    let full = cup_diagram(&w);
    let cut = decorated_cup(&w);
    let linked: Vec<_> = full.linked_arcs().collect();
    let arcs: Vec<String> = full.arcs().iter().map(|(l, r)| format!("({l},{r})")).collect();
    let links: Vec<String> = linked
        .iter()
        .map(|(a, b)| format!("({},{})~({},{})", a.0, a.1, b.0, b.1))
        .collect();
    let text = format!(
        "w = {w}\narcs: {}\nlinked: {}\ncut:\n{}",
        arcs.join(" "),
        if links.is_empty() {
            "none".to_string()
        } else {
            links.join(" ")
        },
        cut.render_ascii()
    );
    let json = json!({
        "n": n,
        "w": w,
        "arcs": full.arcs(),
        "linked": linked.iter().map(|(a, b)| json!([a, b])).collect::<Vec<_>>(),
        "decorated": cut.to_json(),
    });
    Ok(Outcome::new(text, json).with_ascii(cut.render_ascii()))
}

fn homdim(cli: &Cli, w: &ElementW, x: &ElementX) -> CmdResult {
    let n = rank(cli, usize::MAX)?;
    let given = w.w.is_some() || w.word.is_some() || x.x.is_some() || x.x_word.is_some();
    if !given {
        let n = rank(cli, MAX_PAIRS)?;
        let m = hom_matrix(n)?;
        let mut bad = false;
        if cli.oracle {
            for (a, row) in m.order.iter().zip(&m.dims) {
                for (b, &d) in m.order.iter().zip(row) {
                    bad |= d != brute_force_hom_dim(a, b);
                }
            }
        }
        let mut text = String::new();
        for (a, row) in m.order.iter().zip(&m.dims) {
            let cells: Vec<String> = row.iter().map(|d| format!("{d:>3}")).collect();
            text.push_str(&format!("{a}  {}\n", cells.join("")));
        }
        let total: u64 = m.dims.iter().flatten().sum();
        text.push_str(&format!("total {total}"));
        if cli.oracle {
            text.push_str(&format!("\nbrute force: {}", if bad { "MISMATCH" } else { "agree" }));
        }
        return Ok(Outcome::new(text, json!(m)).failed_if(bad));
    }
    let (a, b) = (elem_w(n, w)?, elem_x(n, x)?);
    let d = hom_dim(&a, &b);
    let mut text = d.to_string();
    let mut json = json!({"n": n, "w": a, "wprime": b, "dim": d});
    let mut bad = false;
    if cli.oracle {
        rank(cli, MAX_ENUMERATE)?;
        let brute = brute_force_hom_dim(&a, &b);
        bad = brute != d;
        text.push_str(&format!(
            "\nbrute force: {brute} ({})",
            if bad { "MISMATCH" } else { "agree" }
        ));
        json["oracle"] = json!({"brute_force": brute, "agree": !bad});
    }
    Ok(Outcome::new(text, json).failed_if(bad))
}

fn poincare(cli: &Cli) -> CmdResult {
    let n = rank(cli, MAX_PAIRS)?;
    let table = poincare_table(n)?;
    let total: i64 = table
        .values()
        .map(|p| i64::try_from(p.eval_at_one()).expect("fits"))
        .sum();
    let mut text = String::new();
    for (w, p) in &table {
        text.push_str(&format!("{w}  {p}\n"));
    }
    text.push_str(&format!("total {total}"));
    let mut json = json!({
        "n": n,
        "table": table.iter().map(|(w, p)| (w.to_string(), json!(p))).collect::<serde_json::Map<_, _>>(),
        "total": total,
    });
    let mut bad = false;
    if cli.oracle {
        let all = enumerate_wp(n)?;
        let brute: u64 = all
            .iter()
            .flat_map(|a| all.iter().map(move |b| brute_force_hom_dim(a, b)))
            .sum();
        bad = brute != total as u64;
        text.push_str(&format!(
            "\nbrute force total: {brute} ({})",
            if bad { "MISMATCH" } else { "agree" }
        ));
        json["oracle"] = json!({"brute_force_total": brute, "agree": !bad});
    }
    Ok(Outcome::new(text, json).failed_if(bad))
}

fn sequence_of(n: usize, d: &DecoratedCupDiagram) -> Option<PMSequence> {
    enumerate_wp(n).ok()?.into_iter().find(|w| decorated_cup(w) == *d)
}

fn matrix_text(rows: &[Vec<LaurentPoly>], labels: &[String]) -> String {
    let cells: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(|p| p.to_string()).collect()).collect();
    let width = cells.iter().flatten().map(String::len).max().unwrap_or(1).max(1);
    let lw = labels.iter().map(String::len).max().unwrap_or(0);
    cells
        .iter()
        .zip(labels)
        .map(|(r, l)| {
            let body: Vec<String> = r.iter().map(|c| format!("{c:>width$}")).collect();
            format!("{l:<lw$}  {}", body.join("  "))
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn tl(cli: &Cli, command: &TlCommand) -> CmdResult {
    let n = rank(cli, MAX_TANGLES)?;
    match command {
        TlCommand::Basis => {
            let basis = tlhat_basis(n)?;
            let text = basis
                .iter()
                .enumerate()
                .map(|(k, t)| format!("#{k}\n{}", t.render_ascii()))
                .collect::<Vec<_>>()
                .join("\n\n");
            let json = json!({"n": n, "basis": basis.iter().map(DecoratedTangle::to_json).collect::<Vec<_>>()});
            Ok(Outcome::new(text, json))
        }
        TlCommand::Dim => {
            let basis = tlhat_basis(n)?;
            let cells = cell_datum(n)?;
            let sizes: BTreeMap<String, usize> = cells.cells().iter().map(|(l, m)| (l.to_string(), m.len())).collect();
            let shown: Vec<String> = cells
                .cells()
                .iter()
                .map(|(l, m)| format!("M({l}) = {}", m.len()))
                .collect();
            let mut text = format!("dim = {}\n{}", basis.len(), shown.join(", "));
            let squares: usize = cells.cells().values().map(|m| m.len() * m.len()).sum();
            let mut json = json!({"n": n, "dim": basis.len(), "cells": sizes});
            if n % 2 == 0 {
                let ideal = ideal_elements(n).len();
                text.push_str(&format!("\nideal elements removed: {ideal}"));
                json["ideal_removed"] = json!(ideal);
            }
            Ok(Outcome::new(text, json).failed_if(squares != basis.len()))
        }
        TlCommand::Act { i, w, matrix } => {
            let i = gen_index(n, *i)?;
            let e = TLElement::generator(n, i)?;
            if *matrix {
                let m = representation_matrix(n, &e)?;
                let labels: Vec<String> = enumerate_wp(n)?.iter().map(|w| w.to_string()).collect();
                let json = json!({
                    "n": n,
                    "i": i.get(),
                    "order": labels,
                    "matrix": m.iter().map(|r| r.iter().map(|p| p.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
                });
                return Ok(Outcome::new(matrix_text(&m, &labels), json));
            }
            let w = elem_w(n, w)?;
            let d = decorated_cup(&w);
            match dkl_core::act(&generator(n, i)?, &d)? {
                Scaled::Zero => Ok(Outcome::new("0", json!({"n": n, "i": i.get(), "w": w, "zero": true}))),
                Scaled::Term(c, r) => {
                    let target = sequence_of(n, &r);
                    let name = target.as_ref().map_or("?".to_string(), |t| t.to_string());
                    let text = format!("{c} * [{name}]\n{}", r.render_ascii());
                    let json = json!({
                        "n": n, "i": i.get(), "w": w, "zero": false,
                        "coeff": poly_json(&c), "result": {"w": target, "diagram": r.to_json()},
                    });
                    Ok(Outcome::new(text, json))
                }
            }
        }
        TlCommand::Cell { i } => {
            let datum = cell_datum(n)?;
            let mut text = String::new();
            let mut cells = serde_json::Map::new();
            for (lambda, m) in datum.cells() {
                text.push_str(&format!("M({lambda}), dimension {}\n", m.len()));
                for d in m {
                    text.push_str(&format!("{}\n", d.render_ascii().lines().last().unwrap_or("")));
                }
                cells.insert(
                    lambda.to_string(),
                    json!(m.iter().map(DecoratedCupDiagram::to_json).collect::<Vec<_>>()),
                );
            }
            let mut json = json!({"n": n, "cells": cells});
            if let Some(i) = i {
                let x = TLElement::generator(n, gen_index(n, *i)?)?;
                let mut mats = serde_json::Map::new();
                for (lambda, m) in datum.cells() {
                    let mat = datum.cell_matrix(*lambda, &x, &m[0])?;
                    let labels: Vec<String> = (0..m.len()).map(|k| format!("{k}")).collect();
                    text.push_str(&format!("e_{i} on M({lambda}):\n{}\n", matrix_text(&mat, &labels)));
                    mats.insert(
                        lambda.to_string(),
                        json!(mat
                            .iter()
                            .map(|r| r.iter().map(|p| p.to_string()).collect::<Vec<_>>())
                            .collect::<Vec<_>>()),
                    );
                }
                json["matrices"] = Value::Object(mats);
            }
            Ok(Outcome::new(text, json))
        }
    }
}

fn parse_json(s: &str) -> Result<Value, UsageError> {
    serde_json::from_str(s).map_err(|e| UsageError::new(format!("--json: {e}")))
}

fn render(cli: &Cli, kind: &RenderKind) -> CmdResult {
    match kind {
        RenderKind::Cup { w, json: Some(raw) } => {
            if w.w.is_some() || w.word.is_some() {
                return Err(UsageError::new("give either an element or --json, not both"));
            }
            let d = DecoratedCupDiagram::from_json(parse_json(raw)?)?;
            Ok(Outcome::new(d.render_ascii(), d.to_json()))
        }
        RenderKind::Cup { w, json: None } => {
            let n = rank(cli, usize::MAX)?;
            let d = decorated_cup(&elem_w(n, w)?);
            Ok(Outcome::new(d.render_ascii(), d.to_json()))
        }
        RenderKind::Tangle { i, json } => {
            let t = match (i, json) {
                (Some(_), Some(_)) => return Err(UsageError::new("give either -i or --json, not both")),
                (None, None) => return Err(UsageError::new("missing tangle: pass -i <I> or --json <TANGLE>")),
                (Some(i), None) => {
                    let n = rank(cli, usize::MAX)?;
                    generator(n, gen_index(n, *i)?)?
                }
                (None, Some(raw)) => DecoratedTangle::from_json(parse_json(raw)?)?,
            };
            Ok(Outcome::new(t.render_ascii(), t.to_json()))
        }
        RenderKind::Circle { w, x } => {
            let n = rank(cli, usize::MAX)?;
            let (a, b) = (elem_w(n, w)?, elem_x(n, x)?);
            let d = circle_diagram(&b, &a);
            let mut text = String::new();
            for (k, c) in d.circles().iter().enumerate() {
                text.push_str(&format!(
                    "circle {k}: {:?}, upper outer {}, lower outer {}, linked pairs {}, points {:?}\n",
                    c.color, c.upper_outer, c.lower_outer, c.linked_pairs, c.points
                ));
            }
            text.push_str(&format!(
                "black {}, red {}, green {}, hom dim {}",
                d.black(),
                d.red(),
                d.green(),
                d.hom_dim()
            ));
            Ok(Outcome::new(text, json!(d.report())).with_ascii(d.render_ascii()))
        }
    }
}
