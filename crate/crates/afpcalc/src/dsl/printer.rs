//! Canonical document rendering: one fixed layout, so printing after
//! parsing is the identity on documents already in that layout.

use super::parser::{AlgebraDecl, EmbedDecl, ProblemDoc};
use std::fmt::Write;

pub fn print_problem(doc: &ProblemDoc) -> String {
    let mut s = String::new();
    algebra(&mut s, &doc.a);
    s.push('\n');
    algebra(&mut s, &doc.b);
    s.push('\n');
    algebra(&mut s, &doc.d);
    s.push('\n');
    embed(&mut s, &doc.embed_a, &doc.d, &doc.a);
    s.push('\n');
    embed(&mut s, &doc.embed_b, &doc.d, &doc.b);
    s
}

fn algebra(s: &mut String, a: &AlgebraDecl) {
    writeln!(s, "algebra {} {{", a.name).unwrap();
    for sm in &a.summands {
        writeln!(
            s,
            "  summand {} {{ kind = {}; weight = {}; }}",
            sm.name, sm.kind, sm.weight
        )
        .unwrap();
    }
    writeln!(s, "}}").unwrap();
}

/// Rows follow amalgam declaration order, cells follow target
/// declaration order, and zero couplings are left implicit.
fn embed(s: &mut String, e: &EmbedDecl, d: &AlgebraDecl, target: &AlgebraDecl) {
    writeln!(s, "embed {} into {} {{", e.source, e.target).unwrap();
    let d_index = |name: &str| {
        d.summands
            .iter()
            .position(|x| x.name == name)
            .unwrap_or(usize::MAX)
    };
    let t_index = |name: &str| {
        target
            .summands
            .iter()
            .position(|x| x.name == name)
            .unwrap_or(usize::MAX)
    };
    let mut rows: Vec<_> = e.rows.iter().collect();
    rows.sort_by_key(|r| d_index(&r.source));
    for row in rows {
        let mut cells: Vec<_> = row.cells.iter().filter(|c| !c.coupling.is_zero()).collect();
        cells.sort_by_key(|c| t_index(&c.target));
        let rendered: Vec<String> = cells
            .iter()
            .map(|c| format!("{}: {}", c.target, c.coupling))
            .collect();
        if rendered.is_empty() {
            writeln!(s, "  {} -> {{ }};", row.source).unwrap();
        } else {
            writeln!(s, "  {} -> {{ {} }};", row.source, rendered.join(", ")).unwrap();
        }
    }
    writeln!(s, "}}").unwrap();
}
