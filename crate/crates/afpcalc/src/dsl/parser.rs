//! Recursive-descent parser: tokens → `ProblemDoc` → engine `Problem`.

use super::lexer::{lex, Pos, Tok, Token};
use super::Diagnostic;
use crate::engine::Problem;
use crate::model::{Coupling, Inclusion, MultiMatrix, Summand, SummandKind, TracialAlgebra};
use crate::rat::ExtRat;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use std::str::FromStr;

/// A parsed document: the two sides in declaration order, the amalgam,
/// and one embedding per side. Conversion to an engine `Problem` checks
/// only name resolution and block shapes; trace arithmetic is left to
/// the model's validation.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemDoc {
    pub a: AlgebraDecl,
    pub b: AlgebraDecl,
    pub d: AlgebraDecl,
    pub embed_a: EmbedDecl,
    pub embed_b: EmbedDecl,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraDecl {
    pub name: String,
    pub pos: Pos,
    pub summands: Vec<SummandDecl>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummandDecl {
    pub name: String,
    pub pos: Pos,
    pub kind: SummandKind,
    pub weight: ExtRat,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmbedDecl {
    pub source: String,
    pub target: String,
    pub pos: Pos,
    pub rows: Vec<EmbedRow>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmbedRow {
    pub source: String,
    pub pos: Pos,
    pub cells: Vec<CellDecl>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellDecl {
    pub target: String,
    pub pos: Pos,
    pub coupling: Coupling,
}

struct Parser {
    toks: Vec<Token>,
    i: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|t| &t.tok)
    }

    fn pos(&self) -> Pos {
        self.toks
            .get(self.i)
            .or_else(|| self.toks.last())
            .map(|t| t.pos)
            .unwrap_or(Pos { line: 1, col: 1 })
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.toks.get(self.i).cloned();
        if t.is_some() {
            self.i += 1;
        }
        t
    }

    fn found(&self) -> String {
        match self.toks.get(self.i) {
            Some(t) => t.tok.describe(),
            None => "end of input".into(),
        }
    }

    fn err(&self, message: impl Into<String>) -> Diagnostic {
        Diagnostic::new(self.pos(), message)
    }

    fn expect_tok(&mut self, want: Tok, context: &str) -> Result<Pos, Diagnostic> {
        let pos = self.pos();
        let found = self.found();
        match self.next() {
            Some(t) if t.tok == want => Ok(pos),
            _ => Err(Diagnostic::new(
                pos,
                format!("expected {} {context}, found {found}", want.describe()),
            )),
        }
    }

    fn take_ident(&mut self, what: &str) -> Result<(String, Pos), Diagnostic> {
        let pos = self.pos();
        let found = self.found();
        match self.next() {
            Some(Token {
                tok: Tok::Ident(s), ..
            }) => Ok((s, pos)),
            _ => Err(Diagnostic::new(
                pos,
                format!("expected {what}, found {found}"),
            )),
        }
    }

    fn expect_kw(&mut self, kw: &str) -> Result<Pos, Diagnostic> {
        let pos = self.pos();
        let found = self.found();
        match self.next() {
            Some(Token {
                tok: Tok::Ident(s), ..
            }) if s == kw => Ok(pos),
            _ => Err(Diagnostic::new(
                pos,
                format!("expected `{kw}`, found {found}"),
            )),
        }
    }

    fn take_number(&mut self, what: &str) -> Result<(String, Pos), Diagnostic> {
        let pos = self.pos();
        let found = self.found();
        match self.next() {
            Some(Token {
                tok: Tok::Number(s),
                ..
            }) => Ok((s, pos)),
            Some(Token {
                tok: Tok::Ident(s), ..
            }) if s == "inf" => Err(Diagnostic::new(
                pos,
                "`inf` is only valid as an ifgf parameter",
            )),
            _ => Err(Diagnostic::new(
                pos,
                format!("expected {what}, found {found}"),
            )),
        }
    }

    fn take_u32(&mut self, what: &str) -> Result<(u32, Pos), Diagnostic> {
        let (digits, pos) = self.take_number(what)?;
        digits
            .parse::<u32>()
            .map(|n| (n, pos))
            .map_err(|_| Diagnostic::new(pos, format!("{what} `{digits}` does not fit 32 bits")))
    }

    /// `p` or `p/q`, always nonnegative at the grammar level.
    fn take_rational(&mut self, what: &str) -> Result<(ExtRat, Pos), Diagnostic> {
        let (num, pos) = self.take_number(what)?;
        let num = BigInt::from_str(&num).expect("lexer yields decimal digits");
        if self.peek() != Some(&Tok::Slash) {
            return Ok((ExtRat::Fin(BigRational::from_integer(num)), pos));
        }
        self.next();
        let (den, dpos) = self.take_number("a denominator")?;
        let den = BigInt::from_str(&den).expect("lexer yields decimal digits");
        if den.is_zero() {
            return Err(Diagnostic::new(
                dpos,
                "rational denominator must be nonzero",
            ));
        }
        Ok((ExtRat::Fin(BigRational::new(num, den)), pos))
    }

    fn parse_document(&mut self) -> Result<(Vec<AlgebraDecl>, Vec<EmbedDecl>), Diagnostic> {
        let mut algebras = Vec::new();
        let mut embeds = Vec::new();
        while self.peek().is_some() {
            let (kw, pos) = self.take_ident("`algebra` or `embed`")?;
            match kw.as_str() {
                "algebra" => algebras.push(self.parse_algebra(pos)?),
                "embed" => embeds.push(self.parse_embed(pos)?),
                other => {
                    return Err(Diagnostic::new(
                        pos,
                        format!("expected `algebra` or `embed`, found `{other}`"),
                    ))
                }
            }
        }
        Ok((algebras, embeds))
    }

    fn parse_algebra(&mut self, pos: Pos) -> Result<AlgebraDecl, Diagnostic> {
        let (name, _) = self.take_ident("an algebra name")?;
        self.expect_tok(Tok::LBrace, "to open the algebra body")?;
        let mut summands = Vec::new();
        while self.peek() != Some(&Tok::RBrace) {
            summands.push(self.parse_summand()?);
        }
        self.expect_tok(Tok::RBrace, "to close the algebra body")?;
        if summands.is_empty() {
            return Err(Diagnostic::new(
                pos,
                format!("algebra `{name}` declares no summands"),
            ));
        }
        for (i, s) in summands.iter().enumerate() {
            if summands[..i].iter().any(|t| t.name == s.name) {
                return Err(Diagnostic::new(
                    s.pos,
                    format!("duplicate summand name `{}` in algebra `{name}`", s.name),
                ));
            }
        }
        Ok(AlgebraDecl {
            name,
            pos,
            summands,
        })
    }

    fn parse_summand(&mut self) -> Result<SummandDecl, Diagnostic> {
        self.expect_kw("summand")?;
        let (name, pos) = self.take_ident("a summand name")?;
        self.expect_tok(Tok::LBrace, "to open the summand body")?;
        self.expect_kw("kind")?;
        self.expect_tok(Tok::Eq, "after `kind`")?;
        let kind = self.parse_kind()?;
        self.expect_tok(Tok::Semi, "after the kind")?;
        self.expect_kw("weight")?;
        self.expect_tok(Tok::Eq, "after `weight`")?;
        let (weight, _) = self.take_rational("a weight")?;
        self.expect_tok(Tok::Semi, "after the weight")?;
        self.expect_tok(Tok::RBrace, "to close the summand body")?;
        Ok(SummandDecl {
            name,
            pos,
            kind,
            weight,
        })
    }

    fn parse_kind(&mut self) -> Result<SummandKind, Diagnostic> {
        let (name, pos) = self.take_ident("a summand kind")?;
        match name.as_str() {
            "matrix" | "interval" => {
                self.expect_tok(Tok::LParen, "after the kind name")?;
                let (n, npos) = self.take_u32("a size")?;
                if n == 0 {
                    return Err(Diagnostic::new(npos, "size must be at least 1"));
                }
                self.expect_tok(Tok::RParen, "after the size")?;
                Ok(if name == "matrix" {
                    SummandKind::Matrix(n)
                } else {
                    SummandKind::Interval(n)
                })
            }
            "hyp2" => {
                if self.peek() == Some(&Tok::LParen) {
                    return Err(self.err("hyp2 takes no parameter"));
                }
                Ok(SummandKind::HypII1)
            }
            "ifgf" => {
                self.expect_tok(Tok::LParen, "after the kind name")?;
                let param = if self.peek() == Some(&Tok::Ident("inf".into())) {
                    self.next();
                    ExtRat::Inf
                } else {
                    self.take_rational("an ifgf parameter")?.0
                };
                self.expect_tok(Tok::RParen, "after the parameter")?;
                Ok(SummandKind::Ifgf(param))
            }
            other => Err(
                Diagnostic::new(pos, format!("unknown summand kind `{other}`")).with_hint(
                    "kinds: matrix(n), interval(n), hyp2, ifgf(t) with t rational or inf",
                ),
            ),
        }
    }

    fn parse_embed(&mut self, pos: Pos) -> Result<EmbedDecl, Diagnostic> {
        let (source, _) = self.take_ident("the amalgam name")?;
        self.expect_kw("into")?;
        let (target, _) = self.take_ident("a target algebra name")?;
        self.expect_tok(Tok::LBrace, "to open the embedding body")?;
        let mut rows = Vec::new();
        while self.peek() != Some(&Tok::RBrace) {
            rows.push(self.parse_row()?);
        }
        self.expect_tok(Tok::RBrace, "to close the embedding body")?;
        Ok(EmbedDecl {
            source,
            target,
            pos,
            rows,
        })
    }

    fn parse_row(&mut self) -> Result<EmbedRow, Diagnostic> {
        let (source, pos) = self.take_ident("an amalgam summand name")?;
        self.expect_tok(Tok::Arrow, "after the amalgam summand")?;
        self.expect_tok(Tok::LBrace, "to open the coupling list")?;
        let mut cells = Vec::new();
        if self.peek() != Some(&Tok::RBrace) {
            loop {
                cells.push(self.parse_cell()?);
                if self.peek() == Some(&Tok::Comma) {
                    self.next();
                } else {
                    break;
                }
            }
        }
        self.expect_tok(Tok::RBrace, "to close the coupling list")?;
        self.expect_tok(Tok::Semi, "after the row")?;
        Ok(EmbedRow { source, pos, cells })
    }

    fn parse_cell(&mut self) -> Result<CellDecl, Diagnostic> {
        let (target, pos) = self.take_ident("a target summand name")?;
        self.expect_tok(Tok::Colon, "after the summand name")?;
        let (op, opos) = self.take_ident("`mult` or `trace`")?;
        let coupling = match op.as_str() {
            "mult" => Coupling::Mult(self.take_u32("a multiplicity")?.0),
            "trace" => Coupling::Trace(self.take_rational("a trace")?.0),
            other => {
                return Err(Diagnostic::new(
                    opos,
                    format!("expected `mult` or `trace`, found `{other}`"),
                ))
            }
        };
        Ok(CellDecl {
            target,
            pos,
            coupling,
        })
    }
}

/// Parse a problem document. On failure, at least one diagnostic with a
/// 1-based source position.
pub fn parse_problem(text: &str) -> Result<ProblemDoc, Vec<Diagnostic>> {
    let toks = lex(text).map_err(|d| vec![d])?;
    let mut p = Parser { toks, i: 0 };
    let (algebras, embeds) = p.parse_document().map_err(|d| vec![d])?;
    resolve_document(algebras, embeds)
}

fn resolve_document(
    algebras: Vec<AlgebraDecl>,
    embeds: Vec<EmbedDecl>,
) -> Result<ProblemDoc, Vec<Diagnostic>> {
    let mut diags = Vec::new();
    let doc_start = Pos { line: 1, col: 1 };
    if algebras.len() != 3 {
        let pos = algebras.get(3).map(|a| a.pos).unwrap_or(doc_start);
        diags.push(Diagnostic::new(
            pos,
            format!(
                "a document declares exactly three algebras (two sides and the amalgam), found {}",
                algebras.len()
            ),
        ));
    }
    if embeds.len() != 2 {
        let pos = embeds.get(2).map(|e| e.pos).unwrap_or(doc_start);
        diags.push(Diagnostic::new(
            pos,
            format!(
                "a document declares exactly two embeddings (one per side), found {}",
                embeds.len()
            ),
        ));
    }
    for (i, a) in algebras.iter().enumerate() {
        if algebras[..i].iter().any(|x| x.name == a.name) {
            diags.push(Diagnostic::new(
                a.pos,
                format!("duplicate algebra name `{}`", a.name),
            ));
        }
    }
    if !diags.is_empty() {
        return Err(diags);
    }

    let [e0, e1]: [EmbedDecl; 2] = embeds.try_into().expect("length checked");
    if e0.source != e1.source {
        return Err(vec![Diagnostic::new(
            e1.pos,
            format!(
                "the two embeddings name different amalgams: `{}` and `{}`",
                e0.source, e1.source
            ),
        )]);
    }
    let Some(d_idx) = algebras.iter().position(|a| a.name == e0.source) else {
        return Err(vec![Diagnostic::new(
            e0.pos,
            format!("embedding source `{}` is not a declared algebra", e0.source),
        )]);
    };

    let mut rest = algebras;
    let d = rest.remove(d_idx);
    let [a, b]: [AlgebraDecl; 2] = rest.try_into().expect("two sides remain");

    let mut embed_a = None;
    let mut embed_b = None;
    for e in [e0, e1] {
        if e.target == d.name {
            diags.push(Diagnostic::new(
                e.pos,
                "an embedding's target must be a side algebra, not the amalgam",
            ));
        } else if e.target == a.name {
            if embed_a.replace(e).is_some() {
                diags.push(Diagnostic::new(
                    a.pos,
                    format!(
                        "both embeddings target `{}`; one per side is required",
                        a.name
                    ),
                ));
            }
        } else if e.target == b.name {
            if embed_b.replace(e).is_some() {
                diags.push(Diagnostic::new(
                    b.pos,
                    format!(
                        "both embeddings target `{}`; one per side is required",
                        b.name
                    ),
                ));
            }
        } else {
            diags.push(Diagnostic::new(
                e.pos,
                format!("embedding target `{}` is not a declared algebra", e.target),
            ));
        }
    }
    match (embed_a, embed_b) {
        (Some(embed_a), Some(embed_b)) if diags.is_empty() => Ok(ProblemDoc {
            a,
            b,
            d,
            embed_a,
            embed_b,
        }),
        _ => Err(diags),
    }
}

impl ProblemDoc {
    /// Build the engine problem. Checks name resolution and that the
    /// amalgam consists of matrix blocks; everything arithmetic —
    /// weight sums, unitality, trace compatibility — is reported by
    /// `Problem::validate`.
    pub fn to_problem(&self) -> Result<Problem, Vec<Diagnostic>> {
        let mut diags = Vec::new();
        let mut blocks = Vec::new();
        for s in &self.d.summands {
            match s.kind {
                SummandKind::Matrix(k) => blocks.push((k, s.weight.clone())),
                _ => diags.push(
                    Diagnostic::new(
                        s.pos,
                        format!("amalgam summand `{}` must be a matrix block", s.name),
                    )
                    .with_hint("the amalgam is finite-dimensional: kind = matrix(k)"),
                ),
            }
        }
        let incl_a = self.inclusion_of(&self.embed_a, &self.a, &mut diags);
        let incl_b = self.inclusion_of(&self.embed_b, &self.b, &mut diags);
        if !diags.is_empty() {
            return Err(diags);
        }
        Ok(Problem::new(
            algebra_of(&self.a),
            algebra_of(&self.b),
            MultiMatrix::new(blocks),
            incl_a,
            incl_b,
        ))
    }

    /// Coupling rows in the model orientation (`rows[target][source]`);
    /// cells a row leaves out are zero couplings.
    fn inclusion_of(
        &self,
        embed: &EmbedDecl,
        target: &AlgebraDecl,
        diags: &mut Vec<Diagnostic>,
    ) -> Inclusion {
        let mut cells: Vec<Vec<Option<Coupling>>> =
            vec![vec![None; self.d.summands.len()]; target.summands.len()];
        let mut seen = vec![false; self.d.summands.len()];
        for row in &embed.rows {
            let Some(j) = self.d.summands.iter().position(|s| s.name == row.source) else {
                diags.push(Diagnostic::new(
                    row.pos,
                    format!("`{}` is not a summand of the amalgam", row.source),
                ));
                continue;
            };
            if seen[j] {
                diags.push(Diagnostic::new(
                    row.pos,
                    format!("duplicate row for amalgam summand `{}`", row.source),
                ));
                continue;
            }
            seen[j] = true;
            for cell in &row.cells {
                let Some(i) = target.summands.iter().position(|s| s.name == cell.target) else {
                    diags.push(Diagnostic::new(
                        cell.pos,
                        format!(
                            "`{}` is not a summand of algebra `{}`",
                            cell.target, target.name
                        ),
                    ));
                    continue;
                };
                if cells[i][j].replace(cell.coupling.clone()).is_some() {
                    diags.push(Diagnostic::new(
                        cell.pos,
                        format!("duplicate entry for summand `{}`", cell.target),
                    ));
                }
            }
        }
        for (j, seen) in seen.iter().enumerate() {
            if !seen {
                diags.push(Diagnostic::new(
                    embed.pos,
                    format!(
                        "embedding into `{}` is missing a row for amalgam summand `{}`",
                        target.name, self.d.summands[j].name
                    ),
                ));
            }
        }
        Inclusion::new(
            cells
                .into_iter()
                .enumerate()
                .map(|(i, row)| {
                    let type_i = target.summands[i].kind.is_type_i();
                    row.into_iter()
                        .map(|c| {
                            c.unwrap_or(if type_i {
                                Coupling::Mult(0)
                            } else {
                                Coupling::Trace(ExtRat::zero())
                            })
                        })
                        .collect()
                })
                .collect(),
        )
    }
}

fn algebra_of(decl: &AlgebraDecl) -> TracialAlgebra {
    TracialAlgebra::new(
        decl.summands
            .iter()
            .map(|s| Summand::new(s.kind.clone(), s.weight.clone()))
            .collect(),
    )
}
