use std::collections::BTreeMap;

use sha2::{Digest, Sha256};

use super::lexer::{lex, Tok, Token};
use super::run::construct;
use super::{
    Arg, Binding, Item, Kind, ParseError, ParseErrorKind, SourceSpan, Value, Workspace, CHECKS,
    CONSTRUCTS,
};
use crate::catalog::{self, Decomposition};
use crate::constructions::AssociativeAlgebra;
use crate::lie::{BilinearForm, Connection, FormKind, LieAlgebra, LieError, LinearMap};
use crate::linalg::{sparse, Matrix, SparseVec};
use crate::scalar::Scalar;

use ParseErrorKind as E;

/// Parses a program, building each definition and construction as it goes.
pub fn parse(text: &str) -> Result<Workspace, ParseError> {
    let tokens = lex(text)?;
    let mut p = Parser {
        tokens,
        pos: 0,
        ws: Workspace {
            input_hash: format!("{:x}", Sha256::digest(text.as_bytes())),
            ..Workspace::default()
        },
    };
    p.program()?;
    Ok(p.ws)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    ws: Workspace,
}

fn err(kind: ParseErrorKind, span: SourceSpan, msg: impl Into<String>) -> ParseError {
    ParseError::new(kind, span, msg)
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn span(&self) -> SourceSpan {
        self.tokens[self.pos].span
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, what: &str) -> ParseError {
        err(
            E::Syntax,
            self.span(),
            format!("expected {what}, found {}", self.peek().describe()),
        )
    }

    fn expect(&mut self, tok: Tok) -> Result<SourceSpan, ParseError> {
        if *self.peek() == tok {
            Ok(self.bump().span)
        } else {
            Err(self.unexpected(&tok.describe()))
        }
    }

    fn ident(&mut self) -> Result<(String, SourceSpan), ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => Ok((s, self.bump().span)),
            _ => Err(self.unexpected("an identifier")),
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        match self.peek() {
            Tok::Ident(s) if s == kw => {
                self.bump();
                Ok(())
            }
            _ => Err(self.unexpected(&format!("`{kw}`"))),
        }
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn skip_separators(&mut self) {
        while matches!(self.peek(), Tok::Newline | Tok::Semi) {
            self.bump();
        }
    }

    /// A statement ends at a newline, `;`, or end of input.
    fn end_statement(&mut self) -> Result<(), ParseError> {
        match self.peek() {
            Tok::Newline | Tok::Semi | Tok::Eof => {
                self.skip_separators();
                Ok(())
            }
            _ => Err(self.unexpected("end of statement")),
        }
    }

    fn program(&mut self) -> Result<(), ParseError> {
        loop {
            self.skip_separators();
            let span = self.span();
            let kw = match self.peek().clone() {
                Tok::Eof => return Ok(()),
                Tok::Ident(s) => s,
                _ => return Err(self.unexpected("a statement")),
            };
            self.bump();
            match kw.as_str() {
                "algebra" => self.algebra()?,
                "assoc" => self.assoc()?,
                "endo" => self.endo()?,
                "conn" => self.conn()?,
                "form" => self.form()?,
                "decomp" => self.decomp()?,
                "map" => self.map()?,
                "construct" => self.construct()?,
                "check" => self.check()?,
                _ => return Err(err(E::Syntax, span, format!("unknown statement `{kw}`"))),
            }
            self.end_statement()?;
        }
    }

    fn fresh_name(&mut self) -> Result<(String, SourceSpan), ParseError> {
        let (name, span) = self.ident()?;
        if self.ws.bindings.contains_key(&name) {
            return Err(err(
                E::DuplicateName,
                span,
                format!("`{name}` is already defined"),
            ));
        }
        Ok((name, span))
    }

    fn bind(&mut self, name: &str, value: Value, on: Option<String>) {
        self.ws.bindings.insert(
            name.to_string(),
            Binding {
                kind: value.kind(),
                value: Ok(value),
                on,
            },
        );
    }

    fn define(&mut self, name: &str, value: Value, on: Option<String>, to: Option<String>) {
        self.ws.items.push(Item::Define {
            name: name.to_string(),
            kind: value.kind(),
            on: on.clone(),
            to,
        });
        let on = if kind_has_base(&value) { on } else { None };
        self.bind(name, value, on);
    }

    /// A previously bound name of the given kind.
    fn reference(&mut self, kind: Kind) -> Result<(String, SourceSpan), ParseError> {
        let (name, span) = self.ident()?;
        let b = self
            .ws
            .bindings
            .get(&name)
            .ok_or_else(|| err(E::UnknownName, span, format!("`{name}` is not defined")))?;
        if b.kind != kind {
            return Err(err(
                E::TypeMismatch,
                span,
                format!("`{name}` is a {}, expected a {kind}", b.kind),
            ));
        }
        if let Err(e) = &b.value {
            return Err(err(
                E::InvalidValue,
                span,
                format!("`{name}` failed to construct: {e}"),
            ));
        }
        Ok((name, span))
    }

    fn labels_of(&self, name: &str) -> Vec<String> {
        match &self.ws.bindings[name].value {
            Ok(Value::Algebra(a)) => a.labels().to_vec(),
            Ok(Value::Assoc(a)) => a.labels().to_vec(),
            _ => Vec::new(),
        }
    }

    fn open_block(&mut self) -> Result<(), ParseError> {
        self.expect(Tok::LBrace)?;
        self.skip_separators();
        Ok(())
    }

    /// Items inside braces are separated by newlines or `;`.
    fn block_items(
        &mut self,
        mut item: impl FnMut(&mut Self) -> Result<(), ParseError>,
    ) -> Result<(), ParseError> {
        loop {
            self.skip_separators();
            if *self.peek() == Tok::RBrace {
                self.bump();
                return Ok(());
            }
            item(self)?;
            match self.peek() {
                Tok::Newline | Tok::Semi | Tok::RBrace => {}
                _ => return Err(self.unexpected("`;`, a newline or `}`")),
            }
        }
    }

    fn basis(&mut self) -> Result<Vec<String>, ParseError> {
        self.keyword("basis")?;
        let mut labels: Vec<String> = Vec::new();
        while let Tok::Ident(s) = self.peek().clone() {
            let span = self.bump().span;
            if labels.contains(&s) {
                return Err(err(
                    E::DuplicateName,
                    span,
                    format!("basis label `{s}` repeated"),
                ));
            }
            labels.push(s);
        }
        Ok(labels)
    }

    fn number(&mut self) -> Result<(Scalar, SourceSpan), ParseError> {
        let start = self.span();
        let neg = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        match self.peek().clone() {
            Tok::Number(s) => {
                let span = self.bump().span;
                let x: Scalar = s
                    .parse()
                    .map_err(|_| err(E::InvalidValue, span, format!("invalid number `{s}`")))?;
                Ok((if neg { -x } else { x }, start))
            }
            _ => Err(self.unexpected("a number")),
        }
    }

    fn label_index(labels: &[String], name: &str, span: SourceSpan) -> Result<usize, ParseError> {
        labels.iter().position(|l| l == name).ok_or_else(|| {
            err(
                E::UnknownName,
                span,
                format!("`{name}` is not a basis label"),
            )
        })
    }

    /// `c1 L1 + c2 L2 - L3`, or `0`.
    fn expr(&mut self, labels: &[String]) -> Result<SparseVec<Scalar>, ParseError> {
        let mut terms = Vec::new();
        let mut sign = Scalar::from(1);
        let mut first = true;
        loop {
            match self.peek() {
                Tok::Minus => {
                    self.bump();
                    sign = -sign;
                }
                Tok::Plus if !first => {
                    self.bump();
                }
                _ => {}
            }
            let coeff = if let Tok::Number(_) = self.peek() {
                let (c, span) = self.number()?;
                if *self.peek() == Tok::Star {
                    self.bump();
                }
                if !matches!(self.peek(), Tok::Ident(_)) {
                    if c.is_zero() && first {
                        return Ok(Vec::new());
                    }
                    return Err(err(
                        E::Syntax,
                        span,
                        "a coefficient must be followed by a basis label",
                    ));
                }
                c
            } else {
                Scalar::from(1)
            };
            let (name, span) = self.ident()?;
            let k = Self::label_index(labels, &name, span)?;
            terms.push((k, &sign * &coeff));
            first = false;
            sign = Scalar::from(1);
            match self.peek() {
                Tok::Plus => {}
                Tok::Minus => {}
                _ => return Ok(sparse::collect(terms)),
            }
        }
    }

    fn matrix(&mut self) -> Result<(Matrix<Scalar>, SourceSpan), ParseError> {
        self.keyword("matrix")?;
        let span = self.expect(Tok::LBracket)?;
        let mut rows = Vec::new();
        loop {
            if *self.peek() == Tok::RBracket {
                self.bump();
                break;
            }
            let row_span = self.expect(Tok::LBracket)?;
            let mut row = Vec::new();
            loop {
                if *self.peek() == Tok::RBracket {
                    self.bump();
                    break;
                }
                row.push(self.number()?.0);
                match self.peek() {
                    Tok::Comma => {
                        self.bump();
                    }
                    Tok::RBracket => {}
                    _ => return Err(self.unexpected("`,` or `]`")),
                }
            }
            if let Some(first) = rows.first() {
                let first: &Vec<Scalar> = first;
                if first.len() != row.len() {
                    return Err(err(
                        E::SizeMismatch,
                        row_span,
                        "rows have different lengths",
                    ));
                }
            }
            rows.push(row);
            match self.peek() {
                Tok::Comma => {
                    self.bump();
                }
                Tok::RBracket => {}
                _ => return Err(self.unexpected("`,` or `]`")),
            }
        }
        let m = Matrix::from_rows(rows).map_err(|e| err(E::SizeMismatch, span, e.to_string()))?;
        Ok((m, span))
    }

    fn square(
        &self,
        m: &Matrix<Scalar>,
        dim: Option<usize>,
        span: SourceSpan,
    ) -> Result<(), ParseError> {
        if !m.is_square() {
            return Err(err(
                E::NonSquare,
                span,
                format!("matrix is {}x{}", m.rows(), m.cols()),
            ));
        }
        if let Some(d) = dim {
            if m.rows() != d {
                return Err(err(
                    E::SizeMismatch,
                    span,
                    format!(
                        "matrix has size {} but the basis has {d} elements",
                        m.rows()
                    ),
                ));
            }
        }
        Ok(())
    }

    fn algebra(&mut self) -> Result<(), ParseError> {
        let (name, head) = self.fresh_name()?;
        self.open_block()?;
        let labels = self.basis()?;
        let mut brackets: BTreeMap<(usize, usize), SparseVec<Scalar>> = BTreeMap::new();
        self.block_items(|p| {
            let span = p.expect(Tok::LBracket)?;
            let (a, sa) = p.ident()?;
            p.expect(Tok::Comma)?;
            let (b, sb) = p.ident()?;
            p.expect(Tok::RBracket)?;
            p.expect(Tok::Eq)?;
            let i = Self::label_index(&labels, &a, sa)?;
            let j = Self::label_index(&labels, &b, sb)?;
            let v = p.expr(&labels)?;
            if i >= j {
                return Err(err(
                    E::NonCanonicalPair,
                    span,
                    format!("declare [{b},{a}] instead of [{a},{b}]"),
                ));
            }
            if brackets.insert((i, j), v).is_some() {
                return Err(err(
                    E::DuplicateBracket,
                    span,
                    format!("[{a},{b}] declared twice"),
                ));
            }
            Ok(())
        })?;
        let brackets = brackets
            .into_iter()
            .filter(|(_, v)| !v.is_empty())
            .collect();
        let alg =
            LieAlgebra::new_deferred(name.clone(), labels, brackets).map_err(lie_err(head))?;
        self.define(&name, Value::Algebra(alg), None, None);
        Ok(())
    }

    fn assoc(&mut self) -> Result<(), ParseError> {
        let (name, span) = self.fresh_name()?;
        self.open_block()?;
        let labels = self.basis()?;
        let mut products: BTreeMap<(usize, usize), SparseVec<Scalar>> = BTreeMap::new();
        self.block_items(|p| {
            let (a, sa) = p.ident()?;
            let span = sa;
            p.expect(Tok::Star)?;
            let (b, sb) = p.ident()?;
            p.expect(Tok::Eq)?;
            let i = Self::label_index(&labels, &a, sa)?;
            let j = Self::label_index(&labels, &b, sb)?;
            let v = p.expr(&labels)?;
            if products.insert((i, j), v).is_some() {
                return Err(err(
                    E::DuplicateBracket,
                    span,
                    format!("{a}*{b} declared twice"),
                ));
            }
            Ok(())
        })?;
        let a = AssociativeAlgebra::new(name.clone(), labels, products.into_iter().collect())
            .map_err(|e| err(E::InvalidValue, span, e.to_string()))?;
        self.define(&name, Value::Assoc(a), None, None);
        Ok(())
    }

    /// Images given by labels, one per basis element.
    fn images(
        &mut self,
        dom: &[String],
        cod: &[String],
        head: SourceSpan,
    ) -> Result<Vec<SparseVec<Scalar>>, ParseError> {
        let mut images: Vec<Option<SparseVec<Scalar>>> = vec![None; dom.len()];
        self.block_items(|p| {
            let (l, span) = p.ident()?;
            let i = Self::label_index(dom, &l, span)?;
            p.expect(Tok::Arrow)?;
            let v = p.expr(cod)?;
            if images[i].replace(v).is_some() {
                return Err(err(
                    E::DuplicateBracket,
                    span,
                    format!("image of `{l}` given twice"),
                ));
            }
            Ok(())
        })?;
        images
            .into_iter()
            .enumerate()
            .map(|(i, v)| {
                v.ok_or_else(|| err(E::MissingImage, head, format!("no image for `{}`", dom[i])))
            })
            .collect()
    }

    fn endo(&mut self) -> Result<(), ParseError> {
        let (name, head) = self.fresh_name()?;
        self.keyword("on")?;
        let (on, _) = self.reference(Kind::Algebra)?;
        let labels = self.labels_of(&on);
        let m = if self.at_keyword("matrix") {
            let (m, span) = self.matrix()?;
            self.square(&m, Some(labels.len()), span)?;
            m
        } else {
            self.open_block()?;
            let cols = self.images(&labels, &labels, head)?;
            Matrix::from_sparse_columns(labels.len(), &cols)
        };
        self.define(&name, Value::Endo(m), Some(on), None);
        Ok(())
    }

    fn conn(&mut self) -> Result<(), ParseError> {
        let (name, head) = self.fresh_name()?;
        self.keyword("on")?;
        let (on, _) = self.reference(Kind::Algebra)?;
        let labels = self.labels_of(&on);
        let to = if self.at_keyword("to") {
            self.bump();
            Some(self.reference(Kind::Algebra)?.0)
        } else {
            None
        };
        let mut module_dim = to.as_ref().map(|t| self.labels_of(t).len());
        self.open_block()?;
        let mut values: Vec<Option<Matrix<Scalar>>> = vec![None; labels.len()];
        self.block_items(|p| {
            let (l, span) = p.ident()?;
            let i = Self::label_index(&labels, &l, span)?;
            p.expect(Tok::FatArrow)?;
            let (m, mspan) = p.matrix()?;
            p.square(&m, module_dim, mspan)?;
            module_dim = Some(m.rows());
            if values[i].replace(m).is_some() {
                return Err(err(E::DuplicateBracket, span, format!("`{l}` given twice")));
            }
            Ok(())
        })?;
        let m = module_dim.unwrap_or(labels.len());
        let values = values
            .into_iter()
            .map(|v| v.unwrap_or_else(|| Matrix::zeros(m, m)))
            .collect();
        let conn = Connection::new(values, m).map_err(lie_err(head))?;
        self.define(&name, Value::Conn(conn), Some(on), to);
        Ok(())
    }

    fn form(&mut self) -> Result<(), ParseError> {
        let (name, _) = self.fresh_name()?;
        self.keyword("on")?;
        let (on, _) = self.reference(Kind::Algebra)?;
        let n = self.labels_of(&on).len();
        let (kind, kspan) = self.ident()?;
        let kind = match kind.as_str() {
            "sym" => FormKind::Symmetric,
            "skew" => FormKind::Skew,
            _ => return Err(err(E::Syntax, kspan, "expected `sym` or `skew`")),
        };
        let (m, span) = self.matrix()?;
        self.square(&m, Some(n), span)?;
        let form =
            BilinearForm::new(m, kind).map_err(|e| err(E::InvalidValue, span, e.to_string()))?;
        self.define(&name, Value::Form(form), Some(on), None);
        Ok(())
    }

    fn decomp(&mut self) -> Result<(), ParseError> {
        let (name, _) = self.fresh_name()?;
        self.keyword("on")?;
        let (on, _) = self.reference(Kind::Algebra)?;
        let labels = self.labels_of(&on);
        self.open_block()?;
        let mut parts: [Option<Vec<SparseVec<Scalar>>>; 2] = [None, None];
        self.block_items(|p| {
            let (which, span) = p.ident()?;
            let k = match which.as_str() {
                "part0" => 0,
                "part1" => 1,
                _ => return Err(err(E::Syntax, span, "expected `part0` or `part1`")),
            };
            p.expect(Tok::Colon)?;
            let mut vs = Vec::new();
            if !matches!(p.peek(), Tok::Newline | Tok::Semi | Tok::RBrace) {
                loop {
                    vs.push(p.expr(&labels)?);
                    if *p.peek() != Tok::Comma {
                        break;
                    }
                    p.bump();
                }
            }
            if parts[k].replace(vs).is_some() {
                return Err(err(
                    E::DuplicateBracket,
                    span,
                    format!("`{which}` given twice"),
                ));
            }
            Ok(())
        })?;
        let [p0, p1] = parts;
        let d = Decomposition {
            part0: p0.unwrap_or_default(),
            part1: p1.unwrap_or_default(),
        };
        self.define(&name, Value::Decomp(d), Some(on), None);
        Ok(())
    }

    fn map(&mut self) -> Result<(), ParseError> {
        let (name, head) = self.fresh_name()?;
        self.keyword("from")?;
        let (from, _) = self.reference(Kind::Algebra)?;
        self.keyword("to")?;
        let (to, _) = self.reference(Kind::Algebra)?;
        let (dom, cod) = (self.labels_of(&from), self.labels_of(&to));
        self.open_block()?;
        let cols = self.images(&dom, &cod, head)?;
        let map = LinearMap::new(
            Matrix::from_sparse_columns(cod.len(), &cols),
            from.clone(),
            to.clone(),
        );
        self.define(
            &name,
            Value::Map {
                map,
                from: from.clone(),
                to: to.clone(),
            },
            Some(from),
            Some(to),
        );
        Ok(())
    }

    fn args(&mut self) -> Result<Vec<Arg>, ParseError> {
        self.expect(Tok::LParen)?;
        let mut args = Vec::new();
        loop {
            match self.peek().clone() {
                Tok::RParen => {
                    self.bump();
                    return Ok(args);
                }
                Tok::Ident(s) => {
                    let span = self.bump().span;
                    args.push(Arg::Name(s, span));
                }
                Tok::Number(s) => {
                    let span = self.bump().span;
                    let k = s.parse().map_err(|_| {
                        err(
                            E::InvalidValue,
                            span,
                            format!("expected a non-negative integer, found `{s}`"),
                        )
                    })?;
                    args.push(Arg::Int(k, span));
                }
                _ => return Err(self.unexpected("an argument")),
            }
            match self.peek() {
                Tok::Comma => {
                    self.bump();
                }
                Tok::RParen => {}
                _ => return Err(self.unexpected("`,` or `)`")),
            }
        }
    }

    fn check_args(
        &self,
        sig: &[Kind],
        args: &[Arg],
        span: SourceSpan,
        what: &str,
    ) -> Result<(), ParseError> {
        if sig.len() != args.len() {
            return Err(err(
                E::Arity,
                span,
                format!(
                    "`{what}` takes {} argument(s), found {}",
                    sig.len(),
                    args.len()
                ),
            ));
        }
        for (kind, arg) in sig.iter().zip(args) {
            match (kind, arg) {
                (Kind::Int, Arg::Int(..)) => {}
                (Kind::Int, Arg::Name(n, s)) => {
                    return Err(err(
                        E::TypeMismatch,
                        *s,
                        format!("expected an integer, found `{n}`"),
                    ))
                }
                (_, Arg::Int(_, s)) => {
                    return Err(err(
                        E::TypeMismatch,
                        *s,
                        format!("expected a {kind}, found an integer"),
                    ))
                }
                (_, Arg::Name(n, s)) => {
                    let b =
                        self.ws.bindings.get(n).ok_or_else(|| {
                            err(E::UnknownName, *s, format!("`{n}` is not defined"))
                        })?;
                    if b.kind != *kind {
                        return Err(err(
                            E::TypeMismatch,
                            *s,
                            format!("`{n}` is a {}, expected a {kind}", b.kind),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    fn construct(&mut self) -> Result<(), ParseError> {
        let (name, _) = self.fresh_name()?;
        self.expect(Tok::Eq)?;
        let (op, span) = self.ident()?;
        let args = self.args()?;
        if op == "catalog" {
            return self.import(name, args, span);
        }
        let sig = CONSTRUCTS
            .iter()
            .find(|(n, _)| *n == op)
            .map(|(_, s)| *s)
            .ok_or_else(|| err(E::UnknownName, span, format!("unknown construction `{op}`")))?;
        self.check_args(sig, &args, span, &op)?;
        let outputs = construct(&self.ws, &name, &op, &args);
        for (n, _) in &outputs {
            if self.ws.bindings.contains_key(n) {
                return Err(err(
                    E::DuplicateName,
                    span,
                    format!("`{n}` is already defined"),
                ));
            }
        }
        for (n, b) in outputs {
            self.ws.bindings.insert(n, b);
        }
        self.ws.items.push(Item::Construct {
            name,
            op,
            args,
            span,
        });
        Ok(())
    }

    fn import(&mut self, name: String, args: Vec<Arg>, span: SourceSpan) -> Result<(), ParseError> {
        let (key, params) = match args.split_first() {
            Some((Arg::Name(k, _), rest)) => {
                let mut ps = Vec::new();
                for a in rest {
                    match a {
                        Arg::Int(k, _) => ps.push(*k),
                        Arg::Name(n, s) => {
                            return Err(err(
                                E::TypeMismatch,
                                *s,
                                format!("expected an integer, found `{n}`"),
                            ))
                        }
                    }
                }
                (k.clone(), ps)
            }
            _ => {
                return Err(err(
                    E::Arity,
                    span,
                    "`catalog` takes a catalog name and integer parameters",
                ))
            }
        };
        let entry = catalog::lookup(&key, &params).map_err(|e| {
            let kind = match e {
                catalog::CatalogError::Unknown(_) => E::UnknownName,
                catalog::CatalogError::Arity { .. } => E::Arity,
                _ => E::InvalidValue,
            };
            err(kind, span, e.to_string())
        })?;
        let mut outputs = vec![(
            name.clone(),
            Value::Algebra(entry.algebra.clone().with_name(name.clone())),
        )];
        let base = Some(name.clone());
        for (k, j) in &entry.complex {
            outputs.push((format!("{name}.{k}"), Value::Endo(j.matrix().clone())));
        }
        for (k, c) in &entry.connections {
            outputs.push((format!("{name}.{k}"), Value::Conn(c.clone())));
        }
        for (k, f) in &entry.forms {
            outputs.push((format!("{name}.{k}"), Value::Form(f.clone())));
        }
        for (k, d) in &entry.decompositions {
            outputs.push((format!("{name}.{k}"), Value::Decomp(d.clone())));
        }
        for (n, _) in &outputs {
            if self.ws.bindings.contains_key(n) {
                return Err(err(
                    E::DuplicateName,
                    span,
                    format!("`{n}` is already defined"),
                ));
            }
        }
        for (n, v) in outputs {
            let on = if n == name { None } else { base.clone() };
            self.bind(&n, v, on);
        }
        self.ws.imports.insert(name.clone(), entry);
        self.ws.items.push(Item::Construct {
            name,
            op: "catalog".into(),
            args,
            span,
        });
        Ok(())
    }

    /// `check integrable(J)` reads as `check integrable(A, J)` when `J` was
    /// declared on `A`.
    fn implicit_algebra(&self, sig: &[Kind], args: &mut Vec<Arg>) {
        if sig.first() != Some(&Kind::Algebra) || args.len() + 1 != sig.len() {
            return;
        }
        if let Some(Arg::Name(n, span)) = args.first() {
            if let Some(Binding { on: Some(base), .. }) = self.ws.bindings.get(n) {
                args.insert(0, Arg::Name(base.clone(), *span));
            }
        }
    }

    fn check(&mut self) -> Result<(), ParseError> {
        let (check, span) = self.ident()?;
        let sig = CHECKS
            .iter()
            .find(|(n, _)| *n == check)
            .map(|(_, s)| *s)
            .ok_or_else(|| err(E::UnknownName, span, format!("unknown check `{check}`")))?;
        let mut args = self.args()?;
        self.implicit_algebra(sig, &mut args);
        self.check_args(sig, &args, span, &check)?;
        self.ws.items.push(Item::Check { check, args, span });
        Ok(())
    }
}

fn lie_err(span: SourceSpan) -> impl Fn(LieError) -> ParseError {
    move |e| err(E::InvalidValue, span, e.to_string())
}

fn kind_has_base(v: &Value) -> bool {
    matches!(
        v,
        Value::Endo(_) | Value::Conn(_) | Value::Form(_) | Value::Decomp(_)
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kind_of(text: &str) -> ParseErrorKind {
        parse(text).unwrap_err().kind
    }

    #[test]
    fn abelian_two_dim() {
        let ws = parse("algebra ab2 { basis x y }").unwrap();
        let a = ws.algebra("ab2").unwrap();
        assert_eq!(a.dim(), 2);
        assert!(a.is_abelian());
    }

    #[test]
    fn undeclared_label_points_at_it() {
        let e = parse("algebra g {\n  basis x y\n  [x,y] = 1 z\n}").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnknownName);
        assert_eq!(
            e.span,
            SourceSpan {
                line: 3,
                column: 13,
                length: 1
            }
        );
    }

    #[test]
    fn bracket_rules() {
        assert_eq!(
            kind_of("algebra g { basis x y; [y,x] = x }"),
            ParseErrorKind::NonCanonicalPair
        );
        assert_eq!(
            kind_of("algebra g { basis x y; [x,y] = x; [x,y] = y }"),
            ParseErrorKind::DuplicateBracket
        );
    }

    #[test]
    fn error_kinds_are_distinct() {
        let g = "algebra g { basis x y }\n";
        assert_eq!(
            kind_of(&format!("{g}endo J on g matrix [[0,1,2],[1,0,3]]")),
            ParseErrorKind::NonSquare
        );
        assert_eq!(
            kind_of(&format!("{g}endo J on g matrix [[0]]")),
            ParseErrorKind::SizeMismatch
        );
        assert_eq!(
            kind_of(&format!("{g}endo J on g {{ x -> y }}")),
            ParseErrorKind::MissingImage
        );
        assert_eq!(
            kind_of(&format!("{g}check jacobi(g, g)")),
            ParseErrorKind::Arity
        );
        assert_eq!(
            kind_of(&format!("{g}check jacobi(h)")),
            ParseErrorKind::UnknownName
        );
        assert_eq!(
            kind_of(&format!("{g}check integrable(g, g)")),
            ParseErrorKind::TypeMismatch
        );
        assert_eq!(
            kind_of(&format!("{g}algebra g {{ basis z }}")),
            ParseErrorKind::DuplicateName
        );
        assert_eq!(kind_of("algebra g { basis x y ] }"), ParseErrorKind::Syntax);
    }

    #[test]
    fn expressions() {
        let ws = parse("algebra g { basis x y z; [x,y] = -2 z + 1/2 x - y }").unwrap();
        let g = ws.algebra("g").unwrap();
        assert_eq!(g.format_vector(g.bracket_basis(0, 1)), "1/2 x - y - 2 z");
        let ws = parse("algebra g { basis x y; [x,y] = 0 }").unwrap();
        assert!(ws.algebra("g").unwrap().is_abelian());
    }

    #[test]
    fn semicolons_and_comments() {
        let ws =
            parse("algebra g { basis x y } # plane\n; check jacobi(g); check jacobi(g)").unwrap();
        assert_eq!(ws.checks().count(), 2);
    }

    #[test]
    fn catalog_import_binds_structures() {
        let ws = parse(
            "construct E = catalog(euclid, 3)\ncheck integrable(E, E.J)\ncheck integrable(E.J)",
        )
        .unwrap();
        assert_eq!(ws.algebra("E").unwrap().dim(), 6);
        assert_eq!(ws.get("E.J").unwrap().kind, Kind::Endo);
        let args: Vec<Vec<String>> = ws
            .checks()
            .map(|(_, a)| a.iter().map(ToString::to_string).collect())
            .collect();
        assert_eq!(args[0], args[1]);
    }
}
