//! Text format for rules and revision frameworks.
//!
//! ```text
//! % comment
//! #persistent
//! c(c1). c(c2).
//! #temporal
//! phi1: r(X) :- c(X), not b(X).
//! #backup
//! phi2: b(X) :- c(X), not r(X).
//! #new
//! :- r(c1).
//! ```
//!
//! Variables start with an uppercase letter or `_`, constants and
//! predicates with a lowercase letter (constants may also be numerals).
//! `:- body.` and `bot :- body.` are integrity constraints. Abducible
//! predicates generated by the translation are spelled `name-*` and
//! `name+*`. Disequality guards are written `X != c1` or
//! `(X, Y) != (c1, c2)`.

use crate::model::{
    sym, Atom, Disequality, Literal, Program, RevisionFramework, Rule, Symbol, Term, BOT,
};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Var(String),
    LParen,
    RParen,
    Comma,
    Dot,
    If,
    Colon,
    Neq,
    Section(String),
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let err = |line, column, message: String| Error::Syntax {
        line,
        column,
        message,
    };
    while i < chars.len() {
        let ch = chars[i];
        let (start_line, start_col) = (line, col);
        let mut push = |tok: Tok| {
            out.push(Spanned {
                tok,
                line: start_line,
                column: start_col,
            })
        };
        match ch {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
                continue;
            }
            c if c.is_whitespace() => {}
            '%' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
                continue;
            }
            '(' => push(Tok::LParen),
            ')' => push(Tok::RParen),
            ',' => push(Tok::Comma),
            '.' => push(Tok::Dot),
            ':' => {
                if chars.get(i + 1) == Some(&'-') {
                    push(Tok::If);
                    i += 2;
                    col += 2;
                    continue;
                }
                push(Tok::Colon);
            }
            '!' => {
                if chars.get(i + 1) != Some(&'=') {
                    return Err(err(line, col, "expected `!=`".into()));
                }
                push(Tok::Neq);
                i += 2;
                col += 2;
                continue;
            }
            '#' => {
                let mut j = i + 1;
                while j < chars.len() && chars[j].is_alphanumeric() {
                    j += 1;
                }
                let name: String = chars[i + 1..j].iter().collect();
                push(Tok::Section(name));
                col += j - i;
                i = j;
                continue;
            }
            c if c.is_alphanumeric() || c == '_' => {
                let mut j = i;
                while j < chars.len() && (chars[j].is_alphanumeric() || chars[j] == '_') {
                    j += 1;
                }
                if j + 1 < chars.len()
                    && (chars[j] == '-' || chars[j] == '+')
                    && chars[j + 1] == '*'
                {
                    j += 2;
                }
                let word: String = chars[i..j].iter().collect();
                if c.is_uppercase() || c == '_' {
                    push(Tok::Var(word));
                } else {
                    push(Tok::Ident(word));
                }
                col += j - i;
                i = j;
                continue;
            }
            other => return Err(err(line, col, format!("unexpected character `{other}`"))),
        }
        i += 1;
        col += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    end: (usize, usize),
}

impl Parser {
    fn new(text: &str) -> Result<Self> {
        let toks = lex(text)?;
        let lines = text.split('\n').count();
        let last = text.rsplit('\n').next().map_or(0, |l| l.chars().count());
        Ok(Parser {
            toks,
            pos: 0,
            end: (lines, last + 1),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn peek2(&self) -> Option<&Tok> {
        self.toks.get(self.pos + 1).map(|s| &s.tok)
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn error(&self, message: impl Into<String>) -> Error {
        let (line, column) = self
            .toks
            .get(self.pos)
            .map_or(self.end, |s| (s.line, s.column));
        Error::Syntax {
            line,
            column,
            message: message.into(),
        }
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|s| s.tok.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<()> {
        if self.peek() == Some(&want) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected {what}")))
        }
    }

    fn rule(&mut self) -> Result<Rule> {
        let mut name = None;
        if let (Some(Tok::Ident(n)), Some(Tok::Colon)) = (self.peek(), self.peek2()) {
            name = Some(sym(n));
            self.pos += 2;
        }
        let head = if self.peek() == Some(&Tok::If) {
            Atom::bot()
        } else {
            self.atom()?
        };
        let mut body = Vec::new();
        let mut guards = Vec::new();
        if self.peek() == Some(&Tok::If) {
            self.pos += 1;
            if self.peek() != Some(&Tok::Dot) {
                loop {
                    self.body_element(&mut body, &mut guards)?;
                    if self.peek() == Some(&Tok::Comma) {
                        self.pos += 1;
                    } else {
                        break;
                    }
                }
            }
        }
        self.expect(Tok::Dot, "`.` at end of rule")?;
        Ok(Rule {
            name,
            head,
            body,
            guards,
        })
    }

    fn body_element(
        &mut self,
        body: &mut Vec<Literal>,
        guards: &mut Vec<Disequality>,
    ) -> Result<()> {
        match (self.peek().cloned(), self.peek2().cloned()) {
            (Some(Tok::Ident(w)), Some(next))
                if w == "not"
                    && !matches!(next, Tok::LParen | Tok::Comma | Tok::Dot | Tok::Neq) =>
            {
                self.pos += 1;
                let a = self.atom()?;
                if a.is_bot() {
                    return Err(self.error("bot may not occur in a rule body"));
                }
                body.push(Literal::naf(a));
            }
            (Some(Tok::Var(_)), _) | (Some(Tok::Ident(_)), Some(Tok::Neq)) => {
                let lhs = self.term()?;
                self.expect(Tok::Neq, "`!=`")?;
                let rhs = self.constant()?;
                guards.push(Disequality {
                    lhs: vec![lhs],
                    rhs: vec![rhs],
                });
            }
            (Some(Tok::LParen), _) => {
                self.pos += 1;
                let mut lhs = Vec::new();
                if self.peek() != Some(&Tok::RParen) {
                    loop {
                        lhs.push(self.term()?);
                        if self.peek() == Some(&Tok::Comma) {
                            self.pos += 1;
                        } else {
                            break;
                        }
                    }
                }
                self.expect(Tok::RParen, "`)`")?;
                self.expect(Tok::Neq, "`!=`")?;
                self.expect(Tok::LParen, "`(`")?;
                let mut rhs = Vec::new();
                if self.peek() != Some(&Tok::RParen) {
                    loop {
                        rhs.push(self.constant()?);
                        if self.peek() == Some(&Tok::Comma) {
                            self.pos += 1;
                        } else {
                            break;
                        }
                    }
                }
                self.expect(Tok::RParen, "`)`")?;
                if lhs.len() != rhs.len() {
                    return Err(self.error("disequality tuples differ in length"));
                }
                guards.push(Disequality { lhs, rhs });
            }
            _ => {
                let a = self.atom()?;
                if a.is_bot() {
                    return Err(self.error("bot may not occur in a rule body"));
                }
                body.push(Literal::pos(a));
            }
        }
        Ok(())
    }

    fn atom(&mut self) -> Result<Atom> {
        let pred = match self.next() {
            Some(Tok::Ident(p)) => p,
            _ => {
                self.pos -= 1;
                return Err(self.error("expected a predicate"));
            }
        };
        let mut args = Vec::new();
        if self.peek() == Some(&Tok::LParen) {
            self.pos += 1;
            loop {
                args.push(self.term()?);
                match self.next() {
                    Some(Tok::Comma) => continue,
                    Some(Tok::RParen) => break,
                    _ => {
                        self.pos -= 1;
                        return Err(self.error("expected `,` or `)`"));
                    }
                }
            }
        }
        if pred == BOT && !args.is_empty() {
            return Err(self.error("bot takes no arguments"));
        }
        Ok(Atom {
            pred: sym(&pred),
            args,
        })
    }

    fn term(&mut self) -> Result<Term> {
        match self.next() {
            Some(Tok::Var(v)) => Ok(Term::Var(sym(&v))),
            Some(Tok::Ident(c)) if !c.ends_with('*') => Ok(Term::Const(sym(&c))),
            _ => {
                self.pos -= 1;
                Err(self.error("expected a term"))
            }
        }
    }

    fn constant(&mut self) -> Result<Symbol> {
        match self.next() {
            Some(Tok::Ident(c)) if !c.ends_with('*') => Ok(sym(&c)),
            _ => {
                self.pos -= 1;
                Err(self.error("expected a constant"))
            }
        }
    }
}

/// Parses exactly one rule.
pub fn parse_rule(text: &str) -> Result<Rule> {
    let mut p = Parser::new(text)?;
    let r = p.rule()?;
    if !p.at_end() {
        return Err(p.error("trailing input after rule"));
    }
    Ok(r)
}

/// Parses a plain sequence of rules (no section headers).
pub fn parse_program(text: &str) -> Result<Program> {
    let mut p = Parser::new(text)?;
    let mut rules = Vec::new();
    while !p.at_end() {
        if let Some(Tok::Section(_)) = p.peek() {
            return Err(p.error("section headers are not allowed here"));
        }
        rules.push(p.rule()?);
    }
    let program = Program::new(rules);
    program.arities()?;
    Ok(program)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    Persistent,
    Temporal,
    Backup,
    New,
}

/// Parses a sectioned framework file. Rules before the first header are
/// persistent. The `#new` section, when present, must hold exactly one
/// rule; its absence is reported as `None`.
pub fn parse_framework(text: &str) -> Result<(RevisionFramework, Option<Rule>)> {
    let mut p = Parser::new(text)?;
    let mut fw = RevisionFramework::default();
    let mut new_rules: Option<Vec<Rule>> = None;
    let mut section = Section::Persistent;
    while !p.at_end() {
        if let Some(Tok::Section(name)) = p.peek().cloned() {
            section = match name.as_str() {
                "persistent" => Section::Persistent,
                "temporal" => Section::Temporal,
                "backup" => Section::Backup,
                "new" => {
                    new_rules.get_or_insert_with(Vec::new);
                    Section::New
                }
                other => return Err(p.error(format!("unknown section `#{other}`"))),
            };
            p.pos += 1;
            continue;
        }
        let r = p.rule()?;
        match section {
            Section::Persistent => fw.t_pst.push(r),
            Section::Temporal => fw.t_tmp.push(r),
            Section::Backup => fw.t_bck.push(r),
            Section::New => new_rules.get_or_insert_with(Vec::new).push(r),
        }
    }
    let r_new = match new_rules {
        None => None,
        Some(mut rs) if rs.len() == 1 => Some(rs.remove(0)),
        Some(rs) => return Err(Error::NewSectionSize(rs.len())),
    };
    let fw = fw.with_generated_names();
    fw.validate(r_new.as_ref())?;
    Ok((fw, r_new))
}

/// Canonical text of a rule; `parse_rule` reads it back unchanged.
pub fn render_rule(r: &Rule) -> String {
    let mut s = String::new();
    if let Some(n) = &r.name {
        s.push_str(n);
        s.push_str(": ");
    }
    let conjuncts: Vec<String> = r
        .body
        .iter()
        .map(ToString::to_string)
        .chain(r.guards.iter().map(ToString::to_string))
        .collect();
    if r.head.is_bot() {
        if conjuncts.is_empty() {
            s.push_str("bot.");
        } else {
            s.push_str(":- ");
            s.push_str(&conjuncts.join(", "));
            s.push('.');
        }
        return s;
    }
    s.push_str(&r.head.to_string());
    if !conjuncts.is_empty() {
        s.push_str(" :- ");
        s.push_str(&conjuncts.join(", "));
    }
    s.push('.');
    s
}

/// A rule without its name and trailing period, as used in traces.
pub fn render_clause(r: &Rule) -> String {
    let mut s = render_rule(&r.clone().unnamed());
    s.pop();
    s
}

pub fn render_program(p: &Program) -> Vec<String> {
    p.iter().map(render_rule).collect()
}
