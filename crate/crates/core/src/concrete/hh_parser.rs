use std::collections::HashMap;

use super::lexer::{tokenize, Cursor, Pos, Tok};
use super::ParseError;
use crate::syntax::{Atom, Binder, Formula, HHClause, HHGoal, HHProgram, Name, STerm, SimpleType};

const KEYWORDS: &[&str] = &["all", "true", "hastype", "istype", "ty", "tm"];

/// Names visible to the formula parser: typed constants and typed free
/// variables (eigenvariables).
#[derive(Clone, Debug, Default)]
pub struct HHScope {
    constants: HashMap<Name, SimpleType>,
    free: HashMap<Name, SimpleType>,
}

impl HHScope {
    pub fn new(constants: impl IntoIterator<Item = (Name, SimpleType)>) -> Self {
        HHScope { constants: constants.into_iter().collect(), free: HashMap::new() }
    }

    pub fn with_var(mut self, name: impl Into<Name>, ty: SimpleType) -> Self {
        self.free.insert(name.into(), ty);
        self
    }

    fn declare(&mut self, name: Name, ty: SimpleType) {
        self.constants.insert(name, ty);
    }
}

/// A program file: its constant declarations, in order, and its clauses.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ParsedProgram {
    pub constants: Vec<(Name, SimpleType)>,
    pub program: HHProgram,
}

struct Parser<'a> {
    c: Cursor,
    scope: &'a HHScope,
    bound: Vec<(String, SimpleType)>,
}

impl Parser<'_> {
    fn stype(&mut self) -> Result<SimpleType, ParseError> {
        let dom = match self.c.peek().clone() {
            Tok::Ident(s) if s == "ty" => {
                self.c.advance();
                SimpleType::Ty
            }
            Tok::Ident(s) if s == "tm" => {
                self.c.advance();
                SimpleType::Tm
            }
            Tok::LParen => {
                self.c.advance();
                let t = self.stype()?;
                self.c.expect(Tok::RParen)?;
                t
            }
            _ => return Err(self.c.error(&["`ty`", "`tm`", "`(`"])),
        };
        if *self.c.peek() == Tok::Arrow {
            self.c.advance();
            Ok(SimpleType::arrow(dom, self.stype()?))
        } else {
            Ok(dom)
        }
    }

    fn binder(&mut self) -> Result<(String, SimpleType), ParseError> {
        let (x, pos) = self.c.ident()?;
        if KEYWORDS.contains(&x.as_str()) {
            return Err(ParseError::malformed(pos, format!("`{x}` is reserved")));
        }
        self.c.expect(Tok::Colon)?;
        let ty = self.stype()?;
        self.c.expect(Tok::Dot)?;
        Ok((x, ty))
    }

    fn term(&mut self) -> Result<(STerm, SimpleType), ParseError> {
        if *self.c.peek() == Tok::Backslash {
            self.c.advance();
            let (x, ty) = self.binder()?;
            self.bound.push((x.clone(), ty.clone()));
            let body = self.term();
            self.bound.pop();
            let (body, body_ty) = body?;
            return Ok((
                STerm::Lam(Binder::new(x.as_str()), ty.clone(), Box::new(body)),
                SimpleType::arrow(ty, body_ty),
            ));
        }
        let (mut head, mut head_ty) = self.term_atom()?;
        loop {
            let pos = self.c.pos();
            let arg = match self.c.peek() {
                Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => self.term_atom()?,
                Tok::LParen => self.term_atom()?,
                Tok::Backslash => self.term()?,
                _ => break,
            };
            head_ty = match head_ty {
                SimpleType::Arrow(dom, cod) if *dom == arg.1 => *cod,
                other => {
                    return Err(ParseError::malformed(
                        pos,
                        format!("argument of type {} cannot be applied to a term of type {other}", arg.1),
                    ))
                }
            };
            head = STerm::app(head, arg.0);
        }
        Ok((head, head_ty))
    }

    fn term_atom(&mut self) -> Result<(STerm, SimpleType), ParseError> {
        match self.c.peek().clone() {
            Tok::LParen => {
                self.c.advance();
                let t = self.term()?;
                self.c.expect(Tok::RParen)?;
                Ok(t)
            }
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                let pos = self.c.pos();
                self.c.advance();
                self.resolve(&s, pos)
            }
            _ => Err(self.c.error(&["identifier", "`(`"])),
        }
    }

    fn resolve(&self, s: &str, pos: Pos) -> Result<(STerm, SimpleType), ParseError> {
        if let Some(i) = self.bound.iter().rev().position(|(b, _)| b == s) {
            let ty = self.bound[self.bound.len() - 1 - i].1.clone();
            return Ok((STerm::BVar(i as u32), ty));
        }
        let name = Name::new(s);
        if let Some(ty) = self.scope.free.get(&name) {
            return Ok((STerm::Var(name, ty.clone()), ty.clone()));
        }
        if let Some(ty) = self.scope.constants.get(&name) {
            return Ok((STerm::Const(name, ty.clone()), ty.clone()));
        }
        Err(ParseError::unbound(pos, s))
    }

    fn typed_arg(&mut self, expected: Option<&SimpleType>) -> Result<STerm, ParseError> {
        let pos = self.c.pos();
        let (t, ty) = self.term_atom()?;
        match expected {
            Some(e) if *e != ty => Err(ParseError::malformed(
                pos,
                format!("expected a term of type {e}, found one of type {ty}"),
            )),
            _ => Ok(t),
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        if matches!(self.c.peek(), Tok::Ident(s) if s == "all") {
            self.c.advance();
            let (x, ty) = self.binder()?;
            self.bound.push((x.clone(), ty.clone()));
            let body = self.formula();
            self.bound.pop();
            return Ok(Formula::Forall(Binder::new(x.as_str()), ty, Box::new(body?)));
        }
        let lhs = self.conjunction()?;
        if *self.c.peek() == Tok::Implies {
            self.c.advance();
            let rhs = self.formula()?;
            return Ok(Formula::Implies(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut f = self.primary()?;
        while *self.c.peek() == Tok::Amp {
            self.c.advance();
            f = Formula::And(Box::new(f), Box::new(self.primary()?));
        }
        Ok(f)
    }

    fn primary(&mut self) -> Result<Formula, ParseError> {
        match self.c.peek().clone() {
            Tok::Ident(s) if s == "true" => {
                self.c.advance();
                Ok(Formula::True)
            }
            Tok::Ident(s) if s == "hastype" => {
                self.c.advance();
                let m = self.typed_arg(None)?;
                let a = self.typed_arg(Some(&SimpleType::Ty))?;
                Ok(Formula::Atom(Atom::Hastype(m, a)))
            }
            Tok::Ident(s) if s == "istype" => {
                self.c.advance();
                let a = self.typed_arg(Some(&SimpleType::Ty))?;
                Ok(Formula::Atom(Atom::Istype(a)))
            }
            Tok::LParen => {
                self.c.advance();
                let f = self.formula()?;
                self.c.expect(Tok::RParen)?;
                Ok(f)
            }
            _ => Err(self.c.error(&["`all`", "`true`", "`hastype`", "`istype`", "`(`"])),
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        if self.c.at_eof() {
            Ok(())
        } else {
            Err(self.c.error(&["end of input"]))
        }
    }
}

fn parser<'a>(text: &str, scope: &'a HHScope) -> Result<Parser<'a>, ParseError> {
    Ok(Parser { c: Cursor::new(tokenize(text)?), scope, bound: Vec::new() })
}

pub fn parse_sterm(text: &str, scope: &HHScope) -> Result<STerm, ParseError> {
    let mut p = parser(text, scope)?;
    let (t, _) = p.term()?;
    p.finish()?;
    Ok(t)
}

pub fn parse_simple_type(text: &str) -> Result<SimpleType, ParseError> {
    let scope = HHScope::default();
    let mut p = parser(text, &scope)?;
    let t = p.stype()?;
    p.finish()?;
    Ok(t)
}

pub fn parse_goal(text: &str, scope: &HHScope) -> Result<HHGoal, ParseError> {
    let mut p = parser(text, scope)?;
    let pos = p.c.pos();
    let f = p.formula()?;
    p.finish()?;
    f.into_goal().ok_or_else(|| ParseError::malformed(pos, "not a goal formula"))
}

pub fn parse_clause(text: &str, scope: &HHScope) -> Result<HHClause, ParseError> {
    let mut p = parser(text, scope)?;
    let pos = p.c.pos();
    let f = p.formula()?;
    p.finish()?;
    f.into_clause().ok_or_else(|| ParseError::malformed(pos, "not a program clause"))
}

enum Item {
    Decl(Name, SimpleType),
    Clause(Formula),
}

/// Parses a sequence of constant declarations `name : type.` and clauses
/// `F.`. Declared constants are visible to every later item.
pub fn parse_program(text: &str, scope: &HHScope) -> Result<ParsedProgram, ParseError> {
    let mut scope = scope.clone();
    let mut out = ParsedProgram::default();
    let mut c = Cursor::new(tokenize(text)?);
    while !c.at_eof() {
        let is_decl = matches!(c.peek(), Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()))
            && *c.peek_at(1) == Tok::Colon;
        let pos = c.pos();
        let mut p = Parser { c, scope: &scope, bound: Vec::new() };
        let item = if is_decl {
            let (name, _) = p.c.ident()?;
            p.c.expect(Tok::Colon)?;
            Item::Decl(Name::new(name), p.stype()?)
        } else {
            Item::Clause(p.formula()?)
        };
        p.c.expect(Tok::Dot)?;
        c = p.c;
        match item {
            Item::Decl(name, ty) => {
                scope.declare(name.clone(), ty.clone());
                out.constants.push((name, ty));
            }
            Item::Clause(f) => {
                let clause =
                    f.into_clause().ok_or_else(|| ParseError::malformed(pos, "not a program clause"))?;
                out.program.clauses.push(clause);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::concrete::print;
    use crate::concrete::ParseErrorKind;

    fn tm() -> SimpleType {
        SimpleType::Tm
    }

    fn scope() -> HHScope {
        HHScope::new([
            (Name::new("nat"), SimpleType::Ty),
            (Name::new("num"), SimpleType::arrow(tm(), SimpleType::Ty)),
            (Name::new("z"), tm()),
            (Name::new("c"), SimpleType::arrow(SimpleType::arrows([tm(), tm()], tm()), tm())),
        ])
    }

    const C_CLAUSE: &str = "all w:tm -> tm -> tm. (all x:tm. hastype x nat => all y:tm. hastype y (num x) => hastype (w x y) nat) => hastype (c w) nat";

    #[test]
    fn clause_round_trip() {
        let clause = parse_clause(C_CLAUSE, &scope()).unwrap();
        assert_eq!(print::clause(&clause), C_CLAUSE);
    }

    #[test]
    fn terms() {
        let t = parse_sterm("c (\\x:tm. \\y:tm. z)", &scope()).unwrap();
        assert_eq!(print::sterm(&t), "c (\\x:tm. \\y:tm. z)");
        let err = parse_sterm("c z", &scope()).unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::Malformed(_)), "{err}");
        assert!(parse_sterm("q", &scope()).unwrap_err().is_unbound_name());
    }

    #[test]
    fn goals_are_not_clauses() {
        assert!(parse_clause("true", &scope()).is_err());
        assert!(parse_goal("true & hastype z nat", &scope()).is_ok());
    }

    #[test]
    fn program_with_declarations() {
        let text = "nat : ty.\nz : tm.\nistype nat.\nhastype z nat.\n";
        let parsed = parse_program(text, &HHScope::default()).unwrap();
        assert_eq!(parsed.constants.len(), 2);
        assert_eq!(parsed.program.len(), 2);
        assert_eq!(print::program(&parsed.program), "istype nat.\nhastype z nat.\n");
    }
}
