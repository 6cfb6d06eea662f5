use super::lexer::{tokenize, Cursor, Pos, Tok};
use super::ParseError;
use crate::syntax::{Binder, LfDecl, LfFamily, LfKind, LfObject, LfSignature, Name};

/// Parse tree before the split into kinds, families and objects.
#[derive(Debug)]
enum Raw {
    Ident(String, Pos),
    Pi(String, Box<Raw>, Box<Raw>, Pos),
    Lam(String, Box<Raw>, Box<Raw>, Pos),
    App(Box<Raw>, Box<Raw>),
}

impl Raw {
    fn pos(&self) -> Pos {
        match self {
            Raw::Ident(_, p) | Raw::Pi(.., p) | Raw::Lam(.., p) => *p,
            Raw::App(f, _) => f.pos(),
        }
    }

    fn ends_in_type(&self) -> bool {
        match self {
            Raw::Ident(s, _) => s == "type",
            Raw::Pi(_, _, body, _) => body.ends_in_type(),
            _ => false,
        }
    }
}

const TERM_START: &[&str] = &["identifier", "`(`", "`{`", "`[`"];

fn term(c: &mut Cursor) -> Result<Raw, ParseError> {
    let pos = c.pos();
    match c.peek() {
        Tok::LBrace | Tok::LBracket => {
            let is_pi = *c.peek() == Tok::LBrace;
            c.advance();
            let (x, _) = c.ident()?;
            c.expect(Tok::Colon)?;
            let dom = term(c)?;
            c.expect(if is_pi { Tok::RBrace } else { Tok::RBracket })?;
            let body = term(c)?;
            Ok(if is_pi {
                Raw::Pi(x, Box::new(dom), Box::new(body), pos)
            } else {
                Raw::Lam(x, Box::new(dom), Box::new(body), pos)
            })
        }
        _ => app(c),
    }
}

fn app(c: &mut Cursor) -> Result<Raw, ParseError> {
    let mut head = atom(c)?;
    loop {
        match c.peek() {
            Tok::Ident(_) | Tok::LParen => head = Raw::App(Box::new(head), Box::new(atom(c)?)),
            // A binder in argument position extends to the end.
            Tok::LBrace | Tok::LBracket => {
                head = Raw::App(Box::new(head), Box::new(term(c)?));
                break;
            }
            _ => break,
        }
    }
    Ok(head)
}

fn atom(c: &mut Cursor) -> Result<Raw, ParseError> {
    match c.peek() {
        Tok::Ident(_) => {
            let (s, pos) = c.ident()?;
            Ok(Raw::Ident(s, pos))
        }
        Tok::LParen => {
            c.advance();
            let t = term(c)?;
            c.expect(Tok::RParen)?;
            Ok(t)
        }
        _ => Err(c.error(TERM_START)),
    }
}

/// How names that are not bound by a binder are treated.
#[derive(Clone, Copy)]
enum Resolve<'s> {
    /// Every free name is a constant; the kernel reports unknown ones.
    Loose,
    /// Free names must be declared in the signature at the right level.
    Against(&'s LfSignature),
}

struct Classify<'s> {
    resolve: Resolve<'s>,
    scope: Vec<String>,
}

impl Classify<'_> {
    fn bound(&self, name: &str) -> Option<u32> {
        self.scope.iter().rev().position(|s| s == name).map(|i| i as u32)
    }

    fn under<T>(
        &mut self,
        x: &str,
        f: impl FnOnce(&mut Self) -> Result<T, ParseError>,
    ) -> Result<T, ParseError> {
        self.scope.push(x.to_string());
        let r = f(self);
        self.scope.pop();
        r
    }

    fn kind(&mut self, raw: &Raw) -> Result<LfKind, ParseError> {
        match raw {
            Raw::Ident(s, _) if s == "type" => Ok(LfKind::Type),
            Raw::Pi(x, dom, body, _) => {
                let dom = self.family(dom)?;
                let body = self.under(x, |c| c.kind(body))?;
                Ok(LfKind::Pi(Binder::new(x.as_str()), Box::new(dom), Box::new(body)))
            }
            other => Err(ParseError::malformed(other.pos(), "expected a kind")),
        }
    }

    fn family(&mut self, raw: &Raw) -> Result<LfFamily, ParseError> {
        match raw {
            Raw::Ident(s, pos) => {
                if s == "type" {
                    return Err(ParseError::malformed(*pos, "`type` is a kind, not a type"));
                }
                if self.bound(s).is_some() {
                    return Err(ParseError::malformed(*pos, format!("variable `{s}` used as a type")));
                }
                if let Resolve::Against(sig) = self.resolve {
                    if sig.family_kind(&Name::new(s)).is_none() {
                        return Err(ParseError::unbound(*pos, s));
                    }
                }
                Ok(LfFamily::constant(s.as_str()))
            }
            Raw::App(head, arg) => Ok(LfFamily::app(self.family(head)?, self.object(arg)?)),
            Raw::Pi(x, dom, body, _) => {
                let dom = self.family(dom)?;
                let body = self.under(x, |c| c.family(body))?;
                Ok(LfFamily::Pi(Binder::new(x.as_str()), Box::new(dom), Box::new(body)))
            }
            Raw::Lam(_, _, _, pos) => {
                Err(ParseError::malformed(*pos, "type families cannot be λ-abstractions"))
            }
        }
    }

    fn object(&mut self, raw: &Raw) -> Result<LfObject, ParseError> {
        match raw {
            Raw::Ident(s, pos) => {
                if let Some(i) = self.bound(s) {
                    return Ok(LfObject::BVar(i));
                }
                if s == "type" {
                    return Err(ParseError::malformed(*pos, "`type` is a kind, not an object"));
                }
                if let Resolve::Against(sig) = self.resolve {
                    if sig.object_type(&Name::new(s)).is_none() {
                        return Err(ParseError::unbound(*pos, s));
                    }
                }
                Ok(LfObject::constant(s.as_str()))
            }
            Raw::App(f, a) => Ok(LfObject::app(self.object(f)?, self.object(a)?)),
            Raw::Lam(x, annot, body, _) => {
                let annot = self.family(annot)?;
                let body = self.under(x, |c| c.object(body))?;
                Ok(LfObject::Lam(Binder::new(x.as_str()), Box::new(annot), Box::new(body)))
            }
            Raw::Pi(_, _, _, pos) => Err(ParseError::malformed(*pos, "a Π-type is not an object")),
        }
    }
}

/// A parsed signature together with where each declaration starts.
#[derive(Clone, Debug)]
pub struct SourceSignature {
    pub text: String,
    pub signature: LfSignature,
    pub locations: Vec<Pos>,
}

impl SourceSignature {
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut c = Cursor::new(tokenize(text)?);
        let mut decls = Vec::new();
        let mut locations = Vec::new();
        let mut classify = Classify { resolve: Resolve::Loose, scope: Vec::new() };
        while !c.at_eof() {
            let (name, pos) = c.ident()?;
            c.expect(Tok::Colon)?;
            let raw = term(&mut c)?;
            c.expect(Tok::Dot)?;
            let decl = if raw.ends_in_type() {
                LfDecl::family(name.as_str(), classify.kind(&raw)?)
            } else {
                LfDecl::object(name.as_str(), classify.family(&raw)?)
            };
            decls.push(decl);
            locations.push(pos);
        }
        Ok(SourceSignature { text: text.to_string(), signature: LfSignature::new(decls), locations })
    }
}

/// Parses declarations `name : classifier.`. Names are not resolved; the
/// kernel decides well-formedness.
pub fn parse_signature(text: &str) -> Result<LfSignature, ParseError> {
    SourceSignature::parse(text).map(|s| s.signature)
}

fn parse_whole<T>(
    text: &str,
    f: impl FnOnce(&mut Cursor) -> Result<T, ParseError>,
) -> Result<T, ParseError> {
    let mut c = Cursor::new(tokenize(text)?);
    let t = f(&mut c)?;
    if !c.at_eof() {
        return Err(c.error(&["end of input"]));
    }
    Ok(t)
}

/// Parses `m : A`, resolving names against `sig` and the binders.
pub fn parse_judgment(text: &str, sig: &LfSignature) -> Result<(LfObject, LfFamily), ParseError> {
    parse_whole(text, |c| {
        let m = term(c)?;
        c.expect(Tok::Colon)?;
        let a = term(c)?;
        let mut classify = Classify { resolve: Resolve::Against(sig), scope: Vec::new() };
        Ok((classify.object(&m)?, classify.family(&a)?))
    })
}

pub fn parse_object(text: &str, sig: &LfSignature) -> Result<LfObject, ParseError> {
    parse_whole(text, |c| {
        let raw = term(c)?;
        Classify { resolve: Resolve::Against(sig), scope: Vec::new() }.object(&raw)
    })
}

pub fn parse_family(text: &str, sig: &LfSignature) -> Result<LfFamily, ParseError> {
    parse_whole(text, |c| {
        let raw = term(c)?;
        Classify { resolve: Resolve::Against(sig), scope: Vec::new() }.family(&raw)
    })
}

pub fn parse_kind(text: &str, sig: &LfSignature) -> Result<LfKind, ParseError> {
    parse_whole(text, |c| {
        let raw = term(c)?;
        Classify { resolve: Resolve::Against(sig), scope: Vec::new() }.kind(&raw)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::concrete::{print, ParseErrorKind};
    use crate::witness;

    const COLLISION: &str = "nat : type. num : {x:nat} type. z : nat. c : {w : {x:nat}{y:num x} nat} nat.";

    #[test]
    fn collision_signature() {
        assert_eq!(parse_signature(COLLISION).unwrap(), witness::signature());
    }

    #[test]
    fn empty_signature() {
        assert!(parse_signature("").unwrap().is_empty());
        assert!(parse_signature("% only a comment\n").unwrap().is_empty());
    }

    #[test]
    fn missing_classifier() {
        let err = parse_signature("z : .").unwrap_err();
        assert_eq!((err.line, err.col), (1, 5));
        let ParseErrorKind::Syntax { expected, .. } = &err.kind else { panic!("{err}") };
        assert!(expected.contains(&"identifier".to_string()));
    }

    #[test]
    fn judgments() {
        let sig = witness::signature();
        let (m, a) = parse_judgment("c ([x:nat][y:num z] z) : nat", &sig).unwrap();
        assert_eq!(m, witness::bad_term());
        assert_eq!(a, witness::nat());
        let (m, a) = parse_judgment("z : nat", &sig).unwrap();
        assert_eq!((m, a), (LfObject::constant("z"), witness::nat()));
        let err = parse_judgment("q : nat", &sig).unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UnboundName("q".into()));
    }

    #[test]
    fn trailing_binder_argument() {
        let sig = witness::signature();
        let (m, _) = parse_judgment("c [x:nat][y:num z] z : nat", &sig).unwrap_or_else(|e| panic!("{e}"));
        assert_eq!(m, witness::bad_term());
    }

    #[test]
    fn printing_round_trips() {
        let sig = witness::signature();
        let printed = print::signature(&sig);
        assert_eq!(
            printed,
            "nat : type.\nnum : {x:nat} type.\nz : nat.\nc : {w:{x:nat}{y:num x} nat} nat.\n"
        );
        assert_eq!(parse_signature(&printed).unwrap(), sig);
        assert_eq!(print::object(&witness::bad_term()), "c ([x:nat][y:num z] z)");
    }
}
