//! Reader and writer for the Turtle subset used by knowledge-graph files.
//!
//! Supported: `@prefix` directives, prefixed names, `<absolute-iri>`,
//! string literals (short and long, single or double quoted) with an
//! optional `^^datatype`, the `a` keyword, predicate lists (`;`), object
//! lists (`,`) and `#` comments. Blank nodes, collections, numeric and
//! boolean shorthands, language tags and `@base` are rejected.

use std::fmt::Write as _;

use super::{Graph, Iri, KgError, Literal, Term, Triple};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Prefix,
    IriRef(String),
    PName { prefix: String, local: String },
    A,
    Str(String),
    Carets,
    Dot,
    Semicolon,
    Comma,
    Eof,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Pos {
    line: usize,
    column: usize,
}

struct Lexer<'a> {
    src: &'a str,
    offset: usize,
    line: usize,
    column: usize,
}

fn is_pn_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '-' || c == '.'
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src,
            offset: 0,
            line: 1,
            column: 1,
        }
    }

    fn pos(&self) -> Pos {
        Pos {
            line: self.line,
            column: self.column,
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.offset..].chars().next()
    }

    fn peek_nth(&self, n: usize) -> Option<char> {
        self.src[self.offset..].chars().nth(n)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.offset += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn syntax(&self, at: Pos, message: impl Into<String>) -> KgError {
        KgError::Syntax {
            line: at.line,
            column: at.column,
            message: message.into(),
        }
    }

    fn skip_trivia(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == '#' {
                while let Some(c) = self.bump() {
                    if c == '\n' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    fn next_token(&mut self) -> Result<(Tok, Pos), KgError> {
        self.skip_trivia();
        let at = self.pos();
        let Some(c) = self.peek() else {
            return Ok((Tok::Eof, at));
        };
        let tok = match c {
            '.' => {
                self.bump();
                Tok::Dot
            }
            ';' => {
                self.bump();
                Tok::Semicolon
            }
            ',' => {
                self.bump();
                Tok::Comma
            }
            '^' => {
                self.bump();
                if self.bump() != Some('^') {
                    return Err(self.syntax(at, "expected '^^'"));
                }
                Tok::Carets
            }
            '<' => self.iri_ref(at)?,
            '"' | '\'' => Tok::Str(self.string(at)?),
            '@' => {
                self.bump();
                let word = self.take_while(|c| c.is_ascii_alphanumeric() || c == '-');
                match word.as_str() {
                    "prefix" => Tok::Prefix,
                    "base" => return Err(self.syntax(at, "@base is not supported")),
                    _ => return Err(self.syntax(at, "language tags are not supported")),
                }
            }
            '[' => return Err(self.syntax(at, "blank nodes are not supported")),
            '(' => return Err(self.syntax(at, "collections are not supported")),
            '_' if self.peek_nth(1) == Some(':') => {
                return Err(self.syntax(at, "blank nodes are not supported"))
            }
            c if c.is_ascii_digit() || c == '+' || c == '-' => {
                return Err(self.syntax(at, "numeric literals are not supported"))
            }
            c if c == ':' || c.is_alphabetic() => self.word(at)?,
            other => return Err(self.syntax(at, format!("unexpected character {other:?}"))),
        };
        Ok((tok, at))
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> String {
        let mut out = String::new();
        while let Some(c) = self.peek() {
            if !pred(c) {
                break;
            }
            out.push(c);
            self.bump();
        }
        out
    }

    fn word(&mut self, at: Pos) -> Result<Tok, KgError> {
        let prefix = self.take_while(is_pn_char);
        if self.peek() != Some(':') {
            return match prefix.as_str() {
                "a" => Ok(Tok::A),
                "true" | "false" => Err(self.syntax(at, "boolean literals are not supported")),
                "PREFIX" | "BASE" | "prefix" | "base" => {
                    Err(self.syntax(at, "SPARQL-style directives are not supported; use @prefix"))
                }
                _ => Err(self.syntax(at, format!("unexpected bare word {prefix:?}"))),
            };
        }
        if prefix.ends_with('.') {
            return Err(self.syntax(at, "prefix name may not end with '.'"));
        }
        self.bump();
        // ':' is legal inside a local name; '.' is legal but never trailing.
        let mut local = String::new();
        loop {
            match self.peek() {
                Some(c) if (is_pn_char(c) && c != '.') || c == ':' => {
                    local.push(c);
                    self.bump();
                }
                Some('.') if self.peek_nth(1).is_some_and(|n| is_pn_char(n) || n == ':') => {
                    local.push('.');
                    self.bump();
                }
                Some('\\') | Some('%') => {
                    return Err(
                        self.syntax(self.pos(), "escapes in prefixed names are not supported")
                    )
                }
                _ => break,
            }
        }
        Ok(Tok::PName { prefix, local })
    }

    fn iri_ref(&mut self, at: Pos) -> Result<Tok, KgError> {
        self.bump();
        let mut out = String::new();
        loop {
            match self.bump() {
                Some('>') => return Ok(Tok::IriRef(out)),
                Some('\\') => return Err(self.syntax(at, "escapes in IRIs are not supported")),
                Some(c) if c.is_whitespace() => return Err(self.syntax(at, "whitespace in IRI")),
                Some(c) => out.push(c),
                None => return Err(self.syntax(at, "unterminated IRI")),
            }
        }
    }

    fn string(&mut self, at: Pos) -> Result<String, KgError> {
        let quote = self.bump().expect("caller saw a quote");
        let long = self.peek() == Some(quote) && self.peek_nth(1) == Some(quote);
        if long {
            self.bump();
            self.bump();
        }
        let mut out = String::new();
        loop {
            let Some(c) = self.bump() else {
                return Err(self.syntax(at, "unterminated string literal"));
            };
            match c {
                '\\' => out.push(self.escape(at)?),
                c if c == quote && !long => return Ok(out),
                c if c == quote
                    && self.peek() == Some(quote)
                    && self.peek_nth(1) == Some(quote) =>
                {
                    self.bump();
                    self.bump();
                    return Ok(out);
                }
                '\n' | '\r' if !long => {
                    return Err(self.syntax(at, "newline in short string literal"))
                }
                c => out.push(c),
            }
        }
    }

    fn escape(&mut self, at: Pos) -> Result<char, KgError> {
        let c = self
            .bump()
            .ok_or_else(|| self.syntax(at, "unterminated escape"))?;
        Ok(match c {
            't' => '\t',
            'b' => '\u{8}',
            'n' => '\n',
            'r' => '\r',
            'f' => '\u{c}',
            '"' => '"',
            '\'' => '\'',
            '\\' => '\\',
            'u' | 'U' => {
                let width = if c == 'u' { 4 } else { 8 };
                let hex: String = (0..width).filter_map(|_| self.bump()).collect();
                u32::from_str_radix(&hex, 16)
                    .ok()
                    .filter(|_| hex.len() == width)
                    .and_then(char::from_u32)
                    .ok_or_else(|| self.syntax(at, format!("bad unicode escape \\{c}{hex}")))?
            }
            other => return Err(self.syntax(at, format!("unknown escape \\{other}"))),
        })
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    tok: Tok,
    at: Pos,
    graph: Graph,
}

enum Node {
    Iri(Iri),
    Literal(Literal),
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Result<Self, KgError> {
        let mut lexer = Lexer::new(src);
        let (tok, at) = lexer.next_token()?;
        Ok(Parser {
            lexer,
            tok,
            at,
            graph: Graph::new(),
        })
    }

    fn advance(&mut self) -> Result<Tok, KgError> {
        let (next, at) = self.lexer.next_token()?;
        self.at = at;
        Ok(std::mem::replace(&mut self.tok, next))
    }

    fn error(&self, message: impl Into<String>) -> KgError {
        self.lexer.syntax(self.at, message)
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), KgError> {
        if self.tok == want {
            self.advance()?;
            Ok(())
        } else {
            Err(self.error(format!("expected {what}, found {}", describe(&self.tok))))
        }
    }

    fn document(mut self) -> Result<Graph, KgError> {
        loop {
            match self.tok {
                Tok::Eof => return Ok(self.graph),
                Tok::Prefix => self.prefix_directive()?,
                _ => self.statement()?,
            }
        }
    }

    fn prefix_directive(&mut self) -> Result<(), KgError> {
        self.advance()?;
        let prefix = match self.advance()? {
            Tok::PName { prefix, local } if local.is_empty() => prefix,
            other => {
                return Err(self.error(format!("expected prefix name, found {}", describe(&other))))
            }
        };
        let ns = match self.advance()? {
            Tok::IriRef(s) => self.make_iri(&s)?,
            other => {
                return Err(self.error(format!("expected <namespace>, found {}", describe(&other))))
            }
        };
        self.graph.set_prefix(prefix, ns);
        self.expect(Tok::Dot, "'.' after @prefix")
    }

    fn statement(&mut self) -> Result<(), KgError> {
        let at = self.at;
        let subject = match self.node()? {
            Node::Iri(iri) => iri,
            Node::Literal(_) => {
                return Err(KgError::LiteralPosition {
                    line: at.line,
                    column: at.column,
                    position: "subject",
                })
            }
        };
        loop {
            let at = self.at;
            let predicate = if self.tok == Tok::A {
                self.advance()?;
                Iri::rdf_type()
            } else {
                match self.node()? {
                    Node::Iri(iri) => iri,
                    Node::Literal(_) => {
                        return Err(KgError::LiteralPosition {
                            line: at.line,
                            column: at.column,
                            position: "predicate",
                        })
                    }
                }
            };
            loop {
                let object = match self.node()? {
                    Node::Iri(iri) => Term::Iri(iri),
                    Node::Literal(lit) => Term::Literal(lit),
                };
                self.graph
                    .insert(Triple::new(subject.clone(), predicate.clone(), object));
                if self.tok == Tok::Comma {
                    self.advance()?;
                } else {
                    break;
                }
            }
            if self.tok != Tok::Semicolon {
                break;
            }
            while self.tok == Tok::Semicolon {
                self.advance()?;
            }
            if self.tok == Tok::Dot {
                break;
            }
        }
        self.expect(Tok::Dot, "'.' at end of statement")
    }

    fn node(&mut self) -> Result<Node, KgError> {
        let at = self.at;
        match self.advance()? {
            Tok::IriRef(s) => Ok(Node::Iri(self.make_iri(&s)?)),
            Tok::PName { prefix, local } => {
                let Some(ns) = self.graph.prefixes().get(&prefix) else {
                    return Err(KgError::UndefinedPrefix {
                        line: at.line,
                        column: at.column,
                        prefix,
                    });
                };
                let expanded = format!("{ns}{local}");
                Ok(Node::Iri(self.make_iri(&expanded)?))
            }
            Tok::Str(lexical) => {
                if self.tok == Tok::Carets {
                    self.advance()?;
                    match self.node()? {
                        Node::Iri(dt) => Ok(Node::Literal(Literal::typed(lexical, dt))),
                        Node::Literal(_) => Err(self.error("datatype must be an IRI")),
                    }
                } else {
                    Ok(Node::Literal(Literal::plain(lexical)))
                }
            }
            Tok::A => Err(self.lexer.syntax(at, "'a' is only valid as a predicate")),
            other => Err(self
                .lexer
                .syntax(at, format!("expected a term, found {}", describe(&other)))),
        }
    }

    fn make_iri(&self, s: &str) -> Result<Iri, KgError> {
        Iri::new(s).map_err(|e| self.error(e.to_string()))
    }
}

fn describe(tok: &Tok) -> String {
    match tok {
        Tok::Prefix => "@prefix".into(),
        Tok::IriRef(s) => format!("<{s}>"),
        Tok::PName { prefix, local } => format!("{prefix}:{local}"),
        Tok::A => "'a'".into(),
        Tok::Str(_) => "string literal".into(),
        Tok::Carets => "'^^'".into(),
        Tok::Dot => "'.'".into(),
        Tok::Semicolon => "';'".into(),
        Tok::Comma => "','".into(),
        Tok::Eof => "end of input".into(),
    }
}

/// Parses a UTF-8 Turtle document.
pub fn parse_turtle(document: &[u8]) -> Result<Graph, KgError> {
    let text = std::str::from_utf8(document).map_err(|e| KgError::Utf8(e.valid_up_to()))?;
    parse_turtle_str(text)
}

pub fn parse_turtle_str(text: &str) -> Result<Graph, KgError> {
    Parser::new(text)?.document()
}

fn valid_prefix_name(p: &str) -> bool {
    p.is_empty()
        || (p.chars().next().is_some_and(char::is_alphabetic)
            && p.chars().all(is_pn_char)
            && !p.ends_with('.'))
}

fn valid_local_name(l: &str) -> bool {
    let Some(first) = l.chars().next() else {
        return true;
    };
    (first.is_alphanumeric() || first == '_' || first == ':')
        && l.chars().all(|c| is_pn_char(c) || c == ':')
        && !l.ends_with('.')
}

struct Writer<'g> {
    // Longest namespace first so the most specific prefix wins.
    prefixes: Vec<(&'g str, &'g str)>,
}

impl<'g> Writer<'g> {
    fn new(g: &'g Graph) -> Self {
        let mut prefixes: Vec<(&str, &str)> = g
            .prefixes()
            .iter()
            .filter(|(p, _)| valid_prefix_name(p))
            .map(|(p, ns)| (p.as_str(), ns.as_str()))
            .collect();
        prefixes.sort_by(|a, b| b.1.len().cmp(&a.1.len()).then(a.0.cmp(b.0)));
        Writer { prefixes }
    }

    fn iri(&self, out: &mut String, iri: &Iri) {
        let s = iri.as_str();
        for (p, ns) in &self.prefixes {
            if let Some(local) = s.strip_prefix(ns) {
                if valid_local_name(local) {
                    let _ = write!(out, "{p}:{local}");
                    return;
                }
            }
        }
        let _ = write!(out, "<{s}>");
    }

    fn term(&self, out: &mut String, term: &Term) {
        match term {
            Term::Iri(iri) => self.iri(out, iri),
            Term::Literal(lit) => {
                out.push('"');
                for c in lit.lexical.chars() {
                    match c {
                        '"' => out.push_str("\\\""),
                        '\\' => out.push_str("\\\\"),
                        '\n' => out.push_str("\\n"),
                        '\r' => out.push_str("\\r"),
                        '\t' => out.push_str("\\t"),
                        c if c.is_control() => {
                            let _ = write!(out, "\\u{:04X}", c as u32);
                        }
                        c => out.push(c),
                    }
                }
                out.push('"');
                if let Some(dt) = &lit.datatype {
                    out.push_str("^^");
                    self.iri(out, dt);
                }
            }
        }
    }
}

/// Writes `g` as Turtle. Output is a pure function of the triple set and
/// prefix map: prefixes sorted by name, subjects in SPO order, one
/// predicate per line.
pub fn serialize_turtle(g: &Graph) -> Vec<u8> {
    serialize_turtle_string(g).into_bytes()
}

pub fn serialize_turtle_string(g: &Graph) -> String {
    let writer = Writer::new(g);
    let mut out = String::new();
    for (prefix, ns) in g.prefixes() {
        if valid_prefix_name(prefix) {
            let _ = writeln!(out, "@prefix {prefix}: <{ns}> .");
        }
    }

    let rdf_type = Iri::rdf_type();
    let mut current: Option<(Iri, Iri)> = None;
    for t in g.iter() {
        match &current {
            Some((s, p)) if *s == t.subject && *p == t.predicate => out.push_str(", "),
            Some((s, _)) if *s == t.subject => out.push_str(" ;\n    "),
            prev => {
                if prev.is_some() {
                    out.push_str(" .\n");
                }
                if !out.is_empty() {
                    out.push('\n');
                }
                writer.iri(&mut out, &t.subject);
                out.push(' ');
            }
        }
        if current
            .as_ref()
            .is_none_or(|(s, p)| *s != t.subject || *p != t.predicate)
        {
            if t.predicate == rdf_type {
                out.push('a');
            } else {
                writer.iri(&mut out, &t.predicate);
            }
            out.push(' ');
        }
        writer.term(&mut out, &t.object);
        current = Some((t.subject, t.predicate));
    }
    if current.is_some() {
        out.push_str(" .\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iri(s: &str) -> Iri {
        Iri::new(s).unwrap()
    }

    #[test]
    fn single_partof_statement() {
        let g = parse_turtle(b"@prefix : <http://ex/>. :IgnitionSystem1 :partOf :LycomingO320.")
            .unwrap();
        assert_eq!(g.len(), 1);
        let t = g.iter().next().unwrap();
        assert_eq!(t.subject, iri("http://ex/IgnitionSystem1"));
        assert_eq!(t.predicate, iri("http://ex/partOf"));
        assert_eq!(t.object, Term::Iri(iri("http://ex/LycomingO320")));
    }

    #[test]
    fn empty_document() {
        assert!(parse_turtle(b"").unwrap().is_empty());
        assert!(parse_turtle(b"  # only a comment\n").unwrap().is_empty());
    }

    #[test]
    fn a_is_rdf_type() {
        let g = parse_turtle(b"@prefix : <http://ex/>.\n:Magnetto1 a :Component.").unwrap();
        let t = g.iter().next().unwrap();
        assert_eq!(t.subject, iri("http://ex/Magnetto1"));
        assert_eq!(t.predicate, Iri::rdf_type());
        assert_eq!(t.object, Term::Iri(iri("http://ex/Component")));
    }

    #[test]
    fn predicate_and_object_lists() {
        let src = r#"
            @prefix : <http://ex/> .
            @prefix xsd: <http://www.w3.org/2001/XMLSchema#> .
            :s :p :o1 , :o2 ;
               :q "lit \"quoted\"" , "typed"^^xsd:string ;
               .
            <http://ex/t> a :C . # trailing comment
        "#;
        let g = parse_turtle(src.as_bytes()).unwrap();
        assert_eq!(g.len(), 5);
        assert!(g.contains(&Triple::new(
            iri("http://ex/s"),
            iri("http://ex/q"),
            Literal::plain("lit \"quoted\"")
        )));
        assert!(g.contains(&Triple::new(
            iri("http://ex/s"),
            iri("http://ex/q"),
            Literal::typed("typed", iri("http://www.w3.org/2001/XMLSchema#string"))
        )));
    }

    #[test]
    fn local_names_with_inner_dots() {
        let g = parse_turtle(b"@prefix : <http://ex/>. :a.b :p :c.d.").unwrap();
        let t = g.iter().next().unwrap();
        assert_eq!(t.subject.as_str(), "http://ex/a.b");
        assert_eq!(t.object, Term::Iri(iri("http://ex/c.d")));
    }

    #[test]
    fn errors_carry_positions() {
        match parse_turtle(b"@prefix : <http://ex/>.\n:a :b .") {
            Err(KgError::Syntax {
                line: 2, column: 7, ..
            }) => {}
            other => panic!("{other:?}"),
        }
        match parse_turtle(b":a :b :c .") {
            Err(KgError::UndefinedPrefix {
                line: 1,
                column: 1,
                prefix,
            }) => assert_eq!(prefix, ""),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn literal_positions_rejected() {
        let e = parse_turtle(b"@prefix : <http://ex/>. \"x\" :p :o .").unwrap_err();
        assert!(
            matches!(
                e,
                KgError::LiteralPosition {
                    position: "subject",
                    ..
                }
            ),
            "{e:?}"
        );
        let e = parse_turtle(b"@prefix : <http://ex/>. :s \"x\" :o .").unwrap_err();
        assert!(
            matches!(
                e,
                KgError::LiteralPosition {
                    position: "predicate",
                    ..
                }
            ),
            "{e:?}"
        );
    }

    #[test]
    fn unsupported_constructs_rejected() {
        for src in [
            "@prefix : <http://ex/>. _:b :p :o .",
            "@prefix : <http://ex/>. :s :p [ :q :o ] .",
            "@prefix : <http://ex/>. :s :p ( :a :b ) .",
            "@prefix : <http://ex/>. :s :p 42 .",
            "@prefix : <http://ex/>. :s :p true .",
            "@prefix : <http://ex/>. :s :p \"chat\"@fr .",
            "@base <http://ex/> .",
            "<rel> <http://ex/p> <http://ex/o> .",
        ] {
            assert!(
                matches!(parse_turtle(src.as_bytes()), Err(KgError::Syntax { .. })),
                "{src}"
            );
        }
        assert!(matches!(parse_turtle(&[0xff, 0xfe]), Err(KgError::Utf8(0))));
    }

    #[test]
    fn serialize_empty_and_single() {
        assert_eq!(serialize_turtle_string(&Graph::new()), "");
        let g: Graph = [Triple::new(
            iri("http://ex/a"),
            iri("http://ex/p"),
            iri("http://ex/b"),
        )]
        .into_iter()
        .collect();
        assert_eq!(
            serialize_turtle_string(&g),
            "<http://ex/a> <http://ex/p> <http://ex/b> .\n"
        );
    }

    #[test]
    fn serialize_groups_and_uses_prefixes() {
        let src = "@prefix : <http://ex/> .\n:s :p :o2, :o1 ; a :C .\n:t :p \"x\\ny\" .";
        let g = parse_turtle(src.as_bytes()).unwrap();
        let out = serialize_turtle_string(&g);
        assert_eq!(
            out,
            "@prefix : <http://ex/> .\n\n:s :p :o1, :o2 ;\n    a :C .\n\n:t :p \"x\\ny\" .\n"
        );
        assert_eq!(parse_turtle(out.as_bytes()).unwrap(), g);
    }

    #[test]
    fn long_strings() {
        let g =
            parse_turtle(b"<http://ex/s> <http://ex/p> \"\"\"two\nlines \"q\" \"\"\" .").unwrap();
        let t = g.iter().next().unwrap();
        assert_eq!(t.object, Term::Literal(Literal::plain("two\nlines \"q\" ")));
    }
}
