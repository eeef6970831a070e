//! Text notation: `[FEAT: val, FEAT2: #1 [..], FEAT3: #1]`, lists as
//! `< a, b >`, `[]` for an unspecified value. Atoms are bare when they are
//! lowercase identifiers, otherwise double-quoted.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use super::{AvmError, FeatureStructure, Node, NodeId, Symbol, Workspace};

fn is_bare_atom(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() || c.is_ascii_digit() || c == '+' || c == '-' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || matches!(c, '_' | '+' | '-' | '.'))
}

fn write_atom(out: &mut String, a: Symbol) {
    if is_bare_atom(a.as_str()) {
        out.push_str(a.as_str());
    } else {
        out.push('"');
        for c in a.as_str().chars() {
            if c == '"' || c == '\\' {
                out.push('\\');
            }
            out.push(c);
        }
        out.push('"');
    }
}

struct Printer<'a> {
    fs: &'a FeatureStructure,
    tags: HashMap<NodeId, usize>,
    printed: HashSet<NodeId>,
    out: String,
}

impl Printer<'_> {
    fn value(&mut self, id: NodeId) {
        if let Some(&tag) = self.tags.get(&id) {
            self.out.push_str(&format!("#{tag}"));
            if !self.printed.insert(id) {
                return;
            }
            self.out.push(' ');
        }
        match self.fs.node(id) {
            Node::Empty => self.out.push_str("[]"),
            Node::Atom(a) => write_atom(&mut self.out, *a),
            Node::Avm(feats) => {
                self.out.push('[');
                for (i, (f, child)) in feats.iter().enumerate() {
                    if i > 0 {
                        self.out.push_str(", ");
                    }
                    self.out.push_str(f.as_str());
                    self.out.push_str(": ");
                    self.value(*child);
                }
                self.out.push(']');
            }
            Node::List(items) => {
                self.out.push('<');
                for (i, child) in items.iter().enumerate() {
                    self.out.push_str(if i == 0 { " " } else { ", " });
                    self.value(*child);
                }
                self.out.push_str(" >");
            }
        }
    }
}

impl fmt::Display for FeatureStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Preorder ids double as first-visit order, so tags come out 1, 2, ...
        let tags = self.reentrant_nodes().into_iter().enumerate().map(|(i, id)| (id, i + 1)).collect();
        let mut p = Printer { fs: self, tags, printed: HashSet::new(), out: String::new() };
        p.value(self.root());
        f.write_str(&p.out)
    }
}

struct Reader<'a> {
    src: &'a str,
    pos: usize,
    ws: Workspace,
    tags: HashMap<String, NodeId>,
}

impl Reader<'_> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, AvmError> {
        Err(AvmError::Syntax { pos: self.pos, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), AvmError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected `{c}`"))
        }
    }

    fn word(&mut self) -> &str {
        self.skip_ws();
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_alphanumeric() || matches!(c, '_' | '+' | '-' | '.') {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
        &self.src[start..self.pos]
    }

    fn value(&mut self) -> Result<NodeId, AvmError> {
        self.skip_ws();
        if self.eat('#') {
            let tag = self.word().to_owned();
            if tag.is_empty() {
                return self.err("empty tag");
            }
            let node = match self.tags.get(&tag) {
                Some(&n) => n,
                None => {
                    let n = self.ws.alloc(Node::Empty);
                    self.tags.insert(tag, n);
                    n
                }
            };
            self.skip_ws();
            if matches!(self.peek(), Some('[') | Some('<') | Some('"'))
                || self.peek().is_some_and(|c| c.is_alphanumeric() || c == '+' || c == '-')
            {
                let body = self.body()?;
                if !self.ws.unify(node, body) {
                    return self.err(format!("tag #{} has clashing values", self.tag_name(node)));
                }
            }
            return Ok(node);
        }
        self.body()
    }

    fn tag_name(&self, node: NodeId) -> String {
        self.tags.iter().find(|(_, n)| **n == node).map(|(t, _)| t.clone()).unwrap_or_default()
    }

    fn body(&mut self) -> Result<NodeId, AvmError> {
        self.skip_ws();
        match self.peek() {
            Some('[') => {
                self.pos += 1;
                let node = self.ws.alloc(Node::Empty);
                if self.eat(']') {
                    return Ok(node);
                }
                loop {
                    let name = self.word().to_owned();
                    if name.is_empty() {
                        return self.err("expected feature name");
                    }
                    self.expect(':')?;
                    let v = self.value()?;
                    let feature = Symbol::intern(&name);
                    if self.ws.feature(node, feature).is_some() {
                        return self.err(format!("duplicate feature {name}"));
                    }
                    self.ws.set_feature(node, feature, v)?;
                    if self.eat(']') {
                        return Ok(node);
                    }
                    self.expect(',')?;
                }
            }
            Some('<') => {
                self.pos += 1;
                let mut items = Vec::new();
                if !self.eat('>') {
                    loop {
                        items.push(self.value()?);
                        if self.eat('>') {
                            break;
                        }
                        self.expect(',')?;
                    }
                }
                Ok(self.ws.alloc(Node::List(items)))
            }
            Some('"') => {
                self.pos += 1;
                let mut text = String::new();
                loop {
                    match self.peek() {
                        None => return self.err("unterminated string"),
                        Some('"') => {
                            self.pos += 1;
                            break;
                        }
                        Some('\\') => {
                            self.pos += 1;
                            match self.peek() {
                                Some(c) => {
                                    text.push(c);
                                    self.pos += c.len_utf8();
                                }
                                None => return self.err("dangling escape"),
                            }
                        }
                        Some(c) => {
                            text.push(c);
                            self.pos += c.len_utf8();
                        }
                    }
                }
                Ok(self.ws.alloc(Node::Atom(Symbol::intern(&text))))
            }
            _ => {
                let w = self.word().to_owned();
                if w.is_empty() {
                    return self.err("expected a value");
                }
                Ok(self.ws.alloc(Node::Atom(Symbol::intern(&w))))
            }
        }
    }
}

impl FromStr for FeatureStructure {
    type Err = AvmError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut r = Reader { src: s, pos: 0, ws: Workspace::new(), tags: HashMap::new() };
        let root = r.value()?;
        r.skip_ws();
        if r.pos != s.len() {
            return r.err("trailing input");
        }
        r.ws.extract(root)
    }
}
