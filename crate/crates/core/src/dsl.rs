//! Text format for reaction networks.
//!
//! ```text
//! # comments run to end of line
//! A+B -> 2C; C -> A, k2        # explicit rate label
//! 0 <- A -> 2A, 1/2, 3         # chains: one reaction (and one optional rate) per arrow
//! X <-> Y, k                   # labels k.fwd and k.rev
//! ```
//!
//! An optional header `species: A, B, C` fixes the species order; otherwise species are
//! ordered by first appearance. Unlabelled reactions get `k{i}` by 1-based reaction index.

use std::collections::{HashMap, HashSet};

use crate::error::DslError;
use crate::network::{auto_label, Complex, RateLabel, Reaction, ReactionNetwork};
use crate::rational::parse_q;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Arrow {
    Forward,
    Backward,
    Both,
}

struct Cursor {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    col: usize,
}

type SparseComplex = Vec<(usize, u32)>;

struct Builder {
    order: Vec<String>,
    index: HashMap<String, usize>,
    reactions: Vec<(SparseComplex, SparseComplex, Option<RateLabel>)>,
    seen: HashSet<(SparseComplex, SparseComplex)>,
}

impl Builder {
    fn species(&mut self, name: &str) -> usize {
        if let Some(&i) = self.index.get(name) {
            return i;
        }
        let i = self.order.len();
        self.order.push(name.to_string());
        self.index.insert(name.to_string(), i);
        i
    }
}

impl Cursor {
    fn new(src: &str) -> Self {
        Self {
            chars: src.chars().collect(),
            pos: 0,
            line: 1,
            col: 1,
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn peek_at(&self, offset: usize) -> Option<char> {
        self.chars.get(self.pos + offset).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn error(&self, message: impl Into<String>) -> DslError {
        DslError {
            line: self.line,
            column: self.col,
            message: message.into(),
        }
    }

    fn error_at(&self, (line, column): (usize, usize), message: impl Into<String>) -> DslError {
        DslError {
            line,
            column,
            message: message.into(),
        }
    }

    fn here(&self) -> (usize, usize) {
        (self.line, self.col)
    }

    /// Skips spaces, tabs, carriage returns and comments, stopping before newlines.
    fn skip_blank(&mut self) {
        while let Some(c) = self.peek() {
            match c {
                ' ' | '\t' | '\r' => {
                    self.bump();
                }
                '#' => {
                    while self.peek().is_some_and(|c| c != '\n') {
                        self.bump();
                    }
                }
                _ => break,
            }
        }
    }

    fn eat(&mut self, s: &str) -> bool {
        let n = s.chars().count();
        if s.chars()
            .enumerate()
            .all(|(k, c)| self.peek_at(k) == Some(c))
        {
            for _ in 0..n {
                self.bump();
            }
            true
        } else {
            false
        }
    }

    fn identifier(&mut self, allow_dots: bool) -> Option<String> {
        let first = self.peek()?;
        if !(first.is_ascii_alphabetic() || first == '_') {
            return None;
        }
        let mut s = String::new();
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == '_' || (allow_dots && c == '.') {
                s.push(c);
                self.bump();
            } else {
                break;
            }
        }
        Some(s)
    }

    fn digits(&mut self) -> String {
        let mut s = String::new();
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            s.push(c);
            self.bump();
        }
        s
    }

    fn arrow(&mut self) -> Option<Arrow> {
        if self.eat("<->") {
            Some(Arrow::Both)
        } else if self.eat("->") {
            Some(Arrow::Forward)
        } else if self.eat("<-") {
            Some(Arrow::Backward)
        } else {
            None
        }
    }

    fn complex(&mut self, b: &mut Builder) -> Result<SparseComplex, DslError> {
        self.skip_blank();
        let mut terms: Vec<(usize, u32)> = Vec::new();
        loop {
            self.skip_blank();
            let start = self.here();
            let count = self.digits();
            self.skip_blank();
            let name = self.identifier(false);
            match (count.as_str(), name) {
                ("0", None) if terms.is_empty() => return Ok(Vec::new()),
                ("", None) => return Err(self.error("expected a complex")),
                (_, None) => return Err(self.error("expected a species name")),
                (digits, Some(name)) => {
                    let count: u32 = if digits.is_empty() {
                        1
                    } else {
                        digits
                            .parse()
                            .map_err(|_| self.error_at(start, "coefficient too large"))?
                    };
                    if count == 0 {
                        return Err(self.error_at(start, "coefficient must be positive"));
                    }
                    let i = b.species(&name);
                    match terms.iter_mut().find(|(j, _)| *j == i) {
                        Some(t) => t.1 += count,
                        None => terms.push((i, count)),
                    }
                }
            }
            self.skip_blank();
            if self.peek() == Some('+') {
                self.bump();
            } else {
                break;
            }
        }
        terms.sort_unstable();
        Ok(terms)
    }

    fn rate(&mut self) -> Result<RateLabel, DslError> {
        self.skip_blank();
        let start = self.here();
        if let Some(name) = self.identifier(true) {
            return Ok(RateLabel::Label(name));
        }
        let mut text = String::new();
        while let Some(c) = self.peek() {
            let exponent_sign =
                (c == '-' || c == '+') && matches!(text.chars().last(), Some('e' | 'E'));
            if c.is_ascii_digit() || matches!(c, '.' | '/' | 'e' | 'E') || exponent_sign {
                text.push(c);
                self.bump();
            } else {
                break;
            }
        }
        if text.is_empty() {
            return Err(self.error("expected a rate label or positive number"));
        }
        let value = parse_q(&text).map_err(|e| self.error_at(start, e.to_string()))?;
        if value <= num_traits::Zero::zero() {
            return Err(self.error_at(start, "rate must be positive"));
        }
        Ok(RateLabel::Literal(value))
    }

    fn at_header(&self) -> bool {
        let word = "species";
        if !word
            .chars()
            .enumerate()
            .all(|(k, c)| self.peek_at(k) == Some(c))
        {
            return false;
        }
        let mut k = word.len();
        while matches!(self.peek_at(k), Some(' ' | '\t')) {
            k += 1;
        }
        self.peek_at(k) == Some(':')
    }

    fn header(&mut self, b: &mut Builder) -> Result<(), DslError> {
        let start = self.here();
        if !b.reactions.is_empty() || !b.order.is_empty() {
            return Err(self.error("species header must come first"));
        }
        self.eat("species");
        self.skip_blank();
        self.eat(":");
        loop {
            self.skip_blank();
            let Some(name) = self.identifier(false) else {
                return Err(self.error("expected a species name"));
            };
            if b.index.contains_key(&name) {
                return Err(self.error_at(start, format!("species `{name}` declared twice")));
            }
            b.species(&name);
            self.skip_blank();
            if !self.eat(",") {
                break;
            }
        }
        Ok(())
    }

    fn statement(&mut self, b: &mut Builder) -> Result<(), DslError> {
        if self.at_header() {
            return self.header(b);
        }
        let start = self.here();
        let mut complexes = vec![self.complex(b)?];
        let mut arrows = Vec::new();
        loop {
            self.skip_blank();
            match self.arrow() {
                Some(a) => {
                    arrows.push(a);
                    complexes.push(self.complex(b)?);
                }
                None => break,
            }
        }
        if arrows.is_empty() {
            return Err(self.error("expected `->`, `<-` or `<->`"));
        }
        self.skip_blank();
        let mut rates = Vec::new();
        if self.eat(",") {
            rates.push(self.rate()?);
            loop {
                self.skip_blank();
                if !self.eat(",") {
                    break;
                }
                rates.push(self.rate()?);
            }
        }
        if !rates.is_empty() && rates.len() != arrows.len() {
            return Err(self.error_at(
                start,
                format!(
                    "expected {} rate(s), one per arrow, found {}",
                    arrows.len(),
                    rates.len()
                ),
            ));
        }
        for (k, arrow) in arrows.iter().enumerate() {
            let (left, right) = (&complexes[k], &complexes[k + 1]);
            let rate = rates.get(k);
            let suffixed = |suffix: &str| {
                rate.map(|r| match r {
                    RateLabel::Label(s) => RateLabel::Label(format!("{s}.{suffix}")),
                    lit => lit.clone(),
                })
            };
            let emitted = match arrow {
                Arrow::Forward => vec![(left, right, rate.cloned())],
                Arrow::Backward => vec![(right, left, rate.cloned())],
                Arrow::Both => vec![
                    (left, right, suffixed("fwd")),
                    (right, left, suffixed("rev")),
                ],
            };
            for (from, to, label) in emitted {
                if from == to {
                    return Err(self.error_at(start, "trivial reaction: reactant equals product"));
                }
                if !b.seen.insert((from.clone(), to.clone())) {
                    return Err(self.error_at(start, "duplicate reaction"));
                }
                b.reactions.push((from.clone(), to.clone(), label));
            }
        }
        Ok(())
    }
}

pub fn parse_network(text: &str) -> Result<ReactionNetwork, DslError> {
    let mut cur = Cursor::new(text);
    let mut b = Builder {
        order: Vec::new(),
        index: HashMap::new(),
        reactions: Vec::new(),
        seen: HashSet::new(),
    };
    loop {
        cur.skip_blank();
        match cur.peek() {
            None => break,
            Some(';' | '\n') => {
                cur.bump();
                continue;
            }
            Some(_) => {}
        }
        cur.statement(&mut b)?;
        cur.skip_blank();
        match cur.peek() {
            None | Some(';' | '\n') => {}
            Some(c) => return Err(cur.error(format!("unexpected `{c}`"))),
        }
    }
    if b.reactions.is_empty() {
        return Err(cur.error("network has no reactions"));
    }
    let n = b.order.len();
    let dense = |c: &SparseComplex| {
        let mut v = vec![0; n];
        for &(i, k) in c {
            v[i] = k;
        }
        Complex(v)
    };
    let reactions = b
        .reactions
        .iter()
        .enumerate()
        .map(|(i, (from, to, label))| Reaction {
            reactant: dense(from),
            product: dense(to),
            rate: label
                .clone()
                .unwrap_or_else(|| RateLabel::Label(auto_label(i))),
        })
        .collect();
    ReactionNetwork::new(b.order, reactions).map_err(|e| DslError {
        line: 1,
        column: 1,
        message: e.to_string(),
    })
}

/// Inverse of [`parse_network`]: one `reactant -> product` statement per reaction.
pub fn format_network(net: &ReactionNetwork) -> String {
    let species = net.species();
    let mut appearance: Vec<usize> = Vec::new();
    for r in net.reactions() {
        for c in [&r.reactant, &r.product] {
            for (i, &k) in c.coeffs().iter().enumerate() {
                if k > 0 && !appearance.contains(&i) {
                    appearance.push(i);
                }
            }
        }
    }
    let mut parts = Vec::new();
    if appearance.iter().copied().ne(0..species.len()) {
        parts.push(format!("species: {}", species.join(", ")));
    }
    for (i, r) in net.reactions().iter().enumerate() {
        let mut s = format!(
            "{} -> {}",
            r.reactant.display_with(species),
            r.product.display_with(species)
        );
        if r.rate != RateLabel::Label(auto_label(i)) {
            s.push_str(&format!(", {}", r.rate));
        }
        parts.push(s);
    }
    parts.join("; ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q_frac;

    #[test]
    fn parses_min3() {
        let net = parse_network("A+B -> 2C; C -> A; 2C -> 2B").unwrap();
        assert_eq!(net.species(), &["A", "B", "C"]);
        assert_eq!(net.r(), 3);
        assert_eq!(net.complexes().len(), 5);
        assert_eq!(format_network(&net), "A+B -> 2C; C -> A; 2C -> 2B");
    }

    #[test]
    fn parses_chains() {
        let net = parse_network("0 <- A -> 2A; A+B -> B").unwrap();
        assert_eq!(net.species(), &["A", "B"]);
        assert_eq!(net.r(), 3);
        assert_eq!(net.reactions()[0].reactant, Complex(vec![1, 0]));
        assert_eq!(net.reactions()[0].product, Complex(vec![0, 0]));
    }

    #[test]
    fn reversible_labels_and_literals() {
        let net = parse_network("X <-> Y, k\nY -> 0, 1/2").unwrap();
        let rates: Vec<String> = net.reactions().iter().map(|r| r.rate.to_string()).collect();
        assert_eq!(rates, vec!["k.fwd", "k.rev", "1/2"]);
        assert_eq!(net.reactions()[2].rate, RateLabel::Literal(q_frac(1, 2)));
        let lit = parse_network("X <-> 2X, 0.25").unwrap();
        assert!(lit
            .reactions()
            .iter()
            .all(|r| r.rate == RateLabel::Literal(q_frac(1, 4))));
    }

    #[test]
    fn comments_and_whitespace() {
        let net = parse_network("# header\n  2 A + B->0   # tail\n\n;0 -> A").unwrap();
        assert_eq!(net.r(), 2);
        assert_eq!(net.reactions()[0].reactant, Complex(vec![2, 1]));
    }

    #[test]
    fn errors_carry_positions() {
        let err = parse_network("A -> A").unwrap_err();
        assert!(err.message.contains("trivial"));
        let err = parse_network("A -> B\nB -> A; A -> B").unwrap_err();
        assert_eq!((err.line, err.message.as_str()), (2, "duplicate reaction"));
        let err = parse_network("A -> B\nA + -> C").unwrap_err();
        assert_eq!((err.line, err.column), (2, 5));
        assert!(parse_network("A B").is_err());
        assert!(parse_network("A -> B, k1, k2").is_err());
        assert!(parse_network("A -> B, -1").is_err());
        assert!(parse_network("").is_err());
    }

    #[test]
    fn species_header_round_trip() {
        let net = parse_network("species: B, A\nA -> B").unwrap();
        assert_eq!(net.species(), &["B", "A"]);
        let text = format_network(&net);
        assert_eq!(text, "species: B, A; A -> B");
        assert_eq!(parse_network(&text).unwrap(), net);
    }
}
