//! Text syntax for polynomials and polynomial maps.
//!
//! Expressions use integers, rational literals `a/b`, variables, `+ - * ^`,
//! unary minus and parentheses. Multiplication is always explicit, `^` takes
//! a nonnegative integer literal and is right-associative, and precedence is
//! `^` > unary minus > `*` > `+ -`. The output of [`MultiPoly`]'s `Display`
//! parses back to the same polynomial.
//!
//! A map file holds one `name = expression` definition per line; `#` starts
//! a comment. A file with two definitions is a map in `x, y`; with `n ≠ 2`
//! definitions the variables are `x1, …, xn`.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::arith::BigRat;
use crate::error::{Error, Result};
use crate::poly::{default_names, MultiPoly, PolyMap};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str, line: usize, first_column: usize) -> Result<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let column = first_column + i;
        let simple = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(tok) = simple {
            out.push(Token { tok, line, column });
            i += 1;
        } else if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            let value = digits.parse::<BigInt>().expect("ascii digits");
            out.push(Token { tok: Tok::Int(value), line, column });
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let name: String = chars[start..i].iter().collect();
            out.push(Token { tok: Tok::Ident(name), line, column });
        } else {
            return Err(Error::Parse {
                line,
                column,
                message: format!("unexpected character '{c}'"),
            });
        }
    }
    out.push(Token {
        tok: Tok::End,
        line,
        column: first_column + chars.len(),
    });
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    names: &'a [String],
}

impl Parser<'_> {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if t.tok != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn error<T>(token: &Token, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            line: token.line,
            column: token.column,
            message: message.into(),
        })
    }

    fn arity(&self) -> usize {
        self.names.len()
    }

    fn expr(&mut self) -> Result<MultiPoly> {
        let mut acc = self.term()?;
        loop {
            match self.peek().tok {
                Tok::Plus => {
                    self.next();
                    acc = &acc + &self.term()?;
                }
                Tok::Minus => {
                    self.next();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly> {
        let mut acc = self.unary()?;
        while self.peek().tok == Tok::Star {
            self.next();
            acc = &acc * &self.unary()?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<MultiPoly> {
        match self.peek().tok {
            Tok::Minus => {
                self.next();
                Ok(-&self.unary()?)
            }
            Tok::Plus => {
                self.next();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<MultiPoly> {
        let base = self.atom()?;
        if self.peek().tok != Tok::Caret {
            return Ok(base);
        }
        self.next();
        let e = self.exponent()?;
        Ok(base.pow(e))
    }

    /// Integer literal, possibly itself raised to a literal power.
    fn exponent(&mut self) -> Result<u32> {
        let t = self.next();
        let value = match &t.tok {
            Tok::Int(v) => v.clone(),
            Tok::Minus => return Self::error(&t, "negative exponent"),
            _ => return Self::error(&t, "exponent must be a nonnegative integer literal"),
        };
        let Some(base) = value.to_u32() else {
            return Self::error(&t, "exponent too large");
        };
        if self.peek().tok != Tok::Caret {
            return Ok(base);
        }
        self.next();
        let inner = self.exponent()?;
        match base.checked_pow(inner) {
            Some(e) => Ok(e),
            None => Self::error(&t, "exponent too large"),
        }
    }

    fn atom(&mut self) -> Result<MultiPoly> {
        let t = self.next();
        match &t.tok {
            Tok::Int(n) => {
                if self.peek().tok != Tok::Slash {
                    return Ok(MultiPoly::constant(self.arity(), BigRat::from_integer(n.clone())));
                }
                self.next();
                let d = self.next();
                match &d.tok {
                    Tok::Int(den) if den.is_zero() => Self::error(&d, "zero denominator"),
                    Tok::Int(den) => Ok(MultiPoly::constant(
                        self.arity(),
                        BigRat::new(n.clone(), den.clone()),
                    )),
                    _ => Self::error(&d, "denominator must be an integer literal"),
                }
            }
            Tok::Ident(name) => match self.names.iter().position(|v| v == name) {
                Some(i) => Ok(MultiPoly::var(self.arity(), i)),
                None => Self::error(
                    &t,
                    format!("unknown variable '{name}' (expected one of {})", self.names.join(", ")),
                ),
            },
            Tok::LParen => {
                let inner = self.expr()?;
                let close = self.next();
                if close.tok != Tok::RParen {
                    return Self::error(&close, "expected ')'");
                }
                Ok(inner)
            }
            Tok::End => Self::error(&t, "unexpected end of expression"),
            Tok::Slash => Self::error(&t, "'/' only separates the parts of a rational literal"),
            _ => Self::error(&t, "expected a number, variable or '('"),
        }
    }
}

fn parse_at(text: &str, names: &[String], line: usize, column: usize) -> Result<MultiPoly> {
    let mut parser = Parser {
        tokens: lex(text, line, column)?,
        pos: 0,
        names,
    };
    let p = parser.expr()?;
    let rest = parser.next();
    match rest.tok {
        Tok::End => Ok(p),
        Tok::Ident(_) | Tok::Int(_) | Tok::LParen => Parser::error(&rest, "missing '*' (multiplication is explicit)"),
        Tok::Slash => Parser::error(&rest, "'/' only separates the parts of a rational literal"),
        _ => Parser::error(&rest, "unexpected token"),
    }
}

/// Parses an expression over the variables `names` (in ring order).
pub fn parse_expression(text: &str, names: &[String]) -> Result<MultiPoly> {
    parse_at(text, names, 1, 1)
}

/// Parses an expression in `x, y`.
pub fn parse_planar(text: &str) -> Result<MultiPoly> {
    parse_expression(text, &default_names(2))
}

/// Name and right-hand side of each definition, with its position.
fn definitions(text: &str) -> Result<Vec<(String, String, usize, usize)>> {
    let mut defs = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        let Some(eq) = line.find('=') else {
            return Err(Error::Parse {
                line: k + 1,
                column: 1,
                message: "expected 'name = expression'".into(),
            });
        };
        let name = line[..eq].trim();
        let valid = name.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_')
            && name.chars().all(|c| c.is_alphanumeric() || c == '_');
        if !valid {
            return Err(Error::Parse {
                line: k + 1,
                column: 1,
                message: format!("invalid component name '{name}'"),
            });
        }
        let column = line[..eq + 1].chars().count() + 1;
        defs.push((name.to_string(), line[eq + 1..].to_string(), k + 1, column));
    }
    Ok(defs)
}

/// A polynomial map read from a map file, with its component names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapFile {
    pub names: Vec<String>,
    pub variables: Vec<String>,
    pub map: PolyMap,
}

pub fn parse_map_file(text: &str) -> Result<MapFile> {
    let defs = definitions(text)?;
    if defs.is_empty() {
        return Err(Error::Parse {
            line: 1,
            column: 1,
            message: "no component definitions".into(),
        });
    }
    let variables = default_names(defs.len());
    let mut names = Vec::new();
    let mut components = Vec::new();
    for (name, rhs, line, column) in defs {
        if names.contains(&name) {
            return Err(Error::Parse {
                line,
                column: 1,
                message: format!("component '{name}' defined twice"),
            });
        }
        components.push(parse_at(&rhs, &variables, line, column)?);
        names.push(name);
    }
    Ok(MapFile {
        names,
        variables: variables.clone(),
        map: PolyMap::square(components)?,
    })
}

/// A single polynomial from a file: one expression, optionally written as
/// a definition `name = expression`; comments and blank lines are ignored.
pub fn parse_poly_file(text: &str, names: &[String]) -> Result<MultiPoly> {
    let mut found: Option<(String, usize, usize)> = None;
    for (k, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        if found.is_some() {
            return Err(Error::Parse {
                line: k + 1,
                column: 1,
                message: "expected a single polynomial".into(),
            });
        }
        found = Some(match line.find('=') {
            Some(eq) => (line[eq + 1..].to_string(), k + 1, line[..eq + 1].chars().count() + 1),
            None => (line.to_string(), k + 1, 1),
        });
    }
    let Some((rhs, line, column)) = found else {
        return Err(Error::Parse {
            line: 1,
            column: 1,
            message: "no polynomial given".into(),
        });
    };
    parse_at(&rhs, names, line, column)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, rat_int};
    use proptest::prelude::*;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn expression_examples() {
        let (x, y) = (MultiPoly::var(2, 0), MultiPoly::var(2, 1));
        assert_eq!(parse_planar("x + y^2").unwrap(), &x + &y.pow(2));
        assert_eq!(parse_planar("(x - y)*(x + y)").unwrap(), &x.pow(2) - &y.pow(2));
        let p = parse_planar("1/2*x^2 - 3/4").unwrap();
        assert_eq!(
            p,
            &x.pow(2).scale(&rat(1, 2)) - &MultiPoly::constant(2, rat(3, 4))
        );
        assert_eq!(p.to_string(), "1/2*x^2 - 3/4");
    }

    #[test]
    fn precedence_and_associativity() {
        let x = MultiPoly::var(2, 0);
        assert_eq!(parse_planar("-x^2").unwrap(), -&x.pow(2));
        assert_eq!(parse_planar("x^2^3").unwrap(), x.pow(8));
        assert_eq!(parse_planar("2*x^3 - -x").unwrap(), &x.pow(3).scale(&rat_int(2)) + &x);
        assert_eq!(parse_planar("1 - 2 - 3").unwrap(), MultiPoly::constant(2, rat_int(-4)));
        assert_eq!(parse_planar("(x)^0").unwrap(), MultiPoly::one(2));
        assert_eq!(parse_planar("6/4").unwrap(), MultiPoly::constant(2, rat(3, 2)));
    }

    fn position(e: Error) -> (usize, usize) {
        match e {
            Error::Parse { line, column, .. } => (line, column),
            other => panic!("not a parse error: {other}"),
        }
    }

    #[test]
    fn syntax_errors_carry_positions() {
        assert_eq!(position(parse_planar("x + ").unwrap_err()), (1, 5));
        assert_eq!(position(parse_planar("2x").unwrap_err()), (1, 2));
        assert_eq!(position(parse_planar("x^-1").unwrap_err()), (1, 3));
        assert_eq!(position(parse_planar("x^y").unwrap_err()), (1, 3));
        assert_eq!(position(parse_planar("x + w").unwrap_err()), (1, 5));
        assert_eq!(position(parse_planar("(x + y").unwrap_err()), (1, 7));
        assert_eq!(position(parse_planar("x / 2").unwrap_err()), (1, 3));
        assert_eq!(position(parse_planar("1/0").unwrap_err()), (1, 3));
        assert_eq!(position(parse_planar("x $ y").unwrap_err()), (1, 3));
        assert_eq!(position(parse_planar("x^9^9^9").unwrap_err()), (1, 3));
    }

    #[test]
    fn map_files() {
        let text = "# shear\nf = x + y^2\n\ng = y   # second\n";
        let m = parse_map_file(text).unwrap();
        assert_eq!(m.names, names(&["f", "g"]));
        assert_eq!(m.variables, names(&["x", "y"]));
        assert_eq!(m.map.to_string(), "(y^2 + x, y)");

        let three = parse_map_file("a = x1 + x2*x3\nb = x2\nc = x3").unwrap();
        assert_eq!(three.map.arity(), 3);

        assert_eq!(position(parse_map_file("f = x\ng = y +* x").unwrap_err()), (2, 8));
        assert_eq!(position(parse_map_file("f = x\nnot a definition").unwrap_err()).0, 2);
        assert!(parse_map_file("f = x\nf = y").is_err());
        assert!(parse_map_file("# empty\n").is_err());
    }

    #[test]
    fn poly_files() {
        let xyz = names(&["x", "y", "z"]);
        let a = parse_poly_file("# A\nA = z^2 - (x^2 + y)\n", &xyz).unwrap();
        assert_eq!(a.to_string(), "-x1^2 + x3^2 - x2");
        assert_eq!(a.display_with(&xyz).to_string(), "-x^2 + z^2 - y");
        assert_eq!(parse_poly_file("x*y - 1", &default_names(2)).unwrap().num_terms(), 2);
        assert!(parse_poly_file("x\ny", &default_names(2)).is_err());
    }

    fn small_poly(arity: usize) -> impl Strategy<Value = MultiPoly> {
        prop::collection::vec(
            (prop::collection::vec(0u32..4, arity), -20i64..20, 1i64..6),
            0..6,
        )
        .prop_map(move |terms| {
            MultiPoly::from_terms(
                arity,
                terms
                    .into_iter()
                    .map(|(e, n, d)| (crate::poly::Monomial::new(e), rat(n, d))),
            )
        })
    }

    proptest! {
        #[test]
        fn print_then_parse_is_identity(p in small_poly(2), q in small_poly(3)) {
            prop_assert_eq!(parse_planar(&p.to_string()).unwrap(), p);
            let names = default_names(3);
            prop_assert_eq!(parse_expression(&q.to_string(), &names).unwrap(), q);
        }
    }
}
