//! Recursive-descent parser for the expression DSL.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := ('-' | '+') unary | power
//! power   := primary ('^' exponent)?
//! exponent:= ('-' | '+') exponent | power
//! primary := number | 'i' | name | func '(' expr ')' | '(' expr ')'
//! ```
//!
//! Exponents must reduce to an integer or a half-integer (`^(1/2)` is `sqrt`).

use num_bigint::BigInt;
use num_rational::BigRational;

use super::coeff::Coeff;
use super::expr::{conj, exp, neg, pow, sqrt, Expr, Node};
use super::symbol::SymbolTable;
use super::SymError;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigRational),
    Ident(String),
    Op(char),
    End,
}

pub struct Parser<'a> {
    table: &'a SymbolTable,
}

/// Parse `text` against `table`.
pub fn parse_expr(text: &str, table: &SymbolTable) -> Result<Expr, SymError> {
    Parser::new(table).parse(text)
}

impl<'a> Parser<'a> {
    pub fn new(table: &'a SymbolTable) -> Self {
        Parser { table }
    }

    pub fn parse(&self, text: &str) -> Result<Expr, SymError> {
        let toks = lex(text)?;
        let mut st = State { text, toks, pos: 0, table: self.table };
        let e = st.expr()?;
        match st.peek() {
            Tok::End => Ok(e),
            _ => Err(st.error_here("unexpected trailing input")),
        }
    }
}

fn error_at(text: &str, offset: usize, message: impl Into<String>) -> SymError {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    SymError::Syntax { offset, line, column, message: message.into() }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, SymError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut k = 0;
    while k < bytes.len() {
        let c = bytes[k] as char;
        if c.is_ascii_whitespace() {
            k += 1;
        } else if c.is_ascii_digit() || (c == '.' && bytes.get(k + 1).is_some_and(u8::is_ascii_digit)) {
            let start = k;
            let (value, end) = lex_number(text, k)?;
            out.push((Tok::Num(value), start));
            k = end;
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = k;
            while k < bytes.len() && (bytes[k].is_ascii_alphanumeric() || bytes[k] == b'_') {
                k += 1;
            }
            out.push((Tok::Ident(text[start..k].to_string()), start));
        } else if "+-*/^()".contains(c) {
            out.push((Tok::Op(c), k));
            k += 1;
        } else {
            let ch = text[k..].chars().next().unwrap_or('?');
            return Err(error_at(text, k, format!("unexpected character `{ch}`")));
        }
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

/// Decimal literal with optional fraction and exponent, converted exactly.
fn lex_number(text: &str, start: usize) -> Result<(BigRational, usize), SymError> {
    let bytes = text.as_bytes();
    let mut k = start;
    let mut digits = String::new();
    let mut frac_len: i64 = 0;
    while k < bytes.len() && bytes[k].is_ascii_digit() {
        digits.push(bytes[k] as char);
        k += 1;
    }
    if k < bytes.len() && bytes[k] == b'.' {
        k += 1;
        while k < bytes.len() && bytes[k].is_ascii_digit() {
            digits.push(bytes[k] as char);
            frac_len += 1;
            k += 1;
        }
    }
    let mut exp10: i64 = 0;
    if k < bytes.len() && (bytes[k] == b'e' || bytes[k] == b'E') {
        let mut j = k + 1;
        let mut sign = 1;
        if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
            if bytes[j] == b'-' {
                sign = -1;
            }
            j += 1;
        }
        let ds = j;
        while j < bytes.len() && bytes[j].is_ascii_digit() {
            j += 1;
        }
        if j == ds {
            return Err(error_at(text, j, "malformed exponent in number"));
        }
        exp10 = sign
            * text[ds..j]
                .parse::<i64>()
                .ok()
                .filter(|e| *e <= 4000)
                .ok_or_else(|| error_at(text, ds, "exponent out of range"))?;
        k = j;
    }
    let mantissa: BigInt = digits.parse().map_err(|_| error_at(text, start, "malformed number"))?;
    let shift = exp10 - frac_len;
    let ten = BigInt::from(10);
    let scale = num_traits::pow(ten, shift.unsigned_abs() as usize);
    let value =
        if shift >= 0 { BigRational::from_integer(mantissa * scale) } else { BigRational::new(mantissa, scale) };
    Ok((value, k))
}

struct State<'t, 'a> {
    text: &'t str,
    toks: Vec<(Tok, usize)>,
    pos: usize,
    table: &'a SymbolTable,
}

impl State<'_, '_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, message: &str) -> SymError {
        let what = match self.peek() {
            Tok::End => "end of input".to_string(),
            Tok::Num(_) => "number".to_string(),
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Op(c) => format!("`{c}`"),
        };
        error_at(self.text, self.offset(), format!("{message} (found {what})"))
    }

    fn eat(&mut self, op: char) -> bool {
        if *self.peek() == Tok::Op(op) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, op: char) -> Result<(), SymError> {
        if self.eat(op) {
            Ok(())
        } else {
            Err(self.error_here(&format!("expected `{op}`")))
        }
    }

    fn expr(&mut self) -> Result<Expr, SymError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc + self.term()?;
            } else if self.eat('-') {
                acc = acc - self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, SymError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc * self.unary()?;
            } else if *self.peek() == Tok::Op('/') {
                let at = self.offset();
                self.bump();
                let d = self.unary()?;
                if d.is_zero() {
                    return Err(error_at(self.text, at, "division by zero"));
                }
                acc = acc / d;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, SymError> {
        if self.eat('-') {
            Ok(neg(&self.unary()?))
        } else if self.eat('+') {
            self.unary()
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Expr, SymError> {
        let base = self.primary()?;
        if *self.peek() != Tok::Op('^') {
            return Ok(base);
        }
        self.bump();
        let at = self.offset();
        let e = self.exponent()?;
        apply_exponent(&base, &e)
            .ok_or_else(|| error_at(self.text, at, "exponent must be an integer or half-integer constant"))
    }

    fn exponent(&mut self) -> Result<Expr, SymError> {
        if self.eat('-') {
            Ok(neg(&self.exponent()?))
        } else if self.eat('+') {
            self.exponent()
        } else {
            self.power()
        }
    }

    fn primary(&mut self) -> Result<Expr, SymError> {
        let at = self.offset();
        match self.bump() {
            Tok::Num(v) => Ok(Expr::num(Coeff::real(v))),
            Tok::Op('(') => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Ident(name) => {
                if matches!(name.as_str(), "exp" | "sqrt" | "conj") {
                    self.expect('(')?;
                    let arg = self.expr()?;
                    self.expect(')')?;
                    return Ok(match name.as_str() {
                        "exp" => exp(&arg),
                        "sqrt" => sqrt(&arg),
                        _ => conj(&arg),
                    });
                }
                if name == "i" {
                    return Ok(Expr::i());
                }
                match self.table.lookup(&name) {
                    Ok(s) => Ok(Expr::sym(&s)),
                    Err(_) => Err(error_at(self.text, at, format!("unknown identifier `{name}`"))),
                }
            }
            _ => {
                self.pos -= 1;
                Err(self.error_here("expected an operand"))
            }
        }
    }
}

fn apply_exponent(base: &Expr, e: &Expr) -> Option<Expr> {
    let c = match e.node() {
        Node::Num(c) if c.is_real() => c.re.clone(),
        _ => return None,
    };
    let two = BigInt::from(2);
    if c.is_integer() {
        let n: i64 = c.to_integer().try_into().ok()?;
        return Some(pow(base, n));
    }
    if *c.denom() == two {
        // k/2 with k odd
        let k: i64 = c.numer().clone().try_into().ok()?;
        let root = sqrt(base);
        return Some(pow(&root, k));
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::simplify::simplify;
    use crate::symcore::symbol::{coord, Symbol};

    fn p(text: &str) -> Expr {
        parse_expr(text, &SymbolTable::standard()).unwrap()
    }

    #[test]
    fn plane_wave() {
        let e = p("exp(-i*(p0*x0 - m0*x5))");
        let p0 = Expr::sym(&Symbol::real("p0"));
        let m0 = Expr::sym(&Symbol::positive("m0"));
        let x0 = Expr::sym(&coord(0));
        let x5 = Expr::sym(&coord(5));
        let expected = exp(&neg(&(Expr::i() * (p0 * x0 - m0 * x5))));
        assert_eq!(e, expected);
    }

    #[test]
    fn conj_of_real_coordinate() {
        assert_eq!(simplify(&p("x0^2 + conj(x0)^2")), p("2*x0^2"));
    }

    #[test]
    fn dirac_leading_component() {
        let e = p("sqrt((m0+p0)/(2*m0))");
        assert!(matches!(e.node(), Node::Sqrt(_)));
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(p("2^3^2"), Expr::int(512));
        assert_eq!(p("-2^2"), Expr::int(-4));
        assert_eq!(p("8/2/2"), Expr::int(2));
        assert_eq!(p("1 - 2 - 3"), Expr::int(-4));
        assert_eq!(p("x0^-1"), Expr::sym(&coord(0)).pow(-1));
        assert_eq!(p("x1^(1/2)"), sqrt(&Expr::sym(&coord(1))));
    }

    #[test]
    fn decimal_literals_are_exact() {
        assert_eq!(p("0.25"), Expr::ratio(1, 4));
        assert_eq!(p("1.5e-2"), Expr::ratio(3, 200));
        assert_eq!(p("2E3"), Expr::int(2000));
    }

    #[test]
    fn errors_carry_position() {
        let t = SymbolTable::standard();
        match parse_expr("x0 + abc", &t) {
            Err(SymError::Syntax { column, message, .. }) => {
                assert_eq!(column, 6);
                assert!(message.contains("abc"));
            }
            other => panic!("{other:?}"),
        }
        match parse_expr("x0 +\n  * x1", &t) {
            Err(SymError::Syntax { line, column, .. }) => assert_eq!((line, column), (2, 3)),
            other => panic!("{other:?}"),
        }
        assert!(parse_expr("(x0", &t).is_err());
        assert!(parse_expr("x0 $ x1", &t).is_err());
        assert!(parse_expr("x0^x1", &t).is_err());
        assert!(parse_expr("x0^(1/3)", &t).is_err());
    }

    #[test]
    fn print_parse_round_trip() {
        let t = SymbolTable::standard();
        for text in [
            "exp(-i*(p0*x0 - p1*x1 - m0*x5))",
            "(x0 + 1)^2/(x1 - 2*i)",
            "sqrt((m0 + p0)/(2*m0))*(p1 + i*p2)/(m0 + p0)",
            "-1/2*x0^-3 + (3 - 2*i)*x1",
            "conj(x0)*x1 - 7/3",
        ] {
            let e = parse_expr(text, &t).unwrap();
            let again = parse_expr(&e.to_string(), &t).unwrap();
            assert_eq!(again, e, "{text} -> {e}");
        }
    }
}
