//! Arithmetic expressions over named real variables.
//!
//! ```text
//! expr  := term (("+" | "-") term)*
//! term  := unary (("*" | "/") unary)*
//! unary := "-" unary | power
//! power := atom ("^" unary)?
//! atom  := number | ident "(" expr ")" | ident | "(" expr ")"
//! ```
//!
//! Functions: `sqrt`, `abs`, `exp`, `ln`, `sin`, `cos`.

use std::collections::BTreeMap;

use nom::branch::alt;
use nom::bytes::complete::take_while1;
use nom::character::complete::{char, multispace0, one_of};
use nom::combinator::{all_consuming, map, opt};
use nom::multi::many0;
use nom::number::complete::double;
use nom::sequence::{delimited, pair, preceded};
use nom::{IResult, Parser};

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(f64),
    Var(String),
    Neg(Box<Expr>),
    Bin(char, Box<Expr>, Box<Expr>),
    Call(String, Box<Expr>),
}

const FUNCTIONS: [&str; 6] = ["sqrt", "abs", "exp", "ln", "sin", "cos"];

fn ws<'a, O>(inner: impl Parser<&'a str, Output = O, Error = nom::error::Error<&'a str>>) -> impl Parser<&'a str, Output = O, Error = nom::error::Error<&'a str>> {
    delimited(multispace0, inner, multispace0)
}

fn ident(i: &str) -> IResult<&str, &str> {
    take_while1(|c: char| c.is_ascii_alphanumeric() || c == '_')(i).and_then(|(rest, id)| {
        if id.starts_with(|c: char| c.is_ascii_digit()) {
            Err(nom::Err::Error(nom::error::Error::new(i, nom::error::ErrorKind::Alpha)))
        } else {
            Ok((rest, id))
        }
    })
}

fn atom(i: &str) -> IResult<&str, Expr> {
    ws(alt((
        map(double, Expr::Num),
        map(pair(ident, delimited(ws(char('(')), expr, ws(char(')')))), |(f, e)| Expr::Call(f.to_string(), Box::new(e))),
        map(ident, |v| Expr::Var(v.to_string())),
        delimited(char('('), expr, char(')')),
    )))
    .parse(i)
}

fn power(i: &str) -> IResult<&str, Expr> {
    let (i, base) = atom(i)?;
    let (i, exp) = opt(preceded(ws(char('^')), unary)).parse(i)?;
    Ok((i, match exp {
        Some(e) => Expr::Bin('^', Box::new(base), Box::new(e)),
        None => base,
    }))
}

fn unary(i: &str) -> IResult<&str, Expr> {
    alt((map(preceded(ws(char('-')), unary), |e| Expr::Neg(Box::new(e))), power)).parse(i)
}

fn fold(first: Expr, rest: Vec<(char, Expr)>) -> Expr {
    rest.into_iter().fold(first, |acc, (op, e)| Expr::Bin(op, Box::new(acc), Box::new(e)))
}

fn term(i: &str) -> IResult<&str, Expr> {
    let (i, first) = unary(i)?;
    let (i, rest) = many0(pair(ws(one_of("*/")), unary)).parse(i)?;
    Ok((i, fold(first, rest)))
}

fn expr(i: &str) -> IResult<&str, Expr> {
    let (i, first) = term(i)?;
    let (i, rest) = many0(pair(ws(one_of("+-")), term)).parse(i)?;
    Ok((i, fold(first, rest)))
}

impl Expr {
    pub fn parse(src: &str) -> Result<Expr, String> {
        match all_consuming(ws(expr)).parse(src) {
            Ok((_, e)) => Ok(e),
            Err(e) => Err(format!("cannot parse expression `{src}`: {e}")),
        }
    }

    /// Names of the variables the expression refers to.
    pub fn variables(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect(&mut out);
        out.sort();
        out.dedup();
        out
    }

    fn collect(&self, out: &mut Vec<String>) {
        match self {
            Expr::Num(_) => {}
            Expr::Var(v) => out.push(v.clone()),
            Expr::Neg(e) | Expr::Call(_, e) => e.collect(out),
            Expr::Bin(_, a, b) => {
                a.collect(out);
                b.collect(out);
            }
        }
    }

    pub fn eval(&self, vars: &BTreeMap<String, f64>) -> Result<f64, String> {
        Ok(match self {
            Expr::Num(x) => *x,
            Expr::Var(v) => *vars.get(v).ok_or_else(|| format!("unknown variable `{v}`"))?,
            Expr::Neg(e) => -e.eval(vars)?,
            Expr::Bin(op, a, b) => {
                let (x, y) = (a.eval(vars)?, b.eval(vars)?);
                match op {
                    '+' => x + y,
                    '-' => x - y,
                    '*' => x * y,
                    '/' => x / y,
                    _ => x.powf(y),
                }
            }
            Expr::Call(f, e) => {
                let x = e.eval(vars)?;
                match f.as_str() {
                    "sqrt" => x.sqrt(),
                    "abs" => x.abs(),
                    "exp" => x.exp(),
                    "ln" => x.ln(),
                    "sin" => x.sin(),
                    "cos" => x.cos(),
                    _ => return Err(format!("unknown function `{f}` (known: {})", FUNCTIONS.join(", "))),
                }
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(src: &str, vars: &[(&str, f64)]) -> f64 {
        let m = vars.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        Expr::parse(src).unwrap().eval(&m).unwrap()
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(ev("1 + 2 * 3", &[]), 7.0);
        assert_eq!(ev("(1 + 2) * 3", &[]), 9.0);
        assert_eq!(ev("8 / 4 / 2", &[]), 1.0);
        assert_eq!(ev("2 ^ 3 ^ 2", &[]), 512.0);
        assert_eq!(ev("-2 ^ 2", &[]), -4.0);
        assert_eq!(ev("1/2", &[]), 0.5);
        assert_eq!(ev("2 - -3", &[]), 5.0);
    }

    #[test]
    fn variables_and_functions() {
        let v = ev("((t*a)^2 - t*a)/eps", &[("t", 0.5), ("a", 1.0), ("eps", 0.01)]);
        assert!((v + 25.0).abs() < 1e-12);
        assert_eq!(ev("sqrt(abs(-16))", &[]), 4.0);
        assert_eq!(ev("1e-2 * bp", &[("bp", 3.0)]), 0.03);
        assert_eq!(Expr::parse("c/(1-c) + eps").unwrap().variables(), vec!["c", "eps"]);
    }

    #[test]
    fn errors_are_reported() {
        assert!(Expr::parse("1 +").is_err());
        assert!(Expr::parse("(1").is_err());
        assert!(Expr::parse("2 3").is_err());
        let e = Expr::parse("q + 1").unwrap();
        assert!(e.eval(&BTreeMap::new()).unwrap_err().contains("unknown variable"));
        let e = Expr::parse("tan(1)").unwrap();
        assert!(e.eval(&BTreeMap::new()).unwrap_err().contains("unknown function"));
    }
}
