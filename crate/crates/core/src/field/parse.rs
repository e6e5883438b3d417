//! Recursive-descent parser for coefficient expressions.
//!
//! Accepts the same syntax the renderer emits: integers, parameter names,
//! `+ - * / ^` and parentheses, e.g.
//! `(3*omega*(3*omega+4*b^2)+32*b*epsilon^2)/(128*a^4*b^2)`.

use num::BigInt;

use super::poly::Var;
use super::ratio::ParamRatio;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("unexpected character `{0}` at byte {1}")]
    UnexpectedChar(char, usize),
    #[error("unexpected end of expression")]
    UnexpectedEnd,
    #[error("expected {expected} at byte {at}")]
    Expected { expected: &'static str, at: usize },
    #[error("division by an expression that simplifies to zero")]
    ZeroDenominator,
    #[error("exponent out of range")]
    BadExponent,
    #[error("empty expression")]
    Empty,
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Open,
    Close,
}

fn lex(input: &str) -> Result<Vec<(Token, usize)>, ParseError> {
    let mut out = Vec::new();
    let bytes = input.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' => i += 1,
            '+' => {
                out.push((Token::Plus, i));
                i += 1;
            }
            '-' => {
                out.push((Token::Minus, i));
                i += 1;
            }
            '*' => {
                out.push((Token::Star, i));
                i += 1;
            }
            '/' => {
                out.push((Token::Slash, i));
                i += 1;
            }
            '^' => {
                out.push((Token::Caret, i));
                i += 1;
            }
            '(' => {
                out.push((Token::Open, i));
                i += 1;
            }
            ')' => {
                out.push((Token::Close, i));
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = input[start..i].parse().expect("digits parse as BigInt");
                out.push((Token::Int(n), start));
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                out.push((Token::Ident(input[start..i].to_string()), start));
            }
            _ => return Err(ParseError::UnexpectedChar(c, i)),
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<(Token, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn at(&self) -> usize {
        self.tokens
            .get(self.pos)
            .map(|(_, i)| *i)
            .unwrap_or(usize::MAX)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).map(|(t, _)| t.clone());
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<ParamRatio, ParseError> {
        let mut acc = match self.peek() {
            Some(Token::Minus) => {
                self.bump();
                -self.term()?
            }
            Some(Token::Plus) => {
                self.bump();
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Some(Token::Minus) => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<ParamRatio, ParseError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.bump();
                    acc = &acc * &self.factor()?;
                }
                Some(Token::Slash) => {
                    self.bump();
                    let d = self.factor()?;
                    acc = acc.checked_div(&d).ok_or(ParseError::ZeroDenominator)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<ParamRatio, ParseError> {
        let base = self.base()?;
        if let Some(Token::Caret) = self.peek() {
            self.bump();
            match self.bump() {
                Some(Token::Int(n)) => {
                    let e: u32 = n.try_into().map_err(|_| ParseError::BadExponent)?;
                    Ok(base.pow(e as i64))
                }
                _ => Err(ParseError::Expected {
                    expected: "integer exponent",
                    at: self.at(),
                }),
            }
        } else {
            Ok(base)
        }
    }

    fn base(&mut self) -> Result<ParamRatio, ParseError> {
        let at = self.at();
        match self.bump() {
            Some(Token::Int(n)) => Ok(ParamRatio::from_bigint(n)),
            Some(Token::Ident(name)) => Ok(ParamRatio::from_poly(
                super::poly::ParamPoly::var(Var::new(&name)),
            )),
            Some(Token::Open) => {
                let inner = self.expr()?;
                match self.bump() {
                    Some(Token::Close) => Ok(inner),
                    _ => Err(ParseError::Expected {
                        expected: "closing parenthesis",
                        at,
                    }),
                }
            }
            Some(_) => Err(ParseError::Expected {
                expected: "number, parameter, or parenthesized expression",
                at,
            }),
            None => Err(ParseError::UnexpectedEnd),
        }
    }
}

pub fn parse_ratio(input: &str) -> Result<ParamRatio, ParseError> {
    let tokens = lex(input)?;
    if tokens.is_empty() {
        return Err(ParseError::Empty);
    }
    let mut p = Parser { tokens, pos: 0 };
    let out = p.expr()?;
    if p.pos != p.tokens.len() {
        return Err(ParseError::Expected {
            expected: "end of expression",
            at: p.at(),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_nested_products() {
        let x = parse_ratio("3*omega*(3*omega+4*b^2)/(128*a^4*b^2)").unwrap();
        let y = parse_ratio("(9*omega^2+12*b^2*omega)/(128*a^4*b^2)").unwrap();
        assert_eq!(x, y);
    }

    #[test]
    fn unary_minus_binds_the_whole_term() {
        let x = parse_ratio("-(3*omega-4*b^2)/(4*a*b)").unwrap();
        let y = parse_ratio("(4*b^2-3*omega)/(4*a*b)").unwrap();
        assert_eq!(x, y);
    }

    #[test]
    fn rejects_vanishing_denominator() {
        assert_eq!(parse_ratio("1/(a-a)"), Err(ParseError::ZeroDenominator));
        assert_eq!(parse_ratio("b/0"), Err(ParseError::ZeroDenominator));
    }

    #[test]
    fn rejects_trailing_garbage() {
        assert!(parse_ratio("3*omega )").is_err());
        assert!(parse_ratio("3$").is_err());
        assert!(parse_ratio("").is_err());
    }

    #[test]
    fn custom_parameter_names() {
        let x = parse_ratio("5*c5/(32*a^5)").unwrap();
        assert_eq!(x.to_string(), "5*c5/(32*a^5)");
    }
}
