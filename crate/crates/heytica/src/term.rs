//! Terms over the Heyting signature {0, 1, ∧, ∨, →} with variables x, y,
//! written as S-expressions: `(-> x 0)`, `(and x (or y 1))`.

use crate::error::{Error, Result};
use crate::heyting::{Heyting, UpSet};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Zero,
    One,
    X,
    Y,
    And(Box<Term>, Box<Term>),
    Or(Box<Term>, Box<Term>),
    Imp(Box<Term>, Box<Term>),
}

impl Term {
    /// Replace every constant-0 leaf by the variable y.
    pub fn star(&self) -> Term {
        match self {
            Term::Zero => Term::Y,
            Term::One | Term::X | Term::Y => self.clone(),
            Term::And(a, b) => Term::And(Box::new(a.star()), Box::new(b.star())),
            Term::Or(a, b) => Term::Or(Box::new(a.star()), Box::new(b.star())),
            Term::Imp(a, b) => Term::Imp(Box::new(a.star()), Box::new(b.star())),
        }
    }

    pub fn eval(&self, h: &Heyting, x: Option<UpSet>, y: Option<UpSet>) -> Result<UpSet> {
        Ok(match self {
            Term::Zero => h.zero(),
            Term::One => h.one(),
            Term::X => x.ok_or(Error::UnboundVariable('x'))?,
            Term::Y => y.ok_or(Error::UnboundVariable('y'))?,
            Term::And(a, b) => h.meet(a.eval(h, x, y)?, b.eval(h, x, y)?),
            Term::Or(a, b) => h.join(a.eval(h, x, y)?, b.eval(h, x, y)?),
            Term::Imp(a, b) => h.imp(a.eval(h, x, y)?, b.eval(h, x, y)?),
        })
    }

    pub fn uses_only_x(&self) -> bool {
        match self {
            Term::Y => false,
            Term::Zero | Term::One | Term::X => true,
            Term::And(a, b) | Term::Or(a, b) | Term::Imp(a, b) => {
                a.uses_only_x() && b.uses_only_x()
            }
        }
    }

    pub fn parse(s: &str) -> Result<Term> {
        let tokens: Vec<String> = s
            .replace('(', " ( ")
            .replace(')', " ) ")
            .split_whitespace()
            .map(str::to_owned)
            .collect();
        let (t, rest) = parse_tokens(&tokens)?;
        if !rest.is_empty() {
            return Err(Error::Format {
                line: 0,
                detail: format!("trailing tokens after term: {rest:?}"),
            });
        }
        Ok(t)
    }

    /// Enumerate all terms in variable x up to a syntactic depth (oracle
    /// input for the star-transform identity tests).
    pub fn enumerate_x(depth: usize) -> Vec<Term> {
        let mut layers: Vec<Vec<Term>> = vec![vec![Term::Zero, Term::One, Term::X]];
        for d in 1..=depth {
            let mut next = Vec::new();
            let prev: Vec<Term> = layers.iter().flatten().cloned().collect();
            for a in &prev {
                for b in &prev {
                    next.push(Term::And(Box::new(a.clone()), Box::new(b.clone())));
                    next.push(Term::Or(Box::new(a.clone()), Box::new(b.clone())));
                    next.push(Term::Imp(Box::new(a.clone()), Box::new(b.clone())));
                }
            }
            let _ = d;
            layers.push(next);
        }
        layers.into_iter().flatten().collect()
    }
}

fn parse_tokens(tokens: &[String]) -> Result<(Term, &[String])> {
    let bad = |detail: String| Error::Format { line: 0, detail };
    match tokens.split_first() {
        None => Err(bad("empty term".into())),
        Some((tok, rest)) => match tok.as_str() {
            "0" => Ok((Term::Zero, rest)),
            "1" => Ok((Term::One, rest)),
            "x" => Ok((Term::X, rest)),
            "y" => Ok((Term::Y, rest)),
            "(" => {
                let (op, rest) = rest
                    .split_first()
                    .ok_or_else(|| bad("missing operator".into()))?;
                let (a, rest) = parse_tokens(rest)?;
                let (b, rest) = parse_tokens(rest)?;
                let (close, rest) = rest
                    .split_first()
                    .ok_or_else(|| bad("missing )".into()))?;
                if close != ")" {
                    return Err(bad(format!("expected ), got {close}")));
                }
                let t = match op.as_str() {
                    "and" | "^" => Term::And(Box::new(a), Box::new(b)),
                    "or" | "v" => Term::Or(Box::new(a), Box::new(b)),
                    "->" | "imp" => Term::Imp(Box::new(a), Box::new(b)),
                    other => return Err(bad(format!("unknown operator {other}"))),
                };
                Ok((t, rest))
            }
            other => Err(bad(format!("unexpected token {other}"))),
        },
    }
}

impl std::fmt::Display for Term {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Term::Zero => write!(f, "0"),
            Term::One => write!(f, "1"),
            Term::X => write!(f, "x"),
            Term::Y => write!(f, "y"),
            Term::And(a, b) => write!(f, "(and {a} {b})"),
            Term::Or(a, b) => write!(f, "(or {a} {b})"),
            Term::Imp(a, b) => write!(f, "(-> {a} {b})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn star_examples() {
        assert_eq!(Term::Zero.star(), Term::Y);
        assert_eq!(Term::parse("(-> x 0)").unwrap().star(), Term::parse("(-> x y)").unwrap());
        assert_eq!(
            Term::parse("(-> (-> x 0) 0)").unwrap().star(),
            Term::parse("(-> (-> x y) y)").unwrap()
        );
    }

    #[test]
    fn eval_examples() {
        let c3 = Heyting::c3();
        let a = UpSet(c3.dual().up_of(1));
        let not_x = Term::parse("(-> x 0)").unwrap();
        assert_eq!(not_x.eval(&c3, Some(a), None).unwrap(), c3.zero());
        assert_eq!(Term::One.eval(&c3, None, None).unwrap(), c3.one());
        assert!(matches!(
            Term::X.eval(&c3, None, None),
            Err(Error::UnboundVariable('x'))
        ));
        // t* of ¬x evaluated at (x, 0_H) in H* equals the old value of ¬x
        let (star_alg, emb) = c3.add_bottom();
        let v = not_x
            .star()
            .eval(&star_alg, Some(emb.apply(a)), Some(emb.old_zero()))
            .unwrap();
        assert_eq!(v, emb.apply(c3.neg(a)));
    }

    #[test]
    fn parse_round_trip() {
        for s in ["0", "x", "(and x y)", "(-> (or x 0) (and 1 y))"] {
            let t = Term::parse(s).unwrap();
            assert_eq!(Term::parse(&t.to_string()).unwrap(), t);
        }
        assert!(Term::parse("(frob x y)").is_err());
        assert!(Term::parse("(and x)").is_err());
    }
}
