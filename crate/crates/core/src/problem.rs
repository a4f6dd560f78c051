//! Problem files.
//!
//! ```text
//! axiom <name> : <term>
//! def <name> : <term> := <term>
//! var <name> : <term>
//! hyp <name> : <term> (== | =) <term>
//! subsingleton <term> by <name>
//! goal <term> (== | =) <term>
//! ```
//!
//! One declaration per line; a line starting with whitespace continues the
//! previous one. `--` starts a comment. `axiom` and `def` extend the global
//! environment, `var` and `hyp` the local context. Exactly one `goal`.

use std::fmt;

use crate::equality::is_reserved;
use crate::flatten::EqKind;
use crate::kernel::{name, Name, Term};
use crate::syntax::{lex, print_term, ParseError, Parser, Tok, Token};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProblemError {
    #[error(transparent)]
    Syntax(#[from] ParseError),
    #[error("no goal")]
    MissingGoal,
    #[error("line {line}: second goal")]
    DuplicateGoal { line: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Item {
    Axiom { name: Name, ty: Term },
    Def { name: Name, ty: Term, value: Term },
    Var { name: Name, ty: Term },
    Hyp { name: Name, lhs: Term, rhs: Term, kind: EqKind },
    Subsingleton { ty: Term, proof: Name },
    Goal { lhs: Term, rhs: Term, kind: EqKind },
}

/// A parsed problem. Equality compares items only, not source lines.
#[derive(Clone, Debug)]
pub struct Problem {
    items: Vec<Item>,
    lines: Vec<usize>,
}

impl PartialEq for Problem {
    fn eq(&self, other: &Self) -> bool {
        self.items == other.items
    }
}

impl Eq for Problem {}

impl Problem {
    pub fn new(items: Vec<Item>) -> Result<Self, ProblemError> {
        let lines = (1..=items.len()).collect();
        let p = Problem { items, lines };
        p.check_goal()?;
        Ok(p)
    }

    fn check_goal(&self) -> Result<(), ProblemError> {
        let mut goals = self
            .items
            .iter()
            .zip(&self.lines)
            .filter(|(i, _)| matches!(i, Item::Goal { .. }));
        if goals.next().is_none() {
            return Err(ProblemError::MissingGoal);
        }
        match goals.next() {
            Some((_, &line)) => Err(ProblemError::DuplicateGoal { line }),
            None => Ok(()),
        }
    }

    pub fn items(&self) -> &[Item] {
        &self.items
    }

    /// Items paired with the line each starts on.
    pub fn located(&self) -> impl Iterator<Item = (usize, &Item)> {
        self.lines.iter().copied().zip(&self.items)
    }

    pub fn goal(&self) -> (&Term, &Term, EqKind) {
        self.items
            .iter()
            .find_map(|i| match i {
                Item::Goal { lhs, rhs, kind } => Some((lhs, rhs, *kind)),
                _ => None,
            })
            .expect("checked on construction")
    }

    pub fn hypotheses(&self) -> impl Iterator<Item = &Item> {
        self.items.iter().filter(|i| matches!(i, Item::Hyp { .. }))
    }
}

fn eq_symbol(kind: EqKind) -> &'static str {
    match kind {
        EqKind::Homogeneous => "=",
        EqKind::Heterogeneous => "==",
    }
}

impl fmt::Display for Item {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Item::Axiom { name, ty } => write!(f, "axiom {name} : {}", print_term(ty)),
            Item::Def { name, ty, value } => {
                write!(f, "def {name} : {} := {}", print_term(ty), print_term(value))
            }
            Item::Var { name, ty } => write!(f, "var {name} : {}", print_term(ty)),
            Item::Hyp { name, lhs, rhs, kind } => write!(
                f,
                "hyp {name} : {} {} {}",
                print_term(lhs),
                eq_symbol(*kind),
                print_term(rhs)
            ),
            Item::Subsingleton { ty, proof } => {
                write!(f, "subsingleton {} by {proof}", print_term(ty))
            }
            Item::Goal { lhs, rhs, kind } => {
                write!(f, "goal {} {} {}", print_term(lhs), eq_symbol(*kind), print_term(rhs))
            }
        }
    }
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for item in &self.items {
            writeln!(f, "{item}")?;
        }
        Ok(())
    }
}

/// User-facing names must not collide with generated or built-in ones.
fn check_name(p: &Parser, n: &str) -> Result<(), ParseError> {
    if n.contains('#') {
        return Err(p.error(format!("`#` is reserved for generated names: `{n}`")));
    }
    if is_reserved(n) {
        return Err(p.error(format!("`{n}` is a reserved name")));
    }
    Ok(())
}

fn declared_name(p: &mut Parser) -> Result<Name, ParseError> {
    match p.peek() {
        Some(Tok::Ident(n)) => {
            check_name(p, n)?;
            Ok(name(&p.ident()?))
        }
        _ => Ok(name(&p.ident()?)),
    }
}

fn equation(p: &mut Parser) -> Result<(Term, Term, EqKind), ParseError> {
    let lhs = p.term()?;
    let kind = match p.peek() {
        Some(Tok::HEq) => EqKind::Heterogeneous,
        Some(Tok::Eq) => EqKind::Homogeneous,
        _ => return Err(p.error("expected `==` or `=`")),
    };
    p.bump();
    let rhs = p.term()?;
    Ok((lhs, rhs, kind))
}

fn item(p: &mut Parser) -> Result<Item, ParseError> {
    let keyword = match p.peek() {
        Some(Tok::Ident(k)) => k.clone(),
        _ => return Err(p.error("expected a declaration keyword")),
    };
    let item = match keyword.as_str() {
        "axiom" | "var" => {
            p.bump();
            let n = declared_name(p)?;
            p.expect(Tok::Colon)?;
            let ty = p.term()?;
            if keyword == "axiom" {
                Item::Axiom { name: n, ty }
            } else {
                Item::Var { name: n, ty }
            }
        }
        "def" => {
            p.bump();
            let n = declared_name(p)?;
            p.expect(Tok::Colon)?;
            let ty = p.term()?;
            p.expect(Tok::ColonEq)?;
            let value = p.term()?;
            Item::Def { name: n, ty, value }
        }
        "hyp" => {
            p.bump();
            let n = declared_name(p)?;
            p.expect(Tok::Colon)?;
            let (lhs, rhs, kind) = equation(p)?;
            Item::Hyp { name: n, lhs, rhs, kind }
        }
        "subsingleton" => {
            p.bump();
            let ty = p.term()?;
            p.expect(Tok::By)?;
            let proof = name(&p.ident()?);
            Item::Subsingleton { ty, proof }
        }
        "goal" => {
            p.bump();
            let (lhs, rhs, kind) = equation(p)?;
            Item::Goal { lhs, rhs, kind }
        }
        other => return Err(p.error(format!("unknown declaration `{other}`"))),
    };
    p.expect_end()?;
    Ok(item)
}

/// Parse a problem file.
pub fn parse_problem(text: &str) -> Result<Problem, ProblemError> {
    // (first line, tokens, end position)
    let mut groups: Vec<(usize, Vec<Token>, (usize, usize))> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let toks = lex(raw, line, 1)?;
        if toks.is_empty() {
            continue;
        }
        let end = (line, raw.chars().count() + 1);
        let continues = raw.starts_with(char::is_whitespace);
        match groups.last_mut() {
            Some((_, ts, e)) if continues => {
                ts.extend(toks);
                *e = end;
            }
            _ if continues => {
                return Err(ParseError {
                    line,
                    col: 1,
                    msg: "continuation line without a declaration".into(),
                }
                .into())
            }
            _ => groups.push((line, toks, end)),
        }
    }
    let mut items = Vec::new();
    let mut lines = Vec::new();
    for (line, toks, end) in groups {
        let mut p = Parser::new(toks, end);
        items.push(item(&mut p)?);
        lines.push(line);
    }
    let problem = Problem { items, lines };
    problem.check_goal()?;
    Ok(problem)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_term;

    const RUNNING: &str = "\
var N : Type
var a : N
var b : N
axiom f : Pi (A : Type), A -> A
hyp e : a == b
goal f N a == f N b
";

    #[test]
    fn parses_the_running_example() {
        let p = parse_problem(RUNNING).unwrap();
        assert_eq!(p.items().len(), 6);
        assert_eq!(p.hypotheses().count(), 1);
        let (l, r, kind) = p.goal();
        assert_eq!(*l, parse_term("f N a").unwrap());
        assert_eq!(*r, parse_term("f N b").unwrap());
        assert_eq!(kind, EqKind::Heterogeneous);
    }

    #[test]
    fn round_trips_through_the_printer() {
        let p = parse_problem(RUNNING).unwrap();
        assert_eq!(parse_problem(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn continuation_lines_and_comments() {
        let src = "-- header\nvar A : Type\naxiom g : A ->\n   A -> A -- trailing\nvar x : A\ngoal g x x = g x x\n";
        let p = parse_problem(src).unwrap();
        assert_eq!(p.items().len(), 4);
        let lines: Vec<usize> = p.located().map(|(l, _)| l).collect();
        assert_eq!(lines, vec![2, 3, 5, 6]);
    }

    #[test]
    fn empty_goal_is_a_syntax_error() {
        let err = parse_problem("var A : Type\ngoal\n").unwrap_err();
        assert!(matches!(err, ProblemError::Syntax(ParseError { line: 2, .. })), "{err}");
    }

    #[test]
    fn goal_count_is_checked() {
        assert_eq!(parse_problem("var A : Type\n"), Err(ProblemError::MissingGoal));
        let two = "var A : Type\nvar a : A\ngoal a == a\ngoal a == a\n";
        assert_eq!(parse_problem(two), Err(ProblemError::DuplicateGoal { line: 4 }));
    }

    #[test]
    fn reserved_names_are_rejected() {
        for bad in ["var c#1 : Type", "var hrefl : Type", "axiom hcongr_3 : Type"] {
            let src = format!("{bad}\ngoal Type == Type\n");
            assert!(matches!(parse_problem(&src), Err(ProblemError::Syntax(_))), "{bad}");
        }
    }

    #[test]
    fn subsingleton_and_def_items() {
        let src = "axiom P : Type\naxiom pp : Pi (x y : P), eq P x y\nsubsingleton P by pp\n\
                   def id : Type -> Type := fun (X : Type), X\ngoal P = id P\n";
        let p = parse_problem(src).unwrap();
        assert!(matches!(&p.items()[2], Item::Subsingleton { proof, .. } if &**proof == "pp"));
        assert!(matches!(&p.items()[3], Item::Def { .. }));
        assert_eq!(parse_problem(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn missing_equality_sign() {
        let err = parse_problem("var A : Type\ngoal A A\n").unwrap_err();
        assert!(err.to_string().contains("expected `==` or `=`"), "{err}");
    }
}
