//! Module expressions over the isotropy data.
//!
//! ```text
//! V    ::= term (('⊗' | 'tensor') term)*
//! term ::= ('Λ²' | 'wedge2') term | atom ('*' | '^*')*
//! atom ::= 'm' | 'h' | '1' | '(' V ')'
//! ```
//!
//! `⊗` is left associative, `Λ²` binds tighter than `⊗` and duals bind
//! tightest, so `Λ²m*⊗h` is `(Λ²(m*))⊗h`.

use crate::error::{Error, Result};
use crate::lie::{HModule, IsotropyData, Provenance};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModuleExpr {
    M,
    H,
    Trivial,
    Dual(Box<ModuleExpr>),
    Tensor(Box<ModuleExpr>, Box<ModuleExpr>),
    Wedge2(Box<ModuleExpr>),
}

impl ModuleExpr {
    pub fn parse(src: &str) -> Result<ModuleExpr> {
        let mut p = Parser { src, pos: 0 };
        let e = p.expr()?;
        p.skip_ws();
        if p.pos < src.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(e)
    }

    /// The module over `h` denoted by the expression.
    pub fn build(&self, data: &IsotropyData) -> HModule {
        match self {
            ModuleExpr::M => data.m_module().clone(),
            ModuleExpr::H => data.h_module(),
            ModuleExpr::Trivial => HModule::trivial(data.h(), 1),
            ModuleExpr::Dual(v) => v.build(data).dual(),
            ModuleExpr::Tensor(a, b) => a.build(data).tensor(&b.build(data)),
            ModuleExpr::Wedge2(v) => v.build(data).exterior_square(),
        }
    }

    pub fn provenance(&self) -> Provenance {
        match self {
            ModuleExpr::M => Provenance::M,
            ModuleExpr::H => Provenance::H,
            ModuleExpr::Trivial => Provenance::Trivial(1),
            ModuleExpr::Dual(v) => Provenance::Dual(Box::new(v.provenance())),
            ModuleExpr::Tensor(a, b) => Provenance::Tensor(Box::new(a.provenance()), Box::new(b.provenance())),
            ModuleExpr::Wedge2(v) => Provenance::Wedge2(Box::new(v.provenance())),
        }
    }
}

impl std::fmt::Display for ModuleExpr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.provenance())
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> Error {
        Error::ModuleExpr {
            message: message.to_string(),
            position: self.src[..self.pos].chars().count(),
        }
    }

    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    /// A keyword must not run into an identifier character.
    fn eat_word(&mut self, word: &str) -> bool {
        self.skip_ws();
        let rest = self.rest();
        if rest.starts_with(word) && !rest[word.len()..].starts_with(|c: char| c.is_ascii_alphanumeric() || c == '_') {
            self.pos += word.len();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<ModuleExpr> {
        let mut lhs = self.term()?;
        while self.eat("⊗") || self.eat_word("tensor") {
            let rhs = self.term()?;
            lhs = ModuleExpr::Tensor(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<ModuleExpr> {
        if self.eat("Λ²") || self.eat("Λ^2") || self.eat_word("wedge2") {
            return Ok(ModuleExpr::Wedge2(Box::new(self.term()?)));
        }
        let mut v = self.atom()?;
        while self.eat("^*") || self.eat("*") {
            v = ModuleExpr::Dual(Box::new(v));
        }
        Ok(v)
    }

    fn atom(&mut self) -> Result<ModuleExpr> {
        if self.eat("(") {
            let v = self.expr()?;
            if !self.eat(")") {
                return Err(self.error("expected ')'"));
            }
            return Ok(v);
        }
        if self.eat_word("m") {
            return Ok(ModuleExpr::M);
        }
        if self.eat_word("h") {
            return Ok(ModuleExpr::H);
        }
        if self.eat_word("1") {
            return Ok(ModuleExpr::Trivial);
        }
        self.skip_ws();
        if self.pos == self.src.len() {
            Err(self.error("unexpected end of expression, expected m, h, 1, Λ² or '('"))
        } else {
            Err(self.error("expected m, h, 1, Λ² or '('"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence_and_aliases() {
        let a = ModuleExpr::parse("Λ²m*⊗h").unwrap();
        let b = ModuleExpr::parse("wedge2 m^* tensor h").unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_string(), "Λ²(m*)⊗h");
        let c = ModuleExpr::parse("m ⊗ h ⊗ m*").unwrap();
        assert!(matches!(c, ModuleExpr::Tensor(ref l, _) if matches!(**l, ModuleExpr::Tensor(..))));
        assert_eq!(ModuleExpr::parse("(m⊗h)*").unwrap().to_string(), "(m⊗h)*");
    }

    #[test]
    fn errors_carry_positions() {
        match ModuleExpr::parse("m ⊗ q") {
            Err(Error::ModuleExpr { position, .. }) => assert_eq!(position, 4),
            other => panic!("{other:?}"),
        }
        assert!(ModuleExpr::parse("(m").is_err());
        assert!(ModuleExpr::parse("m h").is_err());
        assert!(ModuleExpr::parse("mm").is_err());
    }
}
