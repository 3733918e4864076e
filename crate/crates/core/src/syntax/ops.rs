//! Operator table shared by the parser and the printer.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Assoc {
    Xfx,
    Xfy,
    Yfx,
    Fy,
    Fx,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct OpDef {
    pub priority: u16,
    pub assoc: Assoc,
}

impl OpDef {
    /// Maximum priority of the left and right operand.
    pub fn operand_limits(self) -> (u16, u16) {
        let p = self.priority;
        match self.assoc {
            Assoc::Xfx => (p - 1, p - 1),
            Assoc::Xfy => (p - 1, p),
            Assoc::Yfx => (p, p - 1),
            Assoc::Fy => (0, p),
            Assoc::Fx => (0, p - 1),
        }
    }
}

const fn op(priority: u16, assoc: Assoc) -> OpDef {
    OpDef { priority, assoc }
}

pub(crate) fn infix(name: &str) -> Option<OpDef> {
    use Assoc::*;
    Some(match name {
        ":-" => op(1200, Xfx),
        ";" => op(1100, Xfy),
        "->" => op(1050, Xfy),
        "," => op(1000, Xfy),
        "=" | "\\=" | "==" | "\\==" | "is" | "<" | ">" | "=<" | ">=" | "=:=" | "=\\=" | "@<"
        | "@>" | "@=<" | "@>=" | ":=" | "=.." => op(700, Xfx),
        "+" | "-" => op(500, Yfx),
        "*" | "/" | "//" | "mod" => op(400, Yfx),
        "::" | "@" => op(200, Xfx),
        "^" | ":" => op(200, Xfy),
        _ => return None,
    })
}

pub(crate) fn prefix(name: &str) -> Option<OpDef> {
    use Assoc::*;
    Some(match name {
        ":-" => op(1200, Fx),
        "\\+" | "not" => op(900, Fy),
        "-" | "+" | "@" => op(200, Fy),
        _ => return None,
    })
}

pub(crate) fn is_operator(name: &str) -> bool {
    infix(name).is_some() || prefix(name).is_some()
}
