use crate::ast::Formula;

// Binding levels, loosest first.
const IFF: u8 = 0;
const IMPLIES: u8 = 1;
const OR: u8 = 2;
const AND: u8 = 3;
const UNTIL: u8 = 4;
const PREFIX: u8 = 5;

fn level(f: &Formula) -> u8 {
    match f {
        Formula::Iff(..) => IFF,
        Formula::Implies(..) => IMPLIES,
        Formula::Or(..) => OR,
        Formula::And(..) => AND,
        Formula::Until(..) => UNTIL,
        _ => PREFIX,
    }
}

/// Renders `f` in the ASCII grammar.
///
/// Parentheses are minimal except that binary operands of `->` and `<->`
/// are always wrapped, and a negated edge prints as `!(up a)`.
pub fn render(f: &Formula) -> String {
    let mut out = String::new();
    write(f, &mut out);
    out
}

fn write(f: &Formula, out: &mut String) {
    use Formula::*;
    match f {
        Atom(name) => out.push_str(name),
        True => out.push_str("true"),
        False => out.push_str("false"),
        Not(a) => {
            out.push('!');
            if matches!(**a, Rise(_) | Fall(_) | AnyEdge(_)) {
                group(a, out);
            } else {
                operand(a, level(a) < PREFIX, out);
            }
        }
        Next(a) => prefix("X", a, out),
        Always(a) => prefix("G", a, out),
        Eventually(a) => prefix("F", a, out),
        Rise(a) => prefix("up", a, out),
        Fall(a) => prefix("down", a, out),
        AnyEdge(a) => prefix("edge", a, out),
        Until(a, b) => infix(a, " U ", b, level(a) <= UNTIL, level(b) < UNTIL, out),
        And(a, b) => infix(a, " & ", b, level(a) < AND, level(b) <= AND, out),
        Or(a, b) => infix(a, " | ", b, level(a) < OR, level(b) <= OR, out),
        Implies(a, b) => infix(a, " -> ", b, level(a) < PREFIX, level(b) < PREFIX, out),
        Iff(a, b) => infix(a, " <-> ", b, level(a) < PREFIX, level(b) < PREFIX, out),
    }
}

fn prefix(word: &str, a: &Formula, out: &mut String) {
    out.push_str(word);
    if level(a) < PREFIX {
        group(a, out);
    } else {
        out.push(' ');
        write(a, out);
    }
}

fn infix(a: &Formula, op: &str, b: &Formula, wrap_a: bool, wrap_b: bool, out: &mut String) {
    operand(a, wrap_a, out);
    out.push_str(op);
    operand(b, wrap_b, out);
}

fn operand(f: &Formula, wrap: bool, out: &mut String) {
    if wrap {
        group(f, out);
    } else {
        write(f, out);
    }
}

fn group(f: &Formula, out: &mut String) {
    out.push('(');
    write(f, out);
    out.push(')');
}
