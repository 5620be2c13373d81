use alloc::string::String;
use core::fmt::Write;

use super::program::{NondetOrigin, OpNode, Opcode, Program, ValueRef};

fn operands(out: &mut String, vs: &[ValueRef]) {
    for (i, v) in vs.iter().enumerate() {
        let _ = write!(out, "{}{v}", if i == 0 { " " } else { ", " });
    }
}

fn op_line(out: &mut String, p: &Program, op: &OpNode) {
    out.push_str("  ");
    match &op.opcode {
        Opcode::AssertNot => {
            let _ = write!(out, "assert_not {}", op.operands[0]);
            if let Some(index) = p.properties.iter().position(|prop| prop.op == op.id) {
                let _ = write!(out, "  ; property {index}");
                if let Some(src) = p.properties[index].source {
                    let _ = write!(out, " (bad {src})");
                }
            }
        }
        Opcode::Assume => {
            let _ = write!(out, "assume {}", op.operands[0]);
        }
        opcode => {
            let _ = write!(out, "{} = ", op.id);
            match opcode {
                Opcode::Op(o) => {
                    let _ = write!(out, "{o}");
                    operands(out, &op.operands);
                }
                Opcode::Constant(c) => {
                    let _ = write!(out, "constant {}", c.to_decimal());
                }
                Opcode::Nondet(NondetOrigin::Input { .. }) => out.push_str("nondet input"),
                Opcode::Nondet(NondetOrigin::StateSeed(s)) => {
                    let _ = write!(out, "nondet state %s{s}");
                }
                Opcode::ArrayFill => {
                    out.push_str("array_fill");
                    operands(out, &op.operands);
                }
                Opcode::AssertNot | Opcode::Assume => unreachable!(),
            }
            let _ = write!(out, " : {}", op.sort);
        }
    }
    if let Some(sym) = &op.symbol {
        let _ = write!(out, "  // {sym}");
    }
    out.push('\n');
}

/// Human-readable dump of a program. Deterministic, but not meant to be
/// parsed back.
pub fn pretty_print_ir(p: &Program) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "program: {} states, {} properties", p.states.len(), p.properties.len());
    if p.states.is_empty() && p.init.ops.is_empty() && p.step.ops.is_empty() {
        return out;
    }
    out.push_str("^init:\n");
    for op in p.init_ops() {
        op_line(&mut out, p, op);
    }
    out.push_str("  br ^step(");
    let _ = writeln!(out, "{})", join(&p.init.branch));
    out.push_str("^step(");
    for (i, s) in p.states.iter().enumerate() {
        let _ = write!(out, "{}%s{i}: {}", if i == 0 { "" } else { ", " }, s.sort);
        if let Some(sym) = &s.symbol {
            let _ = write!(out, " {sym}");
        }
    }
    out.push_str("):\n");
    for op in p.step_ops() {
        op_line(&mut out, p, op);
    }
    for o in &p.outputs {
        let _ = writeln!(
            out,
            "  output {}{}",
            o.value,
            o.symbol.as_deref().map(|s| alloc::format!("  // {s}")).unwrap_or_default()
        );
    }
    let _ = writeln!(out, "  br ^step({})", join(&p.step.branch));
    out
}

fn join(vs: &[ValueRef]) -> String {
    let mut s = String::new();
    for (i, v) in vs.iter().enumerate() {
        let _ = write!(s, "{}{v}", if i == 0 { "" } else { ", " });
    }
    s
}
