use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::{self, Write};

use super::smt::{literal, op_term, sort_term};
use crate::bv::BitvecConst;
use crate::ir::{NondetOrigin, OpId, Opcode, Program, ValueRef};
use crate::sort::Sort;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Logic {
    QfBv,
    QfAbv,
}

impl fmt::Display for Logic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Logic::QfBv => "QF_BV",
            Logic::QfAbv => "QF_ABV",
        })
    }
}

/// Which violations a script asks the solver for.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Mode {
    /// One property at a time; [`unroll_all`] builds one script per property.
    #[default]
    PerProperty,
    /// Any property at any frame.
    Combined,
}

/// The goal of a single script.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Target {
    Property(usize),
    Any,
}

/// What a declared constant stands for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VarSource {
    State(u32),
    Input(OpId),
}

/// A `define-fun` without parameters; `sort` is `None` for `Bool`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Definition {
    pub name: String,
    pub sort: Option<Sort>,
    pub body: String,
}

/// An unrolled verification condition.
///
/// Frame `f` has one constant `s{f}_{i}` per register and `n{f}_{id}` per
/// input. Intermediate values are named `i_{id}` (init block) and
/// `t{f}_{id}` (step block at frame `f`); `ok{f}` holds when every
/// constraint holds in frames `0..=f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VcScript {
    pub logic: Logic,
    pub declarations: Vec<(String, Sort)>,
    pub definitions: Vec<Definition>,
    pub assertions: Vec<String>,
    pub var_map: BTreeMap<(u32, VarSource), String>,
    pub bound: u32,
    pub target: Target,
    pub get_model: bool,
}

struct Unroller<'p> {
    p: &'p Program,
    vc: VcScript,
}

impl Unroller<'_> {
    fn declare(&mut self, frame: u32, source: VarSource, name: String, sort: Sort) {
        self.vc.declarations.push((name.clone(), sort));
        self.vc.var_map.insert((frame, source), name);
    }

    fn define(&mut self, name: String, sort: Option<Sort>, body: String) {
        self.vc.definitions.push(Definition { name, sort, body });
    }

    /// Name or literal of a value in the init block (`frame` is `None`) or
    /// in the step block at `frame`.
    fn term(&self, frame: Option<u32>, v: ValueRef) -> String {
        let id = match v {
            ValueRef::Arg(i) => return format!("s{}_{i}", frame.expect("arguments only exist in the step block")),
            ValueRef::Op(id) => id,
        };
        let op = self.p.op(id);
        match (&op.opcode, frame) {
            (Opcode::Constant(c), _) => literal(c),
            (Opcode::Nondet(NondetOrigin::StateSeed(i)), None) => format!("s0_{i}"),
            (Opcode::Nondet(NondetOrigin::StateSeed(i)), Some(f)) => format!("s{}_{i}", f + 1),
            (Opcode::Nondet(NondetOrigin::Input { .. }), Some(f)) => format!("n{f}_{}", id.0),
            (_, None) => format!("i_{}", id.0),
            (_, Some(f)) => format!("t{f}_{}", id.0),
        }
    }

    fn constant_of(&self, v: ValueRef) -> Option<&BitvecConst> {
        match v {
            ValueRef::Op(id) => match &self.p.op(id).opcode {
                Opcode::Constant(c) => Some(c),
                _ => None,
            },
            ValueRef::Arg(_) => None,
        }
    }

    fn body(&self, frame: Option<u32>, id: OpId) -> Option<String> {
        let op = self.p.op(id);
        let args: Vec<String> = op.operands.iter().map(|v| self.term(frame, *v)).collect();
        match op.opcode {
            Opcode::Op(o) => {
                let sorts: Vec<Sort> = op.operands.iter().map(|v| self.p.sort_of(*v)).collect();
                let amount = op.operands.get(1).and_then(|v| self.constant_of(*v));
                Some(op_term(o, &args, &sorts, amount))
            }
            Opcode::ArrayFill => Some(format!("((as const {}) {})", sort_term(op.sort), args[0])),
            _ => None,
        }
    }
}

fn is_seed(p: &Program, v: ValueRef) -> bool {
    matches!(v, ValueRef::Op(id) if matches!(p.op(id).opcode, Opcode::Nondet(NondetOrigin::StateSeed(_))))
}

/// Unrolls `p` over frames `0..=bound` and asks for a reachable violation
/// of `target`.
///
/// A bad condition at frame `f` only counts when every constraint holds at
/// frames `0..=f`.
pub fn unroll(p: &Program, bound: u32, target: Target) -> VcScript {
    let logic = if p.uses_arrays() { Logic::QfAbv } else { Logic::QfBv };
    let mut u = Unroller {
        p,
        vc: VcScript {
            logic,
            declarations: Vec::new(),
            definitions: Vec::new(),
            assertions: Vec::new(),
            var_map: BTreeMap::new(),
            bound,
            target,
            get_model: true,
        },
    };
    let inputs: Vec<OpId> = p.inputs().map(|op| op.id).collect();
    for f in 0..=bound {
        for (i, s) in p.states.iter().enumerate() {
            u.declare(f, VarSource::State(i as u32), format!("s{f}_{i}"), s.sort);
        }
        for &id in &inputs {
            u.declare(f, VarSource::Input(id), format!("n{f}_{}", id.0), p.op(id).sort);
        }
    }

    for &id in &p.init.ops {
        if let Some(body) = u.body(None, id) {
            u.define(format!("i_{}", id.0), Some(p.op(id).sort), body);
        }
    }
    for (i, &v) in p.init.branch.iter().enumerate() {
        if !is_seed(p, v) {
            let value = u.term(None, v);
            u.vc.assertions.push(format!("(= s0_{i} {value})"));
        }
    }

    let mut bad_terms: Vec<String> = Vec::new();
    for f in 0..=bound {
        let mut ok: Vec<String> = if f == 0 { Vec::new() } else { alloc::vec![format!("ok{}", f - 1)] };
        for &id in &p.step.ops {
            let op = p.op(id);
            match op.opcode {
                Opcode::Assume => {
                    ok.push(format!("(= {} #b1)", u.term(Some(f), op.operands[0])));
                }
                Opcode::AssertNot => {}
                _ => {
                    if let Some(body) = u.body(Some(f), id) {
                        u.define(format!("t{f}_{}", id.0), Some(op.sort), body);
                    }
                }
            }
        }
        let ok = match ok.len() {
            0 => String::from("true"),
            1 => ok.pop().unwrap_or_default(),
            _ => format!("(and {})", ok.join(" ")),
        };
        u.define(format!("ok{f}"), None, ok);
        for (j, prop) in p.properties.iter().enumerate() {
            if matches!(target, Target::Property(t) if t != j) {
                continue;
            }
            let cond = u.term(Some(f), p.op(prop.op).operands[0]);
            bad_terms.push(format!("(and ok{f} (= {cond} #b1))"));
        }
        if f < bound {
            for (i, &v) in p.step.branch.iter().enumerate() {
                if !is_seed(p, v) {
                    let value = u.term(Some(f), v);
                    u.vc.assertions.push(format!("(= s{}_{i} {value})", f + 1));
                }
            }
        }
    }
    let goal = match bad_terms.len() {
        0 => String::from("false"),
        1 => bad_terms.pop().unwrap_or_default(),
        _ => format!("(or {})", bad_terms.join(" ")),
    };
    u.vc.assertions.push(goal);
    u.vc
}

/// The scripts `mode` calls for: one per property, or a single combined one.
pub fn unroll_all(p: &Program, bound: u32, mode: Mode) -> Vec<VcScript> {
    match mode {
        Mode::PerProperty => (0..p.properties.len()).map(|j| unroll(p, bound, Target::Property(j))).collect(),
        Mode::Combined => alloc::vec![unroll(p, bound, Target::Any)],
    }
}

/// Renders a script as SMT-LIB 2 text ending in `(check-sat)`, plus
/// `(get-model)` when the script asks for one.
pub fn emit_smtlib(vc: &VcScript) -> String {
    let mut out = String::new();
    if vc.get_model {
        out.push_str("(set-option :produce-models true)\n");
    }
    let _ = writeln!(out, "(set-logic {})", vc.logic);
    for (name, sort) in &vc.declarations {
        let _ = writeln!(out, "(declare-const {name} {})", sort_term(*sort));
    }
    for d in &vc.definitions {
        let sort = d.sort.map(sort_term).unwrap_or_else(|| String::from("Bool"));
        let _ = writeln!(out, "(define-fun {} () {sort} {})", d.name, d.body);
    }
    for a in &vc.assertions {
        let _ = writeln!(out, "(assert {a})");
    }
    out.push_str("(check-sat)\n");
    if vc.get_model {
        out.push_str("(get-model)\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::btor2::{parse_btor2, typecheck};
    use crate::testdata::{COUNTER, FACTORIAL};
    use crate::translate::to_ir;

    fn program(text: &str) -> Program {
        to_ir(&typecheck(&parse_btor2(text, "t").unwrap()).unwrap())
    }

    #[test]
    fn counter_frames() {
        let p = program(COUNTER);
        let vc = unroll(&p, 15, Target::Property(0));
        let states = vc.declarations.iter().filter(|(n, _)| n.starts_with('s') && n.ends_with("_0")).count();
        assert_eq!(states, 16);
        assert_eq!(emit_smtlib(&vc).matches("(check-sat)").count(), 1);
    }

    #[test]
    fn zero_bound_has_no_transitions() {
        let vc = unroll(&program(COUNTER), 0, Target::Property(0));
        // the init equation and the goal
        assert_eq!(vc.assertions.len(), 2);
        assert!(vc.assertions.iter().all(|a| !a.contains("s1_")));
    }

    #[test]
    fn counter_text() {
        let text = emit_smtlib(&unroll(&program(COUNTER), 2, Target::Property(0)));
        assert!(text.contains("(set-logic QF_BV)"));
        assert_eq!(text.matches("(declare-const s").count(), 3);
    }

    #[test]
    fn factorial_per_property() {
        let scripts = unroll_all(&program(FACTORIAL), 20, Mode::PerProperty);
        assert_eq!(scripts.len(), 2);
        assert_eq!(scripts[0].target, Target::Property(0));
        assert_eq!(scripts[1].target, Target::Property(1));
    }

    #[test]
    fn arrays_select_qf_abv() {
        let text = "1 sort bitvec 2\n2 sort bitvec 4\n3 sort array 1 2\n4 state 3 mem\n5 zero 2\n6 init 3 4 5\n";
        let vc = unroll(&program(text), 1, Target::Any);
        assert_eq!(vc.logic, Logic::QfAbv);
        assert!(emit_smtlib(&vc).contains("(as const (Array (_ BitVec 2) (_ BitVec 4)))"));
    }
}
