use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use core::fmt::Write;

use crate::btor2::{DefKind, NodeId, Operand, TypedSystem};

struct Canon<'a> {
    sys: &'a TypedSystem,
    numbers: BTreeMap<Operand, usize>,
    keys: BTreeMap<String, usize>,
    out: String,
}

impl Canon<'_> {
    fn intern(&mut self, key: String) -> usize {
        if let Some(n) = self.keys.get(&key) {
            return *n;
        }
        let n = self.keys.len();
        let _ = writeln!(self.out, "{n} {key}");
        self.keys.insert(key, n);
        n
    }

    fn number(&mut self, root: Operand) -> usize {
        let mut stack = vec![(root, false)];
        while let Some((o, expanded)) = stack.pop() {
            if self.numbers.contains_key(&o) {
                continue;
            }
            if o.negated {
                let plain = Operand { node: o.node, negated: false };
                match self.numbers.get(&plain) {
                    Some(&x) => {
                        let n = self.intern(format!("not bv1 {x}"));
                        self.numbers.insert(o, n);
                    }
                    None => stack.extend([(o, false), (plain, false)]),
                }
                continue;
            }
            let def = &self.sys.defs[&o.node];
            let key = match &def.kind {
                DefKind::Input | DefKind::State => unreachable!("inputs and states are numbered up front"),
                DefKind::Const(c) => format!("const {} {}", def.sort, c.to_decimal()),
                DefKind::Op(op) if expanded => {
                    let mut key = format!("{op} {}", def.sort);
                    for a in &def.operands {
                        let _ = write!(key, " {}", self.numbers[a]);
                    }
                    key
                }
                DefKind::Op(_) => {
                    stack.push((o, true));
                    stack.extend(def.operands.iter().rev().map(|a| (*a, false)));
                    continue;
                }
            };
            let n = self.intern(key);
            self.numbers.insert(o, n);
        }
        self.numbers[&root]
    }

    fn leaf(&mut self, id: NodeId, key: String) {
        let n = self.intern(key);
        self.numbers.insert(Operand { node: id, negated: false }, n);
    }
}

/// Structural text form of a system, independent of ids and symbols.
///
/// Nodes are numbered in depth-first order from the states, inputs, init and
/// next values, constraints, bad properties and outputs, in that order.
/// Identical subterms share one number and a negated operand is written as
/// a `not` node, so two systems print the same text exactly when they
/// describe the same circuit.
pub fn canonical_form(sys: &TypedSystem) -> String {
    let mut c = Canon { sys, numbers: BTreeMap::new(), keys: BTreeMap::new(), out: String::new() };
    for (i, &id) in sys.states.iter().enumerate() {
        c.leaf(id, format!("state {i} {}", sys.sort_of(id)));
    }
    for (i, &id) in sys.inputs.iter().enumerate() {
        c.leaf(id, format!("input {i} {}", sys.sort_of(id)));
    }
    let mut roots = String::new();
    for (i, &state) in sys.states.iter().enumerate() {
        if let Some(init) = sys.init_of(state) {
            let n = c.number(init.value);
            let _ = writeln!(roots, "init {i} {n}{}", if init.fill { " fill" } else { "" });
        }
        if let Some(next) = sys.next_of(state) {
            let n = c.number(next.value);
            let _ = writeln!(roots, "next {i} {n}");
        }
    }
    for (kind, lines) in [("constraint", &sys.constraints), ("bad", &sys.bads), ("output", &sys.outputs)] {
        for &line in lines {
            let n = c.number(sys.condition(line).value);
            let _ = writeln!(roots, "{kind} {n}");
        }
    }
    c.out.push_str(&roots);
    c.out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::btor2::{parse_btor2, typecheck};
    use crate::testdata::{COUNTER, FACTORIAL};

    fn canon(text: &str) -> String {
        canonical_form(&typecheck(&parse_btor2(text, "t").unwrap()).unwrap())
    }

    #[test]
    fn renumbering_and_symbols_do_not_matter() {
        let renumbered = "\
10 sort bitvec 4
20 sort bitvec 1
30 state 10 count
40 zero 10
50 init 10 30 40
60 one 10
70 add 10 30 60
80 next 10 30 70
90 ones 10
100 eq 20 30 90
110 bad 100
";
        assert_eq!(canon(COUNTER), canon(renumbered));
    }

    #[test]
    fn different_circuits_differ() {
        assert_ne!(canon(COUNTER), canon(FACTORIAL));
    }

    #[test]
    fn negation_matches_not() {
        let a = "1 sort bitvec 1\n2 input 1\n3 bad -2\n";
        let b = "1 sort bitvec 1\n2 input 1\n3 not 1 2\n4 bad 3\n";
        assert_eq!(canon(a), canon(b));
    }
}
