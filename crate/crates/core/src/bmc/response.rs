use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cell::Cell;
use core::fmt;

use num_bigint::BigUint;
use num_traits::Num;
use thiserror::Error;

use crate::bv::BitvecConst;
use crate::interp::{ArrayValue, Value};
use crate::sort::Sort;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ResponseError {
    #[error("unparseable solver status: {0:?}")]
    Status(String),
    #[error("malformed s-expression: {0}")]
    Syntax(String),
    #[error("model value of `{name}`: {detail}")]
    Value { name: String, detail: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SExpr {
    Atom(String),
    List(Vec<SExpr>),
}

impl SExpr {
    fn atom(&self) -> Option<&str> {
        match self {
            SExpr::Atom(a) => Some(a),
            SExpr::List(_) => None,
        }
    }

    fn list(&self) -> Option<&[SExpr]> {
        match self {
            SExpr::List(l) => Some(l),
            SExpr::Atom(_) => None,
        }
    }
}

impl fmt::Display for SExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SExpr::Atom(a) => f.write_str(a),
            SExpr::List(items) => {
                f.write_str("(")?;
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{item}")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// Parses a sequence of s-expressions. Handles `;` comments, string
/// literals and `|quoted|` symbols.
pub fn parse_sexprs(text: &str) -> Result<Vec<SExpr>, ResponseError> {
    let mut stack: Vec<Vec<SExpr>> = alloc::vec![Vec::new()];
    let mut chars = text.char_indices().peekable();
    while let Some((start, c)) = chars.next() {
        match c {
            '(' => stack.push(Vec::new()),
            ')' => {
                let done = stack
                    .pop()
                    .filter(|_| !stack.is_empty())
                    .ok_or_else(|| ResponseError::Syntax(format!("unbalanced `)` at byte {start}")))?;
                stack.last_mut().expect("outer level").push(SExpr::List(done));
            }
            ';' => while chars.next_if(|(_, c)| *c != '\n').is_some() {},
            c if c.is_whitespace() => {}
            '"' | '|' => {
                let mut end = None;
                while let Some((i, d)) = chars.next() {
                    if d == c {
                        if c == '"' && chars.next_if(|(_, e)| *e == '"').is_some() {
                            continue;
                        }
                        end = Some(i);
                        break;
                    }
                }
                let end = end.ok_or_else(|| ResponseError::Syntax(format!("unterminated {c} at byte {start}")))?;
                let token = if c == '|' { &text[start + 1..end] } else { &text[start..=end] };
                stack.last_mut().expect("outer level").push(SExpr::Atom(token.to_string()));
            }
            _ => {
                let mut end = start + c.len_utf8();
                while let Some((i, d)) = chars.next_if(|(_, d)| !d.is_whitespace() && !"();\"|".contains(*d)) {
                    end = i + d.len_utf8();
                }
                stack.last_mut().expect("outer level").push(SExpr::Atom(text[start..end].to_string()));
            }
        }
    }
    if stack.len() != 1 {
        return Err(ResponseError::Syntax(String::from("unbalanced `(`")));
    }
    Ok(stack.pop().unwrap_or_default())
}

/// Values of the constants in a solver model.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Model {
    pub values: BTreeMap<String, Value>,
    /// Definitions whose value could not be computed, with the reason.
    /// Solvers also print helper definitions built from terms this reader
    /// does not evaluate.
    pub skipped: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolverResponse {
    Sat(Model),
    Unsat,
    /// `unknown`, `timeout` or a similar non-answer.
    Unknown(String),
}

/// Reads the first status token and, after `sat`, the model that follows.
pub fn parse_solver_output(text: &str) -> Result<SolverResponse, ResponseError> {
    let items = parse_sexprs(text).map_err(|_| ResponseError::Status(first_line(text)))?;
    let status = items.first().and_then(SExpr::atom).ok_or_else(|| ResponseError::Status(first_line(text)))?;
    match status {
        "sat" => {
            let model = match items.get(1) {
                Some(m) => parse_model(m)?,
                None => Model::default(),
            };
            Ok(SolverResponse::Sat(model))
        }
        "unsat" => Ok(SolverResponse::Unsat),
        "unknown" | "timeout" => Ok(SolverResponse::Unknown(String::from(status))),
        other => Err(ResponseError::Status(String::from(other))),
    }
}

fn first_line(text: &str) -> String {
    text.lines().next().unwrap_or("").trim().to_string()
}

struct Function<'a> {
    params: Vec<(String, Sort)>,
    body: &'a SExpr,
}

/// Parses `(model (define-fun ...) ...)` or `((define-fun ...) ...)`.
///
/// A value of the wrong sort is an error; a value that cannot be evaluated
/// is recorded in [`Model::skipped`].
pub fn parse_model(expr: &SExpr) -> Result<Model, ResponseError> {
    let syntax = || ResponseError::Syntax(format!("expected a model, found {expr}"));
    let mut items = expr.list().ok_or_else(syntax)?;
    if items.first().and_then(SExpr::atom) == Some("model") {
        items = &items[1..];
    }
    let mut constants = Vec::new();
    let mut functions = BTreeMap::new();
    for item in items {
        let parts = item.list().ok_or_else(syntax)?;
        if parts.first().and_then(SExpr::atom) != Some("define-fun") || parts.len() != 5 {
            continue;
        }
        let name = parts[1].atom().ok_or_else(syntax)?.to_string();
        let params = parts[2].list().ok_or_else(syntax)?;
        let Ok(sort) = parse_sort(&parts[3]) else { continue };
        if params.is_empty() {
            constants.push((name, sort, &parts[4]));
        } else {
            let params = params
                .iter()
                .map(|p| {
                    let pair = p.list().filter(|l| l.len() == 2).ok_or_else(syntax)?;
                    Ok((pair[0].atom().ok_or_else(syntax)?.to_string(), parse_sort(&pair[1])?))
                })
                .collect::<Result<Vec<_>, ResponseError>>()?;
            functions.insert(name, Function { params, body: &parts[4] });
        }
    }
    let eval = Evaluator {
        functions: &functions,
        constants: constants.iter().map(|(n, s, b)| (n.as_str(), (*s, *b))).collect(),
        depth: Cell::new(0),
    };
    let mut model = Model::default();
    for (name, sort, body) in &constants {
        let (name, sort) = (name.clone(), *sort);
        let value = match eval.eval(body, &BTreeMap::new(), Some(sort)) {
            Ok(v) => v,
            Err(detail) => {
                model.skipped.push((name, detail));
                continue;
            }
        };
        if value.sort() != sort {
            return Err(ResponseError::Value { name, detail: format!("has sort {}, declared {sort}", value.sort()) });
        }
        model.values.insert(name, value);
    }
    Ok(model)
}

fn parse_sort(e: &SExpr) -> Result<Sort, ResponseError> {
    let bad = || ResponseError::Syntax(format!("unsupported sort {e}"));
    let items = e.list().ok_or_else(bad)?;
    match items {
        [SExpr::Atom(u), SExpr::Atom(bv), SExpr::Atom(w)] if u == "_" && bv == "BitVec" => {
            Ok(Sort::Bitvec(w.parse().map_err(|_| bad())?))
        }
        [SExpr::Atom(a), i, e] if a == "Array" => match (parse_sort(i)?, parse_sort(e)?) {
            (Sort::Bitvec(index), Sort::Bitvec(element)) => Ok(Sort::Array { index, element }),
            _ => Err(bad()),
        },
        _ => Err(bad()),
    }
}

fn parse_literal(a: &str) -> Option<BitvecConst> {
    if let Some(bits) = a.strip_prefix("#b") {
        return BitvecConst::from_binary(bits);
    }
    let hex = a.strip_prefix("#x")?;
    if hex.is_empty() {
        return None;
    }
    let value = BigUint::from_str_radix(hex, 16).ok()?;
    Some(BitvecConst::new(4 * hex.len() as u32, value))
}

/// Largest index width whose arrays are rebuilt point by point from a
/// function model.
const MAX_ENUMERATED_INDEX: u32 = 16;

/// Nesting limit when constants are defined in terms of each other.
const MAX_DEPTH: u32 = 256;

struct Evaluator<'a, 'b> {
    functions: &'a BTreeMap<String, Function<'b>>,
    constants: BTreeMap<&'a str, (Sort, &'b SExpr)>,
    depth: Cell<u32>,
}

type Env = BTreeMap<String, Value>;

impl Evaluator<'_, '_> {
    fn eval(&self, e: &SExpr, env: &Env, expected: Option<Sort>) -> Result<Value, String> {
        match e {
            SExpr::Atom(a) => {
                if let Some(v) = env.get(a.as_str()) {
                    return Ok(v.clone());
                }
                match a.as_str() {
                    "true" => Ok(Value::Bv(BitvecConst::from_bool(true))),
                    "false" => Ok(Value::Bv(BitvecConst::from_bool(false))),
                    _ => {
                        if let Some(v) = parse_literal(a) {
                            return Ok(Value::Bv(v));
                        }
                        let Some(&(sort, body)) = self.constants.get(a.as_str()) else {
                            return Err(format!("undefined name `{a}`"));
                        };
                        let depth = self.depth.get();
                        if depth >= MAX_DEPTH {
                            return Err(format!("definition of `{a}` nests too deeply"));
                        }
                        self.depth.set(depth + 1);
                        let v = self.eval(body, &Env::new(), Some(sort));
                        self.depth.set(depth);
                        v
                    }
                }
            }
            SExpr::List(items) => self.eval_list(e, items, env, expected),
        }
    }

    fn bv(&self, e: &SExpr, env: &Env) -> Result<BitvecConst, String> {
        match self.eval(e, env, None)? {
            Value::Bv(b) => Ok(b),
            Value::Array(_) => Err(format!("expected a bitvector, found array term {e}")),
        }
    }

    fn array(&self, e: &SExpr, env: &Env, expected: Option<Sort>) -> Result<ArrayValue, String> {
        match self.eval(e, env, expected)? {
            Value::Array(a) => Ok(a),
            Value::Bv(_) => Err(format!("expected an array, found {e}")),
        }
    }

    fn eval_list(&self, e: &SExpr, items: &[SExpr], env: &Env, expected: Option<Sort>) -> Result<Value, String> {
        let unsupported = || format!("unsupported term {e}");
        let head = items.first().ok_or_else(unsupported)?;
        if let Some(parts) = head.list() {
            // ((as const S) v)
            if let [SExpr::Atom(as_), SExpr::Atom(c), sort] = parts {
                if as_ == "as" && c == "const" && items.len() == 2 {
                    let Sort::Array { index, element } = parse_sort(sort).map_err(|e| format!("{e}"))? else {
                        return Err(unsupported());
                    };
                    let v = self.bv(&items[1], env)?;
                    if v.width() != element {
                        return Err(format!("element width {} in {e}", v.width()));
                    }
                    return Ok(Value::Array(ArrayValue::filled(index, v)));
                }
            }
            return Err(unsupported());
        }
        let head = head.atom().unwrap_or_default();
        let args = &items[1..];
        match (head, args) {
            ("_", [SExpr::Atom(v), SExpr::Atom(w)]) if v.starts_with("bv") => {
                let value: BigUint = v[2..].parse().map_err(|_| unsupported())?;
                let width: u32 = w.parse().map_err(|_| unsupported())?;
                if width == 0 {
                    return Err(unsupported());
                }
                Ok(Value::Bv(BitvecConst::new(width, value)))
            }
            ("_", [SExpr::Atom(k), SExpr::Atom(f)]) if k == "as-array" => {
                let func = self.functions.get(f.as_str()).ok_or_else(|| format!("unknown function `{f}`"))?;
                self.tabulate(func, env, expected)
            }
            ("lambda", [SExpr::List(params), body]) => {
                let params = params
                    .iter()
                    .map(|p| match p.list() {
                        Some([SExpr::Atom(n), s]) => Ok((n.clone(), parse_sort(s).map_err(|e| format!("{e}"))?)),
                        _ => Err(unsupported()),
                    })
                    .collect::<Result<Vec<_>, String>>()?;
                self.tabulate(&Function { params, body }, env, expected)
            }
            ("let", [SExpr::List(bindings), body]) => {
                let mut inner = env.clone();
                for b in bindings {
                    let Some([SExpr::Atom(n), t]) = b.list() else { return Err(unsupported()) };
                    inner.insert(n.clone(), self.eval(t, env, None)?);
                }
                self.eval(body, &inner, expected)
            }
            ("ite", [c, t, f]) => {
                let c = self.bv(c, env)?;
                self.eval(if c.is_true() { t } else { f }, env, expected)
            }
            ("=", [a, b]) => {
                let a = self.eval(a, env, None)?;
                let b = self.eval(b, env, None)?;
                Ok(Value::Bv(BitvecConst::from_bool(a == b)))
            }
            ("not", [a]) => Ok(Value::Bv(self.bv(a, env)?.not())),
            ("and" | "or", _) => {
                let mut acc = head == "and";
                for a in args {
                    let v = self.bv(a, env)?.is_true();
                    acc = if head == "and" { acc && v } else { acc || v };
                }
                Ok(Value::Bv(BitvecConst::from_bool(acc)))
            }
            ("store", [a, i, v]) => {
                let a = self.array(a, env, expected)?;
                Ok(Value::Array(a.write(&self.bv(i, env)?, self.bv(v, env)?)))
            }
            ("select", [a, i]) => Ok(Value::Bv(self.array(a, env, None)?.read(&self.bv(i, env)?))),
            _ => {
                if let Some(func) = self.functions.get(head) {
                    let mut inner = env.clone();
                    for ((n, _), a) in func.params.iter().zip(args) {
                        inner.insert(n.clone(), self.eval(a, env, None)?);
                    }
                    return self.eval(func.body, &inner, expected);
                }
                Err(unsupported())
            }
        }
    }

    /// Array given by a one-parameter function, evaluated at every index.
    fn tabulate(&self, func: &Function<'_>, env: &Env, expected: Option<Sort>) -> Result<Value, String> {
        let [(param, Sort::Bitvec(index))] = func.params.as_slice() else {
            return Err(String::from("array function must take one bitvector parameter"));
        };
        if *index > MAX_ENUMERATED_INDEX {
            return Err(format!("array function over {index}-bit indices is too large to tabulate"));
        }
        let element_sort = match expected {
            Some(Sort::Array { element, .. }) => Some(Sort::Bitvec(element)),
            _ => None,
        };
        let mut inner = env.clone();
        let mut at = |i: u64| -> Result<BitvecConst, String> {
            inner.insert(param.clone(), Value::Bv(BitvecConst::from_u64(*index, i)));
            match self.eval(func.body, &inner, element_sort)? {
                Value::Bv(b) => Ok(b),
                Value::Array(_) => Err(String::from("nested arrays are not supported")),
            }
        };
        let mut array = ArrayValue::filled(*index, at(0)?);
        for i in 1..(1u64 << index) {
            let v = at(i)?;
            array.store(&BitvecConst::from_u64(*index, i), v);
        }
        Ok(Value::Array(array))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bv(w: u32, x: u64) -> Value {
        Value::Bv(BitvecConst::from_u64(w, x))
    }

    #[test]
    fn status_tokens() {
        assert_eq!(parse_solver_output("unsat\n"), Ok(SolverResponse::Unsat));
        assert_eq!(parse_solver_output("unknown\n"), Ok(SolverResponse::Unknown(String::from("unknown"))));
        assert_eq!(parse_solver_output("sorry"), Err(ResponseError::Status(String::from("sorry"))));
        assert!(matches!(parse_solver_output(""), Err(ResponseError::Status(_))));
    }

    #[test]
    fn model_literals() {
        let out = "sat\n(\n  (define-fun s0_0 () (_ BitVec 4) #b1111)\n  (define-fun n0_3 () (_ BitVec 8) #xa5)\n  \
                   (define-fun x () (_ BitVec 16) (_ bv300 16))\n)\n";
        let SolverResponse::Sat(m) = parse_solver_output(out).unwrap() else { panic!() };
        assert_eq!(m.values["s0_0"], bv(4, 15));
        assert_eq!(m.values["n0_3"], bv(8, 0xa5));
        assert_eq!(m.values["x"], bv(16, 300));
    }

    #[test]
    fn array_models() {
        let out = "sat\n(model\n (define-fun a () (Array (_ BitVec 2) (_ BitVec 4))\n   \
                   (store ((as const (Array (_ BitVec 2) (_ BitVec 4))) #x0) #b01 #x7))\n \
                   (define-fun b () (Array (_ BitVec 2) (_ BitVec 4)) (_ as-array k!0))\n \
                   (define-fun k!0 ((x!0 (_ BitVec 2))) (_ BitVec 4) (ite (= x!0 #b01) #x7 #x0))\n \
                   (define-fun c () (Array (_ BitVec 2) (_ BitVec 4)) (lambda ((x (_ BitVec 2))) (ite (= x #b01) #x7 #x0))))";
        let SolverResponse::Sat(m) = parse_solver_output(out).unwrap() else { panic!() };
        let expected = ArrayValue::filled(2, BitvecConst::zero(4))
            .write(&BitvecConst::from_u64(2, 1), BitvecConst::from_u64(4, 7));
        for name in ["a", "b", "c"] {
            assert_eq!(m.values[name], Value::Array(expected.clone()), "{name}");
        }
    }

    #[test]
    fn definitions_over_constants() {
        let out = "sat\n((define-fun s1_0 () (_ BitVec 3) #b110)\n (define-fun t1_1 () (_ BitVec 1) (ite (= s1_0 #b101) #b1 #b0))\n \
                   (define-fun t2_1 () (_ BitVec 1) (ite (= s2_0 #b101) #b1 #b0))\n (define-fun ok0 () Bool (and true)))";
        let SolverResponse::Sat(m) = parse_solver_output(out).unwrap() else { panic!() };
        assert_eq!(m.values["t1_1"], bv(1, 0));
        assert!(!m.values.contains_key("t2_1"));
        assert_eq!(m.skipped.len(), 1);
    }

    #[test]
    fn width_mismatch_is_an_error() {
        let out = "sat\n((define-fun s0_0 () (_ BitVec 4) #b111))";
        assert!(matches!(parse_solver_output(out), Err(ResponseError::Value { .. })));
    }
}
