//! Evaluation of ground theory terms.
//!
//! `div` and `mod` follow the Euclidean convention (the remainder is always
//! non-negative), matching the SMT-LIB semantics for `div`/`mod`, so the
//! builtin solver, external solvers and the rewrite engine agree on models.

use std::fmt;

use crate::signature::{names, SymbolKind};
use crate::term::Term;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Value {
    Int(i64),
    Bool(bool),
}

impl Value {
    pub fn as_int(self) -> Option<i64> {
        match self {
            Value::Int(n) => Some(n),
            Value::Bool(_) => None,
        }
    }

    pub fn as_bool(self) -> Option<bool> {
        match self {
            Value::Bool(b) => Some(b),
            Value::Int(_) => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(n) => write!(f, "{}", n),
            Value::Bool(b) => write!(f, "{}", b),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EvalError {
    NotGround(String),
    NotTheory(String),
    DivisionByZero,
    NegativeExponent,
    Overflow,
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalError::NotGround(v) => write!(f, "term is not ground (variable {})", v),
            EvalError::NotTheory(s) => write!(f, "symbol {} is not a theory symbol", s),
            EvalError::DivisionByZero => write!(f, "division by zero"),
            EvalError::NegativeExponent => write!(f, "negative exponent"),
            EvalError::Overflow => write!(f, "integer overflow"),
        }
    }
}

impl std::error::Error for EvalError {}

/// Evaluate a ground theory term to an integer or boolean.
pub fn eval_ground(t: &Term) -> Result<Value, EvalError> {
    let (f, args) = match t {
        Term::Var(v) => return Err(EvalError::NotGround(v.to_string())),
        Term::App(f, args) => (f, args),
    };
    if let Some(n) = f.as_int() {
        return Ok(Value::Int(n));
    }
    if let Some(b) = f.as_bool() {
        return Ok(Value::Bool(b));
    }
    if f.kind() != SymbolKind::Calculation {
        return Err(EvalError::NotTheory(f.display_name()));
    }
    let name = f.display_name();
    // Short-circuiting connectives first.
    match name.as_str() {
        names::AND => {
            return Ok(Value::Bool(
                expect_bool(&args[0])? && expect_bool(&args[1])?,
            ))
        }
        names::OR => {
            return Ok(Value::Bool(
                expect_bool(&args[0])? || expect_bool(&args[1])?,
            ))
        }
        names::NOT => return Ok(Value::Bool(!expect_bool(&args[0])?)),
        names::IMP => {
            return Ok(Value::Bool(
                !expect_bool(&args[0])? || expect_bool(&args[1])?,
            ))
        }
        names::IFF => {
            return Ok(Value::Bool(expect_bool(&args[0])? == expect_bool(&args[1])?))
        }
        _ => {}
    }
    let vals: Vec<Value> = args.iter().map(eval_ground).collect::<Result<_, _>>()?;
    match name.as_str() {
        names::EQ => Ok(Value::Bool(vals[0] == vals[1])),
        names::NEQ => Ok(Value::Bool(vals[0] != vals[1])),
        names::LE => cmp(&vals, |a, b| a <= b),
        names::LT => cmp(&vals, |a, b| a < b),
        names::GE => cmp(&vals, |a, b| a >= b),
        names::GT => cmp(&vals, |a, b| a > b),
        names::ADD => arith(&vals, i64::checked_add),
        names::SUB => arith(&vals, i64::checked_sub),
        names::MUL => arith(&vals, i64::checked_mul),
        names::DIV => {
            let (a, b) = int_pair(&vals)?;
            if b == 0 {
                return Err(EvalError::DivisionByZero);
            }
            a.checked_div_euclid(b).map(Value::Int).ok_or(EvalError::Overflow)
        }
        names::MOD => {
            let (a, b) = int_pair(&vals)?;
            if b == 0 {
                return Err(EvalError::DivisionByZero);
            }
            a.checked_rem_euclid(b).map(Value::Int).ok_or(EvalError::Overflow)
        }
        names::EXP => {
            let (a, b) = int_pair(&vals)?;
            if b < 0 {
                return Err(EvalError::NegativeExponent);
            }
            let e = u32::try_from(b).map_err(|_| EvalError::Overflow)?;
            a.checked_pow(e).map(Value::Int).ok_or(EvalError::Overflow)
        }
        _ => Err(EvalError::NotTheory(name)),
    }
}

fn expect_bool(t: &Term) -> Result<bool, EvalError> {
    match eval_ground(t)? {
        Value::Bool(b) => Ok(b),
        Value::Int(_) => Err(EvalError::NotTheory(t.to_string())),
    }
}

fn int_pair(vals: &[Value]) -> Result<(i64, i64), EvalError> {
    match (vals[0], vals[1]) {
        (Value::Int(a), Value::Int(b)) => Ok((a, b)),
        _ => Err(EvalError::NotTheory("non-integer operand".into())),
    }
}

fn cmp(vals: &[Value], op: impl Fn(i64, i64) -> bool) -> Result<Value, EvalError> {
    let (a, b) = int_pair(vals)?;
    Ok(Value::Bool(op(a, b)))
}

fn arith(vals: &[Value], op: impl Fn(i64, i64) -> Option<i64>) -> Result<Value, EvalError> {
    let (a, b) = int_pair(vals)?;
    op(a, b).map(Value::Int).ok_or(EvalError::Overflow)
}
