//! Runtime values and persistent environments.

use super::eval::Interp;
use super::{Ctx, Result};
use crate::nucleus::{alpha_equal, print_judgment, TermJudgment};
use crate::syntax::ast::{Comp, Handler, Name};
use std::cell::RefCell;
use std::fmt;
use std::rc::Rc;

pub type Builtin = fn(&Interp, &Ctx, &[Value]) -> Result<Value>;

#[derive(Clone)]
pub enum Value {
    Judg(TermJudgment),
    Closure(Rc<Closure>),
    /// One function of a `let rec` group.
    Rec(Rc<RecGroup>, usize),
    /// A builtin applied to fewer arguments than its arity.
    Builtin(Rc<BuiltinApp>),
    Handler(Rc<HandlerValue>),
    Tag(Name, Rc<[Value]>),
    Tuple(Rc<[Value]>),
    Nil,
    Cons(Rc<(Value, Value)>),
    Ref(Rc<RefCell<Value>>),
    Str(Rc<str>),
    /// The continuation of the operation clause being run.
    Cont(Rc<super::effects::Continuation>),
}

pub struct Closure {
    pub env: Env,
    pub param: Name,
    pub body: Rc<Comp>,
}

pub struct RecGroup {
    pub env: Env,
    /// Names and bodies, each body a chain of `fun`s over the parameters.
    pub defs: Vec<(Name, Rc<Comp>)>,
}

pub struct BuiltinApp {
    pub name: &'static str,
    pub arity: usize,
    pub fun: Builtin,
    pub args: Vec<Value>,
}

pub struct HandlerValue {
    pub env: Env,
    pub handler: Rc<Handler>,
}

impl Value {
    pub fn unit() -> Value {
        Value::Tuple(Rc::from(Vec::new()))
    }

    pub fn is_unit(&self) -> bool {
        matches!(self, Value::Tuple(xs) if xs.is_empty())
    }

    pub fn tag(name: &str, args: Vec<Value>) -> Value {
        Value::Tag(Rc::from(name), Rc::from(args))
    }

    pub fn list(items: impl IntoIterator<Item = Value, IntoIter: DoubleEndedIterator>) -> Value {
        items.into_iter().rev().fold(Value::Nil, |tl, hd| Value::Cons(Rc::new((hd, tl))))
    }

    /// The elements of a proper list.
    pub fn as_list(&self) -> Option<Vec<Value>> {
        let mut out = Vec::new();
        let mut v = self;
        loop {
            match v {
                Value::Nil => return Some(out),
                Value::Cons(c) => {
                    out.push(c.0.clone());
                    v = &c.1;
                }
                _ => return None,
            }
        }
    }

    pub fn as_judgment(&self) -> Option<&TermJudgment> {
        match self {
            Value::Judg(j) => Some(j),
            _ => None,
        }
    }

    pub fn option(v: Option<Value>) -> Value {
        match v {
            Some(v) => Value::tag("Some", vec![v]),
            None => Value::tag("None", vec![]),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Value::Judg(_) => "a judgment",
            Value::Closure(_) | Value::Rec(..) | Value::Builtin(_) => "a function",
            Value::Handler(_) => "a handler",
            Value::Tag(..) => "a constructor",
            Value::Tuple(_) => "a tuple",
            Value::Nil | Value::Cons(_) => "a list",
            Value::Ref(_) => "a reference",
            Value::Str(_) => "a string",
            Value::Cont(_) => "a continuation",
        }
    }

    /// Structural equality, with judgments compared up to α-equivalence.
    /// Functions, handlers and references are compared by identity.
    pub fn equal(&self, other: &Value) -> bool {
        match (self, other) {
            (Value::Judg(a), Value::Judg(b)) => alpha_equal(a, b),
            (Value::Tag(n, xs), Value::Tag(m, ys)) => n == m && all_equal(xs, ys),
            (Value::Tuple(xs), Value::Tuple(ys)) => all_equal(xs, ys),
            (Value::Nil, Value::Nil) => true,
            (Value::Cons(a), Value::Cons(b)) => a.0.equal(&b.0) && a.1.equal(&b.1),
            (Value::Str(a), Value::Str(b)) => a == b,
            (Value::Ref(a), Value::Ref(b)) => Rc::ptr_eq(a, b),
            (Value::Closure(a), Value::Closure(b)) => Rc::ptr_eq(a, b),
            (Value::Rec(a, i), Value::Rec(b, j)) => Rc::ptr_eq(a, b) && i == j,
            (Value::Handler(a), Value::Handler(b)) => Rc::ptr_eq(a, b),
            _ => false,
        }
    }
}

fn all_equal(xs: &[Value], ys: &[Value]) -> bool {
    xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| x.equal(y))
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Judg(j) => write!(f, "{}", print_judgment(j)),
            Value::Closure(_) | Value::Rec(..) => write!(f, "<fun>"),
            Value::Builtin(b) => write!(f, "<builtin {}>", b.name),
            Value::Handler(_) => write!(f, "<handler>"),
            Value::Cont(_) => write!(f, "<continuation>"),
            Value::Tag(n, xs) if xs.is_empty() => write!(f, "{n}"),
            Value::Tag(n, xs) => {
                write!(f, "{n}")?;
                for x in xs.iter() {
                    match x {
                        Value::Tag(_, ys) if !ys.is_empty() => write!(f, " ({x})")?,
                        Value::Judg(_) => write!(f, " ({x})")?,
                        _ => write!(f, " {x}")?,
                    }
                }
                Ok(())
            }
            Value::Tuple(xs) => {
                write!(f, "(")?;
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, ")")
            }
            Value::Nil | Value::Cons(_) => {
                let items = self.as_list().unwrap_or_default();
                write!(f, "[")?;
                for (i, x) in items.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, "]")
            }
            Value::Ref(r) => write!(f, "ref {}", r.borrow()),
            Value::Str(s) => write!(f, "{s:?}"),
        }
    }
}

impl fmt::Debug for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A persistent association list; newer bindings shadow older ones.
#[derive(Clone, Default)]
pub struct Env(Option<Rc<EnvNode>>);

struct EnvNode {
    name: Name,
    value: Value,
    next: Env,
}

impl Env {
    pub fn new() -> Env {
        Env(None)
    }

    pub fn bind(&self, name: Name, value: Value) -> Env {
        Env(Some(Rc::new(EnvNode { name, value, next: self.clone() })))
    }

    pub fn extend(&self, binds: impl IntoIterator<Item = (Name, Value)>) -> Env {
        binds.into_iter().fold(self.clone(), |env, (n, v)| env.bind(n, v))
    }

    pub fn lookup(&self, name: &str) -> Option<&Value> {
        let mut e = self;
        while let Some(node) = &e.0 {
            if &*node.name == name {
                return Some(&node.value);
            }
            e = &node.next;
        }
        None
    }
}
