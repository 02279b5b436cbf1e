//! Operations and deep handlers on top of stackful coroutines.
//!
//! Each `handle` runs its body in a coroutine. Performing an operation suspends
//! the innermost running coroutine; its driver either runs a matching clause or
//! forwards the request to the next driver out. Requests that escape every
//! handler go to the global handlers, at the site of the operation.

use super::eval::Interp;
use super::value::{Env, HandlerValue, Value};
use super::{Error, ErrorKind, Result};
use crate::nucleus::TermJudgment;
use crate::syntax::ast::Name;
use corosensei::stack::DefaultStack;
use corosensei::{Coroutine, CoroutineResult, Yielder};
use std::cell::RefCell;
use std::rc::Rc;

/// Stack size for handled computations and for top-level commands.
pub const STACK_SIZE: usize = 256 << 20;

pub struct Request {
    pub op: Name,
    pub args: Vec<Value>,
    /// The type expected at the invocation site, in checking mode.
    pub slot: Option<TermJudgment>,
    /// Dynamic variables at the invocation site.
    pub dyns: Env,
}

type Co = Coroutine<Result<Value>, Request, Result<Value>, DefaultStack>;
type Y = Yielder<Result<Value>, Request>;

thread_local! {
    /// Yielders of the coroutines currently running, innermost last.
    static RUNNING: RefCell<Vec<*const Y>> = const { RefCell::new(Vec::new()) };
    static SPARE: RefCell<Vec<DefaultStack>> = const { RefCell::new(Vec::new()) };
}

fn stack() -> Result<DefaultStack> {
    if let Some(s) = SPARE.with(|s| s.borrow_mut().pop()) {
        return Ok(s);
    }
    DefaultStack::new(STACK_SIZE).map_err(|e| Error::new(ErrorKind::Internal(format!("cannot allocate a stack: {e}"))))
}

fn recycle(co: Co) {
    if co.done() {
        let s = co.into_stack();
        SPARE.with(|p| {
            let mut p = p.borrow_mut();
            if p.len() < 8 {
                p.push(s);
            }
        });
    }
}

/// Runs `f` on a large stack of its own.
pub fn on_big_stack<R>(f: impl FnOnce() -> R) -> R {
    match stack() {
        Ok(mut s) => {
            let out = corosensei::on_stack(&mut s, f);
            SPARE.with(|p| p.borrow_mut().push(s));
            out
        }
        Err(_) => f(),
    }
}

/// Suspends the innermost running handled computation with `req`.
/// Gives the request back when no handled computation is running.
fn suspend(req: Request) -> std::result::Result<Result<Value>, Request> {
    let Some(y) = RUNNING.with(|r| r.borrow_mut().pop()) else { return Err(req) };
    // SAFETY: the yielder belongs to a coroutine that is running, and so alive,
    // because it is on the RUNNING stack.
    let answer = unsafe { (*y).suspend(req) };
    RUNNING.with(|r| r.borrow_mut().push(y));
    Ok(answer)
}

impl Interp {
    pub fn perform(&self, req: Request) -> Result<Value> {
        self.count_operation(&req.op);
        match suspend(req) {
            Ok(answer) => answer,
            Err(req) => self.handle_global(req),
        }
    }

    /// Runs `body` under `handler`, whose clauses run with dynamics `dyns`.
    pub fn handle(
        &self,
        handler: Rc<HandlerValue>,
        dyns: Env,
        body: impl FnOnce() -> Result<Value> + 'static,
    ) -> Result<Value> {
        let co: Co = Coroutine::with_stack(stack()?, move |y: &Y, _: Result<Value>| {
            RUNNING.with(|r| r.borrow_mut().push(y as *const Y));
            let out = body();
            RUNNING.with(|r| r.borrow_mut().pop());
            out
        });
        self.drive(Box::new(co), handler, dyns, Ok(Value::unit()))
    }

    fn drive(&self, mut co: Box<Co>, h: Rc<HandlerValue>, dyns: Env, first: Result<Value>) -> Result<Value> {
        let mut input = first;
        loop {
            match co.resume(input) {
                CoroutineResult::Return(out) => {
                    recycle(*co);
                    return self.value_clauses(&h, &dyns, out?);
                }
                CoroutineResult::Yield(req) => match self.find_clause(&h.handler.ops, &h.env, &req) {
                    Some((clause, binds)) => {
                        let k = Rc::new(Continuation { co: RefCell::new(Some(co)), handler: Some((h.clone(), dyns.clone())) });
                        let env = h.env.extend(binds).bind(Rc::from(YIELD), Value::Cont(k));
                        return self.run_clause(&clause.body, env, dyns);
                    }
                    None => {
                        input = match suspend(req) {
                            Ok(answer) => answer,
                            Err(req) => self.handle_global(req),
                        }
                    }
                },
            }
        }
    }

    fn handle_global(&self, req: Request) -> Result<Value> {
        let handlers = self.global_handlers();
        for h in handlers.iter().rev() {
            if let Some((clause, binds)) = self.find_clause(&h.ops, &Env::new(), &req) {
                let k = Rc::new(Continuation { co: RefCell::new(None), handler: None });
                let env = Env::new().extend(binds).bind(Rc::from(YIELD), Value::Cont(k));
                return self.run_clause(&clause.body, env, req.dyns).map_err(|e| Error { span: None, ..e });
            }
        }
        Err(Error::new(ErrorKind::UnhandledOperation(req.op.to_string())))
    }
}

/// The name under which a clause body sees its continuation.
pub const YIELD: &str = "$yield";

/// A one-shot continuation. Global clauses have none: `yield v` there just gives `v`.
pub struct Continuation {
    co: RefCell<Option<Box<Co>>>,
    handler: Option<(Rc<HandlerValue>, Env)>,
}

impl Continuation {
    pub fn resume(&self, interp: &Interp, v: Value) -> Result<Value> {
        let Some((h, dyns)) = &self.handler else { return Ok(v) };
        let co = self.co.borrow_mut().take().ok_or_else(|| Error::new(ErrorKind::ContinuationReuse))?;
        interp.drive(co, h.clone(), dyns.clone(), Ok(v))
    }
}
