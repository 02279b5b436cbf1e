//! Contexts as dependency graphs of atoms.

use super::atom::{Atom, AtomSet};
use super::term::Term;
use super::NucleusError;
use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

#[derive(Clone, Debug)]
pub struct Entry {
    pub atom: Atom,
    pub ty: Term,
}

impl Entry {
    /// The hypotheses this entry depends on.
    pub fn deps(&self) -> &AtomSet {
        self.ty.assumptions()
    }
}

#[derive(Clone, Default)]
pub struct Context(Arc<BTreeMap<u64, Entry>>);

impl Context {
    pub fn empty() -> Context {
        Context::default()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn get(&self, id: u64) -> Option<&Entry> {
        self.0.get(&id)
    }

    pub fn contains(&self, id: u64) -> bool {
        self.0.contains_key(&id)
    }

    pub fn entries(&self) -> impl Iterator<Item = &Entry> {
        self.0.values()
    }

    pub fn domain(&self) -> AtomSet {
        AtomSet::from_ids(self.0.keys().copied())
    }

    pub fn ptr_eq(&self, other: &Context) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    /// Adds a fresh hypothesis whose type only mentions existing entries.
    pub(crate) fn extend(&self, atom: Atom, ty: Term) -> Context {
        debug_assert!(ty.assumptions().iter().all(|d| self.contains(d)));
        let mut m = (*self.0).clone();
        m.insert(atom.id(), Entry { atom, ty });
        Context(Arc::new(m))
    }

    /// The smallest context extending both. Fails when an atom has types that are
    /// not alpha-equal, or when the union of the graphs has a cycle.
    pub fn join(&self, other: &Context) -> Result<Context, NucleusError> {
        if self.ptr_eq(other) || other.is_empty() {
            return Ok(self.clone());
        }
        if self.is_empty() {
            return Ok(other.clone());
        }
        let (big, small) = if self.len() >= other.len() { (self, other) } else { (other, self) };
        let mut m: Option<BTreeMap<u64, Entry>> = None;
        let mut widened = false;
        for (id, e) in small.0.iter() {
            match big.0.get(id) {
                Some(b) => {
                    if !b.ty.alpha_eq(&e.ty) {
                        return Err(NucleusError::JoinFailure(e.atom.name().to_string()));
                    }
                    if !e.deps().is_subset(b.deps()) {
                        let ty = b.ty.mention(e.deps());
                        m.get_or_insert_with(|| (*big.0).clone())
                            .insert(*id, Entry { atom: b.atom.clone(), ty });
                        widened = true;
                    }
                }
                None => {
                    m.get_or_insert_with(|| (*big.0).clone()).insert(*id, e.clone());
                }
            }
        }
        let ctx = match m {
            None => return Ok(big.clone()),
            Some(m) => Context(Arc::new(m)),
        };
        if widened {
            ctx.topological()?;
        }
        Ok(ctx)
    }

    /// Restriction to the given atoms and everything they depend on.
    pub fn restrict(&self, asm: &AtomSet) -> Context {
        let mut keep = BTreeSet::new();
        let mut stack: Vec<u64> = asm.iter().filter(|a| self.contains(*a)).collect();
        while let Some(a) = stack.pop() {
            if keep.insert(a) {
                if let Some(e) = self.get(a) {
                    stack.extend(e.deps().iter().filter(|d| !keep.contains(d)));
                }
            }
        }
        if keep.len() == self.len() {
            return self.clone();
        }
        Context(Arc::new(
            keep.into_iter().filter_map(|a| self.get(a).map(|e| (a, e.clone()))).collect(),
        ))
    }

    /// Removes a hypothesis that no other hypothesis depends on.
    pub(crate) fn remove(&self, atom: &Atom) -> Result<Context, NucleusError> {
        if !self.contains(atom.id()) {
            return Err(NucleusError::AtomNotInContext(atom.name().to_string()));
        }
        if let Some(e) = self.entries().find(|e| e.atom != *atom && e.deps().contains(atom.id())) {
            return Err(NucleusError::DependencyOnAbstractedAtom {
                atom: atom.name().to_string(),
                dependent: e.atom.name().to_string(),
            });
        }
        let mut m = (*self.0).clone();
        m.remove(&atom.id());
        Ok(Context(Arc::new(m)))
    }

    /// Substitutes `v` for `id` in every remaining entry.
    pub(crate) fn subst(&self, id: u64, v: &Term) -> Context {
        let m = self
            .0
            .iter()
            .filter(|(k, _)| **k != id)
            .map(|(k, e)| (*k, Entry { atom: e.atom.clone(), ty: e.ty.subst_atom(id, v) }))
            .collect();
        Context(Arc::new(m))
    }

    /// Entries ordered so that each is preceded by its dependencies; ties are broken
    /// by creation order.
    pub fn topological(&self) -> Result<Vec<Entry>, NucleusError> {
        let mut indeg: BTreeMap<u64, usize> = BTreeMap::new();
        let mut users: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
        for (id, e) in self.0.iter() {
            let deps: Vec<u64> = e.deps().iter().filter(|d| d != id && self.contains(*d)).collect();
            indeg.insert(*id, deps.len());
            for d in deps {
                users.entry(d).or_default().push(*id);
            }
            if e.deps().contains(*id) {
                return Err(NucleusError::CyclicContext(e.atom.name().to_string()));
            }
        }
        let mut ready: BTreeSet<u64> = indeg.iter().filter(|(_, n)| **n == 0).map(|(k, _)| *k).collect();
        let mut out = Vec::with_capacity(self.len());
        while let Some(id) = ready.pop_first() {
            out.push(self.0[&id].clone());
            if let Some(us) = users.get(&id) {
                for u in us {
                    let n = indeg.get_mut(u).unwrap();
                    *n -= 1;
                    if *n == 0 {
                        ready.insert(*u);
                    }
                }
            }
        }
        if out.len() != self.len() {
            let stuck = self.0.keys().find(|k| !out.iter().any(|e| e.atom.id() == **k)).unwrap();
            return Err(NucleusError::CyclicContext(self.0[stuck].atom.name().to_string()));
        }
        Ok(out)
    }

    /// Graph equality: same atoms with alpha-equal types and equal dependency sets.
    pub fn graph_eq(&self, other: &Context) -> bool {
        self.len() == other.len()
            && self.0.iter().all(|(k, e)| {
                other.get(*k).is_some_and(|o| o.ty.alpha_eq(&e.ty) && o.deps() == e.deps())
            })
    }
}

impl std::fmt::Debug for Context {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_map().entries(self.0.values().map(|e| (&e.atom, &e.ty))).finish()
    }
}

#[cfg(test)]
mod tests {
    use crate::nucleus::*;

    fn base() -> (TermJudgment, TermJudgment) {
        let sig = sig_add_constant(&sig_empty(), "A", &form_type()).unwrap();
        let a = form_constant(&sig, "A").unwrap();
        (a.clone(), fresh_atom(&a, "x").unwrap())
    }

    #[test]
    fn join_unions_and_is_idempotent() {
        let (a, x) = base();
        let y = fresh_atom(&a, "y").unwrap();
        let j = x.context().join(y.context()).unwrap();
        assert_eq!(j.len(), 2);
        assert!(j.join(&j).unwrap().graph_eq(&j));
        assert!(j.join(&Context::empty()).unwrap().graph_eq(&j));
    }

    #[test]
    fn join_widens_dependencies() {
        let (_, x) = base();
        // `p : x ≡ x` adds a dependency on `x` to the type of an atom in the other context.
        let p = fresh_atom(&form_eq_type(&x, &x).unwrap(), "p").unwrap();
        let j = x.context().join(p.context()).unwrap();
        assert_eq!(j.len(), 2);
        assert!(j.topological().is_ok());
    }

    #[test]
    fn restrict_keeps_dependencies() {
        let (_, x) = base();
        let p = fresh_atom(&form_eq_type(&x, &x).unwrap(), "p").unwrap();
        let pid = p.as_atom().unwrap().id();
        let r = p.context().restrict(&crate::nucleus::AtomSet::singleton(pid));
        assert_eq!(r.len(), 2);
        assert!(r.contains(x.as_atom().unwrap().id()));
    }
}
