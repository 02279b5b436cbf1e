use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

/// Identifier names shared between terms, binders and constants.
pub type Name = Arc<str>;

static NEXT_ATOM: AtomicU64 = AtomicU64::new(1);

/// A free object-level variable. Identity is the id; the name is a printing hint.
#[derive(Clone)]
pub struct Atom {
    id: u64,
    name: Name,
}

impl Atom {
    pub(crate) fn fresh(name: &str) -> Atom {
        let id = NEXT_ATOM.fetch_add(1, Ordering::Relaxed);
        Atom { id, name: name.into() }
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn name(&self) -> &Name {
        &self.name
    }
}

impl PartialEq for Atom {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
    }
}

impl Eq for Atom {}

impl std::hash::Hash for Atom {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.id.hash(state)
    }
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}#{}", self.name, self.id)
    }
}

/// Sorted set of atom ids a (sub)term depends on.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct AtomSet(Option<Arc<[u64]>>);

impl AtomSet {
    pub fn empty() -> AtomSet {
        AtomSet(None)
    }

    pub fn singleton(id: u64) -> AtomSet {
        AtomSet(Some(Arc::from(vec![id])))
    }

    pub fn from_ids(ids: impl IntoIterator<Item = u64>) -> AtomSet {
        let mut v: Vec<u64> = ids.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Self::from_sorted(v)
    }

    fn from_sorted(v: Vec<u64>) -> AtomSet {
        if v.is_empty() {
            AtomSet(None)
        } else {
            AtomSet(Some(Arc::from(v)))
        }
    }

    pub fn as_slice(&self) -> &[u64] {
        match &self.0 {
            Some(a) => a,
            None => &[],
        }
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_none()
    }

    pub fn len(&self) -> usize {
        self.as_slice().len()
    }

    pub fn contains(&self, id: u64) -> bool {
        self.as_slice().binary_search(&id).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.as_slice().iter().copied()
    }

    pub fn union(&self, other: &AtomSet) -> AtomSet {
        if other.is_empty() || std::ptr::eq(self.as_slice(), other.as_slice()) {
            return self.clone();
        }
        if self.is_empty() {
            return other.clone();
        }
        let (a, b) = (self.as_slice(), other.as_slice());
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push(a[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        if out.len() == a.len() {
            return self.clone();
        }
        AtomSet::from_sorted(out)
    }

    pub fn is_subset(&self, other: &AtomSet) -> bool {
        self.iter().all(|x| other.contains(x))
    }

    /// Shifts de Bruijn levels out of one binder: drops 0 and decrements the rest.
    pub(crate) fn unshift(&self) -> AtomSet {
        if self.is_empty() {
            return self.clone();
        }
        AtomSet::from_sorted(self.iter().filter(|&k| k > 0).map(|k| k - 1).collect())
    }

    pub fn remove(&self, id: u64) -> AtomSet {
        if !self.contains(id) {
            return self.clone();
        }
        AtomSet::from_sorted(self.iter().filter(|&x| x != id).collect())
    }
}

impl fmt::Debug for AtomSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fresh_atoms_are_distinct() {
        let a = Atom::fresh("x");
        let b = Atom::fresh("x");
        assert_ne!(a, b);
        assert_eq!(a, a.clone());
    }

    #[test]
    fn union_and_remove() {
        let s = AtomSet::from_ids([3, 1, 2]);
        let t = AtomSet::from_ids([2, 5]);
        assert_eq!(s.union(&t).as_slice(), &[1, 2, 3, 5]);
        assert_eq!(s.remove(2).as_slice(), &[1, 3]);
        assert!(AtomSet::empty().union(&AtomSet::empty()).is_empty());
        assert!(AtomSet::from_ids([1]).is_subset(&s));
    }
}
