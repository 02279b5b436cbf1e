use super::atom::Name;
use super::proof::CertSet;
use super::term::Term;
use std::collections::HashMap;
use std::sync::Arc;

#[derive(Clone, Debug)]
pub struct ConstantDecl {
    pub name: Name,
    pub ty: Term,
    pub certs: CertSet,
}

/// Append-only list of constants with closed types.
#[derive(Clone, Default)]
pub struct Signature {
    order: Arc<Vec<ConstantDecl>>,
    index: Arc<HashMap<Name, usize>>,
}

impl Signature {
    pub fn lookup(&self, name: &str) -> Option<&ConstantDecl> {
        self.index.get(name).map(|i| &self.order[*i])
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &ConstantDecl> {
        self.order.iter()
    }

    pub(crate) fn push(&self, decl: ConstantDecl) -> Signature {
        let mut order = (*self.order).clone();
        let mut index = (*self.index).clone();
        index.insert(decl.name.clone(), order.len());
        order.push(decl);
        Signature { order: Arc::new(order), index: Arc::new(index) }
    }

    /// Declarations needed to interpret the given constants, in declaration order.
    pub fn closure_of(&self, names: &[Name]) -> Vec<ConstantDecl> {
        let mut need: Vec<bool> = vec![false; self.order.len()];
        let mut stack: Vec<Name> = names.to_vec();
        while let Some(n) = stack.pop() {
            if let Some(&i) = self.index.get(&n) {
                if !need[i] {
                    need[i] = true;
                    let mut cs = Vec::new();
                    self.order[i].ty.constants(&mut cs);
                    for p in self.order[i].certs.to_vec() {
                        p.node().lhs.constants(&mut cs);
                        p.node().rhs.constants(&mut cs);
                    }
                    stack.extend(cs);
                }
            }
        }
        self.order.iter().zip(need).filter(|(_, k)| *k).map(|(d, _)| d.clone()).collect()
    }
}

impl std::fmt::Debug for Signature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list().entries(self.order.iter().map(|d| (&d.name, &d.ty))).finish()
    }
}
