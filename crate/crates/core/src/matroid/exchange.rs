use super::graphic::Forest;
use super::{Kind, MatroidHandle};
use crate::subset::SubsetMask;

/// Circuit queries against a fixed independent set `I`.
pub enum Exchange<'a> {
    Forest(Forest),
    Truncated { inner: Box<Exchange<'a>>, members: Vec<usize>, at_top: bool },
    Generic { m: &'a MatroidHandle, set: SubsetMask, size: usize },
}

impl<'a> Exchange<'a> {
    pub(crate) fn new(m: &'a MatroidHandle, indep: &SubsetMask) -> Self {
        match m.kind_ref() {
            Kind::Graphic(g) => Exchange::Forest(Forest::new(g, indep)),
            Kind::Truncation { inner, t } => {
                let members = indep.to_vec();
                let at_top = members.len() >= *t;
                Exchange::Truncated { inner: Box::new(Exchange::new(inner, indep)), members, at_top }
            }
            _ => Exchange::Generic { m, set: indep.clone(), size: indep.count() },
        }
    }

    /// For `x` outside `I`: `None` if `I + x` is independent, else the
    /// elements of `I` on the unique circuit of `I + x`.
    pub fn circuit(&self, x: usize) -> Option<Vec<usize>> {
        match self {
            Exchange::Forest(f) => f.cycle(x),
            Exchange::Truncated { inner, members, at_top } => match inner.circuit(x) {
                Some(c) => Some(c),
                None if *at_top => Some(members.clone()),
                None => None,
            },
            Exchange::Generic { m, set, size } => {
                let with = set.with(x);
                if m.rank(&with) > *size {
                    return None;
                }
                Some(set.iter().filter(|&y| m.rank(&with.without(y)) == *size).collect())
            }
        }
    }

    pub fn can_add(&self, x: usize) -> bool {
        match self {
            Exchange::Forest(f) => !f.closes_cycle(x),
            Exchange::Truncated { inner, at_top, .. } => !*at_top && inner.can_add(x),
            Exchange::Generic { m, set, size } => m.rank(&set.with(x)) > *size,
        }
    }
}
