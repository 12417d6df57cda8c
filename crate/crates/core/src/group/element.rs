use std::fmt;

use super::Element;
use crate::matrix::Matrix;
use crate::perm::Perm;

impl Element for Perm {
    fn op(&self, other: &Self) -> Self {
        self.then(other)
    }

    fn inv(&self) -> Self {
        self.inverse()
    }

    fn identity_like(&self) -> Self {
        Perm::identity(self.degree())
    }

    fn is_identity(&self) -> bool {
        Perm::is_identity(self)
    }

    fn compatible(&self, other: &Self) -> bool {
        self.degree() == other.degree()
    }
}

impl Element for Matrix {
    fn op(&self, other: &Self) -> Self {
        self.mul(other)
    }

    fn inv(&self) -> Self {
        self.inverse()
    }

    fn identity_like(&self) -> Self {
        Matrix::identity(self.field(), self.dim())
    }

    fn is_identity(&self) -> bool {
        Matrix::is_identity(self)
    }

    fn compatible(&self, other: &Self) -> bool {
        self.same_shape(other)
    }
}

/// An element of a wreath product `B ≀ S`: a base tuple `(m_1, ..., m_k)`
/// followed by a top permutation `h` on the `k` coordinates.
///
/// With `h` acting from the right, `(m; h)·(m'; h') = (m_i · m'_{i^h}; hh')`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WreathPair {
    pub base: Vec<GroupElement>,
    pub top: Perm,
}

/// Tagged element variants used wherever groups of different kinds are mixed:
/// direct products (tuples) and abstract wreath products.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupElement {
    Permutation(Perm),
    Matrix(Matrix),
    Tuple(Vec<GroupElement>),
    Wreath(Box<WreathPair>),
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupElement::Permutation(p) => write!(f, "{p:?}"),
            GroupElement::Matrix(m) => write!(f, "{m:?}"),
            GroupElement::Tuple(t) => f.debug_tuple("").field(t).finish(),
            GroupElement::Wreath(w) => write!(f, "{:?}.{:?}", w.base, w.top),
        }
    }
}

impl From<Perm> for GroupElement {
    fn from(p: Perm) -> Self {
        GroupElement::Permutation(p)
    }
}

impl From<Matrix> for GroupElement {
    fn from(m: Matrix) -> Self {
        GroupElement::Matrix(m)
    }
}

impl GroupElement {
    pub fn tuple(components: Vec<GroupElement>) -> Self {
        GroupElement::Tuple(components)
    }

    pub fn wreath(base: Vec<GroupElement>, top: Perm) -> Self {
        assert_eq!(base.len(), top.degree(), "wreath base length must match top degree");
        GroupElement::Wreath(Box::new(WreathPair { base, top }))
    }

    pub fn components(&self) -> Option<&[GroupElement]> {
        match self {
            GroupElement::Tuple(t) => Some(t),
            _ => None,
        }
    }

    pub fn as_perm(&self) -> Option<&Perm> {
        match self {
            GroupElement::Permutation(p) => Some(p),
            _ => None,
        }
    }

    pub fn as_matrix(&self) -> Option<&Matrix> {
        match self {
            GroupElement::Matrix(m) => Some(m),
            _ => None,
        }
    }
}

impl Element for GroupElement {
    fn op(&self, other: &Self) -> Self {
        use GroupElement::*;
        match (self, other) {
            (Permutation(a), Permutation(b)) => Permutation(a.then(b)),
            (Matrix(a), Matrix(b)) => Matrix(a.mul(b)),
            (Tuple(a), Tuple(b)) => Tuple(a.iter().zip(b).map(|(x, y)| x.op(y)).collect()),
            (Wreath(a), Wreath(b)) => {
                let base = a
                    .base
                    .iter()
                    .enumerate()
                    .map(|(i, m)| m.op(&b.base[a.top.apply(i as u32) as usize]))
                    .collect();
                Wreath(Box::new(WreathPair {
                    base,
                    top: a.top.then(&b.top),
                }))
            }
            _ => panic!("multiplying incompatible group elements"),
        }
    }

    fn inv(&self) -> Self {
        use GroupElement::*;
        match self {
            Permutation(a) => Permutation(a.inverse()),
            Matrix(a) => Matrix(a.inverse()),
            Tuple(a) => Tuple(a.iter().map(|x| x.inv()).collect()),
            Wreath(w) => {
                let hinv = w.top.inverse();
                let base = (0..w.base.len())
                    .map(|i| w.base[hinv.apply(i as u32) as usize].inv())
                    .collect();
                Wreath(Box::new(WreathPair { base, top: hinv }))
            }
        }
    }

    fn identity_like(&self) -> Self {
        use GroupElement::*;
        match self {
            Permutation(a) => Permutation(a.identity_like()),
            Matrix(a) => Matrix(a.identity_like()),
            Tuple(a) => Tuple(a.iter().map(|x| x.identity_like()).collect()),
            Wreath(w) => Wreath(Box::new(WreathPair {
                base: w.base.iter().map(|x| x.identity_like()).collect(),
                top: Perm::identity(w.top.degree()),
            })),
        }
    }

    fn is_identity(&self) -> bool {
        use GroupElement::*;
        match self {
            Permutation(a) => a.is_identity(),
            Matrix(a) => a.is_identity(),
            Tuple(a) => a.iter().all(|x| x.is_identity()),
            Wreath(w) => w.top.is_identity() && w.base.iter().all(|x| x.is_identity()),
        }
    }

    fn compatible(&self, other: &Self) -> bool {
        use GroupElement::*;
        match (self, other) {
            (Permutation(a), Permutation(b)) => a.compatible(b),
            (Matrix(a), Matrix(b)) => a.compatible(b),
            (Tuple(a), Tuple(b)) => {
                a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.compatible(y))
            }
            (Wreath(a), Wreath(b)) => {
                a.top.degree() == b.top.degree()
                    && a.base.iter().zip(&b.base).all(|(x, y)| x.compatible(y))
            }
            _ => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::closure;

    fn c2() -> GroupElement {
        Perm::from_cycles(2, &[&[0, 1]]).unwrap().into()
    }

    #[test]
    fn tuple_product_is_componentwise() {
        let a = GroupElement::tuple(vec![c2(), c2().identity_like()]);
        let b = GroupElement::tuple(vec![c2().identity_like(), c2()]);
        let g = closure(&[a, b], 10).unwrap();
        assert_eq!(g.order(), 4);
    }

    #[test]
    fn wreath_c2_wr_c2_is_dihedral_of_order_8() {
        let e = c2().identity_like();
        let swap = Perm::from_cycles(2, &[&[0, 1]]).unwrap();
        let base = GroupElement::wreath(vec![c2(), e.clone()], Perm::identity(2));
        let top = GroupElement::wreath(vec![e.clone(), e], swap);
        let g = closure(&[base, top], 100).unwrap();
        assert_eq!(g.order(), 8);
        let invols = g.elements().filter(|x| x.is_involution()).count();
        assert_eq!(invols, 5);
        for x in g.elements() {
            assert!(x.op(&x.inv()).is_identity());
        }
    }

    #[test]
    fn incompatible_shapes() {
        let a = c2();
        let b = GroupElement::Permutation(Perm::identity(3));
        assert!(!a.compatible(&b));
        assert!(!a.compatible(&GroupElement::tuple(vec![c2()])));
    }
}
