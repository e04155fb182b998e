//! Small structures used throughout the tests and documentation.

use crate::algebroid::{Algebroid, EndoTensor, FiberMultivector};
use crate::poly::Polynomial;

fn int(c: i64) -> Polynomial {
    Polynomial::int(c)
}

/// Four-dimensional Lie algebra with `[e1, e2] = e3` over a point.
pub fn ex4() -> Algebroid {
    let mut a = Algebroid::new(vec![], 4, true);
    a.set_bracket(0, 1, 2, int(1)).expect("in range");
    a
}

/// `e2 ^ e4`, a Poisson tensor for [`ex4`].
pub fn ex4_p() -> FiberMultivector {
    FiberMultivector::basis(4, &[1, 3])
}

/// `diag(-1, 1, 1, 1)`, a Nijenhuis tensor for [`ex4`].
pub fn ex4_n() -> EndoTensor {
    EndoTensor::diagonal(&[int(-1), int(1), int(1), int(1)])
}

/// Tangent bundle of the plane: zero brackets, identity anchor.
pub fn tm2() -> Algebroid {
    let mut a = Algebroid::new(vec!["x1".into(), "x2".into()], 2, true);
    a.set_anchor(0, 0, int(1)).expect("in range");
    a.set_anchor(1, 1, int(1)).expect("in range");
    a
}

/// `sl(2)` with `[e1,e2] = 2e2`, `[e1,e3] = -2e3`, `[e2,e3] = e1`.
pub fn sl2() -> Algebroid {
    let mut a = Algebroid::new(vec![], 3, true);
    a.set_bracket(0, 1, 1, int(2)).expect("in range");
    a.set_bracket(0, 2, 2, int(-2)).expect("in range");
    a.set_bracket(1, 2, 0, int(1)).expect("in range");
    a
}

/// Skew bracket `[e1,e2] = e2`, `[e1,e3] = e3`, `[e2,e3] = e1` that fails
/// Jacobi.
pub fn nonjac() -> Algebroid {
    let mut a = Algebroid::new(vec![], 3, true);
    a.set_bracket(0, 1, 1, int(1)).expect("in range");
    a.set_bracket(0, 2, 2, int(1)).expect("in range");
    a.set_bracket(1, 2, 0, int(1)).expect("in range");
    a
}

/// Abelian Lie algebra of the given dimension.
pub fn abelian(n: usize) -> Algebroid {
    Algebroid::new(vec![], n, true)
}
