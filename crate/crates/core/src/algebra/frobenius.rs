//! The Frobenius algebra `F2[x, U] / (x^2 = U)` over `F2[U]` with basis `{1, x}`.

/// A basis element of the algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    One,
    X,
}

impl Label {
    /// Quantum degree: `1` has degree 1, `x` degree -1.
    pub fn q(self) -> i64 {
        match self {
            Label::One => 1,
            Label::X => -1,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Label::One => '1',
            Label::X => 'x',
        }
    }
}

/// Multiplication; returns the label and the power of `U`.
pub fn multiply(a: Label, b: Label) -> (Label, u32) {
    match (a, b) {
        (Label::One, Label::One) => (Label::One, 0),
        (Label::One, Label::X) | (Label::X, Label::One) => (Label::X, 0),
        (Label::X, Label::X) => (Label::One, 1),
    }
}

/// Comultiplication as a list of `(left, right, U power)` terms.
pub fn comultiply(a: Label) -> Vec<(Label, Label, u32)> {
    match a {
        Label::One => vec![(Label::One, Label::X, 0), (Label::X, Label::One, 0)],
        Label::X => vec![(Label::X, Label::X, 0), (Label::One, Label::One, 1)],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all() -> [Label; 2] {
        [Label::One, Label::X]
    }

    #[test]
    fn multiplication_is_commutative_and_graded() {
        for a in all() {
            for b in all() {
                let (c, k) = multiply(a, b);
                assert_eq!(multiply(b, a), (c, k));
                assert_eq!(c.q() - 4 * k as i64, a.q() + b.q() - 1);
            }
        }
    }

    #[test]
    fn comultiplication_is_graded() {
        for a in all() {
            for (l, r, k) in comultiply(a) {
                assert_eq!(l.q() + r.q() - 4 * k as i64, a.q() - 1);
            }
        }
    }

    #[test]
    fn frobenius_relation() {
        // (m (x) id)(id (x) Delta) = Delta m on basis pairs, compared as multisets mod 2.
        use std::collections::BTreeMap;
        for a in all() {
            for b in all() {
                let mut lhs: BTreeMap<(Label, Label, u32), u32> = BTreeMap::new();
                for (l, r, k) in comultiply(b) {
                    let (c, j) = multiply(a, l);
                    *lhs.entry((c, r, k + j)).or_default() += 1;
                }
                let mut rhs: BTreeMap<(Label, Label, u32), u32> = BTreeMap::new();
                let (c, j) = multiply(a, b);
                for (l, r, k) in comultiply(c) {
                    *rhs.entry((l, r, k + j)).or_default() += 1;
                }
                lhs.retain(|_, v| *v % 2 == 1);
                rhs.retain(|_, v| *v % 2 == 1);
                assert_eq!(lhs.keys().collect::<Vec<_>>(), rhs.keys().collect::<Vec<_>>());
            }
        }
    }
}
