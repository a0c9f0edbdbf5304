//! Relative homology actions `A_ij`, `B_ij` on the top homology of the
//! orientable two-component model, in the basis `(a, b, c, d)` fixed by
//! [`GoldenPattern::l_ori`].

use crate::algebra::F2Matrix;

use super::GoldenPattern;

fn table(images: &[&[usize]]) -> F2Matrix {
    let mut m = F2Matrix::zeros(4, 4);
    for (j, tgts) in images.iter().enumerate() {
        for &i in *tgts {
            m.set(i, j, true);
        }
    }
    m
}

/// The stated tables, as `(name, matrix)`; column `j` is the image of basis vector `j`.
pub fn relative_tables() -> Vec<(&'static str, F2Matrix)> {
    vec![
        ("B23", table(&[&[1], &[0], &[3], &[2]])),
        ("A12", table(&[&[2], &[3], &[0], &[1]])),
        ("A23", table(&[&[1, 2], &[0, 3], &[3], &[2]])),
        ("A13", table(&[&[1], &[0], &[0, 3], &[1, 2]])),
    ]
}

/// Checks `A23 = B23 + Phi2 + Phi3` and `A13 = A12 + A23`.
pub fn relative_identities() -> Vec<(&'static str, bool)> {
    let t = relative_tables();
    let get = |n: &str| t.iter().find(|(k, _)| *k == n).map(|(_, m)| m.clone()).expect("known table");
    let g = GoldenPattern::l_ori();
    let phi2 = g.matrix("Phi2").expect("golden Phi2");
    let phi3 = g.matrix("Phi3").expect("golden Phi3");
    vec![
        ("A23 = B23 + Phi2 + Phi3", get("A23") == get("B23").add(&phi2).add(&phi3)),
        ("A13 = A12 + A23", get("A13") == get("A12").add(&get("A23"))),
    ]
}
