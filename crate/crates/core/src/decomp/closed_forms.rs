//! Closed-form mixing coefficients for the four highest orbital channels,
//! ℓ = N−1, N−2, N−3, N−4, transcribed once and kept separate from the
//! computation they are checked against.

use crate::exact::{BPoly, Rational};

/// One transcribed row: the channel ℓ and its map K -> c_{Kℓ}(b).
#[derive(Debug, Clone)]
pub struct ClosedFormRow {
    pub ell: usize,
    /// (K, coefficient), highest K first as transcribed.
    pub entries: Vec<(usize, BPoly)>,
}

/// Rows available at the given principal quantum number (ℓ ≥ 0 only).
pub fn closed_form_rows(n_principal: usize) -> Vec<ClosedFormRow> {
    let n = n_principal as i64;
    let b = BPoly::variable();
    let b2 = &b * &b;
    let b3 = &b2 * &b;
    let mut rows = Vec::new();

    // ℓ = N−1: single component with unit coefficient.
    rows.push(ClosedFormRow {
        ell: n_principal - 1,
        entries: vec![(n_principal - 1, BPoly::one())],
    });

    // ℓ = N−2: (2N−1)/(4(N−1)) on K=N−1, −b on K=N−2.
    if n_principal >= 2 {
        rows.push(ClosedFormRow {
            ell: n_principal - 2,
            entries: vec![
                (n_principal - 1, BPoly::constant(Rational::new(2 * n - 1, 4 * (n - 1)))),
                (n_principal - 2, -&b),
            ],
        });
    }

    // ℓ = N−3: (1/8)(2N−1)/(N−2), −(b/2)(N−1)/(N−2), +b²/2.
    if n_principal >= 3 {
        rows.push(ClosedFormRow {
            ell: n_principal - 3,
            entries: vec![
                (n_principal - 1, BPoly::constant(Rational::new(2 * n - 1, 8 * (n - 2)))),
                (n_principal - 2, b.scale(&Rational::new(-(n - 1), 2 * (n - 2)))),
                (n_principal - 3, b2.scale(&Rational::new(1, 2))),
            ],
        });
    }

    // ℓ = N−4: (1/32)(4(N−1)²−1)/((N−3)(N−2)),
    //          −(b/8)(2N−3)(N−1)/((N−2)(N−3)),
    //          +(b²/8)(2N−3)/(N−3),
    //          −(b/24)[4b²(N−2)+(2N−1)]/(N−2).
    if n_principal >= 4 {
        let top = 4 * (n - 1) * (n - 1) - 1;
        let last = &b3.scale(&Rational::new(-1, 6))
            + &b.scale(&Rational::new(-(2 * n - 1), 24 * (n - 2)));
        rows.push(ClosedFormRow {
            ell: n_principal - 4,
            entries: vec![
                (n_principal - 1, BPoly::constant(Rational::new(top, 32 * (n - 3) * (n - 2)))),
                (
                    n_principal - 2,
                    b.scale(&Rational::new(-(2 * n - 3) * (n - 1), 8 * (n - 2) * (n - 3))),
                ),
                (n_principal - 3, b2.scale(&Rational::new(2 * n - 3, 8 * (n - 3)))),
                (n_principal - 4, last),
            ],
        });
    }

    rows
}
