//! Dense complex matrix exponential.
//!
//! Degree-13 Padé approximant with scaling and squaring: `A` is scaled by
//! `2^-s` so that `‖A‖₁ ≤ θ₁₃`, exponentiated, then squared `s` times.

use nalgebra::DMatrix;

use crate::C64;

/// Largest 1-norm for which the [13/13] Padé approximant is accurate to unit
/// round-off in double precision.
const THETA_13: f64 = 5.371920351148152;

const PADE_13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

/// Maximum absolute column sum.
pub fn one_norm(a: &DMatrix<C64>) -> f64 {
    a.column_iter()
        .map(|col| col.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// `exp(A)` for a square complex matrix.
pub fn expm(a: &DMatrix<C64>) -> DMatrix<C64> {
    assert!(a.is_square(), "expm needs a square matrix");
    let n = a.nrows();
    if n == 0 {
        return a.clone();
    }
    let norm = one_norm(a);
    let squarings = if norm > THETA_13 {
        (norm / THETA_13).log2().ceil() as i32
    } else {
        0
    };
    let a = a * C64::new(2f64.powi(-squarings), 0.0);

    let b = PADE_13.map(|x| C64::new(x, 0.0));
    let id = DMatrix::<C64>::identity(n, n);
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;

    let u_inner = &a6 * (&a6 * b[13] + &a4 * b[11] + &a2 * b[9]) + &a6 * b[7] + &a4 * b[5] + &a2 * b[3] + &id * b[1];
    let u = &a * u_inner;
    let v = &a6 * (&a6 * b[12] + &a4 * b[10] + &a2 * b[8]) + &a6 * b[6] + &a4 * b[4] + &a2 * b[2] + &id * b[0];

    let mut r = (&v - &u)
        .lu()
        .solve(&(&v + &u))
        .expect("Padé denominator is nonsingular after scaling");
    for _ in 0..squarings {
        r = &r * &r;
    }
    r
}

/// Largest entrywise modulus of `A†A − I`.
pub fn unitarity_defect(u: &DMatrix<C64>) -> f64 {
    let n = u.ncols();
    let gram = u.adjoint() * u - DMatrix::<C64>::identity(n, n);
    gram.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Largest entrywise modulus of `A − B`.
pub fn max_abs_diff(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch");
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn real(rows: usize, data: &[f64]) -> DMatrix<C64> {
        DMatrix::from_row_iterator(rows, rows, data.iter().map(|&x| C64::new(x, 0.0)))
    }

    #[test]
    fn zero_and_empty() {
        let z = DMatrix::<C64>::zeros(3, 3);
        assert_eq!(max_abs_diff(&expm(&z), &DMatrix::identity(3, 3)), 0.0);
        assert_eq!(expm(&DMatrix::<C64>::zeros(0, 0)).len(), 0);
    }

    #[test]
    fn diagonal_matches_scalar_exp() {
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            C64::new(-3.0, 0.0),
            C64::new(0.0, 1.0),
            C64::new(7.5, -2.0),
        ]));
        let e = expm(&d);
        for i in 0..3 {
            let want = d[(i, i)].exp();
            assert!((e[(i, i)] - want).norm() < 1e-12 * want.norm().max(1.0));
        }
    }

    #[test]
    fn rotation_generator() {
        // exp(t [[0, 1], [-1, 0]]) = [[cos t, sin t], [-sin t, cos t]]
        for &t in &[0.1, 1.0, 3.0, 40.0] {
            let e = expm(&real(2, &[0.0, t, -t, 0.0]));
            let want = real(2, &[t.cos(), t.sin(), -t.sin(), t.cos()]);
            assert!(max_abs_diff(&e, &want) < 1e-12, "t = {t}");
        }
    }

    #[test]
    fn hyperbolic_generator_with_heavy_scaling() {
        // exp(t [[0, 1], [1, 0]]) = [[cosh t, sinh t], [sinh t, cosh t]]
        let t = 12.0f64;
        let e = expm(&real(2, &[0.0, t, t, 0.0]));
        let rel = (e[(0, 0)].re - t.cosh()).abs() / t.cosh();
        assert!(rel < 1e-12);
    }

    #[test]
    fn nilpotent_series_terminates() {
        let n = real(3, &[0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0]);
        let want = real(3, &[1.0, 1.0, 0.5, 0.0, 1.0, 1.0, 0.0, 0.0, 1.0]);
        assert!(max_abs_diff(&expm(&n), &want) < 1e-14);
    }

    fn square(n: usize, scale: f64) -> impl Strategy<Value = DMatrix<C64>> {
        prop::collection::vec((-scale..scale, -scale..scale), n * n)
            .prop_map(move |v| DMatrix::from_iterator(n, n, v.into_iter().map(|(r, i)| C64::new(r, i))))
    }

    proptest! {
        #[test]
        fn agrees_with_nalgebra(a in square(5, 2.0)) {
            let ours = expm(&a);
            let theirs = a.clone().exp();
            let scale = one_norm(&theirs).max(1.0);
            prop_assert!(max_abs_diff(&ours, &theirs) < 1e-10 * scale);
        }

        #[test]
        fn inverse_is_exp_of_negation(a in square(4, 3.0)) {
            let prod = expm(&a) * expm(&(-&a));
            prop_assert!(max_abs_diff(&prod, &DMatrix::identity(4, 4)) < 1e-9);
        }

        #[test]
        fn antihermitian_gives_unitary(a in square(6, 4.0)) {
            let h = (&a - a.adjoint()) * C64::new(0.5, 0.0);
            prop_assert!(unitarity_defect(&expm(&h)) < 1e-12);
        }
    }
}
